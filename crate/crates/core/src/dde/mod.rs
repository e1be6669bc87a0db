//! Method-of-steps integration of the constant-delay system.
//!
//! Steps use the Bogacki–Shampine 3(2) pair with first-same-as-last reuse.
//! The step size never exceeds τ, so every delayed lookup lands on the part of
//! the mesh that is already accepted and is served by cubic Hermite
//! interpolation. Derivative jumps propagated from the constant history are
//! left to the error controller.

mod classify;

pub use classify::{classify_longrun, LongRunKind, LongRunVerdict};

use alloc::vec::Vec;

use crate::math;
use crate::model::{rhs, ModelParams, StateVector};
use crate::{Error, Result};

pub const DEFAULT_REL_TOL: f64 = 1e-8;
pub const DEFAULT_ABS_TOL: f64 = 1e-10;

/// Initial data on `[-τ, 0]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HistorySpec {
    Constant(StateVector),
}

impl HistorySpec {
    pub fn value(&self, _t: f64) -> StateVector {
        match self {
            Self::Constant(s) => *s,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let Self::Constant(s) = self;
        if !s.is_finite() || s.min_component() < 0.0 {
            return Err(Error::InvalidArgument(
                "constant history must be finite and componentwise nonnegative",
            ));
        }
        Ok(())
    }
}

/// Integration settings beyond the two tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// If set, only the trailing `retain + τ` days of mesh are kept. Long
    /// classification runs use this to bound memory.
    pub retain: Option<f64>,
    /// Optional cap on the step size (in addition to τ).
    pub max_step: Option<f64>,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            retain: None,
            max_step: None,
        }
    }
}

/// Dense numerical solution.
///
/// Between mesh points the state is the cubic Hermite interpolant of the two
/// endpoint states and slopes. Before the first mesh point of a trajectory that
/// starts at 0 the history is returned.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    params: ModelParams,
    history: HistorySpec,
    times: Vec<f64>,
    states: Vec<StateVector>,
    slopes: Vec<StateVector>,
    steps_taken: usize,
    steps_rejected: usize,
}

impl Trajectory {
    /// A mesh supplied directly; mainly for tests and for tabulated data.
    pub fn from_mesh(
        params: ModelParams,
        history: HistorySpec,
        times: Vec<f64>,
        states: Vec<StateVector>,
        slopes: Vec<StateVector>,
    ) -> Result<Self> {
        if times.is_empty() || times.len() != states.len() || times.len() != slopes.len() {
            return Err(Error::InvalidArgument(
                "mesh times, states and slopes must be nonempty and of equal length",
            ));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(
                "mesh times must be strictly increasing",
            ));
        }
        Ok(Self {
            params,
            history,
            times,
            states,
            slopes,
            steps_taken: 0,
            steps_rejected: 0,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn tau(&self) -> f64 {
        self.params.tau
    }

    pub fn history(&self) -> &HistorySpec {
        &self.history
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn slopes(&self) -> &[StateVector] {
        &self.slopes
    }

    /// First mesh time.
    pub fn start(&self) -> f64 {
        self.times[0]
    }

    /// Last mesh time.
    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Earliest time at which [`Trajectory::sample`] succeeds.
    pub fn earliest(&self) -> f64 {
        if self.start() == 0.0 {
            -self.params.tau
        } else {
            self.start()
        }
    }

    pub fn final_state(&self) -> StateVector {
        self.states[self.states.len() - 1]
    }

    pub fn steps_taken(&self) -> usize {
        self.steps_taken
    }

    pub fn steps_rejected(&self) -> usize {
        self.steps_rejected
    }

    fn locate(&self, t: f64) -> Result<Located> {
        let (start, end) = (self.start(), self.end());
        if t < start {
            if start == 0.0 && t >= -self.params.tau {
                return Ok(Located::History);
            }
            return Err(Error::OutOfSpan {
                t,
                start: self.earliest(),
                end,
            });
        }
        if !(t <= end) {
            return Err(Error::OutOfSpan {
                t,
                start: self.earliest(),
                end,
            });
        }
        // index of the first mesh time strictly greater than t
        let upper = self.times.partition_point(|&s| s <= t);
        let i = upper - 1;
        if self.times[i] == t {
            return Ok(Located::Mesh(i));
        }
        Ok(Located::Interval(i))
    }

    /// Dense-output evaluation.
    pub fn sample(&self, t: f64) -> Result<StateVector> {
        Ok(match self.locate(t)? {
            Located::History => self.history.value(t),
            Located::Mesh(i) => self.states[i],
            Located::Interval(i) => self.hermite(i, t),
        })
    }

    /// Time derivative of the dense output.
    pub fn sample_derivative(&self, t: f64) -> Result<StateVector> {
        Ok(match self.locate(t)? {
            Located::History => StateVector::ZERO,
            Located::Mesh(i) => self.slopes[i],
            Located::Interval(i) => self.hermite_derivative(i, t),
        })
    }

    fn hermite(&self, i: usize, t: f64) -> StateVector {
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        hermite_value(
            t0,
            t1,
            &self.states[i],
            &self.slopes[i],
            &self.states[i + 1],
            &self.slopes[i + 1],
            t,
        )
    }

    fn hermite_derivative(&self, i: usize, t: f64) -> StateVector {
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let th = (t - t0) / h;
        let (y0, f0, y1, f1) = (
            self.states[i],
            self.slopes[i],
            self.states[i + 1],
            self.slopes[i + 1],
        );
        let g = (6.0 * th * th - 6.0 * th) / h;
        let g0 = 3.0 * th * th - 4.0 * th + 1.0;
        let g1 = 3.0 * th * th - 2.0 * th;
        (y0 - y1) * g + f0 * g0 + f1 * g1
    }

    /// `n + 1` equally spaced samples over `[start, end]`.
    pub fn uniform_samples(&self, n: usize) -> Vec<(f64, StateVector)> {
        let (a, b) = (self.start(), self.end());
        let n = n.max(1);
        (0..=n)
            .map(|i| {
                let t = if i == n {
                    b
                } else {
                    a + (b - a) * (i as f64) / (n as f64)
                };
                (t, self.sample(t).expect("uniform sample inside span"))
            })
            .collect()
    }

    /// Samples at `start, start + dt, ...` up to and including `end`.
    pub fn samples_every(&self, dt: f64) -> Result<Vec<(f64, StateVector)>> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument("sample spacing must be positive"));
        }
        let (a, b) = (self.start(), self.end());
        let n = math::ceil((b - a) / dt * (1.0 - 1e-12)) as usize;
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let t = a + dt * i as f64;
            out.push((t, self.sample(t)?));
        }
        out.push((b, self.final_state()));
        Ok(out)
    }
}

enum Located {
    History,
    Mesh(usize),
    Interval(usize),
}

fn hermite_value(
    t0: f64,
    t1: f64,
    y0: &StateVector,
    f0: &StateVector,
    y1: &StateVector,
    f1: &StateVector,
    t: f64,
) -> StateVector {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    *y0 * h00 + *f0 * (h10 * h) + *y1 * h01 + *f1 * (h11 * h)
}

/// Integrates over `[0, t_end]` with the given tolerances.
pub fn integrate(
    params: &ModelParams,
    history: HistorySpec,
    t_end: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Trajectory> {
    integrate_with(
        params,
        history,
        t_end,
        &IntegrateOptions {
            rel_tol,
            abs_tol,
            ..IntegrateOptions::default()
        },
    )
}

pub fn integrate_with(
    params: &ModelParams,
    history: HistorySpec,
    t_end: f64,
    options: &IntegrateOptions,
) -> Result<Trajectory> {
    params.validate()?;
    history.validate()?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidArgument("t_end must be positive and finite"));
    }
    let in_unit = |x: f64| x > 0.0 && x < 1.0;
    if !in_unit(options.rel_tol) || !in_unit(options.abs_tol) {
        return Err(Error::InvalidArgument("tolerances must lie in (0, 1)"));
    }
    if let Some(r) = options.retain {
        if !(r > 0.0) {
            return Err(Error::InvalidArgument("retain window must be positive"));
        }
    }

    let tau = params.tau;
    let mut hmax = t_end;
    if tau > 0.0 {
        hmax = hmax.min(tau);
    }
    if let Some(m) = options.max_step {
        if !(m > 0.0) {
            return Err(Error::InvalidArgument("max_step must be positive"));
        }
        hmax = hmax.min(m);
    }

    let y0 = history.value(0.0);
    let f0 = rhs(params, &y0, &delayed_start(&history, tau, &y0));
    let mut traj = Trajectory {
        params: *params,
        history,
        times: alloc::vec![0.0],
        states: alloc::vec![y0],
        slopes: alloc::vec![f0],
        steps_taken: 0,
        steps_rejected: 0,
    };

    let (rel, abs) = (options.rel_tol, options.abs_tol);
    let mut t = 0.0;
    let mut y = y0;
    let mut f = f0;
    let mut h = initial_step(&y, &f, rel, abs).min(hmax);

    while t < t_end {
        let hmin = 16.0 * f64::EPSILON * t.abs().max(1.0);
        if h < hmin {
            return Err(Error::StepSizeUnderflow { t });
        }
        let last = t + h >= t_end || t_end - (t + h) < hmin;
        if last {
            h = t_end - t;
        }

        let k1 = f;
        let y2 = y + k1 * (0.5 * h);
        let k2 = rhs(params, &y2, &delayed(&traj, t, t + 0.5 * h, &y2));
        let y3 = y + k2 * (0.75 * h);
        let k3 = rhs(params, &y3, &delayed(&traj, t, t + 0.75 * h, &y3));
        let t_new = if last { t_end } else { t + h };
        let y_new = y + (k1 * (2.0 / 9.0) + k2 * (1.0 / 3.0) + k3 * (4.0 / 9.0)) * h;
        let k4 = rhs(params, &y_new, &delayed(&traj, t, t_new, &y_new));
        let err =
            (k1 * (-5.0 / 72.0) + k2 * (1.0 / 12.0) + k3 * (1.0 / 9.0) + k4 * (-1.0 / 8.0)) * h;

        let mut norm = 0.0f64;
        for i in 0..5 {
            let scale = (rel * math::abs(y[i]).max(math::abs(y_new[i]))).max(abs);
            norm = norm.max(math::abs(err[i]) / scale);
        }
        if !norm.is_finite() {
            traj.steps_rejected += 1;
            h *= 0.2;
            continue;
        }

        if norm <= 1.0 {
            t = t_new;
            y = y_new;
            f = k4;
            traj.times.push(t);
            traj.states.push(y);
            traj.slopes.push(f);
            traj.steps_taken += 1;
            if let Some(r) = options.retain {
                prune(&mut traj, t - r - tau);
            }
            let factor = if norm == 0.0 {
                5.0
            } else {
                (0.9 * math::cbrt(1.0 / norm)).clamp(0.2, 5.0)
            };
            h = (h * factor).min(hmax);
        } else {
            traj.steps_rejected += 1;
            h *= (0.9 * math::cbrt(1.0 / norm)).clamp(0.2, 1.0);
        }
    }

    if let Some(r) = options.retain {
        prune_exact(&mut traj, t_end - r - tau);
    }
    Ok(traj)
}

fn delayed_start(history: &HistorySpec, tau: f64, y0: &StateVector) -> StateVector {
    if tau > 0.0 {
        history.value(-tau)
    } else {
        *y0
    }
}

/// Delayed state for a stage at time `stage` of the step starting at `t`.
fn delayed(traj: &Trajectory, t: f64, stage: f64, current: &StateVector) -> StateVector {
    let tau = traj.params.tau;
    if tau == 0.0 {
        return *current;
    }
    // h <= τ keeps the lookup at or before t; the clamp absorbs rounding
    let s = (stage - tau).min(t);
    traj.sample(s).expect("delayed lookup inside accepted mesh")
}

fn initial_step(y: &StateVector, f: &StateVector, rel: f64, abs: f64) -> f64 {
    let mut d0 = 0.0f64;
    let mut d1 = 0.0f64;
    for i in 0..5 {
        let scale = rel * math::abs(y[i]) + abs;
        d0 = d0.max(math::abs(y[i]) / scale);
        d1 = d1.max(math::abs(f[i]) / scale);
    }
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    }
}

/// Drops mesh points well before `keep_from`; amortised by only pruning when
/// at least half the mesh is disposable.
fn prune(traj: &mut Trajectory, keep_from: f64) {
    let cut = traj
        .times
        .partition_point(|&s| s < keep_from)
        .saturating_sub(1);
    if cut >= 1024 && cut * 2 >= traj.times.len() {
        drain_front(traj, cut);
    }
}

fn prune_exact(traj: &mut Trajectory, keep_from: f64) {
    let cut = traj
        .times
        .partition_point(|&s| s < keep_from)
        .saturating_sub(1);
    if cut > 0 {
        drain_front(traj, cut);
    }
}

fn drain_front(traj: &mut Trajectory, n: usize) {
    traj.times.drain(..n);
    traj.states.drain(..n);
    traj.slopes.drain(..n);
}
