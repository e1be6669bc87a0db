//! Lyapunov functionals for the disease-free and single-infection states,
//! evaluated along numerical trajectories.
//!
//! Rates are central differences of the evaluated functional, so they check
//! the sign claims independently of any hand-derived derivative. The closed
//! forms are provided separately for cross-checks.

use alloc::vec::Vec;

use crate::dde::Trajectory;
use crate::math;
use crate::model::{equilibria, reproduction_numbers, EquilibriumKind, ModelParams, StateVector};
use crate::quadrature;
use crate::{Error, Result};

/// Difference step (days).
pub const RATE_STEP: f64 = 1e-4;
const RICHARDSON_TOL: f64 = 1e-6;
const QUAD_TOL: f64 = 1e-10;
const POSITIVITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovSample {
    pub t: f64,
    pub value: f64,
    /// Central difference with step [`RATE_STEP`].
    pub rate: f64,
    /// Sum of the absolute values of the functional's terms.
    pub scale: f64,
    /// Whether the step-`h` and step-`h/2` rates agree to 1e-6 relative.
    pub richardson_ok: bool,
    /// `|rate(h) − rate(h/2)|`, an estimate of the truncation error in `rate`.
    pub rate_error: f64,
}

/// `∫_a^b f(state(η)) dη` on the dense output, split at mesh points so each
/// piece sees a single cubic.
pub fn memory_integral<F>(traj: &Trajectory, a: f64, b: f64, f: F) -> Result<f64>
where
    F: Fn(&StateVector) -> f64,
{
    if a > b {
        return Ok(-memory_integral(traj, b, a, f)?);
    }
    if a < traj.earliest() || b > traj.end() {
        return Err(Error::TrajectoryTooShort {
            need_start: a,
            need_end: b,
            start: traj.earliest(),
            end: traj.end(),
        });
    }
    let mut cuts: Vec<f64> = alloc::vec![a];
    let times = traj.times();
    let first = times.partition_point(|&s| s <= a);
    let last = times.partition_point(|&s| s < b);
    cuts.extend_from_slice(&times[first..last]);
    cuts.push(b);
    let pieces = (cuts.len() - 1).max(1) as f64;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let r = quadrature::integrate(
            |s| f(&traj.sample(s).expect("inside checked span")),
            w[0],
            w[1],
            QUAD_TOL / pieces,
        );
        total += r.value;
    }
    Ok(total)
}

fn check_span(traj: &Trajectory, t: f64, h: f64) -> Result<()> {
    let tau = traj.tau();
    let need_start = t - tau - h;
    let need_end = t + h;
    if need_start < traj.earliest() || need_end > traj.end() {
        return Err(Error::TrajectoryTooShort {
            need_start,
            need_end,
            start: traj.earliest(),
            end: traj.end(),
        });
    }
    Ok(())
}

/// A functional split into pointwise terms and a memory integrand.
trait Functional {
    /// Individual pointwise terms at one instant.
    fn terms(&self, s: &StateVector) -> Result<[f64; 5]>;
    /// Weighted integrand of the memory term.
    fn memory(&self, s: &StateVector) -> f64;
}

fn positive(v: f64, t: f64) -> Result<f64> {
    if v < POSITIVITY_FLOOR {
        Err(Error::NonpositiveState { t })
    } else {
        Ok(v)
    }
}

fn evaluate<F: Functional>(f: &F, traj: &Trajectory, t: f64) -> Result<LyapunovSample> {
    let h = RATE_STEP;
    check_span(traj, t, h)?;
    let tau = traj.tau();

    let now = traj.sample(t)?;
    let terms = f.terms(&now)?;
    let memory = memory_integral(traj, t - tau, t, |s| f.memory(s))?;
    let value = terms.iter().sum::<f64>() + memory;
    let scale = terms.iter().map(|x| math::abs(*x)).sum::<f64>() + math::abs(memory);

    let rate_with = |step: f64| -> Result<f64> {
        let up = f.terms(&traj.sample(t + step)?)?;
        let dn = f.terms(&traj.sample(t - step)?)?;
        let pointwise: f64 = up.iter().zip(&dn).map(|(u, d)| u - d).sum();
        // shifted-window difference written as two short integrals
        let head = memory_integral(traj, t - step, t + step, |s| f.memory(s))?;
        let tail = memory_integral(traj, t - tau - step, t - tau + step, |s| f.memory(s))?;
        Ok((pointwise + head - tail) / (2.0 * step))
    };
    let rate = rate_with(h)?;
    let half = rate_with(0.5 * h)?;
    let rate_error = math::abs(rate - half);
    let richardson_ok = rate_error <= RICHARDSON_TOL * math::abs(rate).max(scale);

    Ok(LyapunovSample {
        t,
        value,
        rate,
        scale,
        richardson_ok,
        rate_error,
    })
}

struct DiseaseFree {
    e: f64,
    x0: f64,
    cy: f64,
    cv: f64,
    cw: f64,
    cm: f64,
}

impl DiseaseFree {
    fn new(p: &ModelParams) -> Self {
        let x0 = p.lambda / p.d;
        let e = p.survival();
        Self {
            e,
            x0,
            cy: x0,
            cv: p.a * x0 / p.k,
            cw: p.b * x0 / p.c,
            cm: x0 * p.beta * e,
        }
    }
}

impl Functional for DiseaseFree {
    fn terms(&self, s: &StateVector) -> Result<[f64; 5]> {
        let dx = s.x - self.x0;
        Ok([
            0.5 * self.e * dx * dx,
            self.cy * s.y,
            self.cy * s.z,
            self.cv * s.v,
            self.cw * s.w,
        ])
    }

    fn memory(&self, s: &StateVector) -> f64 {
        self.cm * s.x * s.v
    }
}

/// `V₀ = (e^{-aτ}/2)(x − λ/d)² + (λ/d)(y + z) + (aλ/dk) v + (bλ/cd) w
///       + (λβ/d) e^{-aτ} ∫_{t−τ}^{t} x v`.
pub fn v0_eval(params: &ModelParams, traj: &Trajectory, t: f64) -> Result<LyapunovSample> {
    evaluate(&DiseaseFree::new(params), traj, t)
}

/// Closed form of `dV₀/dt` at time `t`:
/// `−e^{-aτ}(x − λ/d)²(d + βv) − (apλ/dk)(1 − R₀) v − (bqλ/cd) w`.
pub fn v0_rate_closed_form(params: &ModelParams, traj: &Trajectory, t: f64) -> Result<f64> {
    let s = traj.sample(t)?;
    let p = params;
    let x0 = p.lambda / p.d;
    let r0 = reproduction_numbers(p).r0;
    let dx = s.x - x0;
    Ok(-p.survival() * dx * dx * (p.d + p.beta * s.v)
        - (p.a * p.p * x0 / p.k) * (1.0 - r0) * s.v
        - (p.b * p.q * x0 / p.c) * s.w)
}

struct SingleInfection {
    e: f64,
    xs: f64,
    ys: f64,
    vs: f64,
    a_over_k: f64,
    b_over_c: f64,
    weight: f64,
}

impl SingleInfection {
    fn new(p: &ModelParams) -> Result<Self> {
        let es = equilibria(p)[EquilibriumKind::SingleInfection as usize];
        if !(reproduction_numbers(p).r0 > 1.0) {
            return Err(Error::InadmissibleEquilibrium(
                EquilibriumKind::SingleInfection,
            ));
        }
        let e = p.survival();
        let StateVector { x, y, v, .. } = es.point;
        Ok(Self {
            e,
            xs: x,
            ys: y,
            vs: v,
            a_over_k: p.a / p.k,
            b_over_c: p.b / p.c,
            weight: p.beta * x * v * e,
        })
    }
}

impl Functional for SingleInfection {
    fn terms(&self, s: &StateVector) -> Result<[f64; 5]> {
        let x = positive(s.x, f64::NAN)?;
        let y = positive(s.y, f64::NAN)?;
        let v = positive(s.v, f64::NAN)?;
        Ok([
            self.e * (x - self.xs * math::ln(x)),
            y - self.ys * math::ln(y),
            s.z,
            self.a_over_k * (v - self.vs * math::ln(v)),
            self.b_over_c * s.w,
        ])
    }

    fn memory(&self, s: &StateVector) -> f64 {
        let phi = s.x * s.v / (self.xs * self.vs);
        // nonpositive arguments are rejected before integration
        self.weight * (phi - math::ln(phi.max(f64::MIN_POSITIVE)))
    }
}

fn check_positive_span(traj: &Trajectory, a: f64, b: f64) -> Result<()> {
    let mut checks: Vec<f64> = alloc::vec![a, b];
    let times = traj.times();
    let first = times.partition_point(|&s| s < a);
    let last = times.partition_point(|&s| s <= b);
    checks.extend_from_slice(&times[first..last]);
    for t in checks {
        let s = traj.sample(t)?;
        if s.x < POSITIVITY_FLOOR || s.y < POSITIVITY_FLOOR || s.v < POSITIVITY_FLOOR {
            return Err(Error::NonpositiveState { t });
        }
    }
    Ok(())
}

/// `V_s = V₁ + βx_s v_s e^{-aτ} V₂` with
/// `V₁ = e^{-aτ}(x − x_s ln x) + (y − y_s ln y) + z + (a/k)(v − v_s ln v) + (b/c) w`
/// and `V₂ = ∫_{t−τ}^{t} (φ − ln φ)`, `φ = xv/(x_s v_s)`.
///
/// `V₁` is used verbatim, without the constants that would make it vanish at
/// the equilibrium; only its changes matter.
pub fn vs_eval(params: &ModelParams, traj: &Trajectory, t: f64) -> Result<LyapunovSample> {
    let f = SingleInfection::new(params)?;
    check_span(traj, t, RATE_STEP)?;
    check_positive_span(traj, t - traj.tau() - RATE_STEP, t + RATE_STEP)?;
    evaluate(&f, traj, t).map_err(|e| match e {
        Error::NonpositiveState { .. } => Error::NonpositiveState { t },
        other => other,
    })
}

/// `W = 3 − x_s/x − y v_s/(y_s v) − y_s x_τ v_τ/(y x_s v_s) + ln(x_τ v_τ/(x v))`.
pub fn w_term(params: &ModelParams, current: &StateVector, delayed: &StateVector) -> Result<f64> {
    let f = SingleInfection::new(params)?;
    for v in [current.x, current.y, current.v, delayed.x, delayed.v] {
        positive(v, f64::NAN)?;
    }
    let r = [
        f.xs / current.x,
        current.y * f.vs / (f.ys * current.v),
        f.ys * delayed.x * delayed.v / (current.y * f.xs * f.vs),
    ];
    Ok(3.0 - r.iter().sum::<f64>() + r.iter().map(|x| math::ln(*x)).sum::<f64>())
}

/// Closed form of `dV_s/dt`:
/// `d x_s e^{-aτ}(2 − x_s/x − x/x_s) + (αdp/βk)(R₀ − R₁) w + βx_s v_s e^{-aτ} W`.
pub fn vs_rate_closed_form(params: &ModelParams, traj: &Trajectory, t: f64) -> Result<f64> {
    let f = SingleInfection::new(params)?;
    let p = params;
    let now = traj.sample(t)?;
    let past = traj.sample(t - p.tau)?;
    let th = reproduction_numbers(p);
    let x = positive(now.x, t)?;
    Ok(p.d * f.xs * f.e * (2.0 - f.xs / x - x / f.xs)
        + p.alpha * p.d * p.p / (p.beta * p.k) * (th.r0 - th.r1) * now.w
        + f.weight * w_term(p, &now, &past).map_err(|_| Error::NonpositiveState { t })?)
}

/// `n − Σ bᵢ/aᵢ + ln Π bᵢ/aᵢ`, which is never positive.
pub fn log_mean_inequality(a_list: &[f64], b_list: &[f64]) -> Result<f64> {
    if a_list.is_empty() || a_list.len() != b_list.len() {
        return Err(Error::InvalidArgument(
            "lists must be nonempty and of equal length",
        ));
    }
    if a_list
        .iter()
        .chain(b_list)
        .any(|v| !(*v > 0.0 && v.is_finite()))
    {
        return Err(Error::InvalidArgument(
            "entries must be positive and finite",
        ));
    }
    let mut total = a_list.len() as f64;
    for (a, b) in a_list.iter().zip(b_list) {
        let r = b / a;
        total += math::ln(r) - r;
    }
    Ok(total)
}
