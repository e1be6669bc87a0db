//! Model parameters, the delayed vector field, thresholds and equilibria.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, Mul, Sub};

use crate::dde::Trajectory;
use crate::math;
use crate::{Error, Result};

/// The ten rate constants of the model plus the eclipse-phase delay.
///
/// Units are per day and per mm³ throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Production rate of uninfected cells.
    pub lambda: f64,
    /// Death rate of uninfected cells.
    pub d: f64,
    /// Infection rate by the pathogen virus.
    pub beta: f64,
    /// Death rate of single-infected cells.
    pub a: f64,
    /// Infection rate of infected cells by the recombinant virus.
    pub alpha: f64,
    /// Death rate of double-infected cells.
    pub b: f64,
    /// Pathogen burst rate per infected cell.
    pub k: f64,
    /// Pathogen clearance rate.
    pub p: f64,
    /// Recombinant burst rate per double-infected cell.
    pub c: f64,
    /// Recombinant clearance rate.
    pub q: f64,
    /// Eclipse-phase delay (days).
    pub tau: f64,
}

impl ModelParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda: f64,
        d: f64,
        beta: f64,
        a: f64,
        alpha: f64,
        b: f64,
        k: f64,
        p: f64,
        c: f64,
        q: f64,
        tau: f64,
    ) -> Result<Self> {
        let params = Self {
            lambda,
            d,
            beta,
            a,
            alpha,
            b,
            k,
            p,
            c,
            q,
            tau,
        };
        params.validate()?;
        Ok(params)
    }

    /// Reference parameter set used throughout the test-suite and the
    /// example configuration: λ=1, d=1/180, α=β=1/260, a=0.5, b=2,
    /// p=q=3, k=80, c=1800.
    pub fn reference(tau: f64) -> Self {
        Self {
            lambda: 1.0,
            d: 1.0 / 180.0,
            beta: 1.0 / 260.0,
            a: 0.5,
            alpha: 1.0 / 260.0,
            b: 2.0,
            k: 80.0,
            p: 3.0,
            c: 1800.0,
            q: 3.0,
            tau,
        }
    }

    pub fn with_tau(&self, tau: f64) -> Self {
        Self { tau, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.named_rates() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    requirement: "finite and strictly positive",
                    value,
                });
            }
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "tau",
                requirement: "finite and nonnegative",
                value: self.tau,
            });
        }
        Ok(())
    }

    pub fn named_rates(&self) -> [(&'static str, f64); 10] {
        [
            ("lambda", self.lambda),
            ("d", self.d),
            ("beta", self.beta),
            ("a", self.a),
            ("alpha", self.alpha),
            ("b", self.b),
            ("k", self.k),
            ("p", self.p),
            ("c", self.c),
            ("q", self.q),
        ]
    }

    /// Probability of surviving the eclipse phase, `e^{-aτ}`.
    pub fn survival(&self) -> f64 {
        math::exp(-self.a * self.tau)
    }

    /// `kβλ/(adp)`: the reproduction number without eclipse-phase losses.
    pub fn r0_undelayed(&self) -> f64 {
        self.k * self.beta * self.lambda / (self.a * self.d * self.p)
    }

    /// `R₁ = 1 + βbkq/(αcdp)`; does not depend on the delay.
    pub fn r1(&self) -> f64 {
        1.0 + self.beta * self.b * self.k * self.q / (self.alpha * self.c * self.d * self.p)
    }

    /// Minimum decay rate appearing in the boundedness estimate.
    pub fn boundedness_rate(&self) -> f64 {
        self.d
            .min(self.a / 2.0)
            .min(self.b / 2.0)
            .min(self.p)
            .min(self.q)
    }
}

/// Cell and virion densities at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub v: f64,
    pub w: f64,
}

impl StateVector {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64, v: f64, w: f64) -> Self {
        Self { x, y, z, v, w }
    }

    pub const fn from_array(a: [f64; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub const fn to_array(self) -> [f64; 5] {
        [self.x, self.y, self.z, self.v, self.w]
    }

    pub fn map(self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_array(self.to_array().map(f))
    }

    pub fn zip_map(self, other: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let (a, b) = (self.to_array(), other.to_array());
        Self::from_array(core::array::from_fn(|i| f(a[i], b[i])))
    }

    pub fn max_abs(self) -> f64 {
        self.to_array()
            .iter()
            .fold(0.0, |m, v| m.max(math::abs(*v)))
    }

    pub fn min_component(self) -> f64 {
        self.to_array().iter().fold(f64::INFINITY, |m, v| m.min(*v))
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

impl Add for StateVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for StateVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for StateVector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.map(|a| a * rhs)
    }
}

impl Index<usize> for StateVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            3 => &self.v,
            4 => &self.w,
            _ => panic!("state index {i} out of range"),
        }
    }
}

/// Right-hand side of the delayed system. `delayed` is the state at `t - τ`.
pub fn rhs(params: &ModelParams, current: &StateVector, delayed: &StateVector) -> StateVector {
    let ModelParams {
        lambda,
        d,
        beta,
        a,
        alpha,
        b,
        k,
        p,
        c,
        q,
        ..
    } = *params;
    let StateVector { x, y, z, v, w } = *current;
    let infection = alpha * w * y;
    StateVector {
        x: lambda - d * x - beta * x * v,
        y: beta * params.survival() * delayed.x * delayed.v - a * y - infection,
        z: infection - b * z,
        v: k * y - p * v,
        w: c * z - q * w,
    }
}

/// Partial derivatives of [`rhs`] with respect to the current and delayed
/// states, evaluated at `point` (used for both arguments).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linearization {
    pub current: [[f64; 5]; 5],
    pub delayed: [[f64; 5]; 5],
}

pub fn linearization(params: &ModelParams, point: &StateVector) -> Linearization {
    let ModelParams {
        d,
        beta,
        a,
        alpha,
        b,
        k,
        p,
        c,
        q,
        ..
    } = *params;
    let StateVector { x, y, v, w, .. } = *point;
    let e = params.survival();
    let current = [
        [-(d + beta * v), 0.0, 0.0, -beta * x, 0.0],
        [0.0, -(a + alpha * w), 0.0, 0.0, -alpha * y],
        [0.0, alpha * w, -b, 0.0, alpha * y],
        [0.0, k, 0.0, -p, 0.0],
        [0.0, 0.0, c, 0.0, -q],
    ];
    let mut delayed = [[0.0; 5]; 5];
    delayed[1][0] = beta * e * v;
    delayed[1][3] = beta * e * x;
    Linearization { current, delayed }
}

/// Reproduction-number thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSet {
    /// Basic reproduction number `kβλe^{-aτ}/(adp)`.
    pub r0: f64,
    /// Invasion number of the recombinant at the single-infection state.
    pub rd: f64,
    /// Value of `r0` at which the double-infection state appears.
    pub r1: f64,
}

pub fn reproduction_numbers(params: &ModelParams) -> ThresholdSet {
    let r0 = params.r0_undelayed() * params.survival();
    let ratio = params.alpha * params.c * params.d * params.p
        / (params.beta * params.b * params.k * params.q);
    ThresholdSet {
        r0,
        rd: ratio * (r0 - 1.0),
        r1: params.r1(),
    }
}

/// Delay at which `R₀` equals `target`, or `None` when no nonnegative delay
/// achieves it (`R₀` is strictly decreasing in the delay).
pub fn threshold_delay(params: &ModelParams, target: f64) -> Option<f64> {
    if !(target > 0.0) {
        return None;
    }
    let ratio = params.r0_undelayed() / target;
    (ratio >= 1.0).then(|| math::ln(ratio) / params.a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EquilibriumKind {
    DiseaseFree,
    SingleInfection,
    DoubleInfection,
}

impl EquilibriumKind {
    /// Short label used in reports: `E0`, `E_s` or `E_d`.
    pub fn label(self) -> &'static str {
        match self {
            Self::DiseaseFree => "E0",
            Self::SingleInfection => "E_s",
            Self::DoubleInfection => "E_d",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "E0" | "E_0" => Some(Self::DiseaseFree),
            "E_s" | "Es" => Some(Self::SingleInfection),
            "E_d" | "Ed" => Some(Self::DoubleInfection),
            _ => None,
        }
    }
}

impl fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::DiseaseFree => "disease-free",
            Self::SingleInfection => "single-infection",
            Self::DoubleInfection => "double-infection",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub kind: EquilibriumKind,
    pub point: StateVector,
    /// All coordinates nonnegative (boundary cases count as admissible).
    pub admissible: bool,
}

/// The three closed-form equilibria, in the order E₀, E_s, E_d.
pub fn equilibria(params: &ModelParams) -> [Equilibrium; 3] {
    let ModelParams {
        lambda,
        d,
        beta,
        a,
        alpha,
        b,
        k,
        p,
        c,
        q,
        ..
    } = *params;
    let e = params.survival();
    let th = reproduction_numbers(params);

    let disease_free = Equilibrium {
        kind: EquilibriumKind::DiseaseFree,
        point: StateVector::new(lambda / d, 0.0, 0.0, 0.0, 0.0),
        admissible: true,
    };

    let excess = k * beta * lambda * e - a * d * p;
    let single = Equilibrium {
        kind: EquilibriumKind::SingleInfection,
        point: StateVector::new(
            a * p / (beta * k * e),
            excess / (beta * a * k),
            0.0,
            excess / (beta * a * p),
            0.0,
        ),
        admissible: th.r0 >= 1.0,
    };

    let denom = beta * b * k * q + alpha * c * d * p;
    let surplus = alpha * beta * lambda * c * k * e - beta * a * b * k * q - alpha * a * c * d * p;
    let double = Equilibrium {
        kind: EquilibriumKind::DoubleInfection,
        point: StateVector::new(
            lambda * alpha * c * p / denom,
            b * q / (alpha * c),
            q * surplus / (alpha * c * denom),
            b * k * q / (alpha * c * p),
            surplus / (alpha * denom),
        ),
        admissible: th.r0 >= th.r1,
    };

    [disease_free, single, double]
}

pub fn equilibrium(params: &ModelParams, kind: EquilibriumKind) -> Equilibrium {
    equilibria(params)[kind as usize]
}

/// One evaluation of the boundedness functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSample {
    pub t: f64,
    /// `B(t)`.
    pub value: f64,
    /// Central finite difference of `B`.
    pub rate: f64,
    /// `ck e^{-aτ} λ − m B(t)`.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundednessReport {
    /// `m = min{d, a/2, b/2, p, q}`.
    pub m: f64,
    /// Constant inflow term `ck e^{-aτ} λ`.
    pub inflow: f64,
    pub samples: Vec<BoundSample>,
    pub holds: bool,
}

const BOUND_STEP: f64 = 1e-4;
const BOUND_REL_TOL: f64 = 1e-6;

/// `B(t) = cke^{-aτ}x(t) + ck y(t+τ) + ck z(t+τ) + (ac/2) v(t+τ) + (bk/2) w(t+τ)`
pub fn boundedness_functional(
    params: &ModelParams,
    trajectory: &Trajectory,
    t: f64,
) -> Result<f64> {
    let ModelParams {
        a, b, c, k, tau, ..
    } = *params;
    let now = trajectory.sample(t)?;
    let ahead = trajectory.sample(t + tau)?;
    Ok(c * k * params.survival() * now.x
        + c * k * ahead.y
        + c * k * ahead.z
        + 0.5 * a * c * ahead.v
        + 0.5 * b * k * ahead.w)
}

/// Checks `dB/dt ≤ cke^{-aτ}λ − mB(t)` by central differences at each sample.
pub fn boundedness_certificate(
    params: &ModelParams,
    trajectory: &Trajectory,
    sample_times: &[f64],
) -> Result<BoundednessReport> {
    let m = params.boundedness_rate();
    let inflow = params.c * params.k * params.survival() * params.lambda;
    if sample_times.is_empty() {
        return Ok(BoundednessReport {
            m,
            inflow,
            samples: Vec::new(),
            holds: true,
        });
    }
    let lo = sample_times.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sample_times
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let need_start = lo - params.tau - BOUND_STEP;
    let need_end = hi + params.tau + BOUND_STEP;
    if need_start < trajectory.start() - params.tau || need_end > trajectory.end() {
        return Err(Error::TrajectoryTooShort {
            need_start,
            need_end,
            start: trajectory.start() - params.tau,
            end: trajectory.end(),
        });
    }

    let mut samples = Vec::with_capacity(sample_times.len());
    for &t in sample_times {
        let value = boundedness_functional(params, trajectory, t)?;
        let forward = boundedness_functional(params, trajectory, t + BOUND_STEP)?;
        let backward = boundedness_functional(params, trajectory, t - BOUND_STEP)?;
        let rate = (forward - backward) / (2.0 * BOUND_STEP);
        let bound = inflow - m * value;
        let scale = 1f64.max(inflow).max(m * value);
        samples.push(BoundSample {
            t,
            value,
            rate,
            bound,
            holds: rate <= bound + BOUND_REL_TOL * scale,
        });
    }
    let holds = samples.iter().all(|s| s.holds);
    Ok(BoundednessReport {
        m,
        inflow,
        samples,
        holds,
    })
}
