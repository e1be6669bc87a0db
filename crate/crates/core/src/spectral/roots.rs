//! Root location for quasi-polynomials: argument-principle counting and a
//! Newton census from a seed grid.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use super::QuasiPolynomial;
use crate::math;
use crate::{Error, Result};

pub const DEFAULT_SEED_SPACING: f64 = 0.25;

const MAX_JITTERS: u32 = 5;
const JITTER: f64 = 1e-6;
const NEAR_ROOT: f64 = 1e-10;
const MAX_DEPTH: u32 = 40;

const NEWTON_STEP_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 100;
const ACCEPT_RESIDUAL: f64 = 1e-9;
const DEDUP_TOL: f64 = 1e-8;
const REAL_SNAP: f64 = 1e-10;

/// Radius beyond which `D` has no zero with `Re ξ ≥ sigma`.
///
/// For `|ξ| ≥ 1` the monic leading term dominates once
/// `|ξ| > Σ|p_i| + Σ|q_j| e^{max(0,−σ)τ}` (sums over non-leading `p`).
pub fn root_free_radius(qp: &QuasiPolynomial, sigma: f64) -> f64 {
    let n = qp.deg_p();
    let ps: f64 = qp.p_coeffs[..n].iter().map(|c| math::abs(*c)).sum();
    let qs: f64 = qp.q_coeffs.iter().map(|c| math::abs(*c)).sum();
    1.0 + ps + qs * math::exp((-sigma).max(0.0) * qp.tau)
}

/// Number of zeros of `D` with `Re ξ > sigma` and `|Im ξ| < omega_cap`,
/// counted with multiplicity by the winding number of `D` around the
/// rectangle `[sigma, σ_max] × [−omega_cap, omega_cap]`.
///
/// If a contour edge passes too close to a zero, the rectangle is nudged
/// outward by 1e-6 up to five times.
pub fn count_roots_right_of(qp: &QuasiPolynomial, sigma: f64, omega_cap: f64) -> Result<usize> {
    if !(omega_cap > 0.0 && omega_cap.is_finite()) || !sigma.is_finite() {
        return Err(Error::InvalidArgument(
            "omega_cap must be positive and sigma finite",
        ));
    }
    for attempt in 0..=MAX_JITTERS {
        let shift = JITTER * attempt as f64;
        let s = sigma + shift;
        let omega = omega_cap + shift;
        let sigma_max = root_free_radius(qp, s).max(s + 1.0);
        if let Some(n) = winding(qp, s, sigma_max, omega) {
            return Ok(n);
        }
    }
    Err(Error::ContourNearRoot {
        attempts: MAX_JITTERS,
    })
}

fn winding(qp: &QuasiPolynomial, s0: f64, s1: f64, om: f64) -> Option<usize> {
    let corners = [
        Complex64::new(s0, -om),
        Complex64::new(s1, -om),
        Complex64::new(s1, om),
        Complex64::new(s0, om),
    ];
    let mut total = 0.0;
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        total += edge_change(qp, a, b)?;
    }
    let turns = total / (2.0 * PI);
    let rounded = math::round(turns);
    if math::abs(turns - rounded) >= 0.1 || rounded < 0.0 {
        return None;
    }
    Some(rounded as usize)
}

fn value_checked(qp: &QuasiPolynomial, xi: Complex64) -> Option<Complex64> {
    let v = qp.eval(xi);
    (v.norm() >= NEAR_ROOT * qp.magnitude_scale(xi) && v.is_finite()).then_some(v)
}

/// Total argument change of `D` along the segment `a → b`.
fn edge_change(qp: &QuasiPolynomial, a: Complex64, b: Complex64) -> Option<f64> {
    let len = (b - a).norm();
    let pieces = math::ceil(len * 4.0 * (1.0 + qp.tau)).max(64.0) as usize;
    let mut total = 0.0;
    let mut prev_z = a;
    let mut prev_v = value_checked(qp, a)?;
    for i in 1..=pieces {
        let z = a + (b - a) * (i as f64 / pieces as f64);
        let v = value_checked(qp, z)?;
        total += refine(qp, prev_z, prev_v, z, v, 0)?;
        prev_z = z;
        prev_v = v;
    }
    Some(total)
}

fn refine(
    qp: &QuasiPolynomial,
    za: Complex64,
    va: Complex64,
    zb: Complex64,
    vb: Complex64,
    depth: u32,
) -> Option<f64> {
    let step = (vb / va).arg();
    if math::abs(step) < PI / 2.0 {
        return Some(step);
    }
    if depth >= MAX_DEPTH {
        return None;
    }
    let zm = (za + zb) * 0.5;
    let vm = value_checked(qp, zm)?;
    Some(refine(qp, za, va, zm, vm, depth + 1)? + refine(qp, zm, vm, zb, vb, depth + 1)?)
}

/// Rectangle searched by [`rightmost_roots`]; only the upper half is seeded
/// since roots come in conjugate pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_max: f64,
}

impl Region {
    fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && math::abs(z.im) <= self.im_max
    }
}

fn newton(qp: &QuasiPolynomial, mut z: Complex64) -> Option<Complex64> {
    for _ in 0..NEWTON_MAX_ITER {
        let (d, dd) = qp.eval_with_derivative(z);
        let step = d / dd;
        if !step.is_finite() {
            return None;
        }
        z -= step;
        if step.norm() < NEWTON_STEP_TOL * z.norm().max(1.0) {
            let r = qp.eval(z);
            return (r.norm() < ACCEPT_RESIDUAL * qp.magnitude_scale(z)).then_some(z);
        }
    }
    None
}

/// Distinct zeros in `region` found by Newton's method from a uniform seed
/// grid, upper-half-plane representatives only, sorted by real part
/// (largest first).
pub fn rightmost_roots(qp: &QuasiPolynomial, region: Region, spacing: f64) -> Vec<Complex64> {
    let spacing = if spacing > 0.0 {
        spacing
    } else {
        DEFAULT_SEED_SPACING
    };
    let nx = math::ceil((region.re_max - region.re_min) / spacing).max(0.0) as usize;
    let ny = math::ceil(region.im_max / spacing).max(0.0) as usize;
    let mut found: Vec<Complex64> = Vec::new();
    for i in 0..=nx {
        for j in 0..=ny {
            let seed = Complex64::new(
                (region.re_min + spacing * i as f64).min(region.re_max),
                (spacing * j as f64).min(region.im_max),
            );
            let Some(mut z) = newton(qp, seed) else {
                continue;
            };
            if math::abs(z.im) < REAL_SNAP {
                z.im = 0.0;
            }
            z.im = math::abs(z.im);
            if !region.contains(z) {
                continue;
            }
            if found
                .iter()
                .all(|w| (*w - z).norm() > DEDUP_TOL * z.norm().max(1.0))
            {
                found.push(z);
            }
        }
    }
    found.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    found
}

/// Number of zeros with positive real part implied by a root list from
/// [`rightmost_roots`] (complex representatives count twice).
pub fn rhp_census(roots: &[Complex64]) -> usize {
    roots
        .iter()
        .filter(|z| z.re > 0.0)
        .map(|z| if z.im == 0.0 { 1 } else { 2 })
        .sum()
}
