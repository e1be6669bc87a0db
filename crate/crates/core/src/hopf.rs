//! Hopf bifurcation of the double-infection state in the delay.
//!
//! A crossing is a pair `(ϖ, τ)` with `D(iϖ; τ) = 0`, where `τ` enters both
//! through `e^{-ξτ}` and through `R₀(τ)` in the coefficients.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::math;
use crate::model::{reproduction_numbers, threshold_delay, ModelParams};
use crate::poly;
use crate::spectral::{char_ed_unchecked, ed_coefficient_slopes, ed_coefficients, modulus_poly};
use crate::{Error, Result};

const GRID: usize = 64;
const MAX_REFINEMENTS: u32 = 3;
const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 50;
const ACCEPT_RESIDUAL: f64 = 1e-9;
const DEDUP: f64 = 1e-9;
const CELL_MAX_DEPTH: u32 = 10;
const DEGENERATE: f64 = 1e-10;
/// Frequencies below this are the real root `ξ = 0` at `R₀ = R₁`, not a pair.
const MIN_FREQUENCY: f64 = 1e-6;

/// Real and imaginary parts of `D(iϖ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RSPair {
    pub r: f64,
    pub s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfPoint {
    pub tau_h: f64,
    pub omega_h: f64,
    /// `∂D/∂ξ` at `(iϖ_h, τ_h)`.
    pub dd_dxi: Complex64,
    /// `Re dξ/dτ` at the crossing.
    pub re_dxi_dtau: f64,
    /// `R₀(τ_h)`.
    pub r_h: f64,
}

/// `D`, `∂D/∂ξ` and the total `∂D/∂τ` of the double-infection characteristic
/// function at `ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials {
    pub value: Complex64,
    pub d_xi: Complex64,
    pub d_tau: Complex64,
}

pub fn partials(params: &ModelParams, xi: Complex64, tau: f64) -> Partials {
    let p = params.with_tau(tau);
    let qp = char_ed_unchecked(&p);
    let (value, d_xi) = qp.eval_with_derivative(xi);
    let slopes = ed_coefficient_slopes(&p);
    // dR₀/dτ = −a R₀
    let dr0 = -p.a * reproduction_numbers(&p).r0;
    let dp: Vec<f64> = slopes.a.iter().map(|s| s * dr0).collect();
    let dq = [
        0.0,
        -slopes.b[0] * dr0,
        -slopes.b[1] * dr0,
        -slopes.b[2] * dr0,
    ];
    let e = (-xi * tau).exp();
    let q = poly::eval_complex(&qp.q_coeffs, xi);
    let d_tau = poly::eval_complex(&dp, xi) + poly::eval_complex(&dq, xi) * e - xi * q * e;
    Partials { value, d_xi, d_tau }
}

pub fn ri_split(params: &ModelParams, omega: f64, tau: f64) -> Result<RSPair> {
    if !(omega > 0.0) {
        return Err(Error::InvalidArgument("omega must be positive"));
    }
    if !(tau >= 0.0) {
        return Err(Error::InvalidArgument("tau must be nonnegative"));
    }
    let d = char_ed_unchecked(&params.with_tau(tau)).eval(Complex64::new(0.0, omega));
    Ok(RSPair { r: d.re, s: d.im })
}

fn rs(params: &ModelParams, omega: f64, tau: f64) -> RSPair {
    let d = char_ed_unchecked(&params.with_tau(tau)).eval(Complex64::new(0.0, omega));
    RSPair { r: d.re, s: d.im }
}

/// Newton's method on `(Re D, Im D)(ϖ, τ) = 0`.
fn newton(params: &ModelParams, mut omega: f64, mut tau: f64) -> Option<(f64, f64)> {
    for _ in 0..NEWTON_MAX_ITER {
        let pt = partials(params, Complex64::new(0.0, omega), tau);
        let (r, s) = (pt.value.re, pt.value.im);
        // d/dϖ D(iϖ) = i ∂D/∂ξ
        let (r_w, s_w) = (-pt.d_xi.im, pt.d_xi.re);
        let (r_t, s_t) = (pt.d_tau.re, pt.d_tau.im);
        let det = r_w * s_t - r_t * s_w;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dw = (r * s_t - s * r_t) / det;
        let dt = (r_w * s - s_w * r) / det;
        omega -= dw;
        tau -= dt;
        if !(omega.is_finite() && tau.is_finite()) || tau < 0.0 {
            return None;
        }
        if math::abs(dw).max(math::abs(dt)) < NEWTON_TOL {
            let v = partials(params, Complex64::new(0.0, omega), tau).value;
            return (v.norm() < ACCEPT_RESIDUAL && omega > 0.0).then_some((omega, tau));
        }
    }
    None
}

fn sign_change(values: &[f64]) -> bool {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    lo < 0.0 && hi > 0.0
}

/// Tabulates `R, S` on an `n × n` node grid; `[i][j]` is `(τ_i, ϖ_j)`.
fn tabulate(
    params: &ModelParams,
    tau: (f64, f64),
    omega: (f64, f64),
    n: usize,
) -> (Vec<f64>, Vec<f64>, Vec<Vec<RSPair>>) {
    let taus: Vec<f64> = (0..=n)
        .map(|i| tau.0 + (tau.1 - tau.0) * i as f64 / n as f64)
        .collect();
    let omegas: Vec<f64> = (0..=n)
        .map(|j| omega.0 + (omega.1 - omega.0) * j as f64 / n as f64)
        .collect();
    let values = taus
        .iter()
        .map(|&t| omegas.iter().map(|&w| rs(params, w, t)).collect())
        .collect();
    (taus, omegas, values)
}

fn ambiguous_cell(values: &[Vec<RSPair>], i: usize, j: usize) -> bool {
    let c = [
        values[i][j],
        values[i + 1][j],
        values[i][j + 1],
        values[i + 1][j + 1],
    ];
    sign_change(&c.map(|v| v.r)) && sign_change(&c.map(|v| v.s))
}

/// Every converged Newton solution `(τ, ϖ)` from the sign-change cells of an
/// `n × n` grid, one entry per seed, in grid order.
fn solve_cells(
    params: &ModelParams,
    tau: (f64, f64),
    omega: (f64, f64),
    n: usize,
) -> Vec<(f64, f64)> {
    let (taus, omegas, values) = tabulate(params, tau, omega, n);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !ambiguous_cell(&values, i, j) {
                continue;
            }
            let seed_t = 0.5 * (taus[i] + taus[i + 1]);
            let seed_w = 0.5 * (omegas[j] + omegas[j + 1]);
            if let Some((w, t)) = newton(params, seed_w, seed_t) {
                if t >= tau.0 && t < tau.1 && w > omega.0.max(MIN_FREQUENCY) && w <= omega.1 {
                    out.push((t, w));
                }
            }
        }
    }
    out
}

fn search_boxes(
    params: &ModelParams,
    tau_box: (f64, f64),
    omega_box: (f64, f64),
) -> Option<((f64, f64), (f64, f64))> {
    let tau_max = threshold_delay(params, params.r1())?;
    let lo = tau_box.0.max(0.0);
    let hi = tau_box.1.min(tau_max);
    let (w_lo, w_hi) = omega_box;
    if !(lo < hi) || !(w_hi > w_lo) || !(w_hi > 0.0) {
        return None;
    }
    Some(((lo, hi), (w_lo.max(0.0), w_hi)))
}

/// Converged solutions `(τ, ϖ)` of all seeds on the base grid, without
/// deduplication. Empty if the boxes miss the double-infection regime.
pub fn seed_solutions(
    params: &ModelParams,
    tau_box: (f64, f64),
    omega_box: (f64, f64),
) -> Vec<(f64, f64)> {
    match search_boxes(params, tau_box, omega_box) {
        Some((t, w)) => solve_cells(params, t, w, GRID),
        None => Vec::new(),
    }
}

/// Locates the Hopf point of the double-infection state.
///
/// The delay box is intersected with the range where that state exists.
/// Seeds are the centres of grid cells in which both `R` and `S` change sign;
/// the grid is doubled up to three times if no seed converges. Among the
/// solutions, the one with the smallest `R₀ > R₁` (the largest delay) wins.
pub fn find_hopf(
    params: &ModelParams,
    tau_box: (f64, f64),
    omega_box: (f64, f64),
) -> Option<HopfPoint> {
    let r1 = params.r1();
    let (tau, omega) = search_boxes(params, tau_box, omega_box)?;
    let mut n = GRID;
    for _ in 0..=MAX_REFINEMENTS {
        let mut found: Vec<(f64, f64)> = Vec::new();
        for (t, w) in solve_cells(params, tau, omega, n) {
            if found
                .iter()
                .all(|(ft, fw)| math::abs(ft - t).max(math::abs(fw - w)) > DEDUP)
            {
                found.push((t, w));
            }
        }
        let best = found
            .into_iter()
            .filter(|&(t, _)| reproduction_numbers(&params.with_tau(t)).r0 > r1)
            .min_by(|a, b| {
                let ra = reproduction_numbers(&params.with_tau(a.0)).r0;
                let rb = reproduction_numbers(&params.with_tau(b.0)).r0;
                ra.total_cmp(&rb)
                    .then(a.0.total_cmp(&b.0))
                    .then(a.1.total_cmp(&b.1))
            });
        if let Some((t, w)) = best {
            return Some(hopf_point(params, t, w));
        }
        n *= 2;
    }
    None
}

fn hopf_point(params: &ModelParams, tau: f64, omega: f64) -> HopfPoint {
    let pt = partials(params, Complex64::new(0.0, omega), tau);
    HopfPoint {
        tau_h: tau,
        omega_h: omega,
        dd_dxi: pt.d_xi,
        re_dxi_dtau: (-pt.d_tau / pt.d_xi).re,
        r_h: reproduction_numbers(&params.with_tau(tau)).r0,
    }
}

/// `Re dξ/dτ = Re(−(∂D/∂τ)/(∂D/∂ξ))` at the Hopf point.
pub fn transversality(params: &ModelParams, hp: &HopfPoint) -> Result<f64> {
    let pt = partials(params, Complex64::new(0.0, hp.omega_h), hp.tau_h);
    let modulus = pt.d_xi.norm();
    if !(modulus >= DEGENERATE) {
        return Err(Error::Degenerate { modulus });
    }
    Ok((-pt.d_tau / pt.d_xi).re)
}

/// Lower bound `R̃(ϖ) ≤ Re D(iϖ)` obtained by replacing the delayed term by
/// minus its modulus.
pub fn r_lower_bound(params: &ModelParams, omega: f64, tau: f64) -> f64 {
    let r0 = reproduction_numbers(&params.with_tau(tau)).r0;
    r_lower_bound_at(params, r0, omega)
}

fn r_lower_bound_at(params: &ModelParams, r0: f64, omega: f64) -> f64 {
    let c = ed_coefficients(params, r0);
    let [a0, _, a2, _, a4] = c.a;
    let [b1, b2, b3] = c.b;
    let w2 = omega * omega;
    let even = a4 * w2 * w2 - a2 * w2 + a0;
    let q = math::sqrt(b2 * b2 * w2 * w2 + (b3 * w2 - b1) * (b3 * w2 - b1) * w2);
    even - q
}

/// Frequency beyond which `A₄ϖ⁴ − B₃ϖ³ − (A₂+B₂)ϖ² − B₁ϖ + A₀`, a polynomial
/// minorant of `R̃`, is certainly positive (given `A₀ ≥ 0`).
fn polynomial_tail_start(params: &ModelParams, r0: f64) -> f64 {
    let c = ed_coefficients(params, r0);
    let [_, _, a2, _, a4] = c.a;
    let [b1, b2, b3] = c.b;
    let sum = b3 + math::abs(a2 + b2) + b1;
    (sum / a4).max(1.0) * (1.0 + 1e-9)
}

/// Minimum of `R̃` over `[from, ∞)` at both ends of a delay range.
///
/// `R̃` is affine in `R₀`, so the two endpoint delays bound every delay in
/// between. Up to the polynomial tail start the bound is sampled on a fine
/// grid; beyond it positivity is implied.
pub fn tail_minimum(params: &ModelParams, tau_range: (f64, f64), from: f64) -> f64 {
    let mut min = f64::INFINITY;
    for tau in [tau_range.0, tau_range.1] {
        let r0 = reproduction_numbers(&params.with_tau(tau)).r0;
        let far = polynomial_tail_start(params, r0).max(from);
        let n = 20_000;
        for i in 0..=n {
            let w = from + (far - from) * i as f64 / n as f64;
            min = min.min(r_lower_bound_at(params, r0, w));
        }
    }
    min
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoCrossingCertificate {
    pub certified: bool,
    /// Minimum of `R̃` above the frequency cap.
    pub tail_min: f64,
    /// Smallest `max(|R|, |S|)` over the scanned nodes with `ϖ > 0`.
    pub grid_min_residual: f64,
    /// Deepest cell subdivision used.
    pub refinement_level: u32,
    /// A crossing `(τ, ϖ)` strictly inside the range, if one was found.
    pub crossing: Option<(f64, f64)>,
}

/// Evidence that no characteristic root of the double-infection state
/// reaches the imaginary axis for delays in the open interval `tau_range`.
///
/// Frequencies above `omega_cap` are excluded by `R̃ > 0`. Below it the
/// `(τ, ϖ)` grid is scanned for cells where both `R` and `S` change sign; each
/// such cell is resolved by Newton's method or split, down to ten levels.
/// A crossing on the boundary of the delay range does not count.
pub fn no_crossing_certificate(
    params: &ModelParams,
    tau_range: (f64, f64),
    omega_cap: f64,
) -> Result<NoCrossingCertificate> {
    let (lo, hi) = tau_range;
    if !(lo < hi) || !(omega_cap > 0.0) {
        return Err(Error::InvalidArgument("need lo < hi and omega_cap > 0"));
    }
    let tail_min = tail_minimum(params, tau_range, omega_cap);

    let (taus, omegas, values) = tabulate(params, tau_range, (0.0, omega_cap), GRID);
    // the ϖ = 0 column is skipped: D is real there and vanishes at R₀ = R₁
    let grid_min_residual = values
        .iter()
        .flat_map(|row| &row[1..])
        .map(|v| math::abs(v.r).max(math::abs(v.s)))
        .fold(f64::INFINITY, f64::min);

    let mut level = 0;
    let mut crossing = None;
    'scan: for i in 0..GRID {
        for j in 0..GRID {
            if !ambiguous_cell(&values, i, j) {
                continue;
            }
            let cell = Cell {
                tau: (taus[i], taus[i + 1]),
                omega: (omegas[j], omegas[j + 1]),
            };
            match resolve_cell(params, tau_range, cell, 0, &mut level)? {
                CellOutcome::Clear => {}
                CellOutcome::Crossing(t, w) => {
                    crossing = Some((t, w));
                    break 'scan;
                }
            }
        }
    }

    Ok(NoCrossingCertificate {
        certified: tail_min > 0.0 && crossing.is_none(),
        tail_min,
        grid_min_residual,
        refinement_level: level,
        crossing,
    })
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    tau: (f64, f64),
    omega: (f64, f64),
}

enum CellOutcome {
    Clear,
    Crossing(f64, f64),
}

fn resolve_cell(
    params: &ModelParams,
    range: (f64, f64),
    cell: Cell,
    depth: u32,
    level: &mut u32,
) -> Result<CellOutcome> {
    *level = (*level).max(depth);
    let corners = [
        rs(params, cell.omega.0, cell.tau.0),
        rs(params, cell.omega.0, cell.tau.1),
        rs(params, cell.omega.1, cell.tau.0),
        rs(params, cell.omega.1, cell.tau.1),
    ];
    if !(sign_change(&corners.map(|v| v.r)) && sign_change(&corners.map(|v| v.s))) {
        return Ok(CellOutcome::Clear);
    }
    let seed_t = 0.5 * (cell.tau.0 + cell.tau.1);
    let seed_w = 0.5 * (cell.omega.0 + cell.omega.1);
    if let Some((w, t)) = newton(params, seed_w, seed_t) {
        let margin = 1e-9;
        let in_cell = t >= cell.tau.0 - margin
            && t <= cell.tau.1 + margin
            && w >= cell.omega.0 - margin
            && w <= cell.omega.1 + margin;
        if t > range.0 + margin && t < range.1 - margin && w > 0.0 {
            return Ok(CellOutcome::Crossing(t, w));
        }
        if in_cell {
            // the zero sits on the boundary of the delay range
            return Ok(CellOutcome::Clear);
        }
    }
    if depth >= CELL_MAX_DEPTH {
        return Err(Error::Inconclusive { level: depth });
    }
    let tm = 0.5 * (cell.tau.0 + cell.tau.1);
    let wm = 0.5 * (cell.omega.0 + cell.omega.1);
    for tau in [(cell.tau.0, tm), (tm, cell.tau.1)] {
        for omega in [(cell.omega.0, wm), (wm, cell.omega.1)] {
            if let CellOutcome::Crossing(t, w) =
                resolve_cell(params, range, Cell { tau, omega }, depth + 1, level)?
            {
                return Ok(CellOutcome::Crossing(t, w));
            }
        }
    }
    Ok(CellOutcome::Clear)
}

/// Frequency cap for imaginary-axis scans over a delay range: one above the
/// largest candidate frequency `√s*` of the modulus polynomial at 17 sample
/// delays (10 if there is none), raised if needed so that `R̃` is positive
/// beyond it.
pub fn default_omega_cap(params: &ModelParams, tau_range: (f64, f64)) -> f64 {
    let mut largest: Option<f64> = None;
    for i in 0..=16 {
        let tau = tau_range.0 + (tau_range.1 - tau_range.0) * i as f64 / 16.0;
        let qp = char_ed_unchecked(&params.with_tau(tau));
        if let Ok(mp) = modulus_poly(&qp) {
            for w in mp.crossing_frequencies() {
                largest = Some(largest.map_or(w, |l: f64| l.max(w)));
            }
        }
    }
    let mut cap = largest.map_or(10.0, |w| 1.0 + w);
    while tail_minimum(params, tau_range, cap) <= 0.0 && cap < 1e6 {
        cap *= 1.25;
    }
    cap
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_is_modulus_of_characteristic_value() {
        let p = ModelParams::reference(0.0);
        for (w, t) in [(0.3, 0.2), (1.1, 0.9), (2.0, 1.5)] {
            let rs = ri_split(&p, w, t).unwrap();
            let d = char_ed_unchecked(&p.with_tau(t)).eval(Complex64::new(0.0, w));
            let lhs = rs.r * rs.r + rs.s * rs.s;
            assert!((lhs - d.norm_sqr()).abs() <= 1e-12 * d.norm_sqr());
        }
        assert!(ri_split(&p, 0.0, 1.0).is_err());
    }

    #[test]
    fn tau_partial_matches_central_difference() {
        let p = ModelParams::reference(0.0);
        let xi = Complex64::new(0.1, 0.5);
        let tau = 0.7;
        let h = 1e-6;
        let fd = (partials(&p, xi, tau + h).value - partials(&p, xi, tau - h).value) / (2.0 * h);
        let an = partials(&p, xi, tau).d_tau;
        assert!((fd - an).norm() <= 1e-5 * an.norm(), "{fd} vs {an}");
    }

    #[test]
    fn box_above_existence_range_has_no_hopf() {
        let p = ModelParams::reference(0.0);
        assert!(find_hopf(&p, (1.6, 3.0), (0.0, 2.1)).is_none());
    }

    #[test]
    fn lower_bound_is_below_real_part() {
        let p = ModelParams::reference(0.0);
        for t in [0.1, 0.9, 1.5] {
            for w in [0.2, 0.8, 1.9, 2.5, 4.0] {
                assert!(r_lower_bound(&p, w, t) <= ri_split(&p, w, t).unwrap().r + 1e-12);
            }
        }
    }
}
