//! Characteristic quasi-polynomials of the linearised system.
//!
//! Every characteristic function here has the form
//! `D(ξ) = P(ξ) + Q(ξ) e^{-ξτ}` with monic `P` and `deg Q < deg P`.

mod roots;

pub use roots::{
    count_roots_right_of, rhp_census, rightmost_roots, root_free_radius, Region,
    DEFAULT_SEED_SPACING,
};

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::math;
use crate::model::{reproduction_numbers, threshold_delay, EquilibriumKind, ModelParams};
use crate::poly;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiPolynomial {
    /// Ascending coefficients of `P`; the last one is 1.
    pub p_coeffs: Vec<f64>,
    /// Ascending coefficients of `Q`.
    pub q_coeffs: Vec<f64>,
    pub tau: f64,
}

impl QuasiPolynomial {
    pub fn new(p_coeffs: Vec<f64>, q_coeffs: Vec<f64>, tau: f64) -> Result<Self> {
        let deg_p = poly::degree(&p_coeffs);
        let deg_q = poly::degree(&q_coeffs);
        match deg_p {
            Some(n) if p_coeffs.len() == n + 1 && p_coeffs[n] == 1.0 => {
                if deg_q.is_some_and(|m| m >= n) {
                    return Err(Error::InvalidArgument("deg Q must be below deg P"));
                }
            }
            _ => {
                return Err(Error::InvalidArgument(
                    "P must be monic with no trailing zeros",
                ))
            }
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::InvalidArgument(
                "delay must be finite and nonnegative",
            ));
        }
        Ok(Self {
            p_coeffs,
            q_coeffs,
            tau,
        })
    }

    pub fn deg_p(&self) -> usize {
        self.p_coeffs.len() - 1
    }

    pub fn deg_q(&self) -> usize {
        poly::degree(&self.q_coeffs).unwrap_or(0)
    }

    pub fn eval(&self, xi: Complex64) -> Complex64 {
        eval(self, xi)
    }

    /// `(D, ∂D/∂ξ)` at `xi`.
    pub fn eval_with_derivative(&self, xi: Complex64) -> (Complex64, Complex64) {
        let (p, dp) = poly::eval_complex_with_derivative(&self.p_coeffs, xi);
        let (q, dq) = poly::eval_complex_with_derivative(&self.q_coeffs, xi);
        let e = (-xi * self.tau).exp();
        (p + q * e, dp + (dq - q * self.tau) * e)
    }

    /// Sum of the moduli of the individual terms at `xi`; used as the
    /// reference magnitude for "small" values of `D`.
    pub fn magnitude_scale(&self, xi: Complex64) -> f64 {
        let r = xi.norm();
        let e = math::exp(-xi.re * self.tau);
        let sum = |c: &[f64]| c.iter().rev().fold(0.0, |acc, &ci| acc * r + math::abs(ci));
        sum(&self.p_coeffs) + sum(&self.q_coeffs) * e
    }

    /// The `τ = 0` polynomial `P + Q`.
    pub fn undelayed(&self) -> Vec<f64> {
        let mut c = self.p_coeffs.clone();
        for (i, q) in self.q_coeffs.iter().enumerate() {
            c[i] += q;
        }
        c
    }
}

/// `P(ξ) + Q(ξ) e^{-ξτ}` by Horner evaluation of both parts.
pub fn eval(qp: &QuasiPolynomial, xi: Complex64) -> Complex64 {
    let p = poly::eval_complex(&qp.p_coeffs, xi);
    let q = poly::eval_complex(&qp.q_coeffs, xi);
    p + q * (-xi * qp.tau).exp()
}

/// Non-trivial factor at the disease-free state:
/// `ξ² + (a+p)ξ + ap − (βλk/d) e^{-aτ} e^{-ξτ}`.
pub fn char_e0(params: &ModelParams) -> QuasiPolynomial {
    let ModelParams {
        lambda,
        d,
        beta,
        a,
        k,
        p,
        tau,
        ..
    } = *params;
    QuasiPolynomial {
        p_coeffs: vec![a * p, a + p, 1.0],
        q_coeffs: vec![-(beta * lambda * k / d) * params.survival()],
        tau,
    }
}

/// Factors at the single-infection state: the recombinant-invasion quadratic
/// `ξ² + (b+q)ξ + bq(1 − R_d)` and the delayed cubic.
pub fn char_es(params: &ModelParams) -> Result<([f64; 3], QuasiPolynomial)> {
    let th = reproduction_numbers(params);
    if !(th.r0 > 1.0) {
        return Err(Error::InadmissibleEquilibrium(
            EquilibriumKind::SingleInfection,
        ));
    }
    let ModelParams {
        lambda,
        d,
        beta,
        a,
        b,
        k,
        p,
        q,
        tau,
        ..
    } = *params;
    let d1 = [b * q * (1.0 - th.rd), b + q, 1.0];
    let kk = k * beta * lambda * params.survival() / (a * p);
    let a2 = a + p + kk;
    let a1 = kk * (a + p) + a * p;
    let a0 = k * beta * lambda * params.survival();
    let c1 = a * p;
    let c2 = a * p * d;
    Ok((
        d1,
        QuasiPolynomial {
            p_coeffs: vec![a0, a1, a2, 1.0],
            q_coeffs: vec![-c2, -c1],
            tau,
        },
    ))
}

/// Coefficients of the double-infection characteristic function, written in
/// terms of `R₀` and `R₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdCoefficients {
    /// `A₀..A₄` (the `ξ⁰..ξ⁴` coefficients of the monic quintic).
    pub a: [f64; 5],
    /// `B₁..B₃`; the delayed part is `−(B₁ξ + B₂ξ² + B₃ξ³)`.
    pub b: [f64; 3],
}

/// `A_i`, `B_i` for arbitrary `R₀` (no admissibility check). The coefficients
/// are affine in `R₀`.
pub fn ed_coefficients(params: &ModelParams, r0: f64) -> EdCoefficients {
    let ModelParams { a, b, d, p, q, .. } = *params;
    let r1 = params.r1();
    let r = r0 / r1;
    let bpq = b + p + q;
    let a4 = d * r1 + a * r + bpq;
    let a3 = bpq * (d * r1 + a * r) + p * (b + q) + a * d * r0;
    let a2 = a * d * bpq * r0 + p * (b + q) * (d * r1 + a * r) + a * b * q * (r - 1.0);
    let a1 = a * d * p * (b + q) * r0 + a * b * q * (p + d * r1) * (r - 1.0);
    let a0 = a * b * d * p * q * (r0 - r1);
    let b3 = a * p * r;
    let b2 = a * p * (b + d + q) * r;
    let b1 = a * p * d * (b + q) * r;
    EdCoefficients {
        a: [a0, a1, a2, a3, a4],
        b: [b1, b2, b3],
    }
}

/// `∂/∂R₀` of [`ed_coefficients`].
pub fn ed_coefficient_slopes(params: &ModelParams) -> EdCoefficients {
    let ModelParams { a, b, d, p, q, .. } = *params;
    let r1 = params.r1();
    let bpq = b + p + q;
    EdCoefficients {
        a: [
            a * b * d * p * q,
            a * d * p * (b + q) + a * b * q * (p + d * r1) / r1,
            a * d * bpq + p * (b + q) * a / r1 + a * b * q / r1,
            bpq * a / r1 + a * d,
            a / r1,
        ],
        b: [
            a * p * d * (b + q) / r1,
            a * p * (b + d + q) / r1,
            a * p / r1,
        ],
    }
}

/// Assembles `P` and `Q` from the `A_i`, `B_i`.
pub fn ed_quasi_polynomial(coef: &EdCoefficients, tau: f64) -> QuasiPolynomial {
    let [a0, a1, a2, a3, a4] = coef.a;
    let [b1, b2, b3] = coef.b;
    QuasiPolynomial {
        p_coeffs: vec![a0, a1, a2, a3, a4, 1.0],
        q_coeffs: vec![0.0, -b1, -b2, -b3],
        tau,
    }
}

/// Characteristic function at the double-infection state.
pub fn char_ed(params: &ModelParams) -> Result<QuasiPolynomial> {
    let th = reproduction_numbers(params);
    if !(th.r0 > th.r1) {
        return Err(Error::InadmissibleEquilibrium(
            EquilibriumKind::DoubleInfection,
        ));
    }
    Ok(char_ed_unchecked(params))
}

/// As [`char_ed`] without the admissibility gate.
pub fn char_ed_unchecked(params: &ModelParams) -> QuasiPolynomial {
    let r0 = reproduction_numbers(params).r0;
    ed_quasi_polynomial(&ed_coefficients(params, r0), params.tau)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModulusKind {
    H0,
    Hs,
    H,
}

/// `|P(iϖ)|² − |Q(iϖ)|²` as a polynomial in `s = ϖ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusPolynomial {
    /// Ascending in `s`; monic.
    pub coeffs: Vec<f64>,
    pub kind: ModulusKind,
}

impl ModulusPolynomial {
    /// `h₁..h_n` where the polynomial is `sⁿ + h₁sⁿ⁻¹ + … + h_n`.
    pub fn descending_tail(&self) -> Vec<f64> {
        self.coeffs.iter().rev().skip(1).copied().collect()
    }

    pub fn positive_roots(&self) -> Vec<f64> {
        poly::positive_real_roots(&self.coeffs)
    }

    /// Candidate crossing frequencies `ϖ = √s*`.
    pub fn crossing_frequencies(&self) -> Vec<f64> {
        self.positive_roots().into_iter().map(math::sqrt).collect()
    }

    pub fn eval(&self, s: f64) -> f64 {
        poly::eval(&self.coeffs, s)
    }
}

pub fn modulus_poly(qp: &QuasiPolynomial) -> Result<ModulusPolynomial> {
    let shape_error = Error::UnsupportedShape {
        deg_p: qp.deg_p(),
        deg_q: qp.deg_q(),
    };
    let q = |i: usize| qp.q_coeffs.get(i).copied().unwrap_or(0.0);
    let p = &qp.p_coeffs;
    match (qp.deg_p(), qp.q_coeffs.len()) {
        (2, 1) => {
            let (p0, p1, q0) = (p[0], p[1], q(0));
            Ok(ModulusPolynomial {
                coeffs: vec![p0 * p0 - q0 * q0, p1 * p1 - 2.0 * p0, 1.0],
                kind: ModulusKind::H0,
            })
        }
        (3, 2) => {
            let (a0, a1, a2) = (p[0], p[1], p[2]);
            let (c2, c1) = (-q(0), -q(1));
            Ok(ModulusPolynomial {
                coeffs: vec![
                    a0 * a0 - c2 * c2,
                    a1 * a1 - 2.0 * a0 * a2 - c1 * c1,
                    a2 * a2 - 2.0 * a1,
                    1.0,
                ],
                kind: ModulusKind::Hs,
            })
        }
        (5, 4) if q(0) == 0.0 => {
            let [a0, a1, a2, a3, a4] = [p[0], p[1], p[2], p[3], p[4]];
            let (b1, b2, b3) = (-q(1), -q(2), -q(3));
            let h1 = a4 * a4 - 2.0 * a3;
            let h2 = 2.0 * a1 - 2.0 * a2 * a4 + a3 * a3 - b3 * b3;
            let h3 = 2.0 * a0 * a4 - 2.0 * a1 * a3 + a2 * a2 + 2.0 * b1 * b3 - b2 * b2;
            let h4 = a1 * a1 - 2.0 * a0 * a2 - b1 * b1;
            let h5 = a0 * a0;
            Ok(ModulusPolynomial {
                coeffs: vec![h5, h4, h3, h2, h1, 1.0],
                kind: ModulusKind::H,
            })
        }
        _ => Err(shape_error),
    }
}

/// Routh–Hurwitz test for the monic cubic `c3ξ³ + c2ξ² + c1ξ + c0`.
pub fn routh_hurwitz_cubic(c3: f64, c2: f64, c1: f64, c0: f64) -> bool {
    debug_assert!(c3 == 1.0, "cubic must be monic");
    c2 > 0.0 && c0 > 0.0 && c2 * c1 - c0 > 0.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurwitzReport {
    pub delta: [f64; 5],
    pub all_positive: bool,
}

/// Hurwitz determinants `Δ₁..Δ₅` of the quintic modulus polynomial.
pub fn hurwitz_quintic(mp: &ModulusPolynomial) -> Result<HurwitzReport> {
    if mp.kind != ModulusKind::H || mp.coeffs.len() != 6 {
        return Err(Error::UnsupportedShape {
            deg_p: mp.coeffs.len().saturating_sub(1),
            deg_q: 0,
        });
    }
    let h = mp.descending_tail();
    let (h1, h2, h3, h4, h5) = (h[0], h[1], h[2], h[3], h[4]);
    let d1 = h1;
    let d2 = h1 * h2 - h3;
    let d3 = h3 * d2 - h1 * (h1 * h4 - h5);
    let d4 = h4 * d3 - h5 * (h2 * d2 - (h1 * h4 - h5));
    let d5 = h5 * d4;
    let delta = [d1, d2, d3, d4, d5];
    Ok(HurwitzReport {
        delta,
        all_positive: delta.iter().all(|&x| x > 0.0),
    })
}

/// Where the Hurwitz test on `H` first fails as `R₀` rises above `R₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurwitzBoundary {
    /// Smallest `R₀ > R₁` at which some `Δᵢ ≤ 0`.
    pub r2: f64,
    /// Delay with `R₀ = r2`.
    pub tau: f64,
    /// Index (0-based) of the determinant that fails there.
    pub failing: usize,
}

fn hurwitz_at(params: &ModelParams, r0: f64) -> Option<HurwitzReport> {
    let qp = ed_quasi_polynomial(&ed_coefficients(params, r0), 0.0);
    hurwitz_quintic(&modulus_poly(&qp).ok()?).ok()
}

/// Scans `R₀` over `(R₁, R₀(τ=0)]` for the first loss of Hurwitz positivity.
///
/// `H` depends on the delay only through `R₀`, so the scan is in `R₀`. The
/// crossing is bisected to 1e-12 relative. `None` when every determinant
/// stays positive up to `τ = 0`, or when the double-infection state never
/// exists.
pub fn hurwitz_boundary(params: &ModelParams) -> Option<HurwitzBoundary> {
    const SAMPLES: usize = 400;
    let r1 = params.r1();
    let top = params.r0_undelayed();
    if !(top > r1) {
        return None;
    }
    let stable = |r0: f64| hurwitz_at(params, r0).is_some_and(|h| h.all_positive);
    // Δ₅ vanishes at R₀ = R₁ itself, so the scan starts just inside
    let mut lo = r1 * (1.0 + 1e-9);
    if !stable(lo) {
        return boundary(params, r1, lo);
    }
    for i in 1..=SAMPLES {
        let hi = r1 + (top - r1) * i as f64 / SAMPLES as f64;
        if !stable(hi) {
            return bisect(params, lo, hi);
        }
        lo = hi;
    }
    None
}

fn bisect(params: &ModelParams, mut lo: f64, mut hi: f64) -> Option<HurwitzBoundary> {
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if hurwitz_at(params, mid).is_some_and(|h| h.all_positive) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    boundary(params, lo, hi)
}

fn boundary(params: &ModelParams, lo: f64, hi: f64) -> Option<HurwitzBoundary> {
    let report = hurwitz_at(params, hi)?;
    let failing = report.delta.iter().position(|&d| !(d > 0.0))?;
    let r2 = 0.5 * (lo + hi);
    Some(HurwitzBoundary {
        r2,
        tau: threshold_delay(params, r2).unwrap_or(0.0),
        failing,
    })
}
