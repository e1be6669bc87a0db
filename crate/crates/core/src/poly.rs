//! Dense real polynomials stored as ascending coefficient slices.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::math;

pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub fn eval_complex(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Value and first derivative in one Horner pass.
pub fn eval_complex_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = zero;
    let mut dp = zero;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect()
}

/// Degree ignoring trailing zero coefficients; `None` for the zero polynomial.
pub fn degree(coeffs: &[f64]) -> Option<usize> {
    coeffs.iter().rposition(|&c| c != 0.0)
}

/// Number of sign changes in the coefficient sequence (zeros skipped).
pub fn sign_changes(coeffs: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for &c in coeffs {
        if c == 0.0 {
            continue;
        }
        if last != 0.0 && (c > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = c;
    }
    changes
}

/// All complex roots by the Aberth–Ehrlich iteration.
pub fn roots(coeffs: &[f64]) -> Vec<Complex64> {
    let Some(n) = degree(coeffs) else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs[..=n].iter().map(|c| c / lead).collect();
    // Cauchy bound for the initial circle
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(math::abs(*c)));
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let angle = 2.0 * core::f64::consts::PI * (j as f64 + 0.25) / n as f64 + 0.4;
            Complex64::new(math::cos(angle), math::sin(angle)) * (0.5 * radius)
        })
        .collect();

    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval_complex_with_derivative(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    repulsion += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    // a couple of plain Newton polishes
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_complex_with_derivative(&monic, *zi);
            let step = p / dp;
            if step.is_finite() && step.norm() < 1e-6 * zi.norm().max(1.0) {
                *zi -= step;
            }
        }
    }
    z
}

/// Strictly positive real roots in increasing order.
///
/// Uses Descartes' rule to skip the root finder when there can be none.
pub fn positive_real_roots(coeffs: &[f64]) -> Vec<f64> {
    if sign_changes(coeffs) == 0 {
        return Vec::new();
    }
    let mut out: Vec<f64> = roots(coeffs)
        .into_iter()
        .filter(|z| z.re > 0.0 && math::abs(z.im) <= 1e-7 * z.re.max(1.0))
        .map(|z| polish_real(coeffs, z.re))
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| math::abs(*a - *b) <= 1e-12 * a.max(1.0));
    out
}

fn polish_real(coeffs: &[f64], mut x: f64) -> f64 {
    let d = derivative(coeffs);
    for _ in 0..5 {
        let dp = eval(&d, x);
        if dp == 0.0 {
            break;
        }
        let step = eval(coeffs, x) / dp;
        if !step.is_finite() || math::abs(step) > 1e-6 * x.max(1.0) {
            break;
        }
        x -= step;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_matches_direct_sum() {
        let c = [1.0, -2.0, 0.5, 3.0];
        let x = 1.3;
        let direct = 1.0 - 2.0 * x + 0.5 * x * x + 3.0 * x * x * x;
        assert!((eval(&c, x) - direct).abs() < 1e-14);
        let z = Complex64::new(0.2, -0.7);
        let direct = z * z * z * 3.0 + z * z * 0.5 - z * 2.0 + 1.0;
        assert!((eval_complex(&c, z) - direct).norm() < 1e-14);
        let (p, dp) = eval_complex_with_derivative(&c, z);
        assert!((p - direct).norm() < 1e-14);
        assert!((dp - eval_complex(&derivative(&c), z)).norm() < 1e-14);
    }

    #[test]
    fn roots_of_known_cubic() {
        // (x-1)(x+2)(x-3) = x^3 - 2x^2 - 5x + 6
        let mut r: Vec<f64> = roots(&[6.0, -5.0, -2.0, 1.0])
            .iter()
            .map(|z| z.re)
            .collect();
        r.sort_by(f64::total_cmp);
        for (a, b) in r.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(positive_real_roots(&[6.0, -5.0, -2.0, 1.0]).len(), 2);
    }

    #[test]
    fn complex_pair_is_not_reported_as_real() {
        // (x^2 + 1)(x - 0.5)
        let c = [-0.5, 1.0, -0.5, 1.0];
        let pos = positive_real_roots(&c);
        assert_eq!(pos.len(), 1);
        assert!((pos[0] - 0.5).abs() < 1e-13);
    }

    #[test]
    fn descartes_shortcut() {
        assert_eq!(sign_changes(&[1.0, 0.0, 2.0, 3.0]), 0);
        assert_eq!(sign_changes(&[1.0, -1.0, 0.0, 1.0]), 2);
        assert!(positive_real_roots(&[1.0, 2.0, 3.0]).is_empty());
    }

    #[test]
    fn quintic_with_spread_roots() {
        let rs = [-5.0, -0.01, 0.2, 3.0, 40.0];
        let mut c = alloc::vec![1.0];
        for r in rs {
            let mut next = alloc::vec![0.0; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i] -= r * ci;
                next[i + 1] += ci;
            }
            c = next;
        }
        let pos = positive_real_roots(&c);
        assert_eq!(pos.len(), 3);
        for (a, b) in pos.iter().zip([0.2, 3.0, 40.0]) {
            assert!((a - b).abs() < 1e-10 * b);
        }
    }
}
