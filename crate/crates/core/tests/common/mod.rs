#![allow(dead_code)]

use hivdelay_core::model::{rhs, ModelParams, StateVector};
use hivdelay_core::Complex64;
use rand::Rng;

/// Reference parameters with every rate scaled by an independent factor in
/// [0.8, 1.25].
pub fn jittered<R: Rng>(rng: &mut R, tau: f64) -> ModelParams {
    let mut p = ModelParams::reference(tau);
    for r in [
        &mut p.lambda,
        &mut p.d,
        &mut p.beta,
        &mut p.a,
        &mut p.alpha,
        &mut p.b,
        &mut p.k,
        &mut p.p,
        &mut p.c,
        &mut p.q,
    ] {
        *r *= rng.gen_range(0.8..1.25);
    }
    p
}

/// Rates drawn log-uniformly over two decades around the reference values.
pub fn wide<R: Rng>(rng: &mut R, tau: f64) -> ModelParams {
    let mut p = ModelParams::reference(tau);
    for r in [
        &mut p.lambda,
        &mut p.d,
        &mut p.beta,
        &mut p.a,
        &mut p.alpha,
        &mut p.b,
        &mut p.k,
        &mut p.p,
        &mut p.c,
        &mut p.q,
    ] {
        *r *= 10f64.powf(rng.gen_range(-1.0..1.0));
    }
    p
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det<const N: usize>(mut m: [[Complex64; N]; N]) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .unwrap();
        if m[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..N {
            let factor = m[row][col] / m[col][col];
            for k in col..N {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
        }
    }
    det
}

/// Jacobians of the vector field with respect to the current and delayed
/// states, by central differences.
pub fn fd_jacobians(p: &ModelParams, point: &StateVector) -> ([[f64; 5]; 5], [[f64; 5]; 5]) {
    let mut jc = [[0.0; 5]; 5];
    let mut jd = [[0.0; 5]; 5];
    for j in 0..5 {
        let h = 1e-6 * point[j].abs().max(1.0);
        let mut up = point.to_array();
        let mut dn = point.to_array();
        up[j] += h;
        dn[j] -= h;
        let (up, dn) = (StateVector::from_array(up), StateVector::from_array(dn));
        let c = (rhs(p, &up, point) - rhs(p, &dn, point)) * (0.5 / h);
        let d = (rhs(p, point, &up) - rhs(p, point, &dn)) * (0.5 / h);
        for i in 0..5 {
            jc[i][j] = c[i];
            jd[i][j] = d[i];
        }
    }
    (jc, jd)
}

/// `det(ξI − J₀ − J₁e^{−ξτ})` of the linearisation at `point`.
pub fn characteristic_det(p: &ModelParams, point: &StateVector, xi: Complex64) -> Complex64 {
    let (jc, jd) = fd_jacobians(p, point);
    let e = (-xi * p.tau).exp();
    let mut m = [[Complex64::new(0.0, 0.0); 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            m[i][j] = -(Complex64::new(jc[i][j], 0.0) + e * jd[i][j]);
        }
        m[i][i] += xi;
    }
    det(m)
}

/// Classical RK4 for the undelayed system.
pub fn rk4_ode(p: &ModelParams, mut y: StateVector, t_end: f64, n: usize) -> StateVector {
    let h = t_end / n as f64;
    let f = |s: &StateVector| hivdelay_core::rhs(p, s, s);
    for _ in 0..n {
        let k1 = f(&y);
        let k2 = f(&(y + k1 * (0.5 * h)));
        let k3 = f(&(y + k2 * (0.5 * h)));
        let k4 = f(&(y + k3 * h));
        y = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    y
}
