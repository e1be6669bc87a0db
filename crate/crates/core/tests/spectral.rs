mod common;

use core::f64::consts::PI;

use hivdelay_core::model::{
    equilibrium, reproduction_numbers, threshold_delay, EquilibriumKind, ModelParams,
};
use hivdelay_core::poly;
use hivdelay_core::spectral::{
    char_e0, char_ed, char_es, count_roots_right_of, ed_coefficients, ed_quasi_polynomial,
    hurwitz_boundary, hurwitz_quintic, modulus_poly, rhp_census, rightmost_roots, root_free_radius,
    routh_hurwitz_cubic, ModulusKind, QuasiPolynomial, Region,
};
use hivdelay_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

fn quadratic(c: [f64; 3], z: Complex64) -> Complex64 {
    z * z * c[2] + z * c[1] + c[0]
}

fn random_xi(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-2.0..2.0))
}

#[test]
fn disease_free_factor_matches_full_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let tau = rng.gen_range(0.0..10.0);
        let p = common::jittered(&mut rng, tau);
        let e0 = equilibrium(&p, EquilibriumKind::DiseaseFree).point;
        let d0 = char_e0(&p);
        for _ in 0..5 {
            let xi = random_xi(&mut rng);
            let full = common::characteristic_det(&p, &e0, xi);
            let factored = (xi + p.d) * (xi + p.b) * (xi + p.q) * d0.eval(xi);
            assert!((full - factored).norm() <= 1e-6 * full.norm().max(1e-3));
        }
    }
}

#[test]
fn single_infection_factors_match_full_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut checked = 0;
    while checked < 50 {
        let tau = rng.gen_range(0.0..7.0);
        let p = common::jittered(&mut rng, tau);
        let Ok((d1, d2)) = char_es(&p) else { continue };
        let es = equilibrium(&p, EquilibriumKind::SingleInfection).point;
        for _ in 0..5 {
            let xi = random_xi(&mut rng);
            let full = common::characteristic_det(&p, &es, xi);
            let factored = quadratic(d1, xi) * d2.eval(xi);
            assert!((full - factored).norm() <= 1e-6 * full.norm().max(1e-3));
        }
        checked += 1;
    }
}

#[test]
fn double_infection_function_matches_full_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let mut p = common::jittered(&mut rng, 0.0);
        let tau2 = threshold_delay(&p, p.r1()).unwrap();
        p.tau = rng.gen_range(0.0..tau2);
        let ed = equilibrium(&p, EquilibriumKind::DoubleInfection).point;
        let d = char_ed(&p).unwrap();
        for _ in 0..5 {
            let xi = random_xi(&mut rng);
            let full = common::characteristic_det(&p, &ed, xi);
            assert!((full - d.eval(xi)).norm() <= 1e-6 * full.norm().max(1e-3));
        }
    }
}

#[test]
fn double_infection_coefficients_for_reference_parameters() {
    for tau in [0.0, 0.5, 1.3] {
        let qp = char_ed(&ModelParams::reference(tau)).unwrap();
        let expected = 240.0 / 221.0 * (-0.5 * tau).exp() + 1457.0 / 180.0;
        assert!(rel_close(qp.p_coeffs[4], expected, 1e-13));
    }
    let qp = char_ed(&ModelParams::reference(0.0)).unwrap();
    assert!(rel_close(qp.p_coeffs[0], 259.0 / 260.0, 1e-13));
    assert_eq!(qp.q_coeffs[0], 0.0);
}

#[test]
fn double_infection_constant_term_vanishes_at_invasion_threshold() {
    let p = ModelParams::reference(0.0);
    let c = ed_coefficients(&p, p.r1());
    assert!(c.a[0].abs() < 1e-15);
    let c = ed_coefficients(&p, p.r1() * (1.0 + 1e-9));
    assert!(c.a[0] > 0.0);
    assert!(char_ed(&ModelParams::reference(1.6)).is_err());
}

#[test]
fn disease_free_factor_at_origin() {
    let p = ModelParams::reference(0.0);
    let d0 = char_e0(&p);
    let at0 = d0.eval(Complex64::new(0.0, 0.0));
    assert!(rel_close(at0.re, 1.5 * (1.0 - 480.0 / 13.0), 1e-13));
    assert!(at0.re < 0.0);

    let tau1 = threshold_delay(&p, 1.0).unwrap();
    let d0 = char_e0(&p.with_tau(tau1));
    assert!(d0.eval(Complex64::new(0.0, 0.0)).norm() < 1e-12);
    let roots = rightmost_roots(
        &d0,
        Region {
            re_min: -1.0,
            re_max: 1.0,
            im_max: 1.0,
        },
        0.25,
    );
    assert!(roots[0].norm() < 1e-8, "{roots:?}");
}

#[test]
fn disease_free_factor_is_stable_beyond_first_threshold() {
    let p = ModelParams::reference(8.0);
    let d0 = char_e0(&p);
    let f = |x: f64| d0.eval(Complex64::new(x, 0.0)).re;
    assert!(f(0.0) > 0.0);
    // first sign change scanning leftwards, then bisection
    let mut hi = 0.0;
    while f(hi - 1e-3) > 0.0 {
        hi -= 1e-3;
        assert!(hi > -10.0);
    }
    let mut lo = hi - 1e-3;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    assert!(hi < 0.0);
    let h0 = modulus_poly(&d0).unwrap();
    assert_eq!(h0.kind, ModulusKind::H0);
    assert!(h0.positive_roots().is_empty());
    let omega = root_free_radius(&d0, 0.0);
    assert_eq!(count_roots_right_of(&d0, 0.0, omega).unwrap(), 0);
}

#[test]
fn invasion_factor_signs() {
    let p = ModelParams::reference(0.0);
    let tau2 = threshold_delay(&p, p.r1()).unwrap();
    let (d1, _) = char_es(&p.with_tau(tau2)).unwrap();
    assert!(d1[0].abs() < 1e-8);

    let (d1, _) = char_es(&p.with_tau(2.0)).unwrap();
    let disc = d1[1] * d1[1] - 4.0 * d1[0];
    let roots = if disc >= 0.0 {
        [
            Complex64::new((-d1[1] + disc.sqrt()) / 2.0, 0.0),
            Complex64::new((-d1[1] - disc.sqrt()) / 2.0, 0.0),
        ]
    } else {
        [
            Complex64::new(-d1[1] / 2.0, (-disc).sqrt() / 2.0),
            Complex64::new(-d1[1] / 2.0, -(-disc).sqrt() / 2.0),
        ]
    };
    assert!(roots.iter().all(|r| r.re < 0.0));
    assert!(char_es(&p.with_tau(8.0)).is_err());
}

#[test]
fn routh_hurwitz_cubic_examples() {
    assert!(routh_hurwitz_cubic(1.0, 6.0, 11.0, 6.0));
    assert!(!routh_hurwitz_cubic(1.0, 1.0, 1.0, 2.0));
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let mut checked = 0;
    while checked < 200 {
        let p = common::wide(&mut rng, 0.0);
        let Ok((_, d2)) = char_es(&p) else { continue };
        let c = &d2.p_coeffs;
        let q = &d2.q_coeffs;
        assert!(routh_hurwitz_cubic(c[3], c[2], c[1] + q[1], c[0] + q[0]));
        checked += 1;
    }
}

#[test]
fn single_infection_modulus_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let mut checked = 0;
    while checked < 1000 {
        let tau = rng.gen_range(0.0..10.0);
        let p = common::jittered(&mut rng, tau);
        let Ok((_, d2)) = char_es(&p) else { continue };
        let r0 = reproduction_numbers(&p).r0;
        let hs = modulus_poly(&d2).unwrap();
        assert_eq!(hs.kind, ModulusKind::Hs);
        let (a, pp, d) = (p.a, p.p, p.d);
        assert!(rel_close(
            hs.coeffs[2],
            a * a + pp * pp + d * d * r0 * r0,
            1e-10
        ));
        assert!(rel_close(
            hs.coeffs[1],
            d * d * (a * a + pp * pp) * r0 * r0,
            1e-10
        ));
        assert!(rel_close(
            hs.coeffs[0],
            a * a * pp * pp * d * d * (r0 * r0 - 1.0),
            1e-10
        ));
        // the identities force every coefficient positive, so no crossing
        let roots = poly::roots(&hs.coeffs);
        assert!(roots
            .iter()
            .all(|z| z.re <= 0.0 || z.im.abs() > 1e-9 * z.norm()));
        assert!(hs.positive_roots().is_empty());
        checked += 1;
    }
}

#[test]
fn single_infection_modulus_identities_over_wide_rates() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut checked = 0;
    while checked < 1000 {
        let tau = rng.gen_range(0.0..10.0);
        let p = common::wide(&mut rng, tau);
        let Ok((_, d2)) = char_es(&p) else { continue };
        let r0 = reproduction_numbers(&p).r0;
        let hs = modulus_poly(&d2).unwrap();
        let [a0, a1, a2, _] = [d2.p_coeffs[0], d2.p_coeffs[1], d2.p_coeffs[2], 1.0];
        let (c2, c1) = (-d2.q_coeffs[0], -d2.q_coeffs[1]);
        // the generic forms cancel; allow rounding relative to the cancelled terms
        let eps = 8.0 * f64::EPSILON;
        let (a, pp, d) = (p.a, p.p, p.d);
        let exact = [
            a * a * pp * pp * d * d * (r0 * r0 - 1.0),
            d * d * (a * a + pp * pp) * r0 * r0,
            a * a + pp * pp + d * d * r0 * r0,
        ];
        let magnitude = [
            a0 * a0 + c2 * c2,
            a1 * a1 + 2.0 * (a0 * a2).abs() + c1 * c1,
            a2 * a2 + 2.0 * a1.abs(),
        ];
        for i in 0..3 {
            assert!(
                (hs.coeffs[i] - exact[i]).abs() <= eps * magnitude[i],
                "coefficient {i}: {} vs {}",
                hs.coeffs[i],
                exact[i]
            );
            assert!(hs.coeffs[i] > 0.0);
        }
        assert!(hs.positive_roots().is_empty());
        checked += 1;
    }
}

#[test]
fn single_infection_modulus_at_unit_reproduction_number() {
    let p = ModelParams::reference(0.0);
    let tau1 = threshold_delay(&p, 1.0).unwrap();
    let mut p1 = p.with_tau(tau1);
    // char_es needs R0 > 1; nudge by one part in 10¹²
    p1.tau *= 1.0 - 1e-12;
    let (_, d2) = char_es(&p1).unwrap();
    let hs = modulus_poly(&d2).unwrap();
    assert!(hs.coeffs[0].abs() < 1e-10);
}

#[test]
fn first_hurwitz_determinant_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..1000 {
        let tau = rng.gen_range(0.0..10.0);
        let p = common::wide(&mut rng, tau);
        let r0 = reproduction_numbers(&p).r0;
        let r1 = p.r1();
        let h = modulus_poly(&ed_quasi_polynomial(&ed_coefficients(&p, r0), tau)).unwrap();
        let rep = hurwitz_quintic(&h).unwrap();
        let expected =
            r1 * r1 * p.d * p.d + p.a * p.a * r0 * r0 / (r1 * r1) + p.p * p.p + (p.b + p.q).powi(2);
        assert!(rel_close(rep.delta[0], expected, 1e-10));
        assert!(rep.delta[0] > 0.0);
    }
}

#[test]
fn hurwitz_closed_forms_at_invasion_threshold() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for i in 0..200 {
        let p = if i == 0 {
            ModelParams::reference(0.0)
        } else {
            common::wide(&mut rng, 0.0)
        };
        let r1 = p.r1();
        let (a, d, pp, bq) = (p.a, p.d, p.p, p.b + p.q);
        let h = modulus_poly(&ed_quasi_polynomial(&ed_coefficients(&p, r1), 0.0)).unwrap();
        let rep = hurwitz_quintic(&h).unwrap();

        let f1 = a * a + pp * pp + bq * bq;
        let s = r1 * r1 - 1.0;
        let f2 = d * d * (f1 - a * a) * (f1 - pp * pp) * s + bq * bq * (d * d + bq * bq) * f1;
        let d2 = d.powi(4) * s * s * f1
            + d * d * (f1 * f1 + 2.0 * d * d * f1 - a * a * pp * pp) * s
            + (bq * bq + d * d) * (a * a + d * d + pp * pp) * f1;
        let d3 = d
            * d
            * (d * d * (a * a + pp * pp) * r1.powi(4)
                + (a.powi(4) + a * a * pp * pp + pp.powi(4)) * r1 * r1
                + a * a * pp * pp)
            * f2;
        let d4 = a * a * d * d * pp * pp * bq * bq * s * d3;

        assert!(
            rel_close(rep.delta[1], d2, 1e-9),
            "{} vs {d2}",
            rep.delta[1]
        );
        assert!(
            rel_close(rep.delta[2], d3, 1e-8),
            "{} vs {d3}",
            rep.delta[2]
        );
        assert!(
            rel_close(rep.delta[3], d4, 1e-8),
            "{} vs {d4}",
            rep.delta[3]
        );
        assert_eq!(rep.delta[4], 0.0);
        assert!(rep.delta[..4].iter().all(|&x| x > 0.0));
    }
}

#[test]
fn hurwitz_signs_and_root_count_at_unit_delay() {
    let qp = char_ed(&ModelParams::reference(1.0)).unwrap();
    let h = modulus_poly(&qp).unwrap();
    let rep = hurwitz_quintic(&h).unwrap();
    // H has two positive roots here, so the determinants cannot all be positive
    assert!(rep.delta[0] > 0.0 && rep.delta[1] > 0.0);
    assert!(rep.delta[2] < 0.0 && rep.delta[3] < 0.0 && rep.delta[4] < 0.0);
    assert!(!rep.all_positive);
    assert_eq!(h.positive_roots().len(), 2);
    // yet neither frequency closes the phase condition at this delay
    let omega = root_free_radius(&qp, 0.0);
    assert_eq!(count_roots_right_of(&qp, 0.0, omega).unwrap(), 0);
    let roots = rightmost_roots(
        &qp,
        Region {
            re_min: -1.0,
            re_max: 2.0,
            im_max: 3.0,
        },
        0.25,
    );
    assert!(!roots.is_empty());
    assert!(roots.iter().all(|z| z.re < 0.0));
}

#[test]
fn hurwitz_all_positive_close_to_invasion_threshold() {
    let p = ModelParams::reference(1.55);
    let h = modulus_poly(&char_ed(&p).unwrap()).unwrap();
    assert!(hurwitz_quintic(&h).unwrap().all_positive);
    assert!(h.positive_roots().is_empty());
}

#[test]
fn modulus_root_at_hopf_frequency() {
    let p = ModelParams::reference(0.8357983104);
    let h = modulus_poly(&char_ed(&p).unwrap()).unwrap();
    let roots = h.positive_roots();
    assert!(
        roots.iter().any(|s| (s - 0.17585994).abs() < 1e-5),
        "{roots:?}"
    );
}

#[test]
fn modulus_roots_with_matching_phase_are_imaginary_roots() {
    for tau in [0.0, 0.5, 1.0, 1.2] {
        let qp = char_ed(&ModelParams::reference(tau)).unwrap();
        let h = modulus_poly(&qp).unwrap();
        for omega in h.crossing_frequencies() {
            let z = Complex64::new(0.0, omega);
            let pz = poly::eval_complex(&qp.p_coeffs, z);
            let qz = poly::eval_complex(&qp.q_coeffs, z);
            // e^{-iϖτ*} = −P/Q fixes τ* modulo 2π/ϖ
            let theta = (-pz / qz).arg();
            let tau_star = (-theta).rem_euclid(2.0 * PI) / omega;
            let shifted =
                QuasiPolynomial::new(qp.p_coeffs.clone(), qp.q_coeffs.clone(), tau_star).unwrap();
            let r = shifted.eval(z);
            assert!(
                r.norm() < 1e-8 * shifted.magnitude_scale(z),
                "tau {tau}: {r}"
            );
        }
    }
}

#[test]
fn imaginary_roots_lie_on_modulus_roots() {
    let tau_h = 0.8357983104397;
    let qp = char_ed(&ModelParams::reference(tau_h)).unwrap();
    let roots = rightmost_roots(
        &qp,
        Region {
            re_min: -0.01,
            re_max: 0.01,
            im_max: 2.0,
        },
        0.05,
    );
    let imaginary: Vec<_> = roots.iter().filter(|z| z.re.abs() < 1e-9).collect();
    assert!(!imaginary.is_empty());
    let h = modulus_poly(&qp).unwrap();
    let s_roots = h.positive_roots();
    for z in imaginary {
        assert!(s_roots.iter().any(|s| (s - z.im * z.im).abs() < 1e-6));
    }
}

#[test]
fn undelayed_quintic_spectrum() {
    let qp = char_ed(&ModelParams::reference(0.0)).unwrap();
    let omega = root_free_radius(&qp, 0.0);
    assert_eq!(count_roots_right_of(&qp, 0.0, omega).unwrap(), 2);
    let roots = rightmost_roots(
        &qp,
        Region {
            re_min: -6.0,
            re_max: 1.0,
            im_max: 2.0,
        },
        0.25,
    );
    let expected = [
        Complex64::new(0.03214833, 0.76348925),
        Complex64::new(-0.08306245, 0.0),
        Complex64::new(-3.91260798, 0.0),
        Complex64::new(-5.24904353, 0.0),
    ];
    assert_eq!(roots.len(), expected.len(), "{roots:?}");
    for (r, e) in roots.iter().zip(expected) {
        assert!((r - e).norm() < 1e-6, "{r} vs {e}");
    }
    // against the companion-matrix-free polynomial root finder
    let poly_roots = poly::roots(&qp.undelayed());
    for e in expected {
        assert!(poly_roots.iter().any(|z| (z - e).norm() < 1e-6));
    }
}

#[test]
fn unsupported_shapes_are_rejected() {
    let qp = QuasiPolynomial::new(vec![1.0, 2.0, 3.0, 1.0], vec![1.0], 0.5).unwrap();
    assert!(modulus_poly(&qp).is_err());
    let qp = QuasiPolynomial::new(
        vec![0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        vec![1.0, 1.0, 1.0, 1.0],
        0.5,
    )
    .unwrap();
    assert!(modulus_poly(&qp).is_err());
}

/// A parameter set in one of the three regimes, drawn around the reference.
fn regime_params(rng: &mut ChaCha8Rng, regime: usize) -> ModelParams {
    loop {
        let mut p = common::jittered(rng, 0.0);
        let tau1 = threshold_delay(&p, 1.0).unwrap();
        let Some(tau2) = threshold_delay(&p, p.r1()) else {
            continue;
        };
        p.tau = match regime {
            0 => rng.gen_range(tau1 * 1.02..tau1 * 2.0),
            1 => rng.gen_range(tau2 * 1.02..tau1 * 0.98),
            _ => rng.gen_range(0.0..tau2 * 0.98),
        };
        return p;
    }
}

#[test]
fn argument_principle_agrees_with_newton_census() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    for i in 0..20 {
        let p = regime_params(&mut rng, i % 3);
        let qp = match i % 3 {
            0 => char_e0(&p),
            1 => char_es(&p).unwrap().1,
            _ => char_ed(&p).unwrap(),
        };
        let radius = root_free_radius(&qp, 0.0);
        let count = count_roots_right_of(&qp, 0.0, radius).unwrap();
        let roots = rightmost_roots(
            &qp,
            Region {
                re_min: 0.0,
                re_max: radius,
                im_max: radius,
            },
            0.25,
        );
        assert_eq!(count, rhp_census(&roots), "set {i}: {p:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn last_determinant_shares_sign_of_fourth(seed in any::<u64>(), tau in 0.0..1.5f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::jittered(&mut rng, tau);
        let r0 = reproduction_numbers(&p).r0;
        let h = modulus_poly(&ed_quasi_polynomial(&ed_coefficients(&p, r0), tau)).unwrap();
        let rep = hurwitz_quintic(&h).unwrap();
        if h.coeffs[0] > 0.0 && rep.delta[3] != 0.0 {
            prop_assert_eq!(rep.delta[4] > 0.0, rep.delta[3] > 0.0);
        }
    }

    #[test]
    fn modulus_polynomial_matches_direct_moduli(seed in any::<u64>(), tau in 0.0..1.5f64, s in 0.0..20.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::jittered(&mut rng, tau);
        let r0 = reproduction_numbers(&p).r0;
        let qp = ed_quasi_polynomial(&ed_coefficients(&p, r0), tau);
        let h = modulus_poly(&qp).unwrap();
        let z = Complex64::new(0.0, s.sqrt());
        let pz = poly::eval_complex(&qp.p_coeffs, z).norm_sqr();
        let qz = poly::eval_complex(&qp.q_coeffs, z).norm_sqr();
        prop_assert!((h.eval(s) - (pz - qz)).abs() <= 1e-10 * (pz + qz).max(1.0));
    }
}

/// Leading principal minors of the Hurwitz matrix of `s⁵ + h₁s⁴ + … + h₅`,
/// each as a full determinant.
fn hurwitz_minors(h: &[f64]) -> [f64; 5] {
    let coef = |k: i64| match k {
        0 => 1.0,
        1..=5 => h[k as usize - 1],
        _ => 0.0,
    };
    let mut full = [[Complex64::new(0.0, 0.0); 5]; 5];
    for (i, row) in full.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = Complex64::new(coef(2 * j as i64 - i as i64 + 1), 0.0);
        }
    }
    let mut out = [0.0; 5];
    out[0] = full[0][0].re;
    out[1] = common::det::<2>([[full[0][0], full[0][1]], [full[1][0], full[1][1]]]).re;
    out[2] = common::det::<3>(core::array::from_fn(|i| {
        core::array::from_fn(|j| full[i][j])
    }))
    .re;
    out[3] = common::det::<4>(core::array::from_fn(|i| {
        core::array::from_fn(|j| full[i][j])
    }))
    .re;
    out[4] = common::det::<5>(full).re;
    out
}

fn minors_at(p: &ModelParams, r0: f64) -> [f64; 5] {
    let h = modulus_poly(&ed_quasi_polynomial(&ed_coefficients(p, r0), 0.0)).unwrap();
    hurwitz_minors(&h.descending_tail())
}

#[test]
fn hurwitz_minors_match_the_recurrence() {
    let p = ModelParams::reference(0.0);
    for r0 in [17.5, 20.0, 25.0, 30.0, 36.0] {
        let h = modulus_poly(&ed_quasi_polynomial(&ed_coefficients(&p, r0), 0.0)).unwrap();
        let rep = hurwitz_quintic(&h).unwrap();
        let full = minors_at(&p, r0);
        for i in 0..5 {
            assert!(
                rel_close(rep.delta[i], full[i], 1e-8),
                "R0 {r0} Δ{}: {} vs {}",
                i + 1,
                rep.delta[i],
                full[i]
            );
        }
    }
}

#[test]
fn empirical_hurwitz_boundary() {
    let p = ModelParams::reference(0.0);
    let b = hurwitz_boundary(&p).unwrap();
    let tau2 = threshold_delay(&p, 17.0).unwrap();
    assert!(b.r2 > 17.0 && b.r2 < 480.0 / 13.0);
    // positive at τ = 1.55, not at τ = 1.0
    assert!(b.tau > 1.0 && b.tau < 1.55 && b.tau < tau2);
    assert!((reproduction_numbers(&p.with_tau(b.tau)).r0 - b.r2).abs() < 1e-9 * b.r2);
    let below = minors_at(&p, b.r2 * (1.0 - 1e-9));
    let above = minors_at(&p, b.r2 * (1.0 + 1e-9));
    assert!(below.iter().all(|&d| d > 0.0), "{below:?}");
    assert!(!(above[b.failing] > 0.0), "{above:?}");
    // every sample between R1 and the boundary is Hurwitz-positive
    for i in 1..50 {
        let r0 = 17.0 + (b.r2 - 17.0) * i as f64 / 50.0;
        assert!(minors_at(&p, r0).iter().all(|&d| d > 0.0), "R0 {r0}");
    }
}

#[test]
fn no_boundary_without_double_infection() {
    let mut p = ModelParams::reference(0.0);
    p.c = 100.0;
    assert!(p.r0_undelayed() < p.r1());
    assert!(hurwitz_boundary(&p).is_none());
}
