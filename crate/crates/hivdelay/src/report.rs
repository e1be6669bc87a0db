//! JSON reports. Every number is rounded to 12 significant digits before
//! serialisation so that reruns produce identical bytes.

use std::path::Path;

use hivdelay_core::hopf::{default_omega_cap, find_hopf, no_crossing_certificate};
use hivdelay_core::model::{reproduction_numbers, threshold_delay, EquilibriumKind, ModelParams};
use hivdelay_core::spectral::{
    char_e0, char_ed, char_es, count_roots_right_of, hurwitz_boundary, hurwitz_quintic,
    modulus_poly, rightmost_roots, root_free_radius, QuasiPolynomial, Region, DEFAULT_SEED_SPACING,
};
use hivdelay_core::{Complex64, Error as CoreError};
use serde_json::{json, Value};

use crate::error::{CliError, Result};

/// `x` rounded to 12 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    Value::from(rounded)
}

fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn roots_json(roots: &[Complex64]) -> Value {
    Value::Array(
        roots
            .iter()
            .map(|z| json!({"re": num(z.re), "im": num(z.im)}))
            .collect(),
    )
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialise");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn thresholds(params: &ModelParams) -> Value {
    let r1 = params.r1();
    json!({
        "R0_at_0": num(params.r0_undelayed()),
        "R1": num(r1),
        "tau1": opt_num(threshold_delay(params, 1.0)),
        "tau2": opt_num(threshold_delay(params, r1)),
    })
}

fn census(qp: &QuasiPolynomial, re_min: f64, im_max: f64) -> Result<(Vec<Complex64>, usize)> {
    let radius = root_free_radius(qp, 0.0);
    let count = count_roots_right_of(qp, 0.0, radius)?;
    let region = Region {
        re_min,
        re_max: radius,
        im_max,
    };
    Ok((rightmost_roots(qp, region, DEFAULT_SEED_SPACING), count))
}

fn sorted(mut roots: Vec<Complex64>) -> Vec<Complex64> {
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    roots
}

/// Roots of the monic quadratic `ξ² + c₁ξ + c₀`, upper representative only
/// for a complex pair.
fn quadratic_roots(c0: f64, c1: f64) -> Vec<Complex64> {
    let disc = c1 * c1 - 4.0 * c0;
    if disc >= 0.0 {
        let s = disc.sqrt();
        // avoid cancellation in the smaller root
        let big = -0.5 * (c1 + c1.signum() * s);
        let other = if big != 0.0 { c0 / big } else { 0.0 };
        vec![Complex64::new(big, 0.0), Complex64::new(other, 0.0)]
    } else {
        vec![Complex64::new(-0.5 * c1, 0.5 * (-disc).sqrt())]
    }
}

/// Spectrum of the linearisation at `kind`: the roots found in
/// `[re_min, R] × [0, im_max]`, the right-half-plane count from the argument
/// principle, and for the double-infection state the Hurwitz determinants.
pub fn spectrum(
    params: &ModelParams,
    kind: EquilibriumKind,
    re_min: f64,
    im_max: f64,
) -> Result<Value> {
    let (roots, rhp_count, hurwitz, modulus_roots) = match kind {
        EquilibriumKind::DiseaseFree => {
            let d0 = char_e0(params);
            let (mut roots, count) = census(&d0, re_min, im_max)?;
            roots.extend([-params.d, -params.b, -params.q].map(|r| Complex64::new(r, 0.0)));
            let h0 = modulus_poly(&d0)?;
            (roots, count, Value::Null, h0.positive_roots())
        }
        EquilibriumKind::SingleInfection => {
            let (d1, d2) = char_es(params)?;
            let (mut roots, count) = census(&d2, re_min, im_max)?;
            let invasion = quadratic_roots(d1[0], d1[1]);
            let unstable = invasion
                .iter()
                .map(|z| match (z.re > 0.0, z.im == 0.0) {
                    (false, _) => 0,
                    (true, true) => 1,
                    (true, false) => 2,
                })
                .sum::<usize>();
            roots.extend(invasion);
            let hs = modulus_poly(&d2)?;
            (roots, count + unstable, Value::Null, hs.positive_roots())
        }
        EquilibriumKind::DoubleInfection => {
            let qp = char_ed(params)?;
            let (roots, count) = census(&qp, re_min, im_max)?;
            let h = modulus_poly(&qp)?;
            let rep = hurwitz_quintic(&h)?;
            let hurwitz = json!({
                "delta": rep.delta.iter().map(|d| num(*d)).collect::<Vec<_>>(),
                "stable": rep.all_positive,
            });
            (roots, count, hurwitz, h.positive_roots())
        }
    };
    Ok(json!({
        "equilibrium": kind.label(),
        "tau": num(params.tau),
        "R0": num(reproduction_numbers(params).r0),
        "roots": roots_json(&sorted(roots)),
        "hurwitz": hurwitz,
        "modulus_positive_roots": modulus_roots.into_iter().map(num).collect::<Vec<_>>(),
        "rhp_count": rhp_count,
    }))
}

/// First loss of Hurwitz positivity above `R₁`, found by scanning `R₀`.
pub fn hurwitz_boundary_json(params: &ModelParams) -> Value {
    match hurwitz_boundary(params) {
        Some(b) => json!({
            "R2_empirical": num(b.r2),
            "tau": num(b.tau),
            "failing_delta": b.failing + 1,
        }),
        None => Value::Null,
    }
}

/// Hopf point and, when the no-crossing certificate holds between it and the
/// invasion threshold, the certified stability range.
pub fn hopf(
    params: &ModelParams,
    tau_box: [f64; 2],
    omega_box: Option<[f64; 2]>,
    omega_cap: Option<f64>,
) -> Result<Value> {
    let Some(tau2) = threshold_delay(params, params.r1()) else {
        return Ok(json!({"hopf": Value::Null}));
    };
    let boundary = hurwitz_boundary_json(params);
    let search_tau = (tau_box[0], tau_box[1].min(tau2));
    if !(search_tau.0 < search_tau.1) {
        return Ok(json!({"hopf": Value::Null, "hurwitz_boundary": boundary}));
    }
    let omega_box = omega_box.unwrap_or_else(|| [0.0, default_omega_cap(params, search_tau)]);
    let Some(hp) = find_hopf(
        params,
        (tau_box[0], tau_box[1]),
        (omega_box[0], omega_box[1]),
    ) else {
        return Ok(
            json!({"hopf": Value::Null, "omega_box": [num(omega_box[0]), num(omega_box[1])]}),
        );
    };

    let range = (hp.tau_h, tau2);
    let cap = omega_cap.unwrap_or_else(|| default_omega_cap(params, range));
    let (certified_range, certificate) = match no_crossing_certificate(params, range, cap) {
        Ok(cert) => (
            if cert.certified {
                json!([num(range.0), num(range.1)])
            } else {
                Value::Null
            },
            json!({
                "certified": cert.certified,
                "omega_cap": num(cap),
                "tail_min": num(cert.tail_min),
                "grid_min_residual": num(cert.grid_min_residual),
                "refinement_level": cert.refinement_level,
            }),
        ),
        Err(CoreError::Inconclusive { level }) => (
            Value::Null,
            json!({"certified": false, "omega_cap": num(cap), "inconclusive_level": level}),
        ),
        Err(e) => return Err(e.into()),
    };
    Ok(json!({
        "hopf": {
            "tau": num(hp.tau_h),
            "omega": num(hp.omega_h),
            "R_h": num(hp.r_h),
            "dD_dxi": [num(hp.dd_dxi.re), num(hp.dd_dxi.im)],
            "re_dxi_dtau": num(hp.re_dxi_dtau),
            "certified_range": certified_range,
        },
        "omega_box": [num(omega_box[0]), num(omega_box[1])],
        "certificate": certificate,
        "hurwitz_boundary": boundary,
    }))
}
