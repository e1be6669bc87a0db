//! Property suites run against the configured parameter set. Random draws
//! scale each rate of the configured set by a factor in [0.8, 1.25] and are
//! seeded, so a given config always runs the same checks.

use hivdelay_core::dde::{integrate, HistorySpec};
use hivdelay_core::hopf::{
    default_omega_cap, find_hopf, no_crossing_certificate, seed_solutions, transversality,
};
use hivdelay_core::lyapunov::{log_mean_inequality, v0_eval, vs_eval};
use hivdelay_core::model::{
    boundedness_certificate, equilibria, reproduction_numbers, rhs, threshold_delay, ModelParams,
    StateVector,
};
use hivdelay_core::spectral::{
    char_e0, char_ed, char_es, count_roots_right_of, ed_coefficients, ed_quasi_polynomial,
    hurwitz_quintic, modulus_poly, rhp_census, rightmost_roots, root_free_radius, QuasiPolynomial,
    Region, DEFAULT_SEED_SPACING,
};
use hivdelay_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::Suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(suite: Suite, name: &'static str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            suite,
            name,
            status: Status::from_bool(ok),
            detail: detail.into(),
        }
    }

    fn skip(suite: Suite, name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            suite,
            name,
            status: Status::Skip,
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

fn jitter(rng: &mut ChaCha8Rng, base: &ModelParams, tau: f64) -> ModelParams {
    let mut p = base.with_tau(tau);
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

pub fn run_suite(suite: Suite, params: &ModelParams, seed: u64) -> Vec<Check> {
    suite
        .members()
        .iter()
        .flat_map(|s| match s {
            Suite::Equilibria => equilibria_suite(params, seed),
            Suite::Spectral => spectral_suite(params, seed),
            Suite::Hopf => hopf_suite(params),
            Suite::Wellposedness => wellposedness_suite(params, seed),
            Suite::Lyapunov => lyapunov_suite(params, seed),
            Suite::All => unreachable!("expanded by members()"),
        })
        .collect()
}

pub fn checks_json(checks: &[Check]) -> Value {
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let skipped = checks.iter().filter(|c| c.status == Status::Skip).count();
    json!({
        "passed": checks.len() - failed - skipped,
        "failed": failed,
        "skipped": skipped,
        "checks": checks.iter().map(|c| json!({
            "suite": c.suite.name(),
            "name": c.name,
            "status": c.status.as_str(),
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// equilibria

pub fn equilibria_suite(params: &ModelParams, seed: u64) -> Vec<Check> {
    let s = Suite::Equilibria;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    let mut admissibility_ok = true;
    for _ in 0..200 {
        let tau = rng.gen_range(0.0..10.0);
        let p = jitter(&mut rng, params, tau);
        let th = reproduction_numbers(&p);
        let eqs = equilibria(&p);
        admissibility_ok &=
            eqs[1].admissible == (th.r0 >= 1.0) && eqs[2].admissible == (th.r0 >= th.r1);
        for e in eqs.iter().filter(|e| e.admissible) {
            let r = rhs(&p, &e.point, &e.point);
            let scale = e.point.max_abs().max(1.0) * (1.0 + p.k + p.c);
            worst = worst.max(r.max_abs() / scale);
        }
    }
    out.push(Check::new(
        s,
        "fixed_point_residual",
        worst < 1e-10,
        format!("worst scaled residual {worst:.3e}"),
    ));
    out.push(Check::new(
        s,
        "admissibility",
        admissibility_ok,
        "weak inequalities on R0 and R1",
    ));

    let mut disagreements = 0;
    for _ in 0..1000 {
        let tau = rng.gen_range(0.0..10.0);
        let th = reproduction_numbers(&jitter(&mut rng, params, tau));
        if (th.r0 - th.r1).abs() > 1e-9 * th.r1 && ((th.rd > 1.0) != (th.r0 > th.r1)) {
            disagreements += 1;
        }
    }
    out.push(Check::new(
        s,
        "threshold_identity",
        disagreements == 0,
        format!("{disagreements} sign disagreements between Rd - 1 and R0 - R1 in 1000 draws"),
    ));

    let r1 = params.r1();
    let mut worst = 0.0f64;
    for target in [1.0, r1] {
        if let Some(t) = threshold_delay(params, target) {
            worst =
                worst.max((reproduction_numbers(&params.with_tau(t)).r0 - target).abs() / target);
        }
    }
    out.push(Check::new(
        s,
        "threshold_delays",
        worst < 1e-12,
        format!("relative error {worst:.3e}"),
    ));
    out
}

// ---------------------------------------------------------------------------
// spectral

/// Right-half-plane roots of `qp` by the argument principle and by a Newton
/// census of `[0, R] × [0, R]`.
fn two_counts(qp: &QuasiPolynomial) -> hivdelay_core::Result<(usize, usize)> {
    let radius = root_free_radius(qp, 0.0);
    let count = count_roots_right_of(qp, 0.0, radius)?;
    let roots = rightmost_roots(
        qp,
        Region {
            re_min: 0.0,
            re_max: radius,
            im_max: radius,
        },
        DEFAULT_SEED_SPACING,
    );
    Ok((count, rhp_census(&roots)))
}

pub fn hs_identities(params: &ModelParams, seed: u64, draws: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut positive_roots = 0;
    let mut n = 0;
    while n < draws {
        let tau = rng.gen_range(0.0..10.0);
        let p = jitter(&mut rng, params, tau);
        let Ok((_, d2)) = char_es(&p) else { continue };
        let Ok(hs) = modulus_poly(&d2) else { continue };
        let r0 = reproduction_numbers(&p).r0;
        let (a, pp, d) = (p.a, p.p, p.d);
        let exact = [
            a * a * pp * pp * d * d * (r0 * r0 - 1.0),
            d * d * (a * a + pp * pp) * r0 * r0,
            a * a + pp * pp + d * d * r0 * r0,
        ];
        for (got, want) in hs.coeffs.iter().zip(exact) {
            worst = worst.max((got - want).abs() / want.abs());
        }
        positive_roots += hs.positive_roots().len();
        n += 1;
    }
    Check::new(
        Suite::Spectral,
        "hs_identities",
        worst <= 1e-10 && positive_roots == 0,
        format!("{draws} draws: worst relative error {worst:.3e}, {positive_roots} positive roots"),
    )
}

pub fn delta1_closed_form(params: &ModelParams, seed: u64, draws: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let tau = rng.gen_range(0.0..10.0);
        let p = jitter(&mut rng, params, tau);
        let r0 = reproduction_numbers(&p).r0;
        let r1 = p.r1();
        let h = modulus_poly(&ed_quasi_polynomial(&ed_coefficients(&p, r0), tau))
            .expect("quintic shape");
        let d1 = hurwitz_quintic(&h).expect("quintic shape").delta[0];
        let exact =
            r1 * r1 * p.d * p.d + p.a * p.a * r0 * r0 / (r1 * r1) + p.p * p.p + (p.b + p.q).powi(2);
        worst = worst.max((d1 - exact).abs() / exact);
    }
    Check::new(
        Suite::Spectral,
        "delta1_closed_form",
        worst <= 1e-10,
        format!("{draws} draws: worst relative error {worst:.3e}"),
    )
}

/// One randomised oracle comparison: the argument-principle count, the Newton
/// census and the certificate that applies in the parameter regime.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCase {
    pub regime: &'static str,
    pub tau: f64,
    pub count: usize,
    pub census: usize,
    pub certificate: &'static str,
    pub consistent: bool,
}

/// `regime` is 0 (R0 < 1), 1 (1 < R0 < R1) or 2 (R0 > R1).
pub fn oracle_case(p: &ModelParams, regime: usize) -> hivdelay_core::Result<OracleCase> {
    match regime {
        0 => {
            let qp = char_e0(p);
            let (count, census) = two_counts(&qp)?;
            let no_crossing = modulus_poly(&qp)?.positive_roots().is_empty();
            Ok(OracleCase {
                regime: "R0<1",
                tau: p.tau,
                count,
                census,
                certificate: "H0 has no positive root",
                consistent: count == census && count == 0 && no_crossing,
            })
        }
        1 => {
            let (d1, d2) = char_es(p)?;
            let (count, census) = two_counts(&d2)?;
            let no_crossing = modulus_poly(&d2)?.positive_roots().is_empty();
            // the invasion quadratic is stable iff both lower coefficients are positive
            let invasion_stable = d1[0] > 0.0 && d1[1] > 0.0;
            Ok(OracleCase {
                regime: "1<R0<R1",
                tau: p.tau,
                count,
                census,
                certificate: "Hs has no positive root, invasion factor stable",
                consistent: count == census && count == 0 && no_crossing && invasion_stable,
            })
        }
        _ => {
            let qp = char_ed(p)?;
            let (count, census) = two_counts(&qp)?;
            let tau2 = threshold_delay(p, p.r1()).expect("R0 > R1 somewhere");
            let hurwitz = hurwitz_quintic(&modulus_poly(&qp)?)?.all_positive;
            let hopf = find_hopf(p, (0.0, tau2), (0.0, default_omega_cap(p, (0.0, tau2))));
            let (certificate, consistent) = match hopf {
                Some(hp) if p.tau < hp.tau_h => ("below the Hopf delay: unstable", count > 0),
                Some(hp) => {
                    let range = (hp.tau_h, tau2);
                    let cert = no_crossing_certificate(p, range, default_omega_cap(p, range))?;
                    (
                        "above the Hopf delay: Hurwitz or no-crossing certificate",
                        count == 0 && (hurwitz || cert.certified),
                    )
                }
                None => {
                    let range = (0.0, tau2);
                    let cert = no_crossing_certificate(p, range, default_omega_cap(p, range))?;
                    (
                        "no Hopf point: Hurwitz or no-crossing certificate",
                        count == 0 && (hurwitz || cert.certified),
                    )
                }
            };
            Ok(OracleCase {
                regime: "R0>R1",
                tau: p.tau,
                count,
                census,
                certificate,
                consistent: consistent && count == census,
            })
        }
    }
}

/// Parameters in the given regime, or `None` if the configured set cannot
/// reach it by varying the delay.
pub fn regime_params(
    rng: &mut ChaCha8Rng,
    base: &ModelParams,
    regime: usize,
) -> Option<ModelParams> {
    for _ in 0..100 {
        let mut p = jitter(rng, base, 0.0);
        let Some(tau1) = threshold_delay(&p, 1.0) else {
            if regime == 0 {
                p.tau = rng.gen_range(0.0..10.0);
                return Some(p);
            }
            continue;
        };
        let tau2 = threshold_delay(&p, p.r1());
        p.tau = match (regime, tau2) {
            (0, _) => rng.gen_range(tau1 * 1.02..tau1 * 2.0 + 0.1),
            (1, Some(t2)) => rng.gen_range(t2 * 1.02..tau1 * 0.98),
            (1, None) => rng.gen_range(0.0..tau1 * 0.98),
            (_, Some(t2)) => rng.gen_range(0.0..t2 * 0.98),
            (_, None) => continue,
        };
        return Some(p);
    }
    None
}

pub fn oracle_agreement(params: &ModelParams, seed: u64, sets: usize) -> (Check, Vec<OracleCase>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    let mut failures = Vec::new();
    for i in 0..sets {
        let Some(p) = regime_params(&mut rng, params, i % 3) else {
            continue;
        };
        match oracle_case(&p, i % 3) {
            Ok(c) => {
                if !c.consistent {
                    failures.push(format!(
                        "set {i} ({}, tau {:.4}): count {} census {}",
                        c.regime, c.tau, c.count, c.census
                    ));
                }
                cases.push(c);
            }
            Err(e) => failures.push(format!("set {i}: {e}")),
        }
    }
    let check = if cases.is_empty() && failures.is_empty() {
        Check::skip(Suite::Spectral, "oracle_agreement", "no regime reachable")
    } else {
        Check::new(
            Suite::Spectral,
            "oracle_agreement",
            failures.is_empty(),
            if failures.is_empty() {
                format!("{} sets consistent", cases.len())
            } else {
                failures.join("; ")
            },
        )
    };
    (check, cases)
}

pub fn spectral_suite(params: &ModelParams, seed: u64) -> Vec<Check> {
    let mut out = vec![
        hs_identities(params, seed, 1000),
        delta1_closed_form(params, seed.wrapping_add(1), 1000),
        oracle_agreement(params, seed.wrapping_add(2), 20).0,
    ];
    let p0 = params.with_tau(0.0);
    let th = reproduction_numbers(&p0);
    if th.r0 > th.r1 {
        let check = char_ed(&p0).map_err(|e| e.to_string()).and_then(|qp| {
            let (count, census) = two_counts(&qp).map_err(|e| e.to_string())?;
            Ok((count, census))
        });
        out.push(match check {
            Ok((count, census)) => Check::new(
                Suite::Spectral,
                "undelayed_double_infection_census",
                count == census,
                format!("argument principle {count}, Newton census {census}"),
            ),
            Err(e) => Check::new(
                Suite::Spectral,
                "undelayed_double_infection_census",
                false,
                e,
            ),
        });
    }
    out
}

// ---------------------------------------------------------------------------
// hopf

fn rhp_count(p: &ModelParams) -> hivdelay_core::Result<usize> {
    let qp = char_ed(p)?;
    count_roots_right_of(&qp, 0.0, root_free_radius(&qp, 0.0))
}

pub fn hopf_suite(params: &ModelParams) -> Vec<Check> {
    let s = Suite::Hopf;
    let Some(tau2) = threshold_delay(params, params.r1()) else {
        return vec![Check::skip(
            s,
            "hopf_point",
            "double-infection state never admissible",
        )];
    };
    let box_t = (0.0, tau2);
    let box_w = (0.0, default_omega_cap(params, box_t));
    let Some(hp) = find_hopf(params, box_t, box_w) else {
        return vec![Check::skip(
            s,
            "hopf_point",
            "no crossing in the admissible delay range",
        )];
    };
    let mut out = Vec::new();

    let residual = char_ed(&params.with_tau(hp.tau_h))
        .map(|qp| qp.eval(Complex64::new(0.0, hp.omega_h)).norm())
        .unwrap_or(f64::INFINITY);
    let tr = transversality(params, &hp);
    out.push(Check::new(
        s,
        "hopf_point",
        residual < 1e-9 && matches!(tr, Ok(v) if v != 0.0),
        format!(
            "tau {:.10}, omega {:.10}, |D| {residual:.3e}, Re dxi/dtau {:?}",
            hp.tau_h, hp.omega_h, tr
        ),
    ));

    let sols = seed_solutions(params, box_t, box_w);
    let spread = sols
        .iter()
        .map(|(t, w)| (t - hp.tau_h).abs().max((w - hp.omega_h).abs()))
        .fold(0.0, f64::max);
    out.push(Check::new(
        s,
        "seed_independence",
        !sols.is_empty() && spread < 1e-9,
        format!("{} converged seeds, max spread {spread:.3e}", sols.len()),
    ));

    let below = (hp.tau_h - 0.05).max(0.0);
    let above = (hp.tau_h + 0.05).min(0.5 * (hp.tau_h + tau2));
    let counts = (
        rhp_count(&params.with_tau(below)),
        rhp_count(&params.with_tau(above)),
    );
    out.push(match counts {
        (Ok(b), Ok(a)) => Check::new(
            s,
            "crossing_direction",
            b > a && tr.as_ref().is_ok_and(|v| *v < 0.0),
            format!("{b} unstable roots at tau {below:.4}, {a} at tau {above:.4}"),
        ),
        (Err(e), _) | (_, Err(e)) => Check::new(s, "crossing_direction", false, e.to_string()),
    });

    let range = (hp.tau_h, tau2);
    let cap = default_omega_cap(params, range);
    out.push(match no_crossing_certificate(params, range, cap) {
        Ok(cert) => {
            let counts: Vec<_> = (1..=5)
                .map(|i| {
                    rhp_count(&params.with_tau(range.0 + (range.1 - range.0) * i as f64 / 6.0))
                })
                .collect();
            let constant = counts
                .iter()
                .all(|c| matches!((c, &counts[0]), (Ok(a), Ok(b)) if a == b));
            Check::new(
                s,
                "certificate_soundness",
                cert.certified && constant,
                format!(
                    "certified {} on ({:.6}, {:.6}) with cap {cap:.4}, counts {:?}",
                    cert.certified,
                    range.0,
                    range.1,
                    counts
                        .iter()
                        .map(|c| c.as_ref().ok().copied())
                        .collect::<Vec<_>>()
                ),
            )
        }
        Err(e) => Check::new(s, "certificate_soundness", false, e.to_string()),
    });
    out
}

// ---------------------------------------------------------------------------
// well-posedness

pub fn random_history(rng: &mut ChaCha8Rng, params: &ModelParams) -> StateVector {
    let x0 = params.lambda / params.d;
    StateVector::new(
        rng.gen_range(0.0..1.5 * x0),
        rng.gen_range(0.0..5.0),
        rng.gen_range(0.0..2.0),
        rng.gen_range(0.0..100.0),
        rng.gen_range(0.0..500.0),
    )
}

pub fn wellposedness_suite(params: &ModelParams, seed: u64) -> Vec<Check> {
    let s = Suite::Wellposedness;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst_neg, mut bound_failures, mut errors) = (0.0f64, 0usize, Vec::new());
    let t_end = 100.0;
    for _ in 0..50 {
        let h = random_history(&mut rng, params);
        let traj = match integrate(params, HistorySpec::Constant(h), t_end, 1e-8, 1e-10) {
            Ok(t) => t,
            Err(e) => {
                errors.push(e.to_string());
                continue;
            }
        };
        let samples = traj.uniform_samples(2000);
        let mut scale = StateVector::ZERO;
        for (_, u) in &samples {
            scale = scale.zip_map(*u, |a, c| a.max(c.abs()));
        }
        for (_, u) in &samples {
            for i in 0..5 {
                if u[i] < 0.0 {
                    worst_neg = worst_neg.max(-u[i] / scale[i].max(f64::MIN_POSITIVE));
                }
            }
        }
        let start = params.tau + 1e-3;
        let stop = t_end - params.tau - 1e-3;
        if stop > start {
            let times: Vec<f64> = (0..100)
                .map(|i| start + (stop - start) * i as f64 / 99.0)
                .collect();
            match boundedness_certificate(params, &traj, &times) {
                Ok(rep) => bound_failures += rep.samples.iter().filter(|x| !x.holds).count(),
                Err(e) => errors.push(e.to_string()),
            }
        }
    }
    vec![
        Check::new(
            s,
            "nonnegativity",
            worst_neg <= 1e-9 && errors.is_empty(),
            format!("50 histories: worst relative negative excursion {worst_neg:.3e}"),
        ),
        Check::new(
            s,
            "boundedness",
            bound_failures == 0 && errors.is_empty(),
            if errors.is_empty() {
                format!("{bound_failures} failing samples")
            } else {
                errors.join("; ")
            },
        ),
    ]
}

// ---------------------------------------------------------------------------
// lyapunov

/// Largest `rate / scale` over `n` samples along each of `runs` trajectories,
/// with delays drawn from `taus`.
fn worst_rate<F>(
    params: &ModelParams,
    rng: &mut ChaCha8Rng,
    taus: (f64, f64),
    runs: usize,
    eval: F,
) -> Result<f64, String>
where
    F: Fn(
        &ModelParams,
        &hivdelay_core::dde::Trajectory,
        f64,
    ) -> hivdelay_core::Result<hivdelay_core::lyapunov::LyapunovSample>,
{
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..runs {
        let p = params.with_tau(rng.gen_range(taus.0..taus.1));
        let mut h = random_history(rng, &p);
        // logarithms in V_s need strictly positive x, y, v
        h.x = h.x.max(1.0);
        h.y = h.y.max(0.01);
        h.v = h.v.max(0.1);
        // near the threshold y can dip to 1e-10; the logarithmic terms need an
        // absolute tolerance well below that
        let traj = integrate(&p, HistorySpec::Constant(h), 300.0, 1e-10, 1e-12)
            .map_err(|e| e.to_string())?;
        for i in 0..100 {
            let t = 0.01 + (traj.end() - 0.02) * i as f64 / 99.0;
            let s = eval(&p, &traj, t).map_err(|e| e.to_string())?;
            // an unresolved difference is tolerated when its error estimate
            // cannot change the verdict
            if !s.richardson_ok && s.rate + 2.0 * s.rate_error > 1e-8 * s.scale {
                return Err(format!(
                    "unresolved rate at t = {t} (tau {}, history {:?}): {s:?}",
                    p.tau,
                    h.to_array()
                ));
            }
            worst = worst.max(s.rate / s.scale);
        }
    }
    Ok(worst)
}

pub fn lyapunov_suite(params: &ModelParams, seed: u64) -> Vec<Check> {
    let s = Suite::Lyapunov;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let tau1 = threshold_delay(params, 1.0);
    let tau2 = threshold_delay(params, params.r1());

    let v0_range = match tau1 {
        Some(t1) => (t1 + 0.1, t1 + 5.0),
        None => (0.0, 5.0),
    };
    out.push(match worst_rate(params, &mut rng, v0_range, 20, v0_eval) {
        Ok(w) => Check::new(
            s,
            "v0_nonincreasing",
            w <= 1e-8,
            format!("20 runs: max rate/scale {w:.3e}"),
        ),
        Err(e) => Check::new(s, "v0_nonincreasing", false, e),
    });

    out.push(match tau1 {
        Some(t1) => {
            let lo = tau2.map_or(0.0, |t2| t2 + 0.02);
            if lo < t1 - 0.02 {
                match worst_rate(params, &mut rng, (lo, t1 - 0.02), 20, vs_eval) {
                    Ok(w) => Check::new(
                        s,
                        "vs_nonincreasing",
                        w <= 1e-8,
                        format!("20 runs: max rate/scale {w:.3e}"),
                    ),
                    Err(e) => Check::new(s, "vs_nonincreasing", false, e),
                }
            } else {
                Check::skip(s, "vs_nonincreasing", "no delay with 1 < R0 < R1")
            }
        }
        None => Check::skip(s, "vs_nonincreasing", "R0 < 1 for every delay"),
    });

    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let n = rng.gen_range(1..6);
        let a: Vec<f64> = (0..n)
            .map(|_| 10f64.powf(rng.gen_range(-3.0..3.0)))
            .collect();
        let b: Vec<f64> = (0..n)
            .map(|_| 10f64.powf(rng.gen_range(-3.0..3.0)))
            .collect();
        worst = worst.max(log_mean_inequality(&a, &b).expect("positive inputs"));
    }
    out.push(Check::new(
        s,
        "log_mean_inequality",
        worst <= 1e-12,
        format!("1000 draws: max {worst:.3e}"),
    ));
    out
}
