//! TOML run configuration.
//!
//! Model rates sit at the top level (any that are omitted take their
//! reference values); each `[[scenario]]` table selects one task by `kind`.
//!
//! ```toml
//! tau = 1.6
//!
//! [[scenario]]
//! kind = "thresholds"
//!
//! [[scenario]]
//! kind = "simulate"
//! t_end = 400
//! history = "E_s"
//! ```

use std::path::Path;

use hivdelay_core::model::{
    equilibrium, reproduction_numbers, EquilibriumKind, ModelParams, StateVector,
};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    lambda: Option<f64>,
    d: Option<f64>,
    beta: Option<f64>,
    a: Option<f64>,
    alpha: Option<f64>,
    b: Option<f64>,
    k: Option<f64>,
    p: Option<f64>,
    c: Option<f64>,
    q: Option<f64>,
    tau: Option<f64>,
    seed: Option<u64>,
    #[serde(default, rename = "scenario")]
    scenarios: Vec<Scenario>,
}

/// Initial history: an equilibrium label (perturbed as in [`default_history`])
/// or explicit `[x, y, z, v, w]`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum HistoryConfig {
    Equilibrium(String),
    Values([f64; 5]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Functional {
    V0,
    Vs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Equilibria,
    Spectral,
    Hopf,
    Wellposedness,
    Lyapunov,
    All,
}

impl Suite {
    pub fn members(self) -> &'static [Suite] {
        match self {
            Suite::All => &[
                Suite::Equilibria,
                Suite::Spectral,
                Suite::Hopf,
                Suite::Wellposedness,
                Suite::Lyapunov,
            ],
            Suite::Equilibria => &[Suite::Equilibria],
            Suite::Spectral => &[Suite::Spectral],
            Suite::Hopf => &[Suite::Hopf],
            Suite::Wellposedness => &[Suite::Wellposedness],
            Suite::Lyapunov => &[Suite::Lyapunov],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Equilibria => "equilibria",
            Suite::Spectral => "spectral",
            Suite::Hopf => "hopf",
            Suite::Wellposedness => "wellposedness",
            Suite::Lyapunov => "lyapunov",
            Suite::All => "all",
        }
    }
}

fn default_t_end() -> f64 {
    400.0
}
fn default_dt() -> f64 {
    0.1
}
fn default_rel_tol() -> f64 {
    hivdelay_core::dde::DEFAULT_REL_TOL
}
fn default_abs_tol() -> f64 {
    hivdelay_core::dde::DEFAULT_ABS_TOL
}
fn default_lyapunov_samples() -> usize {
    200
}
fn default_tau_box() -> [f64; 2] {
    [0.0, 2.0]
}
fn default_sweep_t_end() -> f64 {
    crate::sweep::DEFAULT_T_END
}
fn default_window() -> f64 {
    crate::sweep::DEFAULT_WINDOW
}
fn default_conv_tol() -> f64 {
    crate::sweep::DEFAULT_CONV_TOL
}
fn default_re_min() -> f64 {
    -6.0
}
fn default_im_max() -> f64 {
    4.0
}
fn default_suite() -> Suite {
    Suite::All
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Scenario {
    Thresholds {
        name: Option<String>,
    },
    Simulate {
        name: Option<String>,
        tau: Option<f64>,
        #[serde(default = "default_t_end")]
        t_end: f64,
        history: Option<HistoryConfig>,
        /// Output sample spacing.
        #[serde(default = "default_dt")]
        dt: f64,
        #[serde(default = "default_rel_tol")]
        rel_tol: f64,
        #[serde(default = "default_abs_tol")]
        abs_tol: f64,
    },
    Lyapunov {
        name: Option<String>,
        functional: Functional,
        tau: Option<f64>,
        #[serde(default = "default_t_end")]
        t_end: f64,
        history: Option<HistoryConfig>,
        #[serde(default = "default_lyapunov_samples")]
        samples: usize,
    },
    Spectrum {
        name: Option<String>,
        equilibrium: String,
        tau: Option<f64>,
        #[serde(default = "default_re_min")]
        re_min: f64,
        #[serde(default = "default_im_max")]
        im_max: f64,
    },
    Hopf {
        name: Option<String>,
        #[serde(default = "default_tau_box")]
        tau_box: [f64; 2],
        omega_box: Option<[f64; 2]>,
        omega_cap: Option<f64>,
    },
    Sweep {
        name: Option<String>,
        taus: Option<Vec<f64>>,
        #[serde(default = "default_sweep_t_end")]
        t_end: f64,
        #[serde(default = "default_window")]
        window: f64,
        #[serde(default = "default_conv_tol")]
        conv_tol: f64,
        history: Option<HistoryConfig>,
    },
    Verify {
        name: Option<String>,
        #[serde(default = "default_suite")]
        suite: Suite,
    },
}

impl Scenario {
    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::Thresholds { .. } => "thresholds",
            Scenario::Simulate { .. } => "simulate",
            Scenario::Lyapunov { .. } => "lyapunov",
            Scenario::Spectrum { .. } => "spectrum",
            Scenario::Hopf { .. } => "hopf",
            Scenario::Sweep { .. } => "sweep",
            Scenario::Verify { .. } => "verify",
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Scenario::Thresholds { name }
            | Scenario::Simulate { name, .. }
            | Scenario::Lyapunov { name, .. }
            | Scenario::Spectrum { name, .. }
            | Scenario::Hopf { name, .. }
            | Scenario::Sweep { name, .. }
            | Scenario::Verify { name, .. } => name.as_deref(),
        }
    }

    /// File stem for the scenario's artifacts.
    pub fn stem(&self, index: usize) -> String {
        match self.name() {
            Some(n) => n.to_string(),
            None => format!("{:02}-{}", index + 1, self.kind()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub seed: u64,
    pub scenarios: Vec<Scenario>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let r = ModelParams::reference(raw.tau.unwrap_or(0.0));
        let params = ModelParams::new(
            raw.lambda.unwrap_or(r.lambda),
            raw.d.unwrap_or(r.d),
            raw.beta.unwrap_or(r.beta),
            raw.a.unwrap_or(r.a),
            raw.alpha.unwrap_or(r.alpha),
            raw.b.unwrap_or(r.b),
            raw.k.unwrap_or(r.k),
            raw.p.unwrap_or(r.p),
            raw.c.unwrap_or(r.c),
            raw.q.unwrap_or(r.q),
            r.tau,
        )
        .map_err(|e| CliError::Config(e.to_string()))?;
        let cfg = RunConfig {
            params,
            seed: raw.seed.unwrap_or(0),
            scenarios: raw.scenarios,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parameters with the scenario's delay, if it overrides the top level.
    pub fn params_at(&self, tau: Option<f64>) -> ModelParams {
        tau.map_or(self.params, |t| self.params.with_tau(t))
    }

    fn validate(&self) -> Result<()> {
        let mut names = std::collections::HashSet::new();
        for (i, sc) in self.scenarios.iter().enumerate() {
            let err = |msg: String| {
                CliError::Config(format!("scenario {} ({}): {msg}", i + 1, sc.kind()))
            };
            if !names.insert(sc.stem(i)) {
                return Err(err(format!("duplicate scenario name `{}`", sc.stem(i))));
            }
            if let Some(n) = sc.name() {
                if n.is_empty() || n.contains(['/', '\\']) {
                    return Err(err(format!("invalid name `{n}`")));
                }
            }
            self.validate_scenario(sc).map_err(err)?;
        }
        Ok(())
    }

    fn validate_scenario(&self, sc: &Scenario) -> Result<(), String> {
        match sc {
            Scenario::Thresholds { .. } => Ok(()),
            Scenario::Simulate {
                tau,
                t_end,
                history,
                dt,
                rel_tol,
                abs_tol,
                ..
            } => {
                let p = self.checked_params(*tau)?;
                positive("t_end", *t_end)?;
                positive("dt", *dt)?;
                for (n, v) in [("rel_tol", *rel_tol), ("abs_tol", *abs_tol)] {
                    if !(v > 0.0 && v < 1.0) {
                        return Err(format!("{n} must lie in (0, 1), got {v}"));
                    }
                }
                resolve_history(&p, history.as_ref()).map(|_| ())
            }
            Scenario::Lyapunov {
                functional,
                tau,
                t_end,
                history,
                samples,
                ..
            } => {
                let p = self.checked_params(*tau)?;
                positive("t_end", *t_end)?;
                if *samples < 2 {
                    return Err("samples must be at least 2".into());
                }
                let th = reproduction_numbers(&p);
                match functional {
                    Functional::V0 if !(th.r0 < 1.0) => {
                        return Err(format!("V0 needs R0 < 1, got {}", th.r0))
                    }
                    Functional::Vs if !(th.r0 > 1.0 && th.r0 < th.r1) => {
                        return Err(format!("Vs needs 1 < R0 < R1, got R0 = {}", th.r0))
                    }
                    _ => {}
                }
                let h = resolve_history(&p, history.as_ref())?;
                if *functional == Functional::Vs && !(h.x > 0.0 && h.y > 0.0 && h.v > 0.0) {
                    return Err("Vs needs x, y, v > 0 in the history".into());
                }
                Ok(())
            }
            Scenario::Spectrum {
                equilibrium: label,
                tau,
                re_min,
                im_max,
                ..
            } => {
                let p = self.checked_params(*tau)?;
                let kind = parse_kind(label)?;
                let th = reproduction_numbers(&p);
                let ok = match kind {
                    EquilibriumKind::DiseaseFree => true,
                    EquilibriumKind::SingleInfection => th.r0 > 1.0,
                    EquilibriumKind::DoubleInfection => th.r0 > th.r1,
                };
                if !ok {
                    return Err(format!("{label} is not admissible at tau = {}", p.tau));
                }
                if !re_min.is_finite() || !(*re_min < 0.0) {
                    return Err(format!("re_min must be negative, got {re_min}"));
                }
                positive("im_max", *im_max)
            }
            Scenario::Hopf {
                tau_box,
                omega_box,
                omega_cap,
                ..
            } => {
                interval("tau_box", *tau_box, 0.0)?;
                if let Some(w) = omega_box {
                    interval("omega_box", *w, 0.0)?;
                }
                if let Some(c) = omega_cap {
                    positive("omega_cap", *c)?;
                }
                Ok(())
            }
            Scenario::Sweep {
                taus,
                t_end,
                window,
                conv_tol,
                history,
                ..
            } => {
                positive("window", *window)?;
                positive("conv_tol", *conv_tol)?;
                if !(*t_end >= 2.0 * window) || !t_end.is_finite() {
                    return Err(format!("t_end must be at least two windows, got {t_end}"));
                }
                if let Some(ts) = taus {
                    if ts.is_empty() {
                        return Err("taus must not be empty".into());
                    }
                    if ts.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
                        return Err("taus must be finite and nonnegative".into());
                    }
                    if ts.windows(2).any(|w| !(w[1] > w[0])) {
                        return Err("taus must be strictly increasing".into());
                    }
                }
                if let Some(HistoryConfig::Values(v)) = history {
                    values_history(*v)?;
                }
                Ok(())
            }
            Scenario::Verify { .. } => Ok(()),
        }
    }

    fn checked_params(&self, tau: Option<f64>) -> Result<ModelParams, String> {
        let p = self.params_at(tau);
        p.validate().map_err(|e| e.to_string())?;
        Ok(p)
    }
}

fn positive(name: &str, v: f64) -> Result<(), String> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(format!("{name} must be positive and finite, got {v}"))
    }
}

fn interval(name: &str, v: [f64; 2], floor: f64) -> Result<(), String> {
    if v[0] >= floor && v[1] > v[0] && v[1].is_finite() {
        Ok(())
    } else {
        Err(format!("{name} must satisfy {floor} <= lo < hi, got {v:?}"))
    }
}

fn parse_kind(label: &str) -> Result<EquilibriumKind, String> {
    EquilibriumKind::from_label(label)
        .ok_or_else(|| format!("unknown equilibrium `{label}` (expected E0, E_s or E_d)"))
}

fn values_history(v: [f64; 5]) -> Result<StateVector, String> {
    if v.iter().any(|c| !(*c >= 0.0 && c.is_finite())) {
        return Err(format!(
            "history values must be finite and nonnegative, got {v:?}"
        ));
    }
    Ok(StateVector::from_array(v))
}

/// The equilibrium of `kind` with `v` raised by 1% (and `w` too for the
/// double-infection state). Zero components get an absolute seed of 1 so the
/// disease-free state is actually perturbed.
pub fn perturbed_equilibrium(params: &ModelParams, kind: EquilibriumKind) -> StateVector {
    let mut u = equilibrium(params, kind).point;
    let bump = |c: f64| if c > 0.0 { c * 1.01 } else { 1.0 };
    u.v = bump(u.v);
    if kind == EquilibriumKind::DoubleInfection {
        u.w = bump(u.w);
    }
    u
}

/// The admissible equilibrium of highest index at `params.tau`.
pub fn regime_equilibrium(params: &ModelParams) -> EquilibriumKind {
    let th = reproduction_numbers(params);
    if th.r0 > th.r1 {
        EquilibriumKind::DoubleInfection
    } else if th.r0 > 1.0 {
        EquilibriumKind::SingleInfection
    } else {
        EquilibriumKind::DiseaseFree
    }
}

pub fn default_history(params: &ModelParams) -> StateVector {
    perturbed_equilibrium(params, regime_equilibrium(params))
}

pub fn resolve_history(
    params: &ModelParams,
    history: Option<&HistoryConfig>,
) -> Result<StateVector, String> {
    match history {
        None => Ok(default_history(params)),
        Some(HistoryConfig::Values(v)) => values_history(*v),
        Some(HistoryConfig::Equilibrium(label)) => {
            let kind = parse_kind(label)?;
            let eq = equilibrium(params, kind);
            if !eq.admissible {
                return Err(format!("{label} is not admissible at tau = {}", params.tau));
            }
            Ok(perturbed_equilibrium(params, kind))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_rates_take_reference_values() {
        let cfg = RunConfig::from_toml("tau = 1.6\nk = 100").unwrap();
        let r = ModelParams::reference(1.6);
        assert_eq!(cfg.params.k, 100.0);
        assert_eq!(cfg.params.c, r.c);
        assert_eq!(cfg.params.tau, 1.6);
        assert!(cfg.scenarios.is_empty());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml("gamma = 1").is_err());
        let text = "[[scenario]]\nkind = \"thresholds\"\nfoo = 1";
        assert!(RunConfig::from_toml(text).is_err());
        let text = "[[scenario]]\nkind = \"bogus\"";
        assert!(RunConfig::from_toml(text).is_err());
    }

    #[test]
    fn scenario_validation() {
        let bad = [
            "[[scenario]]\nkind = \"sweep\"\ntaus = [0.5, 0.2]",
            "[[scenario]]\nkind = \"spectrum\"\nequilibrium = \"E_d\"\ntau = 3.0",
            "[[scenario]]\nkind = \"simulate\"\nt_end = -1",
            "[[scenario]]\nkind = \"simulate\"\nhistory = [1, -1, 0, 0, 0]",
            "[[scenario]]\nkind = \"lyapunov\"\nfunctional = \"V0\"\ntau = 1.0",
            "[[scenario]]\nkind = \"hopf\"\ntau_box = [1.0, 0.5]",
            "d = -1",
        ];
        for text in bad {
            assert!(
                matches!(RunConfig::from_toml(text), Err(CliError::Config(_))),
                "{text}"
            );
        }
        let ok = "[[scenario]]\nkind = \"spectrum\"\nequilibrium = \"E_s\"\ntau = 3.0\n\
                  [[scenario]]\nkind = \"verify\"\nsuite = \"hopf\"";
        let cfg = RunConfig::from_toml(ok).unwrap();
        assert_eq!(cfg.scenarios.len(), 2);
        assert_eq!(cfg.scenarios[1].stem(1), "02-verify");
    }

    #[test]
    fn default_history_follows_the_regime() {
        let p = ModelParams::reference(1.6);
        let h = default_history(&p);
        let es = equilibrium(&p, EquilibriumKind::SingleInfection).point;
        assert_eq!(h.x, es.x);
        assert_eq!(h.v, es.v * 1.01);
        assert_eq!(h.w, 0.0);
        let p = ModelParams::reference(1.0);
        let ed = equilibrium(&p, EquilibriumKind::DoubleInfection).point;
        let h = default_history(&p);
        assert_eq!(h.w, ed.w * 1.01);
        let h = default_history(&ModelParams::reference(9.0));
        assert_eq!((h.v, h.w), (1.0, 0.0));
    }
}
