//! Regime map over a grid of delays.

use std::fmt;

use hivdelay_core::dde::{
    classify_longrun, integrate_with, HistorySpec, IntegrateOptions, LongRunKind,
};
use hivdelay_core::model::{equilibria, EquilibriumKind, ModelParams, StateVector};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::report::num;

pub const DEFAULT_T_END: f64 = 20_000.0;
pub const DEFAULT_WINDOW: f64 = 1_000.0;
pub const DEFAULT_CONV_TOL: f64 = 1e-3;

/// Delays of the five reference scenarios plus the undelayed case.
pub const SCENARIO_DELAYS: [f64; 6] = [0.0, 0.8, 1.0, 1.2, 1.45, 1.6];

/// `0, 0.05, …, 2.0` merged with [`SCENARIO_DELAYS`].
pub fn default_grid() -> Vec<f64> {
    let mut taus: Vec<f64> = (0..=40).map(|i| i as f64 / 20.0).collect();
    taus.extend(SCENARIO_DELAYS);
    taus.sort_by(f64::total_cmp);
    taus.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    taus
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeLabel {
    Equilibrium(EquilibriumKind),
    Cycle,
    Undetermined,
}

impl RegimeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeLabel::Equilibrium(k) => k.label(),
            RegimeLabel::Cycle => "cycle",
            RegimeLabel::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings {
    pub t_end: f64,
    pub window: f64,
    pub conv_tol: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            t_end: DEFAULT_T_END,
            window: DEFAULT_WINDOW,
            conv_tol: DEFAULT_CONV_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub tau: f64,
    pub label: RegimeLabel,
    /// Maximum relative deviation over the last window when converged.
    pub residual: Option<f64>,
    /// Peak-to-peak amplitudes when oscillatory.
    pub amplitude: Option<StateVector>,
    pub period: Option<f64>,
    pub steps: usize,
}

impl SweepRow {
    pub fn to_json(&self) -> Value {
        json!({
            "tau": num(self.tau),
            "label": self.label.as_str(),
            "residual": self.residual.map_or(Value::Null, num),
            "amplitude": self.amplitude.map_or(Value::Null, |a| {
                json!({"x": num(a.x), "y": num(a.y), "z": num(a.z), "v": num(a.v), "w": num(a.w)})
            }),
            "period": self.period.map_or(Value::Null, num),
            "steps": self.steps,
        })
    }
}

/// Integrates from `history` at delay `tau` and labels the long-run
/// behaviour. Only the last two windows of mesh are kept in memory.
pub fn classify_delay(
    params: &ModelParams,
    tau: f64,
    history: StateVector,
    settings: &SweepSettings,
) -> hivdelay_core::Result<SweepRow> {
    let p = params.with_tau(tau);
    let opts = IntegrateOptions {
        retain: Some(2.0 * settings.window),
        ..IntegrateOptions::default()
    };
    let traj = integrate_with(&p, HistorySpec::Constant(history), settings.t_end, &opts)?;
    let candidates: Vec<_> = equilibria(&p)
        .into_iter()
        .filter(|e| e.admissible)
        .collect();
    let verdict = classify_longrun(&traj, &candidates, settings.window, settings.conv_tol);
    let mut row = SweepRow {
        tau,
        label: RegimeLabel::Undetermined,
        residual: None,
        amplitude: None,
        period: None,
        steps: traj.steps_taken(),
    };
    match verdict.kind {
        LongRunKind::ConvergedTo {
            equilibrium,
            residual,
        } => {
            row.label = RegimeLabel::Equilibrium(equilibrium.kind);
            row.residual = Some(residual);
        }
        LongRunKind::Oscillatory { amplitude, period } => {
            row.label = RegimeLabel::Cycle;
            row.amplitude = Some(amplitude);
            row.period = period;
        }
        LongRunKind::Undetermined => {}
    }
    Ok(row)
}

/// Classifies every `(tau, history)` pair on up to `workers` threads (0 for
/// the rayon default). Rows come back in input order.
pub fn sweep(
    params: &ModelParams,
    jobs: &[(f64, StateVector)],
    settings: &SweepSettings,
    workers: usize,
) -> Result<Vec<SweepRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| {
        jobs.par_iter()
            .map(|(tau, h)| classify_delay(params, *tau, *h, settings))
            .collect::<hivdelay_core::Result<Vec<_>>>()
    })
    .map_err(CliError::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_contains_scenario_delays() {
        let g = default_grid();
        assert_eq!(g.len(), 41);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        for t in SCENARIO_DELAYS {
            assert!(g.iter().any(|x| (x - t).abs() < 1e-12));
        }
    }

    #[test]
    fn short_sweep_keeps_order() {
        let p = ModelParams::reference(0.0);
        let settings = SweepSettings {
            t_end: 3000.0,
            window: 500.0,
            conv_tol: 1e-3,
        };
        let jobs: Vec<_> = [1.6, 9.0]
            .iter()
            .map(|&t| (t, crate::config::default_history(&p.with_tau(t))))
            .collect();
        let rows = sweep(&p, &jobs, &settings, 2).unwrap();
        assert_eq!(rows[0].tau, 1.6);
        assert_eq!(rows[0].label.as_str(), "E_s");
        assert_eq!(rows[1].label.as_str(), "E0");
    }
}
