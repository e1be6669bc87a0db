//! Executes the scenarios of a [`RunConfig`] in order.

use std::path::{Path, PathBuf};

use hivdelay_core::dde::{integrate, HistorySpec};
use hivdelay_core::lyapunov::{v0_eval, vs_eval};
use hivdelay_core::model::EquilibriumKind;
use serde_json::{json, Value};

use crate::config::{resolve_history, Functional, RunConfig, Scenario};
use crate::error::{CliError, Result};
use crate::export::{artifact_path, write_lyapunov, write_sweep, write_trajectory, Format};
use crate::report::{self, write_json};
use crate::sweep::{default_grid, sweep, SweepSettings};
use crate::verify::{checks_json, run_suite};

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub workers: usize,
    pub format: Format,
}

/// One artifact written by a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub scenario: String,
    pub path: PathBuf,
}

/// Runs every scenario and returns the artifacts written. Verification
/// failures are reported after all scenarios have run.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<Vec<Artifact>> {
    let mut artifacts = Vec::new();
    if cfg.scenarios.is_empty() {
        return Ok(artifacts);
    }
    std::fs::create_dir_all(&opts.out_dir).map_err(|e| CliError::io(&opts.out_dir, e))?;
    let (mut failed, mut total) = (0, 0);
    for (i, sc) in cfg.scenarios.iter().enumerate() {
        let stem = sc.stem(i);
        let path = run_scenario(cfg, sc, &stem, opts, &mut failed, &mut total)?;
        artifacts.push(Artifact {
            scenario: stem,
            path,
        });
    }
    if failed > 0 {
        return Err(CliError::Verification { failed, total });
    }
    Ok(artifacts)
}

fn json_path(dir: &Path, stem: &str) -> PathBuf {
    artifact_path(dir, stem, Format::Json)
}

fn run_scenario(
    cfg: &RunConfig,
    sc: &Scenario,
    stem: &str,
    opts: &RunOptions,
    failed: &mut usize,
    total: &mut usize,
) -> Result<PathBuf> {
    let dir = &opts.out_dir;
    match sc {
        Scenario::Thresholds { .. } => {
            let path = json_path(dir, stem);
            write_json(&path, &report::thresholds(&cfg.params))?;
            Ok(path)
        }
        Scenario::Simulate {
            tau,
            t_end,
            history,
            dt,
            rel_tol,
            abs_tol,
            ..
        } => {
            let p = cfg.params_at(*tau);
            let h = resolve_history(&p, history.as_ref()).map_err(CliError::Config)?;
            let traj = integrate(&p, HistorySpec::Constant(h), *t_end, *rel_tol, *abs_tol)?;
            let samples = traj.samples_every(*dt)?;
            let path = artifact_path(dir, stem, opts.format);
            write_trajectory(&path, &samples, opts.format)?;
            Ok(path)
        }
        Scenario::Lyapunov {
            functional,
            tau,
            t_end,
            history,
            samples,
            ..
        } => {
            let p = cfg.params_at(*tau);
            let h = resolve_history(&p, history.as_ref()).map_err(CliError::Config)?;
            let traj = integrate(
                &p,
                HistorySpec::Constant(h),
                *t_end,
                hivdelay_core::dde::DEFAULT_REL_TOL,
                hivdelay_core::dde::DEFAULT_ABS_TOL,
            )?;
            // keep clear of both ends so the rate stencil stays inside the mesh
            let (lo, hi) = (0.01, traj.end() - 0.01);
            let eval = match functional {
                Functional::V0 => v0_eval,
                Functional::Vs => vs_eval,
            };
            let rows = (0..*samples)
                .map(|i| eval(&p, &traj, lo + (hi - lo) * i as f64 / (*samples - 1) as f64))
                .collect::<hivdelay_core::Result<Vec<_>>>()?;
            let path = artifact_path(dir, stem, opts.format);
            write_lyapunov(&path, &rows, opts.format)?;
            Ok(path)
        }
        Scenario::Spectrum {
            equilibrium,
            tau,
            re_min,
            im_max,
            ..
        } => {
            let p = cfg.params_at(*tau);
            let kind = EquilibriumKind::from_label(equilibrium)
                .ok_or_else(|| CliError::Config(format!("unknown equilibrium `{equilibrium}`")))?;
            let path = json_path(dir, stem);
            write_json(&path, &report::spectrum(&p, kind, *re_min, *im_max)?)?;
            Ok(path)
        }
        Scenario::Hopf {
            tau_box,
            omega_box,
            omega_cap,
            ..
        } => {
            let path = json_path(dir, stem);
            write_json(
                &path,
                &report::hopf(&cfg.params, *tau_box, *omega_box, *omega_cap)?,
            )?;
            Ok(path)
        }
        Scenario::Sweep {
            taus,
            t_end,
            window,
            conv_tol,
            history,
            ..
        } => {
            let taus = taus.clone().unwrap_or_else(default_grid);
            let jobs = taus
                .iter()
                .map(|&t| {
                    let p = cfg.params.with_tau(t);
                    resolve_history(&p, history.as_ref())
                        .map(|h| (t, h))
                        .map_err(|e| CliError::Config(format!("sweep `{stem}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let settings = SweepSettings {
                t_end: *t_end,
                window: *window,
                conv_tol: *conv_tol,
            };
            let rows = sweep(&cfg.params, &jobs, &settings, opts.workers)?;
            let path = artifact_path(dir, stem, opts.format);
            write_sweep(&path, &rows, opts.format)?;
            Ok(path)
        }
        Scenario::Verify { suite, .. } => {
            let checks = run_suite(*suite, &cfg.params, cfg.seed);
            let mut suites = serde_json::Map::new();
            for s in suite.members() {
                let mine: Vec<_> = checks.iter().filter(|c| c.suite == *s).cloned().collect();
                suites.insert(s.name().to_string(), checks_json(&mine));
            }
            let summary = checks_json(&checks);
            *failed += summary["failed"].as_u64().unwrap_or(0) as usize;
            *total += checks.len();
            let report: Value = json!({
                "suites": suites,
                "passed": summary["passed"],
                "failed": summary["failed"],
                "skipped": summary["skipped"],
            });
            let path = json_path(dir, stem);
            write_json(&path, &report)?;
            Ok(path)
        }
    }
}
