//! Tabular artifacts: trajectories, Lyapunov samples and sweep rows, as CSV
//! (13 significant digits, scientific notation) or JSON.

use std::path::{Path, PathBuf};

use hivdelay_core::lyapunov::LyapunovSample;
use hivdelay_core::model::StateVector;
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::report::{num, write_json};
use crate::sweep::SweepRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

pub fn artifact_path(dir: &Path, stem: &str, format: Format) -> PathBuf {
    dir.join(format!("{stem}.{}", format.extension()))
}

fn cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.12e}")
    } else {
        String::new()
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn finish(mut w: csv::Writer<std::fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_trajectory(path: &Path, samples: &[(f64, StateVector)], format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv_writer(path)?;
            w.write_record(["t", "x", "y", "z", "v", "w"])?;
            for (t, u) in samples {
                let mut row = vec![cell(*t)];
                row.extend(u.to_array().map(cell));
                w.write_record(&row)?;
            }
            finish(w, path)
        }
        Format::Json => {
            let rows: Vec<Value> = samples
                .iter()
                .map(|(t, u)| {
                    json!({"t": num(*t), "x": num(u.x), "y": num(u.y), "z": num(u.z), "v": num(u.v), "w": num(u.w)})
                })
                .collect();
            write_json(path, &Value::Array(rows))
        }
    }
}

pub fn write_lyapunov(path: &Path, samples: &[LyapunovSample], format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv_writer(path)?;
            w.write_record(["t", "V", "dVdt"])?;
            for s in samples {
                w.write_record([cell(s.t), cell(s.value), cell(s.rate)])?;
            }
            finish(w, path)
        }
        Format::Json => {
            let rows: Vec<Value> = samples
                .iter()
                .map(|s| json!({"t": num(s.t), "V": num(s.value), "dVdt": num(s.rate)}))
                .collect();
            write_json(path, &Value::Array(rows))
        }
    }
}

const SWEEP_HEADER: [&str; 10] = [
    "tau", "label", "residual", "amp_x", "amp_y", "amp_z", "amp_v", "amp_w", "period", "steps",
];

pub fn write_sweep(path: &Path, rows: &[SweepRow], format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv_writer(path)?;
            w.write_record(SWEEP_HEADER)?;
            for r in rows {
                let amp = r.amplitude.map(|a| a.to_array());
                let mut rec = vec![
                    cell(r.tau),
                    r.label.to_string(),
                    r.residual.map_or(String::new(), cell),
                ];
                for i in 0..5 {
                    rec.push(amp.map_or(String::new(), |a| cell(a[i])));
                }
                rec.push(r.period.map_or(String::new(), cell));
                rec.push(r.steps.to_string());
                w.write_record(&rec)?;
            }
            finish(w, path)
        }
        Format::Json => {
            let rows: Vec<Value> = rows.iter().map(SweepRow::to_json).collect();
            write_json(path, &Value::Array(rows))
        }
    }
}
