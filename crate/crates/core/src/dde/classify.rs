use alloc::vec::Vec;

use super::Trajectory;
use crate::math;
use crate::model::{Equilibrium, StateVector};

const SAMPLES_PER_WINDOW: usize = 4000;
const AMPLITUDE_AGREEMENT: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub enum LongRunKind {
    /// Maximum relative deviation from `equilibrium` over the trailing window.
    ConvergedTo {
        equilibrium: Equilibrium,
        residual: f64,
    },
    /// Peak-to-peak amplitude per component over the trailing window, and the
    /// mean spacing of upward zero crossings of `x - mean(x)`.
    Oscillatory {
        amplitude: StateVector,
        period: Option<f64>,
    },
    Undetermined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LongRunVerdict {
    pub kind: LongRunKind,
    pub window: f64,
}

struct WindowStats {
    min: StateVector,
    max: StateVector,
    mean: StateVector,
}

impl WindowStats {
    fn ptp(&self) -> StateVector {
        self.max - self.min
    }

    /// Peak-to-peak amplitude relative to `max(|mean|, 1)`.
    fn relative_ptp(&self) -> StateVector {
        self.ptp()
            .zip_map(self.mean, |a, m| a / math::abs(m).max(1.0))
    }
}

fn window_samples(traj: &Trajectory, start: f64, end: f64) -> Vec<(f64, StateVector)> {
    let n = SAMPLES_PER_WINDOW;
    (0..=n)
        .map(|i| {
            let t = if i == n {
                end
            } else {
                start + (end - start) * i as f64 / n as f64
            };
            (t, traj.sample(t).expect("window inside trajectory"))
        })
        .collect()
}

fn stats(samples: &[(f64, StateVector)]) -> WindowStats {
    let mut min = StateVector::from_array([f64::INFINITY; 5]);
    let mut max = StateVector::from_array([f64::NEG_INFINITY; 5]);
    let mut sum = StateVector::ZERO;
    for (_, s) in samples {
        min = min.zip_map(*s, f64::min);
        max = max.zip_map(*s, f64::max);
        sum = sum + *s;
    }
    WindowStats {
        min,
        max,
        mean: sum * (1.0 / samples.len() as f64),
    }
}

fn max_relative_deviation(samples: &[(f64, StateVector)], target: &StateVector) -> f64 {
    let mut worst = 0.0f64;
    for (_, s) in samples {
        for i in 0..5 {
            let dev = math::abs(s[i] - target[i]) / math::abs(target[i]).max(1.0);
            worst = worst.max(dev);
        }
    }
    worst
}

fn period_estimate(samples: &[(f64, StateVector)], mean_x: f64) -> Option<f64> {
    let mut crossings = Vec::new();
    for w in samples.windows(2) {
        let (t0, s0) = w[0];
        let (t1, s1) = w[1];
        let (a, b) = (s0.x - mean_x, s1.x - mean_x);
        if a < 0.0 && b >= 0.0 {
            crossings.push(t0 + (t1 - t0) * (-a) / (b - a));
        }
    }
    if crossings.len() < 2 {
        return None;
    }
    Some((crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64)
}

/// Classifies the tail of a trajectory.
///
/// Convergence is tested first against every candidate over the trailing
/// `window`. Otherwise the trailing two windows are compared: amplitudes above
/// `conv_tol` that agree to 5% mark a sustained oscillation. A trajectory
/// shorter than two windows is `Undetermined`.
pub fn classify_longrun(
    traj: &Trajectory,
    candidates: &[Equilibrium],
    window: f64,
    conv_tol: f64,
) -> LongRunVerdict {
    let undetermined = LongRunVerdict {
        kind: LongRunKind::Undetermined,
        window,
    };
    let end = traj.end();
    if !(window > 0.0) || end - 2.0 * window < traj.earliest() {
        return undetermined;
    }

    let last = window_samples(traj, end - window, end);
    let best = candidates
        .iter()
        .map(|e| (e, max_relative_deviation(&last, &e.point)))
        .min_by(|a, b| a.1.total_cmp(&b.1));
    if let Some((e, r)) = best {
        if r < conv_tol {
            return LongRunVerdict {
                kind: LongRunKind::ConvergedTo {
                    equilibrium: *e,
                    residual: r,
                },
                window,
            };
        }
    }

    let previous = window_samples(traj, end - 2.0 * window, end - window);
    let (now, before) = (stats(&last), stats(&previous));
    let (rel_now, rel_before) = (now.relative_ptp(), before.relative_ptp());
    if rel_now.max_abs() <= conv_tol {
        return undetermined;
    }
    let steady = (0..5).all(|i| {
        let (a, b) = (rel_now[i], rel_before[i]);
        if a <= conv_tol && b <= conv_tol {
            return true;
        }
        math::abs(a - b) <= AMPLITUDE_AGREEMENT * a.max(b)
    });
    if !steady {
        return undetermined;
    }
    LongRunVerdict {
        kind: LongRunKind::Oscillatory {
            amplitude: now.ptp(),
            period: period_estimate(&last, now.mean.x),
        },
        window,
    }
}
