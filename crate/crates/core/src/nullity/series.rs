//! Numeric convergence probe for positive series given in log2 form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::linear_fit;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub max_index: usize,
    pub window: usize,
    pub tolerance: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            max_index: 4096,
            window: 16,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convergence {
    Converges,
    Diverges,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesTest {
    Ratio,
    LogComparison,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceVerdict {
    pub verdict: Convergence,
    pub last_index: usize,
    pub test: SeriesTest,
    /// Extrapolated limit of t_{j+1}/t_j.
    pub ratio: f64,
}

// Margins around the critical exponents of sum j^-a (log j)^-b.
const POWER_MARGIN: f64 = 0.5;
const LOG_MARGIN: f64 = 0.25;

/// Probes sum_{j>=1} t_j where `log2_term(j)` = log2 t_j.
pub fn series_probe<F: FnMut(usize) -> f64>(mut log2_term: F, cfg: &SeriesConfig) -> Result<ConvergenceVerdict> {
    if cfg.window < 3 || cfg.max_index < cfg.window + 2 {
        return Err(Error::Invalid("series probe needs window >= 3 and max_index >= window + 2".into()));
    }
    let mut logs = Vec::with_capacity(cfg.max_index);
    for j in 1..=cfg.max_index {
        let l = log2_term(j);
        if l.is_nan() || l == f64::NEG_INFINITY {
            return Err(Error::NonPositiveTerm { index: j });
        }
        if l == f64::INFINITY {
            return Ok(ConvergenceVerdict {
                verdict: Convergence::Diverges,
                last_index: j,
                test: SeriesTest::Ratio,
                ratio: f64::INFINITY,
            });
        }
        logs.push(l);
    }
    Ok(probe_logs(&logs, cfg))
}

/// Same probe over a finite list of log2 terms t_1, t_2, ...
pub fn probe_logs(logs: &[f64], cfg: &SeriesConfig) -> ConvergenceVerdict {
    let big_j = logs.len();
    let at = |j: usize| logs[j - 1];
    if big_j < cfg.window + 2 {
        return ConvergenceVerdict {
            verdict: Convergence::Inconclusive,
            last_index: big_j,
            test: SeriesTest::Ratio,
            ratio: f64::NAN,
        };
    }
    // ratio test: fit log2(t_{j+1}/t_j) = rho + c/j over the window, extrapolate j -> inf
    let lo = big_j - cfg.window;
    let xs: Vec<f64> = (lo..big_j).map(|j| 1.0 / j as f64).collect();
    let ys: Vec<f64> = (lo..big_j).map(|j| at(j + 1) - at(j)).collect();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let rho = linear_fit(&xs, &ys).map(|(_, intercept)| intercept).unwrap_or(mean);
    let ratio = rho.exp2();
    // the extrapolation is only trusted when it moved the window mean by less than the signal
    let settled = rho.abs() > (rho - mean).abs();
    let by_ratio = if !settled {
        Convergence::Inconclusive
    } else if ratio < 1.0 - cfg.tolerance {
        Convergence::Converges
    } else if ratio > 1.0 + cfg.tolerance {
        Convergence::Diverges
    } else {
        Convergence::Inconclusive
    };
    let by_log = log_comparison(logs);
    let (verdict, test) = match (by_ratio, by_log) {
        (Convergence::Inconclusive, v) => (v, SeriesTest::LogComparison),
        (r, Convergence::Inconclusive) => (r, SeriesTest::Ratio),
        (r, l) if r == l => (r, SeriesTest::Ratio),
        _ => (Convergence::Inconclusive, SeriesTest::Ratio),
    };
    ConvergenceVerdict {
        verdict,
        last_index: big_j,
        test,
        ratio,
    }
}

// Local exponents against j^-a, then (j log^b j)^-1, on the baseline [J/2, J].
fn log_comparison(logs: &[f64]) -> Convergence {
    let j2 = logs.len();
    let j1 = (j2 / 2).max(3);
    if j2 <= j1 + 1 {
        return Convergence::Inconclusive;
    }
    let ln2 = std::f64::consts::LN_2;
    let (f1, f2) = (j1 as f64, j2 as f64);
    let (l1, l2) = (logs[j1 - 1] * ln2, logs[j2 - 1] * ln2);
    let a = -(l2 - l1) / (f2.ln() - f1.ln());
    if (a - 1.0).abs() >= POWER_MARGIN {
        return if a > 1.0 { Convergence::Converges } else { Convergence::Diverges };
    }
    let b = -((l2 + f2.ln()) - (l1 + f1.ln())) / (f2.ln().ln() - f1.ln().ln());
    if b > 1.0 + LOG_MARGIN {
        Convergence::Converges
    } else if b < 1.0 - LOG_MARGIN {
        Convergence::Diverges
    } else {
        Convergence::Inconclusive
    }
}
