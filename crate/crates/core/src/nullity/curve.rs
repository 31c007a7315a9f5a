//! The threshold function S_E(r) = s_E(1/r) on r in (0, 1).

use serde::{Deserialize, Serialize};

use super::classify::fat_threshold;
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSource {
    /// Zero-measure set of Hausdorff dimension d.
    Dimension { d: f64 },
    /// Lower bound for a fat Cantor set.
    FatLowerBound { alpha: f64 },
}

pub fn threshold_curve(src: CurveSource, n: u32, r_samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    if let Some(r) = r_samples.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return domain(format!("samples must lie in (0, 1), got {r}"));
    }
    let nf = n as f64;
    match src {
        CurveSource::Dimension { d } => {
            if !(0.0..=nf).contains(&d) {
                return domain(format!("need 0 <= d <= n, got {d}"));
            }
            Ok(r_samples.iter().map(|&r| (r, (nf - d) * (r - 1.0))).collect())
        }
        CurveSource::FatLowerBound { alpha } => {
            let s2 = fat_threshold(alpha, 2.0)?;
            Ok(r_samples.iter().map(|&r| (r, (2.0 * r * s2).min(s2))).collect())
        }
    }
}

/// Outcome of the post-hoc shape checks on sampled curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCheck {
    pub non_decreasing: bool,
    pub slopes_in_range: bool,
    pub no_sign_crossing: bool,
}

impl CurveCheck {
    pub fn ok(&self) -> bool {
        self.non_decreasing && self.slopes_in_range && self.no_sign_crossing
    }
}

pub fn check_curve(samples: &[(f64, f64)], n: u32) -> CurveCheck {
    let mut pts = samples.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let tol = 1e-12;
    let non_decreasing = pts.windows(2).all(|w| w[1].1 >= w[0].1 - tol);
    let slopes_in_range = pts.windows(2).all(|w| {
        let dr = w[1].0 - w[0].0;
        dr <= 0.0 || {
            let m = (w[1].1 - w[0].1) / dr;
            m >= -tol && m <= n as f64 + tol
        }
    });
    let neg = pts.iter().any(|p| p.1 < -tol);
    let pos = pts.iter().any(|p| p.1 > tol);
    CurveCheck {
        non_decreasing,
        slopes_in_range,
        no_sign_crossing: !(neg && pos),
    }
}
