//! Power-law scaling of the capacity of small balls (n = 1, p = 2).

use serde::{Deserialize, Serialize};

use super::grid::build_grid;
use super::mask::{ConstraintMask, MaskKind};
use super::solver::{solve_cap, SolveReport, SolverConfig};
use crate::error::{domain, Result};
use crate::numeric::linear_fit;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub half_width: f64,
    pub n: usize,
    pub padding: usize,
    /// Ball center.
    pub center: f64,
    pub solver: SolverConfig,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            half_width: 8.0,
            n: 1 << 14,
            padding: 1,
            center: 0.0,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallScaling {
    pub exponent: f64,
    pub intercept: f64,
    pub radii: Vec<f64>,
    pub capacities: Vec<f64>,
    pub reports: Vec<SolveReport>,
}

/// cap_{s,2}(B_r) on the grid for each radius.
pub fn ball_capacities(s: f64, radii: &[f64], cfg: &GridConfig) -> Result<Vec<SolveReport>> {
    let grid = build_grid(cfg.half_width, cfg.n, s)?;
    radii
        .iter()
        .map(|&r| {
            let mask = ConstraintMask::interval(&grid, cfg.center - r, cfg.center + r, MaskKind::AtLeastOne, cfg.padding)?;
            solve_cap(&grid, &mask, &cfg.solver)
        })
        .collect()
}

fn check(s: f64, radii: &[f64]) -> Result<()> {
    if !(s > 0.0 && s < 0.5) {
        return domain(format!("ball scaling needs 0 < s < 1/2, got {s}"));
    }
    if radii.iter().any(|r| !(*r > 0.0 && *r <= 1.0)) {
        return domain("radii must lie in (0, 1]");
    }
    Ok(())
}

/// Least-squares slope of log cap(B_r) against log r.
pub fn ball_scaling_exponent(s: f64, radii: &[f64], cfg: &GridConfig) -> Result<BallScaling> {
    check(s, radii)?;
    let lo = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = radii.iter().cloned().fold(0.0, f64::max);
    if radii.len() < 4 || hi / lo < 10.0 {
        return domain("need at least 4 radii spanning a decade");
    }
    let reports = ball_capacities(s, radii, cfg)?;
    let capacities: Vec<f64> = reports.iter().map(|r| r.value).collect();
    let lx: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ly: Vec<f64> = capacities.iter().map(|c| c.ln()).collect();
    let (exponent, intercept) = linear_fit(&lx, &ly)?;
    Ok(BallScaling {
        exponent,
        intercept,
        radii: radii.to_vec(),
        capacities,
        reports,
    })
}

/// min/max of cap(B_r)/r^{1-2s} over the radii: a heuristic stand-in for A/B.
pub fn estimate_ab_ratio(s: f64, radii: &[f64], cfg: &GridConfig) -> Result<f64> {
    check(s, radii)?;
    if radii.is_empty() {
        return domain("no radii given");
    }
    let caps = ball_capacities(s, radii, cfg)?;
    let q: Vec<f64> = caps.iter().zip(radii).map(|(c, r)| c.value / r.powf(1.0 - 2.0 * s)).collect();
    let lo = q.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = q.iter().cloned().fold(0.0, f64::max);
    Ok(lo / hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GridConfig {
        GridConfig {
            n: 1 << 12,
            ..Default::default()
        }
    }

    #[test]
    fn validation() {
        assert!(ball_scaling_exponent(0.6, &[0.5, 0.25, 0.1, 0.05], &small()).is_err());
        assert!(ball_scaling_exponent(0.25, &[0.5, 0.4, 0.3, 0.2], &small()).is_err());
        assert!(ball_scaling_exponent(0.25, &[0.5, 0.05, 2.0, 0.1], &small()).is_err());
        assert!(estimate_ab_ratio(0.25, &[], &small()).is_err());
    }

    #[test]
    fn ratio_is_at_most_one_and_shrinks_with_range() {
        let cfg = small();
        let a = estimate_ab_ratio(0.25, &[0.5, 0.25], &cfg).unwrap();
        let b = estimate_ab_ratio(0.25, &[0.5, 0.25, 0.0625], &cfg).unwrap();
        assert!(a <= 1.0 && b <= a + 1e-15);
    }

    #[test]
    fn translation_invariance() {
        let cfg = GridConfig {
            half_width: 16.0,
            ..small()
        };
        let shifted = GridConfig { center: 5.0, ..cfg };
        let a = ball_capacities(0.25, &[0.25], &cfg).unwrap()[0].value;
        let b = ball_capacities(0.25, &[0.25], &shifted).unwrap()[0].value;
        assert!((a - b).abs() < 0.01 * a, "{a} {b}");
    }
}
