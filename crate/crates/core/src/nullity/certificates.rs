//! Parameter certificates for fat and super-fat Cantor sets and Swiss-cheese sets.

use serde::{Deserialize, Serialize};

use super::classify::{fat_threshold, THRESHOLD_TOL};
use crate::error::{domain, Error, Result};
use crate::fractal::BallCloud;
use crate::index::SobolevIndex;
use crate::numeric::KahanSum;

/// Largest beta for which the fat Cantor cheese certificate holds at (s, p).
pub fn fat_beta_range(alpha: f64, s: f64, p: f64, ratio_ab: f64) -> Result<f64> {
    let t = fat_threshold(alpha, p)?;
    if !(ratio_ab > 0.0 && ratio_ab <= 1.0) {
        return domain(format!("A/B must lie in (0, 1], got {ratio_ab}"));
    }
    if !(s > 0.0) {
        return domain(format!("need s > 0, got {s}"));
    }
    if s >= t {
        return domain(format!("s = {s} >= s_(alpha,p) = {t}: 2 alpha^(1-sp) >= 1 and the certificate is vacuous"));
    }
    let e = 1.0 - s * p;
    Ok((ratio_ab * (1.0 - 2.0 * alpha.powf(e))).powf(1.0 / e))
}

/// Parameters of super-fat Cantor sets that are not (1/p, p)-null.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperFatParams {
    pub p: f64,
    pub c: f64,
    pub big_c: f64,
}

impl SuperFatParams {
    pub fn new(p: f64, c: f64, big_c: f64) -> Result<Self> {
        SobolevIndex::new(0.0, p)?;
        if !(c > 1.0) {
            return domain(format!("need c > 1, got {c}"));
        }
        if !(big_c >= 1.0) {
            return domain(format!("need C >= 1, got {big_c}"));
        }
        Ok(SuperFatParams { p, c, big_c })
    }

    /// 2^{1/(p-1)}.
    pub fn delta_min(&self) -> f64 {
        (1.0 / (self.p - 1.0)).exp2()
    }

    /// (2c)^{-(C^{-2}(1 - 2 delta^{1-p}))^{1/(1-p)}}.
    pub fn gamma_max(&self, delta: f64) -> Result<f64> {
        let dmin = self.delta_min();
        if !(delta > dmin) {
            return domain(format!("need delta > delta_min = {dmin}, got {delta}"));
        }
        let x = (1.0 - 2.0 * delta.powf(1.0 - self.p)) / (self.big_c * self.big_c);
        let g = (2.0 * self.c).powf(-x.powf(1.0 / (1.0 - self.p)));
        if !(g > 0.0 && g < 1.0) {
            return Err(Error::Invalid(format!("gamma_max = {g} is not in (0, 1)")));
        }
        Ok(g)
    }
}

pub fn superfat_params(p: f64, c: f64, big_c: f64) -> Result<SuperFatParams> {
    SuperFatParams::new(p, c, big_c)
}

/// Constants of the two cheese conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheeseConstants {
    /// s < n/p: needs A/B.
    Power { ratio_ab: f64 },
    /// s = n/p: needs c and C.
    Log { c: f64, big_c: f64 },
}

/// Both sides of the cheese condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheeseReport {
    pub lhs: f64,
    pub rhs: f64,
    pub certified: bool,
}

pub fn cheese_report(cloud: &BallCloud, index: &SobolevIndex, constants: &CheeseConstants) -> Result<CheeseReport> {
    let n = cloud.n() as f64;
    let (s, p) = (index.s(), index.p());
    let high = n / p;
    let at_high = (s - high).abs() <= THRESHOLD_TOL;
    if !(s > 0.0 && (s < high || at_high)) {
        return domain(format!("cheese certificate needs 0 < s <= n/p = {high}, got {s}"));
    }
    let r = cloud.inner_radius();
    let mut lhs = KahanSum::new();
    let rhs = match (*constants, at_high) {
        (CheeseConstants::Power { ratio_ab }, false) => {
            if !(ratio_ab > 0.0) {
                return domain(format!("need A/B > 0, got {ratio_ab}"));
            }
            let e = n - s * p;
            for (ri, m) in cloud.radii() {
                lhs.add(m as f64 * ri.powf(e));
            }
            ratio_ab * r.powf(e)
        }
        (CheeseConstants::Log { c, big_c }, true) => {
            if !(c > 1.0 && big_c > 0.0) {
                return domain(format!("need c > 1 and C > 0, got c = {c}, C = {big_c}"));
            }
            for (ri, m) in cloud.radii() {
                lhs.add(m as f64 * (c / ri).ln().powf(1.0 - p));
            }
            (c / r).ln().powf(1.0 - p) / (big_c * big_c)
        }
        (CheeseConstants::Power { .. }, true) => return domain("s = n/p needs the logarithmic constants {c, C}"),
        (CheeseConstants::Log { .. }, false) => return domain("s < n/p needs the power constants {A/B}"),
    };
    let lhs = lhs.value();
    Ok(CheeseReport {
        lhs,
        rhs,
        certified: lhs < rhs,
    })
}

/// True certifies that the cheese set is not (s,p)-null.
pub fn cheese_certificate(cloud: &BallCloud, index: &SobolevIndex, constants: &CheeseConstants) -> Result<bool> {
    cheese_report(cloud, index, constants).map(|r| r.certified)
}

/// Closed form of sum over the fat Cantor gaps of r_i^{1-sp}: (beta/2)^{1-sp} / (1 - 2 alpha^{1-sp}).
pub fn fat_cheese_sum(alpha: f64, beta: f64, s: f64, p: f64) -> Result<f64> {
    let q = fat_cheese_ratio(alpha, s, p)?;
    if q >= 1.0 {
        return domain(format!("2 alpha^(1-sp) = {q} >= 1: the gap sum diverges"));
    }
    Ok((beta / 2.0).powf(1.0 - s * p) / (1.0 - q))
}

/// Closed form of the first `depth` stages of the same sum.
pub fn fat_cheese_partial_sum(alpha: f64, beta: f64, s: f64, p: f64, depth: usize) -> Result<f64> {
    let q = fat_cheese_ratio(alpha, s, p)?;
    let head = (beta / 2.0).powf(1.0 - s * p);
    Ok(if q == 1.0 {
        head * depth as f64
    } else {
        head * (-(depth as f64 * q.ln()).exp_m1()) / (1.0 - q)
    })
}

fn fat_cheese_ratio(alpha: f64, s: f64, p: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return domain(format!("need 0 < alpha < 1/2, got {alpha}"));
    }
    Ok(2.0 * alpha.powf(1.0 - s * p))
}
