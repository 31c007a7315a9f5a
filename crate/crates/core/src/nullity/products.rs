//! Threshold bounds for Cartesian products and tensor-product regularity.

use crate::error::{Error, Result};
use crate::index::SobolevIndex;

/// (s_-, s_+) bracketing the threshold of E_1 x E_2.
pub fn product_bounds(s1: f64, s2: f64, n1: u32, n2: u32, p: f64, positive_measure: bool) -> Result<(f64, f64)> {
    SobolevIndex::new(0.0, p)?;
    let lower = s1.min(s2).min(s1 + s2);
    let upper = if positive_measure {
        (s1 + n2 as f64 / p).min(s2 + n1 as f64 / p)
    } else {
        s1.min(s2)
    };
    Ok((lower, upper))
}

fn nonempty(s: &[f64]) -> Result<()> {
    if s.is_empty() {
        Err(Error::Invalid("tensor formulas need a nonempty list".into()))
    } else {
        Ok(())
    }
}

/// max{0, min s_j} + sum min{0, s_j}.
pub fn tensor_lower(s: &[f64]) -> Result<f64> {
    nonempty(s)?;
    let m = s.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(m.max(0.0) + s.iter().map(|v| v.min(0.0)).sum::<f64>())
}

/// min{0, max s_j} + sum max{0, s_j}.
pub fn tensor_upper(s: &[f64]) -> Result<f64> {
    nonempty(s)?;
    let m = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(m.min(0.0) + s.iter().map(|v| v.max(0.0)).sum::<f64>())
}

/// Min and max over all nonempty subset sums, by enumeration.
pub fn subset_sum_extremes(s: &[f64]) -> Result<(f64, f64)> {
    nonempty(s)?;
    if s.len() > 24 {
        return Err(Error::Invalid("subset enumeration limited to 24 entries".into()));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for mask in 1u32..(1 << s.len()) {
        let sum: f64 = s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v).sum();
        lo = lo.min(sum);
        hi = hi.max(sum);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_examples() {
        assert_eq!(product_bounds(-0.5, -0.5, 1, 1, 2.0, false).unwrap(), (-1.0, -0.5));
        assert_eq!(product_bounds(0.0, 0.0, 1, 1, 2.0, false).unwrap(), (0.0, 0.0));
        assert_eq!(product_bounds(0.25, 0.25, 1, 1, 2.0, true).unwrap(), (0.25, 0.75));
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor_lower(&[-1.0, -2.0]).unwrap(), -3.0);
        assert_eq!(tensor_lower(&[-1.0, 2.0]).unwrap(), -1.0);
        assert_eq!(tensor_upper(&[-1.0, 2.0]).unwrap(), 2.0);
        assert_eq!(tensor_upper(&[-1.0, -2.0]).unwrap(), -1.0);
        assert!(tensor_lower(&[]).is_err());
        assert_eq!(subset_sum_extremes(&[-1.0, 2.0, 0.5]).unwrap(), (-1.0, 2.5));
    }
}
