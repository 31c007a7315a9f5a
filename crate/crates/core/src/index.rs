use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Regularity/integrability pair (s, p) with 1 < p < inf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIndex", into = "RawIndex")]
pub struct SobolevIndex {
    s: f64,
    p: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIndex {
    s: f64,
    p: f64,
}

impl TryFrom<RawIndex> for SobolevIndex {
    type Error = crate::Error;
    fn try_from(r: RawIndex) -> Result<Self> {
        SobolevIndex::new(r.s, r.p)
    }
}

impl From<SobolevIndex> for RawIndex {
    fn from(i: SobolevIndex) -> Self {
        RawIndex { s: i.s, p: i.p }
    }
}

impl SobolevIndex {
    pub fn new(s: f64, p: f64) -> Result<Self> {
        if !s.is_finite() {
            return domain(format!("s must be finite, got {s}"));
        }
        if !(p > 1.0 && p.is_finite()) {
            return domain(format!("need 1 < p < inf, got p = {p}"));
        }
        Ok(SobolevIndex { s, p })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Hölder conjugate p/(p-1).
    pub fn p_conj(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    pub fn with_s(&self, s: f64) -> Result<Self> {
        SobolevIndex::new(s, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_identity() {
        for &p in &[1.01, 1.25, 1.5, 2.0, 3.0, 4.0, 117.0] {
            let i = SobolevIndex::new(0.0, p).unwrap();
            assert!((1.0 / p + 1.0 / i.p_conj() - 1.0).abs() < 1e-15);
        }
        assert_eq!(SobolevIndex::new(0.0, 2.0).unwrap().p_conj(), 2.0);
    }

    #[test]
    fn rejects_bad_p() {
        assert!(SobolevIndex::new(0.0, 1.0).is_err());
        assert!(SobolevIndex::new(0.0, f64::INFINITY).is_err());
        assert!(SobolevIndex::new(f64::NAN, 2.0).is_err());
        assert!(serde_json::from_str::<SobolevIndex>(r#"{"s":0,"p":0.5}"#).is_err());
        assert!(serde_json::from_str::<SobolevIndex>(r#"{"s":0,"p":2,"q":1}"#).is_err());
    }
}
