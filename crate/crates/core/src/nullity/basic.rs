//! Facts that hold for every set, and boundary-regularity facts.

use serde::{Deserialize, Serialize};

use super::classify::THRESHOLD_TOL;
use super::verdict::{Justification, NullityVerdict};
use crate::error::{domain, Error, Result};
use crate::index::SobolevIndex;

/// Known properties of a set; absent flags mean "not asserted".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SetFlags {
    pub nonempty: bool,
    pub countable: bool,
    pub empty_interior: bool,
    pub inner_measure_zero: bool,
    pub inner_measure_positive: bool,
}

impl SetFlags {
    fn check(&self) -> Result<()> {
        if self.inner_measure_zero && self.inner_measure_positive {
            return Err(Error::Invalid("inner measure cannot be both zero and positive".into()));
        }
        if self.countable && self.inner_measure_positive {
            return Err(Error::Invalid("a countable set has zero measure".into()));
        }
        Ok(())
    }
}

pub fn basic_verdict(flags: &SetFlags, n: u32, index: &SobolevIndex) -> Result<NullityVerdict> {
    flags.check()?;
    let nf = n as f64;
    let (s, p) = (index.s(), index.p());
    let low = -nf / index.p_conj();
    let above_low = s >= low - THRESHOLD_TOL;
    if !above_low && flags.nonempty {
        return Ok(NullityVerdict::not_null(Justification::DeltaLowS, format!("s < -n/p' = {low}")));
    }
    if flags.countable && above_low {
        return Ok(NullityVerdict::null(Justification::Basic, format!("countable and s >= -n/p' = {low}")));
    }
    if s > nf / p {
        return Ok(if flags.empty_interior {
            NullityVerdict::null(Justification::EmptyInteriorHighS, format!("empty interior and s > n/p = {}", nf / p))
        } else {
            NullityVerdict::unknown("s > n/p but empty interior is not asserted")
        });
    }
    if s >= 0.0 && (flags.inner_measure_zero || flags.countable) {
        return Ok(NullityVerdict::null(Justification::Basic, "zero inner measure and s >= 0"));
    }
    if flags.inner_measure_positive && s <= 0.0 {
        return Ok(NullityVerdict::not_null(Justification::MeasurePositive, "positive inner measure and s <= 0"));
    }
    Ok(NullityVerdict::unknown("no basic fact applies"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegClass {
    C0,
    C0Alpha,
    Lipschitz,
    ComplementHasInterior,
}

/// Nullity of the boundary of a domain of the given regularity.
pub fn boundary_verdict(reg: RegClass, alpha: Option<f64>, n: u32, index: &SobolevIndex) -> Result<NullityVerdict> {
    if n == 0 {
        return domain("n must be positive");
    }
    let s = index.s();
    let pc = index.p_conj();
    let low = -1.0 / pc;
    let below = s < low - THRESHOLD_TOL;
    let at_or_above = |t: f64| s >= t - THRESHOLD_TOL;
    let not_null = || NullityVerdict::not_null(Justification::BoundaryFact, format!("s < -1/p' = {low}"));
    Ok(match reg {
        RegClass::Lipschitz => {
            if below {
                not_null()
            } else {
                NullityVerdict::null(Justification::BoundaryFact, format!("Lipschitz boundary and s >= -1/p' = {low}"))
            }
        }
        RegClass::C0 => {
            if at_or_above(0.0) {
                NullityVerdict::null(Justification::BoundaryFact, "C^0 boundary and s >= 0")
            } else if below {
                not_null()
            } else {
                NullityVerdict::unknown("C^0 boundary with -1/p' <= s < 0")
            }
        }
        RegClass::C0Alpha => {
            let a = alpha.ok_or_else(|| Error::Invalid("C0alpha needs alpha".into()))?;
            if !(a > 0.0 && a < 1.0) {
                return domain(format!("need 0 < alpha < 1, got {a}"));
            }
            let t = -a / pc;
            if s > t + THRESHOLD_TOL {
                NullityVerdict::null(Justification::BoundaryFact, format!("C^(0,alpha) boundary and s > -alpha/p' = {t}"))
            } else if below {
                not_null()
            } else {
                NullityVerdict::unknown(format!("C^(0,alpha) boundary with s in [-1/p', -alpha/p'] = [{low}, {t}]"))
            }
        }
        RegClass::ComplementHasInterior => {
            if below {
                not_null()
            } else {
                NullityVerdict::unknown("only the complement's interior is known")
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nullity::verdict::Verdict;

    fn idx(s: f64, p: f64) -> SobolevIndex {
        SobolevIndex::new(s, p).unwrap()
    }

    #[test]
    fn basic_examples() {
        let countable = SetFlags {
            countable: true,
            nonempty: true,
            ..Default::default()
        };
        assert_eq!(basic_verdict(&countable, 1, &idx(-0.5, 2.0)).unwrap().verdict(), Verdict::Null);
        assert_eq!(basic_verdict(&countable, 1, &idx(-0.51, 2.0)).unwrap().verdict(), Verdict::NotNull);
        let ne = SetFlags {
            nonempty: true,
            ..Default::default()
        };
        let v = basic_verdict(&ne, 2, &idx(-1.01, 2.0)).unwrap();
        assert_eq!((v.verdict(), v.justification()), (Verdict::NotNull, Justification::DeltaLowS));
        let ei = SetFlags {
            empty_interior: true,
            ..Default::default()
        };
        let v = basic_verdict(&ei, 1, &idx(0.6, 2.0)).unwrap();
        assert_eq!((v.verdict(), v.justification()), (Verdict::Null, Justification::EmptyInteriorHighS));
        let z = SetFlags {
            inner_measure_zero: true,
            ..Default::default()
        };
        assert_eq!(basic_verdict(&z, 1, &idx(0.0, 3.0)).unwrap().verdict(), Verdict::Null);
        let pm = SetFlags {
            inner_measure_positive: true,
            ..Default::default()
        };
        assert_eq!(basic_verdict(&pm, 1, &idx(0.0, 3.0)).unwrap().verdict(), Verdict::NotNull);
        assert_eq!(basic_verdict(&pm, 1, &idx(0.2, 3.0)).unwrap().verdict(), Verdict::Unknown);
        let bad = SetFlags {
            inner_measure_zero: true,
            inner_measure_positive: true,
            ..Default::default()
        };
        assert!(basic_verdict(&bad, 1, &idx(0.0, 2.0)).is_err());
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(boundary_verdict(RegClass::Lipschitz, None, 2, &idx(-0.5, 2.0)).unwrap().verdict(), Verdict::Null);
        assert_eq!(boundary_verdict(RegClass::Lipschitz, None, 2, &idx(-0.6, 2.0)).unwrap().verdict(), Verdict::NotNull);
        assert_eq!(boundary_verdict(RegClass::C0Alpha, Some(0.5), 2, &idx(-0.2, 2.0)).unwrap().verdict(), Verdict::Null);
        assert_eq!(boundary_verdict(RegClass::C0Alpha, Some(0.5), 2, &idx(-0.3, 2.0)).unwrap().verdict(), Verdict::Unknown);
        assert_eq!(boundary_verdict(RegClass::C0, None, 2, &idx(-0.3, 2.0)).unwrap().verdict(), Verdict::Unknown);
        assert_eq!(boundary_verdict(RegClass::C0, None, 2, &idx(0.0, 2.0)).unwrap().verdict(), Verdict::Null);
        assert_eq!(
            boundary_verdict(RegClass::ComplementHasInterior, None, 2, &idx(0.0, 2.0)).unwrap().verdict(),
            Verdict::Unknown
        );
        assert!(boundary_verdict(RegClass::C0Alpha, Some(1.0), 2, &idx(0.0, 2.0)).is_err());
    }
}
