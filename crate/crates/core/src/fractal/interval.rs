//! Finite unions of closed intervals with exact rational endpoints.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{parse_rational, rational_to_f64};

/// Sorted, pairwise disjoint closed intervals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalSet {
    intervals: Vec<(BigRational, BigRational)>,
    precision_bits: Option<u32>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Normalizes arbitrary closed intervals: sorts, merges overlapping or touching ones.
    pub fn from_intervals(raw: Vec<(BigRational, BigRational)>) -> Result<Self> {
        if let Some((a, b)) = raw.iter().find(|(a, b)| a > b) {
            return Err(Error::Invalid(format!("interval [{a}, {b}] has a > b")));
        }
        let mut raw = raw;
        raw.sort();
        let mut out: Vec<(BigRational, BigRational)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        Ok(IntervalSet {
            intervals: out,
            precision_bits: None,
        })
    }

    /// Builds from intervals the caller guarantees are sorted and disjoint.
    pub(crate) fn from_sorted_unchecked(intervals: Vec<(BigRational, BigRational)>, precision_bits: Option<u32>) -> Self {
        debug_assert!(intervals.windows(2).all(|w| w[0].1 < w[1].0));
        IntervalSet {
            intervals,
            precision_bits,
        }
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.intervals
    }

    /// Mantissa width when endpoints were rounded from high-precision floats.
    pub fn precision_bits(&self) -> Option<u32> {
        self.precision_bits
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_length(&self) -> BigRational {
        self.intervals
            .iter()
            .fold(BigRational::zero(), |acc, (a, b)| acc + (b - a))
    }

    pub fn shift(&self, t: &BigRational) -> IntervalSet {
        IntervalSet {
            intervals: self.intervals.iter().map(|(a, b)| (a + t, b + t)).collect(),
            precision_bits: self.precision_bits,
        }
    }

    pub fn symmetric_difference(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |x, y| x != y)
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |x, y| x && y)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, |x, y| x || y)
    }

    /// Is `inner` contained in `self` (as closed sets)?
    pub fn contains_set(&self, inner: &IntervalSet) -> bool {
        let mut k = 0;
        for (a, b) in &inner.intervals {
            while k < self.intervals.len() && self.intervals[k].1 < *a {
                k += 1;
            }
            match self.intervals.get(k) {
                Some((c, d)) if c <= a && b <= d => {}
                _ => return false,
            }
        }
        true
    }

    pub fn min_endpoint(&self) -> Option<&BigRational> {
        self.intervals.first().map(|iv| &iv.0)
    }

    pub fn max_endpoint(&self) -> Option<&BigRational> {
        self.intervals.last().map(|iv| &iv.1)
    }

    /// Endpoints as f64 pairs.
    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.intervals
            .iter()
            .map(|(a, b)| (rational_to_f64(a), rational_to_f64(b)))
            .collect()
    }

    // Sweep over the merged endpoint list; keeps the closure of every
    // elementary segment where `keep` holds, dropping null pieces.
    fn combine(&self, other: &IntervalSet, keep: impl Fn(bool, bool) -> bool) -> IntervalSet {
        let mut cuts: Vec<&BigRational> = self
            .intervals
            .iter()
            .chain(&other.intervals)
            .flat_map(|(a, b)| [a, b])
            .collect();
        cuts.sort();
        cuts.dedup();
        let (mut i, mut j) = (0usize, 0usize);
        let mut out: Vec<(BigRational, BigRational)> = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            while i < self.intervals.len() && self.intervals[i].1 <= *lo {
                i += 1;
            }
            while j < other.intervals.len() && other.intervals[j].1 <= *lo {
                j += 1;
            }
            let in_a = i < self.intervals.len() && self.intervals[i].0 <= *lo;
            let in_b = j < other.intervals.len() && other.intervals[j].0 <= *lo;
            if keep(in_a, in_b) {
                match out.last_mut() {
                    Some(last) if last.1 == *lo => last.1 = hi.clone(),
                    _ => out.push((lo.clone(), hi.clone())),
                }
            }
        }
        let precision_bits = match (self.precision_bits, other.precision_bits) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        IntervalSet {
            intervals: out,
            precision_bits,
        }
    }
}

/// Exact decimal expansion of a rational whose denominator is 2^a 5^b.
pub(crate) fn exact_decimal(r: &BigRational) -> Option<String> {
    let mut den = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut k2, mut k5) = (0usize, 0usize);
    while (&den % &two).is_zero() {
        den /= &two;
        k2 += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        k5 += 1;
    }
    if den != BigInt::from(1) {
        return None;
    }
    let k = k2.max(k5);
    let scaled = r.numer().abs() * num_traits::pow(two, k - k2) * num_traits::pow(five, k - k5);
    let digits = scaled.to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    if k == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let padded = format!("{digits:0>width$}", width = k + 1);
    let (ip, fp) = padded.split_at(padded.len() - k);
    Some(format!("{sign}{ip}.{fp}"))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    precision_bits: Option<u32>,
    intervals: Vec<[serde_json::Value; 2]>,
}

fn endpoint_to_json(r: &BigRational, float_backed: bool) -> serde_json::Value {
    if float_backed {
        if let Some(s) = exact_decimal(r) {
            return serde_json::Value::String(s);
        }
    }
    serde_json::json!([r.numer().to_string(), r.denom().to_string()])
}

fn endpoint_from_json(v: &serde_json::Value) -> std::result::Result<BigRational, String> {
    let text = |v: &serde_json::Value| match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        other => Err(format!("bad endpoint component {other}")),
    };
    match v {
        serde_json::Value::Array(pair) if pair.len() == 2 => {
            let n: BigInt = text(&pair[0])?.parse().map_err(|e| format!("{e}"))?;
            let d: BigInt = text(&pair[1])?.parse().map_err(|e| format!("{e}"))?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(n, d))
        }
        serde_json::Value::String(_) | serde_json::Value::Number(_) => {
            parse_rational(&text(v)?).map_err(|e| e.to_string())
        }
        other => Err(format!("bad endpoint {other}")),
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let fb = self.precision_bits.is_some();
        let wire = Wire {
            precision_bits: self.precision_bits,
            intervals: self
                .intervals
                .iter()
                .map(|(a, b)| [endpoint_to_json(a, fb), endpoint_to_json(b, fb)])
                .collect(),
        };
        wire.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let wire = Wire::deserialize(de)?;
        let mut raw = Vec::with_capacity(wire.intervals.len());
        for [a, b] in &wire.intervals {
            raw.push((
                endpoint_from_json(a).map_err(D::Error::custom)?,
                endpoint_from_json(b).map_err(D::Error::custom)?,
            ));
        }
        let mut set = IntervalSet::from_intervals(raw).map_err(D::Error::custom)?;
        set.precision_bits = wire.precision_bits;
        Ok(set)
    }
}
