//! Thin wrapper over astro-float for lengths that are not rational.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

pub(crate) struct Hp {
    bits: usize,
    cc: Consts,
}

impl Hp {
    pub fn new(bits: u32) -> Result<Self> {
        let cc = Consts::new().map_err(|e| Error::Invalid(format!("astro-float init: {e:?}")))?;
        Ok(Hp {
            bits: bits.max(64) as usize,
            cc,
        })
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.bits)
    }

    fn bigint(&mut self, v: &BigInt) -> BigFloat {
        BigFloat::parse(&v.to_string(), Radix::Dec, self.bits, RM, &mut self.cc)
    }

    pub fn rat(&mut self, r: &BigRational) -> BigFloat {
        let n = self.bigint(r.numer());
        let d = self.bigint(r.denom());
        n.div(&d, self.bits, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.cc)
    }

    pub fn log2(&mut self, a: &BigFloat) -> BigFloat {
        a.log2(self.bits, RM, &mut self.cc)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    pub fn pow(&mut self, a: &BigFloat, e: &BigFloat) -> BigFloat {
        a.pow(e, self.bits, RM, &mut self.cc)
    }

    pub fn exp2(&mut self, e: &BigFloat) -> BigFloat {
        let two = self.int(2);
        self.pow(&two, e)
    }

    pub fn to_f64(&self, a: &BigFloat) -> f64 {
        a.to_string().parse::<f64>().unwrap_or(f64::NAN)
    }

    pub fn is_finite(&self, a: &BigFloat) -> bool {
        !a.is_nan() && !a.is_inf()
    }
}

/// Exact dyadic rational equal to a finite BigFloat.
pub(crate) fn to_rational(a: &BigFloat) -> Result<BigRational> {
    if a.is_zero() {
        return Ok(BigRational::zero());
    }
    let (words, nbits, sign, exp, _) = a
        .as_raw_parts()
        .ok_or_else(|| Error::Invalid("non-finite high-precision value".into()))?;
    let mut digits = Vec::with_capacity(words.len() * 2);
    for w in words {
        digits.push(*w as u32);
        digits.push((*w >> 32) as u32);
    }
    let m = BigInt::from(BigUint::new(digits));
    let shift = exp as i64 - nbits as i64;
    let one = BigInt::one();
    let mag = if shift >= 0 {
        BigRational::from_integer(m << shift as usize)
    } else {
        BigRational::new(m, one << (-shift) as usize)
    };
    Ok(if sign == Sign::Neg { -mag } else { mag })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;

    #[test]
    fn dyadic_roundtrip() {
        let mut hp = Hp::new(128).unwrap();
        for r in [rational(3, 8), rational(-5, 32), rational(7, 1), rational(1, 1 << 40)] {
            let f = hp.rat(&r);
            assert_eq!(to_rational(&f).unwrap(), r);
        }
    }

    #[test]
    fn exp2_of_half() {
        let mut hp = Hp::new(128).unwrap();
        let h = hp.rat(&rational(-1, 2));
        let v = hp.exp2(&h);
        assert!((hp.to_f64(&v) - 0.5f64.sqrt()).abs() < 1e-16);
        let r = to_rational(&v).unwrap();
        let sq = &r * &r;
        let err = crate::numeric::rational_to_f64(&(sq - rational(1, 2)));
        assert!(err.abs() < 1e-36);
    }
}
