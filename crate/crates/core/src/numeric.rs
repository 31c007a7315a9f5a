//! Small numeric utilities shared across modules.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut k = KahanSum::new();
    for x in it {
        k.add(x);
    }
    k.value()
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Ordinary least-squares slope and intercept of y on x.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Invalid("linear fit needs >= 2 paired samples".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Invalid("linear fit with constant abscissa".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// log2 of a positive big integer, accurate to f64 precision.
pub fn log2_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return (v.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().unwrap();
    (top as f64).log2() + shift as f64
}

/// log2 of a positive rational without underflow.
pub fn log2_rational(r: &BigRational) -> f64 {
    debug_assert!(r.is_positive());
    log2_biguint(r.numer().magnitude()) - log2_biguint(r.denom().magnitude())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_zero() {
            0.0
        } else {
            let l = log2_rational(&r.abs());
            let v = l.exp2();
            if r.is_negative() {
                -v
            } else {
                v
            }
        }
    })
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow2(k: i64) -> BigRational {
    let one = BigInt::one();
    if k >= 0 {
        BigRational::from_integer(one << k as usize)
    } else {
        BigRational::new(one.clone(), one << (-k) as usize)
    }
}

/// Parses "p/q", an integer or a finite decimal (optionally with exponent) exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Invalid(format!("not a rational literal: {text:?}"));
    if let Some((a, b)) = t.split_once('/') {
        let n: BigInt = a.trim().parse().map_err(|_| bad())?;
        let d: BigInt = b.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
    let scale = exp - fp.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return Err(bad());
    }
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Exact rational power x^(e) for rational e, when the result is rational.
pub fn exact_rational_pow(x: &BigRational, e: &BigRational) -> Option<BigRational> {
    if !x.is_positive() {
        return None;
    }
    let q = e.denom().to_u32()?;
    let p = e.numer().to_i32()?;
    let root = |v: &BigInt| -> Option<BigInt> {
        let r = num_integer::Roots::nth_root(v, q);
        (num_traits::pow(r.clone(), q as usize) == *v).then_some(r)
    };
    let base = BigRational::new(root(x.numer())?, root(x.denom())?);
    let mag = num_traits::pow(base, p.unsigned_abs() as usize);
    Some(if p >= 0 { mag } else { mag.recip() })
}
