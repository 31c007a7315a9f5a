//! Generalized Cantor sets: E_J is 2^J intervals of length l_J inside [0, 1].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::interval::IntervalSet;
use super::precision::{to_rational, Hp};
use crate::error::{domain, Error, Result};
use crate::numeric::{log2_rational, parse_rational, pow2, rational, rational_to_f64};

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const DEFAULT_DEPTH_CAP: usize = 32;
/// Largest number of components `level_set` will materialize (2^20).
pub const MAX_LEVEL_COMPONENTS_LOG2: usize = 20;
/// Largest binary exponent of a materialized length.
pub const MAX_LENGTH_BITS: u64 = 1 << 20;
/// Upper end of the j0 minimality scans.
pub const J0_SCAN_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// l_j = ratio^j, the ternary set being ratio = 1/3.
    Geometric { ratio: BigRational },
    E { d: BigRational, p_star: BigRational },
    F1 { d: BigRational },
    FP { d: BigRational, p_star: BigRational },
    /// d = n gives F(n, inf).
    FInf { d: BigRational },
    FatCantor { alpha: BigRational, beta: BigRational },
    SuperFatCantor { gamma: BigRational, delta: BigRational },
    /// l_0, l_1, ... with l_0 = 1.
    Explicit { lengths: Vec<BigRational> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Geometric { .. } => "geometric",
            Family::E { .. } => "e",
            Family::F1 { .. } => "f1",
            Family::FP { .. } => "fp",
            Family::FInf { .. } => "f_inf",
            Family::FatCantor { .. } => "fat_cantor",
            Family::SuperFatCantor { .. } => "super_fat_cantor",
            Family::Explicit { .. } => "explicit",
        }
    }

    /// Short label such as `F(1/3,inf)` used in tables.
    pub fn label(&self) -> String {
        match self {
            Family::Geometric { ratio } => format!("Geometric({ratio})"),
            Family::E { d, p_star } => format!("E({d},{p_star})"),
            Family::F1 { d } => format!("F({d},1)"),
            Family::FP { d, p_star } => format!("F({d},{p_star})"),
            Family::FInf { d } => format!("F({d},inf)"),
            Family::FatCantor { alpha, beta } => format!("G({alpha},{beta})"),
            Family::SuperFatCantor { gamma, delta } => format!("S({gamma},{delta})"),
            Family::Explicit { lengths } => format!("Explicit[{}]", lengths.len()),
        }
    }

    /// Hausdorff dimension parameter for the zoo families.
    pub fn zoo_dimension(&self) -> Option<&BigRational> {
        match self {
            Family::E { d, .. } | Family::F1 { d } | Family::FP { d, .. } | Family::FInf { d } => Some(d),
            _ => None,
        }
    }
}

/// Parametrized generator of l_j together with the ambient dimension n of E^(n).
#[derive(Debug, Clone, PartialEq)]
pub struct CantorSpec {
    family: Family,
    n: u32,
    precision_bits: u32,
    depth_cap: usize,
    j0: Option<u64>,
}

/// Limit of (2^j l_j)^n.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureLimit {
    pub value: f64,
    pub exact: Option<BigRational>,
    /// Depth used when no closed form exists.
    pub depth: Option<usize>,
    /// 2^j l_j was checked non-increasing up to `depth`.
    pub monotone: bool,
}

fn pos(r: &BigRational) -> bool {
    r.is_positive()
}

pub fn make_cantor(family: Family, n: u32) -> Result<CantorSpec> {
    CantorSpec::new(family, n)
}

impl CantorSpec {
    pub fn new(family: Family, n: u32) -> Result<Self> {
        if n == 0 {
            return domain("ambient dimension n must be positive");
        }
        let nn = BigRational::from_integer(n.into());
        let one = BigRational::one();
        let half = rational(1, 2);
        match &family {
            Family::Geometric { ratio } => {
                if !(pos(ratio) && *ratio < half) {
                    return domain(format!("geometric ratio must lie in (0, 1/2), got {ratio}"));
                }
            }
            Family::E { d, p_star } | Family::FP { d, p_star } => {
                if d.is_negative() || *d >= nn {
                    return domain(format!("need 0 <= d < n, got d = {d}, n = {n}"));
                }
                if *p_star <= one {
                    return domain(format!("need 1 < p* < inf, got p* = {p_star}"));
                }
            }
            Family::F1 { d } => {
                if d.is_negative() || *d >= nn {
                    return domain(format!("need 0 <= d < n, got d = {d}, n = {n}"));
                }
            }
            Family::FInf { d } => {
                if d.is_negative() || *d > nn {
                    return domain(format!("need 0 <= d <= n, got d = {d}, n = {n}"));
                }
            }
            Family::FatCantor { alpha, beta } => {
                if !(pos(alpha) && *alpha < half) {
                    return domain(format!("need 0 < alpha < 1/2, got alpha = {alpha}"));
                }
                let cap = &one - rational(2, 1) * alpha;
                if !(pos(beta) && *beta < cap) {
                    return domain(format!("need 0 < beta < 1 - 2 alpha = {cap}, got beta = {beta}"));
                }
            }
            Family::SuperFatCantor { gamma, delta } => {
                if !(pos(gamma) && *gamma < one) {
                    return domain(format!("need 0 < gamma < 1, got gamma = {gamma}"));
                }
                if *delta <= one {
                    return domain(format!("need delta > 1, got delta = {delta}"));
                }
            }
            Family::Explicit { lengths } => {
                if lengths.first() != Some(&one) {
                    return domain("explicit lengths must start with l_0 = 1");
                }
                for (j, w) in lengths.windows(2).enumerate() {
                    if !(pos(&w[1]) && &w[1] * rational(2, 1) < w[0]) {
                        return domain(format!(
                            "need 0 < l_{} < l_{}/2, got l_{} = {} and l_{} = {}",
                            j + 1,
                            j,
                            j,
                            w[0],
                            j + 1,
                            w[1]
                        ));
                    }
                }
            }
        }
        let j0 = match &family {
            Family::FP { d, p_star } if d.is_zero() => Some(j0_f0p(n as f64 * (rational_to_f64(p_star) - 1.0))?),
            Family::FP { d, p_star } => Some(j0_fdp(n as f64, rational_to_f64(d), rational_to_f64(p_star))?),
            _ => None,
        };
        Ok(CantorSpec {
            family,
            n,
            precision_bits: DEFAULT_PRECISION_BITS,
            depth_cap: DEFAULT_DEPTH_CAP,
            j0,
        })
    }

    pub fn with_precision_bits(mut self, bits: u32) -> Self {
        self.precision_bits = bits.max(64);
        self
    }

    pub fn with_depth_cap(mut self, cap: usize) -> Self {
        self.depth_cap = cap;
        self
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn depth_cap(&self) -> usize {
        match &self.family {
            Family::Explicit { lengths } => self.depth_cap.min(lengths.len() - 1),
            _ => self.depth_cap,
        }
    }

    pub fn j0(&self) -> Option<u64> {
        self.j0
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    /// Are all l_j exact rationals (no high-precision rounding)?
    pub fn is_exact(&self) -> bool {
        match &self.family {
            Family::Geometric { .. } | Family::FatCantor { .. } | Family::Explicit { .. } => true,
            Family::F1 { d } => d.is_zero(),
            Family::FInf { d } => {
                d.is_zero() || *d == BigRational::from_integer(self.n.into()) || {
                    let q = BigRational::from_integer(self.n.into()) / d;
                    q.is_integer()
                }
            }
            Family::E { d, p_star } => {
                d.is_zero() && (BigRational::from_integer(self.n.into()) * (p_star - BigRational::one())).is_integer()
            }
            Family::FP { .. } | Family::SuperFatCantor { .. } => false,
        }
    }

    /// log2 l_j in double precision (may be -inf for doubly exponential families).
    pub fn log2_length(&self, j: u64) -> f64 {
        if j == 0 {
            return 0.0;
        }
        let n = self.nf();
        let jf = j as f64;
        match &self.family {
            Family::Geometric { ratio } => jf * log2_rational(ratio),
            Family::E { d, p_star } => {
                let (d, ps) = (rational_to_f64(d), rational_to_f64(p_star));
                let c = n * (ps - 1.0);
                if d == 0.0 {
                    // -2 (2^{jc} - 1) / (2^c - 1)
                    let num = (jf * c * std::f64::consts::LN_2).exp_m1();
                    -2.0 * num / (c.exp2() - 1.0)
                } else {
                    let a = (((n - d) * (ps - 1.0)).exp2() - 1.0) / 2.0;
                    -jf * n / d + (1.0 + (jf - 1.0) * a).log2() / (d * (ps - 1.0))
                }
            }
            Family::F1 { d } => {
                let d = rational_to_f64(d);
                if d == 0.0 {
                    -jf * jf - 1.0
                } else {
                    -jf * n / d + (n / d - 1.0) * jf.sqrt() / 2.0
                }
            }
            Family::FP { d, p_star } => {
                let (d, ps) = (rational_to_f64(d), rational_to_f64(p_star));
                let k = (j + self.j0.unwrap_or(0)) as f64;
                if d == 0.0 {
                    let c = n * (ps - 1.0);
                    -(k * c - 2.0 * k.log2()).exp2()
                } else {
                    -k * n / d + (k * k.ln().powi(2)).log2() / (d * (ps - 1.0))
                }
            }
            Family::FInf { d } => {
                let d = rational_to_f64(d);
                if d == 0.0 {
                    -(jf.exp2()).exp2()
                } else if d == n {
                    -jf - (jf + 1.0).log2()
                } else {
                    -jf * n / d
                }
            }
            Family::FatCantor { .. } | Family::Explicit { .. } => match self.length(j as usize) {
                Ok(l) => log2_rational(&l),
                Err(_) => f64::NAN,
            },
            Family::SuperFatCantor { gamma, delta } => {
                let (g, dl) = (rational_to_f64(gamma), rational_to_f64(delta));
                let e = dl.powf(jf) * g.log2();
                -jf + (1.0 - g + e.exp2()).log2()
            }
        }
    }

    /// Exact log2 l_j when it is rational and cheap.
    fn exact_log2_length(&self, j: usize) -> Option<BigRational> {
        let nn = BigRational::from_integer(self.n.into());
        let jj = BigRational::from_integer(j.into());
        match &self.family {
            Family::F1 { d } if d.is_zero() => Some(-(&jj * &jj) - BigRational::one()),
            Family::FInf { d } if d.is_zero() => {
                if j >= 31 {
                    return None;
                }
                Some(-BigRational::from_integer(BigInt::one() << (1usize << j)))
            }
            Family::FInf { d } if *d < nn => Some(-jj * nn / d),
            Family::E { d, p_star } if d.is_zero() => {
                let c = nn * (p_star - BigRational::one());
                if !c.is_integer() {
                    return None;
                }
                let c = c.to_integer().to_usize()?;
                let num = (BigInt::one() << (j * c)) - 1;
                let den = (BigInt::one() << c) - 1;
                Some(BigRational::new(-2 * num, den))
            }
            _ => None,
        }
    }

    /// l_j, exact when the family is rational, else a dyadic rounding at `precision_bits`.
    pub fn length(&self, j: usize) -> Result<BigRational> {
        let mut hp = None;
        self.length_with(j, &mut hp)
    }

    fn length_with(&self, j: usize, hp: &mut Option<Hp>) -> Result<BigRational> {
        if j == 0 {
            return Ok(BigRational::one());
        }
        let too_small = |limit: String| Error::PrecisionExceeded { depth: j, limit };
        match &self.family {
            Family::Geometric { ratio } => return Ok(num_traits::pow(ratio.clone(), j)),
            Family::FatCantor { alpha, beta } => {
                let one = BigRational::one();
                let two_a = rational(2, 1) * alpha;
                let frac = (&one - num_traits::pow(two_a.clone(), j)) / (&one - &two_a);
                return Ok((one - beta * frac) * pow2(-(j as i64)));
            }
            Family::Explicit { lengths } => {
                return lengths
                    .get(j)
                    .cloned()
                    .ok_or_else(|| too_small(format!("explicit list has {} entries", lengths.len())));
            }
            Family::FInf { d } if *d == BigRational::from_integer(self.n.into()) => {
                return Ok(BigRational::new(BigInt::one(), BigInt::from(j + 1)) * pow2(-(j as i64)));
            }
            _ => {}
        }
        if let Some(x) = self.exact_log2_length(j) {
            if x.is_integer() {
                let e = x.to_integer();
                if e.magnitude().bits() > 63 || e.magnitude().to_u64().unwrap() > MAX_LENGTH_BITS {
                    return Err(too_small(format!("|log2 l_j| <= {MAX_LENGTH_BITS}")));
                }
                return Ok(pow2(e.to_i64().unwrap()));
            }
        }
        let approx = self.log2_length(j as u64);
        if !(approx.is_finite() && -approx <= MAX_LENGTH_BITS as f64) {
            return Err(too_small(format!("|log2 l_j| <= {MAX_LENGTH_BITS}")));
        }
        if hp.is_none() {
            *hp = Some(Hp::new(self.precision_bits)?);
        }
        let hp = hp.as_mut().unwrap();
        let v = self.length_hp(j, hp)?;
        if !hp.is_finite(&v) || v.is_zero() {
            return Err(too_small(format!("{} bit mantissa", self.precision_bits)));
        }
        to_rational(&v)
    }

    fn length_hp(&self, j: usize, hp: &mut Hp) -> Result<astro_float::BigFloat> {
        let n = hp.int(self.n as i64);
        let jj = hp.int(j as i64);
        let one = hp.int(1);
        let two = hp.int(2);
        let x = match &self.family {
            Family::E { d, p_star } => {
                let ps1 = {
                    let p = hp.rat(p_star);
                    hp.sub(&p, &one)
                };
                if d.is_zero() {
                    let c = hp.mul(&n, &ps1);
                    let jc = hp.mul(&jj, &c);
                    let num = {
                        let t = hp.exp2(&jc);
                        hp.sub(&t, &one)
                    };
                    let den = {
                        let t = hp.exp2(&c);
                        hp.sub(&t, &one)
                    };
                    let q = hp.div(&num, &den);
                    hp.mul(&q, &hp.int(-2))
                } else {
                    let d = hp.rat(d);
                    let nd = hp.sub(&n, &d);
                    let e = hp.mul(&nd, &ps1);
                    let a = {
                        let t = hp.exp2(&e);
                        let t = hp.sub(&t, &one);
                        hp.div(&t, &two)
                    };
                    let jm1 = hp.int(j as i64 - 1);
                    let inner = {
                        let t = hp.mul(&jm1, &a);
                        hp.add(&one, &t)
                    };
                    let lg = hp.log2(&inner);
                    let dp = hp.mul(&d, &ps1);
                    let corr = hp.div(&lg, &dp);
                    let lin = {
                        let t = hp.mul(&jj, &n);
                        hp.div(&t, &d)
                    };
                    hp.sub(&corr, &lin)
                }
            }
            Family::F1 { d } => {
                let d = hp.rat(d);
                let lin = {
                    let t = hp.mul(&jj, &n);
                    hp.div(&t, &d)
                };
                let nd = {
                    let t = hp.div(&n, &d);
                    hp.sub(&t, &one)
                };
                let sq = hp.sqrt(&jj);
                let corr = {
                    let t = hp.mul(&nd, &sq);
                    hp.div(&t, &two)
                };
                hp.sub(&corr, &lin)
            }
            Family::FP { d, p_star } => {
                let ps1 = {
                    let p = hp.rat(p_star);
                    hp.sub(&p, &one)
                };
                let k = hp.int((j as u64 + self.j0.unwrap_or(0)) as i64);
                if d.is_zero() {
                    let c = hp.mul(&n, &ps1);
                    let kc = hp.mul(&k, &c);
                    let num = hp.exp2(&kc);
                    let k2 = hp.mul(&k, &k);
                    let q = hp.div(&num, &k2);
                    hp.sub(&hp.int(0), &q)
                } else {
                    let d = hp.rat(d);
                    let lnk = hp.ln(&k);
                    let inner = {
                        let t = hp.mul(&lnk, &lnk);
                        hp.mul(&k, &t)
                    };
                    let lg = hp.log2(&inner);
                    let dp = hp.mul(&d, &ps1);
                    let corr = hp.div(&lg, &dp);
                    let lin = {
                        let t = hp.mul(&k, &n);
                        hp.div(&t, &d)
                    };
                    hp.sub(&corr, &lin)
                }
            }
            Family::FInf { d } => {
                let d = hp.rat(d);
                let t = hp.mul(&jj, &n);
                let t = hp.div(&t, &d);
                hp.sub(&hp.int(0), &t)
            }
            Family::SuperFatCantor { gamma, delta } => {
                let g = hp.rat(gamma);
                let dl = hp.rat(delta);
                let e = {
                    let p = hp.pow(&dl, &jj);
                    let lg = hp.log2(&g);
                    hp.mul(&p, &lg)
                };
                let tail = if hp.to_f64(&e) < -1e9 {
                    hp.int(0)
                } else {
                    hp.exp2(&e)
                };
                let inner = {
                    let t = hp.sub(&one, &g);
                    hp.add(&t, &tail)
                };
                let lg = hp.log2(&inner);
                hp.sub(&lg, &jj)
            }
            other => return Err(Error::Invalid(format!("no high-precision path for {}", other.name()))),
        };
        Ok(hp.exp2(&x))
    }

    /// l_0..=l_depth with the strict halving check applied to the computed values.
    pub fn lengths(&self, depth: usize) -> Result<Vec<BigRational>> {
        if depth > self.depth_cap() {
            return Err(Error::PrecisionExceeded {
                depth,
                limit: format!("depth cap {}", self.depth_cap()),
            });
        }
        let mut hp = None;
        let mut out = Vec::with_capacity(depth + 1);
        for j in 0..=depth {
            let l = self.length_with(j, &mut hp)?;
            if let Some(prev) = out.last() {
                if !(l.is_positive() && &l * rational(2, 1) < *prev) {
                    return Err(Error::PrecisionExceeded {
                        depth: j,
                        limit: format!("l_{j} < l_{}/2 fails after rounding to {} bits", j - 1, self.precision_bits),
                    });
                }
            }
            out.push(l);
        }
        Ok(out)
    }

    /// Validates 0 < l_{j+1} < l_j/2 up to depth J.
    pub fn check_depth(&self, depth: usize) -> Result<()> {
        self.lengths(depth).map(|_| ())
    }

    /// Gap_j = l_{j-1} - 2 l_j, j >= 1.
    pub fn gap(&self, j: usize) -> Result<BigRational> {
        if j == 0 {
            return Err(Error::Invalid("gaps are indexed from j = 1".into()));
        }
        if let Family::FatCantor { alpha, beta } = &self.family {
            return Ok(beta * num_traits::pow(alpha.clone(), j - 1));
        }
        let mut hp = None;
        let a = self.length_with(j - 1, &mut hp)?;
        let b = self.length_with(j, &mut hp)?;
        Ok(a - b * rational(2, 1))
    }

    pub fn level_set(&self, depth: usize) -> Result<IntervalSet> {
        if depth > MAX_LEVEL_COMPONENTS_LOG2 {
            return Err(Error::PrecisionExceeded {
                depth,
                limit: format!("at most 2^{MAX_LEVEL_COMPONENTS_LOG2} components"),
            });
        }
        let ls = self.lengths(depth)?;
        let mut starts = vec![BigRational::zero()];
        for k in 1..=depth {
            let offset = &ls[k - 1] - &ls[k];
            let mut next = Vec::with_capacity(starts.len() * 2);
            for a in &starts {
                next.push(a.clone());
                next.push(a + &offset);
            }
            starts = next;
        }
        let l = &ls[depth];
        let bits = (!self.is_exact()).then_some(self.precision_bits);
        Ok(IntervalSet::from_sorted_unchecked(
            starts.into_iter().map(|a| {
                let b = &a + l;
                (a, b)
            }).collect(),
            bits,
        ))
    }

    pub fn measure_limit(&self) -> Result<MeasureLimit> {
        let one = BigRational::one();
        let closed = match &self.family {
            Family::FatCantor { alpha, beta } => Some(&one - beta / (&one - rational(2, 1) * alpha)),
            Family::SuperFatCantor { gamma, .. } => Some(&one - gamma),
            Family::Explicit { .. } => None,
            _ => Some(BigRational::zero()),
        };
        if let Some(m) = closed {
            let mn = num_traits::pow(m, self.n as usize);
            return Ok(MeasureLimit {
                value: rational_to_f64(&mn),
                exact: Some(mn),
                depth: None,
                monotone: true,
            });
        }
        let depth = self.depth_cap();
        let ls = self.lengths(depth)?;
        let masses: Vec<BigRational> = ls.iter().enumerate().map(|(j, l)| l * pow2(j as i64)).collect();
        let monotone = masses.windows(2).all(|w| w[1] <= w[0]);
        let mn = num_traits::pow(masses[depth].clone(), self.n as usize);
        Ok(MeasureLimit {
            value: rational_to_f64(&mn),
            exact: None,
            depth: Some(depth),
            monotone,
        })
    }

    /// True when the limit measure is known to vanish.
    pub fn has_null_measure(&self) -> Option<bool> {
        match &self.family {
            Family::Explicit { .. } => None,
            Family::FatCantor { .. } | Family::SuperFatCantor { .. } => Some(false),
            _ => Some(true),
        }
    }
}

/// j0 for F(0,p*): least j >= 1 with 2^{(j+1)c}/(j+1)^2 - 2^{jc}/j^2 > 1, c = n(p*-1).
pub fn j0_f0p(c: f64) -> Result<u64> {
    for j in 1..=J0_SCAN_LIMIT {
        let jf = j as f64;
        let b = jf * c - 2.0 * jf.log2();
        let a = (jf + 1.0) * c - 2.0 * (jf + 1.0).log2();
        if a > b && b + ((a - b).exp2() - 1.0).log2() > 0.0 {
            return Ok(j);
        }
    }
    Err(Error::Domain(format!("j0 scan exceeded {J0_SCAN_LIMIT}")))
}

/// j0 for F(d,p*), natural logarithms.
pub fn j0_fdp(n: f64, d: f64, p_star: f64) -> Result<u64> {
    let bound = (n - d) * (p_star - 1.0);
    for j in 2..=J0_SCAN_LIMIT {
        let jf = j as f64;
        let g = |x: f64| x.ln() + 2.0 * x.ln().ln();
        let ratio_ok = (g(jf + 1.0) - g(jf)) / std::f64::consts::LN_2 < bound;
        let start_ok = -jf * n * (p_star - 1.0) + g(jf + 1.0) / std::f64::consts::LN_2 < bound;
        if ratio_ok && start_ok {
            return Ok(j);
        }
    }
    Err(Error::Domain(format!("j0 scan exceeded {J0_SCAN_LIMIT}")))
}

// ---------------------------------------------------------------- serde

/// Rational given as "p/q", a decimal string or a JSON number.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalParam(pub BigRational);

impl Serialize for RationalParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalParam {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        let text = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(D::Error::custom(format!("expected a rational, got {other}"))),
        };
        parse_rational(&text).map(RationalParam).map_err(D::Error::custom)
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<RationalParam>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<RationalParam>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_star: Option<RationalParam>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<RationalParam>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<RationalParam>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<RationalParam>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<RationalParam>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lengths: Option<Vec<RationalParam>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireSpec {
    family: String,
    #[serde(default)]
    params: WireParams,
    n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    precision_bits: Option<u32>,
}

impl Serialize for CantorSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = |x: &BigRational| Some(RationalParam(x.clone()));
        let mut p = WireParams::default();
        match &self.family {
            Family::Geometric { ratio } => p.ratio = r(ratio),
            Family::E { d, p_star } | Family::FP { d, p_star } => {
                p.d = r(d);
                p.p_star = r(p_star);
            }
            Family::F1 { d } | Family::FInf { d } => p.d = r(d),
            Family::FatCantor { alpha, beta } => {
                p.alpha = r(alpha);
                p.beta = r(beta);
            }
            Family::SuperFatCantor { gamma, delta } => {
                p.gamma = r(gamma);
                p.delta = r(delta);
            }
            Family::Explicit { lengths } => p.lengths = Some(lengths.iter().cloned().map(RationalParam).collect()),
        }
        WireSpec {
            family: self.family.name().to_string(),
            params: p,
            n: self.n,
            precision_bits: (self.precision_bits != DEFAULT_PRECISION_BITS).then_some(self.precision_bits),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CantorSpec {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = WireSpec::deserialize(de)?;
        let p = w.params;
        let need = |x: Option<RationalParam>, name: &str| {
            x.map(|v| v.0)
                .ok_or_else(|| D::Error::custom(format!("family {} needs parameter {name}", w.family)))
        };
        let extra = |used: &[&str]| -> std::result::Result<(), D::Error> {
            let present = [
                ("ratio", p.ratio.is_some()),
                ("d", p.d.is_some()),
                ("p_star", p.p_star.is_some()),
                ("alpha", p.alpha.is_some()),
                ("beta", p.beta.is_some()),
                ("gamma", p.gamma.is_some()),
                ("delta", p.delta.is_some()),
                ("lengths", p.lengths.is_some()),
            ];
            match present.iter().find(|(k, on)| *on && !used.contains(k)) {
                Some((k, _)) => Err(D::Error::custom(format!("parameter {k} not used by family {}", w.family))),
                None => Ok(()),
            }
        };
        let family = match w.family.as_str() {
            "geometric" => {
                extra(&["ratio"])?;
                Family::Geometric { ratio: need(p.ratio, "ratio")? }
            }
            "e" | "fp" => {
                extra(&["d", "p_star"])?;
                let (d, p_star) = (need(p.d, "d")?, need(p.p_star, "p_star")?);
                if w.family == "e" {
                    Family::E { d, p_star }
                } else {
                    Family::FP { d, p_star }
                }
            }
            "f1" | "f_inf" => {
                extra(&["d"])?;
                let d = need(p.d, "d")?;
                if w.family == "f1" {
                    Family::F1 { d }
                } else {
                    Family::FInf { d }
                }
            }
            "fat_cantor" => {
                extra(&["alpha", "beta"])?;
                Family::FatCantor {
                    alpha: need(p.alpha, "alpha")?,
                    beta: need(p.beta, "beta")?,
                }
            }
            "super_fat_cantor" => {
                extra(&["gamma", "delta"])?;
                Family::SuperFatCantor {
                    gamma: need(p.gamma, "gamma")?,
                    delta: need(p.delta, "delta")?,
                }
            }
            "explicit" => {
                extra(&["lengths"])?;
                let ls = p
                    .lengths
                    .ok_or_else(|| D::Error::custom("family explicit needs parameter lengths"))?;
                Family::Explicit {
                    lengths: ls.into_iter().map(|v| v.0).collect(),
                }
            }
            other => return Err(D::Error::custom(format!("unknown family {other:?}"))),
        };
        let spec = CantorSpec::new(family, w.n).map_err(D::Error::custom)?;
        Ok(match w.precision_bits {
            Some(b) => spec.with_precision_bits(b),
            None => spec,
        })
    }
}
