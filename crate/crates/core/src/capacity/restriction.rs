//! Explicit H^{2,2}((-a,a)) restriction norm of even functions, and the trial
//! functions showing cap < Cap on an interval.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};
use crate::numeric::{gauss_legendre, rational, rational_to_f64, KahanSum};

/// Polynomial with exact rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn constant(c: BigRational) -> Poly {
        Poly(vec![c])
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn deriv(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(k.into())).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    /// int_lo^hi p(t) dt.
    pub fn integrate(&self, lo: &BigRational, hi: &BigRational) -> BigRational {
        let anti = Poly(
            std::iter::once(BigRational::zero())
                .chain(self.0.iter().enumerate().map(|(k, c)| c / BigRational::from_integer((k + 1).into())))
                .collect(),
        );
        anti.eval(hi) - anti.eval(lo)
    }

    fn square(&self) -> Poly {
        self.mul(self)
    }
}

/// Piecewise polynomial on [0, a] given by consecutive pieces (lo, hi, p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePoly {
    pub pieces: Vec<(BigRational, BigRational, Poly)>,
}

/// Exact value of 2(|u(a)|^2 + |u'(a)|^2 + |u(a)+u'(a)|^2 + int_0^a |u|^2 + 2|u'|^2 + |u''|^2).
pub fn h22_even_norm_sq_exact(u: &PiecewisePoly) -> Result<BigRational> {
    let Some((_, a, last)) = u.pieces.last() else {
        return domain("empty piecewise polynomial");
    };
    if !u.pieces[0].0.is_zero() || !a.is_positive() {
        return domain("pieces must cover [0, a] with a > 0");
    }
    if u.pieces.windows(2).any(|w| w[0].1 != w[1].0) || u.pieces.iter().any(|p| p.1 <= p.0) {
        return domain("pieces must be consecutive and non-degenerate");
    }
    let (ua, dua) = (last.eval(a), last.deriv().eval(a));
    let mut total = &ua * &ua + &dua * &dua + (&ua + &dua) * (&ua + &dua);
    let two = rational(2, 1);
    for (lo, hi, p) in &u.pieces {
        let d1 = p.deriv();
        let d2 = d1.deriv();
        total += p.square().integrate(lo, hi) + &two * d1.square().integrate(lo, hi) + d2.square().integrate(lo, hi);
    }
    Ok(two * total)
}

/// Same norm from function values by composite Gauss-Legendre on [0, a].
pub fn h22_even_interval_norm_sq(
    u: impl Fn(f64) -> f64,
    du: impl Fn(f64) -> f64,
    ddu: impl Fn(f64) -> f64,
    a: f64,
    panels: usize,
) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return domain(format!("need a > 0, got {a}"));
    }
    let panels = panels.max(1);
    let (x, w) = gauss_legendre(16);
    let h = a / panels as f64;
    let mut acc = KahanSum::new();
    for m in 0..panels {
        let t0 = m as f64 * h;
        for (xk, wk) in x.iter().zip(&w) {
            let t = t0 + 0.5 * h * (xk + 1.0);
            let (v, d, dd) = (u(t), du(t), ddu(t));
            acc.add(0.5 * h * wk * (v * v + 2.0 * d * d + dd * dd));
        }
    }
    let (ua, dua) = (u(a), du(a));
    Ok(2.0 * (ua * ua + dua * dua + (ua + dua) * (ua + dua) + acc.value()))
}

/// u(t) = 1 + eps (a^2 - t^2).
pub fn quadratic_trial(a: &BigRational, eps: &BigRational) -> PiecewisePoly {
    let p = Poly(vec![BigRational::one() + eps * a * a, BigRational::zero(), -eps.clone()]);
    PiecewisePoly {
        pieces: vec![(BigRational::zero(), a.clone(), p)],
    }
}

/// u = 1 on |t| <= a-1 and 1 + eps (a-|t|)(a-1-|t|)^2 on a-1 <= |t| < a.
pub fn cubicgap_trial(a: &BigRational, eps: &BigRational) -> PiecewisePoly {
    let one = BigRational::one();
    let b = a - &one;
    // (a - t)(b - t)^2 = (a - t)(b^2 - 2bt + t^2)
    let lin = Poly(vec![a.clone(), -one.clone()]);
    let sq = Poly(vec![&b * &b, -rational(2, 1) * &b, one.clone()]);
    let mut cubic = lin.mul(&sq);
    for c in cubic.0.iter_mut() {
        *c *= eps;
    }
    cubic.0[0] += &one;
    let mut pieces = Vec::new();
    if b.is_positive() {
        pieces.push((BigRational::zero(), b.clone(), Poly::constant(one)));
    }
    pieces.push((b, a.clone(), cubic));
    PiecewisePoly { pieces }
}

fn check_eps(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() {
        return domain("need eps > 0");
    }
    Ok(())
}

pub fn trial_quadratic_exact(a: &BigRational, eps: &BigRational) -> Result<BigRational> {
    check_eps(eps)?;
    if !a.is_positive() || a * a >= rational(3, 1) {
        return domain(format!("quadratic trial needs 0 < a < sqrt(3), got {a}"));
    }
    h22_even_norm_sq_exact(&quadratic_trial(a, eps))
}

pub fn trial_cubicgap_exact(a: &BigRational, eps: &BigRational) -> Result<BigRational> {
    check_eps(eps)?;
    if *a <= BigRational::one() {
        return domain(format!("cubic-gap trial needs a > 1, got {a}"));
    }
    h22_even_norm_sq_exact(&cubicgap_trial(a, eps))
}

fn to_rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| crate::error::Error::Invalid(format!("{x} is not finite")))
}

/// Norm of the quadratic trial, from the exact rational values of a and eps.
pub fn trial_quadratic(a: f64, eps: f64) -> Result<f64> {
    trial_quadratic_exact(&to_rational(a)?, &to_rational(eps)?).map(|v| rational_to_f64(&v))
}

pub fn trial_cubicgap(a: f64, eps: f64) -> Result<f64> {
    trial_cubicgap_exact(&to_rational(a)?, &to_rational(eps)?).map(|v| rational_to_f64(&v))
}

/// ||1||^2 = 4 + 2a.
pub fn constant_norm_sq(a: &BigRational) -> Result<BigRational> {
    h22_even_norm_sq_exact(&PiecewisePoly {
        pieces: vec![(BigRational::zero(), a.clone(), Poly::constant(BigRational::one()))],
    })
}

/// Forward-difference slope (f(eps) - f(0)) / eps of a trial norm, with f(0) = 4 + 2a.
pub fn fd_slope(trial: impl Fn(f64, f64) -> Result<f64>, a: f64, eps: f64) -> Result<f64> {
    let base = rational_to_f64(&constant_norm_sq(&to_rational(a)?)?);
    Ok((trial(a, eps)? - base) / eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_four_plus_two_a() {
        for a in 1..=3 {
            assert_eq!(constant_norm_sq(&rational(a, 1)).unwrap(), rational(4 + 2 * a, 1));
        }
        let q = h22_even_interval_norm_sq(|_| 1.0, |_| 0.0, |_| 0.0, 3.0, 4).unwrap();
        assert!((q - 10.0).abs() < 1e-13);
    }

    #[test]
    fn quadratic_closed_form() {
        // 4 + 2a + eps(8a^3/3 - 8a) + eps^2(16a^5/15 + 16a^3/3 + 16a^2 + 8a)
        for (an, ad) in [(1, 1), (1, 2), (3, 2)] {
            let a = rational(an, ad);
            let e = rational(1, 1000);
            let c1 = rational(8, 3) * &a * &a * &a - rational(8, 1) * &a;
            let c2 = rational(16, 15) * num_traits::pow(a.clone(), 5)
                + rational(16, 3) * num_traits::pow(a.clone(), 3)
                + rational(16, 1) * &a * &a
                + rational(8, 1) * &a;
            let want = rational(4, 1) + rational(2, 1) * &a + &e * c1 + &e * &e * c2;
            assert_eq!(trial_quadratic_exact(&a, &e).unwrap(), want);
        }
        assert!((trial_quadratic(1.0, 1e-3).unwrap() - 5.994697066666666).abs() < 1e-14);
        assert!(trial_quadratic(2.0, 1e-3).is_err());
    }

    #[test]
    fn cubic_closed_form() {
        let a = rational(2, 1);
        let e = rational(1, 100);
        let want = rational(8, 1) - rational(11, 3) * &e + rational(1318, 105) * &e * &e;
        assert_eq!(trial_cubicgap_exact(&a, &e).unwrap(), want);
        assert!(trial_cubicgap(1.0, 0.1).is_err());
    }

    #[test]
    fn slopes() {
        let q = fd_slope(trial_quadratic, 1.0, 1e-4).unwrap();
        assert!((q + 16.0 / 3.0).abs() < 0.01 * 16.0 / 3.0);
        let c = fd_slope(trial_cubicgap, 2.0, 1e-4).unwrap();
        assert!((c + 11.0 / 3.0).abs() < 0.01 * 11.0 / 3.0);
    }

    #[test]
    fn quadrature_matches_exact() {
        let eps = 1e-3;
        let q = h22_even_interval_norm_sq(|t| 1.0 + eps * (1.0 - t * t), |t| -2.0 * eps * t, |_| -2.0 * eps, 1.0, 8).unwrap();
        assert!((q - 5.994697066666666).abs() < 1e-12);
    }
}
