//! Fourier transforms of characteristic functions of interval unions,
//! with the convention f^(xi) = (2 pi)^{-1/2} int f(x) e^{-i xi x} dx.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::fractal::IntervalSet;
use crate::numeric::rational_to_f64;

pub(crate) const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const TAYLOR_CUTOFF: f64 = 1e-4;

/// (1 - e^{-i theta}) / (i theta), evaluated without cancellation.
pub(crate) fn unit_kernel(theta: f64) -> Complex64 {
    if theta.abs() < TAYLOR_CUTOFF {
        // sum_k (-i theta)^k / (k+1)!, k <= 8
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        let z = Complex64::new(0.0, -theta);
        for k in 1..=8 {
            term = term * z / (k + 1) as f64;
            acc += term;
        }
        return acc;
    }
    let h = (0.5 * theta).sin();
    // (2 sin^2(theta/2) + i sin theta) / (i theta)
    Complex64::new(theta.sin() / theta, -2.0 * h * h / theta)
}

/// chi_hat of a union of intervals given as f64 pairs.
pub fn chi_hat_f64(intervals: &[(f64, f64)], xi: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(a, b) in intervals {
        let len = b - a;
        acc += Complex64::from_polar(len, -xi * a) * unit_kernel(xi * len);
    }
    acc * INV_SQRT_2PI
}

pub fn chi_hat(set: &IntervalSet, xi: f64) -> Complex64 {
    chi_hat_f64(&set.to_f64(), xi)
}

/// chi_hat of the level-J set of a Cantor construction on [0, l_0], from the lengths l_0..=l_J:
/// (2 pi)^{-1/2} prod_k (1 + e^{-i xi (l_{k-1} - l_k)}) * l_J K(xi l_J).
pub fn cantor_chi_hat(lengths: &[f64], xi: f64) -> Complex64 {
    let Some(&last) = lengths.last() else {
        return Complex64::new(0.0, 0.0);
    };
    let mut acc = Complex64::new(last, 0.0) * unit_kernel(xi * last) * INV_SQRT_2PI;
    for w in lengths.windows(2) {
        acc *= Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -xi * (w[0] - w[1]));
    }
    acc
}

pub(crate) fn lengths_f64(lengths: &[BigRational]) -> Vec<f64> {
    lengths.iter().map(rational_to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;
    use std::f64::consts::PI;

    #[test]
    fn examples() {
        let unit = [(0.0, 1.0)];
        assert!((chi_hat_f64(&unit, 0.0).re - INV_SQRT_2PI).abs() < 1e-16);
        assert!(chi_hat_f64(&unit, 2.0 * PI).norm() < 1e-16);
        let v = chi_hat_f64(&[(-1.0, 1.0)], PI / 2.0);
        assert!((v.re - 0.5079490874739279).abs() < 1e-15);
        assert!(v.im.abs() < 1e-16);
    }

    #[test]
    fn kernel_branches_agree() {
        for t in [0.9e-4, 1.1e-4, 1e-3, 0.5, 3.0] {
            let exact = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -t)) / Complex64::new(0.0, t);
            assert!((unit_kernel(t) - exact).norm() / exact.norm() < 1e-12, "{t}");
        }
        let t = 1e-9;
        let k = unit_kernel(t);
        assert!((k.re - 1.0).abs() < 1e-16 && (k.im + t / 2.0).abs() < 1e-24);
    }

    #[test]
    fn cantor_product_matches_intervals() {
        let ls = [rational(1, 1), rational(3, 8), rational(5, 32), rational(9, 128)];
        let mut starts = vec![rational(0, 1)];
        for k in 1..ls.len() {
            let off = &ls[k - 1] - &ls[k];
            starts = starts.iter().flat_map(|a| [a.clone(), a + &off]).collect();
        }
        let set = IntervalSet::from_intervals(starts.into_iter().map(|a| (a.clone(), a + &ls[3])).collect()).unwrap();
        let lf = lengths_f64(&ls);
        for xi in [0.0, 1e-6, 0.3, 7.0, 123.4, 5e4] {
            let a = chi_hat(&set, xi);
            let b = cantor_chi_hat(&lf, xi);
            assert!((a - b).norm() < 1e-14, "{xi}: {a} vs {b}");
        }
    }
}
