//! Periodic spectral grid carrying a discrete H^{s,2} quadratic form.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Grid x_i = -L + i dx on the periodic box [-L, L) with symbol (1 + xi_k^2)^s, xi_k = pi k / L.
#[derive(Clone)]
pub struct SpectralGrid {
    half_width: f64,
    n: usize,
    s: f64,
    symbol: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("half_width", &self.half_width)
            .field("n", &self.n)
            .field("s", &self.s)
            .finish()
    }
}

pub fn build_grid(half_width: f64, n: usize, s: f64) -> Result<SpectralGrid> {
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::Invalid(format!("N must be a power of two >= 16, got {n}")));
    }
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::Invalid(format!("half-width L must be positive, got {half_width}")));
    }
    if !s.is_finite() {
        return Err(Error::Invalid(format!("s must be finite, got {s}")));
    }
    let dxi = std::f64::consts::PI / half_width;
    let symbol = (0..n)
        .map(|k| {
            let kk = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
            let xi = kk * dxi;
            (1.0 + xi * xi).powf(s)
        })
        .collect();
    let mut planner = FftPlanner::new();
    Ok(SpectralGrid {
        half_width,
        n,
        s,
        symbol,
        fwd: planner.plan_fft_forward(n),
        inv: planner.plan_fft_inverse(n),
    })
}

impl SpectralGrid {
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.dx()
    }

    /// Symbol values in FFT order.
    pub fn symbol(&self) -> &[f64] {
        &self.symbol
    }

    pub fn symbol_max(&self) -> f64 {
        self.symbol.iter().cloned().fold(0.0, f64::max)
    }

    fn spectrum(&self, u: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    fn filter(&self, u: &[f64], scale: impl Fn(f64) -> f64) -> Vec<f64> {
        assert_eq!(u.len(), self.n, "grid function has the wrong length");
        let mut buf = self.spectrum(u);
        for (b, w) in buf.iter_mut().zip(&self.symbol) {
            *b *= scale(*w);
        }
        self.inv.process(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }

    /// A u with Q(u) = u^T A u, i.e. (dx/N) F^H W F u.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let c = self.dx() / self.n as f64;
        self.filter(u, |w| c * w)
    }

    /// A^{-1} v.
    pub fn apply_inverse(&self, v: &[f64]) -> Vec<f64> {
        let c = 1.0 / (self.dx() * self.n as f64);
        self.filter(v, |w| c / w)
    }

    /// Q(u) = sum_k w_k |u^_k|^2 dxi in the discrete normalization (dx/N) sum_k w_k |U_k|^2.
    pub fn quad_form(&self, u: &[f64]) -> f64 {
        assert_eq!(u.len(), self.n, "grid function has the wrong length");
        let spec = self.spectrum(u);
        let mut acc = crate::numeric::KahanSum::new();
        for (c, w) in spec.iter().zip(&self.symbol) {
            acc.add(w * c.norm_sqr());
        }
        acc.value() * self.dx() / self.n as f64
    }

    /// Grid indices with x_i in [a, b].
    pub fn indices_in(&self, a: f64, b: f64) -> Vec<usize> {
        (0..self.n).filter(|&i| (a..=b).contains(&self.x(i))).collect()
    }

    /// Nearest grid index to x (periodically).
    pub fn nearest(&self, x: f64) -> usize {
        let t = ((x + self.half_width) / self.dx()).round() as i64;
        t.rem_euclid(self.n as i64) as usize
    }

    /// Spectral derivative, with the Nyquist mode dropped.
    pub fn derivative(&self, u: &[f64]) -> Vec<f64> {
        let mut buf = self.spectrum(u);
        let dxi = std::f64::consts::PI / self.half_width;
        let n = self.n;
        for (k, b) in buf.iter_mut().enumerate() {
            let kk = if k < n / 2 { k as f64 } else if k == n / 2 { 0.0 } else { k as f64 - n as f64 };
            *b *= Complex64::new(0.0, kk * dxi / n as f64);
        }
        self.inv.process(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        assert!(build_grid(1.0, 15, 0.0).is_err());
        assert!(build_grid(1.0, 24, 0.0).is_err());
        assert!(build_grid(0.0, 16, 0.0).is_err());
        let g = build_grid(4.0, 64, 0.5).unwrap();
        assert_eq!(g.symbol()[0], 1.0);
        assert!(g.symbol().iter().all(|w| *w > 0.0));
    }

    #[test]
    fn parseval() {
        let g = build_grid(3.0, 256, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u: Vec<f64> = (0..256).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let direct = g.dx() * u.iter().map(|v| v * v).sum::<f64>();
        assert!((g.quad_form(&u) - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn first_order_form() {
        let g = build_grid(2.0, 512, 1.0).unwrap();
        let u: Vec<f64> = (0..512)
            .map(|i| {
                let x = g.x(i) * std::f64::consts::PI / 2.0;
                (3.0 * x).sin() + 0.5 * (7.0 * x).cos() + 0.25
            })
            .collect();
        let du = g.derivative(&u);
        let direct = g.dx() * u.iter().zip(&du).map(|(a, b)| a * a + b * b).sum::<f64>();
        assert!((g.quad_form(&u) - direct).abs() < 1e-10 * direct);
    }

    #[test]
    fn inverse_roundtrip() {
        let g = build_grid(5.0, 128, 2.0).unwrap();
        let u: Vec<f64> = (0..128).map(|i| (i as f64 * 0.37).sin()).collect();
        let back = g.apply_inverse(&g.apply(&u));
        assert!(u.iter().zip(&back).all(|(a, b)| (a - b).abs() < 1e-9));
        let q: f64 = u.iter().zip(g.apply(&u)).map(|(a, b)| a * b).sum();
        assert!((q - g.quad_form(&u)).abs() < 1e-10 * q);
    }
}
