//! H^{s,2} norms of characteristic functions by quadrature on the Fourier side.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::transform::{cantor_chi_hat, chi_hat_f64, lengths_f64, unit_kernel, INV_SQRT_2PI};
use crate::error::{Error, Result};
use crate::fractal::{CantorSpec, IntervalSet};
use crate::numeric::{gauss_legendre, KahanSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadRule {
    GaussLegendre,
    AdaptiveSimpson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Frequency half-width Xi.
    pub cutoff: f64,
    /// Panel count on [0, Xi]; derived from the endpoint spread when absent.
    pub panels: Option<usize>,
    pub nodes: usize,
    pub rule: QuadRule,
    pub tail_estimate: bool,
    /// Absolute tolerance for the adaptive rule.
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            cutoff: (1u64 << 20) as f64,
            panels: None,
            nodes: 64,
            rule: QuadRule::GaussLegendre,
            tail_estimate: true,
            tolerance: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn with_cutoff(mut self, cutoff: f64) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff.is_finite() && self.cutoff > 0.0) {
            return Err(Error::Invalid(format!("cutoff must be positive, got {}", self.cutoff)));
        }
        if matches!(self.panels, Some(k) if k < 2) {
            return Err(Error::Invalid("panel count must be at least 2".into()));
        }
        if !(1..=512).contains(&self.nodes) {
            return Err(Error::Invalid(format!("nodes per panel must lie in 1..=512, got {}", self.nodes)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Invalid("tolerance must be positive".into()));
        }
        Ok(())
    }

    fn panel_count(&self, spread: f64) -> usize {
        self.panels
            .unwrap_or_else(|| (self.cutoff * spread / std::f64::consts::TAU).ceil() as usize)
            .max(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    /// Integral over |xi| <= cutoff.
    pub value: f64,
    /// Bound on the omitted |xi| > cutoff part (0 when not requested).
    pub tail_bound: f64,
    /// Mean of the omitted part, from the incoherent 1/xi^2 asymptotics of |chi_hat|^2.
    pub tail_mean: f64,
    pub cutoff: f64,
}

impl NormEstimate {
    /// value + tail_mean.
    pub fn corrected(&self) -> f64 {
        self.value + self.tail_mean
    }
}

/// int_{|xi|>Xi} xi^{2s} k/(pi xi^2) dxi: the omitted part when the 2k endpoint phases decorrelate.
pub fn tail_mean(components: usize, s: f64, cutoff: f64) -> f64 {
    if s >= 0.5 {
        return f64::INFINITY;
    }
    2.0 * components as f64 / std::f64::consts::PI * cutoff.powf(2.0 * s - 1.0) / (1.0 - 2.0 * s)
}

/// Bound on int_{|xi|>Xi} (1+xi^2)^s |chi_hat|^2 for a union of k intervals, from |chi_hat| <= 2k/(sqrt(2 pi)|xi|).
pub fn tail_bound(components: usize, s: f64, cutoff: f64) -> f64 {
    if s >= 0.5 {
        return f64::INFINITY;
    }
    let k = components as f64;
    let xi = cutoff.max(1.0);
    let cs = if s > 0.0 { s.exp2() } else { 1.0 };
    // on [cutoff, 1] the weight is at most max(1, 2^s)
    let head = if cutoff < 1.0 { 4.0 * k * k * cs / std::f64::consts::PI * (1.0 / cutoff - 1.0) } else { 0.0 };
    head + 4.0 * k * k * cs / std::f64::consts::PI * xi.powf(2.0 * s - 1.0) / (1.0 - 2.0 * s)
}

/// Something whose |chi_hat|^2 can be sampled.
enum Source {
    /// Endpoints with signs +1 (left) / -1 (right), shifted to be centered.
    Endpoints { xs: Vec<f64>, signs: Vec<f64>, intervals: Vec<(f64, f64)> },
    /// Cantor level set through its lengths.
    Cantor { lengths: Vec<f64> },
}

impl Source {
    fn from_set(set: &IntervalSet) -> Source {
        let iv = set.to_f64();
        let lo = iv.first().map(|p| p.0).unwrap_or(0.0);
        let hi = iv.last().map(|p| p.1).unwrap_or(0.0);
        let mid = 0.5 * (lo + hi);
        let intervals: Vec<(f64, f64)> = iv.iter().map(|&(a, b)| (a - mid, b - mid)).collect();
        let mut xs = Vec::with_capacity(2 * intervals.len());
        let mut signs = Vec::with_capacity(2 * intervals.len());
        for &(a, b) in &intervals {
            xs.extend([a, b]);
            signs.extend([1.0, -1.0]);
        }
        Source::Endpoints { xs, signs, intervals }
    }

    fn spread(&self) -> f64 {
        match self {
            Source::Endpoints { intervals, .. } => match (intervals.first(), intervals.last()) {
                (Some(a), Some(b)) => b.1 - a.0,
                _ => 0.0,
            },
            Source::Cantor { lengths } => lengths.first().copied().unwrap_or(0.0),
        }
    }

    fn abs2(&self, xi: f64) -> f64 {
        match self {
            Source::Endpoints { intervals, .. } => chi_hat_f64(intervals, xi).norm_sqr(),
            Source::Cantor { lengths } => cantor_chi_hat(lengths, xi).norm_sqr(),
        }
    }
}

/// Phase tables for Gauss-Legendre panels: node values are phase(xi0) * table[k].
struct PanelEngine<'a> {
    src: &'a Source,
    offsets: Vec<f64>,
    weights: Vec<f64>,
    xs: Vec<f64>,
    // entry e * nodes + k: e^{-i delta_k x_e}, times the endpoint sign for sums
    t_re: Vec<f64>,
    t_im: Vec<f64>,
    acc_re: Vec<f64>,
    acc_im: Vec<f64>,
    p_re: Vec<f64>,
    p_im: Vec<f64>,
    w_re: Vec<f64>,
    w_im: Vec<f64>,
    // Cantor: the last length is handled directly
    last: f64,
}

const RESEED_EVERY: usize = 64;

impl<'a> PanelEngine<'a> {
    fn new(src: &'a Source, h: f64, nodes: usize) -> Self {
        let (gx, gw) = gauss_legendre(nodes);
        let offsets: Vec<f64> = gx.iter().map(|x| 0.5 * h * (x + 1.0)).collect();
        let weights: Vec<f64> = gw.iter().map(|w| 0.5 * h * w).collect();
        let (xs, signs, last) = match src {
            Source::Endpoints { xs, signs, .. } => (xs.clone(), signs.clone(), 0.0),
            Source::Cantor { lengths } => {
                let t: Vec<f64> = lengths.windows(2).map(|w| w[0] - w[1]).collect();
                let n = t.len();
                (t, vec![1.0; n], *lengths.last().unwrap_or(&0.0))
            }
        };
        let mut t_re = Vec::with_capacity(nodes * xs.len());
        let mut t_im = Vec::with_capacity(nodes * xs.len());
        for (x, c) in xs.iter().zip(&signs) {
            t_re.extend(offsets.iter().map(|d| c * (d * x).cos()));
            t_im.extend(offsets.iter().map(|d| -c * (d * x).sin()));
        }
        let w_re = xs.iter().map(|x| (h * x).cos()).collect();
        let w_im = xs.iter().map(|x| -(h * x).sin()).collect();
        let m = xs.len();
        PanelEngine {
            src,
            offsets,
            weights,
            xs,
            t_re,
            t_im,
            acc_re: vec![0.0; nodes],
            acc_im: vec![0.0; nodes],
            p_re: vec![1.0; m],
            p_im: vec![0.0; m],
            w_re,
            w_im,
            last,
        }
    }

    fn seed(&mut self, xi0: f64) {
        for (i, x) in self.xs.iter().enumerate() {
            let (s, c) = (-xi0 * x).sin_cos();
            self.p_re[i] = c;
            self.p_im[i] = s;
        }
    }

    fn advance(&mut self) {
        for i in 0..self.xs.len() {
            let (a, b) = (self.p_re[i], self.p_im[i]);
            self.p_re[i] = a * self.w_re[i] - b * self.w_im[i];
            self.p_im[i] = a * self.w_im[i] + b * self.w_re[i];
        }
    }

    /// |chi_hat|^2 at every node of the panel starting at xi0.
    fn panel_abs2(&mut self, xi0: f64, out: &mut [f64]) {
        let nodes = self.offsets.len();
        match self.src {
            Source::Endpoints { .. } => {
                self.acc_re.fill(0.0);
                self.acc_im.fill(0.0);
                for (e, (&pr, &pi)) in self.p_re.iter().zip(&self.p_im).enumerate() {
                    let a = &self.t_re[e * nodes..(e + 1) * nodes];
                    let b = &self.t_im[e * nodes..(e + 1) * nodes];
                    for (((sr, si), &x), &y) in self.acc_re.iter_mut().zip(self.acc_im.iter_mut()).zip(a).zip(b) {
                        *sr += pr * x - pi * y;
                        *si += pr * y + pi * x;
                    }
                }
                for (k, o) in out.iter_mut().enumerate() {
                    let xi = xi0 + self.offsets[k];
                    let (r, i) = (self.acc_re[k], self.acc_im[k]);
                    *o = (r * r + i * i) * INV_SQRT_2PI * INV_SQRT_2PI / (xi * xi);
                }
            }
            Source::Cantor { .. } => {
                for (k, o) in out.iter_mut().enumerate() {
                    let xi = xi0 + self.offsets[k];
                    *o = (Complex64::new(self.last, 0.0) * unit_kernel(xi * self.last)).norm_sqr() * INV_SQRT_2PI * INV_SQRT_2PI;
                }
                for (e, (&pr, &pi)) in self.p_re.iter().zip(&self.p_im).enumerate() {
                    let a = &self.t_re[e * nodes..(e + 1) * nodes];
                    let b = &self.t_im[e * nodes..(e + 1) * nodes];
                    for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
                        let re = 1.0 + pr * x - pi * y;
                        let im = pr * y + pi * x;
                        *o *= re * re + im * im;
                    }
                }
            }
        }
    }
}

fn integrate(src: &Source, components: usize, cfg: &QuadratureConfig, weight: &dyn Fn(f64) -> f64) -> Result<f64> {
    cfg.validate()?;
    let spread = src.spread();
    if spread <= 0.0 || components == 0 {
        return Ok(0.0);
    }
    let panels = cfg.panel_count(spread);
    let h = cfg.cutoff / panels as f64;
    let mut total = KahanSum::new();
    match cfg.rule {
        QuadRule::GaussLegendre => {
            let mut eng = PanelEngine::new(src, h, cfg.nodes);
            let mut vals = vec![0.0; cfg.nodes];
            for m in 0..panels {
                let xi0 = m as f64 * h;
                if m % RESEED_EVERY == 0 {
                    eng.seed(xi0);
                } else {
                    eng.advance();
                }
                if m == 0 {
                    for (k, v) in vals.iter_mut().enumerate() {
                        *v = src.abs2(eng.offsets[k]);
                    }
                } else {
                    eng.panel_abs2(xi0, &mut vals);
                }
                let mut panel = KahanSum::new();
                for k in 0..cfg.nodes {
                    panel.add(eng.weights[k] * weight(xi0 + eng.offsets[k]) * vals[k]);
                }
                total.add(panel.value());
            }
        }
        QuadRule::AdaptiveSimpson => {
            let f = |xi: f64| weight(xi) * src.abs2(xi);
            let tol = cfg.tolerance / panels as f64;
            for m in 0..panels {
                let (a, b) = (m as f64 * h, (m + 1) as f64 * h);
                total.add(adaptive_simpson(&f, a, b, tol)?);
            }
        }
    }
    Ok(2.0 * total.value())
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 40)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if diff.abs() <= 15.0 * tol {
        return Ok(left + right + diff / 15.0);
    }
    if depth == 0 {
        return Err(Error::NonConvergence {
            iterations: 40,
            residual: diff.abs(),
        });
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)? + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

fn estimate(src: &Source, components: usize, s: f64, cfg: &QuadratureConfig) -> Result<NormEstimate> {
    if components > 0 && s >= 0.5 {
        return Err(Error::Divergent { s });
    }
    let value = integrate(src, components, cfg, &|xi| if s == 0.0 { 1.0 } else { (1.0 + xi * xi).powf(s) })?;
    let tail = if cfg.tail_estimate && components > 0 { tail_bound(components, s, cfg.cutoff) } else { 0.0 };
    let mean = if cfg.tail_estimate && components > 0 && cfg.cutoff >= 1.0 { tail_mean(components, s, cfg.cutoff) } else { 0.0 };
    Ok(NormEstimate {
        value,
        tail_bound: tail,
        tail_mean: mean,
        cutoff: cfg.cutoff,
    })
}

/// int_{|xi| <= Xi} (1 + xi^2)^s |chi_hat(xi)|^2 dxi for a finite union of intervals.
pub fn hs2_norm_sq(set: &IntervalSet, s: f64, cfg: &QuadratureConfig) -> Result<NormEstimate> {
    if !s.is_finite() {
        return Err(Error::Invalid(format!("s must be finite, got {s}")));
    }
    estimate(&Source::from_set(set), set.len(), s, cfg)
}

/// Same norm for the level-J set of a one-dimensional Cantor construction, via the product formula.
pub fn hs2_norm_sq_cantor(spec: &CantorSpec, depth: usize, s: f64, cfg: &QuadratureConfig) -> Result<NormEstimate> {
    if spec.n() != 1 {
        return Err(Error::Invalid("Fourier norms are computed for n = 1 only".into()));
    }
    if !s.is_finite() {
        return Err(Error::Invalid(format!("s must be finite, got {s}")));
    }
    let lengths = lengths_f64(&spec.lengths(depth)?);
    let k = 1usize.checked_shl(depth as u32).unwrap_or(usize::MAX);
    estimate(&Source::Cantor { lengths }, k, s, cfg)
}

/// 2 int_{|xi| <= Xi} (1 - cos(t xi)) |chi_hat(xi)|^2 dxi, the Fourier side of ||chi_A - chi_{A+t}||^2.
pub fn shift_diff_fourier(set: &IntervalSet, t: f64, cfg: &QuadratureConfig) -> Result<NormEstimate> {
    let value = integrate(&Source::from_set(set), set.len(), cfg, &|xi| 2.0 * (1.0 - (t * xi).cos()))?;
    let tail = if cfg.tail_estimate && !set.is_empty() { 4.0 * tail_bound(set.len(), 0.0, cfg.cutoff) } else { 0.0 };
    Ok(NormEstimate {
        value,
        tail_bound: tail,
        tail_mean: 0.0,
        cutoff: cfg.cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::{make_cantor, Family};
    use crate::numeric::{rational, rational_to_f64};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn set(iv: &[(i64, i64, i64)]) -> IntervalSet {
        IntervalSet::from_intervals(iv.iter().map(|&(a, b, d)| (rational(a, d), rational(b, d))).collect()).unwrap()
    }

    #[test]
    fn unit_interval_plancherel() {
        let e = hs2_norm_sq(&set(&[(0, 1, 1)]), 0.0, &QuadratureConfig::default()).unwrap();
        assert!(e.value <= 1.0 && 1.0 - e.value <= e.tail_bound);
        assert!((e.tail_bound - 4.0 / std::f64::consts::PI / (1u64 << 20) as f64).abs() < 1e-18);
        // true tail is 2/(pi Xi) up to O(Xi^-2)
        assert!((1.0 - e.value - 2.0 / std::f64::consts::PI / e.cutoff).abs() < 1e-9);
    }

    #[test]
    fn divergence_is_certified() {
        let s = set(&[(0, 1, 1)]);
        assert_eq!(hs2_norm_sq(&s, 0.5, &QuadratureConfig::default()), Err(Error::Divergent { s: 0.5 }));
        assert_eq!(hs2_norm_sq(&IntervalSet::empty(), 0.7, &QuadratureConfig::default()).unwrap().value, 0.0);
    }

    #[test]
    fn cantor_matches_interval_path() {
        let spec = make_cantor(Family::FatCantor { alpha: rational(1, 4), beta: rational(1, 4) }, 1).unwrap();
        let cfg = QuadratureConfig::default().with_cutoff(4096.0);
        for s in [0.0, 0.2, -0.3] {
            let a = hs2_norm_sq(&spec.level_set(3).unwrap(), s, &cfg).unwrap();
            let b = hs2_norm_sq_cantor(&spec, 3, s, &cfg).unwrap();
            assert!((a.value - b.value).abs() < 1e-12 * a.value.max(1.0), "{s}: {} {}", a.value, b.value);
            assert_eq!(a.tail_bound, b.tail_bound);
        }
        let e2 = hs2_norm_sq_cantor(&spec, 2, 0.0, &QuadratureConfig::default()).unwrap();
        assert!((0.625 - e2.value).abs() <= e2.tail_bound && e2.value <= 0.625);
    }

    #[test]
    fn rules_agree() {
        let s = set(&[(0, 1, 4), (1, 2, 2)]);
        let gl = QuadratureConfig::default().with_cutoff(200.0);
        let simpson = QuadratureConfig {
            rule: QuadRule::AdaptiveSimpson,
            tolerance: 1e-11,
            ..gl
        };
        let a = hs2_norm_sq(&s, 0.3, &gl).unwrap().value;
        let b = hs2_norm_sq(&s, 0.3, &simpson).unwrap().value;
        assert!((a - b).abs() < 1e-9, "{a} {b}");
    }

    #[test]
    fn shift_identity() {
        let a = set(&[(0, 1, 4), (1, 2, 2), (7, 8, 8)]);
        let t = rational(1, 16);
        let exact = rational_to_f64(&a.symmetric_difference(&a.shift(&t)).total_length());
        let q = shift_diff_fourier(&a, rational_to_f64(&t), &QuadratureConfig::default()).unwrap();
        assert!((exact - q.value).abs() <= q.tail_bound, "{exact} {q:?}");
        assert!((exact - q.value).abs() < 1e-5);
    }

    #[test]
    fn tail_mean_closes_the_gap() {
        let s = set(&[(0, 1, 1), (3, 5, 2)]);
        let m = 2.0;
        let lo = hs2_norm_sq(&s, 0.0, &QuadratureConfig::default().with_cutoff(1024.0)).unwrap();
        let hi = hs2_norm_sq(&s, 0.0, &QuadratureConfig::default().with_cutoff(16384.0)).unwrap();
        assert!((m - lo.corrected()).abs() < 0.05 * (m - lo.value));
        assert!((m - hi.corrected()).abs() < (m - lo.corrected()).abs());
        assert!(tail_mean(2, 0.5, 10.0).is_infinite());
    }

    #[test]
    fn config_validation() {
        let bad = QuadratureConfig {
            panels: Some(1),
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(QuadratureConfig::default().with_cutoff(0.0).validate().is_err());
    }

    fn random_set() -> impl Strategy<Value = IntervalSet> {
        prop::collection::vec((0i64..1000, 1i64..60), 1..12).prop_map(|v| {
            let iv: Vec<(BigRational, BigRational)> = v.iter().map(|&(a, l)| (rational(a, 997), rational(a + l, 997))).collect();
            IntervalSet::from_intervals(iv).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn plancherel(a in random_set()) {
            let e = hs2_norm_sq(&a, 0.0, &QuadratureConfig::default().with_cutoff(65536.0)).unwrap();
            let m = rational_to_f64(&a.total_length());
            prop_assert!(e.value <= m + 1e-12 && m - e.value <= e.tail_bound, "{} {} {}", e.value, m, e.tail_bound);
        }

        #[test]
        fn chi_hat_linear(a in random_set(), xi in -500.0f64..500.0) {
            let iv = a.intervals();
            let (left, right) = iv.split_at(iv.len() / 2);
            let l = IntervalSet::from_intervals(left.to_vec()).unwrap();
            let r = IntervalSet::from_intervals(right.to_vec()).unwrap();
            let d = super::super::transform::chi_hat(&a, xi) - super::super::transform::chi_hat(&l, xi) - super::super::transform::chi_hat(&r, xi);
            prop_assert!(d.norm() < 1e-13);
        }
    }
}
