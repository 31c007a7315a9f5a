//! Threshold formulas and the Cantor-set classifier.

use super::series::{probe_logs, Convergence, SeriesConfig};
use super::verdict::{Justification, NullityVerdict};
use crate::error::{domain, Result};
use crate::fractal::{CantorSpec, Family};
use crate::index::SobolevIndex;
use crate::numeric::rational_to_f64;

/// |s - threshold| below this is treated as equality.
pub const THRESHOLD_TOL: f64 = 1e-12;

/// (d - n)/p'.
pub fn hausdorff_threshold(d: f64, n: u32, p: f64) -> Result<f64> {
    let nf = n as f64;
    if !(0.0..=nf).contains(&d) {
        return domain(format!("Hausdorff dimension must lie in [0, n] = [0, {n}], got {d}"));
    }
    let idx = SobolevIndex::new(0.0, p)?;
    Ok((d - nf) / idx.p_conj())
}

/// Verdict from dim_H for a Borel set of zero measure.
pub fn classify_by_dimension(d: f64, n: u32, index: &SobolevIndex) -> Result<NullityVerdict> {
    let t = hausdorff_threshold(d, n, index.p())?;
    let s = index.s();
    Ok(if (s - t).abs() <= THRESHOLD_TOL {
        NullityVerdict::unknown(format!("s equals the dimension threshold {t}; threshold nullity is not determined by dim_H"))
    } else if s > t {
        NullityVerdict::null(Justification::HausdorffAbove, format!("s > (d-n)/p' = {t}"))
    } else {
        NullityVerdict::not_null(Justification::HausdorffBelow, format!("s < (d-n)/p' = {t}"))
    })
}

/// log2 of the j-th term of the Cantor series criterion.
pub fn cantor_term_log2(spec: &CantorSpec, s: f64, p: f64, j: u64) -> Result<f64> {
    let idx = SobolevIndex::new(s, p)?;
    let n = spec.n() as f64;
    let low = -n / idx.p_conj();
    let l = spec.log2_length(j);
    if (s - low).abs() <= THRESHOLD_TOL {
        // 2^{-jn(p-1)} log(1/l_j)
        if j == 0 {
            return Ok(f64::NEG_INFINITY);
        }
        let ln_inv = -l * std::f64::consts::LN_2;
        return Ok(-(j as f64) * n * (p - 1.0) + ln_inv.log2());
    }
    if s < low || s >= 0.0 {
        return domain(format!("series criterion needs -n/p' <= s < 0, got s = {s} with -n/p' = {low}"));
    }
    let kappa = s * idx.p_conj() + n;
    Ok((p - 1.0) * (-(j as f64) * n - kappa * l))
}

pub fn cantor_term(spec: &CantorSpec, s: f64, p: f64, j: u64) -> Result<f64> {
    cantor_term_log2(spec, s, p, j).map(f64::exp2)
}

/// Asymptotic shape of log2 t_j as a sum of scales, fastest first:
/// h 2^{2^j} + f 2^{g j} + q j^2 + a j + b sqrt(j) + c log2 j + e log2 ln j.
/// `c1` is c + 1 and `e1` is e + 1, computed by the caller so that the
/// critical cases are exact zeros.
#[derive(Debug, Clone, Copy, Default)]
struct Shape {
    h: f64,
    f: f64,
    q: f64,
    a: f64,
    b: f64,
    c1: f64,
    e1: f64,
}

fn snap(x: f64) -> f64 {
    if x.abs() <= THRESHOLD_TOL {
        0.0
    } else {
        x
    }
}

impl Shape {
    fn verdict(&self) -> Convergence {
        for v in [self.h, self.f, self.q, self.a, self.b] {
            let v = snap(v);
            if v != 0.0 {
                return if v < 0.0 { Convergence::Converges } else { Convergence::Diverges };
            }
        }
        let c1 = snap(self.c1);
        if c1 != 0.0 {
            return if c1 < 0.0 { Convergence::Converges } else { Convergence::Diverges };
        }
        if snap(self.e1) < 0.0 {
            Convergence::Converges
        } else {
            Convergence::Diverges
        }
    }
}

fn zoo_shape(spec: &CantorSpec, kappa_minus_d: f64, kappa: f64, log_case: bool, p: f64) -> Option<Shape> {
    let n = spec.n() as f64;
    let pm = p - 1.0;
    let mut sh = Shape {
        c1: 1.0,
        e1: 1.0,
        ..Shape::default()
    };
    // log case: log2 t_j = -jn(p-1) + log2 ln(1/l_j)
    let f = |x: &num_rational::BigRational| rational_to_f64(x);
    match spec.family() {
        Family::Geometric { ratio } => {
            let r = -crate::numeric::log2_rational(ratio);
            if log_case {
                sh.a = -n * pm;
            } else {
                // (p-1)(-jn + kappa j r), zero exactly when kappa = n / r
                sh.a = pm * (kappa * r - n);
            }
        }
        Family::FInf { d } => {
            let d = f(d);
            if d == 0.0 {
                if log_case {
                    sh.f = 1.0;
                } else {
                    sh.h = pm * kappa;
                }
            } else if d == n {
                if log_case {
                    sh.a = -n * pm;
                } else {
                    sh.a = pm * (kappa - n);
                    sh.c1 = pm * kappa + 1.0;
                }
            } else if log_case {
                sh.a = -n * pm;
            } else {
                sh.a = pm * n * kappa_minus_d / d;
            }
        }
        Family::F1 { d } => {
            let d = f(d);
            if d == 0.0 {
                if log_case {
                    sh.a = -n * pm;
                } else {
                    sh.q = pm * kappa;
                }
            } else if log_case {
                sh.a = -n * pm;
            } else {
                sh.a = pm * n * kappa_minus_d / d;
                sh.b = -pm * kappa * (n / d - 1.0) / 2.0;
            }
        }
        Family::FP { d, p_star } => {
            let (d, ps) = (f(d), f(p_star));
            if d == 0.0 {
                if log_case {
                    // 2^{j n(p*-1)} (j+j0)^-2 against 2^{-jn(p-1)}
                    sh.a = n * (ps - p);
                    sh.c1 = -1.0;
                } else {
                    sh.f = pm * kappa;
                }
            } else if log_case {
                sh.a = -n * pm;
            } else {
                sh.a = pm * n * kappa_minus_d / d;
                let w = pm * kappa / (d * (ps - 1.0));
                if kappa_minus_d == 0.0 {
                    sh.c1 = (ps - p) / (ps - 1.0);
                    sh.e1 = (ps - 1.0 - 2.0 * pm) / (ps - 1.0);
                } else {
                    sh.c1 = 1.0 - w;
                    sh.e1 = 1.0 - 2.0 * w;
                }
            }
        }
        Family::E { d, p_star } => {
            let (d, ps) = (f(d), f(p_star));
            if d == 0.0 {
                if log_case {
                    sh.a = n * (ps - p);
                } else {
                    sh.f = pm * kappa;
                }
            } else if log_case {
                sh.a = -n * pm;
            } else {
                sh.a = pm * n * kappa_minus_d / d;
                if kappa_minus_d == 0.0 {
                    sh.c1 = (ps - p) / (ps - 1.0);
                } else {
                    sh.c1 = 1.0 - pm * kappa / (d * (ps - 1.0));
                }
            }
        }
        _ => return None,
    }
    Some(sh)
}

/// Fat Cantor s_{alpha,p} = (1/p)(1 + log 2 / log alpha).
pub fn fat_threshold(alpha: f64, p: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return domain(format!("need 0 < alpha < 1/2, got {alpha}"));
    }
    SobolevIndex::new(0.0, p)?;
    Ok((1.0 + std::f64::consts::LN_2 / alpha.ln()) / p)
}

/// Decides (s,p)-nullity of a Cantor set E^(n).
pub fn classify_cantor(spec: &CantorSpec, index: &SobolevIndex) -> NullityVerdict {
    classify_cantor_with(spec, index, &SeriesConfig::default())
}

pub fn classify_cantor_with(spec: &CantorSpec, index: &SobolevIndex, cfg: &SeriesConfig) -> NullityVerdict {
    let n = spec.n() as f64;
    let (s, p) = (index.s(), index.p());
    let pc = index.p_conj();
    let low = -n / pc;
    let high = n / p;
    let at_low = (s - low).abs() <= THRESHOLD_TOL;
    if s < low && !at_low {
        return NullityVerdict::not_null(Justification::DeltaLowS, format!("s < -n/p' = {low}: no non-empty set is null"));
    }
    let null_measure = spec.has_null_measure();
    if s >= 0.0 && null_measure == Some(true) {
        return NullityVerdict::null(Justification::Basic, "s >= 0 and the set has zero measure");
    }
    if null_measure == Some(false) {
        if s <= 0.0 {
            return NullityVerdict::not_null(Justification::MeasurePositive, "positive measure and s <= 0");
        }
        if s > high {
            return NullityVerdict::null(Justification::EmptyInteriorHighS, format!("empty interior and s > n/p = {high}"));
        }
        if let Family::FatCantor { alpha, .. } = spec.family() {
            if spec.n() == 1 {
                let a = rational_to_f64(alpha);
                let bound = if p < 2.0 { fat_threshold(a, 2.0) } else { fat_threshold(a, p) };
                if let Ok(t) = bound {
                    if s < t {
                        return NullityVerdict::not_null(
                            Justification::FourierMembership,
                            format!("characteristic function lies in H^(s,p) for s < {t}"),
                        );
                    }
                }
            }
        }
        return NullityVerdict::unknown("positive-measure Cantor set with 0 < s <= n/p outside the proven range");
    }
    if null_measure.is_none() && s >= 0.0 {
        return NullityVerdict::unknown("measure of an explicit finite list is not determined");
    }
    // -n/p' <= s < 0
    let kappa = if at_low { 0.0 } else { s * pc + n };
    let kappa_minus_d = match spec.family().zoo_dimension().map(rational_to_f64) {
        Some(d) => {
            let t = (d - n) / pc;
            if (s - t).abs() <= THRESHOLD_TOL {
                0.0
            } else {
                kappa - d
            }
        }
        None => f64::NAN,
    };
    if let Some(shape) = zoo_shape(spec, kappa_minus_d, kappa, at_low, p) {
        return match shape.verdict() {
            Convergence::Diverges => NullityVerdict::null(Justification::ZooClosedForm, "Cantor series diverges (closed form)"),
            _ => NullityVerdict::not_null(Justification::ZooClosedForm, "Cantor series converges (closed form)"),
        };
    }
    let s_eff = if at_low { low } else { s };
    let depth = cfg.max_index.min(spec.depth_cap());
    let mut logs = Vec::with_capacity(depth);
    for j in 1..=depth as u64 {
        match cantor_term_log2(spec, s_eff, p, j) {
            Ok(l) if l.is_finite() => logs.push(l),
            Ok(_) => return NullityVerdict::unknown(format!("series term {j} not representable")),
            Err(e) => return NullityVerdict::unknown(e.to_string()),
        }
    }
    let probe = probe_logs(&logs, cfg);
    match probe.verdict {
        Convergence::Diverges => NullityVerdict::null(
            Justification::CantorSeries,
            format!("series probe diverges (ratio {:.6}, J = {})", probe.ratio, probe.last_index),
        ),
        Convergence::Converges => NullityVerdict::not_null(
            Justification::CantorSeries,
            format!("series probe converges (ratio {:.6}, J = {})", probe.ratio, probe.last_index),
        ),
        Convergence::Inconclusive => NullityVerdict::unknown(format!("series probe inconclusive at J = {}", probe.last_index)),
    }
}

/// Hausdorff dimension of E^(n) when the family determines it.
pub fn dimension_of(spec: &CantorSpec) -> Option<f64> {
    let n = spec.n() as f64;
    match spec.family() {
        Family::Geometric { ratio } => Some(n / -crate::numeric::log2_rational(ratio)),
        Family::FatCantor { .. } | Family::SuperFatCantor { .. } => Some(n),
        Family::Explicit { .. } => None,
        f => f.zoo_dimension().map(rational_to_f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nullity::verdict::Verdict;
    use crate::numeric::rational;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn idx(s: f64, p: f64) -> SobolevIndex {
        SobolevIndex::new(s, p).unwrap()
    }

    fn finf(d: BigRational, n: u32) -> CantorSpec {
        make(Family::FInf { d }, n)
    }

    fn make(f: Family, n: u32) -> CantorSpec {
        CantorSpec::new(f, n).unwrap()
    }

    #[test]
    fn thresholds() {
        assert_eq!(hausdorff_threshold(1.0, 1, 2.0).unwrap(), 0.0);
        assert_eq!(hausdorff_threshold(0.0, 1, 2.0).unwrap(), -0.5);
        let d = 2f64.ln() / 3f64.ln();
        assert!((hausdorff_threshold(d, 1, 2.0).unwrap() - -0.1845351232142713).abs() < 1e-15);
        assert!(hausdorff_threshold(1.5, 1, 2.0).is_err());
        assert!(hausdorff_threshold(-0.1, 1, 2.0).is_err());
        let v = classify_by_dimension(0.5, 1, &idx(-0.25, 2.0)).unwrap();
        assert_eq!(v.verdict(), Verdict::Unknown);
        assert_eq!(classify_by_dimension(0.5, 1, &idx(-0.2, 2.0)).unwrap().justification(), Justification::HausdorffAbove);
        assert_eq!(classify_by_dimension(0.5, 1, &idx(-0.3, 2.0)).unwrap().justification(), Justification::HausdorffBelow);
    }

    #[test]
    fn terms() {
        let f = finf(rational(1, 2), 1);
        for j in 1..20 {
            assert!((cantor_term(&f, -0.25, 2.0, j).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!((cantor_term(&f, -0.3, 2.0, 10).unwrap() - 0.25).abs() < 1e-14);
        let ternary = make(Family::Geometric { ratio: rational(1, 3) }, 1);
        assert!((cantor_term(&ternary, -0.5, 2.0, 1).unwrap() - 0.5493061443340549).abs() < 1e-14);
        assert!(cantor_term(&ternary, -0.6, 2.0, 1).is_err());
        assert!(cantor_term(&ternary, 0.0, 2.0, 1).is_err());
    }

    #[test]
    fn zoo_examples() {
        for p in [1.25, 2.0, 4.0] {
            let t = (0.5 - 1.0) * (p - 1.0) / p;
            assert_eq!(classify_cantor(&finf(rational(1, 2), 1), &idx(t, p)).verdict(), Verdict::Null);
        }
        let e = make(Family::E { d: rational(1, 2), p_star: rational(3, 1) }, 1);
        let t = |p: f64| -0.5 * (p - 1.0) / p;
        assert_eq!(classify_cantor(&e, &idx(t(3.0), 3.0)).verdict(), Verdict::Null);
        assert_eq!(classify_cantor(&e, &idx(t(3.1), 3.1)).verdict(), Verdict::NotNull);
        let f1 = make(Family::F1 { d: rational(1, 2) }, 1);
        assert_eq!(classify_cantor(&f1, &idx(t(1.5), 1.5)).verdict(), Verdict::NotNull);
    }

    #[test]
    fn precedence() {
        let f = finf(rational(1, 2), 1);
        assert_eq!(classify_cantor(&f, &idx(-0.6, 2.0)).justification(), Justification::DeltaLowS);
        assert_eq!(classify_cantor(&f, &idx(0.0, 2.0)).justification(), Justification::Basic);
        let fat = make(Family::FatCantor { alpha: rational(1, 4), beta: rational(1, 4) }, 1);
        assert_eq!(classify_cantor(&fat, &idx(0.0, 2.0)).justification(), Justification::MeasurePositive);
        assert_eq!(classify_cantor(&fat, &idx(0.2, 2.0)).justification(), Justification::FourierMembership);
        assert_eq!(classify_cantor(&fat, &idx(0.3, 2.0)).verdict(), Verdict::Unknown);
        assert_eq!(classify_cantor(&fat, &idx(0.6, 2.0)).justification(), Justification::EmptyInteriorHighS);
    }

    #[test]
    fn explicit_lists_use_the_probe() {
        let lengths: Vec<BigRational> = (0..=64).map(|j| BigRational::new(1.into(), num_bigint::BigInt::from(3).pow(j))).collect();
        let spec = make(Family::Explicit { lengths }, 1).with_depth_cap(64);
        let v = classify_cantor(&spec, &idx(-0.1, 2.0));
        assert_eq!((v.verdict(), v.justification()), (Verdict::Null, Justification::CantorSeries));
        let v = classify_cantor(&spec, &idx(-0.3, 2.0));
        assert_eq!((v.verdict(), v.justification()), (Verdict::NotNull, Justification::CantorSeries));
        assert_eq!(classify_cantor(&spec, &idx(0.1, 2.0)).verdict(), Verdict::Unknown);
    }

    #[test]
    fn fat_threshold_values() {
        assert!((fat_threshold(0.25, 2.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(fat_threshold(0.5, 2.0).is_err());
    }

    fn zoo_family(kind: u8, d: BigRational, ps: BigRational, n: u32) -> Family {
        match kind {
            0 => Family::E { d, p_star: ps },
            1 => Family::FP { d, p_star: ps },
            2 => Family::F1 { d },
            3 => Family::FInf { d },
            _ => Family::FInf { d: BigRational::from_integer(n.into()) },
        }
    }

    fn d_choice() -> impl Strategy<Value = BigRational> {
        prop_oneof![Just(rational(0, 1)), Just(rational(1, 3)), Just(rational(1, 2)), Just(rational(9, 10))]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn embedding_monotone(kind in 0u8..5, d in d_choice(), ps in prop_oneof![Just(rational(3, 2)), Just(rational(3, 1))],
                              n in 1u32..3, s in -1.2f64..0.8, p in 1.1f64..5.0, dt in 0.0f64..0.5, q in 1.1f64..5.0) {
            let spec = make(zoo_family(kind, d, ps, n), n);
            let nf = n as f64;
            let t = s + dt + (nf / q - nf / p).max(0.0);
            if classify_cantor(&spec, &idx(s, p)).verdict() == Verdict::Null {
                prop_assert_eq!(classify_cantor(&spec, &idx(t, q)).verdict(), Verdict::Null);
            }
        }

        #[test]
        fn threshold_null_monotone(kind in 0u8..4, d in d_choice(), ps in prop_oneof![Just(rational(3, 2)), Just(rational(3, 1))],
                                   n in 1u32..3, p in 1.1f64..5.0, q in 1.1f64..5.0) {
            let (p, q) = if q < p { (p, q) } else { (q, p) };
            prop_assume!(q < p);
            let spec = make(zoo_family(kind, d.clone(), ps, n), n);
            let df = rational_to_f64(&d);
            let nf = n as f64;
            let s = (df - nf) * (p - 1.0) / p;
            let t = (df - nf) * (q - 1.0) / q;
            if classify_cantor(&spec, &idx(s, p)).verdict() == Verdict::Null {
                prop_assert_eq!(classify_cantor(&spec, &idx(t, q)).verdict(), Verdict::Null);
            }
        }

        #[test]
        fn threshold_is_ratio_crossing(dn in 1u32..20, dd in 2u32..20, p in 1.1f64..5.0) {
            prop_assume!(dn < dd);
            let d = rational(dn as i64, dd as i64);
            let df = rational_to_f64(&d);
            let spec = finf(d, 1);
            let t = hausdorff_threshold(df, 1, p).unwrap();
            // log ratio of consecutive terms vanishes at the threshold and changes sign across it
            let lr = |s: f64| cantor_term_log2(&spec, s, p, 2).unwrap() - cantor_term_log2(&spec, s, p, 1).unwrap();
            prop_assert!(lr(t).abs() < 1e-12);
            let low = -(p - 1.0) / p;
            let eps = 1e-3_f64.min((t - low) / 2.0);
            prop_assert!(lr(t + eps) > 0.0);
            prop_assert!(lr(t - eps) < 0.0);
        }
    }
}
