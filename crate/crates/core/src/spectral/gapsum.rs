//! Gap-sum machinery for Fourier membership of fat Cantor sets.

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fractal::{CantorSpec, IntervalSet};
use crate::numeric::{exact_rational_pow, log2_rational, pow2, rational, KahanSum};

/// 1/(1 - cos 1).
pub const DEFAULT_C1: f64 = 2.175_342_649_670_021_4;

/// ||chi_A - chi_{A+t}||_{L^2}^2 = |A symmetric-difference (A + t)|, exactly.
pub fn shift_diff_norm_sq(set: &IntervalSet, t: &BigRational) -> BigRational {
    set.symmetric_difference(&set.shift(t)).total_length()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSum {
    /// (j, term_j) for j = 2..=J.
    pub terms: Vec<(usize, f64)>,
    pub partial_sums: Vec<f64>,
    /// Bound on the error of every tail sum sum_{k>=j} 2^k Gap_k (0 when exact).
    pub tail_bound: f64,
}

/// term_j = Gap_{j-1}^{2-2s} / Gap_j^2 * sum_{k>=j} 2^k Gap_k for j = 2..=J.
pub fn gap_sum_terms(spec: &CantorSpec, s: f64, depth: usize) -> Result<GapSum> {
    if spec.n() != 1 {
        return domain("gap sums are defined for n = 1");
    }
    if !(s > 0.0 && s.is_finite()) {
        return domain(format!("gap sums need s > 0, got {s}"));
    }
    if depth < 2 {
        return domain("gap sums start at j = 2");
    }
    let ls = spec.lengths(depth)?;
    let gaps: Vec<BigRational> = (1..=depth).map(|j| spec.gap(j)).collect::<Result<_>>()?;
    for j in 1..=depth {
        let g = &gaps[j - 1];
        if !g.is_positive() || g >= &ls[j] {
            return Err(Error::Hypothesis(format!("Gap_{j} < l_{j} fails")));
        }
        if j > 1 && g >= &gaps[j - 2] {
            return Err(Error::Hypothesis(format!("gaps are not strictly decreasing at j = {j}")));
        }
    }
    // sum_{k>=j} 2^k Gap_k = 2^j l_{j-1} - 2 m, m the limit measure
    let (m, tail_bound) = match spec.measure_limit()?.exact {
        Some(m) => (m, 0.0),
        None => {
            let last = &ls[depth] * pow2(depth as i64);
            let b = crate::numeric::rational_to_f64(&(&last * rational(2, 1)));
            (last, b)
        }
    };
    let two = rational(2, 1);
    let mut terms = Vec::with_capacity(depth - 1);
    let mut partial_sums = Vec::with_capacity(depth - 1);
    let mut acc = KahanSum::new();
    for j in 2..=depth {
        let tail = &ls[j - 1] * pow2(j as i64) - &m * &two;
        if !tail.is_positive() {
            return Err(Error::Hypothesis(format!("tail sum at j = {j} is not positive")));
        }
        let lg = (2.0 - 2.0 * s) * log2_rational(&gaps[j - 2]) - 2.0 * log2_rational(&gaps[j - 1]) + log2_rational(&tail);
        let t = lg.exp2();
        acc.add(t);
        terms.push((j, t));
        partial_sums.push(acc.value());
    }
    Ok(GapSum {
        terms,
        partial_sums,
        tail_bound,
    })
}

/// Closed form of term_j for the fat family: beta^{1-2s} alpha^{4s-3} / (1-2 alpha) * (2 alpha^{1-2s})^j.
pub fn fat_gap_term(alpha: f64, beta: f64, s: f64, j: usize) -> f64 {
    beta.powf(1.0 - 2.0 * s) * alpha.powf(4.0 * s - 3.0) / (1.0 - 2.0 * alpha) * (2.0 * alpha.powf(1.0 - 2.0 * s)).powi(j as i32)
}

/// 2 alpha^{1-2s} as an exact rational, when it is one.
pub fn gap_ratio_exact(alpha: &BigRational, s: &BigRational) -> Option<BigRational> {
    let e = BigRational::one() - rational(2, 1) * s;
    exact_rational_pow(alpha, &e).map(|v| v * rational(2, 1))
}

/// True when the fat-family gap-sum ratio is exactly 1 at this s.
pub fn ratio_is_one_at(alpha: &BigRational, s: &BigRational) -> bool {
    gap_ratio_exact(alpha, s).is_some_and(|r| r.is_one())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Majorant {
    Finite { value: f64, ratio: f64 },
    Divergent { ratio: f64 },
}

impl Majorant {
    pub fn value(&self) -> Option<f64> {
        match self {
            Majorant::Finite { value, .. } => Some(*value),
            Majorant::Divergent { .. } => None,
        }
    }
}

/// 2^{s+1} c1 beta^{1-2s} / (alpha^{3-4s} (1-2 alpha)) * sum_{j>=2} r^j with r = 2 alpha^{1-2s}.
pub fn fat_membership_bound(alpha: f64, beta: f64, s: f64, c1: f64) -> Result<Majorant> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return domain(format!("need 0 < alpha < 1/2, got {alpha}"));
    }
    if !(beta > 0.0 && beta < 1.0 - 2.0 * alpha) {
        return domain(format!("need 0 < beta < 1 - 2 alpha, got {beta}"));
    }
    if !(c1 > 0.0 && s.is_finite()) {
        return domain("need c1 > 0 and finite s");
    }
    let r = 2.0 * alpha.powf(1.0 - 2.0 * s);
    if r >= 1.0 {
        return Ok(Majorant::Divergent { ratio: r });
    }
    let pre = (s + 1.0).exp2() * c1 * beta.powf(1.0 - 2.0 * s) / (alpha.powf(3.0 - 4.0 * s) * (1.0 - 2.0 * alpha));
    Ok(Majorant::Finite {
        value: pre * r * r / (1.0 - r),
        ratio: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::{make_cantor, Family};
    use crate::numeric::rational_to_f64;

    fn fat(a: (i64, i64), b: (i64, i64)) -> CantorSpec {
        make_cantor(Family::FatCantor { alpha: rational(a.0, a.1), beta: rational(b.0, b.1) }, 1).unwrap()
    }

    #[test]
    fn shift_examples() {
        let spec = fat((1, 4), (1, 4));
        for j in 1..=6usize {
            let e = spec.level_set(j).unwrap();
            let g = spec.gap(j).unwrap();
            assert_eq!(shift_diff_norm_sq(&e, &g), &g * pow2(j as i64 + 1));
        }
        // frozen oracle values
        let want = [(1, 1), (1, 2), (1, 4), (1, 8), (1, 16), (1, 32)];
        for (j, (a, b)) in (1..=6usize).zip(want) {
            let e = spec.level_set(j).unwrap();
            assert_eq!(shift_diff_norm_sq(&e, &spec.gap(j).unwrap()), rational(a, b));
        }
        let unit = IntervalSet::from_intervals(vec![(rational(0, 1), rational(1, 1))]).unwrap();
        assert_eq!(shift_diff_norm_sq(&unit, &rational(0, 1)), rational(0, 1));
        assert_eq!(shift_diff_norm_sq(&unit, &rational(2, 1)), rational(2, 1));
    }

    #[test]
    fn fat_terms_match_closed_form() {
        let spec = fat((1, 4), (1, 4));
        let g = gap_sum_terms(&spec, 0.125, 30).unwrap();
        assert_eq!(g.tail_bound, 0.0);
        for &(j, t) in &g.terms {
            let c = fat_gap_term(0.25, 0.25, 0.125, j);
            assert!((t / c - 1.0).abs() < 1e-12, "{j}");
        }
        for w in g.terms.windows(2) {
            assert!((w[1].1 / w[0].1 - 2f64.powf(-0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn ternary_violates_hypotheses() {
        let t = make_cantor(Family::Geometric { ratio: rational(1, 3) }, 1).unwrap();
        assert!(matches!(gap_sum_terms(&t, 0.1, 5), Err(Error::Hypothesis(_))));
        assert!(gap_sum_terms(&fat((1, 4), (1, 4)), 0.0, 5).is_err());
    }

    #[test]
    fn exact_ratio() {
        assert!(ratio_is_one_at(&rational(1, 4), &rational(1, 4)));
        assert!(!ratio_is_one_at(&rational(1, 4), &rational(1, 8)));
        assert_eq!(gap_ratio_exact(&rational(1, 4), &rational(0, 1)), Some(rational(1, 2)));
        assert_eq!(gap_ratio_exact(&rational(1, 3), &rational(1, 8)), None);
    }

    #[test]
    fn majorant() {
        let m = fat_membership_bound(0.25, 0.25, 0.125, DEFAULT_C1).unwrap();
        assert!((m.value().unwrap() - 183.26607884654058).abs() < 1e-10);
        assert!(matches!(fat_membership_bound(0.25, 0.25, 0.25, DEFAULT_C1).unwrap(), Majorant::Divergent { .. }));
        assert!((DEFAULT_C1 - 1.0 / (1.0 - 1f64.cos())).abs() < 1e-15);
        assert!(fat_membership_bound(0.25, 0.6, 0.1, DEFAULT_C1).is_err());
    }

    #[test]
    fn truncated_tails_for_lists() {
        let ls: Vec<BigRational> = [(1, 1), (3, 8), (5, 32), (9, 128), (17, 512)].iter().map(|&(a, b)| rational(a, b)).collect();
        let spec = make_cantor(Family::Explicit { lengths: ls }, 1).unwrap();
        let g = gap_sum_terms(&spec, 0.1, 4).unwrap();
        assert!(g.tail_bound > 0.0);
        let f = fat((1, 4), (1, 4));
        let h = gap_sum_terms(&f, 0.1, 4).unwrap();
        // truncation drops 2 * 2^4 l_4 = 17/16 from every tail
        let (_, t2) = g.terms[0];
        let (_, u2) = h.terms[0];
        assert!(t2 < u2);
        assert_eq!(g.tail_bound, rational_to_f64(&rational(17, 16)));
    }
}
