//! Swiss-cheese sets: a bounded open box with countably many balls removed.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::cantor::{CantorSpec, Family};
use crate::error::{Error, Result};
use crate::numeric::rational_to_f64;

/// Axis-aligned open box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Domain {
    pub fn unit_interval() -> Self {
        Domain {
            lower: vec![0.0],
            upper: vec![1.0],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn measure(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(a, b)| b - a).product()
    }

    fn contains_ball(&self, c: &[f64], r: f64) -> bool {
        c.len() == self.dim() && c.iter().zip(self.lower.iter().zip(&self.upper)).all(|(x, (a, b))| x - r >= *a && x + r <= *b)
    }
}

/// Balls sharing one radius; centers may be omitted for large exports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallGroup {
    pub radius: f64,
    pub multiplicity: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub centers: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallCloud {
    n: usize,
    domain: Domain,
    groups: Vec<BallGroup>,
    inner_center: Vec<f64>,
    inner_radius: f64,
    dense_centers: bool,
    ball_measure: f64,
    positive_measure: bool,
}

/// Volume of the unit ball in R^n.
pub fn unit_ball_volume(n: usize) -> f64 {
    // omega_n = 2 pi / n * omega_{n-2}
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2),
    }
}

pub fn make_swiss_cheese(domain: Domain, centers: Vec<Vec<f64>>, radii: Vec<f64>, inner_ball: (Vec<f64>, f64)) -> Result<BallCloud> {
    if centers.len() != radii.len() {
        return Err(Error::Invalid(format!("{} centers but {} radii", centers.len(), radii.len())));
    }
    let groups = centers
        .into_iter()
        .zip(radii)
        .map(|(c, r)| BallGroup {
            radius: r,
            multiplicity: 1,
            centers: vec![c],
        })
        .collect();
    BallCloud::from_groups(domain, groups, inner_ball)
}

impl BallCloud {
    pub fn from_groups(domain: Domain, groups: Vec<BallGroup>, inner_ball: (Vec<f64>, f64)) -> Result<BallCloud> {
        let n = domain.dim();
        if n == 0 || domain.lower.len() != domain.upper.len() || domain.lower.iter().zip(&domain.upper).any(|(a, b)| !(a < b)) {
            return Err(Error::Invalid("domain must be a non-degenerate box".into()));
        }
        for g in &groups {
            if !(g.radius > 0.0) {
                return Err(Error::Domain(format!("ball radius must be positive, got {}", g.radius)));
            }
            if g.radius > 1.0 {
                return Err(Error::Domain(format!("ball radius must be <= 1, got {}", g.radius)));
            }
            if !g.centers.is_empty() && g.centers.len() as u64 != g.multiplicity {
                return Err(Error::Invalid("center list length must equal multiplicity".into()));
            }
            if g.centers.iter().any(|c| c.len() != n) {
                return Err(Error::Invalid(format!("centers must have dimension {n}")));
            }
        }
        let (ic, ir) = inner_ball;
        if !(ir > 0.0 && ir <= 1.0) {
            return Err(Error::Domain(format!("inner ball radius must lie in (0, 1], got {ir}")));
        }
        if !domain.contains_ball(&ic, ir) {
            return Err(Error::Domain("inner ball must lie inside the domain".into()));
        }
        let omega = unit_ball_volume(n);
        let ball_measure: f64 = groups.iter().map(|g| g.multiplicity as f64 * omega * g.radius.powi(n as i32)).sum();
        let positive_measure = ball_measure < domain.measure();
        Ok(BallCloud {
            n,
            domain,
            groups,
            inner_center: ic,
            inner_radius: ir,
            dense_centers: false,
            ball_measure,
            positive_measure,
        })
    }

    /// Records the caller's claim that the centers are dense (empty interior).
    pub fn with_dense_centers(mut self, dense: bool) -> Self {
        self.dense_centers = dense;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn groups(&self) -> &[BallGroup] {
        &self.groups
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn dense_centers(&self) -> bool {
        self.dense_centers
    }

    /// Sum of the removed ball volumes.
    pub fn ball_measure(&self) -> f64 {
        self.ball_measure
    }

    /// Removed volume is below m(closure of domain), so m(K) > 0.
    pub fn positive_measure(&self) -> bool {
        self.positive_measure
    }

    pub fn ball_count(&self) -> u64 {
        self.groups.iter().map(|g| g.multiplicity).sum()
    }

    /// Radii with multiplicities.
    pub fn radii(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.groups.iter().map(|g| (g.radius, g.multiplicity))
    }

    /// Copy with one ball of group `g` removed.
    pub fn without_ball(&self, g: usize) -> Result<BallCloud> {
        let mut groups = self.groups.clone();
        let grp = groups
            .get_mut(g)
            .ok_or_else(|| Error::Invalid(format!("no ball group {g}")))?;
        grp.multiplicity -= 1;
        grp.centers.pop();
        if grp.multiplicity == 0 {
            groups.remove(g);
        }
        let cloud = BallCloud::from_groups(self.domain.clone(), groups, (self.inner_center.clone(), self.inner_radius))?;
        Ok(cloud.with_dense_centers(self.dense_centers))
    }
}

/// Centers are listed only while the level has at most this many gaps.
const CENTER_LIMIT: u64 = 1 << 16;

/// Cantor set E_J in (0, 1) seen as a cheese: the gaps of stage j are balls of radius Gap_j / 2.
pub fn cantor_cheese(spec: &CantorSpec, depth: usize) -> Result<BallCloud> {
    if spec.n() != 1 {
        return Err(Error::Invalid("cheese export is one-dimensional".into()));
    }
    let with_centers = depth < 63 && (1u64 << depth.saturating_sub(1)) <= CENTER_LIMIT && depth <= spec.depth_cap();
    let mut groups = Vec::with_capacity(depth);
    let lengths = if with_centers { Some(spec.lengths(depth)?) } else { None };
    let mut starts = vec![0.0f64];
    for j in 1..=depth {
        let gap = spec.gap(j)?;
        let radius = rational_to_f64(&gap) / 2.0;
        let multiplicity = 1u64
            .checked_shl(j as u32 - 1)
            .ok_or_else(|| Error::Invalid(format!("depth {depth} overflows the ball count")))?;
        let centers = match &lengths {
            Some(ls) => {
                let (prev, cur) = (rational_to_f64(&ls[j - 1]), rational_to_f64(&ls[j]));
                let cs: Vec<Vec<f64>> = starts.iter().map(|a| vec![a + prev / 2.0]).collect();
                starts = starts.iter().flat_map(|a| [*a, a + prev - cur]).collect();
                cs
            }
            None => Vec::new(),
        };
        groups.push(BallGroup {
            radius,
            multiplicity,
            centers,
        });
    }
    let cloud = BallCloud::from_groups(Domain::unit_interval(), groups, (vec![0.5], 0.5))?;
    Ok(cloud.with_dense_centers(matches!(spec.family(), Family::FatCantor { .. })))
}

/// Fat Cantor set as a cheese: 2^{j-1} balls of radius (beta/2) alpha^{j-1}, j = 1..=J.
pub fn fat_cantor_cheese(alpha: f64, beta: f64, depth: usize) -> Result<BallCloud> {
    if !(alpha > 0.0 && alpha < 0.5 && beta > 0.0 && beta < 1.0 - 2.0 * alpha) {
        return Err(Error::Domain(format!("need 0 < alpha < 1/2 and 0 < beta < 1 - 2 alpha, got {alpha}, {beta}")));
    }
    let groups = (1..=depth)
        .map(|j| BallGroup {
            radius: beta / 2.0 * alpha.powi(j as i32 - 1),
            multiplicity: 2f64.powi(j as i32 - 1).to_u64().unwrap_or(u64::MAX),
            centers: Vec::new(),
        })
        .collect();
    let cloud = BallCloud::from_groups(Domain::unit_interval(), groups, (vec![0.5], 0.5))?;
    Ok(cloud.with_dense_centers(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::make_cantor;
    use crate::numeric::rational;

    #[test]
    fn empty_cloud_has_positive_measure() {
        let c = make_swiss_cheese(Domain::unit_interval(), vec![], vec![], (vec![0.5], 0.5)).unwrap();
        assert!(c.positive_measure());
        assert_eq!(c.ball_count(), 0);
    }

    #[test]
    fn covering_radii_are_undetermined() {
        let c = make_swiss_cheese(Domain::unit_interval(), vec![vec![0.25], vec![0.75]], vec![0.25, 0.3], (vec![0.5], 0.5)).unwrap();
        assert!(!c.positive_measure());
    }

    #[test]
    fn rejects_bad_radii() {
        let d = Domain::unit_interval();
        assert!(make_swiss_cheese(d.clone(), vec![vec![0.5]], vec![0.0], (vec![0.5], 0.5)).is_err());
        assert!(make_swiss_cheese(d.clone(), vec![vec![0.5]], vec![1.5], (vec![0.5], 0.5)).is_err());
        assert!(make_swiss_cheese(d, vec![], vec![], (vec![0.9], 0.5)).is_err());
    }

    #[test]
    fn fat_export_matches_gaps() {
        let spec = make_cantor(
            crate::fractal::Family::FatCantor {
                alpha: rational(1, 4),
                beta: rational(1, 4),
            },
            1,
        )
        .unwrap();
        let cloud = cantor_cheese(&spec, 6).unwrap();
        for (j, (r, m)) in cloud.radii().enumerate() {
            let gap = rational_to_f64(&spec.gap(j + 1).unwrap());
            assert_eq!(r, gap / 2.0);
            assert_eq!(m, 1 << j);
        }
        assert_eq!(cloud.groups()[1].centers, vec![vec![3.0 / 16.0], vec![13.0 / 16.0]]);
        let closed = fat_cantor_cheese(0.25, 0.25, 6).unwrap();
        let a: Vec<_> = closed.radii().collect();
        let b: Vec<_> = cloud.radii().collect();
        assert_eq!(a, b);
        assert!(cloud.positive_measure());
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
    }
}
