//! Grid constraint sets for the capacity problems.

use serde::{Deserialize, Serialize};

use super::grid::SpectralGrid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskKind {
    /// u >= 1 (cap).
    AtLeastOne,
    /// u = 1 (Cap).
    EqualOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintMask {
    indices: Vec<usize>,
    kind: MaskKind,
    padding: usize,
}

impl ConstraintMask {
    pub fn new(mut indices: Vec<usize>, kind: MaskKind, padding: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::Invalid("constraint mask is empty".into()));
        }
        Ok(ConstraintMask { indices, kind, padding })
    }

    /// Grid points in [a, b]; the nearest point when none falls inside.
    pub fn interval(grid: &SpectralGrid, a: f64, b: f64, kind: MaskKind, padding: usize) -> Result<Self> {
        if !(a <= b) {
            return Err(Error::Invalid(format!("need a <= b, got [{a}, {b}]")));
        }
        let mut idx = grid.indices_in(a, b);
        if idx.is_empty() {
            idx.push(grid.nearest(0.5 * (a + b)));
        }
        Self::new(idx, kind, padding)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn kind(&self) -> MaskKind {
        self.kind
    }

    pub fn padding(&self) -> usize {
        self.padding
    }

    pub fn with_kind(mut self, kind: MaskKind) -> Self {
        self.kind = kind;
        self
    }

    /// Indices widened by the padding, wrapped on a grid of n points, as a membership vector.
    pub fn padded(&self, n: usize) -> Result<Vec<bool>> {
        if let Some(&i) = self.indices.iter().find(|&&i| i >= n) {
            return Err(Error::Invalid(format!("mask index {i} outside a grid of {n} points")));
        }
        let mut on = vec![false; n];
        let p = self.padding as i64;
        for &i in &self.indices {
            for d in -p..=p {
                on[(i as i64 + d).rem_euclid(n as i64) as usize] = true;
            }
        }
        Ok(on)
    }

    pub fn union(&self, other: &ConstraintMask) -> Result<ConstraintMask> {
        if self.kind != other.kind || self.padding != other.padding {
            return Err(Error::Invalid("masks differ in kind or padding".into()));
        }
        let mut idx = self.indices.clone();
        idx.extend_from_slice(&other.indices);
        Self::new(idx, self.kind, self.padding)
    }

    pub fn is_subset_of(&self, other: &ConstraintMask) -> bool {
        self.indices.iter().all(|i| other.indices.binary_search(i).is_ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::grid::build_grid;

    #[test]
    fn padding_and_union() {
        let g = build_grid(1.0, 16, 0.0).unwrap();
        let m = ConstraintMask::new(vec![0, 5], MaskKind::EqualOne, 1).unwrap();
        let on = m.padded(16).unwrap();
        let set: Vec<usize> = (0..16).filter(|&i| on[i]).collect();
        assert_eq!(set, vec![0, 1, 4, 5, 6, 15]);
        assert!(ConstraintMask::new(vec![], MaskKind::EqualOne, 0).is_err());
        let iv = ConstraintMask::interval(&g, -0.25, 0.25, MaskKind::AtLeastOne, 0).unwrap();
        assert_eq!(iv.indices(), &[6, 7, 8, 9, 10]);
        let u = iv.union(&ConstraintMask::new(vec![0], MaskKind::AtLeastOne, 0).unwrap()).unwrap();
        assert!(iv.is_subset_of(&u));
        assert!(iv.union(&m).is_err());
        assert!(ConstraintMask::new(vec![20], MaskKind::EqualOne, 0).unwrap().padded(16).is_err());
    }
}
