//! Cap (u = 1) and cap (u >= 1) as quadratic minimizations on a spectral grid.

use serde::{Deserialize, Serialize};

use super::grid::SpectralGrid;
use super::mask::{ConstraintMask, MaskKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Relative residual target for the conjugate-gradient solves.
    pub cg_tolerance: f64,
    pub cg_max_iterations: usize,
    /// Relative KKT residual target for the obstacle problem.
    pub kkt_tolerance: f64,
    pub max_active_set_rounds: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            cg_tolerance: 1e-10,
            cg_max_iterations: 20_000,
            kkt_tolerance: 1e-8,
            max_active_set_rounds: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub value: f64,
    pub iterations: usize,
    pub residual: f64,
    pub active_set_size: usize,
    pub half_width: f64,
    pub n: usize,
    pub s: f64,
    /// The minimizer on the grid.
    #[serde(skip)]
    pub solution: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Minimizes Q(u) with u = 1 on `fixed`, starting from `u` (overwritten), by PCG on the free
/// variables preconditioned with the restriction of A^{-1}. Returns (iterations, relative residual).
fn solve_fixed(grid: &SpectralGrid, fixed: &[bool], u: &mut [f64], cfg: &SolverConfig) -> Result<(usize, f64)> {
    let n = grid.n();
    for i in 0..n {
        if fixed[i] {
            u[i] = 1.0;
        }
    }
    let restrict = |v: &mut Vec<f64>| {
        for i in 0..n {
            if fixed[i] {
                v[i] = 0.0;
            }
        }
    };
    let ones: Vec<f64> = fixed.iter().map(|&f| if f { 1.0 } else { 0.0 }).collect();
    let mut b = grid.apply(&ones);
    restrict(&mut b);
    let bnorm = norm(&b);
    if bnorm == 0.0 || fixed.iter().all(|&f| f) {
        return Ok((0, 0.0));
    }
    let mut r = grid.apply(u);
    for v in r.iter_mut() {
        *v = -*v;
    }
    restrict(&mut r);
    let mut z = grid.apply_inverse(&r);
    restrict(&mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for it in 0..cfg.cg_max_iterations {
        let rel = norm(&r) / bnorm;
        if rel <= cfg.cg_tolerance {
            return Ok((it, rel));
        }
        let mut ap = grid.apply(&p);
        restrict(&mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            u[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        z = grid.apply_inverse(&r);
        restrict(&mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let mut res = grid.apply(u);
    restrict(&mut res);
    let rel = norm(&res) / bnorm;
    if rel <= cfg.cg_tolerance {
        return Ok((cfg.cg_max_iterations, rel));
    }
    Err(Error::NonConvergence {
        iterations: cfg.cg_max_iterations,
        residual: rel,
    })
}

fn report(grid: &SpectralGrid, u: Vec<f64>, iterations: usize, residual: f64, active: usize) -> SolveReport {
    SolveReport {
        value: grid.quad_form(&u),
        iterations,
        residual,
        active_set_size: active,
        half_width: grid.half_width(),
        n: grid.n(),
        s: grid.s(),
        solution: u,
    }
}

/// min Q(u) subject to u = 1 on the padded mask.
#[allow(non_snake_case)]
pub fn solve_Cap(grid: &SpectralGrid, mask: &ConstraintMask, cfg: &SolverConfig) -> Result<SolveReport> {
    if mask.kind() != MaskKind::EqualOne {
        return Err(Error::Invalid("Cap needs an EqualOne mask".into()));
    }
    let fixed = mask.padded(grid.n())?;
    let mut u = vec![0.0; grid.n()];
    let (its, res) = solve_fixed(grid, &fixed, &mut u, cfg)?;
    let active = fixed.iter().filter(|&&f| f).count();
    Ok(report(grid, u, its, res, active))
}

/// Relative KKT residual of u for the obstacle u >= 1 on `on`, with active set `act`.
pub fn kkt_residual(grid: &SpectralGrid, on: &[bool], act: &[bool], u: &[f64]) -> f64 {
    let g: Vec<f64> = grid.apply(u).into_iter().map(|v| 2.0 * v).collect();
    let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut r = 0.0f64;
    for i in 0..u.len() {
        if act[i] {
            r = r.max((-g[i]).max(0.0) / scale);
        } else {
            r = r.max(g[i].abs() / scale);
        }
        if on[i] {
            r = r.max(1.0 - u[i]);
        }
    }
    r
}

/// KKT residual of u = A^{-1} mu for the obstacle u >= 1 on `on`: infeasibility,
/// complementarity on the contact set and the sign of the multipliers.
fn dual_kkt_residual(on: &[bool], mu: &[f64], u: &[f64]) -> f64 {
    let scale = mu.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut r = 0.0f64;
    for i in 0..u.len() {
        if on[i] {
            r = r.max(1.0 - u[i]);
            r = r.max(-mu[i] / scale);
            if mu[i] > 0.0 {
                r = r.max((u[i] - 1.0).abs());
            }
        }
    }
    r
}

/// Cholesky factor of S_PP for a growing index set P.
struct GrowingCholesky {
    rows: Vec<Vec<f64>>,
}

impl GrowingCholesky {
    fn push(&mut self, col: &[f64], diag: f64) -> bool {
        let k = self.rows.len();
        let mut l = vec![0.0; k + 1];
        for i in 0..k {
            let mut v = col[i];
            for j in 0..i {
                v -= self.rows[i][j] * l[j];
            }
            l[i] = v / self.rows[i][i];
        }
        let d = diag - l[..k].iter().map(|v| v * v).sum::<f64>();
        if !(d > 0.0) {
            return false;
        }
        l[k] = d.sqrt();
        self.rows.push(l);
        true
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let k = self.rows.len();
        let mut y = b.to_vec();
        for i in 0..k {
            for j in 0..i {
                y[i] -= self.rows[i][j] * y[j];
            }
            y[i] /= self.rows[i][i];
        }
        for i in (0..k).rev() {
            for j in i + 1..k {
                y[i] -= self.rows[j][i] * y[j];
            }
            y[i] /= self.rows[i][i];
        }
        y
    }
}

/// min Q(u) subject to u >= 1 on the padded mask.
///
/// With u = A^{-1} mu the problem becomes min 1/2 mu^T S mu - 1^T mu over mu >= 0 on the mask,
/// S the mask block of A^{-1}; that is solved by a Lawson-Hanson active-set iteration.
pub fn solve_cap(grid: &SpectralGrid, mask: &ConstraintMask, cfg: &SolverConfig) -> Result<SolveReport> {
    if mask.kind() != MaskKind::AtLeastOne {
        return Err(Error::Invalid("cap needs an AtLeastOne mask".into()));
    }
    let n = grid.n();
    let on = mask.padded(n)?;
    // the Cap minimizer already solves the obstacle problem when its multipliers are nonnegative
    let mut u = vec![0.0; n];
    let (cg_its, _) = solve_fixed(grid, &on, &mut u, cfg)?;
    let g = grid.apply(&u);
    let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if on.iter().zip(&g).all(|(&o, &v)| !o || v >= -cfg.kkt_tolerance * scale) {
        let res = kkt_residual(grid, &on, &on, &u);
        if res <= cfg.kkt_tolerance {
            let active = on.iter().filter(|&&a| a).count();
            return Ok(report(grid, u, cg_its, res, active));
        }
    }
    let idx: Vec<usize> = (0..n).filter(|&i| on[i]).collect();
    let m = idx.len();
    let mut delta = vec![0.0; n];
    delta[0] = 1.0;
    let kern = grid.apply_inverse(&delta);
    let s_at = |a: usize, b: usize| kern[(idx[a] + n - idx[b]) % n];
    let mut mu = vec![0.0; m];
    let mut passive: Vec<usize> = Vec::new();
    let mut chol = GrowingCholesky { rows: Vec::new() };
    let mut iterations = cg_its;
    let max_outer = cfg.max_active_set_rounds.max(1) * m.max(1);
    let refactor = |passive: &[usize]| -> Option<GrowingCholesky> {
        let mut c = GrowingCholesky { rows: Vec::new() };
        for (k, &t) in passive.iter().enumerate() {
            let col: Vec<f64> = passive[..k].iter().map(|&q| s_at(q, t)).collect();
            if !c.push(&col, s_at(t, t)) {
                return None;
            }
        }
        Some(c)
    };
    loop {
        if iterations > max_outer + cg_its {
            break;
        }
        iterations += 1;
        // w = 1 - S mu, the negative gradient
        let w: Vec<f64> = (0..m).map(|a| 1.0 - passive.iter().map(|&b| s_at(a, b) * mu[b]).sum::<f64>()).collect();
        let cand = (0..m)
            .filter(|a| !passive.contains(a))
            .max_by(|&a, &b| w[a].total_cmp(&w[b]));
        let Some(t) = cand.filter(|&t| w[t] > cfg.kkt_tolerance) else {
            let mut ext = vec![0.0; n];
            for (a, &i) in idx.iter().enumerate() {
                ext[i] = mu[a];
            }
            let mut u = grid.apply_inverse(&ext);
            let res = dual_kkt_residual(&on, &ext, &u);
            if res > cfg.kkt_tolerance {
                return Err(Error::NonConvergence { iterations, residual: res });
            }
            // rescale so that u >= 1 holds exactly on the mask
            let umin = idx.iter().map(|&i| u[i]).fold(f64::INFINITY, f64::min);
            if umin < 1.0 {
                u.iter_mut().for_each(|v| *v /= umin);
            }
            return Ok(report(grid, u, iterations, res, passive.len()));
        };
        let col: Vec<f64> = passive.iter().map(|&q| s_at(q, t)).collect();
        if !chol.push(&col, s_at(t, t)) {
            // numerically dependent on the current contact set
            return Err(Error::NonConvergence {
                iterations,
                residual: w[t],
            });
        }
        passive.push(t);
        loop {
            let z = chol.solve(&vec![1.0; passive.len()]);
            if z.iter().all(|&v| v > 0.0) {
                for (k, &a) in passive.iter().enumerate() {
                    mu[a] = z[k];
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (k, &a) in passive.iter().enumerate() {
                if z[k] <= 0.0 {
                    alpha = alpha.min(mu[a] / (mu[a] - z[k]));
                }
            }
            for (k, &a) in passive.iter().enumerate() {
                mu[a] += alpha * (z[k] - mu[a]);
            }
            let keep: Vec<usize> = passive.iter().copied().filter(|&a| mu[a] > 0.0).collect();
            for &a in &passive {
                if !keep.contains(&a) {
                    mu[a] = 0.0;
                }
            }
            passive = keep;
            chol = refactor(&passive).ok_or(Error::NonConvergence { iterations, residual: f64::NAN })?;
            iterations += 1;
        }
    }
    Err(Error::NonConvergence {
        iterations,
        residual: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::grid::build_grid;

    #[test]
    fn full_mask_is_q_of_one() {
        let g = build_grid(2.0, 64, 1.0).unwrap();
        let m = ConstraintMask::new((0..64).collect(), MaskKind::EqualOne, 0).unwrap();
        let r = solve_Cap(&g, &m, &SolverConfig::default()).unwrap();
        assert!((r.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn point_capacity_at_s0_is_measure() {
        for n in [256, 1024] {
            let g = build_grid(4.0, n, 0.0).unwrap();
            let m = ConstraintMask::new(vec![n / 2], MaskKind::EqualOne, 0).unwrap();
            let r = solve_Cap(&g, &m, &SolverConfig::default()).unwrap();
            assert!((r.value - g.dx()).abs() < 1e-12);
        }
    }

    #[test]
    fn wrong_kind() {
        let g = build_grid(2.0, 64, 1.0).unwrap();
        let m = ConstraintMask::new(vec![3], MaskKind::EqualOne, 0).unwrap();
        assert!(solve_cap(&g, &m, &SolverConfig::default()).is_err());
        assert!(solve_Cap(&g, &m.with_kind(MaskKind::AtLeastOne), &SolverConfig::default()).is_err());
    }

    #[test]
    fn cap_below_cap_interval() {
        let g = build_grid(8.0, 2048, 1.0).unwrap();
        let eq = ConstraintMask::interval(&g, -1.0, 1.0, MaskKind::EqualOne, 1).unwrap();
        let ge = eq.clone().with_kind(MaskKind::AtLeastOne);
        let cfg = SolverConfig::default();
        let big = solve_Cap(&g, &eq, &cfg).unwrap();
        let small = solve_cap(&g, &ge, &cfg).unwrap();
        assert!(small.value <= big.value + 1e-9);
        assert!(small.residual < cfg.kkt_tolerance);
    }

    #[test]
    fn monotone_and_subadditive() {
        let g = build_grid(8.0, 2048, 0.75).unwrap();
        let cfg = SolverConfig::default();
        let cap = |a: f64, b: f64| {
            let m = ConstraintMask::interval(&g, a, b, MaskKind::AtLeastOne, 0).unwrap();
            solve_cap(&g, &m, &cfg).unwrap().value
        };
        let (small, big) = (cap(-0.25, 0.25), cap(-0.5, 0.5));
        assert!(small < big);
        let left = ConstraintMask::interval(&g, -1.0, -0.5, MaskKind::AtLeastOne, 0).unwrap();
        let right = ConstraintMask::interval(&g, 0.5, 1.0, MaskKind::AtLeastOne, 0).unwrap();
        let both = solve_cap(&g, &left.union(&right).unwrap(), &cfg).unwrap().value;
        assert!(both <= cap(-1.0, -0.5) + cap(0.5, 1.0) + 1e-9);
        assert!(both > cap(-1.0, -0.5));
    }
}
