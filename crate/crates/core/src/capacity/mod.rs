//! Variational capacities for p = 2 on a truncated spectral grid.

pub mod grid;
pub mod mask;
pub mod restriction;
pub mod scaling;
pub mod solver;

pub use grid::{build_grid, SpectralGrid};
pub use mask::{ConstraintMask, MaskKind};
pub use restriction::{
    constant_norm_sq, fd_slope, h22_even_interval_norm_sq, h22_even_norm_sq_exact, trial_cubicgap, trial_cubicgap_exact, trial_quadratic,
    trial_quadratic_exact, PiecewisePoly, Poly,
};
pub use scaling::{ball_capacities, ball_scaling_exponent, estimate_ab_ratio, BallScaling, GridConfig};
pub use solver::{kkt_residual, solve_Cap, solve_cap, SolveReport, SolverConfig};
