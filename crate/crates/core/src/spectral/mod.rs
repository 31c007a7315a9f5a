//! Fourier-side computations for p = 2.

pub mod gapsum;
pub mod quadrature;
pub mod transform;

pub use gapsum::{fat_gap_term, fat_membership_bound, gap_ratio_exact, gap_sum_terms, ratio_is_one_at, shift_diff_norm_sq, GapSum, Majorant, DEFAULT_C1};
pub use quadrature::{hs2_norm_sq, hs2_norm_sq_cantor, shift_diff_fourier, tail_bound, tail_mean, NormEstimate, QuadRule, QuadratureConfig};
pub use transform::{cantor_chi_hat, chi_hat, chi_hat_f64};
