//! Sobolev nullity of subsets of Euclidean space.

pub mod capacity;
pub mod error;
pub mod fractal;
pub mod index;
pub mod numeric;
pub mod spectral;
pub mod nullity;
pub mod zoo;

pub use error::{Error, Result};
pub use fractal::{make_cantor, BallCloud, CantorSpec, Family, IntervalSet};
pub use index::SobolevIndex;
