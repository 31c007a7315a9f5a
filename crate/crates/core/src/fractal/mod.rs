//! Cantor sets, interval arithmetic and Swiss-cheese ball clouds.

pub mod cantor;
pub mod cheese;
pub mod interval;
pub(crate) mod precision;

pub use cantor::{make_cantor, CantorSpec, Family, MeasureLimit, RationalParam};
pub use cheese::{cantor_cheese, fat_cantor_cheese, make_swiss_cheese, BallCloud, BallGroup, Domain};
pub use interval::IntervalSet;
