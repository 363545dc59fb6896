pub mod character;
pub mod chern;
pub mod cocycle;
pub mod cyclotomic;
pub mod devoto;
pub mod error;
pub mod extension;
pub mod group;
pub mod gset;
pub mod input;
pub mod pairs;
pub mod projective;
pub mod qell;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};

/// Cyclotomic numbers over `i64` rationals.
pub type Cyc = cyclotomic::Cyclotomic<num_rational::Rational64>;
/// Cyclotomic numbers over arbitrary-precision rationals.
pub type BigCyc = cyclotomic::Cyclotomic<num_rational::BigRational>;
