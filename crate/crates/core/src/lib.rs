pub mod bounds;
pub mod certify;
pub mod cli;
pub mod enclosure;
pub mod error;
pub mod exponent;
pub mod lattice;
pub mod obstruction;
pub mod poly;
pub mod rational;
pub mod realanalysis;
pub mod simplex;

pub use enclosure::RealEnclosure;
pub use error::{Error, Result};
pub use poly::IntPolynomial;
pub use rational::Rational;
pub use realanalysis::{RatInterval, WeightedProduct};
