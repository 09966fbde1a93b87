//! Pattern densities of permutations and permutons, the linear-algebra
//! tools built on them, and experiments on parameter testability.
//!
//! Permutations are written in one-line notation with 1-based values at
//! every public boundary. Exact quantities are [`Rational`] values;
//! Monte Carlo quantities carry a standard error.

pub mod compressive;
pub mod error;
pub mod params;
pub mod perm;
pub mod permuton;
pub mod rational;
pub mod rng;
pub mod spectra;

pub use compressive::{enumerate_compressive, quotient, CompressivePartition};
pub use error::{Error, Result};
pub use perm::{CanonicalPatternList, PatternClass, PatternCounts, Permutation};
pub use permuton::{DirectSum, McEstimate, Permuton, StepUp};
pub use rational::Rational;
