//! Co-spectral radii of subgroups, estimated from finite windows of Schreier
//! graphs, together with the combinatorics they rest on: free-group and
//! wreath-group arithmetic, Stallings automata, product oracles for
//! intersections, invariant random subgroup samplers and finite graphings.
//!
//! Numerical routines are generic over [`Scalar`] (`f32`, `f64`); exact
//! bookkeeping on graphings is generic over [`Weight`], which also covers
//! rationals. The aliases below fix the common choices.

pub mod error;
pub mod graphing;
pub mod group;
pub mod harness;
pub mod irs;
pub mod linalg;
pub mod scalar;
pub mod schreier;
pub mod spectral;
pub mod stallings;

pub use error::{Error, Result};
pub use group::{Element, Generator, GroupElement, Word, WreathElement};
pub use scalar::{Scalar, Weight};
pub use schreier::{Family, SchreierBall, SubgroupOracle};
pub use spectral::SpectralEstimate;
pub use stallings::{CogrowthResult, StallingsAutomaton, SubgroupIndex};

pub type SpectralEstimate64 = spectral::SpectralEstimate<f64>;
pub type SpectralEstimate32 = spectral::SpectralEstimate<f32>;
pub type CogrowthResult64 = stallings::CogrowthResult<f64>;
pub type Graphing64 = graphing::Graphing<f64>;
pub type ExactGraphing = graphing::Graphing<num_rational::BigRational>;
pub type TestFunction64 = graphing::TestFunction<f64>;
