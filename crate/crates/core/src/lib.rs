//! Minimax hypothesis tests, total-variation closest pairs, saddle-point
//! certificates and e-variables for convex sets of distributions on a finite
//! sample space. Every routine runs over `f64` or exact rationals.

pub mod effnull;
pub mod error;
pub mod experiments;
pub mod hypothesis;
pub mod lp;
pub mod measures;
pub mod minimax;
pub mod scalar;

pub use effnull::{EVariable, SubProbability};
pub use error::{Error, Result};
pub use hypothesis::{HypothesisSet, LinearConstraint};
pub use lp::Relation;
pub use measures::{Pmf, SampleSpace, TestFn};
pub use minimax::{minimax_risk, RiskReport};
pub use scalar::{Mode, Num, Rational, Scalar};
