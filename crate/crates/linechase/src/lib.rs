//! Online line chasing in Euclidean R^d.
//!
//! An instance is an initial point and a sequence of lines revealed one at
//! a time; after each request the algorithm must commit to a point on the
//! revealed line, and its cost is the total length of the path it walks.
//! This crate provides:
//!
//! - [`geometry`]: points, lines, planes, projections, intersections, and
//!   direct similarities in R^d;
//! - [`chase`]: instances, paths, and the [`chase::Policy`] interface with
//!   a validating runner;
//! - [`policies`]: the 3-competitive drift rule in the plane, its
//!   extension to arbitrary dimension, greedy projection, and the
//!   memoryless beta-policy family;
//! - [`offline`]: the offline optimum via block-coordinate descent with a
//!   first-order optimality certificate;
//! - [`adversary`]: adaptive lower-bound constructions (the three-line
//!   construction with force-to-point endgames, and the rotating-line
//!   families for memoryless policies);
//! - [`verify`]: the potential-function step inequality, a stratified
//!   fuzzer for it, similarity-obliviousness checks, and ratio audits
//!   against the offline solver.
//!
//! Everything is generic over a [`Scalar`] (any `num_traits::Float`); the
//! crate-root aliases fix `f64`, which all stated tolerances assume.

pub mod adversary;
pub mod chase;
pub mod error;
pub mod geometry;
pub mod offline;
pub mod policies;
pub mod sample;
mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64` aliases for the core types; the library is tested at this precision.
pub type Point = geometry::Point<f64>;
pub type Line = geometry::Line<f64>;
pub type Plane = geometry::Plane<f64>;
pub type DirectSimilarity = geometry::DirectSimilarity<f64>;
pub type Instance = chase::Instance<f64>;
pub type Path = chase::Path<f64>;
pub type PolicyState = chase::PolicyState<f64>;
pub type StepGeometry = policies::StepGeometry<f64>;
pub type BetaPolicy = policies::BetaPolicy<f64>;
pub type SolverConfig = offline::SolverConfig<f64>;
pub type OptResult = offline::OptResult<f64>;
pub type ArbitraryLbConstants = adversary::ArbitraryLbConstants<f64>;
pub type ForceConfig = adversary::ForceConfig<f64>;
pub type AdversaryTranscript = adversary::AdversaryTranscript<f64>;
pub type PotentialStepReport = verify::PotentialStepReport<f64>;

/// A boxed policy selected by name, at the default precision.
pub type BoxedPolicy = Box<dyn chase::Policy<f64> + Send + Sync>;
