//! Uniform sampling and approximate counting of matchings in k-uniform
//! hypergraphs.
//!
//! The pieces fit together like this: [`hypergraph`] holds the immutable
//! instance and matching types; [`structure`] classifies instances by their
//! wide edges and claw centers; [`oracle`] and [`transition`] provide exact
//! ground truth (counts, enumeration, the explicit chain kernel) on small
//! instances; [`chain`] is the sampler itself plus the analytic mixing
//! bounds; [`estimator`] turns the sampler into an approximate counter by
//! self-reducibility; [`paths`] builds and verifies the canonical paths
//! that justify the whole enterprise; [`generators`] produces the instance
//! families used to exercise everything.
//!
//! Probability-valued computations are generic over [`scalar::Prob`], so
//! the same code runs exactly (with [`Rational`]) or in floating point.

pub mod bitset;
pub mod chain;
pub mod estimator;
pub mod generators;
pub mod graphs;
pub mod hypergraph;
pub mod oracle;
pub mod paths;
pub mod rng;
pub mod scalar;
pub mod structure;
pub mod transition;

pub use hypergraph::{Hypergraph, IntersectionGraph, Matching};
pub use scalar::Prob;

/// Exact probability scalar used by the rational mirrors.
pub type Rational = num_rational::BigRational;
/// Exact count integer.
pub type Count = num_bigint::BigUint;
