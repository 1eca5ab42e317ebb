//! Matching-size estimation for bounded-arboricity and planar graphs.
//!
//! The central primitive is the *locally superior vertex*: a vertex with at
//! least one neighbor of equal or smaller degree. The count of such vertices,
//! `ell(G)`, sandwiches the maximum-matching size `m(G)` on low-arboricity
//! graphs and is cheap to estimate by vertex sampling. On top of that this
//! crate provides:
//!
//! * exact oracles (blossom maximum matching, exhaustive brute force,
//!   Nash-Williams density, degeneracy) used to verify every estimate,
//! * a one-pass vertex-arrival streaming engine with word-level space
//!   accounting,
//! * a simulator for the simultaneous vertex-partition communication model
//!   (isolated players, shared randomness, a referee, bit-accounted
//!   messages),
//! * seed-deterministic graph generators with by-construction arboricity
//!   and planarity witnesses.
//!
//! Estimator repetitions, protocol players, and sweep trials are
//! data-parallel; the default `parallel` feature runs them on rayon, and
//! disabling it falls back to sequential loops with identical output.

pub mod gen;
pub mod graph;
pub mod matching;
mod par;
pub mod protocol;
pub mod report;
pub mod rng;
pub mod sampler;
pub mod stream;

use thiserror::Error;

/// Errors shared across the crate.
///
/// The CLI maps these onto exit codes: format problems exit 3, capability
/// limits (oracle size caps) exit 4, everything else is a usage error.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex id {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid vertex order: {0}")]
    InvalidPermutation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("input too large for exhaustive oracle: {0}")]
    Capability(String),

    #[error("graph format error at line {line}: {reason}")]
    GraphFormat { line: usize, reason: String },

    #[error("stream format error at record {record}: {reason}")]
    StreamFormat { record: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub use graph::{ArboricityWitness, Graph, HalfUnits, Provenance};
pub use matching::Matching;
pub use report::EstimateReport;
pub use sampler::SamplerConfig;
pub use stream::VertexArrivalStream;
