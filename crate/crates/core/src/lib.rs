//! Sublinear-time triangle and edge counting with untrusted arboricity advice.
//!
//! Every estimator in this crate talks to its input graph only through an
//! [`Oracle`], which simulates the augmented query model (degree, i-th
//! neighbor, pair, uniform vertex and uniform edge queries) over an immutable
//! [`Graph`] and meters every query in a [`QueryLedger`].
//!
//! The estimators are *testable*: given advice `α̃` on the arboricity of the
//! graph they either return an estimate or report [`Rejection`] ("bad
//! advice").  Correct advice is rarely rejected, and whatever value is
//! returned is accurate regardless of the advice.
//!
//! Layout:
//!
//! - [`graph`], [`exact`], [`generators`]: graph representation, exact
//!   counting oracles and instance generators.
//! - [`oracle`]: the metered query model.
//! - [`triangles`]: the single-guess triangle estimator and its heaviness
//!   and assignment subroutines.
//! - [`edges`]: the single-guess edge estimator.
//! - [`search`]: guess descent, confidence amplification and the
//!   instance-adaptive drivers.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod math;

pub mod edges;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod sampling;
pub mod search;
pub mod triangles;

pub use edges::{approx_edges_with_advice, EdgeRunConfig, EdgeTrialStats};
pub use graph::{Edge, EdgeDegree, Graph, GraphError, Vertex};
pub use oracle::{Oracle, OracleError, QueryKind, QueryLedger};
pub use search::{
    adaptive_edges, adaptive_triangles, edge_search, search, testable_edges, testable_triangles,
    triangle_search, AdaptiveOutcome, SearchResult, SearchTrace, TestableOutcome,
};
pub use triangles::{
    approx_triangles_unconditional, approx_triangles_with_advice, compute_thresholds,
    is_assigned, is_heavy, HeavinessCache, Thresholds, TriangleRunConfig, TrialStats, Verdict,
};

use thiserror::Error;

/// Reason an estimator rejected its advice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    /// The sampled edge set has a degree sum too large for the advised arboricity.
    DegreeSumReject,
    /// Too many sampled edges were classified heavy.
    HeavyFractionReject,
    /// Too many sampled edges have both endpoints above the degree cap.
    HighDegreeEdgeReject,
}

/// Result of a single estimator run.
#[derive(Debug, Clone, PartialEq)]
pub enum EstimateOutcome<S> {
    BadAdvice(Rejection),
    Estimate {
        value: f64,
        stats: S,
        /// Queries issued by this run alone.
        ledger: QueryLedger,
    },
}

impl<S> EstimateOutcome<S> {
    pub fn value(&self) -> Option<f64> {
        match self {
            EstimateOutcome::Estimate { value, .. } => Some(*value),
            EstimateOutcome::BadAdvice(_) => None,
        }
    }

    pub fn is_bad_advice(&self) -> bool {
        matches!(self, EstimateOutcome::BadAdvice(_))
    }
}

/// Errors raised by the estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimatorError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("every advice value was rejected")]
    AllAdviceRejected,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub(crate) fn param(name: &'static str, reason: &'static str) -> EstimatorError {
    EstimatorError::InvalidParameter { name, reason }
}
