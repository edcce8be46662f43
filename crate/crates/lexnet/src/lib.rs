//! Statute co-citation network analysis for court-judgment corpora.
//!
//! The pipeline: ingest judgment records against a provision catalog,
//! build the binary two-mode "provisions × judgments" incidence matrix,
//! project it to the weighted co-citation graph, split components and
//! exclude type-mismatched cases, compute degree / betweenness / size /
//! density, and answer similar-case retrieval queries over citation
//! overlap.

pub mod affiliation;
pub mod corpus;
pub mod error;
pub mod export;
pub mod graph;
pub mod metrics;
pub mod pipeline;
pub mod retrieval;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default scalar for all real-valued computations.
pub type Real = f64;

/// f64 metric report, the type every renderer consumes.
pub type Metrics = metrics::MetricsReport<Real>;
pub type Reliability = metrics::ReliabilityReport<Real>;
pub type CaseRanking = retrieval::Ranking<Real>;
