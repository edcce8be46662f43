//! Analysis orchestration: projection, component split, outlier
//! exclusion and re-projection, as one reusable step shared by the CLI
//! and the test suites.

use crate::affiliation::{build_affiliation, AffiliationMatrix};
use crate::corpus::Corpus;
use crate::error::Result;
use crate::graph::{
    connected_components, exclude, isolate_outliers, project, CoCitationGraph, ComponentPartition,
};
use crate::metrics::{metrics_table, MetricsReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExclusionMode {
    /// Flag and exclude disconnected-component cases in one pass.
    Auto,
    /// Keep every judgment.
    Off,
}

#[derive(Debug)]
pub struct Analysis {
    pub pre_matrix: AffiliationMatrix,
    pub pre_graph: CoCitationGraph,
    pub pre_partition: ComponentPartition,
    pub pre_metrics: MetricsReport<f64>,
    /// Flagged (case_id, reason) pairs; empty when exclusion is off.
    pub outliers: Vec<(String, String)>,
    /// Corpus after exclusion (identical to the input when nothing was
    /// flagged or exclusion is off).
    pub corpus: Corpus,
    pub matrix: AffiliationMatrix,
    pub graph: CoCitationGraph,
    pub partition: ComponentPartition,
    pub metrics: MetricsReport<f64>,
}

/// Run the full analysis over a corpus. Exclusion performs exactly one
/// pass: flagged cases are removed and the network is rebuilt once.
pub fn analyze(corpus: &Corpus, mode: ExclusionMode) -> Result<Analysis> {
    let pre_matrix = build_affiliation(corpus);
    let pre_graph = project(&pre_matrix);
    let pre_partition = connected_components(&pre_graph);
    let pre_metrics = metrics_table::<f64>(&pre_graph);

    let outliers = match mode {
        ExclusionMode::Auto => isolate_outliers(&pre_graph, &pre_partition, corpus),
        ExclusionMode::Off => Vec::new(),
    };
    let ids: Vec<String> = outliers.iter().map(|(id, _)| id.clone()).collect();
    let corpus_post = exclude(corpus, &ids)?;

    let matrix = build_affiliation(&corpus_post);
    let graph = project(&matrix);
    let partition = connected_components(&graph);
    let metrics = metrics_table::<f64>(&graph);

    Ok(Analysis {
        pre_matrix,
        pre_graph,
        pre_partition,
        pre_metrics,
        outliers,
        corpus: corpus_post,
        matrix,
        graph,
        partition,
        metrics,
    })
}
