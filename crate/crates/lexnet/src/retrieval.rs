//! Similar-case retrieval over citation vectors, plus in-type/outlier
//! classification against the main component.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{Corpus, ProvisionKey};
use crate::error::{Error, Result};
use crate::graph::{CoCitationGraph, ComponentPartition};
use crate::scalar::Scalar;

/// Immutable per-judgment citation index. Rebuilt from scratch, never
/// mutated incrementally; queries are read-only.
#[derive(Debug, Clone)]
pub struct RetrievalIndex {
    vectors: BTreeMap<String, BTreeSet<ProvisionKey>>,
    main_component: BTreeSet<ProvisionKey>,
    catalog_keys: BTreeSet<ProvisionKey>,
}

impl RetrievalIndex {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains_case(&self, case_id: &str) -> bool {
        self.vectors.contains_key(case_id)
    }

    pub fn vector(&self, case_id: &str) -> Option<&BTreeSet<ProvisionKey>> {
        self.vectors.get(case_id)
    }

    pub fn main_component(&self) -> &BTreeSet<ProvisionKey> {
        &self.main_component
    }
}

/// Build the index over all judgments of the (post-exclusion) corpus.
pub fn build_index(
    corpus: &Corpus,
    graph: &CoCitationGraph,
    partition: &ComponentPartition,
) -> RetrievalIndex {
    let main_component = partition
        .main_component()
        .map(|c| c.iter().map(|&i| graph.node(i).clone()).collect())
        .unwrap_or_default();
    RetrievalIndex {
        vectors: corpus
            .judgments
            .iter()
            .map(|j| (j.case_id.clone(), j.cited.clone()))
            .collect(),
        main_component,
        catalog_keys: corpus
            .catalog
            .entries()
            .iter()
            .map(|e| e.provision.key.clone())
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimilarityMetric {
    Jaccard,
    Cosine,
}

impl std::str::FromStr for SimilarityMetric {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "jaccard" => Ok(Self::Jaccard),
            "cosine" => Ok(Self::Cosine),
            other => Err(format!("unknown metric {other:?} (expected jaccard|cosine)")),
        }
    }
}

/// Set similarity of two citation vectors.
pub fn similarity<S: Scalar>(
    a: &BTreeSet<ProvisionKey>,
    b: &BTreeSet<ProvisionKey>,
    metric: SimilarityMetric,
) -> S {
    if a.is_empty() || b.is_empty() {
        return S::zero();
    }
    let inter = a.intersection(b).count();
    match metric {
        SimilarityMetric::Jaccard => {
            let union = a.len() + b.len() - inter;
            S::from_count(inter) / S::from_count(union)
        }
        SimilarityMetric::Cosine => {
            S::from_count(inter) / (S::from_count(a.len()) * S::from_count(b.len())).sqrt()
        }
    }
}

/// Ranked retrieval result: non-increasing by score, ties broken by
/// ascending case id.
#[derive(Debug, Clone)]
pub struct Ranking<S> {
    pub entries: Vec<(String, S)>,
    pub metric: SimilarityMetric,
}

/// Retrieval query: either a stored case (self excluded from results) or
/// an ad-hoc provision set.
#[derive(Debug, Clone)]
pub enum Query {
    Case(String),
    Provisions(BTreeSet<ProvisionKey>),
}

/// Top-k most similar stored cases. `k` larger than the index returns
/// everything.
pub fn similar_cases<S: Scalar>(
    index: &RetrievalIndex,
    query: &Query,
    k: usize,
    metric: SimilarityMetric,
) -> Result<Ranking<S>> {
    let (needle, exclude_id): (&BTreeSet<ProvisionKey>, Option<&str>) = match query {
        Query::Case(id) => {
            let v = index
                .vector(id)
                .ok_or_else(|| Error::UnknownCase(id.clone()))?;
            (v, Some(id.as_str()))
        }
        Query::Provisions(set) => {
            if set.is_empty() {
                return Err(Error::EmptyQuery);
            }
            let unknown: Vec<ProvisionKey> = set
                .iter()
                .filter(|p| !index.catalog_keys.contains(*p))
                .cloned()
                .collect();
            if !unknown.is_empty() {
                return Err(Error::UnknownProvisions(unknown));
            }
            (set, None)
        }
    };

    let mut entries: Vec<(String, S)> = index
        .vectors
        .iter()
        .filter(|(id, _)| Some(id.as_str()) != exclude_id)
        .map(|(id, v)| (id.clone(), similarity::<S>(needle, v, metric)))
        .collect();
    entries.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.0.cmp(&b.0))
    });
    entries.truncate(k);
    Ok(Ranking { entries, metric })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    /// Overlap = |citations ∩ main component| / |citations|.
    InType { overlap: f64 },
    /// The citation set is disjoint from the main component.
    Outlier { disjoint: Vec<ProvisionKey> },
}

/// Classify a citation set against the main component: in-type iff it
/// touches the main component at all.
pub fn classify_case(
    index: &RetrievalIndex,
    citations: &BTreeSet<ProvisionKey>,
) -> Result<Classification> {
    if citations.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let unknown: Vec<ProvisionKey> = citations
        .iter()
        .filter(|p| !index.catalog_keys.contains(*p))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(Error::UnknownProvisions(unknown));
    }

    let inter = citations.intersection(&index.main_component).count();
    if inter > 0 {
        Ok(Classification::InType { overlap: inter as f64 / citations.len() as f64 })
    } else {
        Ok(Classification::Outlier { disjoint: citations.iter().cloned().collect() })
    }
}
