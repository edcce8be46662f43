//! One-mode co-citation projection, connectivity and outlier exclusion.
//!
//! Nodes are the provisions cited at least once; two provisions are
//! adjacent iff some judgment cites both. Weights count such judgments;
//! downstream metrics operate on the dichotomized (present/absent) view.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::affiliation::AffiliationMatrix;
use crate::corpus::{Corpus, ProvisionKey};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeInfo {
    /// Number of judgments co-citing both endpoints.
    pub weight: u32,
    /// Case ids supporting the edge; weight = |cases|.
    pub cases: BTreeSet<String>,
}

/// Weighted undirected co-citation graph G(N, K).
#[derive(Debug, Clone)]
pub struct CoCitationGraph {
    /// Node provisions in catalog order.
    nodes: Vec<ProvisionKey>,
    index: HashMap<ProvisionKey, usize>,
    adj: Vec<BTreeSet<usize>>,
    /// Keyed by (min, max) node index; no self-loops.
    edges: BTreeMap<(usize, usize), EdgeInfo>,
}

impl CoCitationGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[ProvisionKey] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &ProvisionKey {
        &self.nodes[i]
    }

    pub fn index_of(&self, key: &ProvisionKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn neighbors(&self, i: usize) -> &BTreeSet<usize> {
        &self.adj[i]
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), EdgeInfo> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains_key(&ordered(u, v))
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u32> {
        self.edges.get(&ordered(u, v)).map(|e| e.weight)
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.values().map(|e| u64::from(e.weight)).sum()
    }

    /// Test-support constructor from an explicit edge list over labeled
    /// nodes; weights default to 1, provenance empty.
    pub fn from_edges(nodes: Vec<ProvisionKey>, edge_list: &[(usize, usize)]) -> Self {
        let index = nodes.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut adj = vec![BTreeSet::new(); nodes.len()];
        let mut edges = BTreeMap::new();
        for &(u, v) in edge_list {
            assert!(u != v, "self-loop");
            adj[u].insert(v);
            adj[v].insert(u);
            edges
                .entry(ordered(u, v))
                .or_insert(EdgeInfo { weight: 1, cases: BTreeSet::new() });
        }
        Self { nodes, index, adj, edges }
    }
}

fn ordered(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Project the two-mode matrix onto the provision mode: every judgment
/// column connects all pairs of its cited provisions (a clique), weights
/// accumulating across judgments.
pub fn project(matrix: &AffiliationMatrix) -> CoCitationGraph {
    // Node set: provisions with at least one citation, catalog order.
    let mut nodes = Vec::new();
    let mut row_to_node: HashMap<usize, usize> = HashMap::new();
    for (i, key) in matrix.rows.iter().enumerate() {
        if matrix.row(i).iter().any(|&c| c) {
            row_to_node.insert(i, nodes.len());
            nodes.push(key.clone());
        }
    }
    let index: HashMap<ProvisionKey, usize> =
        nodes.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();

    let mut adj = vec![BTreeSet::new(); nodes.len()];
    let mut edges: BTreeMap<(usize, usize), EdgeInfo> = BTreeMap::new();

    for j in 0..matrix.n_cols() {
        let cited: Vec<usize> = (0..matrix.n_rows())
            .filter(|&i| matrix.cell(i, j))
            .map(|i| row_to_node[&i])
            .collect();
        for a in 0..cited.len() {
            for b in a + 1..cited.len() {
                let (u, v) = ordered(cited[a], cited[b]);
                adj[u].insert(v);
                adj[v].insert(u);
                let e = edges
                    .entry((u, v))
                    .or_insert_with(|| EdgeInfo { weight: 0, cases: BTreeSet::new() });
                e.cases.insert(matrix.cols[j].clone());
                e.weight = e.cases.len() as u32;
            }
        }
    }

    CoCitationGraph { nodes, index, adj, edges }
}

/// Connected components, sorted descending by (node count, total edge
/// weight), ties broken by smallest member's catalog order. `main` is
/// always 0 when any component exists.
#[derive(Debug, Clone)]
pub struct ComponentPartition {
    pub components: Vec<BTreeSet<usize>>,
    pub main: usize,
}

impl ComponentPartition {
    pub fn main_component(&self) -> Option<&BTreeSet<usize>> {
        self.components.get(self.main)
    }
}

pub fn connected_components(graph: &CoCitationGraph) -> ComponentPartition {
    let n = graph.node_count();
    let mut seen = vec![false; n];
    let mut components: Vec<BTreeSet<usize>> = Vec::new();

    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            comp.insert(u);
            for &v in graph.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        components.push(comp);
    }

    let comp_weight = |c: &BTreeSet<usize>| -> u64 {
        graph
            .edges()
            .iter()
            .filter(|((u, _), _)| c.contains(u))
            .map(|(_, e)| u64::from(e.weight))
            .sum()
    };
    components.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then_with(|| comp_weight(b).cmp(&comp_weight(a)))
            .then_with(|| a.iter().next().cmp(&b.iter().next()))
    });

    ComponentPartition { components, main: 0 }
}

/// Judgments whose entire citation set lies outside the main component.
///
/// Partial overlap keeps the case; judgments with no citations are never
/// flagged (there is nothing to place in a component).
pub fn isolate_outliers(
    graph: &CoCitationGraph,
    partition: &ComponentPartition,
    corpus: &Corpus,
) -> Vec<(String, String)> {
    let Some(main) = partition.main_component() else {
        return Vec::new();
    };
    let mut flagged = Vec::new();

    for j in &corpus.judgments {
        if j.cited.is_empty() {
            continue;
        }
        let all_outside = j
            .cited
            .iter()
            .all(|key| graph.index_of(key).is_none_or(|i| !main.contains(&i)));
        if all_outside {
            // name the component holding the citations, if a single one does
            let comps: BTreeSet<usize> = j
                .cited
                .iter()
                .filter_map(|key| graph.index_of(key))
                .filter_map(|i| partition.components.iter().position(|c| c.contains(&i)))
                .collect();
            let reason = match comps.len() {
                0 => "cites no provision present in the graph".to_string(),
                1 => {
                    let c = *comps.iter().next().unwrap();
                    let members: Vec<String> = partition.components[c]
                        .iter()
                        .map(|&i| graph.node(i).to_string())
                        .collect();
                    format!(
                        "all citations fall in disconnected component #{c} ({})",
                        members.join("; ")
                    )
                }
                _ => format!(
                    "citations fall in disconnected components {:?}",
                    comps.iter().collect::<Vec<_>>()
                ),
            };
            flagged.push((j.case_id.clone(), reason));
        }
    }
    flagged
}

/// Return a new corpus without the named judgments. The caller re-runs
/// the affiliation build and projection on the result.
pub fn exclude(corpus: &Corpus, case_ids: &[String]) -> Result<Corpus> {
    for id in case_ids {
        if corpus.judgment(id).is_none() {
            return Err(Error::UnknownCase(id.clone()));
        }
    }
    let drop: BTreeSet<&String> = case_ids.iter().collect();
    Ok(Corpus {
        judgments: corpus
            .judgments
            .iter()
            .filter(|j| !drop.contains(&j.case_id))
            .cloned()
            .collect(),
        catalog: corpus.catalog.clone(),
        window: corpus.window,
    })
}
