//! Shared fixture loading and independent oracles for the integration
//! and acceptance suites. Oracles here deliberately avoid the library's
//! production code paths.
#![allow(dead_code)] // each test target uses a different subset

use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use lexnet::corpus::{dedupe, parse_corpus, Catalog, Corpus, UnknownProvisionPolicy};
use lexnet::graph::CoCitationGraph;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn load_catalog() -> Catalog {
    Catalog::from_json_reader(BufReader::new(File::open(fixture("catalog.json")).unwrap()))
        .unwrap()
}

/// The bundled 49-judgment corpus (48 in-type + 1 isolated-clique case).
pub fn load_fixture_corpus() -> Corpus {
    let catalog = load_catalog();
    let out = parse_corpus(
        BufReader::new(File::open(fixture("judgments.jsonl")).unwrap()),
        &catalog,
        UnknownProvisionPolicy::Reject,
        None,
    )
    .unwrap();
    assert!(out.errors.is_empty(), "fixture must parse cleanly: {:?}", out.errors);
    let (corpus, report) = dedupe(out.judgments, out.catalog, None);
    assert!(report.removed.is_empty());
    corpus
}

/// Table 1's (serial, degree) column.
pub const TABLE1_DEGREES: [(&str, usize); 18] = [
    ("A", 11),
    ("B", 3),
    ("C", 10),
    ("D", 3),
    ("E", 7),
    ("F", 3),
    ("G", 10),
    ("H", 3),
    ("I", 5),
    ("J", 3),
    ("K", 3),
    ("L", 7),
    ("M", 3),
    ("N", 6),
    ("O", 3),
    ("P", 3),
    ("Q", 3),
    ("R", 6),
];

/// Brute-force betweenness by explicit geodesic enumeration: for every
/// unordered pair, list ALL shortest paths and count, per interior node,
/// the fraction passing through it.
pub fn brute_force_betweenness(graph: &CoCitationGraph) -> Vec<f64> {
    let n = graph.node_count();
    let mut scores = vec![0.0; n];
    for j in 0..n {
        for k in j + 1..n {
            let paths = all_shortest_paths(graph, j, k);
            if paths.is_empty() {
                continue;
            }
            let total = paths.len() as f64;
            for (i, score) in scores.iter_mut().enumerate() {
                if i == j || i == k {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&i)).count() as f64;
                *score += through / total;
            }
        }
    }
    scores
}

/// Every shortest path from `from` to `to`, as node sequences.
fn all_shortest_paths(graph: &CoCitationGraph, from: usize, to: usize) -> Vec<Vec<usize>> {
    let n = graph.node_count();
    // BFS distances from the source
    let mut dist = vec![usize::MAX; n];
    dist[from] = 0;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &v in graph.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    if dist[to] == usize::MAX {
        return Vec::new();
    }
    // DFS along strictly-decreasing-distance-to-target edges
    let mut paths = Vec::new();
    let mut current = vec![from];
    dfs_paths(graph, &dist, to, &mut current, &mut paths);
    paths
}

fn dfs_paths(
    graph: &CoCitationGraph,
    dist: &[usize],
    to: usize,
    current: &mut Vec<usize>,
    paths: &mut Vec<Vec<usize>>,
) {
    let u = *current.last().unwrap();
    if u == to {
        paths.push(current.clone());
        return;
    }
    for &v in graph.neighbors(u) {
        if dist[v] == dist[u] + 1 {
            current.push(v);
            dfs_paths(graph, dist, to, current, paths);
            current.pop();
        }
    }
}

/// Erdős–Gallai test: is the non-increasing degree sequence graphical?
pub fn erdos_gallai_graphical(degrees: &[usize]) -> bool {
    let mut d: Vec<usize> = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    if d.iter().sum::<usize>() % 2 != 0 {
        return false;
    }
    let n = d.len();
    for k in 1..=n {
        let lhs: usize = d[..k].iter().sum();
        let rhs: usize =
            k * (k - 1) + d[k..].iter().map(|&di| di.min(k)).sum::<usize>();
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// Havel–Hakimi realization of a graphical degree sequence over nodes
/// 0..n, returned as an edge list.
pub fn havel_hakimi_edges(degrees: &[usize]) -> Vec<(usize, usize)> {
    let mut remaining: Vec<(usize, usize)> =
        degrees.iter().copied().enumerate().collect();
    let mut edges = Vec::new();
    loop {
        remaining.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let (v, d) = remaining[0];
        if d == 0 {
            break;
        }
        assert!(d < remaining.len(), "sequence not graphical");
        remaining[0].1 = 0;
        for item in remaining.iter_mut().skip(1).take(d) {
            assert!(item.1 > 0, "sequence not graphical");
            item.1 -= 1;
            edges.push((v.min(item.0), v.max(item.0)));
        }
    }
    edges
}

/// Minimal deterministic RNG for random-graph instances (xorshift64*).
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// Random graph on `n` labeled nodes with roughly `num/den` edge
/// probability.
pub fn random_graph(rng: &mut TestRng, n: usize, num: u64, den: u64) -> CoCitationGraph {
    use lexnet::corpus::ProvisionKey;
    let nodes: Vec<ProvisionKey> =
        (0..n).map(|i| ProvisionKey::new(format!("Law {i}"), 1)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.chance(num, den) {
                edges.push((u, v));
            }
        }
    }
    CoCitationGraph::from_edges(nodes, &edges)
}

/// Citation sets of the corpus as short-code sets, for recounts.
pub fn short_code_sets(corpus: &Corpus) -> Vec<BTreeSet<String>> {
    corpus
        .judgments
        .iter()
        .map(|j| {
            j.cited
                .iter()
                .map(|k| {
                    corpus
                        .catalog
                        .provision(k)
                        .and_then(|p| p.short_code.clone())
                        .unwrap_or_else(|| k.to_string())
                })
                .collect()
        })
        .collect()
}
