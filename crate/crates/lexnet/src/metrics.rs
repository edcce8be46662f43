//! Individual metrics (degree, betweenness centrality), overall metrics
//! (size, density) and Cronbach's α reliability.
//!
//! All metrics operate on the dichotomized graph: an edge either exists
//! or it does not, regardless of its co-citation weight. Betweenness is
//! unnormalized (no division by (N-1)(N-2)/2). Everything is generic
//! over the scalar type; `f64` aliases live at the crate root.

use std::collections::VecDeque;

use crate::corpus::ProvisionKey;
use crate::error::{Error, Result};
use crate::graph::CoCitationGraph;
use crate::scalar::Scalar;

/// Number of distinct neighbors of `node` in the dichotomized graph.
pub fn degree(graph: &CoCitationGraph, node: &ProvisionKey) -> Result<usize> {
    let i = graph
        .index_of(node)
        .ok_or_else(|| Error::UnknownNode(node.clone()))?;
    Ok(graph.neighbors(i).len())
}

/// Unnormalized betweenness centrality of every node, indexed like the
/// graph's node list.
///
/// For each unordered pair (j, k) with j, k ≠ i and at least one
/// geodesic between them, node i accrues g_jk(i)/g_jk. Pairs in
/// different components contribute 0. Endpoints are never credited as
/// intermediaries of their own pair.
///
/// Brandes' accumulation; per-source contributions are summed in fixed
/// node order, so results are bitwise stable.
pub fn betweenness<S: Scalar>(graph: &CoCitationGraph) -> Vec<S> {
    let n = graph.node_count();
    let mut centrality = vec![S::zero(); n];
    if n < 3 {
        return centrality;
    }

    let mut stack: Vec<usize> = Vec::with_capacity(n);
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![S::zero(); n];
    let mut dist: Vec<i64> = vec![-1; n];
    let mut delta = vec![S::zero(); n];
    let mut queue: VecDeque<usize> = VecDeque::new();

    for s in 0..n {
        for v in 0..n {
            pred[v].clear();
            sigma[v] = S::zero();
            dist[v] = -1;
            delta[v] = S::zero();
        }
        stack.clear();
        queue.clear();

        sigma[s] = S::one();
        dist[s] = 0;
        queue.push_back(s);

        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in graph.neighbors(v) {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] = sigma[w] + sigma[v];
                    pred[w].push(v);
                }
            }
        }

        while let Some(w) = stack.pop() {
            let dw = delta[w];
            for &v in &pred[w] {
                delta[v] += sigma[v] / sigma[w] * (S::one() + dw);
            }
            if w != s {
                centrality[w] += delta[w];
            }
        }
    }

    // Each unordered pair was visited from both endpoints.
    let half = S::from_count(2);
    for c in &mut centrality {
        *c = *c / half;
    }
    centrality
}

/// Density D = 2L / (g(g-1)); defined as 0 for fewer than two nodes.
pub fn density<S: Scalar>(graph: &CoCitationGraph) -> S {
    let g = graph.node_count();
    if g < 2 {
        return S::zero();
    }
    let l = S::from_count(graph.edge_count());
    let gf = S::from_count(g);
    S::from_count(2) * l / (gf * (gf - S::one()))
}

/// Network size N: the number of nodes.
pub fn size(graph: &CoCitationGraph) -> usize {
    graph.node_count()
}

/// Wellman's reading of the density figure: 0–0.25 sparse, above dense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityBand {
    Sparse,
    Dense,
}

#[derive(Debug, Clone)]
pub struct NodeMetrics<S> {
    pub node: ProvisionKey,
    pub degree: usize,
    pub betweenness: S,
}

#[derive(Debug, Clone)]
pub struct OverallMetrics<S> {
    pub size: usize,
    /// Sum of degrees (ordered arc count); always 2 × edges.
    pub arcs: usize,
    /// Undirected edge count L.
    pub edges: usize,
    pub density: S,
    pub density_band: DensityBand,
}

/// Per-node and overall metrics, per-node rows in catalog order.
#[derive(Debug, Clone)]
pub struct MetricsReport<S> {
    pub per_node: Vec<NodeMetrics<S>>,
    pub overall: OverallMetrics<S>,
}

pub fn metrics_table<S: Scalar>(graph: &CoCitationGraph) -> MetricsReport<S> {
    let bc = betweenness::<S>(graph);
    let per_node = graph
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, key)| NodeMetrics {
            node: key.clone(),
            degree: graph.neighbors(i).len(),
            betweenness: bc[i],
        })
        .collect::<Vec<_>>();

    let arcs: usize = per_node.iter().map(|m| m.degree).sum();
    let edges = graph.edge_count();
    debug_assert_eq!(arcs, 2 * edges);

    let d = density::<S>(graph);
    let band = if d <= S::from_f64(0.25).unwrap() {
        DensityBand::Sparse
    } else {
        DensityBand::Dense
    };

    MetricsReport {
        per_node,
        overall: OverallMetrics {
            size: graph.node_count(),
            arcs,
            edges,
            density: d,
            density_band: band,
        },
    }
}

/// Round half away from zero at `dp` decimal places (table convention).
pub fn round_half_away(x: f64, dp: u32) -> f64 {
    let scale = 10f64.powi(dp as i32);
    let scaled = x * scale;
    let r = if scaled >= 0.0 { (scaled + 0.5).floor() } else { (scaled - 0.5).ceil() };
    r / scale
}

#[derive(Debug, Clone)]
pub struct ReliabilityReport<S> {
    pub k: usize,
    pub alpha_raw: S,
    pub alpha_standardized: S,
    /// Corrected item-total correlation per item.
    pub citc: Vec<S>,
}

/// Cronbach's α over an item-score matrix, `items[i]` holding item i's
/// score for every case.
///
/// Conventions: sample (n−1) variance and Pearson correlation.
/// alpha_raw = k/(k−1) · (1 − Σσ²_item/σ²_total);
/// alpha_standardized = k·r̄/(1+(k−1)·r̄) with r̄ the mean inter-item
/// correlation; CITC is each item's correlation with the sum of the
/// others.
pub fn cronbach<S: Scalar>(items: &[Vec<S>]) -> Result<ReliabilityReport<S>> {
    let k = items.len();
    if k < 2 {
        return Err(Error::TooFewItems(k));
    }
    let n = items[0].len();
    if n < 2 {
        return Err(Error::TooFewCases(n));
    }
    assert!(items.iter().all(|col| col.len() == n), "ragged item matrix");

    for (i, col) in items.iter().enumerate() {
        if sample_var(col) == S::zero() {
            return Err(Error::ZeroVariance(i));
        }
    }

    let totals: Vec<S> = (0..n)
        .map(|c| items.iter().map(|col| col[c]).sum())
        .collect();
    let var_total = sample_var(&totals);
    if var_total == S::zero() {
        return Err(Error::ZeroVariance(usize::MAX));
    }

    let kf = S::from_count(k);
    let sum_item_var: S = items.iter().map(|col| sample_var(col)).sum();
    let alpha_raw = kf / (kf - S::one()) * (S::one() - sum_item_var / var_total);

    let mut r_sum = S::zero();
    let mut pairs = 0usize;
    for i in 0..k {
        for j in i + 1..k {
            r_sum += pearson(&items[i], &items[j]);
            pairs += 1;
        }
    }
    let r_bar = r_sum / S::from_count(pairs);
    let alpha_standardized = kf * r_bar / (S::one() + (kf - S::one()) * r_bar);

    let citc = (0..k)
        .map(|i| {
            let rest: Vec<S> = (0..n)
                .map(|c| totals[c] - items[i][c])
                .collect();
            pearson(&items[i], &rest)
        })
        .collect();

    Ok(ReliabilityReport { k, alpha_raw, alpha_standardized, citc })
}

fn mean<S: Scalar>(xs: &[S]) -> S {
    xs.iter().copied().sum::<S>() / S::from_count(xs.len())
}

fn sample_var<S: Scalar>(xs: &[S]) -> S {
    let m = mean(xs);
    xs.iter().map(|&x| (x - m) * (x - m)).sum::<S>() / S::from_count(xs.len() - 1)
}

fn pearson<S: Scalar>(xs: &[S], ys: &[S]) -> S {
    let mx = mean(xs);
    let my = mean(ys);
    let mut cov = S::zero();
    let mut vx = S::zero();
    let mut vy = S::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    cov / (vx * vy).sqrt()
}
