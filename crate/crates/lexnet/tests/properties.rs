//! Property tests for the spec-level invariants: projection clique and
//! weight conservation, handshake, betweenness against the geodesic
//! oracle, density monotonicity, dedupe idempotence and the retrieval
//! contracts.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use lexnet::affiliation::build_affiliation;
use lexnet::corpus::{
    dedupe, extract_citations, Catalog, CatalogEntry, Judgment, Procedure, ProvisionKey,
    ProvisionRef, ProvisionStatus,
};
use lexnet::graph::{connected_components, project, CoCitationGraph};
use lexnet::metrics::{betweenness, cronbach, density, metrics_table};
use lexnet::retrieval::{
    build_index, classify_case, similarity, Classification, SimilarityMetric,
};

use common::brute_force_betweenness;

fn key(i: usize) -> ProvisionKey {
    ProvisionKey::new(format!("Law {i}"), 1)
}

fn catalog(n: usize) -> Catalog {
    Catalog::new(
        (0..n)
            .map(|i| CatalogEntry {
                provision: ProvisionRef {
                    key: key(i),
                    status: ProvisionStatus::InForce,
                    successor: None,
                    short_code: Some(format!("P{i}")),
                },
                patterns: vec![format!("Law {i}, Art.1")],
            })
            .collect(),
    )
}

fn judgment(id: usize, cites: &BTreeSet<usize>) -> Judgment {
    Judgment {
        case_id: format!("J{id:04}"),
        court: "C".into(),
        date: "2023-01-01".parse().unwrap(),
        procedure: Procedure::Summary,
        cited: cites.iter().map(|&i| key(i)).collect(),
        raw_text: None,
    }
}

/// Random corpus: up to 12 provisions, up to 30 judgments.
fn corpus_strategy() -> impl Strategy<Value = (usize, Vec<BTreeSet<usize>>)> {
    (2usize..=12).prop_flat_map(|p| {
        let sets = prop::collection::vec(
            prop::collection::btree_set(0..p, 0..=p.min(6)),
            0..=30,
        );
        (Just(p), sets)
    })
}

fn graph_strategy(max_nodes: usize) -> impl Strategy<Value = CoCitationGraph> {
    (2usize..=max_nodes).prop_flat_map(move |n| {
        let all_pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        prop::collection::vec(any::<bool>(), all_pairs.len()).prop_map(move |mask| {
            let edges: Vec<(usize, usize)> = all_pairs
                .iter()
                .zip(&mask)
                .filter(|(_, &m)| m)
                .map(|(&e, _)| e)
                .collect();
            CoCitationGraph::from_edges((0..n).map(key).collect(), &edges)
        })
    })
}

proptest! {
    #[test]
    fn projection_clique_and_weight_conservation((p, sets) in corpus_strategy()) {
        let judgments: Vec<Judgment> =
            sets.iter().enumerate().map(|(i, s)| judgment(i, s)).collect();
        let (corpus, _) = dedupe(judgments, catalog(p), None);
        let g = project(&build_affiliation(&corpus));

        // clique property: each judgment's citation set induces a complete subgraph
        for j in &corpus.judgments {
            let idx: Vec<usize> =
                j.cited.iter().map(|k| g.index_of(k).unwrap()).collect();
            for a in 0..idx.len() {
                for b in a + 1..idx.len() {
                    prop_assert!(g.has_edge(idx[a], idx[b]));
                }
            }
        }

        // weight conservation: total weight = sum over judgments of C(m,2)
        let expected: u64 = corpus
            .judgments
            .iter()
            .map(|j| (j.cited.len() as u64 * (j.cited.len() as u64).saturating_sub(1)) / 2)
            .sum();
        prop_assert_eq!(g.total_weight(), expected);

        // every edge is supported by at least one co-citing judgment
        for ((u, v), e) in g.edges() {
            prop_assert!(e.weight >= 1);
            prop_assert_eq!(e.weight as usize, e.cases.len());
            let (ku, kv) = (g.node(*u).clone(), g.node(*v).clone());
            let support = corpus
                .judgments
                .iter()
                .filter(|j| j.cited.contains(&ku) && j.cited.contains(&kv))
                .count();
            prop_assert_eq!(support, e.weight as usize);
        }
    }

    #[test]
    fn projection_merges_over_column_partitions((p, sets) in corpus_strategy()) {
        // projecting the whole corpus equals merging the projections of
        // any column split: compare edge sets and weights of the full
        // projection against the two halves combined
        let judgments: Vec<Judgment> =
            sets.iter().enumerate().map(|(i, s)| judgment(i, s)).collect();
        let half = judgments.len() / 2;
        let (left, right) = (judgments[..half].to_vec(), judgments[half..].to_vec());
        let (full, _) = dedupe(judgments, catalog(p), None);
        let (cl, _) = dedupe(left, catalog(p), None);
        let (cr, _) = dedupe(right, catalog(p), None);

        let g = project(&build_affiliation(&full));
        let gl = project(&build_affiliation(&cl));
        let gr = project(&build_affiliation(&cr));

        let mut merged: std::collections::BTreeMap<(ProvisionKey, ProvisionKey), u64> =
            std::collections::BTreeMap::new();
        for (part, graph) in [(&cl, &gl), (&cr, &gr)] {
            let _ = part;
            for ((u, v), e) in graph.edges() {
                let mut pair = [graph.node(*u).clone(), graph.node(*v).clone()];
                pair.sort();
                let [a, b] = pair;
                *merged.entry((a, b)).or_insert(0) += u64::from(e.weight);
            }
        }
        let mut full_edges: std::collections::BTreeMap<(ProvisionKey, ProvisionKey), u64> =
            std::collections::BTreeMap::new();
        for ((u, v), e) in g.edges() {
            let mut pair = [g.node(*u).clone(), g.node(*v).clone()];
            pair.sort();
            let [a, b] = pair;
            full_edges.insert((a, b), u64::from(e.weight));
        }
        prop_assert_eq!(merged, full_edges);
    }

    #[test]
    fn handshake_on_every_graph(g in graph_strategy(10)) {
        let report = metrics_table::<f64>(&g);
        let degree_sum: usize = report.per_node.iter().map(|m| m.degree).sum();
        prop_assert_eq!(degree_sum, 2 * g.edge_count());
        prop_assert_eq!(report.overall.arcs, degree_sum);
    }

    #[test]
    fn betweenness_matches_geodesic_oracle(g in graph_strategy(7)) {
        let fast = betweenness::<f64>(&g);
        let slow = brute_force_betweenness(&g);
        for (a, b) in fast.iter().zip(&slow) {
            prop_assert!((a - b).abs() < 1e-9, "fast {a} vs oracle {b}");
        }
    }

    #[test]
    fn betweenness_nonnegative(g in graph_strategy(9)) {
        prop_assert!(betweenness::<f64>(&g).iter().all(|&b| b >= 0.0));
    }

    #[test]
    fn tree_betweenness_identities(parents in prop::collection::vec(0usize..1000, 1..8)) {
        // random tree: node i+1 attaches to parents[i] % (i+1)
        let n = parents.len() + 1;
        let edges: Vec<(usize, usize)> = parents
            .iter()
            .enumerate()
            .map(|(i, &p)| (p % (i + 1), i + 1))
            .collect();
        let g = CoCitationGraph::from_edges((0..n).map(key).collect(), &edges);
        let bc = betweenness::<f64>(&g);

        // leaves of a tree have betweenness 0
        for (i, b) in bc.iter().enumerate() {
            if g.neighbors(i).len() == 1 {
                prop_assert!(b.abs() < 1e-12);
            }
        }
        // sum over nodes = sum over pairs of (path length - 1)
        let mut expected = 0.0;
        for j in 0..n {
            for k in j + 1..n {
                let d = bfs_dist(&g, j, k);
                expected += (d - 1) as f64;
            }
        }
        let total: f64 = bc.iter().sum();
        prop_assert!((total - expected).abs() < 1e-9);
    }

    #[test]
    fn density_increases_with_an_edge(g in graph_strategy(9)) {
        let n = g.node_count();
        let missing: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        if let Some(&(u, v)) = missing.first() {
            let mut edges: Vec<(usize, usize)> =
                g.edges().keys().copied().collect();
            edges.push((u, v));
            let g2 = CoCitationGraph::from_edges(g.nodes().to_vec(), &edges);
            prop_assert!(density::<f64>(&g2) > density::<f64>(&g));
        }
    }

    #[test]
    fn dedupe_is_idempotent((p, sets) in corpus_strategy(), dup_mask in prop::collection::vec(any::<bool>(), 0..30)) {
        let mut judgments: Vec<Judgment> =
            sets.iter().enumerate().map(|(i, s)| judgment(i, s)).collect();
        // duplicate a few records
        let dups: Vec<Judgment> = judgments
            .iter()
            .zip(&dup_mask)
            .filter(|(_, &m)| m)
            .map(|(j, _)| j.clone())
            .collect();
        judgments.extend(dups);

        let (once, _) = dedupe(judgments, catalog(p), None);
        let (twice, report) = dedupe(once.judgments.clone(), catalog(p), None);
        prop_assert!(report.removed.is_empty());
        prop_assert_eq!(
            once.judgments.iter().map(|j| &j.case_id).collect::<Vec<_>>(),
            twice.judgments.iter().map(|j| &j.case_id).collect::<Vec<_>>()
        );
    }

    #[test]
    fn extraction_output_is_subset_of_catalog(text in ".{0,200}", p in 2usize..8) {
        let cat = catalog(p);
        for k in extract_citations(&text, &cat) {
            prop_assert!(cat.contains(&k));
        }
    }

    #[test]
    fn similarity_contracts(a in prop::collection::btree_set(0usize..10, 0..6),
                            b in prop::collection::btree_set(0usize..10, 0..6)) {
        let sa: BTreeSet<ProvisionKey> = a.iter().map(|&i| key(i)).collect();
        let sb: BTreeSet<ProvisionKey> = b.iter().map(|&i| key(i)).collect();
        for metric in [SimilarityMetric::Jaccard, SimilarityMetric::Cosine] {
            let s1: f64 = similarity(&sa, &sb, metric);
            let s2: f64 = similarity(&sb, &sa, metric);
            prop_assert_eq!(s1, s2);
            prop_assert!((0.0..=1.0).contains(&s1));
        }
        // extremes agree between the metrics
        let j: f64 = similarity(&sa, &sb, SimilarityMetric::Jaccard);
        let c: f64 = similarity(&sa, &sb, SimilarityMetric::Cosine);
        if j == 0.0 || j == 1.0 {
            prop_assert_eq!(j, c);
        }
    }

    #[test]
    fn classify_monotone_in_main_component((p, sets) in corpus_strategy(),
                                           q in prop::collection::btree_set(0usize..12, 1..5)) {
        let judgments: Vec<Judgment> =
            sets.iter().enumerate().map(|(i, s)| judgment(i, s)).collect();
        let (corpus, _) = dedupe(judgments, catalog(p), None);
        let g = project(&build_affiliation(&corpus));
        let partition = connected_components(&g);
        let index = build_index(&corpus, &g, &partition);

        let main: Vec<ProvisionKey> = index.main_component().iter().cloned().collect();
        let query: BTreeSet<ProvisionKey> =
            q.iter().filter(|&&i| i < p).map(|&i| key(i)).collect();
        if query.is_empty() || main.is_empty() {
            return Ok(());
        }
        let before = classify_case(&index, &query).unwrap();
        // adding a main-component provision never flips in_type -> outlier
        let mut grown = query.clone();
        grown.insert(main[0].clone());
        let after = classify_case(&index, &grown).unwrap();
        let after_in_type = matches!(after, Classification::InType { .. });
        if matches!(before, Classification::InType { .. }) {
            prop_assert!(after_in_type);
        }
        // and the grown query is always in_type by construction
        prop_assert!(after_in_type);
    }

    #[test]
    fn standardized_alpha_invariant_under_affine_rescale(
        base in prop::collection::vec(-50.0f64..50.0, 5..20),
        noise in prop::collection::vec(-10.0f64..10.0, 5..20),
        scale in 0.1f64..10.0,
        shift in -100.0f64..100.0,
    ) {
        let n = base.len().min(noise.len());
        if n < 3 { return Ok(()); }
        let a: Vec<f64> = base[..n].to_vec();
        let b: Vec<f64> = base[..n].iter().zip(&noise[..n]).map(|(x, e)| x + e).collect();
        let Ok(before) = cronbach::<f64>(&[a.clone(), b.clone()]) else { return Ok(()); };
        let b_scaled: Vec<f64> = b.iter().map(|x| scale * x + shift).collect();
        let Ok(after) = cronbach::<f64>(&[a, b_scaled]) else { return Ok(()); };
        prop_assert!(
            (before.alpha_standardized - after.alpha_standardized).abs() < 1e-9,
            "std alpha changed under affine rescale"
        );
    }
}

fn bfs_dist(g: &CoCitationGraph, from: usize, to: usize) -> usize {
    let mut dist = vec![usize::MAX; g.node_count()];
    dist[from] = 0;
    let mut q = std::collections::VecDeque::from([from]);
    while let Some(u) = q.pop_front() {
        if u == to {
            return dist[u];
        }
        for &v in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    usize::MAX
}
