//! Deterministic renderers: GraphML / DOT / CSV for graphs, CSV and
//! aligned plain text for the metric, frequency, ranking and
//! reliability tables. Identical inputs always produce identical bytes.

use std::fmt::Write as _;

use crate::affiliation::AffiliationMatrix;
use crate::corpus::{Catalog, Corpus, CorpusStats, ProvisionKey};
use crate::graph::CoCitationGraph;
use crate::metrics::{round_half_away, DensityBand, MetricsReport, ReliabilityReport};
use crate::retrieval::{Ranking, SimilarityMetric};

fn label(catalog: &Catalog, key: &ProvisionKey) -> String {
    catalog
        .provision(key)
        .map(|p| p.label())
        .unwrap_or_else(|| key.to_string())
}

/// Quote a CSV field when it contains a comma, quote or newline.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn fmt3(x: f64) -> String {
    format!("{:.3}", round_half_away(x, 3))
}

pub fn graph_to_graphml(graph: &CoCitationGraph, catalog: &Catalog) -> String {
    let mut out = String::new();
    out.push_str(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    out.push('\n');
    out.push_str(
        r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns""#,
    );
    out.push('\n');
    out.push_str(
        r#"         xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance""#,
    );
    out.push('\n');
    out.push_str(
        r#"         xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">"#,
    );
    out.push('\n');
    out.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n");
    out.push_str("  <key id=\"cases\" for=\"edge\" attr.name=\"cases\" attr.type=\"string\"/>\n");
    out.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
    for (i, key) in graph.nodes().iter().enumerate() {
        let _ = writeln!(
            out,
            "    <node id=\"n{i}\"><data key=\"label\">{}</data></node>",
            xml_escape(&label(catalog, key))
        );
    }
    for ((u, v), e) in graph.edges() {
        let cases: Vec<&str> = e.cases.iter().map(String::as_str).collect();
        let _ = writeln!(
            out,
            "    <edge source=\"n{u}\" target=\"n{v}\"><data key=\"weight\">{}</data><data key=\"cases\">{}</data></edge>",
            e.weight,
            xml_escape(&cases.join(";"))
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn graph_to_dot(graph: &CoCitationGraph, catalog: &Catalog) -> String {
    let mut out = String::from("graph cocitation {\n");
    for (i, key) in graph.nodes().iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", label(catalog, key).replace('"', "\\\""));
    }
    for ((u, v), e) in graph.edges() {
        let _ = writeln!(out, "  n{u} -- n{v} [label=\"{}\", weight={}];", e.weight, e.weight);
    }
    out.push_str("}\n");
    out
}

/// Edge list: `source,target,weight,cases` with cases `;`-joined.
pub fn graph_to_csv(graph: &CoCitationGraph, catalog: &Catalog) -> String {
    let mut out = String::from("source,target,weight,cases\n");
    for ((u, v), e) in graph.edges() {
        let cases: Vec<&str> = e.cases.iter().map(String::as_str).collect();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_field(&label(catalog, graph.node(*u))),
            csv_field(&label(catalog, graph.node(*v))),
            e.weight,
            csv_field(&cases.join(";"))
        );
    }
    out
}

/// Affiliation CSV: header row of case ids, first column "law, Art.N"
/// labels, 0/1 cells.
pub fn affiliation_to_csv(matrix: &AffiliationMatrix) -> String {
    let mut out = String::from("provision");
    for c in &matrix.cols {
        out.push(',');
        out.push_str(&csv_field(c));
    }
    out.push('\n');
    for (i, key) in matrix.rows.iter().enumerate() {
        out.push_str(&csv_field(&key.to_string()));
        for j in 0..matrix.n_cols() {
            out.push(',');
            out.push(if matrix.cell(i, j) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn metrics_to_csv(report: &MetricsReport<f64>, catalog: &Catalog) -> String {
    let mut out = String::from("provision,serial,degree,betweenness\n");
    for m in &report.per_node {
        let serial = catalog
            .provision(&m.node)
            .and_then(|p| p.short_code.clone())
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_field(&m.node.to_string()),
            csv_field(&serial),
            m.degree,
            fmt3(m.betweenness)
        );
    }
    out
}

pub fn metrics_to_text(report: &MetricsReport<f64>, catalog: &Catalog) -> String {
    let mut rows: Vec<(String, String, String, String)> = vec![(
        "Legal Provision".into(),
        "Serial".into(),
        "Degree".into(),
        "Betweenness".into(),
    )];
    for m in &report.per_node {
        let serial = catalog
            .provision(&m.node)
            .and_then(|p| p.short_code.clone())
            .unwrap_or_default();
        rows.push((
            m.node.to_string(),
            serial,
            m.degree.to_string(),
            fmt3(m.betweenness),
        ));
    }
    let w0 = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
    let w1 = rows.iter().map(|r| r.1.chars().count()).max().unwrap_or(0);
    let w2 = rows.iter().map(|r| r.2.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (a, b, c, d) in rows {
        let _ = writeln!(out, "{a:<w0$}  {b:<w1$}  {c:>w2$}  {d}");
    }
    out.push('\n');
    out.push_str(&overall_to_text(report));
    out
}

pub fn overall_to_text(report: &MetricsReport<f64>) -> String {
    let band = match report.overall.density_band {
        DensityBand::Sparse => "sparse (<= 0.25)",
        DensityBand::Dense => "dense (> 0.25)",
    };
    format!(
        "Number of Nodes   {}\nArcs (sum of degrees)  {}\nEdges (undirected)     {}\nDensity           {}\nDensity band      {}\n",
        report.overall.size,
        report.overall.arcs,
        report.overall.edges,
        fmt3(report.overall.density),
        band
    )
}

pub fn ranking_to_csv(ranking: &Ranking<f64>, corpus: &Corpus) -> String {
    let mut out = String::from("score,case_id,court,date\n");
    for (id, score) in &ranking.entries {
        let (court, date) = corpus
            .judgment(id)
            .map(|j| (j.court.clone(), j.date.to_string()))
            .unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{}", fmt3(*score), csv_field(id), csv_field(&court), date);
    }
    out
}

pub fn ranking_to_text(ranking: &Ranking<f64>, corpus: &Corpus) -> String {
    let metric = match ranking.metric {
        SimilarityMetric::Jaccard => "jaccard",
        SimilarityMetric::Cosine => "cosine",
    };
    let mut out = format!("Similar cases ({metric})\n");
    let _ = writeln!(out, "{:<7}  {:<14}  {:<42}  date", "score", "case_id", "court");
    for (id, score) in &ranking.entries {
        let (court, date) = corpus
            .judgment(id)
            .map(|j| (j.court.clone(), j.date.to_string()))
            .unwrap_or_default();
        let _ = writeln!(out, "{:<7}  {:<14}  {:<42}  {}", fmt3(*score), id, court, date);
    }
    out
}

pub fn stats_to_text(stats: &CorpusStats) -> String {
    let mut out = format!("Total judgments   {}\n\nBy procedure:\n", stats.total);
    for (p, n) in &stats.by_procedure {
        let _ = writeln!(out, "  {p:<14} {n}");
    }
    out.push_str("\nBy year (count, summary fraction):\n");
    for (y, ys) in &stats.by_year {
        let _ = writeln!(out, "  {y}  {:>4}  {}", ys.count, fmt3(ys.summary_fraction));
    }
    out
}

pub fn reliability_to_text(report: &ReliabilityReport<f64>) -> String {
    let mut out = String::from("Name    CITC    Cronbach's alpha\n");
    for (i, citc) in report.citc.iter().enumerate() {
        let _ = writeln!(out, "Item {}  {}   {}", i + 1, fmt3(*citc), fmt3(report.alpha_raw));
    }
    let _ = writeln!(out, "Standardized Cronbach's alpha = {}", fmt3(report.alpha_standardized));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Catalog, CatalogEntry, ProvisionRef, ProvisionStatus};
    use crate::graph::CoCitationGraph;

    fn cat(codes: &[&str]) -> Catalog {
        Catalog::new(
            codes
                .iter()
                .map(|c| CatalogEntry {
                    provision: ProvisionRef {
                        key: ProvisionKey::new(format!("Law {c}"), 1),
                        status: ProvisionStatus::InForce,
                        successor: None,
                        short_code: Some(c.to_string()),
                    },
                    patterns: vec![],
                })
                .collect(),
        )
    }

    fn keys(codes: &[&str]) -> Vec<ProvisionKey> {
        codes.iter().map(|c| ProvisionKey::new(format!("Law {c}"), 1)).collect()
    }

    #[test]
    fn dot_triangle() {
        let g = CoCitationGraph::from_edges(keys(&["A", "B", "C"]), &[(0, 1), (1, 2), (0, 2)]);
        let dot = graph_to_dot(&g, &cat(&["A", "B", "C"]));
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert!(dot.contains("weight=1"));
    }

    #[test]
    fn csv_weight_column() {
        let mut g = CoCitationGraph::from_edges(keys(&["A", "B"]), &[(0, 1)]);
        // bump the weight via a second supporting case
        let _ = &mut g; // from_edges weights are 1; render as-is
        let csv = graph_to_csv(&g, &cat(&["A", "B"]));
        let line = csv.lines().nth(1).unwrap();
        assert_eq!(line, "A,B,1,");
    }

    #[test]
    fn csv_fields_with_commas_are_quoted() {
        let g = CoCitationGraph::from_edges(
            vec![ProvisionKey::new("Some Law", 1), ProvisionKey::new("Other Law", 2)],
            &[(0, 1)],
        );
        // no catalog entries -> falls back to "law, Art.N" labels
        let csv = graph_to_csv(&g, &Catalog::new(vec![]));
        assert!(csv.contains("\"Some Law, Art.1\""));
    }

    #[test]
    fn graphml_well_formed_enough() {
        let g = CoCitationGraph::from_edges(keys(&["A", "B"]), &[(0, 1)]);
        let xml = graph_to_graphml(&g, &cat(&["A", "B"]));
        assert!(xml.starts_with("<?xml"));
        assert_eq!(xml.matches("<node ").count(), 2);
        assert_eq!(xml.matches("<edge ").count(), 1);
        assert!(xml.ends_with("</graphml>\n"));
    }

    #[test]
    fn renders_are_deterministic() {
        let g = CoCitationGraph::from_edges(keys(&["A", "B", "C"]), &[(0, 1), (1, 2)]);
        let c = cat(&["A", "B", "C"]);
        assert_eq!(graph_to_dot(&g, &c), graph_to_dot(&g, &c));
        assert_eq!(graph_to_graphml(&g, &c), graph_to_graphml(&g, &c));
        assert_eq!(graph_to_csv(&g, &c), graph_to_csv(&g, &c));
    }
}
