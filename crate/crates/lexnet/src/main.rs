//! Command-line front end: ingest -> analyze -> query/export, plus
//! corpus stats and reliability reporting.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 data error.

use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lexnet::affiliation::provision_frequency;
use lexnet::corpus::{
    corpus_stats, dedupe, parse_corpus, Catalog, Corpus, ProvisionKey, UnknownProvisionPolicy,
};
use lexnet::error::Error;
use lexnet::export;
use lexnet::metrics::cronbach;
use lexnet::pipeline::{analyze, ExclusionMode};
use lexnet::retrieval::{
    build_index, classify_case, similar_cases, Classification, Query, SimilarityMetric,
};
use lexnet::Real;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

#[derive(Parser)]
#[command(name = "lexnet", version, about = "Statute co-citation network analysis and similar-case retrieval")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutDir {
    /// Output directory (falls back to $LEXNET_OUT, then ".")
    #[arg(long, env = "LEXNET_OUT", default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and normalize a JSON Lines judgment file against a catalog
    Ingest {
        /// Judgment records, one JSON object per line
        #[arg(long)]
        input: PathBuf,
        /// Provision catalog (JSON array)
        #[arg(long)]
        catalog: PathBuf,
        /// Start of the corpus query window (ISO date)
        #[arg(long)]
        from: Option<chrono::NaiveDate>,
        /// End of the corpus query window (ISO date)
        #[arg(long)]
        to: Option<chrono::NaiveDate>,
        /// Auto-extend the catalog instead of rejecting unknown provisions
        #[arg(long)]
        allow_unknown: bool,
        #[command(flatten)]
        out: OutDir,
    },
    /// Project the network, split components, exclude outliers, compute metrics
    Analyze {
        /// Normalized corpus (corpus.json written by `ingest`)
        #[arg(long)]
        input: PathBuf,
        /// auto | off | comma-separated case ids
        #[arg(long, default_value = "auto")]
        exclude: String,
        /// Export formats: any of csv,text,graphml,dot (comma-separated)
        #[arg(long, default_value = "csv,text")]
        format: String,
        #[command(flatten)]
        out: OutDir,
    },
    /// Rank similar cases or classify a provision set
    Query {
        /// Post-exclusion corpus (corpus_post.json written by `analyze`)
        #[arg(long)]
        input: PathBuf,
        /// Query by stored case id (self excluded from results)
        #[arg(long)]
        case: Option<String>,
        /// Query by provisions: "Law:Article,..." or short codes "E,F"
        #[arg(long)]
        provisions: Option<String>,
        #[arg(short, long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value = "jaccard")]
        metric: SimilarityMetric,
        /// csv | text
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Export the co-citation graph of a corpus file
    Export {
        /// Corpus file (normalized or post-exclusion)
        #[arg(long)]
        input: PathBuf,
        /// graphml | dot | csv (comma-separated for several)
        #[arg(long)]
        format: String,
        #[command(flatten)]
        out: OutDir,
    },
    /// Corpus summary statistics
    Stats {
        /// Corpus file
        #[arg(long)]
        input: PathBuf,
    },
    /// Cronbach's alpha reliability over an item-score CSV
    Reliability {
        /// CSV with a header row and one column per item
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // keep clap's rendered help/usage text but pin the exit code
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Json(_) | Error::UnsupportedFormat(_) | Error::InvalidWindow(..) => {
            EXIT_USAGE
        }
        _ => EXIT_DATA,
    }
}

fn run(cli: Cli) -> lexnet::Result<()> {
    match cli.command {
        Command::Ingest { input, catalog, from, to, allow_unknown, out } => {
            cmd_ingest(&input, &catalog, from, to, allow_unknown, &out.out)
        }
        Command::Analyze { input, exclude, format, out } => {
            cmd_analyze(&input, &exclude, &format, &out.out)
        }
        Command::Query { input, case, provisions, k, metric, format } => {
            cmd_query(&input, case, provisions, k, metric, &format)
        }
        Command::Export { input, format, out } => cmd_export(&input, &format, &out.out),
        Command::Stats { input } => cmd_stats(&input),
        Command::Reliability { input } => cmd_reliability(&input),
    }
}

fn load_corpus(path: &Path) -> lexnet::Result<Corpus> {
    Corpus::from_json_reader(BufReader::new(File::open(path)?))
}

fn cmd_ingest(
    input: &Path,
    catalog_path: &Path,
    from: Option<chrono::NaiveDate>,
    to: Option<chrono::NaiveDate>,
    allow_unknown: bool,
    out: &Path,
) -> lexnet::Result<()> {
    let catalog = Catalog::from_json_reader(BufReader::new(File::open(catalog_path)?))?;
    let window = match (from, to) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        (a, b) => {
            let lo = a.unwrap_or(chrono::NaiveDate::MIN);
            let hi = b.unwrap_or(chrono::NaiveDate::MAX);
            Some((lo, hi))
        }
    };
    let policy = if allow_unknown {
        UnknownProvisionPolicy::ExtendCatalog
    } else {
        UnknownProvisionPolicy::Reject
    };

    let outcome = parse_corpus(BufReader::new(File::open(input)?), &catalog, policy, window)?;
    let parsed = outcome.judgments.len();
    let (corpus, dedupe_report) = dedupe(outcome.judgments, outcome.catalog, window);

    fs::create_dir_all(out)?;
    corpus.to_json_writer(File::create(out.join("corpus.json"))?)?;

    let mut report = File::create(out.join("ingest_report.txt"))?;
    writeln!(report, "records parsed    {parsed}")?;
    writeln!(
        report,
        "{} kept, {} duplicate{} removed",
        corpus.len(),
        dedupe_report.removed.len(),
        if dedupe_report.removed.len() == 1 { "" } else { "s" }
    )?;
    for (id, idx) in &dedupe_report.removed {
        writeln!(report, "  removed duplicate case_id {id} (record {idx})")?;
    }
    for (a, b) in &dedupe_report.suspected {
        writeln!(report, "  suspected duplicate (not removed): {a} ~ {b}")?;
    }
    writeln!(report, "rejected records  {}", outcome.errors.len())?;
    for e in &outcome.errors {
        writeln!(report, "  {e}")?;
    }

    println!(
        "{} kept, {} duplicate{} removed, {} rejected -> {}",
        corpus.len(),
        dedupe_report.removed.len(),
        if dedupe_report.removed.len() == 1 { "" } else { "s" },
        outcome.errors.len(),
        out.join("corpus.json").display()
    );
    if !outcome.errors.is_empty() {
        eprintln!("warning: {} record(s) rejected; see ingest_report.txt", outcome.errors.len());
    }
    Ok(())
}

fn parse_formats(spec: &str) -> lexnet::Result<BTreeSet<String>> {
    let mut set = BTreeSet::new();
    for f in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match f {
            "csv" | "text" | "graphml" | "dot" => {
                set.insert(f.to_string());
            }
            other => return Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
    if set.is_empty() {
        return Err(Error::UnsupportedFormat("(none)".to_string()));
    }
    Ok(set)
}

fn cmd_analyze(input: &Path, exclude_arg: &str, format: &str, out: &Path) -> lexnet::Result<()> {
    let formats = parse_formats(format)?;
    let corpus = load_corpus(input)?;
    if corpus.is_empty() {
        return Err(Error::MalformedRecord { index: 0, message: "nothing to analyze".into() });
    }

    // manual exclusion list runs the pipeline with exclusion off, then
    // drops the named cases explicitly
    let analysis = match exclude_arg {
        "auto" => analyze(&corpus, ExclusionMode::Auto)?,
        "off" => analyze(&corpus, ExclusionMode::Off)?,
        ids => {
            let ids: Vec<String> = ids.split(',').map(|s| s.trim().to_string()).collect();
            let smaller = lexnet::graph::exclude(&corpus, &ids)?;
            analyze(&smaller, ExclusionMode::Off)?
        }
    };

    fs::create_dir_all(out)?;
    analysis.corpus.to_json_writer(File::create(out.join("corpus_post.json"))?)?;

    let catalog = &analysis.corpus.catalog;
    if formats.contains("csv") {
        fs::write(out.join("metrics.csv"), export::metrics_to_csv(&analysis.metrics, catalog))?;
        fs::write(out.join("affiliation.csv"), export::affiliation_to_csv(&analysis.matrix))?;
        fs::write(out.join("edges.csv"), export::graph_to_csv(&analysis.graph, catalog))?;
    }
    if formats.contains("text") {
        fs::write(out.join("metrics.txt"), export::metrics_to_text(&analysis.metrics, catalog))?;
    }
    if formats.contains("graphml") {
        fs::write(out.join("graph.graphml"), export::graph_to_graphml(&analysis.graph, catalog))?;
    }
    if formats.contains("dot") {
        fs::write(out.join("graph.dot"), export::graph_to_dot(&analysis.graph, catalog))?;
    }

    // component + outlier report
    let mut comp = String::new();
    comp.push_str(&format!(
        "components (pre-exclusion): {}\n",
        analysis.pre_partition.components.len()
    ));
    for (i, c) in analysis.pre_partition.components.iter().enumerate() {
        let members: Vec<String> = c
            .iter()
            .map(|&n| {
                catalog
                    .provision(analysis.pre_graph.node(n))
                    .map(|p| p.label())
                    .unwrap_or_else(|| analysis.pre_graph.node(n).to_string())
            })
            .collect();
        comp.push_str(&format!("  #{i} ({} nodes): {}\n", c.len(), members.join(", ")));
    }
    comp.push_str(&format!(
        "components (post-exclusion): {}\n",
        analysis.partition.components.len()
    ));
    fs::write(out.join("components.txt"), &comp)?;

    let mut outliers = String::new();
    for (id, reason) in &analysis.outliers {
        outliers.push_str(&format!("{id}: {reason}\n"));
    }
    fs::write(out.join("outliers.txt"), &outliers)?;

    let mut overall = String::from("== pre-exclusion ==\n");
    overall.push_str(&export::overall_to_text(&analysis.pre_metrics));
    overall.push_str("\n== post-exclusion ==\n");
    overall.push_str(&export::overall_to_text(&analysis.metrics));
    fs::write(out.join("overall.txt"), &overall)?;

    // frequency table rides along with the metric exports
    let freq = provision_frequency(&analysis.matrix);
    let mut freq_csv = String::from("provision,count,fraction\n");
    for (key, f) in &freq {
        let label = catalog.provision(key).map(|p| p.label()).unwrap_or_else(|| key.to_string());
        freq_csv.push_str(&format!("{label},{},{:.3}\n", f.count, f.fraction));
    }
    fs::write(out.join("frequency.csv"), &freq_csv)?;

    println!(
        "analyzed {} judgments: N={} edges={} density={:.3}; {} outlier(s) excluded -> {}",
        analysis.corpus.len(),
        analysis.metrics.overall.size,
        analysis.metrics.overall.edges,
        analysis.metrics.overall.density,
        analysis.outliers.len(),
        out.display()
    );
    Ok(())
}

/// Resolve a `--provisions` argument: comma-separated entries, each a
/// short code or "law name:article" (law matched exactly, or as a
/// unique substring of a catalog law name).
fn resolve_provisions(arg: &str, catalog: &Catalog) -> lexnet::Result<BTreeSet<ProvisionKey>> {
    let mut set = BTreeSet::new();
    let mut unknown = Vec::new();
    for item in arg.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((law_part, art_part)) = item.rsplit_once(':') {
            let article: u32 = match art_part.trim().parse() {
                Ok(a) => a,
                Err(_) => {
                    unknown.push(ProvisionKey::new(item, 0));
                    continue;
                }
            };
            let law_part = law_part.trim();
            let exact = ProvisionKey::new(law_part, article);
            if catalog.contains(&exact) {
                set.insert(exact);
                continue;
            }
            let matches: Vec<&ProvisionKey> = catalog
                .entries()
                .iter()
                .map(|e| &e.provision.key)
                .filter(|k| k.article == article && k.law.contains(law_part))
                .collect();
            match matches.as_slice() {
                [one] => {
                    set.insert((*one).clone());
                }
                _ => unknown.push(exact),
            }
        } else {
            // bare short code
            match catalog
                .entries()
                .iter()
                .find(|e| e.provision.short_code.as_deref() == Some(item))
            {
                Some(e) => {
                    set.insert(e.provision.key.clone());
                }
                None => unknown.push(ProvisionKey::new(item, 0)),
            }
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownProvisions(unknown));
    }
    Ok(set)
}

fn cmd_query(
    input: &Path,
    case: Option<String>,
    provisions: Option<String>,
    k: usize,
    metric: SimilarityMetric,
    format: &str,
) -> lexnet::Result<()> {
    if !matches!(format, "csv" | "text") {
        return Err(Error::UnsupportedFormat(format.to_string()));
    }
    let corpus = load_corpus(input)?;
    let analysis = analyze(&corpus, ExclusionMode::Off)?;
    let index = build_index(&corpus, &analysis.graph, &analysis.partition);

    match (case, provisions) {
        (Some(id), None) => {
            let ranking =
                similar_cases::<Real>(&index, &Query::Case(id), k, metric)?;
            let rendered = if format == "csv" {
                export::ranking_to_csv(&ranking, &corpus)
            } else {
                export::ranking_to_text(&ranking, &corpus)
            };
            print!("{rendered}");
        }
        (None, Some(arg)) => {
            let set = resolve_provisions(&arg, &corpus.catalog)?;
            match classify_case(&index, &set)? {
                Classification::InType { overlap } => {
                    println!("in_type (overlap {:.3})", overlap);
                }
                Classification::Outlier { disjoint } => {
                    let names: Vec<String> = disjoint.iter().map(|p| p.to_string()).collect();
                    println!("outlier (disjoint from main component: {})", names.join("; "));
                }
            }
        }
        _ => {
            return Err(Error::MalformedRecord {
                index: 0,
                message: "pass exactly one of --case or --provisions".into(),
            })
        }
    }
    Ok(())
}

fn cmd_export(input: &Path, format: &str, out: &Path) -> lexnet::Result<()> {
    let formats = parse_formats(format)?;
    let corpus = load_corpus(input)?;
    let analysis = analyze(&corpus, ExclusionMode::Off)?;
    let catalog = &corpus.catalog;

    fs::create_dir_all(out)?;
    if formats.contains("graphml") {
        fs::write(out.join("graph.graphml"), export::graph_to_graphml(&analysis.graph, catalog))?;
    }
    if formats.contains("dot") {
        fs::write(out.join("graph.dot"), export::graph_to_dot(&analysis.graph, catalog))?;
    }
    if formats.contains("csv") {
        fs::write(out.join("edges.csv"), export::graph_to_csv(&analysis.graph, catalog))?;
    }
    if formats.contains("text") {
        fs::write(
            out.join("metrics.txt"),
            export::metrics_to_text(&analysis.metrics, catalog),
        )?;
    }
    println!("exported {} format(s) -> {}", formats.len(), out.display());
    Ok(())
}

fn cmd_stats(input: &Path) -> lexnet::Result<()> {
    let corpus = load_corpus(input)?;
    let stats = corpus_stats(&corpus);
    print!("{}", export::stats_to_text(&stats));
    Ok(())
}

fn cmd_reliability(input: &Path) -> lexnet::Result<()> {
    let text = fs::read_to_string(input)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    let k = header.split(',').count();
    let mut items: Vec<Vec<Real>> = vec![Vec::new(); k];
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != k {
            return Err(Error::MalformedRecord {
                index: i + 2,
                message: format!("expected {k} columns, got {}", fields.len()),
            });
        }
        for (col, f) in fields.iter().enumerate() {
            let v: Real = f.trim().parse().map_err(|_| Error::MalformedRecord {
                index: i + 2,
                message: format!("not a number: {f:?}"),
            })?;
            items[col].push(v);
        }
    }
    let report = cronbach::<Real>(&items)?;
    print!("{}", export::reliability_to_text(&report));
    Ok(())
}
