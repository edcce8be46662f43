//! Corpus ingestion: judgment records, provision catalog, citation
//! extraction, deduplication and summary statistics.
//!
//! Records arrive as JSON Lines, one judgment per line. Each record
//! carries either an explicit citation list or raw text that is run
//! through catalog-driven pattern extraction.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::BufRead;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identity key of a statutory provision: `(law name, article number)`.
///
/// An invalidated provision and its successor are distinct keys and are
/// never merged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProvisionKey {
    pub law: String,
    pub article: u32,
}

impl ProvisionKey {
    pub fn new(law: impl Into<String>, article: u32) -> Self {
        Self { law: law.into(), article }
    }
}

impl fmt::Display for ProvisionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, Art.{}", self.law, self.article)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProvisionStatus {
    InForce,
    Invalidated,
}

/// One cited statutory article; the node unit of the network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvisionRef {
    #[serde(flatten)]
    pub key: ProvisionKey,
    pub status: ProvisionStatus,
    /// Cross-reference to the superseding article, if any. Kept as a
    /// reference only; the successor is never folded into this node.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub successor: Option<ProvisionKey>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub short_code: Option<String>,
}

impl ProvisionRef {
    /// Display label: short code when present, else "law, Art.N".
    pub fn label(&self) -> String {
        match &self.short_code {
            Some(c) => c.clone(),
            None => self.key.to_string(),
        }
    }
}

/// Catalog entry: a provision plus the textual patterns that identify a
/// citation of it in judgment prose.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    #[serde(flatten)]
    pub provision: ProvisionRef,
    #[serde(default)]
    pub patterns: Vec<String>,
}

/// Ordered provision catalog. Order is significant: matrix rows and all
/// reports follow it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    #[serde(skip)]
    by_key: HashMap<ProvisionKey, usize>,
}

impl Catalog {
    pub fn new(entries: Vec<CatalogEntry>) -> Self {
        let by_key = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.provision.key.clone(), i))
            .collect();
        Self { entries, by_key }
    }

    pub fn from_json_reader(r: impl std::io::Read) -> Result<Self> {
        #[derive(Deserialize)]
        struct RawEntry {
            law: String,
            article: u32,
            #[serde(default)]
            status: Option<ProvisionStatus>,
            #[serde(default)]
            successor: Option<ProvisionKey>,
            #[serde(default)]
            short_code: Option<String>,
            #[serde(default)]
            patterns: Vec<String>,
        }
        let raw: Vec<RawEntry> = serde_json::from_reader(r)?;
        let mut entries = Vec::with_capacity(raw.len());
        for (i, e) in raw.into_iter().enumerate() {
            if e.article == 0 {
                return Err(Error::MalformedRecord {
                    index: i,
                    message: format!("article number must be >= 1 for {}", e.law),
                });
            }
            entries.push(CatalogEntry {
                provision: ProvisionRef {
                    key: ProvisionKey::new(e.law, e.article),
                    status: e.status.unwrap_or(ProvisionStatus::InForce),
                    successor: e.successor,
                    short_code: e.short_code,
                },
                patterns: e.patterns,
            });
        }
        Ok(Self::new(entries))
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_of(&self, key: &ProvisionKey) -> Option<usize> {
        self.by_key.get(key).copied()
    }

    pub fn contains(&self, key: &ProvisionKey) -> bool {
        self.by_key.contains_key(key)
    }

    pub fn provision(&self, key: &ProvisionKey) -> Option<&ProvisionRef> {
        self.index_of(key).map(|i| &self.entries[i].provision)
    }

    fn push(&mut self, entry: CatalogEntry) {
        self.by_key.insert(entry.provision.key.clone(), self.entries.len());
        self.entries.push(entry);
    }

    /// Rebuild the key index (needed after deserialization, where the
    /// derived index field is skipped).
    pub fn reindex(&mut self) {
        self.by_key = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.provision.key.clone(), i))
            .collect();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Procedure {
    Summary,
    SmallClaims,
    Ordinary,
    Unknown,
}

impl fmt::Display for Procedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Procedure::Summary => "summary",
            Procedure::SmallClaims => "small_claims",
            Procedure::Ordinary => "ordinary",
            Procedure::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

/// One adjudicated case record; the matrix column.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Judgment {
    pub case_id: String,
    pub court: String,
    pub date: NaiveDate,
    pub procedure: Procedure,
    /// Set of cited provisions; duplicates within one judgment collapse.
    pub cited: BTreeSet<ProvisionKey>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_text: Option<String>,
}

/// Immutable judgment corpus. Constructed through [`dedupe`]; safe to
/// share across concurrent readers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Corpus {
    pub judgments: Vec<Judgment>,
    pub catalog: Catalog,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(NaiveDate, NaiveDate)>,
}

impl Corpus {
    /// Deserialize a normalized corpus, rebuilding the catalog index.
    pub fn from_json_reader(r: impl std::io::Read) -> Result<Self> {
        let mut corpus: Corpus = serde_json::from_reader(r)?;
        corpus.catalog.reindex();
        Ok(corpus)
    }

    pub fn to_json_writer(&self, w: impl std::io::Write) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.judgments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.judgments.is_empty()
    }

    pub fn judgment(&self, case_id: &str) -> Option<&Judgment> {
        self.judgments.iter().find(|j| j.case_id == case_id)
    }
}

/// How to treat a citation of a provision missing from the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnknownProvisionPolicy {
    /// Reject the whole record (default): silent catalog growth would
    /// corrupt the network size N.
    #[default]
    Reject,
    /// Auto-extend the catalog with a bare entry.
    ExtendCatalog,
}

#[derive(Debug, Clone)]
pub struct RecordError {
    /// 1-based line number in the input stream.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Result of parsing a record stream. Judgments preserve input order;
/// case-id uniqueness is NOT yet enforced (see [`dedupe`]).
#[derive(Debug)]
pub struct ParseOutcome {
    pub judgments: Vec<Judgment>,
    pub catalog: Catalog,
    pub errors: Vec<RecordError>,
}

#[derive(Deserialize)]
struct RawCitation {
    law: String,
    article: u32,
}

#[derive(Deserialize)]
struct RawRecord {
    case_id: String,
    court: String,
    date: NaiveDate,
    procedure: String,
    #[serde(default)]
    citations: Option<Vec<RawCitation>>,
    #[serde(default)]
    raw_text: Option<String>,
}

fn parse_procedure(s: &str) -> Option<Procedure> {
    match s {
        "summary" => Some(Procedure::Summary),
        "small_claims" => Some(Procedure::SmallClaims),
        "ordinary" => Some(Procedure::Ordinary),
        "unknown" => Some(Procedure::Unknown),
        _ => None,
    }
}

/// Parse a JSON Lines record stream against a provision catalog.
///
/// Malformed records are collected as [`RecordError`]s and parsing
/// continues. Records carrying `raw_text` and no citation list go
/// through [`extract_citations`]. Records citing provisions outside the
/// catalog are rejected (or the catalog auto-extends, per `policy`).
pub fn parse_corpus(
    reader: impl BufRead,
    catalog: &Catalog,
    policy: UnknownProvisionPolicy,
    window: Option<(NaiveDate, NaiveDate)>,
) -> Result<ParseOutcome> {
    if let Some((start, end)) = window {
        if start > end {
            return Err(Error::InvalidWindow(start, end));
        }
    }
    let mut catalog = catalog.clone();
    catalog.reindex();
    let mut judgments = Vec::new();
    let mut errors = Vec::new();

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                errors.push(RecordError { line: lineno, message: e.to_string() });
                continue;
            }
        };
        if raw.case_id.trim().is_empty() {
            errors.push(RecordError { line: lineno, message: "empty case_id".into() });
            continue;
        }
        let Some(procedure) = parse_procedure(&raw.procedure) else {
            errors.push(RecordError {
                line: lineno,
                message: format!("unknown procedure {:?}", raw.procedure),
            });
            continue;
        };
        if let Some((start, end)) = window {
            if raw.date < start || raw.date > end {
                errors.push(RecordError {
                    line: lineno,
                    message: format!("date {} outside corpus window", raw.date),
                });
                continue;
            }
        }

        let cited = match (&raw.citations, &raw.raw_text) {
            (Some(cits), _) => {
                let mut set = BTreeSet::new();
                let mut bad = None;
                for c in cits {
                    if c.article == 0 {
                        bad = Some(format!("article must be >= 1 in citation of {}", c.law));
                        break;
                    }
                    let key = ProvisionKey::new(c.law.clone(), c.article);
                    if !catalog.contains(&key) {
                        match policy {
                            UnknownProvisionPolicy::Reject => {
                                bad = Some(format!("unknown provision not in catalog: {key}"));
                                break;
                            }
                            UnknownProvisionPolicy::ExtendCatalog => {
                                catalog.push(CatalogEntry {
                                    provision: ProvisionRef {
                                        key: key.clone(),
                                        status: ProvisionStatus::InForce,
                                        successor: None,
                                        short_code: None,
                                    },
                                    patterns: Vec::new(),
                                });
                            }
                        }
                    }
                    set.insert(key);
                }
                if let Some(msg) = bad {
                    errors.push(RecordError { line: lineno, message: msg });
                    continue;
                }
                set
            }
            (None, Some(text)) => extract_citations(text, &catalog),
            (None, None) => {
                errors.push(RecordError {
                    line: lineno,
                    message: "record has neither citations nor raw_text".into(),
                });
                continue;
            }
        };

        judgments.push(Judgment {
            case_id: raw.case_id,
            court: raw.court,
            date: raw.date,
            procedure,
            cited,
            raw_text: raw.raw_text,
        });
    }

    Ok(ParseOutcome { judgments, catalog, errors })
}

/// Extract the set of catalog provisions whose textual pattern occurs in
/// `raw_text`.
///
/// Matching is longest-pattern-first with consumed-region masking, so a
/// pattern that is a prefix of a longer one cannot fire inside the
/// longer match. A pattern ending in a digit additionally requires a
/// non-digit boundary (so "Art.6" does not fire inside "Art.667").
pub fn extract_citations(raw_text: &str, catalog: &Catalog) -> BTreeSet<ProvisionKey> {
    let mut patterns: Vec<(&str, &ProvisionKey)> = Vec::new();
    for entry in catalog.entries() {
        for p in &entry.patterns {
            if !p.is_empty() {
                patterns.push((p.as_str(), &entry.provision.key));
            }
        }
    }
    // Longest first; ties by pattern text for determinism.
    patterns.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(b.0)));

    let bytes = raw_text.as_bytes();
    let mut consumed: Vec<(usize, usize)> = Vec::new();
    let mut found = BTreeSet::new();

    for (pat, key) in patterns {
        let plen = pat.len();
        let mut from = 0;
        while let Some(pos) = raw_text[from..].find(pat) {
            let start = from + pos;
            let end = start + plen;
            from = start + 1;
            // digit boundary: "…Art.6" must not match inside "…Art.667"
            if pat.as_bytes().last().is_some_and(|b| b.is_ascii_digit())
                && bytes.get(end).is_some_and(|b| b.is_ascii_digit())
            {
                continue;
            }
            if consumed.iter().any(|&(s, e)| start >= s && end <= e) {
                continue;
            }
            consumed.push((start, end));
            found.insert(key.clone());
        }
    }
    found
}

#[derive(Debug, Clone, Default)]
pub struct DedupeReport {
    /// `(case_id, input index)` of each removed record.
    pub removed: Vec<(String, usize)>,
    /// Pairs whose case_ids differ but whose folded ids and dates match;
    /// flagged, never removed.
    pub suspected: Vec<(String, String)>,
}

/// Collapse duplicate records: first occurrence per case_id wins.
///
/// Distinct case_ids that fold to the same normalized form on the same
/// date are reported as suspected duplicates without removal.
pub fn dedupe(
    judgments: Vec<Judgment>,
    catalog: Catalog,
    window: Option<(NaiveDate, NaiveDate)>,
) -> (Corpus, DedupeReport) {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut folded: HashMap<(String, NaiveDate), String> = HashMap::new();
    let mut kept = Vec::with_capacity(judgments.len());
    let mut report = DedupeReport::default();

    for (i, j) in judgments.into_iter().enumerate() {
        if seen.contains(&j.case_id) {
            report.removed.push((j.case_id, i));
            continue;
        }
        let fold = (fold_id(&j.case_id), j.date);
        if let Some(prev) = folded.get(&fold) {
            if *prev != j.case_id {
                report.suspected.push((prev.clone(), j.case_id.clone()));
            }
        } else {
            folded.insert(fold, j.case_id.clone());
        }
        seen.insert(j.case_id.clone());
        kept.push(j);
    }

    (Corpus { judgments: kept, catalog, window }, report)
}

/// Whitespace/punctuation-folded, lowercased identifier.
fn fold_id(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(|c| c.to_lowercase())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YearStats {
    pub count: usize,
    /// (#summary + #small_claims) / year total.
    pub summary_fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusStats {
    pub total: usize,
    pub by_procedure: BTreeMap<Procedure, usize>,
    pub by_year: BTreeMap<i32, YearStats>,
}

pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let mut by_procedure = BTreeMap::new();
    let mut year_total: BTreeMap<i32, usize> = BTreeMap::new();
    let mut year_summary: BTreeMap<i32, usize> = BTreeMap::new();

    for j in &corpus.judgments {
        *by_procedure.entry(j.procedure).or_insert(0) += 1;
        let y = j.date.year();
        *year_total.entry(y).or_insert(0) += 1;
        if matches!(j.procedure, Procedure::Summary | Procedure::SmallClaims) {
            *year_summary.entry(y).or_insert(0) += 1;
        }
    }

    let by_year = year_total
        .into_iter()
        .map(|(y, count)| {
            let s = year_summary.get(&y).copied().unwrap_or(0);
            (y, YearStats { count, summary_fraction: s as f64 / count as f64 })
        })
        .collect();

    CorpusStats { total: corpus.judgments.len(), by_procedure, by_year }
}
