use thiserror::Error;

use crate::corpus::ProvisionKey;

#[derive(Debug, Error)]
pub enum Error {
    #[error("record {index}: {message}")]
    MalformedRecord { index: usize, message: String },

    #[error("unknown provision not in catalog: {0}")]
    UnknownProvision(ProvisionKey),

    #[error("unknown provisions not in catalog: {}", format_keys(.0))]
    UnknownProvisions(Vec<ProvisionKey>),

    #[error("unknown case id: {0}")]
    UnknownCase(String),

    #[error("unknown node: {0}")]
    UnknownNode(ProvisionKey),

    #[error("empty query")]
    EmptyQuery,

    #[error("reliability analysis needs at least 2 items, got {0}")]
    TooFewItems(usize),

    #[error("reliability analysis needs at least 2 cases, got {0}")]
    TooFewCases(usize),

    #[error("item {0} has zero variance; correlations are undefined")]
    ZeroVariance(usize),

    #[error("unsupported export format: {0}")]
    UnsupportedFormat(String),

    #[error("invalid date window: start {0} is after end {1}")]
    InvalidWindow(chrono::NaiveDate, chrono::NaiveDate),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_keys(keys: &[ProvisionKey]) -> String {
    keys.iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
