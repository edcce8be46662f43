//! Two-mode "provisions × judgments" incidence matrix.

use std::collections::BTreeMap;

use crate::corpus::{Corpus, ProvisionKey};

/// Binary affiliation matrix. Row order follows the catalog, column
/// order follows the corpus; both are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffiliationMatrix {
    pub rows: Vec<ProvisionKey>,
    pub cols: Vec<String>,
    /// cells[i][j] is true iff provision i is cited in judgment j.
    cells: Vec<Vec<bool>>,
}

impl AffiliationMatrix {
    pub fn cell(&self, row: usize, col: usize) -> bool {
        self.cells[row][col]
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.cells[i]
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    /// Provision keys cited in column `j`.
    pub fn column_citations(&self, j: usize) -> Vec<&ProvisionKey> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(i, _)| self.cells[*i][j])
            .map(|(_, k)| k)
            .collect()
    }

    /// Total number of 1-cells.
    pub fn total_incidences(&self) -> usize {
        self.cells.iter().map(|r| r.iter().filter(|&&c| c).count()).sum()
    }
}

/// Build the incidence matrix X from a corpus. Pure: the same corpus
/// always yields the identical matrix.
pub fn build_affiliation(corpus: &Corpus) -> AffiliationMatrix {
    let rows: Vec<ProvisionKey> = corpus
        .catalog
        .entries()
        .iter()
        .map(|e| e.provision.key.clone())
        .collect();
    let cols: Vec<String> = corpus.judgments.iter().map(|j| j.case_id.clone()).collect();
    let cells = rows
        .iter()
        .map(|key| corpus.judgments.iter().map(|j| j.cited.contains(key)).collect())
        .collect();
    AffiliationMatrix { rows, cols, cells }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequency {
    /// Row sum: number of judgments citing the provision.
    pub count: usize,
    /// count / number of columns.
    pub fraction: f64,
}

/// Per-provision citation frequency (row sums), in catalog order.
pub fn provision_frequency(matrix: &AffiliationMatrix) -> BTreeMap<ProvisionKey, Frequency> {
    let cols = matrix.n_cols();
    matrix
        .rows
        .iter()
        .enumerate()
        .map(|(i, key)| {
            let count = matrix.row(i).iter().filter(|&&c| c).count();
            let fraction = if cols == 0 { 0.0 } else { count as f64 / cols as f64 };
            (key.clone(), Frequency { count, fraction })
        })
        .collect()
}
