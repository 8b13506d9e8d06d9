//! Column Selection Record: which columns each iteration's minor and major
//! pivots selected. The parity of a column's appearance count decides which
//! last-column entries form the extracted solution.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A 1-based column label in `1..=k+n`, as printed in iteration tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Col(pub usize);

impl Col {
    /// Zero-based position inside a matrix row.
    pub fn index(self) -> usize {
        self.0 - 1
    }

    pub fn from_index(i: usize) -> Col {
        Col(i + 1)
    }
}

impl fmt::Display for Col {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsrRow {
    pub iteration: usize,
    pub z: Col,
    /// `None` marks the terminal row of a run that ended without a solution.
    pub p: Option<Col>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Csr {
    rows: Vec<CsrRow>,
}

impl Csr {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a record from `(z, p)` pairs; iterations are numbered from 1.
    pub fn from_pairs(pairs: &[(usize, Option<usize>)]) -> Self {
        let mut csr = Csr::new();
        for &(z, p) in pairs {
            csr.push_z(Col(z));
            if let Some(p) = p {
                csr.set_p(Col(p));
            }
        }
        csr
    }

    pub fn rows(&self) -> &[CsrRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Opens the next iteration's row with its minor-step column.
    pub fn push_z(&mut self, z: Col) {
        let iteration = self.rows.len() + 1;
        self.rows.push(CsrRow {
            iteration,
            z,
            p: None,
        });
    }

    /// Records the major-step column in the current row.
    ///
    /// Panics if no row is open or the current row already has a P entry.
    pub fn set_p(&mut self, p: Col) {
        let row = self.rows.last_mut().expect("set_p on an empty record");
        assert!(
            row.p.is_none(),
            "row {} already has a P entry",
            row.iteration
        );
        row.p = Some(p);
    }

    pub fn last_z(&self) -> Option<Col> {
        self.rows.last().map(|r| r.z)
    }

    pub fn in_p_column(&self, j: Col) -> bool {
        self.rows.iter().any(|r| r.p == Some(j))
    }

    pub fn in_z_column(&self, j: Col) -> bool {
        self.rows.iter().any(|r| r.z == j)
    }

    /// Appearances of `j` across both columns.
    pub fn count(&self, j: Col) -> usize {
        self.rows
            .iter()
            .map(|r| usize::from(r.z == j) + usize::from(r.p == Some(j)))
            .sum()
    }

    /// `(z, p)` pairs with 1-based labels, convenient for comparisons.
    pub fn pairs(&self) -> Vec<(usize, Option<usize>)> {
        self.rows
            .iter()
            .map(|r| (r.z.0, r.p.map(|c| c.0)))
            .collect()
    }
}
