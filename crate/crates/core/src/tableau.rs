//! The compact (k+n+1)-square tableau and the tests applied to it between pivots.
//!
//! Layout of the initial matrix, with `m = k + n + 1`:
//!
//! ```text
//!   [  0    A    b ]
//!   [ -Aᵀ   0   -f ]
//!   [ -bᵀ   fᵀ   0 ]
//! ```
//!
//! Matrices produced by a minor pivot are Z-kind; those produced by a major
//! pivot (and the initial matrix) are P-kind.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::LpInstance;
use crate::scalar::{Scalar, Sign, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixKind {
    PKind,
    ZKind,
}

impl MatrixKind {
    pub fn flipped(self) -> MatrixKind {
        match self {
            MatrixKind::PKind => MatrixKind::ZKind,
            MatrixKind::ZKind => MatrixKind::PKind,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompactMatrix<S> {
    order: usize,
    entries: Vec<S>,
    kind: MatrixKind,
    iteration: usize,
    last_row_negations: usize,
}

impl<S: Scalar> CompactMatrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>, kind: MatrixKind) -> Result<Self> {
        let order = rows.len();
        if order < 2 {
            return Err(Error::Precondition(format!("matrix order {order} < 2")));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != order) {
            return Err(Error::Precondition(format!(
                "row {} has {} entries, expected {order}",
                r + 1,
                rows[r].len()
            )));
        }
        Ok(CompactMatrix {
            order,
            entries: rows.into_iter().flatten().collect(),
            kind,
            iteration: 0,
            last_row_negations: 0,
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], kind: MatrixKind) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| S::from_i64(v)).collect())
                .collect(),
            kind,
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn last_row_negations(&self) -> usize {
        self.last_row_negations
    }

    pub fn with_kind(mut self, kind: MatrixKind, iteration: usize) -> Self {
        self.kind = kind;
        self.iteration = iteration;
        self
    }

    /// Zero-based element access.
    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.entries[row * self.order + col]
    }

    pub fn row(&self, row: usize) -> &[S] {
        &self.entries[row * self.order..(row + 1) * self.order]
    }

    pub(crate) fn row_mut(&mut self, row: usize) -> &mut [S] {
        &mut self.entries[row * self.order..(row + 1) * self.order]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, v: S) {
        self.entries[row * self.order + col] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.entries.chunks(self.order)
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        self.rows().map(<[S]>::to_vec).collect()
    }

    pub fn corner(&self) -> &S {
        self.get(self.order - 1, self.order - 1)
    }

    /// Entries 1..k+n of the last column.
    pub fn last_column(&self) -> Vec<S> {
        (0..self.order - 1)
            .map(|i| self.get(i, self.order - 1).clone())
            .collect()
    }

    /// Entries 1..k+n of the last row.
    pub fn last_row(&self) -> &[S] {
        &self.row(self.order - 1)[..self.order - 1]
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..self.order).all(|i| {
            (i..self.order).all(|j| (self.get(i, j).clone() + self.get(j, i).clone()).is_zero())
        })
    }

    /// Converts every entry through `S -> f64`, keeping the bookkeeping fields.
    pub fn to_f64(&self) -> CompactMatrix<f64> {
        CompactMatrix {
            order: self.order,
            entries: self.entries.iter().map(Scalar::to_f64).collect(),
            kind: self.kind,
            iteration: self.iteration,
            last_row_negations: self.last_row_negations,
        }
    }

    /// Largest elementwise difference, after conversion to `f64`.
    pub fn max_abs_diff<T: Scalar>(&self, other: &CompactMatrix<T>) -> f64 {
        assert_eq!(self.order, other.order, "order mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a.to_f64() - b.to_f64()).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn negate_last_row(&mut self) {
        let last = self.order - 1;
        for v in self.row_mut(last) {
            *v = -v.clone();
        }
        self.last_row_negations += 1;
    }
}

impl<S: Scalar> fmt::Display for CompactMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(Scalar::render_fixed).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Lays out the initial P-kind matrix for `inst`.
pub fn build_p0<S: Scalar>(inst: &LpInstance) -> CompactMatrix<S> {
    let (k, n) = (inst.k(), inst.n());
    let m = k + n + 1;
    let a = inst.a_as::<S>();
    let b = inst.b_as::<S>();
    let f = inst.f_as::<S>();
    let mut rows = vec![vec![S::zero(); m]; m];
    for i in 0..k {
        for j in 0..n {
            rows[i][k + j] = a[i][j].clone();
            rows[k + j][i] = -a[i][j].clone();
        }
        rows[i][m - 1] = b[i].clone();
        rows[m - 1][i] = -b[i].clone();
    }
    for j in 0..n {
        rows[k + j][m - 1] = -f[j].clone();
        rows[m - 1][k + j] = f[j].clone();
    }
    CompactMatrix::from_rows(rows, MatrixKind::PKind).expect("order k+n+1 >= 3")
}

/// True when the initial matrix's last column is already nonnegative, so
/// `x = 0, y = 0` is optimal.
pub fn trivial_solution_check<S: Scalar>(p0: &CompactMatrix<S>) -> bool {
    // Compare, rather than use `Signed::is_negative`, which is true for -0.0.
    p0.last_column().iter().all(|v| *v >= S::zero())
}

/// Solution test: last column nonnegative and corner zero.
pub fn check_solution_condition<S: Scalar>(p: &CompactMatrix<S>, tol: Tolerance) -> bool {
    tol.is_zero(p.corner()) && p.last_column().iter().all(|v| !tol.is_negative(v))
}

/// No-solution test on a Z-kind matrix: last row nonpositive with a positive
/// corner. A negative corner is handled by implicitly negating the last row.
pub fn check_no_solution_condition<S: Scalar>(z: &CompactMatrix<S>, tol: Tolerance) -> bool {
    let orient = match tol.sign(z.corner()) {
        Sign::Zero => return false,
        s => s,
    };
    z.last_row().iter().all(|v| {
        let s = tol.sign(v);
        let s = if orient == Sign::Negative {
            s.flip()
        } else {
            s
        };
        s != Sign::Positive
    })
}

/// Whether every column with nonzero last-row and last-column entries has them
/// of opposite sign. Returns `(satisfied, violated)` counts.
pub fn sign_opposition_counts<S: Scalar>(p: &CompactMatrix<S>, tol: Tolerance) -> (usize, usize) {
    let m = p.order();
    let mut counts = (0, 0);
    for j in 0..m - 1 {
        let row_sign = tol.sign(p.get(m - 1, j));
        let col_sign = tol.sign(p.get(j, m - 1));
        if row_sign == Sign::Zero || col_sign == Sign::Zero {
            continue;
        }
        if row_sign == col_sign.flip() {
            counts.0 += 1;
        } else {
            counts.1 += 1;
        }
    }
    counts
}

pub fn sign_opposition_holds<S: Scalar>(p: &CompactMatrix<S>, tol: Tolerance) -> bool {
    sign_opposition_counts(p, tol).1 == 0
}

/// Positive `λ` with `last_row[j] ≈ -λ · last_col[j]` for all `j`, if one exists.
///
/// Diagnostic only; uses a relative tolerance of 1e-6 on the ratios.
pub fn proportionality_factor<S: Scalar>(p: &CompactMatrix<S>, tol: Tolerance) -> Option<f64> {
    let m = p.order();
    let mut lambda: Option<f64> = None;
    for j in 0..m - 1 {
        let r = p.get(m - 1, j);
        let c = p.get(j, m - 1);
        match (tol.is_zero(r), tol.is_zero(c)) {
            (true, true) => continue,
            (false, false) => {}
            _ => return None,
        }
        let ratio = -r.to_f64() / c.to_f64();
        // Also rejects NaN.
        if ratio.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return None;
        }
        match lambda {
            None => lambda = Some(ratio),
            Some(l) if (l - ratio).abs() <= 1e-6 * l.max(ratio) => {}
            Some(_) => return None,
        }
    }
    lambda
}

/// Enforces the last-row sign conventions.
///
/// Z-kind: the last row is negated when the corner is negative, so the corner
/// ends positive. P-kind: the last row is negated when every column with both
/// a nonzero last-row and last-column entry has them of equal sign.
pub fn normalize_last_row<S: Scalar>(
    mut mat: CompactMatrix<S>,
    tol: Tolerance,
) -> Result<CompactMatrix<S>> {
    match mat.kind() {
        MatrixKind::ZKind => match tol.sign(mat.corner()) {
            Sign::Zero => Err(Error::NumericalBreakdown(format!(
                "Z-kind corner {} is zero; cannot make it positive",
                mat.corner()
            ))),
            Sign::Negative => {
                mat.negate_last_row();
                Ok(mat)
            }
            Sign::Positive => Ok(mat),
        },
        MatrixKind::PKind => {
            if !tol.is_zero(mat.corner()) {
                return Err(Error::NumericalBreakdown(format!(
                    "P-kind corner drifted to {}",
                    mat.corner()
                )));
            }
            match sign_opposition_counts(&mat, tol) {
                (0, v) if v > 0 => {
                    mat.negate_last_row();
                    Ok(mat)
                }
                (_, 0) => Ok(mat),
                (s, v) => Err(Error::NumericalBreakdown(format!(
                    "last row/column sign opposition is mixed ({s} columns satisfy, {v} violate)"
                ))),
            }
        }
    }
}
