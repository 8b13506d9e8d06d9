//! Independent answer checking.
//!
//! Nothing here touches the pivoting code: certificates are checked against
//! an explicitly assembled complementarity system, and the reference solver
//! enumerates vertices with its own partial-pivoting elimination.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::LpInstance;
use crate::scalar::Scalar;

/// The full `2(k+n)` vector `(y, x, s, t)` and its residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct FullCertificate<S> {
    pub z: Vec<S>,
    /// `max |Mz - q|`.
    pub residual_eq: f64,
    /// `max_j |z_j · z_{k+n+j}|`.
    pub residual_complementarity: f64,
    pub min_component: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub primal_feasibility: f64,
    pub dual_feasibility: f64,
    pub duality_gap: f64,
    pub complementarity: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// The explicit system matrix and right-hand side:
///
/// ```text
///   M = [  0   A   I   0 ]     q = [  b ]
///       [ -Aᵀ  0   0   I ]         [ -f ]
///       [ -bᵀ  fᵀ  0   0 ]         [  0 ]
/// ```
fn system<S: Scalar>(inst: &LpInstance) -> (Vec<Vec<S>>, Vec<S>) {
    let (k, n) = (inst.k(), inst.n());
    let a = inst.a_as::<S>();
    let b = inst.b_as::<S>();
    let f = inst.f_as::<S>();
    let width = 2 * (k + n);
    let mut m = vec![vec![S::zero(); width]; k + n + 1];
    let mut q = vec![S::zero(); k + n + 1];
    for i in 0..k {
        for j in 0..n {
            m[i][k + j] = a[i][j].clone();
            m[k + j][i] = -a[i][j].clone();
        }
        m[i][k + n + i] = S::one();
        m[k + n][i] = -b[i].clone();
        q[i] = b[i].clone();
    }
    for j in 0..n {
        m[k + j][2 * k + n + j] = S::one();
        m[k + n][k + j] = f[j].clone();
        q[k + j] = -f[j].clone();
    }
    (m, q)
}

fn check_dims(inst: &LpInstance, x_len: usize, y_len: usize) -> Result<()> {
    if x_len != inst.n() || y_len != inst.k() {
        return Err(Error::Precondition(format!(
            "certificate has |x| = {x_len}, |y| = {y_len}; instance has n = {}, k = {}",
            inst.n(),
            inst.k()
        )));
    }
    Ok(())
}

pub fn assemble_full_z<S: Scalar>(
    inst: &LpInstance,
    x: &[S],
    y: &[S],
) -> Result<FullCertificate<S>> {
    check_dims(inst, x.len(), y.len())?;
    let (k, n) = (inst.k(), inst.n());
    let a = inst.a_as::<S>();
    let b = inst.b_as::<S>();
    let f = inst.f_as::<S>();

    let s: Vec<S> = (0..k)
        .map(|i| (0..n).fold(b[i].clone(), |acc, j| acc - a[i][j].clone() * x[j].clone()))
        .collect();
    let t: Vec<S> = (0..n)
        .map(|j| (0..k).fold(-f[j].clone(), |acc, i| acc + a[i][j].clone() * y[i].clone()))
        .collect();
    let z: Vec<S> = y.iter().chain(x).chain(&s).chain(&t).cloned().collect();

    let (m, q) = system::<S>(inst);
    let residual_eq = m
        .iter()
        .zip(&q)
        .map(|(row, qi)| {
            let lhs = row
                .iter()
                .zip(&z)
                .fold(S::zero(), |acc, (mij, zj)| acc + mij.clone() * zj.clone());
            (lhs - qi.clone()).abs().to_f64()
        })
        .fold(0.0, f64::max);
    let half = k + n;
    let residual_complementarity = (0..half)
        .map(|j| (z[j].clone() * z[half + j].clone()).abs().to_f64())
        .fold(0.0, f64::max);
    let min_component = z.iter().map(Scalar::to_f64).fold(f64::INFINITY, f64::min);

    Ok(FullCertificate {
        z,
        residual_eq,
        residual_complementarity,
        min_component,
    })
}

/// Checks primal and dual feasibility, the duality gap and complementary
/// slackness of `(x, y)`; all residuals are absolute.
pub fn verify_certificate<S: Scalar>(
    inst: &LpInstance,
    x: &[S],
    y: &[S],
    tolerance: f64,
) -> Result<CertificateReport> {
    let full = assemble_full_z(inst, x, y)?;
    let (k, n) = (inst.k(), inst.n());
    let s = &full.z[k + n..2 * k + n];
    let t = &full.z[2 * k + n..];

    // `+ 0.0` turns a -0.0 maximum into 0.0.
    let worst = |vals: &mut dyn Iterator<Item = f64>| vals.fold(0.0, f64::max) + 0.0;
    // Ax - b = -s and f - Aᵀy = -t.
    let primal_feasibility = worst(&mut s.iter().chain(x).map(|v| -v.to_f64()));
    let dual_feasibility = worst(&mut t.iter().chain(y).map(|v| -v.to_f64()));

    let f = inst.f_as::<S>();
    let b = inst.b_as::<S>();
    let fx = f
        .iter()
        .zip(x)
        .fold(S::zero(), |acc, (u, v)| acc + u.clone() * v.clone());
    let by = b
        .iter()
        .zip(y)
        .fold(S::zero(), |acc, (u, v)| acc + u.clone() * v.clone());
    let duality_gap = (fx - by).abs().to_f64();

    let complementarity = full.residual_complementarity;
    let pass = [
        primal_feasibility,
        dual_feasibility,
        duality_gap,
        complementarity,
    ]
    .iter()
    .all(|&r| r <= tolerance);
    Ok(CertificateReport {
        primal_feasibility,
        dual_feasibility,
        duality_gap,
        complementarity,
        tolerance,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum OracleStatus {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleOutcome {
    pub status: OracleStatus,
    /// Nonsingular vertex systems solved during the enumeration.
    pub vertices_examined: usize,
}

pub const DEFAULT_BOX_BOUND: f64 = 1e7;
/// Largest `k + n` the enumeration accepts.
pub const ENUMERATION_LIMIT: usize = 24;

/// Reference solver by exhaustive vertex enumeration.
///
/// The feasible set `{Ax ≤ b, x ≥ 0}` is intersected with the box `x ≤ B`.
/// Every choice of `n` tight rows is solved; among feasible vertices the best
/// objective wins. If that objective is only reached at vertices on the box
/// boundary the problem is reported unbounded. `box_bound` is a minimum: the
/// box is enlarged to lie well beyond every vertex of the unboxed polyhedron,
/// so a genuine vertex is never mistaken for a box corner.
pub fn brute_force_solve(inst: &LpInstance, box_bound: f64) -> Result<OracleOutcome> {
    let (k, n) = (inst.k(), inst.n());
    if k + n > ENUMERATION_LIMIT {
        return Err(Error::CombinatorialLimit {
            size: k + n,
            limit: ENUMERATION_LIMIT,
        });
    }
    if !(box_bound.is_finite() && box_bound > 0.0) {
        return Err(Error::InvalidOptions(format!(
            "box bound must be positive, got {box_bound}"
        )));
    }
    let a = inst.a_as::<f64>();
    let b = inst.b_as::<f64>();
    let f = inst.f_as::<f64>();

    // Rows of G x ≤ h: A, then -I, then the box I.
    let mut g: Vec<Vec<f64>> = a.clone();
    let mut h: Vec<f64> = b.clone();
    for j in 0..n {
        let mut row = vec![0.0; n];
        row[j] = -1.0;
        g.push(row);
        h.push(0.0);
    }
    let mut examined = 0usize;
    let largest = feasible_vertices(&g, &h, n, &mut examined)
        .iter()
        .flat_map(|x| x.iter().map(|v| v.abs()))
        .fold(0.0, f64::max);
    let box_bound = box_bound.max(BOX_MARGIN * largest);
    for j in 0..n {
        let mut row = vec![0.0; n];
        row[j] = 1.0;
        g.push(row);
        h.push(box_bound);
    }

    let vertices: Vec<(Vec<f64>, f64, bool)> = feasible_vertices(&g, &h, n, &mut examined)
        .into_iter()
        .map(|x| {
            let objective: f64 = f.iter().zip(&x).map(|(u, v)| u * v).sum();
            let on_box = x.iter().any(|&v| v >= box_bound * (1.0 - 1e-9));
            (x, objective, on_box)
        })
        .collect();

    let Some(best) = vertices.iter().map(|v| v.1).max_by(f64::total_cmp) else {
        return Ok(OracleOutcome {
            status: OracleStatus::Infeasible,
            vertices_examined: examined,
        });
    };
    let obj_tol = 1e-9 * best.abs().max(1.0);
    let optimal_inner = vertices
        .iter()
        .filter(|(_, obj, on_box)| !on_box && *obj >= best - obj_tol)
        .min_by(|p, q| lex_cmp(&p.0, &q.0));
    let status = match optimal_inner {
        Some((x, obj, _)) => OracleStatus::Optimal {
            x: x.iter()
                .map(|&v| if v.abs() < 1e-12 { 0.0 } else { v })
                .collect(),
            objective: *obj,
        },
        None => OracleStatus::Unbounded,
    };
    Ok(OracleOutcome {
        status,
        vertices_examined: examined,
    })
}

/// Factor by which the box must clear the largest unboxed vertex coordinate.
const BOX_MARGIN: f64 = 1e3;

/// Solves every choice of `n` rows of `G x ≤ h` as equalities and keeps the
/// solutions satisfying all rows; `examined` counts the nonsingular systems.
fn feasible_vertices(g: &[Vec<f64>], h: &[f64], n: usize, examined: &mut usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for subset in Combinations::new(g.len(), n) {
        let sys: Vec<Vec<f64>> = subset.iter().map(|&r| g[r].clone()).collect();
        let rhs: Vec<f64> = subset.iter().map(|&r| h[r]).collect();
        let Some(x) = solve_square(sys, rhs) else {
            continue;
        };
        *examined += 1;
        let feasible = g.iter().zip(h).all(|(row, &hi)| {
            let lhs: f64 = row.iter().zip(&x).map(|(u, v)| u * v).sum();
            let magnitude: f64 = row.iter().zip(&x).map(|(u, v)| (u * v).abs()).sum();
            lhs <= hi + 1e-9 * (1.0 + hi.abs() + magnitude)
        });
        if feasible {
            out.push(x);
        }
    }
    out
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(u, v)| u.total_cmp(v))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Gaussian elimination with partial pivoting; `None` when (near) singular.
fn solve_square(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    // Scale every row to unit max norm so one large row cannot make the
    // singularity threshold swamp the others.
    for (row, r) in m.iter_mut().zip(rhs.iter_mut()) {
        let scale = row.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if scale == 0.0 {
            return None;
        }
        row.iter_mut().for_each(|v| *v /= scale);
        *r /= scale;
    }
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&r, &s| m[r][col].abs().total_cmp(&m[s][col].abs()))?;
        if m[pivot_row][col].abs() <= 1e-11 {
            return None;
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            if factor == 0.0 {
                continue;
            }
            let (upper, lower) = m.split_at_mut(r);
            for (v, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *v -= factor * p;
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (rhs[r] - tail) / m[r][r];
    }
    Some(x)
}

/// Lexicographic `r`-subsets of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, r: usize) -> Self {
        Combinations {
            n,
            idx: (0..r).collect(),
            done: r > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let r = self.idx.len();
        match (0..r).rev().find(|&i| self.idx[i] != i + self.n - r) {
            Some(i) => {
                self.idx[i] += 1;
                for j in i + 1..r {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}
