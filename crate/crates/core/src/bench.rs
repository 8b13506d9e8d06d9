//! Iteration-count comparison of the minor ordering rules, with every
//! answer cross-checked against the oracle.

use std::fmt::{self, Write as _};

use crate::error::Result;
use crate::instances::{all_canned, batch_dimensions, klee_minty, random_instance};
use crate::oracle::{brute_force_solve, verify_certificate, OracleStatus, DEFAULT_BOX_BOUND};
use crate::problem::LpInstance;
use crate::scalar::Scalar;
use crate::solver::{solve, MinorOrder, SolveOptions, SolveReport, Status};

/// Residual tolerance for certificates and objective agreement, relative to
/// the magnitude of the answer (and never below this absolute value).
pub const AGREEMENT_TOL: f64 = 1e-6;

/// Verdict of checking one solver answer against the oracle.
#[derive(Clone, Debug, PartialEq)]
pub enum Agreement {
    Ok,
    /// A terminating answer the oracle contradicts.
    Mismatch(String),
    /// The solver did not terminate with an answer (cap or breakdown).
    Finding(String),
}

impl Agreement {
    pub fn is_ok(&self) -> bool {
        matches!(self, Agreement::Ok)
    }
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Agreement::Ok => f.write_str("ok"),
            Agreement::Mismatch(m) => write!(f, "MISMATCH ({m})"),
            Agreement::Finding(m) => write!(f, "finding ({m})"),
        }
    }
}

/// Certifies an optimum and compares it with vertex enumeration; checks
/// that a no-solution answer matches an infeasible or unbounded problem.
pub fn cross_check<S: Scalar>(inst: &LpInstance, report: &SolveReport<S>) -> Result<Agreement> {
    let oracle = brute_force_solve(inst, DEFAULT_BOX_BOUND)?;
    let verdict = match report.status {
        Status::Optimum | Status::TrivialOptimum => {
            let objective = report.primal_objective.as_ref().map(Scalar::to_f64);
            let magnitude = report
                .x
                .iter()
                .chain(&report.y)
                .map(|v| v.to_f64().abs())
                .chain(objective.map(f64::abs))
                .fold(1.0, f64::max);
            let tol = AGREEMENT_TOL * magnitude;
            let cert = verify_certificate(inst, &report.x, &report.y, tol)?;
            match (&oracle.status, objective) {
                _ if !cert.pass => Agreement::Mismatch(format!(
                    "certificate fails: primal {:.3e}, dual {:.3e}, gap {:.3e}, complementarity {:.3e}",
                    cert.primal_feasibility, cert.dual_feasibility, cert.duality_gap, cert.complementarity
                )),
                (OracleStatus::Optimal { objective: o, .. }, Some(v)) if (o - v).abs() <= tol => {
                    Agreement::Ok
                }
                (other, v) => Agreement::Mismatch(format!("solver objective {v:?}, oracle {other:?}")),
            }
        }
        Status::NoSolution => match oracle.status {
            OracleStatus::Infeasible | OracleStatus::Unbounded => Agreement::Ok,
            OracleStatus::Optimal { objective, .. } => Agreement::Mismatch(format!(
                "solver found no solution, oracle optimum {objective}"
            )),
        },
        Status::IterationLimitExceeded | Status::NumericalBreakdown => Agreement::Finding(format!(
            "{}{}",
            report.status,
            report
                .diagnostic
                .as_deref()
                .map(|d| format!(": {d}"))
                .unwrap_or_default()
        )),
    };
    Ok(verdict)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub label: String,
    pub value_iterations: usize,
    pub index_iterations: usize,
    pub value_status: Status,
    pub index_status: Status,
    pub agreement: Agreement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub count: u64,
    pub seed_base: u64,
    pub max_dim: usize,
    pub klee_minty_max: usize,
    pub lo: i64,
    pub hi: i64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            count: 100,
            seed_base: 0,
            max_dim: 5,
            klee_minty_max: 8,
            lo: -9,
            hi: 9,
        }
    }
}

fn bench_row<S: Scalar>(label: String, inst: &LpInstance, base: &SolveOptions) -> Result<BenchRow> {
    let by_value = solve::<S>(inst, &base.clone().with_rule(MinorOrder::AscendingValue))?;
    let by_index = solve::<S>(inst, &base.clone().with_rule(MinorOrder::AscendingIndex))?;
    let agreement = match (cross_check(inst, &by_value)?, cross_check(inst, &by_index)?) {
        (Agreement::Ok, other) => other,
        (first, _) => first,
    };
    Ok(BenchRow {
        label,
        value_iterations: by_value.iterations,
        index_iterations: by_index.iterations,
        value_status: by_value.status,
        index_status: by_index.status,
        agreement,
    })
}

/// Rows for the worked examples, the Klee-Minty sweep and a random batch.
pub fn run_bench<S: Scalar>(config: &BenchConfig, base: &SolveOptions) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for ex in all_canned() {
        rows.push(bench_row::<S>(ex.name.to_string(), &ex.instance, base)?);
    }
    for n in 1..=config.klee_minty_max {
        rows.push(bench_row::<S>(
            format!("klee-minty n={n}"),
            &klee_minty(n)?,
            base,
        )?);
    }
    for i in 0..config.count {
        let seed = config.seed_base + i;
        let (k, n) = batch_dimensions(seed, config.max_dim);
        let inst = random_instance(k, n, seed, config.lo, config.hi)?;
        rows.push(bench_row::<S>(
            format!("random seed={seed} k={k} n={n}"),
            &inst,
            base,
        )?);
    }
    Ok(rows)
}

pub fn render_bench(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let mut line = format!(
            "{}: value={} index={}",
            r.label, r.value_iterations, r.index_iterations
        );
        if r.value_status == r.index_status {
            let _ = write!(line, " status={}", r.value_status);
        } else {
            let _ = write!(line, " status={}/{}", r.value_status, r.index_status);
        }
        let _ = writeln!(out, "{line} agreement={}", r.agreement);
    }
    if !rows.is_empty() {
        let count = rows.len() as f64;
        let mean = |f: fn(&BenchRow) -> usize| rows.iter().map(f).sum::<usize>() as f64 / count;
        let _ = writeln!(
            out,
            "mean: value={:.3} index={:.3} agreement={}/{} ok",
            mean(|r| r.value_iterations),
            mean(|r| r.index_iterations),
            rows.iter().filter(|r| r.agreement.is_ok()).count(),
            rows.len()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::canned_example;

    #[test]
    fn canned_rows_match_documented_counts() {
        let config = BenchConfig {
            count: 3,
            klee_minty_max: 3,
            ..BenchConfig::default()
        };
        let rows = run_bench::<f64>(&config, &SolveOptions::for_scalar::<f64>()).unwrap();
        assert_eq!(rows.len(), 5 + 3 + 3);
        let text = render_bench(&rows);
        assert!(text.contains("example5: value=5 index=3"), "{text}");
        assert!(text.contains("klee-minty n=3: value=1 index=2"), "{text}");
        assert!(text.lines().last().unwrap().starts_with("mean:"));
    }

    #[test]
    fn cross_check_flags_wrong_answers() {
        let inst = canned_example(1).unwrap().instance;
        let mut report = solve::<f64>(&inst, &SolveOptions::for_scalar::<f64>()).unwrap();
        assert_eq!(cross_check(&inst, &report).unwrap(), Agreement::Ok);
        report.status = Status::NoSolution;
        assert!(matches!(
            cross_check(&inst, &report).unwrap(),
            Agreement::Mismatch(_)
        ));
        report.status = Status::IterationLimitExceeded;
        assert!(matches!(
            cross_check(&inst, &report).unwrap(),
            Agreement::Finding(_)
        ));
    }
}
