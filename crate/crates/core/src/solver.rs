//! The iteration engine.
//!
//! Each iteration applies a minor pivot (P-kind → Z-kind) followed by a major
//! pivot (Z-kind → P-kind). The minor step picks among columns whose last-row
//! entry is positive, in ascending order; the major step does the same in
//! descending order. Columns already recorded under the P column of the
//! [`Csr`] are skipped; when every candidate is such a repeat, the step probes
//! each candidate separately for an immediate solution.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::csr::{Col, Csr};
use crate::error::{Error, Result};
use crate::pivot::gj_plus_pivot;
use crate::problem::LpInstance;
use crate::scalar::{Scalar, ScalarKind, Tolerance};
use crate::tableau::{
    build_p0, check_no_solution_condition, check_solution_condition, normalize_last_row,
    proportionality_factor, trivial_solution_check, CompactMatrix, MatrixKind,
};

/// How the minor step orders its candidate columns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MinorOrder {
    /// Ascending last-row value, ties to the lower column.
    #[default]
    AscendingValue,
    /// Ascending column index, scanned cyclically from just after the
    /// previous iteration's minor column (plain ascending on iteration 1).
    AscendingIndex,
    /// Plain ascending column index on every iteration.
    LowestIndex,
}

impl fmt::Display for MinorOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MinorOrder::AscendingValue => "value",
            MinorOrder::AscendingIndex => "index",
            MinorOrder::LowestIndex => "lowest-index",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingRule {
    pub minor_order: MinorOrder,
    /// Prefer minor candidates that are not yet in the Z column.
    pub avoid_z_repeats: bool,
}

impl Default for OrderingRule {
    fn default() -> Self {
        OrderingRule {
            minor_order: MinorOrder::AscendingValue,
            avoid_z_repeats: true,
        }
    }
}

impl OrderingRule {
    pub fn with_order(minor_order: MinorOrder) -> Self {
        OrderingRule {
            minor_order,
            ..Self::default()
        }
    }
}

/// What a step does once every candidate is a P-column repeat and no probe
/// pivot yields a solution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExhaustionPolicy {
    /// Pivot on the first candidate anyway and keep iterating. No-solution
    /// answers then come only from the last-row test on a Z-kind matrix.
    #[default]
    Continue,
    /// Conclude that no solution exists.
    Conclude,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub rule: OrderingRule,
    pub tolerance: Tolerance,
    /// The iteration cap is `ceil(factor * (k + n))`.
    pub iteration_cap_factor: f64,
    pub trace_enabled: bool,
    pub exhaustion: ExhaustionPolicy,
}

impl SolveOptions {
    pub const DEFAULT_CAP_FACTOR: f64 = 2.0;

    /// Defaults for scalar kind `kind`; the tolerance is zero for rationals.
    pub fn for_kind(kind: ScalarKind) -> Self {
        SolveOptions {
            rule: OrderingRule::default(),
            tolerance: Tolerance::default_for(kind),
            iteration_cap_factor: Self::DEFAULT_CAP_FACTOR,
            trace_enabled: false,
            exhaustion: ExhaustionPolicy::default(),
        }
    }

    pub fn for_scalar<S: Scalar>() -> Self {
        Self::for_kind(S::KIND)
    }

    pub fn with_rule(mut self, order: MinorOrder) -> Self {
        self.rule.minor_order = order;
        self
    }

    pub fn with_trace(mut self) -> Self {
        self.trace_enabled = true;
        self
    }

    pub fn with_exhaustion(mut self, policy: ExhaustionPolicy) -> Self {
        self.exhaustion = policy;
        self
    }

    pub fn iteration_cap(&self, k: usize, n: usize) -> usize {
        let cap = (self.iteration_cap_factor * (k + n) as f64).ceil() as usize;
        cap.max(k + n)
    }

    pub fn validate(&self, kind: ScalarKind) -> Result<()> {
        self.tolerance.validate_for(kind)?;
        if !(self.iteration_cap_factor.is_finite() && self.iteration_cap_factor >= 1.0) {
            return Err(Error::InvalidOptions(format!(
                "iteration cap factor must be at least 1, got {}",
                self.iteration_cap_factor
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CandidateKind {
    MinorL,
    MajorLhat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate<S> {
    pub column: Col,
    pub value: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSet<S> {
    pub kind: CandidateKind,
    pub members: Vec<Candidate<S>>,
}

impl<S: Scalar> CandidateSet<S> {
    pub fn columns(&self) -> Vec<Col> {
        self.members.iter().map(|c| c.column).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Columns with a positive last-row entry, ordered for the minor step.
pub fn minor_candidates<S: Scalar>(
    p: &CompactMatrix<S>,
    csr: &Csr,
    rule: &OrderingRule,
    tol: Tolerance,
) -> CandidateSet<S> {
    let mut members = positive_last_row(p, tol);
    match rule.minor_order {
        MinorOrder::AscendingValue => members.sort_by(|a, b| {
            a.value
                .partial_cmp(&b.value)
                .expect("finite entries")
                .then(a.column.cmp(&b.column))
        }),
        MinorOrder::LowestIndex => {}
        MinorOrder::AscendingIndex => {
            if let Some(anchor) = csr.last_z() {
                let width = p.order() - 1;
                members.sort_by_key(|c| (c.column.0 + width - anchor.0 - 1) % width);
            }
        }
    }
    CandidateSet {
        kind: CandidateKind::MinorL,
        members,
    }
}

/// Columns with a positive last-row entry, in descending order of value.
pub fn major_candidates<S: Scalar>(z: &CompactMatrix<S>, tol: Tolerance) -> CandidateSet<S> {
    let mut members = positive_last_row(z, tol);
    members.sort_by(|a, b| {
        b.value
            .partial_cmp(&a.value)
            .expect("finite entries")
            .then(a.column.cmp(&b.column))
    });
    CandidateSet {
        kind: CandidateKind::MajorLhat,
        members,
    }
}

fn positive_last_row<S: Scalar>(m: &CompactMatrix<S>, tol: Tolerance) -> Vec<Candidate<S>> {
    m.last_row()
        .iter()
        .enumerate()
        .filter(|(_, v)| tol.is_positive(*v))
        .map(|(j, v)| Candidate {
            column: Col::from_index(j),
            value: v.clone(),
        })
        .collect()
}

/// Which rule of a step produced its outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// First candidate not yet in the P column.
    A,
    /// Separate probe pivots over P-column repeats.
    B,
    /// Candidates exhausted without a solution.
    C,
    /// Candidates exhausted; pivoted on the first one and kept going.
    Continue,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::A => "a",
            Branch::B => "b",
            Branch::C => "c",
            Branch::Continue => "b+",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsrMark {
    Z(Col),
    P(Col),
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepTag<S> {
    /// Unnormalized result of the chosen pivot.
    Advanced {
        matrix: CompactMatrix<S>,
        chosen: Col,
    },
    /// A probe pivot produced a solution matrix.
    SolvedInBranchB {
        matrix: CompactMatrix<S>,
        csr_additions: Vec<CsrMark>,
        /// The Z-kind matrix of a minor probe that needed a follow-up major pivot.
        intermediate: Option<CompactMatrix<S>>,
    },
    NoSolution,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome<S> {
    pub tag: StepTag<S>,
    pub branch: Branch,
    pub candidates_considered: CandidateSet<S>,
}

fn preferred(cols: &[Col], csr: &Csr, rule: &OrderingRule) -> Col {
    let fresh = rule
        .avoid_z_repeats
        .then(|| cols.iter().copied().find(|&c| !csr.in_z_column(c)))
        .flatten();
    fresh.unwrap_or(cols[0])
}

/// Minor step from a normalized P-kind matrix.
pub fn minor_step<S: Scalar>(
    p_prev: &CompactMatrix<S>,
    csr: &Csr,
    opts: &SolveOptions,
) -> Result<StepOutcome<S>> {
    let tol = opts.tolerance;
    let candidates = minor_candidates(p_prev, csr, &opts.rule, tol);
    if candidates.is_empty() {
        return Err(Error::NumericalBreakdown(
            "no positive last-row entry in an unsolved P-kind matrix".into(),
        ));
    }
    let iteration = p_prev.iteration() + 1;
    let outcome = |tag, branch, candidates| {
        Ok(StepOutcome {
            tag,
            branch,
            candidates_considered: candidates,
        })
    };

    let fresh: Vec<Col> = candidates
        .columns()
        .into_iter()
        .filter(|&c| !csr.in_p_column(c))
        .collect();
    if !fresh.is_empty() {
        let chosen = preferred(&fresh, csr, &opts.rule);
        let matrix = gj_plus_pivot(p_prev, chosen, tol)?
            .matrix
            .with_kind(MatrixKind::ZKind, iteration);
        return outcome(StepTag::Advanced { matrix, chosen }, Branch::A, candidates);
    }

    for cand in candidates.columns() {
        // A probe that breaks down numerically just rejects its candidate.
        let Ok(z) = probe_pivot(p_prev, cand, MatrixKind::ZKind, iteration, tol) else {
            continue;
        };
        if check_solution_condition(&z, tol) {
            return outcome(
                StepTag::SolvedInBranchB {
                    matrix: z,
                    csr_additions: vec![CsrMark::Z(cand)],
                    intermediate: None,
                },
                Branch::B,
                candidates,
            );
        }
        let Some(follow) = major_candidates(&z, tol)
            .columns()
            .into_iter()
            .find(|&c| !csr.in_p_column(c))
        else {
            continue;
        };
        let Ok(p) = gj_plus_pivot(&z, follow, tol) else {
            continue;
        };
        let p = p.matrix.with_kind(MatrixKind::PKind, iteration);
        if check_solution_condition(&p, tol) {
            return outcome(
                StepTag::SolvedInBranchB {
                    matrix: p,
                    csr_additions: vec![CsrMark::Z(cand), CsrMark::P(follow)],
                    intermediate: Some(z),
                },
                Branch::B,
                candidates,
            );
        }
    }

    match opts.exhaustion {
        ExhaustionPolicy::Conclude => outcome(StepTag::NoSolution, Branch::C, candidates),
        ExhaustionPolicy::Continue => {
            let chosen = preferred(&candidates.columns(), csr, &opts.rule);
            let matrix = gj_plus_pivot(p_prev, chosen, tol)?
                .matrix
                .with_kind(MatrixKind::ZKind, iteration);
            outcome(
                StepTag::Advanced { matrix, chosen },
                Branch::Continue,
                candidates,
            )
        }
    }
}

/// Pivot, relabel and normalize; the returned matrix is normalized.
fn probe_pivot<S: Scalar>(
    m: &CompactMatrix<S>,
    col: Col,
    kind: MatrixKind,
    iteration: usize,
    tol: Tolerance,
) -> Result<CompactMatrix<S>> {
    let out = gj_plus_pivot(m, col, tol)?
        .matrix
        .with_kind(kind, iteration);
    normalize_last_row(out, tol)
}

/// Major step from a normalized Z-kind matrix.
pub fn major_step<S: Scalar>(
    z: &CompactMatrix<S>,
    csr: &Csr,
    opts: &SolveOptions,
) -> Result<StepOutcome<S>> {
    let tol = opts.tolerance;
    let candidates = major_candidates(z, tol);
    if candidates.is_empty() {
        return Err(Error::NumericalBreakdown(
            "no positive last-row entry in a Z-kind matrix that failed the no-solution test".into(),
        ));
    }
    let iteration = z.iteration();
    let outcome = |tag, branch, candidates| {
        Ok(StepOutcome {
            tag,
            branch,
            candidates_considered: candidates,
        })
    };

    if let Some(chosen) = candidates
        .columns()
        .into_iter()
        .find(|&c| !csr.in_p_column(c))
    {
        let matrix = gj_plus_pivot(z, chosen, tol)?
            .matrix
            .with_kind(MatrixKind::PKind, iteration);
        return outcome(StepTag::Advanced { matrix, chosen }, Branch::A, candidates);
    }

    for cand in candidates.columns() {
        let Ok(out) = gj_plus_pivot(z, cand, tol) else {
            continue;
        };
        let p = out.matrix.with_kind(MatrixKind::PKind, iteration);
        if check_solution_condition(&p, tol) {
            return outcome(
                StepTag::SolvedInBranchB {
                    matrix: p,
                    csr_additions: vec![CsrMark::P(cand)],
                    intermediate: None,
                },
                Branch::B,
                candidates,
            );
        }
    }

    match opts.exhaustion {
        ExhaustionPolicy::Conclude => outcome(StepTag::NoSolution, Branch::C, candidates),
        ExhaustionPolicy::Continue => {
            let chosen = candidates.members[0].column;
            let matrix = gj_plus_pivot(z, chosen, tol)?
                .matrix
                .with_kind(MatrixKind::PKind, iteration);
            outcome(
                StepTag::Advanced { matrix, chosen },
                Branch::Continue,
                candidates,
            )
        }
    }
}

/// Reads `(x, y)` off a solution matrix: entry `j` of the last column is kept
/// when column `j` appears an odd number of times in the record.
pub fn extract_solution<S: Scalar>(
    p: &CompactMatrix<S>,
    csr: &Csr,
    k: usize,
    n: usize,
) -> (Vec<S>, Vec<S>) {
    let last = p.order() - 1;
    let ystar: Vec<S> = (0..k + n)
        .map(|j| {
            if csr.count(Col::from_index(j)) % 2 == 1 {
                p.get(j, last).clone()
            } else {
                S::zero()
            }
        })
        .collect();
    let y = ystar[..k].to_vec();
    let x = ystar[k..].to_vec();
    (x, y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    TrivialOptimum,
    Optimum,
    NoSolution,
    IterationLimitExceeded,
    NumericalBreakdown,
}

impl Status {
    pub fn is_optimum(self) -> bool {
        matches!(self, Status::Optimum | Status::TrivialOptimum)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    P0,
    Z(usize),
    P(usize),
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::P0 => f.write_str("P0"),
            Stage::Z(i) => write!(f, "Z({i})"),
            Stage::P(i) => write!(f, "P({i})"),
        }
    }
}

/// One matrix of a solve, as produced by its pivot (before any last-row
/// negation; `negated` records whether normalization flipped it).
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep<S> {
    pub stage: Stage,
    pub matrix: CompactMatrix<S>,
    pub candidates: Option<CandidateSet<S>>,
    pub chosen: Option<Col>,
    pub branch: Option<Branch>,
    pub negated: bool,
    /// `λ` with last row ≈ −λ · last column, for normalized P-kind matrices.
    pub proportionality: Option<f64>,
}

impl<S: Scalar> TraceStep<S> {
    /// The matrix with any normalization flip applied.
    pub fn normalized_matrix(&self) -> CompactMatrix<S> {
        let mut m = self.matrix.clone();
        if self.negated {
            m.negate_last_row();
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport<S> {
    pub status: Status,
    /// Primal solution; empty unless the status is an optimum.
    pub x: Vec<S>,
    /// Dual solution; empty unless the status is an optimum.
    pub y: Vec<S>,
    pub primal_objective: Option<S>,
    pub dual_objective: Option<S>,
    pub iterations: usize,
    pub csr: Csr,
    /// Total last-row negations applied during the solve.
    pub negations: usize,
    pub trace: Option<Vec<TraceStep<S>>>,
    /// Where and why a non-terminating status arose.
    pub diagnostic: Option<String>,
    /// Observations that do not change the status (failed λ checks).
    pub findings: Vec<String>,
}

struct Run<'a, S> {
    inst: &'a LpInstance,
    opts: &'a SolveOptions,
    csr: Csr,
    trace: Option<Vec<TraceStep<S>>>,
    negations: usize,
    findings: Vec<String>,
}

impl<'a, S: Scalar> Run<'a, S> {
    fn record(
        &mut self,
        stage: Stage,
        matrix: &CompactMatrix<S>,
        candidates: Option<&CandidateSet<S>>,
        chosen: Option<Col>,
        branch: Option<Branch>,
        negated: bool,
    ) {
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceStep {
                stage,
                matrix: matrix.clone(),
                candidates: candidates.cloned(),
                chosen,
                branch,
                negated,
                proportionality: None,
            });
        }
    }

    /// Normalizes, counting flips and updating the latest trace step.
    fn normalize(&mut self, m: CompactMatrix<S>) -> Result<CompactMatrix<S>> {
        let before = m.last_row_negations();
        let kind = m.kind();
        let stage = match kind {
            MatrixKind::PKind if m.iteration() == 0 => Stage::P0,
            MatrixKind::PKind => Stage::P(m.iteration()),
            MatrixKind::ZKind => Stage::Z(m.iteration()),
        };
        let out = normalize_last_row(m, self.opts.tolerance)?;
        let flipped = out.last_row_negations() != before;
        self.negations += usize::from(flipped);
        let lambda = (kind == MatrixKind::PKind)
            .then(|| proportionality_factor(&out, self.opts.tolerance))
            .flatten();
        if kind == MatrixKind::PKind && lambda.is_none() {
            self.findings.push(format!(
                "{stage}: last row is not a negative multiple of the last column"
            ));
        }
        if let Some(step) = self.trace.as_mut().and_then(|t| t.last_mut()) {
            if step.stage == stage {
                step.negated = flipped;
                step.proportionality = lambda;
            }
        }
        Ok(out)
    }

    fn finish(
        self,
        status: Status,
        iterations: usize,
        diagnostic: Option<String>,
    ) -> SolveReport<S> {
        SolveReport {
            status,
            x: Vec::new(),
            y: Vec::new(),
            primal_objective: None,
            dual_objective: None,
            iterations,
            csr: self.csr,
            negations: self.negations,
            trace: self.trace,
            diagnostic,
            findings: self.findings,
        }
    }

    fn breakdown(self, iteration: usize, stage: Stage, err: Error) -> SolveReport<S> {
        self.finish(
            Status::NumericalBreakdown,
            iteration,
            Some(format!("iteration {iteration}, stage {stage}: {err}")),
        )
    }

    fn optimum(self, p: &CompactMatrix<S>, iteration: usize) -> SolveReport<S> {
        let (k, n) = (self.inst.k(), self.inst.n());
        let tol = self.opts.tolerance;
        let (x, y) = extract_solution(p, &self.csr, k, n);
        if let Some(v) = x.iter().chain(&y).find(|v| tol.is_negative(*v)) {
            let msg = format!("extracted component {v} is negative");
            return self.breakdown(
                iteration,
                Stage::P(iteration),
                Error::NumericalBreakdown(msg),
            );
        }
        let primal = dot(&self.inst.f_as::<S>(), &x);
        let dual = dot(&self.inst.b_as::<S>(), &y);
        let gap = (primal.clone() - dual.clone()).abs().to_f64();
        let scale = 1.0f64.max(primal.to_f64().abs()).max(dual.to_f64().abs());
        let gap_ok = match S::KIND {
            ScalarKind::ExactRational => gap == 0.0,
            ScalarKind::Binary64 => gap <= CERTIFICATION_GAP_TOL * scale,
        };
        if !gap_ok {
            let msg = format!("duality gap {gap:e} between f·x = {primal} and b·y = {dual}");
            return self.breakdown(
                iteration,
                Stage::P(iteration),
                Error::NumericalBreakdown(msg),
            );
        }
        let mut report = self.finish(Status::Optimum, iteration, None);
        report.x = x;
        report.y = y;
        report.primal_objective = Some(primal);
        report.dual_objective = Some(dual);
        report
    }
}

/// Relative duality-gap bound a binary64 optimum must meet before it is reported.
pub const CERTIFICATION_GAP_TOL: f64 = 1e-6;

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (u, v)| acc + u.clone() * v.clone())
}

/// Solves `inst` with scalar type `S`.
///
/// Errors only for invalid options; numerical trouble and cap overruns are
/// reported through [`SolveReport::status`].
pub fn solve<S: Scalar>(inst: &LpInstance, opts: &SolveOptions) -> Result<SolveReport<S>> {
    opts.validate(S::KIND)?;
    let tol = opts.tolerance;
    let (k, n) = (inst.k(), inst.n());
    let mut run = Run {
        inst,
        opts,
        csr: Csr::new(),
        trace: opts.trace_enabled.then(Vec::new),
        negations: 0,
        findings: Vec::new(),
    };

    let mut p = build_p0::<S>(inst);
    run.record(Stage::P0, &p, None, None, None, false);
    if trivial_solution_check(&p) {
        let mut report = run.finish(Status::TrivialOptimum, 0, None);
        report.x = vec![S::zero(); n];
        report.y = vec![S::zero(); k];
        report.primal_objective = Some(S::zero());
        report.dual_objective = Some(S::zero());
        return Ok(report);
    }

    let cap = opts.iteration_cap(k, n);
    for i in 1..=cap {
        let prev_stage = if i == 1 { Stage::P0 } else { Stage::P(i - 1) };
        p = match run.normalize(p) {
            Ok(p) => p,
            Err(e) => return Ok(run.breakdown(i - 1, prev_stage, e)),
        };

        let minor = match minor_step(&p, &run.csr, opts) {
            Ok(o) => o,
            Err(e) => return Ok(run.breakdown(i, Stage::Z(i), e)),
        };
        let z = match minor.tag {
            StepTag::Advanced { matrix, chosen } => {
                run.csr.push_z(chosen);
                let cands = Some(&minor.candidates_considered);
                run.record(
                    Stage::Z(i),
                    &matrix,
                    cands,
                    Some(chosen),
                    Some(minor.branch),
                    false,
                );
                matrix
            }
            StepTag::SolvedInBranchB {
                matrix,
                csr_additions,
                intermediate,
            } => {
                let mut z_col = None;
                for mark in &csr_additions {
                    match *mark {
                        CsrMark::Z(c) => {
                            run.csr.push_z(c);
                            z_col = Some(c);
                        }
                        CsrMark::P(c) => run.csr.set_p(c),
                    }
                }
                let cands = Some(&minor.candidates_considered);
                match intermediate {
                    Some(zm) => {
                        let negated = zm.last_row_negations() > p.last_row_negations();
                        run.negations += usize::from(negated);
                        run.record(Stage::Z(i), &zm, cands, z_col, Some(Branch::B), false);
                        if let Some(step) = run.trace.as_mut().and_then(|t| t.last_mut()) {
                            step.negated = negated;
                            if negated {
                                step.matrix.negate_last_row();
                            }
                        }
                        let p_col = run.csr.rows().last().and_then(|r| r.p);
                        run.record(Stage::P(i), &matrix, None, p_col, Some(Branch::A), false);
                    }
                    None => {
                        run.record(Stage::Z(i), &matrix, cands, z_col, Some(Branch::B), false);
                    }
                }
                return Ok(run.optimum(&matrix, i));
            }
            StepTag::NoSolution => {
                run.csr
                    .push_z(minor.candidates_considered.members[0].column);
                return Ok(run.finish(
                    Status::NoSolution,
                    i,
                    Some(format!("iteration {i}: minor candidates exhausted")),
                ));
            }
        };

        let z = match run.normalize(z) {
            Ok(z) => z,
            Err(e) => return Ok(run.breakdown(i, Stage::Z(i), e)),
        };
        if check_no_solution_condition(&z, tol) {
            return Ok(run.finish(Status::NoSolution, i, None));
        }

        let major = match major_step(&z, &run.csr, opts) {
            Ok(o) => o,
            Err(e) => return Ok(run.breakdown(i, Stage::P(i), e)),
        };
        let cands = Some(&major.candidates_considered);
        match major.tag {
            StepTag::Advanced { matrix, chosen } => {
                run.csr.set_p(chosen);
                run.record(
                    Stage::P(i),
                    &matrix,
                    cands,
                    Some(chosen),
                    Some(major.branch),
                    false,
                );
                if check_solution_condition(&matrix, tol) {
                    return Ok(run.optimum(&matrix, i));
                }
                p = matrix;
            }
            StepTag::SolvedInBranchB {
                matrix,
                csr_additions,
                ..
            } => {
                let mut chosen = None;
                for mark in csr_additions {
                    if let CsrMark::P(c) = mark {
                        run.csr.set_p(c);
                        chosen = Some(c);
                    }
                }
                run.record(Stage::P(i), &matrix, cands, chosen, Some(Branch::B), false);
                return Ok(run.optimum(&matrix, i));
            }
            StepTag::NoSolution => {
                return Ok(run.finish(
                    Status::NoSolution,
                    i,
                    Some(format!("iteration {i}: major candidates exhausted")),
                ));
            }
        }
    }

    Ok(run.finish(
        Status::IterationLimitExceeded,
        cap,
        Some(format!(
            "no termination within {cap} iterations (k + n = {})",
            k + n
        )),
    ))
}
