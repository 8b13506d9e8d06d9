//! Text formats: the instance file format, solve reports (text and JSON) and
//! iteration traces.
//!
//! # Instance format
//!
//! ```text
//! # comment lines and blank lines are ignored
//! k n
//! f_1 ... f_n          (objective)
//! a_11 ... a_1n        (k rows of A)
//! ...
//! b_1 ... b_k          (right-hand side)
//! ```
//!
//! Values are decimal literals (`-1`, `2.5`, `1e3`) or fractions (`3/4`); all
//! are read exactly as rationals.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::csr::Csr;
use crate::error::{Error, Result};
use crate::problem::LpInstance;
use crate::scalar::{parse_rational, rational_from_f64, Rational, Scalar};
use crate::solver::{SolveReport, Status, TraceStep};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    /// 1-based line number (0 when the input ended early).
    pub line: usize,
    /// 1-based column of the offending token.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct DataLine<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

fn data_lines(text: &str) -> Vec<DataLine<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            let trimmed = line.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                return None;
            }
            let tokens = line
                .char_indices()
                .filter(|&(pos, c)| {
                    !c.is_whitespace()
                        && line[..pos]
                            .chars()
                            .next_back()
                            .is_none_or(char::is_whitespace)
                })
                .map(|(pos, _)| {
                    let rest = &line[pos..];
                    let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
                    Token {
                        text: &rest[..end],
                        column: line[..pos].chars().count() + 1,
                    }
                })
                .collect();
            Some(DataLine {
                number: i + 1,
                tokens,
            })
        })
        .collect()
}

fn values_row(
    line: Option<&DataLine<'_>>,
    expected: usize,
    section: &str,
) -> Result<Vec<Rational>, ParseError> {
    let line = line.ok_or_else(|| ParseError::new(0, 0, format!("missing {section}")))?;
    if line.tokens.len() != expected {
        let column = line.tokens.get(expected).map_or(1, |t| t.column);
        return Err(ParseError::new(
            line.number,
            column,
            format!(
                "{section}: expected {expected} values, found {}",
                line.tokens.len()
            ),
        ));
    }
    line.tokens
        .iter()
        .map(|t| parse_rational(t.text).map_err(|msg| ParseError::new(line.number, t.column, msg)))
        .collect()
}

fn dimension(tok: &Token<'_>, line: usize, name: &str) -> Result<usize, ParseError> {
    let v: usize = tok.text.parse().map_err(|_| {
        ParseError::new(
            line,
            tok.column,
            format!("{name} must be a positive integer, got '{}'", tok.text),
        )
    })?;
    if v == 0 {
        return Err(ParseError::new(
            line,
            tok.column,
            format!("{name} must be at least 1"),
        ));
    }
    Ok(v)
}

/// Parses an instance in the format described at the module level.
pub fn parse_instance(text: &str) -> Result<LpInstance, ParseError> {
    let lines = data_lines(text);
    let mut it = lines.iter();
    let header = it
        .next()
        .ok_or_else(|| ParseError::new(0, 0, "missing header line 'k n'"))?;
    if header.tokens.len() != 2 {
        return Err(ParseError::new(
            header.number,
            1,
            format!(
                "header: expected 'k n', found {} tokens",
                header.tokens.len()
            ),
        ));
    }
    let k = dimension(&header.tokens[0], header.number, "k")?;
    let n = dimension(&header.tokens[1], header.number, "n")?;

    let f = values_row(it.next(), n, "objective row f")?;
    let mut a = Vec::with_capacity(k);
    for i in 1..=k {
        a.push(values_row(it.next(), n, &format!("row {i} of A"))?);
    }
    let b = values_row(it.next(), k, "right-hand side b")?;
    if let Some(extra) = it.next() {
        return Err(ParseError::new(
            extra.number,
            1,
            "unexpected content after b",
        ));
    }
    LpInstance::new(a, b, f).map_err(|e| ParseError::new(header.number, 1, e.to_string()))
}

/// Writes `inst` in the instance format, with exact values.
pub fn serialize_instance(inst: &LpInstance) -> String {
    let row = |v: &[Rational]| {
        v.iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = format!("{} {}\n{}\n", inst.k(), inst.n(), row(inst.f()));
    for r in inst.a() {
        out.push_str(&row(r));
        out.push('\n');
    }
    out.push_str(&row(inst.b()));
    out.push('\n');
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// One CSR row as serialized: `p` is null where the record shows "na".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsrEntry {
    pub iter: usize,
    pub z: usize,
    pub p: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateEntry {
    pub column: usize,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub stage: String,
    /// The matrix after any last-row negation.
    pub matrix: Vec<Vec<Value>>,
    pub candidates: Option<Vec<CandidateEntry>>,
    pub chosen: Option<usize>,
    pub branch: Option<String>,
    pub negated: bool,
}

/// Serialized form of a solve report. Field order fixes the JSON key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub status: Status,
    pub iterations: usize,
    pub x: Vec<Value>,
    pub y: Vec<Value>,
    pub primal_objective: Option<Value>,
    pub dual_objective: Option<Value>,
    pub csr: Vec<CsrEntry>,
    pub negations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEntry>>,
}

impl ReportDocument {
    pub fn from_report<S: Scalar>(report: &SolveReport<S>) -> Self {
        let json = |v: &[S]| v.iter().map(Scalar::to_json).collect::<Vec<_>>();
        ReportDocument {
            status: report.status,
            iterations: report.iterations,
            x: json(&report.x),
            y: json(&report.y),
            primal_objective: report.primal_objective.as_ref().map(Scalar::to_json),
            dual_objective: report.dual_objective.as_ref().map(Scalar::to_json),
            csr: csr_entries(&report.csr),
            negations: report.negations,
            trace: report
                .trace
                .as_ref()
                .map(|steps| steps.iter().map(trace_entry).collect()),
        }
    }

    /// The primal vector, read back exactly.
    pub fn x_rational(&self) -> Result<Vec<Rational>> {
        self.x.iter().map(value_to_rational).collect()
    }

    /// The dual vector, read back exactly.
    pub fn y_rational(&self) -> Result<Vec<Rational>> {
        self.y.iter().map(value_to_rational).collect()
    }

    pub fn csr(&self) -> Csr {
        let pairs: Vec<_> = self.csr.iter().map(|e| (e.z, e.p)).collect();
        Csr::from_pairs(&pairs)
    }
}

fn csr_entries(csr: &Csr) -> Vec<CsrEntry> {
    csr.rows()
        .iter()
        .map(|r| CsrEntry {
            iter: r.iteration,
            z: r.z.0,
            p: r.p.map(|c| c.0),
        })
        .collect()
}

fn trace_entry<S: Scalar>(step: &TraceStep<S>) -> TraceEntry {
    TraceEntry {
        stage: step.stage.to_string(),
        matrix: step
            .normalized_matrix()
            .rows()
            .map(|r| r.iter().map(Scalar::to_json).collect())
            .collect(),
        candidates: step.candidates.as_ref().map(|set| {
            set.members
                .iter()
                .map(|c| CandidateEntry {
                    column: c.column.0,
                    value: c.value.to_json(),
                })
                .collect()
        }),
        chosen: step.chosen.map(|c| c.0),
        branch: step.branch.map(|b| b.to_string()),
        negated: step.negated,
    }
}

/// Converts a serialized scalar (number or `"p/q"` string) to a rational.
pub fn value_to_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(num) => {
            let f = num
                .as_f64()
                .ok_or_else(|| Error::InvalidInstance(format!("unrepresentable number {num}")))?;
            rational_from_f64(f)
        }
        Value::String(s) => parse_rational(s).map_err(Error::InvalidInstance),
        other => Err(Error::InvalidInstance(format!(
            "expected a number, found {other}"
        ))),
    }
}

/// Reads a JSON report produced by [`serialize_report`].
pub fn parse_report_json(text: &str) -> Result<ReportDocument> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInstance(format!("report: {e}")))
}

pub fn serialize_report<S: Scalar>(report: &SolveReport<S>, format: Format) -> String {
    match format {
        Format::Json => {
            let doc = ReportDocument::from_report(report);
            let mut s = serde_json::to_string_pretty(&doc).expect("report values serialize");
            s.push('\n');
            s
        }
        Format::Text => report_text(report),
    }
}

fn joined<S: Scalar>(v: &[S]) -> String {
    v.iter()
        .map(Scalar::render_fixed)
        .collect::<Vec<_>>()
        .join(" ")
}

fn report_text<S: Scalar>(report: &SolveReport<S>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "status: {}", report.status);
    let _ = writeln!(out, "iterations: {}", report.iterations);
    if report.status.is_optimum() {
        let _ = writeln!(out, "x: {}", joined(&report.x));
        let _ = writeln!(out, "y: {}", joined(&report.y));
    }
    if let (Some(p), Some(d)) = (&report.primal_objective, &report.dual_objective) {
        let _ = writeln!(out, "primal objective: {}", p.render_fixed());
        let _ = writeln!(out, "dual objective: {}", d.render_fixed());
    }
    let _ = writeln!(out, "negations: {}", report.negations);
    if !report.csr.is_empty() {
        let _ = writeln!(out, "column selection record:");
        let _ = writeln!(out, "{:>6} {:>4} {:>4}", "iter", "Z", "P");
        for r in report.csr.rows() {
            let p = r.p.map_or_else(|| "na".to_string(), |c| c.to_string());
            let _ = writeln!(out, "{:>6} {:>4} {:>4}", r.iteration, r.z.to_string(), p);
        }
    }
    if let Some(d) = &report.diagnostic {
        let _ = writeln!(out, "diagnostic: {d}");
    }
    for f in &report.findings {
        let _ = writeln!(out, "finding: {f}");
    }
    if let Some(trace) = &report.trace {
        if !trace.is_empty() {
            out.push('\n');
            out.push_str(&trace_text(trace));
        }
    }
    out
}

/// Renders a solve trace, one block per matrix.
pub fn serialize_trace<S: Scalar>(trace: &[TraceStep<S>]) -> Result<String> {
    if trace.is_empty() {
        return Err(Error::Precondition("trace is empty".into()));
    }
    Ok(trace_text(trace))
}

fn trace_text<S: Scalar>(trace: &[TraceStep<S>]) -> String {
    let mut out = String::new();
    for (i, step) in trace.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "{}", step.stage);
        let matrix = step.normalized_matrix();
        let cells: Vec<Vec<String>> = matrix
            .rows()
            .map(|r| r.iter().map(Scalar::render_fixed).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            let _ = writeln!(out, "  {}", line.join("  "));
        }
        if let Some(set) = &step.candidates {
            let list: Vec<String> = set
                .members
                .iter()
                .map(|c| format!("{}:{}", c.column, c.value.render_fixed()))
                .collect();
            let _ = writeln!(out, "candidates: {}", list.join(" "));
        }
        if let Some(c) = step.chosen {
            let _ = writeln!(out, "chosen: {c}");
        }
        if let Some(b) = step.branch {
            let _ = writeln!(out, "branch: {b}");
        }
        let _ = writeln!(out, "negated: {}", if step.negated { "yes" } else { "no" });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::canned_example;
    use crate::solver::{solve, SolveOptions};

    const EX1: &str = "2 2\n-1 1\n1 1\n-1 0\n10 -5";

    #[test]
    fn parses_example1() {
        let inst = parse_instance(EX1).unwrap();
        assert_eq!(inst, canned_example(1).unwrap().instance);
    }

    #[test]
    fn parses_minimal_instance_with_comments_and_crlf() {
        let inst = parse_instance("# tiny\r\n\r\n1 1\r\n1\r\n  1 \r\n1\r\n").unwrap();
        assert_eq!(inst, LpInstance::from_i64(&[vec![1]], &[1], &[1]).unwrap());
    }

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        let inst = parse_instance("1 2\n1/3 0.25\n2 -1.5e1\n7").unwrap();
        assert_eq!(inst.f()[0].to_string(), "1/3");
        assert_eq!(inst.f()[1].to_string(), "1/4");
        assert_eq!(inst.a()[0][1].to_string(), "-15");
    }

    #[test]
    fn reports_structural_errors() {
        let missing = parse_instance("2 2\n-1 1\n1 1\n10 -5").unwrap_err();
        assert!(missing.message.contains("missing"), "{missing}");

        let count = parse_instance("2 2\n-1 1 3\n1 1\n-1 0\n10 -5").unwrap_err();
        assert_eq!((count.line, count.column), (2, 6));

        let bad = parse_instance("1 1\n1\nx\n1").unwrap_err();
        assert_eq!((bad.line, bad.column), (3, 1));

        assert!(parse_instance("0 2\n").is_err());
        assert!(parse_instance("1 1 1\n").is_err());
        assert!(parse_instance("").is_err());
        assert!(parse_instance("1 1\n1\n1\n1\n9").is_err());
        assert!(parse_instance("1 1\n1/0\n1\n1").is_err());
    }

    #[test]
    fn instance_round_trip() {
        for id in 1..=5 {
            let inst = canned_example(id).unwrap().instance;
            assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
        }
    }

    #[test]
    fn klee_minty_serialization() {
        let text = serialize_instance(&canned_example(2).unwrap().instance);
        assert_eq!(
            text,
            "3 3\n100 10 1\n1 0 0\n20 1 0\n200 20 1\n1 100 10000\n"
        );
    }

    #[test]
    fn json_report_for_example1_and_example4() {
        let inst = canned_example(1).unwrap().instance;
        let r = solve::<f64>(&inst, &SolveOptions::for_scalar::<f64>()).unwrap();
        let json = serialize_report(&r, Format::Json);
        let v: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(
            v["csr"],
            serde_json::json!([{"iter":1,"z":4,"p":1},{"iter":2,"z":2,"p":3}])
        );
        let keys = [
            "status",
            "iterations",
            "x",
            "y",
            "primal_objective",
            "dual_objective",
            "csr",
            "negations",
        ];
        let positions: Vec<usize> = keys
            .iter()
            .map(|k| json.find(&format!("\"{k}\":")).unwrap())
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{json}");
        assert!(!json.contains("\"trace\""));
        let doc = parse_report_json(&json).unwrap();
        assert_eq!(doc, ReportDocument::from_report(&r));

        let inst = canned_example(4).unwrap().instance;
        let r = solve::<f64>(&inst, &SolveOptions::for_scalar::<f64>()).unwrap();
        let v: Value = serde_json::from_str(&serialize_report(&r, Format::Json)).unwrap();
        assert_eq!(v["status"], "NoSolution");
        assert_eq!(v["csr"][2], serde_json::json!({"iter":3,"z":4,"p":null}));
        let text = serialize_report(&r, Format::Text);
        assert!(text.contains("na"), "{text}");
    }

    #[test]
    fn rational_report_uses_fraction_strings() {
        let inst = canned_example(5).unwrap().instance;
        let r = solve::<Rational>(&inst, &SolveOptions::for_scalar::<Rational>()).unwrap();
        let doc = ReportDocument::from_report(&r);
        assert_eq!(doc.x[0], Value::String("16/19".into()));
        assert_eq!(doc.y[1], Value::String("53/38".into()));
        assert_eq!(doc.x_rational().unwrap(), r.x);
    }

    #[test]
    fn trivial_optimum_serializes_zero_vectors() {
        let inst = LpInstance::from_i64(&[vec![1]], &[1], &[-1]).unwrap();
        let r = solve::<f64>(&inst, &SolveOptions::for_scalar::<f64>()).unwrap();
        assert_eq!(r.status, Status::TrivialOptimum);
        let v: Value = serde_json::from_str(&serialize_report(&r, Format::Json)).unwrap();
        assert_eq!(v["x"], serde_json::json!([0.0]));
        assert_eq!(v["y"], serde_json::json!([0.0]));
    }

    #[test]
    fn trace_rendering() {
        let inst = canned_example(1).unwrap().instance;
        let opts = SolveOptions::for_scalar::<f64>().with_trace();
        let r = solve::<f64>(&inst, &opts).unwrap();
        let text = serialize_trace(r.trace.as_deref().unwrap()).unwrap();
        let z1 = text.split("\n\n").find(|b| b.starts_with("Z(1)")).unwrap();
        let first: Vec<&str> = z1.lines().nth(1).unwrap().split_whitespace().collect();
        assert_eq!(
            first,
            [
                "11.000000",
                "-5.000000",
                "2.000000",
                "-1.000000",
                "11.000000"
            ]
        );
        let last: Vec<&str> = z1.lines().nth(5).unwrap().split_whitespace().collect();
        assert_eq!(
            last,
            ["1.000000", "0.000000", "0.000000", "-1.000000", "1.000000"]
        );
        let p1 = text.split("\n\n").find(|b| b.starts_with("P(1)")).unwrap();
        let row1 = p1.lines().nth(1).unwrap();
        let cells: Vec<&str> = row1.split_whitespace().collect();
        assert_eq!(
            cells,
            ["0.090909", "-0.454545", "0.181818", "-0.090909", "1.000000"]
        );
        assert!(serialize_trace::<f64>(&[]).is_err());
    }
}
