//! Linear programming by compact complementary Gauss-Jordan pivoting.
//!
//! A problem `max fᵀx s.t. Ax ≤ b, x ≥ 0` is encoded in a skew-symmetric
//! matrix of order `k + n + 1` ([`tableau::build_p0`]). Each iteration makes
//! a minor pivot (P-kind → Z-kind) and a major pivot (Z-kind → P-kind), both
//! complementary GJ+ pivots on diagonal entries ([`pivot::gj_plus_pivot`]).
//! The run stops when the last column certifies a solution or the last row
//! certifies that none exists. The primal and dual solutions are read off the
//! last column using the parity of each column's appearances in the column
//! selection record ([`csr::Csr`]).
//!
//! All arithmetic is generic over [`Scalar`]: `f64` for speed, or
//! [`Rational`] for exact results. The [`oracle`] module checks answers
//! independently, using duality certificates and vertex enumeration.
//!
//! ```
//! use pivotal_lp::{solve, LpInstance, SolveOptions, Status};
//!
//! // max -x1 + x2  s.t.  x1 + x2 <= 10,  -x1 <= -5
//! let inst = LpInstance::from_i64(&[vec![1, 1], vec![-1, 0]], &[10, -5], &[-1, 1]).unwrap();
//! let report = solve::<f64>(&inst, &SolveOptions::for_scalar::<f64>()).unwrap();
//! assert_eq!(report.status, Status::Optimum);
//! assert_eq!(report.x, vec![5.0, 5.0]);
//! assert_eq!(report.y, vec![1.0, 2.0]);
//! ```

pub mod bench;
pub mod csr;
pub mod error;
pub mod instances;
pub mod io;
pub mod oracle;
pub mod pivot;
pub mod problem;
pub mod scalar;
pub mod solver;
pub mod tableau;

pub use csr::{Col, Csr, CsrRow};
pub use error::{Error, Result};
pub use io::{
    parse_instance, serialize_instance, serialize_report, serialize_trace, Format, ParseError,
};
pub use oracle::{
    brute_force_solve, verify_certificate, CertificateReport, OracleOutcome, OracleStatus,
};
pub use pivot::gj_plus_pivot;
pub use problem::LpInstance;
pub use scalar::{Rational, Scalar, ScalarKind, Tolerance};
pub use solver::{
    solve, ExhaustionPolicy, MinorOrder, OrderingRule, SolveOptions, SolveReport, Stage, Status,
};
pub use tableau::{build_p0, CompactMatrix, MatrixKind};
