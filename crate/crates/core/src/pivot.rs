//! Complementary GJ+ pivoting on a square matrix.
//!
//! For column `j` of an `s × s` matrix `S`:
//!
//! 1. append the unit vector `e_j` as column `s + 1`;
//! 2. if `S[j][j]` is zero, add the last row to row `j`; then Gauss-Jordan
//!    pivot on `(j, j)`;
//! 3. swap column `j` with the appended column and drop the appended column.
//!
//! After step 2 column `j` is exactly `e_j`, so step 3 reduces to overwriting
//! column `j` with the transformed appended column.

use crate::csr::Col;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tolerance};
use crate::tableau::CompactMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct PivotOutcome<S> {
    pub matrix: CompactMatrix<S>,
    pub pivot_column: Col,
    /// Whether the last row was added to row `j` before pivoting.
    pub used_row_addition: bool,
}

pub fn gj_plus_pivot<S: Scalar>(
    s: &CompactMatrix<S>,
    j: Col,
    tol: Tolerance,
) -> Result<PivotOutcome<S>> {
    let order = s.order();
    if j.0 == 0 || j.0 >= order {
        return Err(Error::Precondition(format!(
            "pivot column {j} outside 1..={}",
            order - 1
        )));
    }
    let jj = j.index();
    let last = order - 1;
    let mut out = s.clone();
    // The appended column; starts as e_j.
    let mut aug = vec![S::zero(); order];
    aug[jj] = S::one();

    let used_row_addition = tol.is_zero(out.get(jj, jj));
    if used_row_addition {
        let last_row = out.row(last).to_vec();
        for (v, add) in out.row_mut(jj).iter_mut().zip(last_row) {
            *v = v.clone() + add;
        }
        // aug[last] is zero, so aug[jj] is unchanged by the addition.
    }

    let pivot = out.get(jj, jj).clone();
    if tol.is_zero(&pivot) {
        return Err(Error::PivotBreakdown { column: j.0 });
    }

    for v in out.row_mut(jj) {
        *v = v.clone() / pivot.clone();
    }
    aug[jj] = aug[jj].clone() / pivot;

    let pivot_row = out.row(jj).to_vec();
    let aug_pivot = aug[jj].clone();
    for i in (0..order).filter(|&i| i != jj) {
        let factor = out.get(i, jj).clone();
        if factor.is_zero() {
            continue;
        }
        for (v, p) in out.row_mut(i).iter_mut().zip(&pivot_row) {
            *v = v.clone() - factor.clone() * p.clone();
        }
        aug[i] = aug[i].clone() - factor * aug_pivot.clone();
    }

    for (i, v) in aug.into_iter().enumerate() {
        out.set(i, jj, v);
    }

    Ok(PivotOutcome {
        matrix: out,
        pivot_column: j,
        used_row_addition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::tableau::{build_p0, MatrixKind};
    use crate::LpInstance;
    use num_bigint::BigInt;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(d))
    }

    fn example1_p0() -> CompactMatrix<Rational> {
        let inst = LpInstance::from_i64(&[vec![1, 1], vec![-1, 0]], &[10, -5], &[-1, 1]).unwrap();
        build_p0(&inst)
    }

    #[test]
    fn example1_first_minor_pivot() {
        let out = gj_plus_pivot(&example1_p0(), Col(4), Tolerance::exact()).unwrap();
        assert!(out.used_row_addition);
        let expected = CompactMatrix::<Rational>::from_i64_rows(
            &[
                vec![11, -5, 2, -1, 11],
                vec![0, 0, -1, 0, -5],
                vec![-1, 1, 0, 0, 1],
                vec![-11, 5, -1, 1, -1],
                vec![1, 0, 0, -1, 1],
            ],
            MatrixKind::PKind,
        )
        .unwrap();
        assert_eq!(out.matrix, expected);
    }

    #[test]
    fn example1_first_major_pivot() {
        let tol = Tolerance::exact();
        let z1 = gj_plus_pivot(&example1_p0(), Col(4), tol).unwrap().matrix;
        let out = gj_plus_pivot(&z1, Col(1), tol).unwrap();
        assert!(!out.used_row_addition);
        let p1 = out.matrix;
        assert_eq!(
            p1.row(0),
            &[q(1, 11), q(-5, 11), q(2, 11), q(-1, 11), q(1, 1)]
        );
        assert_eq!(p1.row(3), &[q(1, 1), q(0, 1), q(1, 1), q(0, 1), q(10, 1)]);
        assert_eq!(
            p1.row(4),
            &[q(-1, 11), q(5, 11), q(-2, 11), q(-10, 11), q(0, 1)]
        );
    }

    #[test]
    fn identity_is_fixed() {
        let id = CompactMatrix::<f64>::from_i64_rows(
            &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            MatrixKind::ZKind,
        )
        .unwrap();
        let out = gj_plus_pivot(&id, Col(1), Tolerance::default_for(f64::KIND)).unwrap();
        assert_eq!(out.matrix, id);
        assert!(!out.used_row_addition);
    }

    #[test]
    fn breakdown_and_range_errors() {
        let tol = Tolerance::exact();
        let m = CompactMatrix::<Rational>::from_i64_rows(
            &[vec![0, 1, 1], vec![1, 0, 1], vec![0, 1, 0]],
            MatrixKind::PKind,
        )
        .unwrap();
        assert_eq!(
            gj_plus_pivot(&m, Col(1), tol),
            Err(Error::PivotBreakdown { column: 1 })
        );
        assert!(matches!(
            gj_plus_pivot(&m, Col(3), tol),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            gj_plus_pivot(&m, Col(0), tol),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn pivot_twice_restores_example_matrix() {
        let tol = Tolerance::exact();
        let z1 = gj_plus_pivot(&example1_p0(), Col(4), tol).unwrap().matrix;
        let back = gj_plus_pivot(
            &gj_plus_pivot(&z1, Col(1), tol).unwrap().matrix,
            Col(1),
            tol,
        )
        .unwrap()
        .matrix;
        assert_eq!(back, z1);
    }
}
