use crate::error::{Error, Result};
use crate::scalar::{rational_from_f64, Rational, Scalar};

/// A linear program in symmetric form: maximize `f·x` subject to `A x ≤ b`, `x ≥ 0`.
///
/// Entries are stored exactly; solvers convert them to their working scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpInstance {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    f: Vec<Rational>,
}

impl LpInstance {
    /// `a` is given row by row (k rows of n entries).
    pub fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>, f: Vec<Rational>) -> Result<Self> {
        let k = a.len();
        let n = f.len();
        if k == 0 {
            return Err(Error::InvalidInstance("k must be at least 1".into()));
        }
        if n == 0 {
            return Err(Error::InvalidInstance("n must be at least 1".into()));
        }
        if b.len() != k {
            return Err(Error::InvalidInstance(format!(
                "b has {} entries, expected k = {k}",
                b.len()
            )));
        }
        if let Some((i, row)) = a.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidInstance(format!(
                "row {} of A has {} entries, expected n = {n}",
                i + 1,
                row.len()
            )));
        }
        Ok(LpInstance { a, b, f })
    }

    pub fn from_i64(a: &[Vec<i64>], b: &[i64], f: &[i64]) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&x| Rational::from_i64(x)).collect::<Vec<_>>();
        Self::new(a.iter().map(|r| conv(r)).collect(), conv(b), conv(f))
    }

    /// Every finite `f64` converts exactly; NaN and infinities are rejected.
    pub fn from_f64(a: &[Vec<f64>], b: &[f64], f: &[f64]) -> Result<Self> {
        let conv = |v: &[f64]| {
            v.iter()
                .map(|&x| rational_from_f64(x))
                .collect::<Result<Vec<_>>>()
        };
        let a = a.iter().map(|r| conv(r)).collect::<Result<Vec<_>>>()?;
        Self::new(a, conv(b)?, conv(f)?)
    }

    /// Number of inequality constraints.
    pub fn k(&self) -> usize {
        self.a.len()
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn a(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn f(&self) -> &[Rational] {
        &self.f
    }

    pub fn a_as<S: Scalar>(&self) -> Vec<Vec<S>> {
        self.a
            .iter()
            .map(|row| row.iter().map(S::from_rational).collect())
            .collect()
    }

    pub fn b_as<S: Scalar>(&self) -> Vec<S> {
        self.b.iter().map(S::from_rational).collect()
    }

    pub fn f_as<S: Scalar>(&self) -> Vec<S> {
        self.f.iter().map(S::from_rational).collect()
    }

    /// Largest entry magnitude, as `f64`.
    pub fn max_abs_entry(&self) -> f64 {
        self.a
            .iter()
            .flatten()
            .chain(&self.b)
            .chain(&self.f)
            .map(|v| v.to_f64().abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_checks() {
        assert!(LpInstance::from_i64(&[vec![1, 1], vec![-1, 0]], &[10, -5], &[-1, 1]).is_ok());
        assert!(LpInstance::from_i64(&[vec![1, 1]], &[10, -5], &[-1, 1]).is_err());
        assert!(LpInstance::from_i64(&[vec![1], vec![-1, 0]], &[10, -5], &[-1, 1]).is_err());
        assert!(LpInstance::from_i64(&[], &[], &[1]).is_err());
        assert!(LpInstance::from_i64(&[vec![]], &[1], &[]).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(LpInstance::from_f64(&[vec![f64::NAN]], &[1.0], &[1.0]).is_err());
        assert!(LpInstance::from_f64(&[vec![1.0]], &[f64::INFINITY], &[1.0]).is_err());
        let inst = LpInstance::from_f64(&[vec![0.5]], &[1.0], &[2.0]).unwrap();
        assert_eq!(inst.a_as::<f64>(), vec![vec![0.5]]);
    }
}
