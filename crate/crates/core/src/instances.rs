//! Reference instances: five worked examples, the Klee-Minty family and a
//! seeded random generator.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csr::Csr;
use crate::error::{Error, Result};
use crate::problem::LpInstance;
use crate::scalar::{Rational, ScalarKind};
use crate::solver::{MinorOrder, Status};

/// Documented outcome of a worked example under one ordering rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Expected {
    pub rule: MinorOrder,
    pub status: Status,
    /// Published (possibly rounded) primal solution.
    pub x: Option<Vec<f64>>,
    pub y: Option<Vec<f64>>,
    pub iterations: usize,
    pub csr: Csr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CannedExample {
    pub id: u32,
    pub name: &'static str,
    pub instance: LpInstance,
    /// Under the default (ascending value) rule.
    pub expected: Expected,
    /// Under the ascending index rule, where documented.
    pub index_variant: Option<Expected>,
}

fn optimum(rule: MinorOrder, x: &[f64], y: &[f64], csr: &[(usize, Option<usize>)]) -> Expected {
    Expected {
        rule,
        status: Status::Optimum,
        x: Some(x.to_vec()),
        y: Some(y.to_vec()),
        iterations: csr.len(),
        csr: Csr::from_pairs(csr),
    }
}

pub fn canned_example(id: u32) -> Result<CannedExample> {
    use MinorOrder::{AscendingIndex, AscendingValue};
    let ex = match id {
        1 => CannedExample {
            id,
            name: "example1",
            instance: LpInstance::from_i64(&[vec![1, 1], vec![-1, 0]], &[10, -5], &[-1, 1])?,
            expected: optimum(
                AscendingValue,
                &[5.0, 5.0],
                &[1.0, 2.0],
                &[(4, Some(1)), (2, Some(3))],
            ),
            index_variant: None,
        },
        2 => CannedExample {
            id,
            name: "example2",
            instance: klee_minty(3)?,
            expected: optimum(
                AscendingValue,
                &[0.0, 0.0, 10000.0],
                &[0.0, 0.0, 1.0],
                &[(6, Some(3))],
            ),
            index_variant: Some(optimum(
                AscendingIndex,
                &[0.0, 0.0, 10000.0],
                &[0.0, 0.0, 1.0],
                &[(4, Some(3)), (6, Some(4))],
            )),
        },
        3 => CannedExample {
            id,
            name: "example3",
            instance: LpInstance::from_i64(
                &[vec![-2, -2, 1], vec![-4, 3, -2]],
                &[-7, -3],
                &[-9, 1, -1],
            )?,
            expected: optimum(
                AscendingValue,
                &[0.0, 17.0, 27.0],
                &[1.0, 1.0],
                &[(4, Some(2)), (1, Some(3)), (5, Some(3))],
            ),
            index_variant: None,
        },
        4 => CannedExample {
            id,
            name: "example4",
            instance: LpInstance::from_i64(&[vec![-1, 2], vec![2, 1]], &[-4, 3], &[1, 1])?,
            expected: Expected {
                rule: AscendingValue,
                status: Status::NoSolution,
                x: None,
                y: None,
                iterations: 3,
                csr: Csr::from_pairs(&[(3, Some(2)), (4, Some(1)), (4, None)]),
            },
            index_variant: None,
        },
        5 => CannedExample {
            id,
            name: "example5",
            instance: LpInstance::from_i64(
                &[vec![8, 3, 4, 1], vec![2, 6, 1, 5], vec![1, 4, 5, 2]],
                &[7, 3, 8],
                &[3, 4, 1, 7],
            )?,
            expected: optimum(
                AscendingValue,
                &[0.8421, 0.0, 0.0, 0.2632],
                &[0.0263, 1.3947, 0.0],
                &[
                    (6, Some(3)),
                    (4, Some(1)),
                    (5, Some(2)),
                    (7, Some(5)),
                    (3, Some(6)),
                ],
            ),
            index_variant: Some(optimum(
                AscendingIndex,
                &[0.8421, 0.0, 0.0, 0.2632],
                &[0.0263, 1.3947, 0.0],
                &[(4, Some(1)), (5, Some(2)), (7, Some(5))],
            )),
        },
        _ => return Err(Error::UnknownExample(id)),
    };
    Ok(ex)
}

pub fn all_canned() -> Vec<CannedExample> {
    (1..=5)
        .map(|id| canned_example(id).expect("ids 1..=5 exist"))
        .collect()
}

/// Largest Klee-Minty dimension the binary64 solver handles reliably.
///
/// From `n = 9` on, products of the data reach about `1e24`, so rounding
/// noise dwarfs the absolute zero tolerance and binary64 runs misreport the
/// problem or break down; exact rationals have no such limit.
pub const KLEE_MINTY_BINARY64_MAX_N: usize = 8;

/// The Klee-Minty cube of dimension `n`:
/// maximize `Σ 10^(n-j) x_j` subject to
/// `2 Σ_{j<i} 10^(i-j) x_j + x_i ≤ 100^(i-1)`, `x ≥ 0`.
pub fn klee_minty(n: usize) -> Result<LpInstance> {
    if n == 0 {
        return Err(Error::InvalidInstance(
            "Klee-Minty dimension must be at least 1".into(),
        ));
    }
    let ten = BigInt::from(10);
    let pow10 = |e: usize| Rational::from_integer(num_traits::pow(ten.clone(), e));
    let two = Rational::from_integer(BigInt::from(2));
    let a = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Greater => two.clone() * pow10(i - j),
                    std::cmp::Ordering::Equal => pow10(0),
                    std::cmp::Ordering::Less => Rational::from_integer(BigInt::from(0)),
                })
                .collect()
        })
        .collect();
    let b = (0..n).map(|i| pow10(2 * i)).collect();
    let f = (0..n).map(|j| pow10(n - 1 - j)).collect();
    LpInstance::new(a, b, f)
}

/// [`klee_minty`] with a guard against dimensions too large for `kind`.
pub fn klee_minty_for(n: usize, kind: ScalarKind) -> Result<LpInstance> {
    if kind == ScalarKind::Binary64 && n > KLEE_MINTY_BINARY64_MAX_N {
        return Err(Error::InvalidInstance(format!(
            "Klee-Minty n = {n} exceeds the binary64 limit {KLEE_MINTY_BINARY64_MAX_N}; use exact rationals"
        )));
    }
    klee_minty(n)
}

/// Random integer instance.
///
/// Entries are drawn uniformly from `lo..=hi` by ChaCha8 (`rand_chacha`)
/// seeded with `seed_from_u64(seed)`, in the order: A row by row, then b,
/// then f. The same arguments give the same instance on every platform.
pub fn random_instance(k: usize, n: usize, seed: u64, lo: i64, hi: i64) -> Result<LpInstance> {
    if lo > hi {
        return Err(Error::InvalidInstance(format!(
            "empty entry range [{lo}, {hi}]"
        )));
    }
    if k == 0 || n == 0 {
        return Err(Error::InvalidInstance("k and n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |len: usize| {
        (0..len)
            .map(|_| rng.gen_range(lo..=hi))
            .collect::<Vec<i64>>()
    };
    let a: Vec<Vec<i64>> = (0..k).map(|_| draw(n)).collect();
    let b = draw(k);
    let f = draw(n);
    LpInstance::from_i64(&a, &b, &f)
}

/// Dimensions used for seed `seed` of a mixed batch with `k, n ∈ 1..=max_dim`.
pub fn batch_dimensions(seed: u64, max_dim: usize) -> (usize, usize) {
    let d = max_dim as u64;
    (1 + (seed % d) as usize, 1 + ((seed / d) % d) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn as_f64(inst: &LpInstance) -> (Vec<Vec<f64>>, Vec<f64>, Vec<f64>) {
        (inst.a_as(), inst.b_as(), inst.f_as())
    }

    #[test]
    fn klee_minty_members() {
        let (a, b, f) = as_f64(&klee_minty(3).unwrap());
        assert_eq!(f, vec![100.0, 10.0, 1.0]);
        assert_eq!(
            a,
            vec![
                vec![1.0, 0.0, 0.0],
                vec![20.0, 1.0, 0.0],
                vec![200.0, 20.0, 1.0]
            ]
        );
        assert_eq!(b, vec![1.0, 100.0, 10000.0]);

        let (a, b, f) = as_f64(&klee_minty(1).unwrap());
        assert_eq!((a, b, f), (vec![vec![1.0]], vec![1.0], vec![1.0]));

        let (a, b, f) = as_f64(&klee_minty(4).unwrap());
        assert_eq!(f, vec![1000.0, 100.0, 10.0, 1.0]);
        assert_eq!(b, vec![1.0, 100.0, 10000.0, 1000000.0]);
        assert_eq!(a[1][..2], [20.0, 1.0]);
        assert_eq!(a[2][..3], [200.0, 20.0, 1.0]);
        assert_eq!(a[3], vec![2000.0, 200.0, 20.0, 1.0]);
        assert!(klee_minty(0).is_err());
    }

    /// Textbook construction written independently: x_i ≤ 100^(i-1) - 2 Σ 10^(i-j) x_j.
    #[test]
    fn klee_minty_matches_textbook_form() {
        for n in 1..=8usize {
            let inst = klee_minty(n).unwrap();
            for i in 1..=n {
                for j in 1..=n {
                    let expect = if j < i {
                        2.0 * 10f64.powi((i - j) as i32)
                    } else if j == i {
                        1.0
                    } else {
                        0.0
                    };
                    assert_eq!(inst.a()[i - 1][j - 1].to_f64(), expect);
                }
                assert_eq!(inst.b()[i - 1].to_f64(), 100f64.powi(i as i32 - 1));
                assert_eq!(inst.f()[i - 1].to_f64(), 10f64.powi((n - i) as i32));
            }
        }
    }

    #[test]
    fn klee_minty_binary64_guard() {
        assert!(klee_minty_for(8, ScalarKind::Binary64).is_ok());
        assert!(klee_minty_for(9, ScalarKind::Binary64).is_err());
        assert!(klee_minty_for(9, ScalarKind::ExactRational).is_ok());
    }

    #[test]
    fn random_instances_are_reproducible_and_in_range() {
        assert_eq!(
            random_instance(2, 2, 42, -9, 9).unwrap(),
            random_instance(2, 2, 42, -9, 9).unwrap()
        );
        assert_ne!(
            random_instance(2, 2, 42, -9, 9).unwrap(),
            random_instance(2, 2, 43, -9, 9).unwrap()
        );
        let inst = random_instance(3, 4, 7, -9, 9).unwrap();
        let (a, b, f) = as_f64(&inst);
        assert!(a
            .iter()
            .flatten()
            .chain(&b)
            .chain(&f)
            .all(|v| (-9.0..=9.0).contains(v)));
        assert!(random_instance(2, 2, 1, 3, 2).is_err());
        let single = random_instance(2, 3, 5, 4, 4).unwrap();
        assert!(as_f64(&single).0.iter().flatten().all(|&v| v == 4.0));
    }

    #[test]
    fn canned_examples() {
        let ex1 = canned_example(1).unwrap();
        assert_eq!(ex1.expected.status, Status::Optimum);
        assert_eq!(ex1.expected.y, Some(vec![1.0, 2.0]));
        assert_eq!(ex1.expected.x, Some(vec![5.0, 5.0]));
        let ex3 = canned_example(3).unwrap();
        assert_eq!(ex3.expected.iterations, 3);
        assert_eq!(ex3.expected.x, Some(vec![0.0, 17.0, 27.0]));
        let ex4 = canned_example(4).unwrap();
        assert_eq!(ex4.expected.status, Status::NoSolution);
        assert_eq!(ex4.expected.iterations, 3);
        assert_eq!(canned_example(2).unwrap().instance, klee_minty(3).unwrap());
        assert!(matches!(canned_example(6), Err(Error::UnknownExample(6))));
        assert!(matches!(canned_example(0), Err(Error::UnknownExample(0))));
    }

    /// The printed optima of examples 3 and 4's reconstructed data must agree.
    #[test]
    fn reconstructed_example3_objectives_agree() {
        let ex = canned_example(3).unwrap();
        let (a, b, f) = as_f64(&ex.instance);
        let x = [0.0, 17.0, 27.0];
        let y = [1.0, 1.0];
        let fx: f64 = f.iter().zip(&x).map(|(u, v)| u * v).sum();
        let by: f64 = b.iter().zip(&y).map(|(u, v)| u * v).sum();
        assert_eq!((fx, by), (-10.0, -10.0));
        for (row, bi) in a.iter().zip(&b) {
            let lhs: f64 = row.iter().zip(&x).map(|(u, v)| u * v).sum();
            assert!(lhs <= *bi);
        }
    }

    #[test]
    fn batch_dimensions_cover_grid() {
        let mut seen = std::collections::HashSet::new();
        for seed in 0..25 {
            let (k, n) = batch_dimensions(seed, 5);
            assert!((1..=5).contains(&k) && (1..=5).contains(&n));
            seen.insert((k, n));
        }
        assert_eq!(seen.len(), 25);
    }
}
