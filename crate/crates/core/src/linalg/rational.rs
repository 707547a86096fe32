use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::PrimeField;
use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

/// Default column cap for the rational rank oracle.
pub const RATIONAL_COLUMN_CAP: usize = 512;

/// A dense row-major matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Precondition(format!(
                "matrix entries length {} != {rows} x {cols}",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| BigInt::from(x)).collect(),
        )
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Precondition(format!(
                    "row of length {} in a matrix with {cols} columns",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(Self {
            rows: n,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }
}

/// Reduces every entry of `m` into `[0, p)`.
pub fn reduce_mod_p(m: &IntegerMatrix, field: &PrimeField) -> DenseMatrix {
    let p = BigInt::from(field.modulus());
    let entries = m
        .entries
        .iter()
        .map(|x| {
            let mut r = x % &p;
            if r.is_negative() {
                r += &p;
            }
            r.to_u64().expect("residue fits in u64")
        })
        .collect();
    DenseMatrix::new(m.rows, m.cols, entries).expect("shape preserved")
}

/// Rank over Q with the default column cap.
pub fn rank_rational(m: &IntegerMatrix) -> Result<usize> {
    rank_rational_capped(m, RATIONAL_COLUMN_CAP)
}

/// Rank over Q by Bareiss fraction-free elimination.
///
/// After eliminating with pivot columns `c_1..c_k`, every remaining entry is
/// the `(k+1)`-minor on the pivot rows and columns plus its own row and
/// column, so each division by the previous pivot is exact.
pub fn rank_rational_capped(m: &IntegerMatrix, cap: usize) -> Result<usize> {
    if m.cols > cap {
        return Err(Error::RationalSizeCap { cols: m.cols, cap });
    }
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.entries.clone();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r * cols + col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            for c in 0..cols {
                a.swap(pivot * cols + c, rank * cols + c);
            }
        }
        let pv = a[rank * cols + col].clone();
        for r in rank + 1..rows {
            let factor = a[r * cols + col].clone();
            for c in col + 1..cols {
                let num = &pv * &a[r * cols + c] - &factor * &a[rank * cols + c];
                a[r * cols + c] = num / &prev;
            }
            a[r * cols + col] = BigInt::zero();
        }
        prev = pv;
        rank += 1;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rank_mod_p, MERSENNE_61};
    use proptest::prelude::*;

    /// Independent oracle: the largest k with a nonzero k x k minor, where
    /// minors are expanded by permutations in i128.
    fn rank_by_minors(rows: usize, cols: usize, e: &[i64]) -> usize {
        fn det(m: &[Vec<i128>]) -> i128 {
            let n = m.len();
            if n == 0 {
                return 1;
            }
            let mut total = 0;
            for (j, &x) in m[0].iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                total += sign * x * det(&minor);
            }
            total
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        for k in (1..=rows.min(cols)).rev() {
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let sub: Vec<Vec<i128>> = rs
                        .iter()
                        .map(|&r| cs.iter().map(|&c| e[r * cols + c] as i128).collect())
                        .collect();
                    if det(&sub) != 0 {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn identity() {
        let mut e = vec![0i64; 16];
        for i in 0..4 {
            e[i * 4 + i] = 1;
        }
        let m = IntegerMatrix::from_i64(4, 4, &e).unwrap();
        assert_eq!(rank_rational(&m).unwrap(), 4);
    }

    #[test]
    fn modulus_diagonal_rational_vs_modular() {
        let p = MERSENNE_61 as i64;
        let m = IntegerMatrix::from_i64(2, 2, &[p, 0, 0, p]).unwrap();
        assert_eq!(rank_rational(&m).unwrap(), 2);
        let field = PrimeField::default();
        assert_eq!(rank_mod_p(&reduce_mod_p(&m, &field), &field), 0);
    }

    #[test]
    fn negative_entries_reduce() {
        let m = IntegerMatrix::from_i64(1, 2, &[-1, -3]).unwrap();
        let f = PrimeField::new(7).unwrap();
        assert_eq!(reduce_mod_p(&m, &f).entries(), &[6, 4]);
    }

    #[test]
    fn cap_is_enforced() {
        let m = IntegerMatrix::from_i64(1, 3, &[1, 2, 3]).unwrap();
        assert_eq!(
            rank_rational_capped(&m, 2),
            Err(Error::RationalSizeCap { cols: 3, cap: 2 })
        );
    }

    #[test]
    fn column_skipping() {
        // second column is zero, third is dependent on the first
        let m = IntegerMatrix::from_i64(3, 4, &[2, 0, 4, 1, 3, 0, 6, 5, 1, 0, 2, 7]).unwrap();
        assert_eq!(rank_rational(&m).unwrap(), 2);
    }

    proptest! {
        #[test]
        fn agrees_with_minor_oracle(
            rows in 0usize..5, cols in 0usize..5,
            e in proptest::collection::vec(-3i64..=3, 16),
            zero_mask in proptest::collection::vec(any::<bool>(), 16),
        ) {
            // sparsify to make rank deficiency common
            let e: Vec<i64> = e.iter().zip(&zero_mask).take(rows * cols)
                .map(|(&x, &z)| if z { 0 } else { x }).collect();
            let m = IntegerMatrix::from_i64(rows, cols, &e).unwrap();
            prop_assert_eq!(rank_rational(&m).unwrap(), rank_by_minors(rows, cols, &e));
        }

        #[test]
        fn modular_rank_never_exceeds_rational(
            rows in 1usize..7, cols in 1usize..7,
            e in proptest::collection::vec(-6i64..=6, 36),
            p in prop::sample::select(vec![2u64, 3, 5, 7, 13]),
        ) {
            let m = IntegerMatrix::from_i64(rows, cols, &e[..rows * cols]).unwrap();
            let f = PrimeField::new(p).unwrap();
            prop_assert!(rank_mod_p(&reduce_mod_p(&m, &f), &f) <= rank_rational(&m).unwrap());
        }
    }
}
