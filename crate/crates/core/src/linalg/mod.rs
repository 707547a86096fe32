//! Exact linear algebra: prime-field arithmetic, dense rank mod p, and a
//! fraction-free rational rank used as a characteristic-zero cross-check.

mod field;
mod matrix;
mod rational;

pub use field::{is_prime_u64, PrimeField, MERSENNE_61, RETRY_PRIME};
pub use matrix::{rank_mod_p, DenseMatrix};
pub use rational::{
    rank_rational, rank_rational_capped, reduce_mod_p, IntegerMatrix, RATIONAL_COLUMN_CAP,
};
