//! Dimensions of secant varieties of Segre-Veronese embeddings of products of
//! projective spaces.
//!
//! The z-th secant variety of `X` embedded by `|L|` has dimension
//! `h^0(L) - 1 - h^0(I_{2S} ⊗ L)` for `z` general points `S`. This crate
//! computes that `h^0` exactly as the corank of a condition matrix over a
//! large prime field, and builds on it to check the statements of a Horace
//! style induction on concrete instances.

pub mod catalog;
pub mod certificate;
pub mod error;
pub mod horace;
pub mod linalg;
pub mod schemes;
pub mod terracini;
pub mod variety;

pub use error::{Error, Result};
pub use linalg::{rank_mod_p, rank_rational, DenseMatrix, IntegerMatrix, PrimeField};
pub use schemes::{degree, residual_split, Location, ResidualPair, SchemeDescriptor};
pub use terracini::{
    cohomology, critical_z, inequality_oracles, nondefectivity_scan, secant_dimension,
    split_params, CohomologyConfig, CohomologyResult, ScanMode, ScanReport, SplitParams, Verdict,
};
pub use variety::{
    basis_size, monomial_basis, BundleDegree, ConditionKind, DivisorHandle, MPPoint,
    MultiProjectiveFormat,
};

/// Version string embedded in certificates.
pub const TOOL_VERSION: &str = concat!("secant-core ", env!("CARGO_PKG_VERSION"));
