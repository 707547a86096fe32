//! The dimension engine.
//!
//! For a scheme `Z` and a bundle with `N` sections, the condition matrix has
//! one row per condition imposed by `Z` and one column per basis monomial, so
//! `h^0(I_Z ⊗ L) = N - rank` and `h^1(I_Z ⊗ L) = deg(Z) - rank` (the bundles
//! here have no higher cohomology). At any sampled realization the rank is
//! at most the generic rank, so the sampled `h^0` is at least the generic
//! `h^0`, which in turn is at least `max(0, N - deg Z)`. A trial reaching that
//! minimum certifies the generic value; a trial above it is only evidence.

mod oracles;
mod statements;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{rank_mod_p, DenseMatrix, PrimeField, MERSENNE_61, RETRY_PRIME};
use crate::schemes::{degree, realize, SchemeDescriptor};
use crate::variety::{BundleDegree, DivisorHandle, MultiProjectiveFormat, SectionBasis};

pub use oracles::{critical_z, inequality_oracles, InequalityRecord};
pub use statements::{
    prop_u1_check, split_params, statement_a, statement_b, statement_c, LineProduct, SplitParams,
    StatementCheck, StatementKind, StatementVerdict, U1Check, U1Verdict,
};

/// Default master seed. Runs are reproducible unless a seed is given.
pub const DEFAULT_SEED: u64 = 0x5ec4_7e55_a11d_2024;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyConfig {
    /// Primes tried in order; every seed is used on one prime before moving on.
    pub primes: Vec<u64>,
    pub seed: u64,
    pub seeds_per_prime: usize,
}

impl Default for CohomologyConfig {
    fn default() -> Self {
        Self {
            primes: vec![MERSENNE_61, RETRY_PRIME],
            seed: DEFAULT_SEED,
            seeds_per_prime: 3,
        }
    }
}

impl CohomologyConfig {
    pub fn max_trials(&self) -> usize {
        self.primes.len() * self.seeds_per_prime
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Seed for one trial of one task. Depends only on the master seed, the
    /// task identity and the trial coordinates.
    pub fn trial_seed(&self, identity: &str, prime_index: usize, seed_index: usize) -> u64 {
        let task = fnv1a(identity.as_bytes());
        let coords = ((prime_index as u64) << 32) | seed_index as u64;
        splitmix64(self.seed ^ splitmix64(task ^ splitmix64(coords)))
    }

    fn fields(&self) -> Result<Vec<PrimeField>> {
        self.primes.iter().map(|&p| PrimeField::new(p)).collect()
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// Some trial reached the minimum possible `h^0`; the generic value is
    /// certified.
    CertifiedExpected,
    /// Every trial stayed above the minimum. Monte-Carlo evidence only.
    ExceedsExpected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyResult {
    pub h0: usize,
    pub h1: usize,
    pub rank: usize,
    pub expected_h0: usize,
    pub degree: usize,
    /// `h^0` of the bundle, the number of matrix columns.
    pub sections: usize,
    pub verdict: Verdict,
    pub trials_used: usize,
    /// Prime and seed of the trial with the largest rank.
    pub best_prime: u64,
    pub best_seed: u64,
    #[serde(skip)]
    pub wall_time_ms: u64,
}

impl CohomologyResult {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedExpected
    }

    pub fn matrix_shape(&self) -> (usize, usize) {
        (self.degree, self.sections)
    }

    /// `h^i` for `i` in `{0, 1}`.
    pub fn h(&self, i: u8) -> usize {
        if i == 0 {
            self.h0
        } else {
            self.h1
        }
    }
}

fn task_identity(
    s: &SchemeDescriptor,
    format: &MultiProjectiveFormat,
    bundle: &BundleDegree,
    divisor: Option<&DivisorHandle>,
) -> String {
    serde_json::to_string(&(format, bundle, s, divisor)).expect("task serializes")
}

/// Condition matrix of one realization of `s`.
pub fn condition_matrix(
    s: &SchemeDescriptor,
    basis: &SectionBasis,
    divisor: Option<&DivisorHandle>,
    field: &PrimeField,
    seed: u64,
) -> Result<DenseMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = realize(s, basis.format(), field, &mut rng, divisor)?;
    let mut rows = Vec::new();
    for (p, kind) in &points {
        rows.extend(basis.rows(field, p, *kind, divisor)?);
    }
    DenseMatrix::from_rows(basis.len(), rows)
}

/// `h^0` and `h^1` of `I_Z ⊗ L` for a general realization of `s`.
///
/// Trials run until one reaches `max(0, N - deg Z)` or the configured trials
/// are exhausted; the reported values come from the trial with the largest
/// rank.
pub fn cohomology(
    s: &SchemeDescriptor,
    format: &MultiProjectiveFormat,
    bundle: &BundleDegree,
    divisor: Option<&DivisorHandle>,
    config: &CohomologyConfig,
) -> Result<CohomologyResult> {
    let start = Instant::now();
    let basis = SectionBasis::new(format, bundle)?;
    let sections = basis.len();
    let deg = degree(s, format);
    let expected_h0 = sections.saturating_sub(deg);
    let full_rank = sections.min(deg);
    let identity = task_identity(s, format, bundle, divisor);

    let mut best: Option<(usize, u64, u64)> = None;
    let mut trials_used = 0;
    'trials: for (pi, field) in config.fields()?.iter().enumerate() {
        for k in 0..config.seeds_per_prime {
            trials_used += 1;
            let seed = config.trial_seed(&identity, pi, k);
            let m = condition_matrix(s, &basis, divisor, field, seed)?;
            debug_assert_eq!(m.rows(), deg);
            let rank = rank_mod_p(&m, field);
            if best.is_none_or(|(r, _, _)| rank > r) {
                best = Some((rank, field.modulus(), seed));
            }
            if rank == full_rank {
                break 'trials;
            }
        }
    }
    let (rank, best_prime, best_seed) =
        best.ok_or_else(|| crate::Error::Precondition("no trials configured".into()))?;
    let h0 = sections - rank;
    Ok(CohomologyResult {
        h0,
        h1: deg - rank,
        rank,
        expected_h0,
        degree: deg,
        sections,
        verdict: if h0 == expected_h0 {
            Verdict::CertifiedExpected
        } else {
            Verdict::ExceedsExpected
        },
        trials_used,
        best_prime,
        best_seed,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecantDimension {
    pub z: usize,
    pub dim: usize,
    pub expected: usize,
    pub defect: usize,
    pub verdict: Verdict,
    pub cohomology: CohomologyResult,
}

/// Dimension of the z-th secant variety via Terracini: `N - 1 - h^0(I_{2S} ⊗ L)`.
pub fn secant_dimension(
    format: &MultiProjectiveFormat,
    bundle: &BundleDegree,
    z: usize,
    config: &CohomologyConfig,
) -> Result<SecantDimension> {
    if z == 0 {
        return Err(crate::Error::Precondition("z must be positive".into()));
    }
    let n = format.ambient_dim();
    let c = cohomology(
        &SchemeDescriptor::double_points(z),
        format,
        bundle,
        None,
        config,
    )?;
    let top = c.sections - 1;
    let dim = top - c.h0;
    let expected = top.min(z * (n + 1) - 1);
    Ok(SecantDimension {
        z,
        dim,
        expected,
        defect: expected - dim,
        verdict: c.verdict,
        cohomology: c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanMode {
    /// Only `floor(N/(n+1))` and `ceil(N/(n+1))`, which control every `z`.
    CriticalOnly,
    /// Every `z` with `(n+1) z <= N + n`.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Defectivity {
    NonDefective,
    /// Some tested `z` stayed below the expected dimension in every trial.
    DefectiveMonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub format: MultiProjectiveFormat,
    pub bundle: BundleDegree,
    pub mode: ScanMode,
    pub entries: Vec<SecantDimension>,
    pub overall: Defectivity,
}

impl ScanReport {
    pub fn defective_z(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|e| e.defect > 0)
            .map(|e| e.z)
            .collect()
    }
}

/// The `z` values a scan visits.
pub fn scan_values(sections: usize, n: usize, mode: ScanMode) -> Vec<usize> {
    match mode {
        ScanMode::CriticalOnly => {
            let (z1, z2) = critical_z(sections, n);
            let mut zs: Vec<usize> = [z1, z2].into_iter().filter(|&z| z > 0).collect();
            zs.dedup();
            zs
        }
        ScanMode::All => (1..=(sections + n) / (n + 1)).collect(),
    }
}

/// Secant dimensions over the `z` values selected by `mode`. Tasks run in
/// parallel; entries are ordered by `z`.
pub fn nondefectivity_scan(
    format: &MultiProjectiveFormat,
    bundle: &BundleDegree,
    config: &CohomologyConfig,
    mode: ScanMode,
) -> Result<ScanReport> {
    let sections = crate::variety::basis_size(format, bundle)?;
    let zs = scan_values(sections, format.ambient_dim(), mode);
    let entries = zs
        .par_iter()
        .map(|&z| secant_dimension(format, bundle, z, config))
        .collect::<Result<Vec<_>>>()?;
    let overall = if entries.iter().all(|e| e.defect == 0) {
        Defectivity::NonDefective
    } else {
        Defectivity::DefectiveMonteCarlo
    };
    Ok(ScanReport {
        format: format.clone(),
        bundle: bundle.clone(),
        mode,
        entries,
        overall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::Location;
    use crate::variety::ConditionKind;

    fn fmt(d: &[usize]) -> MultiProjectiveFormat {
        MultiProjectiveFormat::new(d.to_vec()).unwrap()
    }

    fn deg(d: &[u32]) -> BundleDegree {
        BundleDegree::new(d.to_vec())
    }

    #[test]
    fn seeds_depend_on_task_and_trial() {
        let c = CohomologyConfig::default();
        assert_eq!(c.trial_seed("a", 0, 0), c.trial_seed("a", 0, 0));
        assert_ne!(c.trial_seed("a", 0, 0), c.trial_seed("b", 0, 0));
        assert_ne!(c.trial_seed("a", 0, 0), c.trial_seed("a", 0, 1));
        assert_ne!(c.trial_seed("a", 0, 0), c.trial_seed("a", 1, 0));
        assert_ne!(
            c.trial_seed("a", 0, 0),
            c.clone().with_seed(1).trial_seed("a", 0, 0)
        );
        assert_eq!(c.max_trials(), 6);
    }

    #[test]
    fn one_double_point() {
        let r = cohomology(
            &SchemeDescriptor::double_points(1),
            &fmt(&[1, 1, 1]),
            &deg(&[3, 3, 2]),
            None,
            &CohomologyConfig::default(),
        )
        .unwrap();
        assert_eq!(r.h0, 44);
        assert_eq!(r.h1, 0);
        assert_eq!(r.verdict, Verdict::CertifiedExpected);
        assert_eq!(r.trials_used, 1);
    }

    #[test]
    fn double_curve_defect() {
        let r = cohomology(
            &SchemeDescriptor::double_points(3),
            &fmt(&[1, 1]),
            &deg(&[2, 2]),
            None,
            &CohomologyConfig::default(),
        )
        .unwrap();
        assert_eq!((r.h0, r.expected_h0, r.rank, r.h1), (1, 0, 8, 1));
        assert_eq!(r.verdict, Verdict::ExceedsExpected);
        assert_eq!(r.trials_used, 6);
    }

    #[test]
    fn plane_conics_through_two_double_points() {
        let r = cohomology(
            &SchemeDescriptor::double_points(2),
            &fmt(&[2]),
            &deg(&[2]),
            None,
            &CohomologyConfig::default(),
        )
        .unwrap();
        assert_eq!((r.h0, r.expected_h0), (1, 0));
        assert_eq!(r.verdict, Verdict::ExceedsExpected);
    }

    #[test]
    fn empty_scheme() {
        let r = cohomology(
            &SchemeDescriptor::empty(),
            &fmt(&[2]),
            &deg(&[3]),
            None,
            &CohomologyConfig::default(),
        )
        .unwrap();
        assert_eq!((r.h0, r.h1, r.rank), (10, 0, 0));
        assert!(r.is_certified());
    }

    #[test]
    fn secant_dimensions() {
        let c = CohomologyConfig::default();
        let s = secant_dimension(&fmt(&[1, 1, 1]), &deg(&[3, 3, 2]), 12, &c).unwrap();
        assert_eq!((s.dim, s.expected, s.defect), (47, 47, 0));
        let s = secant_dimension(&fmt(&[1, 1]), &deg(&[2, 2]), 3, &c).unwrap();
        assert_eq!((s.dim, s.expected, s.defect), (7, 8, 1));
        for (f, d) in [
            (vec![2], vec![3]),
            (vec![1, 2], vec![2, 1]),
            (vec![1, 1, 1], vec![1, 1, 1]),
        ] {
            let x = fmt(&f);
            let s = secant_dimension(&x, &deg(&d), 1, &c).unwrap();
            assert_eq!((s.dim, s.defect), (x.ambient_dim(), 0));
        }
        assert!(secant_dimension(&fmt(&[1]), &deg(&[2]), 0, &c).is_err());
    }

    #[test]
    fn scans() {
        let c = CohomologyConfig::default();
        let r = nondefectivity_scan(
            &fmt(&[1, 1, 1]),
            &deg(&[3, 3, 2]),
            &c,
            ScanMode::CriticalOnly,
        )
        .unwrap();
        assert_eq!(r.overall, Defectivity::NonDefective);
        assert_eq!(r.entries.iter().map(|e| e.z).collect::<Vec<_>>(), vec![12]);

        let r = nondefectivity_scan(&fmt(&[1, 1]), &deg(&[4, 2]), &c, ScanMode::All).unwrap();
        assert_eq!(r.defective_z(), vec![5]);
        assert_eq!(r.entries.len(), 5);

        let r = nondefectivity_scan(&fmt(&[2]), &deg(&[2]), &c, ScanMode::All).unwrap();
        assert_eq!(r.defective_z(), vec![2]);
        assert_eq!(r.overall, Defectivity::DefectiveMonteCarlo);
    }

    #[test]
    fn scan_ranges() {
        assert_eq!(scan_values(9, 2, ScanMode::CriticalOnly), vec![3]);
        assert_eq!(scan_values(10, 2, ScanMode::CriticalOnly), vec![3, 4]);
        assert_eq!(scan_values(10, 2, ScanMode::All), vec![1, 2, 3, 4]);
        assert_eq!(scan_values(1, 2, ScanMode::CriticalOnly), vec![1]);
    }

    #[test]
    fn adding_components_never_raises_h0() {
        let c = CohomologyConfig::default();
        let x = fmt(&[1, 1, 1]);
        let l = deg(&[2, 2, 2]);
        let d = DivisorHandle::last_factor(&x).unwrap();
        let steps = [
            (ConditionKind::DoubleAmbient, Location::GeneralAmbient),
            (ConditionKind::Reduced, Location::GeneralOnDivisor),
            (ConditionKind::DoubleInDivisor, Location::GeneralOnDivisor),
            (ConditionKind::Reduced, Location::GeneralAmbient),
            (ConditionKind::DoubleAmbient, Location::GeneralOnDivisor),
        ];
        let mut s = SchemeDescriptor::empty();
        let mut last = usize::MAX;
        for round in 0..3 {
            for (k, l2) in steps.iter().cloned() {
                s = s.with(k, l2, 1);
                let r = cohomology(&s, &x, &l, Some(&d), &c).unwrap();
                assert!(
                    r.h0 <= last,
                    "round {round}: h0 rose to {} from {last}",
                    r.h0
                );
                assert_eq!(r.h0 + r.rank, r.sections);
                assert_eq!(r.h1 + r.rank, r.degree);
                last = r.h0;
            }
        }
        assert_eq!(last, 0);
    }

    #[test]
    fn certification_survives_more_trials() {
        let x = fmt(&[1, 1, 1]);
        let l = deg(&[3, 3, 2]);
        let s = SchemeDescriptor::double_points(11);
        let few = CohomologyConfig {
            seeds_per_prime: 1,
            primes: vec![MERSENNE_61],
            ..Default::default()
        };
        let many = CohomologyConfig {
            seeds_per_prime: 5,
            ..Default::default()
        };
        let a = cohomology(&s, &x, &l, None, &few).unwrap();
        let b = cohomology(&s, &x, &l, None, &many).unwrap();
        assert!(a.is_certified());
        assert!(b.is_certified());
        assert_eq!(a.h0, b.h0);
    }

    #[test]
    fn subsets_of_a_certified_critical_scheme_are_certified() {
        let c = CohomologyConfig::default();
        let x = fmt(&[1, 1, 1]);
        let l = deg(&[3, 3, 2]);
        let (z1, _) = critical_z(48, 3);
        assert!(secant_dimension(&x, &l, z1, &c).unwrap().defect == 0);
        for z in [1, 4, 7, 11] {
            assert_eq!(secant_dimension(&x, &l, z, &c).unwrap().defect, 0);
        }
    }

    #[test]
    fn degree_zero_factor_matches_dropped_factor() {
        let c = CohomologyConfig::default();
        for (dims, degs, z) in [
            (vec![1, 1], vec![4, 0], 2),
            (vec![2, 1], vec![2, 0], 1),
            (vec![1, 1, 1], vec![2, 2, 0], 2),
        ] {
            let x = fmt(&dims);
            let k = dims.len() - 1;
            let y = x.without_factor(k).unwrap();
            let l = deg(&degs);
            let ly = l.without_factor(k);
            let a = cohomology(&SchemeDescriptor::double_points(z), &x, &l, None, &c).unwrap();
            let b = cohomology(&SchemeDescriptor::double_points(z), &y, &ly, None, &c).unwrap();
            assert_eq!(a.h0, b.h0, "{dims:?} {degs:?} z={z}");
        }
    }
}
