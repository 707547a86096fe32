//! Persisted outcomes of rank computations and schedule replays.
//!
//! Field order is the JSON key order. Everything is an integer or a string
//! so a rerun with the same inputs, seed and primes reproduces the same
//! bytes, apart from `wall_time_ms`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::horace::ScheduleTrace;
use crate::schemes::{degree, SchemeDescriptor};
use crate::terracini::{CohomologyConfig, CohomologyResult, SecantDimension, Verdict};
use crate::variety::{basis_size, BundleDegree, MultiProjectiveFormat};
use crate::TOOL_VERSION;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tool_version: String,
    pub task: String,
    pub format: MultiProjectiveFormat,
    pub bundle: BundleDegree,
    pub scheme: SchemeDescriptor,
    pub primes: Vec<u64>,
    pub master_seed: u64,
    pub trials: usize,
    pub max_trials: usize,
    pub best_prime: u64,
    pub best_seed: u64,
    pub matrix_shape: (usize, usize),
    pub degree: usize,
    pub sections: usize,
    pub rank: usize,
    pub h0: usize,
    pub h1: usize,
    pub expected_h0: usize,
    pub verdict: Verdict,
    pub verdict_label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub secant_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expected_secant_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub defect: Option<usize>,
    pub wall_time_ms: u64,
}

/// `"certified expected"` or the Monte-Carlo wording for a rank shortfall.
pub fn verdict_label(verdict: Verdict, trials: usize, primes: &[u64]) -> String {
    match verdict {
        Verdict::CertifiedExpected => "certified expected".into(),
        Verdict::ExceedsExpected => {
            let ps: Vec<String> = primes.iter().map(u64::to_string).collect();
            format!(
                "defective (Monte-Carlo, {trials} trials, primes {})",
                ps.join(", ")
            )
        }
    }
}

impl Certificate {
    pub fn from_cohomology(
        format: &MultiProjectiveFormat,
        bundle: &BundleDegree,
        scheme: &SchemeDescriptor,
        config: &CohomologyConfig,
        r: &CohomologyResult,
    ) -> Self {
        Self {
            tool_version: TOOL_VERSION.into(),
            task: "cohomology".into(),
            format: format.clone(),
            bundle: bundle.clone(),
            scheme: scheme.clone(),
            primes: config.primes.clone(),
            master_seed: config.seed,
            trials: r.trials_used,
            max_trials: config.max_trials(),
            best_prime: r.best_prime,
            best_seed: r.best_seed,
            matrix_shape: r.matrix_shape(),
            degree: r.degree,
            sections: r.sections,
            rank: r.rank,
            h0: r.h0,
            h1: r.h1,
            expected_h0: r.expected_h0,
            verdict: r.verdict,
            verdict_label: verdict_label(r.verdict, r.trials_used, &config.primes),
            z: None,
            secant_dim: None,
            expected_secant_dim: None,
            defect: None,
            wall_time_ms: r.wall_time_ms,
        }
    }

    pub fn from_secant(
        format: &MultiProjectiveFormat,
        bundle: &BundleDegree,
        config: &CohomologyConfig,
        s: &SecantDimension,
    ) -> Self {
        let scheme = SchemeDescriptor::double_points(s.z);
        let mut c = Self::from_cohomology(format, bundle, &scheme, config, &s.cohomology);
        c.task = "secant".into();
        c.z = Some(s.z);
        c.secant_dim = Some(s.dim);
        c.expected_secant_dim = Some(s.expected);
        c.defect = Some(s.defect);
        c
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Precondition(format!("bad certificate: {e}")))
    }

    /// Copy with the timing zeroed, for byte comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_time_ms: 0,
            ..self.clone()
        }
    }

    /// Checks the internal arithmetic of the record.
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| {
            Err(Error::Precondition(format!(
                "inconsistent certificate: {what}"
            )))
        };
        if self.bundle.degrees().len() != self.format.num_factors() {
            return bad("format and bundle lengths differ");
        }
        let n_sections = basis_size(&self.format, &self.bundle)?;
        if self.sections != n_sections {
            return bad("sections != h0(L)");
        }
        if self.degree != degree(&self.scheme, &self.format) {
            return bad("degree does not match the scheme");
        }
        if self.matrix_shape != (self.degree, self.sections) {
            return bad("matrix shape");
        }
        if self.rank > self.degree.min(self.sections) {
            return bad("rank exceeds matrix size");
        }
        if self.h0 != self.sections - self.rank || self.h1 != self.degree - self.rank {
            return bad("h0 = N - rank or h1 = deg - rank violated");
        }
        if self.expected_h0 != self.sections.saturating_sub(self.degree) {
            return bad("expected_h0");
        }
        let certified = self.h0 == self.expected_h0;
        if certified != (self.verdict == Verdict::CertifiedExpected) {
            return bad("verdict");
        }
        if self.verdict_label != verdict_label(self.verdict, self.trials, &self.primes) {
            return bad("verdict label");
        }
        if self.trials == 0 || self.trials > self.max_trials {
            return bad("trial count");
        }
        if let Some(z) = self.z {
            let n = self.format.ambient_dim();
            let expected = (self.sections - 1).min(z * (n + 1) - 1);
            let dim = self.sections - 1 - self.h0;
            if self.scheme != SchemeDescriptor::double_points(z)
                || self.secant_dim != Some(dim)
                || self.expected_secant_dim != Some(expected)
                || self.defect != Some(expected - dim)
            {
                return bad("secant fields");
            }
        }
        Ok(())
    }
}

/// A replayed schedule together with the configuration that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleCertificate {
    pub tool_version: String,
    pub task: String,
    pub primes: Vec<u64>,
    pub master_seed: u64,
    pub max_trials: usize,
    pub trace: ScheduleTrace,
}

impl ScheduleCertificate {
    pub fn new(config: &CohomologyConfig, trace: ScheduleTrace) -> Self {
        Self {
            tool_version: TOOL_VERSION.into(),
            task: format!("theorem {}", trace.theorem),
            primes: config.primes.clone(),
            master_seed: config.seed,
            max_trials: config.max_trials(),
            trace,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}
