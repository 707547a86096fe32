//! Differential Horace steps and replays of the induction schedule.
//!
//! A Horace step trades one vanishing goal on `W` for two smaller goals: one
//! on a divisor `D` (the trace) and one on `W` in the bundle twisted by `-D`
//! (the residual). The replays walk the `t = 2, 3, 4, ...` ladder of
//! statements `A/B/C` on concrete instances, recording every goal.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::PrimeField;
use crate::schemes::{residual_split, restrict_to_divisor, Location, SchemeDescriptor};
use crate::terracini::{
    cohomology, inequality_oracles, nondefectivity_scan, prop_u1_check, secant_dimension,
    statement_a, statement_b, statement_c, CohomologyConfig, CohomologyResult, InequalityRecord,
    LineProduct, ScanMode, SecantDimension, SplitParams, StatementCheck, StatementVerdict, U1Check,
    U1Verdict, Verdict,
};
use crate::variety::{
    basis_size, BundleDegree, ConditionKind, DivisorHandle, MultiProjectiveFormat,
};

/// Prove `h^i(I_{E ∪ 2S} ⊗ R) = 0` for `g` general points `S` by reducing
/// to the trace goal on `D` and the residual goal in `R(-D)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoraceStep {
    pub format: MultiProjectiveFormat,
    pub bundle: BundleDegree,
    pub base: SchemeDescriptor,
    pub divisor: DivisorHandle,
    pub g: usize,
    pub which_h: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalCheck {
    pub format: MultiProjectiveFormat,
    pub bundle: BundleDegree,
    pub scheme: SchemeDescriptor,
    pub result: CohomologyResult,
    /// The `h^i` that should vanish.
    pub h: usize,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoraceStepRecord {
    /// `h^i(D, I_{(E ∩ D) ∪ F} ⊗ R|_D)`
    pub trace_goal: GoalCheck,
    /// `h^i(I_{Res_D(E) ∪ (2F, D)} ⊗ R(-D))`
    pub residual_goal: GoalCheck,
    /// `h^i(I_{E ∪ 2S} ⊗ R)`
    pub combined_direct: GoalCheck,
    pub subgoals_vanish: bool,
    /// Both subgoals vanishing implies the direct goal vanishes.
    pub sound: bool,
}

fn goal(
    scheme: SchemeDescriptor,
    format: &MultiProjectiveFormat,
    bundle: &BundleDegree,
    divisor: Option<&DivisorHandle>,
    which_h: u8,
    config: &CohomologyConfig,
) -> Result<GoalCheck> {
    let result = cohomology(&scheme, format, bundle, divisor, config)?;
    let h = result.h(which_h);
    Ok(GoalCheck {
        format: format.clone(),
        bundle: bundle.clone(),
        scheme,
        result,
        h,
        vanishes: h == 0,
    })
}

pub fn horace_step_verify(
    step: &HoraceStep,
    config: &CohomologyConfig,
) -> Result<HoraceStepRecord> {
    if step.which_h > 1 {
        return Err(Error::Precondition("which_h must be 0 or 1".into()));
    }
    let field = PrimeField::new(
        *config
            .primes
            .first()
            .ok_or_else(|| Error::Precondition("no primes configured".into()))?,
    )?;
    let d = &step.divisor;
    let split = residual_split(&step.base, &step.bundle, d, &field)?;
    let d_format = d.divisor_format(&step.format)?;

    let trace_scheme = restrict_to_divisor(&split.trace, d).with(
        ConditionKind::Reduced,
        Location::GeneralAmbient,
        step.g,
    );
    let residual_scheme = split.residual.clone().with(
        ConditionKind::DoubleInDivisor,
        Location::GeneralOnDivisor,
        step.g,
    );
    let direct_scheme = step.base.clone().with(
        ConditionKind::DoubleAmbient,
        Location::GeneralAmbient,
        step.g,
    );

    let i = step.which_h;
    let trace_goal = goal(
        trace_scheme,
        &d_format,
        &split.trace_bundle,
        None,
        i,
        config,
    )?;
    let residual_goal = goal(
        residual_scheme,
        &step.format,
        &split.residual_bundle,
        Some(d),
        i,
        config,
    )?;
    let combined_direct = goal(
        direct_scheme,
        &step.format,
        &step.bundle,
        Some(d),
        i,
        config,
    )?;
    let subgoals_vanish = trace_goal.vanishes && residual_goal.vanishes;
    Ok(HoraceStepRecord {
        sound: !subgoals_vanish || combined_direct.vanishes,
        subgoals_vanish,
        trace_goal,
        residual_goal,
        combined_direct,
    })
}

/// A random step on at most `max_factors` factors with at most
/// `max_sections` sections. One factor is a `P1` carrying the divisor.
pub fn random_step<R: Rng + ?Sized>(
    rng: &mut R,
    max_factors: usize,
    max_sections: usize,
) -> HoraceStep {
    assert!(max_factors >= 2);
    loop {
        let k = rng.gen_range(2..=max_factors);
        let div = rng.gen_range(0..k);
        let dims: Vec<usize> = (0..k)
            .map(|i| if i == div { 1 } else { rng.gen_range(1..=2) })
            .collect();
        let degrees: Vec<u32> = (0..k)
            .map(|i| {
                if i == div {
                    rng.gen_range(1..=3)
                } else {
                    rng.gen_range(1..=4)
                }
            })
            .collect();
        let format = MultiProjectiveFormat::new(dims).expect("positive dims");
        let bundle = BundleDegree::new(degrees);
        let sections = basis_size(&format, &bundle).expect("small format");
        if sections > max_sections || sections < 4 {
            continue;
        }
        let n = format.ambient_dim();
        let cap = sections / (n + 1) + 1;
        let base = SchemeDescriptor::empty()
            .with(
                ConditionKind::DoubleAmbient,
                Location::GeneralAmbient,
                rng.gen_range(0..=cap / 2),
            )
            .with(
                ConditionKind::DoubleAmbient,
                Location::GeneralOnDivisor,
                rng.gen_range(0..=2),
            )
            .with(
                ConditionKind::Reduced,
                Location::GeneralAmbient,
                rng.gen_range(0..=n),
            )
            .with(
                ConditionKind::Reduced,
                Location::GeneralOnDivisor,
                rng.gen_range(0..=n),
            )
            .with(
                ConditionKind::DoubleInDivisor,
                Location::GeneralOnDivisor,
                rng.gen_range(0..=2),
            );
        let divisor = DivisorHandle::new(&format, div).expect("P1 factor");
        return HoraceStep {
            format,
            bundle,
            base,
            divisor,
            g: rng.gen_range(0..=cap),
            which_h: rng.gen_range(0..=1),
        };
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GoalStatus {
    CertifiedExpected,
    ExceedsExpected,
    Vacuous,
    /// An inequality that holds.
    Holds,
    /// An inequality that fails.
    Fails,
}

impl GoalStatus {
    pub fn is_ok(self) -> bool {
        matches!(self, Self::CertifiedExpected | Self::Vacuous | Self::Holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Goal {
    pub description: String,
    pub status: GoalStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub statement: Option<StatementCheck>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub inequality: Option<InequalityRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub secant: Option<SecantDimension>,
}

impl Goal {
    fn from_statement(prefix: &str, s: StatementCheck) -> Self {
        let status = match s.verdict {
            StatementVerdict::Holds => GoalStatus::CertifiedExpected,
            StatementVerdict::Fails => GoalStatus::ExceedsExpected,
            StatementVerdict::Vacuous => GoalStatus::Vacuous,
        };
        Self {
            description: format!("{prefix}{}", s.label()),
            status,
            statement: Some(s),
            inequality: None,
            secant: None,
        }
    }

    fn from_secant(description: String, s: SecantDimension) -> Self {
        Self {
            description,
            status: match s.verdict {
                Verdict::CertifiedExpected => GoalStatus::CertifiedExpected,
                Verdict::ExceedsExpected => GoalStatus::ExceedsExpected,
            },
            statement: None,
            inequality: None,
            secant: Some(s),
        }
    }

    fn from_inequality(prefix: &str, r: InequalityRecord) -> Self {
        Self {
            description: format!("{prefix}inequalities (t={},z={})", r.t, r.z),
            status: if r.claim1_ok && r.claim2_ok {
                GoalStatus::Holds
            } else {
                GoalStatus::Fails
            },
            statement: None,
            inequality: Some(r),
            secant: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisRecord {
    pub stage: String,
    pub y_format: MultiProjectiveFormat,
    pub y_bundle: BundleDegree,
    pub alpha: usize,
    pub n: usize,
    pub split: SplitParams,
    pub checks: Vec<HypothesisCheck>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub y_secant: Option<SecantDimension>,
}

impl HypothesisRecord {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScheduleVerdict {
    Verified,
    NotVerified,
    HypothesisFailed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleTrace {
    pub theorem: String,
    pub hypotheses: Vec<HypothesisRecord>,
    pub goals: Vec<Goal>,
    pub verdict: ScheduleVerdict,
}

impl ScheduleTrace {
    fn conclude(theorem: &str, hypotheses: Vec<HypothesisRecord>, goals: Vec<Goal>) -> Self {
        let verdict = if !hypotheses.iter().all(HypothesisRecord::holds) {
            ScheduleVerdict::HypothesisFailed
        } else if goals.iter().all(|g| g.status.is_ok()) {
            ScheduleVerdict::Verified
        } else {
            ScheduleVerdict::NotVerified
        };
        Self {
            theorem: theorem.into(),
            hypotheses,
            goals,
            verdict,
        }
    }
}

fn check(name: impl Into<String>, holds: bool) -> HypothesisCheck {
    HypothesisCheck {
        name: name.into(),
        holds,
    }
}

/// Hypotheses of the `t >= 2` theorem, with the secant condition on `Y`
/// tested at `secant_index` (`e1`, or `e1 - 1` for the shifted variant).
fn hypotheses(
    stage: &str,
    lp: &LineProduct,
    split: SplitParams,
    mut checks: Vec<HypothesisCheck>,
    secant_index: usize,
    config: &CohomologyConfig,
) -> Result<HypothesisRecord> {
    let mut y_secant = None;
    if checks.iter().all(|c| c.holds) && secant_index > 0 {
        let s = secant_dimension(&lp.y_format, &lp.y_bundle, secant_index, config)?;
        checks.push(check(
            format!("sigma_{secant_index}(Y) has the expected dimension"),
            s.defect == 0,
        ));
        y_secant = Some(s);
    }
    Ok(HypothesisRecord {
        stage: stage.into(),
        y_format: lp.y_format.clone(),
        y_bundle: lp.y_bundle.clone(),
        alpha: lp.alpha,
        n: lp.n,
        split,
        checks,
        y_secant,
    })
}

fn i1_hypotheses(
    stage: &str,
    lp: &LineProduct,
    config: &CohomologyConfig,
) -> Result<HypothesisRecord> {
    let split = lp.split();
    let checks = vec![
        check("n >= 3", lp.n >= 3),
        check("alpha > n^2", lp.alpha > lp.n * lp.n),
    ];
    hypotheses(stage, lp, split, checks, split.e1, config)
}

/// Runs one level of goals concurrently; output keeps the order of `zs`.
fn level<F>(zs: &[usize], prefix: &str, f: F) -> Result<Vec<Goal>>
where
    F: Fn(usize) -> Result<StatementCheck> + Sync,
{
    zs.par_iter()
        .map(|&z| f(z).map(|s| Goal::from_statement(prefix, s)))
        .collect()
}

/// The `A/B/C` ladder for `2 <= t' <= t` at critical `z`.
fn i1_goals(
    lp: &LineProduct,
    t: u32,
    prefix: &str,
    config: &CohomologyConfig,
) -> Result<Vec<Goal>> {
    let split = lp.split();
    let mut goals = Vec::new();
    for tp in 2..=t {
        for z in lp.critical_z(tp) {
            goals.push(Goal::from_inequality(
                prefix,
                inequality_oracles(&split, tp, z),
            ));
        }
    }

    let crit2 = lp.critical_z(2);
    goals.extend(level(&crit2, prefix, |z| {
        statement_b(lp, 2, z, &split, config)
    })?);
    goals.extend(level(&crit2, prefix, |z| statement_a(lp, 2, z, config))?);
    if t >= 3 {
        let crit3 = lp.critical_z(3);
        goals.extend(level(&crit3, prefix, |z| {
            statement_c(lp, 3, z, &split, config)
        })?);
        goals.extend(level(&crit3, prefix, |z| statement_a(lp, 3, z, config))?);
    }
    for tp in 4..=t {
        let below = lp.critical_z(tp - 2);
        goals.extend(level(&below, prefix, |z| {
            statement_a(lp, tp - 2, z, config)
        })?);
        let crit = lp.critical_z(tp);
        goals.extend(level(&crit, prefix, |z| {
            statement_c(lp, tp, z, &split, config)
        })?);
        goals.extend(level(&crit, prefix, |z| {
            statement_b(lp, tp, z, &split, config)
        })?);
        goals.extend(level(&crit, prefix, |z| statement_a(lp, tp, z, config))?);
    }
    Ok(goals)
}

/// Replays the proof that `(Y x P1, L[t])` is not secant defective when
/// `n >= 3`, `alpha > n^2` and `sigma_{e1}(Y)` has the expected dimension.
pub fn replay_theorem_i1(
    y_format: &MultiProjectiveFormat,
    y_bundle: &BundleDegree,
    t: u32,
    config: &CohomologyConfig,
) -> Result<ScheduleTrace> {
    if t < 2 {
        return Err(Error::Precondition("the replay needs t >= 2".into()));
    }
    let lp = LineProduct::new(y_format.clone(), y_bundle.clone())?;
    let hyp = i1_hypotheses("Y x P1", &lp, config)?;
    let goals = if hyp.holds() {
        i1_goals(&lp, t, "", config)?
    } else {
        Vec::new()
    };
    Ok(ScheduleTrace::conclude("i1", vec![hyp], goals))
}

/// The variant with `sigma_{e1-1}(Y)` of expected dimension and
/// `alpha >= 2n^2 + 4n`. Only the conclusion `A(t, z)` at critical `z` is
/// replayed.
pub fn replay_theorem_i1_0(
    y_format: &MultiProjectiveFormat,
    y_bundle: &BundleDegree,
    t: u32,
    config: &CohomologyConfig,
) -> Result<ScheduleTrace> {
    if t < 2 {
        return Err(Error::Precondition("the replay needs t >= 2".into()));
    }
    let lp = LineProduct::new(y_format.clone(), y_bundle.clone())?;
    let n = lp.n;
    let checks = vec![
        check("n >= 3", n >= 3),
        check("alpha >= 2n^2 + 4n", lp.alpha >= 2 * n * n + 4 * n),
    ];
    let split = lp.split();
    let hyp = hypotheses(
        "Y x P1",
        &lp,
        split,
        checks,
        split.e1.saturating_sub(1),
        config,
    )?;
    let goals = if hyp.holds() {
        level(&lp.critical_z(t), "", |z| statement_a(&lp, t, z, config))?
    } else {
        Vec::new()
    };
    Ok(ScheduleTrace::conclude("i1.0", vec![hyp], goals))
}

/// `P^{n1} x P^{n2} x (P1)^{k-2}` with `O(d_1, ..., d_k)`: adds one `P1`
/// at a time, replaying the `t = d_j` ladder over the product built so far,
/// then scans the full product at critical `z`.
pub fn replay_theorem_minus(
    n1: usize,
    n2: usize,
    degrees: &[u32],
    config: &CohomologyConfig,
) -> Result<ScheduleTrace> {
    let k = degrees.len();
    if k < 3 {
        return Err(Error::Precondition(format!("need k >= 3 factors, got {k}")));
    }
    if let Some(i) = degrees.iter().position(|&d| d < 2) {
        return Err(Error::Precondition(format!(
            "d_{} = {} < 2",
            i + 1,
            degrees[i]
        )));
    }
    if degrees[0] < 3 || degrees[1] < 3 {
        return Err(Error::Precondition(
            "d_1 >= 3 and d_2 >= 3 are required".into(),
        ));
    }
    let mut dims = vec![n1, n2];
    let mut hyps = Vec::new();
    let mut goals = Vec::new();
    for j in 2..k {
        let y_format = MultiProjectiveFormat::new(dims.clone())?;
        let y_bundle = BundleDegree::new(degrees[..j].to_vec());
        let lp = LineProduct::new(y_format, y_bundle)?;
        let stage = format!(
            "stage {}: {} {} x P1, t={}",
            j + 1,
            lp.y_format,
            lp.y_bundle,
            degrees[j]
        );
        let hyp = i1_hypotheses(&stage, &lp, config)?;
        let ok = hyp.holds();
        hyps.push(hyp);
        if !ok {
            return Ok(ScheduleTrace::conclude("minus", hyps, goals));
        }
        goals.extend(i1_goals(
            &lp,
            degrees[j],
            &format!("[stage {}] ", j + 1),
            config,
        )?);
        dims.push(1);
    }
    let x = MultiProjectiveFormat::new(dims)?;
    let l = BundleDegree::new(degrees.to_vec());
    let scan = nondefectivity_scan(&x, &l, config, ScanMode::CriticalOnly)?;
    for e in scan.entries {
        goals.push(Goal::from_secant(
            format!("[final] sigma_{} of {x} {l}", e.z),
            e,
        ));
    }
    Ok(ScheduleTrace::conclude("minus", hyps, goals))
}

/// The `t = 1` statement: `sigma_z(Y x P1, L[1])` has dimension `z(n+1) - 1`
/// when `n (z - e1) + e1 <= alpha`.
pub fn replay_prop_u1(
    y_format: &MultiProjectiveFormat,
    y_bundle: &BundleDegree,
    z: usize,
    config: &CohomologyConfig,
) -> Result<(ScheduleTrace, U1Check)> {
    let lp = LineProduct::new(y_format.clone(), y_bundle.clone())?;
    let r = prop_u1_check(&lp, z, config)?;
    let mut checks = vec![check("n (z - e1) + e1 <= alpha", r.inequality_ok)];
    if let Some(ys) = &r.y_secant {
        checks.push(check(
            format!("sigma_{}(Y) has the expected dimension", ys.z),
            ys.defect == 0,
        ));
    }
    let hyp = HypothesisRecord {
        stage: "Y x P1, t=1".into(),
        y_format: lp.y_format.clone(),
        y_bundle: lp.y_bundle.clone(),
        alpha: lp.alpha,
        n: lp.n,
        split: r.split,
        checks,
        y_secant: r.y_secant.clone(),
    };
    let mut goals = Vec::new();
    if let Some(xs) = &r.x_secant {
        let mut g = Goal::from_secant(
            format!("sigma_{z} of {} {}", lp.x_format, lp.bundle(1)),
            xs.clone(),
        );
        if r.verdict == U1Verdict::Failed {
            g.status = GoalStatus::ExceedsExpected;
        }
        goals.push(g);
    }
    Ok((ScheduleTrace::conclude("u1", vec![hyp], goals), r))
}
