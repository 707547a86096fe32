//! Checks of the vanishing statements `A(t,z)`, `B(t,z)`, `C(t,z)` on
//! `X = Y x P1` with bundle `L[t] = L ⊠ O(t)` and divisor `H = Y x {o}`.

use serde::{Deserialize, Serialize};

use super::{cohomology, secant_dimension, CohomologyConfig, CohomologyResult, SecantDimension};
use crate::error::{Error, Result};
use crate::schemes::{degree, Location, SchemeDescriptor};
use crate::variety::{
    basis_size, BundleDegree, ConditionKind, DivisorHandle, MultiProjectiveFormat,
};

/// `alpha = n e + f`. The standard split has `e = floor(alpha / n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitParams {
    pub alpha: usize,
    pub n: usize,
    pub e1: usize,
    pub f1: usize,
}

pub fn split_params(alpha: usize, n: usize) -> Result<SplitParams> {
    if alpha == 0 || n == 0 {
        return Err(Error::Precondition("alpha and n must be positive".into()));
    }
    let e1 = alpha / n;
    Ok(SplitParams {
        alpha,
        n,
        e1,
        f1: alpha - n * e1,
    })
}

impl SplitParams {
    /// Any pair with `n e + f = alpha`.
    pub fn custom(alpha: usize, n: usize, e: usize, f: usize) -> Result<Self> {
        if n == 0 || n * e + f != alpha {
            return Err(Error::Precondition(format!("{n} * {e} + {f} != {alpha}")));
        }
        Ok(Self {
            alpha,
            n,
            e1: e,
            f1: f,
        })
    }

    /// `(e1 - 1, f1 + n)`.
    pub fn shifted(&self) -> Result<Self> {
        if self.e1 == 0 {
            return Err(Error::Precondition("e1 = 0 cannot be shifted".into()));
        }
        Self::custom(self.alpha, self.n, self.e1 - 1, self.f1 + self.n)
    }

    pub fn e_plus_f(&self) -> usize {
        self.e1 + self.f1
    }
}

/// `Y` together with `L`, and the derived `X = Y x P1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineProduct {
    pub y_format: MultiProjectiveFormat,
    pub y_bundle: BundleDegree,
    pub x_format: MultiProjectiveFormat,
    /// `h^0(L)`
    pub alpha: usize,
    /// `dim X`
    pub n: usize,
    pub divisor: DivisorHandle,
}

impl LineProduct {
    pub fn new(y_format: MultiProjectiveFormat, y_bundle: BundleDegree) -> Result<Self> {
        let alpha = basis_size(&y_format, &y_bundle)?;
        let x_format = y_format.with_factor(1)?;
        let divisor = DivisorHandle::last_factor(&x_format)?;
        Ok(Self {
            n: x_format.ambient_dim(),
            y_format,
            y_bundle,
            x_format,
            alpha,
            divisor,
        })
    }

    /// `L[t]`
    pub fn bundle(&self, t: u32) -> BundleDegree {
        self.y_bundle.with_factor(t)
    }

    pub fn split(&self) -> SplitParams {
        split_params(self.alpha, self.n).expect("alpha and n are positive")
    }

    /// Critical `z` for `L[t]`: `floor` and `ceil` of `(t+1) alpha / (n+1)`.
    pub fn critical_z(&self, t: u32) -> Vec<usize> {
        super::scan_values(
            (t as usize + 1) * self.alpha,
            self.n,
            super::ScanMode::CriticalOnly,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StatementKind {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StatementVerdict {
    /// Certified on a sampled instance.
    Holds,
    /// No trial reached the bound; Monte-Carlo evidence that it fails.
    Fails,
    /// True by definition for these parameters; nothing to compute.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementCheck {
    pub statement: StatementKind,
    pub t: u32,
    pub z: usize,
    pub split: SplitParams,
    pub verdict: StatementVerdict,
    /// The bound the computed `h^0` is compared with.
    pub bound_h0: usize,
    /// For `B`: the bound with the roles of `e1` and `f1` exchanged in the
    /// divisor part, `max(0, t alpha - (n+1)(z-e1-f1) - n e1 - f1)`.
    pub alternate_bound_h0: Option<usize>,
    pub scheme: SchemeDescriptor,
    pub bundle: BundleDegree,
    pub cohomology: Option<CohomologyResult>,
}

impl StatementCheck {
    pub fn label(&self) -> String {
        format!("{:?}(t={},z={})", self.statement, self.t, self.z)
    }

    fn vacuous(
        statement: StatementKind,
        t: u32,
        z: usize,
        split: SplitParams,
        bundle: BundleDegree,
        bound_h0: usize,
    ) -> Self {
        Self {
            statement,
            t,
            z,
            split,
            verdict: StatementVerdict::Vacuous,
            bound_h0,
            alternate_bound_h0: None,
            scheme: SchemeDescriptor::empty(),
            bundle,
            cohomology: None,
        }
    }
}

fn verdict_of(c: &CohomologyResult, bound: usize) -> StatementVerdict {
    if c.h0 <= bound {
        StatementVerdict::Holds
    } else {
        StatementVerdict::Fails
    }
}

/// `A(t,z)`: `h^0(I_{2S} ⊗ L[t]) = max(alpha (t+1) - (n+1) z, 0)`.
pub fn statement_a(
    lp: &LineProduct,
    t: u32,
    z: usize,
    config: &CohomologyConfig,
) -> Result<StatementCheck> {
    let bundle = lp.bundle(t);
    let scheme = SchemeDescriptor::double_points(z);
    let c = cohomology(&scheme, &lp.x_format, &bundle, None, config)?;
    let bound = (lp.alpha * (t as usize + 1)).saturating_sub((lp.n + 1) * z);
    debug_assert_eq!(bound, c.expected_h0);
    Ok(StatementCheck {
        statement: StatementKind::A,
        t,
        z,
        split: lp.split(),
        verdict: verdict_of(&c, bound),
        bound_h0: bound,
        alternate_bound_h0: None,
        scheme,
        bundle,
        cohomology: Some(c),
    })
}

/// `B(t,z)`: vacuous when `z < e + f`; otherwise the union of `z - e - f`
/// double points of `X`, `f` double points of `H` and `e` points of `H`
/// imposes independent conditions on `L[t-1]`.
pub fn statement_b(
    lp: &LineProduct,
    t: u32,
    z: usize,
    split: &SplitParams,
    config: &CohomologyConfig,
) -> Result<StatementCheck> {
    if t == 0 {
        return Err(Error::Precondition("B(t,z) needs t >= 1".into()));
    }
    let bundle = lp.bundle(t - 1);
    let sections = t as usize * lp.alpha;
    if z < split.e_plus_f() {
        return Ok(StatementCheck::vacuous(
            StatementKind::B,
            t,
            z,
            *split,
            bundle,
            sections,
        ));
    }
    let ambient = z - split.e_plus_f();
    let scheme = SchemeDescriptor::double_points(ambient)
        .with(
            ConditionKind::DoubleInDivisor,
            Location::GeneralOnDivisor,
            split.f1,
        )
        .with(ConditionKind::Reduced, Location::GeneralOnDivisor, split.e1);
    let n = lp.n;
    debug_assert_eq!(
        degree(&scheme, &lp.x_format),
        (n + 1) * ambient + n * split.f1 + split.e1
    );
    let bound = sections.saturating_sub((n + 1) * ambient + n * split.f1 + split.e1);
    let alternate = sections.saturating_sub((n + 1) * ambient + n * split.e1 + split.f1);
    let c = cohomology(&scheme, &lp.x_format, &bundle, Some(&lp.divisor), config)?;
    Ok(StatementCheck {
        statement: StatementKind::B,
        t,
        z,
        split: *split,
        verdict: verdict_of(&c, bound),
        bound_h0: bound,
        alternate_bound_h0: Some(alternate),
        scheme,
        bundle,
        cohomology: Some(c),
    })
}

/// `C(t,z)`: `h^0(I_W ⊗ L[t-2]) <= max(0, (t-1) alpha - deg W)` for `W` a
/// union of `max(0, z - e - f)` general double points.
pub fn statement_c(
    lp: &LineProduct,
    t: u32,
    z: usize,
    split: &SplitParams,
    config: &CohomologyConfig,
) -> Result<StatementCheck> {
    if t < 2 {
        return Err(Error::Precondition("C(t,z) needs t >= 2".into()));
    }
    let bundle = lp.bundle(t - 2);
    let sections = (t as usize - 1) * lp.alpha;
    let w = z.saturating_sub(split.e_plus_f());
    if w == 0 {
        return Ok(StatementCheck::vacuous(
            StatementKind::C,
            t,
            z,
            *split,
            bundle,
            sections,
        ));
    }
    let scheme = SchemeDescriptor::double_points(w);
    let bound = sections.saturating_sub(degree(&scheme, &lp.x_format));
    let c = cohomology(&scheme, &lp.x_format, &bundle, None, config)?;
    Ok(StatementCheck {
        statement: StatementKind::C,
        t,
        z,
        split: *split,
        verdict: verdict_of(&c, bound),
        bound_h0: bound,
        alternate_bound_h0: None,
        scheme,
        bundle,
        cohomology: Some(c),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum U1Verdict {
    Verified,
    Failed,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct U1Check {
    pub z: usize,
    pub split: SplitParams,
    /// `n (z - e1) + e1`, compared with `alpha`.
    pub hypothesis_lhs: i64,
    pub inequality_ok: bool,
    /// `sigma_{e1}(Y)` has the expected dimension.
    pub y_secant: Option<SecantDimension>,
    pub x_secant: Option<SecantDimension>,
    pub verdict: U1Verdict,
}

/// For `n (z - e1) + e1 <= alpha` and `sigma_{e1}(Y)` of expected dimension,
/// checks that `sigma_z(X, L[1])` has dimension `z (n+1) - 1`.
pub fn prop_u1_check(lp: &LineProduct, z: usize, config: &CohomologyConfig) -> Result<U1Check> {
    if z == 0 {
        return Err(Error::Precondition("z must be positive".into()));
    }
    let split = lp.split();
    let lhs = lp.n as i64 * (z as i64 - split.e1 as i64) + split.e1 as i64;
    let inequality_ok = lhs <= lp.alpha as i64;
    let mut out = U1Check {
        z,
        split,
        hypothesis_lhs: lhs,
        inequality_ok,
        y_secant: None,
        x_secant: None,
        verdict: U1Verdict::NotApplicable,
    };
    if !inequality_ok {
        return Ok(out);
    }
    if split.e1 > 0 {
        let ys = secant_dimension(&lp.y_format, &lp.y_bundle, split.e1, config)?;
        let ok = ys.defect == 0;
        out.y_secant = Some(ys);
        if !ok {
            return Ok(out);
        }
    }
    let xs = secant_dimension(&lp.x_format, &lp.bundle(1), z, config)?;
    out.verdict = if xs.dim == z * (lp.n + 1) - 1 {
        U1Verdict::Verified
    } else {
        U1Verdict::Failed
    };
    out.x_secant = Some(xs);
    Ok(out)
}
