use serde::{Deserialize, Serialize};

use super::statements::SplitParams;

/// `(floor(N/(n+1)), ceil(N/(n+1)))`. Expected dimension at both values
/// implies it for every `z`.
pub fn critical_z(sections: usize, n: usize) -> (usize, usize) {
    let q = n + 1;
    (sections / q, sections.div_ceil(q))
}

/// The numerical quantities of the `t >= 2` induction for one `(t, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub t: i64,
    pub z: i64,
    /// `(t+1) alpha + n - z (n+1)`
    pub delta: i64,
    /// `z - (t-1) e1 - f1`
    pub w: i64,
    /// `delta + z >= t f1 + e1 + n`
    pub claim1_ok: bool,
    /// `n f1 + n (w - e1) + e1 <= alpha`, vacuous when `w < e1`.
    pub claim2_ok: bool,
    /// `(t+1) n e1 + (t+1) f1 - (n+1) t f1 - (n+1) e1 - n (n+2)`
    pub fn_t: i64,
    /// `(2n-1) n e1 + (1-2n) f1 - n (n+2)`, the closed form quoted for
    /// `t = 2`. It carries an extra factor `n` on the `e1` term compared to
    /// `fn_t` at `t = 2`; both are reported.
    pub fn_2_closed_form: i64,
}

pub fn inequality_oracles(split: &SplitParams, t: u32, z: usize) -> InequalityRecord {
    let (alpha, n, e1, f1) = (
        split.alpha as i64,
        split.n as i64,
        split.e1 as i64,
        split.f1 as i64,
    );
    let (t, z) = (t as i64, z as i64);
    let delta = (t + 1) * alpha + n - z * (n + 1);
    let w = z - (t - 1) * e1 - f1;
    let claim1_ok = delta + z >= t * f1 + e1 + n;
    let claim2_ok = w < e1 || n * f1 + n * (w - e1) + e1 <= alpha;
    let fn_t = (t + 1) * n * e1 + (t + 1) * f1 - (n + 1) * t * f1 - (n + 1) * e1 - n * (n + 2);
    let fn_2_closed_form = (2 * n - 1) * n * e1 + (1 - 2 * n) * f1 - n * (n + 2);
    InequalityRecord {
        t,
        z,
        delta,
        w,
        claim1_ok,
        claim2_ok,
        fn_t,
        fn_2_closed_form,
    }
}
