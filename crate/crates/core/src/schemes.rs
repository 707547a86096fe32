//! Symbolic zero-dimensional schemes built from reduced points, double
//! points and double points of a divisor, with the residual/trace calculus
//! with respect to a divisor `D`:
//!
//! * `deg(Z) = deg(Res_D(Z)) + deg(Z ∩ D)`
//! * `Res_D(2p) = {p}` and `2p ∩ D = (2p, D)` for `p ∈ D`
//! * `Res_D(Z) = Z` when `Z ∩ D = ∅`, and `Res_D(Z) = ∅` when `Z ⊂ D`.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::PrimeField;
use crate::variety::{
    on_divisor, sample_point, BundleDegree, ConditionKind, DivisorHandle, MPPoint,
    MultiProjectiveFormat,
};

const RESAMPLE_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Location {
    GeneralAmbient,
    GeneralOnDivisor,
    Fixed(MPPoint),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub kind: ConditionKind,
    pub location: Location,
    pub count: usize,
}

/// A finite union of point conditions, kept symbolic until realized.
///
/// Components are normalized on construction: zero counts are dropped,
/// general components with the same kind and location are merged, and the
/// list is sorted by `(kind, location)`. The serialized form is therefore
/// canonical.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Component>", into = "Vec<Component>")]
pub struct SchemeDescriptor {
    components: Vec<Component>,
}

impl SchemeDescriptor {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        let mut out: Vec<Component> = Vec::new();
        for c in components {
            if c.count == 0 {
                continue;
            }
            match (&c.kind, &c.location) {
                (ConditionKind::DoubleInDivisor, Location::GeneralAmbient) => {
                    return Err(Error::Precondition(
                        "a divisor double point must be located on the divisor".into(),
                    ))
                }
                (_, Location::Fixed(_)) if c.count != 1 => {
                    return Err(Error::Precondition(
                        "a fixed location carries exactly one point".into(),
                    ))
                }
                _ => {}
            }
            let mergeable = !matches!(c.location, Location::Fixed(_));
            match out
                .iter_mut()
                .find(|o| mergeable && o.kind == c.kind && o.location == c.location)
            {
                Some(o) => o.count += c.count,
                None => out.push(c),
            }
        }
        out.sort_by(|a, b| (a.kind, &a.location).cmp(&(b.kind, &b.location)));
        Ok(Self { components: out })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `count` general double points of the ambient space.
    pub fn double_points(count: usize) -> Self {
        Self::empty().with(
            ConditionKind::DoubleAmbient,
            Location::GeneralAmbient,
            count,
        )
    }

    /// Adds a general component. Panics on the invalid combination of a
    /// divisor double point with an ambient location.
    pub fn with(mut self, kind: ConditionKind, location: Location, count: usize) -> Self {
        self.components.push(Component {
            kind,
            location,
            count,
        });
        Self::new(self.components).expect("valid component")
    }

    pub fn union(&self, other: &SchemeDescriptor) -> Self {
        let mut all = self.components.clone();
        all.extend(other.components.iter().cloned());
        Self::new(all).expect("union of valid descriptors")
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn point_count(&self) -> usize {
        self.components.iter().map(|c| c.count).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("descriptor serializes")
    }
}

impl TryFrom<Vec<Component>> for SchemeDescriptor {
    type Error = Error;

    fn try_from(components: Vec<Component>) -> Result<Self> {
        Self::new(components)
    }
}

impl From<SchemeDescriptor> for Vec<Component> {
    fn from(s: SchemeDescriptor) -> Self {
        s.components
    }
}

/// Length of one condition of `kind` on a space of dimension `n`.
pub fn kind_degree(kind: ConditionKind, n: usize) -> usize {
    match kind {
        ConditionKind::Reduced => 1,
        ConditionKind::DoubleAmbient => n + 1,
        ConditionKind::DoubleInDivisor => n,
    }
}

pub fn degree(s: &SchemeDescriptor, format: &MultiProjectiveFormat) -> usize {
    let n = format.ambient_dim();
    s.components
        .iter()
        .map(|c| c.count * kind_degree(c.kind, n))
        .sum()
}

/// The residual and the trace of a scheme with respect to a divisor, with
/// the bundles each one lives in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualPair {
    /// `Res_D(Z)` on the ambient space.
    pub residual: SchemeDescriptor,
    /// The bundle twisted by `-D`.
    pub residual_bundle: BundleDegree,
    /// `Z ∩ D`, written in the ambient space (every component lies on `D`).
    pub trace: SchemeDescriptor,
    /// The bundle restricted to `D`, i.e. without the divisor factor.
    pub trace_bundle: BundleDegree,
}

impl ResidualPair {
    /// The trace rewritten on `D` itself: divisor double points become
    /// double points of `D`, and fixed points drop the divisor factor.
    pub fn trace_on_divisor(&self, d: &DivisorHandle) -> SchemeDescriptor {
        restrict_to_divisor(&self.trace, d)
    }
}

/// Rewrites a scheme supported on `D` as a scheme on `D`'s own format.
pub fn restrict_to_divisor(s: &SchemeDescriptor, d: &DivisorHandle) -> SchemeDescriptor {
    let components = s
        .components
        .iter()
        .map(|c| Component {
            kind: match c.kind {
                ConditionKind::DoubleInDivisor => ConditionKind::DoubleAmbient,
                k => k,
            },
            location: match &c.location {
                Location::Fixed(p) => Location::Fixed(p.without_factor(d.factor_index)),
                _ => Location::GeneralAmbient,
            },
            count: c.count,
        })
        .collect();
    SchemeDescriptor::new(components).expect("restriction of a valid descriptor")
}

/// Splits `s` into residual and trace with respect to `d`.
pub fn residual_split(
    s: &SchemeDescriptor,
    bundle: &BundleDegree,
    d: &DivisorHandle,
    field: &PrimeField,
) -> Result<ResidualPair> {
    let residual_bundle = bundle.twisted_down(d.factor_index)?;
    let trace_bundle = bundle.without_factor(d.factor_index);
    let mut residual = Vec::new();
    let mut trace = Vec::new();
    for c in &s.components {
        let on_d = match &c.location {
            Location::GeneralAmbient => false,
            Location::GeneralOnDivisor => true,
            Location::Fixed(p) => d.contains(p, field),
        };
        let same = |kind| Component {
            kind,
            location: c.location.clone(),
            count: c.count,
        };
        match (c.kind, on_d) {
            (_, false) => residual.push(c.clone()),
            (ConditionKind::DoubleAmbient, true) => {
                residual.push(same(ConditionKind::Reduced));
                trace.push(same(ConditionKind::DoubleInDivisor));
            }
            (ConditionKind::Reduced | ConditionKind::DoubleInDivisor, true) => {
                trace.push(c.clone())
            }
        }
    }
    if s.components.iter().any(|c| {
        c.kind == ConditionKind::DoubleInDivisor
            && matches!(&c.location, Location::Fixed(p) if !d.contains(p, field))
    }) {
        return Err(Error::PointNotOnDivisor);
    }
    Ok(ResidualPair {
        residual: SchemeDescriptor::new(residual)?,
        residual_bundle,
        trace: SchemeDescriptor::new(trace)?,
        trace_bundle,
    })
}

/// Samples concrete support points for every component.
///
/// General points are uniform over the field (on the divisor for
/// `GeneralOnDivisor`), fixed points are kept, and all points are pairwise
/// distinct as projective points.
pub fn realize<R: Rng + ?Sized>(
    s: &SchemeDescriptor,
    format: &MultiProjectiveFormat,
    field: &PrimeField,
    rng: &mut R,
    divisor: Option<&DivisorHandle>,
) -> Result<Vec<(MPPoint, ConditionKind)>> {
    let total = s.point_count();
    let mut seen: HashSet<MPPoint> = HashSet::with_capacity(total);
    let mut out = Vec::with_capacity(total);
    for c in &s.components {
        for _ in 0..c.count {
            let point = match &c.location {
                Location::Fixed(p) => {
                    if !p.conforms_to(format) {
                        return Err(Error::Precondition(
                            "fixed point does not match the format".into(),
                        ));
                    }
                    let key = p.normalized(field).ok_or_else(|| {
                        Error::Precondition("fixed point has a zero chart coordinate".into())
                    })?;
                    if !seen.insert(key) {
                        return Err(Error::Precondition("repeated fixed point".into()));
                    }
                    p.clone()
                }
                loc => {
                    let mut attempt = 0;
                    loop {
                        let mut p = sample_point(format, field, rng);
                        if *loc == Location::GeneralOnDivisor {
                            let d = divisor.ok_or_else(|| {
                                Error::Precondition("points on the divisor need a divisor".into())
                            })?;
                            p = on_divisor(&p, d);
                        }
                        if seen.insert(p.normalized(field).expect("chart is nonzero")) {
                            break p;
                        }
                        attempt += 1;
                        if attempt >= RESAMPLE_CAP {
                            return Err(Error::RealizationRetryCap {
                                wanted: total,
                                attempts: attempt,
                            });
                        }
                    }
                }
            };
            out.push((point, c.kind));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const KINDS: [ConditionKind; 3] = [
        ConditionKind::Reduced,
        ConditionKind::DoubleAmbient,
        ConditionKind::DoubleInDivisor,
    ];

    fn p1_cubed() -> MultiProjectiveFormat {
        MultiProjectiveFormat::new(vec![1, 1, 1]).unwrap()
    }

    fn bundle() -> BundleDegree {
        BundleDegree::new(vec![3, 3, 2])
    }

    #[test]
    fn degrees() {
        let x = p1_cubed();
        assert_eq!(degree(&SchemeDescriptor::double_points(3), &x), 12);
        let one = SchemeDescriptor::empty().with(
            ConditionKind::DoubleInDivisor,
            Location::GeneralOnDivisor,
            1,
        );
        assert_eq!(degree(&one, &x), 3);
        assert_eq!(degree(&SchemeDescriptor::empty(), &x), 0);
    }

    #[test]
    fn normalization_is_canonical() {
        let a = SchemeDescriptor::empty()
            .with(ConditionKind::Reduced, Location::GeneralOnDivisor, 2)
            .with(ConditionKind::DoubleAmbient, Location::GeneralAmbient, 1)
            .with(ConditionKind::DoubleAmbient, Location::GeneralAmbient, 2)
            .with(ConditionKind::Reduced, Location::GeneralAmbient, 0);
        let b = SchemeDescriptor::double_points(3).with(
            ConditionKind::Reduced,
            Location::GeneralOnDivisor,
            2,
        );
        assert_eq!(a, b);
        assert_eq!(a.components().len(), 2);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(
            json,
            r#"[{"kind":"Reduced","location":"GeneralOnDivisor","count":2},{"kind":"DoubleAmbient","location":"GeneralAmbient","count":3}]"#
        );
        let back: SchemeDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn rejects_divisor_double_point_off_divisor() {
        let c = Component {
            kind: ConditionKind::DoubleInDivisor,
            location: Location::GeneralAmbient,
            count: 1,
        };
        assert!(SchemeDescriptor::new(vec![c]).is_err());
    }

    #[test]
    fn double_point_off_divisor_is_its_own_residual() {
        let x = p1_cubed();
        let d = DivisorHandle::last_factor(&x).unwrap();
        let s = SchemeDescriptor::double_points(1);
        let r = residual_split(&s, &bundle(), &d, &PrimeField::default()).unwrap();
        assert_eq!(r.residual, s);
        assert!(r.trace.is_empty());
        assert_eq!(r.residual_bundle.degrees(), &[3, 3, 1]);
        assert_eq!(r.trace_bundle.degrees(), &[3, 3]);
    }

    #[test]
    fn double_point_on_divisor_splits() {
        let x = p1_cubed();
        let d = DivisorHandle::last_factor(&x).unwrap();
        let s = SchemeDescriptor::empty().with(
            ConditionKind::DoubleAmbient,
            Location::GeneralOnDivisor,
            1,
        );
        let r = residual_split(&s, &bundle(), &d, &PrimeField::default()).unwrap();
        assert_eq!(
            r.residual,
            SchemeDescriptor::empty().with(ConditionKind::Reduced, Location::GeneralOnDivisor, 1)
        );
        assert_eq!(
            r.trace,
            SchemeDescriptor::empty().with(
                ConditionKind::DoubleInDivisor,
                Location::GeneralOnDivisor,
                1
            )
        );
        let y = d.divisor_format(&x).unwrap();
        let on_y = r.trace_on_divisor(&d);
        assert_eq!(on_y, SchemeDescriptor::double_points(1));
        assert_eq!(degree(&on_y, &y), degree(&r.trace, &x));
    }

    #[test]
    fn fixed_points_follow_membership() {
        let f = PrimeField::default();
        let x = p1_cubed();
        let d = DivisorHandle::last_factor(&x).unwrap();
        let on = MPPoint {
            coords: vec![vec![1, 2], vec![1, 3], vec![4, 0]],
        };
        let off = MPPoint {
            coords: vec![vec![1, 2], vec![1, 3], vec![1, 1]],
        };
        let s = SchemeDescriptor::empty()
            .with(ConditionKind::DoubleAmbient, Location::Fixed(on.clone()), 1)
            .with(
                ConditionKind::DoubleAmbient,
                Location::Fixed(off.clone()),
                1,
            );
        let r = residual_split(&s, &bundle(), &d, &f).unwrap();
        assert_eq!(degree(&r.residual, &x), 1 + 4);
        assert_eq!(degree(&r.trace, &x), 3);
        let on_y = r.trace_on_divisor(&d);
        assert_eq!(
            on_y.components()[0].location,
            Location::Fixed(MPPoint {
                coords: vec![vec![1, 2], vec![1, 3]]
            })
        );

        let bad =
            SchemeDescriptor::empty().with(ConditionKind::DoubleInDivisor, Location::Fixed(off), 1);
        assert_eq!(
            residual_split(&bad, &bundle(), &d, &f),
            Err(Error::PointNotOnDivisor)
        );
    }

    #[test]
    fn twist_underflow() {
        let x = p1_cubed();
        let d = DivisorHandle::last_factor(&x).unwrap();
        let r = residual_split(
            &SchemeDescriptor::double_points(1),
            &BundleDegree::new(vec![3, 3, 0]),
            &d,
            &PrimeField::default(),
        );
        assert_eq!(r, Err(Error::TwistUnderflow { factor: 2 }));
    }

    #[test]
    fn realization() {
        let f = PrimeField::default();
        let x = p1_cubed();
        let d = DivisorHandle::last_factor(&x).unwrap();
        let s = SchemeDescriptor::double_points(3).with(
            ConditionKind::Reduced,
            Location::GeneralOnDivisor,
            2,
        );
        let a = realize(&s, &x, &f, &mut ChaCha8Rng::seed_from_u64(1), Some(&d)).unwrap();
        let b = realize(&s, &x, &f, &mut ChaCha8Rng::seed_from_u64(1), Some(&d)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        let on_d: Vec<bool> = a.iter().map(|(p, _)| d.contains(p, &f)).collect();
        assert_eq!(on_d, [true, true, false, false, false]);
        let distinct: HashSet<_> = a.iter().map(|(p, _)| p.normalized(&f).unwrap()).collect();
        assert_eq!(distinct.len(), 5);
        assert!(realize(&s, &x, &f, &mut ChaCha8Rng::seed_from_u64(1), None).is_err());
    }

    #[test]
    fn realization_hits_retry_cap_in_tiny_field() {
        // P1 over F_2 has 3 points, only 2 with nonzero chart coordinate
        let f = PrimeField::new(2).unwrap();
        let x = MultiProjectiveFormat::new(vec![1]).unwrap();
        let s = SchemeDescriptor::double_points(3);
        let r = realize(&s, &x, &f, &mut ChaCha8Rng::seed_from_u64(0), None);
        assert!(matches!(r, Err(Error::RealizationRetryCap { .. })));
    }

    fn arb_component() -> impl Strategy<Value = Component> {
        (0usize..3, 0usize..2, 0usize..5).prop_map(|(k, l, count)| {
            let kind = KINDS[k];
            let location = if kind == ConditionKind::DoubleInDivisor || l == 1 {
                Location::GeneralOnDivisor
            } else {
                Location::GeneralAmbient
            };
            Component {
                kind,
                location,
                count,
            }
        })
    }

    fn arb_scheme() -> impl Strategy<Value = SchemeDescriptor> {
        proptest::collection::vec(arb_component(), 0..6)
            .prop_map(|c| SchemeDescriptor::new(c).unwrap())
    }

    proptest! {
        #[test]
        fn degree_is_additive(s in arb_scheme()) {
            let x = p1_cubed();
            let d = DivisorHandle::last_factor(&x).unwrap();
            let r = residual_split(&s, &bundle(), &d, &PrimeField::default()).unwrap();
            prop_assert_eq!(degree(&s, &x), degree(&r.residual, &x) + degree(&r.trace, &x));
            let y = d.divisor_format(&x).unwrap();
            prop_assert_eq!(degree(&r.trace_on_divisor(&d), &y), degree(&r.trace, &x));
        }

        #[test]
        fn residual_distributes_over_unions(a in arb_scheme(), b in arb_scheme()) {
            let x = p1_cubed();
            let d = DivisorHandle::last_factor(&x).unwrap();
            let f = PrimeField::default();
            let ra = residual_split(&a, &bundle(), &d, &f).unwrap();
            let rb = residual_split(&b, &bundle(), &d, &f).unwrap();
            let rab = residual_split(&a.union(&b), &bundle(), &d, &f).unwrap();
            prop_assert_eq!(rab.residual, ra.residual.union(&rb.residual));
            prop_assert_eq!(rab.trace, ra.trace.union(&rb.trace));
        }
    }
}
