//! Products of projective spaces, multidegree line bundles and the
//! evaluation/derivative rows that a point condition imposes on sections.
//!
//! Sections of `O(d_1, ..., d_k)` on `P^{n_1} x ... x P^{n_k}` are spanned by
//! products of one monomial of degree `d_i` per factor. The canonical basis
//! order is lexicographic over factors (first factor most significant) and
//! descending lexicographic on exponent vectors within a factor, so the first
//! basis element is `x_{1,0}^{d_1} ... x_{k,0}^{d_k}`.
//!
//! Derivatives are taken in the affine chart where coordinate 0 of every factor
//! is nonzero. Moving coordinate `j >= 1` of factor `i` with the others held
//! fixed is an affine direction of that chart, so the derivative row is the
//! homogeneous partial `d/dx_{i,j}` evaluated at the point. This gives exactly
//! `n_i` rows per factor.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::PrimeField;

/// The ambient product `P^{n_1} x ... x P^{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiProjectiveFormat {
    factor_dims: Vec<usize>,
}

impl MultiProjectiveFormat {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() {
            return Err(Error::InvalidFormat(
                "at least one factor is required".into(),
            ));
        }
        if let Some(i) = factor_dims.iter().position(|&n| n == 0) {
            return Err(Error::InvalidFormat(format!("factor {i} has dimension 0")));
        }
        Ok(Self { factor_dims })
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn num_factors(&self) -> usize {
        self.factor_dims.len()
    }

    /// Sum of the factor dimensions.
    pub fn ambient_dim(&self) -> usize {
        self.factor_dims.iter().sum()
    }

    pub fn with_factor(&self, dim: usize) -> Result<Self> {
        let mut dims = self.factor_dims.clone();
        dims.push(dim);
        Self::new(dims)
    }

    pub fn without_factor(&self, index: usize) -> Result<Self> {
        if index >= self.factor_dims.len() {
            return Err(Error::InvalidFormat(format!("no factor {index}")));
        }
        let mut dims = self.factor_dims.clone();
        dims.remove(index);
        Self::new(dims)
    }
}

impl fmt::Display for MultiProjectiveFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factor_dims.iter().map(|n| format!("P{n}")).collect();
        f.write_str(&parts.join("x"))
    }
}

/// A multidegree `(d_1, ..., d_k)`, i.e. the line bundle `O(d_1, ..., d_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleDegree {
    degrees: Vec<u32>,
}

impl BundleDegree {
    pub fn new(degrees: Vec<u32>) -> Self {
        Self { degrees }
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// `L[t]`: append one more factor of degree `t`.
    pub fn with_factor(&self, t: u32) -> Self {
        let mut degrees = self.degrees.clone();
        degrees.push(t);
        Self { degrees }
    }

    pub fn without_factor(&self, index: usize) -> Self {
        let mut degrees = self.degrees.clone();
        degrees.remove(index);
        Self { degrees }
    }

    /// Twist by minus the divisor `{o}` on factor `index`.
    pub fn twisted_down(&self, index: usize) -> Result<Self> {
        let mut degrees = self.degrees.clone();
        match degrees.get_mut(index) {
            Some(0) => Err(Error::TwistUnderflow { factor: index }),
            Some(d) => {
                *d -= 1;
                Ok(Self { degrees })
            }
            None => Err(Error::InvalidDivisor(format!("no factor {index}"))),
        }
    }
}

impl fmt::Display for BundleDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(u32::to_string).collect();
        write!(f, "O({})", parts.join(","))
    }
}

fn check_lengths(format: &MultiProjectiveFormat, bundle: &BundleDegree) -> Result<()> {
    if format.num_factors() != bundle.degrees.len() {
        return Err(Error::LengthMismatch {
            factors: format.num_factors(),
            degrees: bundle.degrees.len(),
        });
    }
    Ok(())
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `h^0(O(d_1, ..., d_k)) = prod C(n_i + d_i, n_i)`.
pub fn basis_size(format: &MultiProjectiveFormat, bundle: &BundleDegree) -> Result<usize> {
    check_lengths(format, bundle)?;
    format
        .factor_dims
        .iter()
        .zip(&bundle.degrees)
        .try_fold(1usize, |acc, (&n, &d)| {
            let b = binomial(n as u64 + d as u64, n as u64)?;
            acc.checked_mul(usize::try_from(b).ok()?)
        })
        .ok_or(Error::BasisOverflow)
}

/// Exponent vectors of length `len` summing to `degree`, in descending
/// lexicographic order.
fn exponent_vectors(len: usize, degree: u32) -> Vec<Vec<u32>> {
    if len == 1 {
        return vec![vec![degree]];
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in exponent_vectors(len - 1, degree - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// One basis section: an exponent vector per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub exponents: Vec<Vec<u32>>,
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, exps) in self.exponents.iter().enumerate() {
            for (j, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "x{i}_{j}")?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// The ordered monomial basis of the complete linear system.
pub fn monomial_basis(
    format: &MultiProjectiveFormat,
    bundle: &BundleDegree,
) -> Result<Vec<Monomial>> {
    check_lengths(format, bundle)?;
    let mut acc: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    for (&n, &d) in format.factor_dims.iter().zip(&bundle.degrees) {
        let local = exponent_vectors(n + 1, d);
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                local.iter().map(move |e| {
                    let mut m = prefix.clone();
                    m.push(e.clone());
                    m
                })
            })
            .collect();
    }
    Ok(acc
        .into_iter()
        .map(|exponents| Monomial { exponents })
        .collect())
}

/// A point of the product: one homogeneous coordinate vector per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MPPoint {
    pub coords: Vec<Vec<u64>>,
}

impl MPPoint {
    /// Coordinates scaled so that coordinate 0 of every factor is 1. Two
    /// points are the same projective point iff their normal forms agree.
    pub fn normalized(&self, field: &PrimeField) -> Option<MPPoint> {
        let coords = self
            .coords
            .iter()
            .map(|v| {
                let inv = field.inv(v[0])?;
                Some(v.iter().map(|&x| field.mul(x, inv)).collect())
            })
            .collect::<Option<Vec<Vec<u64>>>>()?;
        Some(MPPoint { coords })
    }

    pub fn conforms_to(&self, format: &MultiProjectiveFormat) -> bool {
        self.coords.len() == format.num_factors()
            && self
                .coords
                .iter()
                .zip(format.factor_dims())
                .all(|(v, &n)| v.len() == n + 1)
    }

    pub fn without_factor(&self, index: usize) -> MPPoint {
        let mut coords = self.coords.clone();
        coords.remove(index);
        MPPoint { coords }
    }
}

/// A uniformly random point with every chart coordinate nonzero.
pub fn sample_point<R: Rng + ?Sized>(
    format: &MultiProjectiveFormat,
    field: &PrimeField,
    rng: &mut R,
) -> MPPoint {
    let p = field.modulus();
    let coords = format
        .factor_dims
        .iter()
        .map(|&n| {
            let mut v: Vec<u64> = (0..=n).map(|_| rng.gen_range(0..p)).collect();
            while v[0] == 0 {
                v[0] = rng.gen_range(0..p);
            }
            v
        })
        .collect();
    MPPoint { coords }
}

/// The divisor `{o}` on a `P^1` factor, i.e. `Y x {o}` when that factor is
/// the last one and `Y` is the product of the others.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorHandle {
    pub factor_index: usize,
    pub chart_value: Vec<u64>,
}

impl DivisorHandle {
    /// The divisor at `(1:0)` on factor `factor_index`.
    pub fn new(format: &MultiProjectiveFormat, factor_index: usize) -> Result<Self> {
        Self::with_chart_value(format, factor_index, vec![1, 0])
    }

    pub fn with_chart_value(
        format: &MultiProjectiveFormat,
        factor_index: usize,
        chart_value: Vec<u64>,
    ) -> Result<Self> {
        match format.factor_dims().get(factor_index) {
            None => Err(Error::InvalidDivisor(format!("no factor {factor_index}"))),
            Some(&1) if chart_value.len() == 2 && chart_value[0] != 0 => Ok(Self {
                factor_index,
                chart_value,
            }),
            Some(&1) => Err(Error::InvalidDivisor(
                "chart value must be a point (a:b) of P1 with a != 0".into(),
            )),
            Some(&n) => Err(Error::InvalidDivisor(format!(
                "factor {factor_index} is P{n}; only P1 factors carry a point divisor"
            ))),
        }
    }

    /// The divisor on the last factor, the standard `H = Y x {o}`.
    pub fn last_factor(format: &MultiProjectiveFormat) -> Result<Self> {
        Self::new(format, format.num_factors() - 1)
    }

    pub fn contains(&self, p: &MPPoint, field: &PrimeField) -> bool {
        let Some(v) = p.coords.get(self.factor_index) else {
            return false;
        };
        let c = &self.chart_value;
        if v.len() != c.len() || v.iter().all(|&x| field.reduce(x) == 0) {
            return false;
        }
        (0..c.len())
            .all(|a| (a + 1..c.len()).all(|b| field.mul(v[a], c[b]) == field.mul(v[b], c[a])))
    }

    /// The format of the divisor itself, `Y`.
    pub fn divisor_format(&self, format: &MultiProjectiveFormat) -> Result<MultiProjectiveFormat> {
        format.without_factor(self.factor_index).map_err(|_| {
            Error::InvalidDivisor("the divisor of a single P1 is a point, not a product".into())
        })
    }
}

/// Moves `p` onto the divisor by replacing the divisor factor's coordinates.
pub fn on_divisor(p: &MPPoint, d: &DivisorHandle) -> MPPoint {
    let mut q = p.clone();
    q.coords[d.factor_index] = d.chart_value.clone();
    q
}

/// What a single support point imposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConditionKind {
    /// Vanishing at the point.
    Reduced,
    /// The double point of the ambient product: value and every first
    /// derivative.
    DoubleAmbient,
    /// The double point of the divisor: value and the derivatives tangent
    /// to the divisor.
    DoubleInDivisor,
}

/// Minimal ring interface needed to evaluate monomials and their partials.
pub trait Arith {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn scalar(&self, x: u32) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, e: u32) -> Self::Elem {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }
}

impl Arith for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.modulus()
    }

    fn scalar(&self, x: u32) -> u64 {
        self.reduce(x as u64)
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::mul(self, *a, *b)
    }

    fn pow(&self, a: &u64, e: u32) -> u64 {
        PrimeField::pow(self, *a, e as u64)
    }
}

/// The integers, for building exact lifts of condition matrices.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl Arith for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn scalar(&self, x: u32) -> BigInt {
        BigInt::from(x)
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
}

/// Monomial basis of one `(format, bundle)` pair, laid out per factor for
/// fast row evaluation.
#[derive(Debug, Clone)]
pub struct SectionBasis {
    format: MultiProjectiveFormat,
    bundle: BundleDegree,
    local: Vec<Vec<Vec<u32>>>,
    size: usize,
}

impl SectionBasis {
    pub fn new(format: &MultiProjectiveFormat, bundle: &BundleDegree) -> Result<Self> {
        let size = basis_size(format, bundle)?;
        let local = format
            .factor_dims
            .iter()
            .zip(&bundle.degrees)
            .map(|(&n, &d)| exponent_vectors(n + 1, d))
            .collect();
        Ok(Self {
            format: format.clone(),
            bundle: bundle.clone(),
            local,
            size,
        })
    }

    pub fn format(&self) -> &MultiProjectiveFormat {
        &self.format
    }

    pub fn bundle(&self) -> &BundleDegree {
        &self.bundle
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Rows imposed at a point. `skip_factor` names the factor whose
    /// directions are omitted for [`ConditionKind::DoubleInDivisor`].
    pub fn rows_in<A: Arith>(
        &self,
        arith: &A,
        coords: &[Vec<A::Elem>],
        kind: ConditionKind,
        skip_factor: Option<usize>,
    ) -> Vec<Vec<A::Elem>> {
        // per factor: values of every local monomial, and of its partials
        let mut values: Vec<Vec<A::Elem>> = Vec::with_capacity(self.local.len());
        let mut partials: Vec<Vec<Vec<A::Elem>>> = Vec::with_capacity(self.local.len());
        for (x, monos) in coords.iter().zip(&self.local) {
            let powers: Vec<Vec<A::Elem>> = x
                .iter()
                .map(|c| {
                    let top = monos
                        .first()
                        .map_or(0, |m| m.iter().copied().max().unwrap_or(0));
                    let mut pw = vec![arith.one()];
                    for _ in 0..top {
                        let next = arith.mul(pw.last().unwrap(), c);
                        pw.push(next);
                    }
                    pw
                })
                .collect();
            let eval = |m: &[u32]| -> A::Elem {
                m.iter().enumerate().fold(arith.one(), |acc, (j, &e)| {
                    arith.mul(&acc, &powers[j][e as usize])
                })
            };
            values.push(monos.iter().map(|m| eval(m)).collect());
            let dirs = (1..x.len())
                .map(|j| {
                    monos
                        .iter()
                        .map(|m| {
                            if m[j] == 0 {
                                return arith.zero();
                            }
                            let mut lowered = m.clone();
                            lowered[j] -= 1;
                            arith.mul(&arith.scalar(m[j]), &eval(&lowered))
                        })
                        .collect()
                })
                .collect();
            partials.push(dirs);
        }

        let expand = |replace: Option<(usize, &Vec<A::Elem>)>| -> Vec<A::Elem> {
            let mut acc = vec![arith.one()];
            for (i, vals) in values.iter().enumerate() {
                let vals = match replace {
                    Some((ri, r)) if ri == i => r,
                    _ => vals,
                };
                let mut next = Vec::with_capacity(acc.len() * vals.len());
                for a in &acc {
                    for v in vals {
                        next.push(arith.mul(a, v));
                    }
                }
                acc = next;
            }
            acc
        };

        let mut rows = vec![expand(None)];
        match kind {
            ConditionKind::Reduced => {}
            ConditionKind::DoubleAmbient | ConditionKind::DoubleInDivisor => {
                let skip = if kind == ConditionKind::DoubleInDivisor {
                    skip_factor
                } else {
                    None
                };
                for (i, dirs) in partials.iter().enumerate() {
                    if Some(i) == skip {
                        continue;
                    }
                    for d in dirs {
                        rows.push(expand(Some((i, d))));
                    }
                }
            }
        }
        rows
    }

    /// Field rows at `p`, checking divisor membership where needed.
    pub fn rows(
        &self,
        field: &PrimeField,
        p: &MPPoint,
        kind: ConditionKind,
        divisor: Option<&DivisorHandle>,
    ) -> Result<Vec<Vec<u64>>> {
        if !p.conforms_to(&self.format) {
            return Err(Error::Precondition(
                "point does not match the format".into(),
            ));
        }
        let skip = match kind {
            ConditionKind::DoubleInDivisor => {
                let d = divisor.ok_or_else(|| {
                    Error::Precondition("a divisor double point needs a divisor".into())
                })?;
                if !d.contains(p, field) {
                    return Err(Error::PointNotOnDivisor);
                }
                Some(d.factor_index)
            }
            _ => None,
        };
        let coords: Vec<Vec<u64>> = p
            .coords
            .iter()
            .map(|v| v.iter().map(|&x| field.reduce(x)).collect())
            .collect();
        Ok(self.rows_in(field, &coords, kind, skip))
    }

    /// Exact integer rows at an integer point.
    pub fn integer_rows(
        &self,
        coords: &[Vec<i64>],
        kind: ConditionKind,
        skip_factor: Option<usize>,
    ) -> Vec<Vec<BigInt>> {
        let coords: Vec<Vec<BigInt>> = coords
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        self.rows_in(&Integers, &coords, kind, skip_factor)
    }
}

/// Rows imposed by a point condition on sections of `bundle`.
pub fn condition_rows(
    p: &MPPoint,
    kind: ConditionKind,
    format: &MultiProjectiveFormat,
    bundle: &BundleDegree,
    divisor: Option<&DivisorHandle>,
    field: &PrimeField,
) -> Result<Vec<Vec<u64>>> {
    SectionBasis::new(format, bundle)?.rows(field, p, kind, divisor)
}
