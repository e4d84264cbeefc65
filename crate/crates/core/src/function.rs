//! Functions on a group with exact cyclotomic values, their Fourier
//! transforms, support/spectrum bookkeeping, and the symmetry operations
//! (translation, modulation, tensor product, `A(m)` action).
//!
//! A function stores only its nonzero values, so the support is exactly the
//! key set and never depends on floating-point noise; the transform output
//! is filtered through the exact zero test.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{CycField, CycNum, FieldError};
use crate::group::{Character, FiniteAbelianGroup, GroupElement, GroupError, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("function belongs to group {0}, expected {1}")]
    WrongGroup(String, String),
    #[error("A(m) with m=({0},{1}) is singular mod {2}")]
    SingularTransform(u64, u64, u64),
    #[error("operation requires a group of the form ZpxZp, got {0}")]
    NotVectorGroup(String),
    #[error("malformed serialized function: {0}")]
    Malformed(String),
}

/// A complex-valued function on a finite Abelian group; values live in
/// `Q(zeta_N)` with `N` the group exponent, and only nonzero values are
/// stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFunction {
    group: FiniteAbelianGroup,
    values: BTreeMap<GroupElement, CycNum>,
}

impl GroupFunction {
    pub fn zero(group: FiniteAbelianGroup) -> Self {
        GroupFunction {
            group,
            values: BTreeMap::new(),
        }
    }

    /// Builds from (element, value) pairs; zero values are dropped so the
    /// stored key set is exactly the support.
    pub fn from_pairs(
        group: FiniteAbelianGroup,
        pairs: impl IntoIterator<Item = (GroupElement, CycNum)>,
    ) -> Result<Self, TransformError> {
        let level = group.exponent();
        let mut values = BTreeMap::new();
        for (e, v) in pairs {
            if e.coords().len() != group.rank() {
                return Err(GroupError::ShapeMismatch {
                    expected: group.rank(),
                    got: e.coords().len(),
                }
                .into());
            }
            if v.level() != level {
                return Err(FieldError::LevelMismatch(v.level(), level).into());
            }
            if !v.is_zero() {
                values.insert(e, v);
            }
        }
        Ok(GroupFunction { group, values })
    }

    pub fn dirac(group: &FiniteAbelianGroup, at: &GroupElement) -> Self {
        let field = CycField::new(group.exponent());
        GroupFunction {
            group: group.clone(),
            values: BTreeMap::from([(at.clone(), field.one())]),
        }
    }

    /// Characteristic function of a set of elements.
    pub fn indicator(group: &FiniteAbelianGroup, set: &[GroupElement]) -> Self {
        let field = CycField::new(group.exponent());
        GroupFunction {
            group: group.clone(),
            values: set.iter().map(|e| (e.clone(), field.one())).collect(),
        }
    }

    pub fn subgroup_indicator(h: &Subgroup) -> Self {
        Self::indicator(h.group(), h.elements())
    }

    /// The character `chi_y` as a function on the group.
    pub fn character(group: &FiniteAbelianGroup, y: &Character) -> Self {
        let field = CycField::new(group.exponent());
        let values = group
            .elements()
            .expect("group within enumeration cap")
            .into_iter()
            .map(|x| {
                let e = group.pairing_exponent(&x, y).expect("same group");
                (x, field.root_of_unity(e as i64))
            })
            .collect();
        GroupFunction {
            group: group.clone(),
            values,
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn field(&self) -> Arc<CycField> {
        CycField::new(self.group.exponent())
    }

    pub fn value(&self, x: &GroupElement) -> CycNum {
        self.values
            .get(x)
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &CycNum)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// The support: exactly the stored key set.
    pub fn support(&self) -> BTreeSet<GroupElement> {
        self.values.keys().cloned().collect()
    }

    pub fn support_size(&self) -> usize {
        self.values.len()
    }

    /// The spectrum: support of the Fourier transform, computed exactly.
    pub fn spectrum(&self) -> BTreeSet<GroupElement> {
        self.dft().support()
    }

    /// `f_hat(y) = sum_x f(x) zeta_N^{-<x,y>}`, exact; only nonzero values
    /// are kept.
    pub fn dft(&self) -> GroupFunction {
        let field = self.field();
        let mut values = BTreeMap::new();
        for y in self.group.elements().expect("group within enumeration cap") {
            let mut acc = field.zero();
            for (x, v) in &self.values {
                let e = self.group.pairing_exponent(x, &y).expect("same group");
                acc = field.add(&acc, &field.mul_root(v, -(e as i64)));
            }
            if !acc.is_zero() {
                values.insert(y, acc);
            }
        }
        GroupFunction {
            group: self.group.clone(),
            values,
        }
    }

    /// Inverse transform: `f(x) = (1/|G|) sum_y g(y) zeta_N^{<x,y>}`, so
    /// that `idft(dft(f)) = f` exactly.
    pub fn idft(&self) -> GroupFunction {
        let field = self.field();
        let inv_order = field.from_rational(BigRational::new(
            BigInt::from(1),
            BigInt::from(self.group.order()),
        ));
        let mut values = BTreeMap::new();
        for x in self.group.elements().expect("group within enumeration cap") {
            let mut acc = field.zero();
            for (y, v) in &self.values {
                let e = self.group.pairing_exponent(&x, y).expect("same group");
                acc = field.add(&acc, &field.mul_root(v, e as i64));
            }
            if !acc.is_zero() {
                values.insert(x, field.mul(&acc, &inv_order));
            }
        }
        GroupFunction {
            group: self.group.clone(),
            values,
        }
    }

    /// `translate(f, a)(x) = f(x - a)`: shifts the support by `a`, leaves
    /// the spectrum set unchanged (values pick up a character factor).
    pub fn translate(&self, a: &GroupElement) -> GroupFunction {
        let values = self
            .values
            .iter()
            .map(|(x, v)| (self.group.add(x, a), v.clone()))
            .collect();
        GroupFunction {
            group: self.group.clone(),
            values,
        }
    }

    /// `modulate(f, y)(x) = chi_y(x) f(x)`: leaves the support unchanged,
    /// shifts the spectrum by `y`.
    pub fn modulate(&self, y: &Character) -> GroupFunction {
        let field = self.field();
        let values = self
            .values
            .iter()
            .map(|(x, v)| {
                let e = self.group.pairing_exponent(x, y).expect("same group");
                (x.clone(), field.mul_root(v, e as i64))
            })
            .collect();
        GroupFunction {
            group: self.group.clone(),
            values,
        }
    }

    pub fn scale(&self, c: &CycNum) -> GroupFunction {
        let field = self.field();
        if c.is_zero() {
            return GroupFunction::zero(self.group.clone());
        }
        let values = self
            .values
            .iter()
            .map(|(x, v)| (x.clone(), field.mul(v, c)))
            .collect();
        GroupFunction {
            group: self.group.clone(),
            values,
        }
    }

    pub fn add(&self, other: &GroupFunction) -> Result<GroupFunction, TransformError> {
        if self.group != other.group {
            return Err(TransformError::WrongGroup(
                other.group.to_string(),
                self.group.to_string(),
            ));
        }
        let field = self.field();
        let mut values = self.values.clone();
        for (x, v) in &other.values {
            let sum = field.add(&self.value(x), v);
            if sum.is_zero() {
                values.remove(x);
            } else {
                values.insert(x.clone(), sum);
            }
        }
        Ok(GroupFunction {
            group: self.group.clone(),
            values,
        })
    }

    pub fn sub(&self, other: &GroupFunction) -> Result<GroupFunction, TransformError> {
        let field = self.field();
        self.add(&other.scale(&field.from_integer(-1)))
    }

    /// Scales so the value at the smallest support element (lexicographic
    /// coordinates) equals 1; the canonical representative of the line
    /// spanned by `f`.
    pub fn normalized(&self) -> GroupFunction {
        let field = self.field();
        match self.values.iter().next() {
            None => self.clone(),
            Some((_, v)) => {
                let inv = field.inv(v).expect("stored values are nonzero");
                self.scale(&inv)
            }
        }
    }

    /// If `other = c * self` for a scalar `c != 0`, returns `c`.
    pub fn proportionality(&self, other: &GroupFunction) -> Option<CycNum> {
        if self.group != other.group
            || self.values.len() != other.values.len()
            || self.is_zero()
        {
            return None;
        }
        let field = self.field();
        let (x0, v0) = self.values.iter().next().unwrap();
        let w0 = other.values.get(x0)?;
        let c = field.div(w0, v0).ok()?;
        for (x, v) in &self.values {
            let w = other.values.get(x)?;
            if field.mul(v, &c) != *w {
                return None;
            }
        }
        Some(c)
    }

    /// Tensor product on the product group (coordinates concatенated in
    /// order): `(f1 (x) f2)(x1, x2) = f1(x1) f2(x2)`.
    pub fn tensor(&self, other: &GroupFunction) -> Result<GroupFunction, TransformError> {
        let mut factors = self.group.factors().to_vec();
        factors.extend_from_slice(other.group.factors());
        let product = FiniteAbelianGroup::new(factors)?;
        let field = CycField::new(product.exponent());
        // values from the two (possibly smaller) levels embed into the
        // product level; embedding is by root-of-unity exponent scaling
        let mut values = BTreeMap::new();
        for (x1, v1) in &self.values {
            let v1p = embed(&field, v1);
            for (x2, v2) in &other.values {
                let v2p = embed(&field, v2);
                let coords: Vec<u64> = x1
                    .coords()
                    .iter()
                    .chain(x2.coords().iter())
                    .copied()
                    .collect();
                let e = product.element(&coords)?;
                values.insert(e, field.mul(&v1p, &v2p));
            }
        }
        Ok(GroupFunction {
            group: product,
            values,
        })
    }

    /// Applies the linear action of `A(m)`: the result is
    /// `g(x) = f(A(m)^{-1} x)`, so the support maps forward by `A(m)`.
    /// Support and spectrum sizes are preserved.
    pub fn am_transform(&self, m: &LinearMap2) -> Result<GroupFunction, TransformError> {
        let p = vector_group_prime(&self.group)
            .ok_or_else(|| TransformError::NotVectorGroup(self.group.to_string()))?;
        if m.p != p {
            return Err(TransformError::WrongGroup(
                format!("A(m) mod {}", m.p),
                self.group.to_string(),
            ));
        }
        let values = self
            .values
            .iter()
            .map(|(x, v)| {
                let image = m.apply(&self.group, x);
                (image, v.clone())
            })
            .collect();
        Ok(GroupFunction {
            group: self.group.clone(),
            values,
        })
    }
}

fn embed(target: &CycField, v: &CycNum) -> CycNum {
    crate::cyclotomic::raise_level(v, target.level())
}

/// Is the group `Zp x Zp` for a prime `p`? Returns `p` if so.
pub fn vector_group_prime(g: &FiniteAbelianGroup) -> Option<u64> {
    match g.factors() {
        [a, b] if a == b && a.exponent == 1 => Some(a.prime),
        _ => None,
    }
}

/// The invertible map `A(m) = [[m1, -m2], [m2, m1]]` acting on `Zp x Zp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearMap2 {
    pub p: u64,
    pub m1: u64,
    pub m2: u64,
}

fn mod_inv(a: u64, p: u64) -> Option<u64> {
    // extended Euclid on (a, p), p prime
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(p as i64) as u64)
}

impl LinearMap2 {
    /// Fails with `SingularTransform` when `m1^2 + m2^2 = 0 mod p`.
    pub fn new(p: u64, m1: u64, m2: u64) -> Result<Self, TransformError> {
        let m = LinearMap2 {
            p,
            m1: m1 % p,
            m2: m2 % p,
        };
        if m.det() == 0 {
            return Err(TransformError::SingularTransform(m.m1, m.m2, p));
        }
        Ok(m)
    }

    pub fn identity(p: u64) -> Self {
        LinearMap2 { p, m1: 1, m2: 0 }
    }

    /// `m1^2 + m2^2 mod p`.
    pub fn det(&self) -> u64 {
        (self.m1 * self.m1 + self.m2 * self.m2) % self.p
    }

    /// `A(m)^{-1} = A(m~)` with `m~ = (m1^2+m2^2)^{-1} (m1, -m2)`.
    pub fn inverse(&self) -> Self {
        let d = mod_inv(self.det(), self.p).expect("invertible by construction");
        LinearMap2 {
            p: self.p,
            m1: d * self.m1 % self.p,
            m2: d * (self.p - self.m2) % self.p % self.p,
        }
    }

    /// `A(m-bar) = A((m1, -m2))`; the map the spectrum moves through: for
    /// `g = f o A(m)^{-1}` one has `g_hat(xi) = f_hat(A(m-bar) xi)`, i.e.
    /// `spectrum(g) = A(m-bar)^{-1} spectrum(f)`.
    pub fn conjugate_map(&self) -> Self {
        LinearMap2 {
            p: self.p,
            m1: self.m1,
            m2: (self.p - self.m2) % self.p,
        }
    }

    /// Matrix-vector action on an element of `Zp x Zp`.
    pub fn apply(&self, g: &FiniteAbelianGroup, x: &GroupElement) -> GroupElement {
        let p = self.p as i64;
        let (x1, x2) = (x.coords()[0] as i64, x.coords()[1] as i64);
        let (m1, m2) = (self.m1 as i64, self.m2 as i64);
        g.element_signed(&[m1 * x1 - m2 * x2, m2 * x1 + m1 * x2])
            .expect("two coordinates")
            .coords()
            .to_vec()
            .pipe(|c| g.element(&[c[0] % p as u64, c[1] % p as u64]).unwrap())
    }

    /// All invertible maps `A(m)` mod `p`, in lexicographic `(m1, m2)`
    /// order.
    pub fn all_invertible(p: u64) -> Vec<LinearMap2> {
        let mut out = Vec::new();
        for m1 in 0..p {
            for m2 in 0..p {
                if let Ok(m) = LinearMap2::new(p, m1, m2) {
                    out.push(m);
                }
            }
        }
        out
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        // A(m) A(m') corresponds to complex multiplication of m and m'.
        let p = self.p;
        LinearMap2 {
            p,
            m1: ((self.m1 * rhs.m1) % p + (p * p - self.m2 * rhs.m2 % p) % p) % p,
            m2: (self.m1 * rhs.m2 + self.m2 * rhs.m1) % p,
        }
    }
}

trait Pipe: Sized {
    fn pipe<T>(self, f: impl FnOnce(Self) -> T) -> T {
        f(self)
    }
}
impl<T> Pipe for T {}

// --- exact serialization ---------------------------------------------------

/// Wire form of a function: exact rationals as decimal strings, one
/// coefficient vector per support element. Round-trips bit-exactly.
#[derive(Debug, Serialize, Deserialize)]
pub struct WireFunction {
    pub group: String,
    pub level: u64,
    pub values: Vec<WireValue>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WireValue {
    pub element: Vec<u64>,
    /// `phi(N)` pairs `[numerator, denominator]` in decimal.
    pub coeffs: Vec<[String; 2]>,
}

impl GroupFunction {
    pub fn to_wire(&self) -> WireFunction {
        WireFunction {
            group: self.group.to_string(),
            level: self.group.exponent(),
            values: self
                .values
                .iter()
                .map(|(e, v)| WireValue {
                    element: e.coords().to_vec(),
                    coeffs: v
                        .coeffs()
                        .iter()
                        .map(|q| [q.numer().to_string(), q.denom().to_string()])
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_wire(w: &WireFunction) -> Result<GroupFunction, TransformError> {
        let group = FiniteAbelianGroup::from_str(&w.group)?;
        if w.level != group.exponent() {
            return Err(TransformError::Malformed(format!(
                "level {} does not match group exponent {}",
                w.level,
                group.exponent()
            )));
        }
        let mut pairs = Vec::new();
        for wv in &w.values {
            let e = group.element(&wv.element)?;
            let coeffs: Result<Vec<BigRational>, TransformError> = wv
                .coeffs
                .iter()
                .map(|[n, d]| {
                    let num = BigInt::from_str(n)
                        .map_err(|_| TransformError::Malformed(format!("bad numerator {n}")))?;
                    let den = BigInt::from_str(d)
                        .map_err(|_| TransformError::Malformed(format!("bad denominator {d}")))?;
                    if den.is_zero() {
                        return Err(TransformError::Malformed("zero denominator".into()));
                    }
                    Ok(BigRational::new(num, den))
                })
                .collect();
            let v = CycNum::from_coeffs(group.exponent(), coeffs?)
                .map_err(|e| TransformError::Malformed(e.to_string()))?;
            pairs.push((e, v));
        }
        GroupFunction::from_pairs(group, pairs)
    }
}
