//! Exact arithmetic in the cyclotomic field `Q(zeta_N)`.
//!
//! Elements are stored in the power basis of `Q[X]/(Phi_N)`, so the zero
//! test is exact and canonical. One level `N` is fixed per group session;
//! mixed-level arithmetic is a usage error, never auto-coerced.

mod linalg;

pub use linalg::{
    det, float_rank_estimate, normalize_first_nonzero, rank_kernel, CycMatrix, RankKernel,
    FLOAT_RANK_TOLERANCE,
};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("operands live at different cyclotomic levels: {0} vs {1}")]
    LevelMismatch(u64, u64),
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u64),
}

/// Euler's totient by trial-division factorization.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Exact division of integer polynomials, `num / den`, panicking if the
/// division is not exact. Coefficient vectors are little-endian.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(dn >= dd && *den.last().unwrap() != 0);
    let mut rem: Vec<i64> = num.to_vec();
    let mut quot = vec![0i64; dn - dd + 1];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd] / den[dd];
        assert_eq!(c * den[dd], rem[i + dd], "non-exact polynomial division");
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "non-exact polynomial division");
    quot
}

/// The N-th cyclotomic polynomial `Phi_N`, monic of degree `phi(N)`,
/// computed by dividing `X^N - 1` by the product of all `Phi_d`, `d | N`,
/// `d < N`. Little-endian integer coefficients.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    if n == 1 {
        return vec![-1, 1]; // X - 1
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    let mut den = vec![1i64];
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            den = poly_mul_int(&den, &phi_d);
        }
    }
    poly_div_exact(&num, &den)
}

fn poly_mul_int(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Shared per-level context: the modulus polynomial, reduction rows for all
/// powers `X^j mod Phi_N` with `j < 2 phi(N) - 1`, and the full table of
/// root-of-unity representations.
#[derive(Debug)]
pub struct CycField {
    level: u64,
    phi: usize,
    /// `power_rows[j]` = integer coefficients of `X^j mod Phi_N`, for
    /// `j = 0 .. max(N, 2*phi-1)`.
    power_rows: Vec<Vec<i64>>,
}

static FIELD_REGISTRY: Lazy<RwLock<HashMap<u64, Arc<CycField>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

impl CycField {
    /// Cached accessor; building a level is idempotent.
    pub fn new(level: u64) -> Arc<CycField> {
        assert!(level >= 1);
        if let Some(f) = FIELD_REGISTRY.read().unwrap().get(&level) {
            return Arc::clone(f);
        }
        let built = Arc::new(Self::build(level));
        let mut reg = FIELD_REGISTRY.write().unwrap();
        Arc::clone(reg.entry(level).or_insert(built))
    }

    fn build(level: u64) -> CycField {
        let modulus = cyclotomic_poly(level);
        let phi = modulus.len() - 1;
        // Covers general products (degree 2*phi - 2) and root-multiples of
        // basis powers (degree level + phi - 2).
        let max_pow = (level as usize + phi).max(2 * phi).max(2);
        let mut power_rows: Vec<Vec<i64>> = Vec::with_capacity(max_pow);
        // X^j for j < phi is itself; afterwards reduce one degree at a time,
        // using X^phi = -(low-degree part of Phi).
        for j in 0..phi {
            let mut row = vec![0i64; phi];
            row[j] = 1;
            power_rows.push(row);
        }
        for j in phi..max_pow {
            let prev = &power_rows[j - 1];
            let carry = prev[phi - 1];
            let mut row = vec![0i64; phi];
            for i in 1..phi {
                row[i] = prev[i - 1];
            }
            if carry != 0 {
                for i in 0..phi {
                    row[i] -= carry * modulus[i];
                }
            }
            power_rows.push(row);
        }
        CycField {
            level,
            phi,
            power_rows,
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn zero(&self) -> CycNum {
        CycNum {
            level: self.level,
            coeffs: vec![BigRational::zero(); self.phi],
        }
    }

    pub fn one(&self) -> CycNum {
        self.from_rational(BigRational::one())
    }

    pub fn from_integer(&self, n: i64) -> CycNum {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(&self, q: BigRational) -> CycNum {
        let mut coeffs = vec![BigRational::zero(); self.phi];
        coeffs[0] = q;
        CycNum {
            level: self.level,
            coeffs,
        }
    }

    /// Canonical representation of `zeta_N^e`.
    pub fn root_of_unity(&self, e: i64) -> CycNum {
        let e = e.rem_euclid(self.level as i64) as usize;
        let row = &self.power_rows[e];
        CycNum {
            level: self.level,
            coeffs: row
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    fn check(&self, a: &CycNum) {
        assert_eq!(
            a.level, self.level,
            "cyclotomic level mismatch: {} vs {}",
            a.level, self.level
        );
    }

    pub fn add(&self, a: &CycNum, b: &CycNum) -> CycNum {
        self.check(a);
        self.check(b);
        CycNum {
            level: self.level,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn sub(&self, a: &CycNum, b: &CycNum) -> CycNum {
        self.check(a);
        self.check(b);
        CycNum {
            level: self.level,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }

    pub fn neg(&self, a: &CycNum) -> CycNum {
        self.check(a);
        CycNum {
            level: self.level,
            coeffs: a.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, a: &CycNum, b: &CycNum) -> CycNum {
        self.check(a);
        self.check(b);
        // Schoolbook convolution followed by reduction of the high part
        // through the precomputed power rows.
        let mut conv = vec![BigRational::zero(); 2 * self.phi - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                conv[i + j] += x * y;
            }
        }
        let mut out = vec![BigRational::zero(); self.phi];
        for (j, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j < self.phi {
                out[j] += c;
            } else {
                for (i, &r) in self.power_rows[j].iter().enumerate() {
                    if r != 0 {
                        out[i] += &c * BigRational::from_integer(BigInt::from(r));
                    }
                }
            }
        }
        CycNum {
            level: self.level,
            coeffs: out,
        }
    }

    /// Multiplies by `zeta_N^e`; cheaper than a general multiplication.
    pub fn mul_root(&self, a: &CycNum, e: i64) -> CycNum {
        self.check(a);
        let e = e.rem_euclid(self.level as i64) as usize;
        let mut out = vec![BigRational::zero(); self.phi];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let row = &self.power_rows[i + e];
            for (j, &r) in row.iter().enumerate() {
                if r != 0 {
                    out[j] += x * BigRational::from_integer(BigInt::from(r));
                }
            }
        }
        CycNum {
            level: self.level,
            coeffs: out,
        }
    }

    /// The ring automorphism induced by `zeta -> zeta^{-1}` (complex
    /// conjugation on the standard embedding).
    pub fn conjugate(&self, a: &CycNum) -> CycNum {
        self.check(a);
        let n = self.level as usize;
        let mut out = vec![BigRational::zero(); self.phi];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let row = &self.power_rows[(n - i) % n.max(1)];
            for (j, &r) in row.iter().enumerate() {
                if r != 0 {
                    out[j] += x * BigRational::from_integer(BigInt::from(r));
                }
            }
        }
        CycNum {
            level: self.level,
            coeffs: out,
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in
    /// `Q[X]` against `Phi_N` (irreducible, so any nonzero element is a
    /// unit).
    pub fn inv(&self, a: &CycNum) -> Result<CycNum, FieldError> {
        self.check(a);
        if a.is_zero() {
            return Err(FieldError::DivisionByZero(self.level));
        }
        // r0 = Phi_N, r1 = a; keep Bezout coefficient of a only.
        let modulus: Vec<BigRational> = {
            let phi_poly = cyclotomic_poly(self.level);
            phi_poly
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect()
        };
        let mut r0 = modulus;
        let mut r1 = trim(a.coeffs.clone());
        let mut t0: Vec<BigRational> = vec![];
        let mut t1: Vec<BigRational> = vec![BigRational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let t = poly_sub(&t0, &poly_mul(&q, &t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        // r0 is a nonzero constant (gcd); divide through.
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let mut coeffs = vec![BigRational::zero(); self.phi];
        for (i, x) in t0.into_iter().enumerate() {
            coeffs[i] = x / &c;
        }
        Ok(CycNum {
            level: self.level,
            coeffs,
        })
    }

    pub fn div(&self, a: &CycNum, b: &CycNum) -> Result<CycNum, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a * conj(a)`, a totally real element; rational for the levels used
    /// here only when `a` is a root of unity, so returned as a CycNum.
    pub fn norm_squared(&self, a: &CycNum) -> CycNum {
        self.mul(a, &self.conjugate(a))
    }

    /// Complex embedding at the principal primitive root.
    pub fn to_complex(&self, a: &CycNum) -> Complex64 {
        self.check(a);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * (i as f64) / (self.level as f64);
            acc += rational_to_f64(c) * Complex64::new(angle.cos(), angle.sin());
        }
        acc
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    // Adequate for the pruning paths; exact code never consumes this.
    let num = q.numer();
    let den = q.denom();
    bigint_to_f64(num) / bigint_to_f64(den)
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(if n.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return (vec![], a.to_vec());
    }
    let mut rem = a.to_vec();
    let mut quot = vec![BigRational::zero(); a.len() - b.len() + 1];
    for i in (0..quot.len()).rev() {
        if rem[i + db].is_zero() {
            continue;
        }
        let c = &rem[i + db] / &b[db];
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            rem[i + j] -= t;
        }
        quot[i] = c;
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// An element of `Q(zeta_N)`: `sum coeffs[i] * zeta_N^i` over the power
/// basis of `Q[X]/(Phi_N)`. The representation is canonical, so equality
/// and the zero test are coefficient-wise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    level: u64,
    coeffs: Vec<BigRational>,
}

impl CycNum {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn from_coeffs(level: u64, coeffs: Vec<BigRational>) -> Result<Self, FieldError> {
        let phi = CycField::new(level).degree();
        if coeffs.len() != phi {
            return Err(FieldError::LevelMismatch(level, coeffs.len() as u64));
        }
        Ok(CycNum { level, coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational part if the element is rational, else `None`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..]
            .iter()
            .all(|c| c.is_zero())
            .then_some(&self.coeffs[0])
    }

    pub fn field(&self) -> Arc<CycField> {
        CycField::new(self.level)
    }

    fn ensure_same_level(&self, rhs: &CycNum) -> Result<(), FieldError> {
        if self.level != rhs.level {
            return Err(FieldError::LevelMismatch(self.level, rhs.level));
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &CycNum) -> Result<CycNum, FieldError> {
        self.ensure_same_level(rhs)?;
        Ok(self.field().add(self, rhs))
    }

    pub fn checked_mul(&self, rhs: &CycNum) -> Result<CycNum, FieldError> {
        self.ensure_same_level(rhs)?;
        Ok(self.field().mul(self, rhs))
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = if i == 0 {
                format!("{c}")
            } else if i == 1 {
                format!("{c}*z")
            } else {
                format!("{c}*z^{i}")
            };
            terms.push(t);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Top-level convenience: `zeta_N^e` as a CycNum at level `N`.
pub fn root_of_unity(e: i64, level: u64) -> CycNum {
    CycField::new(level).root_of_unity(e)
}

/// Re-expresses `v` in the subfield `Q(zeta_n)` for `n | N`, or `None` if
/// `v` does not lie there. Solves for coordinates over the embedded
/// power basis `zeta_N^{(N/n) i}`, `i < phi(n)`.
pub fn try_lower_level(v: &CycNum, target_level: u64) -> Option<CycNum> {
    let big = v.level();
    assert_eq!(big % target_level, 0, "target level must divide the level");
    if big == target_level {
        return Some(v.clone());
    }
    let big_field = CycField::new(big);
    let small_field = CycField::new(target_level);
    let phi_small = small_field.degree();
    let phi_big = big_field.degree();
    let step = (big / target_level) as i64;
    // columns: embeddings of the subfield basis; last column: v
    let mut m: Vec<Vec<BigRational>> = (0..phi_small)
        .map(|i| {
            big_field
                .root_of_unity(step * i as i64)
                .coeffs
                .clone()
        })
        .collect();
    m.push(v.coeffs.clone());
    // Gaussian elimination on the transposed system (phi_big equations,
    // phi_small unknowns).
    let rows = phi_big;
    let cols = phi_small + 1;
    let mut w = vec![vec![BigRational::zero(); cols]; rows];
    for (c, col) in m.iter().enumerate() {
        for r in 0..rows {
            w[r][c] = col[r].clone();
        }
    }
    let mut solution = vec![BigRational::zero(); phi_small];
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..phi_small {
        let Some(pr) = (row..rows).find(|&r| !w[r][col].is_zero()) else {
            continue;
        };
        w.swap(row, pr);
        let inv = w[row][col].clone();
        for c in col..cols {
            w[row][c] = &w[row][c] / &inv;
        }
        for r in 0..rows {
            if r != row && !w[r][col].is_zero() {
                let factor = w[r][col].clone();
                for c in col..cols {
                    let t = &factor * &w[row][c];
                    w[r][c] -= t;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    // consistency: every non-pivot row must have zero RHS
    for r in row..rows {
        if !w[r][phi_small].is_zero() {
            return None;
        }
    }
    for (pr, &pc) in pivot_cols.iter().enumerate() {
        solution[pc] = w[pr][phi_small].clone();
    }
    Some(CycNum {
        level: target_level,
        coeffs: solution,
    })
}

/// Embeds `v` into the field at a multiple of its level
/// (`zeta_n = zeta_N^{N/n}`).
pub fn raise_level(v: &CycNum, target_level: u64) -> CycNum {
    let n = v.level();
    assert_eq!(target_level % n, 0, "levels must be compatible");
    if n == target_level {
        return v.clone();
    }
    let target = CycField::new(target_level);
    let step = (target_level / n) as i64;
    let mut acc = target.zero();
    for (i, c) in v.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = target.root_of_unity(step * i as i64);
        acc = target.add(&acc, &target.mul(&term, &target.from_rational(c.clone())));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn cyclotomic_poly_small_levels() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]); // X^2 + 1
        assert_eq!(cyclotomic_poly(9), vec![1, 0, 0, 1, 0, 0, 1]); // X^6+X^3+1
        assert_eq!(cyclotomic_poly(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_poly(15), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
        for n in 1..=30 {
            assert_eq!(cyclotomic_poly(n).len() as u64 - 1, euler_phi(n));
        }
    }

    #[test]
    fn roots_of_unity_basics() {
        let f4 = CycField::new(4);
        assert!(f4.root_of_unity(0).is_one());
        // zeta_4^2 = -1
        assert_eq!(f4.root_of_unity(2), f4.from_integer(-1));
        let z = f4.root_of_unity(1);
        assert_eq!(f4.mul(&z, &z), f4.from_integer(-1));

        // zeta_9^3 is a primitive cube root: z^2 + z + 1 = 0
        let f9 = CycField::new(9);
        let w = f9.root_of_unity(3);
        let expr = f9.add(&f9.add(&f9.mul(&w, &w), &w), &f9.one());
        assert!(expr.is_zero());
    }

    #[test]
    fn vanishing_geometric_sums() {
        for n in 2..=16u64 {
            let f = CycField::new(n);
            let mut acc = f.zero();
            for e in 0..n {
                acc = f.add(&acc, &f.root_of_unity(e as i64));
            }
            assert!(acc.is_zero(), "sum of all {n}-th roots should vanish");
        }
        let f1 = CycField::new(1);
        assert!(f1.root_of_unity(0).is_one());
    }

    #[test]
    fn cube_root_sum_vanishes() {
        let f3 = CycField::new(3);
        let s = f3.add(
            &f3.add(&f3.one(), &f3.root_of_unity(1)),
            &f3.root_of_unity(2),
        );
        assert!(s.is_zero());
    }

    #[test]
    fn conjugate_gives_inverse_on_roots() {
        let f5 = CycField::new(5);
        let z = f5.root_of_unity(1);
        let prod = f5.mul(&f5.conjugate(&z), &z);
        assert!(prod.is_one());
        for e in 0..15 {
            let f15 = CycField::new(15);
            let z = f15.root_of_unity(e);
            assert_eq!(f15.conjugate(&z), f15.root_of_unity(-e));
        }
    }

    #[test]
    fn inverse_round_trips() {
        let f9 = CycField::new(9);
        let a = f9.add(
            &f9.root_of_unity(5),
            &f9.from_rational(BigRational::from_f64(0.5).unwrap()),
        );
        let inv = f9.inv(&a).unwrap();
        assert!(f9.mul(&a, &inv).is_one());
        assert_eq!(
            f9.inv(&f9.zero()),
            Err(FieldError::DivisionByZero(9))
        );
    }

    #[test]
    fn level_mismatch_is_reported() {
        let a = CycField::new(4).one();
        let b = CycField::new(5).one();
        assert_eq!(a.checked_add(&b), Err(FieldError::LevelMismatch(4, 5)));
    }

    #[test]
    fn field_axioms_on_random_elements() {
        // deterministic sweep standing in for a full proptest here; the
        // proptest version lives in the integration suite
        let f = CycField::new(12);
        let els: Vec<CycNum> = (0..6)
            .map(|i| {
                let z = f.root_of_unity(i);
                f.add(&z, &f.from_integer(i - 2))
            })
            .collect();
        for a in &els {
            for b in &els {
                for c in &els {
                    let lhs = f.add(&f.add(a, b), c);
                    let rhs = f.add(a, &f.add(b, c));
                    assert_eq!(lhs, rhs);
                    let dl = f.mul(a, &f.add(b, c));
                    let dr = f.add(&f.mul(a, b), &f.mul(a, c));
                    assert_eq!(dl, dr);
                }
            }
        }
    }

    #[test]
    fn complex_embedding_matches_roots() {
        let f8 = CycField::new(8);
        let z = f8.to_complex(&f8.root_of_unity(1));
        let expected = Complex64::new(
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        );
        assert!((z - expected).norm() < 1e-12);
    }
}
