//! Meshulam's function `theta(k, G)`: closed forms for the prime,
//! two-prime, and prime-square families, the product recursion, the convex
//! Meshulam lower bound `u(k, G)`, the brute-force oracle, and the
//! enumeration of minimal-spectrum equality cases `E_0(k, theta(k))`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{rank_kernel, CycNum};
use crate::function::{GroupFunction, TransformError};
use crate::group::{Character, FiniteAbelianGroup, GroupElement, GroupError, Subgroup};
use crate::scan::{self, indices_of, masks_of_size, ScanError};

pub use crate::scan::{DEFAULT_ORACLE_CAP, MAX_ORACLE_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThetaError {
    #[error("k={k} out of range 1..={max}")]
    OutOfRange { k: u64, max: u64 },
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("no closed form for {0} and the oracle cap excludes it")]
    NoClosedForm(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

fn ensure_range(k: u64, max: u64) -> Result<(), ThetaError> {
    if k == 0 || k > max {
        return Err(ThetaError::OutOfRange { k, max });
    }
    Ok(())
}

/// `theta(k, Z_p) = p - k + 1` for `p` prime.
pub fn theta_tao(k: u64, p: u64) -> Result<u64, ThetaError> {
    ensure_range(k, p)?;
    Ok(p - k + 1)
}

/// `theta(k, Z_q x Z_p)` for primes `q < p`; the four branches agree at
/// their shared boundary points, which is asserted.
pub fn theta_two_primes(k: u64, q: u64, p: u64) -> Result<u64, ThetaError> {
    assert!(q < p, "call with q < p");
    ensure_range(k, p * q)?;
    let mut values = Vec::new();
    if k <= q {
        values.push(p * (q - k + 1));
    }
    // q <= k <= q(p+1)/(q+1)
    if k >= q && k * (q + 1) <= q * (p + 1) {
        values.push(p - k / q + 1);
    }
    // q(p+1)/(q+1) <= k <= p
    if k * (q + 1) >= q * (p + 1) && k <= p {
        values.push(q * (p - k + 1));
    }
    if k >= p {
        values.push(q - k / p + 1);
    }
    let first = values[0];
    assert!(
        values.iter().all(|&v| v == first),
        "theta branches disagree at k={k}, q={q}, p={p}: {values:?}"
    );
    Ok(first)
}

/// `theta(k, Z_{p^2}) = theta(k, Z_p x Z_p)`: `p(p-k+1)` up to `k = p`,
/// then `p - floor(k/p) + 1`.
pub fn theta_prime_square(k: u64, p: u64) -> Result<u64, ThetaError> {
    ensure_range(k, p * p)?;
    let mut values = Vec::new();
    if k <= p {
        values.push(p * (p - k + 1));
    }
    if k >= p {
        values.push(p - k / p + 1);
    }
    let first = values[0];
    assert!(
        values.iter().all(|&v| v == first),
        "theta branches disagree at k={k}, p={p}"
    );
    Ok(first)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaMethod {
    ClosedForm,
    ProductRecursion,
    Oracle,
}

/// The vector `k -> theta(k, G)` with per-entry provenance, plus the
/// Meshulam bound `u(k, G)`.
#[derive(Debug, Clone)]
pub struct ThetaProfile {
    group: FiniteAbelianGroup,
    theta: Vec<u64>,
    methods: Vec<ThetaMethod>,
    meshulam: Vec<BigRational>,
}

impl ThetaProfile {
    /// Computes the profile: closed form for the paper families, the
    /// product recursion for other multi-factor groups, the oracle for a
    /// lone `Z_{p^n}` with `n >= 3` (subject to `oracle_cap`).
    pub fn compute(group: &FiniteAbelianGroup, oracle_cap: u64) -> Result<Self, ThetaError> {
        let n = group.order();
        let (theta, methods) = profile_values(group, oracle_cap)?;
        let meshulam: Vec<BigRational> = (1..=n).map(|k| meshulam_bound_raw(k, n)).collect();
        let profile = ThetaProfile {
            group: group.clone(),
            theta,
            methods,
            meshulam,
        };
        profile.check_internal_bounds()?;
        Ok(profile)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// `theta(k, G)`, `k` in `1..=|G|`.
    pub fn theta(&self, k: u64) -> u64 {
        self.theta[(k - 1) as usize]
    }

    pub fn theta_values(&self) -> &[u64] {
        &self.theta
    }

    pub fn method(&self, k: u64) -> ThetaMethod {
        self.methods[(k - 1) as usize]
    }

    /// Meshulam's convex lower bound `u(k, G)`, exact rational.
    pub fn meshulam(&self, k: u64) -> &BigRational {
        &self.meshulam[(k - 1) as usize]
    }

    /// Does `(k, G)` admit equality cases? Strict drops of `theta` always
    /// do, and `k = 1` always does. On `Z_{p^2}` the point `k = p^2 - 1`
    /// carries the two-point-spectrum family. On `Z_q x Z_p` three more
    /// flat points carry cases (all verified exhaustively by the
    /// enumeration suites): `k = qr` whenever `p - r + 1 = theta(k)`,
    /// `k = pr` whenever `q - r + 1 = theta(k)` (character tensor shapes
    /// beyond their strict-drop range), and `k = pq - 1` (the two-point
    /// spectrum family with a full-order difference, the cyclic analogue
    /// of the prime-square exceptional family).
    pub fn predicted_equality_cases(&self, k: u64) -> bool {
        if k == 1 {
            return true;
        }
        if self.theta(k) < self.theta(k - 1) {
            return true;
        }
        match self.group.factors() {
            [f] if f.exponent == 2 && k == self.group.order() - 1 => true,
            [a, b]
                if a.exponent == 1
                    && b.exponent == 1
                    && a.prime != b.prime =>
            {
                let (q, p) = (a.prime.min(b.prime), a.prime.max(b.prime));
                if k == p * q - 1 {
                    return true;
                }
                (k % q == 0 && p + 1 == self.theta(k) + k / q)
                    || (k % p == 0 && q + 1 == self.theta(k) + k / p)
            }
            _ => false,
        }
    }

    fn check_internal_bounds(&self) -> Result<(), ThetaError> {
        let n = self.group.order();
        for k in 1..=n {
            let t = self.theta(k);
            if k >= 2 && t > self.theta(k - 1) {
                return Err(ThetaError::InvariantViolation(format!(
                    "theta not non-increasing at k={k} on {}",
                    self.group
                )));
            }
            if t > n - k + 1 {
                return Err(ThetaError::InvariantViolation(format!(
                    "theta(k) > |G|-k+1 at k={k} on {}",
                    self.group
                )));
            }
            let u = self.meshulam(k);
            let ceil_u = ceil_rational(u);
            if BigInt::from(t) < ceil_u {
                return Err(ThetaError::InvariantViolation(format!(
                    "theta(k) < ceil(u(k)) at k={k} on {}",
                    self.group
                )));
            }
        }
        if self.theta(1) != n || self.theta(n) != 1 {
            return Err(ThetaError::InvariantViolation(format!(
                "endpoint values wrong on {}",
                self.group
            )));
        }
        Ok(())
    }
}

pub fn ceil_rational(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

fn profile_values(
    group: &FiniteAbelianGroup,
    oracle_cap: u64,
) -> Result<(Vec<u64>, Vec<ThetaMethod>), ThetaError> {
    let n = group.order();
    match group.factors() {
        [f] if f.exponent == 1 => {
            let theta: Result<Vec<u64>, _> = (1..=n).map(|k| theta_tao(k, f.prime)).collect();
            Ok((theta?, vec![ThetaMethod::ClosedForm; n as usize]))
        }
        [f] if f.exponent == 2 => {
            let theta: Result<Vec<u64>, _> =
                (1..=n).map(|k| theta_prime_square(k, f.prime)).collect();
            Ok((theta?, vec![ThetaMethod::ClosedForm; n as usize]))
        }
        [a, b] if a.exponent == 1 && b.exponent == 1 && a.prime == b.prime => {
            let theta: Result<Vec<u64>, _> =
                (1..=n).map(|k| theta_prime_square(k, a.prime)).collect();
            Ok((theta?, vec![ThetaMethod::ClosedForm; n as usize]))
        }
        [a, b] if a.exponent == 1 && b.exponent == 1 => {
            let (q, p) = (a.prime.min(b.prime), a.prime.max(b.prime));
            let theta: Result<Vec<u64>, _> =
                (1..=n).map(|k| theta_two_primes(k, q, p)).collect();
            Ok((theta?, vec![ThetaMethod::ClosedForm; n as usize]))
        }
        [_] => {
            // a lone Z_{p^n}, n >= 3: no closed form here; fall back to the
            // oracle when the group is small enough
            if n > oracle_cap {
                return Err(ThetaError::NoClosedForm(group.to_string()));
            }
            let theta = scan::theta_oracle_all(group).as_ref().clone();
            Ok((theta, vec![ThetaMethod::Oracle; n as usize]))
        }
        factors => {
            // product recursion over the first factor and the rest
            let g1 = FiniteAbelianGroup::new(vec![factors[0]])?;
            let g2 = FiniteAbelianGroup::new(factors[1..].to_vec())?;
            let p1 = ThetaProfile::compute(&g1, oracle_cap)?;
            let p2 = ThetaProfile::compute(&g2, oracle_cap)?;
            let theta: Vec<u64> = (1..=n)
                .map(|k| theta_product(k, &p1, &p2).map(|(v, _)| v))
                .collect::<Result<_, _>>()?;
            Ok((theta, vec![ThetaMethod::ProductRecursion; n as usize]))
        }
    }
}

/// `theta(k, G1 x G2) = min { theta(k1, G1) theta(k2, G2) : k1 k2 <= k }`,
/// together with every couple attaining the minimum (the equality-case
/// analysis needs to know whether the minimizer is unique).
pub fn theta_product(
    k: u64,
    profile1: &ThetaProfile,
    profile2: &ThetaProfile,
) -> Result<(u64, Vec<(u64, u64)>), ThetaError> {
    let n1 = profile1.group.order();
    let n2 = profile2.group.order();
    ensure_range(k, n1 * n2)?;
    let mut best = u64::MAX;
    let mut argmin = Vec::new();
    for k1 in 1..=n1.min(k) {
        for k2 in 1..=n2 {
            if k1 * k2 > k {
                break;
            }
            let v = profile1.theta(k1) * profile2.theta(k2);
            if v < best {
                best = v;
                argmin.clear();
            }
            if v == best {
                argmin.push((k1, k2));
            }
        }
    }
    Ok((best, argmin))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

fn meshulam_bound_raw(k: u64, n: u64) -> BigRational {
    let divs = divisors(n);
    let pos = divs.partition_point(|&d| d <= k);
    let lo = divs[pos - 1];
    if lo == k {
        return BigRational::from_integer(BigInt::from(n / lo));
    }
    let hi = divs[pos];
    // linear interpolation between (lo, n/lo) and (hi, n/hi)
    let y0 = BigRational::from_integer(BigInt::from(n / lo));
    let y1 = BigRational::from_integer(BigInt::from(n / hi));
    let slope = (&y1 - &y0)
        / BigRational::from_integer(BigInt::from(hi - lo));
    y0 + slope * BigRational::from_integer(BigInt::from(k - lo))
}

/// The largest convex function on `[1, |G|]` equal to `|G|/d` at each
/// divisor `d`: piecewise-linear interpolation between consecutive
/// divisors.
pub fn meshulam_bound(k: u64, group: &FiniteAbelianGroup) -> Result<BigRational, ThetaError> {
    ensure_range(k, group.order())?;
    Ok(meshulam_bound_raw(k, group.order()))
}

/// A `(support candidate, spectrum candidate)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPair {
    pub a: BTreeSet<GroupElement>,
    pub b: BTreeSet<Character>,
}

/// `dim E(A, B) = |A| - rank (chi_i(j))_{i not in B, j in A}`, exact.
pub fn eab_dimension(
    a: &BTreeSet<GroupElement>,
    b: &BTreeSet<Character>,
    group: &FiniteAbelianGroup,
) -> Result<usize, ThetaError> {
    assert!(!a.is_empty() && !b.is_empty());
    let tables = scan::tables_for(group);
    let col_idx: Vec<usize> = a.iter().map(|e| group.index_of(e) as usize).collect();
    let b_idx: BTreeSet<usize> = b.iter().map(|e| group.index_of(e) as usize).collect();
    let rows: Vec<usize> = (0..tables.n).filter(|i| !b_idx.contains(i)).collect();
    Ok(a.len() - tables.exact_rank(&rows, &col_idx))
}

fn cap_check(group: &FiniteAbelianGroup, cap: u64) -> Result<(), ThetaError> {
    if group.order() > cap.min(MAX_ORACLE_CAP) {
        return Err(ScanError::GroupTooLarge {
            order: group.order(),
            cap: cap.min(MAX_ORACLE_CAP),
        }
        .into());
    }
    Ok(())
}

/// Minimum spectrum size over nonzero functions supported inside `a`.
/// Searches zero sets largest-first with early exit; every reported
/// decision is exactly confirmed.
pub fn min_spectrum_for_support(
    a: &BTreeSet<GroupElement>,
    group: &FiniteAbelianGroup,
    oracle_cap: u64,
) -> Result<u64, ThetaError> {
    assert!(!a.is_empty());
    cap_check(group, oracle_cap)?;
    let tables = scan::tables_for(group);
    let cols: Vec<usize> = a.iter().map(|e| group.index_of(e) as usize).collect();
    Ok(scan::min_spectrum_for_support(&tables, &cols))
}

/// `theta(k, G)` by exhaustive search, independent of the closed forms.
pub fn theta_oracle(k: u64, group: &FiniteAbelianGroup, oracle_cap: u64) -> Result<u64, ThetaError> {
    ensure_range(k, group.order())?;
    cap_check(group, oracle_cap)?;
    let tables = scan::tables_for(group);
    Ok(scan::theta_oracle_k(&tables, k as usize))
}

/// The full oracle profile, cached.
pub fn theta_oracle_profile(
    group: &FiniteAbelianGroup,
    oracle_cap: u64,
) -> Result<Arc<Vec<u64>>, ThetaError> {
    cap_check(group, oracle_cap)?;
    Ok(scan::theta_oracle_all(group))
}

/// One member of `E_0(k, l)`: a support/spectrum pair realized exactly,
/// with a kernel representative (nonzero everywhere on the support,
/// spectrum exactly the stated set).
#[derive(Debug, Clone)]
pub struct E0Entry {
    pub pair: SupportPair,
    pub representative: GroupFunction,
}

/// Cached access to the exhaustive sweep at the oracle profile.
pub(crate) fn scan_report(
    group: &FiniteAbelianGroup,
    oracle_cap: u64,
) -> Result<Arc<scan::ScanReport>, ThetaError> {
    cap_check(group, oracle_cap)?;
    let theta = scan::theta_oracle_all(group);
    Ok(scan::scan_for(group, &theta)?)
}

/// All pairs `(A, B)` with `|A| = k`, `|B| = l` realized by a function
/// with support exactly `A` and spectrum exactly `B`, each with one
/// representative. At `l = theta(k)` every such space is one-dimensional
/// (asserted during the sweep).
pub fn enumerate_e0(
    k: u64,
    l: u64,
    group: &FiniteAbelianGroup,
    oracle_cap: u64,
) -> Result<Vec<E0Entry>, ThetaError> {
    let n = group.order();
    ensure_range(k, n)?;
    ensure_range(l, n)?;
    cap_check(group, oracle_cap)?;
    let theta = scan::theta_oracle_all(group);
    let t = theta[(k - 1) as usize];
    if l < t {
        // nothing can have spectrum below theta(k); proven by the oracle run
        return Ok(vec![]);
    }
    if l == t {
        let report = scan_report(group, oracle_cap)?;
        let tables = scan::tables_for(group);
        return Ok(report
            .for_k(k as usize)
            .deficient
            .iter()
            .filter(|p| p.is_exact_support())
            .map(|p| E0Entry {
                pair: SupportPair {
                    a: indices_of(p.a_mask)
                        .iter()
                        .map(|&i| tables.elements[i].clone())
                        .collect(),
                    b: indices_of(p.b_mask)
                        .iter()
                        .map(|&i| tables.elements[i].clone())
                        .collect(),
                },
                representative: (*p.kernel).clone(),
            })
            .collect());
    }
    enumerate_e0_above_theta(k as usize, l as usize, group)
}

/// The `l > theta(k)` case: kernels may have dimension above one, and a
/// representative with full support on `A` and spectrum exactly `B` needs
/// a generic combination. Try `v = sum t^i b_i` for `t = 1, 2, ...`; each
/// failing condition is a nonzero polynomial in `t` with at most `dim - 1`
/// roots, so the sweep terminates.
fn enumerate_e0_above_theta(
    k: usize,
    l: usize,
    group: &FiniteAbelianGroup,
) -> Result<Vec<E0Entry>, ThetaError> {
    let tables = scan::tables_for(group);
    let n = tables.n;
    let field = &tables.field;
    let mut out = Vec::new();
    for am in masks_of_size(n, k) {
        let cols = indices_of(am);
        for bm in masks_of_size(n, l) {
            let rows = indices_of(scan::complement_mask(bm, n));
            let rk = if rows.is_empty() {
                crate::cyclotomic::RankKernel {
                    rank: 0,
                    kernel: (0..k)
                        .map(|j| {
                            (0..k)
                                .map(|i| if i == j { field.one() } else { field.zero() })
                                .collect()
                        })
                        .collect(),
                }
            } else {
                if tables.exact_rank(&rows, &cols) == k {
                    continue;
                }
                rank_kernel(&tables.exact_block(&rows, &cols))
            };
            if rk.kernel.is_empty() {
                continue;
            }
            let b_indices = indices_of(bm);
            if let Some(v) = generic_member(&tables, &cols, &b_indices, &rk.kernel) {
                let f = GroupFunction::from_pairs(
                    group.clone(),
                    cols.iter()
                        .zip(&v)
                        .map(|(&c, val)| (tables.elements[c].clone(), val.clone())),
                )?;
                out.push(E0Entry {
                    pair: SupportPair {
                        a: cols.iter().map(|&i| tables.elements[i].clone()).collect(),
                        b: b_indices
                            .iter()
                            .map(|&i| tables.elements[i].clone())
                            .collect(),
                    },
                    representative: f,
                });
            }
        }
    }
    Ok(out)
}

/// A kernel member with no zero coordinate and with nonvanishing transform
/// on every point of `B`, when one exists.
fn generic_member(
    tables: &scan::GroupTables,
    cols: &[usize],
    b_indices: &[usize],
    basis: &[Vec<CycNum>],
) -> Option<Vec<CycNum>> {
    let field = &tables.field;
    let dim = basis.len();
    let k = cols.len();
    // existence: each coordinate functional and each spектrum functional
    // must be nonzero somewhere on the kernel
    for j in 0..k {
        if basis.iter().all(|b| b[j].is_zero()) {
            return None;
        }
    }
    let hat = |v: &[CycNum], y: usize| -> CycNum {
        let mut acc = field.zero();
        for (j, coeff) in v.iter().enumerate() {
            if !coeff.is_zero() {
                acc = field.add(
                    &acc,
                    &field.mul_root(coeff, -(tables.exponent_at(cols[j], y) as i64)),
                );
            }
        }
        acc
    };
    for &y in b_indices {
        if basis.iter().all(|b| hat(b, y).is_zero()) {
            return None;
        }
    }
    // bounded sweep over t
    let max_tries = (k + b_indices.len()) * dim + 2;
    for t in 1..=max_tries as i64 {
        let tval = field.from_integer(t);
        let mut v = basis[0].clone();
        let mut power = field.one();
        for b in &basis[1..] {
            power = field.mul(&power, &tval);
            for (slot, coeff) in v.iter_mut().zip(b) {
                *slot = field.add(slot, &field.mul(coeff, &power));
            }
        }
        let full_support = v.iter().all(|c| !c.is_zero());
        if full_support && b_indices.iter().all(|&y| !hat(&v, y).is_zero()) {
            return Some(crate::cyclotomic::normalize_first_nonzero(field, v));
        }
    }
    unreachable!("generic sweep exceeded its root bound");
}

/// When `theta(k) < theta(k-1)`, asserts the reciprocity
/// `theta(theta(k, G), G-hat) = k` (the dual group is identified with `G`
/// and the pairing is symmetric, so the dual profile is the same vector).
/// Returns whether the hypothesis held.
pub fn duality_check(k: u64, profile: &ThetaProfile) -> Result<bool, ThetaError> {
    assert!(k >= 2);
    let t = profile.theta(k);
    if t >= profile.theta(k - 1) {
        return Ok(false);
    }
    if profile.theta(t) != k {
        return Err(ThetaError::InvariantViolation(format!(
            "duality failed on {}: theta(theta({k})) = theta({t}) = {} != {k}",
            profile.group(),
            profile.theta(t)
        )));
    }
    Ok(true)
}

/// The decomposition of a Donoho-Stark equality case:
/// `f = c * chi_y * indicator(a + H)`.
#[derive(Debug, Clone)]
pub struct DsDecomposition {
    pub subgroup: Subgroup,
    pub shift: GroupElement,
    pub character: Character,
    pub constant: CycNum,
}

impl DsDecomposition {
    /// Rebuilds the function this decomposition describes.
    pub fn reconstruct(&self) -> GroupFunction {
        GroupFunction::subgroup_indicator(&self.subgroup)
            .translate(&self.shift)
            .modulate(&self.character)
            .scale(&self.constant)
    }
}

/// Classifies a Donoho-Stark extremal function
/// (`|supp| * |spec| = |G|`) as constant * modulation * translation of a
/// subgroup indicator. Non-extremal input returns `None`; an extremal
/// input that fails to decompose would contradict the classification and
/// reports an invariant violation.
pub fn donoho_stark_classify(
    f: &GroupFunction,
) -> Result<Option<DsDecomposition>, ThetaError> {
    assert!(!f.is_zero());
    let group = f.group().clone();
    let n = group.order();
    let supp = f.support();
    let spec = f.spectrum();
    if (supp.len() * spec.len()) as u64 != n {
        return Ok(None);
    }
    let field = f.field();
    let a = supp.iter().next().unwrap().clone();
    let translated: Vec<GroupElement> = supp.iter().map(|x| group.sub(x, &a)).collect();
    let h = Subgroup::from_elements(&group, translated).ok_or_else(|| {
        ThetaError::InvariantViolation(
            "extremal support is not a coset of a subgroup".to_string(),
        )
    })?;
    let fa = f.value(&a);
    let fa_inv = field.inv(&fa).expect("support value");
    for y in group.elements()? {
        let matches = supp.iter().all(|x| {
            let d = group.sub(x, &a);
            let e = group.pairing_exponent(&d, &y).expect("same group");
            field.mul(&f.value(x), &fa_inv) == field.root_of_unity(e as i64)
        });
        if matches {
            // f(x) = c chi_y(x) on a+H with c = f(a) zeta^{-<a,y>}
            let ea = group.pairing_exponent(&a, &y)?;
            let c = field.mul_root(&fa, -(ea as i64));
            let d = DsDecomposition {
                subgroup: h,
                shift: a,
                character: y,
                constant: c,
            };
            let rebuilt = d.reconstruct();
            if rebuilt != *f {
                return Err(ThetaError::InvariantViolation(
                    "reconstruction mismatch in Donoho-Stark classification".to_string(),
                ));
            }
            return Ok(Some(d));
        }
    }
    Err(ThetaError::InvariantViolation(
        "extremal function is not a modulated translated subgroup indicator".to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group;

    fn g(spec: &str) -> FiniteAbelianGroup {
        parse_group(spec).unwrap()
    }

    #[test]
    fn tao_values() {
        assert_eq!(theta_tao(1, 5).unwrap(), 5);
        assert_eq!(theta_tao(2, 5).unwrap(), 4);
        assert_eq!(theta_tao(5, 5).unwrap(), 1);
        assert!(theta_tao(6, 5).is_err());
        assert!(theta_tao(0, 5).is_err());
    }

    #[test]
    fn two_prime_values() {
        assert_eq!(theta_two_primes(2, 3, 5).unwrap(), 10);
        // both middle branches agree at the exceptional k
        assert_eq!(theta_two_primes(4, 2, 5).unwrap(), 4);
        assert_eq!(theta_two_primes(15, 3, 5).unwrap(), 1);
        let expected = [10u64, 5, 5, 4, 2, 2, 2, 2, 2, 1];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(theta_two_primes(i as u64 + 1, 2, 5).unwrap(), e);
        }
    }

    #[test]
    fn prime_square_values() {
        assert_eq!(theta_prime_square(2, 3).unwrap(), 6);
        assert_eq!(theta_prime_square(7, 3).unwrap(), 2);
        assert_eq!(theta_prime_square(8, 3).unwrap(), 2);
        assert_eq!(theta_prime_square(9, 3).unwrap(), 1);
        let z9_expected = [9u64, 6, 3, 3, 3, 2, 2, 2, 1];
        for (i, &e) in z9_expected.iter().enumerate() {
            assert_eq!(theta_prime_square(i as u64 + 1, 3).unwrap(), e);
        }
    }

    #[test]
    fn product_recursion_matches_closed_forms() {
        let p2 = ThetaProfile::compute(&g("Z2"), DEFAULT_ORACLE_CAP).unwrap();
        let p3 = ThetaProfile::compute(&g("Z3"), DEFAULT_ORACLE_CAP).unwrap();
        // k=4 over Z2 x Z3: min over k1 k2 <= 4
        let (v, argmin) = theta_product(4, &p2, &p3).unwrap();
        assert_eq!(v, theta_two_primes(4, 2, 3).unwrap());
        assert_eq!(v, 2);
        assert_eq!(argmin, vec![(1, 3), (2, 2)]);
        // k=1 gives the full order
        assert_eq!(theta_product(1, &p2, &p3).unwrap().0, 6);
        // k=2 over Z3 x Z5 has the unique minimizer (2, 1)
        let p3b = ThetaProfile::compute(&g("Z3"), DEFAULT_ORACLE_CAP).unwrap();
        let p5 = ThetaProfile::compute(&g("Z5"), DEFAULT_ORACLE_CAP).unwrap();
        let (v2, argmin2) = theta_product(2, &p3b, &p5).unwrap();
        assert_eq!(v2, 10);
        assert_eq!(argmin2, vec![(2, 1)]);
        // and the recursion agrees with the two-prime closed form everywhere
        for k in 1..=15 {
            assert_eq!(
                theta_product(k, &p3b, &p5).unwrap().0,
                theta_two_primes(k, 3, 5).unwrap()
            );
        }
    }

    #[test]
    fn meshulam_bound_values() {
        let z9 = g("Z9");
        assert_eq!(
            meshulam_bound(2, &z9).unwrap(),
            BigRational::from_integer(BigInt::from(6))
        );
        // nodes: u(d) = |G|/d at every divisor
        for d in [1u64, 3, 9] {
            assert_eq!(
                meshulam_bound(d, &z9).unwrap(),
                BigRational::from_integer(BigInt::from(9 / d))
            );
        }
        let z6 = g("Z2xZ3");
        assert_eq!(
            meshulam_bound(4, &z6).unwrap(),
            BigRational::new(BigInt::from(5), BigInt::from(3))
        );
        let p = ThetaProfile::compute(&z6, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(p.theta(4), 2);
    }

    #[test]
    fn eab_dimension_examples() {
        let z5 = g("Z5");
        let a: BTreeSet<_> = [0u64, 1, 2]
            .iter()
            .map(|&i| z5.element(&[i]).unwrap())
            .collect();
        let b: BTreeSet<_> = [0u64, 1, 2, 3]
            .iter()
            .map(|&i| z5.element(&[i]).unwrap())
            .collect();
        assert_eq!(eab_dimension(&a, &b, &z5).unwrap(), 2);

        let z4 = g("Z4");
        let a4: BTreeSet<_> = [0u64, 2].iter().map(|&i| z4.element(&[i]).unwrap()).collect();
        assert_eq!(eab_dimension(&a4, &a4.clone(), &z4).unwrap(), 1);

        // B = G-hat puts no constraint
        let all: BTreeSet<_> = z5.elements().unwrap().into_iter().collect();
        assert_eq!(eab_dimension(&a, &all, &z5).unwrap(), 3);
    }

    #[test]
    fn oracle_wrappers() {
        let z5 = g("Z5");
        for k in 1..=5 {
            assert_eq!(theta_oracle(k, &z5, DEFAULT_ORACLE_CAP).unwrap(), 6 - k);
        }
        let z10 = g("Z2xZ5");
        assert_eq!(theta_oracle(4, &z10, DEFAULT_ORACLE_CAP).unwrap(), 4);
        assert_eq!(theta_oracle(1, &z10, DEFAULT_ORACLE_CAP).unwrap(), 10);
        // cap errors
        let z25 = g("Z25");
        assert!(matches!(
            theta_oracle(2, &z25, DEFAULT_ORACLE_CAP),
            Err(ThetaError::Scan(ScanError::GroupTooLarge { .. }))
        ));
    }

    #[test]
    fn min_spectrum_wrapper() {
        let z9 = g("Z9");
        let h: BTreeSet<_> = [0u64, 3, 6].iter().map(|&i| z9.element(&[i]).unwrap()).collect();
        assert_eq!(
            min_spectrum_for_support(&h, &z9, DEFAULT_ORACLE_CAP).unwrap(),
            3
        );
        let single: BTreeSet<_> = [z9.zero()].into_iter().collect();
        assert_eq!(
            min_spectrum_for_support(&single, &z9, DEFAULT_ORACLE_CAP).unwrap(),
            9
        );
    }

    #[test]
    fn e0_dirac_level() {
        let z6 = g("Z2xZ3");
        let entries = enumerate_e0(1, 6, &z6, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(entries.len(), 6);
        for e in &entries {
            assert_eq!(e.pair.a.len(), 1);
            assert_eq!(e.pair.b.len(), 6);
            assert_eq!(e.representative.support_size(), 1);
        }
    }

    #[test]
    fn e0_empty_at_flat_k() {
        let z10 = g("Z2xZ5");
        // theta(3) = 5 but no equality case at k = 3
        let entries = enumerate_e0(3, 5, &z10, DEFAULT_ORACLE_CAP).unwrap();
        assert!(entries.is_empty());
        // below theta it is empty by definition
        assert!(enumerate_e0(3, 4, &z10, DEFAULT_ORACLE_CAP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn e0_above_theta() {
        // l strictly above theta(k): kernels can have dimension >= 2 and
        // representatives come from the generic-combination sweep. On Z4,
        // theta(2) = 2 and E0(2, 3) consists of two-point supports whose
        // difference generates (one transform zero).
        let z4 = g("Z4");
        let entries = enumerate_e0(2, 3, &z4, DEFAULT_ORACLE_CAP).unwrap();
        assert!(!entries.is_empty());
        for e in &entries {
            assert_eq!(e.representative.support_size(), 2);
            assert_eq!(e.representative.spectrum().len(), 3);
            assert_eq!(e.pair.a, e.representative.support());
            assert_eq!(e.pair.b, e.representative.spectrum());
        }
        // supports {0,2} (difference in the subgroup) cannot reach
        // spectrum size 3: transform zero counts are 0 or 2
        assert!(entries.iter().all(|e| {
            let a: Vec<u64> = e.pair.a.iter().map(|x| x.coords()[0]).collect();
            (a[1] - a[0]) % 2 == 1
        }));
    }

    #[test]
    fn e0_exceptional_k8_on_z9() {
        let z9 = g("Z9");
        let entries = enumerate_e0(8, 2, &z9, DEFAULT_ORACLE_CAP).unwrap();
        assert!(!entries.is_empty());
        let h: BTreeSet<u64> = [0u64, 3, 6].into_iter().collect();
        for e in &entries {
            assert_eq!(e.representative.support_size(), 8);
            assert_eq!(e.representative.spectrum().len(), 2);
            // spectrum {x, y} always has x - y outside H
            let sp: Vec<&GroupElement> = e.pair.b.iter().collect();
            let diff = z9.sub(sp[0], sp[1]);
            assert!(!h.contains(&diff.coords()[0]));
        }
    }

    #[test]
    fn duality_checks() {
        let z5 = ThetaProfile::compute(&g("Z5"), DEFAULT_ORACLE_CAP).unwrap();
        assert!(duality_check(3, &z5).unwrap());
        let z9 = ThetaProfile::compute(&g("Z9"), DEFAULT_ORACLE_CAP).unwrap();
        assert!(duality_check(2, &z9).unwrap());
        // flat spot: hypothesis vacuous
        assert!(!duality_check(4, &z9).unwrap());
    }

    #[test]
    fn ds_classify_subgroup_indicator() {
        let z9 = g("Z9");
        let h = z9.cyclic_subgroup(&z9.element(&[3]).unwrap());
        let f = GroupFunction::subgroup_indicator(&h);
        let d = donoho_stark_classify(&f).unwrap().unwrap();
        assert_eq!(d.shift, z9.zero());
        assert_eq!(d.character, z9.zero());
        assert!(d.constant.is_one());
        assert_eq!(d.subgroup.elements(), h.elements());
    }

    #[test]
    fn ds_classify_translated_modulated() {
        let z4 = g("Z4");
        let h = z4.cyclic_subgroup(&z4.element(&[2]).unwrap());
        let f = GroupFunction::subgroup_indicator(&h)
            .modulate(&z4.element(&[1]).unwrap())
            .translate(&z4.element(&[2]).unwrap());
        let d = donoho_stark_classify(&f).unwrap().unwrap();
        let rebuilt = d.reconstruct();
        assert_eq!(rebuilt, f);
        // and a non-equality case returns None
        let g5 = g("Z5");
        let two = GroupFunction::indicator(
            &g5,
            &[g5.element(&[0]).unwrap(), g5.element(&[1]).unwrap()],
        );
        assert!(donoho_stark_classify(&two).unwrap().is_none());
    }

    #[test]
    fn profile_methods_tagged() {
        let p = ThetaProfile::compute(&g("Z2xZ5"), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(p.method(3), ThetaMethod::ClosedForm);
        let pr = ThetaProfile::compute(&g("Z2xZ2xZ2"), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(pr.method(3), ThetaMethod::ProductRecursion);
        assert_eq!(pr.theta_values(), &[8, 4, 4, 2, 2, 2, 2, 1]);
        let z8 = ThetaProfile::compute(&g("Z8"), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(z8.method(2), ThetaMethod::Oracle);
        // Z8: divisor structure gives theta = 8,4,4,2,2,2,2,1 as well
        assert_eq!(z8.theta_values(), &[8, 4, 4, 2, 2, 2, 2, 1]);
    }

    #[test]
    fn predicted_equality_points() {
        let z9 = ThetaProfile::compute(&g("Z9"), DEFAULT_ORACLE_CAP).unwrap();
        let pts: Vec<u64> = (1..=9).filter(|&k| z9.predicted_equality_cases(k)).collect();
        assert_eq!(pts, vec![1, 2, 3, 6, 8, 9]);
        // Z2xZ5 gains the flat points k = 8 (chi (x) g with r = 4) and
        // k = 9 (full-order difference pairs) on top of the strict drops
        let z10 = ThetaProfile::compute(&g("Z2xZ5"), DEFAULT_ORACLE_CAP).unwrap();
        let pts10: Vec<u64> = (1..=10)
            .filter(|&k| z10.predicted_equality_cases(k))
            .collect();
        assert_eq!(pts10, vec![1, 2, 4, 5, 8, 9, 10]);
        // Z2xZ3: every k carries equality cases
        let z6 = ThetaProfile::compute(&g("Z2xZ3"), DEFAULT_ORACLE_CAP).unwrap();
        let pts6: Vec<u64> = (1..=6)
            .filter(|&k| z6.predicted_equality_cases(k))
            .collect();
        assert_eq!(pts6, vec![1, 2, 3, 4, 5, 6]);
    }
}
