//! Finite Abelian groups as ordered products of prime-power cyclic factors,
//! with element arithmetic, the character pairing, subgroups and cosets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on group orders for element enumeration.
pub const MAX_ENUMERABLE_ORDER: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("malformed group spec `{0}`: expected `Z<n>` terms joined by `x`")]
    MalformedSpec(String),
    #[error("`Z{0}` is not a prime power; write the factorization explicitly (e.g. Z2xZ3)")]
    NotPrimePower(u64),
    #[error("element has {got} coordinates, group has {expected} factors")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("group order {0} exceeds the enumeration cap {MAX_ENUMERABLE_ORDER}")]
    OrderTooLarge(u64),
}

/// One cyclic factor `Z_{p^n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicFactor {
    pub prime: u64,
    pub exponent: u32,
}

impl CyclicFactor {
    pub fn modulus(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

/// A finite Abelian group written as `Z_{p1^n1} x ... x Z_{pr^nr}`, in the
/// order the user gave it. No isomorphism normalization is ever applied.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Vec<CyclicFactor>,
    order: u64,
    exponent: u64,
}

/// An element of the group, coordinates stored reduced into `[0, p_i^{n_i})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    coords: Vec<u64>,
}

/// The dual group is identified with the group itself: a character is
/// addressed by the element it pairs against.
pub type Character = GroupElement;

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

fn trial_division_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Decomposes `n >= 2` as `p^k` with `p` prime, if possible.
fn prime_power(n: u64) -> Option<CyclicFactor> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            return (m == 1).then_some(CyclicFactor { prime: p, exponent: e });
        }
        p += 1;
    }
    // n itself is prime; confirm with the deterministic check anyway.
    trial_division_is_prime(n).then_some(CyclicFactor {
        prime: n,
        exponent: 1,
    })
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FiniteAbelianGroup {
    /// Builds a group from prime-power factors. Each factor is re-checked.
    pub fn new(factors: Vec<CyclicFactor>) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Err(GroupError::MalformedSpec(String::new()));
        }
        let mut order: u64 = 1;
        let mut exponent: u64 = 1;
        for f in &factors {
            if !trial_division_is_prime(f.prime) || f.exponent == 0 {
                return Err(GroupError::NotPrimePower(f.modulus()));
            }
            order = order
                .checked_mul(f.modulus())
                .ok_or(GroupError::OrderTooLarge(u64::MAX))?;
            exponent = lcm(exponent, f.modulus());
        }
        Ok(Self {
            factors,
            order,
            exponent,
        })
    }

    pub fn factors(&self) -> &[CyclicFactor] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exponent `N`: the lcm of the factor moduli. All character values live
    /// in the cyclotomic field of level `N`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.factors.len()],
        }
    }

    /// Builds an element, reducing every coordinate into range.
    pub fn element(&self, coords: &[u64]) -> Result<GroupElement, GroupError> {
        if coords.len() != self.factors.len() {
            return Err(GroupError::ShapeMismatch {
                expected: self.factors.len(),
                got: coords.len(),
            });
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, f)| c % f.modulus())
                .collect(),
        })
    }

    /// Builds an element from possibly-negative coordinates.
    pub fn element_signed(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        if coords.len() != self.factors.len() {
            return Err(GroupError::ShapeMismatch {
                expected: self.factors.len(),
                got: coords.len(),
            });
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, f)| {
                    let m = f.modulus() as i64;
                    (c.rem_euclid(m)) as u64
                })
                .collect(),
        })
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.factors)
                .map(|((&x, &y), f)| (x + y) % f.modulus())
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, f)| if x == 0 { 0 } else { f.modulus() - x })
                .collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, n: u64, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, f)| {
                    let m = f.modulus();
                    ((n % m) * (x % m)) % m
                })
                .collect(),
        }
    }

    /// Index of an element in the lexicographic enumeration of the group
    /// (first coordinate most significant).
    pub fn index_of(&self, a: &GroupElement) -> u64 {
        let mut idx = 0;
        for (x, f) in a.coords.iter().zip(&self.factors) {
            idx = idx * f.modulus() + x;
        }
        idx
    }

    pub fn element_at(&self, mut index: u64) -> GroupElement {
        let mut coords = vec![0; self.factors.len()];
        for (slot, f) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = index % f.modulus();
            index /= f.modulus();
        }
        GroupElement { coords }
    }

    /// All elements in lexicographic order. Errors above the enumeration cap.
    pub fn elements(&self) -> Result<Vec<GroupElement>, GroupError> {
        if self.order > MAX_ENUMERABLE_ORDER {
            return Err(GroupError::OrderTooLarge(self.order));
        }
        Ok((0..self.order).map(|i| self.element_at(i)).collect())
    }

    /// Additive order of an element.
    pub fn element_order(&self, a: &GroupElement) -> u64 {
        a.coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, f)| {
                let m = f.modulus();
                if x == 0 {
                    1
                } else {
                    m / gcd(x, m)
                }
            })
            .fold(1, lcm)
    }

    /// Exponent `e` with `chi_y(x) = zeta_N^e`, where
    /// `e = sum_j x_j y_j (N / p_j^{n_j}) mod N`. Symmetric and bilinear.
    pub fn pairing_exponent(&self, x: &GroupElement, y: &Character) -> Result<u64, GroupError> {
        if x.coords.len() != self.factors.len() || y.coords.len() != self.factors.len() {
            return Err(GroupError::ShapeMismatch {
                expected: self.factors.len(),
                got: x.coords.len().max(y.coords.len()),
            });
        }
        let n = self.exponent;
        let mut e: u64 = 0;
        for ((&xj, &yj), f) in x.coords.iter().zip(&y.coords).zip(&self.factors) {
            let m = f.modulus();
            // x_j y_j (N/m) mod N, with the product reduced mod m first.
            let t = (xj % m) * (yj % m) % m;
            e = (e + t * (n / m)) % n;
        }
        Ok(e)
    }

    /// The cyclic subgroup generated by one element.
    pub fn cyclic_subgroup(&self, generator: &GroupElement) -> Subgroup {
        let mut members = vec![self.zero()];
        let mut cur = generator.clone();
        while cur != self.zero() {
            members.push(cur.clone());
            cur = self.add(&cur, generator);
        }
        members.sort();
        Subgroup {
            group: self.clone(),
            elements: members,
            generators: vec![generator.clone()],
        }
    }

    /// Every subgroup of the form `<m>` for `m` in the group, deduplicated
    /// and sorted by (size, member list).
    pub fn enumerate_cyclic_subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        let mut seen: Vec<Subgroup> = Vec::new();
        for m in self.elements()? {
            let h = self.cyclic_subgroup(&m);
            if !seen.iter().any(|s| s.elements == h.elements) {
                seen.push(h);
            }
        }
        seen.sort_by(|a, b| {
            (a.elements.len(), &a.elements).cmp(&(b.elements.len(), &b.elements))
        });
        Ok(seen)
    }

    /// The annihilator `{ y : <x,y> = 0 for all x in H }`, computed directly
    /// from the pairing.
    pub fn annihilator(&self, h: &Subgroup) -> Result<Subgroup, GroupError> {
        let mut members = Vec::new();
        for y in self.elements()? {
            let mut kills = true;
            for g in &h.generators {
                if self.pairing_exponent(g, &y)? != 0 {
                    kills = false;
                    break;
                }
            }
            if kills {
                members.push(y);
            }
        }
        members.sort();
        let generators = members.clone();
        Ok(Subgroup {
            group: self.clone(),
            elements: members,
            generators,
        })
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .factors
            .iter()
            .map(|c| format!("Z{}", c.modulus()))
            .collect();
        write!(f, "{}", terms.join("x"))
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = GroupError;

    /// Grammar: `group := term ("x" term)*`, `term := "Z" integer`, each
    /// integer a prime power >= 2. Whitespace-free.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(GroupError::MalformedSpec(s.to_string()));
        }
        let mut factors = Vec::new();
        for term in s.split('x') {
            let digits = term
                .strip_prefix('Z')
                .ok_or_else(|| GroupError::MalformedSpec(s.to_string()))?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(GroupError::MalformedSpec(s.to_string()));
            }
            let n: u64 = digits
                .parse()
                .map_err(|_| GroupError::MalformedSpec(s.to_string()))?;
            if n < 2 {
                return Err(GroupError::NotPrimePower(n));
            }
            factors.push(prime_power(n).ok_or(GroupError::NotPrimePower(n))?);
        }
        Self::new(factors)
    }
}

/// Convenience parser, panicking on bad input. Test and example helper.
pub fn parse_group(spec: &str) -> Result<FiniteAbelianGroup, GroupError> {
    spec.parse()
}

/// A subgroup given by its sorted member list and a generator set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    group: FiniteAbelianGroup,
    elements: Vec<GroupElement>,
    generators: Vec<GroupElement>,
}

impl Subgroup {
    /// Builds a subgroup from a member list, returning `None` when the set
    /// is not closed under the group law.
    pub fn from_elements(
        group: &FiniteAbelianGroup,
        mut elements: Vec<GroupElement>,
    ) -> Option<Subgroup> {
        elements.sort();
        elements.dedup();
        let candidate = Subgroup {
            group: group.clone(),
            generators: elements.clone(),
            elements,
        };
        candidate.check_invariants().then_some(candidate)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// `{a + h : h in H}`, sorted.
    pub fn coset(&self, a: &GroupElement) -> Vec<GroupElement> {
        let mut c: Vec<GroupElement> = self
            .elements
            .iter()
            .map(|h| self.group.add(a, h))
            .collect();
        c.sort();
        c
    }

    /// Checks closure under addition and negation, identity membership, and
    /// Lagrange divisibility.
    pub fn check_invariants(&self) -> bool {
        if !self.contains(&self.group.zero()) {
            return false;
        }
        if self.group.order() % self.elements.len() as u64 != 0 {
            return false;
        }
        for a in &self.elements {
            if !self.contains(&self.group.neg(a)) {
                return false;
            }
            for b in &self.elements {
                if !self.contains(&self.group.add(a, b)) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(spec: &str) -> FiniteAbelianGroup {
        parse_group(spec).unwrap()
    }

    #[test]
    fn parse_prime_square() {
        let z9 = g("Z9");
        assert_eq!(z9.factors(), &[CyclicFactor { prime: 3, exponent: 2 }]);
        assert_eq!(z9.order(), 9);
        assert_eq!(z9.exponent(), 9);
    }

    #[test]
    fn parse_two_primes() {
        let z15 = g("Z3xZ5");
        assert_eq!(
            z15.factors(),
            &[
                CyclicFactor { prime: 3, exponent: 1 },
                CyclicFactor { prime: 5, exponent: 1 }
            ]
        );
        assert_eq!(z15.order(), 15);
        assert_eq!(z15.exponent(), 15);
    }

    #[test]
    fn parse_vector_group_exponent_is_lcm() {
        let z33 = g("Z3xZ3");
        assert_eq!(z33.order(), 9);
        assert_eq!(z33.exponent(), 3);
    }

    #[test]
    fn parse_rejects_composite_and_garbage() {
        assert_eq!(parse_group("Z6"), Err(GroupError::NotPrimePower(6)));
        assert_eq!(parse_group("Z12"), Err(GroupError::NotPrimePower(12)));
        assert!(matches!(parse_group("Z"), Err(GroupError::MalformedSpec(_))));
        assert!(matches!(parse_group("Z5x"), Err(GroupError::MalformedSpec(_))));
        assert!(matches!(parse_group("5"), Err(GroupError::MalformedSpec(_))));
        assert!(matches!(parse_group("Z3 x Z5"), Err(GroupError::MalformedSpec(_))));
        assert_eq!(parse_group("Z1"), Err(GroupError::NotPrimePower(1)));
    }

    #[test]
    fn display_round_trips() {
        for spec in ["Z5", "Z9", "Z2xZ5", "Z3xZ3", "Z4xZ9"] {
            assert_eq!(g(spec).to_string(), spec);
        }
    }

    #[test]
    fn pairing_z9() {
        let z9 = g("Z9");
        let x = z9.element(&[3]).unwrap();
        let y = z9.element(&[3]).unwrap();
        // 3*3 = 9 = 0 mod 9, so chi_3(3) = 1.
        assert_eq!(z9.pairing_exponent(&x, &y).unwrap(), 0);
    }

    #[test]
    fn pairing_z3xz5() {
        let g15 = g("Z3xZ5");
        let x = g15.element(&[1, 0]).unwrap();
        let y = g15.element(&[1, 0]).unwrap();
        // e = 1*1*(15/3) = 5, i.e. the value is zeta_15^5 = zeta_3.
        assert_eq!(g15.pairing_exponent(&x, &y).unwrap(), 5);
    }

    #[test]
    fn pairing_identity_is_trivial() {
        let g10 = g("Z2xZ5");
        let zero = g10.zero();
        for y in g10.elements().unwrap() {
            assert_eq!(g10.pairing_exponent(&zero, &y).unwrap(), 0);
        }
    }

    #[test]
    fn pairing_bilinear_and_nondegenerate() {
        for spec in ["Z9", "Z2xZ5", "Z3xZ3", "Z4"] {
            let grp = g(spec);
            let n = grp.exponent();
            let els = grp.elements().unwrap();
            for x in &els {
                for xp in &els {
                    for y in &els {
                        let lhs = grp
                            .pairing_exponent(&grp.add(x, xp), y)
                            .unwrap();
                        let rhs = (grp.pairing_exponent(x, y).unwrap()
                            + grp.pairing_exponent(xp, y).unwrap())
                            % n;
                        assert_eq!(lhs, rhs);
                    }
                }
            }
            // non-degeneracy: every nonzero y pairs nontrivially with some x
            for y in &els {
                if *y == grp.zero() {
                    continue;
                }
                assert!(els
                    .iter()
                    .any(|x| grp.pairing_exponent(x, y).unwrap() != 0));
            }
        }
    }

    #[test]
    fn cyclic_subgroups_z9() {
        let z9 = g("Z9");
        let subs = z9.enumerate_cyclic_subgroups().unwrap();
        assert_eq!(subs.len(), 3);
        assert_eq!(subs[0].len(), 1);
        assert_eq!(subs[1].len(), 3);
        assert_eq!(
            subs[1].elements(),
            &[
                z9.element(&[0]).unwrap(),
                z9.element(&[3]).unwrap(),
                z9.element(&[6]).unwrap()
            ]
        );
        assert_eq!(subs[2].len(), 9);
        for s in &subs {
            assert!(s.check_invariants());
        }
    }

    #[test]
    fn cyclic_subgroups_z3xz3() {
        // {0} and the four lines of the plane over F_3; the full group is
        // not generated by a single element.
        let z33 = g("Z3xZ3");
        let subs = z33.enumerate_cyclic_subgroups().unwrap();
        assert_eq!(subs.len(), 5);
        assert_eq!(subs.iter().filter(|s| s.len() == 3).count(), 4);
        for s in &subs {
            assert!(s.check_invariants());
        }
    }

    #[test]
    fn cyclic_subgroups_z2xz5() {
        let z10 = g("Z2xZ5");
        let subs = z10.enumerate_cyclic_subgroups().unwrap();
        let sizes: Vec<usize> = subs.iter().map(|s| s.len()).collect();
        assert_eq!(sizes, vec![1, 2, 5, 10]);
    }

    #[test]
    fn coset_examples() {
        let z9 = g("Z9");
        let h = z9.cyclic_subgroup(&z9.element(&[3]).unwrap());
        let c = h.coset(&z9.element(&[1]).unwrap());
        assert_eq!(
            c,
            vec![
                z9.element(&[1]).unwrap(),
                z9.element(&[4]).unwrap(),
                z9.element(&[7]).unwrap()
            ]
        );
        // a in H gives back H itself
        assert_eq!(h.coset(&z9.element(&[6]).unwrap()), h.elements());

        let z10 = g("Z2xZ5");
        let k = z10.cyclic_subgroup(&z10.element(&[0, 1]).unwrap());
        let c2 = k.coset(&z10.element(&[1, 0]).unwrap());
        assert_eq!(c2.len(), 5);
        assert!(c2.iter().all(|e| e.coords()[0] == 1));
    }

    #[test]
    fn annihilator_from_pairing() {
        // In Z9, the annihilator of H = {0,3,6} is H itself.
        let z9 = g("Z9");
        let h = z9.cyclic_subgroup(&z9.element(&[3]).unwrap());
        let ann = z9.annihilator(&h).unwrap();
        assert_eq!(ann.elements(), h.elements());
        // orders multiply to |G|
        let z10 = g("Z2xZ5");
        let k = z10.cyclic_subgroup(&z10.element(&[1, 0]).unwrap());
        let ann2 = z10.annihilator(&k).unwrap();
        assert_eq!(ann2.len() as u64 * k.len() as u64, z10.order());
    }

    #[test]
    fn element_index_round_trip() {
        let g15 = g("Z3xZ5");
        for i in 0..15 {
            assert_eq!(g15.index_of(&g15.element_at(i)), i);
        }
        // lexicographic: (0,0),(0,1),...,(0,4),(1,0),...
        assert_eq!(g15.element_at(5), g15.element(&[1, 0]).unwrap());
    }

    #[test]
    fn element_orders() {
        let z9 = g("Z9");
        assert_eq!(z9.element_order(&z9.element(&[3]).unwrap()), 3);
        assert_eq!(z9.element_order(&z9.element(&[1]).unwrap()), 9);
        let z33 = g("Z3xZ3");
        assert_eq!(z33.element_order(&z33.element(&[1, 2]).unwrap()), 3);
    }
}
