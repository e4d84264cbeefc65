//! Exact computation of Meshulam's function and the support/spectrum
//! uncertainty principle on finite Abelian groups.
//!
//! The crate models groups `Z_{p1^n1} x ... x Z_{pr^nr}`, computes discrete
//! Fourier transforms exactly over the cyclotomic field `Q(zeta_N)` where
//! `N` is the group exponent, evaluates Meshulam's function both by closed
//! formulas and by a brute-force oracle, enumerates and classifies the
//! functions whose spectrum size attains the minimum, and produces verified
//! rank-one block decompositions of extracted Fourier submatrices.
//!
//! Everything that decides a mathematical statement runs in exact
//! arithmetic; floating point appears only as a search prefilter.

pub mod cert;
pub mod cyclotomic;
pub mod equality;
pub mod function;
pub mod group;
pub mod rankdec;
pub(crate) mod scan;
pub mod theta;
pub mod verify;

pub use cyclotomic::{CycField, CycMatrix, CycNum};
pub use function::GroupFunction;
pub use group::{FiniteAbelianGroup, GroupElement, Subgroup};
