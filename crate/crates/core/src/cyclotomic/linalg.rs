//! Exact linear algebra over `Q(zeta_N)`: fraction-free elimination for
//! rank, determinant, and reduced kernel bases, plus the floating-point
//! rank estimate used only to prune search candidates.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{CycField, CycNum, FieldError};

/// Dense matrix with all entries at one cyclotomic level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    level: u64,
    entries: Vec<CycNum>,
}

impl CycMatrix {
    pub fn from_fn(
        rows: usize,
        cols: usize,
        level: u64,
        mut f: impl FnMut(usize, usize) -> CycNum,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let e = f(r, c);
                assert_eq!(e.level(), level, "matrix entry at wrong level");
                entries.push(e);
            }
        }
        CycMatrix {
            rows,
            cols,
            level,
            entries,
        }
    }

    pub fn from_rows(level: u64, rows: Vec<Vec<CycNum>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols));
        Self::from_fn(nrows, ncols, level, |i, j| rows[i][j].clone())
    }

    pub fn identity(n: usize, level: u64) -> Self {
        let f = CycField::new(level);
        Self::from_fn(n, n, level, |i, j| if i == j { f.one() } else { f.zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn at(&self, r: usize, c: usize) -> &CycNum {
        &self.entries[r * self.cols + c]
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[CycNum]) -> Result<Vec<CycNum>, FieldError> {
        if v.len() != self.cols {
            return Err(FieldError::LevelMismatch(self.cols as u64, v.len() as u64));
        }
        let f = CycField::new(self.level);
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for c in 0..self.cols {
                    if !v[c].is_zero() && !self.at(r, c).is_zero() {
                        acc = f.add(&acc, &f.mul(self.at(r, c), &v[c]));
                    }
                }
                acc
            })
            .collect())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let f = CycField::new(self.level);
        Self::from_fn(self.cols, self.rows, self.level, |i, j| {
            f.conjugate(self.at(j, i))
        })
    }

    pub fn matmul(&self, rhs: &CycMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows);
        let f = CycField::new(self.level);
        Self::from_fn(self.rows, rhs.cols, self.level, |i, j| {
            let mut acc = f.zero();
            for t in 0..self.cols {
                if !self.at(i, t).is_zero() && !rhs.at(t, j).is_zero() {
                    acc = f.add(&acc, &f.mul(self.at(i, t), rhs.at(t, j)));
                }
            }
            acc
        })
    }
}

/// Result of exact elimination: the rank and a reduced kernel basis.
#[derive(Debug, Clone)]
pub struct RankKernel {
    pub rank: usize,
    /// Basis of `{v : Mv = 0}`, one vector per free column in ascending
    /// column order, each scaled so its first nonzero coordinate is 1.
    pub kernel: Vec<Vec<CycNum>>,
}

/// Exact rank and kernel over `Q(zeta_N)`.
///
/// Forward elimination is fraction-free in the Bareiss style (every update
/// is divided by the previous pivot, which keeps intermediate entries equal
/// to minors of the input and bounds coefficient growth); back-substitution
/// then produces a reduced echelon form for a deterministic kernel basis.
pub fn rank_kernel(m: &CycMatrix) -> RankKernel {
    let field = CycField::new(m.level);
    let rows = m.rows;
    let cols = m.cols;
    let mut w: Vec<Vec<CycNum>> = (0..rows)
        .map(|r| (0..cols).map(|c| m.at(r, c).clone()).collect())
        .collect();

    let mut pivots: Vec<usize> = Vec::new(); // pivot column per pivot row
    let mut prev_pivot_inv = field.one();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(pr) = (row..rows).find(|&r| !w[r][col].is_zero()) else {
            continue;
        };
        w.swap(row, pr);
        let pivot = w[row][col].clone();
        for r in row + 1..rows {
            let lead = std::mem::replace(&mut w[r][col], field.zero());
            for c in col + 1..cols {
                // Bareiss update: (pivot*a - lead*b) / previous pivot
                let num = field.sub(
                    &field.mul(&pivot, &w[r][c]),
                    &field.mul(&lead, &w[row][c]),
                );
                w[r][c] = field.mul(&num, &prev_pivot_inv);
            }
        }
        prev_pivot_inv = field
            .inv(&pivot)
            .expect("pivot is nonzero by construction");
        pivots.push(col);
        row += 1;
    }
    let rank = pivots.len();

    // Reduced echelon form: normalize pivots to 1 and clear above.
    for (pr, &pc) in pivots.iter().enumerate().rev() {
        let inv = field
            .inv(&w[pr][pc].clone())
            .expect("pivot is nonzero by construction");
        for c in pc..cols {
            w[pr][c] = field.mul(&w[pr][c], &inv);
        }
        for r in 0..pr {
            if w[r][pc].is_zero() {
                continue;
            }
            let factor = w[r][pc].clone();
            for c in pc..cols {
                let t = field.mul(&factor, &w[pr][c]);
                w[r][c] = field.sub(&w[r][c], &t);
            }
        }
    }

    // Kernel: one vector per free column.
    let mut kernel = Vec::with_capacity(cols - rank);
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; cols];
        for (pr, &pc) in pivots.iter().enumerate() {
            v[pc] = Some(pr);
        }
        v
    };
    for free in 0..cols {
        if pivot_set[free].is_some() {
            continue;
        }
        let mut vec: Vec<CycNum> = vec![field.zero(); cols];
        vec[free] = field.one();
        for (c, slot) in pivot_set.iter().enumerate() {
            if let Some(pr) = slot {
                vec[c] = field.neg(&w[*pr][free]);
            }
        }
        kernel.push(normalize_first_nonzero(&field, vec));
    }
    RankKernel { rank, kernel }
}

/// Scales a vector so its first nonzero coordinate equals 1.
pub fn normalize_first_nonzero(field: &CycField, mut v: Vec<CycNum>) -> Vec<CycNum> {
    if let Some(first) = v.iter().find(|c| !c.is_zero()).cloned() {
        let inv = field.inv(&first).expect("nonzero");
        for c in v.iter_mut() {
            if !c.is_zero() {
                *c = field.mul(c, &inv);
            }
        }
    }
    v
}

/// Exact determinant by the same fraction-free elimination.
pub fn det(m: &CycMatrix) -> CycNum {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let field = CycField::new(m.level);
    let n = m.rows;
    if n == 0 {
        return field.one();
    }
    let mut w: Vec<Vec<CycNum>> = (0..n)
        .map(|r| (0..n).map(|c| m.at(r, c).clone()).collect())
        .collect();
    let mut sign_flip = false;
    let mut prev_pivot_inv = field.one();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !w[r][col].is_zero()) else {
            return field.zero();
        };
        if pr != col {
            w.swap(col, pr);
            sign_flip = !sign_flip;
        }
        let pivot = w[col][col].clone();
        for r in col + 1..n {
            let lead = std::mem::replace(&mut w[r][col], field.zero());
            for c in col + 1..n {
                let num = field.sub(
                    &field.mul(&pivot, &w[r][c]),
                    &field.mul(&lead, &w[col][c]),
                );
                w[r][c] = field.mul(&num, &prev_pivot_inv);
            }
        }
        prev_pivot_inv = field.inv(&pivot).expect("nonzero pivot");
    }
    // With Bareiss updates the final pivot is the determinant itself.
    let d = w[n - 1][n - 1].clone();
    if sign_flip {
        field.neg(&d)
    } else {
        d
    }
}

/// Floating-point rank estimate: singular values above
/// `tolerance * sigma_max` are counted.
///
/// Contract: pruning only. Any rank decision that is reported to a caller
/// must be confirmed by [`rank_kernel`].
pub fn float_rank_estimate(m: &CycMatrix, tolerance: f64) -> usize {
    assert!(tolerance > 0.0);
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let field = CycField::new(m.level);
    let fm = DMatrix::<Complex64>::from_fn(m.rows, m.cols, |r, c| field.to_complex(m.at(r, c)));
    let svd = fm.svd(false, false);
    let max = svd
        .singular_values
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > tolerance * max)
        .count()
}

/// Default relative tolerance for the float prefilter.
pub const FLOAT_RANK_TOLERANCE: f64 = 1e-9;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::root_of_unity;

    fn rou(e: i64, n: u64) -> CycNum {
        root_of_unity(e, n)
    }

    #[test]
    fn identity_has_full_rank_and_empty_kernel() {
        let m = CycMatrix::identity(3, 4);
        let rk = rank_kernel(&m);
        assert_eq!(rk.rank, 3);
        assert!(rk.kernel.is_empty());
        assert_eq!(float_rank_estimate(&m, 1e-9), 3);
    }

    #[test]
    fn rank_two_from_nonzero_determinant() {
        // [[1,1],[1,zeta_3]] has det = zeta_3 - 1 != 0
        let f = CycField::new(3);
        let m = CycMatrix::from_rows(
            3,
            vec![
                vec![f.one(), f.one()],
                vec![f.one(), f.root_of_unity(1)],
            ],
        );
        assert_eq!(rank_kernel(&m).rank, 2);
        let d = det(&m);
        assert_eq!(d, f.sub(&f.root_of_unity(1), &f.one()));
    }

    #[test]
    fn single_row_kernel_is_normalized() {
        // [1, zeta_5]: kernel spanned by (-zeta_5, 1), normalized so the
        // first nonzero coordinate is 1: (1, -zeta_5^{-1}) = (1, -zeta_5^4).
        let f = CycField::new(5);
        let m = CycMatrix::from_rows(5, vec![vec![f.one(), f.root_of_unity(1)]]);
        let rk = rank_kernel(&m);
        assert_eq!(rk.rank, 1);
        assert_eq!(rk.kernel.len(), 1);
        let v = &rk.kernel[0];
        assert!(v[0].is_one());
        assert_eq!(v[1], f.neg(&f.root_of_unity(4)));
        // and it is a true kernel vector
        let mv = m.apply(v).unwrap();
        assert!(mv.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn kernel_vectors_annihilate_exactly() {
        // 2x4 matrix of roots of unity; kernel must satisfy Mv = 0 exactly.
        let m = CycMatrix::from_rows(
            8,
            vec![
                vec![rou(0, 8), rou(1, 8), rou(2, 8), rou(3, 8)],
                vec![rou(0, 8), rou(3, 8), rou(6, 8), rou(1, 8)],
            ],
        );
        let rk = rank_kernel(&m);
        assert_eq!(rk.rank, 2);
        assert_eq!(rk.kernel.len(), 2);
        for v in &rk.kernel {
            let mv = m.apply(v).unwrap();
            assert!(mv.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn rank_one_outer_product() {
        // u v^T for root-of-unity vectors has rank 1, in both exact and
        // float arithmetic.
        let f = CycField::new(7);
        let u = [0i64, 2, 5];
        let v = [1i64, 3];
        let m = CycMatrix::from_fn(3, 2, 7, |i, j| f.root_of_unity(u[i] + v[j]));
        assert_eq!(rank_kernel(&m).rank, 1);
        assert_eq!(float_rank_estimate(&m, 1e-9), 1);
    }

    #[test]
    fn fourier_matrix_z3_is_invertible() {
        let f = CycField::new(3);
        let m = CycMatrix::from_fn(3, 3, 3, |i, j| f.root_of_unity((i * j) as i64));
        assert_eq!(rank_kernel(&m).rank, 3);
        assert_eq!(float_rank_estimate(&m, 1e-9), 3);
        // det is +/- 3 zeta-ish; at least nonzero
        assert!(!det(&m).is_zero());
    }

    /// Independent oracle: rank as the largest size of a nonvanishing minor,
    /// determinants by cofactor expansion.
    fn det_by_cofactors(f: &CycField, m: &[Vec<CycNum>]) -> CycNum {
        let n = m.len();
        if n == 0 {
            return f.one();
        }
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = f.zero();
        for (j, head) in m[0].iter().enumerate() {
            if head.is_zero() {
                continue;
            }
            let minor: Vec<Vec<CycNum>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, e)| e.clone())
                        .collect()
                })
                .collect();
            let term = f.mul(head, &det_by_cofactors(f, &minor));
            acc = if j % 2 == 0 {
                f.add(&acc, &term)
            } else {
                f.sub(&acc, &term)
            };
        }
        acc
    }

    fn rank_by_minors(f: &CycField, m: &CycMatrix) -> usize {
        use itertools::Itertools;
        let max = m.rows().min(m.cols());
        for size in (1..=max).rev() {
            for rows in (0..m.rows()).combinations(size) {
                for cols in (0..m.cols()).combinations(size) {
                    let sub: Vec<Vec<CycNum>> = rows
                        .iter()
                        .map(|&r| cols.iter().map(|&c| m.at(r, c).clone()).collect())
                        .collect();
                    if !det_by_cofactors(f, &sub).is_zero() {
                        return size;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rank_agrees_with_minor_expansion_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(17);
        let level = 12u64;
        let f = CycField::new(level);
        for _ in 0..40 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            // random roots of unity, with occasional repeated rows to
            // exercise deficiency
            let mut data: Vec<Vec<CycNum>> = (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| f.root_of_unity(rng.gen_range(0..level as i64)))
                        .collect()
                })
                .collect();
            if rows >= 2 && rng.gen_bool(0.4) {
                data[rows - 1] = data[0].clone();
            }
            let m = CycMatrix::from_rows(level, data);
            let fast = rank_kernel(&m);
            assert_eq!(fast.rank, rank_by_minors(&f, &m));
            for v in &fast.kernel {
                assert!(m.apply(v).unwrap().iter().all(|x| x.is_zero()));
            }
            // float estimate agrees wherever the exact rank was computed
            assert_eq!(float_rank_estimate(&m, FLOAT_RANK_TOLERANCE), fast.rank);
        }
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(5);
        let f = CycField::new(9);
        for _ in 0..25 {
            let n = rng.gen_range(1..=4);
            let data: Vec<Vec<CycNum>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| f.root_of_unity(rng.gen_range(0..9)))
                        .collect()
                })
                .collect();
            let m = CycMatrix::from_rows(9, data.clone());
            assert_eq!(det(&m), det_by_cofactors(&f, &data));
        }
    }
}
