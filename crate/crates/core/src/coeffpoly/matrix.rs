use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coefficient::Coefficient;

/// Gaussian integer used by the fraction-free determinant.
#[derive(Clone, PartialEq, Debug)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn zero() -> Self {
        GaussInt {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn one() -> Self {
        GaussInt {
            re: BigInt::one(),
            im: BigInt::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    /// Exact division (the quotient is known to lie in the ring).
    fn div_exact(&self, o: &GaussInt) -> GaussInt {
        let norm = &o.re * &o.re + &o.im * &o.im;
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        GaussInt {
            re: re / &norm,
            im: im / &norm,
        }
    }
}

/// A dense matrix of exact [`Coefficient`] entries.
///
/// Elimination is plain Gauss-Jordan over the field of Gaussian rationals
/// (every step exact), with pivot rows chosen by sparsity to limit
/// coefficient growth. Nullspace vectors satisfy `A v = 0` exactly and
/// rank + nullity = cols always holds by construction.
#[derive(Clone, PartialEq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Coefficient>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Coefficient::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Coefficient::one());
        }
        m
    }

    /// Build from column vectors (all of equal length).
    pub fn from_columns(columns: &[Vec<Coefficient>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = ExactMatrix::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Coefficient>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = ExactMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Coefficient {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Coefficient) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut m = ExactMatrix::zeros(self.rows + other.rows, self.cols);
        m.data[..self.data.len()].clone_from_slice(&self.data);
        m.data[self.data.len()..].clone_from_slice(&other.data);
        m
    }

    pub fn mul_vec(&self, v: &[Coefficient]) -> Vec<Coefficient> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Coefficient::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += &(a * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul_mat(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let prod = a * b;
                        let cur = out.get(i, j) + &prod;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            // Sparsest nonzero candidate row limits fill-in.
            let mut best: Option<(usize, usize)> = None;
            for r in row..self.rows {
                if self.get(r, col).is_zero() {
                    continue;
                }
                let nnz = (col..self.cols).filter(|&j| !self.get(r, j).is_zero()).count();
                if best.map_or(true, |(_, b)| nnz < b) {
                    best = Some((r, nnz));
                }
            }
            let Some((prow, _)) = best else { continue };
            self.swap_rows(row, prow);
            let inv = self.get(row, col).inv().expect("nonzero pivot");
            for j in col..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for j in col..self.cols {
                    let piv = self.get(row, j);
                    if piv.is_zero() {
                        continue;
                    }
                    let v = self.get(r, j) - &(&factor * piv);
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.rref_in_place().len()
    }

    /// An exact basis of `ker A`, with rank + nullity = cols checked.
    ///
    /// The basis is canonical given the fixed column order: one vector per
    /// free column with a unit entry there.
    pub fn nullspace(&self) -> Vec<Vec<Coefficient>> {
        let mut work = self.clone();
        let pivots = work.rref_in_place();
        let rank = pivots.len();
        let mut out = Vec::with_capacity(self.cols - rank);
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Coefficient::zero(); self.cols];
            vec[free] = Coefficient::one();
            for (col, slot) in pivot_set.iter().enumerate() {
                if let Some(r) = slot {
                    vec[col] = -work.get(*r, free).clone();
                }
            }
            out.push(vec);
        }
        assert_eq!(rank + out.len(), self.cols, "rank + nullity must equal cols");
        debug_assert!(out
            .iter()
            .all(|v| self.mul_vec(v).iter().all(Coefficient::is_zero)));
        out
    }

    /// Exact determinant of a square matrix, by fraction-free Bareiss
    /// elimination over the Gaussian integers after clearing denominators
    /// row by row.
    pub fn det(&self) -> Coefficient {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Coefficient::one();
        }
        // Clear denominators per row; track the accumulated scale.
        let mut work: Vec<Vec<GaussInt>> = Vec::with_capacity(n);
        let mut scale = BigRational::one();
        for i in 0..n {
            let mut lcm = BigInt::one();
            for j in 0..n {
                let c = self.get(i, j);
                lcm = num_integer::lcm(lcm, c.re().denom().clone());
                lcm = num_integer::lcm(lcm, c.im().denom().clone());
            }
            scale *= BigRational::from_integer(lcm.clone());
            let row = (0..n)
                .map(|j| {
                    let c = self.get(i, j);
                    GaussInt {
                        re: (c.re() * BigRational::from_integer(lcm.clone())).to_integer(),
                        im: (c.im() * BigRational::from_integer(lcm.clone())).to_integer(),
                    }
                })
                .collect();
            work.push(row);
        }
        let mut sign_flip = false;
        let mut prev = GaussInt::one();
        for col in 0..n {
            let Some(prow) = (col..n).find(|&r| !work[r][col].is_zero()) else {
                return Coefficient::zero();
            };
            if prow != col {
                work.swap(col, prow);
                sign_flip = !sign_flip;
            }
            for r in col + 1..n {
                for j in col + 1..n {
                    let num = work[col][col]
                        .mul(&work[r][j])
                        .sub(&work[r][col].mul(&work[col][j]));
                    work[r][j] = num.div_exact(&prev);
                }
                work[r][col] = GaussInt::zero();
            }
            prev = work[col][col].clone();
        }
        let s = scale.to_integer();
        let mut det = Coefficient::new(
            BigRational::new(prev.re, s.clone()),
            BigRational::new(prev.im, s),
        );
        if sign_flip {
            det = -det;
        }
        det
    }

    /// Solve `A x = b` for several right-hand sides at once.
    ///
    /// Returns `None` when any system is inconsistent. Free variables are set
    /// to zero, which makes the solution canonical.
    pub fn solve_many(&self, rhs: &[Vec<Coefficient>]) -> Option<Vec<Vec<Coefficient>>> {
        let k = rhs.len();
        let mut aug = ExactMatrix::zeros(self.rows, self.cols + k);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
        }
        for (t, b) in rhs.iter().enumerate() {
            assert_eq!(b.len(), self.rows, "rhs length mismatch");
            for i in 0..self.rows {
                aug.set(i, self.cols + t, b[i].clone());
            }
        }
        // Eliminate on the coefficient block only.
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= aug.rows {
                break;
            }
            let Some(prow) = (row..aug.rows).find(|&r| !aug.get(r, col).is_zero()) else {
                continue;
            };
            aug.swap_rows(row, prow);
            let inv = aug.get(row, col).inv().unwrap();
            for j in col..aug.cols {
                let v = aug.get(row, j) * &inv;
                aug.set(row, j, v);
            }
            for r in 0..aug.rows {
                if r == row || aug.get(r, col).is_zero() {
                    continue;
                }
                let factor = aug.get(r, col).clone();
                for j in col..aug.cols {
                    let piv = aug.get(row, j);
                    if piv.is_zero() {
                        continue;
                    }
                    let v = aug.get(r, j) - &(&factor * piv);
                    aug.set(r, j, v);
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        // Consistency: no nonzero rhs entry in a zero coefficient row.
        for r in row..aug.rows {
            for t in 0..k {
                if !aug.get(r, self.cols + t).is_zero() {
                    return None;
                }
            }
        }
        let mut out = vec![vec![Coefficient::zero(); self.cols]; k];
        for &(r, c) in &pivots {
            for t in 0..k {
                out[t][c] = aug.get(r, self.cols + t).clone();
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Coefficient {
        Coefficient::from_int(n)
    }

    #[test]
    fn nullspace_of_identity_is_empty() {
        assert!(ExactMatrix::identity(4).nullspace().is_empty());
    }

    #[test]
    fn nullspace_of_zero_matrix_is_full() {
        let z = ExactMatrix::zeros(3, 3);
        let ns = z.nullspace();
        assert_eq!(ns.len(), 3);
        let basis = ExactMatrix::from_columns(&ns);
        assert_eq!(basis.rank(), 3);
    }

    #[test]
    fn nullspace_vectors_are_exact_kernel_elements() {
        let m = ExactMatrix::from_rows(&[
            vec![c(1), c(2), c(3), c(4)],
            vec![c(2), c(4), c(6), c(8)],
            vec![c(0), c(1), c(1), c(0)],
        ]);
        let ns = m.nullspace();
        assert_eq!(m.rank() + ns.len(), 4);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Coefficient::is_zero));
        }
    }

    #[test]
    fn nullspace_completeness() {
        // Augmenting the kernel basis with any standard basis vector outside
        // its span strictly increases rank.
        let m = ExactMatrix::from_rows(&[vec![c(1), c(1), c(0)], vec![c(0), c(0), c(1)]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        let base_rank = ExactMatrix::from_columns(&ns).rank();
        for j in 0..3 {
            let mut e = vec![Coefficient::zero(); 3];
            e[j] = Coefficient::one();
            let in_kernel = m.mul_vec(&e).iter().all(Coefficient::is_zero);
            let mut cols = ns.clone();
            cols.push(e);
            let new_rank = ExactMatrix::from_columns(&cols).rank();
            if in_kernel {
                assert_eq!(new_rank, base_rank);
            } else {
                assert_eq!(new_rank, base_rank + 1);
            }
        }
    }

    #[test]
    fn determinant_exact() {
        let m = ExactMatrix::from_rows(&[
            vec![c(2), c(0), c(1)],
            vec![c(1), c(3), c(2)],
            vec![c(0), c(1), c(4)],
        ]);
        // 2*(12-2) - 0 + 1*(1-0) = 21
        assert_eq!(m.det(), c(21));
        assert_eq!(ExactMatrix::zeros(2, 2).det(), c(0));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = ExactMatrix::from_rows(&[vec![c(1), c(2)], vec![c(3), c(4)]]);
        let sol = m.solve_many(&[vec![c(5), c(11)]]).unwrap();
        assert_eq!(m.mul_vec(&sol[0]), vec![c(5), c(11)]);
        let singular = ExactMatrix::from_rows(&[vec![c(1), c(1)], vec![c(2), c(2)]]);
        assert!(singular.solve_many(&[vec![c(0), c(1)]]).is_none());
    }

    #[test]
    fn complex_entries() {
        let i = Coefficient::i();
        let m = ExactMatrix::from_rows(&[vec![Coefficient::one(), i.clone()], vec![i.clone(), -Coefficient::one()]]);
        // Second row is i * first row, so rank 1.
        assert_eq!(m.rank(), 1);
        assert_eq!(m.det(), Coefficient::zero());
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
    }
}
