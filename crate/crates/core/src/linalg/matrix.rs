//! Dense matrices over Q(i): determinant, rank, adjugate, compounds,
//! nullspaces and cofactor nullvectors.
//!
//! Everything here is exact. Determinants use fraction-free (Bareiss)
//! elimination so intermediate entries stay small on integer input; rank and
//! nullspace use reduced row echelon form over the field.

use super::scalar::GaussianRational;
use crate::error::Error;
use num::{One, Zero};
use std::fmt;

/// An index set `α = {α_1 < … < α_k}` inside `{1, …, ambient}`, 1-based as in
/// standard minor notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    ambient: usize,
    members: Vec<usize>,
}

impl IndexSet {
    pub fn new(ambient: usize, members: Vec<usize>) -> Result<Self, Error> {
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument(format!(
                "index set members must be strictly increasing, got {members:?}"
            )));
        }
        if members.first().is_some_and(|&a| a < 1)
            || members.last().is_some_and(|&a| a > ambient)
        {
            return Err(Error::Argument(format!(
                "index set members {members:?} out of range 1..={ambient}"
            )));
        }
        Ok(IndexSet { ambient, members })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Sum of the members, `‖α‖`; drives the sign in signed compounds.
    pub fn weight(&self) -> usize {
        self.members.iter().sum()
    }

    /// The complement `{1,…,ambient} \ α`, again strictly increasing.
    pub fn complement(&self) -> IndexSet {
        let members = (1..=self.ambient)
            .filter(|i| !self.members.contains(i))
            .collect();
        IndexSet {
            ambient: self.ambient,
            members,
        }
    }

    /// All k-subsets of `{1,…,m}` in lexicographic order.
    pub fn enumerate(m: usize, k: usize) -> Vec<IndexSet> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k);
        fn rec(m: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
            if current.len() == k {
                out.push(IndexSet {
                    ambient: m,
                    members: current.clone(),
                });
                return;
            }
            for i in start..=m {
                current.push(i);
                rec(m, k, i + 1, current, out);
                current.pop();
            }
        }
        if k <= m {
            rec(m, k, 1, &mut current, &mut out);
        }
        out
    }
}

/// Dense rectangular matrix over Q(i), row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<GaussianRational>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "matrix data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = GaussianRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussianRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Integer matrix literal, handy in tests and generators.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::from_fn(r, c, |i, j| GaussianRational::from_int(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn scale(&self, c: &GaussianRational) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = GaussianRational::zero();
            for k in 0..self.cols {
                acc += &(&self[(i, k)] * &other[(k, j)]);
            }
            acc
        })
    }

    pub fn trace(&self) -> GaussianRational {
        assert!(self.is_square(), "trace of non-square matrix");
        let mut acc = GaussianRational::zero();
        for i in 0..self.rows {
            acc += &self[(i, i)];
        }
        acc
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = GaussianRational::zero();
                for j in 0..self.cols {
                    acc += &(&self[(i, j)] * &v[j]);
                }
                acc
            })
            .collect()
    }

    /// Row-major flattening; the `vec` operator used by the symmetrizer
    /// systems and the span-dimension computations.
    pub fn vectorize(&self) -> Vec<GaussianRational> {
        self.data.clone()
    }

    /// Submatrix `A[α, β]` in the 1-based minor notation.
    pub fn submatrix(&self, alpha: &IndexSet, beta: &IndexSet) -> Matrix {
        assert!(alpha.ambient() == self.rows && beta.ambient() == self.cols,
            "index set ambient does not match matrix shape");
        Matrix::from_fn(alpha.len(), beta.len(), |i, j| {
            self[(alpha.members()[i] - 1, beta.members()[j] - 1)].clone()
        })
    }

    fn delete_row_col(&self, row: usize, col: usize) -> Matrix {
        Matrix::from_fn(self.rows - 1, self.cols - 1, |i, j| {
            let ii = if i < row { i } else { i + 1 };
            let jj = if j < col { j } else { j + 1 };
            self[(ii, jj)].clone()
        })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<GaussianRational, Error> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(GaussianRational::one());
        }
        let mut a = self.clone();
        let mut sign_flip = false;
        let mut prev = GaussianRational::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign_flip = !sign_flip;
                    }
                    None => return Ok(GaussianRational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[(i, j)] * &a[(k, k)]) - &(&a[(i, k)] * &a[(k, j)]);
                    a[(i, j)] = num / prev.clone();
                }
                a[(i, k)] = GaussianRational::zero();
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        Ok(if sign_flip { -d } else { d })
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(r1 * self.cols + j, r2 * self.cols + j);
        }
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inv();
            for j in c..cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..cols {
                        let v = &self[(i, j)] - &(&f * &self[(r, j)]);
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Exact rank over Q(i); 0 for the zero (or empty) matrix.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        a.rref().len()
    }

    /// Adjugate: `A · adj(A) = adj(A) · A = det(A) · I`, with `adj = [[1]]`
    /// for 1x1 matrices so the identity stays total.
    pub fn adjugate(&self) -> Result<Matrix, Error> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "adjugate of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Matrix::zero(0, 0));
        }
        if n == 1 {
            return Ok(Matrix::identity(1));
        }
        let mut adj = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                // adj[i][j] is the (j,i) cofactor.
                let minor = self.delete_row_col(j, i).det()?;
                adj[(i, j)] = if (i + j) % 2 == 0 { minor } else { -minor };
            }
        }
        Ok(adj)
    }

    /// Inverse when it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        let det = self.det().ok()?;
        if det.is_zero() {
            return None;
        }
        let adj = self.adjugate().expect("square by construction");
        Some(adj.scale(&det.inv()))
    }

    /// The p-th compound: all p×p minors `det A[α, β]`, rows and columns
    /// ordered lexicographically by index set.
    pub fn compound(&self, p: usize) -> Result<Matrix, Error> {
        if p < 1 || p > self.rows.min(self.cols) {
            return Err(Error::Argument(format!(
                "compound order {p} out of range for {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let row_sets = IndexSet::enumerate(self.rows, p);
        let col_sets = IndexSet::enumerate(self.cols, p);
        let mut out = Matrix::zero(row_sets.len(), col_sets.len());
        for (i, alpha) in row_sets.iter().enumerate() {
            for (j, beta) in col_sets.iter().enumerate() {
                out[(i, j)] = self.submatrix(alpha, beta).det()?;
            }
        }
        Ok(out)
    }

    /// The signed complementary compound `C_{-p}(A)` with `(α,β)` entry
    /// `(-1)^{‖α‖+‖β‖} det A[α^c, β^c]`; satisfies the Laplace identity
    /// `C_p(A) · C_{-p}(A)^T = det(A) · I`.
    pub fn signed_compound(&self, p: usize) -> Result<Matrix, Error> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "signed compound of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let m = self.rows;
        if p < 1 || p > m.saturating_sub(1) {
            return Err(Error::Argument(format!(
                "signed compound order {p} out of range for size {m}"
            )));
        }
        let sets = IndexSet::enumerate(m, p);
        let mut out = Matrix::zero(sets.len(), sets.len());
        for (i, alpha) in sets.iter().enumerate() {
            for (j, beta) in sets.iter().enumerate() {
                let minor = self
                    .submatrix(&alpha.complement(), &beta.complement())
                    .det()?;
                out[(i, j)] = if (alpha.weight() + beta.weight()) % 2 == 0 {
                    minor
                } else {
                    -minor
                };
            }
        }
        Ok(out)
    }

    /// Exact basis of `{x : Ax = 0}`; empty iff the matrix has full column
    /// rank. Basis size is always `cols - rank`.
    pub fn nullspace(&self) -> Vec<Vec<GaussianRational>> {
        let mut a = self.clone();
        let pivots = a.rref();
        let mut basis = Vec::new();
        let mut pivot_iter;
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![GaussianRational::zero(); self.cols];
            v[free] = GaussianRational::one();
            pivot_iter = pivots.iter().enumerate();
            for (r, &pc) in &mut pivot_iter {
                v[pc] = -&a[(r, free)];
            }
            basis.push(v);
        }
        basis
    }

    /// The cofactor nullvector `x(α,β)` with `x_{β_i} = (-1)^{i-1} det A[α, β\{β_i}]`
    /// and zeros off `β`; always satisfies `A·x = 0`, and some choice of
    /// `(α,β)` gives a nonzero vector iff `rank A = k` where `k = |α|`.
    pub fn cofactor_nullvector(
        &self,
        alpha: &IndexSet,
        beta: &IndexSet,
    ) -> Result<Vec<GaussianRational>, Error> {
        let k = alpha.len();
        if beta.len() != k + 1 {
            return Err(Error::Argument(format!(
                "beta must have size k+1 = {}, got {}",
                k + 1,
                beta.len()
            )));
        }
        if k >= self.cols {
            return Err(Error::Argument(format!(
                "need k < cols, got k = {k}, cols = {}",
                self.cols
            )));
        }
        if self.rank() > k {
            return Err(Error::Precondition(format!(
                "cofactor nullvector requires rank <= {k}, matrix has rank {}",
                self.rank()
            )));
        }
        let mut x = vec![GaussianRational::zero(); self.cols];
        for (i, &bi) in beta.members().iter().enumerate() {
            let reduced: Vec<usize> = beta
                .members()
                .iter()
                .copied()
                .filter(|&b| b != bi)
                .collect();
            let beta_i = IndexSet::new(beta.ambient(), reduced)?;
            let minor = self.submatrix(alpha, &beta_i).det()?;
            x[bi - 1] = if i % 2 == 0 { minor } else { -minor };
        }
        Ok(x)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = GaussianRational;
    fn index(&self, (i, j): (usize, usize)) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussianRational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_identity_and_2x2() {
        assert_eq!(Matrix::identity(3).det().unwrap(), GaussianRational::one());
        let a = Matrix::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.det().unwrap(), GaussianRational::from_int(-2));
    }

    #[test]
    fn det_rejects_non_square() {
        let a = Matrix::zero(2, 3);
        assert!(matches!(a.det(), Err(Error::Dimension(_))));
        assert!(matches!(a.adjugate(), Err(Error::Dimension(_))));
    }

    #[test]
    fn rank_basics() {
        assert_eq!(Matrix::zero(3, 4).rank(), 0);
        // rank-one product u v^T
        let u = [2i64, -1, 3];
        let v = [1i64, 4];
        let m = Matrix::from_fn(3, 2, |i, j| GaussianRational::from_int(u[i] * v[j]));
        assert_eq!(m.rank(), 1);
        assert_eq!(Matrix::identity(4).rank(), 4);
    }

    #[test]
    fn adjugate_identity_and_low_rank() {
        assert_eq!(Matrix::identity(3).adjugate().unwrap(), Matrix::identity(3));
        // rank <= m-2 forces adj = 0
        let m = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[3, 6, 9]]); // rank 1
        assert!(m.adjugate().unwrap().is_zero());
        // defining identity on a fixed 4x4
        let a = Matrix::from_i64(&[&[1, 2, 0, -1], &[3, 0, 1, 2], &[0, 1, 1, 1], &[2, -2, 0, 3]]);
        let d = a.det().unwrap();
        let adj = a.adjugate().unwrap();
        assert_eq!(a.mul(&adj), Matrix::identity(4).scale(&d));
        assert_eq!(adj.mul(&a), Matrix::identity(4).scale(&d));
    }

    #[test]
    fn adjugate_of_1x1_is_identity() {
        let a = Matrix::from_i64(&[&[7]]);
        let adj = a.adjugate().unwrap();
        assert_eq!(adj, Matrix::identity(1));
        assert_eq!(a.mul(&adj), Matrix::identity(1).scale(&a.det().unwrap()));
    }

    #[test]
    fn compound_identity_and_2x2() {
        assert_eq!(Matrix::identity(4).compound(2).unwrap(), Matrix::identity(6));
        let a = Matrix::from_i64(&[&[1, 2], &[3, 4]]);
        let c = a.compound(2).unwrap();
        assert_eq!(c.rows(), 1);
        assert_eq!(c[(0, 0)], GaussianRational::from_int(-2));
        assert!(matches!(a.compound(3), Err(Error::Argument(_))));
    }

    #[test]
    fn signed_compound_transpose_is_adjugate() {
        let a = Matrix::from_i64(&[&[2, -1, 0], &[1, 3, 5], &[-2, 0, 4]]);
        assert_eq!(a.signed_compound(1).unwrap().transpose(), a.adjugate().unwrap());
    }

    #[test]
    fn laplace_identities() {
        let a = Matrix::from_i64(&[&[1, 2, 0, -1], &[3, 0, 1, 2], &[0, 1, 1, 1], &[2, -2, 0, 3]]);
        let d = a.det().unwrap();
        for p in 1..=3 {
            let cp = a.compound(p).unwrap();
            let cm = a.signed_compound(p).unwrap();
            let id = Matrix::identity(cp.rows()).scale(&d);
            assert_eq!(cp.mul(&cm.transpose()), id);
            assert_eq!(cm.transpose().mul(&cp), id);
        }
    }

    #[test]
    fn nullspace_basics() {
        assert!(Matrix::identity(3).nullspace().is_empty());
        assert_eq!(Matrix::zero(2, 3).nullspace().len(), 3);
        let m = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn cofactor_nullvector_forced_case() {
        let a = Matrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]);
        let alpha = IndexSet::new(2, vec![1, 2]).unwrap();
        let beta = IndexSet::new(3, vec![1, 2, 3]).unwrap();
        let x = a.cofactor_nullvector(&alpha, &beta).unwrap();
        assert_eq!(
            x,
            vec![
                GaussianRational::zero(),
                GaussianRational::zero(),
                GaussianRational::from_int(1)
            ]
        );
        // rank > k is a precondition violation
        let alpha1 = IndexSet::new(2, vec![1]).unwrap();
        let beta1 = IndexSet::new(3, vec![1, 2]).unwrap();
        assert!(matches!(
            a.cofactor_nullvector(&alpha1, &beta1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn index_set_validation_and_enumeration() {
        assert!(IndexSet::new(4, vec![1, 3, 3]).is_err());
        assert!(IndexSet::new(4, vec![0, 2]).is_err());
        assert!(IndexSet::new(4, vec![2, 5]).is_err());
        let sets = IndexSet::enumerate(4, 2);
        let expected: Vec<Vec<usize>> = vec![
            vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4],
        ];
        assert_eq!(sets.iter().map(|s| s.members().to_vec()).collect::<Vec<_>>(), expected);
        assert_eq!(sets[1].complement().members(), &[2, 4]);
        assert_eq!(sets[1].weight(), 4);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Matrix::from_i64(&[&[2, 1, 0], &[0, 1, -1], &[1, 0, 3]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        let singular = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
    }
}
