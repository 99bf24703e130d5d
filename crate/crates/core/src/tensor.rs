//! 3-tensor container, slices and slice spaces, basis change, mode
//! permutation, and the common-kernel reductions used by the 4×4×4 decision.
//!
//! Indexing is 1-based in documentation and in the interchange format;
//! internally entries are stored 0-based in lexicographic `(i, j, k)` order
//! with `k` fastest.

use crate::error::Error;
use crate::linalg::{GaussianRational, Matrix};
use num::Zero;
use std::fmt;

/// Dense `m×n×l` array of scalars; the object under test.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor3 {
    m: usize,
    n: usize,
    l: usize,
    data: Vec<GaussianRational>,
}

/// The span of all slices of one mode: the raw slices (possibly linearly
/// dependent) together with the exact dimension of their span.
///
/// Raw slices are kept rather than a reduced basis because the symmetrizer
/// systems are built from the four raw 3-slices, not from a basis; the span
/// dimension is cached separately.
#[derive(Clone, Debug)]
pub struct SliceSpace {
    pub mode: usize,
    pub slices: Vec<Matrix>,
    pub span_dim: usize,
}

/// Invertible transform record produced by [`Tensor3::reduce_to_334`]:
/// `reduced = truncate(change_basis(permute_modes(T, perm), p, q, I))`.
#[derive(Clone, Debug)]
pub struct ReductionRecord {
    /// Mode permutation applied first; `perm[p]` is the new position of the
    /// old mode `p+1` (0-based values).
    pub perm: [usize; 3],
    /// Basis change in mode 1 of the permuted tensor (zeroes its last slice).
    pub p: Matrix,
    /// Basis change in mode 2 of the permuted tensor.
    pub q: Matrix,
}

impl Tensor3 {
    pub fn new(m: usize, n: usize, l: usize, data: Vec<GaussianRational>) -> Result<Self, Error> {
        if data.len() != m * n * l {
            return Err(Error::Dimension(format!(
                "tensor data length {} does not match {m}x{n}x{l}",
                data.len()
            )));
        }
        Ok(Tensor3 { m, n, l, data })
    }

    pub fn zero(m: usize, n: usize, l: usize) -> Self {
        Tensor3 {
            m,
            n,
            l,
            data: vec![GaussianRational::zero(); m * n * l],
        }
    }

    pub fn from_fn(
        m: usize,
        n: usize,
        l: usize,
        mut f: impl FnMut(usize, usize, usize) -> GaussianRational,
    ) -> Self {
        let mut data = Vec::with_capacity(m * n * l);
        for i in 0..m {
            for j in 0..n {
                for k in 0..l {
                    data.push(f(i, j, k));
                }
            }
        }
        Tensor3 { m, n, l, data }
    }

    /// The rank-one tensor `u ⊗ v ⊗ w`.
    pub fn rank_one(u: &[GaussianRational], v: &[GaussianRational], w: &[GaussianRational]) -> Self {
        Tensor3::from_fn(u.len(), v.len(), w.len(), |i, j, k| {
            &(&u[i] * &v[j]) * &w[k]
        })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.l)
    }

    /// Extent of one mode (1, 2 or 3).
    pub fn extent(&self, mode: usize) -> usize {
        match mode {
            1 => self.m,
            2 => self.n,
            3 => self.l,
            _ => panic!("mode must be 1, 2 or 3"),
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &GaussianRational {
        &self.data[(i * self.n + j) * self.l + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: GaussianRational) {
        self.data[(i * self.n + j) * self.l + k] = v;
    }

    /// Entries in lexicographic `(i, j, k)` order.
    pub fn entries(&self) -> &[GaussianRational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims(), other.dims(), "shape mismatch in add");
        Tensor3::from_fn(self.m, self.n, self.l, |i, j, k| {
            self.get(i, j, k) + other.get(i, j, k)
        })
    }

    pub fn sub(&self, other: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims(), other.dims(), "shape mismatch in sub");
        Tensor3::from_fn(self.m, self.n, self.l, |i, j, k| {
            self.get(i, j, k) - other.get(i, j, k)
        })
    }

    /// The `(k, mode)`-slice, `k` 0-based. Mode-3 slices are `m×n` (rows `i`,
    /// columns `j`); mode-1 slices are `n×l`; mode-2 slices are `m×l`.
    pub fn slice(&self, mode: usize, k: usize) -> Result<Matrix, Error> {
        if !(1..=3).contains(&mode) {
            return Err(Error::Argument(format!("mode must be 1, 2 or 3, got {mode}")));
        }
        if k >= self.extent(mode) {
            return Err(Error::Argument(format!(
                "slice index {k} out of range for mode {mode} of extent {}",
                self.extent(mode)
            )));
        }
        Ok(match mode {
            1 => Matrix::from_fn(self.n, self.l, |j, kk| self.get(k, j, kk).clone()),
            2 => Matrix::from_fn(self.m, self.l, |i, kk| self.get(i, k, kk).clone()),
            _ => Matrix::from_fn(self.m, self.n, |i, j| self.get(i, j, k).clone()),
        })
    }

    /// All slices of a mode in index order.
    pub fn slices(&self, mode: usize) -> Vec<Matrix> {
        (0..self.extent(mode))
            .map(|k| self.slice(mode, k).expect("index in range"))
            .collect()
    }

    /// The mode's slice span with its exact dimension.
    pub fn slice_space(&self, mode: usize) -> SliceSpace {
        let slices = self.slices(mode);
        let span_dim = span_dimension(&slices);
        SliceSpace {
            mode,
            slices,
            span_dim,
        }
    }

    /// Multilinear basis change: `t'_{i'j'k'} = Σ p_{i'i} q_{j'j} r_{k'k} t_{ijk}`.
    /// The factors need not be invertible.
    pub fn change_basis(&self, p: &Matrix, q: &Matrix, r: &Matrix) -> Result<Tensor3, Error> {
        for (mat, extent, name) in [(p, self.m, "P"), (q, self.n, "Q"), (r, self.l, "R")] {
            if mat.rows() != extent || mat.cols() != extent {
                return Err(Error::Dimension(format!(
                    "{name} must be {extent}x{extent}, got {}x{}",
                    mat.rows(),
                    mat.cols()
                )));
            }
        }
        let t = self.apply_mode(p, 1);
        let t = t.apply_mode(q, 2);
        Ok(t.apply_mode(r, 3))
    }

    /// Contract one mode with a square matrix.
    fn apply_mode(&self, mat: &Matrix, mode: usize) -> Tensor3 {
        Tensor3::from_fn(self.m, self.n, self.l, |i, j, k| {
            let mut acc = GaussianRational::zero();
            match mode {
                1 => {
                    for s in 0..self.m {
                        acc += &(&mat[(i, s)] * self.get(s, j, k));
                    }
                }
                2 => {
                    for s in 0..self.n {
                        acc += &(&mat[(j, s)] * self.get(i, s, k));
                    }
                }
                _ => {
                    for s in 0..self.l {
                        acc += &(&mat[(k, s)] * self.get(i, j, s));
                    }
                }
            }
            acc
        })
    }

    /// Permute the tensor factors. `perm` maps old mode positions to new ones
    /// (0-based): the old mode `p+1` becomes mode `perm[p]+1` of the result.
    pub fn permute_modes(&self, perm: [usize; 3]) -> Tensor3 {
        let mut seen = [false; 3];
        for &p in &perm {
            assert!(p < 3 && !seen[p], "not a permutation of 0..3: {perm:?}");
            seen[p] = true;
        }
        let old_dims = [self.m, self.n, self.l];
        let mut new_dims = [0usize; 3];
        for p in 0..3 {
            new_dims[perm[p]] = old_dims[p];
        }
        // inverse: new position -> old position
        let mut inv = [0usize; 3];
        for p in 0..3 {
            inv[perm[p]] = p;
        }
        Tensor3::from_fn(new_dims[0], new_dims[1], new_dims[2], |a, b, c| {
            let new_idx = [a, b, c];
            let old = [new_idx[perm[0]], new_idx[perm[1]], new_idx[perm[2]]];
            self.get(old[0], old[1], old[2]).clone()
        })
    }

    /// View a 4×4×4 tensor as 3×3×4 when possible: if at least two modes have
    /// slice span of dimension ≤ 3, one slice of each such mode is
    /// annihilated by an invertible basis change and the zero hyperplanes are
    /// deleted. The recorded transform preserves border rank.
    pub fn reduce_to_334(&self) -> Option<(Tensor3, ReductionRecord)> {
        if self.dims() != (4, 4, 4) {
            return None;
        }
        let dims: Vec<usize> = (1..=3).map(|p| self.slice_space(p).span_dim).collect();
        let low: Vec<usize> = (0..3).filter(|&p| dims[p] <= 3).collect();
        if low.len() < 2 {
            return None;
        }
        // Send the two low modes to positions 1 and 2, the remaining mode to 3.
        let (a, b) = (low[0], low[1]);
        let c = (0..3).find(|p| *p != a && *p != b).unwrap();
        let mut perm = [0usize; 3];
        perm[a] = 0;
        perm[b] = 1;
        perm[c] = 2;
        let permuted = self.permute_modes(perm);

        let p = annihilating_basis_change(&permuted.slices(1))?;
        let q = annihilating_basis_change(&permuted.slices(2))?;
        let transformed = permuted
            .change_basis(&p, &q, &Matrix::identity(4))
            .expect("shapes match");
        debug_assert!(transformed.slice(1, 3).unwrap().is_zero());
        debug_assert!(transformed.slice(2, 3).unwrap().is_zero());
        let reduced = Tensor3::from_fn(3, 3, 4, |i, j, k| transformed.get(i, j, k).clone());
        Some((reduced, ReductionRecord { perm, p, q }))
    }
}

impl ReductionRecord {
    /// Map a reduced 3×3×4 tensor back to the original 4×4×4 coordinates.
    pub fn lift(&self, reduced: &Tensor3) -> Result<Tensor3, Error> {
        if reduced.dims() != (3, 3, 4) {
            return Err(Error::Dimension("lift expects a 3x3x4 tensor".into()));
        }
        let padded = Tensor3::from_fn(4, 4, 4, |i, j, k| {
            if i < 3 && j < 3 {
                reduced.get(i, j, k).clone()
            } else {
                GaussianRational::zero()
            }
        });
        let p_inv = self.p.inverse().ok_or_else(|| {
            Error::Precondition("reduction record P is not invertible".into())
        })?;
        let q_inv = self.q.inverse().ok_or_else(|| {
            Error::Precondition("reduction record Q is not invertible".into())
        })?;
        let unchanged = padded.change_basis(&p_inv, &q_inv, &Matrix::identity(4))?;
        let mut inv_perm = [0usize; 3];
        for p in 0..3 {
            inv_perm[self.perm[p]] = p;
        }
        Ok(unchanged.permute_modes(inv_perm))
    }
}

impl fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Tensor3 {}x{}x{} (mode-3 slices)", self.m, self.n, self.l)?;
        for k in 0..self.l {
            writeln!(f, "k={k}: {:?}", self.slice(3, k).expect("in range"))?;
        }
        Ok(())
    }
}

/// Dimension of the span of a family of equally-shaped matrices.
pub fn span_dimension(slices: &[Matrix]) -> usize {
    if slices.is_empty() {
        return 0;
    }
    let cols = slices[0].rows() * slices[0].cols();
    let mut stacked = Matrix::zero(slices.len(), cols);
    for (r, s) in slices.iter().enumerate() {
        for (c, v) in s.vectorize().into_iter().enumerate() {
            stacked[(r, c)] = v;
        }
    }
    stacked.rank()
}

/// Exact basis of `{u : uᵀA = 0 for every slice A}` of a slice span.
pub fn common_left_kernel(space: &SliceSpace) -> Vec<Vec<GaussianRational>> {
    common_kernel(&space.slices, true)
}

/// Exact basis of `{u : Au = 0 for every slice A}` of a slice span.
pub fn common_right_kernel(space: &SliceSpace) -> Vec<Vec<GaussianRational>> {
    common_kernel(&space.slices, false)
}

fn common_kernel(slices: &[Matrix], left: bool) -> Vec<Vec<GaussianRational>> {
    if slices.is_empty() {
        return Vec::new();
    }
    // uᵀA = 0 for all A  ⟺  (stack of Aᵀ) u = 0
    let (rows_each, width) = if left {
        (slices[0].cols(), slices[0].rows())
    } else {
        (slices[0].rows(), slices[0].cols())
    };
    let mut stacked = Matrix::zero(rows_each * slices.len(), width);
    for (s, a) in slices.iter().enumerate() {
        let m = if left { a.transpose() } else { a.clone() };
        for i in 0..rows_each {
            for j in 0..width {
                stacked[(s * rows_each + i, j)] = m[(i, j)].clone();
            }
        }
    }
    stacked.nullspace()
}

/// Build an invertible matrix whose last row is a nonzero vector of the
/// nullspace of the stacked slices, so the last slice of the transformed
/// mode vanishes. Returns `None` when the slices are linearly independent.
fn annihilating_basis_change(slices: &[Matrix]) -> Option<Matrix> {
    let d = slices.len();
    let cols = slices[0].rows() * slices[0].cols();
    // c with Σ c_i vec(S_i) = 0: nullspace of the cols×d matrix with columns vec(S_i).
    let mut m = Matrix::zero(cols, d);
    for (i, s) in slices.iter().enumerate() {
        for (r, v) in s.vectorize().into_iter().enumerate() {
            m[(r, i)] = v;
        }
    }
    let ns = m.nullspace();
    let c = ns.first()?;
    // Complete c to a basis with standard basis vectors, c last.
    let mut rows: Vec<Vec<GaussianRational>> = Vec::with_capacity(d);
    for e in 0..d {
        if rows.len() == d - 1 {
            break;
        }
        let mut candidate = vec![GaussianRational::zero(); d];
        candidate[e] = GaussianRational::from_int(1);
        let mut trial = rows.clone();
        trial.push(candidate.clone());
        trial.push(c.clone());
        let mat = Matrix::from_fn(trial.len(), d, |i, j| trial[i][j].clone());
        if mat.rank() == trial.len() {
            rows.push(candidate);
        }
    }
    rows.push(c.clone());
    debug_assert_eq!(rows.len(), d);
    let p = Matrix::from_fn(d, d, |i, j| rows[i][j].clone());
    debug_assert!(!p.det().unwrap().is_zero());
    Some(p)
}
