//! Overflow-checked Gaussian-integer engine for the hot certification loops.
//!
//! The commutation checks and the invertible-element grid search evaluate
//! many small integer matrices. Doing that in `GaussianRational` costs an
//! allocation and a gcd per scalar operation; this module runs the same
//! algorithms over `i128` pairs with checked arithmetic. Every entry point
//! returns `None` on overflow (or on input that does not scale to integers),
//! in which case the caller falls back to the exact rational path, so results
//! are always exact.

use crate::linalg::{IndexSet, Matrix};
use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed};

/// Gaussian integer with checked arithmetic.
pub(crate) type Gi = (i128, i128);

const GI_ZERO: Gi = (0, 0);

fn gi_is_zero(a: Gi) -> bool {
    a.0 == 0 && a.1 == 0
}

fn gi_add(a: Gi, b: Gi) -> Option<Gi> {
    Some((a.0.checked_add(b.0)?, a.1.checked_add(b.1)?))
}

fn gi_sub(a: Gi, b: Gi) -> Option<Gi> {
    Some((a.0.checked_sub(b.0)?, a.1.checked_sub(b.1)?))
}

fn gi_mul(a: Gi, b: Gi) -> Option<Gi> {
    // fast path: real times real, the common case for integer fixtures
    if a.1 == 0 && b.1 == 0 {
        return Some((a.0.checked_mul(b.0)?, 0));
    }
    let re = a.0.checked_mul(b.0)?.checked_sub(a.1.checked_mul(b.1)?)?;
    let im = a.0.checked_mul(b.1)?.checked_add(a.1.checked_mul(b.0)?)?;
    Some((re, im))
}

fn gi_scale(a: Gi, s: i128) -> Option<Gi> {
    Some((a.0.checked_mul(s)?, a.1.checked_mul(s)?))
}

#[derive(Clone, PartialEq, Eq)]
pub(crate) struct GiMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Gi>,
}

impl GiMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        GiMatrix {
            rows,
            cols,
            data: vec![GI_ZERO; rows * cols],
        }
    }

    fn at(&self, i: usize, j: usize) -> Gi {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: Gi) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &GiMatrix) -> Option<GiMatrix> {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = GiMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = GI_ZERO;
                for k in 0..self.cols {
                    acc = gi_add(acc, gi_mul(self.at(i, k), other.at(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Some(out)
    }

    /// `Σ w_i · S_i` with nonnegative integer weights.
    pub fn combine(slices: &[GiMatrix], weights: &[usize]) -> Option<GiMatrix> {
        let mut out = GiMatrix::zero(slices[0].rows, slices[0].cols);
        for (s, &w) in slices.iter().zip(weights) {
            if w == 0 {
                continue;
            }
            for (o, &v) in out.data.iter_mut().zip(&s.data) {
                *o = gi_add(*o, gi_scale(v, w as i128)?)?;
            }
        }
        Some(out)
    }

    fn submatrix_det(&self, rows: &[usize], cols: &[usize]) -> Option<Gi> {
        // cofactor expansion on the first listed row; sizes here are ≤ 4
        match rows.len() {
            0 => Some((1, 0)),
            1 => Some(self.at(rows[0], cols[0])),
            2 => gi_sub(
                gi_mul(self.at(rows[0], cols[0]), self.at(rows[1], cols[1]))?,
                gi_mul(self.at(rows[0], cols[1]), self.at(rows[1], cols[0]))?,
            ),
            _ => {
                let mut acc = GI_ZERO;
                let sub_rows = &rows[1..];
                for (idx, &c) in cols.iter().enumerate() {
                    let a = self.at(rows[0], c);
                    if gi_is_zero(a) {
                        continue;
                    }
                    let rest: Vec<usize> =
                        cols.iter().copied().filter(|&cc| cc != c).collect();
                    let minor = self.submatrix_det(sub_rows, &rest)?;
                    let term = gi_mul(a, minor)?;
                    acc = if idx % 2 == 0 {
                        gi_add(acc, term)?
                    } else {
                        gi_sub(acc, term)?
                    };
                }
                Some(acc)
            }
        }
    }

    pub fn det(&self) -> Option<Gi> {
        debug_assert_eq!(self.rows, self.cols);
        let idx: Vec<usize> = (0..self.rows).collect();
        self.submatrix_det(&idx, &idx)
    }

    pub fn compound(&self, p: usize) -> Option<GiMatrix> {
        let row_sets = IndexSet::enumerate(self.rows, p);
        let col_sets = IndexSet::enumerate(self.cols, p);
        let mut out = GiMatrix::zero(row_sets.len(), col_sets.len());
        for (i, alpha) in row_sets.iter().enumerate() {
            let ar: Vec<usize> = alpha.members().iter().map(|&x| x - 1).collect();
            for (j, beta) in col_sets.iter().enumerate() {
                let bc: Vec<usize> = beta.members().iter().map(|&x| x - 1).collect();
                out.set(i, j, self.submatrix_det(&ar, &bc)?);
            }
        }
        Some(out)
    }

    /// `C_{-p}(A)ᵀ` built directly in transposed layout.
    pub fn signed_compound_t(&self, p: usize) -> Option<GiMatrix> {
        let sets = IndexSet::enumerate(self.rows, p);
        let mut out = GiMatrix::zero(sets.len(), sets.len());
        for (i, alpha) in sets.iter().enumerate() {
            let ac: Vec<usize> = alpha.complement().members().iter().map(|&x| x - 1).collect();
            for (j, beta) in sets.iter().enumerate() {
                let bc: Vec<usize> = beta.complement().members().iter().map(|&x| x - 1).collect();
                let minor = self.submatrix_det(&ac, &bc)?;
                let signed = if (alpha.weight() + beta.weight()) % 2 == 0 {
                    minor
                } else {
                    gi_sub(GI_ZERO, minor)?
                };
                // transposed: (α,β) entry of C_{-p} lands at (β,α)
                out.set(j, i, signed);
            }
        }
        Some(out)
    }
}

/// Scale an exact matrix to Gaussian integers: returns the scaled matrix and
/// the positive integer scale, or `None` when denominators are too large to
/// fit comfortably in `i128`.
pub(crate) fn scale_to_integers(m: &Matrix) -> Option<(GiMatrix, BigInt)> {
    let mut lcm = BigInt::one();
    for e in m.entries() {
        lcm = lcm.lcm(e.re().denom());
        lcm = lcm.lcm(e.im().denom());
    }
    let mut out = GiMatrix::zero(m.rows(), m.cols());
    let scale = BigRational::from_integer(lcm.clone());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = &m[(i, j)];
            let re = to_i128_bounded(&(e.re() * &scale))?;
            let im = to_i128_bounded(&(e.im() * &scale))?;
            out.set(i, j, (re, im));
        }
    }
    Some((out, lcm))
}

/// Convert an integral rational to i128, requiring |value| < 2⁶² so products
/// keep headroom.
fn to_i128_bounded(x: &BigRational) -> Option<i128> {
    if !x.denom().is_one() {
        return None;
    }
    let n = x.numer();
    let limit = BigInt::from(1i64 << 62);
    if n.abs() >= limit {
        return None;
    }
    let (sign, digits) = n.to_u64_digits();
    let mag = match digits.len() {
        0 => 0u128,
        1 => digits[0] as u128,
        _ => return None,
    };
    Some(match sign {
        Sign::Minus => -(mag as i128),
        _ => mag as i128,
    })
}

/// Basis of a span of `GiMatrix` values, kept in cross-multiplied reduced
/// echelon form (no divisions; rows normalized by their gcd to bound growth).
/// Each kept item remembers the grid weights that produced it.
pub(crate) struct GiBasis {
    rref: Vec<(usize, Vec<Gi>)>,
    pub items: Vec<(Vec<usize>, GiMatrix)>,
}

fn normalize_gcd(v: &mut [Gi]) {
    let mut g: u128 = 0;
    for &(re, im) in v.iter() {
        g = gcd_u128(g, re.unsigned_abs());
        g = gcd_u128(g, im.unsigned_abs());
        if g == 1 {
            return;
        }
    }
    if g > 1 {
        for e in v.iter_mut() {
            e.0 /= g as i128;
            e.1 /= g as i128;
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl GiBasis {
    pub fn new() -> Self {
        GiBasis {
            rref: Vec::new(),
            items: Vec::new(),
        }
    }

    /// Insert `value` if independent of the current span. Returns `None` on
    /// overflow, otherwise whether the value was inserted.
    pub fn try_insert(&mut self, weights: Vec<usize>, value: GiMatrix) -> Option<bool> {
        let mut v = value.data.clone();
        for (pivot, row) in &self.rref {
            let vp = v[*pivot];
            if !gi_is_zero(vp) {
                let rp = row[*pivot];
                for (a, b) in v.iter_mut().zip(row.iter()) {
                    *a = gi_sub(gi_mul(*a, rp)?, gi_mul(*b, vp)?)?;
                }
                normalize_gcd(&mut v);
            }
        }
        let Some(pivot) = v.iter().position(|&x| !gi_is_zero(x)) else {
            return Some(false);
        };
        // keep the invariant that every stored row vanishes at the others'
        // pivots, so candidate reduction is a single pass
        let vp = v[pivot];
        for (_, row) in self.rref.iter_mut() {
            let rp = row[pivot];
            if !gi_is_zero(rp) {
                for (a, b) in row.iter_mut().zip(v.iter()) {
                    *a = gi_sub(gi_mul(*a, vp)?, gi_mul(*b, rp)?)?;
                }
                normalize_gcd(row);
            }
        }
        self.rref.push((pivot, v));
        self.items.push((weights, value));
        Some(true)
    }
}

/// Mixed-radix counter over `{0, …, max}^d` starting after the zero point.
pub(crate) struct WeightGrid {
    current: Vec<usize>,
    max: usize,
    done: bool,
}

impl WeightGrid {
    pub fn new(d: usize, max: usize) -> Self {
        WeightGrid {
            current: vec![0; d],
            max,
            done: d == 0,
        }
    }
}

impl Iterator for WeightGrid {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            if self.done {
                return None;
            }
            let mut i = self.current.len();
            let mut advanced = false;
            loop {
                if i == 0 {
                    self.done = true;
                    break;
                }
                i -= 1;
                if self.current[i] < self.max {
                    self.current[i] += 1;
                    for c in &mut self.current[i + 1..] {
                        *c = 0;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                return None;
            }
            return Some(self.current.clone());
        }
    }
}

/// Result of the integer commutation check: holds, or a witness triple of
/// grid weights with respect to the scaled slices.
pub(crate) enum GiCommutation {
    Holds,
    Fails {
        x: Vec<usize>,
        y: Vec<usize>,
        z: Vec<usize>,
    },
}

/// Integer-engine version of the span commutation check; `None` on overflow.
pub(crate) fn commutation_check(slices: &[GiMatrix], level: usize) -> Option<GiCommutation> {
    let d = slices.len();
    let m = slices[0].rows;

    let outer: Vec<(Vec<usize>, GiMatrix)> = if level == 1 {
        slices
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut e = vec![0usize; d];
                e[i] = 1;
                (e, s.clone())
            })
            .collect()
    } else {
        let mut basis = GiBasis::new();
        for x in WeightGrid::new(d, level) {
            let value = GiMatrix::combine(slices, &x)?.compound(level)?;
            basis.try_insert(x, value)?;
        }
        basis.items
    };

    let mut mid = GiBasis::new();
    for y in WeightGrid::new(d, m - level) {
        let value = GiMatrix::combine(slices, &y)?.signed_compound_t(level)?;
        mid.try_insert(y, value)?;
    }

    for i in 0..outer.len() {
        for j in i + 1..outer.len() {
            let (xi, mi) = &outer[i];
            let (xj, mj) = &outer[j];
            for (yk, nkt) in &mid.items {
                let left = mi.mul(nkt)?.mul(mj)?;
                let right = mj.mul(nkt)?.mul(mi)?;
                if left != right {
                    return Some(GiCommutation::Fails {
                        x: xi.clone(),
                        y: yk.clone(),
                        z: xj.clone(),
                    });
                }
            }
        }
    }
    Some(GiCommutation::Holds)
}

/// Integer-engine grid search for an invertible span element over
/// `{0,…,grid_max}^d`; `Some(None)` certifies there is none on the grid,
/// outer `None` signals overflow.
pub(crate) fn find_invertible(
    slices: &[GiMatrix],
    grid_max: usize,
) -> Option<Option<Vec<usize>>> {
    let d = slices.len();
    for w in WeightGrid::new(d, grid_max) {
        let a = GiMatrix::combine(slices, &w)?;
        if !gi_is_zero(a.det()?) {
            return Some(Some(w));
        }
    }
    Some(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::GaussianRational;

    fn gm(rows: &[&[i64]]) -> GiMatrix {
        let (r, c) = (rows.len(), rows[0].len());
        let mut out = GiMatrix::zero(r, c);
        for i in 0..r {
            for j in 0..c {
                out.set(i, j, (rows[i][j] as i128, 0));
            }
        }
        out
    }

    #[test]
    fn det_matches_rational_kernel() {
        let cases = [
            Matrix::from_i64(&[&[1, 2], &[3, 4]]),
            Matrix::from_i64(&[&[1, 2, 0], &[0, 1, 1], &[3, 0, 1]]),
            Matrix::from_i64(&[&[1, 2, 0, -1], &[3, 0, 1, 2], &[0, 1, 1, 1], &[2, -2, 0, 3]]),
        ];
        for m in &cases {
            let (gi, scale) = scale_to_integers(m).unwrap();
            assert!(scale.is_one());
            let d = gi.det().unwrap();
            let exact = m.det().unwrap();
            assert_eq!(GaussianRational::from_int(d.0 as i64), exact);
            assert_eq!(d.1, 0);
        }
    }

    #[test]
    fn compound_matches_rational_kernel() {
        let m = Matrix::from_i64(&[&[1, 2, 0, -1], &[3, 0, 1, 2], &[0, 1, 1, 1], &[2, -2, 0, 3]]);
        let (gi, _) = scale_to_integers(&m).unwrap();
        for p in 1..=3 {
            let fast = gi.compound(p).unwrap();
            let exact = m.compound(p).unwrap();
            for i in 0..exact.rows() {
                for j in 0..exact.cols() {
                    let e = fast.at(i, j);
                    assert_eq!(GaussianRational::from_int(e.0 as i64), exact[(i, j)]);
                }
            }
            let fast_t = gi.signed_compound_t(p).unwrap();
            let exact_t = m.signed_compound(p).unwrap().transpose();
            for i in 0..exact_t.rows() {
                for j in 0..exact_t.cols() {
                    let e = fast_t.at(i, j);
                    assert_eq!(GaussianRational::from_int(e.0 as i64), exact_t[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn scaling_clears_denominators() {
        let m = Matrix::from_fn(2, 2, |i, j| GaussianRational::from_ratio(1, (i + j + 1) as i64));
        let (gi, scale) = scale_to_integers(&m).unwrap();
        assert_eq!(scale, BigInt::from(6));
        assert_eq!(gi.at(0, 0), (6, 0));
        assert_eq!(gi.at(1, 1), (2, 0));
    }

    #[test]
    fn basis_finds_rank() {
        let mut b = GiBasis::new();
        assert_eq!(b.try_insert(vec![1, 0], gm(&[&[1, 0], &[0, 0]])), Some(true));
        assert_eq!(b.try_insert(vec![2, 0], gm(&[&[2, 0], &[0, 0]])), Some(false));
        assert_eq!(b.try_insert(vec![0, 1], gm(&[&[1, 1], &[0, 0]])), Some(true));
        assert_eq!(b.items.len(), 2);
    }

    #[test]
    fn overflow_is_detected() {
        let big = (1i128 << 100, 0i128);
        let mut m = GiMatrix::zero(2, 2);
        m.set(0, 0, big);
        m.set(1, 1, big);
        assert!(m.mul(&m).is_none() || m.det().is_none());
    }
}
