//! Symmetrizer systems: the linear conditions `T_k·R` symmetric (side R) and
//! `L·T_k` symmetric (side L) on a family of square slices, their coefficient
//! matrices, candidate extraction, the `L·Rᵀ = Rᵀ·L = (tr/3)·I` identity, and
//! the 3×3×4 border-rank-4 decision built from them.

use crate::error::Error;
use crate::linalg::{GaussianRational, Matrix};
use crate::strassen::CommutationReport;
use crate::tensor::Tensor3;

/// Which of the two symmetrizer systems: `L` multiplies slices from the left,
/// `R` from the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The coefficient matrix of one symmetrizer system together with its index
/// bookkeeping.
///
/// For `r` slices of size `n×n` the system has `r·n(n-1)/2` rows (one per
/// slice and strict upper-triangle position, slices ascending then `(i,j)`
/// lexicographic) and `n²` columns (row-major positions of the unknown).
/// Every coefficient is a slice entry times -1, 0 or +1, so each maximal
/// minor is a polynomial of degree `n²` in the tensor entries.
#[derive(Clone, Debug)]
pub struct SymmetrizerSystem {
    pub side: Side,
    /// Size of the (square) slices.
    pub slice_dim: usize,
    /// Number of slices `r`.
    pub num_slices: usize,
    pub coeff: Matrix,
    /// Row labels: (slice index, upper-triangle position), all 1-based.
    pub row_index: Vec<(usize, (usize, usize))>,
    /// Column labels: (row, col) of the unknown matrix, 1-based, row-major.
    pub col_index: Vec<(usize, usize)>,
}

/// Solutions of a symmetrizer system, as read off from its rank.
#[derive(Clone, Debug)]
pub struct Candidates {
    /// Exact rank of the coefficient matrix.
    pub rank: usize,
    /// Nullspace basis reshaped to matrices (empty iff full column rank).
    pub nullspace_basis: Vec<Matrix>,
    /// The canonical candidate used by the decision procedures: `None` at
    /// full rank; the unique-up-to-scale nullvector at corank 1; the zero
    /// matrix at corank ≥ 2 (where the adjugate of every maximal square
    /// submatrix vanishes).
    pub canonical: Option<Matrix>,
}

/// Decision outcome. `NoWitness` is an honest failure to find a required
/// existential witness within the trial budget; `NotApplicable` reports a
/// violated structural precondition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Accept,
    Reject,
    NoWitness,
    NotApplicable,
}

/// Decision outcome with machine-checkable reasons: replaying any reason's
/// data through the named condition reproduces the stated sub-outcome. The
/// witnesses (failing triples, extracted candidates, rank values) live inside
/// the reasons.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub reasons: Vec<Reason>,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.outcome == Outcome::Accept
    }
}

/// One re-checkable piece of evidence inside a [`Verdict`].
#[derive(Clone, Debug)]
pub enum Reason {
    /// Span dimension of one mode.
    SpanDim { mode: usize, dim: usize },
    /// A commutation condition held or failed on a span.
    Commutation(CommutationReport),
    /// Rank of one symmetrizer system.
    SymmetrizerRank { side: Side, rank: usize },
    /// Result of the trace identity on the extracted candidate pair.
    RlIdentity {
        holds: bool,
        l: Matrix,
        r: Matrix,
    },
    /// Value of the 9×9 symmetrizer determinant deciding the degree-9
    /// hypersurface membership for 3×3×3 tensors.
    StrassenDet { side: Side, value: GaussianRational },
    /// Coefficients of an invertible element found in a mode's slice span.
    InvertibleSpanElement {
        mode: usize,
        coefficients: Vec<GaussianRational>,
    },
    /// A complete grid search certified that no span element is invertible.
    NoInvertibleSpanElement { mode: usize },
    /// Verdict of the 3×3×4 decision applied to a reduced tensor.
    Reduced334(Box<Verdict>),
    /// Dimension of the orthogonal complement of the quadric space.
    PerpDim { dim: usize, required: usize },
    /// A sampled pair from the perp with squarefree characteristic
    /// polynomial of `A·adj(B)` (nonzero discriminant certifies distinct
    /// eigenvalues).
    DistinctEigenvalues {
        a_coefficients: Vec<GaussianRational>,
        b_coefficients: Vec<GaussianRational>,
        discriminant: GaussianRational,
    },
    /// The distinct-eigenvalue search exhausted its trial budget.
    DistinctEigenvaluesNotFound { trials: usize },
    /// Sampled counterexample to the quantified symmetrizer conditions:
    /// after transforming by the recorded triple, the corner slices of the
    /// given mode violate rank ≤ 8 (or the trace identity when
    /// `identity_failed`). Replaying the transforms reproduces the violation.
    SampledEquationViolation {
        trial: usize,
        mode: usize,
        rank_left: usize,
        rank_right: usize,
        identity_failed: bool,
        transforms: Box<[Matrix; 3]>,
    },
    /// Every sampled transform triple satisfied the quantified conditions
    /// (a one-sided certificate: evidence for membership, proof of nothing).
    SampledEquationsPassed { trials: usize },
}

/// Build the coefficient matrix of the system `T_k·X` symmetric for all `k`
/// (side R) or `X·T_k` symmetric for all `k` (side L).
///
/// `coeff · vec(X) = 0` exactly when every product is symmetric; rows
/// enumerate the strict upper-triangle entries of the skew difference
/// (`T_k X - Xᵀ T_kᵀ`, resp. `X T_k - T_kᵀ Xᵀ`) for `k = 1..r` in order.
pub fn build_system(slices: &[Matrix], side: Side) -> Result<SymmetrizerSystem, Error> {
    if slices.is_empty() {
        return Err(Error::Argument("need at least one slice".into()));
    }
    let n = slices[0].rows();
    for s in slices {
        if !s.is_square() || s.rows() != n {
            return Err(Error::Dimension(format!(
                "slices must all be {n}x{n}, got {}x{}",
                s.rows(),
                s.cols()
            )));
        }
    }
    let r = slices.len();
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    let col_index: Vec<(usize, usize)> = (1..=n)
        .flat_map(|s| (1..=n).map(move |t| (s, t)))
        .collect();
    let mut coeff = Matrix::zero(r * pairs.len(), n * n);
    let mut row_index = Vec::with_capacity(r * pairs.len());
    let mut row = 0;
    for (k, t) in slices.iter().enumerate() {
        for &(i, j) in &pairs {
            let (i0, j0) = (i - 1, j - 1);
            for s in 0..n {
                match side {
                    // (T X)_{ij} - (T X)_{ji} = Σ_s T[i,s] X[s,j] - T[j,s] X[s,i]
                    Side::Right => {
                        let cj = s * n + j0;
                        coeff[(row, cj)] = &coeff[(row, cj)] + &t[(i0, s)];
                        let ci = s * n + i0;
                        coeff[(row, ci)] = &coeff[(row, ci)] - &t[(j0, s)];
                    }
                    // (X T)_{ij} - (X T)_{ji} = Σ_s X[i,s] T[s,j] - X[j,s] T[s,i]
                    Side::Left => {
                        let cj = i0 * n + s;
                        coeff[(row, cj)] = &coeff[(row, cj)] + &t[(s, j0)];
                        let ci = j0 * n + s;
                        coeff[(row, ci)] = &coeff[(row, ci)] - &t[(s, i0)];
                    }
                }
            }
            row_index.push((k + 1, (i, j)));
            row += 1;
        }
    }
    Ok(SymmetrizerSystem {
        side,
        slice_dim: n,
        num_slices: r,
        coeff,
        row_index,
        col_index,
    })
}

/// Exact rank of the system and the solution menu it implies.
pub fn extract_candidates(sys: &SymmetrizerSystem) -> Candidates {
    let n = sys.slice_dim;
    let n2 = n * n;
    let ns = sys.coeff.nullspace();
    let rank = n2 - ns.len();
    let reshape = |v: &Vec<GaussianRational>| Matrix::from_fn(n, n, |i, j| v[i * n + j].clone());
    let nullspace_basis: Vec<Matrix> = ns.iter().map(reshape).collect();
    let canonical = match n2 - rank {
        0 => None,
        1 => Some(nullspace_basis[0].clone()),
        _ => Some(Matrix::zero(n, n)),
    };
    Candidates {
        rank,
        nullspace_basis,
        canonical,
    }
}

/// The trace identity `L·Rᵀ = Rᵀ·L = (tr(L·Rᵀ)/n)·I_n`, checked exactly.
/// Scale-invariant in each argument, and trivially true when either matrix
/// is zero.
pub fn check_rl_identity(l: &Matrix, r: &Matrix) -> Result<bool, Error> {
    if !l.is_square() || l.rows() != r.rows() || !r.is_square() {
        return Err(Error::Dimension(format!(
            "expected equal square shapes, got {}x{} and {}x{}",
            l.rows(),
            l.cols(),
            r.rows(),
            r.cols()
        )));
    }
    let n = l.rows();
    let lrt = l.mul(&r.transpose());
    let rtl = r.transpose().mul(l);
    let scale = lrt.trace() / GaussianRational::from_int(n as i64);
    let target = Matrix::identity(n).scale(&scale);
    Ok(lrt == target && rtl == target)
}

/// Border rank ≤ 4 decision for 3×3×4 tensors.
///
/// Accept iff both symmetrizer systems built from the four mode-3 slices have
/// rank ≤ 8 and the canonical candidates satisfy the trace identity. At rank
/// exactly 8 the candidate is the unique nullvector up to scale (the identity
/// is scale-bihomogeneous, so one representative decides it); at rank ≤ 7 the
/// candidate is zero and the identity holds trivially.
pub fn decide_334(t: &Tensor3) -> Result<Verdict, Error> {
    if t.dims() != (3, 3, 4) {
        return Err(Error::Dimension(format!(
            "decide_334 expects a 3x3x4 tensor, got {:?}",
            t.dims()
        )));
    }
    let slices = t.slices(3);
    let cand_r = extract_candidates(&build_system(&slices, Side::Right)?);
    let cand_l = extract_candidates(&build_system(&slices, Side::Left)?);
    let mut reasons = vec![
        Reason::SymmetrizerRank {
            side: Side::Right,
            rank: cand_r.rank,
        },
        Reason::SymmetrizerRank {
            side: Side::Left,
            rank: cand_l.rank,
        },
    ];
    if cand_r.rank > 8 || cand_l.rank > 8 {
        return Ok(Verdict {
            outcome: Outcome::Reject,
            reasons,
        });
    }
    let r = cand_r.canonical.expect("rank <= 8 yields a candidate");
    let l = cand_l.canonical.expect("rank <= 8 yields a candidate");
    let holds = check_rl_identity(&l, &r)?;
    reasons.push(Reason::RlIdentity {
        holds,
        l,
        r,
    });
    Ok(Verdict {
        outcome: if holds { Outcome::Accept } else { Outcome::Reject },
        reasons,
    })
}
