//! Border rank ≤ 4 for 4×4×4 tensors: the deterministic decision procedure
//! (commutation necessity, invertible-slice acceptance, reduction to 3×3×4,
//! dichotomy acceptance) and the sampled polynomial-certificate form of the
//! quantified symmetrizer conditions.

use crate::error::Error;
use crate::fastint;
use crate::generators::SeededRng;
use crate::linalg::{GaussianRational, Matrix};
use crate::strassen::{span_commutation_ok, CommutationReport};
use crate::symmetrize::{
    build_system, check_rl_identity, decide_334, extract_candidates, Outcome, Reason, Side,
    Verdict,
};
use crate::tensor::{ReductionRecord, Tensor3};

/// Which terminal rule of the decision procedure fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminalRule {
    /// Some compound commutation condition failed (certified rejection).
    CommutationReject,
    /// All commutations hold and a slice span contains an invertible element.
    InvertibleAccept,
    /// Two modes have span dimension ≤ 3; the verdict is the 3×3×4 decision
    /// on the reduced tensor.
    ReducedTo334,
    /// All commutations hold, no invertible span element exists (certified by
    /// a complete grid), and no reduction applies: accepted by the dichotomy.
    DichotomyAccept,
}

/// Full evidence trail of one 4×4×4 decision.
#[derive(Clone, Debug)]
pub struct Decision444Trace {
    /// Commutation reports for every mode and compound level 1..=3,
    /// mode-major.
    pub commutation: Vec<CommutationReport>,
    /// Slice-span dimensions of modes 1..=3.
    pub span_dims: [usize; 3],
    /// Mode and span coefficients of an invertible slice-span element, when
    /// one was found.
    pub invertible_witness: Option<(usize, Vec<GaussianRational>)>,
    /// Reduction to 3×3×4, when one was taken.
    pub reduction: Option<(ReductionRecord, Tensor3)>,
    pub rule: TerminalRule,
    pub verdict: Verdict,
}

/// Search one mode's slice span for an invertible element over the complete
/// grid `{0,…,4}⁴`. The determinant restricted to the span is a polynomial of
/// per-variable degree ≤ 4 in the four coefficients, so it vanishes on the
/// whole grid iff it vanishes identically: a miss certifies that the span
/// contains no invertible matrix at all.
fn find_invertible_in_span(slices: &[Matrix]) -> Option<Vec<GaussianRational>> {
    let d = slices.len();
    let m = slices[0].rows();

    let scaled: Option<Vec<_>> = slices.iter().map(fastint::scale_to_integers).collect();
    if let Some(scaled) = scaled {
        let mats: Vec<_> = scaled.iter().map(|(gi, _)| gi.clone()).collect();
        if let Some(found) = fastint::find_invertible(&mats, m) {
            return found.map(|weights| {
                weights
                    .iter()
                    .zip(&scaled)
                    .map(|(&w, (_, scale))| {
                        &GaussianRational::from_int(w as i64)
                            * &GaussianRational::real(num::BigRational::from_integer(
                                scale.clone(),
                            ))
                    })
                    .collect()
            });
        }
    }

    for weights in fastint::WeightGrid::new(d, m) {
        let mut a = Matrix::zero(m, m);
        for (s, &w) in slices.iter().zip(&weights) {
            if w != 0 {
                a = a.add(&s.scale(&GaussianRational::from_int(w as i64)));
            }
        }
        if !a.det().expect("square").is_zero() {
            return Some(
                weights
                    .iter()
                    .map(|&w| GaussianRational::from_int(w as i64))
                    .collect(),
            );
        }
    }
    None
}

/// Decide border rank ≤ 4 for a 4×4×4 tensor.
///
/// The procedure, in order:
/// 1. every mode's slice span must satisfy the compound commutation
///    conditions at levels 1, 2 and 3 (all nine checks are run and reported;
///    any failure is a certified rejection);
/// 2. if some slice span contains an invertible element (complete grid
///    search), accept;
/// 3. if at least two modes have span dimension ≤ 3, view the tensor as
///    3×3×4 and return that decision;
/// 4. otherwise accept: commutation holds everywhere, no invertible span
///    element exists and no reduction applies, which exhausts the remaining
///    cases.
pub fn decide_444(t: &Tensor3) -> Result<Decision444Trace, Error> {
    if t.dims() != (4, 4, 4) {
        return Err(Error::Dimension(format!(
            "decide_444 expects a 4x4x4 tensor, got {:?}",
            t.dims()
        )));
    }
    let spaces: Vec<_> = (1..=3).map(|p| t.slice_space(p)).collect();
    let span_dims = [spaces[0].span_dim, spaces[1].span_dim, spaces[2].span_dim];

    let mut commutation = Vec::with_capacity(9);
    let mut all_hold = true;
    for space in &spaces {
        for level in 1..=3 {
            let report = span_commutation_ok(space, level)?;
            all_hold &= report.holds;
            commutation.push(report);
        }
    }
    let mut reasons: Vec<Reason> = commutation
        .iter()
        .cloned()
        .map(Reason::Commutation)
        .collect();
    for (p, space) in spaces.iter().enumerate() {
        reasons.push(Reason::SpanDim {
            mode: p + 1,
            dim: space.span_dim,
        });
    }
    if !all_hold {
        return Ok(Decision444Trace {
            commutation,
            span_dims,
            invertible_witness: None,
            reduction: None,
            rule: TerminalRule::CommutationReject,
            verdict: Verdict {
                outcome: Outcome::Reject,
                reasons,
            },
        });
    }

    for (p, space) in spaces.iter().enumerate() {
        if let Some(coefficients) = find_invertible_in_span(&space.slices) {
            reasons.push(Reason::InvertibleSpanElement {
                mode: p + 1,
                coefficients: coefficients.clone(),
            });
            return Ok(Decision444Trace {
                commutation,
                span_dims,
                invertible_witness: Some((p + 1, coefficients)),
                reduction: None,
                rule: TerminalRule::InvertibleAccept,
                verdict: Verdict {
                    outcome: Outcome::Accept,
                    reasons,
                },
            });
        }
        reasons.push(Reason::NoInvertibleSpanElement { mode: p + 1 });
    }

    if let Some((reduced, record)) = t.reduce_to_334() {
        let inner = decide_334(&reduced)?;
        let outcome = inner.outcome;
        reasons.push(Reason::Reduced334(Box::new(inner)));
        return Ok(Decision444Trace {
            commutation,
            span_dims,
            invertible_witness: None,
            reduction: Some((record, reduced)),
            rule: TerminalRule::ReducedTo334,
            verdict: Verdict { outcome, reasons },
        });
    }

    Ok(Decision444Trace {
        commutation,
        span_dims,
        invertible_witness: None,
        reduction: None,
        rule: TerminalRule::DichotomyAccept,
        verdict: Verdict {
            outcome: Outcome::Accept,
            reasons,
        },
    })
}

/// One sampled counterexample found by [`check_equations_444`].
#[derive(Clone, Debug)]
pub struct EquationViolation {
    pub mode: usize,
    pub rank_left: usize,
    pub rank_right: usize,
    /// True when both ranks were ≤ 8 but the extracted candidates failed the
    /// trace identity.
    pub identity_failed: bool,
    pub transforms: [Matrix; 3],
}

/// Evaluate the quantified symmetrizer conditions at one explicit transform
/// triple: form `T(P₁,P₂,P₃)`, delete the last row and column of each
/// mode-p slice, and require both symmetrizer systems to have rank ≤ 8 and
/// the extracted candidates to satisfy the trace identity, for p = 1, 2, 3.
/// Returns the first violation.
pub fn check_equations_at(
    t: &Tensor3,
    transforms: &[Matrix; 3],
) -> Result<Option<EquationViolation>, Error> {
    if t.dims() != (4, 4, 4) {
        return Err(Error::Dimension(format!(
            "check_equations_at expects a 4x4x4 tensor, got {:?}",
            t.dims()
        )));
    }
    let tc = t.change_basis(&transforms[0], &transforms[1], &transforms[2])?;
    for mode in 1..=3 {
        let corners: Vec<Matrix> = tc
            .slices(mode)
            .iter()
            .map(|s| Matrix::from_fn(3, 3, |i, j| s[(i, j)].clone()))
            .collect();
        let cand_r = extract_candidates(&build_system(&corners, Side::Right)?);
        let cand_l = extract_candidates(&build_system(&corners, Side::Left)?);
        if cand_r.rank > 8 || cand_l.rank > 8 {
            return Ok(Some(EquationViolation {
                mode,
                rank_left: cand_l.rank,
                rank_right: cand_r.rank,
                identity_failed: false,
                transforms: transforms.clone(),
            }));
        }
        let r = cand_r.canonical.expect("rank <= 8");
        let l = cand_l.canonical.expect("rank <= 8");
        if !check_rl_identity(&l, &r)? {
            return Ok(Some(EquationViolation {
                mode,
                rank_left: cand_l.rank,
                rank_right: cand_r.rank,
                identity_failed: true,
                transforms: transforms.clone(),
            }));
        }
    }
    Ok(None)
}

/// Sampled certificate for the literal quantified form of the 4×4×4
/// conditions. Each trial draws pseudo-random integer data with entries
/// uniform in `-bound..=bound` and checks both condition families of the
/// characterization:
///
/// 1. the degree-5 commutation equations: a triple `X, Y, Z` sampled from
///    each mode's slice span must satisfy `X·adj(Y)·Z = Z·adj(Y)·X`;
/// 2. the degree-9/16 corner equations: a sampled transform triple
///    `(P₁,P₂,P₃)` must pass [`check_equations_at`].
///
/// Both families are needed: tensors exist whose corner conditions hold at
/// every transform (the symmetrizer candidates degenerate to zero and the
/// trace identity is vacuous) while the commutation equations fail — the
/// border-rank-5 counterexample family is exactly such a witness.
///
/// The guarantee is one-sided: any violation proves border rank > 4 exactly;
/// the absence of violations is evidence, not proof (the quantifiers range
/// over all complex triples). Deterministic given `(t, trials, seed, bound)`;
/// the reported violation is always the one with the lowest trial index.
pub fn check_equations_444(
    t: &Tensor3,
    trials: usize,
    seed: u64,
    bound: u64,
) -> Result<Verdict, Error> {
    if t.dims() != (4, 4, 4) {
        return Err(Error::Dimension(format!(
            "check_equations_444 expects a 4x4x4 tensor, got {:?}",
            t.dims()
        )));
    }
    if trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    let spaces: Vec<_> = (1..=3).map(|p| t.slice_space(p)).collect();
    let mut rng = SeededRng::new(seed);
    for trial in 0..trials {
        for space in &spaces {
            let draw = |rng: &mut SeededRng| -> Vec<GaussianRational> {
                (0..space.slices.len())
                    .map(|_| GaussianRational::from_int(rng.int_in(bound)))
                    .collect()
            };
            let (xc, yc, zc) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
            let at = |c: &[GaussianRational]| {
                let mut acc = Matrix::zero(4, 4);
                for (s, ci) in space.slices.iter().zip(c) {
                    acc = acc.add(&s.scale(ci));
                }
                acc
            };
            let defect = crate::strassen::strassen_commutator(&at(&xc), &at(&yc), &at(&zc))?;
            if !defect.is_zero() {
                return Ok(Verdict {
                    outcome: Outcome::Reject,
                    reasons: vec![Reason::Commutation(CommutationReport {
                        mode: space.mode,
                        level: 1,
                        holds: false,
                        witness: Some(crate::strassen::CommutationWitness {
                            x: xc,
                            y: yc,
                            z: zc,
                        }),
                    })],
                });
            }
        }
        let transforms: [Matrix; 3] = std::array::from_fn(|_| {
            Matrix::from_fn(4, 4, |_, _| GaussianRational::from_int(rng.int_in(bound)))
        });
        if let Some(v) = check_equations_at(t, &transforms)? {
            return Ok(Verdict {
                outcome: Outcome::Reject,
                reasons: vec![Reason::SampledEquationViolation {
                    trial,
                    mode: v.mode,
                    rank_left: v.rank_left,
                    rank_right: v.rank_right,
                    identity_failed: v.identity_failed,
                    transforms: Box::new(v.transforms),
                }],
            });
        }
    }
    Ok(Verdict {
        outcome: Outcome::Accept,
        reasons: vec![Reason::SampledEquationsPassed { trials }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn diagonal_tensor_accepts_via_invertible_slice() {
        let t = Tensor3::from_fn(4, 4, 4, |i, j, k| {
            if i == j && j == k { g(1) } else { g(0) }
        });
        let trace = decide_444(&t).unwrap();
        assert_eq!(trace.verdict.outcome, Outcome::Accept);
        assert_eq!(trace.rule, TerminalRule::InvertibleAccept);
        assert!(trace.invertible_witness.is_some());
    }

    #[test]
    fn rank4_witness_accepts() {
        for seed in [1, 2, 3] {
            let w = generators::random_rank_r(4, 4, 4, 4, seed, 3).unwrap();
            let trace = decide_444(&w.tensor).unwrap();
            assert_eq!(trace.verdict.outcome, Outcome::Accept, "seed {seed}");
        }
    }

    #[test]
    fn salmon_family_rejects_with_mode1_witness_and_mode3_pass() {
        for seed in [4, 5] {
            let t = generators::salmon_counterexample(seed, 5);
            let trace = decide_444(&t).unwrap();
            assert_eq!(trace.verdict.outcome, Outcome::Reject, "seed {seed}");
            assert_eq!(trace.rule, TerminalRule::CommutationReject);
            let mode1_level1 = trace
                .commutation
                .iter()
                .find(|r| r.mode == 1 && r.level == 1)
                .unwrap();
            assert!(!mode1_level1.holds);
            assert!(mode1_level1.witness.is_some());
            for level in 1..=3 {
                let r = trace
                    .commutation
                    .iter()
                    .find(|r| r.mode == 3 && r.level == level)
                    .unwrap();
                assert!(r.holds, "mode 3 must pass at level {level}");
            }
        }
    }

    #[test]
    fn generic_tensor_rejects() {
        let t = generators::generic_tensor(4, 4, 4, 6, 3);
        let trace = decide_444(&t).unwrap();
        assert_eq!(trace.verdict.outcome, Outcome::Reject);
        assert_eq!(trace.rule, TerminalRule::CommutationReject);
    }

    #[test]
    fn wrong_dims_error() {
        assert!(decide_444(&Tensor3::zero(3, 3, 4)).is_err());
        assert!(check_equations_444(&Tensor3::zero(3, 3, 4), 1, 0, 5).is_err());
        assert!(check_equations_444(&Tensor3::zero(4, 4, 4), 0, 0, 5).is_err());
    }

    #[test]
    fn equations_pass_on_witnessed_and_fail_on_salmon() {
        let w = generators::random_rank_r(4, 4, 4, 4, 7, 3).unwrap();
        let v = check_equations_444(&w.tensor, 10, 99, 5).unwrap();
        assert_eq!(v.outcome, Outcome::Accept);

        let t = generators::salmon_counterexample(8, 5);
        let v = check_equations_444(&t, 20, 99, 5).unwrap();
        assert_eq!(v.outcome, Outcome::Reject);
    }

    #[test]
    fn identity_transform_matches_corner_conditions() {
        // On a tensor whose mode-3 slices have zero last row and column, the
        // identity transform reduces the condition to the 3×3×4 corner.
        let small = generators::random_rank_r(3, 3, 4, 4, 9, 3).unwrap().tensor;
        let t = Tensor3::from_fn(4, 4, 4, |i, j, k| {
            if i < 3 && j < 3 { small.get(i, j, k).clone() } else { g(0) }
        });
        let id = [Matrix::identity(4), Matrix::identity(4), Matrix::identity(4)];
        // mode 3 of t embeds `small`, which has rank ≤ 4, so its corner
        // conditions hold; modes 1 and 2 see slices with a zero block as well
        assert!(check_equations_at(&t, &id).unwrap().is_none());
    }

    #[test]
    fn zero_tensor_accepts() {
        let trace = decide_444(&Tensor3::zero(4, 4, 4)).unwrap();
        assert_eq!(trace.verdict.outcome, Outcome::Accept);
    }
}
