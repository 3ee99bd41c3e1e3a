//! Associativity of a polynomial n-ary operation.
//!
//! With every `p` in `n` variables come the `n` compositions
//! `p_i(x_1..x_{2n-1}) = p(x_1, ..., p(x_i, ..., x_{i+n-1}), ..., x_{2n-1})`;
//! `p` is associative iff they all coincide. The compositions are computed
//! two ways: by polynomial substitution, and for multilinear `p` by a
//! closed-form coefficient rule over subsets of `[2n-1]`.

use thiserror::Error;

use crate::poly::{full_set, Monomial, MultilinearPoly, PolyError, SparsePoly, Subset, MAX_VARS};
use crate::ring::Coeff;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssocError {
    #[error("arity {0} is below 2; associativity needs at least two arguments")]
    ArityTooSmall(usize),
    #[error("arity {0} is too large: compositions need {} variables", 2 * .0 - 1)]
    ArityTooLarge(usize),
    #[error("slot {slot} out of range 1..={n}")]
    SlotOutOfRange { slot: usize, n: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Largest arity whose compositions fit the subset encoding.
pub const MAX_ARITY: usize = MAX_VARS.div_ceil(2);

/// The split of `[2n-1]` around slot `i`: `A_i = [i-1]` (outer, before),
/// `B_i = [n] + i - 1` (inner call), `C_i` the outer variables after it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompositionWindows {
    pub slot: usize,
    pub before: Subset,
    pub inner: Subset,
    pub after: Subset,
}

impl CompositionWindows {
    pub fn new(n: usize, slot: usize) -> Result<Self, AssocError> {
        check_arity(n)?;
        if slot == 0 || slot > n {
            return Err(AssocError::SlotOutOfRange { slot, n });
        }
        let total = full_set(2 * n - 1);
        let before = full_set(slot - 1);
        let inner = full_set(n) << (slot - 1);
        Ok(CompositionWindows {
            slot,
            before,
            inner,
            after: total & !(before | inner),
        })
    }
}

fn check_arity(n: usize) -> Result<(), AssocError> {
    if n < 2 {
        Err(AssocError::ArityTooSmall(n))
    } else if n > MAX_ARITY {
        Err(AssocError::ArityTooLarge(n))
    } else {
        Ok(())
    }
}

/// `p_slot` by substituting `p` into itself.
pub fn compose_substitution<R: Coeff>(
    p: &SparsePoly<R>,
    slot: usize,
) -> Result<SparsePoly<R>, AssocError> {
    let n = p.nvars();
    if n < 2 {
        return Err(AssocError::ArityTooSmall(n));
    }
    if slot == 0 || slot > n {
        return Err(AssocError::SlotOutOfRange { slot, n });
    }
    let m = 2 * n - 1;
    let inner_args = (slot..slot + n)
        .map(|j| SparsePoly::var(m, j))
        .collect::<Result<Vec<_>, _>>()?;
    let inner = p.substitute(&inner_args)?;
    let args = (1..=n)
        .map(|k| match k.cmp(&slot) {
            std::cmp::Ordering::Less => SparsePoly::var(m, k),
            std::cmp::Ordering::Equal => Ok(inner.clone()),
            std::cmp::Ordering::Greater => SparsePoly::var(m, k + n - 1),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(p.substitute(&args)?)
}

/// Coefficient `r^i_S` of `∏_{j∈S} x_j` in `p_i`:
/// `c_{J∪{i}}·c_K` when `S` meets `B_i`, else `c_{J∪{i}}·c_∅ + c_J`, where
/// `J = (S∩A_i) ∪ ((S∩C_i) − n + 1)` and `K = (S∩B_i) − i + 1`.
pub fn closed_form_coefficient<R: Coeff>(
    p: &MultilinearPoly<R>,
    windows: &CompositionWindows,
    s: Subset,
) -> R {
    let n = p.arity();
    let i = windows.slot;
    let j = (s & windows.before) | ((s & windows.after) >> (n - 1));
    let with_slot = j | 1 << (i - 1);
    let hit = s & windows.inner;
    if hit != 0 {
        p.coeff(with_slot) * p.coeff(hit >> (i - 1))
    } else {
        p.coeff(with_slot) * p.coeff(0) + p.coeff(j)
    }
}

/// `p_slot` as a multilinear form in `2n − 1` variables, coefficient by
/// coefficient from the closed-form rule.
pub fn compose_closed_form<R: Coeff>(
    p: &MultilinearPoly<R>,
    slot: usize,
) -> Result<MultilinearPoly<R>, AssocError> {
    let n = p.arity();
    let windows = CompositionWindows::new(n, slot)?;
    let m = 2 * n - 1;
    let coeffs = (0..=full_set(m)).map(|s| (s, closed_form_coefficient(p, &windows, s)));
    Ok(MultilinearPoly::from_coeffs(m, coeffs)?)
}

/// Exact `deg(p_i, x_j)` for rows `i ∈ [n]`, columns `j ∈ [2n-1]`, read off
/// the per-variable degrees of `p` without expanding anything.
pub fn composed_degrees<R: Coeff>(p: &SparsePoly<R>) -> Vec<Vec<u32>> {
    let n = p.nvars();
    let d = p.degrees();
    (1..=n)
        .map(|i| {
            (1..2 * n)
                .map(|j| {
                    if j < i {
                        d[j - 1]
                    } else if j < i + n {
                        d[i - 1] * d[j - i]
                    } else {
                        d[j - n]
                    }
                })
                .collect()
        })
        .collect()
}

/// A variable whose degree in `p_1` differs from its degree in `p_slot`,
/// certifying `p_1 ≠ p_slot` before any expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeObstruction {
    pub slot: usize,
    pub var: usize,
    pub first_degree: u32,
    pub slot_degree: u32,
}

pub fn degree_obstruction<R: Coeff>(p: &SparsePoly<R>) -> Option<DegreeObstruction> {
    let table = composed_degrees(p);
    let first = table.first()?;
    table.iter().enumerate().skip(1).find_map(|(row, degs)| {
        first
            .iter()
            .zip(degs)
            .position(|(a, b)| a != b)
            .map(|col| DegreeObstruction {
                slot: row + 1,
                var: col + 1,
                first_degree: first[col],
                slot_degree: degs[col],
            })
    })
}

/// Certificate of non-associativity: the coefficient of `monomial` in `p_1`
/// is `first`, in `p_slot` it is `other`, and the two differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<R> {
    pub slot: usize,
    pub monomial: Monomial,
    pub first: R,
    pub other: R,
}

impl<R> Witness<R> {
    /// The witness monomial as a subset of `[2n-1]`, when squarefree.
    pub fn subset(&self) -> Option<Subset> {
        self.monomial.as_subset()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecisionPath {
    /// Closed-form comparison of `p_1` against every `p_i`.
    Multilinear,
    /// Symmetric input: only `p_1 = p_2` is checked.
    SymmetricShortcut,
    /// Full substitution expansion (some variable has degree ≥ 2).
    Expansion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocVerdict<R> {
    witness: Option<Witness<R>>,
    path: DecisionPath,
    obstruction: Option<DegreeObstruction>,
}

impl<R> AssocVerdict<R> {
    pub fn is_associative(&self) -> bool {
        self.witness.is_none()
    }

    pub fn witness(&self) -> Option<&Witness<R>> {
        self.witness.as_ref()
    }

    pub fn into_witness(self) -> Option<Witness<R>> {
        self.witness
    }

    pub fn path(&self) -> DecisionPath {
        self.path
    }

    pub fn degree_obstruction(&self) -> Option<&DegreeObstruction> {
        self.obstruction.as_ref()
    }
}

/// Decides associativity exactly. The witness, if any, is at the smallest
/// failing slot and, within it, the smallest monomial (subset bit order for
/// multilinear input, graded-lex order otherwise).
pub fn is_associative<R: Coeff>(p: &SparsePoly<R>) -> Result<AssocVerdict<R>, AssocError> {
    let n = p.nvars();
    check_arity(n)?;
    match p.to_multilinear() {
        Some(m) => Ok(decide_multilinear(&m)),
        None => decide_by_expansion(p),
    }
}

pub fn is_associative_multilinear<R: Coeff>(
    p: &MultilinearPoly<R>,
) -> Result<AssocVerdict<R>, AssocError> {
    check_arity(p.arity())?;
    Ok(decide_multilinear(p))
}

fn decide_multilinear<R: Coeff>(p: &MultilinearPoly<R>) -> AssocVerdict<R> {
    let n = p.arity();
    let symmetric = p.is_symmetric();
    let last = if symmetric { 2 } else { n };
    let first = CompositionWindows::new(n, 1).expect("arity checked");
    let all = full_set(2 * n - 1);
    for slot in 2..=last {
        let windows = CompositionWindows::new(n, slot).expect("arity checked");
        for s in 0..=all {
            let a = closed_form_coefficient(p, &first, s);
            let b = closed_form_coefficient(p, &windows, s);
            if a != b {
                return AssocVerdict {
                    witness: Some(Witness {
                        slot,
                        monomial: Monomial::from_subset(s, 2 * n - 1),
                        first: a,
                        other: b,
                    }),
                    path: if symmetric {
                        DecisionPath::SymmetricShortcut
                    } else {
                        DecisionPath::Multilinear
                    },
                    obstruction: None,
                };
            }
        }
    }
    AssocVerdict {
        witness: None,
        path: if symmetric {
            DecisionPath::SymmetricShortcut
        } else {
            DecisionPath::Multilinear
        },
        obstruction: None,
    }
}

fn decide_by_expansion<R: Coeff>(p: &SparsePoly<R>) -> Result<AssocVerdict<R>, AssocError> {
    let n = p.nvars();
    let obstruction = degree_obstruction(p);
    // An obstructed slot is certain to differ, so no later slot is needed.
    let last = obstruction.map_or(n, |o| o.slot);
    let first = compose_substitution(p, 1)?;
    for slot in 2..=last {
        let other = compose_substitution(p, slot)?;
        if let Some((monomial, a, b)) = first_difference(&first, &other) {
            return Ok(AssocVerdict {
                witness: Some(Witness {
                    slot,
                    monomial,
                    first: a,
                    other: b,
                }),
                path: DecisionPath::Expansion,
                obstruction,
            });
        }
    }
    debug_assert!(
        obstruction.is_none(),
        "degree obstruction without a difference"
    );
    Ok(AssocVerdict {
        witness: None,
        path: DecisionPath::Expansion,
        obstruction,
    })
}

fn first_difference<R: Coeff>(a: &SparsePoly<R>, b: &SparsePoly<R>) -> Option<(Monomial, R, R)> {
    let mut keys: Vec<&Monomial> = a
        .terms()
        .map(|(m, _)| m)
        .chain(b.terms().map(|(m, _)| m))
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().find_map(|m| {
        let (x, y) = (a.coeff(m), b.coeff(m));
        (x != y).then(|| (m.clone(), x, y))
    })
}
