//! Group status, skew elements, mediality and reducibility of the
//! associative families.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::classify::{reconstruct, Classification, ClassifyError};
use crate::poly::{PolyError, SparsePoly};
use crate::ring::{Coeff, Field, Scalar};
use crate::sampling::Sampler;

/// Points used by the sampled mediality check.
pub const MEDIAL_SAMPLES: usize = 1000;
pub const MEDIAL_SEED: u64 = 0x6d65_6469_616c;
pub const MEDIAL_RANGE: u32 = 10;

/// Largest arity checked symbolically for mediality (`n²` variables).
pub const MEDIAL_SYMBOLIC_MAX: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("structure analysis needs an associative classification")]
    NotAssociative,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

// ---------------------------------------------------------- rational maps

/// `num / den` over a field; equality is by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RatFn<F: Field> {
    pub num: SparsePoly<F>,
    pub den: SparsePoly<F>,
}

impl<F: Field> RatFn<F> {
    pub fn from_poly(p: SparsePoly<F>) -> Self {
        let den = SparsePoly::constant(p.nvars(), F::one());
        RatFn { num: p, den }
    }

    pub fn same_as(&self, other: &RatFn<F>) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

/// `p(args)` as one fraction: `Σ c_m ∏ N_j^{m_j} D_j^{e_j - m_j} / ∏ D_j^{e_j}`
/// with `e_j` the degree of `p` in `x_j`.
pub fn eval_rational<F: Field>(
    p: &SparsePoly<F>,
    args: &[RatFn<F>],
) -> Result<RatFn<F>, PolyError> {
    if args.len() != p.nvars() {
        return Err(PolyError::ArityMismatch {
            expected: p.nvars(),
            actual: args.len(),
        });
    }
    let target = args.first().map_or(0, |a| a.num.nvars());
    let one = SparsePoly::constant(target, F::one());
    let degrees = p.degrees();
    let powers = |base: &SparsePoly<F>, d: u32| {
        let mut ps = vec![one.clone()];
        for k in 1..=d as usize {
            let next = &ps[k - 1] * base;
            ps.push(next);
        }
        ps
    };
    let num_pows: Vec<_> = args
        .iter()
        .zip(&degrees)
        .map(|(a, &d)| powers(&a.num, d))
        .collect();
    let den_pows: Vec<_> = args
        .iter()
        .zip(&degrees)
        .map(|(a, &d)| powers(&a.den, d))
        .collect();
    let mut num = SparsePoly::zero(target);
    for (m, c) in p.terms() {
        let mut term = SparsePoly::constant(target, c.clone());
        for (j, &e) in m.exponents().iter().enumerate() {
            let d = degrees[j];
            term = &term * &num_pows[j][e as usize];
            term = &term * &den_pows[j][(d - e) as usize];
        }
        num = &num + &term;
    }
    let mut den = one.clone();
    for (j, &d) in degrees.iter().enumerate() {
        den = &den * &den_pows[j][d as usize];
    }
    Ok(RatFn { num, den })
}

// ---------------------------------------------------------------- skew map

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkewMap<R: Scalar> {
    /// `x ↦ alpha·x + beta`.
    Affine { alpha: R, beta: R },
    /// `x ↦ 1/(a·(x + b)^power) − b`, defined off `x = −b` over the
    /// fraction field.
    ShiftedInverse { a: R::Frac, b: R::Frac, power: u32 },
}

impl<R: Scalar> SkewMap<R> {
    pub fn apply(&self, r: &RatFn<R::Frac>) -> RatFn<R::Frac> {
        match self {
            SkewMap::Affine { alpha, beta } => RatFn {
                num: &r.num.scale(&alpha.to_frac()) + &r.den.scale(&beta.to_frac()),
                den: r.den.clone(),
            },
            SkewMap::ShiftedInverse { a, b, power } => {
                // x + b = (N + bD)/D, so the image is
                // (D^k − b·a·(N + bD)^k) / (a·(N + bD)^k)
                let shifted = &r.num + &r.den.scale(b);
                let apow = shifted.pow(*power).scale(a);
                RatFn {
                    num: &r.den.pow(*power) - &apow.scale(b),
                    den: apow,
                }
            }
        }
    }
}

impl<R: Scalar> fmt::Display for SkewMap<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkewMap::Affine { alpha, beta } => {
                let mut p = SparsePoly::constant(1, beta.clone());
                p = &p + &SparsePoly::var(1, 1).expect("one variable").scale(alpha);
                write!(f, "{}", p.to_string().replace("x1", "x").replace(' ', ""))
            }
            SkewMap::ShiftedInverse { a, b, power } => {
                let x = SparsePoly::var(1, 1).expect("one variable");
                let shift = (&x + &SparsePoly::constant(1, b.clone()))
                    .to_string()
                    .replace("x1", "x")
                    .replace(' ', "");
                let base = match (*power, b.is_zero()) {
                    (0, _) => String::new(),
                    (1, true) => shift,
                    (1, false) => format!("({shift})"),
                    (k, true) => format!("{shift}^{k}"),
                    (k, false) => format!("({shift})^{k}"),
                };
                let scale = a.to_string();
                let scale = if scale.chars().skip(1).all(|c| c.is_ascii_digit()) {
                    scale
                } else {
                    format!("({scale})")
                };
                let den = match (a.is_one(), base.is_empty()) {
                    (_, true) => scale,
                    (true, false) => base,
                    (false, false) => format!("{scale}*{base}"),
                };
                write!(f, "1/({den})")?;
                if !b.is_zero() {
                    let r = b.coeff_repr();
                    write!(f, "{}{}", if r.negative { "+" } else { "-" }, r.magnitude)?;
                }
                Ok(())
            }
        }
    }
}

/// Symbolic check of `p(x, ..., x, skew(x)) = x`.
pub fn verify_skew<R: Scalar>(p: &SparsePoly<R>, skew: &SkewMap<R>) -> Result<bool, PolyError> {
    let n = p.nvars();
    let pf = p.map_coeffs(R::to_frac);
    let x = RatFn::from_poly(SparsePoly::var(1, 1)?);
    let mut args = vec![x.clone(); n];
    if let Some(last) = args.last_mut() {
        *last = skew.apply(&x);
    }
    Ok(eval_rational(&pf, &args)?.same_as(&x))
}

/// Symbolic check of `skew(p(x_1, ..., x_n)) = p(skew(x_1), ..., skew(x_n))`.
pub fn skew_is_endomorphism<R: Scalar>(
    p: &SparsePoly<R>,
    skew: &SkewMap<R>,
) -> Result<bool, PolyError> {
    let n = p.nvars();
    let pf = p.map_coeffs(R::to_frac);
    match skew {
        SkewMap::ShiftedInverse { a, b, power } if !b.is_zero() => {
            // Conjugating both maps by x ↦ x + b preserves the identity and
            // removes the shift, which keeps the expansion small.
            let shifted: Vec<SparsePoly<R::Frac>> = (1..=n)
                .map(|j| SparsePoly::var(n, j).map(|v| &v - &SparsePoly::constant(n, b.clone())))
                .collect::<Result<_, _>>()?;
            let conj = &pf.substitute(&shifted)? + &SparsePoly::constant(n, b.clone());
            let plain: SkewMap<R> = SkewMap::ShiftedInverse {
                a: a.clone(),
                b: R::Frac::zero(),
                power: *power,
            };
            endomorphism_identity(&conj, |r| plain.apply(r))
        }
        _ => endomorphism_identity(&pf, |r| skew.apply(r)),
    }
}

fn endomorphism_identity<F: Field>(
    pf: &SparsePoly<F>,
    apply: impl Fn(&RatFn<F>) -> RatFn<F>,
) -> Result<bool, PolyError> {
    let n = pf.nvars();
    let lhs = apply(&RatFn::from_poly(pf.clone()));
    let args: Vec<RatFn<F>> = (1..=n)
        .map(|j| SparsePoly::var(n, j).map(|v| apply(&RatFn::from_poly(v))))
        .collect::<Result<_, _>>()?;
    let rhs = eval_rational(pf, &args)?;
    Ok(lhs.same_as(&rhs))
}

// ------------------------------------------------------------ group status

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupStatus {
    Group,
    /// A group on the ring with one point removed (fields only).
    FieldRestricted,
    NotGroup,
}

impl GroupStatus {
    pub fn label(self) -> &'static str {
        match self {
            GroupStatus::Group => "yes",
            GroupStatus::FieldRestricted => "field-restricted",
            GroupStatus::NotGroup => "no",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupFinding<R: Scalar> {
    pub status: GroupStatus,
    pub skew: Option<SkewMap<R>>,
    pub note: Option<String>,
}

pub fn group_status<R: Scalar>(
    cls: &Classification<R>,
    n: usize,
) -> Result<GroupFinding<R>, StructureError> {
    let finding = |status, skew, note: Option<String>| GroupFinding { status, skew, note };
    Ok(match cls {
        Classification::NotAssociative(_) => return Err(StructureError::NotAssociative),
        Classification::Constant(_)
        | Classification::LeftProjection
        | Classification::RightProjection => finding(GroupStatus::NotGroup, None, None),
        Classification::TranslatedSum(c) => finding(
            GroupStatus::Group,
            Some(SkewMap::Affine {
                alpha: R::from_i64(2 - n as i64),
                beta: -c.clone(),
            }),
            None,
        ),
        Classification::TwistedSum(_) => finding(
            GroupStatus::Group,
            Some(SkewMap::Affine {
                alpha: R::one(),
                beta: R::zero(),
            }),
            None,
        ),
        Classification::ShiftedProduct { a, b } => {
            if R::RING.is_field() {
                finding(
                    GroupStatus::FieldRestricted,
                    Some(SkewMap::ShiftedInverse {
                        a: a.to_frac(),
                        b: b.clone(),
                        power: (n - 2) as u32,
                    }),
                    Some(format!(
                        "group on {} without {}; isomorphic to the b = 0 form on the nonzero elements",
                        R::RING,
                        -b.clone()
                    )),
                )
            } else {
                finding(
                    GroupStatus::NotGroup,
                    None,
                    Some(format!(
                        "{} is not a field; shifted products are in general not n-ary groups on it and no subset is searched",
                        R::RING
                    )),
                )
            }
        }
    })
}

// ---------------------------------------------------------------- medial

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MedialMethod {
    Symbolic,
    Sampled { samples: usize, seed: u64 },
}

impl MedialMethod {
    pub fn label(self) -> &'static str {
        match self {
            MedialMethod::Symbolic => "symbolic",
            MedialMethod::Sampled { .. } => "sampled",
        }
    }
}

fn medial_symbolic<R: Scalar>(p: &SparsePoly<R>) -> Result<bool, PolyError> {
    let n = p.nvars();
    let m = n * n;
    let cell = |r: usize, c: usize| SparsePoly::var(m, r * n + c + 1);
    let mut rows = Vec::with_capacity(n);
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let row: Vec<_> = (0..n).map(|c| cell(k, c)).collect::<Result<_, _>>()?;
        let col: Vec<_> = (0..n).map(|r| cell(r, k)).collect::<Result<_, _>>()?;
        rows.push(p.substitute(&row)?);
        cols.push(p.substitute(&col)?);
    }
    Ok(p.substitute(&rows)? == p.substitute(&cols)?)
}

fn medial_sampled<R: Scalar>(
    p: &SparsePoly<R>,
    samples: usize,
    seed: u64,
) -> Result<bool, PolyError> {
    let n = p.nvars();
    let mut sampler = Sampler::new(seed, MEDIAL_RANGE);
    for _ in 0..samples {
        let x: Vec<R> = sampler.point(n * n);
        let mut rows = Vec::with_capacity(n);
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let row: Vec<R> = (0..n).map(|c| x[k * n + c].clone()).collect();
            let col: Vec<R> = (0..n).map(|r| x[r * n + k].clone()).collect();
            rows.push(p.evaluate(&row)?);
            cols.push(p.evaluate(&col)?);
        }
        if p.evaluate(&rows)? != p.evaluate(&cols)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rows-versus-columns identity on an `n × n` matrix of variables.
pub fn is_medial<R: Scalar>(p: &SparsePoly<R>) -> Result<(bool, MedialMethod), PolyError> {
    if p.nvars() <= MEDIAL_SYMBOLIC_MAX {
        Ok((medial_symbolic(p)?, MedialMethod::Symbolic))
    } else {
        Ok((
            medial_sampled(p, MEDIAL_SAMPLES, MEDIAL_SEED)?,
            MedialMethod::Sampled {
                samples: MEDIAL_SAMPLES,
                seed: MEDIAL_SEED,
            },
        ))
    }
}

// ------------------------------------------------------------ reducibility

/// A binary operation `x ∘ y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BinaryOp<R: Scalar> {
    Constant(R),
    LeftZero,
    RightZero,
    /// `x + y + c0`
    ShiftedSum(R),
    /// `a0·x·y`
    ScaledProduct(R),
    /// `−b + a(x + b)(y + b)`
    ShiftedProduct {
        a: R,
        b: R::Frac,
    },
}

impl<R: Scalar> BinaryOp<R> {
    pub fn as_poly(&self) -> Result<SparsePoly<R>, StructureError> {
        let x = SparsePoly::var(2, 1)?;
        let y = SparsePoly::var(2, 2)?;
        Ok(match self {
            BinaryOp::Constant(c) => SparsePoly::constant(2, c.clone()),
            BinaryOp::LeftZero => x,
            BinaryOp::RightZero => y,
            BinaryOp::ShiftedSum(c0) => &(&x + &y) + &SparsePoly::constant(2, c0.clone()),
            BinaryOp::ScaledProduct(a0) => (&x * &y).scale(a0),
            BinaryOp::ShiftedProduct { a, b } => reconstruct(
                &Classification::ShiftedProduct {
                    a: a.clone(),
                    b: b.clone(),
                },
                2,
            )?,
        })
    }

    /// `x_1 ∘ x_2 ∘ ... ∘ x_n`, bracketed from the left.
    pub fn iterate(&self, n: usize) -> Result<SparsePoly<R>, StructureError> {
        let op = self.as_poly()?;
        let mut acc = SparsePoly::var(n, 1)?;
        for j in 2..=n {
            acc = op.substitute(&[acc, SparsePoly::var(n, j)?])?;
        }
        Ok(acc)
    }
}

impl<R: Scalar> fmt::Display for BinaryOp<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered = self
            .as_poly()
            .map(|p| p.to_string().replace("x1", "x").replace("x2", "y"))
            .map_err(|_| fmt::Error)?;
        f.write_str(&rendered)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reducibility<R: Scalar> {
    /// Derived from `op`; `alternatives` lists other binary operations
    /// found by the same rule (e.g. the other sign of a root).
    Reducible {
        op: BinaryOp<R>,
        alternatives: Vec<BinaryOp<R>>,
    },
    Irreducible,
    /// Outside what the criteria decide.
    Undecided(String),
}

impl<R: Scalar> Reducibility<R> {
    pub fn label(&self) -> &'static str {
        match self {
            Reducibility::Reducible { .. } => "yes",
            Reducibility::Irreducible => "no",
            Reducibility::Undecided(_) => "undecided",
        }
    }
}

pub fn reducibility<R: Scalar>(
    cls: &Classification<R>,
    n: usize,
) -> Result<Reducibility<R>, StructureError> {
    let single = |op| Reducibility::Reducible {
        op,
        alternatives: Vec::new(),
    };
    Ok(match cls {
        Classification::NotAssociative(_) => return Err(StructureError::NotAssociative),
        Classification::Constant(c) => single(BinaryOp::Constant(c.clone())),
        Classification::LeftProjection => single(BinaryOp::LeftZero),
        Classification::RightProjection => single(BinaryOp::RightZero),
        Classification::TranslatedSum(c) => {
            let k = R::from_i64((n - 1) as i64);
            match c.exact_div(&k).ok().flatten() {
                Some(c0) => single(BinaryOp::ShiftedSum(c0)),
                None => Reducibility::Irreducible,
            }
        }
        Classification::TwistedSum(_) => Reducibility::Irreducible,
        Classification::ShiftedProduct { a, b } if n == 2 => {
            if b.is_zero() {
                single(BinaryOp::ScaledProduct(a.clone()))
            } else {
                single(BinaryOp::ShiftedProduct {
                    a: a.clone(),
                    b: b.clone(),
                })
            }
        }
        Classification::ShiftedProduct { a, b } => {
            if !b.is_zero() {
                return Ok(Reducibility::Undecided(
                    "b != 0 is outside the stated criterion, which covers b = 0 only".into(),
                ));
            }
            let mut roots = a
                .nth_roots((n - 1) as u32)
                .into_iter()
                .map(BinaryOp::ScaledProduct);
            match roots.next() {
                Some(op) => Reducibility::Reducible {
                    op,
                    alternatives: roots.collect(),
                },
                None if R::RING.is_field() => Reducibility::Irreducible,
                None => Reducibility::Undecided(format!(
                    "{a} has no {}-th root in {}; the criterion is stated over fields",
                    n - 1,
                    R::RING
                )),
            }
        }
    })
}

// ---------------------------------------------------------------- report

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport<R: Scalar> {
    pub group: GroupStatus,
    pub skew: Option<SkewMap<R>>,
    pub skew_verified: Option<bool>,
    pub skew_endomorphism: Option<bool>,
    pub medial: bool,
    pub medial_method: MedialMethod,
    pub reducibility: Reducibility<R>,
    /// Whether every returned binary operation iterates back to `p`.
    pub reduction_verified: Option<bool>,
    pub notes: Vec<String>,
}

pub fn analyze<R: Scalar>(
    p: &SparsePoly<R>,
    cls: &Classification<R>,
) -> Result<StructureReport<R>, StructureError> {
    let n = p.nvars();
    let group = group_status(cls, n)?;
    let mut notes: Vec<String> = group.note.iter().cloned().collect();
    let (skew_verified, skew_endomorphism) = match &group.skew {
        Some(s) => (Some(verify_skew(p, s)?), Some(skew_is_endomorphism(p, s)?)),
        None => (None, None),
    };
    let (medial, medial_method) = is_medial(p)?;
    let reducibility = reducibility(cls, n)?;
    let reduction_verified = match &reducibility {
        Reducibility::Reducible { op, alternatives } => {
            let mut ok = true;
            for o in std::iter::once(op).chain(alternatives) {
                ok &= o.iterate(n)? == *p;
            }
            Some(ok)
        }
        Reducibility::Undecided(note) => {
            notes.push(note.clone());
            None
        }
        Reducibility::Irreducible => None,
    };
    Ok(StructureReport {
        group: group.status,
        skew: group.skew,
        skew_verified,
        skew_endomorphism,
        medial,
        medial_method,
        reducibility,
        reduction_verified,
        notes,
    })
}
