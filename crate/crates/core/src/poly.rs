//! Sparse multivariate polynomials and the subset-indexed multilinear form.
//!
//! Variables are numbered from 1 (`x1`, `x2`, ...) in every public API.
//! A subset `J ⊆ [n]` is a bit set with bit `j - 1` standing for `x_j`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::ring::Coeff;

/// Bit-set encoding of a subset of `[n]`.
pub type Subset = u64;

/// Largest arity a bit-set subset can index.
pub const MAX_VARS: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable index {index} out of range 1..={nvars}")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("expected {expected} values, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },
    #[error("arity {0} exceeds the supported maximum of {MAX_VARS}")]
    ArityTooLarge(usize),
    #[error("subset {subset:#b} is not contained in [{n}]")]
    SubsetOutOfRange { subset: Subset, n: usize },
    #[error("not a permutation of [{0}]")]
    NotAPermutation(usize),
}

pub fn full_set(n: usize) -> Subset {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn subset_size(s: Subset) -> u32 {
    s.count_ones()
}

/// Members of a subset as 1-based indices, ascending.
pub fn subset_members(s: Subset) -> Vec<usize> {
    (0..64).filter(|b| s >> b & 1 == 1).map(|b| b + 1).collect()
}

pub fn subset_from_members(members: &[usize]) -> Subset {
    members.iter().fold(0, |acc, &j| acc | 1 << (j - 1))
}

// --------------------------------------------------------------- monomials

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then the exponent of `x1`, then `x2`, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    /// The support as a subset, when every exponent is at most one.
    pub fn as_subset(&self) -> Option<Subset> {
        if !self.is_squarefree() || self.0.len() > 64 {
            return None;
        }
        Some(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e == 1)
                .fold(0, |acc, (j, _)| acc | 1 << j),
        )
    }

    pub fn from_subset(s: Subset, nvars: usize) -> Self {
        Monomial((0..nvars).map(|j| (s >> j & 1) as u32).collect())
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", j + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

// ------------------------------------------------------------ permutations

/// Bijection of `[n]`; applying it to a polynomial replaces `x_i` with
/// `x_{σ(i)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationMap {
    images: Vec<usize>,
}

impl PermutationMap {
    /// `images[i - 1] = σ(i)`, 1-based.
    pub fn new(images: Vec<usize>) -> Result<Self, PolyError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img == 0 || img > n || seen[img - 1] {
                return Err(PolyError::NotAPermutation(n));
            }
            seen[img - 1] = true;
        }
        Ok(PermutationMap { images })
    }

    pub fn identity(n: usize) -> Self {
        PermutationMap {
            images: (1..=n).collect(),
        }
    }

    /// Swap of `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self, PolyError> {
        let mut images: Vec<usize> = (1..=n).collect();
        if a == 0 || b == 0 || a > n || b > n {
            return Err(PolyError::NotAPermutation(n));
        }
        images.swap(a - 1, b - 1);
        Ok(PermutationMap { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PermutationMap) -> PermutationMap {
        PermutationMap {
            images: other.images.iter().map(|&i| self.apply(i)).collect(),
        }
    }
}

// ----------------------------------------------------------- sparse polys

/// Polynomial in `nvars` variables stored as exponent vector → nonzero
/// coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly<R> {
    nvars: usize,
    terms: BTreeMap<Monomial, R>,
}

impl<R: Coeff> SparsePoly<R> {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: R) -> Self {
        let mut p = SparsePoly::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// The variable `x_index` (1-based).
    pub fn var(nvars: usize, index: usize) -> Result<Self, PolyError> {
        if index == 0 || index > nvars {
            return Err(PolyError::VariableOutOfRange { index, nvars });
        }
        let mut e = vec![0; nvars];
        e[index - 1] = 1;
        let mut p = SparsePoly::zero(nvars);
        p.add_term(Monomial(e), R::one());
        Ok(p)
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, R)>,
    ) -> Result<Self, PolyError> {
        let mut p = SparsePoly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(PolyError::ArityMismatch {
                    expected: nvars,
                    actual: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    /// Adds `c·m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: R) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn degree_in_var(&self, index: usize) -> Result<u32, PolyError> {
        if index == 0 || index > self.nvars {
            return Err(PolyError::VariableOutOfRange {
                index,
                nvars: self.nvars,
            });
        }
        Ok(self.terms.keys().map(|m| m.0[index - 1]).max().unwrap_or(0))
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.nvars];
        for m in self.terms.keys() {
            for (dj, &e) in d.iter_mut().zip(&m.0) {
                *dj = (*dj).max(e);
            }
        }
        d
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = SparsePoly::zero(self.nvars);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = SparsePoly::constant(self.nvars, R::one());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[R]) -> Result<R, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                actual: point.len(),
            });
        }
        let mut total = R::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    term = term * x.pow_u32(e);
                }
            }
            total = total + term;
        }
        Ok(total)
    }

    /// Replaces every `x_j` by `args[j - 1]`; all arguments share one arity,
    /// which becomes the arity of the result.
    pub fn substitute(&self, args: &[SparsePoly<R>]) -> Result<SparsePoly<R>, PolyError> {
        if args.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                actual: args.len(),
            });
        }
        let target = args.first().map_or(0, |a| a.nvars);
        if let Some(bad) = args.iter().find(|a| a.nvars != target) {
            return Err(PolyError::ArityMismatch {
                expected: target,
                actual: bad.nvars,
            });
        }
        let degrees = self.degrees();
        let powers: Vec<Vec<SparsePoly<R>>> = args
            .iter()
            .zip(&degrees)
            .map(|(a, &d)| {
                let mut ps = vec![SparsePoly::constant(target, R::one())];
                for k in 1..=d as usize {
                    let next = &ps[k - 1] * a;
                    ps.push(next);
                }
                ps
            })
            .collect();
        let mut out = SparsePoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = SparsePoly::constant(target, c.clone());
            for (j, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = &term * &powers[j][e as usize];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    pub fn permute_vars(&self, sigma: &PermutationMap) -> Result<Self, PolyError> {
        if sigma.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                actual: sigma.len(),
            });
        }
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; self.nvars];
            for (i, &ei) in m.0.iter().enumerate() {
                e[sigma.apply(i + 1) - 1] = ei;
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> SparsePoly<S> {
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// The subset-indexed form, when every per-variable degree is ≤ 1.
    pub fn to_multilinear(&self) -> Option<MultilinearPoly<R>> {
        if self.nvars > MAX_VARS {
            return None;
        }
        let mut coeffs = BTreeMap::new();
        for (m, c) in &self.terms {
            coeffs.insert(m.as_subset()?, c.clone());
        }
        Some(MultilinearPoly {
            n: self.nvars,
            coeffs,
        })
    }
}

fn merge<R: Coeff>(a: &SparsePoly<R>, b: &SparsePoly<R>, negate: bool) -> SparsePoly<R> {
    assert_eq!(a.nvars, b.nvars, "polynomial arity mismatch");
    let mut out = a.clone();
    for (m, c) in &b.terms {
        let c = if negate { -c.clone() } else { c.clone() };
        out.add_term(m.clone(), c);
    }
    out
}

impl<R: Coeff> Add for &SparsePoly<R> {
    type Output = SparsePoly<R>;
    fn add(self, rhs: Self) -> SparsePoly<R> {
        merge(self, rhs, false)
    }
}

impl<R: Coeff> Sub for &SparsePoly<R> {
    type Output = SparsePoly<R>;
    fn sub(self, rhs: Self) -> SparsePoly<R> {
        merge(self, rhs, true)
    }
}

impl<R: Coeff> Mul for &SparsePoly<R> {
    type Output = SparsePoly<R>;
    fn mul(self, rhs: Self) -> SparsePoly<R> {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = SparsePoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<R: Coeff> Neg for &SparsePoly<R> {
    type Output = SparsePoly<R>;
    fn neg(self) -> SparsePoly<R> {
        self.map_coeffs(|c| -c.clone())
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl<R: Coeff> $tr for SparsePoly<R> {
            type Output = SparsePoly<R>;
            fn $method(self, rhs: Self) -> SparsePoly<R> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// Canonical text: terms in descending graded-lex order, `*` between
/// factors, `^` for powers. The output is accepted by the parser.
impl<R: Coeff> fmt::Display for SparsePoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let repr = c.coeff_repr();
            match (idx == 0, repr.negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            let constant = m.degree() == 0;
            if constant {
                f.write_str(&repr.magnitude)?;
            } else if repr.is_one {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", repr.magnitude)?;
            }
        }
        Ok(())
    }
}

// --------------------------------------------------------- multilinear form

/// `Σ_{J ⊆ [n]} c_J ∏_{j ∈ J} x_j`, zero coefficients omitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultilinearPoly<R> {
    n: usize,
    coeffs: BTreeMap<Subset, R>,
}

impl<R: Coeff> MultilinearPoly<R> {
    pub fn zero(n: usize) -> Result<Self, PolyError> {
        if n > MAX_VARS {
            return Err(PolyError::ArityTooLarge(n));
        }
        Ok(MultilinearPoly {
            n,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn from_coeffs(
        n: usize,
        coeffs: impl IntoIterator<Item = (Subset, R)>,
    ) -> Result<Self, PolyError> {
        let mut p = MultilinearPoly::zero(n)?;
        for (s, c) in coeffs {
            p.add_coeff(s, c)?;
        }
        Ok(p)
    }

    /// Coefficient table indexed by the subset bit pattern, length `2^n`.
    pub fn from_table(n: usize, table: &[R]) -> Result<Self, PolyError> {
        if table.len() != 1usize << n {
            return Err(PolyError::ArityMismatch {
                expected: 1 << n,
                actual: table.len(),
            });
        }
        MultilinearPoly::from_coeffs(
            n,
            table
                .iter()
                .enumerate()
                .map(|(s, c)| (s as Subset, c.clone())),
        )
    }

    pub fn add_coeff(&mut self, s: Subset, c: R) -> Result<(), PolyError> {
        if s & !full_set(self.n) != 0 {
            return Err(PolyError::SubsetOutOfRange {
                subset: s,
                n: self.n,
            });
        }
        let sum = self.coeff(s) + c;
        if sum.is_zero() {
            self.coeffs.remove(&s);
        } else {
            self.coeffs.insert(s, sum);
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, s: Subset) -> R {
        self.coeffs.get(&s).cloned().unwrap_or_else(R::zero)
    }

    /// Nonzero coefficients in ascending subset order.
    pub fn support(&self) -> impl Iterator<Item = (Subset, &R)> {
        self.coeffs.iter().map(|(s, c)| (*s, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.coeffs
            .keys()
            .map(|s| s.count_ones())
            .max()
            .unwrap_or(0)
    }

    pub fn evaluate(&self, point: &[R]) -> Result<R, PolyError> {
        if point.len() != self.n {
            return Err(PolyError::ArityMismatch {
                expected: self.n,
                actual: point.len(),
            });
        }
        let mut total = R::zero();
        for (&s, c) in &self.coeffs {
            let mut term = c.clone();
            for (j, x) in point.iter().enumerate() {
                if s >> j & 1 == 1 {
                    term = term * x.clone();
                }
            }
            total = total + term;
        }
        Ok(total)
    }

    /// Value at the indicator point of `t`: the sum of `c_J` over `J ⊆ t`.
    pub fn value_at_indicator(&self, t: Subset) -> R {
        self.coeffs
            .iter()
            .filter(|(&s, _)| s & !t == 0)
            .fold(R::zero(), |acc, (_, c)| acc + c.clone())
    }

    pub fn to_sparse(&self) -> SparsePoly<R> {
        let mut p = SparsePoly::zero(self.n);
        for (&s, c) in &self.coeffs {
            p.add_term(Monomial::from_subset(s, self.n), c.clone());
        }
        p
    }

    /// True iff `c_J` depends only on `|J|`.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric_coeffs().is_some()
    }

    /// `c_0, ..., c_n` with `c_J = c_{|J|}` when the form is symmetric.
    pub fn symmetric_coeffs(&self) -> Option<Vec<R>> {
        let mut by_size: Vec<Option<(R, u128)>> = vec![None; self.n + 1];
        for (&s, c) in &self.coeffs {
            let k = s.count_ones() as usize;
            match &mut by_size[k] {
                Some((v, count)) => {
                    if v != c {
                        return None;
                    }
                    *count += 1;
                }
                slot @ None => *slot = Some((c.clone(), 1)),
            }
        }
        by_size
            .into_iter()
            .enumerate()
            .map(|(k, entry)| match entry {
                None => Some(R::zero()),
                Some((v, count)) => (count == binomial(self.n, k)).then_some(v),
            })
            .collect()
    }

    pub fn permute_vars(&self, sigma: &PermutationMap) -> Result<Self, PolyError> {
        if sigma.len() != self.n {
            return Err(PolyError::ArityMismatch {
                expected: self.n,
                actual: sigma.len(),
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&s, c)| {
                let image = (1..=self.n)
                    .filter(|j| s >> (j - 1) & 1 == 1)
                    .fold(0, |acc, j| acc | 1 << (sigma.apply(j) - 1));
                (image, c.clone())
            })
            .collect();
        Ok(MultilinearPoly { n: self.n, coeffs })
    }

    /// Values on `{0,1}^n`, indexed by the bit pattern of the point.
    pub fn grid_values(&self) -> Vec<R> {
        (0..1u64 << self.n)
            .map(|t| self.value_at_indicator(t))
            .collect()
    }

    /// The unique multilinear polynomial with the given values on `{0,1}^n`,
    /// by inclusion–exclusion: `c_J = Σ_{T ⊆ J} (−1)^{|J∖T|} v(T)`.
    pub fn interpolate(n: usize, values: &[R]) -> Result<Self, PolyError> {
        if n > MAX_VARS {
            return Err(PolyError::ArityTooLarge(n));
        }
        if values.len() != 1usize << n {
            return Err(PolyError::ArityMismatch {
                expected: 1 << n,
                actual: values.len(),
            });
        }
        let mut p = MultilinearPoly::zero(n)?;
        for j in 0..1u64 << n {
            let mut c = R::zero();
            let mut t = j;
            loop {
                let v = values[t as usize].clone();
                if (j & !t).count_ones() % 2 == 0 {
                    c = c + v;
                } else {
                    c = c - v;
                }
                if t == 0 {
                    break;
                }
                t = (t - 1) & j;
            }
            if !c.is_zero() {
                p.coeffs.insert(j, c);
            }
        }
        Ok(p)
    }
}

/// `P_k`: coefficient 1 on every `k`-subset of `[n]`.
pub fn elementary_symmetric<R: Coeff>(n: usize, k: usize) -> Result<MultilinearPoly<R>, PolyError> {
    let mut p = MultilinearPoly::zero(n)?;
    if k > n {
        return Ok(p);
    }
    for s in subsets_of_size(n, k) {
        p.coeffs.insert(s, R::one());
    }
    Ok(p)
}

/// All `k`-subsets of `[n]` in ascending numeric order.
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = Subset> {
    let limit = full_set(n);
    let mut next = if k > n { None } else { Some(full_set(k)) };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack.
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let succ = (((r ^ cur) >> 2) / c) | r;
            (succ & !limit == 0 && succ > cur).then_some(succ)
        };
        Some(cur)
    })
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
