//! Exact coefficient rings: ℤ, ℚ and the Gaussian integers ℤ[i], together
//! with their fraction fields.
//!
//! The polynomial machinery is generic over [`Coeff`]; the decision and
//! classification procedures additionally need the base-ring operations of
//! [`Scalar`] (exact division, fraction-field embedding, torsion units).

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingId, RingId),
    #[error("unknown ring `{0}` (expected z, q or zi)")]
    UnknownRing(String),
}

/// The shipped base rings. Each is an infinite commutative integral domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingId {
    Integers,
    Rationals,
    GaussianIntegers,
}

impl RingId {
    pub fn is_field(self) -> bool {
        matches!(self, RingId::Rationals)
    }

    /// Short flag spelling: `z`, `q` or `zi`.
    pub fn short_name(self) -> &'static str {
        match self {
            RingId::Integers => "z",
            RingId::Rationals => "q",
            RingId::GaussianIntegers => "zi",
        }
    }
}

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RingId::Integers => "Z",
            RingId::Rationals => "Q",
            RingId::GaussianIntegers => "Z[i]",
        })
    }
}

impl FromStr for RingId {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "z" | "Z" => Ok(RingId::Integers),
            "q" | "Q" => Ok(RingId::Rationals),
            "zi" | "Z[i]" => Ok(RingId::GaussianIntegers),
            other => Err(RingError::UnknownRing(other.to_string())),
        }
    }
}

/// How a value is written when it multiplies a monomial in canonical
/// polynomial text. `magnitude` must parse as a single factor of a product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffRepr {
    pub negative: bool,
    pub magnitude: String,
    pub is_one: bool,
}

/// Commutative ring element with canonical (representational) equality.
pub trait Coeff:
    Clone
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn coeff_repr(&self) -> CoeffRepr;

    fn pow_u32(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// A field of fractions. Division by zero panics, like `BigRational`.
pub trait Field: Coeff + Div<Output = Self> {
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

/// Base ring of an operation: one of ℤ, ℚ, ℤ[i].
pub trait Scalar: Coeff + Ord {
    const RING: RingId;
    type Frac: Field;

    fn from_bigint(value: BigInt) -> Self;

    fn from_i64(value: i64) -> Self {
        Self::from_bigint(BigInt::from(value))
    }

    /// `i` when the ring contains a square root of −1 written as a literal.
    fn imaginary_unit() -> Option<Self> {
        None
    }

    /// The quotient `self / divisor` when it lies in the ring.
    fn exact_div(&self, divisor: &Self) -> Result<Option<Self>, RingError>;

    /// Every unit of finite multiplicative order.
    fn torsion_units() -> Vec<Self>;

    fn to_frac(&self) -> Self::Frac;

    /// Inverse of [`Scalar::to_frac`] on its image.
    fn from_frac(x: &Self::Frac) -> Option<Self>;

    /// All `r` in the ring with `r^k = self`, in preference order.
    fn nth_roots(&self, k: u32) -> Vec<Self>;

    /// Normal-form test used to order roots: positive for ℤ and ℚ,
    /// first quadrant (re > 0, im ≥ 0) for ℤ[i].
    fn is_normalized(&self) -> bool;

    /// Elements of the coefficient box of half-width `bound`, ascending,
    /// or `None` where the box is not finite (ℚ).
    fn enumeration_box(bound: u32) -> Option<Vec<Self>>;

    /// Builds a sample from uniform integer draws (one per component).
    fn from_draws(draw: &mut dyn FnMut() -> i64) -> Self;
}

pub fn exact_div<R: Scalar>(a: &R, b: &R) -> Result<Option<R>, RingError> {
    a.exact_div(b)
}

pub fn in_base_ring<R: Scalar>(x: &R::Frac) -> Option<R> {
    R::from_frac(x)
}

/// All ω in the ring with ω^m = 1, including 1.
pub fn roots_of_unity<R: Scalar>(m: u32) -> Vec<R> {
    assert!(m >= 1, "root-of-unity order must be positive");
    R::torsion_units()
        .into_iter()
        .filter(|w| w.pow_u32(m).is_one())
        .collect()
}

fn order_roots<R: Scalar>(mut roots: Vec<R>) -> Vec<R> {
    roots.sort_by(|a, b| match (a.is_normalized(), b.is_normalized()) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => b.cmp(a),
    });
    roots.dedup();
    roots
}

/// Integer `k`-th roots of a nonnegative integer, if it is a perfect power.
fn exact_nth_root(value: &BigInt, k: u32) -> Option<BigInt> {
    debug_assert!(!value.is_negative());
    let r = value.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *value).then_some(r)
}

fn signed_int_roots(value: &BigInt, k: u32) -> Vec<BigInt> {
    if k == 0 {
        return Vec::new();
    }
    let Some(r) = exact_nth_root(&value.abs(), k) else {
        return Vec::new();
    };
    if value.is_negative() {
        if k % 2 == 1 {
            vec![-r]
        } else {
            Vec::new()
        }
    } else if k.is_multiple_of(2) && !r.is_zero() {
        vec![r.clone(), -r]
    } else {
        vec![r]
    }
}

// ---------------------------------------------------------------- integers

impl Coeff for BigInt {
    fn coeff_repr(&self) -> CoeffRepr {
        let magnitude = self.abs();
        CoeffRepr {
            negative: self.is_negative(),
            is_one: magnitude.is_one(),
            magnitude: magnitude.to_string(),
        }
    }
}

impl Scalar for BigInt {
    const RING: RingId = RingId::Integers;
    type Frac = BigRational;

    fn from_bigint(value: BigInt) -> Self {
        value
    }

    fn exact_div(&self, divisor: &Self) -> Result<Option<Self>, RingError> {
        if divisor.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        let (q, r) = self.div_rem(divisor);
        Ok(r.is_zero().then_some(q))
    }

    fn torsion_units() -> Vec<Self> {
        vec![BigInt::one(), -BigInt::one()]
    }

    fn to_frac(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }

    fn from_frac(x: &BigRational) -> Option<Self> {
        x.is_integer().then(|| x.to_integer())
    }

    fn nth_roots(&self, k: u32) -> Vec<Self> {
        order_roots(signed_int_roots(self, k))
    }

    fn is_normalized(&self) -> bool {
        self.is_positive()
    }

    fn enumeration_box(bound: u32) -> Option<Vec<Self>> {
        let b = i64::from(bound);
        Some((-b..=b).map(BigInt::from).collect())
    }

    fn from_draws(draw: &mut dyn FnMut() -> i64) -> Self {
        BigInt::from(draw())
    }
}

// --------------------------------------------------------------- rationals

impl Coeff for BigRational {
    fn coeff_repr(&self) -> CoeffRepr {
        let magnitude = self.abs();
        CoeffRepr {
            negative: self.is_negative(),
            is_one: magnitude.is_one(),
            magnitude: magnitude.to_string(),
        }
    }
}

impl Field for BigRational {}

impl Scalar for BigRational {
    const RING: RingId = RingId::Rationals;
    type Frac = BigRational;

    fn from_bigint(value: BigInt) -> Self {
        BigRational::from_integer(value)
    }

    fn exact_div(&self, divisor: &Self) -> Result<Option<Self>, RingError> {
        if divisor.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(Some(self / divisor))
    }

    fn torsion_units() -> Vec<Self> {
        vec![BigRational::one(), -BigRational::one()]
    }

    fn to_frac(&self) -> BigRational {
        self.clone()
    }

    fn from_frac(x: &BigRational) -> Option<Self> {
        Some(x.clone())
    }

    fn nth_roots(&self, k: u32) -> Vec<Self> {
        // Reduced form with positive denominator: roots come from the parts.
        let dens = signed_int_roots(self.denom(), k);
        let Some(den) = dens.into_iter().find(|d| d.is_positive()) else {
            return Vec::new();
        };
        let roots = signed_int_roots(self.numer(), k)
            .into_iter()
            .map(|num| BigRational::new(num, den.clone()))
            .collect();
        order_roots(roots)
    }

    fn is_normalized(&self) -> bool {
        self.is_positive()
    }

    fn enumeration_box(_bound: u32) -> Option<Vec<Self>> {
        None
    }

    fn from_draws(draw: &mut dyn FnMut() -> i64) -> Self {
        BigRational::from_integer(BigInt::from(draw()))
    }
}

// -------------------------------------------------------- gaussian integers

/// `re + im·i` with arbitrary-precision parts. Ordered lexicographically by
/// `(re, im)`; the order only serves canonical enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianInteger {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInteger {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInteger {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn i() -> Self {
        GaussianInteger::new(0, 1)
    }

    pub fn conj(&self) -> Self {
        GaussianInteger {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Euclidean norm re² + im².
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    fn is_first_quadrant(&self) -> bool {
        self.re.is_positive() && !self.im.is_negative()
    }

    /// The unit `u` with `u·self` in the first quadrant (1 for zero).
    fn normalizing_unit(&self) -> Self {
        let mut unit = GaussianInteger::one();
        if self.is_zero() {
            return unit;
        }
        let mut z = self.clone();
        while !z.is_first_quadrant() {
            z = z * GaussianInteger::i();
            unit = unit * GaussianInteger::i();
        }
        unit
    }

    /// Quotient rounded to the nearest Gaussian integer, so the remainder has
    /// strictly smaller norm than the divisor.
    fn div_round(&self, divisor: &Self) -> Self {
        let num = self.clone() * divisor.conj();
        let n = divisor.norm();
        let round = |x: &BigInt| (x * BigInt::from(2) + &n).div_floor(&(&n * BigInt::from(2)));
        GaussianInteger {
            re: round(&num.re),
            im: round(&num.im),
        }
    }

    /// Greatest common divisor, normalized to the first quadrant.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let q = a.div_round(&b);
            let r = a - q * b.clone();
            a = b;
            b = r;
        }
        let u = a.normalizing_unit();
        a * u
    }
}

impl fmt::Display for GaussianInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &BigInt| -> String {
            if im.is_one() {
                "i".to_string()
            } else if *im == -BigInt::one() {
                "-i".to_string()
            } else {
                format!("{im}i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => f.write_str(&im_part(&self.im)),
            (false, false) => {
                let im = im_part(&self.im);
                if im.starts_with('-') {
                    write!(f, "{}{}", self.re, im)
                } else {
                    write!(f, "{}+{}", self.re, im)
                }
            }
        }
    }
}

impl Zero for GaussianInteger {
    fn zero() -> Self {
        GaussianInteger::new(0, 0)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianInteger {
    fn one() -> Self {
        GaussianInteger::new(1, 0)
    }
}

impl Add for GaussianInteger {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GaussianInteger {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussianInteger {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GaussianInteger {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussianInteger {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        GaussianInteger {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussianInteger {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianInteger {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Coeff for GaussianInteger {
    fn coeff_repr(&self) -> CoeffRepr {
        if self.im.is_zero() {
            let m = self.re.abs();
            return CoeffRepr {
                negative: self.re.is_negative(),
                is_one: m.is_one(),
                magnitude: m.to_string(),
            };
        }
        if self.re.is_zero() {
            let m = self.im.abs();
            let magnitude = if m.is_one() {
                "i".to_string()
            } else {
                format!("{m}*i")
            };
            return CoeffRepr {
                negative: self.im.is_negative(),
                is_one: false,
                magnitude,
            };
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        let m = self.im.abs();
        let im = if m.is_one() {
            "i".to_string()
        } else {
            format!("{m}*i")
        };
        CoeffRepr {
            negative: false,
            is_one: false,
            magnitude: format!("({}{sign}{im})", self.re),
        }
    }
}

impl Scalar for GaussianInteger {
    const RING: RingId = RingId::GaussianIntegers;
    type Frac = GaussianRational;

    fn from_bigint(value: BigInt) -> Self {
        GaussianInteger {
            re: value,
            im: BigInt::zero(),
        }
    }

    fn imaginary_unit() -> Option<Self> {
        Some(GaussianInteger::i())
    }

    fn exact_div(&self, divisor: &Self) -> Result<Option<Self>, RingError> {
        if divisor.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        let num = self.clone() * divisor.conj();
        let n = divisor.norm();
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        Ok((rr.is_zero() && ri.is_zero()).then_some(GaussianInteger { re: qr, im: qi }))
    }

    fn torsion_units() -> Vec<Self> {
        vec![
            GaussianInteger::new(1, 0),
            GaussianInteger::new(0, 1),
            GaussianInteger::new(-1, 0),
            GaussianInteger::new(0, -1),
        ]
    }

    fn to_frac(&self) -> GaussianRational {
        GaussianRational::from_integer(self.clone())
    }

    fn from_frac(x: &GaussianRational) -> Option<Self> {
        x.den.is_one().then(|| x.num.clone())
    }

    fn nth_roots(&self, k: u32) -> Vec<Self> {
        if k == 0 {
            return Vec::new();
        }
        if self.is_zero() {
            return vec![GaussianInteger::zero()];
        }
        // N(z)^k = N(self) pins the norm of every candidate root.
        let Some(target) = exact_nth_root(&self.norm(), k) else {
            return Vec::new();
        };
        let limit = target.sqrt();
        let mut roots = Vec::new();
        let mut re = -limit.clone();
        while re <= limit {
            let rest = &target - &re * &re;
            if let Some(im) = exact_nth_root(&rest, 2) {
                for cand in [
                    GaussianInteger::new(re.clone(), im.clone()),
                    GaussianInteger::new(re.clone(), -im.clone()),
                ] {
                    if cand.pow_u32(k) == *self {
                        roots.push(cand);
                    }
                }
            }
            re += 1;
        }
        order_roots(roots)
    }

    fn is_normalized(&self) -> bool {
        self.is_first_quadrant()
    }

    fn enumeration_box(bound: u32) -> Option<Vec<Self>> {
        let b = i64::from(bound);
        Some(
            (-b..=b)
                .flat_map(|re| (-b..=b).map(move |im| GaussianInteger::new(re, im)))
                .collect(),
        )
    }

    fn from_draws(draw: &mut dyn FnMut() -> i64) -> Self {
        let re = draw();
        let im = draw();
        GaussianInteger::new(re, im)
    }
}

/// Element of ℚ(i) as a reduced quotient of Gaussian integers whose
/// denominator lies in the first quadrant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    num: GaussianInteger,
    den: GaussianInteger,
}

impl GaussianRational {
    pub fn new(num: GaussianInteger, den: GaussianInteger) -> Result<Self, RingError> {
        if den.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(GaussianRational::zero());
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g)?.expect("gcd divides numerator");
        let den = den.exact_div(&g)?.expect("gcd divides denominator");
        let u = den.normalizing_unit();
        Ok(GaussianRational {
            num: num * u.clone(),
            den: den * u,
        })
    }

    pub fn from_integer(value: GaussianInteger) -> Self {
        GaussianRational {
            num: value,
            den: GaussianInteger::one(),
        }
    }

    pub fn numer(&self) -> &GaussianInteger {
        &self.num
    }

    pub fn denom(&self) -> &GaussianInteger {
        &self.den
    }

    fn build(num: GaussianInteger, den: GaussianInteger) -> Self {
        GaussianRational::new(num, den).expect("nonzero denominator")
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compound = |z: &GaussianInteger| !z.re.is_zero() && !z.im.is_zero();
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if compound(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if compound(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::from_integer(GaussianInteger::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::from_integer(GaussianInteger::one())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GaussianRational::build(
            self.num * rhs.den.clone() + rhs.num * self.den.clone(),
            self.den * rhs.den,
        )
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        GaussianRational::build(self.num * rhs.num, self.den * rhs.den)
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        GaussianRational::build(self.num * rhs.den, self.den * rhs.num)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Coeff for GaussianRational {
    fn coeff_repr(&self) -> CoeffRepr {
        CoeffRepr {
            negative: false,
            is_one: self.is_one(),
            magnitude: format!("({self})"),
        }
    }
}

impl Field for GaussianRational {}

// ------------------------------------------------------ runtime-tagged view

/// A base-ring element tagged with its ring, for callers that select the
/// ring at run time.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingElement {
    Integer(BigInt),
    Rational(BigRational),
    Gaussian(GaussianInteger),
}

impl RingElement {
    pub fn ring(&self) -> RingId {
        match self {
            RingElement::Integer(_) => RingId::Integers,
            RingElement::Rational(_) => RingId::Rationals,
            RingElement::Gaussian(_) => RingId::GaussianIntegers,
        }
    }

    pub fn exact_div(&self, divisor: &RingElement) -> Result<Option<RingElement>, RingError> {
        match (self, divisor) {
            (RingElement::Integer(a), RingElement::Integer(b)) => {
                Ok(a.exact_div(b)?.map(RingElement::Integer))
            }
            (RingElement::Rational(a), RingElement::Rational(b)) => {
                Ok(a.exact_div(b)?.map(RingElement::Rational))
            }
            (RingElement::Gaussian(a), RingElement::Gaussian(b)) => {
                Ok(a.exact_div(b)?.map(RingElement::Gaussian))
            }
            (a, b) => Err(RingError::RingMismatch(a.ring(), b.ring())),
        }
    }

    pub fn roots_of_unity(ring: RingId, m: u32) -> Vec<RingElement> {
        match ring {
            RingId::Integers => roots_of_unity::<BigInt>(m)
                .into_iter()
                .map(RingElement::Integer)
                .collect(),
            RingId::Rationals => roots_of_unity::<BigRational>(m)
                .into_iter()
                .map(RingElement::Rational)
                .collect(),
            RingId::GaussianIntegers => roots_of_unity::<GaussianInteger>(m)
                .into_iter()
                .map(RingElement::Gaussian)
                .collect(),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Integer(v) => write!(f, "{v}"),
            RingElement::Rational(v) => write!(f, "{v}"),
            RingElement::Gaussian(v) => write!(f, "{v}"),
        }
    }
}
