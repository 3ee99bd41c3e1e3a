//! Classification of associative polynomial operations into the six
//! families:
//!
//! | clause | family            | polynomial                      |
//! |--------|-------------------|---------------------------------|
//! | i      | constant          | `c`                             |
//! | ii     | left projection   | `x1`                            |
//! | iii    | right projection  | `xn`                            |
//! | iv     | translated sum    | `c + Σ x_i`                     |
//! | v      | twisted sum       | `Σ ω^{i-1} x_i`, ω ≠ 1, ω^{n-1}=1, n ≥ 3 |
//! | vi     | shifted product   | `−b + a ∏ (x_i + b)`, b ∈ Frac(R) |

use num_traits::{One, Zero};
use thiserror::Error;

use crate::assoc::{is_associative, AssocError, Witness};
use crate::poly::{subsets_of_size, MultilinearPoly, PolyError, SparsePoly};
use crate::ring::{Coeff, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Assoc(#[from] AssocError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification<R: Scalar> {
    Constant(R),
    LeftProjection,
    RightProjection,
    TranslatedSum(R),
    TwistedSum(R),
    ShiftedProduct { a: R, b: R::Frac },
    NotAssociative(Witness<R>),
}

impl<R: Scalar> Classification<R> {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::Constant(_) => "constant",
            Classification::LeftProjection => "left-projection",
            Classification::RightProjection => "right-projection",
            Classification::TranslatedSum(_) => "translated-sum",
            Classification::TwistedSum(_) => "twisted-sum",
            Classification::ShiftedProduct { .. } => "shifted-product",
            Classification::NotAssociative(_) => "not-associative",
        }
    }

    /// Roman numeral of the matching family, `None` when not associative.
    pub fn clause(&self) -> Option<&'static str> {
        Some(match self {
            Classification::Constant(_) => "i",
            Classification::LeftProjection => "ii",
            Classification::RightProjection => "iii",
            Classification::TranslatedSum(_) => "iv",
            Classification::TwistedSum(_) => "v",
            Classification::ShiftedProduct { .. } => "vi",
            Classification::NotAssociative(_) => return None,
        })
    }

    pub fn is_associative(&self) -> bool {
        !matches!(self, Classification::NotAssociative(_))
    }

    /// Parameters as `name=value` pairs.
    pub fn params(&self) -> Vec<(&'static str, String)> {
        match self {
            Classification::Constant(c) | Classification::TranslatedSum(c) => {
                vec![("c", c.to_string())]
            }
            Classification::TwistedSum(w) => vec![("omega", w.to_string())],
            Classification::ShiftedProduct { a, b } => {
                vec![("a", a.to_string()), ("b", b.to_string())]
            }
            _ => Vec::new(),
        }
    }
}

/// `c_0, ..., c_n`: the coefficients of `P_0, ..., P_n` in a symmetric
/// multilinear polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricCoeffs<R> {
    coeffs: Vec<R>,
}

impl<R: Coeff> SymmetricCoeffs<R> {
    pub fn new(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "need at least c_0");
        SymmetricCoeffs { coeffs }
    }

    pub fn from_multilinear(p: &MultilinearPoly<R>) -> Option<Self> {
        p.symmetric_coeffs().map(SymmetricCoeffs::new)
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn as_slice(&self) -> &[R] {
        &self.coeffs
    }

    /// `Σ c_k P_k`.
    pub fn to_multilinear(&self) -> Result<MultilinearPoly<R>, PolyError> {
        let n = self.arity();
        let mut p = MultilinearPoly::zero(n)?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for s in subsets_of_size(n, k) {
                p.add_coeff(s, c.clone())?;
            }
        }
        Ok(p)
    }
}

/// Checks `c_{j+1} c_k + c_j δ_{k,0} = c_j c_{k+1}` for `j ∈ [n-1]`,
/// `k ∈ {0, ..., n-1}`.
pub fn verify_condpol<R: Coeff>(coeffs: &SymmetricCoeffs<R>) -> bool {
    let n = coeffs.arity();
    let c = coeffs.as_slice();
    (1..n).all(|j| {
        (0..n).all(|k| {
            let mut lhs = c[j + 1].clone() * c[k].clone();
            if k == 0 {
                lhs = lhs + c[j].clone();
            }
            lhs == c[j].clone() * c[k + 1].clone()
        })
    })
}

/// Why a multilinear polynomial is not a shifted product.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Type6Rejection {
    #[error("coefficients are not symmetric")]
    NotSymmetric,
    #[error("top coefficient c_n is zero")]
    ZeroLeadingCoefficient,
    /// `c_k ≠ a·b^{n-k}`.
    #[error("coefficient c_{k} = {actual} breaks the ladder a*b^(n-k) = {expected}")]
    LadderViolation {
        k: usize,
        actual: String,
        expected: String,
    },
    /// `c_0 ≠ a·b^n − b`.
    #[error("constant term {actual} differs from a*b^n - b = {expected}")]
    ConstantViolation { actual: String, expected: String },
}

/// Recovers `(a, b)` with `p = −b + a ∏(x_i + b)`: `a = c_n`,
/// `b = c_{n−1}/a` in the fraction field, then checks every coefficient.
pub fn extract_type6<R: Scalar>(p: &MultilinearPoly<R>) -> Result<(R, R::Frac), Type6Rejection> {
    let n = p.arity();
    let sym = SymmetricCoeffs::from_multilinear(p).ok_or(Type6Rejection::NotSymmetric)?;
    let a = sym.get(n).clone();
    if a.is_zero() {
        return Err(Type6Rejection::ZeroLeadingCoefficient);
    }
    let af = a.to_frac();
    let b = sym.get(n - 1).to_frac() / af.clone();
    for k in (1..n).rev() {
        let expected = af.clone() * b.pow_u32((n - k) as u32);
        let actual = sym.get(k).to_frac();
        if actual != expected {
            return Err(Type6Rejection::LadderViolation {
                k,
                actual: actual.to_string(),
                expected: expected.to_string(),
            });
        }
    }
    let expected = af * b.pow_u32(n as u32) - b.clone();
    let actual = sym.get(0).to_frac();
    if actual != expected {
        return Err(Type6Rejection::ConstantViolation {
            actual: actual.to_string(),
            expected: expected.to_string(),
        });
    }
    Ok((a, b))
}

fn linear_matches<R: Scalar>(p: &MultilinearPoly<R>) -> Vec<Classification<R>> {
    let n = p.arity();
    let c0 = p.coeff(0);
    let c: Vec<R> = (0..n).map(|j| p.coeff(1 << j)).collect();
    let mut found = Vec::new();
    if c.iter().all(Zero::is_zero) {
        found.push(Classification::Constant(c0.clone()));
    }
    let unit_at = |pos: usize| {
        c0.is_zero()
            && c.iter()
                .enumerate()
                .all(|(j, v)| if j == pos { v.is_one() } else { v.is_zero() })
    };
    if unit_at(0) {
        found.push(Classification::LeftProjection);
    }
    if unit_at(n - 1) {
        found.push(Classification::RightProjection);
    }
    if c.iter().all(One::is_one) {
        found.push(Classification::TranslatedSum(c0.clone()));
    }
    if n >= 3 && c0.is_zero() && c[0].is_one() {
        let w = c[1].clone();
        let ladder = c.iter().enumerate().all(|(j, v)| *v == w.pow_u32(j as u32));
        if ladder && !w.is_one() && w.pow_u32((n - 1) as u32).is_one() {
            found.push(Classification::TwistedSum(w));
        }
    }
    found
}

/// Decides associativity, then names the family and its parameters.
pub fn classify<R: Scalar>(p: &SparsePoly<R>) -> Result<Classification<R>, ClassifyError> {
    let verdict = is_associative(p)?;
    if let Some(w) = verdict.into_witness() {
        return Ok(Classification::NotAssociative(w));
    }
    let m = p.to_multilinear().ok_or_else(|| {
        ClassifyError::Internal("associative polynomial with a variable of degree >= 2".into())
    })?;
    classify_associative(&m)
}

/// Every family whose normal form `m` matches. For an associative input
/// exactly one entry is expected.
pub fn family_matches<R: Scalar>(m: &MultilinearPoly<R>) -> Vec<Classification<R>> {
    let mut found = if m.degree() <= 1 {
        linear_matches(m)
    } else {
        Vec::new()
    };
    if let Ok((a, b)) = extract_type6(m) {
        found.push(Classification::ShiftedProduct { a, b });
    }
    found
}

/// Family of a multilinear polynomial already known to be associative.
pub fn classify_associative<R: Scalar>(
    m: &MultilinearPoly<R>,
) -> Result<Classification<R>, ClassifyError> {
    let mut found = family_matches(m);
    match found.len() {
        1 => Ok(found.remove(0)),
        0 => Err(ClassifyError::Internal(format!(
            "associative polynomial matches no family: {}",
            m.to_sparse()
        ))),
        _ => Err(ClassifyError::Internal(format!(
            "polynomial matches several families: {found:?}"
        ))),
    }
}

fn check_shifted_product<R: Scalar>(n: usize, a: &R, b: &R::Frac) -> Result<Vec<R>, ClassifyError> {
    if a.is_zero() {
        return Err(ClassifyError::InvalidParameters("a must be nonzero".into()));
    }
    let af = a.to_frac();
    // coefficient of P_k is a·b^{n-k} for k ≥ 1 and a·b^n − b for k = 0
    let mut coeffs = Vec::with_capacity(n + 1);
    let c0 = af.clone() * b.pow_u32(n as u32) - b.clone();
    coeffs.push(R::from_frac(&c0).ok_or_else(|| {
        ClassifyError::InvalidParameters(format!("a*b^{n} - b = {c0} is not in {}", R::RING))
    })?);
    for k in 1..=n {
        let ck = af.clone() * b.pow_u32((n - k) as u32);
        coeffs.push(R::from_frac(&ck).ok_or_else(|| {
            ClassifyError::InvalidParameters(format!("a*b^{} = {ck} is not in {}", n - k, R::RING))
        })?);
    }
    Ok(coeffs)
}

/// The polynomial of a given family; rejects parameters outside the family.
pub fn reconstruct<R: Scalar>(
    cls: &Classification<R>,
    n: usize,
) -> Result<SparsePoly<R>, ClassifyError> {
    if n < 2 {
        return Err(AssocError::ArityTooSmall(n).into());
    }
    let linear = |c0: R, c: Vec<R>| -> Result<SparsePoly<R>, ClassifyError> {
        let mut m = MultilinearPoly::zero(n)?;
        m.add_coeff(0, c0)?;
        for (j, v) in c.into_iter().enumerate() {
            m.add_coeff(1 << j, v)?;
        }
        Ok(m.to_sparse())
    };
    let unit = |pos: usize| {
        (0..n)
            .map(|j| if j == pos { R::one() } else { R::zero() })
            .collect()
    };
    match cls {
        Classification::Constant(c) => linear(c.clone(), vec![R::zero(); n]),
        Classification::LeftProjection => linear(R::zero(), unit(0)),
        Classification::RightProjection => linear(R::zero(), unit(n - 1)),
        Classification::TranslatedSum(c) => linear(c.clone(), vec![R::one(); n]),
        Classification::TwistedSum(w) => {
            if n < 3 {
                return Err(ClassifyError::InvalidParameters(
                    "twisted sums need arity at least 3".into(),
                ));
            }
            if w.is_one() || !w.pow_u32((n - 1) as u32).is_one() {
                return Err(ClassifyError::InvalidParameters(format!(
                    "omega = {w} must satisfy omega != 1 and omega^{} = 1",
                    n - 1
                )));
            }
            linear(R::zero(), (0..n).map(|j| w.pow_u32(j as u32)).collect())
        }
        Classification::ShiftedProduct { a, b } => {
            let coeffs = check_shifted_product(n, a, b)?;
            Ok(SymmetricCoeffs::new(coeffs).to_multilinear()?.to_sparse())
        }
        Classification::NotAssociative(_) => Err(ClassifyError::InvalidParameters(
            "cannot reconstruct a non-associative operation".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::ring::{roots_of_unity, GaussianInteger, GaussianRational};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn z(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(z(n), z(d))
    }

    fn cls_z(s: &str, n: usize) -> Classification<BigInt> {
        classify(&parse_poly::<BigInt>(s, n).unwrap()).unwrap()
    }

    fn sym(v: &[i64]) -> SymmetricCoeffs<BigInt> {
        SymmetricCoeffs::new(v.iter().map(|&x| z(x)).collect())
    }

    const WORKED: &str = "9*x1*x2*x3 + 3*(x1*x2 + x2*x3 + x3*x1) + x1 + x2 + x3";

    #[test]
    fn classify_examples() {
        assert_eq!(
            cls_z(WORKED, 3),
            Classification::ShiftedProduct {
                a: z(9),
                b: q(1, 3)
            }
        );
        assert_eq!(cls_z("x1 - x2 + x3", 3), Classification::TwistedSum(z(-1)));
        let g = parse_poly::<GaussianInteger>("x1 + i*x2 - x3 - i*x4 + x5", 5).unwrap();
        assert_eq!(
            classify(&g).unwrap(),
            Classification::TwistedSum(GaussianInteger::i())
        );
        assert_eq!(
            cls_z("x1*x2", 2),
            Classification::ShiftedProduct {
                a: z(1),
                b: q(0, 1)
            }
        );
        assert_eq!(cls_z("5", 4), Classification::Constant(z(5)));
        assert_eq!(cls_z("x1", 3), Classification::LeftProjection);
        assert_eq!(cls_z("x3", 3), Classification::RightProjection);
        assert_eq!(
            cls_z("x1 + x2 + x3 + 2", 3),
            Classification::TranslatedSum(z(2))
        );
        assert!(matches!(
            cls_z("2*x1*x2 + x1", 2),
            Classification::NotAssociative(_)
        ));
        assert!(matches!(
            cls_z("x1^2", 2),
            Classification::NotAssociative(_)
        ));
    }

    #[test]
    fn extract_type6_examples() {
        let e = sym(&[0, 1, 3, 9]).to_multilinear().unwrap();
        assert_eq!(extract_type6(&e).unwrap(), (z(9), q(1, 3)));
        let prod = sym(&[0, 0, 1]).to_multilinear().unwrap();
        assert_eq!(extract_type6(&prod).unwrap(), (z(1), q(0, 1)));
        let bad = sym(&[0, 1, 0, 1]).to_multilinear().unwrap();
        assert!(matches!(
            extract_type6(&bad),
            Err(Type6Rejection::LadderViolation { k: 1, .. })
        ));
        let bad_const = sym(&[1, 0, 1]).to_multilinear().unwrap();
        assert!(matches!(
            extract_type6(&bad_const),
            Err(Type6Rejection::ConstantViolation { .. })
        ));
        let linear = sym(&[0, 1, 1, 0]).to_multilinear().unwrap();
        assert_eq!(
            extract_type6(&linear),
            Err(Type6Rejection::ZeroLeadingCoefficient)
        );
        let asym = parse_poly::<BigInt>("x1*x2*x3 + x1", 3)
            .unwrap()
            .to_multilinear()
            .unwrap();
        assert_eq!(extract_type6(&asym), Err(Type6Rejection::NotSymmetric));
    }

    #[test]
    fn condpol_examples() {
        assert!(verify_condpol(&sym(&[0, 1, 3, 9])));
        assert!(!verify_condpol(&sym(&[1, 0, 1])));
        assert!(verify_condpol(&sym(&[0, 0, 0, 0])));
    }

    #[test]
    fn reconstruct_examples() {
        let p = reconstruct(
            &Classification::ShiftedProduct {
                a: z(9),
                b: q(1, 3),
            },
            3,
        )
        .unwrap();
        assert_eq!(p, parse_poly::<BigInt>(WORKED, 3).unwrap());
        let s = reconstruct(&Classification::TranslatedSum(z(0)), 3).unwrap();
        assert_eq!(s.to_string(), "x1 + x2 + x3");
        // (−1)^3 ≠ 1
        assert!(matches!(
            reconstruct(&Classification::TwistedSum(z(-1)), 4),
            Err(ClassifyError::InvalidParameters(_))
        ));
        assert!(reconstruct(&Classification::TwistedSum(z(-1)), 5).is_ok());
        assert!(reconstruct(&Classification::TwistedSum(z(1)), 3).is_err());
        assert!(reconstruct(&Classification::TwistedSum(z(-1)), 2).is_err());
        // a·b^2 = 1/4 is not an integer
        assert!(reconstruct(
            &Classification::ShiftedProduct {
                a: z(1),
                b: q(1, 2)
            },
            2
        )
        .is_err());
        assert!(reconstruct(
            &Classification::ShiftedProduct {
                a: z(0),
                b: q(0, 1)
            },
            2
        )
        .is_err());
        assert!(reconstruct(&Classification::<BigInt>::LeftProjection, 1).is_err());
    }

    fn round_trip<R: Scalar>(cls: Classification<R>, n: usize) {
        let p = reconstruct(&cls, n).unwrap();
        assert!(is_associative(&p).unwrap().is_associative(), "{p}");
        assert_eq!(classify(&p).unwrap(), cls, "{p}");
    }

    #[test]
    fn round_trip_parameter_grid_integers() {
        let bs = [
            q(0, 1),
            q(1, 1),
            q(-1, 1),
            q(1, 2),
            q(-1, 2),
            q(1, 3),
            q(-1, 3),
        ];
        for n in 2..=4 {
            for c in -3..=3 {
                round_trip(Classification::Constant(z(c)), n);
                round_trip(Classification::TranslatedSum(z(c)), n);
            }
            round_trip(Classification::<BigInt>::LeftProjection, n);
            round_trip(Classification::<BigInt>::RightProjection, n);
            if n >= 3 {
                for w in roots_of_unity::<BigInt>((n - 1) as u32)
                    .into_iter()
                    .filter(|w| !w.is_one())
                {
                    round_trip(Classification::TwistedSum(w), n);
                }
            }
            for a in (-3..=3).filter(|&a| a != 0) {
                for b in &bs {
                    let cls = Classification::ShiftedProduct {
                        a: z(a),
                        b: b.clone(),
                    };
                    if reconstruct(&cls, n).is_ok() {
                        round_trip(cls, n);
                    }
                }
            }
        }
    }

    #[test]
    fn round_trip_gaussian_and_rational() {
        for n in 3..=5 {
            for w in roots_of_unity::<GaussianInteger>((n - 1) as u32) {
                if !w.is_one() {
                    round_trip(Classification::TwistedSum(w), n);
                }
            }
        }
        let gi = |re: i64, im: i64| GaussianInteger::new(re, im);
        let b = GaussianRational::from_integer(gi(0, 1));
        round_trip(Classification::ShiftedProduct { a: gi(1, 1), b }, 3);
        round_trip(Classification::TranslatedSum(gi(2, -1)), 2);
        round_trip(
            Classification::ShiftedProduct {
                a: q(1, 2),
                b: q(3, 5),
            },
            3,
        );
        round_trip(Classification::TranslatedSum(q(1, 7)), 3);
    }

    #[test]
    fn condpol_iff_associative_for_high_degree_binary_tables() {
        for c2 in (-3..=3).filter(|&c| c != 0) {
            for c1 in -3..=3 {
                for c0 in -3..=3 {
                    let s = sym(&[c0, c1, c2]);
                    let p = s.to_multilinear().unwrap().to_sparse();
                    assert_eq!(
                        verify_condpol(&s),
                        is_associative(&p).unwrap().is_associative(),
                        "{p}"
                    );
                }
            }
        }
    }
}
