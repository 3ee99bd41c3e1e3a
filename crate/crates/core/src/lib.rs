//! Exact decision, classification and structure analysis of associative
//! polynomial n-ary operations over ℤ, ℚ and ℤ[i].
//!
//! Everything is generic over [`ring::Scalar`]; the aliases below fix the
//! three supported coefficient rings.

pub mod assoc;
pub mod classify;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod sampling;
pub mod structure;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use assoc::{is_associative, AssocError, AssocVerdict, DecisionPath, Witness};
pub use classify::{classify, reconstruct, Classification, ClassifyError};
pub use oracle::{enumerate_associative, EnumerationConfig, OracleConfig, OracleError};
pub use parse::{parse_poly, ParseError};
pub use poly::{Monomial, MultilinearPoly, PolyError, SparsePoly, Subset};
pub use ring::{GaussianInteger, GaussianRational, RingElement, RingError, RingId, Scalar};
pub use structure::{analyze, StructureError, StructureReport};

pub type Integer = BigInt;
pub type Rational = BigRational;

pub type IntPoly = SparsePoly<Integer>;
pub type RatPoly = SparsePoly<Rational>;
pub type GaussPoly = SparsePoly<GaussianInteger>;

pub type IntClassification = Classification<Integer>;
pub type RatClassification = Classification<Rational>;
pub type GaussClassification = Classification<GaussianInteger>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Assoc(#[from] AssocError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
