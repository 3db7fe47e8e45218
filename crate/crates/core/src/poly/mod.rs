//! Exact polynomial algebra on the reference cube `[-1,1]^n` and Gauss–Legendre
//! quadrature.
//!
//! Coefficients are [`Rational`]s throughout basis construction; floating point
//! only appears when a form is tabulated or integrated numerically.

mod exact;
mod form;
mod legendre;
mod polynomial;
mod quadrature;

pub use exact::{Echelon, SparseVec};
pub use form::{binomial, form_components, PolyForm};
pub use legendre::{legendre, legendre_exact, legendre_with_derivative, monomial_in_legendre};
pub use polynomial::{Exponents, FloatPolynomial, Polynomial, Polynomial1D};
pub use quadrature::{gauss_legendre, gauss_rule, QuadratureRule};

pub type Rational = num_rational::BigRational;

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 3;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn integer(v: i64) -> Rational {
    Rational::from_integer(v.into())
}
