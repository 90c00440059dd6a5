pub mod cdvf;
pub mod f5;
pub mod lifting;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod sensitivity;
pub mod text;

use num_rational::BigRational;

pub use cdvf::{Cdvf, CdvfContext, CdvfError, FieldKind, Valuation};
pub use poly::{divide, reduce, Monomial, MonomialOrder, OrderKind, PolyError, Polynomial};
pub use scalar::{ExactField, Fp, Scalar, ScalarError};

/// Polynomials with finite-precision p-adic or power-series coefficients.
pub type PadicPolynomial = Polynomial<Cdvf>;
/// Polynomials with exact rational coefficients.
pub type RationalPolynomial = Polynomial<BigRational>;
