//! Exact Laplace spectra and nodal sequences of flat tori.
//!
//! The library works with the inverse Gram matrix `Q` of a flat torus
//! `T = R^n / A Z^n`. Eigenvalues of the Laplacian are `4π² qᵀQq` for
//! integer `q`; the factor `4π²` is never materialized and every
//! comparison is carried out on the exact rational `qᵀQq`.
//!
//! Modules:
//!
//! * [`exact`]: rational scalars and linear forms in the parameters `a,b,c,d`
//! * [`linalg`]: small dense matrices over a generic scalar
//! * [`torus`]: the Conway–Sloane matrices `Q⁺`, `Q⁻ = UᵀQ⁺U` and `qᵀQq`
//! * [`spectral`]: lattice enumeration, spectra and nodal sequences
//! * [`theorem`]: symbolic check that the nodal sequences of `T⁺` and `T⁻` differ
//! * [`oracle`]: two independent nodal-domain counters for the closed-form count

pub mod error;
pub mod exact;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod spectral;
pub mod theorem;
pub mod torus;

pub use error::{Error, Result};
pub use exact::LinearForm;
pub use linalg::Matrix;
pub use scalar::Scalar;
pub use spectral::{NodalPart, NodalSequence, SpectrumLine};
pub use torus::{LatticeVector, ParamTuple, Sign, SymMatrix};

/// Exact rational scalar used throughout the spectral code.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;

pub type RationalMatrix = Matrix<Rational>;
pub type RationalForm = LinearForm<Rational>;
pub type RationalSymMatrix = SymMatrix<Rational>;

/// Floating-point variants, for display and quick numerics only.
pub type LinearForm64 = LinearForm<f64>;
pub type Matrix64 = Matrix<f64>;
pub type SymMatrix64 = SymMatrix<f64>;
