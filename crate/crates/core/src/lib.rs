//! Permutations with n-th roots: exact generating functions over the
//! rationals, certified coefficient envelopes, and the asymptotic law
//! `p_m ~ C * m^((phi(n) - n) / n)`.
//!
//! The series kernel is generic over [`Scalar`]; the exact paths use
//! [`Rational`] and the diagnostic paths may use `f64`.

pub mod asymptotics;
pub mod cli;
pub mod envelope;
pub mod numtheory;
pub mod oracle;
pub mod rootgf;
pub mod scalar;
pub mod series;

pub use scalar::Scalar;
pub use series::TruncatedSeries;

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

/// Truncated series with exact rational coefficients.
pub type RationalSeries = TruncatedSeries<Rational>;

/// Truncated series with double-precision coefficients.
pub type FloatSeries = TruncatedSeries<f64>;

/// Truncated series with single-precision coefficients.
pub type Float32Series = TruncatedSeries<f32>;
