//! Exact arithmetic: Laurent-type sums in `q` with rational exponents,
//! their fraction field, and Gaussian elimination over it.

mod fraction;
pub mod linalg;
mod poly;
mod qscalar;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use fraction::QFraction;
pub use linalg::{frac_solve, rank, solve_linear, FracMatrix};
pub use poly::{laurent_div_exact, laurent_gcd};
pub use qscalar::{q_add, q_eval, q_mul, QScalar};

/// Arbitrary-precision rational, always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Shorthand for the rational `n/d`. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("evaluation at q0 = 0 is undefined")]
    ZeroBase,
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular system in block {label}")]
    Singular { label: String },
    #[error("inconsistent system in block {label}")]
    Inconsistent { label: String },
    #[error("underdetermined system in block {label}: rank {rank} < {unknowns} unknowns")]
    Underdetermined { label: String, rank: usize, unknowns: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("malformed serialized value: {0}")]
    Malformed(String),
}

/// Serde helpers writing a [`Rational`] as a `"p/q"` string.
pub mod rational_serde {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| serde::de::Error::custom(format!("invalid rational `{s}`")))
    }
}
