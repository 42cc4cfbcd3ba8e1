//! Exact arithmetic in cyclotomic fields `ℚ(ζ_N)`.

mod cyclo;
mod galois;
mod minpoly;
mod poly;
pub mod rational;

pub use cyclo::{cyclotomic_polynomial, root_of_unity, CycloElement, CyclotomicField};
pub use galois::{galois_apply, stabilizer, UnitSubgroup};
pub use minpoly::{evaluate_at, minimal_polynomial};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poly::RatPolynomial;
pub use rational::{format_rational, parse_rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus must be positive, got {0}")]
    InvalidModulus(u64),
    #[error("elements live in different fields: Q(zeta_{left}) and Q(zeta_{right})")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("{a} is not a unit modulo {modulus}")]
    NotCoprime { a: u64, modulus: u64 },
    #[error("cannot embed Q(zeta_{modulus}) into Q(zeta_{level})")]
    NotMultiple { level: u64, modulus: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}
