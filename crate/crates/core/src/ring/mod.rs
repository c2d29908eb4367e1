//! Exact coefficient tower: rationals, sparse multivariate polynomials and
//! reduced rational functions over a fixed variable alphabet.

mod arith;
mod gcd;
mod mono;
mod parse;
mod poly;
mod ratfun;
mod var;

pub use gcd::{content_in, gcd, gcd_many, gcd_primitive};
pub use mono::Mono;
pub use parse::{parse_poly, parse_ratfun, ParseError};
pub use poly::Poly;
pub use ratfun::RatFun;
pub use var::{Var, MAX_INDEX};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("substitution makes the denominator vanish")]
    DenominatorVanishes,
}

/// `n / d` as a [`Rat`].
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Exact quotient of polynomials.
pub fn exact_divide(a: &Poly, b: &Poly) -> Result<Poly, RingError> {
    if b.is_zero() {
        return Err(RingError::DivisionByZero);
    }
    a.exact_div(b)
}
