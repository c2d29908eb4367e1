//! Derivations, rational antiderivatives and the exponential extension that
//! carries the nonzero-energy eigenfunctions.

mod expfun;
mod integrate;

pub use expfun::{ExpFun, Exponent};
pub use integrate::integrate_x;

use crate::ring::{Poly, RatFun, RingError, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalculusError {
    #[error("the antiderivative is not rational")]
    NonRationalAntiderivative,
    #[error("exponential levels differ: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },
    #[error("exponentials with different exponents cannot be combined")]
    ExponentMismatch,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A value with partial derivatives in every variable.
pub trait Differential: Sized {
    fn derivative(&self, v: Var) -> Self;

    fn derivative_n(&self, v: Var, n: usize) -> Self
    where
        Self: Clone,
    {
        (0..n).fold(self.clone(), |acc, _| acc.derivative(v))
    }
}

impl Differential for Poly {
    fn derivative(&self, v: Var) -> Poly {
        self.diff(v)
    }
}

impl Differential for RatFun {
    fn derivative(&self, v: Var) -> RatFun {
        self.diff(v)
    }
}

impl Differential for ExpFun {
    fn derivative(&self, v: Var) -> ExpFun {
        self.diff(v)
    }
}
