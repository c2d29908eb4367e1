//! Exact symbolic toolkit for the rational solutions of the KdV hierarchy.
//!
//! Everything is computed over the rationals, so identities are checked by
//! equality rather than by tolerance. The layers build on each other:
//! [`ring`] (polynomials and rational functions), [`calculus`] (derivations,
//! rational integration, exponential extension), then the hierarchy objects in
//! [`kdv`], [`adler_moser`], [`darboux`], [`lax`], [`fundmat`], [`spectral`]
//! and [`galois`].

pub mod adler_moser;
pub mod calculus;
pub mod darboux;
pub mod fundmat;
pub mod galois;
mod error;
pub mod kdv;
pub mod lax;
pub mod spectral;
pub mod ring;

pub use error::{Error, Result};
pub use calculus::{CalculusError, ExpFun, Exponent};
pub use adler_moser::{TauAssignment, ThetaSequence};
pub use fundmat::{QFamily, Sign};
pub use galois::{GaloisClass, GaloisKind};
pub use lax::Mat2;
pub use spectral::{CurvePoint, Green, PointClass, PointKind, SpectralCurve};
pub use ring::{Poly, Rat, RatFun, RingError, Var};
