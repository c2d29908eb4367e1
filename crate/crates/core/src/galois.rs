//! Differential Galois groups of the fundamental matrices over `ℚ(x, t)`.
//!
//! The classifier reads the exponential support of the entries. It is exact
//! for the two families built in [`crate::fundmat`]: rational entries give the
//! trivial group, entries in the span of `e^{±L_r}` give the multiplicative
//! group acting by `η_r ↦ cη_r`. Anything else is rejected.

use std::fmt;

use crate::adler_moser::ThetaSequence;
use crate::darboux::dt_function;
use crate::error::{Error, Result};
use crate::fundmat::{fundmat_e, fundmat_e0};
use crate::lax::Mat2;
use crate::ring::{Rat, RatFun, Var};
use crate::ExpFun;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GaloisKind {
    Trivial,
    MultiplicativeTorus,
}

impl fmt::Display for GaloisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GaloisKind::Trivial => "trivial",
            GaloisKind::MultiplicativeTorus => "multiplicative_torus",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisClass {
    Trivial,
    /// Generated by `η_r = e^{L_r}` with the given `λ` and exponent offset.
    MultiplicativeTorus { level: u32, lambda: RatFun, offset: RatFun },
}

impl GaloisClass {
    pub fn kind(&self) -> GaloisKind {
        match self {
            GaloisClass::Trivial => GaloisKind::Trivial,
            GaloisClass::MultiplicativeTorus { .. } => GaloisKind::MultiplicativeTorus,
        }
    }
}

/// Classify the Picard–Vessiot extension of a fundamental matrix of level `r`.
pub fn classify_galois(b: &Mat2, r: u32) -> Result<GaloisClass> {
    let det = b.det()?.as_rational().ok_or(Error::UnrecognizedExtension)?;
    if det.is_zero() || det.contains(Var::X) || det.contains(Var::T) {
        return Err(Error::InvalidArgument(format!("det = {det} is not a nonzero constant")));
    }
    if b.entries().iter().all(|e| e.is_rational()) {
        return Ok(GaloisClass::Trivial);
    }
    let mut exponent = None;
    let mut signs = [false, false];
    for e in b.entries() {
        if let Some(ex) = e.exponent() {
            if exponent.is_some_and(|seen| seen != ex) {
                return Err(Error::UnrecognizedExtension);
            }
            exponent = Some(ex);
        }
        for k in e.support() {
            match k {
                1 => signs[0] = true,
                -1 => signs[1] = true,
                _ => return Err(Error::UnrecognizedExtension),
            }
        }
    }
    let ex = exponent.ok_or(Error::UnrecognizedExtension)?;
    if ex.level() != r || signs != [true, true] {
        return Err(Error::UnrecognizedExtension);
    }
    Ok(GaloisClass::MultiplicativeTorus { level: r, lambda: ex.lambda().clone(), offset: ex.offset().clone() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    ZeroEnergy,
    NonzeroEnergy,
    /// `B_{n,λ}` pushed through `DT(θ_{n+1}/θ_n)`.
    DarbouxAscent,
    /// `B_{n,λ}` pushed through `DT(θ_{n-1}/θ_n)`.
    DarbouxDescent,
}

impl Regime {
    pub fn expected(self) -> GaloisKind {
        match self {
            Regime::ZeroEnergy => GaloisKind::Trivial,
            _ => GaloisKind::MultiplicativeTorus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceRow {
    pub regime: Regime,
    pub n: usize,
    /// `None` for symbolic `λ` (and for the zero-energy rows).
    pub lambda: Option<Rat>,
    /// `None` when `t` is kept symbolic.
    pub t: Option<Rat>,
    pub kind: GaloisKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub rows: Vec<InvarianceRow>,
}

impl InvarianceReport {
    /// Every row has the class of its regime.
    pub fn is_constant(&self) -> bool {
        self.rows.iter().all(|row| row.kind == row.regime.expected())
    }
}

fn specialize(b: &Mat2, lambda: Option<&Rat>, t: Option<&Rat>) -> Result<Mat2> {
    let mut out = b.clone();
    if let Some(l) = lambda {
        out = out.subs(Var::LAMBDA, &RatFun::constant(l.clone()))?;
    }
    if let Some(t) = t {
        out = out.subs(Var::T, &RatFun::constant(t.clone()))?;
    }
    Ok(out)
}

fn darboux_image(b: &Mat2, seed: &RatFun) -> Result<Mat2> {
    let seed = ExpFun::rational(seed.clone());
    let plus = dt_function(&seed, &b.a11)?;
    let minus = dt_function(&seed, &b.a12)?;
    Ok(Mat2::from_solutions(&plus, &minus))
}

/// Classify `B_{n,0}` and `B_{n,λ}` across `ns`, the nonzero `λ` samples
/// (`None` meaning symbolic), symbolic `t` and each sample of `t`, and one
/// Darboux step up and down. `seq` must reach `θ_{max n + 1}`.
pub fn invariance_report(r: u32, seq: &ThetaSequence, ns: &[usize], lambdas: &[Option<Rat>], times: &[Rat]) -> Result<InvarianceReport> {
    if lambdas.iter().flatten().any(|l| *l == Rat::from_integer(0.into())) {
        return Err(Error::InvalidArgument("lambda samples must be nonzero".into()));
    }
    let time_samples: Vec<Option<&Rat>> = std::iter::once(None).chain(times.iter().map(Some)).collect();
    let mut rows = Vec::new();
    let mut push = |regime, n, lambda: Option<&Rat>, t: Option<&Rat>, b: &Mat2| -> Result<()> {
        let kind = classify_galois(&specialize(b, lambda, t)?, r)?.kind();
        rows.push(InvarianceRow { regime, n, lambda: lambda.cloned(), t: t.cloned(), kind });
        Ok(())
    };
    for &n in ns {
        let b0 = fundmat_e0(n, seq)?;
        for &t in &time_samples {
            push(Regime::ZeroEnergy, n, None, t, &b0)?;
        }
        let b = fundmat_e(r, n, seq)?;
        let th = RatFun::from_poly(seq.theta(n).clone());
        let up = darboux_image(&b, &RatFun::from_poly(seq.theta(n + 1).clone()).div(&th)?)?;
        let down = match n {
            0 => None,
            _ => Some(darboux_image(&b, &RatFun::from_poly(seq.theta(n - 1).clone()).div(&th)?)?),
        };
        for lambda in lambdas {
            for &t in &time_samples {
                push(Regime::NonzeroEnergy, n, lambda.as_ref(), t, &b)?;
                push(Regime::DarbouxAscent, n, lambda.as_ref(), t, &up)?;
                if let Some(down) = &down {
                    push(Regime::DarbouxDescent, n, lambda.as_ref(), t, down)?;
                }
            }
        }
    }
    Ok(InvarianceReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adler_moser::{theta_sequence, TauAssignment};
    use crate::calculus::Exponent;
    use crate::ring::{parse_poly, parse_ratfun, rat, Poly};
    use std::sync::Arc;

    fn adjusted(n: usize) -> ThetaSequence {
        let mut values = vec![parse_poly("3*t").unwrap()];
        values.resize(n.max(2) - 1, Poly::zero());
        theta_sequence(n, &TauAssignment::adjusted(1, values).unwrap()).unwrap()
    }

    #[test]
    fn zero_and_nonzero_energy() {
        let seq = adjusted(4);
        assert_eq!(classify_galois(&fundmat_e0(3, &seq).unwrap(), 1).unwrap(), GaloisClass::Trivial);
        let b = fundmat_e(1, 2, &seq).unwrap();
        let one = specialize(&b, Some(&rat(1, 1)), None).unwrap();
        let GaloisClass::MultiplicativeTorus { level, lambda, .. } = classify_galois(&one, 1).unwrap() else { panic!("expected a torus") };
        assert_eq!((level, lambda), (1, RatFun::one()));
        let sym = fundmat_e(2, 1, &theta_sequence(2, &TauAssignment::symbolic(2)).unwrap()).unwrap();
        assert_eq!(classify_galois(&sym, 2).unwrap().kind(), GaloisKind::MultiplicativeTorus);
    }

    #[test]
    fn rejects_other_extensions() {
        let ex = Arc::new(Exponent::symbolic(1));
        let p = ExpFun::exp(Some(ex.clone()), 1, RatFun::one());
        let half = ExpFun::exp(Some(ex.clone()), 2, RatFun::one());
        let b = Mat2::from_solutions(&p, &ExpFun::exp(Some(ex), -1, RatFun::one()));
        assert_eq!(classify_galois(&b, 2), Err(Error::UnrecognizedExtension));
        let doubled = Mat2::new(half.clone(), ExpFun::zero(), ExpFun::zero(), ExpFun::exp(half.exponent().cloned(), -2, RatFun::one()));
        assert_eq!(classify_galois(&doubled, 1), Err(Error::UnrecognizedExtension));
        let x = ExpFun::rational(parse_ratfun("x").unwrap());
        assert!(matches!(classify_galois(&Mat2::from_solutions(&x, &x), 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn invariance() {
        let seq = adjusted(4);
        let report = invariance_report(1, &seq, &[0, 1, 2, 3], &[None, Some(rat(1, 1)), Some(rat(2, 1))], &[rat(0, 1), rat(1, 1), rat(7, 1)]).unwrap();
        assert!(report.is_constant());
        assert!(report.rows.iter().any(|r| r.regime == Regime::DarbouxDescent));
        assert_eq!(report.rows.iter().filter(|r| r.regime == Regime::ZeroEnergy).count(), 16);
    }
}
