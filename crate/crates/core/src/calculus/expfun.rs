//! Finite sums `Σ_k e^{kL} q_k` over one exponent `L = λx + offset`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::CalculusError;
use crate::ring::{Rat, RatFun, RingError, Var};

/// The exponent `L_r = λx + (-1)^r λ^{2r+1} t` of level `r`, or any
/// specialisation of it (`λ` or `t` replaced by values).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exponent {
    level: u32,
    lambda: RatFun,
    offset: RatFun,
}

impl Exponent {
    /// `L_r` with spectral parameter `lambda`.
    pub fn new(level: u32, lambda: RatFun) -> Exponent {
        let sign = if level % 2 == 0 { 1 } else { -1 };
        let offset = lambda.pow(2 * level as i32 + 1).expect("non-negative power").mul(&RatFun::var(Var::T)).scale(&Rat::from_integer(sign.into()));
        Exponent { level, lambda, offset }
    }

    /// `L_r` with the symbolic spectral parameter `λ`.
    pub fn symbolic(level: u32) -> Exponent {
        Exponent::new(level, RatFun::var(Var::LAMBDA))
    }

    pub fn with_offset(level: u32, lambda: RatFun, offset: RatFun) -> Exponent {
        Exponent { level, lambda, offset }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn lambda(&self) -> &RatFun {
        &self.lambda
    }

    pub fn offset(&self) -> &RatFun {
        &self.offset
    }

    /// `L` itself as a rational function.
    pub fn as_ratfun(&self) -> RatFun {
        &self.lambda.mul(&RatFun::var(Var::X)) + &self.offset
    }

    fn substitute(&self, bindings: &BTreeMap<Var, RatFun>) -> Result<Exponent, RingError> {
        Ok(Exponent { level: self.level, lambda: self.lambda.substitute(bindings)?, offset: self.offset.substitute(bindings)? })
    }
}

/// `Σ_k e^{kL} q_k`. The `k = 0` part is the purely rational component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpFun {
    exponent: Option<Arc<Exponent>>,
    terms: BTreeMap<i64, RatFun>,
}

impl ExpFun {
    pub fn zero() -> ExpFun {
        ExpFun { exponent: None, terms: BTreeMap::new() }
    }

    pub fn one() -> ExpFun {
        ExpFun::rational(RatFun::one())
    }

    pub fn rational(q: RatFun) -> ExpFun {
        ExpFun::exp(None, 0, q)
    }

    /// `e^{kL} q`.
    pub fn exp(exponent: Option<Arc<Exponent>>, k: i64, q: RatFun) -> ExpFun {
        let mut terms = BTreeMap::new();
        terms.insert(k, q);
        ExpFun::normalized(exponent, terms)
    }

    pub fn from_terms(exponent: Option<Arc<Exponent>>, terms: impl IntoIterator<Item = (i64, RatFun)>) -> ExpFun {
        let mut map: BTreeMap<i64, RatFun> = BTreeMap::new();
        for (k, q) in terms {
            let slot = map.entry(k).or_insert_with(RatFun::zero);
            *slot = &*slot + &q;
        }
        ExpFun::normalized(exponent, map)
    }

    fn normalized(exponent: Option<Arc<Exponent>>, mut terms: BTreeMap<i64, RatFun>) -> ExpFun {
        terms.retain(|_, q| !q.is_zero());
        let exponent = if terms.keys().any(|&k| k != 0) { exponent } else { None };
        assert!(exponent.is_some() || terms.keys().all(|&k| k == 0), "exponential term without an exponent");
        ExpFun { exponent, terms }
    }

    pub fn exponent(&self) -> Option<&Arc<Exponent>> {
        self.exponent.as_ref()
    }

    pub fn level(&self) -> Option<u32> {
        self.exponent.as_ref().map(|e| e.level)
    }

    pub fn terms(&self) -> &BTreeMap<i64, RatFun> {
        &self.terms
    }

    /// Coefficient of `e^{kL}`.
    pub fn coeff(&self, k: i64) -> RatFun {
        self.terms.get(&k).cloned().unwrap_or_else(RatFun::zero)
    }

    /// The exponent multiples present.
    pub fn support(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&k| k == 0)
    }

    pub fn as_rational(&self) -> Option<RatFun> {
        self.is_rational().then(|| self.coeff(0))
    }

    /// If `self = e^{kL} q` is a single term, return `(k, q)`.
    pub fn as_single(&self) -> Option<(i64, &RatFun)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, q)| (*k, q))
        } else {
            None
        }
    }

    fn join(&self, other: &ExpFun) -> Result<Option<Arc<Exponent>>, CalculusError> {
        match (&self.exponent, &other.exponent) {
            (None, e) | (e, None) => Ok(e.clone()),
            (Some(a), Some(b)) => {
                if a.level != b.level {
                    Err(CalculusError::LevelMismatch { left: a.level, right: b.level })
                } else if a != b {
                    Err(CalculusError::ExponentMismatch)
                } else {
                    Ok(Some(a.clone()))
                }
            }
        }
    }

    pub fn try_add(&self, other: &ExpFun) -> Result<ExpFun, CalculusError> {
        let e = self.join(other)?;
        let mut terms = self.terms.clone();
        for (k, q) in &other.terms {
            let slot = terms.entry(*k).or_insert_with(RatFun::zero);
            *slot = &*slot + q;
        }
        Ok(ExpFun::normalized(e, terms))
    }

    pub fn try_sub(&self, other: &ExpFun) -> Result<ExpFun, CalculusError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &ExpFun) -> Result<ExpFun, CalculusError> {
        let e = self.join(other)?;
        let mut terms: BTreeMap<i64, RatFun> = BTreeMap::new();
        for (ka, qa) in &self.terms {
            for (kb, qb) in &other.terms {
                let slot = terms.entry(ka + kb).or_insert_with(RatFun::zero);
                *slot = &*slot + &qa.mul(qb);
            }
        }
        Ok(ExpFun::normalized(e, terms))
    }

    pub fn neg(&self) -> ExpFun {
        ExpFun { exponent: self.exponent.clone(), terms: self.terms.iter().map(|(k, q)| (*k, q.neg())).collect() }
    }

    pub fn mul_rat(&self, q: &RatFun) -> ExpFun {
        ExpFun::normalized(self.exponent.clone(), self.terms.iter().map(|(k, c)| (*k, c.mul(q))).collect())
    }

    pub fn div_rat(&self, q: &RatFun) -> Result<ExpFun, CalculusError> {
        let inv = q.recip()?;
        Ok(self.mul_rat(&inv))
    }

    /// `e^{kL} q ↦ e^{kL} (k L_v q + q_v)`.
    pub fn diff(&self, v: Var) -> ExpFun {
        let lv = self.exponent.as_ref().map(|e| e.as_ratfun().diff(v));
        let terms = self.terms.iter().map(|(k, q)| {
            let mut d = q.diff(v);
            if *k != 0 {
                let lv = lv.as_ref().expect("exponential term has an exponent");
                d = &d + &lv.mul(q).scale(&Rat::from_integer((*k).into()));
            }
            (*k, d)
        });
        ExpFun::normalized(self.exponent.clone(), terms.collect())
    }

    /// Substitute into the exponent and every coefficient. If `L` becomes
    /// zero all terms collapse onto `k = 0`.
    pub fn substitute(&self, bindings: &BTreeMap<Var, RatFun>) -> Result<ExpFun, CalculusError> {
        let exponent = match &self.exponent {
            Some(e) => Some(e.substitute(bindings)?),
            None => None,
        };
        let collapse = exponent.as_ref().is_some_and(|e| e.as_ratfun().is_zero());
        let mut terms: Vec<(i64, RatFun)> = Vec::with_capacity(self.terms.len());
        for (k, q) in &self.terms {
            terms.push((if collapse { 0 } else { *k }, q.substitute(bindings)?));
        }
        Ok(ExpFun::from_terms(if collapse { None } else { exponent.map(Arc::new) }, terms))
    }

    pub fn subs(&self, v: Var, value: &RatFun) -> Result<ExpFun, CalculusError> {
        let mut b = BTreeMap::new();
        b.insert(v, value.clone());
        self.substitute(&b)
    }
}

impl From<RatFun> for ExpFun {
    fn from(q: RatFun) -> ExpFun {
        ExpFun::rational(q)
    }
}

impl Add for &ExpFun {
    type Output = ExpFun;
    fn add(self, rhs: &ExpFun) -> ExpFun {
        self.try_add(rhs).expect("incompatible exponents")
    }
}

impl Sub for &ExpFun {
    type Output = ExpFun;
    fn sub(self, rhs: &ExpFun) -> ExpFun {
        self.try_sub(rhs).expect("incompatible exponents")
    }
}

impl Mul for &ExpFun {
    type Output = ExpFun;
    fn mul(self, rhs: &ExpFun) -> ExpFun {
        self.try_mul(rhs).expect("incompatible exponents")
    }
}

impl Neg for &ExpFun {
    type Output = ExpFun;
    fn neg(self) -> ExpFun {
        ExpFun::neg(self)
    }
}

impl fmt::Display for ExpFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let l = self.exponent.as_ref().map(|e| e.as_ratfun().to_string());
        for (i, (k, q)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (*k, &l) {
                (0, _) => write!(f, "{q}")?,
                (1, Some(l)) => write!(f, "exp({l})*({q})")?,
                (k, Some(l)) => write!(f, "exp({k}*({l}))*({q})")?,
                (_, None) => unreachable!("exponential term has an exponent"),
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_ratfun;

    fn rf(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    fn e(r: u32, k: i64, q: &str) -> ExpFun {
        ExpFun::exp(Some(Arc::new(Exponent::symbolic(r))), k, rf(q))
    }

    #[test]
    fn exponentials_cancel() {
        let p = e(1, 1, "1");
        let m = e(1, -1, "1");
        assert_eq!(&p * &m, ExpFun::one());
        assert!((&p * &m).exponent().is_none());
    }

    #[test]
    fn time_derivative_of_plane_wave() {
        let p = e(1, 1, "1");
        assert_eq!(p.diff(Var::T), e(1, 1, "-lambda^3"));
        assert_eq!(e(2, 1, "1").diff(Var::T), e(2, 1, "lambda^5"));
        assert_eq!(p.diff(Var::X), e(1, 1, "lambda"));
    }

    #[test]
    fn wronskian_of_first_pair() {
        let p = e(1, 1, "(lambda*x - 1)/x");
        let m = e(1, -1, "(lambda*x + 1)/x");
        let w = &(&p * &m.diff(Var::X)) - &(&p.diff(Var::X) * &m);
        assert_eq!(w, ExpFun::rational(rf("-2*lambda^3")));
    }

    #[test]
    fn mismatched_exponents() {
        assert_eq!(e(1, 1, "1").try_add(&e(2, 1, "1")), Err(CalculusError::LevelMismatch { left: 1, right: 2 }));
        let other = ExpFun::exp(Some(Arc::new(Exponent::new(1, rf("2")))), 1, rf("1"));
        assert_eq!(e(1, 1, "1").try_mul(&other), Err(CalculusError::ExponentMismatch));
        assert!(e(1, 1, "1").try_add(&ExpFun::rational(rf("x"))).is_ok());
    }

    #[test]
    fn substitution_collapses_at_zero_lambda() {
        let p = &e(1, 1, "(lambda*x - 1)/x") + &e(1, -1, "1/x");
        let at0 = p.subs(Var::LAMBDA, &RatFun::zero()).unwrap();
        assert_eq!(at0, ExpFun::rational(RatFun::zero()));
        let at1 = e(1, 1, "x").subs(Var::T, &rf("7")).unwrap();
        assert_eq!(at1.exponent().unwrap().as_ratfun(), rf("lambda*x - 7*lambda^3"));
    }
}
