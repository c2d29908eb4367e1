use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd_primitive;
use super::{Poly, Rat, RingError, Var};

/// Reduced quotient of polynomials.
///
/// The denominator is a primitive integer polynomial with positive leading
/// coefficient and is coprime to the numerator; zero is `0/1`. With that
/// normalisation structural equality is equality of rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl Default for RatFun {
    fn default() -> Self {
        RatFun::zero()
    }
}

impl RatFun {
    pub fn zero() -> RatFun {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RatFun {
        RatFun { num: Poly::one(), den: Poly::one() }
    }

    pub fn int(n: i64) -> RatFun {
        RatFun::from_poly(Poly::int(n))
    }

    pub fn constant(c: Rat) -> RatFun {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn var(v: Var) -> RatFun {
        RatFun::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> RatFun {
        RatFun { num: p, den: Poly::one() }
    }

    /// Reduce `num / den` to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<RatFun, RingError> {
        if den.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(RatFun::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> RatFun {
        if num.is_zero() {
            return RatFun::zero();
        }
        if let Some(c) = den.as_constant() {
            return RatFun { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let g = gcd_primitive(&num, &den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.try_div(&g).unwrap(), den.try_div(&g).unwrap()) };
        RatFun::normalize_unit(num, den)
    }

    /// Fix the scalar freedom when `num` and `den` are already coprime.
    fn normalize_unit(num: Poly, den: Poly) -> RatFun {
        let c = den.content();
        if c.is_one() {
            RatFun { num, den }
        } else {
            let inv = c.recip();
            RatFun { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    /// Build from parts already known to be coprime (skips the gcd).
    pub fn from_coprime(num: Poly, den: Poly) -> RatFun {
        assert!(!den.is_zero());
        if num.is_zero() {
            return RatFun::zero();
        }
        RatFun::normalize_unit(num, den)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_poly() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn contains(&self, v: Var) -> bool {
        self.num.contains(v) || self.den.contains(v)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs = self.num.vars();
        vs.extend(self.den.vars());
        vs.sort_unstable_by(|a, b| b.cmp(a));
        vs.dedup();
        vs
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, k: &Rat) -> RatFun {
        if k.is_zero() {
            return RatFun::zero();
        }
        RatFun { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        self.add_signed(other, false)
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add_signed(other, true)
    }

    fn add_signed(&self, other: &RatFun, negate: bool) -> RatFun {
        let rhs_num = if negate { other.num.neg() } else { other.num.clone() };
        if self.is_zero() {
            return RatFun { num: rhs_num, den: other.den.clone() };
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&rhs_num);
            if self.den.is_one() {
                return RatFun::from_poly(num);
            }
            return RatFun::reduce(num, self.den.clone());
        }
        if self.den.is_one() {
            // a + c/d is already coprime to d
            return RatFun::from_coprime(self.num.mul(&other.den).add(&rhs_num), other.den.clone());
        }
        if other.den.is_one() {
            return RatFun::from_coprime(self.num.add(&rhs_num.mul(&self.den)), self.den.clone());
        }
        // Henrici: only the common factor of the denominators can cancel.
        let g = gcd_primitive(&self.den, &other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&rhs_num.mul(&self.den));
            return RatFun::from_coprime(num, self.den.mul(&other.den));
        }
        let bd = self.den.try_div(&g).unwrap();
        let dd = other.den.try_div(&g).unwrap();
        let num = self.num.mul(&dd).add(&rhs_num.mul(&bd));
        let den = bd.mul(&other.den);
        if num.is_zero() {
            return RatFun::zero();
        }
        let h = gcd_primitive(&num, &g);
        if h.is_one() {
            RatFun::from_coprime(num, den)
        } else {
            RatFun::from_coprime(num.try_div(&h).unwrap(), den.try_div(&h).unwrap())
        }
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        if self.is_zero() || other.is_zero() {
            return RatFun::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFun::from_poly(self.num.mul(&other.num));
        }
        // cross cancellation keeps the factors small
        let g1 = gcd_primitive(&self.num, &other.den);
        let g2 = gcd_primitive(&other.num, &self.den);
        let (n1, d2) = if g1.is_one() { (self.num.clone(), other.den.clone()) } else { (self.num.try_div(&g1).unwrap(), other.den.try_div(&g1).unwrap()) };
        let (n2, d1) = if g2.is_one() { (other.num.clone(), self.den.clone()) } else { (other.num.try_div(&g2).unwrap(), self.den.try_div(&g2).unwrap()) };
        RatFun::from_coprime(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFun {
        self.mul(&RatFun::from_poly(p.clone()))
    }

    pub fn recip(&self) -> Result<RatFun, RingError> {
        if self.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(RatFun::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun, RingError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn square(&self) -> RatFun {
        RatFun { num: self.num.square(), den: self.den.square() }
    }

    pub fn pow(&self, k: i32) -> Result<RatFun, RingError> {
        if k < 0 {
            return self.recip()?.pow(-k);
        }
        let k = k as u32;
        Ok(RatFun::from_coprime(self.num.pow(k), self.den.pow(k)))
    }

    /// Partial derivative by the quotient rule.
    pub fn diff(&self, v: Var) -> RatFun {
        if !self.contains(v) {
            return RatFun::zero();
        }
        if self.den.is_one() {
            return RatFun::from_poly(self.num.diff(v));
        }
        let dn = self.num.diff(v);
        let dd = self.den.diff(v);
        if dd.is_zero() {
            // n' can pick up factors of d that are free of v
            return RatFun::reduce(dn, self.den.clone());
        }
        // (n/d)' = (n'd - nd') / d^2; with g = gcd(d, d') the quotient
        // (n' (d/g) - n (d'/g)) / (d (d/g)) loses the repeated factors cheaply.
        let g = gcd_primitive(&self.den, &dd);
        let dg = self.den.try_div(&g).unwrap();
        let ddg = dd.try_div(&g).unwrap();
        let num = dn.mul(&dg).sub(&self.num.mul(&ddg));
        RatFun::reduce(num, self.den.mul(&dg))
    }

    /// Substitute rational functions for variables, simultaneously.
    pub fn substitute(&self, bindings: &BTreeMap<Var, RatFun>) -> Result<RatFun, RingError> {
        let num = substitute_poly(&self.num, bindings);
        let den = substitute_poly(&self.den, bindings);
        if den.is_zero() {
            return Err(RingError::DenominatorVanishes);
        }
        num.div(&den)
    }

    /// Substitute a single variable.
    pub fn subs(&self, v: Var, value: &RatFun) -> Result<RatFun, RingError> {
        let mut b = BTreeMap::new();
        b.insert(v, value.clone());
        self.substitute(&b)
    }

    pub fn eval(&self, v: Var, value: &Rat) -> Result<RatFun, RingError> {
        let den = self.den.eval(v, value);
        if den.is_zero() {
            return Err(RingError::DenominatorVanishes);
        }
        Ok(RatFun::reduce(self.num.eval(v, value), den))
    }

    /// Numerator and denominator degrees in `v`.
    pub fn degrees_in(&self, v: Var) -> (u32, u32) {
        (self.num.degree_in(v), self.den.degree_in(v))
    }
}

fn substitute_poly(p: &Poly, bindings: &BTreeMap<Var, RatFun>) -> RatFun {
    let touched: Vec<Var> = p.vars().into_iter().filter(|v| bindings.contains_key(v)).collect();
    if touched.is_empty() {
        return RatFun::from_poly(p.clone());
    }
    // Horner in the touched variables, highest rank first
    fn go(p: &Poly, vars: &[Var], bindings: &BTreeMap<Var, RatFun>) -> RatFun {
        match vars.split_first() {
            None => RatFun::from_poly(p.clone()),
            Some((&v, rest)) => {
                let value = &bindings[&v];
                let coeffs = p.coeffs_in(v);
                let mut acc = RatFun::zero();
                for c in coeffs.iter().rev() {
                    acc = acc.mul(value).add(&go(c, rest, bindings));
                }
                acc
            }
        }
    }
    go(p, &touched, bindings)
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> RatFun {
        RatFun::from_poly(p)
    }
}

impl From<Var> for RatFun {
    fn from(v: Var) -> RatFun {
        RatFun::var(v)
    }
}

impl From<i64> for RatFun {
    fn from(n: i64) -> RatFun {
        RatFun::int(n)
    }
}

impl From<Rat> for RatFun {
    fn from(c: Rat) -> RatFun {
        RatFun::constant(c)
    }
}

macro_rules! ratfun_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&RatFun> for &RatFun {
            type Output = RatFun;
            fn $method(self, rhs: &RatFun) -> RatFun {
                RatFun::$inner(self, rhs)
            }
        }
    };
}

ratfun_binop!(Add, add, add);
ratfun_binop!(Sub, sub, sub);
ratfun_binop!(Mul, mul, mul);

/// Panics on division by zero; use [`RatFun::div`] for the checked form.
impl Div<&RatFun> for &RatFun {
    type Output = RatFun;
    fn div(self, rhs: &RatFun) -> RatFun {
        RatFun::div(self, rhs).expect("division by zero rational function")
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun::neg(self)
    }
}

impl fmt::Display for RatFun {
    /// Plain canonical text, re-parseable by the CLI grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        let bare = match self.den.terms() {
            [(m, c)] => c.is_one() && m.pairs().len() == 1,
            _ => false,
        };
        if bare {
            write!(f, "{num}/{}", self.den)
        } else {
            write!(f, "{num}/({})", self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_ratfun, rat};
    use num_traits::Signed;

    fn rf(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    #[test]
    fn reciprocal_cancels() {
        let x = rf("x");
        let inv = x.recip().unwrap();
        assert!((&inv * &x).is_one());
        assert_eq!(x.div(&RatFun::zero()), Err(RingError::DivisionByZero));
    }

    #[test]
    fn derivative_stays_reduced() {
        let d = rf("(x*lambda + 1)/lambda").diff(Var::X);
        assert!(d.is_one());
        assert_eq!(d.den(), &Poly::one());
    }

    #[test]
    fn soliton_from_log_derivative() {
        let th = rf("x^3 + 3*t");
        let thx = th.diff(Var::X);
        let thxx = thx.diff(Var::X);
        let u = (&(&thxx * &th) - &thx.square()).div(&th.square()).unwrap().scale(&Rat::from_integer((-2).into()));
        assert_eq!(u, rf("6*x*(x^3 - 6*t)/(x^3 + 3*t)^2"));
        assert_eq!(u.num().to_string(), "6*x^4 - 36*x*t");
        assert_eq!(u.den().to_string(), "x^6 + 6*x^3*t + 9*t^2");
    }

    #[test]
    fn f2_of_six_over_x_squared() {
        let u = rf("6/x^2");
        let f2 = &u.diff(Var::X).diff(Var::X).scale(&rat(-1, 8)) + &u.square().scale(&rat(3, 8));
        assert_eq!(f2, rf("9/x^4"));
    }

    #[test]
    fn stationary_restriction() {
        let u = rf("6*x*(x^3 - 6*t)/(x^3 + 3*t)^2");
        assert_eq!(u.eval(Var::T, &Rat::zero()).unwrap(), rf("6/x^2"));
        let th3 = rf("x^6 + 5*tau_2*x^3 + tau_3*x - 5*tau_2^2");
        let mut b = BTreeMap::new();
        b.insert(Var::tau(2), RatFun::zero());
        b.insert(Var::tau(3), RatFun::zero());
        assert_eq!(th3.substitute(&b).unwrap(), rf("x^6"));
        let qp = rf("lambda*x - 1");
        assert_eq!(qp.subs(Var::LAMBDA, &RatFun::zero()).unwrap(), rf("-1"));
    }

    #[test]
    fn vanishing_denominator() {
        let f = rf("1/(x - t)");
        assert_eq!(f.subs(Var::T, &rf("x")), Err(RingError::DenominatorVanishes));
    }

    #[test]
    fn canonical_denominator() {
        let f = RatFun::new(Poly::int(3), &Poly::var(Var::X).scale(&Rat::from_integer((-2).into())) + &Poly::int(4)).unwrap();
        assert!(f.den().leading_coeff().is_positive());
        assert!(f.den().content().is_one());
        assert_eq!(f.to_string(), "-3/2/(x - 2)");
    }
}
