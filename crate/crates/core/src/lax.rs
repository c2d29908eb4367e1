//! The linear system `Φ_x = UΦ`, `Φ_t = V_rΦ` and its compatibility.

use std::fmt;

use crate::calculus::{CalculusError, ExpFun};
use crate::error::Result;
use crate::kdv::{gd_sequence, lax_data};
use crate::ring::{rat, Poly, RatFun, Var};

/// A 2×2 matrix over the exponential extension, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub a11: ExpFun,
    pub a12: ExpFun,
    pub a21: ExpFun,
    pub a22: ExpFun,
}

impl Mat2 {
    pub fn new(a11: ExpFun, a12: ExpFun, a21: ExpFun, a22: ExpFun) -> Mat2 {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn rational(a11: RatFun, a12: RatFun, a21: RatFun, a22: RatFun) -> Mat2 {
        Mat2::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub fn identity() -> Mat2 {
        Mat2::rational(RatFun::one(), RatFun::zero(), RatFun::zero(), RatFun::one())
    }

    /// The fundamental-matrix layout `[[φ₁, φ₂], [φ₁_x, φ₂_x]]`.
    pub fn from_solutions(phi1: &ExpFun, phi2: &ExpFun) -> Mat2 {
        Mat2::new(phi1.clone(), phi2.clone(), phi1.diff(Var::X), phi2.diff(Var::X))
    }

    pub fn entries(&self) -> [&ExpFun; 4] {
        [&self.a11, &self.a12, &self.a21, &self.a22]
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|e| e.is_zero())
    }

    fn map(&self, f: impl Fn(&ExpFun) -> std::result::Result<ExpFun, CalculusError>) -> std::result::Result<Mat2, CalculusError> {
        Ok(Mat2::new(f(&self.a11)?, f(&self.a12)?, f(&self.a21)?, f(&self.a22)?))
    }

    pub fn diff(&self, v: Var) -> Mat2 {
        self.map(|e| Ok(e.diff(v))).expect("differentiation is total")
    }

    pub fn subs(&self, v: Var, value: &RatFun) -> std::result::Result<Mat2, CalculusError> {
        self.map(|e| e.subs(v, value))
    }

    pub fn try_add(&self, o: &Mat2) -> std::result::Result<Mat2, CalculusError> {
        Ok(Mat2::new(self.a11.try_add(&o.a11)?, self.a12.try_add(&o.a12)?, self.a21.try_add(&o.a21)?, self.a22.try_add(&o.a22)?))
    }

    pub fn try_sub(&self, o: &Mat2) -> std::result::Result<Mat2, CalculusError> {
        Ok(Mat2::new(self.a11.try_sub(&o.a11)?, self.a12.try_sub(&o.a12)?, self.a21.try_sub(&o.a21)?, self.a22.try_sub(&o.a22)?))
    }

    pub fn try_mul(&self, o: &Mat2) -> std::result::Result<Mat2, CalculusError> {
        let dot = |a: &ExpFun, b: &ExpFun, c: &ExpFun, d: &ExpFun| a.try_mul(b)?.try_add(&c.try_mul(d)?);
        Ok(Mat2::new(
            dot(&self.a11, &o.a11, &self.a12, &o.a21)?,
            dot(&self.a11, &o.a12, &self.a12, &o.a22)?,
            dot(&self.a21, &o.a11, &self.a22, &o.a21)?,
            dot(&self.a21, &o.a12, &self.a22, &o.a22)?,
        ))
    }

    pub fn det(&self) -> std::result::Result<ExpFun, CalculusError> {
        self.a11.try_mul(&self.a22)?.try_sub(&self.a12.try_mul(&self.a21)?)
    }

    pub fn trace(&self) -> std::result::Result<ExpFun, CalculusError> {
        self.a11.try_add(&self.a22)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a11, self.a12, self.a21, self.a22)
    }
}

fn energy(e: &Poly) -> RatFun {
    RatFun::from_poly(e.clone())
}

/// `U = [[0, 1], [u - E, 0]]`.
#[allow(non_snake_case)]
pub fn build_U(u: &RatFun, e: &Poly) -> Mat2 {
    Mat2::rational(RatFun::zero(), RatFun::one(), u - &energy(e), RatFun::zero())
}

/// `V_r = [[G_r, F_r], [-H_r, -G_r]]` with `E` replaced by `e`.
#[allow(non_snake_case)]
pub fn build_V(u: &RatFun, r: u32, e: &Poly) -> Result<Mat2> {
    let l = lax_data(&gd_sequence(u, r, &[])?);
    let at = |q: &RatFun| q.subs(Var::E, &energy(e));
    let (f, g, h) = (at(l.f())?, at(l.g())?, at(l.h())?);
    Ok(Mat2::rational(g.clone(), f, h.neg(), g.neg()))
}

/// `U_t - V_{r,x} + [U, V_r]`.
pub fn zero_curvature(u: &RatFun, r: u32, e: &Poly) -> Result<Mat2> {
    let (uu, v) = (build_U(u, e), build_V(u, r, e)?);
    let bracket = uu.try_mul(&v)?.try_sub(&v.try_mul(&uu)?)?;
    Ok(uu.diff(Var::T).try_sub(&v.diff(Var::X))?.try_add(&bracket)?)
}

/// `(Φ_x - UΦ, Φ_t - V_rΦ)`.
pub fn check_solution(phi: &Mat2, u: &RatFun, r: u32, e: &Poly) -> Result<(Mat2, Mat2)> {
    let x = phi.diff(Var::X).try_sub(&build_U(u, e).try_mul(phi)?)?;
    let t = phi.diff(Var::T).try_sub(&build_V(u, r, e)?.try_mul(phi)?)?;
    Ok((x, t))
}

/// `(-∂_xxx + 4(u - E)∂_x + 2u_x) X` for `X = φ₁φ₂`.
///
/// With `φ'' = (u - E)φ` this is the operator that annihilates products of
/// solutions; flipping the signs of the last two terms does not.
pub fn second_symmetric_power_check(phi1: &ExpFun, phi2: &ExpFun, u: &RatFun, e: &Poly) -> Result<ExpFun> {
    let x = phi1.try_mul(phi2)?;
    let xx = x.diff(Var::X);
    let xxx = xx.diff(Var::X).diff(Var::X);
    let w = (u - &energy(e)).scale(&rat(4, 1));
    Ok(xxx.neg().try_add(&xx.mul_rat(&w))?.try_add(&x.mul_rat(&u.diff(Var::X).scale(&rat(2, 1))))?)
}
