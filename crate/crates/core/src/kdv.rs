//! Gelfand–Dickii recursion, the Lax data `F_r, G_r, H_r` and the level `r`
//! equation of the hierarchy in both of its forms.

use crate::calculus::integrate_x;
use crate::error::{Error, Result};
use crate::ring::{rat, RatFun, Var};

/// `f_0 .. f_{r+1}` of a potential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdSequence {
    potential: RatFun,
    constants: Vec<RatFun>,
    fs: Vec<RatFun>,
}

impl GdSequence {
    pub fn potential(&self) -> &RatFun {
        &self.potential
    }

    /// `c_1, c_2, ...`; missing entries are zero.
    pub fn constants(&self) -> &[RatFun] {
        &self.constants
    }

    pub fn fs(&self) -> &[RatFun] {
        &self.fs
    }

    pub fn f(&self, j: usize) -> &RatFun {
        &self.fs[j]
    }

    /// The level `r`; the sequence runs up to `f_{r+1}`.
    pub fn level(&self) -> u32 {
        self.fs.len() as u32 - 2
    }
}

/// `f_{j,x}` from `f_{j-1}`.
fn recursion_rhs(u: &RatFun, ux: &RatFun, prev: &RatFun) -> RatFun {
    let p1 = prev.diff(Var::X);
    let p3 = p1.diff(Var::X).diff(Var::X);
    &(&p3.scale(&rat(-1, 4)) + &u.mul(&p1)) + &ux.mul(prev).scale(&rat(1, 2))
}

/// Run the recursion `f_{j,x} = -¼f_{j-1,xxx} + u f_{j-1,x} + ½u_x f_{j-1}`
/// up to `f_{r+1}`, adding `c_j` after each antiderivative.
///
/// The antiderivative carries no constant of its own (see [`integrate_x`]),
/// so for potentials vanishing as `x → ∞` the `f_j` are the differential
/// polynomials of the hierarchy with the given constants.
pub fn gd_sequence(u: &RatFun, r: u32, constants: &[RatFun]) -> Result<GdSequence> {
    let ux = u.diff(Var::X);
    let mut fs = vec![RatFun::one()];
    for j in 1..=r as usize + 1 {
        let fx = recursion_rhs(u, &ux, &fs[j - 1]);
        let mut f = integrate_x(&fx)?;
        if let Some(c) = constants.get(j - 1) {
            f = &f + c;
        }
        fs.push(f);
    }
    Ok(GdSequence { potential: u.clone(), constants: constants.to_vec(), fs })
}

/// `F_r`, `G_r`, `H_r` as polynomials in the variable `E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaxData {
    level: u32,
    f: RatFun,
    g: RatFun,
    h: RatFun,
}

impl LaxData {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn f(&self) -> &RatFun {
        &self.f
    }

    pub fn g(&self) -> &RatFun {
        &self.g
    }

    pub fn h(&self) -> &RatFun {
        &self.h
    }
}

/// `Σ_j c_j E^j`.
pub fn poly_in_e(coeffs: &[RatFun]) -> RatFun {
    let e = RatFun::var(Var::E);
    coeffs.iter().rev().fold(RatFun::zero(), |acc, c| &acc.mul(&e) + c)
}

/// `F_r = Σ_{j≤r} f_{r-j} E^j` of a sequence at its own level.
pub fn f_polynomial(seq: &GdSequence, r: u32) -> RatFun {
    let r = r as usize;
    let coeffs: Vec<RatFun> = (0..=r).map(|j| seq.f(r - j).clone()).collect();
    poly_in_e(&coeffs)
}

pub fn lax_data(seq: &GdSequence) -> LaxData {
    let r = seq.level();
    let u = seq.potential();
    let f = f_polynomial(seq, r);
    let fx = f.diff(Var::X);
    let g = fx.scale(&rat(-1, 2));
    let e_minus_u = &RatFun::var(Var::E) - u;
    let h = &e_minus_u.mul(&f) + &fx.diff(Var::X).scale(&rat(1, 2));
    LaxData { level: r, f, g, h }
}

/// Right-hand side `-½F_{r,xxx} - 2(E-u)F_{r,x} + u_x F_r` of the Lax form.
pub fn lax_form_rhs(u: &RatFun, f: &RatFun) -> RatFun {
    let fx = f.diff(Var::X);
    let fxxx = fx.diff(Var::X).diff(Var::X);
    let e_minus_u = &RatFun::var(Var::E) - u;
    &(&fxxx.scale(&rat(-1, 2)) - &e_minus_u.mul(&fx).scale(&rat(2, 1))) + &u.diff(Var::X).mul(f)
}

/// `u_t - 2f_{r+1,x}(u)` with `c = 0`. The Lax form is computed as well and
/// must be free of `E` and agree with `2f_{r+1,x}`.
pub fn kdv_residual(u: &RatFun, r: u32) -> Result<RatFun> {
    let seq = gd_sequence(u, r, &[])?;
    let flow = seq.f(r as usize + 1).diff(Var::X).scale(&rat(2, 1));
    let lax = lax_form_rhs(u, &f_polynomial(&seq, r));
    if lax.contains(Var::E) || lax != flow {
        return Err(Error::FormMismatch(r));
    }
    Ok(&u.diff(Var::T) - &flow)
}

/// `2f_{n+1,x}(u0)` for a time-independent potential.
pub fn skdv_residual(u0: &RatFun, n: u32) -> Result<RatFun> {
    if u0.contains(Var::T) {
        return Err(Error::NotStationary);
    }
    let seq = gd_sequence(u0, n, &[])?;
    Ok(seq.f(n as usize + 1).diff(Var::X).scale(&rat(2, 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_ratfun;

    fn rf(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    #[test]
    fn zero_potential() {
        let seq = gd_sequence(&RatFun::zero(), 3, &[]).unwrap();
        assert!(seq.f(0).is_one());
        assert!(seq.fs()[1..].iter().all(RatFun::is_zero));
        let c: Vec<RatFun> = (1..=4).map(|j| RatFun::var(Var::c(j))).collect();
        let seq = gd_sequence(&RatFun::zero(), 3, &c).unwrap();
        for j in 1..=4 {
            assert_eq!(seq.f(j), &c[j - 1]);
        }
    }

    #[test]
    fn closed_forms_with_symbolic_constants() {
        let u = rf("6*x*(x^3 - 6*t)/(x^3 + 3*t)^2");
        let c: Vec<RatFun> = (1..=3).map(|j| RatFun::var(Var::c(j))).collect();
        let seq = gd_sequence(&u, 2, &c).unwrap();
        let (ux, uxx) = (u.diff(Var::X), u.diff(Var::X).diff(Var::X));
        let uxxxx = uxx.diff(Var::X).diff(Var::X);
        let f1 = &u.scale(&rat(1, 2)) + &c[0];
        let base2 = &uxx.scale(&rat(-1, 8)) + &u.square().scale(&rat(3, 8));
        let f2 = &(&base2 + &c[0].mul(&u).scale(&rat(1, 2))) + &c[1];
        let f3 = &(&(&(&uxxxx.scale(&rat(1, 32)) - &u.mul(&uxx).scale(&rat(5, 16))) - &ux.square().scale(&rat(5, 32))) + &u.pow(3).unwrap().scale(&rat(5, 16)))
            + &(&(&c[0].mul(&base2) + &c[1].mul(&u).scale(&rat(1, 2))) + &c[2]);
        assert_eq!(seq.f(1), &f1);
        assert_eq!(seq.f(2), &f2);
        assert_eq!(seq.f(3), &f3);
    }

    #[test]
    fn f2_of_time_two_potential() {
        let u = rf("6*(2*x^10 + 270*x^5*t + 675*t^2)/(x^2*(x^5 - 45*t)^2)");
        let seq = gd_sequence(&u, 1, &[]).unwrap();
        assert_eq!(seq.f(2), &rf("45*x*(x^5 + 30*t)/(x^5 - 45*t)^2"));
    }

    #[test]
    fn lax_data_shapes() {
        let u = rf("6*x*(x^3 - 6*t)/(x^3 + 3*t)^2");
        for r in 1..=2 {
            let l = lax_data(&gd_sequence(&u, r, &[]).unwrap());
            assert_eq!(l.f().num().degree_in(Var::E), r);
            assert_eq!(l.h().num().degree_in(Var::E), r + 1);
            assert_eq!(l.g(), &l.f().diff(Var::X).scale(&rat(-1, 2)));
        }
        let l = lax_data(&gd_sequence(&u, 1, &[]).unwrap());
        assert_eq!(l.f(), &(&RatFun::var(Var::E) + &u.scale(&rat(1, 2))));
    }

    #[test]
    fn free_potential_f_polynomial_at_negative_lambda_squared() {
        for r in 1..=3u32 {
            let l = lax_data(&gd_sequence(&RatFun::zero(), r, &[]).unwrap());
            let f = l.f().subs(Var::E, &rf("-lambda^2")).unwrap();
            let sign = if r % 2 == 0 { 1 } else { -1 };
            assert_eq!(f, RatFun::var(Var::LAMBDA).pow(2 * r as i32).unwrap().scale(&rat(sign, 1)));
        }
    }

    #[test]
    fn residuals() {
        assert!(kdv_residual(&rf("6*x*(x^3 - 6*t)/(x^3 + 3*t)^2"), 1).unwrap().is_zero());
        assert!(kdv_residual(&rf("2/x^2"), 1).unwrap().is_zero());
        assert!(!kdv_residual(&rf("6/x^2 + t"), 1).unwrap().is_zero());
        assert!(skdv_residual(&rf("6/x^2"), 2).unwrap().is_zero());
        assert!(skdv_residual(&RatFun::zero(), 4).unwrap().is_zero());
        assert!(skdv_residual(&rf("6*(x - 1)*(x^3 - 3*x^2 + 3*x - 3)/(x^2*(x^2 - 3*x + 3)^2)"), 2).unwrap().is_zero());
        assert_eq!(skdv_residual(&rf("6/x^2 + t"), 2), Err(Error::NotStationary));
    }
}
