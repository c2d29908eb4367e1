//! Darboux–Crum steps on potentials and wavefunctions, and the sequence `A_j`
//! relating `f_j` of a potential to `f_j` of its transform.

use crate::calculus::ExpFun;
use crate::error::{Error, Result};
use crate::kdv::{f_polynomial, gd_sequence, GdSequence};
use crate::ring::{rat, RatFun, Var};

/// `(log φ)_x` of a single term `e^{kL} q`, which is `kL_x + q_x/q`.
pub fn log_derivative(phi: &ExpFun) -> Result<RatFun> {
    let (k, q) = phi.as_single().ok_or_else(|| Error::InvalidArgument("logarithmic derivative needs a single exponential term".into()))?;
    let d = phi.diff(Var::X).coeff(k);
    Ok(d.div(q)?)
}

/// `u - σ_x - σ²`, the energy for which `σ` solves the Riccati equation, if it
/// is free of `x` and `t`.
fn riccati_energy(u: &RatFun, sigma: &RatFun) -> Option<RatFun> {
    let e0 = &(u - &sigma.diff(Var::X)) - &sigma.square();
    (!e0.contains(Var::X) && !e0.contains(Var::T)).then_some(e0)
}

/// A seed `φ₀` for `u`, its logarithmic derivative and energy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DarbouxContext {
    u: RatFun,
    phi0: Option<ExpFun>,
    sigma: RatFun,
    e0: RatFun,
}

impl DarbouxContext {
    /// Fails with [`Error::NotASolution`] unless `φ₀_xx = (u - E₀)φ₀` for an
    /// `E₀` free of `x` and `t`.
    pub fn new(u: &RatFun, phi0: &ExpFun) -> Result<DarbouxContext> {
        let sigma = log_derivative(phi0)?;
        let e0 = riccati_energy(u, &sigma).ok_or(Error::NotASolution)?;
        Ok(DarbouxContext { u: u.clone(), phi0: Some(phi0.clone()), sigma, e0 })
    }

    /// From `σ` alone, checking the Riccati equation.
    pub fn from_sigma(u: &RatFun, sigma: &RatFun) -> Result<DarbouxContext> {
        let e0 = riccati_energy(u, sigma).ok_or(Error::RiccatiViolation)?;
        Ok(DarbouxContext { u: u.clone(), phi0: None, sigma: sigma.clone(), e0 })
    }

    pub fn u(&self) -> &RatFun {
        &self.u
    }

    pub fn phi0(&self) -> Option<&ExpFun> {
        self.phi0.as_ref()
    }

    pub fn sigma(&self) -> &RatFun {
        &self.sigma
    }

    pub fn e0(&self) -> &RatFun {
        &self.e0
    }

    /// `ũ = u - 2σ_x`.
    pub fn transformed(&self) -> RatFun {
        &self.u - &self.sigma.diff(Var::X).scale(&rat(2, 1))
    }
}

/// `ũ = u - 2(log φ₀)_xx`, after checking that `φ₀` solves the Schrödinger
/// equation of `u`.
pub fn dt_potential(u: &RatFun, phi0: &ExpFun) -> Result<RatFun> {
    Ok(DarbouxContext::new(u, phi0)?.transformed())
}

/// [`dt_potential`] without the Schrödinger check.
pub fn dt_potential_unchecked(u: &RatFun, phi0: &ExpFun) -> Result<RatFun> {
    Ok(u - &log_derivative(phi0)?.diff(Var::X).scale(&rat(2, 1)))
}

/// `DT(φ₀)φ = φ_x - (φ₀_x/φ₀)φ`.
///
/// Both functions must solve a Schrödinger equation with the same potential:
/// every term of `φ_xx/φ - φ₀_xx/φ₀` has to be one `x`-free constant.
pub fn dt_function(phi0: &ExpFun, phi: &ExpFun) -> Result<ExpFun> {
    let sigma = log_derivative(phi0)?;
    let v0 = &sigma.diff(Var::X) + &sigma.square();
    let phixx = phi.diff(Var::X).diff(Var::X);
    let mut gap: Option<RatFun> = None;
    for (k, q) in phi.terms() {
        let d = &phixx.coeff(*k).div(q)? - &v0;
        if d.contains(Var::X) || gap.as_ref().is_some_and(|g| g != &d) {
            return Err(Error::NotASolution);
        }
        gap = Some(d);
    }
    Ok(phi.diff(Var::X).try_sub(&phi.mul_rat(&sigma))?)
}

/// `A_0 .. A_{r+1}` and `P_0 .. P_r` for one seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASequence {
    sigma: RatFun,
    fs: GdSequence,
    a: Vec<RatFun>,
    p: Vec<RatFun>,
}

impl ASequence {
    pub fn a(&self, j: usize) -> &RatFun {
        &self.a[j]
    }

    pub fn as_slice(&self) -> &[RatFun] {
        &self.a
    }

    /// `P_i = Σ_{j≤i} E^j A_{i-j}`.
    pub fn p(&self, i: usize) -> &RatFun {
        &self.p[i]
    }

    pub fn ps(&self) -> &[RatFun] {
        &self.p
    }

    /// `f_j(u)` of the untransformed potential.
    pub fn fs(&self) -> &GdSequence {
        &self.fs
    }

    pub fn level(&self) -> u32 {
        self.fs.level()
    }

    /// `A_{j,x} + 2σA_j + 2f_{j,x}(u)`.
    pub fn second_recursion_residual(&self, j: usize) -> RatFun {
        let lhs = &self.a[j].diff(Var::X) + &self.sigma.mul(&self.a[j]).scale(&rat(2, 1));
        &lhs + &self.fs.f(j).diff(Var::X).scale(&rat(2, 1))
    }

    /// `Σ_{j≤i} (2σA_{i-j} + 2f_{i-j,x}(u) + A_{i-j,x}) E^j`, zero as a
    /// polynomial in `E`.
    pub fn corollary_sum(&self, i: usize) -> RatFun {
        let e = RatFun::var(Var::E);
        (0..=i).rev().fold(RatFun::zero(), |acc, j| &acc.mul(&e) + &self.second_recursion_residual(i - j))
    }

    /// `P_{i,x} + 2σP_i + 2F_{i,x}(u)`.
    pub fn p_residual(&self, i: usize) -> RatFun {
        let f = f_polynomial(&self.fs, i as u32);
        &(&self.p[i].diff(Var::X) + &self.sigma.mul(&self.p[i]).scale(&rat(2, 1))) + &f.diff(Var::X).scale(&rat(2, 1))
    }

    /// `f_j(ũ) - f_j(u) - A_j` for `j ≤ r+1`, with `f_j(ũ)` computed from
    /// scratch.
    pub fn transform_residuals(&self) -> Result<Vec<RatFun>> {
        let ut = self.fs.potential() - &self.sigma.diff(Var::X).scale(&rat(2, 1));
        let tilde = gd_sequence(&ut, self.level(), &[])?;
        Ok((0..self.a.len()).map(|j| &(tilde.f(j) - self.fs.f(j)) - &self.a[j]).collect())
    }
}

/// `A_j = -¼A_{j-1,xx} + uA_{j-1} - (3/2)σ_xA_{j-1} - σ_x f_{j-1}(u)` up to
/// `A_{r+1}`, cross-checked against `A_{j,x} + 2σA_j + 2f_{j,x}(u) = 0`.
pub fn a_sequence(u: &RatFun, sigma: &RatFun, r: u32) -> Result<ASequence> {
    riccati_energy(u, sigma).ok_or(Error::RiccatiViolation)?;
    let fs = gd_sequence(u, r, &[])?;
    let sx = sigma.diff(Var::X);
    let mut a = vec![RatFun::zero()];
    for j in 1..=r as usize + 1 {
        let prev = &a[j - 1];
        let next = &(&(&prev.diff(Var::X).diff(Var::X).scale(&rat(-1, 4)) + &u.mul(prev)) - &sx.mul(prev).scale(&rat(3, 2))) - &sx.mul(fs.f(j - 1));
        a.push(next);
    }
    let e = RatFun::var(Var::E);
    let p = (0..=r as usize).map(|i| (0..=i).rev().fold(RatFun::zero(), |acc, j| &acc.mul(&e) + &a[i - j])).collect();
    let seq = ASequence { sigma: sigma.clone(), fs, a, p };
    if let Some(j) = (0..=r as usize + 1).find(|&j| !seq.second_recursion_residual(j).is_zero()) {
        return Err(Error::CrossCheckFailure(format!("second A recursion at j = {j}")));
    }
    Ok(seq)
}

/// `¼P_{r,xx} + EP_r + σ_xF_r(u) + ½P_r(-2u + 3σ_x)`.
fn sigma_t_expansion(seq: &ASequence, u: &RatFun, sigma: &RatFun, r: u32) -> RatFun {
    let p = seq.p(r as usize);
    let sx = sigma.diff(Var::X);
    let f = f_polynomial(seq.fs(), r);
    let bracket = &u.scale(&rat(-2, 1)) + &sx.scale(&rat(3, 1));
    let sum = &(&p.diff(Var::X).diff(Var::X).scale(&rat(1, 4)) + &RatFun::var(Var::E).mul(p)) + &sx.mul(&f);
    &sum + &p.mul(&bracket).scale(&rat(1, 2))
}

/// `σ_{t_r}`, as `-A_{r+1}` and as the expansion in `P_r`; the two must agree.
pub fn sigma_t(ctx: &DarbouxContext, r: u32) -> Result<RatFun> {
    let seq = a_sequence(ctx.u(), ctx.sigma(), r)?;
    let minus_a = seq.a(r as usize + 1).neg();
    if sigma_t_expansion(&seq, ctx.u(), ctx.sigma(), r) != minus_a {
        return Err(Error::IdentityFailure(format!("sigma_t expansions at level {r}")));
    }
    Ok(minus_a)
}

/// `g_r(σ) = -A_{r+1}`.
pub fn g_r(u: &RatFun, sigma: &RatFun, r: u32) -> Result<RatFun> {
    Ok(a_sequence(u, sigma, r)?.a(r as usize + 1).neg())
}

/// `((2σ + ∂_x)g_r - 2f_{r+1,x}(u), (2σ - ∂_x)g_r - 2f_{r+1,x}(ũ))`.
pub fn gr_relations(u: &RatFun, sigma: &RatFun, r: u32) -> Result<(RatFun, RatFun)> {
    let seq = a_sequence(u, sigma, r)?;
    let g = seq.a(r as usize + 1).neg();
    let two_sigma_g = sigma.mul(&g).scale(&rat(2, 1));
    let gx = g.diff(Var::X);
    let ut = u - &sigma.diff(Var::X).scale(&rat(2, 1));
    let flow = |w: &RatFun| -> Result<RatFun> { Ok(gd_sequence(w, r, &[])?.f(r as usize + 1).diff(Var::X).scale(&rat(2, 1))) };
    Ok((&(&two_sigma_g + &gx) - &flow(u)?, &(&two_sigma_g - &gx) - &flow(&ut)?))
}
