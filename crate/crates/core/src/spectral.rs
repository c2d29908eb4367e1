//! Spectral curves `μ² = R(E)` of stationary potentials, Green's functions on
//! them, and how Darboux steps act on both.
//!
//! Every Green's function here has the shape `g = iΦ/(2μ)` with `Φ` rational
//! in `(E, x)`, so it is stored as `Φ` alone. Where the square root itself has
//! to be handled (the Riccati solutions `σ±`) the generator is `w = iμ` with
//! `w² = -R(E)`, which keeps all coefficients rational.

use std::fmt;

use crate::error::{Error, Result};
use crate::kdv::{f_polynomial, gd_sequence, lax_data, GdSequence};
use crate::ring::{rat, Poly, Rat, RatFun, RingError, Var};

fn energy() -> RatFun {
    RatFun::var(Var::E)
}

/// `F F_xx/2 - (u - E)F² - F_x²/4`; constant in `x` exactly when `F` is the
/// `F_n` of a stationary solution of level `n`.
pub fn curve_expression(u: &RatFun, f: &RatFun) -> RatFun {
    let fx = f.diff(Var::X);
    let fxx = fx.diff(Var::X);
    let u_minus_e = u - &energy();
    &(&f.mul(&fxx).scale(&rat(1, 2)) - &u_minus_e.mul(&f.square())) - &fx.square().scale(&rat(1, 4))
}

/// Degree in `E` of a function polynomial in `E`; `None` if `E` divides into it.
pub fn e_degree(f: &RatFun) -> Option<u32> {
    (!f.den().contains(Var::E)).then(|| f.num().degree_in(Var::E))
}

/// `num / den`, required to be polynomial in `E`.
fn e_exact(num: &RatFun, den: &RatFun) -> Result<RatFun> {
    let q = num.div(den)?;
    if q.den().contains(Var::E) {
        return Err(RingError::InexactDivision.into());
    }
    Ok(q)
}

fn require_degree(what: &str, f: &RatFun, expected: u32) -> Result<()> {
    match e_degree(f) {
        Some(d) if d == expected || (f.is_zero() && expected == 0) => Ok(()),
        found => Err(Error::DegreeViolation(format!("{what}: expected degree {expected} in E, found {found:?}"))),
    }
}

/// `ν^d f(E/ν)`.
fn homogenize(f: &RatFun, d: u32) -> Result<RatFun> {
    let nu = RatFun::var(Var::NU);
    let scaled = f.subs(Var::E, &energy().div(&nu)?)?;
    Ok(scaled.mul(&nu.pow(d as i32)?))
}

/// Whether `f` is a polynomial in `(E, ν)`, homogeneous of degree `d`, over
/// coefficients in the remaining variables.
pub fn is_homogeneous(f: &RatFun, d: u32) -> bool {
    if f.den().contains(Var::E) || f.den().contains(Var::NU) {
        return false;
    }
    f.num().terms().iter().all(|(m, _)| m.exp(Var::E) + m.exp(Var::NU) == d)
}

/// `μ² - R(E)` with `R ∈ ℚ[E]` of degree `2n + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralCurve {
    level: u32,
    r: Poly,
}

impl SpectralCurve {
    /// Checks that `r` is univariate in `E` of degree `2·level + 1`.
    pub fn new(level: u32, r: Poly) -> Result<SpectralCurve> {
        if r.vars().iter().any(|&v| v != Var::E) {
            return Err(Error::InvalidArgument(format!("curve polynomial {r} is not univariate in E")));
        }
        if r.degree_in(Var::E) != 2 * level + 1 {
            return Err(Error::DegreeViolation(format!("R = {r} should have degree {} in E", 2 * level + 1)));
        }
        Ok(SpectralCurve { level, r })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn r(&self) -> &Poly {
        &self.r
    }

    /// `C_i`, the coefficient of `E^i`.
    pub fn coefficient(&self, i: u32) -> Rat {
        self.r.coeff_of(Var::E, i).as_constant().unwrap_or_else(|| rat(0, 1))
    }

    pub fn coefficients(&self) -> Vec<Rat> {
        (0..=2 * self.level + 1).map(|i| self.coefficient(i)).collect()
    }

    pub fn eval(&self, e0: &Rat) -> Rat {
        self.r.eval(Var::E, e0).as_constant().unwrap_or_else(|| rat(0, 1))
    }

    /// `R'(E₀)`.
    pub fn eval_derivative(&self, e0: &Rat) -> Rat {
        self.r.diff(Var::E).eval(Var::E, e0).as_constant().unwrap_or_else(|| rat(0, 1))
    }

    /// `R(E₀)` for a rational or symbolic `E₀`.
    pub fn value_at(&self, e0: &RatFun) -> Result<RatFun> {
        Ok(RatFun::from_poly(self.r.clone()).subs(Var::E, e0)?)
    }

    pub fn as_ratfun(&self) -> RatFun {
        RatFun::from_poly(self.r.clone())
    }

    /// `R̂(E, ν) = ν^{2n+1} R(E/ν)`.
    pub fn homogenized(&self) -> Poly {
        let top = 2 * self.level + 1;
        let terms = (0..=top).map(|j| {
            let m = crate::ring::Mono::from_pairs([(Var::E, j), (Var::NU, top - j)]);
            (m, self.coefficient(j))
        });
        Poly::from_terms(terms)
    }
}

impl fmt::Display for SpectralCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mu^2 - ({})", self.r)
    }
}

/// The curve of a stationary solution of level `n`, with every `c_j = 0`.
pub fn spectral_curve(u0: &RatFun, n: u32) -> Result<SpectralCurve> {
    spectral_curve_with(u0, n, &[])
}

/// The curve with integration constants `c_1, c_2, ...` in `F_n`.
pub fn spectral_curve_with(u0: &RatFun, n: u32, constants: &[Rat]) -> Result<SpectralCurve> {
    Ok(Green::with_constants(u0, n, constants)?.curve)
}

fn curve_from(u0: &RatFun, f: &RatFun, n: u32) -> Result<SpectralCurve> {
    let r = curve_expression(u0, f);
    if r.contains(Var::X) {
        return Err(Error::NotStationarySolution(n));
    }
    match r.as_poly() {
        Some(p) => SpectralCurve::new(n, p.clone()),
        None => Err(Error::NotStationarySolution(n)),
    }
}

/// `∂_x C₀ + 2f_n f_{n+1,x}`, where `C₀ = R(0)` is formed even when `u0` is
/// not stationary of level `n`.
pub fn c0_check(u0: &RatFun, n: u32) -> Result<RatFun> {
    let seq = gd_sequence(u0, n, &[])?;
    let fnn = seq.f(n as usize);
    let c0 = curve_expression(u0, fnn).subs(Var::E, &RatFun::zero())?;
    let rhs = fnn.mul(&seq.f(n as usize + 1).diff(Var::X)).scale(&rat(2, 1));
    Ok(&c0.diff(Var::X) + &rhs)
}

/// A value of `μ₀` over `E₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mu0 {
    Zero,
    /// `μ₀ = q`.
    Real(Rat),
    /// `μ₀ = i q`.
    Imaginary(Rat),
    /// Some root of `μ₀² = R(E₀)`, left symbolic.
    Unspecified,
}

/// A point candidate of the projective closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointKind {
    Affine { e0: Rat, mu0: Mu0 },
    /// `P_∞ = [0:1:0]`.
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Regular,
    AffineSingular,
    AtInfinity,
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointClass::Regular => "regular",
            PointClass::AffineSingular => "affine_singular",
            PointClass::AtInfinity => "point_at_infinity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePoint {
    kind: PointKind,
    class: PointClass,
}

impl CurvePoint {
    pub fn kind(&self) -> &PointKind {
        &self.kind
    }

    pub fn class(&self) -> PointClass {
        self.class
    }

    pub fn e0(&self) -> Option<&Rat> {
        match &self.kind {
            PointKind::Affine { e0, .. } => Some(e0),
            PointKind::Infinity => None,
        }
    }

    /// `iμ₀`: rational when `μ₀` is zero or imaginary, otherwise the symbol
    /// `mu0` standing for `iμ₀` (only ever used linearly).
    pub fn i_mu0(&self) -> RatFun {
        match &self.kind {
            PointKind::Affine { mu0: Mu0::Zero, .. } => RatFun::zero(),
            PointKind::Affine { mu0: Mu0::Imaginary(q), .. } => RatFun::constant(-q.clone()),
            _ => RatFun::var(Var::MU0),
        }
    }
}

/// Label a point by the singular locus: multiple roots of `R` on `μ = 0`, and
/// `P_∞`.
pub fn classify_point(curve: &SpectralCurve, kind: PointKind) -> Result<CurvePoint> {
    let PointKind::Affine { e0, mu0 } = kind else {
        return Ok(CurvePoint { kind: PointKind::Infinity, class: PointClass::AtInfinity });
    };
    let value = curve.eval(&e0);
    let zero = rat(0, 1);
    let on_curve = match &mu0 {
        Mu0::Zero => value == zero,
        Mu0::Real(q) => q * q == value,
        Mu0::Imaginary(q) => -(q * q) == value,
        Mu0::Unspecified => true,
    };
    if !on_curve {
        return Err(Error::NotOnCurve);
    }
    let mu0 = if value == zero { Mu0::Zero } else { mu0 };
    let class = if value == zero && curve.eval_derivative(&e0) == zero { PointClass::AffineSingular } else { PointClass::Regular };
    Ok(CurvePoint { kind: PointKind::Affine { e0, mu0 }, class })
}

/// The curve after a Darboux step at `pt`: `E²R` at infinity (level up),
/// unchanged at regular points, `R/(E - E₀)²` at affine singular points
/// (level down).
pub fn transformed_curve(curve: &SpectralCurve, pt: &CurvePoint) -> Result<SpectralCurve> {
    let e = Poly::var(Var::E);
    match (pt.class, pt.e0()) {
        (PointClass::AtInfinity, _) => SpectralCurve::new(curve.level + 1, curve.r.mul(&e.square())),
        (PointClass::Regular, _) => Ok(curve.clone()),
        (PointClass::AffineSingular, Some(e0)) => {
            let factor = e.sub(&Poly::constant(e0.clone())).square();
            SpectralCurve::new(curve.level - 1, curve.r.exact_div(&factor)?)
        }
        (PointClass::AffineSingular, None) => unreachable!("singular points are affine"),
    }
}

/// `a + b·w` with `w² = d`, where `d` is free of `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExt {
    a: RatFun,
    b: RatFun,
    d: RatFun,
}

impl QuadExt {
    pub fn new(a: RatFun, b: RatFun, d: RatFun) -> QuadExt {
        debug_assert!(!d.contains(Var::X));
        QuadExt { a, b, d }
    }

    pub fn rational(a: RatFun, d: &RatFun) -> QuadExt {
        QuadExt::new(a, RatFun::zero(), d.clone())
    }

    /// `w` itself.
    pub fn generator(d: &RatFun) -> QuadExt {
        QuadExt::new(RatFun::zero(), RatFun::one(), d.clone())
    }

    pub fn a(&self) -> &RatFun {
        &self.a
    }

    pub fn b(&self) -> &RatFun {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a + &o.a, &self.b + &o.b, self.d.clone())
    }

    pub fn sub(&self, o: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a - &o.a, &self.b - &o.b, self.d.clone())
    }

    pub fn mul(&self, o: &QuadExt) -> QuadExt {
        let a = &self.a.mul(&o.a) + &self.b.mul(&o.b).mul(&self.d);
        let b = &self.a.mul(&o.b) + &self.b.mul(&o.a);
        QuadExt::new(a, b, self.d.clone())
    }

    pub fn scale(&self, k: &RatFun) -> QuadExt {
        QuadExt::new(self.a.mul(k), self.b.mul(k), self.d.clone())
    }

    pub fn diff_x(&self) -> QuadExt {
        QuadExt::new(self.a.diff(Var::X), self.b.diff(Var::X), self.d.clone())
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})*i*mu", self.a, self.b)
    }
}

/// The Green's function `g = iF_n/(2μ)` of a stationary solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Green {
    seq: GdSequence,
    f: RatFun,
    curve: SpectralCurve,
}

/// [`Green`] with every `c_j = 0`.
pub fn green(u0: &RatFun, n: u32) -> Result<Green> {
    Green::with_constants(u0, n, &[])
}

impl Green {
    /// Fails with [`Error::NotStationarySolution`] if `x` survives in `R`.
    pub fn with_constants(u0: &RatFun, n: u32, constants: &[Rat]) -> Result<Green> {
        if u0.contains(Var::T) {
            return Err(Error::NotStationary);
        }
        let cs: Vec<RatFun> = constants.iter().cloned().map(RatFun::constant).collect();
        let seq = gd_sequence(u0, n, &cs)?;
        let f = f_polynomial(&seq, n);
        let curve = curve_from(u0, &f, n)?;
        Ok(Green { seq, f, curve })
    }

    pub fn level(&self) -> u32 {
        self.curve.level
    }

    pub fn potential(&self) -> &RatFun {
        self.seq.potential()
    }

    pub fn sequence(&self) -> &GdSequence {
        &self.seq
    }

    /// `F_n(E, x)`, the `Φ` of `g = iΦ/(2μ)`.
    pub fn f(&self) -> &RatFun {
        &self.f
    }

    pub fn curve(&self) -> &SpectralCurve {
        &self.curve
    }

    /// `F_n` at `E = e0`.
    pub fn f_at(&self, e0: &RatFun) -> Result<RatFun> {
        Ok(self.f.subs(Var::E, e0)?)
    }

    /// `F_n(E₀)`, which every seed formula divides by.
    fn seed_f(&self, e0: &RatFun) -> Result<RatFun> {
        let f0 = self.f_at(e0)?;
        if f0.is_zero() {
            return Err(Error::InvalidArgument(format!("F_n vanishes at E0 = {e0}")));
        }
        Ok(f0)
    }

    /// `w² = (iμ)² = -R(E)`.
    fn w_sq(&self) -> RatFun {
        self.curve.as_ratfun().neg()
    }

    /// `g = iF/(2μ) = wF/(2R)`.
    pub fn g(&self) -> Result<QuadExt> {
        let b = self.f.div(&self.curve.as_ratfun().scale(&rat(2, 1)))?;
        Ok(QuadExt::new(RatFun::zero(), b, self.w_sq()))
    }

    /// `σ± = (±iμ + F_x/2)/F`.
    pub fn sigma_pm(&self) -> Result<(QuadExt, QuadExt)> {
        let a = self.f.diff(Var::X).div(&self.f.scale(&rat(2, 1)))?;
        let b = self.f.recip()?;
        Ok((QuadExt::new(a.clone(), b.clone(), self.w_sq()), QuadExt::new(a, b.neg(), self.w_sq())))
    }

    /// `½gg_xx - (u - E)g² - ¼g_x² + ¼`, zero on the curve.
    pub fn differential_identity(&self) -> Result<QuadExt> {
        let g = self.g()?;
        let gx = g.diff_x();
        let gxx = gx.diff_x();
        let u_minus_e = self.potential() - &energy();
        let lhs = g.mul(&gxx).scale(&RatFun::constant(rat(1, 2))).sub(&g.mul(&g).scale(&u_minus_e)).sub(&gx.mul(&gx).scale(&RatFun::constant(rat(1, 4))));
        Ok(lhs.add(&QuadExt::rational(RatFun::constant(rat(1, 4)), &self.w_sq())))
    }

    /// `σ² + σ_x - (u - E)` for `σ+` and `σ-`.
    pub fn riccati_residuals(&self) -> Result<(QuadExt, QuadExt)> {
        let (p, m) = self.sigma_pm()?;
        let target = QuadExt::rational(self.potential() - &energy(), &self.w_sq());
        let res = |s: &QuadExt| s.mul(s).add(&s.diff_x()).sub(&target);
        Ok((res(&p), res(&m)))
    }

    /// `σ+ + σ- - F_x/F`, `σ+ - σ- - 2iμ/F`, `σ+σ- - H_n/F`.
    pub fn sigma_identities(&self) -> Result<[QuadExt; 3]> {
        let (p, m) = self.sigma_pm()?;
        let d = self.w_sq();
        let h = lax_data(&self.seq).h().clone();
        let sum = QuadExt::rational(self.f.diff(Var::X).div(&self.f)?, &d);
        let diff = QuadExt::generator(&d).scale(&RatFun::int(2).div(&self.f)?);
        let prod = QuadExt::rational(h.div(&self.f)?, &d);
        Ok([p.add(&m).sub(&sum), p.sub(&m).sub(&diff), p.mul(&m).sub(&prod)])
    }

    /// `Φ` of the transformed Green's function with seed point `(E₀, μ₀)`:
    /// `(R F₀² - R(E₀)F² - iμ₀F W + W²/4) / ((E - E₀)F F₀²)` with
    /// `W = F₀F_x - F₀_xF`.
    pub fn transformed_phi(&self, e0: &RatFun, i_mu0: &RatFun) -> Result<RatFun> {
        if e0.contains(Var::E) {
            return Err(Error::InvalidArgument("E0 must differ from E".into()));
        }
        let f = &self.f;
        let f0 = self.seed_f(e0)?;
        let w = &f0.mul(&f.diff(Var::X)) - &f0.diff(Var::X).mul(f);
        let r = self.curve.as_ratfun();
        let r0 = self.curve.value_at(e0)?;
        let num = &(&(&r.mul(&f0.square()) - &r0.mul(&f.square())) - &i_mu0.mul(f).mul(&w)) + &w.square().scale(&rat(1, 4));
        let den = (&energy() - e0).mul(f).mul(&f0.square());
        Ok(num.div(&den)?)
    }

    /// `Φ` of the transformed Green's function for a Riccati seed `σ₀` at
    /// `E₀`: `(H - σ₀F_x + σ₀²F)/(E - E₀)`, from `g̃ = (σ+ - σ₀)(σ- - σ₀)g/(E - E₀)`.
    pub fn transformed_phi_from_seed(&self, e0: &RatFun, sigma0: &RatFun) -> Result<RatFun> {
        let riccati = &(&sigma0.square() + &sigma0.diff(Var::X)) - &(self.potential() - e0);
        if !riccati.is_zero() {
            return Err(Error::RiccatiViolation);
        }
        let h = lax_data(&self.seq).h().clone();
        let num = &(&h - &sigma0.mul(&self.f.diff(Var::X))) + &sigma0.square().mul(&self.f);
        Ok(num.div(&(&energy() - e0))?)
    }

    /// The transformed Green's function at an affine point, reduced to
    /// `iF̃/(2μ̃)`.
    pub fn transformed(&self, pt: &CurvePoint) -> Result<TransformedGreen> {
        let e0 = pt.e0().ok_or_else(|| Error::InvalidArgument("the transformed Green's function needs an affine point".into()))?;
        let e0 = RatFun::constant(e0.clone());
        let phi = self.transformed_phi(&e0, &pt.i_mu0())?;
        let n = self.level();
        let (f_tilde, mu_scale) = match pt.class {
            PointClass::Regular => {
                let f = e_exact(&phi, &RatFun::one())?;
                require_degree("regular-point transform", &f, n)?;
                (f, RatFun::one())
            }
            PointClass::AffineSingular => {
                let shift = &energy() - &e0;
                let f = e_exact(&phi, &shift)?;
                require_degree("singular-point transform", &f, n - 1)?;
                (f, shift.recip()?)
            }
            PointClass::AtInfinity => unreachable!("rejected above"),
        };
        let curve = transformed_curve(&self.curve, pt)?;
        Ok(TransformedGreen { phi, f_tilde, mu_scale, curve })
    }

    /// The homogenized transformed Green's function at `E₀ = 0`: at `P_∞` when
    /// `C₀ = 0`, or at an affine point `(0, μ₀)` with `μ₀ ≠ 0` when `C₀ ≠ 0`.
    pub fn homogenized(&self, pt: &CurvePoint) -> Result<HomogenizedGreen> {
        let n = self.level();
        let c0 = self.curve.coefficient(0);
        let nu = RatFun::var(Var::NU);
        let u = self.potential();
        let fh = homogenize(&self.f, n)?;
        let fx = self.f.diff(Var::X);
        let fhx = homogenize(&fx, n.saturating_sub(1))?;
        let fhxx = homogenize(&fx.diff(Var::X), n.saturating_sub(1))?;
        let base = &nu.square().mul(&fhxx).scale(&rat(1, 2)) + &(&energy() - &nu.mul(u)).mul(&fh);
        let denom = energy().mul(&nu.pow(n as i32 - 1)?);
        let zero = rat(0, 1);
        let (proposition, numerator, phi_h, curve) = match (&pt.kind, c0 == zero) {
            (PointKind::Infinity, true) => {
                let phi_h = base.div(&denom)?;
                (HomogenizedCase::InfinityZeroC0, base, phi_h, transformed_curve(&self.curve, pt)?)
            }
            (PointKind::Affine { e0, mu0 }, false) if *e0 == zero && *mu0 != Mu0::Zero => {
                let fnn = self.seq.f(n as usize);
                let fnx = fnn.diff(Var::X);
                let fn2 = fnn.square();
                let extra = &(&nu.mul(&fnx.square()).mul(&fh).div(&fn2.scale(&rat(4, 1)))? - &nu.square().mul(&fnx).mul(&fhx).div(&fnn.scale(&rat(2, 1)))?)
                    - &nu.mul(&RatFun::constant(c0)).mul(&fh).div(&fn2)?;
                let numerator = &base + &extra;
                let y = (&nu.mul(fnn).mul(&fhx) - &fnx.mul(&fh)).div(&energy().mul(&nu.pow(n as i32 - 2)?).mul(&fn2))?;
                let phi_h = &numerator.div(&denom)? - &pt.i_mu0().mul(&y);
                (HomogenizedCase::AffineNonzeroC0, numerator, phi_h, self.curve.clone())
            }
            _ => {
                return Err(Error::InvalidArgument(
                    "homogenized transform needs P_inf with C0 = 0, or (0, mu0) with mu0 != 0 and C0 != 0".into(),
                ))
            }
        };
        if !is_homogeneous(&numerator, n + 1) {
            return Err(Error::HomogeneityFailure(n + 1));
        }
        Ok(HomogenizedGreen { case: proposition, numerator, phi_h, curve })
    }

    /// The appendix divisions at `E₀`, which may be rational or the symbol
    /// `E0`. Each applicable corollary is performed exactly; a failed division
    /// or degree bound is an error.
    pub fn appendix_divisions(&self, e0: &RatFun) -> Result<AppendixReport> {
        if e0.contains(Var::E) {
            return Err(Error::InvalidArgument("E0 must differ from E".into()));
        }
        let n = self.level();
        let u = self.potential();
        let f = &self.f;
        let fx = f.diff(Var::X);
        let f0 = self.seed_f(e0)?;
        let f0x = f0.diff(Var::X);
        let shift = &energy() - e0;

        let w = &f0.mul(&fx) - &f0x.mul(f);
        let p = e_exact(&w, &shift)?;
        let p_ok = match e_degree(&p) {
            Some(d) => p.is_zero() || d + 1 <= n,
            None => false,
        };
        if !p_ok {
            return Err(Error::DegreeViolation(format!("P_n = {p} exceeds degree {} in E", n as i64 - 1)));
        }

        let r = self.curve.as_ratfun();
        let r0 = self.curve.value_at(e0)?;
        let lhs = &r.mul(&f0.square()) - &r0.mul(&f.square());
        let bracket = &(&f.mul(&f0).mul(&p.diff(Var::X)).scale(&rat(1, 2)) + &f.square().mul(&f0.square()))
            - &p.mul(&(&f.mul(&f0x) + &fx.mul(&f0))).scale(&rat(1, 4));
        if lhs != shift.mul(&bracket) {
            return Err(Error::IdentityFailure("mu^2 F0^2 - mu0^2 F^2 expansion".into()));
        }

        let root = match e0.as_constant() {
            Some(c) if self.curve.eval(&c) == rat(0, 1) => Some(self.curve.eval_derivative(&c) == rat(0, 1)),
            _ => None,
        };
        let p_sq_term = p.square().div(&f.mul(&f0.square()).scale(&rat(4, 1)))?;
        let mut simple_root = None;
        let mut double_root = None;
        match root {
            Some(false) => {
                let num = &(&(&f0.square().mul(&fx.diff(Var::X)).scale(&rat(2, 1)) - &(u - &energy()).mul(&f0.square()).mul(f).scale(&rat(4, 1)))
                    + &f0x.square().mul(f))
                    - &f0.mul(&f0x).mul(&fx).scale(&rat(2, 1));
                let q = e_exact(&num, &shift)?;
                require_degree("Q_n", &q, n)?;
                let m = e_exact(&r, &shift)?;
                let lhs = &m.div(f)? + &shift.mul(&p_sq_term);
                if lhs != q.div(&f0.square().scale(&rat(4, 1)))? {
                    return Err(Error::IdentityFailure("M/F + (E - E0)P^2/(4F F0^2) = Q/(4F0^2)".into()));
                }
                simple_root = Some(q);
            }
            Some(true) => {
                let z = e_exact(&r, &shift.square())?;
                let t = e_exact(&(&z.div(f)? + &p_sq_term), &RatFun::one())?;
                require_degree("Z/F + P^2/(4F F0^2)", &t, n.saturating_sub(1))?;
                double_root = Some(t);
            }
            None => {}
        }
        Ok(AppendixReport { p, simple_root, double_root })
    }
}

/// `iF̃/(2μ̃)` with `μ̃ = μ·mu_scale`, after a Darboux step at an affine point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformedGreen {
    /// `Φ` of `g̃ = iΦ/(2μ)` before reduction.
    pub phi: RatFun,
    pub f_tilde: RatFun,
    pub mu_scale: RatFun,
    pub curve: SpectralCurve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomogenizedCase {
    /// `P_∞` on a curve with `C₀ = 0`.
    InfinityZeroC0,
    /// `(0, μ₀)`, `μ₀ ≠ 0`, on a curve with `C₀ ≠ 0`.
    AffineNonzeroC0,
}

/// `(g̃)_h = iΦ_h/(2μ)` in the homogeneous coordinates `(E, ν)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogenizedGreen {
    pub case: HomogenizedCase,
    /// The bracket that must be homogeneous of degree `n + 1`.
    pub numerator: RatFun,
    pub phi_h: RatFun,
    /// The curve carrying `g̃`: the strict transform `μ̃² = E²R` at `P_∞`.
    pub curve: SpectralCurve,
}

impl HomogenizedGreen {
    /// `Φ_h` at `ν = 1`.
    pub fn dehomogenized(&self) -> Result<RatFun> {
        Ok(self.phi_h.subs(Var::NU, &RatFun::one())?)
    }
}

/// What the appendix divisions produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixReport {
    /// `P_n = (F₀F_x - F₀_xF)/(E - E₀)`.
    pub p: RatFun,
    /// `Q_n`, when `E₀` is a simple root of `R`.
    pub simple_root: Option<RatFun>,
    /// `Z/F + P²/(4FF₀²)`, when `E₀` is a multiple root of `R`.
    pub double_root: Option<RatFun>,
}

/// [`Green::transformed`] for `green(u0, n)`.
pub fn transformed_green(u0: &RatFun, n: u32, pt: &CurvePoint) -> Result<TransformedGreen> {
    green(u0, n)?.transformed(pt)
}

/// [`Green::homogenized`] for `green(u0, n)`.
pub fn homogenized_green(u0: &RatFun, n: u32, pt: &CurvePoint) -> Result<HomogenizedGreen> {
    green(u0, n)?.homogenized(pt)
}

/// [`Green::appendix_divisions`] for `green(u0, n)`.
pub fn appendix_divisions(u0: &RatFun, n: u32, e0: &RatFun) -> Result<AppendixReport> {
    green(u0, n)?.appendix_divisions(e0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{ExpFun, Exponent};
    use crate::darboux::{dt_potential, log_derivative};
    use crate::ring::{parse_poly, parse_ratfun};
    use std::sync::Arc;

    fn rf(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    fn e_pow(k: u32) -> Poly {
        Poly::var(Var::E).pow(k)
    }

    fn regular_potential() -> RatFun {
        rf("6*(x - 1)*(x^3 - 3*x^2 + 3*x - 3)/(x^2*(x^2 - 3*x + 3)^2)")
    }

    fn plus_seed() -> ExpFun {
        let ex = Arc::new(Exponent::with_offset(0, RatFun::one(), RatFun::zero()));
        ExpFun::exp(Some(ex), 1, rf("(x^2 - 3*x + 3)/x^2"))
    }

    fn affine(e0: i64, mu0: Mu0) -> PointKind {
        PointKind::Affine { e0: rat(e0, 1), mu0 }
    }

    #[test]
    fn curves() {
        assert_eq!(spectral_curve(&rf("6/x^2"), 2).unwrap().r(), &e_pow(5));
        assert_eq!(spectral_curve(&RatFun::zero(), 0).unwrap().r(), &e_pow(1));
        assert_eq!(spectral_curve(&regular_potential(), 2).unwrap().r(), &e_pow(5));
        assert_eq!(spectral_curve(&rf("12/x^2"), 3).unwrap().r(), &e_pow(7));
        let c = spectral_curve_with(&RatFun::one(), 1, &[rat(1, 1)]).unwrap();
        assert_eq!(c.r(), &parse_poly("(E - 1)*(E + 1)^2").unwrap());
        assert_eq!(c.coefficients(), vec![rat(-1, 1), rat(-1, 1), rat(1, 1), rat(1, 1)]);
        assert_eq!(c.homogenized(), parse_poly("(E - nu)*(E + nu)^2").unwrap());
        assert_eq!(spectral_curve(&rf("6/x^2"), 1), Err(Error::NotStationarySolution(1)));
        assert_eq!(spectral_curve(&rf("6*x*(x^3 - 6*t)/(x^3 + 3*t)^2"), 1), Err(Error::NotStationary));
        assert_eq!(spectral_curve(&rf("6/x^2"), 2).unwrap().to_string(), "mu^2 - (E^5)");
    }

    #[test]
    fn c0_derivative() {
        for (u, n) in [("6/x^2", 2), ("0", 0), ("0", 2), ("2/x^2", 1), ("6/x^2", 1), ("1/x", 1)] {
            assert!(c0_check(&rf(u), n).unwrap().is_zero(), "{u} at level {n}");
        }
    }

    #[test]
    fn classification() {
        let g2 = spectral_curve(&rf("6/x^2"), 2).unwrap();
        assert_eq!(classify_point(&g2, affine(0, Mu0::Zero)).unwrap().class(), PointClass::AffineSingular);
        assert_eq!(classify_point(&g2, affine(-1, Mu0::Imaginary(rat(1, 1)))).unwrap().class(), PointClass::Regular);
        assert_eq!(classify_point(&g2, affine(-1, Mu0::Unspecified)).unwrap().class(), PointClass::Regular);
        assert_eq!(classify_point(&g2, PointKind::Infinity).unwrap().class(), PointClass::AtInfinity);
        assert_eq!(classify_point(&g2, affine(-1, Mu0::Real(rat(1, 1)))), Err(Error::NotOnCurve));
        assert_eq!(classify_point(&g2, affine(1, Mu0::Zero)), Err(Error::NotOnCurve));
        let c = spectral_curve_with(&RatFun::one(), 1, &[rat(1, 1)]).unwrap();
        assert_eq!(classify_point(&c, affine(1, Mu0::Unspecified)).unwrap().class(), PointClass::Regular);
        assert_eq!(classify_point(&c, affine(-1, Mu0::Zero)).unwrap().class(), PointClass::AffineSingular);
    }

    #[test]
    fn darboux_chain_on_curves() {
        let u = rf("6/x^2");
        let g2 = spectral_curve(&u, 2).unwrap();
        let branches = [
            (PointKind::Infinity, ExpFun::rational(rf("x^3")), "12/x^2", 7),
            (affine(0, Mu0::Zero), ExpFun::rational(rf("x^(-2)")), "2/x^2", 3),
            (affine(-1, Mu0::Imaginary(rat(-1, 1))), plus_seed(), "", 5),
        ];
        for (kind, seed, expected, degree) in branches {
            let pt = classify_point(&g2, kind).unwrap();
            let predicted = transformed_curve(&g2, &pt).unwrap();
            let ut = dt_potential(&u, &seed).unwrap();
            let want = if expected.is_empty() { regular_potential() } else { rf(expected) };
            assert_eq!(ut, want);
            assert_eq!(predicted.r(), &e_pow(degree));
            assert_eq!(spectral_curve(&ut, predicted.level()).unwrap(), predicted);
        }
    }

    #[test]
    fn green_identities() {
        let g = green(&rf("6/x^2"), 2).unwrap();
        assert_eq!(g.f(), &rf("E^2 + 3*E/x^2 + 9/x^4"));
        assert_eq!(green(&RatFun::zero(), 0).unwrap().f(), &RatFun::one());
        let cases = [green(&rf("2/x^2"), 1).unwrap(), g, Green::with_constants(&RatFun::one(), 1, &[rat(1, 1)]).unwrap()];
        for g in &cases {
            assert!(g.differential_identity().unwrap().is_zero());
            let (p, m) = g.riccati_residuals().unwrap();
            assert!(p.is_zero() && m.is_zero());
            assert!(g.sigma_identities().unwrap().iter().all(QuadExt::is_zero));
        }
    }

    #[test]
    fn regular_transform_matches_transformed_potential() {
        let g = green(&rf("6/x^2"), 2).unwrap();
        let pt = classify_point(g.curve(), affine(-1, Mu0::Imaginary(rat(-1, 1)))).unwrap();
        assert_eq!(pt.i_mu0(), RatFun::one());
        let t = g.transformed(&pt).unwrap();
        assert_eq!(t.curve.r(), &e_pow(5));
        assert!(t.mu_scale.is_one());
        assert_eq!(&t.f_tilde, green(&regular_potential(), 2).unwrap().f());
        let sigma0 = log_derivative(&plus_seed()).unwrap();
        assert_eq!(g.transformed_phi_from_seed(&RatFun::int(-1), &sigma0).unwrap(), t.phi);
    }

    #[test]
    fn singular_and_infinite_transforms() {
        let u = rf("6/x^2");
        let g = green(&u, 2).unwrap();
        let pt = classify_point(g.curve(), affine(0, Mu0::Zero)).unwrap();
        let t = g.transformed(&pt).unwrap();
        assert_eq!(e_degree(&t.f_tilde), Some(1));
        assert_eq!(&t.f_tilde, green(&rf("2/x^2"), 1).unwrap().f());
        assert_eq!(t.mu_scale, rf("1/E"));
        assert_eq!(t.curve.r(), &e_pow(3));
        assert_eq!(curve_expression(&rf("2/x^2"), &t.f_tilde), t.curve.as_ratfun());

        let phi = g.transformed_phi_from_seed(&RatFun::zero(), &rf("3/x")).unwrap();
        let f3 = phi.mul(&energy());
        assert_eq!(&f3, green(&rf("12/x^2"), 3).unwrap().f());
        assert_eq!(curve_expression(&rf("12/x^2"), &f3), RatFun::from_poly(e_pow(7)));
        assert!(matches!(g.transformed(&classify_point(g.curve(), PointKind::Infinity).unwrap()), Err(Error::InvalidArgument(_))));
        assert_eq!(g.transformed_phi_from_seed(&RatFun::zero(), &rf("1/x")), Err(Error::RiccatiViolation));
    }

    #[test]
    fn remark_form_at_zero_energy() {
        // with E0 = 0 the seed values reduce to f_n
        let g = Green::with_constants(&RatFun::one(), 1, &[rat(1, 1)]).unwrap();
        let mu0 = RatFun::var(Var::MU0);
        let phi = g.transformed_phi(&RatFun::zero(), &mu0).unwrap();
        let (f, fnn) = (g.f().clone(), g.sequence().f(1).clone());
        let w = &fnn.mul(&f.diff(Var::X)) - &fnn.diff(Var::X).mul(&f);
        let mu_sq = g.curve().as_ratfun();
        let c0 = RatFun::constant(g.curve().coefficient(0));
        let num = &(&(&mu_sq.mul(&fnn.square()) - &c0.mul(&f.square())) - &mu0.mul(&f).mul(&w)) + &w.square().scale(&rat(1, 4));
        assert_eq!(phi, num.div(&energy().mul(&f).mul(&fnn.square())).unwrap());
    }

    #[test]
    fn homogenized_forms() {
        let g = green(&rf("6/x^2"), 2).unwrap();
        let inf = classify_point(g.curve(), PointKind::Infinity).unwrap();
        let h = g.homogenized(&inf).unwrap();
        assert_eq!(h.case, HomogenizedCase::InfinityZeroC0);
        assert!(is_homogeneous(&h.numerator, 3));
        assert_eq!(h.curve.r(), &e_pow(7));
        assert_eq!(h.curve.level(), 3);
        // the bracket is H_n; the seed-based transform above is what gives F_{n+1}(12/x^2)
        assert_eq!(h.dehomogenized().unwrap().mul(&energy()), lax_data(g.sequence()).h().clone());

        let g = Green::with_constants(&RatFun::one(), 1, &[rat(1, 1)]).unwrap();
        let pt = classify_point(g.curve(), affine(0, Mu0::Imaginary(rat(1, 1)))).unwrap();
        let h = g.homogenized(&pt).unwrap();
        assert_eq!(h.case, HomogenizedCase::AffineNonzeroC0);
        assert!(is_homogeneous(&h.numerator, 2));
        assert_eq!(h.dehomogenized().unwrap(), g.transformed(&pt).unwrap().phi);
        let bad = classify_point(g.curve(), affine(-1, Mu0::Zero)).unwrap();
        assert!(matches!(g.homogenized(&bad), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn appendix() {
        let r = appendix_divisions(&rf("6/x^2"), 2, &RatFun::zero()).unwrap();
        assert!(e_degree(&r.p).unwrap() <= 1);
        assert_eq!(r.double_root.as_ref(), Some(green(&rf("2/x^2"), 1).unwrap().f()));
        assert!(r.simple_root.is_none());
        let r = appendix_divisions(&rf("2/x^2"), 1, &RatFun::zero()).unwrap();
        assert_eq!(e_degree(&r.p), Some(0));
        assert!(r.double_root.is_some());
        for (u, n) in [("2/x^2", 1), ("6/x^2", 2)] {
            let r = appendix_divisions(&rf(u), n, &RatFun::var(Var::E0)).unwrap();
            assert!(r.simple_root.is_none() && r.double_root.is_none());
            assert!(e_degree(&r.p).unwrap() < n);
        }
        for consts in [vec![rat(1, 1)], vec![rat(3, 1), rat(2, 1)]] {
            let g = Green::with_constants(&RatFun::zero(), consts.len() as u32, &consts).unwrap();
            let simple = g.appendix_divisions(&RatFun::zero()).unwrap();
            assert_eq!(e_degree(simple.simple_root.as_ref().unwrap()), Some(g.level()));
            // the multiple roots here are zeros of F_n itself
            assert!(matches!(g.appendix_divisions(&RatFun::int(-1)), Err(Error::InvalidArgument(_))));
        }
        assert!(matches!(appendix_divisions(&rf("6/x^2"), 2, &energy()), Err(Error::InvalidArgument(_))));
    }
}
