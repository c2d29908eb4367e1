//! Fundamental matrices of the rational Schrödinger systems at `E = 0` and at
//! `E = -λ²`, and the polynomial families `Q±_n` behind the latter.

use std::sync::Arc;

use crate::adler_moser::ThetaSequence;
use crate::calculus::{integrate_x, ExpFun, Exponent};
use crate::error::{Error, Result};
use crate::kdv::{f_polynomial, gd_sequence};
use crate::lax::Mat2;
use crate::ring::{rat, Poly, Rat, RatFun, Var};

/// Which of the two families `Q+` or `Q-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `+1` or `-1`.
    pub fn unit(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn opposite(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// The symbol `taup_j` or `taum_j`.
    pub fn tau_var(self, j: u16) -> Var {
        match self {
            Sign::Plus => Var::tau_plus(j),
            Sign::Minus => Var::tau_minus(j),
        }
    }
}

/// `Q±_0 .. Q±_n`, polynomials in `x` whose coefficients are rational in the
/// remaining variables, together with `τ±_2 .. τ±_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFamily {
    sign: Sign,
    qs: Vec<RatFun>,
    taus: Vec<RatFun>,
}

impl QFamily {
    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn qs(&self) -> &[RatFun] {
        &self.qs
    }

    pub fn q(&self, n: usize) -> &RatFun {
        &self.qs[n]
    }

    /// Largest index present.
    pub fn n(&self) -> usize {
        self.qs.len() - 1
    }

    /// `τ±_j = Q±_j(x = 0)` for `j ≥ 2`.
    pub fn tau(&self, j: usize) -> Option<&RatFun> {
        j.checked_sub(2).and_then(|i| self.taus.get(i))
    }

    pub fn taus(&self) -> &[RatFun] {
        &self.taus
    }
}

fn lambda() -> RatFun {
    RatFun::var(Var::LAMBDA)
}

fn theta_minus_one(seq: &ThetaSequence, n: usize) -> RatFun {
    if n == 0 {
        RatFun::one()
    } else {
        RatFun::from_poly(seq.theta(n - 1).clone())
    }
}

fn need(seq: &ThetaSequence, n: usize) -> Result<()> {
    if n > seq.n() {
        return Err(Error::InvalidArgument(format!("sequence stops at theta_{}, theta_{n} needed", seq.n())));
    }
    Ok(())
}

/// Quotient that must be polynomial in `x`.
fn x_exact(num: &RatFun, den: &RatFun) -> Result<RatFun> {
    let q = num.div(den)?;
    if q.den().contains(Var::X) {
        return Err(Error::Ring(crate::ring::RingError::InexactDivision));
    }
    Ok(q)
}

/// `B_{n,0}` with columns `θ_{n-1}/θ_n` and `θ_{n+1}/θ_n` (`θ_{-1} = 1`).
pub fn fundmat_e0(n: usize, seq: &ThetaSequence) -> Result<Mat2> {
    need(seq, n + 1)?;
    let th = RatFun::from_poly(seq.theta(n).clone());
    let phi1 = theta_minus_one(seq, n).div(&th)?;
    let phi2 = RatFun::from_poly(seq.theta(n + 1).clone()).div(&th)?;
    Ok(Mat2::from_solutions(&phi1.into(), &phi2.into()))
}

/// `Q±_{n+1} = (λQθ_{n+1} ± (Q_xθ_{n+1} - Qθ_{n+1,x}))/θ_n`.
fn ascend(sign: Sign, q: &RatFun, th: &RatFun, th1: &RatFun) -> Result<RatFun> {
    let s = rat(sign.unit(), 1);
    let w = &q.diff(Var::X).mul(th1) - &q.mul(&th1.diff(Var::X));
    x_exact(&(&lambda().mul(q).mul(th1) + &w.scale(&s)), th)
}

/// `Q±_0 .. Q±_n` by Darboux ascent from `Q±_0 = 1`.
///
/// The `x`-equation of the family is checked at every step, and the
/// `t`-equation too when `seq` is adjusted to level `r`.
pub fn q_family(sign: Sign, r: u32, n: usize, seq: &ThetaSequence) -> Result<QFamily> {
    need(seq, n)?;
    let mut qs = vec![RatFun::one()];
    for k in 0..n {
        let th = RatFun::from_poly(seq.theta(k).clone());
        let th1 = RatFun::from_poly(seq.theta(k + 1).clone());
        qs.push(ascend(sign, &qs[k], &th, &th1)?);
    }
    let adjusted = seq.taus().level() == Some(r);
    for (k, q) in qs.iter().enumerate() {
        let (x_res, t_res) = q_pde_residuals(sign, r, q, seq.theta(k), adjusted)?;
        if !x_res.is_zero() {
            return Err(Error::PdeViolation(format!("x-equation of Q_{k}")));
        }
        if t_res.is_some_and(|t| !t.is_zero()) {
            return Err(Error::PdeViolation(format!("t-equation of Q_{k}")));
        }
    }
    let taus = qs.iter().skip(2).map(|q| q.eval(Var::X, &Rat::from_integer(0.into()))).collect::<std::result::Result<_, _>>()?;
    Ok(QFamily { sign, qs, taus })
}

/// Residuals of the `x`- and (optionally) `t`-equations satisfied by `Q±_n`,
/// which say that `e^{±L_r}Q±_n/θ_n` solves both halves of the system.
pub fn q_pde_residuals(sign: Sign, r: u32, q: &RatFun, theta: &Poly, with_time: bool) -> Result<(RatFun, Option<RatFun>)> {
    let s = rat(sign.unit(), 1);
    let th = RatFun::from_poly(theta.clone());
    let lx = th.diff(Var::X).div(&th)?;
    let lxx = th.diff(Var::X).diff(Var::X).div(&th)?;
    let l = lambda();
    let (qx, qxx) = (q.diff(Var::X), q.diff(Var::X).diff(Var::X));
    let a = &l.scale(&s).scale(&rat(-2, 1)) + &lx.scale(&rat(2, 1));
    let b = &l.mul(&lx).scale(&s).scale(&rat(2, 1)) - &lxx;
    let x_res = &(&qxx - &qx.mul(&a)) - &q.mul(&b);
    if !with_time {
        return Ok((x_res, None));
    }
    let u = crate::adler_moser::potential_of(theta);
    let f = f_polynomial(&gd_sequence(&u, r, &[])?, r).subs(Var::E, &l.square().neg())?;
    let parity = if r % 2 == 0 { 1 } else { -1 };
    let rate = l.pow(2 * r as i32 + 1)?.scale(&rat(-parity * sign.unit(), 1));
    let lt = th.diff(Var::T).div(&th)?;
    let coeff = &(&(&(&rate + &l.mul(&f).scale(&s)) + &lt) - &f.diff(Var::X).scale(&rat(1, 2))) - &f.mul(&lx);
    let t_res = &(&q.diff(Var::T) - &qx.mul(&f)) - &q.mul(&coeff);
    Ok((x_res, Some(t_res)))
}

/// `Q±_{n-1} = (λQ_nθ_{n-1} ± (Q_{n,x}θ_{n-1} - θ_{n-1,x}Q_n))/(λ²θ_n)`.
pub fn q_descend(fam: &QFamily, seq: &ThetaSequence, n: usize) -> Result<RatFun> {
    if n == 0 || n > fam.n() {
        return Err(Error::InvalidArgument(format!("cannot descend from Q_{n}")));
    }
    need(seq, n)?;
    let s = rat(fam.sign.unit(), 1);
    let q = fam.q(n);
    let th0 = theta_minus_one(seq, n);
    let w = &q.diff(Var::X).mul(&th0) - &th0.diff(Var::X).mul(q);
    let den = lambda().square().mul(&RatFun::from_poly(seq.theta(n).clone()));
    x_exact(&(&lambda().mul(q).mul(&th0) + &w.scale(&s)), &den)
}

/// `Q±_0 .. Q±_n` from `Q_{k+1,x}Q_{k-1} - Q_{k+1}Q_{k-1,x} = (2k+1)Q_k²`.
///
/// The integration constant of `Q_{k+1}` is fixed by `Q_{k+1}(x = 0) = τ±_{k+1}`.
/// `taus` gives `τ±_2, τ±_3, ...`; missing ones are the symbols
/// `taup_j`/`taum_j`.
pub fn q_family_bilinear(sign: Sign, n: usize, taus: &[RatFun]) -> Result<QFamily> {
    let zero = Rat::from_integer(0.into());
    let mut qs = vec![RatFun::one(), &lambda().mul(&RatFun::var(Var::X)) - &RatFun::int(sign.unit())];
    let mut used = Vec::new();
    for k in 1..n {
        let j = k + 1;
        let tau = taus.get(j - 2).cloned().unwrap_or_else(|| RatFun::var(sign.tau_var(j as u16)));
        let (prev, cur) = (&qs[k - 1], &qs[k]);
        let g = integrate_x(&cur.square().scale(&rat(2 * k as i64 + 1, 1)).div(&prev.square())?)?;
        let p = g.mul(prev);
        if p.den().contains(Var::X) {
            return Err(Error::Ring(crate::ring::RingError::InexactDivision));
        }
        let at0 = prev.eval(Var::X, &zero)?;
        let shift = (&tau - &p.eval(Var::X, &zero)?).div(&at0)?;
        qs.push(&p + &prev.mul(&shift));
        used.push(tau);
    }
    qs.truncate(n + 1);
    used.truncate(n.saturating_sub(1));
    Ok(QFamily { sign, qs, taus: used })
}

/// `LHS - RHS` of `Q_{n+1,x}Q_{n-1} - Q_{n+1}Q_{n-1,x} = (2n+1)Q_n²`.
pub fn q_bilinear_check(fam: &QFamily, n: usize) -> RatFun {
    let (a, b, c) = (fam.q(n - 1), fam.q(n), fam.q(n + 1));
    let lhs = &c.diff(Var::X).mul(a) - &c.mul(&a.diff(Var::X));
    &lhs - &b.square().scale(&rat(2 * n as i64 + 1, 1))
}

/// `Q+_n(-λ) - (-1)^n Q-_n(λ)`. Symbolic constants follow the rule
/// `taup_j ↦ (-1)^j taum_j` under `λ ↦ -λ`.
pub fn q_symmetry_check(plus: &QFamily, minus: &QFamily, n: usize) -> Result<RatFun> {
    if plus.sign != Sign::Plus || minus.sign != Sign::Minus {
        return Err(Error::InvalidArgument("expected a plus and a minus family".into()));
    }
    let mut flipped = plus.q(n).subs(Var::LAMBDA, &lambda().neg())?;
    for j in 2..=n as u16 {
        let image = RatFun::var(Var::tau_minus(j)).scale(&rat(if j % 2 == 0 { 1 } else { -1 }, 1));
        flipped = flipped.subs(Var::tau_plus(j), &image)?;
    }
    let sign = if n % 2 == 0 { 1 } else { -1 };
    Ok(&flipped - &minus.q(n).scale(&rat(sign, 1)))
}

/// `φ± = e^{±L_r} Q±_n/θ_n` with symbolic `λ`.
pub fn phi_pm(r: u32, n: usize, seq: &ThetaSequence) -> Result<(ExpFun, ExpFun)> {
    let ex = Arc::new(Exponent::symbolic(r));
    let th = RatFun::from_poly(seq.theta(n).clone());
    let plus = q_family(Sign::Plus, r, n, seq)?;
    let minus = q_family(Sign::Minus, r, n, seq)?;
    Ok((ExpFun::exp(Some(ex.clone()), 1, plus.q(n).div(&th)?), ExpFun::exp(Some(ex), -1, minus.q(n).div(&th)?)))
}

/// `B_{n,λ}` with columns `φ+` and `φ-`.
pub fn fundmat_e(r: u32, n: usize, seq: &ThetaSequence) -> Result<Mat2> {
    let (plus, minus) = phi_pm(r, n, seq)?;
    Ok(Mat2::from_solutions(&plus, &minus))
}

/// What survives of `B_{n,λ}` at `λ = 0`, next to `B_{n,0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationGap {
    /// `det B_{n,λ}` at `λ = 0`.
    pub det_at_zero: RatFun,
    /// `det B_{n,0}`.
    pub det_zero_energy: RatFun,
    /// `φ+(λ = 0) - (-1)^n φ-(λ = 0)`.
    pub column_gap: RatFun,
}

/// Compare `B_{n,λ}` at `λ = 0` with `B_{n,0}`; `seq` must reach `θ_{n+1}`.
pub fn specialization_gap(r: u32, n: usize, seq: &ThetaSequence) -> Result<SpecializationGap> {
    let b = fundmat_e(r, n, seq)?;
    let zero = RatFun::zero();
    let det = b.det()?.subs(Var::LAMBDA, &zero)?;
    let b0 = fundmat_e0(n, seq)?.det()?;
    let plus = b.a11.subs(Var::LAMBDA, &zero)?;
    let minus = b.a12.subs(Var::LAMBDA, &zero)?;
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let gap = plus.try_sub(&minus.mul_rat(&RatFun::int(sign)))?;
    let rational = |e: ExpFun| e.as_rational().ok_or(Error::UnrecognizedExtension);
    Ok(SpecializationGap { det_at_zero: rational(det)?, det_zero_energy: rational(b0)?, column_gap: rational(gap)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adler_moser::{theta_sequence, TauAssignment};
    use crate::darboux::dt_function;
    use crate::lax::check_solution;
    use crate::ring::{parse_poly, parse_ratfun};

    fn rf(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    fn adjusted(n: usize) -> ThetaSequence {
        let mut values = vec![parse_poly("3*t").unwrap()];
        values.resize(n.max(2) - 1, Poly::zero());
        theta_sequence(n, &TauAssignment::adjusted(1, values).unwrap()).unwrap()
    }

    #[test]
    fn zero_energy_matrices() {
        let seq = adjusted(3);
        let b = fundmat_e0(0, &seq).unwrap();
        assert_eq!(b, Mat2::rational(RatFun::one(), rf("x"), RatFun::zero(), RatFun::one()));
        let b = fundmat_e0(2, &seq).unwrap();
        assert_eq!(b.a11, rf("x/(x^3 + 3*t)").into());
        assert_eq!(b.a12, rf("(x^6 + 15*x^3*t - 45*t^2)/(x^3 + 3*t)").into());
        for n in 0..=2 {
            let b = fundmat_e0(n, &seq).unwrap();
            assert_eq!(b.det().unwrap(), RatFun::int(2 * n as i64 + 1).into());
            let u = crate::adler_moser::potential(&seq, n).unwrap();
            let (x, t) = check_solution(&b, &u, 1, &Poly::zero()).unwrap();
            assert!(x.is_zero() && t.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn ascent_tables() {
        let seq = theta_sequence(3, &TauAssignment::symbolic(3)).unwrap();
        let plus = q_family(Sign::Plus, 1, 2, &seq).unwrap();
        assert_eq!(plus.q(1), &rf("lambda*x - 1"));
        assert_eq!(plus.q(2), &rf("lambda^2*x^3 - 3*lambda*x^2 + 3*x + lambda^2*tau_2"));
        let minus = q_family(Sign::Minus, 1, 1, &seq).unwrap();
        assert_eq!(minus.q(1), &rf("lambda*x + 1"));
        let seq = adjusted(3);
        let plus = q_family(Sign::Plus, 1, 3, &seq).unwrap();
        let minus = q_family(Sign::Minus, 1, 3, &seq).unwrap();
        assert_eq!(plus.q(3), &rf("lambda^3*x^6 - 6*lambda^2*x^5 + 15*lambda*x^4 - 15*x^3 + 15*lambda^3*x^3*t - 45*lambda^2*x^2*t + 45*lambda*x*t - 45*lambda^3*t^2 - 45*t"));
        assert_eq!(minus.q(3), &rf("lambda^3*x^6 + 6*lambda^2*x^5 + 15*lambda*x^4 + 15*x^3 + 15*lambda^3*x^3*t + 45*lambda^2*x^2*t + 45*lambda*x*t - 45*lambda^3*t^2 + 45*t"));
        assert_eq!(plus.taus(), &[rf("3*lambda^2*t"), rf("-45*(lambda^3*t^2 + t)")]);
        assert_eq!(minus.taus(), &[rf("3*lambda^2*t"), rf("-45*(lambda^3*t^2 - t)")]);
        for n in 0..=3 {
            assert_eq!(plus.q(n).num().degree_in(Var::LAMBDA), n as u32);
        }
    }

    #[test]
    fn symbolic_bilinear_table() {
        let plus = q_family_bilinear(Sign::Plus, 3, &[]).unwrap();
        let minus = q_family_bilinear(Sign::Minus, 3, &[]).unwrap();
        assert_eq!(plus.q(2), &rf("lambda^2*x^3 - 3*lambda*x^2 + 3*x + taup_2"));
        assert_eq!(minus.q(2), &rf("lambda^2*x^3 + 3*lambda*x^2 + 3*x + taum_2"));
        assert_eq!(plus.q(3), &rf("lambda^3*x^6 - 6*lambda^2*x^5 + 15*lambda*x^4 - 15*x^3 + 5*lambda*x^3*taup_2 - 15*x^2*taup_2 - (lambda*taup_3 + 5*taup_2^2)*x + taup_3"));
        assert_eq!(minus.q(3), &rf("lambda^3*x^6 + 6*lambda^2*x^5 + 15*lambda*x^4 + 15*x^3 + 5*lambda*x^3*taum_2 + 15*x^2*taum_2 + (lambda*taum_3 + 5*taum_2^2)*x + taum_3"));
        for n in 1..=3 {
            assert!(q_symmetry_check(&plus, &minus, n).unwrap().is_zero());
        }
        assert!(q_bilinear_check(&plus, 1).is_zero());
        assert!(q_bilinear_check(&minus, 2).is_zero());
    }

    #[test]
    fn bilinear_with_ascent_constants_reproduces_ascent() {
        let seq = adjusted(3);
        for sign in [Sign::Plus, Sign::Minus] {
            let asc = q_family(sign, 1, 3, &seq).unwrap();
            let bil = q_family_bilinear(sign, 3, asc.taus()).unwrap();
            assert_eq!(asc.qs(), bil.qs());
        }
    }

    #[test]
    fn corrupted_family_fails_bilinear() {
        let mut fam = q_family_bilinear(Sign::Plus, 2, &[]).unwrap();
        fam.qs[2] = &fam.qs[2] - &rf("3*x");
        assert!(!q_bilinear_check(&fam, 1).is_zero());
    }

    #[test]
    fn descent_inverts_ascent() {
        let seq = adjusted(3);
        for sign in [Sign::Plus, Sign::Minus] {
            let fam = q_family(sign, 1, 3, &seq).unwrap();
            for n in 1..=3 {
                assert_eq!(&q_descend(&fam, &seq, n).unwrap(), fam.q(n - 1));
            }
        }
    }

    #[test]
    fn nonzero_energy_matrices() {
        let seq = adjusted(3);
        let e = parse_poly("-lambda^2").unwrap();
        let b1 = fundmat_e(1, 1, &seq).unwrap();
        assert_eq!(b1.a11.coeff(1), rf("(lambda*x - 1)/x"));
        assert_eq!(b1.a12.coeff(-1), rf("(lambda*x + 1)/x"));
        let b2 = fundmat_e(1, 2, &seq).unwrap();
        assert_eq!(b2.a11.coeff(1), rf("(lambda^2*x^3 - 3*lambda*x^2 + 3*x + 3*lambda^2*t)/(x^3 + 3*t)"));
        for n in 0..=3 {
            let b = fundmat_e(1, n, &seq).unwrap();
            assert_eq!(b.det().unwrap(), RatFun::var(Var::LAMBDA).pow(2 * n as i32 + 1).unwrap().scale(&rat(-2, 1)).into());
            let u = crate::adler_moser::potential(&seq, n).unwrap();
            let (x, t) = check_solution(&b, &u, 1, &e).unwrap();
            assert!(x.is_zero() && t.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn darboux_ladder() {
        let seq = adjusted(3);
        for n in 1..=2 {
            let b0 = fundmat_e0(n, &seq).unwrap();
            let (p, m) = phi_pm(1, n, &seq).unwrap();
            let (p1, m1) = phi_pm(1, n + 1, &seq).unwrap();
            let (pd, md) = phi_pm(1, n - 1, &seq).unwrap();
            assert_eq!(dt_function(&b0.a12, &p).unwrap(), p1);
            assert_eq!(dt_function(&b0.a12, &m).unwrap(), m1.neg());
            assert_eq!(dt_function(&b0.a11, &p).unwrap(), pd.mul_rat(&rf("lambda^2")));
            assert_eq!(dt_function(&b0.a11, &m).unwrap(), md.mul_rat(&rf("-lambda^2")));
        }
    }

    #[test]
    fn gap_at_zero() {
        let seq = adjusted(3);
        for n in 1..=2 {
            let g = specialization_gap(1, n, &seq).unwrap();
            assert!(g.det_at_zero.is_zero());
            assert_eq!(g.det_zero_energy, RatFun::int(2 * n as i64 + 1));
            assert!(g.column_gap.is_zero());
        }
        let seq = theta_sequence(3, &TauAssignment::symbolic(3)).unwrap();
        let (p, m) = phi_pm(1, 2, &seq).unwrap();
        let stationary = |e: &ExpFun| e.subs(Var::LAMBDA, &RatFun::zero()).unwrap().subs(Var::tau(2), &RatFun::zero()).unwrap();
        assert_eq!(stationary(&p), rf("3/x^2").into());
        assert_eq!(stationary(&m), rf("3/x^2").into());
    }
}
