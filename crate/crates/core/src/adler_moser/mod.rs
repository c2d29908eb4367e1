//! Adler–Moser polynomials, the rational solitons built from them, and the
//! adjustment of the `tau_j` that makes a soliton solve a given level.

mod solve;

use crate::calculus::integrate_x;
use crate::error::{Error, Result};
use crate::kdv::{gd_sequence, kdv_residual};
use crate::ring::{rat, Mono, Poly, Rat, RatFun, RingError, Var};

use solve::{solve, SolveFailure};

/// Values of `tau_2 .. tau_n`, each free of `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauAssignment {
    level: Option<u32>,
    values: Vec<Poly>,
}

impl TauAssignment {
    /// `tau_j` left as the symbols themselves.
    pub fn symbolic(n: u16) -> TauAssignment {
        TauAssignment { level: None, values: (2..=n).map(|j| Poly::var(Var::tau(j))).collect() }
    }

    /// Values for `tau_2, tau_3, ...` adjusted to `level`.
    pub fn adjusted(level: u32, values: Vec<Poly>) -> Result<TauAssignment> {
        if values.iter().any(|v| v.contains(Var::X)) {
            return Err(Error::InvalidArgument("tau values must not depend on x".into()));
        }
        Ok(TauAssignment { level: Some(level), values })
    }

    /// The level the values were adjusted to, `None` when symbolic.
    pub fn level(&self) -> Option<u32> {
        self.level
    }

    pub fn values(&self) -> &[Poly] {
        &self.values
    }

    /// `tau_j`, if assigned.
    pub fn get(&self, j: usize) -> Option<&Poly> {
        j.checked_sub(2).and_then(|i| self.values.get(i))
    }

    /// Highest index assigned.
    pub fn max_index(&self) -> usize {
        self.values.len() + 1
    }
}

/// `theta_0 .. theta_n` for one tau assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSequence {
    taus: TauAssignment,
    thetas: Vec<Poly>,
}

impl ThetaSequence {
    pub fn taus(&self) -> &TauAssignment {
        &self.taus
    }

    pub fn thetas(&self) -> &[Poly] {
        &self.thetas
    }

    pub fn theta(&self, n: usize) -> &Poly {
        &self.thetas[n]
    }

    /// Largest index present.
    pub fn n(&self) -> usize {
        self.thetas.len() - 1
    }
}

/// `theta_{n+1} = theta_{n-1} (∫ (2n+1) theta_n² / theta_{n-1}² dx + tau_{n+1})`.
pub fn next_theta(prev: &Poly, cur: &Poly, n: usize, tau: &Poly) -> Result<Poly> {
    let integrand = RatFun::new(cur.square().scale(&Rat::from_integer((2 * n + 1).into())), prev.square())?;
    let g = integrate_x(&integrand)?;
    let next = (&g + &RatFun::from_poly(tau.clone())).mul_poly(prev);
    next.as_poly().cloned().ok_or(Error::Ring(RingError::InexactDivision))
}

/// Build `theta_0 .. theta_n`; `taus` must cover `tau_2 .. tau_n`.
pub fn theta_sequence(n: usize, taus: &TauAssignment) -> Result<ThetaSequence> {
    if n >= 2 && taus.max_index() < n {
        return Err(Error::InvalidArgument(format!("theta_{n} needs tau_2 .. tau_{n}")));
    }
    let mut thetas = vec![Poly::one(), Poly::var(Var::X)];
    for k in 1..n {
        let next = next_theta(&thetas[k - 1], &thetas[k], k, taus.get(k + 1).expect("checked above"))?;
        thetas.push(next);
    }
    thetas.truncate(n + 1);
    Ok(ThetaSequence { taus: taus.clone(), thetas })
}

/// `-2 (log theta)_xx`.
pub fn potential_of(theta: &Poly) -> RatFun {
    let tx = theta.diff(Var::X);
    let num = theta.mul(&tx.diff(Var::X)).sub(&tx.square()).scale(&rat(-2, 1));
    RatFun::new(num, theta.square()).expect("theta is nonzero")
}

/// `u_n = -2 (log theta_n)_xx`.
pub fn potential(seq: &ThetaSequence, n: usize) -> Result<RatFun> {
    if n > seq.n() {
        return Err(Error::InvalidArgument(format!("sequence stops at theta_{}", seq.n())));
    }
    Ok(potential_of(seq.theta(n)))
}

/// `theta_{n+1,x} theta_{n-1} - theta_{n+1} theta_{n-1,x} - (2n+1) theta_n²`.
pub fn bilinear_residual(seq: &ThetaSequence, n: usize) -> Poly {
    let (a, b, c) = (seq.theta(n - 1), seq.theta(n), seq.theta(n + 1));
    c.diff(Var::X).mul(a).sub(&c.mul(&a.diff(Var::X))).sub(&b.square().scale(&Rat::from_integer((2 * n + 1).into())))
}

/// `theta_{n+1,xx} theta_n + theta_{n+1} theta_{n,xx} - 2 theta_{n,x} theta_{n+1,x}`.
pub fn second_bilinear_residual(seq: &ThetaSequence, n: usize) -> Poly {
    let (a, b) = (seq.theta(n), seq.theta(n + 1));
    let (ax, bx) = (a.diff(Var::X), b.diff(Var::X));
    bx.diff(Var::X).mul(a).add(&b.mul(&ax.diff(Var::X))).sub(&ax.mul(&bx).scale(&rat(2, 1)))
}

/// One coefficient of `tau_j` left undetermined by the level equation and
/// set to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeParameter {
    pub index: u16,
    pub degree: u32,
}

/// The adjusted assignment together with the coefficients that were free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauAdjustment {
    pub assignment: TauAssignment,
    pub free: Vec<FreeParameter>,
}

/// Degree bound used when the caller does not give one.
pub fn default_degree_bound(n: u32) -> u32 {
    n + 1
}

/// Find `tau_2 .. tau_n`, polynomials in `t` of degree at most
/// `degree_bound`, making every `u_j` (`j ≤ n`) solve the level `r` equation.
///
/// Levels are solved in order. For `tau_j` the residual is computed once with
/// `tau_j` and its time derivative as two fresh symbols, then the ansatz
/// `tau_j = Σ a_d t^d` is substituted and every coefficient of `x^i t^k` is
/// required to vanish. Each accepted `tau_j` is re-verified with the full
/// residual.
pub fn adjust_taus(r: u32, n: u32, degree_bound: u32) -> Result<TauAdjustment> {
    if r == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    let mut values: Vec<Poly> = Vec::new();
    let mut free = Vec::new();
    let mut thetas = vec![Poly::one(), Poly::var(Var::X)];
    let rate = Var::unknown(999);
    let unknowns: Vec<Var> = (0..=degree_bound as u16).map(Var::unknown).collect();
    let ansatz = Poly::from_terms(unknowns.iter().enumerate().map(|(d, a)| (Mono::from_pairs([(*a, 1), (Var::T, d as u32)]), Rat::from_integer(1.into()))));
    let ansatz_t = ansatz.diff(Var::T);
    for j in 2..=n as usize {
        let tau_sym = Var::tau(j as u16);
        let theta = next_theta(&thetas[j - 2], &thetas[j - 1], j - 1, &Poly::var(tau_sym))?;
        let u = potential_of(&theta);
        let seq = gd_sequence(&u, r, &[])?;
        let flow = seq.f(r as usize + 1).diff(Var::X).scale(&rat(2, 1));
        let ut = &u.diff(Var::T) + &u.diff(tau_sym).mul(&RatFun::var(rate));
        let residual = &ut - &flow;
        let mut eqs = Vec::new();
        for cx in residual.num().coeffs_in(Var::X) {
            let sub = cx.compose(tau_sym, &ansatz).compose(rate, &ansatz_t);
            eqs.extend(sub.coeffs_in(Var::T).into_iter().filter(|e| !e.is_zero()));
        }
        let sol = solve(eqs, &unknowns).map_err(|f| match f {
            SolveFailure::Inconsistent => Error::NoSolutionWithinBound { level: r, index: j as u16, bound: degree_bound },
            SolveFailure::Stalled { remaining } => Error::AmbiguousSolution { index: j as u16, free: remaining },
        })?;
        let value = Poly::from_terms(unknowns.iter().enumerate().map(|(d, a)| (Mono::var(Var::T, d as u32), sol.values[a].clone())));
        free.extend(sol.free.iter().map(|a| FreeParameter { index: j as u16, degree: a.code() as u32 - Var::unknown(0).code() as u32 }));
        let theta = theta.compose(tau_sym, &value);
        if !kdv_residual(&potential_of(&theta), r)?.is_zero() {
            return Err(Error::CrossCheckFailure(format!("adjusted tau_{j} does not solve level {r}")));
        }
        values.push(value);
        thetas.push(theta);
    }
    Ok(TauAdjustment { assignment: TauAssignment::adjusted(r, values)?, free })
}

/// `(theta_n, u_n)` with every `tau_j` and `t` set to zero.
pub fn stationary_limit(seq: &ThetaSequence, n: usize) -> Result<(Poly, RatFun)> {
    if n > seq.n() {
        return Err(Error::InvalidArgument(format!("sequence stops at theta_{}", seq.n())));
    }
    let mut theta = seq.theta(n).eval(Var::T, &Rat::from_integer(0.into()));
    for v in theta.vars() {
        if v != Var::X {
            theta = theta.eval(v, &Rat::from_integer(0.into()));
        }
    }
    let u = if theta.is_zero() { RatFun::zero() } else { potential_of(&theta) };
    Ok((theta, u))
}

/// Substitute values for symbolic `tau_j` in a polynomial.
pub fn apply_taus(p: &Poly, taus: &TauAssignment) -> Poly {
    let mut out = p.clone();
    for (i, v) in taus.values().iter().enumerate() {
        out = out.compose(Var::tau(i as u16 + 2), v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, parse_ratfun};

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn symbolic_table() {
        let seq = theta_sequence(3, &TauAssignment::symbolic(3)).unwrap();
        assert_eq!(seq.theta(2), &p("x^3 + tau_2"));
        assert_eq!(seq.theta(3), &p("x^6 + 5*tau_2*x^3 + tau_3*x - 5*tau_2^2"));
        for n in 1..3 {
            assert!(bilinear_residual(&seq, n).is_zero());
            assert!(second_bilinear_residual(&seq, n).is_zero());
        }
    }

    #[test]
    fn first_potentials() {
        let seq = theta_sequence(2, &TauAssignment::adjusted(1, vec![p("3*t")]).unwrap()).unwrap();
        assert_eq!(potential(&seq, 1).unwrap(), parse_ratfun("2/x^2").unwrap());
        assert_eq!(potential(&seq, 2).unwrap(), parse_ratfun("6*x*(x^3 - 6*t)/(x^3 + 3*t)^2").unwrap());
        assert!(potential(&seq, 0).unwrap().is_zero());
    }

    #[test]
    fn stationary_limits() {
        let seq = theta_sequence(3, &TauAssignment::symbolic(3)).unwrap();
        assert_eq!(stationary_limit(&seq, 2).unwrap(), (p("x^3"), parse_ratfun("6/x^2").unwrap()));
        assert_eq!(stationary_limit(&seq, 0).unwrap(), (Poly::one(), RatFun::zero()));
    }

    #[test]
    fn adjust_low_levels() {
        let adj = adjust_taus(1, 3, 4).unwrap();
        assert_eq!(adj.assignment.values(), &[p("3*t"), Poly::zero()]);
        assert!(adjust_taus(1, 1, 4).unwrap().assignment.values().is_empty());
    }
}
