//! Rational antiderivatives in `x`.
//!
//! With `D1 = gcd(D, D_x)` and `D2 = D / D1`, a rational antiderivative of
//! `N / D` has the form `A / D1` (Hermite, Horowitz–Ostrogradsky). Writing
//! `H = D1_x D2 / D1`, the unknown `A` solves `A_x D2 - A H = N`. The operator
//! sends `x^k` to a polynomial whose top coefficient is `(k - deg D1) lc(D2)`,
//! so the system is triangular and back substitution from the top degree
//! solves it. The one zero pivot, `k = deg D1`, is the free additive constant.
//! Anything left over after the sweep is a logarithmic part.

use super::CalculusError;
use crate::ring::{gcd_primitive, Poly, Rat, RatFun, Var};

/// Antiderivative in `x` without additive constant.
///
/// The constant is fixed by the normal form: a proper fraction plus a
/// polynomial with no `x^0` term.
pub fn integrate_x(f: &RatFun) -> Result<RatFun, CalculusError> {
    if f.is_zero() {
        return Ok(RatFun::zero());
    }
    let n = f.num();
    let d = f.den();
    let d1 = gcd_primitive(d, &d.diff(Var::X));
    let d1 = if d1.is_zero() { Poly::one() } else { d1 };
    let d2 = d.try_div(&d1).ok_or(CalculusError::NonRationalAntiderivative)?;
    let h = d1.diff(Var::X).mul(&d2).try_div(&d1).ok_or(CalculusError::NonRationalAntiderivative)?;

    let deg1 = d1.degree_in(Var::X) as i64;
    let deg2 = d2.degree_in(Var::X) as usize;
    let d2c = d2.coeffs_in(Var::X);
    let hc = h.coeffs_in(Var::X);
    let lc2 = RatFun::from_poly(d2c[deg2].clone());

    let mut res: Vec<RatFun> = n.coeffs_in(Var::X).into_iter().map(RatFun::from_poly).collect();
    let top = res.len() as i64 - deg2 as i64;
    if top < 0 {
        return Err(CalculusError::NonRationalAntiderivative);
    }
    let top = top as usize;
    let mut a: Vec<RatFun> = vec![RatFun::zero(); top + 1];
    for k in (0..=top).rev() {
        if k + deg2 == 0 {
            continue;
        }
        let row = k + deg2 - 1;
        let pivot = k as i64 - deg1;
        if pivot == 0 || row >= res.len() || res[row].is_zero() {
            continue;
        }
        let ak = res[row].div(&lc2.scale(&Rat::from_integer(pivot.into())))?;
        // res -= ak * (k x^{k-1} D2 - x^k H)
        if k > 0 {
            let kk = Rat::from_integer(k.into());
            for (j, c) in d2c.iter().enumerate() {
                if !c.is_zero() {
                    res[j + k - 1] = &res[j + k - 1] - &ak.mul_poly(c).scale(&kk);
                }
            }
        }
        for (j, c) in hc.iter().enumerate() {
            if !c.is_zero() {
                res[j + k] = &res[j + k] + &ak.mul_poly(c);
            }
        }
        a[k] = ak;
    }
    if res.iter().any(|c| !c.is_zero()) {
        return Err(CalculusError::NonRationalAntiderivative);
    }

    let a = drop_quotient_constant(a, &d1.coeffs_in(Var::X))?;
    let mut num = RatFun::zero();
    for c in a.iter().rev() {
        num = &num.mul(&RatFun::var(Var::X)) + c;
    }
    Ok(num.div(&RatFun::from_poly(d1))?)
}

/// Subtract `c D1` where `c` is the constant term of the quotient `A div D1`.
fn drop_quotient_constant(mut a: Vec<RatFun>, d1: &[Poly]) -> Result<Vec<RatFun>, CalculusError> {
    let m = d1.len() - 1;
    if a.len() <= m {
        return Ok(a);
    }
    let lc = RatFun::from_poly(d1[m].clone());
    let mut rem = a.clone();
    let mut c0 = RatFun::zero();
    for k in (m..rem.len()).rev() {
        if rem[k].is_zero() {
            continue;
        }
        let q = rem[k].div(&lc)?;
        for (j, c) in d1.iter().enumerate() {
            if !c.is_zero() {
                rem[k - m + j] = &rem[k - m + j] - &q.mul_poly(c);
            }
        }
        if k == m {
            c0 = q;
        }
    }
    if !c0.is_zero() {
        for (j, c) in d1.iter().enumerate() {
            if !c.is_zero() {
                a[j] = &a[j] - &c0.mul_poly(c);
            }
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_ratfun;

    fn rf(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    #[test]
    fn polynomial_and_proper_parts() {
        assert_eq!(integrate_x(&rf("3*x^2")).unwrap(), rf("x^3"));
        assert_eq!(integrate_x(&rf("-2/x^3")).unwrap(), rf("1/x^2"));
        assert_eq!(integrate_x(&rf("t")).unwrap(), rf("t*x"));
        assert_eq!(integrate_x(&rf("-t/x^2")).unwrap(), rf("t/x"));
        assert!(integrate_x(&rf("0")).unwrap().is_zero());
    }

    #[test]
    fn theta_three_from_recursion_integrand() {
        // theta_3 = theta_1 (int 5 theta_2^2 / theta_1^2 + tau_3)
        let g = integrate_x(&rf("5*(x^3 + tau_2)^2/x^2")).unwrap();
        assert_eq!(g, rf("x^5 + 5*tau_2*x^2 - 5*tau_2^2/x"));
    }

    #[test]
    fn logarithmic_part_is_rejected() {
        assert_eq!(integrate_x(&rf("1/x")), Err(CalculusError::NonRationalAntiderivative));
        assert_eq!(integrate_x(&rf("1/(x^2 + t)")), Err(CalculusError::NonRationalAntiderivative));
        assert_eq!(integrate_x(&rf("1/x^2 + 1/(x - 1)")), Err(CalculusError::NonRationalAntiderivative));
    }

    #[test]
    fn round_trip_on_quotient_rule_outputs() {
        for s in ["(x^2 + t)/(x^3 - 3*t*x + 1)^2", "lambda*x^4/(x - t)^3", "(x + 1)/(t*x^2 + 1)", "x/(2*x^2 + t)^3 + x^5"] {
            let g = rf(s);
            let h = integrate_x(&g.diff(Var::X)).unwrap();
            assert!((&h - &g).diff(Var::X).is_zero(), "{s}");
        }
    }
}
