//! Strategies and property bodies shared by the property suite and the
//! acceptance harness.

#![allow(dead_code)]

use std::sync::Arc;

use kdv_core::adler_moser::{bilinear_residual, potential, second_bilinear_residual, theta_sequence, TauAssignment};
use kdv_core::calculus::integrate_x;
use kdv_core::fundmat::{fundmat_e0, phi_pm};
use kdv_core::lax::second_symmetric_power_check;
use kdv_core::ring::{parse_ratfun, rat, Mono, Poly, Rat, RatFun, Var};
use kdv_core::{ExpFun, Exponent};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const CASES: u32 = 200;

const VARS: [Var; 3] = [Var::X, Var::T, Var::LAMBDA];

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Sparse polynomials in `x, t, lambda` with at most five terms of degree ≤ 3 in each variable.
pub fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..=3, 0u32..=2, 0u32..=2), small_rat()), 0..5).prop_map(|terms| {
        Poly::from_terms(terms.into_iter().map(|((a, b, c), k)| (Mono::from_pairs(VARS.into_iter().zip([a, b, c])), k)))
    })
}

fn nonzero_poly() -> impl Strategy<Value = Poly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

pub fn ratfun() -> impl Strategy<Value = RatFun> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RatFun::new(n, d).expect("nonzero denominator"))
}

/// `e^{L_1}a + b + e^{-L_1}c` with symbolic `lambda`.
pub fn expfun() -> impl Strategy<Value = ExpFun> {
    (ratfun(), ratfun(), ratfun()).prop_map(|(a, b, c)| {
        let ex = Arc::new(Exponent::symbolic(1));
        ExpFun::from_terms(Some(ex), [(1, a), (0, b), (-1, c)])
    })
}

/// Tau values as polynomials in `t` (free of `x`).
pub fn taus(max: usize) -> impl Strategy<Value = Vec<Poly>> {
    prop::collection::vec((small_rat(), small_rat()), max).prop_map(|v| v.into_iter().map(|(a, b)| Poly::constant(a).add(&Poly::var(Var::T).scale(&b))).collect())
}

pub fn ring_laws(a: &RatFun, b: &RatFun, c: &RatFun) -> Result<(), TestCaseError> {
    prop_assert_eq!(a + b, b + a);
    prop_assert_eq!(a.mul(b), b.mul(a));
    prop_assert_eq!(&(a + b) + c, a + &(b + c));
    prop_assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
    prop_assert_eq!(a.mul(&(b + c)), &a.mul(b) + &a.mul(c));
    prop_assert!((a - a).is_zero());
    if !b.is_zero() {
        prop_assert_eq!(a.mul(b).div(b).unwrap(), a.clone());
    }
    prop_assert_eq!(parse_ratfun(&a.to_string()).unwrap(), a.clone());
    Ok(())
}

pub fn leibniz(a: &RatFun, b: &RatFun, p: &ExpFun, q: &ExpFun) -> Result<(), TestCaseError> {
    for v in VARS {
        prop_assert_eq!(a.mul(b).diff(v), &a.diff(v).mul(b) + &a.mul(&b.diff(v)));
        let lhs = p.try_mul(q).unwrap().diff(v);
        let rhs = p.diff(v).try_mul(q).unwrap().try_add(&p.try_mul(&q.diff(v)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
    Ok(())
}

pub fn integrate_round_trip(g: &RatFun) -> Result<(), TestCaseError> {
    let gx = g.diff(Var::X);
    let back = integrate_x(&gx).unwrap();
    prop_assert_eq!(back.diff(Var::X), gx);
    prop_assert!(!(&back - g).contains(Var::X));
    Ok(())
}

pub fn bilinear_identity(values: &[Poly]) -> Result<(), TestCaseError> {
    let n = values.len() + 1;
    let seq = theta_sequence(n, &TauAssignment::adjusted(0, values.to_vec()).unwrap()).unwrap();
    for k in 1..n {
        prop_assert!(bilinear_residual(&seq, k).is_zero(), "first identity at {}", k);
        prop_assert!(second_bilinear_residual(&seq, k).is_zero(), "second identity at {}", k);
    }
    Ok(())
}

pub fn symmetric_square(values: &[Poly], n: usize) -> Result<(), TestCaseError> {
    let seq = theta_sequence(values.len() + 1, &TauAssignment::adjusted(0, values.to_vec()).unwrap()).unwrap();
    let u = potential(&seq, n).unwrap();
    let b0 = fundmat_e0(n, &seq).unwrap();
    for (p, q) in [(&b0.a11, &b0.a11), (&b0.a11, &b0.a12), (&b0.a12, &b0.a12)] {
        prop_assert!(second_symmetric_power_check(p, q, &u, &Poly::zero()).unwrap().is_zero());
    }
    let (plus, minus) = phi_pm(1, n, &seq).unwrap();
    let e = Poly::var(Var::LAMBDA).square().neg();
    prop_assert!(second_symmetric_power_check(&plus, &minus, &u, &e).unwrap().is_zero());
    Ok(())
}
