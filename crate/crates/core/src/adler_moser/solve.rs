//! Elimination for the small polynomial systems of the tau adjustment.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::ring::{gcd_primitive, Poly, Rat, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum SolveFailure {
    Inconsistent,
    Stalled { remaining: usize },
}

/// A solution point after fixing the free unknowns to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Solution {
    pub values: BTreeMap<Var, Rat>,
    pub free: Vec<Var>,
}

fn substitute(eqs: &[Poly], v: Var, value: &Poly) -> Vec<Poly> {
    eqs.iter().map(|e| e.compose(v, value)).collect()
}

fn tidy(eqs: Vec<Poly>) -> Vec<Poly> {
    let mut out: Vec<Poly> = eqs.into_iter().filter(|e| !e.is_zero()).map(|e| e.primitive()).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.terms().cmp(a.terms())));
    out.dedup();
    out
}

/// Unknown `v` with `e = c v + rest`, `c` a nonzero rational and `rest` free of `v`.
fn linear_pivot(e: &Poly) -> Option<(Var, Poly)> {
    for v in e.vars() {
        if e.degree_in(v) != 1 {
            continue;
        }
        let c = e.coeff_of(v, 1);
        if let Some(c) = c.as_constant() {
            let rest = e.coeff_of(v, 0);
            return Some((v, rest.scale(&(-c.recip()))));
        }
    }
    None
}

/// The single root of a univariate polynomial whose squarefree part is linear.
fn unique_root(e: &Poly, v: Var) -> Option<Rat> {
    let d = e.diff(v);
    let g = gcd_primitive(e, &d);
    let sqf = e.try_div(&g)?;
    if sqf.degree_in(v) != 1 {
        return None;
    }
    let c1 = sqf.coeff_of(v, 1).as_constant()?;
    let c0 = sqf.coeff_of(v, 0).as_constant().unwrap_or_else(Rat::zero);
    Some(-c0 / c1)
}

/// Solve `eqs = 0` in `unknowns`, pivoting on linear occurrences first and on
/// univariate equations with a single root second. Unknowns that no equation
/// constrains are reported free and set to zero.
pub(crate) fn solve(eqs: Vec<Poly>, unknowns: &[Var]) -> Result<Solution, SolveFailure> {
    let mut eqs = tidy(eqs);
    let mut bound: Vec<(Var, Poly)> = Vec::new();
    loop {
        if eqs.iter().any(|e| e.is_constant()) {
            return Err(SolveFailure::Inconsistent);
        }
        if eqs.is_empty() {
            break;
        }
        if let Some((v, value)) = eqs.iter().find_map(linear_pivot) {
            eqs = tidy(substitute(&eqs, v, &value));
            bound.push((v, value));
            continue;
        }
        let uni = eqs.iter().find_map(|e| {
            let vs = e.vars();
            (vs.len() == 1).then(|| (vs[0], e.clone()))
        });
        match uni {
            Some((v, e)) => match unique_root(&e, v) {
                Some(root) => {
                    let value = Poly::constant(root);
                    eqs = tidy(substitute(&eqs, v, &value));
                    bound.push((v, value));
                }
                None => {
                    let remaining = unknowns.iter().filter(|u| eqs.iter().any(|e| e.contains(**u))).count();
                    return Err(SolveFailure::Stalled { remaining });
                }
            },
            None => {
                let remaining = unknowns.iter().filter(|u| eqs.iter().any(|e| e.contains(**u))).count();
                return Err(SolveFailure::Stalled { remaining });
            }
        }
    }
    let free: Vec<Var> = unknowns.iter().copied().filter(|u| !bound.iter().any(|(b, _)| b == u)).collect();
    let mut values: BTreeMap<Var, Rat> = free.iter().map(|v| (*v, Rat::zero())).collect();
    for (v, value) in bound.iter().rev() {
        let val = value.eval_all(&|w| values.get(&w).cloned().unwrap_or_else(Rat::zero));
        values.insert(*v, val);
    }
    Ok(Solution { values, free })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_chain_with_free_unknown() {
        let a0 = Var::unknown(0);
        let a1 = Var::unknown(1);
        let a2 = Var::unknown(2);
        // a_1 - 3 = 0, a_2 a_1 - 6 = 0; a_0 unconstrained
        let eqs = vec![
            Poly::var(a1).sub(&Poly::int(3)),
            Poly::var(a2).mul(&Poly::var(a1)).sub(&Poly::int(6)),
        ];
        let s = solve(eqs, &[a0, a1, a2]).unwrap();
        assert_eq!(s.free, vec![a0]);
        assert_eq!(s.values[&a1], Rat::from_integer(3.into()));
        assert_eq!(s.values[&a2], Rat::from_integer(2.into()));
        assert_eq!(s.values[&a0], Rat::zero());
    }

    #[test]
    fn failures() {
        let a0 = Var::unknown(0);
        let sq = Poly::var(a0).square().sub(&Poly::int(4));
        assert!(matches!(solve(vec![sq], &[a0]), Err(SolveFailure::Stalled { remaining: 1 })));
        let double = Poly::var(a0).sub(&Poly::int(1)).square();
        assert_eq!(solve(vec![double], &[a0]).unwrap().values[&a0], Rat::from_integer(1.into()));
        let e1 = Poly::var(a0).sub(&Poly::int(1));
        let e2 = Poly::var(a0).sub(&Poly::int(2));
        assert_eq!(solve(vec![e1, e2], &[a0]), Err(SolveFailure::Inconsistent));
    }
}
