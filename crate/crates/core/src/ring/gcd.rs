//! Multivariate gcd over the rationals.
//!
//! Inputs are cleared to primitive integer polynomials first. The fast path is
//! the heuristic GCDHEU (evaluate the main variable at a large integer, recurse,
//! reconstruct x-adically, confirm by trial division). When it gives up, the
//! recursive subresultant PRS in the main variable finishes the job.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{arith, Mono, Poly, Rat, Var};

const HEU_ATTEMPTS: usize = 6;

/// Monic greatest common divisor. `gcd(0, 0) = 0`, `gcd(a, 0) = monic(a)`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    gcd_primitive(a, b).monic()
}

/// Gcd normalised to a primitive integer polynomial with positive leading coefficient.
pub fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let a = a.primitive();
    let b = b.primitive();
    if a == b {
        return a;
    }
    gcd_int(&a, &b)
}

/// Gcd of several polynomials, primitive normalisation.
pub fn gcd_many<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> Poly {
    let mut acc = Poly::zero();
    for p in polys {
        acc = gcd_primitive(&acc, p);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn mono_content(p: &Poly) -> Mono {
    let mut it = p.terms().iter();
    let first = match it.next() {
        Some(t) => t.0.clone(),
        None => return Mono::one(),
    };
    it.fold(first, |acc, t| acc.gcd(&t.0))
}

/// Both arguments primitive integer and non-constant.
fn gcd_int(a: &Poly, b: &Poly) -> Poly {
    // monomial content
    let ma = mono_content(a);
    let mb = mono_content(b);
    let mg = ma.gcd(&mb);
    let (a, b) = if ma.is_one() && mb.is_one() {
        (a.clone(), b.clone())
    } else {
        (a.try_div(&Poly::monomial(ma.clone(), Rat::one())).unwrap(), b.try_div(&Poly::monomial(mb.clone(), Rat::one())).unwrap())
    };
    let mono = Poly::monomial(mg, Rat::one());
    if a.is_constant() || b.is_constant() {
        return mono;
    }

    // a variable present in only one argument can only enter through that
    // argument's content with respect to it
    let va = a.vars();
    let vb = b.vars();
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        let c = content_in(&a, v);
        return gcd_primitive(&c, &b).mul(&mono);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        let c = content_in(&b, v);
        return gcd_primitive(&a, &c).mul(&mono);
    }

    let (small, large) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
    if large.try_div(small).is_some() {
        return small.clone().mul(&mono);
    }

    let g = match heu_gcd(&a, &b) {
        Some((h, _, _)) => h.primitive(),
        None => prs_gcd(&a, &b),
    };
    g.mul(&mono)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &Poly, v: Var) -> Poly {
    let coeffs = p.coeffs_in(v);
    let mut nonzero: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    nonzero.sort_by_key(|c| c.len());
    gcd_many(nonzero)
}

/// Integer gcd of all coefficients (the integer content, sign-free).
fn int_content(p: &Poly) -> BigInt {
    p.terms().iter().fold(BigInt::zero(), |acc, t| arith::gcd(&acc, t.1.numer()))
}

fn lc_int(p: &Poly) -> BigInt {
    p.leading_coeff().numer().clone()
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Integer polynomial divided by an integer that divides every coefficient.
fn div_exact_int(p: &Poly, k: &BigInt) -> Poly {
    if k.is_one() {
        return p.clone();
    }
    Poly::from_terms(p.terms().iter().map(|(m, c)| (m.clone(), Rat::from_integer(c.numer() / k))))
}

/// x-adic reconstruction of a polynomial in `v` from its value at `v = xi`.
fn interpolate(h: &Poly, xi: &BigInt, v: Var) -> Poly {
    let mut h = h.clone();
    let mut coeffs: Vec<Poly> = Vec::new();
    while !h.is_zero() {
        let g = Poly::from_terms(h.terms().iter().filter_map(|(m, c)| {
            let r = symmetric_mod(c.numer(), xi);
            (!r.is_zero()).then(|| (m.clone(), Rat::from_integer(r)))
        }));
        h = div_exact_int(&h.sub(&g), xi);
        coeffs.push(g);
    }
    let f = Poly::from_coeffs(v, &coeffs);
    if f.leading_coeff().is_negative() {
        f.neg()
    } else {
        f
    }
}

/// GCDHEU on integer polynomials. Returns `(h, f/h, g/h)` with `h` carrying
/// the integer content gcd.
fn heu_gcd(f: &Poly, g: &Poly) -> Option<(Poly, Poly, Poly)> {
    if f.is_zero() || g.is_zero() {
        return None;
    }
    let v = match f.main_var().max(g.main_var()) {
        Some(v) => v,
        None => {
            let a = f.leading_coeff().numer().clone();
            let b = g.leading_coeff().numer().clone();
            let h = arith::gcd(&a, &b);
            let hr = Rat::from_integer(h.clone());
            return Some((Poly::constant(hr.clone()), Poly::constant(Rat::from_integer(a) / &hr), Poly::constant(Rat::from_integer(b) / &hr)));
        }
    };
    let content = arith::gcd(&int_content(f), &int_content(g));
    let cr = Rat::from_integer(content.clone());
    let f = div_exact_int(f, &content);
    let g = div_exact_int(g, &content);
    let fnorm = f.max_abs_coeff();
    let gnorm = g.max_abs_coeff();
    let b: BigInt = fnorm.clone().min(gnorm.clone()) * 2 + 29;
    let by_lc: BigInt = (&fnorm / lc_int(&f).abs()).min(&gnorm / lc_int(&g).abs()) * 2 + 2;
    let mut xi: BigInt = b.clone().min(b.sqrt() * 99).max(by_lc);
    for _ in 0..HEU_ATTEMPTS {
        let xr = Rat::from_integer(xi.clone());
        let ff = f.eval(v, &xr);
        let gg = g.eval(v, &xr);
        if !ff.is_zero() && !gg.is_zero() {
            if let Some((h, cff, cfg)) = heu_gcd(&ff, &gg) {
                let h = interpolate(&h, &xi, v).primitive();
                if let Some(cf) = f.try_div(&h) {
                    if let Some(cg) = g.try_div(&h) {
                        return Some((h.scale(&cr), cf, cg));
                    }
                }
                let cff = interpolate(&cff, &xi, v);
                if let Some(h) = f.try_div(&cff) {
                    if let Some(cg) = g.try_div(&h) {
                        return Some((h.scale(&cr), cff, cg));
                    }
                }
                let cfg = interpolate(&cfg, &xi, v);
                if let Some(h) = g.try_div(&cfg) {
                    if let Some(cf) = f.try_div(&h) {
                        return Some((h.scale(&cr), cf, cfg));
                    }
                }
            }
        }
        xi = (&xi * BigInt::from(73794) * xi.sqrt().sqrt()) / BigInt::from(27011);
    }
    None
}

/// Recursive subresultant PRS in the highest-ranked common variable.
fn prs_gcd(a: &Poly, b: &Poly) -> Poly {
    let v = match a.main_var().max(b.main_var()) {
        Some(v) => v,
        None => return Poly::one(),
    };
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_primitive(&ca, &cb);
    let mut p = a.try_div(&ca).unwrap();
    let mut q = b.try_div(&cb).unwrap();
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    if q.degree_in(v) == 0 {
        return c;
    }
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        let d = p.degree_in(v) - q.degree_in(v);
        let r = p.prem(&q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            return c;
        }
        let divisor = g.mul(&h.pow(d));
        p = q;
        q = r.try_div(&divisor).expect("subresultant division is exact");
        g = p.lead_in(v);
        h = if d == 0 {
            h
        } else {
            g.pow(d).try_div(&h.pow(d - 1)).expect("subresultant division is exact")
        };
    }
    let pq = q.try_div(&content_in(&q, v)).unwrap();
    pq.mul(&c).primitive()
}

#[cfg(test)]
pub(crate) fn prs_gcd_for_tests(a: &Poly, b: &Poly) -> Poly {
    prs_gcd(&a.primitive(), &b.primitive()).primitive()
}
