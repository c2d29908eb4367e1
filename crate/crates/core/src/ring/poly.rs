use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use super::{arith, Mono, Rat, RingError, Var};

/// Sparse multivariate polynomial over the rationals.
///
/// Terms are kept sorted by descending [`Mono`] order with no zero
/// coefficients, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, Rat)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: vec![(Mono::one(), c)] }
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(Rat::from_integer(n.into()))
    }

    pub fn var(v: Var) -> Poly {
        Poly::monomial(Mono::var(v, 1), Rat::one())
    }

    pub fn monomial(m: Mono, c: Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: vec![(m, c)] }
    }

    /// Canonicalise an arbitrary bag of terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, Rat)>) -> Poly {
        let mut acc: FxHashMap<Mono, Rat> = FxHashMap::default();
        for (m, c) in terms {
            arith::add_assign(acc.entry(m).or_insert_with(Rat::zero), &c);
        }
        Poly::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Mono, Rat>) -> Poly {
        let mut terms: Vec<(Mono, Rat)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    /// Terms that are already sorted, merged and nonzero.
    fn from_sorted(terms: Vec<(Mono, Rat)>) -> Poly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, Rat)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Mono, Rat)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.terms.first().map_or_else(Rat::zero, |t| t.1.clone())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|t| t.0.exp(v)).max().unwrap_or(0)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.iter().any(|t| t.0.exp(v) > 0)
    }

    /// Variables present, highest rank first.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.iter().flat_map(|t| t.0.pairs().iter().map(|p| p.0)).collect();
        vs.sort_unstable_by(|a, b| b.cmp(a));
        vs.dedup();
        vs
    }

    pub fn main_var(&self) -> Option<Var> {
        self.terms.iter().filter_map(|t| t.0.pairs().first().map(|p| p.0)).max()
    }

    pub fn neg(&self) -> Poly {
        Poly::from_sorted(self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly::from_sorted(self.terms.iter().map(|(m, c)| (m.clone(), arith::mul(c, k))).collect())
    }

    pub fn mul_mono(&self, m: &Mono, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly::from_sorted(self.terms.iter().map(|(n, c)| (n.mul(m), arith::mul(c, k))).collect())
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { arith::sub(&a[i].1, &b[j].1) } else { arith::add(&a[i].1, &b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), if negate { -c } else { c.clone() })));
        Poly::from_sorted(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() == 1 {
            return other.mul_mono(&self.terms[0].0, &self.terms[0].1);
        }
        if other.terms.len() == 1 {
            return self.mul_mono(&other.terms[0].0, &other.terms[0].1);
        }
        let mut acc: FxHashMap<Mono, Rat> = FxHashMap::default();
        acc.reserve(self.terms.len() * other.terms.len() / 2);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = arith::mul(ca, cb);
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(slot) => arith::add_assign(slot, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly::from_map(acc)
    }

    pub fn square(&self) -> Poly {
        self.mul(self)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        result
    }

    /// Partial derivative.
    pub fn diff(&self, v: Var) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let (e, rest) = m.split(v);
                (e > 0).then(|| (rest.mul(&Mono::var(v, e - 1)), arith::mul(c, &Rat::from_integer(e.into()))))
            })
            .collect::<Vec<_>>();
        Poly::from_terms(terms)
    }

    /// Dense coefficient list in `v`: entry `k` multiplies `v^k`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Mono, Rat)>> = vec![Vec::new(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            buckets[e as usize].push((rest, c.clone()));
        }
        // Removing one variable keeps the relative order of terms sharing the same
        // exponent of `v` only for lex orders, so re-sort.
        buckets
            .into_iter()
            .map(|mut b| {
                b.sort_unstable_by(|x, y| y.0.cmp(&x.0));
                Poly::from_sorted(b)
            })
            .collect()
    }

    /// Inverse of [`Poly::coeffs_in`].
    pub fn from_coeffs(v: Var, coeffs: &[Poly]) -> Poly {
        let terms = coeffs
            .iter()
            .enumerate()
            .flat_map(|(k, p)| {
                let vk = Mono::var(v, k as u32);
                p.terms.iter().map(move |(m, c)| (m.mul(&vk), c.clone()))
            })
            .collect::<Vec<_>>();
        let mut terms = terms;
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly::from_sorted(terms)
    }

    /// Leading coefficient as a polynomial in `v`.
    pub fn lead_in(&self, v: Var) -> Poly {
        let d = self.degree_in(v);
        self.coeff_of(v, d)
    }

    pub fn coeff_of(&self, v: Var, k: u32) -> Poly {
        Poly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let (e, rest) = m.split(v);
            (e == k).then(|| (rest, c.clone()))
        }))
    }

    /// Replace `v` by the polynomial `value`.
    pub fn compose(&self, v: Var, value: &Poly) -> Poly {
        if !self.contains(v) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(v);
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    pub fn eval(&self, v: Var, value: &Rat) -> Poly {
        if !self.contains(v) {
            return self.clone();
        }
        let mut powers: Vec<Rat> = vec![Rat::one()];
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let (e, rest) = m.split(v);
            while powers.len() <= e as usize {
                let next = arith::mul(powers.last().unwrap(), value);
                powers.push(next);
            }
            (rest, arith::mul(c, &powers[e as usize]))
        }))
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, v: Var, k: u32) -> Poly {
        self.mul_mono(&Mono::var(v, k), &Rat::one())
    }

    /// Rational content `c` with `self / c` having coprime integer
    /// coefficients and positive leading coefficient.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::one();
        }
        let (num, den) = self.content_parts();
        // every prime of `den` divides some denominator, whose numerator `num` divides
        let c = Rat::new_raw(num, den);
        if self.leading_coeff().is_negative() {
            -c
        } else {
            c
        }
    }

    /// Gcd of the numerators and lcm of the denominators.
    fn content_parts(&self) -> (BigInt, BigInt) {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            num = arith::gcd(&num, c.numer());
            if !c.denom().is_one() {
                den = den.lcm(c.denom());
            }
        }
        (num, den)
    }

    /// `self` divided by its content: integer, primitive, positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let (mut num, den) = self.content_parts();
        if self.leading_coeff().is_negative() {
            num = -num;
        }
        if num.is_one() && den.is_one() {
            return self.clone();
        }
        // a/b divided by num/den is (a/num)(den/b), a product of exact integer quotients
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), Rat::new_raw((c.numer() / &num) * (&den / c.denom()), BigInt::one())));
        Poly::from_sorted(terms.collect())
    }

    /// `self` scaled to leading coefficient one.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading_coeff();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|t| t.1.is_integer())
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.iter().map(|t| t.1.numer().abs()).max().unwrap_or_default()
    }

    /// Exact quotient `self / divisor`.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly, RingError> {
        self.try_div(divisor).ok_or(RingError::InexactDivision)
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn try_div(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if divisor.terms.len() == 1 {
            let (m, c) = &divisor.terms[0];
            let inv = c.recip();
            let mut out = Vec::with_capacity(self.terms.len());
            for (n, d) in &self.terms {
                out.push((n.div(m)?, arith::mul(d, &inv)));
            }
            return Some(Poly::from_sorted(out));
        }
        for (v, e) in divisor.degree_profile() {
            if self.degree_in(v) < e {
                return None;
            }
        }
        if self.total_degree() < divisor.total_degree() {
            return None;
        }
        let (lm, lc) = divisor.leading().unwrap();
        let lc_inv = lc.recip();
        let tail = &divisor.terms[1..];
        let mut rem: BTreeMap<Mono, Rat> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Mono, Rat)> = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(lm)?;
            let qc = arith::mul(&c, &lc_inv);
            for (tm, tc) in tail {
                let key = tm.mul(&qm);
                let delta = arith::mul(tc, &qc);
                match rem.get_mut(&key) {
                    Some(slot) => {
                        *slot = arith::sub(slot, &delta);
                        if slot.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(Poly::from_sorted(quot))
    }

    fn degree_profile(&self) -> Vec<(Var, u32)> {
        let mut prof: Vec<(Var, u32)> = Vec::new();
        for (m, _) in &self.terms {
            for &(v, e) in m.pairs() {
                match prof.iter_mut().find(|p| p.0 == v) {
                    Some(p) => p.1 = p.1.max(e),
                    None => prof.push((v, e)),
                }
            }
        }
        prof
    }

    /// Pseudo-remainder of `self` by `b` as polynomials in `v`.
    pub fn prem(&self, b: &Poly, v: Var) -> Poly {
        let db = b.degree_in(v);
        let lb = b.lead_in(v);
        let mut r = self.clone();
        let mut dr = r.degree_in(v);
        if r.is_zero() || dr < db {
            return r;
        }
        let mut steps = dr - db + 1;
        while !r.is_zero() && dr >= db {
            let lr = r.lead_in(v);
            let t = lr.shift(v, dr - db);
            r = r.mul(&lb).sub(&t.mul(b));
            steps -= 1;
            dr = r.degree_in(v);
        }
        if steps > 0 {
            r = r.mul(&lb.pow(steps));
        }
        r
    }

    /// Numerical value after binding every variable.
    pub fn eval_all(&self, values: &impl Fn(Var) -> Rat) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                t *= num_traits::pow(values(v), e as usize);
            }
            acc += t;
        }
        acc
    }
}

impl From<Rat> for Poly {
    fn from(c: Rat) -> Poly {
        Poly::constant(c)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Poly {
        Poly::var(v)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Poly {
        Poly::int(n)
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                Poly::$inner(self, rhs)
            }
        }
    };
}

poly_binop!(Add, add, add);
poly_binop!(Sub, sub, sub);
poly_binop!(Mul, mul, mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

fn fmt_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    /// Plain canonical text; re-parseable by the CLI grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&fmt_rat(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", fmt_rat(&abs))?;
                }
                write!(f, "{m:?}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
