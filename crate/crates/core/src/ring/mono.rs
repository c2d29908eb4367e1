use std::cmp::Ordering;

use smallvec::SmallVec;

use super::Var;

/// A power product, stored sparsely as `(var, exponent)` pairs with positive
/// exponents, highest-ranked variable first.
///
/// `Ord` is the graded lexicographic term order: total degree first, then
/// lexicographic in the variable rank.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Mono(SmallVec<[(Var, u32); 4]>);

impl Mono {
    pub fn one() -> Mono {
        Mono(SmallVec::new())
    }

    pub fn var(v: Var, e: u32) -> Mono {
        if e == 0 {
            return Mono::one();
        }
        let mut s = SmallVec::new();
        s.push((v, e));
        Mono(s)
    }

    /// Build from arbitrary pairs; duplicates are merged and zeros dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Mono {
        let mut v: SmallVec<[(Var, u32); 4]> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        v.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: SmallVec<[(Var, u32); 4]> = SmallVec::new();
        for (var, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => out.push((var, e)),
            }
        }
        Mono(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0.iter().find(|p| p.0 == v).map_or(0, |p| p.1)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut out = self.0.clone();
        for &(v, e) in other.0.iter() {
            let slot = out.iter_mut().find(|p| p.0 == v)?;
            if slot.1 < e {
                return None;
            }
            slot.1 -= e;
        }
        out.retain(|p| p.1 > 0);
        Some(Mono(out))
    }

    pub fn pow(&self, k: u32) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .filter_map(|&(v, e)| {
                    let f = other.exp(v);
                    (f > 0).then_some((v, e.min(f)))
                })
                .collect(),
        )
    }

    /// Split off the power of `v`.
    pub fn split(&self, v: Var) -> (u32, Mono) {
        let mut rest = self.0.clone();
        let mut e = 0;
        rest.retain(|p| {
            if p.0 == v {
                e = p.1;
                false
            } else {
                true
            }
        });
        (e, Mono(rest))
    }

    pub fn with_exp(&self, v: Var, e: u32) -> Mono {
        let (_, rest) = self.split(v);
        rest.mul(&Mono::var(v, e))
    }
}

fn lex(a: &[(Var, u32)], b: &[(Var, u32)]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.0.cmp(&y.0) {
            Ordering::Equal => match x.1.cmp(&y.1) {
                Ordering::Equal => continue,
                o => return o,
            },
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| lex(&self.0, &other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Mono {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.name() } else { format!("{}^{}", v.name(), e) })
            .collect();
        f.write_str(&parts.join("*"))
    }
}
