//! Coefficient arithmetic that skips normalisation where it is provably a
//! no-op. `BigRational` reduces after every operation, and for the large
//! integer coefficients that dominate here that reduction costs far more than
//! the operation itself.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rat;

fn int(n: BigInt) -> Rat {
    Rat::new_raw(n, BigInt::one())
}

fn is_unit(n: &BigInt) -> bool {
    n.magnitude().is_one()
}

/// Non-negative gcd, with early exits for units and word-sized operands.
pub(crate) fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    if is_unit(a) || is_unit(b) {
        return BigInt::one();
    }
    let (small, large) = if a.bits() <= b.bits() { (a, b) } else { (b, a) };
    if let Some(s) = small.magnitude().to_u64() {
        let r = (large.magnitude() % s).to_u64().expect("remainder below a word");
        return BigInt::from(s.gcd(&r));
    }
    a.gcd(b)
}

/// `n / d` reduced; `d` nonzero.
fn reduced(n: BigInt, d: BigInt) -> Rat {
    if n.is_zero() {
        return Rat::zero();
    }
    let g = gcd(&n, &d);
    let (n, d) = if g.is_one() { (n, d) } else { (n / &g, d / &g) };
    if d.sign() == Sign::Minus {
        Rat::new_raw(-n, -d)
    } else {
        Rat::new_raw(n, d)
    }
}

pub(crate) fn add(a: &Rat, b: &Rat) -> Rat {
    if a.denom().is_one() && b.denom().is_one() {
        return int(a.numer() + b.numer());
    }
    if a.denom() == b.denom() {
        return reduced(a.numer() + b.numer(), a.denom().clone());
    }
    reduced(a.numer() * b.denom() + b.numer() * a.denom(), a.denom() * b.denom())
}

pub(crate) fn sub(a: &Rat, b: &Rat) -> Rat {
    if a.denom().is_one() && b.denom().is_one() {
        return int(a.numer() - b.numer());
    }
    if a.denom() == b.denom() {
        return reduced(a.numer() - b.numer(), a.denom().clone());
    }
    reduced(a.numer() * b.denom() - b.numer() * a.denom(), a.denom() * b.denom())
}

pub(crate) fn mul(a: &Rat, b: &Rat) -> Rat {
    if a.denom().is_one() && b.denom().is_one() {
        return int(a.numer() * b.numer());
    }
    // cross-cancel so the product needs no further reduction
    let g1 = gcd(a.numer(), b.denom());
    let g2 = gcd(b.numer(), a.denom());
    let n = (a.numer() / &g1) * (b.numer() / &g2);
    let d = (a.denom() / &g2) * (b.denom() / &g1);
    Rat::new_raw(n, d)
}

pub(crate) fn add_assign(a: &mut Rat, b: &Rat) {
    *a = add(a, b);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    #[test]
    fn matches_bigrational() {
        let vals = [rat(0, 1), rat(1, 1), rat(-3, 4), rat(5, 6), rat(7, 1), rat(-12, 35), rat(1, 3)];
        for a in &vals {
            for b in &vals {
                assert_eq!(add(a, b), a + b);
                assert_eq!(sub(a, b), a - b);
                assert_eq!(mul(a, b), a * b);
            }
        }
    }

    #[test]
    fn gcd_paths() {
        let big: BigInt = BigInt::from(6) * BigInt::from(10).pow(40u32);
        assert_eq!(gcd(&big, &BigInt::from(-9)), BigInt::from(3));
        assert_eq!(gcd(&big, &BigInt::from(1)), BigInt::one());
        assert_eq!(gcd(&BigInt::zero(), &BigInt::from(-4)), BigInt::from(4));
        assert_eq!(gcd(&big, &(&big * 7)), big);
    }
}
