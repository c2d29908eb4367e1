//! Shared workloads for the criterion benches.

use kdv_core::adler_moser::theta_sequence;
use kdv_core::ring::parse_poly;
use kdv_core::{Poly, TauAssignment, ThetaSequence};

/// The r = 1 adjusted `tau_2 .. tau_5`.
pub fn level_one_taus() -> Vec<Poly> {
    ["3*t", "0", "0", "33075*t^3"].iter().map(|s| parse_poly(s).expect("literal")).collect()
}

/// `theta_0 .. theta_n` (n <= 5) with the r = 1 adjusted taus.
pub fn level_one(n: usize) -> ThetaSequence {
    let mut taus = level_one_taus();
    taus.truncate(n.saturating_sub(1));
    theta_sequence(n, &TauAssignment::adjusted(1, taus).expect("valid taus")).expect("theta sequence")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_build() {
        assert_eq!(level_one(2).theta(2).to_string(), "x^3 + 3*t");
    }
}
