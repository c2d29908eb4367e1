use std::cmp::Ordering;
use std::fmt;

/// Largest index accepted for the indexed families `tau_j`, `taup_j`, `taum_j`, `c_j`.
pub const MAX_INDEX: u16 = 99;

const TAU: u16 = 100;
const TAU_PLUS: u16 = 200;
const TAU_MINUS: u16 = 300;
const CONST: u16 = 400;
const E0_CODE: u16 = 500;
const MU0_CODE: u16 = 501;
const NU0_CODE: u16 = 502;
const UNKNOWN: u16 = 1000;

/// A variable of the fixed alphabet.
///
/// Variables are plain codes, so there is no interner and no session state.
/// `Ord` is the rank order used by the term order and by every recursive
/// algorithm: `x > lambda > E > mu > nu > t > tau_* > taup_* > taum_* > c_* >
/// E0 > mu0 > nu0 > a_*`. The `a_d` family is internal: it holds the unknown
/// coefficients of the tau adjustment solver.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Var(u16);

impl Var {
    pub const X: Var = Var(0);
    pub const LAMBDA: Var = Var(1);
    pub const E: Var = Var(2);
    pub const MU: Var = Var(3);
    pub const NU: Var = Var(4);
    pub const T: Var = Var(5);
    pub const E0: Var = Var(E0_CODE);
    pub const MU0: Var = Var(MU0_CODE);
    pub const NU0: Var = Var(NU0_CODE);

    /// `tau_j`, the Adler-Moser integration constant of index `j`.
    pub fn tau(j: u16) -> Var {
        assert!((2..=MAX_INDEX).contains(&j), "tau index {j} out of range");
        Var(TAU + j)
    }

    pub fn tau_plus(j: u16) -> Var {
        assert!((2..=MAX_INDEX).contains(&j), "taup index {j} out of range");
        Var(TAU_PLUS + j)
    }

    pub fn tau_minus(j: u16) -> Var {
        assert!((2..=MAX_INDEX).contains(&j), "taum index {j} out of range");
        Var(TAU_MINUS + j)
    }

    /// `c_j`, a Gelfand-Dickii integration constant.
    pub fn c(j: u16) -> Var {
        assert!((1..=MAX_INDEX).contains(&j), "c index {j} out of range");
        Var(CONST + j)
    }

    pub(crate) fn unknown(d: u16) -> Var {
        Var(UNKNOWN + d)
    }

    pub fn code(self) -> u16 {
        self.0
    }

    pub fn name(self) -> String {
        match self.0 {
            0 => "x".into(),
            1 => "lambda".into(),
            2 => "E".into(),
            3 => "mu".into(),
            4 => "nu".into(),
            5 => "t".into(),
            E0_CODE => "E0".into(),
            MU0_CODE => "mu0".into(),
            NU0_CODE => "nu0".into(),
            c if c >= UNKNOWN => format!("a_{}", c - UNKNOWN),
            c if c > CONST => format!("c_{}", c - CONST),
            c if c > TAU_MINUS => format!("taum_{}", c - TAU_MINUS),
            c if c > TAU_PLUS => format!("taup_{}", c - TAU_PLUS),
            c => format!("tau_{}", c - TAU),
        }
    }

    /// Look up a public alphabet name. Internal unknowns are not parseable.
    pub fn parse(name: &str) -> Option<Var> {
        let fixed = match name {
            "x" => Some(Var::X),
            "lambda" => Some(Var::LAMBDA),
            "E" => Some(Var::E),
            "mu" => Some(Var::MU),
            "nu" => Some(Var::NU),
            "t" => Some(Var::T),
            "E0" => Some(Var::E0),
            "mu0" => Some(Var::MU0),
            "nu0" => Some(Var::NU0),
            _ => None,
        };
        if fixed.is_some() {
            return fixed;
        }
        let (family, index) = name.split_once('_')?;
        if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) || index.starts_with('0') {
            return None;
        }
        let j: u16 = index.parse().ok()?;
        let (base, lo) = match family {
            "tau" => (TAU, 2),
            "taup" => (TAU_PLUS, 2),
            "taum" => (TAU_MINUS, 2),
            "c" => (CONST, 1),
            _ => return None,
        };
        (lo..=MAX_INDEX).contains(&j).then_some(Var(base + j))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
