use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Overrides, TauMode, DEFAULT_SESSION};
use crate::emit::Format;

#[derive(Debug, Parser)]
#[command(name = "kdv", version, about = "Exact rational solutions of the KdV hierarchy")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    /// Session file (TOML); defaults to $KDV_CONFIG.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Section of the session file to use.
    #[arg(long, global = true, default_value = DEFAULT_SESSION)]
    pub session: String,
    /// Append the provenance log to the output.
    #[arg(long, global = true)]
    pub provenance: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Level, index and tau source. Unset values come from the session.
#[derive(Debug, Clone, Default, Args)]
pub struct HierarchyArgs {
    /// KdV level.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub r: Option<u32>,
    /// Adler-Moser index.
    #[arg(long)]
    pub n: Option<usize>,
    /// Adjust tau_j to level r.
    #[arg(long, conflicts_with_all = ["symbolic", "taus"])]
    pub adjusted: bool,
    /// Keep tau_j symbolic.
    #[arg(long, conflicts_with = "taus")]
    pub symbolic: bool,
    /// Values of tau_2, tau_3, ... as comma-separated expressions.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub taus: Option<Vec<String>>,
    /// Degree bound in t for the adjustment.
    #[arg(long)]
    pub bound: Option<u32>,
}

impl HierarchyArgs {
    pub fn overrides(&self) -> Overrides {
        let tau_mode = match (self.adjusted, self.symbolic) {
            (true, _) => Some(TauMode::Adjusted),
            (_, true) => Some(TauMode::Symbolic),
            _ => None,
        };
        Overrides { r: self.r, n: self.n, tau_mode, tau_values: self.taus.clone(), degree_bound: self.bound }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Energy {
    Zero,
    Nonzero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
    Both,
}

/// A stationary potential and its level.
#[derive(Debug, Clone, Args)]
pub struct StationaryArgs {
    /// Potential u0 (`-` reads stdin).
    #[arg(long, allow_hyphen_values = true)]
    pub u: String,
    /// Stationary level.
    #[arg(long)]
    pub n: u32,
    /// Integration constants c_1, c_2, ... as rationals.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub consts: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Adler-Moser polynomial theta_n.
    Theta {
        #[command(flatten)]
        h: HierarchyArgs,
        /// Print theta_0 .. theta_n.
        #[arg(long)]
        all: bool,
    },
    /// Rational soliton u_n = -2 (log theta_n)_xx.
    Potential {
        #[command(flatten)]
        h: HierarchyArgs,
        #[arg(long)]
        all: bool,
        /// Also check the level r equation.
        #[arg(long)]
        check: bool,
        /// Print the Gelfand-Dickii polynomials f_0 .. f_K of u_n.
        #[arg(long, value_name = "K")]
        gd: Option<u32>,
        /// Keep the integration constants c_j symbolic in --gd output.
        #[arg(long, requires = "gd")]
        symbolic_consts: bool,
    },
    /// Adjust tau_2 .. tau_n to level r.
    Adjust {
        #[command(flatten)]
        h: HierarchyArgs,
    },
    /// Fundamental matrix B_{n,0} or B_{n,lambda}.
    Fundmat {
        #[command(flatten)]
        h: HierarchyArgs,
        #[arg(long, value_enum, default_value_t = Energy::Nonzero)]
        energy: Energy,
        /// Specialize lambda.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Check that the matrix solves the linear system.
        #[arg(long)]
        check: bool,
    },
    /// Q+-_0 .. Q+-_n.
    Qpoly {
        #[command(flatten)]
        h: HierarchyArgs,
        #[arg(long, value_enum, default_value_t = SignArg::Both)]
        sign: SignArg,
        /// Build from the bilinear recursion with symbolic taup_j / taum_j.
        #[arg(long)]
        bilinear: bool,
    },
    /// Run every invariant for the session's (r, n).
    Verify {
        #[command(flatten)]
        h: HierarchyArgs,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Darboux transform of a potential by a seed solution.
    Darboux {
        /// Potential u (`-` reads stdin).
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Seed phi0, or its rational factor when --exp-level is given.
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
        /// Multiply the seed by e^{k L_r} for this level r.
        #[arg(long)]
        exp_level: Option<u32>,
        /// The multiple k of the exponent.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        exp_k: i64,
        /// lambda inside L_r (default: symbolic).
        #[arg(long, allow_hyphen_values = true)]
        exp_lambda: Option<String>,
        /// Also print A_0 .. A_{r+1} and sigma_t at this level.
        #[arg(long)]
        r: Option<u32>,
    },
    /// Spectral curve of a stationary potential and point classification.
    Spectral {
        #[command(flatten)]
        s: StationaryArgs,
        /// `inf`, `E0` or `E0,mu0` where mu0 is a rational, `<q>i`, or `?`.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Green's function identities and transforms.
    Green {
        #[command(flatten)]
        s: StationaryArgs,
        /// Transform at this point (same syntax as `spectral --point`).
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Use this Riccati seed sigma0 at the point instead of mu0.
        #[arg(long, allow_hyphen_values = true, requires = "point")]
        seed: Option<String>,
        /// Homogenized form at the point.
        #[arg(long, requires = "point")]
        homogenized: bool,
        /// Appendix divisions at this E0 expression.
        #[arg(long, allow_hyphen_values = true)]
        appendix: Option<String>,
    },
    /// Differential Galois group of a fundamental matrix.
    Galois {
        #[command(flatten)]
        h: HierarchyArgs,
        #[arg(long, value_enum, default_value_t = Energy::Nonzero)]
        energy: Energy,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Classify across n' <= n, lambda and t samples, and one Darboux step.
        #[arg(long)]
        invariance: bool,
        /// Nonzero lambda samples for --invariance (symbolic lambda is always included).
        #[arg(long, value_delimiter = ',', default_value = "1", allow_hyphen_values = true)]
        lambdas: Vec<String>,
        /// t samples for --invariance.
        #[arg(long, value_delimiter = ',', default_value = "0,1,7", allow_hyphen_values = true)]
        times: Vec<String>,
    },
    /// Summary of the session's artifacts.
    Report {
        #[command(flatten)]
        h: HierarchyArgs,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}
