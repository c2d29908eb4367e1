//! Session configuration and the per-run cache of computed artifacts.

use std::collections::HashMap;
use std::path::Path;

use kdv_core::adler_moser::{adjust_taus, theta_sequence, FreeParameter, TauAssignment, ThetaSequence};
use kdv_core::fundmat::q_family;
use kdv_core::ring::{parse_poly, Poly};
use kdv_core::{QFamily, Sign};

use crate::error::{CliError, CliResult};

pub const CONFIG_ENV: &str = "KDV_CONFIG";
pub const DEFAULT_SESSION: &str = "default";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TauMode {
    Symbolic,
    Adjusted,
    User,
}

impl TauMode {
    fn parse(s: &str) -> Option<TauMode> {
        match s {
            "symbolic" => Some(TauMode::Symbolic),
            "adjusted" => Some(TauMode::Adjusted),
            "user" => Some(TauMode::User),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TauMode::Symbolic => "symbolic",
            TauMode::Adjusted => "adjusted",
            TauMode::User => "user",
        }
    }
}

/// What a session computes from. Every cached artifact is a function of this.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionConfig {
    pub name: String,
    pub r: u32,
    pub n: usize,
    pub tau_mode: TauMode,
    /// `tau_2, tau_3, ...` as expression text, for `TauMode::User`.
    pub tau_values: Vec<String>,
    /// Degree bound in `t` for the adjustment; `None` uses 4, enough for the
    /// r = 1 family through `tau_5`.
    pub degree_bound: Option<u32>,
}

impl Default for SessionConfig {
    fn default() -> SessionConfig {
        SessionConfig { name: DEFAULT_SESSION.into(), r: 1, n: 2, tau_mode: TauMode::Adjusted, tau_values: Vec::new(), degree_bound: None }
    }
}

/// Values given on the command line; each one overrides the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub r: Option<u32>,
    pub n: Option<usize>,
    pub tau_mode: Option<TauMode>,
    pub tau_values: Option<Vec<String>>,
    pub degree_bound: Option<u32>,
}

pub const DEFAULT_DEGREE_BOUND: u32 = 4;

impl SessionConfig {
    /// Read one section of a TOML session file.
    pub fn from_toml(text: &str, session: &str) -> CliResult<SessionConfig> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        let mut cfg = SessionConfig { name: session.into(), ..SessionConfig::default() };
        let Some(section) = table.get(session) else {
            if session == DEFAULT_SESSION {
                return Ok(cfg);
            }
            return Err(CliError::Config(format!("no session `{session}`")));
        };
        let section = section.as_table().ok_or_else(|| CliError::Config(format!("`{session}` is not a table")))?;
        for (key, value) in section {
            let bad = || CliError::Config(format!("bad value for `{key}` in `{session}`"));
            match key.as_str() {
                "r" => cfg.r = value.as_integer().and_then(|v| u32::try_from(v).ok()).filter(|&r| r >= 1).ok_or_else(bad)?,
                "n" => cfg.n = value.as_integer().and_then(|v| usize::try_from(v).ok()).ok_or_else(bad)?,
                "degree_bound" => cfg.degree_bound = Some(value.as_integer().and_then(|v| u32::try_from(v).ok()).ok_or_else(bad)?),
                "tau_mode" => cfg.tau_mode = value.as_str().and_then(TauMode::parse).ok_or_else(bad)?,
                "tau_values" => {
                    let list = value.as_array().ok_or_else(bad)?;
                    cfg.tau_values = list.iter().map(|v| v.as_str().map(str::to_owned).ok_or_else(bad)).collect::<CliResult<_>>()?;
                }
                _ => return Err(CliError::Config(format!("unknown key `{key}` in `{session}`"))),
            }
        }
        Ok(cfg)
    }

    /// Explicit path, else `$KDV_CONFIG`, else built-in defaults.
    pub fn load(path: Option<&Path>, session: &str) -> CliResult<SessionConfig> {
        let env_path = std::env::var_os(CONFIG_ENV).map(std::path::PathBuf::from);
        match path.map(Path::to_path_buf).or(env_path) {
            Some(p) => {
                let text = std::fs::read_to_string(&p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                SessionConfig::from_toml(&text, session)
            }
            None if session == DEFAULT_SESSION => Ok(SessionConfig::default()),
            None => Err(CliError::Config(format!("session `{session}` requested but no config file given"))),
        }
    }

    pub fn apply(mut self, o: &Overrides) -> SessionConfig {
        if let Some(r) = o.r {
            self.r = r;
        }
        if let Some(n) = o.n {
            self.n = n;
        }
        if let Some(values) = &o.tau_values {
            self.tau_values = values.clone();
            self.tau_mode = TauMode::User;
        }
        if let Some(m) = o.tau_mode {
            self.tau_mode = m;
        }
        if let Some(b) = o.degree_bound {
            self.degree_bound = Some(b);
        }
        self
    }

    pub fn bound(&self) -> u32 {
        self.degree_bound.unwrap_or(DEFAULT_DEGREE_BOUND)
    }

    fn user_taus(&self) -> CliResult<Vec<Poly>> {
        self.tau_values.iter().map(|s| parse_poly(s).map_err(|source| CliError::Expression { text: s.clone(), source })).collect()
    }
}

/// A configured session with its artifact cache and provenance log.
#[derive(Debug)]
pub struct Session {
    config: SessionConfig,
    theta: Option<ThetaSequence>,
    free: Vec<FreeParameter>,
    q: HashMap<(Sign, usize), QFamily>,
    provenance: Vec<String>,
}

impl Session {
    pub fn new(config: SessionConfig) -> Session {
        Session { config, theta: None, free: Vec::new(), q: HashMap::new(), provenance: Vec::new() }
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    /// Coefficients the adjustment left free (set to zero).
    pub fn free_parameters(&self) -> &[FreeParameter] {
        &self.free
    }

    fn log(&mut self, line: String) {
        self.provenance.push(line);
    }

    /// `theta_0 .. theta_upto` in the configured tau mode, reusing a longer
    /// cached sequence when there is one.
    pub fn thetas(&mut self, upto: usize) -> CliResult<&ThetaSequence> {
        if self.theta.as_ref().is_none_or(|s| s.n() < upto) {
            let cfg = &self.config;
            let (taus, line) = match cfg.tau_mode {
                TauMode::Symbolic => (TauAssignment::symbolic(upto.max(2) as u16), format!("theta_0..theta_{upto}: theta_sequence(symbolic tau)")),
                TauMode::Adjusted => {
                    let adj = adjust_taus(cfg.r, upto as u32, cfg.bound())?;
                    self.free = adj.free;
                    (adj.assignment, format!("theta_0..theta_{upto}: adjust_taus(r = {}, n = {upto}, bound = {}) then theta_sequence", cfg.r, cfg.bound()))
                }
                TauMode::User => {
                    let values = cfg.user_taus()?;
                    if upto >= 2 && values.len() + 1 < upto {
                        return Err(CliError::Core(kdv_core::Error::InvalidArgument(format!("tau_values gives tau_2..tau_{}, theta_{upto} needs tau_{upto}", values.len() + 1))));
                    }
                    (TauAssignment::adjusted(cfg.r, values)?, format!("theta_0..theta_{upto}: theta_sequence(user tau)"))
                }
            };
            let seq = theta_sequence(upto, &taus)?;
            self.log(line);
            self.theta = Some(seq);
        }
        Ok(self.theta.as_ref().expect("filled above"))
    }

    /// `Q±_0 .. Q±_n` by ascent over the session's sequence.
    pub fn q_family(&mut self, sign: Sign, n: usize) -> CliResult<QFamily> {
        if let Some(f) = self.q.get(&(sign, n)) {
            return Ok(f.clone());
        }
        let r = self.config.r;
        let fam = q_family(sign, r, n, self.thetas(n)?)?;
        self.log(format!("Q{}_0..Q{}_{n}: q_family(r = {r})", sign_char(sign), sign_char(sign)));
        self.q.insert((sign, n), fam.clone());
        Ok(fam)
    }
}

pub fn sign_char(sign: Sign) -> char {
    match sign {
        Sign::Plus => '+',
        Sign::Minus => '-',
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FILE: &str = r#"
[default]
r = 1
n = 3

[user]
r = 1
n = 2
tau_mode = "user"
tau_values = ["3*t"]
degree_bound = 2
"#;

    #[test]
    fn sections_and_overrides() {
        let d = SessionConfig::from_toml(FILE, "default").unwrap();
        assert_eq!((d.r, d.n, d.tau_mode), (1, 3, TauMode::Adjusted));
        let u = SessionConfig::from_toml(FILE, "user").unwrap();
        assert_eq!((u.tau_mode, u.tau_values.as_slice(), u.bound()), (TauMode::User, ["3*t".to_string()].as_slice(), 2));
        let o = Overrides { n: Some(5), tau_mode: Some(TauMode::Symbolic), ..Overrides::default() };
        assert_eq!(u.apply(&o).n, 5);
        assert!(SessionConfig::from_toml(FILE, "missing").is_err());
        assert!(SessionConfig::from_toml("[default]\nq = 1", "default").is_err());
        assert!(SessionConfig::from_toml("[default]\nr = 0", "default").is_err());
    }

    #[test]
    fn cache_reuses_longer_sequence() {
        let mut s = Session::new(SessionConfig { n: 3, ..SessionConfig::default() });
        let th3 = s.thetas(3).unwrap().theta(3).clone();
        assert_eq!(s.thetas(2).unwrap().n(), 3);
        assert_eq!(s.thetas(3).unwrap().theta(3), &th3);
        assert_eq!(s.provenance().len(), 1);
        let user = SessionConfig { tau_mode: TauMode::User, tau_values: vec!["3*t".into()], ..SessionConfig::default() };
        assert_eq!(Session::new(user).thetas(2).unwrap().theta(2), &parse_poly("x^3 + 3*t").unwrap());
    }
}
