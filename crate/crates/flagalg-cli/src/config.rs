use std::fmt;

use flagalg::exactnum::Rational;
use flagalg::gf::{FieldSpec, GfError};
use flagalg::lattice::{lattice_size, MAX_N};
use flagalg::qaffine::default_alphas;
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Lattice,
    Combin,
    H,
    Decompose,
    Uq,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Lattice, Suite::Combin, Suite::H, Suite::Decompose, Suite::Uq];

    pub fn parse(s: &str) -> Result<Vec<Suite>, ConfigError> {
        Ok(match s.trim() {
            "lattice" | "lattice-stats" => vec![Suite::Lattice],
            "combin" | "combin-check" => vec![Suite::Combin],
            "h" | "verify-h" => vec![Suite::H],
            "decompose" => vec![Suite::Decompose],
            "uq" | "verify-uq" => vec![Suite::Uq],
            "all" => Suite::ALL.to_vec(),
            other => return Err(ConfigError(format!("unknown suite {other:?}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lattice => "lattice",
            Suite::Combin => "combin",
            Suite::H => "h",
            Suite::Decompose => "decompose",
            Suite::Uq => "uq",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<GfError> for ConfigError {
    fn from(e: GfError) -> Self {
        ConfigError(e.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub q: u64,
    pub n: usize,
    pub field: FieldSpec,
    pub alphas: Vec<Rational>,
    pub suites: Vec<Suite>,
    pub format: Format,
    pub timing: bool,
    pub max_size: u128,
    pub require_irreducible: bool,
}

pub struct RawConfig<'a> {
    pub q: u64,
    pub n: usize,
    pub modulus: Option<&'a str>,
    pub alphas: Option<&'a str>,
    pub suites: Vec<Suite>,
    pub format: Format,
    pub timing: bool,
    pub max_size: u128,
    pub require_irreducible: bool,
}

fn parse_modulus(s: &str) -> Result<Vec<u32>, ConfigError> {
    s.split(',')
        .map(|c| c.trim().parse::<u32>().map_err(|_| ConfigError(format!("bad modulus coefficient {c:?}"))))
        .collect()
}

fn parse_alphas(s: &str) -> Result<Vec<Rational>, ConfigError> {
    s.split(',')
        .map(|a| a.trim().parse::<Rational>().map_err(|_| ConfigError(format!("bad alpha {a:?}; use integers or p/r"))))
        .collect()
}

impl RunConfig {
    pub fn validate(raw: RawConfig<'_>) -> Result<RunConfig, ConfigError> {
        let modulus = raw.modulus.map(parse_modulus).transpose()?;
        let field = match &modulus {
            Some(m) => FieldSpec::with_modulus(raw.q, m.clone())?,
            None => FieldSpec::builtin(raw.q)?,
        };
        if raw.n == 0 || raw.n > MAX_N {
            return Err(ConfigError(format!("N must be between 1 and {MAX_N}, got {}", raw.n)));
        }
        let size = lattice_size(raw.q, raw.n);
        if size > raw.max_size {
            return Err(ConfigError(format!("lattice has {size} points, above the size cap {}", raw.max_size)));
        }
        let alphas = match raw.alphas {
            Some(s) => parse_alphas(s)?,
            None => default_alphas(raw.q, raw.n),
        };
        if alphas.len() != raw.n {
            return Err(ConfigError(format!("expected {} alphas, got {}", raw.n, alphas.len())));
        }
        if let Some(i) = alphas.iter().position(|a| a.is_zero()) {
            return Err(ConfigError(format!("alpha_{} must be nonzero", i + 1)));
        }
        let mut suites = raw.suites;
        suites.sort();
        suites.dedup();
        Ok(RunConfig {
            q: raw.q,
            n: raw.n,
            field,
            alphas,
            suites,
            format: raw.format,
            timing: raw.timing,
            max_size: raw.max_size,
            require_irreducible: raw.require_irreducible,
        })
    }
}
