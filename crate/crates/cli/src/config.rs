//! Flat `key=value` run configuration shared by the config file and the flags.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use helmholtz6::experiment::Scheme;
use helmholtz6::problems::ProblemId;
use helmholtz6::solver::Method;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Table,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            _ => Err(CliError::Config(format!("unknown format '{s}' (csv, json or table)"))),
        }
    }
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Table => "table",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Table => "txt",
            other => other.name(),
        }
    }
}

/// One scheme or both, for sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeChoice {
    One(Scheme),
    Both,
}

impl SchemeChoice {
    pub fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeChoice::One(s) => vec![s],
            SchemeChoice::Both => vec![Scheme::New, Scheme::Baseline],
        }
    }
}

impl FromStr for SchemeChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "both" {
            return Ok(SchemeChoice::Both);
        }
        Ok(SchemeChoice::One(s.parse::<Scheme>().map_err(CliError::from)?))
    }
}

impl std::fmt::Display for SchemeChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SchemeChoice::One(s) => write!(f, "{s}"),
            SchemeChoice::Both => f.write_str("both"),
        }
    }
}

/// Every accepted key, in echo order.
pub const KEYS: [&str; 21] = [
    "problem",
    "l",
    "m",
    "k",
    "zeta",
    "scheme",
    "n",
    "ns",
    "ks",
    "base_n",
    "base_k",
    "method",
    "tol",
    "max_iter",
    "format",
    "output",
    "out_dir",
    "allow_large",
    "no_timing",
    "trials",
    "seed",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub problem: Option<ProblemId>,
    pub l: Option<i64>,
    pub m: Option<i64>,
    pub k: Option<f64>,
    pub zeta: Option<[f64; 3]>,
    pub scheme: Option<SchemeChoice>,
    pub n: Option<usize>,
    pub ns: Option<Vec<usize>>,
    pub ks: Option<Vec<f64>>,
    pub base_n: Option<usize>,
    pub base_k: Option<f64>,
    pub method: Option<Method>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub allow_large: Option<bool>,
    pub no_timing: Option<bool>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

fn scalar<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Config(format!("invalid value '{v}' for key '{key}'")))
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, CliError> {
    v.split(',').map(|s| scalar(key, s.trim())).collect()
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Sets `key` from its text form.
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), CliError> {
        match key {
            "problem" => self.problem = Some(v.parse().map_err(CliError::from)?),
            "l" => self.l = Some(scalar(key, v)?),
            "m" => self.m = Some(scalar(key, v)?),
            "k" => self.k = Some(scalar(key, v)?),
            "zeta" => {
                let z: Vec<f64> = list(key, v)?;
                let z: [f64; 3] = z
                    .try_into()
                    .map_err(|_| CliError::Config(format!("zeta needs three values, got '{v}'")))?;
                self.zeta = Some(z);
            }
            "scheme" => self.scheme = Some(v.parse()?),
            "n" => self.n = Some(scalar(key, v)?),
            "ns" => self.ns = Some(list(key, v)?),
            "ks" => self.ks = Some(list(key, v)?),
            "base_n" => self.base_n = Some(scalar(key, v)?),
            "base_k" => self.base_k = Some(scalar(key, v)?),
            "method" => self.method = Some(v.parse().map_err(CliError::from)?),
            "tol" => self.tol = Some(scalar(key, v)?),
            "max_iter" => self.max_iter = Some(scalar(key, v)?),
            "format" => self.format = Some(v.parse()?),
            "output" => self.output = Some(PathBuf::from(v)),
            "out_dir" => self.out_dir = Some(PathBuf::from(v)),
            "allow_large" => self.allow_large = Some(scalar(key, v)?),
            "no_timing" => self.no_timing = Some(scalar(key, v)?),
            "trials" => self.trials = Some(scalar(key, v)?),
            "seed" => self.seed = Some(scalar(key, v)?),
            _ => return Err(CliError::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Text form of `key`, if set.
    pub fn get(&self, key: &str) -> Option<String> {
        match key {
            "problem" => self.problem.map(|p| p.to_string()),
            "l" => self.l.map(|v| v.to_string()),
            "m" => self.m.map(|v| v.to_string()),
            "k" => self.k.map(|v| v.to_string()),
            "zeta" => self.zeta.map(|z| join(&z)),
            "scheme" => self.scheme.map(|s| s.to_string()),
            "n" => self.n.map(|v| v.to_string()),
            "ns" => self.ns.as_deref().map(join),
            "ks" => self.ks.as_deref().map(join),
            "base_n" => self.base_n.map(|v| v.to_string()),
            "base_k" => self.base_k.map(|v| v.to_string()),
            "method" => self.method.map(|v| v.to_string()),
            "tol" => self.tol.map(|v| v.to_string()),
            "max_iter" => self.max_iter.map(|v| v.to_string()),
            "format" => self.format.map(|f| f.name().to_string()),
            "output" => self.output.as_ref().map(|p| p.display().to_string()),
            "out_dir" => self.out_dir.as_ref().map(|p| p.display().to_string()),
            "allow_large" => self.allow_large.map(|v| v.to_string()),
            "no_timing" => self.no_timing.map(|v| v.to_string()),
            "trials" => self.trials.map(|v| v.to_string()),
            "seed" => self.seed.map(|v| v.to_string()),
            _ => None,
        }
    }

    /// Keys that are set, in [`KEYS`] order.
    pub fn keys_set(&self) -> Vec<&'static str> {
        KEYS.into_iter().filter(|k| self.get(k).is_some()).collect()
    }

    /// Parses a config file: one `key=value` per line, `#` comments and
    /// blank lines ignored, unknown or repeated keys rejected.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = RunConfig::default();
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", i + 1)))?;
            let key = key.trim();
            if seen.contains(&key) {
                return Err(CliError::Config(format!("line {}: key '{key}' repeated", i + 1)));
            }
            seen.push(key);
            c.set(key, value.trim())
                .map_err(|e| CliError::Config(format!("line {}: {}", i + 1, e.message())))?;
        }
        Ok(c)
    }

    /// Inverse of [`RunConfig::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for key in self.keys_set() {
            let _ = writeln!(out, "{key}={}", self.get(key).unwrap_or_default());
        }
        out
    }

    /// `self` with every key set in `flags` replaced.
    pub fn overlay(mut self, flags: &RunConfig) -> Self {
        for key in flags.keys_set() {
            let v = flags.get(key).expect("key is set");
            self.set(key, &v).expect("value came from a valid config");
        }
        self
    }

    /// Rejects keys outside `allowed`.
    pub fn restrict(&self, command: &str, allowed: &[&str]) -> Result<(), CliError> {
        match self.keys_set().into_iter().find(|k| !allowed.contains(k)) {
            Some(k) => Err(CliError::Config(format!("'{k}' does not apply to {command}"))),
            None => Ok(()),
        }
    }
}
