//! Run configuration: command-line flags, an optional flat JSON file with the
//! same keys, and validation of the merged result.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};
use duality_core::processes::MARGIN;
use duality_core::scalar::{parse_rational, Rational};
use duality_core::verify::{IntertwiningKernel, REGISTERED_CASES};
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize};

use crate::catalog::{self, ORTHO_FAMILIES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyAlgebra,
    VerifyDuality,
    VerifyOrthogonality,
    Simulate,
    All,
    ListCases,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyAlgebra => "verify-algebra",
            Command::VerifyDuality => "verify-duality",
            Command::VerifyOrthogonality => "verify-orthogonality",
            Command::Simulate => "simulate",
            Command::All => "all",
            Command::ListCases => "list-cases",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "duality-lab", version, about = "Verify stochastic dualities built from Lie algebra representations")]
pub struct Cli {
    /// What to run; may also come from the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// Flat JSON object whose keys mirror the long flags.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub options: Options,
}

/// Every setting, each optional so that flags can be layered over a file.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    #[arg(skip)]
    #[serde(default)]
    pub command: Option<Command>,

    /// Case to run; repeatable. Without one the whole suite runs.
    #[arg(long = "case")]
    #[serde(default, deserialize_with = "string_list")]
    pub case: Vec<String>,

    /// Run every case of the selected suites, controls included.
    #[arg(long)]
    #[serde(default)]
    pub all: bool,

    /// Scale parameter c, as p/q or a decimal.
    #[arg(long)]
    #[serde(default, deserialize_with = "loose_string")]
    pub c: Option<String>,

    /// Per-site k, comma separated (e.g. "1/2,2").
    #[arg(long)]
    #[serde(default, deserialize_with = "loose_string")]
    pub k: Option<String>,

    /// Per-site SEP capacities, comma separated.
    #[arg(long)]
    #[serde(default, deserialize_with = "loose_string")]
    pub j: Option<String>,

    /// Angle of the hyperbolic case, in (0, pi).
    #[arg(long)]
    #[serde(default)]
    pub phi: Option<f64>,

    /// Per-site truncation of the sequence carriers.
    #[arg(long)]
    #[serde(default)]
    pub trunc: Option<usize>,

    /// Per-variable degree bound of the polynomial carriers.
    #[arg(long)]
    #[serde(default)]
    pub maxdeg: Option<u32>,

    /// Points per variable of the float grids.
    #[arg(long)]
    #[serde(default)]
    pub points: Option<usize>,

    /// Overrides the tolerance of float checks.
    #[arg(long)]
    #[serde(default)]
    pub tolerance: Option<f64>,

    /// Simulation horizon.
    #[arg(long)]
    #[serde(default)]
    pub t: Option<f64>,

    /// Euler step of the diffusions.
    #[arg(long)]
    #[serde(default)]
    pub dt: Option<f64>,

    #[arg(long)]
    #[serde(default)]
    pub trials: Option<usize>,

    #[arg(long)]
    #[serde(default)]
    pub seed: Option<u64>,

    #[arg(long, value_enum)]
    #[serde(default)]
    pub format: Option<Format>,

    /// Report path; stdout when absent.
    #[arg(long)]
    #[serde(default)]
    pub output: Option<PathBuf>,

    /// Number of sites of the duality cases.
    #[arg(long)]
    #[serde(default)]
    pub sites: Option<usize>,

    /// Initial state of the left process, comma separated.
    #[arg(long)]
    #[serde(default, deserialize_with = "loose_string")]
    pub eta1: Option<String>,

    /// Initial state of the right process, comma separated.
    #[arg(long)]
    #[serde(default, deserialize_with = "loose_string")]
    pub eta2: Option<String>,
}

/// Accepts a string, a number, or an array of either (joined with commas).
fn loose_string<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    let v = serde_json::Value::deserialize(d)?;
    flatten_value(&v).map(Some).map_err(serde::de::Error::custom)
}

fn string_list<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    let v = serde_json::Value::deserialize(d)?;
    match v {
        serde_json::Value::Array(items) => {
            items.iter().map(|x| flatten_value(x).map_err(serde::de::Error::custom)).collect()
        }
        other => flatten_value(&other).map(|s| vec![s]).map_err(serde::de::Error::custom),
    }
}

fn flatten_value(v: &serde_json::Value) -> Result<String, String> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        serde_json::Value::Array(items) => {
            let parts: Result<Vec<_>, _> = items
                .iter()
                .map(|x| match x {
                    serde_json::Value::Array(_) => Err("nested arrays are not allowed".to_string()),
                    x => flatten_value(x),
                })
                .collect();
            Ok(parts?.join(","))
        }
        other => Err(format!("expected a string, number or array, got {other}")),
    }
}

/// Invalid configuration; maps to exit status 2.
#[derive(Clone, Debug, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

impl Options {
    pub fn from_json(text: &str) -> Result<Self, UsageError> {
        serde_json::from_str(text).map_err(|e| UsageError(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// `self` layered over `base`: every value set here wins.
    pub fn over(self, base: Options) -> Options {
        Options {
            command: self.command.or(base.command),
            case: if self.case.is_empty() { base.case } else { self.case },
            all: self.all || base.all,
            c: self.c.or(base.c),
            k: self.k.or(base.k),
            j: self.j.or(base.j),
            phi: self.phi.or(base.phi),
            trunc: self.trunc.or(base.trunc),
            maxdeg: self.maxdeg.or(base.maxdeg),
            points: self.points.or(base.points),
            tolerance: self.tolerance.or(base.tolerance),
            t: self.t.or(base.t),
            dt: self.dt.or(base.dt),
            trials: self.trials.or(base.trials),
            seed: self.seed.or(base.seed),
            format: self.format.or(base.format),
            output: self.output.or(base.output),
            sites: self.sites.or(base.sites),
            eta1: self.eta1.or(base.eta1),
            eta2: self.eta2.or(base.eta2),
        }
    }
}

/// A validated run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Empty means every case of the selected suites.
    pub cases: Vec<String>,
    pub sites: usize,
    pub c: Rational,
    pub k: Vec<Rational>,
    /// Whether `k` was given; the simulations default to k = 1 otherwise.
    pub k_given: bool,
    pub j: Vec<u32>,
    pub phi: f64,
    pub trunc: usize,
    pub maxdeg: u32,
    pub points: usize,
    pub tolerance: Option<f64>,
    pub t: Option<f64>,
    pub dt: f64,
    pub trials: usize,
    pub seed: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub eta1: Option<Vec<f64>>,
    pub eta2: Option<Vec<f64>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::from_options(Options { command: Some(Command::All), ..Options::default() }).expect("defaults are valid")
    }
}

fn rational_list(name: &str, s: &str) -> Result<Vec<Rational>, UsageError> {
    s.split(',')
        .map(|p| parse_rational(p).map_err(|e| UsageError(format!("--{name}: {e}"))))
        .collect()
}

fn float_list(name: &str, s: &str) -> Result<Vec<f64>, UsageError> {
    s.split(',')
        .map(|p| {
            let v: f64 = p.trim().parse().map_err(|_| UsageError(format!("--{name}: '{p}' is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                usage(format!("--{name}: entries must be finite"))
            }
        })
        .collect()
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, UsageError> {
        let file = match &cli.config {
            Some(p) => Options::from_file(p)?,
            None => Options::default(),
        };
        let flags = Options { command: cli.command, ..cli.options };
        Self::from_options(flags.over(file))
    }

    /// Parses and checks every parameter against the constraints of the
    /// families the selected cases touch, before anything is computed.
    pub fn from_options(o: Options) -> Result<Self, UsageError> {
        let command = match o.command {
            Some(c) => c,
            None => return usage("no command given (verify-algebra, verify-duality, verify-orthogonality, simulate, all, list-cases)"),
        };
        let sites = o.sites.unwrap_or(2);
        if sites == 0 {
            return usage("--sites must be at least 1");
        }
        let c = match &o.c {
            Some(s) => parse_rational(s).map_err(|e| UsageError(format!("--c: {e}")))?,
            None => Rational::new(3.into(), 4.into()),
        };
        if !c.is_positive() {
            return usage(format!("--c must be positive, got {c}"));
        }
        let k_given = o.k.is_some();
        let k = match &o.k {
            Some(s) => rational_list("k", s)?,
            None if sites == 2 => vec![Rational::new(1.into(), 2.into()), Rational::from_integer(2.into())],
            None => vec![Rational::one(); sites],
        };
        if k.len() != sites {
            return usage(format!("--k has {} entries for {sites} sites", k.len()));
        }
        if let Some(bad) = k.iter().find(|q| !q.is_positive()) {
            return usage(format!("--k entries must be positive, got {bad}"));
        }
        let j = match &o.j {
            Some(s) => s
                .split(',')
                .map(|p| p.trim().parse::<u32>().map_err(|_| UsageError(format!("--j: '{p}' is not a nonnegative integer"))))
                .collect::<Result<Vec<_>, _>>()?,
            None if sites == 2 => vec![3, 2],
            None => vec![2; sites],
        };
        if j.len() != sites {
            return usage(format!("--j has {} entries for {sites} sites", j.len()));
        }
        if j.iter().any(|&x| x == 0 || x > 64) {
            return usage("--j entries must lie in 1..=64");
        }
        let phi = o.phi.unwrap_or(std::f64::consts::FRAC_PI_3);
        if !(phi > 0.0 && phi < std::f64::consts::PI) {
            return usage(format!("--phi must lie in (0, pi), got {phi}"));
        }
        let trunc = o.trunc.unwrap_or(12);
        if trunc <= MARGIN || trunc > 200 {
            return usage(format!("--trunc must lie in {}..=200, got {trunc}", MARGIN + 1));
        }
        let maxdeg = o.maxdeg.unwrap_or(8);
        if !(2..=64).contains(&maxdeg) {
            return usage(format!("--maxdeg must lie in 2..=64, got {maxdeg}"));
        }
        let points = o.points.unwrap_or(25);
        if !(2..=400).contains(&points) {
            return usage(format!("--points must lie in 2..=400, got {points}"));
        }
        if let Some(tol) = o.tolerance {
            if !(tol > 0.0 && tol.is_finite()) {
                return usage(format!("--tolerance must be positive, got {tol}"));
            }
        }
        if let Some(t) = o.t {
            if !(t >= 0.0 && t.is_finite()) {
                return usage(format!("--t must be finite and nonnegative, got {t}"));
            }
        }
        let dt = o.dt.unwrap_or(1e-3);
        if !(dt > 0.0 && dt.is_finite()) {
            return usage(format!("--dt must be positive, got {dt}"));
        }
        let trials = o.trials.unwrap_or(100_000);
        if trials == 0 {
            return usage("--trials must be positive");
        }
        let eta1 = o.eta1.as_deref().map(|s| float_list("eta1", s)).transpose()?;
        let eta2 = o.eta2.as_deref().map(|s| float_list("eta2", s)).transpose()?;
        let cfg = RunConfig {
            command,
            cases: if o.all { Vec::new() } else { o.case },
            sites,
            c,
            k,
            k_given,
            j,
            phi,
            trunc,
            maxdeg,
            points,
            tolerance: o.tolerance,
            t: o.t,
            dt,
            trials,
            seed: o.seed.unwrap_or(42),
            format: o.format.unwrap_or_default(),
            output: o.output,
            eta1,
            eta2,
        };
        cfg.check_cases()?;
        Ok(cfg)
    }

    fn check_cases(&self) -> Result<(), UsageError> {
        let known = catalog::selectors(self.command);
        for name in &self.cases {
            if !known.contains(&name.as_str()) {
                return usage(format!(
                    "unknown case '{name}' for {}; choose from: {}",
                    self.command.name(),
                    known.join(", ")
                ));
            }
        }
        let duality_cases: Vec<&str> = if self.selects_all() {
            match self.command {
                Command::VerifyDuality | Command::All => REGISTERED_CASES.iter().map(|c| c.name).collect(),
                Command::Simulate => catalog::MC_CASES.to_vec(),
                _ => Vec::new(),
            }
        } else {
            self.cases.iter().map(String::as_str).filter(|n| REGISTERED_CASES.iter().any(|c| c.name == *n)).collect()
        };
        let one = Rational::one();
        for name in duality_cases {
            match name {
                "sip-meixner" | "sep-krawtchouk" if self.c >= one => {
                    return usage(format!("{name} needs c in (0, 1), got {}", self.c));
                }
                _ => {}
            }
            if self.command == Command::Simulate {
                self.check_initial_states(name)?;
            }
        }
        Ok(())
    }

    fn check_initial_states(&self, name: &str) -> Result<(), UsageError> {
        let info = REGISTERED_CASES.iter().find(|c| c.name == name).expect("simulation cases are registered");
        for (flag, eta, family) in [("eta1", &self.eta1, info.left), ("eta2", &self.eta2, info.right)] {
            let Some(v) = eta else {
                if self.sites != 2 {
                    return usage(format!("--{flag} is required for {} sites (defaults exist for 2)", self.sites));
                }
                continue;
            };
            if v.len() != self.sites {
                return usage(format!("--{flag} has {} entries for {} sites", v.len(), self.sites));
            }
            if family.is_discrete() && v.iter().any(|x| *x < 0.0 || x.fract() != 0.0) {
                return usage(format!("--{flag} must hold nonnegative integers for {}", family.name()));
            }
            if family == duality_core::processes::Family::Sep {
                if let Some((x, cap)) = v.iter().zip(&self.j).find(|(x, cap)| **x > **cap as f64) {
                    return usage(format!("--{flag}: {x} exceeds the SEP capacity {cap}"));
                }
            }
            if family == duality_core::processes::Family::Bep && v.iter().any(|x| *x <= 0.0) {
                return usage(format!("--{flag} must be strictly positive for BEP"));
            }
        }
        Ok(())
    }

    /// No explicit case, or `--all`.
    pub fn selects_all(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn selected(&self, name: &str) -> bool {
        self.selects_all() || self.cases.iter().any(|c| c == name)
    }
}

/// Parses the intertwining selector "intertwining/<kernel>".
pub fn intertwining_selector(s: &str) -> Option<IntertwiningKernel> {
    s.strip_prefix("intertwining/").and_then(|k| IntertwiningKernel::parse(k).ok())
}

/// Every orthogonality selector name.
pub fn ortho_names() -> impl Iterator<Item = &'static str> {
    ORTHO_FAMILIES.iter().map(|f| f.name)
}
