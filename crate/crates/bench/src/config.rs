//! Flat `key = value` benchmark configuration.
//!
//! One assignment per line, `#` starts a comment. A comma-separated value
//! list makes the key a sweep axis; the run covers the cartesian product of
//! all axes. See `docs/CONFIG.md` for the key reference.

use std::fmt;

use hodlr::{Executor, KVariant, Method};
use itertools::iproduct;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn new(line: Option<usize>, key: Option<&str>, message: impl Into<String>) -> Self {
        ConfigError { line, key: key.map(str::to_owned), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, &self.key) {
            (Some(l), Some(k)) => write!(f, "line {l}, key `{k}`: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            (None, Some(k)) => write!(f, "key `{k}`: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    Rpy,
    Laplace,
    Helmholtz,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Rpy => "rpy",
            Problem::Laplace => "laplace",
            Problem::Helmholtz => "helmholtz",
        }
    }

    pub fn parse(s: &str) -> Option<Problem> {
        [Problem::Rpy, Problem::Laplace, Problem::Helmholtz].into_iter().find(|p| p.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    Single,
    Double,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::Single => "single",
            Precision::Double => "double",
        }
    }

    pub fn parse(s: &str) -> Option<Precision> {
        match s {
            "single" => Some(Precision::Single),
            "double" => Some(Precision::Double),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecutorSpec {
    Serial,
    /// `None` uses the available parallelism.
    Threads(Option<usize>),
}

impl ExecutorSpec {
    pub fn build(self) -> Executor {
        match self {
            ExecutorSpec::Serial => Executor::serial(),
            ExecutorSpec::Threads(k) => {
                Executor::threads(k.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get())))
            }
        }
    }

    fn parse(s: &str) -> Option<ExecutorSpec> {
        if s == "serial" {
            return Some(ExecutorSpec::Serial);
        }
        if s == "threads" {
            return Some(ExecutorSpec::Threads(None));
        }
        let k = s.strip_prefix("threads(")?.strip_suffix(')')?.trim().parse().ok()?;
        (k > 0).then_some(ExecutorSpec::Threads(Some(k)))
    }
}

/// One benchmark cell: every sweep axis fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub problem: Problem,
    pub n: usize,
    pub leaf_size: usize,
    pub tol: f64,
    pub precision: Precision,
    pub kappa: f64,
    pub eta: f64,
    pub k_variant: KVariant,
    pub max_rank: Option<usize>,
    pub method: Method,
    pub seed: u64,
    pub executor: ExecutorSpec,
    pub runs: usize,
    pub budget_bytes: u64,
    pub relres_max_n: usize,
    pub flush_bytes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub problem: Vec<Problem>,
    pub n: Vec<usize>,
    pub leaf_size: Vec<usize>,
    pub tol: Vec<f64>,
    pub precision: Vec<Precision>,
    pub kappa: Vec<f64>,
    pub eta: Vec<f64>,
    pub k_variant: Vec<KVariant>,
    pub max_rank: Vec<Option<usize>>,
    pub method: Vec<Method>,
    pub seed: u64,
    pub executor: ExecutorSpec,
    pub runs: usize,
    pub budget_bytes: u64,
    /// Cells above this size skip the exact residual, which costs `N²`
    /// oracle evaluations.
    pub relres_max_n: usize,
    /// Size of the buffer swept before each timed run; 0 keeps the cache warm.
    pub flush_bytes: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            problem: vec![Problem::Rpy],
            n: vec![4096],
            leaf_size: vec![64],
            tol: vec![1e-12],
            precision: vec![Precision::Double],
            kappa: vec![20.0],
            eta: vec![20.0],
            k_variant: vec![KVariant::PivotedStandard],
            max_rank: vec![None],
            method: vec![Method::AcaRook],
            seed: 0,
            executor: ExecutorSpec::Serial,
            runs: 5,
            budget_bytes: 8 << 30,
            relres_max_n: 1 << 15,
            flush_bytes: 0,
        }
    }
}

pub const KEYS: [&str; 16] = [
    "problem",
    "n",
    "leaf_size",
    "tol",
    "precision",
    "kappa",
    "eta",
    "k_variant",
    "max_rank",
    "method",
    "seed",
    "executor",
    "runs",
    "budget_bytes",
    "relres_max_n",
    "flush_bytes",
];

fn parse_count(s: &str) -> Option<usize> {
    if let Some((base, exp)) = s.split_once('^') {
        let (base, exp): (usize, u32) = (base.trim().parse().ok()?, exp.trim().parse().ok()?);
        return base.checked_pow(exp);
    }
    s.parse().ok()
}

fn parse_positive_f64(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite() && *v > 0.0)
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        let mut seen: Vec<&str> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::new(Some(line), None, "expected `key = value`"));
            };
            let key = key.trim();
            if let Some(k) = KEYS.iter().find(|&&k| k == key) {
                if seen.contains(k) {
                    return Err(ConfigError::new(Some(line), Some(key), "key given twice"));
                }
                seen.push(k);
            }
            cfg.set_at(key, value.trim(), Some(line))?;
        }
        Ok(cfg)
    }

    /// Applies one assignment on top of the current values.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        self.set_at(key.trim(), value.trim(), None)
    }

    /// Parses `key=value`.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| ConfigError::new(None, None, format!("override `{assignment}` is not `key=value`")))?;
        self.set(k, v)
    }

    fn set_at(&mut self, key: &str, value: &str, line: Option<usize>) -> Result<(), ConfigError> {
        let err = |msg: String| ConfigError::new(line, Some(key), msg);
        let items: Vec<&str> = value.split(',').map(str::trim).collect();
        if items.iter().any(|s| s.is_empty()) {
            return Err(err("empty value".into()));
        }
        fn list<T>(items: &[&str], what: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, String> {
            items.iter().map(|s| f(s).ok_or_else(|| format!("`{s}` is not {what}"))).collect()
        }
        let single = |what: &str| -> Result<&str, ConfigError> {
            match items.as_slice() {
                [one] => Ok(one),
                _ => Err(err(format!("{what} takes a single value"))),
            }
        };
        match key {
            "problem" => self.problem = list(&items, "one of rpy, laplace, helmholtz", Problem::parse).map_err(err)?,
            "n" => {
                self.n = list(&items, "a size of at least 2", |s| parse_count(s).filter(|&n| n >= 2)).map_err(err)?
            }
            "leaf_size" => self.leaf_size = list(&items, "a positive size", |s| parse_count(s).filter(|&n| n > 0)).map_err(err)?,
            "tol" => self.tol = list(&items, "a positive tolerance", parse_positive_f64).map_err(err)?,
            "precision" => self.precision = list(&items, "single or double", Precision::parse).map_err(err)?,
            "kappa" => self.kappa = list(&items, "a positive wavenumber", parse_positive_f64).map_err(err)?,
            "eta" => self.eta = list(&items, "a finite coupling", |s| s.parse::<f64>().ok().filter(|v| v.is_finite())).map_err(err)?,
            "k_variant" => {
                self.k_variant =
                    list(&items, "one of pivoted_standard, permuted_rhs, permuted_solution", KVariant::parse).map_err(err)?
            }
            "max_rank" => {
                self.max_rank = list(&items, "a rank or `none`", |s| match s {
                    "none" => Some(None),
                    _ => parse_count(s).map(Some),
                })
                .map_err(err)?
            }
            "method" => {
                self.method = list(&items, "one of aca_partial_pivot, aca_rook_pivot, dense_svd", Method::parse).map_err(err)?
            }
            "seed" => self.seed = single("seed")?.parse().map_err(|_| err("seed must be an unsigned 64-bit integer".into()))?,
            "executor" => {
                self.executor = ExecutorSpec::parse(single("executor")?)
                    .ok_or_else(|| err("expected serial, threads or threads(k)".into()))?
            }
            "runs" => {
                self.runs = parse_count(single("runs")?).filter(|&r| r > 0).ok_or_else(|| err("runs must be positive".into()))?
            }
            "budget_bytes" => {
                self.budget_bytes = single("budget_bytes")?.parse().map_err(|_| err("expected a byte count".into()))?
            }
            "relres_max_n" => {
                self.relres_max_n = parse_count(single("relres_max_n")?).ok_or_else(|| err("expected a size".into()))?
            }
            "flush_bytes" => {
                self.flush_bytes = parse_count(single("flush_bytes")?).ok_or_else(|| err("expected a byte count".into()))?
            }
            _ => return Err(err("unknown key".into())),
        }
        Ok(())
    }

    /// Cells in sweep order: problem, n, tol, precision, leaf_size,
    /// k_variant, max_rank, method, kappa, eta.
    pub fn cells(&self) -> Vec<Cell> {
        iproduct!(
            &self.problem,
            &self.n,
            &self.tol,
            &self.precision,
            &self.leaf_size,
            &self.k_variant,
            &self.max_rank,
            &self.method,
            &self.kappa,
            &self.eta
        )
        .map(|(&problem, &n, &tol, &precision, &leaf_size, &k_variant, &max_rank, &method, &kappa, &eta)| Cell {
            problem,
            n,
            leaf_size,
            tol,
            precision,
            kappa,
            eta,
            k_variant,
            max_rank,
            method,
            seed: self.seed,
            executor: self.executor,
            runs: self.runs,
            budget_bytes: self.budget_bytes,
            relres_max_n: self.relres_max_n,
            flush_bytes: self.flush_bytes,
        })
        .collect()
    }
}
