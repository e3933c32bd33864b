//! Adversary descriptors: `kind[:key=value,...]` strings naming an input
//! source for either game.
//!
//! Online problem (functions over `n` elements):
//!
//! | descriptor | rounds see |
//! |---|---|
//! | `random-cut[:density=D,wmin=A,wmax=B]` | a fresh random cut function each round |
//! | `cycle[:k=K,density=D,wmin=A,wmax=B]` | `K` random cut functions, repeated in order |
//! | `files:a.graph;b.graph` | the listed graph files, repeated in order |
//! | `mixture:densities=D1/D2/...` | each round, a fresh function from a uniformly chosen density |
//! | `adaptive[:rule=R,k=K,density=D]` | the pool member that best fits rule `R` at the previous choice |
//!
//! Balance game:
//!
//! | descriptor | rounds see |
//! |---|---|
//! | `pattern:URL` | the corners `U=(1,1)`, `R=(1,-1)`, `L=(-1,1)` in a repeating pattern |
//! | `punish-last`, `reward-chase` | the adaptive rule's response to the previous decision |
//! | `points:a/b;c/d` | the listed `(alpha, beta)` points, repeated |
//!
//! Random instances are drawn from a stream seeded by the master seed
//! alone, so every trial of an experiment faces the same instances.

use std::collections::BTreeMap;
use std::path::PathBuf;

use usm_core::adversaries::{BalanceAdversary, BalanceRule, UsmRule};
use usm_core::balance::BalancePoint;
use usm_core::submodular::RandomCut;

use crate::error::SimError;

/// Random cut parameters without the element count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutParams {
    pub density: f64,
    pub weights: (f64, f64),
}

impl Default for CutParams {
    fn default() -> Self {
        Self { density: 0.5, weights: (0.0, 1.0) }
    }
}

impl CutParams {
    pub fn with_n(self, n: u32) -> RandomCut {
        RandomCut { n, density: self.density, weights: self.weights }
    }

    fn check(&self, descriptor: &str) -> Result<(), SimError> {
        let (lo, hi) = self.weights;
        if !(0.0..=1.0).contains(&self.density) {
            return Err(config(descriptor, format!("density {} outside [0, 1]", self.density)));
        }
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
            return Err(config(descriptor, format!("weight range [{lo}, {hi}] must satisfy 0 <= wmin <= wmax")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum UsmSpec {
    RandomCut(CutParams),
    Cycle { k: usize, cut: CutParams },
    Files(Vec<PathBuf>),
    Mixture(Vec<CutParams>),
    Adaptive { rule: UsmRule, k: usize, cut: CutParams },
}

#[derive(Debug, Clone, PartialEq)]
pub enum BalanceSpec {
    Pattern(String),
    Rule(BalanceRule),
    Points(Vec<BalancePoint>),
}

impl BalanceSpec {
    /// A fresh adversary positioned at round 1.
    pub fn build(&self) -> Result<BalanceAdversary, SimError> {
        Ok(match self {
            BalanceSpec::Pattern(p) => BalanceAdversary::pattern(p)?,
            BalanceSpec::Rule(r) => BalanceAdversary::adaptive(*r),
            BalanceSpec::Points(points) => BalanceAdversary::fixed(points.clone())?,
        })
    }
}

fn config(descriptor: &str, msg: impl std::fmt::Display) -> SimError {
    SimError::Config(format!("adversary {descriptor:?}: {msg}"))
}

fn split(descriptor: &str) -> (&str, &str) {
    match descriptor.split_once(':') {
        Some((kind, args)) => (kind.trim(), args.trim()),
        None => (descriptor.trim(), ""),
    }
}

/// `key=value` pairs, rejecting duplicates and keys outside `allowed`.
fn key_values<'a>(
    descriptor: &str,
    args: &'a str,
    allowed: &[&str],
) -> Result<BTreeMap<&'a str, &'a str>, SimError> {
    let mut out = BTreeMap::new();
    for pair in args.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| config(descriptor, format!("expected key=value, got {pair:?}")))?;
        let key = key.trim();
        if !allowed.contains(&key) {
            return Err(config(descriptor, format!("unknown key {key:?}, expected one of {}", allowed.join(", "))));
        }
        if out.insert(key, value.trim()).is_some() {
            return Err(config(descriptor, format!("key {key:?} given twice")));
        }
    }
    Ok(out)
}

fn number<T: std::str::FromStr>(descriptor: &str, key: &str, value: &str) -> Result<T, SimError> {
    value.parse().map_err(|_| config(descriptor, format!("{key}={value:?} is not a valid number")))
}

fn cut_params(descriptor: &str, kv: &BTreeMap<&str, &str>) -> Result<CutParams, SimError> {
    let mut cut = CutParams::default();
    if let Some(v) = kv.get("density") {
        cut.density = number(descriptor, "density", v)?;
    }
    if let Some(v) = kv.get("wmin") {
        cut.weights.0 = number(descriptor, "wmin", v)?;
    }
    if let Some(v) = kv.get("wmax") {
        cut.weights.1 = number(descriptor, "wmax", v)?;
    }
    cut.check(descriptor)?;
    Ok(cut)
}

fn pool_size(descriptor: &str, kv: &BTreeMap<&str, &str>) -> Result<usize, SimError> {
    let k = kv.get("k").map_or(Ok(4), |v| number(descriptor, "k", v))?;
    if k == 0 {
        return Err(config(descriptor, "k must be at least 1"));
    }
    Ok(k)
}

pub fn parse_usm(descriptor: &str) -> Result<UsmSpec, SimError> {
    const CUT_KEYS: [&str; 3] = ["density", "wmin", "wmax"];
    let (kind, args) = split(descriptor);
    match kind {
        "random-cut" => Ok(UsmSpec::RandomCut(cut_params(descriptor, &key_values(descriptor, args, &CUT_KEYS)?)?)),
        "cycle" => {
            let kv = key_values(descriptor, args, &["k", "density", "wmin", "wmax"])?;
            Ok(UsmSpec::Cycle { k: pool_size(descriptor, &kv)?, cut: cut_params(descriptor, &kv)? })
        }
        "files" => {
            let paths: Vec<PathBuf> =
                args.split(';').map(str::trim).filter(|p| !p.is_empty()).map(PathBuf::from).collect();
            if paths.is_empty() {
                return Err(config(descriptor, "expected files:<path>[;<path>...]"));
            }
            Ok(UsmSpec::Files(paths))
        }
        "mixture" => {
            let kv = key_values(descriptor, args, &["densities", "wmin", "wmax"])?;
            let base = cut_params(descriptor, &kv)?;
            let densities = kv.get("densities").ok_or_else(|| config(descriptor, "expected densities=D1/D2/..."))?;
            densities
                .split('/')
                .map(|d| {
                    let cut = CutParams { density: number(descriptor, "densities", d.trim())?, ..base };
                    cut.check(descriptor)?;
                    Ok(cut)
                })
                .collect::<Result<Vec<_>, _>>()
                .map(UsmSpec::Mixture)
        }
        "adaptive" => {
            let kv = key_values(descriptor, args, &["rule", "k", "density", "wmin", "wmax"])?;
            let rule = kv.get("rule").map_or(Ok(UsmRule::PunishLast), |r| r.parse())?;
            Ok(UsmSpec::Adaptive { rule, k: pool_size(descriptor, &kv)?, cut: cut_params(descriptor, &kv)? })
        }
        _ => Err(config(descriptor, "unknown kind, expected random-cut, cycle, files, mixture or adaptive")),
    }
}

pub fn parse_balance(descriptor: &str) -> Result<BalanceSpec, SimError> {
    let (kind, args) = split(descriptor);
    match kind {
        "pattern" => {
            // Validates the symbols.
            BalanceAdversary::pattern(args).map_err(|e| config(descriptor, e))?;
            Ok(BalanceSpec::Pattern(args.to_owned()))
        }
        "punish-last" | "reward-chase" if args.is_empty() => Ok(BalanceSpec::Rule(kind.parse()?)),
        "points" => {
            let points = args
                .split(';')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(|p| {
                    let (a, b) =
                        p.split_once('/').ok_or_else(|| config(descriptor, format!("expected alpha/beta, got {p:?}")))?;
                    let (a, b) = (number(descriptor, "alpha", a.trim())?, number(descriptor, "beta", b.trim())?);
                    BalancePoint::new(a, b).map_err(|e| config(descriptor, e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if points.is_empty() {
                return Err(config(descriptor, "expected points:a/b[;c/d...]"));
            }
            Ok(BalanceSpec::Points(points))
        }
        _ => Err(config(descriptor, "unknown kind, expected pattern:<URL>, punish-last, reward-chase or points:<a/b;...>")),
    }
}
