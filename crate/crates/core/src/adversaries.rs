//! Input generators for the balance game and the online problem.
//!
//! Oblivious generators fix their whole sequence up front. Adaptive ones are
//! deterministic functions of the decisions observed so far; randomized
//! adaptive behaviour is expressible by seeding an adversary separately
//! from the algorithm's coins.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::balance::{BalancePoint, BalanceSubroutine, Decision, Extremal, Ledger};
use crate::submodular::{CutFunction, Oracle, SetFunction, Subset};
use crate::{seed, Error, Result};

/// Adaptive rules for the balance game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BalanceRule {
    /// Left after yes, right after no: the answer just given earns `-1/2`.
    PunishLast,
    /// Right after yes, left after no.
    RewardChase,
}

impl BalanceRule {
    pub const ALL: [BalanceRule; 2] = [BalanceRule::PunishLast, BalanceRule::RewardChase];

    pub fn name(self) -> &'static str {
        match self {
            BalanceRule::PunishLast => "punish-last",
            BalanceRule::RewardChase => "reward-chase",
        }
    }

    /// The point after `last`; up when nothing has been observed yet.
    pub fn respond(self, last: Option<&Decision>) -> BalancePoint {
        let Some(d) = last else {
            return BalancePoint::UP;
        };
        match (self, d.chose_yes) {
            (BalanceRule::PunishLast, true) | (BalanceRule::RewardChase, false) => BalancePoint::LEFT,
            (BalanceRule::PunishLast, false) | (BalanceRule::RewardChase, true) => BalancePoint::RIGHT,
        }
    }
}

impl FromStr for BalanceRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown adaptive rule {s:?}, expected punish-last or reward-chase")))
    }
}

impl fmt::Display for BalanceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `pattern` over `{U, R, L}` repeated for `horizon` rounds.
pub fn extremal_pattern_sequence(pattern: &str, horizon: usize) -> Result<Vec<BalancePoint>> {
    let corners = parse_pattern(pattern)?;
    Ok(corners.iter().cycle().take(horizon).map(|e| e.point()).collect())
}

fn parse_pattern(pattern: &str) -> Result<Vec<Extremal>> {
    if pattern.is_empty() {
        return Err(Error::Config("extremal pattern must be nonempty".into()));
    }
    pattern.chars().map(Extremal::from_symbol).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum BalanceAdversary {
    /// The given points, repeated.
    Fixed { points: Vec<BalancePoint>, position: usize },
    /// Corners in a repeating pattern.
    Pattern { pattern: Vec<Extremal>, position: usize },
    Adaptive { rule: BalanceRule, history: Vec<Decision> },
}

impl BalanceAdversary {
    pub fn fixed(points: Vec<BalancePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Config("fixed sequence must be nonempty".into()));
        }
        Ok(Self::Fixed { points, position: 0 })
    }

    pub fn pattern(pattern: &str) -> Result<Self> {
        Ok(Self::Pattern { pattern: parse_pattern(pattern)?, position: 0 })
    }

    pub fn adaptive(rule: BalanceRule) -> Self {
        Self::Adaptive { rule, history: Vec::new() }
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self, Self::Adaptive { .. })
    }

    /// Next point. `last` is the decision of the round just played (`None`
    /// on the first round); oblivious kinds ignore it.
    pub fn next_point(&mut self, last: Option<Decision>) -> BalancePoint {
        match self {
            Self::Fixed { points, position } => {
                let p = points[*position % points.len()];
                *position += 1;
                p
            }
            Self::Pattern { pattern, position } => {
                let p = pattern[*position % pattern.len()].point();
                *position += 1;
                p
            }
            Self::Adaptive { rule, history } => {
                history.extend(last);
                rule.respond(history.last())
            }
        }
    }
}

/// One move of an adaptive adversary; a contract error for oblivious kinds.
pub fn adaptive_balance_step(adv: &mut BalanceAdversary, last: Option<Decision>) -> Result<BalancePoint> {
    if !adv.is_adaptive() {
        return Err(Error::Contract("adaptive step requested from an oblivious adversary".into()));
    }
    Ok(adv.next_point(last))
}

/// Plays `rounds` rounds of the balance game, calling `observe` after each
/// with the round number, updated ledger, decision and point.
pub fn play_balance<S, R, O>(
    subroutine: &mut S,
    adversary: &mut BalanceAdversary,
    rounds: u64,
    coins: &mut R,
    mut observe: O,
) -> Ledger
where
    S: BalanceSubroutine + ?Sized,
    R: Rng + ?Sized,
    O: FnMut(u64, &Ledger, Decision, BalancePoint),
{
    let mut ledger = Ledger::default();
    let mut last = None;
    for t in 1..=rounds {
        let decision = subroutine.decide(coins.gen::<f64>());
        // The adversary commits to its point from history up to t - 1 only.
        let point = adversary.next_point(last);
        subroutine.observe(point);
        ledger.update(decision, point);
        observe(t, &ledger, decision, point);
        last = Some(decision);
    }
    ledger
}

/// Adaptive rules for the online problem over a fixed pool of functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UsmRule {
    /// The pool function with the smallest value at the previous choice.
    PunishLast,
    /// The pool function with the largest value at the previous choice.
    RewardChase,
}

impl UsmRule {
    pub fn name(self) -> &'static str {
        match self {
            UsmRule::PunishLast => "punish-last",
            UsmRule::RewardChase => "reward-chase",
        }
    }
}

impl FromStr for UsmRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "punish-last" => Ok(UsmRule::PunishLast),
            "reward-chase" => Ok(UsmRule::RewardChase),
            _ => Err(Error::Config(format!("unknown adaptive rule {s:?}, expected punish-last or reward-chase"))),
        }
    }
}

/// Source of the functions for the online problem.
#[derive(Debug, Clone)]
pub enum UsmAdversary {
    /// `functions[t mod len]` in round `t`. One function is the repeated
    /// offline instance; a precomputed random sequence is the random
    /// oblivious kind.
    Oblivious { functions: Vec<CutFunction>, position: usize },
    Adaptive { rule: UsmRule, pool: Vec<CutFunction> },
}

impl UsmAdversary {
    pub fn oblivious(functions: Vec<CutFunction>) -> Result<Self> {
        Self::check_pool(&functions)?;
        Ok(Self::Oblivious { functions, position: 0 })
    }

    pub fn adaptive(rule: UsmRule, pool: Vec<CutFunction>) -> Result<Self> {
        Self::check_pool(&pool)?;
        Ok(Self::Adaptive { rule, pool })
    }

    fn check_pool(functions: &[CutFunction]) -> Result<()> {
        let first = functions.first().ok_or_else(|| Error::Config("adversary needs at least one function".into()))?;
        if functions.iter().any(|f| f.ground() != first.ground()) {
            return Err(Error::Config("adversary functions disagree on the ground set".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        match self {
            Self::Oblivious { functions, .. } => functions[0].ground().n(),
            Self::Adaptive { pool, .. } => pool[0].ground().n(),
        }
    }

    /// Next round's function, given the sets chosen in earlier rounds.
    pub fn next_function(&mut self, chosen: &[Subset]) -> Oracle<CutFunction> {
        match self {
            Self::Oblivious { functions, position } => {
                let f = functions[*position % functions.len()].clone();
                *position += 1;
                Oracle::new(f)
            }
            Self::Adaptive { rule, pool } => {
                let Some(&last) = chosen.last() else {
                    return Oracle::new(pool[0].clone());
                };
                let mut best = 0;
                for (k, f) in pool.iter().enumerate().skip(1) {
                    let (v, b) = (f.value(last), pool[best].value(last));
                    let better = match rule {
                        UsmRule::PunishLast => v < b,
                        UsmRule::RewardChase => v > b,
                    };
                    if better {
                        best = k;
                    }
                }
                Oracle::new(pool[best].clone())
            }
        }
    }
}

/// How an adaptive adversary picks the second coin's mean from the first outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoinRule {
    /// `p2 = X1`.
    Copy,
    /// `p2 = 1 - X1`.
    Flip,
    /// `p2 = c` regardless of `X1`.
    Constant(f64),
    /// `p2 = lo` after 0, `hi` after 1.
    Split { lo: f64, hi: f64 },
}

impl CoinRule {
    pub const BUILT_IN: [CoinRule; 4] =
        [CoinRule::Copy, CoinRule::Flip, CoinRule::Constant(0.3), CoinRule::Split { lo: 0.9, hi: 0.2 }];

    pub fn p2(&self, x1: bool) -> f64 {
        match *self {
            CoinRule::Copy => f64::from(u8::from(x1)),
            CoinRule::Flip => f64::from(u8::from(!x1)),
            CoinRule::Constant(c) => c,
            CoinRule::Split { lo, hi } => {
                if x1 {
                    hi
                } else {
                    lo
                }
            }
        }
    }
}

/// Minimum episode count accepted by [`covariance_estimate`].
pub const MIN_EPISODES: usize = 1000;

/// Sample covariance of `X1 - p1` and `X2 - p2` over `episodes` independent
/// two-coin episodes where `p2` is chosen after seeing `X1`.
pub fn covariance_estimate(rule: CoinRule, p1: f64, episodes: usize, seed: u64) -> Result<f64> {
    covariance_estimate_with(|x1| rule.p2(x1), p1, episodes, seed)
}

pub fn covariance_estimate_with<P>(rule: P, p1: f64, episodes: usize, seed: u64) -> Result<f64>
where
    P: Fn(bool) -> f64,
{
    if episodes < MIN_EPISODES {
        return Err(Error::Config(format!("covariance needs at least {MIN_EPISODES} episodes, got {episodes}")));
    }
    if !(0.0..=1.0).contains(&p1) {
        return Err(Error::Config(format!("p1 must be in [0, 1], got {p1}")));
    }
    let mut rng = seed::rng_from_seed(seed);
    let mut samples = Vec::with_capacity(episodes);
    for _ in 0..episodes {
        let x1 = rng.gen::<f64>() < p1;
        let p2 = rule(x1);
        if !(0.0..=1.0).contains(&p2) {
            return Err(Error::Config(format!("rule produced p2 = {p2} outside [0, 1]")));
        }
        let x2 = rng.gen::<f64>() < p2;
        samples.push((f64::from(u8::from(x1)) - p1, f64::from(u8::from(x2)) - p2));
    }
    let m = episodes as f64;
    let mean_a = samples.iter().map(|s| s.0).sum::<f64>() / m;
    let mean_b = samples.iter().map(|s| s.1).sum::<f64>() / m;
    let cov = samples.iter().map(|(a, b)| (a - mean_a) * (b - mean_b)).sum::<f64>() / (m - 1.0);
    Ok(cov)
}
