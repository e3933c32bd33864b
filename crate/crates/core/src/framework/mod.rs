//! The online double-greedy framework.
//!
//! One balance subroutine runs per element. In round `t` the framework asks
//! subroutine `i` whether `i` belongs to the output, growing `X` from the
//! empty set and shrinking `Y` from the full set until they meet at `S^t`.
//! Once the round's function is revealed it reports
//! `alpha_i = f(X_{i-1} + i) - f(X_{i-1})` and
//! `beta_i = f(Y_{i-1} - i) - f(Y_{i-1})` back to subroutine `i`.

mod diagnostics;
mod regret;
mod run;

pub use diagnostics::{marginal_identity_residuals, opt_drop_bounds, opt_tracking_check, OptDrop, Relation, Tracking};
pub use regret::{checkpoints, fit_growth_exponent, usm_alpha_regret, HindsightOpt, OPT_MAX_N};
pub use run::{run_usm, UsmRunResult};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::balance::{BalancePoint, BalanceSubroutine, Decision};
use crate::submodular::{Oracle, SetFunction, Subset};
use crate::{seed, Error, Result};

/// Everything that happened in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTranscript {
    /// 1-based round number.
    pub round: u64,
    pub chosen: Subset,
    pub decisions: Vec<Decision>,
    /// `(alpha_i, beta_i)` for `i = 1..=n` at index `i - 1`.
    pub marginals: Vec<(f64, f64)>,
    /// `X_0 ..= X_n`.
    pub xs: Vec<Subset>,
    /// `Y_0 ..= Y_n`.
    pub ys: Vec<Subset>,
    /// Oracle queries spent on this round.
    pub queries: u64,
    /// `f^t(S^t)`.
    pub reward: f64,
}

impl RoundTranscript {
    pub fn n(&self) -> u32 {
        self.decisions.len() as u32
    }
}

/// Replays one round with fixed decisions: builds the `X`/`Y` chains and
/// evaluates all marginals against `oracle`.
///
/// Values are memoized within the round, so at most `2n + 2` distinct sets
/// are queried. Marginals are reported as computed, without checking that
/// they form valid balance points.
pub fn trace_round<F: SetFunction>(
    oracle: &Oracle<F>,
    decisions: &[Decision],
    round: u64,
) -> Result<RoundTranscript> {
    let n = oracle.ground().n();
    if decisions.len() != n as usize {
        return Err(Error::Config(format!("{} decisions for a ground set of size {n}", decisions.len())));
    }
    let start = oracle.queries();
    let mut xs = Vec::with_capacity(n as usize + 1);
    let mut ys = Vec::with_capacity(n as usize + 1);
    let (mut x, mut y) = (Subset::EMPTY, Subset::full(n));
    xs.push(x);
    ys.push(y);
    for (k, d) in decisions.iter().enumerate() {
        let i = k as u32 + 1;
        if d.chose_yes {
            x = x.with(i);
        } else {
            y = y.without(i);
        }
        xs.push(x);
        ys.push(y);
    }
    debug_assert_eq!(x, y);

    let mut memo = BTreeMap::new();
    let mut value = |s: Subset| -> Result<f64> {
        if let Some(&v) = memo.get(&s) {
            return Ok(v);
        }
        let v = oracle.evaluate(s)?;
        memo.insert(s, v);
        Ok(v)
    };
    let mut marginals = Vec::with_capacity(n as usize);
    for k in 0..n as usize {
        let i = k as u32 + 1;
        let alpha = value(xs[k].with(i))? - value(xs[k])?;
        let beta = value(ys[k].without(i))? - value(ys[k])?;
        marginals.push((alpha, beta));
    }
    let reward = value(x)?;
    Ok(RoundTranscript {
        round,
        chosen: x,
        decisions: decisions.to_vec(),
        marginals,
        xs,
        ys,
        queries: oracle.queries() - start,
        reward,
    })
}

/// `n` subroutines with their own coin streams.
#[derive(Debug)]
pub struct OnlineUsm<S> {
    subroutines: Vec<S>,
    coins: Vec<ChaCha8Rng>,
    rounds: u64,
}

impl<S: BalanceSubroutine> OnlineUsm<S> {
    /// Subroutine `i` draws its coins from a stream seeded by `coin_seeds[i]`.
    pub fn new(subroutines: Vec<S>, coin_seeds: &[u64]) -> Result<Self> {
        if subroutines.is_empty() || subroutines.len() != coin_seeds.len() {
            return Err(Error::Config(format!(
                "{} subroutines with {} coin seeds",
                subroutines.len(),
                coin_seeds.len()
            )));
        }
        let coins = coin_seeds.iter().map(|&s| seed::rng_from_seed(s)).collect();
        Ok(Self { subroutines, coins, rounds: 0 })
    }

    /// Coin seeds derived from `trial_seed` and the subroutine index.
    pub fn seeded(subroutines: Vec<S>, trial_seed: u64) -> Result<Self> {
        let seeds: Vec<u64> =
            (0..subroutines.len() as u64).map(|i| seed::subroutine_seed(trial_seed, i)).collect();
        Self::new(subroutines, &seeds)
    }

    pub fn n(&self) -> usize {
        self.subroutines.len()
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn subroutines(&self) -> &[S] {
        &self.subroutines
    }

    /// Plays one round against `oracle`.
    ///
    /// Fails with a contract error, before any subroutine sees feedback, if a
    /// marginal pair is not a valid balance point (the function is not
    /// submodular or leaves `[0, 1]`).
    pub fn run_round<F: SetFunction>(&mut self, oracle: &Oracle<F>) -> Result<RoundTranscript> {
        let n = oracle.ground().n() as usize;
        if n != self.subroutines.len() {
            return Err(Error::Config(format!(
                "{} subroutines for a ground set of size {n}",
                self.subroutines.len()
            )));
        }
        let decisions: Vec<Decision> = self
            .subroutines
            .iter_mut()
            .zip(self.coins.iter_mut())
            .map(|(sub, coins)| sub.decide(coins.gen::<f64>()))
            .collect();
        self.rounds += 1;
        let transcript = trace_round(oracle, &decisions, self.rounds)?;
        let points = transcript
            .marginals
            .iter()
            .enumerate()
            .map(|(k, &(alpha, beta))| {
                BalancePoint::new(alpha, beta).map_err(|_| {
                    Error::Contract(format!(
                        "round {}: marginals ({alpha}, {beta}) of element {} leave the balance triangle",
                        self.rounds,
                        k + 1
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for (sub, pt) in self.subroutines.iter_mut().zip(points) {
            sub.observe(pt);
        }
        Ok(transcript)
    }
}
