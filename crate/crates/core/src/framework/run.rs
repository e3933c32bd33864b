use alloc::vec::Vec;

use super::{checkpoints, fit_growth_exponent, HindsightOpt, OnlineUsm, RoundTranscript, OPT_MAX_N};
use crate::balance::BalanceSubroutine;
use crate::submodular::{Oracle, SetFunction, Subset};
use crate::Result;

/// Per-round series of one online run.
#[derive(Debug, Clone)]
pub struct UsmRunResult<F> {
    pub alpha: f64,
    /// `f^t(S^t)`.
    pub rewards: Vec<f64>,
    pub cumulative_reward: Vec<f64>,
    /// Best fixed set's cumulative value after each round; `None` when not tracked.
    pub cumulative_opt: Option<Vec<f64>>,
    /// `alpha * cumulative_opt - cumulative_reward` after each round.
    pub regret: Option<Vec<f64>>,
    /// Cumulative oracle queries after each round.
    pub queries: Vec<u64>,
    pub max_round_queries: u64,
    /// Slope of log regret against log t over the checkpoints `T/16 ..= T`.
    pub growth_exponent: Option<f64>,
    pub transcripts: Option<Vec<RoundTranscript>>,
    /// The revealed functions, kept alongside transcripts.
    pub functions: Option<Vec<Oracle<F>>>,
}

impl<F> UsmRunResult<F> {
    pub fn rounds(&self) -> usize {
        self.rewards.len()
    }

    pub fn total_queries(&self) -> u64 {
        self.queries.last().copied().unwrap_or(0)
    }

    pub fn final_regret(&self) -> Option<f64> {
        self.regret.as_ref().and_then(|r| r.last().copied())
    }

    pub fn final_opt(&self) -> Option<f64> {
        self.cumulative_opt.as_ref().and_then(|r| r.last().copied())
    }
}

/// Plays `rounds` rounds.
///
/// `adversary` receives the sets chosen so far and returns the next
/// function; it must not see the current round's choice. The best fixed
/// set is tracked when `n <= 20` and `track_opt` is set.
pub fn run_usm<S, F, A>(
    usm: &mut OnlineUsm<S>,
    rounds: u64,
    alpha: f64,
    track_opt: bool,
    keep_transcripts: bool,
    mut adversary: A,
) -> Result<UsmRunResult<F>>
where
    S: BalanceSubroutine,
    F: SetFunction,
    A: FnMut(&[Subset]) -> Result<Oracle<F>>,
{
    let capacity = rounds as usize;
    let mut chosen = Vec::with_capacity(capacity);
    let mut rewards = Vec::with_capacity(capacity);
    let mut cumulative_reward = Vec::with_capacity(capacity);
    let mut queries = Vec::with_capacity(capacity);
    let mut transcripts = keep_transcripts.then(Vec::new);
    let mut functions = keep_transcripts.then(Vec::new);
    let mut hindsight: Option<HindsightOpt> = None;
    let mut opt_series = Vec::new();
    let mut total_reward = 0.0;
    let mut total_queries = 0;
    let mut max_round_queries = 0;

    for _ in 0..rounds {
        let oracle = adversary(&chosen)?;
        if track_opt && hindsight.is_none() && oracle.ground().n() <= OPT_MAX_N {
            hindsight = Some(HindsightOpt::new(oracle.ground())?);
        }
        let t = usm.run_round(&oracle)?;
        total_reward += t.reward;
        total_queries += t.queries;
        max_round_queries = max_round_queries.max(t.queries);
        chosen.push(t.chosen);
        rewards.push(t.reward);
        cumulative_reward.push(total_reward);
        queries.push(total_queries);
        if let Some(h) = hindsight.as_mut() {
            h.add(oracle.function())?;
            opt_series.push(h.best().1);
        }
        if let Some(ts) = transcripts.as_mut() {
            ts.push(t);
        }
        if let Some(fs) = functions.as_mut() {
            fs.push(oracle);
        }
    }

    let (cumulative_opt, regret) = match hindsight {
        Some(_) => {
            let regret: Vec<f64> =
                opt_series.iter().zip(&cumulative_reward).map(|(o, r)| alpha * o - r).collect();
            (Some(opt_series), Some(regret))
        }
        None => (None, None),
    };
    let growth_exponent = regret.as_ref().and_then(|r| {
        let pts: Vec<(f64, f64)> =
            checkpoints(rounds).iter().map(|&t| (t as f64, r[t as usize - 1])).collect();
        fit_growth_exponent(&pts)
    });
    Ok(UsmRunResult {
        alpha,
        rewards,
        cumulative_reward,
        cumulative_opt,
        regret,
        queries,
        max_round_queries,
        growth_exponent,
        transcripts,
        functions,
    })
}
