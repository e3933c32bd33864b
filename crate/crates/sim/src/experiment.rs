//! Seeded multi-trial execution and aggregation.
//!
//! Trial `k` draws its coins from `trial_seed(master, k)`; instances come
//! from a stream keyed by the master seed alone, so all trials face the
//! same inputs. Trials run on a worker pool and are merged in trial order.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use usm_core::adversaries::{play_balance, UsmAdversary};
use usm_core::balance::{BalancePoint, Decision};
use usm_core::framework::{checkpoints, fit_growth_exponent, run_usm, OnlineUsm, RoundTranscript};
use usm_core::offline;
use usm_core::seed;
use usm_core::submodular::{
    synth_sequence, verify_submodularity, verify_submodularity_sampled, CutFunction, Family, Oracle, Verdict,
    EXHAUSTIVE_MAX_N,
};

use crate::config::{ExperimentConfig, Game};
use crate::descriptor::{self, UsmSpec};
use crate::error::SimError;
use crate::graph_file;

/// Key separating the instance stream from the per-trial coin streams.
const INSTANCE_STREAM: u64 = 0x1a5_7a4e;

/// One round of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub trial: u32,
    pub t: u64,
    pub reward: f64,
    pub cum_reward: f64,
    /// Best fixed action's cumulative value; absent when not tracked.
    pub cum_opt: Option<f64>,
    pub alpha_regret: Option<f64>,
    /// Oracle queries so far in this trial.
    pub queries: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointMean {
    pub t: u64,
    pub mean_regret: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: u32,
    pub rounds: u64,
    pub alpha: f64,
    /// Final α-regret of each trial; empty when the optimum is not tracked.
    pub final_regret: Vec<f64>,
    pub mean_regret: Option<f64>,
    /// Sample standard deviation across trials (0 for one trial).
    pub std_regret: Option<f64>,
    pub max_regret: Option<f64>,
    pub mean_reward: f64,
    pub mean_opt: Option<f64>,
    pub total_queries: u64,
    pub max_round_queries: u64,
    /// Mean regret at `T/16, T/8, T/4, T/2, T`.
    pub checkpoints: Vec<CheckpointMean>,
    /// Slope of log mean regret against log t over the checkpoints.
    /// Checkpoints with nonpositive regret are left out of the fit.
    pub growth_exponent: Option<f64>,
    /// `mean_regret / (n √T)`.
    pub regret_constant: Option<f64>,
    /// `(1 + α) · mean_regret / (n √T)`.
    pub scaled_regret_constant: Option<f64>,
}

/// One round's record for transcript output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RoundRecord {
    Usm {
        t: u64,
        chosen: Vec<u32>,
        decisions: Vec<bool>,
        probabilities: Vec<f64>,
        marginals: Vec<[f64; 2]>,
        queries: u64,
        reward: f64,
    },
    Balance {
        t: u64,
        alpha: f64,
        beta: f64,
        p: f64,
        chose_yes: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialTranscript {
    pub trial: u32,
    pub rounds: Vec<RoundRecord>,
}

/// Output of a `usm` or `balance` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcripts: Option<Vec<TrialTranscript>>,
}

struct TrialOutcome {
    rows: Vec<ResultRow>,
    max_round_queries: u64,
    transcript: Option<TrialTranscript>,
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, SimError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SimError::Io(format!("starting worker pool: {e}")))
}

fn instance_seed(cfg: &ExperimentConfig) -> u64 {
    seed::child_seed(cfg.seed, INSTANCE_STREAM)
}

/// Runs a `usm` or `balance` experiment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, SimError> {
    cfg.validate()?;
    let outcomes: Vec<TrialOutcome> = match cfg.game {
        Game::Usm => {
            let adversary = build_usm_adversary(cfg)?;
            pool(cfg.workers)?
                .install(|| (0..cfg.trials).into_par_iter().map(|k| usm_trial(cfg, &adversary, k)).collect::<Result<Vec<_>, SimError>>())?
        }
        Game::Balance => {
            let spec = descriptor::parse_balance(&cfg.adversary)?;
            pool(cfg.workers)?.install(|| {
                (0..cfg.trials)
                    .into_par_iter()
                    .map(|k| balance_trial(cfg, &spec, k))
                    .collect::<Result<Vec<_>, SimError>>()
            })?
        }
        other => return Err(SimError::Config(format!("run_experiment handles usm and balance, not {other:?}"))),
    };
    let summary = summarize(cfg, &outcomes);
    let transcripts = cfg.keep_transcripts.then(|| outcomes.iter().filter_map(|o| o.transcript.clone()).collect());
    let rows = outcomes.into_iter().flat_map(|o| o.rows).collect();
    Ok(Report { config: cfg.clone(), rows, summary, transcripts })
}

fn sample_cuts(params: descriptor::CutParams, n: u32, count: usize, seed: u64) -> Result<Vec<CutFunction>, SimError> {
    let family = Family::RandomCut(params.with_n(n));
    Ok(synth_sequence(&family, count, seed)?.into_iter().map(|o| o.function().clone()).collect())
}

/// The adversary shared (by cloning) across trials.
pub fn build_usm_adversary(cfg: &ExperimentConfig) -> Result<UsmAdversary, SimError> {
    let seed = instance_seed(cfg);
    let n = cfg.n;
    let adversary = match descriptor::parse_usm(&cfg.adversary)? {
        UsmSpec::RandomCut(params) => UsmAdversary::oblivious(sample_cuts(params, n, cfg.rounds as usize, seed)?)?,
        UsmSpec::Cycle { k, cut } => UsmAdversary::oblivious(sample_cuts(cut, n, k, seed)?)?,
        UsmSpec::Files(paths) => {
            let mut functions = Vec::with_capacity(paths.len());
            for path in &paths {
                let graph = graph_file::read_graph(path)?;
                if graph.n() != n {
                    return Err(SimError::Config(format!(
                        "{} has {} vertices but n = {n}",
                        path.display(),
                        graph.n()
                    )));
                }
                functions.push(CutFunction::new(Arc::new(graph)));
            }
            UsmAdversary::oblivious(functions)?
        }
        UsmSpec::Mixture(parts) => {
            let family = Family::Mixture(parts.into_iter().map(|p| Family::RandomCut(p.with_n(n))).collect());
            let functions = synth_sequence(&family, cfg.rounds as usize, seed)?;
            UsmAdversary::oblivious(functions.into_iter().map(|o| o.function().clone()).collect())?
        }
        UsmSpec::Adaptive { rule, k, cut } => UsmAdversary::adaptive(rule, sample_cuts(cut, n, k, seed)?)?,
    };
    Ok(adversary)
}

fn usm_trial(cfg: &ExperimentConfig, adversary: &UsmAdversary, trial: u32) -> Result<TrialOutcome, SimError> {
    let subroutines = (0..cfg.n).map(|_| cfg.subroutine.build(cfg.rounds)).collect::<Result<Vec<_>, _>>()?;
    let mut usm = OnlineUsm::seeded(subroutines, seed::trial_seed(cfg.seed, u64::from(trial)))?;
    let mut adversary = adversary.clone();
    let res = run_usm(&mut usm, cfg.rounds, cfg.alpha, cfg.track_opt, cfg.keep_transcripts, |chosen| {
        Ok(adversary.next_function(chosen))
    })?;
    let rows = (0..res.rounds())
        .map(|i| ResultRow {
            trial,
            t: i as u64 + 1,
            reward: res.rewards[i],
            cum_reward: res.cumulative_reward[i],
            cum_opt: res.cumulative_opt.as_ref().map(|o| o[i]),
            alpha_regret: res.regret.as_ref().map(|r| r[i]),
            queries: res.queries[i],
        })
        .collect();
    let transcript = res.transcripts.as_ref().map(|ts| TrialTranscript {
        trial,
        rounds: ts.iter().map(usm_record).collect(),
    });
    Ok(TrialOutcome { rows, max_round_queries: res.max_round_queries, transcript })
}

fn usm_record(t: &RoundTranscript) -> RoundRecord {
    RoundRecord::Usm {
        t: t.round,
        chosen: t.chosen.iter().collect(),
        decisions: t.decisions.iter().map(|d| d.chose_yes).collect(),
        probabilities: t.decisions.iter().map(|d| d.p_used).collect(),
        marginals: t.marginals.iter().map(|&(a, b)| [a, b]).collect(),
        queries: t.queries,
        reward: t.reward,
    }
}

fn balance_trial(cfg: &ExperimentConfig, spec: &descriptor::BalanceSpec, trial: u32) -> Result<TrialOutcome, SimError> {
    let mut subroutine = cfg.subroutine.build(cfg.rounds)?;
    let mut adversary = spec.build()?;
    let trial_seed = seed::trial_seed(cfg.seed, u64::from(trial));
    let mut coins = seed::rng_from_seed(seed::subroutine_seed(trial_seed, 0));
    let mut rows = Vec::with_capacity(cfg.rounds as usize);
    let mut records = cfg.keep_transcripts.then(Vec::new);
    play_balance(&mut subroutine, &mut adversary, cfg.rounds, &mut coins, |t, ledger, d: Decision, p: BalancePoint| {
        rows.push(ResultRow {
            trial,
            t,
            reward: if d.chose_yes { 0.5 * p.alpha() } else { 0.5 * p.beta() },
            cum_reward: ledger.r_alg,
            cum_opt: Some(ledger.c_yes.max(ledger.c_no)),
            alpha_regret: Some(ledger.alpha_regret(cfg.alpha)),
            queries: 0,
        });
        if let Some(r) = records.as_mut() {
            r.push(RoundRecord::Balance { t, alpha: p.alpha(), beta: p.beta(), p: d.p_used, chose_yes: d.chose_yes });
        }
    });
    let transcript = records.map(|rounds| TrialTranscript { trial, rounds });
    Ok(TrialOutcome { rows, max_round_queries: 0, transcript })
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

fn summarize(cfg: &ExperimentConfig, outcomes: &[TrialOutcome]) -> Summary {
    let last = |o: &TrialOutcome| *o.rows.last().expect("every trial plays at least one round");
    let final_regret: Vec<f64> = outcomes.iter().filter_map(|o| last(o).alpha_regret).collect();
    let has_regret = !final_regret.is_empty();
    let (mean_regret, std_regret) = if has_regret {
        let (m, s) = mean_std(&final_regret);
        (Some(m), Some(s))
    } else {
        (None, None)
    };
    let mean_of = |f: &dyn Fn(&TrialOutcome) -> f64| outcomes.iter().map(f).sum::<f64>() / outcomes.len() as f64;
    let checkpoints: Vec<CheckpointMean> = if has_regret {
        checkpoints(cfg.rounds)
            .into_iter()
            .map(|t| CheckpointMean {
                t,
                mean_regret: mean_of(&|o| o.rows[t as usize - 1].alpha_regret.unwrap_or(f64::NAN)),
            })
            .collect()
    } else {
        Vec::new()
    };
    let growth_exponent =
        fit_growth_exponent(&checkpoints.iter().map(|c| (c.t as f64, c.mean_regret)).collect::<Vec<_>>());
    let scale = f64::from(cfg.n) * (cfg.rounds as f64).sqrt();
    Summary {
        trials: cfg.trials,
        rounds: cfg.rounds,
        alpha: cfg.alpha,
        max_regret: final_regret.iter().copied().reduce(f64::max),
        final_regret,
        mean_regret,
        std_regret,
        mean_reward: mean_of(&|o| last(o).cum_reward),
        mean_opt: if has_regret { Some(mean_of(&|o| last(o).cum_opt.unwrap_or(f64::NAN))) } else { None },
        total_queries: outcomes.iter().map(|o| last(o).queries).sum(),
        max_round_queries: outcomes.iter().map(|o| o.max_round_queries).max().unwrap_or(0),
        checkpoints,
        growth_exponent,
        regret_constant: mean_regret.map(|r| r / scale),
        scaled_regret_constant: mean_regret.map(|r| (1.0 + cfg.alpha) * r / scale),
    }
}

/// One algorithm's result on one offline instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfflineRow {
    pub instance: u32,
    pub algorithm: String,
    /// The value found; for randomized double greedy, the mean over trials,
    /// and for the uniform baseline, the exact expectation.
    pub value: f64,
    pub opt: f64,
    /// `value / opt` (1 when `opt` is 0).
    pub ratio: f64,
    pub queries: u64,
    /// Standard error of `value` for randomized double greedy.
    pub std_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub min_ratio: f64,
    pub mean_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfflineReport {
    pub config: ExperimentConfig,
    pub rows: Vec<OfflineRow>,
    pub summary: Vec<AlgorithmSummary>,
}

pub const OFFLINE_ALGORITHMS: [&str; 4] = ["opt", "det-double-greedy", "rand-double-greedy", "uniform"];

/// Runs every offline baseline on `instances` instances drawn from the
/// adversary descriptor's family.
pub fn run_offline(cfg: &ExperimentConfig) -> Result<OfflineReport, SimError> {
    cfg.validate()?;
    if cfg.game != Game::Offline {
        return Err(SimError::Config(format!("run_offline handles offline, not {:?}", cfg.game)));
    }
    let instances: Vec<Oracle<CutFunction>> = match descriptor::parse_usm(&cfg.adversary)? {
        UsmSpec::Adaptive { .. } => {
            return Err(SimError::Config("offline instances need an oblivious adversary descriptor".into()))
        }
        _ => {
            let mut adversary = build_usm_adversary(&ExperimentConfig { rounds: u64::from(cfg.instances), ..cfg.clone() })?;
            (0..cfg.instances).map(|_| adversary.next_function(&[])).collect()
        }
    };
    let per_instance: Vec<Vec<OfflineRow>> = pool(cfg.workers)?.install(|| {
        instances
            .par_iter()
            .enumerate()
            .map(|(k, f)| offline_instance(cfg, k as u32, f))
            .collect::<Result<_, SimError>>()
    })?;
    let rows: Vec<OfflineRow> = per_instance.into_iter().flatten().collect();
    let summary = OFFLINE_ALGORITHMS
        .iter()
        .map(|&algorithm| {
            let ratios: Vec<f64> = rows.iter().filter(|r| r.algorithm == algorithm).map(|r| r.ratio).collect();
            AlgorithmSummary {
                algorithm: algorithm.to_owned(),
                min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
                mean_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
            }
        })
        .collect();
    Ok(OfflineReport { config: cfg.clone(), rows, summary })
}

fn offline_instance(cfg: &ExperimentConfig, instance: u32, f: &Oracle<CutFunction>) -> Result<Vec<OfflineRow>, SimError> {
    let opt = offline::brute_force_opt(&f.fresh())?;
    let det = offline::det_double_greedy(&f.fresh())?;
    let rand_seed = seed::trial_seed(cfg.seed, u64::from(instance));
    let rand = offline::rand_double_greedy_trials(&f.fresh(), cfg.trials as usize, rand_seed)?;
    let stats = rand.trials.expect("repeated runs report statistics");
    let uniform_oracle = f.fresh();
    let uniform = offline::uniform_random_value(&uniform_oracle)?;

    let row = |algorithm: &str, value: f64, queries: u64, std_err: Option<f64>| OfflineRow {
        instance,
        algorithm: algorithm.to_owned(),
        value,
        opt: opt.value,
        ratio: if opt.value > 0.0 { value / opt.value } else { 1.0 },
        queries,
        std_err,
    };
    Ok(vec![
        row("opt", opt.value, opt.queries, None),
        row("det-double-greedy", det.value, det.queries, None),
        row("rand-double-greedy", stats.mean, rand.queries, Some(stats.std_err())),
        row("uniform", uniform, uniform_oracle.queries(), None),
    ])
}

/// Outcome of a verify run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub graph: String,
    pub n: u32,
    /// `exhaustive` or `sampled`.
    pub mode: String,
    pub submodular: bool,
    /// `(S, T, i, marginal at S, marginal at T)` of the first violation.
    pub witness: Option<(String, String, u32, f64, f64)>,
}

pub fn run_verify(cfg: &ExperimentConfig) -> Result<VerifyReport, SimError> {
    cfg.validate()?;
    let path = cfg.graph.as_ref().ok_or_else(|| SimError::Config("verify needs a graph file".into()))?;
    let graph = graph_file::read_graph(path)?;
    let oracle = graph.normalize();
    let (mode, verdict) = match cfg.samples {
        Some(samples) => {
            let mut rng = seed::rng_from_seed(seed::child_seed(cfg.seed, INSTANCE_STREAM));
            ("sampled", verify_submodularity_sampled(&oracle, samples, &mut rng)?)
        }
        None if graph.n() > EXHAUSTIVE_MAX_N => {
            return Err(SimError::Config(format!(
                "exhaustive verification needs n <= {EXHAUSTIVE_MAX_N}, got n = {}; pass --samples",
                graph.n()
            )))
        }
        None => ("exhaustive", verify_submodularity(&oracle)?),
    };
    let witness = match verdict {
        Verdict::Pass => None,
        Verdict::Violation(w) => Some((w.s.to_string(), w.t.to_string(), w.i, w.marginal_s, w.marginal_t)),
    };
    Ok(VerifyReport {
        graph: path.display().to_string(),
        n: graph.n(),
        mode: mode.to_owned(),
        submodular: witness.is_none(),
        witness,
    })
}
