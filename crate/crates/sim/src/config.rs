//! Experiment configuration from command-line flags and an optional TOML
//! file. Flags override file values.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use usm_core::balance::SubroutineKind;
use usm_core::framework::OPT_MAX_N;
use usm_core::offline::ENUMERATION_MAX_N;
use usm_core::submodular::GroundSet;

use crate::descriptor;
use crate::error::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Game {
    Usm,
    Balance,
    Offline,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self, SimError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(SimError::Config(format!("unknown format {s:?}, expected csv or json"))),
        }
    }
}

/// A fully validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub game: Game,
    /// Ground-set size; 1 for the balance game.
    pub n: u32,
    /// Horizon `T`; 1 for offline and verify runs.
    pub rounds: u64,
    #[serde(with = "display_fromstr")]
    pub subroutine: SubroutineKind,
    pub adversary: String,
    pub alpha: f64,
    /// Independent repetitions with derived seeds; for offline runs, the
    /// number of randomized double-greedy trials per instance.
    pub trials: u32,
    /// Offline instances.
    pub instances: u32,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
    /// Worker threads; 0 uses every core.
    pub workers: usize,
    pub keep_transcripts: bool,
    pub summary_only: bool,
    /// Track the best fixed set in hindsight.
    pub track_opt: bool,
    /// Graph file for verify runs.
    pub graph: Option<PathBuf>,
    /// Random checks for verify runs; exhaustive when absent.
    pub samples: Option<usize>,
}

mod display_fromstr {
    use super::*;
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: fmt::Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

#[derive(Debug, Parser)]
#[command(name = "usm-sim", version, about = "Simulator for online unconstrained submodular maximization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the online double-greedy framework against an adversary.
    SimulateUsm(RunArgs),
    /// Run one balance subroutine on the two-action game.
    SimulateBalance(RunArgs),
    /// Compare offline baselines against the exact optimum.
    Offline(RunArgs),
    /// Check a graph file's cut function for submodularity.
    Verify(VerifyArgs),
}

/// Flags shared by the simulation subcommands. Every value may also come
/// from the `--config` file under the same name (kebab-case).
#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// TOML file with default values for the flags below.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Number of elements.
    #[arg(long)]
    pub n: Option<u32>,
    /// Horizon T.
    #[arg(long)]
    pub rounds: Option<u64>,
    /// balancer, mw, uniform, always-yes, always-no, balancer-doubling or mw-doubling.
    #[arg(long)]
    pub subroutine: Option<String>,
    /// Input source descriptor, e.g. `cycle:k=4,density=0.5` or `pattern:RL`.
    #[arg(long)]
    pub adversary: Option<String>,
    /// Multiplier on the hindsight optimum in the reported regret.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Independent trials (offline: randomized double-greedy runs per instance).
    #[arg(long)]
    pub trials: Option<u32>,
    /// Offline instances.
    #[arg(long)]
    pub instances: Option<u32>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Include per-round transcripts (json only).
    #[arg(long)]
    pub keep_transcripts: bool,
    /// Omit rows from json output.
    #[arg(long)]
    pub summary_only: bool,
    /// Require the hindsight optimum (default: tracked when n <= 20).
    #[arg(long, conflicts_with = "no_opt")]
    pub opt: bool,
    /// Skip the hindsight optimum.
    #[arg(long)]
    pub no_opt: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Graph file (`digraph <n>` header, then `<source> <target> <weight>` lines).
    pub graph: PathBuf,
    /// Random checks instead of the exhaustive sweep.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

/// Keys accepted in a config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    game: Option<Game>,
    n: Option<u32>,
    rounds: Option<u64>,
    subroutine: Option<String>,
    adversary: Option<String>,
    alpha: Option<f64>,
    trials: Option<u32>,
    instances: Option<u32>,
    seed: Option<u64>,
    output: Option<PathBuf>,
    format: Option<String>,
    workers: Option<usize>,
    keep_transcripts: Option<bool>,
    summary_only: Option<bool>,
    opt: Option<bool>,
}

fn read_file_config(path: &Path) -> Result<FileConfig, SimError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SimError::Config(format!("reading config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| SimError::Config(format!("config {}: {e}", path.display())))
}

/// Parses a full command line (program name first) into a validated config.
pub fn parse_config<I, T>(args: I) -> Result<ExperimentConfig, SimError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    match cli.command {
        Command::SimulateUsm(a) => resolve(Game::Usm, a),
        Command::SimulateBalance(a) => resolve(Game::Balance, a),
        Command::Offline(a) => resolve(Game::Offline, a),
        Command::Verify(a) => resolve_verify(a),
    }
}

fn missing(flag: &str) -> SimError {
    SimError::Config(format!("missing required option --{flag} (or `{flag}` in the config file)"))
}

fn resolve(game: Game, args: RunArgs) -> Result<ExperimentConfig, SimError> {
    let file = match &args.config {
        Some(path) => read_file_config(path)?,
        None => FileConfig::default(),
    };
    if let Some(g) = file.game {
        if g != game {
            return Err(SimError::Config(format!("config file is for game {g:?}, not {game:?}")));
        }
    }

    let adversary = args.adversary.or(file.adversary).unwrap_or_else(|| {
        match game {
            Game::Balance => "pattern:U",
            _ => "random-cut",
        }
        .to_owned()
    });
    let n = match game {
        Game::Balance => args.n.or(file.n).unwrap_or(1),
        _ => {
            let given = args.n.or(file.n);
            match (given, descriptor::parse_usm(&adversary)?) {
                (Some(n), _) => n,
                // Files fix n themselves; the experiment checks consistency.
                (None, descriptor::UsmSpec::Files(paths)) => crate::graph_file::read_graph(&paths[0])?.n(),
                (None, _) => return Err(missing("n")),
            }
        }
    };
    let rounds = match game {
        Game::Usm | Game::Balance => args.rounds.or(file.rounds).ok_or_else(|| missing("rounds"))?,
        _ => args.rounds.or(file.rounds).unwrap_or(1),
    };
    let subroutine = args.subroutine.or(file.subroutine).map_or(Ok(SubroutineKind::Balancer), |s| s.parse())?;
    let alpha = args.alpha.or(file.alpha).unwrap_or(match game {
        Game::Balance => 1.0,
        _ => 0.5,
    });
    let format = args.format.or(file.format).map_or(Ok(Format::Csv), |f| f.parse())?;
    let opt_requested = if args.opt {
        Some(true)
    } else if args.no_opt {
        Some(false)
    } else {
        file.opt
    };
    let track_opt = match opt_requested {
        Some(true) if game == Game::Usm && n > OPT_MAX_N => {
            return Err(SimError::Config(format!(
                "the hindsight optimum needs n <= {OPT_MAX_N}, got n = {n}; drop --opt"
            )))
        }
        Some(v) => v,
        None => n <= OPT_MAX_N,
    };

    let cfg = ExperimentConfig {
        game,
        n,
        rounds,
        subroutine,
        adversary,
        alpha,
        trials: args.trials.or(file.trials).unwrap_or(1),
        instances: args.instances.or(file.instances).unwrap_or(1),
        seed: args.seed.or(file.seed).unwrap_or(0),
        output: args.output.or(file.output),
        format,
        workers: args.workers.or(file.workers).unwrap_or(0),
        keep_transcripts: args.keep_transcripts || file.keep_transcripts.unwrap_or(false),
        summary_only: args.summary_only || file.summary_only.unwrap_or(false),
        track_opt,
        graph: None,
        samples: None,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn resolve_verify(args: VerifyArgs) -> Result<ExperimentConfig, SimError> {
    let cfg = ExperimentConfig {
        game: Game::Verify,
        n: 1,
        rounds: 1,
        subroutine: SubroutineKind::Balancer,
        adversary: String::new(),
        alpha: 1.0,
        trials: 1,
        instances: 1,
        seed: args.seed.unwrap_or(0),
        output: args.output,
        format: args.format.map_or(Ok(Format::Csv), |f| f.parse())?,
        workers: 0,
        keep_transcripts: false,
        summary_only: false,
        track_opt: false,
        graph: Some(args.graph),
        samples: args.samples,
    };
    cfg.validate()?;
    Ok(cfg)
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let err = |msg: String| Err(SimError::Config(msg));
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return err(format!("--alpha must be in (0, 1], got {}", self.alpha));
        }
        if self.rounds == 0 {
            return err("--rounds must be at least 1".into());
        }
        if self.trials == 0 {
            return err("--trials must be at least 1".into());
        }
        if self.instances == 0 {
            return err("--instances must be at least 1".into());
        }
        if self.n == 0 || self.n > GroundSet::MAX_N {
            return err(format!("--n must be in 1..={}, got {}", GroundSet::MAX_N, self.n));
        }
        if self.keep_transcripts && self.format == Format::Csv {
            return err("--keep-transcripts needs --format json".into());
        }
        if self.summary_only && self.format == Format::Csv {
            return err("--summary-only needs --format json".into());
        }
        if self.samples == Some(0) {
            return err("--samples must be at least 1".into());
        }
        match self.game {
            Game::Usm => {
                descriptor::parse_usm(&self.adversary)?;
                if self.track_opt && self.n > OPT_MAX_N {
                    return err(format!("the hindsight optimum needs n <= {OPT_MAX_N}, got n = {}", self.n));
                }
            }
            Game::Balance => {
                descriptor::parse_balance(&self.adversary)?;
            }
            Game::Offline => {
                descriptor::parse_usm(&self.adversary)?;
                if self.n > ENUMERATION_MAX_N {
                    return err(format!("offline runs enumerate all sets and need n <= {ENUMERATION_MAX_N}, got n = {}", self.n));
                }
            }
            Game::Verify => {
                if self.graph.is_none() {
                    return err("verify needs a graph file".into());
                }
            }
        }
        Ok(())
    }
}
