use std::process::ExitCode;

use usm_sim::config::{Game, Format};
use usm_sim::error::EXIT_VERIFICATION;
use usm_sim::{output, parse_config, run_experiment, run_offline, run_verify, SimError};

fn run() -> Result<i32, SimError> {
    let cfg = parse_config(std::env::args_os())?;
    let out = cfg.output.as_deref();
    match cfg.game {
        Game::Usm | Game::Balance => {
            let report = run_experiment(&cfg)?;
            output::emit(out, &output::render_report(&report)?)?;
            let s = &report.summary;
            match (s.mean_regret, s.std_regret) {
                (Some(m), Some(sd)) => eprintln!(
                    "{} trials x {} rounds: mean {}-regret {m:.6} (std {sd:.6}), growth exponent {}, queries {} (max {}/round)",
                    s.trials,
                    s.rounds,
                    s.alpha,
                    s.growth_exponent.map_or("n/a".into(), |c| format!("{c:.3}")),
                    s.total_queries,
                    s.max_round_queries
                ),
                _ => eprintln!(
                    "{} trials x {} rounds: mean reward {:.6}, queries {} (max {}/round)",
                    s.trials, s.rounds, s.mean_reward, s.total_queries, s.max_round_queries
                ),
            }
            Ok(0)
        }
        Game::Offline => {
            let report = run_offline(&cfg)?;
            output::emit(out, &output::render_offline(&report)?)?;
            for a in &report.summary {
                eprintln!("{:<20} min ratio {:.6}  mean ratio {:.6}", a.algorithm, a.min_ratio, a.mean_ratio);
            }
            Ok(0)
        }
        Game::Verify => {
            let report = run_verify(&cfg)?;
            if cfg.format == Format::Json || out.is_some() {
                output::emit(out, &output::render_verify(&report, cfg.format)?)?;
            }
            match &report.witness {
                None => {
                    eprintln!("{}: submodular ({} check, n = {})", report.graph, report.mode, report.n);
                    Ok(0)
                }
                Some((s, t, i, ms, mt)) => {
                    eprintln!(
                        "{}: not submodular: S = {s}, T = {t}, i = {i}: f(S+i)-f(S) = {ms} > f(T+i)-f(T) = {mt}",
                        report.graph
                    );
                    Ok(EXIT_VERIFICATION)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e @ SimError::Cli(_)) => {
            let code = e.exit_code();
            if let SimError::Cli(e) = e {
                // Help and version go to stdout, errors to stderr.
                let _ = e.print();
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
