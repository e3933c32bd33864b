use proptest::prelude::*;
use usm_core::balance::{BalancePoint, Decision, Ledger};
use usm_core::framework::usm_alpha_regret;
use usm_core::seed;
use usm_core::submodular::{Oracle, SetFunction, Subset};
use usm_sim::experiment::{build_usm_adversary, RoundRecord};
use usm_sim::{output, parse_config, run_experiment, run_offline, ExperimentConfig, Report};

fn config(line: &str) -> ExperimentConfig {
    parse_config(std::iter::once("usm-sim").chain(line.split_whitespace())).unwrap()
}

fn csv(line: &str) -> String {
    output::render_report(&run_experiment(&config(line)).unwrap()).unwrap()
}

#[test]
fn same_seed_same_bytes_across_worker_counts() {
    let base = "simulate-usm --n 6 --rounds 200 --trials 4 --adversary cycle:k=3 --seed 11";
    let a = csv(&format!("{base} --workers 1"));
    let b = csv(&format!("{base} --workers 3"));
    assert_eq!(a, b);
    assert_ne!(a, csv("simulate-usm --n 6 --rounds 200 --trials 4 --adversary cycle:k=3 --seed 12"));
}

#[test]
fn rows_are_ordered_prefix_sums() {
    let report = run_experiment(&config("simulate-usm --n 5 --rounds 50 --trials 3 --subroutine mw --seed 2")).unwrap();
    assert_eq!(report.rows.len(), 150);
    for (k, trial) in report.rows.chunks(50).enumerate() {
        let mut acc = 0.0;
        for (i, r) in trial.iter().enumerate() {
            assert_eq!((r.trial, r.t), (k as u32, i as u64 + 1));
            acc += r.reward;
            assert_eq!(acc, r.cum_reward);
        }
        assert!(trial.windows(2).all(|w| w[0].queries <= w[1].queries));
        assert!(trial.windows(2).all(|w| w[0].cum_opt <= w[1].cum_opt));
    }
    assert_eq!(report.summary.final_regret.len(), 3);
    assert_eq!(report.summary.total_queries, report.rows.chunks(50).map(|t| t[49].queries).sum::<u64>());
}

#[test]
fn always_no_earns_the_empty_set_value() {
    let cfg = config("simulate-usm --n 5 --rounds 40 --subroutine always-no --adversary random-cut:density=0.7 --seed 4");
    let report = run_experiment(&cfg).unwrap();
    let mut adversary = build_usm_adversary(&cfg).unwrap();
    for row in &report.rows {
        let f = adversary.next_function(&[]);
        assert_eq!(row.reward, f.function().value(Subset::EMPTY));
    }
}

#[test]
fn balance_corner_pattern_regret_is_order_sqrt_t() {
    let report = run_experiment(&config("simulate-balance --rounds 10000 --adversary pattern:U --seed 1")).unwrap();
    let bound = 5.0 * 100.0;
    let regret = report.summary.mean_regret.unwrap();
    assert!(regret <= bound, "{regret} > {bound}");
}

#[test]
fn regret_column_matches_recomputation_from_transcripts() {
    let cfg = config(
        "simulate-usm --n 6 --rounds 120 --trials 2 --adversary adaptive:rule=punish-last,k=3 --seed 5 \
         --format json --keep-transcripts",
    );
    let report = run_experiment(&cfg).unwrap();
    let transcripts = report.transcripts.as_ref().unwrap();
    let mut rng = seed::rng_from_seed(99);
    for _ in 0..100 {
        use rand::Rng;
        let trial = rng.gen_range(0..2usize);
        let t = rng.gen_range(1..=120usize);
        // Replay the adaptive adversary on the recorded choices.
        let mut adversary = build_usm_adversary(&cfg).unwrap();
        let mut chosen = Vec::new();
        let mut functions: Vec<Oracle<_>> = Vec::new();
        for record in &transcripts[trial].rounds[..t] {
            functions.push(adversary.next_function(&chosen));
            let RoundRecord::Usm { chosen: set, .. } = record else { panic!("usm transcript") };
            chosen.push(Subset::from_elements(set.iter().copied()));
        }
        let history: Vec<_> = functions.iter().zip(chosen.iter().copied()).collect();
        let direct = usm_alpha_regret(&history, 0.5, None).unwrap();
        let row = report.rows[trial * 120 + t - 1];
        assert!((row.alpha_regret.unwrap() - direct).abs() < 1e-9, "trial {trial} t {t}");
    }
}

#[test]
fn balance_regret_column_matches_ledger_replay() {
    let report = run_experiment(&config(
        "simulate-balance --rounds 300 --trials 2 --adversary reward-chase --alpha 0.5 --format json --keep-transcripts",
    ))
    .unwrap();
    for transcript in report.transcripts.as_ref().unwrap() {
        let mut ledger = Ledger::default();
        for record in &transcript.rounds {
            let RoundRecord::Balance { t, alpha, beta, p, chose_yes } = *record else { panic!("balance transcript") };
            ledger.update(Decision { chose_yes, p_used: p }, BalancePoint::new(alpha, beta).unwrap());
            let row = report.rows[transcript.trial as usize * 300 + t as usize - 1];
            assert_eq!(row.alpha_regret.unwrap(), ledger.alpha_regret(0.5));
        }
    }
}

#[test]
fn json_round_trip_is_exact() {
    let report = run_experiment(&config("simulate-usm --n 4 --rounds 64 --trials 2 --format json --seed 3")).unwrap();
    let text = output::render_report(&report).unwrap();
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}

#[test]
fn summary_only_drops_rows() {
    let report =
        run_experiment(&config("simulate-usm --n 4 --rounds 16 --format json --summary-only --seed 3")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&output::render_report(&report).unwrap()).unwrap();
    let keys: Vec<&String> = value.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["config", "summary"]);
}

#[test]
fn large_n_runs_without_optimum() {
    let report = run_experiment(&config("simulate-usm --n 24 --rounds 10 --seed 1")).unwrap();
    assert!(report.rows.iter().all(|r| r.cum_opt.is_none() && r.alpha_regret.is_none()));
    assert!(report.summary.mean_regret.is_none());
    let text = output::render_report(&report).unwrap();
    assert!(text.lines().nth(1).unwrap().contains(",,,"));
}

#[test]
fn offline_ladder_on_small_instances() {
    let report = run_offline(&config("offline --n 6 --instances 5 --trials 200 --seed 8")).unwrap();
    assert_eq!(report.rows.len(), 20);
    for row in &report.rows {
        assert!(row.value <= row.opt + 1e-12, "{row:?}");
        match row.algorithm.as_str() {
            "det-double-greedy" => assert!(row.ratio >= 1.0 / 3.0 - 1e-9),
            "uniform" => assert!(row.ratio >= 0.25 - 1e-9),
            _ => {}
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn query_budget_and_monotone_accounting(n in 1u32..9, rounds in 1u64..40, seed in any::<u64>()) {
        let report = run_experiment(&config(&format!("simulate-usm --n {n} --rounds {rounds} --seed {seed}"))).unwrap();
        prop_assert!(report.summary.max_round_queries <= 4 * u64::from(n) + 2);
        prop_assert!(report.rows.windows(2).all(|w| w[0].queries <= w[1].queries));
    }
}
