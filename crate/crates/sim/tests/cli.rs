use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_usm-sim")).args(args).current_dir(dir).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(&["simulate-usm", "--n", "4", "--rounds", "10"], d)), 0);
    assert_eq!(code(&run(&["--help"], d)), 0);
    assert_eq!(code(&run(&["simulate-usm", "--n", "4", "--rounds", "10", "--alpha", "1.5"], d)), 1);
    assert_eq!(code(&run(&["simulate-usm", "--n", "4", "--frobnicate"], d)), 1);
    assert_eq!(code(&run(&["verify", "missing.graph"], d)), 1);

    let missing = run(&["simulate-usm", "--n", "4"], d);
    assert_eq!(code(&missing), 1);
    assert!(String::from_utf8_lossy(&missing.stderr).contains("--rounds"));

    let unwritable = run(&["simulate-usm", "--n", "4", "--rounds", "5", "--output", "no/such/dir/out.csv"], d);
    assert_eq!(code(&unwritable), 2);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["simulate-balance", "--rounds", "100", "--trials", "3", "--adversary", "pattern:RL", "--seed", "5"];
    let stdout = run(&args, d).stdout;
    let mut with_file = args.to_vec();
    with_file.extend(["--output", "out.csv"]);
    assert_eq!(code(&run(&with_file, d)), 0);
    assert_eq!(std::fs::read(d.join("out.csv")).unwrap(), stdout);
    let text = String::from_utf8(stdout).unwrap();
    assert!(text.starts_with("trial,t,reward,cum_reward,cum_opt,alpha_regret,queries\n"));
    assert_eq!(text.lines().count(), 301);
    assert!(!text.contains('\r'));
}

#[test]
fn verify_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("g.graph"), "# triangle\ndigraph 3\n1 2 1\n2 3 0.5\n3 1 2\n").unwrap();
    let out = run(&["verify", "g.graph"], d);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("submodular"));
    assert_eq!(code(&run(&["verify", "g.graph", "--samples", "500", "--format", "json"], d)), 0);

    std::fs::write(d.join("bad.graph"), "digraph 2\n1 1 1\n").unwrap();
    assert_eq!(code(&run(&["verify", "bad.graph"], d)), 1);
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("exp.toml"),
        "n = 5\nrounds = 30\nadversary = \"cycle:k=2\"\nformat = \"json\"\nsummary-only = true\n",
    )
    .unwrap();
    let out = run(&["simulate-usm", "--config", "exp.toml", "--output", "r.json"], d);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let value: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(value["config"]["n"], 5);
    assert!(value.get("rows").is_none());
}
