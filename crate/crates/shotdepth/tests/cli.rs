use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use shotdepth::report::parse_tables;

fn data(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shotdepth")).args(args).env("SOURCE_DATE_EPOCH", "1500000000").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, table: &str, column: &str) -> Vec<String> {
    let t = parse_tables(text).into_iter().find(|t| t.name == table).unwrap();
    t.column(column).unwrap().into_iter().map(str::to_string).collect()
}

#[test]
fn test_command_decisions_and_exit_codes() {
    let a = data("fixtures/design1_a.txt");
    let b = data("fixtures/design2_a.txt");
    let same = run(&["test", &a, &a]);
    assert_eq!(same.status.code(), Some(0));
    let text = stdout(&same);
    assert!(text.starts_with("# shotdepth "));
    assert!(text.contains("# timestamp: 2017-07-14T02:40:00Z"));
    assert!(text.contains("sha256="));
    assert_eq!(field(&text, "result", "p_value"), ["1"]);
    assert_eq!(field(&text, "result", "reject"), ["false"]);

    let diff = run(&["test", &a, &b, "--method", "M6"]);
    assert_eq!(diff.status.code(), Some(0));
    assert_eq!(field(&stdout(&diff), "result", "reject"), ["true"]);

    let cart = run(&["test", &a, &b, "--coords", "cartesian"]);
    assert_eq!(field(&stdout(&cart), "result", "method"), ["M5"]);

    assert_eq!(run(&["test", &a, &b, "--method", "M7"]).status.code(), Some(1));
    assert_eq!(run(&["test", &a]).status.code(), Some(1));
    assert_eq!(run(&["test", &a, "/no/such/file"]).status.code(), Some(2));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn shot_csv_selectors() {
    let csv = data("fixtures/shots_3players.csv");
    let made = format!("{csv}:made:102");
    let missed = format!("{csv}:missed:102");
    let o = run(&["test", &made, &missed, "--method", "M6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(field(&text, "result", "n1"), ["443"]);
    assert_eq!(field(&text, "result", "n2"), ["379"]);
    let none = format!("{csv}:made:999");
    assert_eq!(run(&["test", &none, &missed]).status.code(), Some(2));
}

#[test]
fn players_on_fixture() {
    let csv = data("fixtures/shots_3players.csv");
    let dir = tempfile::tempdir().unwrap();
    let rejects = dir.path().join("rejects.txt");
    let o = run(&["players", &csv, "--rejects", rejects.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(field(&text, "players", "player_id"), ["101", "102", "103"]);
    assert_eq!(field(&text, "players", "n_made"), ["429", "443", "411"]);
    assert_eq!(field(&text, "players", "n_missed"), ["394", "379", "429"]);
    assert_eq!(field(&text, "players", "reject")[1], "true");
    assert!(text.contains("# load: rows=2487 rejected_rows=2 players=3 eligible=3"));
    assert_eq!(std::fs::read_to_string(&rejects).unwrap().lines().count(), 2);

    let none = run(&["players", &csv, "--min-attempts", "1000000"]);
    assert_eq!(none.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&none.stderr).contains("no eligible players"));
    assert!(field(&stdout(&none), "players", "player_id").is_empty());

    let excl = dir.path().join("excl.txt");
    std::fs::write(&excl, "102\n").unwrap();
    let fewer = run(&["players", &csv, "--exclusions", excl.to_str().unwrap()]);
    assert_eq!(field(&stdout(&fewer), "players", "player_id"), ["101", "103"]);
}

#[test]
fn classify_with_injected_copy() {
    let src = std::fs::read_to_string(data("fixtures/shots_3players.csv")).unwrap();
    let mut text = src.clone();
    for line in src.lines().filter(|l| l.starts_with("101,")) {
        text.push_str(&line.replacen("101,", "901,", 1).replacen("Synthetic Same One", "Copy", 1));
        text.push('\n');
    }
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("shots.csv");
    std::fs::write(&csv, text).unwrap();
    let csv = csv.to_str().unwrap();

    let o = run(&["classify", csv, "--benchmark", "101", "--method", "M6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(field(&out, "group", "member").contains(&"901".to_string()));
    assert!(!field(&out, "group", "member").contains(&"102".to_string()));
    assert_eq!(field(&out, "pairs", "player"), ["102", "103", "901"]);

    assert_eq!(run(&["classify", csv, "--benchmark", "101"]).status.code(), Some(1));
    assert_eq!(run(&["classify", csv, "--benchmark", "101", "--method", "M6", "--alpha", "0"]).status.code(), Some(1));
    assert_eq!(run(&["classify", csv, "--benchmark", "555", "--method", "M6"]).status.code(), Some(2));
}

fn small_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("exp.cfg");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(
        dir.path(),
        &format!("experiment = power\ndesigns = {}\nnoise = pixel_shift\nmagnitudes = 1,3\nreplications = 8\nseed = 5\nmethods = M3,M6\n", data("design2.grid")),
    );
    let cfg = cfg.to_str().unwrap();
    let plot_dir = dir.path().join("plots");
    let first = run(&["simulate", "--config", cfg, "--plot", plot_dir.to_str().unwrap()]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let second = run(&["simulate", "--config", cfg, "--plot", plot_dir.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);
    assert!(plot_dir.join("pixel_shift_design2.svg").exists());
    let text = stdout(&first);
    assert!(text.contains("# seed: 5"));
    assert_eq!(field(&text, "power", "method"), ["M3", "M6", "M3", "M6"]);

    let reseeded = run(&["simulate", "--config", cfg, "--seed", "6", "--replications", "4"]);
    assert!(stdout(&reseeded).contains("# seed: 6"));
    assert_eq!(field(&stdout(&reseeded), "power", "tests"), ["4", "4", "4", "4"]);

    let t1 = small_config(dir.path(), "experiment = type1\ndesigns = design1\npool_size = 10\npairs = 5\nseed = 2\n");
    let o = run(&["simulate", "--config", t1.to_str().unwrap(), "--method", "M6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "type1", "tests"), ["5"]);

    let bad_grid = dir.path().join("bad.grid");
    std::fs::write(&bad_grid, "grid 2 1\nextent 0 1 0 1\n1 -1\n").unwrap();
    let bad = small_config(dir.path(), &format!("designs = {}\n", bad_grid.display()));
    assert_eq!(run(&["simulate", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    let too_many = small_config(dir.path(), "designs = design1\npool_size = 4\npairs = 7\n");
    assert_eq!(run(&["simulate", "--config", too_many.to_str().unwrap()]).status.code(), Some(2));
}
