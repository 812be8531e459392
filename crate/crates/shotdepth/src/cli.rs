//! `shotdepth` command line.
//!
//! Exit status: 0 when the requested computation finished (whatever the
//! test decisions), 1 for usage errors, 2 for data errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use shotdepth_core::depth::DepthKind;
use shotdepth_core::geometry::{polar_as_plane, to_polar_pattern};
use shotdepth_core::hyptest::{
    depth_chi_square_test, depth_cm_star, depth_ks_star, run_method_with, RunOptions, DEFAULT_ALPHA,
};
use shotdepth_core::ppsim::{
    designs, run_power_experiment, run_type1_experiment, Executor, ExperimentConfig, PowerTable, Type1Table,
};
use shotdepth_core::{CartesianPoint, Coords, NoiseKind, PointPattern, TestMethod, TestResult};

use crate::classify::{group_by_benchmark, Correction};
use crate::exec::Rayon;
use crate::io::{read_grid, read_points, Config};
use crate::report::{num, Report, RunManifest, Table};
use crate::shotdata::{
    build_charts, filter_players, load_shot_csv, read_exclusions, AttemptBasis, ColumnMap, PlayerShotChart,
};
use crate::{plot, DataError};

pub const USAGE_ERROR: u8 = 1;
pub const DATA_ERROR: u8 = 2;

const DEFAULT_BREAKS: &str = "0,0.05,0.1,0.2,0.3,1";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(DataError),
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Data(e)
    }
}

impl From<shotdepth_core::Error> for CliError {
    fn from(e: shotdepth_core::Error) -> Self {
        CliError::Data(e.into())
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Depth-based two-sample tests for spatial point patterns and shot charts.
#[derive(Debug, Parser)]
#[command(name = "shotdepth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test two point patterns against each other.
    ///
    /// An input is a two-column coordinate file, or a shot CSV with a
    /// selector: `shots.csv:made`, `shots.csv:missed`, `shots.csv:made:ID`.
    /// One-sample methods (chi2, ks_star, cm_star) treat A as the sample
    /// and B as the reference.
    Test(TestArgs),
    /// Made-vs-missed test for every eligible player in a shot CSV.
    Players(PlayersArgs),
    /// Run a type-I or power experiment described by a config file.
    Simulate(SimulateArgs),
    /// Players whose made and missed patterns both match a benchmark.
    ///
    /// Groups are benchmark-relative: B in A's group does not imply A in
    /// B's.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ShotArgs {
    /// Override CSV column names, e.g. `x=X_COORD,y=Y_COORD,made=FLAG`.
    #[arg(long)]
    columns: Option<String>,
    /// Keep players with strictly more than this many shots.
    #[arg(long, default_value_t = 400)]
    min_attempts: usize,
    /// What the threshold counts: `attempts` or `made`.
    #[arg(long, default_value = "attempts")]
    basis: AttemptBasis,
    /// File of player ids to drop, one per line.
    #[arg(long)]
    exclusions: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TestArgs {
    a: String,
    b: String,
    #[arg(long, default_value = "M6")]
    method: TestMethod,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Run the chosen scheme in this frame (M1<->M2, M3<->M4, M5<->M6).
    #[arg(long)]
    coords: Option<Coords>,
    /// Monte Carlo seed (cm_star).
    #[arg(long)]
    seed: Option<u64>,
    /// Depth cell boundaries for chi2, from 0 to 1.
    #[arg(long, default_value = DEFAULT_BREAKS)]
    breaks: String,
    /// Planar depth for the Liu-Singh and one-sample tests.
    #[arg(long, default_value = "tukey")]
    depth: DepthKind,
    /// Column overrides for shot CSV inputs.
    #[arg(long)]
    columns: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct PlayersArgs {
    shots: PathBuf,
    #[arg(long, default_value = "M6")]
    method: TestMethod,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[command(flatten)]
    shots_opts: ShotArgs,
    /// Write the row rejection report here.
    #[arg(long)]
    rejects: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Comma-separated methods, e.g. `M3,M6`.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    replications: Option<usize>,
    /// Directory for SVG charts.
    #[arg(long)]
    plot: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    shots: PathBuf,
    #[arg(long)]
    benchmark: String,
    /// Test scheme (M1..M6); there is no default.
    #[arg(long)]
    method: TestMethod,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// `bonferroni` halves alpha for the two tests per player; `none`.
    #[arg(long, default_value = "bonferroni")]
    correction: Correction,
    #[command(flatten)]
    shots_opts: ShotArgs,
    #[command(flatten)]
    output: OutputArgs,
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => USAGE_ERROR,
            };
        }
    };
    let raw: Vec<String> = args.iter().skip(2).map(|a| a.to_string_lossy().into_owned()).collect();
    let outcome = match cli.command {
        Command::Test(a) => cmd_test(a, raw),
        Command::Players(a) => cmd_players(a, raw),
        Command::Simulate(a) => cmd_simulate(a, raw),
        Command::Classify(a) => cmd_classify(a, raw),
    };
    match outcome {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            USAGE_ERROR
        }
        Err(CliError::Data(e)) => {
            eprintln!("error: {e}");
            DATA_ERROR
        }
    }
}

fn check_alpha(alpha: f64) -> CliResult<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(usage(format!("--alpha must lie in (0, 1), got {alpha}")))
    }
}

fn require_two_sample(method: TestMethod) -> CliResult<()> {
    if method.is_two_sample() {
        Ok(())
    } else {
        Err(usage(format!("method {method} is not one of M1..M6")))
    }
}

/// The scheme of the same family in the requested frame.
fn in_frame(method: TestMethod, coords: Coords) -> TestMethod {
    use TestMethod::*;
    match (method, coords) {
        (M1 | M2, Coords::Cartesian) => M1,
        (M1 | M2, Coords::Polar) => M2,
        (M3 | M4, Coords::Cartesian) => M3,
        (M3 | M4, Coords::Polar) => M4,
        (M5 | M6, Coords::Cartesian) => M5,
        (M5 | M6, Coords::Polar) => M6,
        (m, _) => m,
    }
}

fn column_map(spec: Option<&str>) -> CliResult<ColumnMap> {
    match spec {
        None => Ok(ColumnMap::default()),
        Some(s) => ColumnMap::default().with_overrides(s).map_err(|e| usage(e.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Input {
    Points(PathBuf),
    Shots { path: PathBuf, made: bool, player: Option<String> },
}

fn made_flag(s: &str) -> Option<bool> {
    match s {
        "made" => Some(true),
        "missed" => Some(false),
        _ => None,
    }
}

fn parse_input(s: &str) -> Input {
    if let Some((head, tail)) = s.rsplit_once(':') {
        if let Some(made) = made_flag(tail) {
            return Input::Shots { path: head.into(), made, player: None };
        }
        if let Some((path, kind)) = head.rsplit_once(':') {
            if let Some(made) = made_flag(kind) {
                return Input::Shots { path: path.into(), made, player: Some(tail.to_string()) };
            }
        }
    }
    Input::Points(s.into())
}

fn load_input(input: &Input, columns: &ColumnMap, manifest: &mut RunManifest) -> CliResult<PointPattern> {
    match input {
        Input::Points(path) => {
            manifest.add_input(path)?;
            Ok(read_points(path)?)
        }
        Input::Shots { path, made, player } => {
            manifest.add_input(path)?;
            let load = load_shot_csv(path, columns)?;
            let pts: Vec<CartesianPoint> = load
                .records
                .iter()
                .filter(|r| r.made == *made && player.as_ref().is_none_or(|id| &r.player_id == id))
                .map(|r| CartesianPoint::new(r.x, r.y))
                .collect();
            if pts.is_empty() {
                let who = player.as_deref().map(|p| format!(" for player {p}")).unwrap_or_default();
                return Err(DataError::Other(format!(
                    "{}: no {} shots{who}",
                    path.display(),
                    if *made { "made" } else { "missed" }
                ))
                .into());
            }
            Ok(PointPattern::from_points(pts)?)
        }
    }
}

fn to_polar_plane(p: &PointPattern, origin: CartesianPoint) -> CliResult<PointPattern> {
    Ok(PointPattern::from_points(polar_as_plane(&to_polar_pattern(p, origin)))?)
}

fn parse_breaks(s: &str) -> CliResult<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| usage(format!("invalid break `{t}`")))).collect()
}

fn result_table(r: &TestResult) -> Table {
    let mut t = Table::new(
        "result",
        &["method", "statistic", "p_value", "n1", "n2", "n_eff", "corr", "alpha", "reject", "warnings"],
    );
    t.push(vec![
        r.method.name().to_string(),
        num(Some(r.statistic)),
        num(Some(r.p_value)),
        r.n1.to_string(),
        r.n2.to_string(),
        num(r.n_eff),
        num(r.corr),
        num(Some(r.alpha)),
        r.reject.to_string(),
        r.warnings.to_string(),
    ]);
    t
}

fn cmd_test(a: TestArgs, raw: Vec<String>) -> CliResult<()> {
    check_alpha(a.alpha)?;
    let method = a.coords.map_or(a.method, |c| in_frame(a.method, c));
    let columns = column_map(a.columns.as_deref())?;
    let mut m = RunManifest::new("test", raw);
    m.set("method", method);
    m.set("alpha", a.alpha);
    m.set("depth", a.depth.name());
    let breaks = if method == TestMethod::ChiSquare {
        m.set("breaks", &a.breaks);
        Some(parse_breaks(&a.breaks)?)
    } else {
        None
    };
    if method == TestMethod::CmStar {
        m.seed = Some(a.seed.unwrap_or(0));
    } else {
        m.seed = a.seed;
    }
    let pa = load_input(&parse_input(&a.a), &columns, &mut m)?;
    let pb = load_input(&parse_input(&a.b), &columns, &mut m)?;
    let opts = RunOptions { depth: a.depth, ..RunOptions::default() };

    let result = if method.is_two_sample() {
        run_method_with(method, &pa, &pb, a.alpha, &opts)?
    } else {
        let (sample, reference) = match a.coords {
            Some(Coords::Polar) => {
                m.set("coords", "polar");
                (to_polar_plane(&pa, opts.origin)?, to_polar_plane(&pb, opts.origin)?)
            }
            _ => (pa, pb),
        };
        let r = match method {
            TestMethod::ChiSquare => {
                depth_chi_square_test(&sample, &reference, breaks.as_deref().unwrap_or_default(), a.depth)?
            }
            TestMethod::KsStar => depth_ks_star(&sample, &reference, a.depth)?,
            _ => depth_cm_star(&sample, &reference, a.depth, m.seed.unwrap_or(0))?,
        };
        r.with_alpha(a.alpha)
    };
    let mut report = Report::new(m);
    report.tables.push(result_table(&result));
    report.write_to(a.output.out.as_ref())?;
    Ok(())
}

struct EligiblePlayers {
    charts: Vec<PlayerShotChart>,
    all: usize,
    rows_read: usize,
    rows_rejected: usize,
}

fn load_players(
    path: &Path,
    opts: &ShotArgs,
    manifest: &mut RunManifest,
    rejects: Option<&PathBuf>,
) -> CliResult<EligiblePlayers> {
    let columns = column_map(opts.columns.as_deref())?;
    manifest.set("min_attempts", opts.min_attempts);
    manifest.set(
        "basis",
        match opts.basis {
            AttemptBasis::Attempts => "attempts",
            AttemptBasis::Made => "made",
        },
    );
    manifest.add_input(path)?;
    let load = load_shot_csv(path, &columns)?;
    if let Some(r) = rejects {
        std::fs::write(r, load.rejection_report()).map_err(|e| DataError::Io { path: r.clone(), source: e })?;
    }
    let exclusions = match &opts.exclusions {
        Some(p) => {
            manifest.add_input(p)?;
            read_exclusions(p)?
        }
        None => BTreeSet::new(),
    };
    manifest.set("exclusions", exclusions.len());
    let charts = build_charts(&load.records);
    let eligible = filter_players(&charts, opts.min_attempts, &exclusions, opts.basis);
    Ok(EligiblePlayers {
        charts: eligible,
        all: charts.len(),
        rows_read: load.rows_read,
        rows_rejected: load.rejections.len(),
    })
}

fn cmd_players(a: PlayersArgs, raw: Vec<String>) -> CliResult<()> {
    check_alpha(a.alpha)?;
    require_two_sample(a.method)?;
    let mut m = RunManifest::new("players", raw);
    m.set("method", a.method);
    m.set("alpha", a.alpha);
    let players = load_players(&a.shots, &a.shots_opts, &mut m, a.rejects.as_ref())?;

    let opts = RunOptions::default();
    let charts = &players.charts;
    let results = Rayon
        .map_indexed(charts.len(), |i| run_method_with(a.method, &charts[i].made, &charts[i].missed, a.alpha, &opts));

    let mut table = Table::new(
        "players",
        &["player_id", "player_name", "n_made", "n_missed", "statistic", "p_value", "reject", "warnings"],
    );
    let (mut rejected, mut kept, mut untestable) = (0, 0, 0);
    for (c, r) in charts.iter().zip(&results) {
        let (stat, p, decision, note) = match r {
            Ok(r) => {
                if r.reject {
                    rejected += 1;
                } else {
                    kept += 1;
                }
                (Some(r.statistic), Some(r.p_value), r.reject.to_string(), r.warnings.to_string())
            }
            Err(e) => {
                untestable += 1;
                (None, None, "NA".to_string(), format!("untestable: {e}"))
            }
        };
        table.push(vec![
            c.player_id.clone(),
            c.player_name.clone(),
            c.made.len().to_string(),
            c.missed.len().to_string(),
            num(stat),
            num(p),
            decision,
            note,
        ]);
    }

    let mut report = Report::new(m);
    report.note(format!(
        "load: rows={} rejected_rows={} players={} eligible={}",
        players.rows_read,
        players.rows_rejected,
        players.all,
        charts.len()
    ));
    report.note(format!(
        "summary: eligible={} rejected={rejected} not_rejected={kept} untestable={untestable}",
        charts.len()
    ));
    if charts.is_empty() {
        eprintln!("warning: no eligible players");
        report.note("warning: no eligible players");
    }
    report.tables.push(table);
    report.write_to(a.output.out.as_ref())?;
    Ok(())
}

fn parse_methods(s: &str) -> CliResult<Vec<TestMethod>> {
    let methods = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<TestMethod>().map_err(|e| usage(format!("`{t}`: {e}"))))
        .collect::<CliResult<Vec<_>>>()?;
    for &m in &methods {
        require_two_sample(m)?;
    }
    Ok(methods)
}

fn config_value<T: std::str::FromStr>(cfg: &Config, key: &str) -> CliResult<Option<T>> {
    Ok(cfg.parsed(key)?)
}

fn parse_f64_list(s: &str, key: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>().map_err(|_| CliError::Data(DataError::Config(format!("invalid number `{t}` in `{key}`"))))
        })
        .collect()
}

/// Builtin name or grid file; a file's name is its stem.
fn load_designs(cfg: &Config, manifest: &mut RunManifest) -> CliResult<Vec<(String, shotdepth_core::IntensityGrid)>> {
    let items = cfg.list("designs").unwrap_or_else(|| vec!["design1", "design2"]);
    let mut out = Vec::new();
    for item in items {
        if let Some(grid) = designs::by_name(item) {
            let name = match item.trim().to_ascii_lowercase().as_str() {
                "1" | "paint" | "design1" => "design1",
                _ => "design2",
            };
            out.push((name.to_string(), grid?));
        } else {
            let path = cfg.resolve(item);
            manifest.add_input(&path)?;
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| item.to_string());
            out.push((name, read_grid(&path)?));
        }
    }
    Ok(out)
}

fn type1_tables(t: &Type1Table) -> Vec<Table> {
    let mut rows = Table::new(
        "type1",
        &["design", "method", "tests", "rejections", "failures", "rate", "ci_low", "ci_high", "mean_p"],
    );
    for r in &t.rows {
        rows.push(vec![
            r.design.clone(),
            r.method.name().into(),
            r.tests.to_string(),
            r.rejections.to_string(),
            r.failures.to_string(),
            num(Some(r.rate())),
            num(Some(r.ci_low)),
            num(Some(r.ci_high)),
            num(Some(r.mean_p)),
        ]);
    }
    let mut totals = Table::new("type1_totals", &["method", "tests", "rejections"]);
    let mut methods: Vec<TestMethod> = t.rows.iter().map(|r| r.method).collect();
    methods.sort();
    methods.dedup();
    for m in methods {
        let (tests, rej) = t.total(m);
        totals.push(vec![m.name().into(), tests.to_string(), rej.to_string()]);
    }
    vec![rows, totals]
}

fn power_table(t: &PowerTable) -> Table {
    let mut table =
        Table::new("power", &["design", "noise", "magnitude", "method", "tests", "rejections", "failures", "mean_p"]);
    for r in &t.rows {
        table.push(vec![
            r.design.clone(),
            r.kind.name().into(),
            num(Some(r.magnitude)),
            r.method.name().into(),
            r.tests.to_string(),
            r.rejections.to_string(),
            r.failures.to_string(),
            num(Some(r.mean_p)),
        ]);
    }
    table
}

fn cmd_simulate(a: SimulateArgs, raw: Vec<String>) -> CliResult<()> {
    let cfg = Config::read(&a.config)?;
    let mut m = RunManifest::new("simulate", raw);
    m.add_input(&a.config)?;

    let experiment = cfg.get("experiment").unwrap_or("type1").to_ascii_lowercase();
    let designs = load_designs(&cfg, &mut m)?;
    let seed = a.seed.or(config_value(&cfg, "seed")?).unwrap_or(1);
    let mut ec = ExperimentConfig::new(designs, seed);
    if let Some(v) = config_value(&cfg, "pool_size")? {
        ec.pool_size = v;
    }
    if let Some(v) = a.pairs.or(config_value(&cfg, "pairs")?) {
        ec.pairs = v;
    }
    if let Some(v) = a.replications.or(config_value(&cfg, "replications")?) {
        ec.replications = v;
    }
    if let Some(v) = config_value(&cfg, "ci_level")? {
        ec.ci_level = v;
    }
    if let Some(v) = config_value::<DepthKind>(&cfg, "depth")? {
        ec.depth = v;
    }
    if let Some(o) = cfg.get("origin") {
        let v = parse_f64_list(o, "origin")?;
        if v.len() != 2 {
            return Err(DataError::Config("`origin` needs two numbers".into()).into());
        }
        ec.origin = CartesianPoint::new(v[0], v[1]);
    }
    match a.alpha {
        Some(al) => {
            check_alpha(al)?;
            ec.alpha = al;
        }
        None => {
            if let Some(v) = config_value(&cfg, "alpha")? {
                ec.alpha = v;
            }
        }
    }
    match &a.method {
        Some(s) => ec.methods = parse_methods(s)?,
        None => {
            if let Some(s) = cfg.get("methods") {
                ec.methods = parse_methods(s).map_err(|e| match e {
                    CliError::Usage(msg) => CliError::Data(DataError::Config(msg)),
                    other => other,
                })?;
            }
        }
    }
    ec.validate()?;

    m.seed = Some(ec.seed);
    m.set("experiment", &experiment);
    m.set("designs", ec.designs.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(","));
    m.set("methods", ec.methods.iter().map(|x| x.name()).collect::<Vec<_>>().join(","));
    m.set("alpha", ec.alpha);
    m.set("depth", ec.depth.name());
    m.set("origin", format!("{},{}", ec.origin.x, ec.origin.y));

    let mut report;
    match experiment.as_str() {
        "type1" | "type_i" | "null" => {
            m.set("pool_size", ec.pool_size);
            m.set("pairs", ec.pairs);
            m.set("ci_level", ec.ci_level);
            let table = run_type1_experiment(&ec, &Rayon)?;
            report = Report::new(m);
            report.tables.extend(type1_tables(&table));
            if let Some(dir) = &a.plot {
                create_dir(dir)?;
                plot::save(&plot::type1_chart(&table), &dir.join("type1.svg"))?;
            }
        }
        "power" => {
            let kind: NoiseKind = cfg
                .get("noise")
                .ok_or_else(|| DataError::Config("power experiments need `noise`".into()))?
                .parse()
                .map_err(|e: &str| DataError::Config(e.to_string()))?;
            let mags = parse_f64_list(
                cfg.get("magnitudes").ok_or_else(|| DataError::Config("power experiments need `magnitudes`".into()))?,
                "magnitudes",
            )?;
            m.set("noise", kind.name());
            m.set("magnitudes", mags.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
            m.set("replications", ec.replications);
            let table = run_power_experiment(&ec, kind, &mags, &Rayon)?;
            report = Report::new(m);
            report.tables.push(power_table(&table));
            if let Some(dir) = &a.plot {
                create_dir(dir)?;
                for (name, _) in &ec.designs {
                    let file = dir.join(format!("{}_{name}.svg", kind.name()));
                    plot::save(&plot::power_chart(&table, name), &file)?;
                }
            }
        }
        other => {
            return Err(DataError::Config(format!("unknown experiment `{other}` (expected type1 or power)")).into());
        }
    }
    report.write_to(a.output.out.as_ref())?;
    Ok(())
}

fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| DataError::Io { path: dir.to_path_buf(), source: e }.into())
}

fn cmd_classify(a: ClassifyArgs, raw: Vec<String>) -> CliResult<()> {
    check_alpha(a.alpha)?;
    require_two_sample(a.method)?;
    let mut m = RunManifest::new("classify", raw);
    m.set("method", a.method);
    m.set("alpha", a.alpha);
    m.set("correction", a.correction.name());
    m.set("benchmark", &a.benchmark);
    let players = load_players(&a.shots, &a.shots_opts, &mut m, None)?;

    let Some(bench) = players.charts.iter().find(|c| c.player_id == a.benchmark) else {
        return Err(DataError::Other(format!("benchmark {} is not among the eligible players", a.benchmark)).into());
    };
    let others: Vec<PlayerShotChart> = players.charts.iter().filter(|c| c.player_id != a.benchmark).cloned().collect();
    let listing = group_by_benchmark(bench, &others, a.method, a.alpha, a.correction, &RunOptions::default(), &Rayon);

    let mut group = Table::new("group", &["benchmark", "member", "member_name", "p_made", "p_missed"]);
    for r in listing.members() {
        group.push(vec![r.benchmark.clone(), r.other.clone(), r.other_name.clone(), num(r.p_made), num(r.p_missed)]);
    }
    let mut pairs =
        Table::new("pairs", &["benchmark", "player", "player_name", "p_made", "p_missed", "in_group", "note"]);
    for r in &listing.results {
        pairs.push(vec![
            r.benchmark.clone(),
            r.other.clone(),
            r.other_name.clone(),
            num(r.p_made),
            num(r.p_missed),
            r.in_group.to_string(),
            r.untestable.clone().unwrap_or_default(),
        ]);
    }
    let untestable = listing.results.iter().filter(|r| r.untestable.is_some()).count();
    let mut report = Report::new(m);
    report.note(format!(
        "summary: benchmark={} alpha_adj={} compared={} members={} untestable={untestable}",
        listing.benchmark,
        listing.alpha_adj,
        listing.results.len(),
        group.rows.len()
    ));
    report.note("groups are benchmark-relative; membership is neither symmetric nor transitive");
    report.tables.push(group);
    report.tables.push(pairs);
    report.write_to(a.output.out.as_ref())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn input_selectors() {
        assert_eq!(parse_input("a.txt"), Input::Points("a.txt".into()));
        assert_eq!(parse_input("s.csv:made"), Input::Shots { path: "s.csv".into(), made: true, player: None });
        assert_eq!(
            parse_input("dir/s.csv:missed:203507"),
            Input::Shots { path: "dir/s.csv".into(), made: false, player: Some("203507".into()) }
        );
        assert_eq!(parse_input("s.csv:other"), Input::Points("s.csv:other".into()));
    }

    #[test]
    fn frame_mapping() {
        assert_eq!(in_frame(TestMethod::M6, Coords::Cartesian), TestMethod::M5);
        assert_eq!(in_frame(TestMethod::M3, Coords::Polar), TestMethod::M4);
        assert_eq!(in_frame(TestMethod::M1, Coords::Cartesian), TestMethod::M1);
        assert_eq!(in_frame(TestMethod::KsStar, Coords::Polar), TestMethod::KsStar);
    }

    #[test]
    fn usage_exit_codes() {
        assert_eq!(run(["shotdepth", "test", "a", "b", "--method", "M9"]), USAGE_ERROR);
        assert_eq!(run(["shotdepth", "frobnicate"]), USAGE_ERROR);
        assert_eq!(run(["shotdepth", "--help"]), 0);
        assert_eq!(run(["shotdepth", "test", "/nonexistent/a", "/nonexistent/b"]), DATA_ERROR);
        assert_eq!(run(["shotdepth", "test", "a", "b", "--alpha", "1.5"]), USAGE_ERROR);
    }
}
