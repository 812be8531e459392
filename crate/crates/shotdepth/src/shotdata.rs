//! Shot-chart CSV ingestion, validation and per-player made/missed
//! patterns.
//!
//! Coordinates are court units (0.1 ft) with the rim at the origin; valid
//! shots satisfy `x in [-250, 250]` and `y in [-50, 420]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use shotdepth_core::geometry::HALF_COURT;
use shotdepth_core::{CartesianPoint, PointPattern};

use crate::DataError;

#[derive(Debug, Clone, PartialEq)]
pub struct ShotRecord {
    pub player_id: String,
    pub player_name: String,
    pub x: f64,
    pub y: f64,
    pub made: bool,
    pub season: String,
}

/// A row that failed validation. `line` is the 1-based line in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ShotLoad {
    pub records: Vec<ShotRecord>,
    pub rejections: Vec<Rejection>,
    /// Data rows read (header excluded).
    pub rows_read: usize,
}

impl ShotLoad {
    /// Line-oriented rejection report, one `row N: reason` per line.
    pub fn rejection_report(&self) -> String {
        self.rejections.iter().map(|r| format!("row {}: {}\n", r.line, r.reason)).collect()
    }
}

/// Header names of the columns the loader needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub player_id: String,
    pub player_name: String,
    pub x: String,
    pub y: String,
    pub made: String,
    /// Optional; missing means an empty season.
    pub season: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            player_id: "PLAYER_ID".into(),
            player_name: "PLAYER_NAME".into(),
            x: "LOC_X".into(),
            y: "LOC_Y".into(),
            made: "SHOT_MADE_FLAG".into(),
            season: "SEASON".into(),
        }
    }
}

impl ColumnMap {
    /// Applies `field=HEADER` overrides separated by commas, e.g.
    /// `x=X_COORD,y=Y_COORD`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self, DataError> {
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| DataError::Config(format!("column override `{part}` is not field=HEADER")))?;
            let v = v.trim().to_string();
            match k.trim().to_ascii_lowercase().as_str() {
                "player_id" | "id" => self.player_id = v,
                "player_name" | "name" => self.player_name = v,
                "x" | "loc_x" => self.x = v,
                "y" | "loc_y" => self.y = v,
                "made" | "flag" | "shot_made_flag" => self.made = v,
                "season" => self.season = v,
                other => return Err(DataError::Config(format!("unknown column field `{other}`"))),
            }
        }
        Ok(self)
    }
}

fn validate(row: &csv::StringRecord, idx: &[usize; 5], season_idx: Option<usize>) -> Result<ShotRecord, String> {
    let field = |i: usize, name: &str| row.get(i).map(str::trim).ok_or_else(|| format!("missing {name} field"));
    let player_id = field(idx[0], "player id")?;
    if player_id.is_empty() {
        return Err("empty player id".into());
    }
    let player_name = field(idx[1], "player name")?;
    let num = |s: &str, name: &str| -> Result<f64, String> {
        s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| format!("{name} is not a number"))
    };
    let x = num(field(idx[2], "x")?, "x")?;
    let y = num(field(idx[3], "y")?, "y")?;
    if !(HALF_COURT.x_min..=HALF_COURT.x_max).contains(&x) {
        return Err("x out of range".into());
    }
    if !(HALF_COURT.y_min..=HALF_COURT.y_max).contains(&y) {
        return Err("y out of range".into());
    }
    let made = match field(idx[4], "made flag")? {
        "1" => true,
        "0" => false,
        other => return Err(format!("made flag `{other}` is not 0 or 1")),
    };
    let season = season_idx.and_then(|i| row.get(i)).unwrap_or("").trim().to_string();
    Ok(ShotRecord { player_id: player_id.into(), player_name: player_name.into(), x, y, made, season })
}

/// Parses shot rows from CSV text. Malformed rows go to the rejection list.
pub fn parse_shot_csv(text: &[u8], columns: &ColumnMap, path: &Path) -> Result<ShotLoad, DataError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(text);
    let headers = rdr.headers().map_err(|e| DataError::parse(path, 1, format!("unreadable header: {e}")))?.clone();
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let mut idx = [0usize; 5];
    for (slot, name) in
        idx.iter_mut().zip([&columns.player_id, &columns.player_name, &columns.x, &columns.y, &columns.made])
    {
        *slot = find(name).ok_or_else(|| DataError::parse(path, 1, format!("missing required column `{name}`")))?;
    }
    let season_idx = find(&columns.season);
    let mut load = ShotLoad::default();
    let mut row = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut row) {
            Ok(false) => break,
            Ok(true) => {
                load.rows_read += 1;
                let line = row.position().map(|p| p.line()).unwrap_or(0);
                match validate(&row, &idx, season_idx) {
                    Ok(r) => load.records.push(r),
                    Err(reason) => load.rejections.push(Rejection { line, reason }),
                }
            }
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                match e.kind() {
                    csv::ErrorKind::Utf8 { .. } => {
                        load.rows_read += 1;
                        load.rejections.push(Rejection { line, reason: "invalid UTF-8".into() });
                    }
                    _ => return Err(DataError::parse(path, line as usize, e.to_string())),
                }
            }
        }
    }
    Ok(load)
}

pub fn load_shot_csv(path: &Path, columns: &ColumnMap) -> Result<ShotLoad, DataError> {
    let bytes = fs::read(path).map_err(|e| DataError::Io { path: path.to_path_buf(), source: e })?;
    parse_shot_csv(&bytes, columns, path)
}

/// One player's made and missed shot locations.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerShotChart {
    pub player_id: String,
    pub player_name: String,
    pub made: PointPattern,
    pub missed: PointPattern,
}

impl PlayerShotChart {
    pub fn total_attempts(&self) -> usize {
        self.made.len() + self.missed.len()
    }
}

fn sorted_pattern(mut pts: Vec<CartesianPoint>) -> PointPattern {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    PointPattern::new(pts, HALF_COURT).expect("validated records are finite")
}

/// Orders ids numerically when both parse as integers, otherwise as text.
pub fn compare_ids(a: &str, b: &str) -> std::cmp::Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        (Ok(_), Err(_)) => std::cmp::Ordering::Less,
        (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Groups records per player. Points inside each pattern are sorted, so
/// the result does not depend on record order; charts come out ordered by
/// player id. A player listed under several names keeps the smallest.
pub fn build_charts(records: &[ShotRecord]) -> Vec<PlayerShotChart> {
    let mut by_player: BTreeMap<&str, (String, Vec<CartesianPoint>, Vec<CartesianPoint>)> = BTreeMap::new();
    for r in records {
        let e = by_player.entry(&r.player_id).or_insert_with(|| (r.player_name.clone(), Vec::new(), Vec::new()));
        if r.player_name < e.0 {
            e.0 = r.player_name.clone();
        }
        let p = CartesianPoint::new(r.x, r.y);
        if r.made {
            e.1.push(p);
        } else {
            e.2.push(p);
        }
    }
    let mut charts: Vec<PlayerShotChart> = by_player
        .into_iter()
        .map(|(id, (name, made, missed))| PlayerShotChart {
            player_id: id.to_string(),
            player_name: name,
            made: sorted_pattern(made),
            missed: sorted_pattern(missed),
        })
        .collect();
    charts.sort_by(|a, b| compare_ids(&a.player_id, &b.player_id));
    charts
}

/// What the attempt threshold counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AttemptBasis {
    /// Field goal attempts, made plus missed.
    #[default]
    Attempts,
    /// Made field goals only.
    Made,
}

impl std::str::FromStr for AttemptBasis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "attempts" | "fga" => Ok(AttemptBasis::Attempts),
            "made" | "fgm" => Ok(AttemptBasis::Made),
            _ => Err(format!("attempt basis must be `attempts` or `made`, got `{s}`")),
        }
    }
}

/// Keeps charts with strictly more than `min_attempts` shots (on `basis`)
/// whose player is not excluded.
pub fn filter_players(
    charts: &[PlayerShotChart],
    min_attempts: usize,
    exclusions: &BTreeSet<String>,
    basis: AttemptBasis,
) -> Vec<PlayerShotChart> {
    charts
        .iter()
        .filter(|c| {
            let n = match basis {
                AttemptBasis::Attempts => c.total_attempts(),
                AttemptBasis::Made => c.made.len(),
            };
            n > min_attempts && !exclusions.contains(&c.player_id)
        })
        .cloned()
        .collect()
}

/// One player id per line; `#` starts a comment.
pub fn parse_exclusions(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().next().unwrap_or(l).trim_matches(',').to_string())
        .collect()
}

pub fn read_exclusions(path: &Path) -> Result<BTreeSet<String>, DataError> {
    let text = fs::read_to_string(path).map_err(|e| DataError::Io { path: path.to_path_buf(), source: e })?;
    Ok(parse_exclusions(&text))
}
