//! Regenerates the bundled grids and fixtures under `data/`.
//!
//! ```text
//! cargo run -p shotdepth --example gen_data -- [DIR]
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use shotdepth::io::{format_grid, format_points};
use shotdepth_core::ppsim::{designs, sample_nhpp};
use shotdepth_core::{seed, IntensityGrid, PointPattern};

const SEED: u64 = 2018;

fn draw(grid: &IntensityGrid, stream: &[u64]) -> PointPattern {
    sample_nhpp(grid, &mut seed::rng_for(SEED, stream)).expect("non-empty design")
}

/// Feet to court units (0.1 ft), rounded.
fn court(v: f64) -> i64 {
    (v * 10.0).round() as i64
}

fn main() {
    let root = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("data"));
    let fixtures = root.join("fixtures");
    fs::create_dir_all(&fixtures).unwrap();

    let d1 = designs::design1().unwrap();
    let d2 = designs::design2().unwrap();
    fs::write(root.join("design1.grid"), format_grid(&d1, "design 1: rim and paint, feet, expected 400 shots"))
        .unwrap();
    fs::write(
        root.join("design2.grid"),
        format_grid(&d2, "design 2: rim and three-point ridge, feet, expected 400 shots"),
    )
    .unwrap();

    fs::write(fixtures.join("design1_a.txt"), format_points(&draw(&d1, &[10]))).unwrap();
    fs::write(fixtures.join("design1_b.txt"), format_points(&draw(&d1, &[11]))).unwrap();
    fs::write(fixtures.join("design2_a.txt"), format_points(&draw(&d2, &[12]))).unwrap();

    // Player 101: made and missed from design 1.
    // Player 102: made from design 2, missed from design 1.
    // Player 103: made and missed from design 2.
    let players = [
        ("101", "Synthetic Same One", &d1, &d1),
        ("102", "Synthetic Mixed", &d2, &d1),
        ("103", "Synthetic Same Two", &d2, &d2),
    ];
    let mut csv = String::from("PLAYER_ID,PLAYER_NAME,LOC_X,LOC_Y,SHOT_MADE_FLAG,SEASON\n");
    let mut summary = String::from("# player_id n_made n_missed\n");
    for (k, (id, name, made, missed)) in players.iter().enumerate() {
        let k = k as u64;
        let made = draw(made, &[1, k]);
        let missed = draw(missed, &[2, k]);
        // interleave so rows are not grouped by outcome
        let n = made.len().max(missed.len());
        for i in 0..n {
            for (pat, flag) in [(&made, 1), (&missed, 0)] {
                if let Some(p) = pat.points().get(i) {
                    let _ = writeln!(csv, "{id},{name},{},{},{flag},2017-18", court(p.x), court(p.y));
                }
            }
        }
        let _ = writeln!(summary, "{id} {} {}", made.len(), missed.len());
    }
    // two invalid rows for the rejection report
    csv.push_str("101,Synthetic Same One,300,10,1,2017-18\n");
    csv.push_str("102,Synthetic Mixed,0,15,2,2017-18\n");
    fs::write(fixtures.join("shots_3players.csv"), csv).unwrap();
    fs::write(fixtures.join("shots_3players.counts"), summary).unwrap();
}
