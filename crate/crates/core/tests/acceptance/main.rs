//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//!     cargo test -p grasspack-core --test acceptance

mod properties;
mod tables;

use std::time::Instant;

use grasspack::bounds;
use grasspack::harness::{self, CellStatus, ExperimentSpec, MuSource, ReferenceTable, ResultRow, Space, Unit};
use grasspack::{Field, Metric};

const SEED: u64 = 1;

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        summary: summary.into(),
    }
}

fn show(row: &ResultRow, target: f64) {
    println!(
        "    d={} K={} N={}  best={:.6}  target={:.4}  diff={:+.2e}  avg={:.6}  avg_iter={:.0}  failed={}/{}",
        row.d,
        row.k,
        row.n,
        row.best_diameter.unwrap_or(f64::NAN),
        target,
        row.best_diameter.unwrap_or(f64::NAN) - target,
        row.avg_diameter.unwrap_or(f64::NAN),
        row.avg_iterations.unwrap_or(f64::NAN),
        row.trials_failed,
        row.trials,
    );
}

fn run(spec: &ExperimentSpec) -> Result<Vec<ResultRow>, String> {
    harness::run_experiment(spec).map_err(|e| e.to_string())
}

/// Real lines in R^3: (N, reference, best of 10).
const LINES_R3: [(usize, f64, f64); 9] = [
    (4, 70.529, 70.528),
    (5, 63.435, 63.434),
    (6, 63.435, 63.435),
    (7, 54.736, 54.735),
    (8, 49.640, 49.639),
    (9, 47.982, 47.981),
    (10, 46.675, 46.674),
    (11, 44.403, 44.402),
    (12, 41.882, 41.881),
];

fn real_projective() -> Result<Outcome, String> {
    let mut table = ReferenceTable::new();
    for (n, reference, _) in LINES_R3 {
        table.insert(3, 1, n, reference, Unit::Degrees).map_err(|e| e.to_string())?;
    }
    let mut spec = ExperimentSpec::new(Space::Projective, Field::Real, Metric::Chordal, MuSource::Reference(table))
        .cells(3, 1, 4..=12);
    spec.seed = SEED;
    spec.max_iterations = 5000;
    let rows = run(&spec)?;
    let mut hits = 0;
    for (row, (_, _, best)) in rows.iter().zip(LINES_R3) {
        show(row, best);
        if row.best_diameter.is_some_and(|b| (b - best).abs() <= 0.05) {
            hits += 1;
        }
    }
    let capped = rows.iter().all(|r| r.avg_iterations.is_some_and(|a| a <= 5000.0));
    Ok(outcome(
        hits >= 7 && capped,
        format!("{hits}/9 cells within 0.05 deg (need 7), iteration cap 5000"),
    ))
}

fn sphere() -> Result<Outcome, String> {
    let cells = [(4, 109.471), (5, 90.000), (6, 90.000), (12, 63.435)];
    let mut table = ReferenceTable::new();
    for (n, v) in cells {
        table.insert(3, 1, n, v, Unit::Degrees).map_err(|e| e.to_string())?;
    }
    let mut spec = ExperimentSpec::new(Space::Sphere, Field::Real, Metric::Sphere, MuSource::Reference(table))
        .cells(3, 1, cells.iter().map(|c| c.0));
    spec.seed = SEED;
    let rows = run(&spec)?;
    let mut hits = 0;
    for (row, (_, v)) in rows.iter().zip(cells) {
        show(row, v);
        if row.best_diameter.is_some_and(|b| (b - v).abs() <= 0.05) {
            hits += 1;
        }
    }
    Ok(outcome(hits == cells.len(), format!("{hits}/4 cells within 0.05 deg")))
}

fn rankin_cells(metric: Metric, n: &[usize], targets: &[f64], tol: f64, sweep: Option<&str>) -> Result<Outcome, String> {
    let mut spec = ExperimentSpec::new(Space::Grassmann, Field::Complex, metric, MuSource::Rankin)
        .cells(4, 2, n.iter().copied());
    spec.seed = SEED;
    spec.sweep = sweep.map(|s| s.parse().expect("sweep"));
    let rows = run(&spec)?;
    let mut hits = 0;
    for (row, &t) in rows.iter().zip(targets) {
        show(row, t);
        if row.best_diameter.is_some_and(|b| (b - t).abs() <= tol) {
            hits += 1;
        }
    }
    Ok(outcome(
        hits == targets.len(),
        format!("{hits}/{} cells within {tol:e} of the tabulated bound", targets.len()),
    ))
}

fn chordal() -> Result<Outcome, String> {
    rankin_cells(
        Metric::Chordal,
        &[3, 4, 5, 6, 7, 8, 9, 10],
        &[1.5000, 1.3333, 1.2500, 1.2000, 1.1667, 1.1429, 1.1250, 1.1111],
        1e-3,
        None,
    )
}

fn spectral() -> Result<Outcome, String> {
    rankin_cells(
        Metric::Spectral,
        &[3, 4, 5, 6],
        &[0.7500, 0.6667, 0.6250, 0.6000],
        5e-3,
        Some("1.0:2.0:8"),
    )
}

fn fubini_study() -> Result<Outcome, String> {
    // Target: some principal angle of every pair at 90 degrees.
    let mut spec = ExperimentSpec::new(Space::Grassmann, Field::Complex, Metric::FubiniStudy, MuSource::Explicit(0.0))
        .cells(4, 2, 3..=6);
    spec.seed = SEED;
    spec.max_iterations = 500;
    let rows = run(&spec)?;
    let mut hits = 0;
    for row in &rows {
        show(row, 1.0);
        if row.best_diameter.is_some_and(|b| b >= 0.999) && row.avg_iterations.is_some_and(|a| a <= 500.0) {
            hits += 1;
        }
    }
    Ok(outcome(hits == 4, format!("{hits}/4 cells reach scaled FS >= 0.999 within 500 iterations")))
}

fn round_to(x: f64, decimals: i32) -> f64 {
    let s = 10f64.powi(decimals);
    (x * s).round() / s
}

fn bound_tables() -> Result<Outcome, String> {
    let mut checked = 0;
    let mut bad = Vec::new();
    for &(d, n, v) in tables::LINES_DEGREES {
        let b = bounds::rankin_projective(d, n, Field::Complex).map_err(|e| e.to_string())?;
        let deg = b.angle_degrees.expect("angle");
        checked += 1;
        if round_to(deg, 2) != v {
            bad.push(format!("lines ({d},{n}): {deg:.4} vs {v}"));
        }
    }
    for &(k, d, n, v) in tables::CHORDAL {
        let b = bounds::rankin_chordal(d, k, n, Field::Complex).map_err(|e| e.to_string())?;
        checked += 1;
        if round_to(b.bound_value, 4) != v {
            bad.push(format!("chordal ({k},{d},{n}): {:.6} vs {v}", b.bound_value));
        }
    }
    for &(d, k, n, v) in tables::SPECTRAL {
        let b = bounds::rankin_spectral(d, k, n, Field::Complex).map_err(|e| e.to_string())?;
        checked += 1;
        if round_to(b.bound_value, 4) != v {
            bad.push(format!("spectral ({d},{k},{n}): {:.6} vs {v}", b.bound_value));
        }
    }
    for b in &bad {
        println!("    mismatch {b}");
    }
    Ok(outcome(bad.is_empty(), format!("{} of {checked} tabulated bounds reproduced", checked - bad.len())))
}

fn pathology() -> Result<Outcome, String> {
    let mut table = ReferenceTable::new();
    table.insert(5, 1, 19, 60.000, Unit::Degrees).map_err(|e| e.to_string())?;
    let mut spec = ExperimentSpec::new(Space::Projective, Field::Real, Metric::Chordal, MuSource::Reference(table))
        .cells(5, 1, [19]);
    spec.seed = SEED;
    let rows = run(&spec)?;
    let row = &rows[0];
    show(row, 60.0);
    let gap = row.error_vs_reference;
    Ok(outcome(
        row.status == CellStatus::Ok && gap.is_some_and(|g| g > 0.5),
        format!("best-of-10 gap {:.3} deg (need > 0.5)", gap.unwrap_or(f64::NAN)),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome, String>); 8] = [
        ("real projective lines, d=3, N=4..12", real_projective),
        ("sphere, d=3, N in {4,5,6,12}", sphere),
        ("complex chordal, d=4, K=2, N=3..10", chordal),
        ("complex spectral, d=4, K=2, N=3..6", spectral),
        ("complex Fubini-Study, d=4, K=2, N=3..6", fubini_study),
        ("Rankin bound tables", bound_tables),
        ("property suite", properties::run),
        ("(5,1,19) real projective pathology", pathology),
    ];
    let mut failed = 0;
    for (idx, (name, f)) in criteria.iter().enumerate() {
        println!("criterion {}: {name}", idx + 1);
        let start = Instant::now();
        let result = f().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        let secs = start.elapsed().as_secs_f64();
        let tag = if result.pass { "PASS" } else { "FAIL" };
        if !result.pass {
            failed += 1;
        }
        println!("{tag} [{}] {name}: {} ({secs:.1}s)", idx + 1, result.summary);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
