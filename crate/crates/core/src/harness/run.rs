use rayon::prelude::*;

use super::results::{compare_reference, CellStatus, ResultRow};
use super::spec::{ExperimentSpec, MuSource};
use crate::error::{Error, Result};
use crate::geometry;
use crate::init::{self, InitParams};
use crate::solver::{self, SolveParams, SolveReport};

pub const WORKERS_ENV: &str = "GRASSPACK_WORKERS";

/// Worker limit from `GRASSPACK_WORKERS`, if set.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(Some(w)),
            _ => Err(Error::invalid(format!("{WORKERS_ENV}='{s}' is not a positive integer"))),
        },
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Error::invalid(format!("{WORKERS_ENV}: {e}"))),
    }
}

/// Best run of one trial over the μ grid.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub value: f64,
    pub mu: f64,
    pub report: SolveReport,
}

/// Aggregated row plus the best solve behind it.
#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub row: ResultRow,
    pub best: Option<TrialOutcome>,
}

/// One seeded trial: a random start, then a solve for each μ in `grid`.
pub fn run_trial(
    spec: &ExperimentSpec,
    (d, k, n): (usize, usize, usize),
    grid: &[f64],
    trial: usize,
) -> Result<TrialOutcome> {
    let mut rng = init::trial_rng(spec.seed, trial as u64);
    let mut ip = InitParams::new(spec.tau_for(k), spec.seed);
    ip.max_draws = spec.max_draws;
    ip.test = spec.space.similarity_test();
    let start = init::initial_configuration_with(d, k, n, spec.field, &ip, &mut rng)?;
    let g0 = geometry::gram(&start);

    let mut best: Option<TrialOutcome> = None;
    let mut last_err = None;
    for &mu in grid {
        let mut params = SolveParams::new(spec.metric, mu, d, k, n);
        params.max_iterations = spec.max_iterations;
        params.stop_slack = spec.stop_slack;
        match solver::alternate(&g0, &params) {
            Ok(report) => {
                let value = spec.space.reported_value(spec.metric, &report);
                if best.as_ref().is_none_or(|b| value > b.value) {
                    best = Some(TrialOutcome { value, mu, report });
                }
            }
            Err(e) => {
                log::debug!("({d}, {k}, {n}) trial {trial} mu {mu}: {e}");
                last_err = Some(e);
            }
        }
    }
    best.ok_or_else(|| last_err.unwrap_or_else(|| Error::invalid("empty mu grid")))
}

fn aggregate(
    spec: &ExperimentSpec,
    (d, k, n): (usize, usize, usize),
    outcomes: Vec<Result<TrialOutcome>>,
) -> CellOutcome {
    let trials = outcomes.len();
    let mut ok = Vec::new();
    let mut last_err = None;
    for o in outcomes {
        match o {
            Ok(t) => ok.push(t),
            Err(e) => last_err = Some(e.to_string()),
        }
    }
    let count = ok.len() as f64;
    let avg = |f: &dyn Fn(&TrialOutcome) -> f64| (!ok.is_empty()).then(|| ok.iter().map(f).sum::<f64>() / count);
    let avg_diameter = avg(&|t| t.value);
    let avg_iterations = avg(&|t| t.report.iterations_used as f64);
    let best = ok.into_iter().reduce(|a, b| if b.value > a.value { b } else { a });
    let status = match (&best, last_err) {
        (Some(_), _) => CellStatus::Ok,
        (None, e) => CellStatus::Failed(e.unwrap_or_default()),
    };
    let trials_failed = trials - if best.is_some() { count as usize } else { 0 };
    CellOutcome {
        row: ResultRow {
            space: spec.space,
            d,
            k,
            n,
            field: spec.field,
            metric: spec.metric,
            unit: spec.unit(),
            mu_target: best.as_ref().map(|b| b.mu),
            best_diameter: best.as_ref().map(|b| b.value),
            avg_diameter,
            reference: None,
            error_vs_reference: None,
            avg_iterations,
            trials,
            trials_failed,
            status,
        },
        best,
    }
}

fn skipped(spec: &ExperimentSpec, (d, k, n): (usize, usize, usize), why: String) -> CellOutcome {
    CellOutcome {
        row: ResultRow {
            space: spec.space,
            d,
            k,
            n,
            field: spec.field,
            metric: spec.metric,
            unit: spec.unit(),
            mu_target: None,
            best_diameter: None,
            avg_diameter: None,
            reference: None,
            error_vs_reference: None,
            avg_iterations: None,
            trials: spec.trials,
            trials_failed: spec.trials,
            status: CellStatus::Skipped(why),
        },
        best: None,
    }
}

/// Runs every cell of `spec` and keeps each cell's best solve. Rows come back
/// ordered by (d, K, N) whatever the completion order.
pub fn run_experiment_detailed(spec: &ExperimentSpec) -> Result<Vec<CellOutcome>> {
    spec.validate()?;
    let keys = spec.cell_keys();
    if keys.is_empty() {
        return Err(Error::invalid("no cells with 1 <= K < d"));
    }
    let grids: Vec<std::result::Result<Vec<f64>, String>> = keys
        .iter()
        .map(|&(d, k, n)| spec.mu_grid(d, k, n).map_err(|e| e.to_string()))
        .collect();
    for (key, grid) in keys.iter().zip(&grids) {
        if let Err(why) = grid {
            log::warn!("skipping cell {key:?}: {why}");
        }
    }
    let jobs: Vec<(usize, usize)> = grids
        .iter()
        .enumerate()
        .filter(|(_, g)| g.is_ok())
        .flat_map(|(c, _)| (0..spec.trials).map(move |t| (c, t)))
        .collect();

    let workers = match spec.workers {
        Some(w) => Some(w),
        None => workers_from_env()?,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::NumericalFailure(format!("thread pool: {e}")))?;
    let results: Vec<Result<TrialOutcome>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(c, t)| {
                let grid = grids[c].as_ref().expect("filtered");
                run_trial(spec, keys[c], grid, t)
            })
            .collect()
    });

    let mut per_cell: Vec<Vec<Result<TrialOutcome>>> = (0..keys.len()).map(|_| Vec::new()).collect();
    for (&(c, _), r) in jobs.iter().zip(results) {
        per_cell[c].push(r);
    }
    let mut cells = Vec::with_capacity(keys.len());
    for ((key, grid), outcomes) in keys.iter().zip(grids).zip(per_cell) {
        let cell = match grid {
            Ok(_) => aggregate(spec, *key, outcomes),
            Err(why) => skipped(spec, *key, why),
        };
        log::info!("cell {key:?}: {} best {:?}", cell.row.status, cell.row.best_diameter);
        cells.push(cell);
    }
    if let MuSource::Reference(table) = &spec.mu_source {
        let rows: Vec<ResultRow> = cells.iter().map(|c| c.row.clone()).collect();
        for (cell, row) in cells.iter_mut().zip(compare_reference(&rows, table)?) {
            cell.row = row;
        }
    }
    Ok(cells)
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    Ok(run_experiment_detailed(spec)?.into_iter().map(|c| c.row).collect())
}
