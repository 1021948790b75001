use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use grasspack::harness::{self, CellStatus, ExperimentSpec, ExportFormat, MuSource, ReferenceTable, Space, Sweep};
use grasspack::io::fmt17;
use grasspack::{bounds, io, Field, Metric};

/// Packings of lines, subspaces and sphere points by alternating projection.
#[derive(Parser)]
#[command(name = "grasspack", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Rankin bound for each cell.
    Bound(Problem),
    /// Run multi-trial solves and write a results table.
    Solve(SolveArgs),
    /// Report diameters and the Gram spectrum of a configuration file.
    Eval {
        config: PathBuf,
    },
    /// Convert a results table to CSV or per-series plot data.
    Export {
        #[arg(long, default_value = "csv")]
        format: ExportFormat,
        #[arg(long, default_value = "results.csv")]
        input: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct Problem {
    #[arg(long)]
    space: Space,
    #[arg(long, default_value = "R")]
    field: Field,
    /// Defaults to sphere for the sphere and chordal otherwise.
    #[arg(long)]
    metric: Option<Metric>,
    /// Ambient dimension: a value, a range such as 3..6, or a list such as 3,5.
    #[arg(short = 'd', value_parser = parse_range)]
    d: Counts,
    #[arg(short = 'K', value_parser = parse_range, default_value = "1")]
    k: Counts,
    #[arg(short = 'N', value_parser = parse_range)]
    n: Counts,
}

#[derive(Clone, Debug)]
struct Counts(Vec<usize>);

impl Problem {
    fn metric(&self) -> Metric {
        self.metric.unwrap_or(match self.space {
            Space::Sphere => Metric::Sphere,
            _ => Metric::Chordal,
        })
    }

    fn cells(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for &d in &self.d.0 {
            for &k in &self.k.0 {
                for &n in &self.n.0 {
                    out.push((d, k, n));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("target").required(true))]
struct SolveArgs {
    #[command(flatten)]
    problem: Problem,
    /// Reference CSV with columns d,K,N,value,unit.
    #[arg(long, group = "target")]
    mu_from_ref: Option<PathBuf>,
    /// Target the Rankin bound of each cell.
    #[arg(long, group = "target")]
    mu_from_bound: bool,
    /// Block cap used for every cell.
    #[arg(long, group = "target", allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Also try multiples of the base cap, as min:max:steps.
    #[arg(long)]
    sweep: Option<Sweep>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = grasspack::solver::DEFAULT_MAX_ITERATIONS)]
    max_iter: usize,
    #[arg(long, default_value_t = grasspack::solver::DEFAULT_STOP_SLACK)]
    stop_slack: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Similarity threshold for the random start.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, default_value_t = grasspack::init::DEFAULT_MAX_DRAWS)]
    max_draws: usize,
    /// Worker threads; defaults to GRASSPACK_WORKERS, then all cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Results CSV; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave out the generation-time comment so reruns are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
    /// Write the best configuration of each cell as JSON into this directory.
    #[arg(long)]
    save_configs: Option<PathBuf>,
}

fn parse_range(s: &str) -> std::result::Result<Counts, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("'{t}' is not a count"));
    let mut out = Vec::new();
    for part in s.split(',') {
        let bounds = part
            .split_once("..=")
            .or_else(|| part.split_once(".."))
            .or_else(|| part.split_once('-'));
        match bounds {
            Some((lo, hi)) => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if lo > hi {
                    return Err(format!("empty range '{part}'"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(num(part)?),
        }
    }
    Ok(Counts(out))
}

fn bound(p: &Problem) -> Result<()> {
    let metric = p.metric();
    if p.space == Space::Sphere {
        bail!("no Rankin bound is implemented for sphere packings");
    }
    let unit = p.space.unit(metric);
    println!("space,d,K,N,field,metric,unit,bound,attainable,attainability_limit,equidistance_implied");
    for (d, k, n) in p.cells() {
        if p.space == Space::Projective && k != 1 {
            bail!("projective packings have K = 1");
        }
        let report = match p.space {
            Space::Projective => bounds::rankin_projective(d, n, p.field)?,
            _ => match bounds::rankin_for(metric, d, k, n, p.field) {
                Some(r) => r,
                None => bail!("no Rankin bound for the {metric} metric"),
            },
        };
        let value = p
            .space
            .bound_value(metric, p.field, d, k, n)
            .context("bound not available in the reporting unit")?;
        println!(
            "{},{d},{k},{n},{},{},{unit},{},{},{},{}",
            p.space,
            p.field,
            metric,
            fmt17(value),
            report.attainable,
            report.attainability_limit,
            report.equidistance_implied
        );
    }
    Ok(())
}

fn build_spec(a: &SolveArgs) -> Result<ExperimentSpec> {
    let p = &a.problem;
    let mu_source = if let Some(path) = &a.mu_from_ref {
        MuSource::Reference(ReferenceTable::from_path(path)?)
    } else if a.mu_from_bound {
        MuSource::Rankin
    } else {
        MuSource::Explicit(a.mu.context("one of --mu-from-ref, --mu-from-bound, --mu is required")?)
    };
    let mut spec = ExperimentSpec::new(p.space, p.field, p.metric(), mu_source);
    spec.d = p.d.0.clone();
    spec.k = p.k.0.clone();
    spec.n = p.n.0.clone();
    spec.trials = a.trials;
    spec.sweep = a.sweep;
    spec.max_iterations = a.max_iter;
    spec.stop_slack = a.stop_slack;
    spec.tau = a.tau;
    spec.max_draws = a.max_draws;
    spec.seed = a.seed;
    spec.workers = match a.workers {
        Some(w) => Some(w),
        None => harness::workers_from_env()?,
    };
    spec.validate()?;
    Ok(spec)
}

fn describe(a: &SolveArgs, spec: &ExperimentSpec) -> String {
    let mu = match (&a.mu_from_ref, a.mu) {
        (Some(path), _) => format!("reference {}", path.display()),
        (None, Some(mu)) => format!("explicit {}", fmt17(mu)),
        (None, None) => "rankin".to_string(),
    };
    let sweep = spec
        .sweep
        .map(|s| format!("{}:{}:{}", s.min_factor, s.max_factor, s.steps))
        .unwrap_or_else(|| "none".into());
    let tau = spec.tau.map(fmt17).unwrap_or_else(|| "default".into());
    format!(
        "seed={} trials={} max_iter={} stop_slack={} tau={tau} mu={mu} sweep={sweep}\n\
         avg_iterations averages, over successful trials, the iteration at which each trial stopped",
        spec.seed, spec.trials, spec.max_iterations, spec.stop_slack
    )
}

fn solve(a: &SolveArgs) -> Result<ExitCode> {
    let spec = build_spec(a)?;
    let outcomes = harness::run_experiment_detailed(&spec)?;
    if let Some(dir) = &a.save_configs {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for o in &outcomes {
            if let Some(best) = &o.best {
                let r = &o.row;
                let name = format!(
                    "config_{}_{}_{}_d{}_K{}_N{}.json",
                    r.space,
                    r.field,
                    r.metric.name().replace('-', "_"),
                    r.d,
                    r.k,
                    r.n
                );
                io::write_config(&dir.join(name), &best.report.final_config)?;
            }
        }
    }
    let rows: Vec<_> = outcomes.into_iter().map(|o| o.row).collect();
    let mut comment = String::new();
    if !a.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        comment.push_str(&format!("generated at unix time {secs}\n"));
    }
    comment.push_str(&describe(a, &spec));
    match &a.out {
        Some(path) => harness::write_csv_file(path, &rows, Some(&comment))?,
        None => {
            let stdout = std::io::stdout();
            harness::write_csv(stdout.lock(), &rows, Some(&comment))?;
        }
    }
    for r in &rows {
        match &r.status {
            CellStatus::Ok => {}
            other => log::warn!("cell d={} K={} N={}: {other}", r.d, r.k, r.n),
        }
    }
    let failed = rows.iter().any(|r| matches!(r.status, CellStatus::Failed(_)));
    Ok(if failed { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn eval(path: &Path) -> Result<()> {
    let report = harness::evaluate_file(path)?;
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    Ok(())
}

fn export(format: ExportFormat, input: &Path, out_dir: &Path) -> Result<()> {
    let rows = harness::read_csv_file(input).with_context(|| format!("reading {}", input.display()))?;
    for path in harness::export(&rows, format, out_dir)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Bound(p) => bound(&p).map(|_| ExitCode::SUCCESS),
        Command::Solve(a) => solve(&a),
        Command::Eval { config } => eval(&config).map(|_| ExitCode::SUCCESS),
        Command::Export { format, input, out_dir } => export(format, &input, &out_dir).map(|_| ExitCode::SUCCESS),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
