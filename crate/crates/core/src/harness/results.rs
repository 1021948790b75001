use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::reference::{ReferenceTable, Unit};
use super::spec::Space;
use crate::error::{Error, Result};
use crate::geometry::{Field, Metric};
use crate::io::fmt17;

/// Outcome of one (d, K, N) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellStatus {
    /// At least one trial succeeded.
    Ok,
    /// Every trial failed; carries the last error.
    Failed(String),
    /// The cell was not run, e.g. for want of a reference value.
    Skipped(String),
}

impl CellStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, CellStatus::Ok)
    }
}

impl fmt::Display for CellStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellStatus::Ok => f.write_str("ok"),
            CellStatus::Failed(m) => write!(f, "failed: {m}"),
            CellStatus::Skipped(m) => write!(f, "skipped: {m}"),
        }
    }
}

impl FromStr for CellStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "ok" {
            Ok(CellStatus::Ok)
        } else if let Some(m) = s.strip_prefix("failed: ") {
            Ok(CellStatus::Failed(m.to_string()))
        } else if let Some(m) = s.strip_prefix("skipped: ") {
            Ok(CellStatus::Skipped(m.to_string()))
        } else {
            Err(Error::invalid(format!("unknown status '{s}'")))
        }
    }
}

/// One aggregated line of an experiment table. Values are in `unit`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub space: Space,
    pub d: usize,
    pub k: usize,
    pub n: usize,
    pub field: Field,
    pub metric: Metric,
    pub unit: Unit,
    /// μ of the run that produced `best_diameter`.
    pub mu_target: Option<f64>,
    pub best_diameter: Option<f64>,
    /// Mean over successful trials of each trial's best value.
    pub avg_diameter: Option<f64>,
    pub reference: Option<f64>,
    /// `reference − best_diameter`.
    pub error_vs_reference: Option<f64>,
    /// Mean over successful trials of the iteration at which the trial stopped.
    pub avg_iterations: Option<f64>,
    pub trials: usize,
    pub trials_failed: usize,
    pub status: CellStatus,
}

pub const CSV_HEADER: [&str; 16] = [
    "space",
    "d",
    "K",
    "N",
    "field",
    "metric",
    "unit",
    "mu_target",
    "best_diameter",
    "avg_diameter",
    "reference",
    "error_vs_reference",
    "avg_iterations",
    "trials",
    "trials_failed",
    "status",
];

fn opt(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

fn parse_opt(s: &str, col: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| Error::invalid(format!("column {col}: '{s}' is not a number")))
}

fn parse_num<T: FromStr>(s: &str, col: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::invalid(format!("column {col}: '{s}' is not valid")))
}

impl ResultRow {
    pub fn succeeded(&self) -> usize {
        self.trials - self.trials_failed
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.space.to_string(),
            self.d.to_string(),
            self.k.to_string(),
            self.n.to_string(),
            self.field.to_string(),
            self.metric.to_string(),
            self.unit.to_string(),
            opt(self.mu_target),
            opt(self.best_diameter),
            opt(self.avg_diameter),
            opt(self.reference),
            opt(self.error_vs_reference),
            opt(self.avg_iterations),
            self.trials.to_string(),
            self.trials_failed.to_string(),
            self.status.to_string(),
        ]
    }

    fn from_record(rec: &csv::StringRecord) -> Result<Self> {
        if rec.len() != CSV_HEADER.len() {
            return Err(Error::invalid(format!(
                "expected {} columns, got {}",
                CSV_HEADER.len(),
                rec.len()
            )));
        }
        let c = |i: usize| &rec[i];
        Ok(ResultRow {
            space: c(0).parse()?,
            d: parse_num(c(1), "d")?,
            k: parse_num(c(2), "K")?,
            n: parse_num(c(3), "N")?,
            field: c(4).parse()?,
            metric: c(5).parse()?,
            unit: c(6).parse()?,
            mu_target: parse_opt(c(7), "mu_target")?,
            best_diameter: parse_opt(c(8), "best_diameter")?,
            avg_diameter: parse_opt(c(9), "avg_diameter")?,
            reference: parse_opt(c(10), "reference")?,
            error_vs_reference: parse_opt(c(11), "error_vs_reference")?,
            avg_iterations: parse_opt(c(12), "avg_iterations")?,
            trials: parse_num(c(13), "trials")?,
            trials_failed: parse_num(c(14), "trials_failed")?,
            status: c(15).parse()?,
        })
    }
}

/// Fills `reference` and `error_vs_reference` from `table` for every row
/// with a matching key.
pub fn compare_reference(rows: &[ResultRow], table: &ReferenceTable) -> Result<Vec<ResultRow>> {
    rows.iter()
        .map(|row| {
            let mut row = row.clone();
            if let Some(r) = table.get(row.d, row.k, row.n) {
                if r.unit != row.unit {
                    return Err(Error::invalid(format!(
                        "reference for ({}, {}, {}) is in {} but results are in {}",
                        row.d, row.k, row.n, r.unit, row.unit
                    )));
                }
                row.reference = Some(r.value);
                row.error_vs_reference = row.best_diameter.map(|b| r.value - b);
            }
            Ok(row)
        })
        .collect()
}

/// Writes the results table. `comment`, if given, becomes a leading `#` line.
pub fn write_csv<W: Write>(writer: W, rows: &[ResultRow], comment: Option<&str>) -> Result<()> {
    let mut writer = writer;
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(writer, "# {line}")?;
        }
    }
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.record()).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(reader: R, source: &str) -> Result<Vec<ResultRow>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::parse(source, e))?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::parse(source, format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        let ctx = || format!("{source}, record {}", idx + 1);
        let rec = rec.map_err(|e| Error::parse(ctx(), e))?;
        rows.push(ResultRow::from_record(&rec).map_err(|e| Error::parse(ctx(), e))?);
    }
    Ok(rows)
}

pub fn write_csv_file(path: &Path, rows: &[ResultRow], comment: Option<&str>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(std::io::BufWriter::new(file), rows, comment)
}

pub fn read_csv_file(path: &Path) -> Result<Vec<ResultRow>> {
    let file = std::fs::File::open(path)?;
    read_csv(file, &path.display().to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// One results table, `results.csv`.
    Csv,
    /// One `N,achieved,bound,reference` series per (space, field, metric, d, K).
    PlotData,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "plot_data" | "plot-data" => Ok(ExportFormat::PlotData),
            other => Err(Error::invalid(format!("unknown export format '{other}'"))),
        }
    }
}

/// Plot series as (N, achieved, bound, reference) tuples.
pub type PlotSeries = Vec<(usize, Option<f64>, Option<f64>, Option<f64>)>;

/// Groups rows into plot series keyed by a file stem.
pub fn plot_series(rows: &[ResultRow]) -> Vec<(String, PlotSeries)> {
    let mut out: Vec<(String, PlotSeries)> = Vec::new();
    let mut sorted: Vec<&ResultRow> = rows.iter().collect();
    sorted.sort_by_key(|r| (r.space.name(), r.field.short_name(), r.metric.name(), r.d, r.k, r.n));
    for row in sorted {
        let stem = format!(
            "plot_{}_{}_{}_d{}_K{}",
            row.space,
            row.field,
            row.metric.name().replace('-', "_"),
            row.d,
            row.k
        );
        let bound = row.space.bound_value(row.metric, row.field, row.d, row.k, row.n);
        let point = (row.n, row.best_diameter, bound, row.reference);
        match out.last_mut() {
            Some((s, series)) if *s == stem => series.push(point),
            _ => out.push((stem, vec![point])),
        }
    }
    out
}

/// Writes `rows` into `dir` and returns the files created.
pub fn export(rows: &[ResultRow], format: ExportFormat, dir: &Path) -> Result<Vec<PathBuf>> {
    if rows.is_empty() {
        return Err(Error::invalid("nothing to export"));
    }
    std::fs::create_dir_all(dir)?;
    match format {
        ExportFormat::Csv => {
            let path = dir.join("results.csv");
            write_csv_file(&path, rows, None)?;
            Ok(vec![path])
        }
        ExportFormat::PlotData => {
            let mut paths = Vec::new();
            for (stem, series) in plot_series(rows) {
                let path = dir.join(format!("{stem}.csv"));
                let mut text = String::from("N,achieved,bound,reference\n");
                for (n, achieved, bound, reference) in series {
                    text.push_str(&format!("{n},{},{},{}\n", opt(achieved), opt(bound), opt(reference)));
                }
                std::fs::write(&path, text)?;
                paths.push(path);
            }
            Ok(paths)
        }
    }
}
