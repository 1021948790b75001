//! Multi-trial experiments, reference tables and result files.

mod eval;
mod reference;
mod results;
mod run;
mod spec;

pub use eval::{evaluate, evaluate_file, EvalReport, MetricEval, SpectrumSummary};
pub use reference::{ReferenceTable, ReferenceValue, Unit};
pub use results::{
    compare_reference, export, plot_series, read_csv, read_csv_file, write_csv, write_csv_file, CellStatus,
    ExportFormat, PlotSeries, ResultRow, CSV_HEADER,
};
pub use run::{
    run_experiment, run_experiment_detailed, run_trial, workers_from_env, CellOutcome, TrialOutcome, WORKERS_ENV,
};
pub use spec::{ExperimentSpec, MuSource, Space, Sweep};
