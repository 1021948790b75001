use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{self, Configuration, Field, Metric};
use crate::io;
use crate::linalg;

#[derive(Debug, Clone, Serialize)]
pub struct MetricEval {
    pub metric: Metric,
    pub diameter: f64,
    /// Absent for the geodesic metric, which has no block test.
    pub max_block_magnitude: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    pub largest: f64,
    pub smallest: f64,
    /// Eigenvalue d+1 (zero for an exact rank-d Gram matrix), if KN > d.
    pub beyond_rank: Option<f64>,
    pub trace: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub field: Field,
    pub d: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub metrics: Vec<MetricEval>,
    /// Smallest angle between lines in degrees (K = 1).
    pub line_angle_degrees: Option<f64>,
    /// Smallest angle between points in degrees (real, K = 1).
    pub sphere_angle_degrees: Option<f64>,
    pub gram_spectrum: SpectrumSummary,
}

pub fn evaluate(config: &Configuration) -> Result<EvalReport> {
    let g = geometry::gram(config);
    let mut metrics = Vec::new();
    for metric in Metric::SUBSPACE_METRICS {
        metrics.push(MetricEval {
            metric,
            diameter: geometry::packing_diameter(config, metric)?,
            max_block_magnitude: geometry::max_block_magnitude(&g, metric).ok(),
        });
    }
    let lines = config.k() == 1;
    let line_angle_degrees = if lines {
        let cos = geometry::max_block_magnitude(&g, Metric::Chordal)?;
        Some(cos.clamp(0.0, 1.0).acos().to_degrees())
    } else {
        None
    };
    let sphere_angle_degrees = if lines && config.field() == Field::Real {
        Some(geometry::sphere_diameter(config)?.to_degrees())
    } else {
        None
    };
    let eig = linalg::hermitian_eig(g.matrix())?;
    let ev = &eig.eigenvalues;
    Ok(EvalReport {
        field: config.field(),
        d: config.d(),
        k: config.k(),
        n: config.n(),
        metrics,
        line_angle_degrees,
        sphere_angle_degrees,
        gram_spectrum: SpectrumSummary {
            largest: ev[0],
            smallest: *ev.last().expect("nonempty"),
            beyond_rank: ev.get(config.d()).copied(),
            trace: ev.iter().sum(),
        },
    })
}

/// Reads a configuration file and evaluates it.
pub fn evaluate_file(path: &Path) -> Result<EvalReport> {
    evaluate(&io::read_config(path)?)
}
