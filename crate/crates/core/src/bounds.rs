//! Rankin-type upper bounds and conversions between a target packing
//! diameter ρ and the block-magnitude cap μ used by the solver.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Field, Metric};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    /// Squared packing diameter bound (for lines: squared sine of the angle).
    pub bound_value: f64,
    /// The same bound as an acute angle in degrees, for line packings.
    pub angle_degrees: Option<f64>,
    /// Whether N is within the range where the bound can be met at all.
    pub attainable: bool,
    pub attainability_limit: usize,
    /// Meeting the bound forces all pairs to be equidistant.
    pub equidistance_implied: bool,
}

fn check_shape(d: usize, k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= d {
        return Err(Error::invalid(format!("need 1 <= K < d, got K={k}, d={d}")));
    }
    if n < 2 {
        return Err(Error::invalid(format!("need N >= 2, got {n}")));
    }
    Ok(())
}

fn ratio(n: usize) -> f64 {
    n as f64 / (n as f64 - 1.0)
}

/// Largest N for which an equidistant chordal configuration can exist.
pub fn chordal_attainability_limit(d: usize, field: Field) -> usize {
    match field {
        Field::Real => d * (d + 1) / 2,
        Field::Complex => d * d,
    }
}

/// Largest N for which an equi-isoclinic configuration can exist.
pub fn isoclinic_attainability_limit(d: usize, k: usize, field: Field) -> usize {
    match field {
        Field::Real => d * (d + 1) / 2 - k * (k + 1) / 2 + 1,
        Field::Complex => d * d - k * k + 1,
    }
}

/// Bound on the squared chordal packing diameter: K(d−K)/d · N/(N−1).
pub fn rankin_chordal(d: usize, k: usize, n: usize, field: Field) -> Result<BoundReport> {
    check_shape(d, k, n)?;
    let limit = chordal_attainability_limit(d, field);
    Ok(BoundReport {
        bound_value: (k * (d - k)) as f64 / d as f64 * ratio(n),
        angle_degrees: None,
        attainable: n <= limit,
        attainability_limit: limit,
        equidistance_implied: true,
    })
}

/// Bound on the squared spectral packing diameter: (d−K)/d · N/(N−1).
/// Meeting it forces an equi-isoclinic configuration.
pub fn rankin_spectral(d: usize, k: usize, n: usize, field: Field) -> Result<BoundReport> {
    check_shape(d, k, n)?;
    let limit = isoclinic_attainability_limit(d, k, field);
    Ok(BoundReport {
        bound_value: (d - k) as f64 / d as f64 * ratio(n),
        angle_degrees: None,
        attainable: n <= limit,
        attainability_limit: limit,
        equidistance_implied: true,
    })
}

/// Bound for N lines in d dimensions, as squared sine and as degrees.
pub fn rankin_projective(d: usize, n: usize, field: Field) -> Result<BoundReport> {
    if d < 2 {
        return Err(Error::invalid(format!("need d >= 2, got {d}")));
    }
    let mut report = rankin_chordal(d, 1, n, field)?;
    report.angle_degrees = Some(report.bound_value.sqrt().min(1.0).asin().to_degrees());
    Ok(report)
}

/// Bound for a metric, if one is known: chordal and spectral only.
pub fn rankin_for(metric: Metric, d: usize, k: usize, n: usize, field: Field) -> Option<BoundReport> {
    match metric {
        Metric::Chordal if k == 1 => rankin_projective(d, n, field).ok(),
        Metric::Chordal => rankin_chordal(d, k, n, field).ok(),
        Metric::Spectral => rankin_spectral(d, k, n, field).ok(),
        _ => None,
    }
}

const RANGE_SLACK: f64 = 1e-12;

fn check_range(value: f64, hi: f64, what: &str, metric: Metric) -> Result<f64> {
    if !value.is_finite() || value < -RANGE_SLACK || value > hi + RANGE_SLACK {
        return Err(Error::invalid(format!(
            "{what} = {value} outside [0, {hi}] for the {metric} metric"
        )));
    }
    Ok(value.clamp(0.0, hi))
}

fn rho_upper(metric: Metric, k: usize) -> Result<f64> {
    match metric {
        Metric::Chordal => Ok((k as f64).sqrt()),
        Metric::Spectral | Metric::Sphere => Ok(1.0),
        Metric::FubiniStudy => Ok(std::f64::consts::FRAC_PI_2),
        Metric::Geodesic => Err(Error::invalid("no feasibility parameter for the geodesic metric")),
    }
}

fn mu_upper(metric: Metric, k: usize) -> Result<f64> {
    match metric {
        Metric::Chordal => Ok((k as f64).sqrt()),
        Metric::Spectral | Metric::Sphere | Metric::FubiniStudy => Ok(1.0),
        Metric::Geodesic => Err(Error::invalid("no feasibility parameter for the geodesic metric")),
    }
}

/// Block-magnitude cap μ for a target diameter ρ.
///
/// The sphere conversion uses `√(1 − ρ²)` as published; sphere experiments
/// set μ directly as the cosine of the target angle instead.
pub fn mu_from_rho(rho: f64, metric: Metric, k: usize) -> Result<f64> {
    let rho = check_range(rho, rho_upper(metric, k)?, "rho", metric)?;
    Ok(match metric {
        Metric::Chordal => (k as f64 - rho * rho).max(0.0).sqrt(),
        Metric::Spectral | Metric::Sphere => (1.0 - rho * rho).max(0.0).sqrt(),
        Metric::FubiniStudy => rho.cos().max(0.0),
        Metric::Geodesic => unreachable!(),
    })
}

/// Inverse of [`mu_from_rho`].
pub fn rho_from_mu(mu: f64, metric: Metric, k: usize) -> Result<f64> {
    let mu = check_range(mu, mu_upper(metric, k)?, "mu", metric)?;
    Ok(match metric {
        Metric::Chordal => (k as f64 - mu * mu).max(0.0).sqrt(),
        Metric::Spectral | Metric::Sphere => (1.0 - mu * mu).max(0.0).sqrt(),
        Metric::FubiniStudy => mu.acos(),
        Metric::Geodesic => unreachable!(),
    })
}
