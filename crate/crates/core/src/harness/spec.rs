use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::reference::{ReferenceTable, ReferenceValue, Unit};
use crate::bounds;
use crate::error::{Error, Result};
use crate::geometry::{Field, Metric};
use crate::init::{SimilarityTest, DEFAULT_MAX_DRAWS};
use crate::solver::{SolveReport, DEFAULT_MAX_ITERATIONS, DEFAULT_STOP_SLACK};

/// Kind of object being packed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    /// Lines (K = 1); reported as angles.
    Projective,
    /// K-dimensional subspaces.
    Grassmann,
    /// Points on the real unit sphere.
    Sphere,
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::Projective => "projective",
            Space::Grassmann => "grassmann",
            Space::Sphere => "sphere",
        }
    }

    /// Unit used for results in this space under `metric`.
    pub fn unit(self, metric: Metric) -> Unit {
        match (self, metric) {
            (Space::Projective | Space::Sphere, _) => Unit::Degrees,
            (Space::Grassmann, Metric::FubiniStudy) => Unit::ScaledFs,
            (Space::Grassmann, _) => Unit::SquaredDiameter,
        }
    }

    /// Default similarity cap for the random start.
    pub fn default_tau(self, k: usize) -> f64 {
        match self {
            Space::Projective | Space::Sphere => 0.9,
            Space::Grassmann => (k as f64).sqrt(),
        }
    }

    pub fn similarity_test(self) -> SimilarityTest {
        match self {
            Space::Sphere => SimilarityTest::SignedInnerProduct,
            _ => SimilarityTest::Frobenius,
        }
    }

    /// The quantity tabulated for a finished solve, in [`Space::unit`].
    pub fn reported_value(self, metric: Metric, report: &SolveReport) -> f64 {
        match self {
            Space::Projective => report.mu_achieved.clamp(0.0, 1.0).acos().to_degrees(),
            Space::Sphere => report.final_diameter.to_degrees(),
            Space::Grassmann => match metric {
                Metric::FubiniStudy => report.final_diameter / std::f64::consts::FRAC_PI_2,
                _ => report.final_diameter * report.final_diameter,
            },
        }
    }

    /// Rankin bound in [`Space::unit`], where one applies.
    pub fn bound_value(self, metric: Metric, field: Field, d: usize, k: usize, n: usize) -> Option<f64> {
        match self {
            Space::Projective => bounds::rankin_projective(d, n, field).ok()?.angle_degrees,
            Space::Grassmann => match metric {
                Metric::Chordal | Metric::Spectral => {
                    bounds::rankin_for(metric, d, k, n, field).map(|b| b.bound_value)
                }
                _ => None,
            },
            Space::Sphere => None,
        }
    }

    /// Block cap μ that a packing with `value` (in [`Space::unit`]) would
    /// satisfy.
    pub fn mu_for_value(self, metric: Metric, k: usize, value: ReferenceValue) -> Result<f64> {
        let expected = self.unit(metric);
        if value.unit != expected {
            return Err(Error::invalid(format!(
                "reference unit {} does not match {} (expected for {} / {})",
                value.unit, expected, self, metric
            )));
        }
        match value.unit {
            Unit::Degrees => {
                let hi = if self == Space::Projective { 90.0 } else { 180.0 };
                if !(0.0..=hi).contains(&value.value) {
                    return Err(Error::invalid(format!("angle {} outside [0, {hi}]", value.value)));
                }
                let c = value.value.to_radians().cos();
                Ok(if self == Space::Projective { c.max(0.0) } else { c })
            }
            Unit::SquaredDiameter => {
                if value.value < 0.0 {
                    return Err(Error::invalid(format!("negative squared diameter {}", value.value)));
                }
                bounds::mu_from_rho(value.value.sqrt(), metric, k)
            }
            Unit::ScaledFs => bounds::mu_from_rho(value.value * std::f64::consts::FRAC_PI_2, metric, k),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "projective" | "lines" => Ok(Space::Projective),
            "grassmann" | "grassmannian" => Ok(Space::Grassmann),
            "sphere" | "tammes" => Ok(Space::Sphere),
            other => Err(Error::invalid(format!("unknown space '{other}'"))),
        }
    }
}

/// Where each cell's target μ comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MuSource {
    /// Converted from the best known value for the cell.
    Reference(ReferenceTable),
    /// Converted from the Rankin bound for the cell.
    Rankin,
    /// Used as given for every cell.
    Explicit(f64),
}

/// Linear grid of `steps` multiples of the base μ, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub min_factor: f64,
    pub max_factor: f64,
    pub steps: usize,
}

impl Default for Sweep {
    fn default() -> Self {
        Sweep {
            min_factor: 1.0,
            max_factor: 2.0,
            steps: 8,
        }
    }
}

impl Sweep {
    pub fn factors(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.min_factor];
        }
        let span = self.max_factor - self.min_factor;
        (0..self.steps)
            .map(|i| self.min_factor + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.steps == 0 || !(self.min_factor > 0.0) || !(self.max_factor >= self.min_factor) {
            return Err(Error::invalid(format!(
                "sweep needs 0 < min <= max and at least one step, got {}:{}:{}",
                self.min_factor, self.max_factor, self.steps
            )));
        }
        Ok(())
    }
}

impl FromStr for Sweep {
    type Err = Error;

    /// `min:max:steps`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::invalid(format!("sweep '{s}' is not min:max:steps"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let sweep = Sweep {
            min_factor: parts[0].trim().parse().map_err(|_| bad())?,
            max_factor: parts[1].trim().parse().map_err(|_| bad())?,
            steps: parts[2].trim().parse().map_err(|_| bad())?,
        };
        sweep.validate()?;
        Ok(sweep)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub space: Space,
    pub field: Field,
    pub metric: Metric,
    pub d: Vec<usize>,
    pub k: Vec<usize>,
    pub n: Vec<usize>,
    pub trials: usize,
    pub mu_source: MuSource,
    pub sweep: Option<Sweep>,
    pub max_iterations: usize,
    pub stop_slack: f64,
    /// Similarity cap for the random start; [`Space::default_tau`] if unset.
    pub tau: Option<f64>,
    pub max_draws: usize,
    pub seed: u64,
    /// Worker threads; the `GRASSPACK_WORKERS` variable, else all cores, if
    /// unset.
    pub workers: Option<usize>,
}

impl ExperimentSpec {
    pub fn new(space: Space, field: Field, metric: Metric, mu_source: MuSource) -> Self {
        ExperimentSpec {
            space,
            field,
            metric,
            d: Vec::new(),
            k: vec![1],
            n: Vec::new(),
            trials: 10,
            mu_source,
            sweep: None,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            stop_slack: DEFAULT_STOP_SLACK,
            tau: None,
            max_draws: DEFAULT_MAX_DRAWS,
            seed: 0,
            workers: None,
        }
    }

    /// Shorthand for a single (d, K) pair over a range of N.
    pub fn cells(mut self, d: usize, k: usize, n: impl IntoIterator<Item = usize>) -> Self {
        self.d = vec![d];
        self.k = vec![k];
        self.n = n.into_iter().collect();
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.space {
            Space::Sphere => {
                if self.metric != Metric::Sphere || self.k.iter().any(|&k| k != 1) || self.field != Field::Real {
                    return Err(Error::invalid("sphere experiments need the sphere metric, K = 1 and the real field"));
                }
            }
            Space::Projective => {
                if self.k.iter().any(|&k| k != 1) {
                    return Err(Error::invalid("projective experiments need K = 1"));
                }
                if !matches!(self.metric, Metric::Chordal | Metric::Spectral | Metric::FubiniStudy) {
                    return Err(Error::invalid(format!("metric {} does not apply to lines", self.metric)));
                }
            }
            Space::Grassmann => {
                if !matches!(self.metric, Metric::Chordal | Metric::Spectral | Metric::FubiniStudy) {
                    return Err(Error::invalid(format!("metric {} is not supported for packing", self.metric)));
                }
            }
        }
        if self.d.is_empty() || self.k.is_empty() || self.n.is_empty() {
            return Err(Error::invalid("empty d, K or N range"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be positive"));
        }
        if let Some(s) = &self.sweep {
            s.validate()?;
        }
        if let MuSource::Explicit(mu) = self.mu_source {
            if !mu.is_finite() {
                return Err(Error::invalid("explicit mu must be finite"));
            }
        }
        Ok(())
    }

    /// All (d, K, N) cells with 1 ≤ K < d, sorted.
    pub fn cell_keys(&self) -> Vec<(usize, usize, usize)> {
        let mut keys = Vec::new();
        for &d in &self.d {
            for &k in &self.k {
                if k == 0 || k >= d {
                    continue;
                }
                for &n in &self.n {
                    keys.push((d, k, n));
                }
            }
        }
        keys.sort_unstable();
        keys.dedup();
        keys
    }

    pub fn unit(&self) -> Unit {
        self.space.unit(self.metric)
    }

    /// Base μ for a cell before any sweep factor.
    pub fn base_mu(&self, d: usize, k: usize, n: usize) -> Result<f64> {
        match &self.mu_source {
            MuSource::Explicit(mu) => Ok(*mu),
            MuSource::Reference(table) => {
                let value = table
                    .get(d, k, n)
                    .ok_or_else(|| Error::invalid(format!("no reference row for ({d}, {k}, {n})")))?;
                self.space.mu_for_value(self.metric, k, value)
            }
            MuSource::Rankin => {
                let bound = self
                    .space
                    .bound_value(self.metric, self.field, d, k, n)
                    .ok_or_else(|| Error::invalid(format!("no Rankin bound for {} / {}", self.space, self.metric)))?;
                self.space.mu_for_value(self.metric, k, ReferenceValue { value: bound, unit: self.unit() })
            }
        }
    }

    /// Every μ tried for a cell, clipped to the feasible range of the metric.
    pub fn mu_grid(&self, d: usize, k: usize, n: usize) -> Result<Vec<f64>> {
        let base = self.base_mu(d, k, n)?;
        let upper = match self.metric {
            Metric::Chordal => (k as f64).sqrt(),
            _ => 1.0,
        };
        let factors = self.sweep.map(|s| s.factors()).unwrap_or_else(|| vec![1.0]);
        let mut grid: Vec<f64> = factors.iter().map(|f| (base * f).min(upper)).collect();
        grid.dedup();
        Ok(grid)
    }

    pub fn tau_for(&self, k: usize) -> f64 {
        self.tau.unwrap_or_else(|| self.space.default_tau(k))
    }
}
