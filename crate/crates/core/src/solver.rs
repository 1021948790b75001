//! The alternating projection loop.

use crate::error::{Error, Result};
use crate::geometry::{self, Configuration, GramMatrix, Metric};
use crate::linalg::{self, CMatrix};
use crate::projections::{self, SpectralSetSpec, StructuralSetSpec};

pub const DEFAULT_MAX_ITERATIONS: usize = 5000;
pub const DEFAULT_STOP_SLACK: f64 = 1e-5;

/// Smallest eigenvalue a diagonal block may have before renormalization.
pub const MIN_DIAGONAL_EIGENVALUE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveParams {
    pub max_iterations: usize,
    /// The loop halts once every off-diagonal block magnitude is within
    /// `mu + stop_slack`.
    pub stop_slack: f64,
    pub metric: Metric,
    pub mu: f64,
    pub d: usize,
    pub k: usize,
    pub n: usize,
}

impl SolveParams {
    pub fn new(metric: Metric, mu: f64, d: usize, k: usize, n: usize) -> Self {
        SolveParams {
            max_iterations: DEFAULT_MAX_ITERATIONS,
            stop_slack: DEFAULT_STOP_SLACK,
            metric,
            mu,
            d,
            k,
            n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.metric == Metric::Geodesic {
            return Err(Error::invalid("packing under the geodesic metric is not supported"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be at least 1"));
        }
        if !(self.stop_slack >= 0.0) {
            return Err(Error::invalid("stop_slack must be nonnegative"));
        }
        if self.k == 0 || self.k > self.d {
            return Err(Error::invalid(format!(
                "need 1 <= K <= d, got K={}, d={}",
                self.k, self.d
            )));
        }
        if self.n < 2 {
            return Err(Error::invalid("need at least two subspaces"));
        }
        StructuralSetSpec::new(self.metric, self.mu, self.k, self.n).map(|_| ())
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub iterations_used: usize,
    /// `‖G(t) − H(t)‖_F` for every completed iteration.
    pub gap_history: Vec<f64>,
    pub stopped_early: bool,
    pub final_gram: GramMatrix,
    pub final_config: Configuration,
    /// Packing diameter of `final_config` (radians between points for the
    /// sphere).
    pub final_diameter: f64,
    /// Largest off-diagonal block magnitude of the Gram matrix of
    /// `final_config`.
    pub mu_achieved: f64,
}

fn at_iteration(iteration: usize) -> impl FnOnce(Error) -> Error {
    move |e| Error::AtIteration {
        iteration,
        source: Box::new(e),
    }
}

/// Alternates structural and spectral projections from `g0`, then rescales
/// the diagonal blocks to the identity and factors the result.
pub fn alternate(g0: &GramMatrix, params: &SolveParams) -> Result<SolveReport> {
    params.validate()?;
    if g0.k() != params.k || g0.n() != params.n {
        return Err(Error::invalid(format!(
            "starting matrix has K={}, N={} but the problem has K={}, N={}",
            g0.k(),
            g0.n(),
            params.k,
            params.n
        )));
    }
    let structural = StructuralSetSpec::new(params.metric, params.mu, params.k, params.n)?;
    let spectral = SpectralSetSpec::for_packing(params.d, params.k, params.n)?;
    let threshold = params.mu + params.stop_slack;

    let mut g = g0.clone();
    let mut gap_history = Vec::with_capacity(params.max_iterations.min(1 << 16));
    let mut stopped_early = false;
    let mut t = 0;
    while t < params.max_iterations {
        let magnitude =
            geometry::max_block_magnitude(&g, params.metric).map_err(at_iteration(t))?;
        if magnitude <= threshold {
            stopped_early = true;
            break;
        }
        let h = projections::project_structural(&g, &structural).map_err(at_iteration(t))?;
        gap_history.push(linalg::frobenius_norm(&(g.matrix() - h.matrix())));
        g = projections::project_spectral(&h, &spectral).map_err(at_iteration(t))?;
        t += 1;
    }

    let final_gram = normalize_diagonal(&g).map_err(at_iteration(t))?;
    let final_config = geometry::factor(&final_gram, params.d).map_err(at_iteration(t))?;
    let final_diameter = geometry::diameter(&final_config, params.metric)?;
    let mu_achieved = geometry::max_block_magnitude(&geometry::gram(&final_config), params.metric)?;
    Ok(SolveReport {
        iterations_used: t,
        gap_history,
        stopped_early,
        final_gram,
        final_config,
        final_diameter,
        mu_achieved,
    })
}

/// `D^{-1/2} G D^{-1/2}` with `D` the block diagonal of `G`. A congruence, so
/// the inertia of `G` is preserved.
pub fn normalize_diagonal(g: &GramMatrix) -> Result<GramMatrix> {
    let k = g.k();
    let n = g.n();
    let mut inv_sqrt = Vec::with_capacity(n);
    for i in 0..n {
        let eig = linalg::hermitian_eig(&g.block(i, i))?;
        let smallest = *eig.eigenvalues.last().expect("K >= 1");
        if !(smallest >= MIN_DIAGONAL_EIGENVALUE) {
            return Err(Error::SingularBlock {
                block: i,
                min_eig: smallest,
            });
        }
        let scales: Vec<f64> = eig.eigenvalues.iter().map(|l| l.sqrt().recip()).collect();
        inv_sqrt.push(linalg::rebuild_hermitian(&eig.eigenvectors, &scales, k));
    }
    let mut out = CMatrix::zeros(k * n, k * n);
    for m in 0..n {
        for j in (m + 1)..n {
            let block = &inv_sqrt[m] * g.block(m, j) * &inv_sqrt[j];
            out.view_mut((m * k, j * k), (k, k)).copy_from(&block);
            out.view_mut((j * k, m * k), (k, k)).copy_from(&block.adjoint());
        }
        out.view_mut((m * k, m * k), (k, k))
            .copy_from(&CMatrix::identity(k, k));
    }
    GramMatrix::new(g.field(), k, out)
}
