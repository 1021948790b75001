//! Nearest-point maps onto the two constraint sets of the alternating
//! projection.
//!
//! The structural set holds Hermitian matrices with identity diagonal blocks
//! and off-diagonal blocks of magnitude at most μ, magnitude measured per
//! metric. The spectral set holds positive-semidefinite matrices of rank at
//! most d with a fixed trace.

use crate::error::{Error, Result};
use crate::geometry::{Field, GramMatrix, Metric};
use crate::linalg::{self, CMatrix};

/// Floor applied to singular values before the log-domain Fubini–Study solve.
pub const FS_SINGULAR_FLOOR: f64 = 1e-12;

/// Relative slack under which a block counts as already feasible. Keeps the
/// projection idempotent when roundoff lands a projected block a few ulps
/// above μ.
const FEASIBLE_SLACK: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralSetSpec {
    pub metric: Metric,
    pub mu: f64,
    pub k: usize,
    pub n: usize,
}

impl StructuralSetSpec {
    pub fn new(metric: Metric, mu: f64, k: usize, n: usize) -> Result<Self> {
        let spec = StructuralSetSpec { metric, mu, k, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = match self.metric {
            Metric::Chordal => (0.0, (self.k as f64).sqrt()),
            Metric::Spectral | Metric::FubiniStudy => (0.0, 1.0),
            Metric::Sphere => (-1.0, 1.0),
            Metric::Geodesic => {
                return Err(Error::invalid(
                    "no structural projection exists for the geodesic metric",
                ))
            }
        };
        if !(self.mu >= lo && self.mu <= hi) {
            return Err(Error::invalid(format!(
                "mu = {} outside [{lo}, {hi}] for the {} metric",
                self.mu, self.metric
            )));
        }
        if self.metric == Metric::Sphere && self.k != 1 {
            return Err(Error::invalid("the sphere metric requires K = 1"));
        }
        if self.k == 0 || self.n == 0 {
            return Err(Error::invalid("empty block structure"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSetSpec {
    /// Rank cap.
    pub d: usize,
    pub trace_target: f64,
}

impl SpectralSetSpec {
    pub fn new(d: usize, trace_target: f64) -> Result<Self> {
        if d == 0 || !(trace_target > 0.0) {
            return Err(Error::invalid(format!(
                "spectral set needs d >= 1 and positive trace, got d={d}, trace={trace_target}"
            )));
        }
        Ok(SpectralSetSpec { d, trace_target })
    }

    /// The set used for packings: rank ≤ d, trace KN.
    pub fn for_packing(d: usize, k: usize, n: usize) -> Result<Self> {
        SpectralSetSpec::new(d, (k * n) as f64)
    }
}

/// Projects one off-diagonal block onto the metric's magnitude ball.
fn project_block(block: &CMatrix, metric: Metric, mu: f64) -> Result<Option<CMatrix>> {
    let cap = mu * (1.0 + FEASIBLE_SLACK);
    match metric {
        Metric::Chordal => {
            let norm = linalg::frobenius_norm(block);
            if norm <= cap {
                return Ok(None);
            }
            Ok(Some(block * num_complex::Complex64::from(mu / norm)))
        }
        Metric::Spectral => {
            let svd = linalg::svd(block)?;
            if svd.singulars[0] <= cap {
                return Ok(None);
            }
            let clipped: Vec<f64> = svd.singulars.iter().map(|&s| s.min(mu)).collect();
            Ok(Some(linalg::with_singulars(&svd, &clipped)))
        }
        Metric::FubiniStudy => {
            let svd = linalg::svd(block)?;
            let det: f64 = svd.singulars.iter().product();
            if det <= cap {
                return Ok(None);
            }
            let values = if mu == 0.0 {
                // Nearest singular matrix: drop the smallest singular value.
                let mut v = svd.singulars.clone();
                if let Some(last) = v.last_mut() {
                    *last = 0.0;
                }
                v
            } else {
                let c: Vec<f64> = svd
                    .singulars
                    .iter()
                    .map(|&s| s.max(FS_SINGULAR_FLOOR))
                    .collect();
                let sol = solve_fs_block(&c, mu)?;
                sol.x.iter().map(|x| x.exp()).collect()
            };
            Ok(Some(linalg::with_singulars(&svd, &values)))
        }
        Metric::Sphere => {
            let g = block[(0, 0)];
            let clamped = g.re.clamp(-1.0, mu);
            if clamped == g.re && g.im == 0.0 {
                return Ok(None);
            }
            Ok(Some(CMatrix::from_element(1, 1, clamped.into())))
        }
        Metric::Geodesic => Err(Error::invalid(
            "no structural projection exists for the geodesic metric",
        )),
    }
}

/// Nearest point of the structural set: identity diagonal blocks and each
/// off-diagonal block projected independently.
pub fn project_structural(g: &GramMatrix, spec: &StructuralSetSpec) -> Result<GramMatrix> {
    spec.validate()?;
    if g.k() != spec.k || g.n() != spec.n {
        return Err(Error::invalid(format!(
            "Gram matrix has K={}, N={} but the constraint set expects K={}, N={}",
            g.k(),
            g.n(),
            spec.k,
            spec.n
        )));
    }
    if spec.metric == Metric::Sphere && g.field() != Field::Real {
        return Err(Error::invalid("sphere packings live in a real space"));
    }
    let mut h = g.clone();
    let eye = CMatrix::identity(spec.k, spec.k);
    for m in 0..spec.n {
        h.set_block(m, m, &eye);
        for n in (m + 1)..spec.n {
            let block = g.block(m, n);
            if let Some(projected) = project_block(&block, spec.metric, spec.mu)? {
                h.set_block(m, n, &projected);
            }
        }
    }
    h.enforce_field();
    Ok(h)
}

/// Solution of `min ½‖exp(x) − c‖²` subject to `Σ x ≤ log μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FsBlockSolution {
    pub x: Vec<f64>,
    /// Lagrange multiplier ν ≥ 0 of the sum constraint.
    pub multiplier: f64,
    /// `max_k |y_k (c_k − y_k) − ν|` with `y = exp(x)`.
    pub kkt_residual: f64,
    /// `|Σ x − log μ|`.
    pub constraint_residual: f64,
}

impl FsBlockSolution {
    pub fn objective(&self, c: &[f64]) -> f64 {
        fs_objective(&self.x, c)
    }
}

pub fn fs_objective(x: &[f64], c: &[f64]) -> f64 {
    0.5 * x
        .iter()
        .zip(c)
        .map(|(x, c)| (x.exp() - c).powi(2))
        .sum::<f64>()
}

/// Roots of `y (c − y) = ν`: larger root, and the smaller one computed from
/// the product of roots to avoid cancellation.
fn stationary_roots(c: f64, nu: f64) -> (f64, f64) {
    let disc = (c * c - 4.0 * nu).max(0.0).sqrt();
    let large = 0.5 * (c + disc);
    let small = if large > 0.0 { nu / large } else { 0.0 };
    (large, small)
}

/// Stationary points lie on the curves `y_k(c_k − y_k) = ν`. A candidate
/// branch puts every coordinate on its larger root, or exactly one
/// coordinate (`small`) on its smaller root.
fn branch_point(c: &[f64], nu: f64, small: Option<usize>) -> Vec<f64> {
    c.iter()
        .enumerate()
        .map(|(k, &ck)| {
            let (large, tiny) = stationary_roots(ck, nu);
            if Some(k) == small {
                tiny
            } else {
                large
            }
        })
        .collect()
}

fn log_sum(y: &[f64]) -> f64 {
    y.iter().map(|v| v.ln()).sum()
}

const FS_SCAN_POINTS: usize = 256;
const FS_BISECTIONS: usize = 200;

/// Solves the Fubini–Study block problem by scanning the multiplier ν over
/// each stationary branch, bisecting every sign change of the active
/// constraint, and keeping the candidate with the smallest objective.
pub fn solve_fs_block(c: &[f64], mu: f64) -> Result<FsBlockSolution> {
    if c.is_empty() {
        return Err(Error::invalid("empty singular value vector"));
    }
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::invalid(format!("mu = {mu} outside (0, 1]")));
    }
    if c.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::invalid("singular values must be finite and nonnegative"));
    }
    let c: Vec<f64> = c.iter().map(|v| v.max(FS_SINGULAR_FLOOR)).collect();
    let log_mu = mu.ln();
    if log_sum(&c) <= log_mu {
        let x: Vec<f64> = c.iter().map(|v| v.ln()).collect();
        return Ok(FsBlockSolution {
            constraint_residual: 0.0,
            kkt_residual: 0.0,
            multiplier: 0.0,
            x,
        });
    }

    let nu_max = c.iter().map(|v| 0.25 * v * v).fold(f64::INFINITY, f64::min);
    let branches = std::iter::once(None).chain((0..c.len()).map(Some));
    let mut best: Option<(f64, f64, Vec<f64>)> = None;

    for small in branches {
        let gap = |nu: f64| log_sum(&branch_point(&c, nu, small)) - log_mu;
        // ν = ν_max · s(2 − s) refines the grid near the branch point ν_max,
        // where the roots move fastest.
        let nu_at = |s: f64| nu_max * s * (2.0 - s);
        let mut prev_s = 0.0;
        let mut prev_gap = gap(0.0);
        for i in 1..=FS_SCAN_POINTS {
            let s = i as f64 / FS_SCAN_POINTS as f64;
            let cur_gap = gap(nu_at(s));
            let sign_change = (prev_gap > 0.0) != (cur_gap > 0.0) || cur_gap == 0.0;
            if sign_change {
                let (mut lo, mut hi) = (prev_s, s);
                let lo_positive = prev_gap > 0.0;
                for _ in 0..FS_BISECTIONS {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if (gap(nu_at(mid)) > 0.0) == lo_positive {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let candidates = [lo, hi];
                for s_root in candidates {
                    let nu = nu_at(s_root);
                    let y = branch_point(&c, nu, small);
                    if y.iter().any(|v| !(*v > 0.0)) {
                        continue;
                    }
                    let x: Vec<f64> = y.iter().map(|v| v.ln()).collect();
                    let violation = (x.iter().sum::<f64>() - log_mu).abs();
                    if violation > 1e-9 {
                        continue;
                    }
                    let obj = fs_objective(&x, &c);
                    if best.as_ref().is_none_or(|(b, v, _)| {
                        obj < *b - 1e-15 || (obj <= *b + 1e-15 && violation < *v)
                    }) {
                        best = Some((obj, violation, x));
                    }
                }
            }
            prev_s = s;
            prev_gap = cur_gap;
        }
    }

    let (_, _, mut x) = best.ok_or_else(|| {
        Error::NumericalFailure(format!(
            "Fubini-Study block solve found no root for c = {c:?}, mu = {mu}"
        ))
    })?;

    // Spread the remaining constraint error evenly; it is at roundoff level.
    let shift = (log_mu - x.iter().sum::<f64>()) / x.len() as f64;
    x.iter_mut().for_each(|v| *v += shift);

    let y: Vec<f64> = x.iter().map(|v| v.exp()).collect();
    let stationarity: Vec<f64> = y.iter().zip(&c).map(|(y, c)| y * (c - y)).collect();
    let multiplier = stationarity.iter().sum::<f64>() / stationarity.len() as f64;
    let kkt_residual = stationarity
        .iter()
        .map(|s| (s - multiplier).abs())
        .fold(0.0, f64::max);
    let constraint_residual = (x.iter().sum::<f64>() - log_mu).abs();
    if multiplier < -1e-12 {
        return Err(Error::NumericalFailure(format!(
            "negative multiplier {multiplier:.3e} in Fubini-Study block solve"
        )));
    }
    Ok(FsBlockSolution {
        x,
        multiplier: multiplier.max(0.0),
        kkt_residual,
        constraint_residual,
    })
}

const GAMMA_BISECTIONS: usize = 200;

/// Eigenvalue weights `(λ_j − γ)_+` for the leading `d` eigenvalues so that
/// they sum to `trace`. Returns the weights and γ.
pub fn spectral_weights(eigenvalues: &[f64], d: usize, trace: f64) -> Result<(Vec<f64>, f64)> {
    let top = &eigenvalues[..d.min(eigenvalues.len())];
    if top.is_empty() {
        return Err(Error::invalid("no eigenvalues to project"));
    }
    let mass = |gamma: f64| top.iter().map(|&l| (l - gamma).max(0.0)).sum::<f64>();
    let lead = top[0];
    // mass(lead) = 0 and mass(lead − trace − 1) ≥ trace + 1.
    let (mut lo, mut hi) = (lead - trace - 1.0, lead);
    let tol = 1e-12 * trace;
    let mut converged = false;
    for _ in 0..GAMMA_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let resid = mass(mid) - trace;
        if resid.abs() <= tol {
            lo = mid;
            hi = mid;
            converged = true;
            break;
        }
        if resid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * lead.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(
            "trace bisection for the spectral projection did not converge".into(),
        ));
    }
    // Polish: with the active set fixed, γ has a closed form.
    let mut gamma = 0.5 * (lo + hi);
    let active: Vec<f64> = top.iter().copied().filter(|&l| l > gamma).collect();
    if !active.is_empty() {
        let exact = (active.iter().sum::<f64>() - trace) / active.len() as f64;
        let consistent = top
            .iter()
            .all(|&l| (l > exact) == (l > gamma) || (l - exact).abs() <= tol);
        if consistent {
            gamma = exact;
        }
    }
    let weights = top.iter().map(|&l| (l - gamma).max(0.0)).collect();
    Ok((weights, gamma))
}

/// Nearest matrix to `h` that is positive semidefinite with rank ≤ d and the
/// given trace.
pub fn project_spectral(h: &GramMatrix, spec: &SpectralSetSpec) -> Result<GramMatrix> {
    if spec.d == 0 || !(spec.trace_target > 0.0) {
        return Err(Error::invalid("invalid spectral constraint set"));
    }
    let eig = linalg::hermitian_eig(h.matrix())?;
    let (weights, _gamma) = spectral_weights(&eig.eigenvalues, spec.d, spec.trace_target)?;
    let out = linalg::rebuild_hermitian(&eig.eigenvectors, &weights, weights.len());
    GramMatrix::new(h.field(), h.k(), out)
}
