//! Subspace configurations, principal angles, metrics and Gram matrices.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Scalar field of the ambient space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn short_name(self) -> &'static str {
        match self {
            Field::Real => "R",
            Field::Complex => "C",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r" | "real" => Ok(Field::Real),
            "c" | "complex" => Ok(Field::Complex),
            other => Err(Error::invalid(format!("unknown field '{other}'"))),
        }
    }
}

/// Distance used to measure packings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    Chordal,
    Spectral,
    FubiniStudy,
    Geodesic,
    /// Points on the unit sphere (K = 1, real), compared by signed inner product.
    Sphere,
}

impl Metric {
    pub const SUBSPACE_METRICS: [Metric; 4] = [
        Metric::Chordal,
        Metric::Spectral,
        Metric::FubiniStudy,
        Metric::Geodesic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Chordal => "chordal",
            Metric::Spectral => "spectral",
            Metric::FubiniStudy => "fubini-study",
            Metric::Geodesic => "geodesic",
            Metric::Sphere => "sphere",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "chordal" | "chord" => Ok(Metric::Chordal),
            "spectral" | "spec" => Ok(Metric::Spectral),
            "fubini-study" | "fs" | "fubinistudy" => Ok(Metric::FubiniStudy),
            "geodesic" | "geo" => Ok(Metric::Geodesic),
            "sphere" => Ok(Metric::Sphere),
            other => Err(Error::invalid(format!("unknown metric '{other}'"))),
        }
    }
}

/// Tolerance on `X_n* X_n = I` for configuration blocks.
pub const FRAME_TOL: f64 = 1e-10;

/// N orthonormal d×K frames stored side by side in a d×KN matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    field: Field,
    k: usize,
    n: usize,
    frames: CMatrix,
}

impl Configuration {
    /// Wraps a d×KN matrix; every d×K block must be an orthonormal frame.
    pub fn new(field: Field, k: usize, frames: CMatrix) -> Result<Self> {
        let (d, cols) = frames.shape();
        if k == 0 || k > d {
            return Err(Error::invalid(format!("need 1 <= K <= d, got K={k}, d={d}")));
        }
        if cols % k != 0 {
            return Err(Error::invalid(format!(
                "{cols} columns do not split into blocks of width {k}"
            )));
        }
        let n = cols / k;
        if n < 2 {
            return Err(Error::invalid(format!("need N >= 2 subspaces, got {n}")));
        }
        linalg::ensure_finite(&frames)?;
        if field == Field::Real && frames.iter().any(|z| z.im != 0.0) {
            return Err(Error::invalid("real configuration has nonzero imaginary parts"));
        }
        let config = Configuration {
            field,
            k,
            n,
            frames,
        };
        let eye = CMatrix::identity(k, k);
        for idx in 0..n {
            let b = config.block(idx);
            let err = linalg::frobenius_norm(&(b.adjoint() * &b - &eye));
            if err > FRAME_TOL {
                return Err(Error::invalid(format!(
                    "block {idx} is not orthonormal (deviation {err:.3e})"
                )));
            }
        }
        Ok(config)
    }

    pub fn from_blocks(field: Field, blocks: &[CMatrix]) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::invalid("no blocks supplied"))?;
        let (d, k) = first.shape();
        if blocks.iter().any(|b| b.shape() != (d, k)) {
            return Err(Error::invalid("blocks have inconsistent shapes"));
        }
        let mut frames = CMatrix::zeros(d, k * blocks.len());
        for (i, b) in blocks.iter().enumerate() {
            frames.columns_mut(i * k, k).copy_from(b);
        }
        Configuration::new(field, k, frames)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Ambient dimension.
    pub fn d(&self) -> usize {
        self.frames.nrows()
    }

    /// Subspace dimension.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of subspaces.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frames(&self) -> &CMatrix {
        &self.frames
    }

    pub fn block(&self, idx: usize) -> CMatrix {
        self.frames.columns(idx * self.k, self.k).clone_owned()
    }
}

/// KN×KN Hermitian matrix viewed as an N×N grid of K×K blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    field: Field,
    k: usize,
    n: usize,
    matrix: CMatrix,
}

impl GramMatrix {
    /// Symmetrizes `matrix` and checks the block structure.
    pub fn new(field: Field, k: usize, mut matrix: CMatrix) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::invalid(format!("Gram matrix must be square, got {rows}x{cols}")));
        }
        if k == 0 || rows % k != 0 {
            return Err(Error::invalid(format!("size {rows} is not a multiple of K={k}")));
        }
        linalg::ensure_finite(&matrix)?;
        linalg::symmetrize_in_place(&mut matrix);
        let mut g = GramMatrix {
            field,
            k,
            n: rows / k,
            matrix,
        };
        g.enforce_field();
        Ok(g)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total size KN.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn block(&self, m: usize, n: usize) -> CMatrix {
        let k = self.k;
        self.matrix.view((m * k, n * k), (k, k)).clone_owned()
    }

    /// Writes block (m, n) and its conjugate mirror (n, m).
    pub fn set_block(&mut self, m: usize, n: usize, block: &CMatrix) {
        let k = self.k;
        self.matrix.view_mut((m * k, n * k), (k, k)).copy_from(block);
        if m != n {
            self.matrix
                .view_mut((n * k, m * k), (k, k))
                .copy_from(&block.adjoint());
        }
    }

    /// Real field: drop imaginary parts accumulated through complex arithmetic.
    pub(crate) fn enforce_field(&mut self) {
        if self.field == Field::Real {
            self.matrix.iter_mut().for_each(|z| z.im = 0.0);
        }
    }

    /// Largest Frobenius deviation of a diagonal block from I_K.
    pub fn diagonal_deviation(&self) -> f64 {
        let eye = CMatrix::identity(self.k, self.k);
        (0..self.n)
            .map(|i| linalg::frobenius_norm(&(self.block(i, i) - &eye)))
            .fold(0.0, f64::max)
    }
}

/// K principal angles in [0, π/2], nondecreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalAngles(Vec<f64>);

impl PrincipalAngles {
    pub fn angles(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn principal_angles(s: &CMatrix, t: &CMatrix) -> Result<PrincipalAngles> {
    let (cosines, sines) = cosines_and_sines(s, t)?;
    let mut angles: Vec<f64> = cosines
        .iter()
        .zip(&sines)
        .map(|(c, s)| s.atan2(*c).clamp(0.0, std::f64::consts::FRAC_PI_2))
        .collect();
    angles.sort_by(f64::total_cmp);
    Ok(PrincipalAngles(angles))
}

/// Cosines (nonincreasing) and sines (nondecreasing) of the principal
/// angles, paired by index. The sines come from the component of `t`
/// orthogonal to `s`, which keeps small angles accurate.
fn cosines_and_sines(s: &CMatrix, t: &CMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    if s.shape() != t.shape() {
        return Err(Error::invalid(format!(
            "frames differ in shape: {:?} vs {:?}",
            s.shape(),
            t.shape()
        )));
    }
    let inner = s.adjoint() * t;
    let cosines = linalg::singular_values(&inner)?;
    let residual = t - s * &inner;
    let mut sines = linalg::singular_values(&residual)?;
    sines.reverse();
    Ok((cosines, sines))
}

/// Distance between two subspaces given the cosines of their principal angles.
fn distance_from_cosines(cosines: &[f64], metric: Metric) -> Result<f64> {
    let c: Vec<f64> = cosines.iter().map(|c| c.clamp(0.0, 1.0)).collect();
    match metric {
        Metric::Chordal => Ok(c.iter().map(|c| 1.0 - c * c).sum::<f64>().max(0.0).sqrt()),
        Metric::Spectral => {
            let largest = c.iter().copied().fold(0.0, f64::max);
            Ok((1.0 - largest * largest).max(0.0).sqrt())
        }
        Metric::FubiniStudy => Ok(c.iter().product::<f64>().clamp(0.0, 1.0).acos()),
        Metric::Geodesic => Ok(c.iter().map(|c| c.acos().powi(2)).sum::<f64>().sqrt()),
        Metric::Sphere => Err(Error::invalid(
            "the sphere metric compares points by signed inner product, not subspace distance",
        )),
    }
}

/// Distance from an off-diagonal Gram block `X_m* X_n`.
pub fn block_distance(block: &CMatrix, metric: Metric) -> Result<f64> {
    distance_from_cosines(&linalg::singular_values(block)?, metric)
}

pub fn dist(s: &CMatrix, t: &CMatrix, metric: Metric) -> Result<f64> {
    if metric == Metric::Sphere {
        return distance_from_cosines(&[], metric);
    }
    let (cosines, sines) = cosines_and_sines(s, t)?;
    let sines: Vec<f64> = sines.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    Ok(match metric {
        Metric::Chordal => sines.iter().map(|v| v * v).sum::<f64>().sqrt(),
        Metric::Spectral => sines.iter().copied().fold(1.0, f64::min),
        Metric::FubiniStudy => {
            // 1 − Π cos² = −expm1(Σ ln(1 − sin²)), accurate near zero.
            let log_prod: f64 = sines.iter().map(|v| (-v * v).ln_1p()).sum();
            let sin_fs = (-log_prod.exp_m1()).clamp(0.0, 1.0).sqrt();
            let cos_fs = cosines.iter().map(|c| c.clamp(0.0, 1.0)).product::<f64>();
            sin_fs.atan2(cos_fs)
        }
        Metric::Geodesic => cosines
            .iter()
            .zip(&sines)
            .map(|(c, v)| v.atan2(c.clamp(0.0, 1.0)).powi(2))
            .sum::<f64>()
            .sqrt(),
        Metric::Sphere => unreachable!(),
    })
}

/// Minimum pairwise distance of the configuration.
pub fn packing_diameter(config: &Configuration, metric: Metric) -> Result<f64> {
    if config.n() < 2 {
        return Err(Error::invalid("packing diameter needs at least two subspaces"));
    }
    if metric == Metric::Sphere {
        return Err(Error::invalid(
            "use sphere_diameter for point configurations on the sphere",
        ));
    }
    let g = gram(config);
    let mut best = f64::INFINITY;
    for m in 0..g.n() {
        for n in (m + 1)..g.n() {
            best = best.min(block_distance(&g.block(m, n), metric)?);
        }
    }
    Ok(best)
}

/// Smallest angle (radians) between points of a K = 1 real configuration.
pub fn sphere_diameter(config: &Configuration) -> Result<f64> {
    if config.k() != 1 {
        return Err(Error::invalid("sphere configurations have K = 1"));
    }
    let g = gram(config);
    let largest = max_block_magnitude(&g, Metric::Sphere)?;
    Ok(largest.clamp(-1.0, 1.0).acos())
}

/// Packing diameter in the metric's natural unit: radians for the sphere,
/// the metric value otherwise.
pub fn diameter(config: &Configuration, metric: Metric) -> Result<f64> {
    match metric {
        Metric::Sphere => sphere_diameter(config),
        _ => packing_diameter(config, metric),
    }
}

pub fn gram(config: &Configuration) -> GramMatrix {
    let x = config.frames();
    let mut m = x.adjoint() * x;
    linalg::symmetrize_in_place(&mut m);
    let mut g = GramMatrix {
        field: config.field(),
        k: config.k(),
        n: config.n(),
        matrix: m,
    };
    g.enforce_field();
    g
}

/// Magnitude of an off-diagonal block under the metric's feasibility test.
pub fn block_magnitude(block: &CMatrix, metric: Metric) -> Result<f64> {
    match metric {
        Metric::Chordal => Ok(linalg::frobenius_norm(block)),
        Metric::Spectral => linalg::spectral_norm(block),
        Metric::FubiniStudy => Ok(linalg::singular_values(block)?.iter().product()),
        Metric::Sphere => {
            if block.shape() != (1, 1) {
                return Err(Error::invalid("sphere blocks are 1x1"));
            }
            Ok(block[(0, 0)].re)
        }
        Metric::Geodesic => Err(Error::invalid(
            "the geodesic metric has no block magnitude test",
        )),
    }
}

/// Largest off-diagonal block magnitude; signed maximum for the sphere.
pub fn max_block_magnitude(g: &GramMatrix, metric: Metric) -> Result<f64> {
    if metric == Metric::Sphere && g.k() != 1 {
        return Err(Error::invalid("sphere metric requires K = 1"));
    }
    let mut best = f64::NEG_INFINITY;
    for m in 0..g.n() {
        for n in (m + 1)..g.n() {
            best = best.max(block_magnitude(&g.block(m, n), metric)?);
        }
    }
    if best == f64::NEG_INFINITY {
        best = 0.0;
    }
    Ok(best)
}

/// Rotates each row to make its largest entry real and drops imaginary parts.
/// Rows of `Λ^{1/2} U*` from a real symmetric matrix are real up to a phase.
fn realify_rows(x: &mut CMatrix) {
    for mut row in x.row_iter_mut() {
        let pivot = row
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(Complex64::new(0.0, 0.0));
        let mag = pivot.norm();
        if mag > 0.0 {
            let phase = pivot.conj() / mag;
            row.iter_mut().for_each(|z| *z *= phase);
        }
        row.iter_mut().for_each(|z| z.im = 0.0);
    }
}

pub const FACTOR_PSD_TOL: f64 = 1e-8;
pub const FACTOR_RANK_TOL: f64 = 1e-6;
pub const FACTOR_DIAG_TOL: f64 = 1e-6;

/// Recovers a d-dimensional configuration with Gram matrix ≈ `g` from its
/// top-d eigenpairs.
pub fn factor(g: &GramMatrix, d: usize) -> Result<Configuration> {
    let k = g.k();
    if d < k {
        return Err(Error::invalid(format!("ambient dimension {d} below K={k}")));
    }
    let eig = linalg::hermitian_eig(g.matrix())?;
    let lambda = &eig.eigenvalues;
    let size = lambda.len();
    let top = lambda[0];
    let bottom = lambda[size - 1];
    if bottom < -FACTOR_PSD_TOL * top.abs().max(linalg::ABS_FLOOR) {
        return Err(Error::NotPsd {
            min_eig: bottom,
            max_eig: top,
        });
    }
    if size > d && lambda[d] > FACTOR_RANK_TOL * top.max(linalg::ABS_FLOOR) {
        return Err(Error::RankExceeded {
            d,
            next: lambda[d],
            leading: top,
        });
    }
    let dev = g.diagonal_deviation();
    if dev > FACTOR_DIAG_TOL {
        return Err(Error::invalid(format!(
            "diagonal blocks deviate from identity by {dev:.3e}"
        )));
    }

    let used = d.min(size);
    let mut x = CMatrix::zeros(d, size);
    for j in 0..used {
        let scale = lambda[j].max(0.0).sqrt();
        let u = eig.eigenvectors.column(j);
        for (c, z) in u.iter().enumerate() {
            x[(j, c)] = z.conj() * scale;
        }
    }
    if g.field() == Field::Real {
        realify_rows(&mut x);
    }
    let mut frames = CMatrix::zeros(d, size);
    for idx in 0..g.n() {
        let block = x.columns(idx * k, k).clone_owned();
        let q = linalg::qr_orthonormal(&block)?;
        frames.columns_mut(idx * k, k).copy_from(&q);
    }
    if g.field() == Field::Real {
        frames.iter_mut().for_each(|z| z.im = 0.0);
    }
    Configuration::new(g.field(), k, frames)
}
