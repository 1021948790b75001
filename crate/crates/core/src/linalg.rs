//! Dense linear-algebra primitives with explicit numerical contracts.
//!
//! Everything works over `Complex64`; real problems carry zero imaginary parts
//! and go through the same code path. Factorizations are thin wrappers around
//! `nalgebra` that add input checks, symmetrization and a fixed ordering of the
//! spectrum, which `nalgebra` does not guarantee. Hermitian matrices with no
//! imaginary part are diagonalized in real arithmetic, so their eigenvectors
//! are real even inside degenerate subspaces. The SVD is a one-sided Jacobi
//! iteration, which keeps real inputs real as well.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Absolute floor applied to every relative tolerance.
pub const ABS_FLOOR: f64 = 1e-14;

/// Eigendecomposition of a Hermitian matrix, eigenvalues nonincreasing.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    /// Column `j` pairs with `eigenvalues[j]`.
    pub eigenvectors: CMatrix,
}

impl HermitianEig {
    /// Rebuilds `U diag(λ) U*`.
    pub fn reconstruct(&self) -> CMatrix {
        rebuild_hermitian(&self.eigenvectors, &self.eigenvalues, self.eigenvalues.len())
    }
}

/// Thin singular value decomposition `A = left · diag(singulars) · right*`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub left: CMatrix,
    pub singulars: Vec<f64>,
    pub right: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        with_singulars(self, &self.singulars)
    }
}

/// `left · diag(values) · right*` for replacement singular values.
pub fn with_singulars(svd: &Svd, values: &[f64]) -> CMatrix {
    let mut scaled = svd.left.clone();
    for (j, &s) in values.iter().enumerate() {
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= s);
    }
    scaled * svd.right.adjoint()
}

/// `Σ_{j<count} λ_j u_j u_j*` from the leading `count` columns.
pub fn rebuild_hermitian(vectors: &CMatrix, values: &[f64], count: usize) -> CMatrix {
    let n = vectors.nrows();
    let cols = vectors.columns(0, count);
    let mut scaled = cols.clone_owned();
    for j in 0..count {
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= values[j]);
    }
    let mut out = scaled * cols.adjoint();
    debug_assert_eq!(out.nrows(), n);
    symmetrize_in_place(&mut out);
    out
}

pub fn ensure_finite(a: &CMatrix) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::invalid("matrix contains non-finite entries"))
    }
}

pub fn frobenius_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Replaces `a` by `(a + a*)/2`.
pub fn symmetrize_in_place(a: &mut CMatrix) {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
}

fn real_view(a: &CMatrix) -> Option<DMatrix<f64>> {
    a.iter().all(|z| z.im == 0.0).then(|| a.map(|z| z.re))
}

fn complexify(a: &DMatrix<f64>) -> CMatrix {
    a.map(|x| Complex64::new(x, 0.0))
}

pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    let mut h = a.clone();
    symmetrize_in_place(&mut h);
    h
}

/// Eigendecomposition of the Hermitian part of `a`, eigenvalues sorted
/// nonincreasing.
pub fn hermitian_eig(a: &CMatrix) -> Result<HermitianEig> {
    if a.nrows() != a.ncols() {
        return Err(Error::invalid(format!(
            "hermitian_eig needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    ensure_finite(a)?;
    let h = hermitian_part(a);
    let (values, vectors) = match real_view(&h) {
        Some(r) => {
            let eig = SymmetricEigen::new(r);
            (eig.eigenvalues, complexify(&eig.eigenvectors))
        }
        None => {
            let eig = SymmetricEigen::new(h);
            (eig.eigenvalues, eig.eigenvectors)
        }
    };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let eigenvalues = order.iter().map(|&i| values[i]).collect();
    let eigenvectors = vectors.select_columns(order.iter());
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Thin SVD with singular values sorted nonincreasing.
///
/// One-sided Jacobi on the columns (of `a` or of `a^*` when `a` is wide).
/// nalgebra's bidiagonal SVD can return factors that do not reconstruct
/// nearly rank-deficient 2x2 inputs, and block projections depend on them.
pub fn svd(a: &CMatrix) -> Result<Svd> {
    ensure_finite(a)?;
    if a.nrows() < a.ncols() {
        let t = svd(&a.adjoint())?;
        return Ok(Svd {
            left: t.right,
            singulars: t.singulars,
            right: t.left,
        });
    }
    let (mut w, mut v) = jacobi_columns(a)?;
    let n = a.ncols();
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    w = w.select_columns(order.iter());
    v = v.select_columns(order.iter());
    let singulars: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let floor = singulars.first().copied().unwrap_or(0.0) * f64::EPSILON * (n as f64);
    let mut rank = 0;
    for (j, &sj) in singulars.iter().enumerate() {
        if sj > floor && sj > 0.0 {
            let scaled = w.column(j) / Complex64::new(sj, 0.0);
            w.set_column(j, &scaled);
            rank = j + 1;
        }
    }
    complete_columns(&mut w, rank);
    Ok(Svd {
        left: w,
        singulars,
        right: v,
    })
}

/// Rotates column pairs of `a` until they are mutually orthogonal. Returns the
/// rotated columns `W = a V` and the unitary `V`.
fn jacobi_columns(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    const MAX_SWEEPS: usize = 80;
    let n = a.ncols();
    let mut w = a.clone();
    let mut v = CMatrix::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s, phase);
                rotate_pair(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            return Ok((w, v));
        }
    }
    Err(Error::NumericalFailure("Jacobi SVD did not converge".into()))
}

fn rotate_pair(m: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let back = phase.conj();
    for i in 0..m.nrows() {
        let x = m[(i, p)];
        let y = m[(i, q)] * back;
        m[(i, p)] = x * c - y * s;
        m[(i, q)] = x * s + y * c;
    }
}

/// Replaces columns `rank..` of `w` with unit vectors orthogonal to all
/// earlier columns.
fn complete_columns(w: &mut CMatrix, rank: usize) {
    let (m, n) = w.shape();
    let mut next = 0;
    for j in rank..n {
        while next < m {
            let mut e = DVector::<Complex64>::zeros(m);
            e[next] = Complex64::new(1.0, 0.0);
            next += 1;
            for _ in 0..2 {
                for i in 0..j {
                    let proj = w.column(i).dotc(&e);
                    e -= w.column(i) * proj;
                }
            }
            let norm = e.norm();
            if norm > 0.5 {
                w.set_column(j, &(e / Complex64::new(norm, 0.0)));
                break;
            }
        }
    }
}

/// Singular values only, nonincreasing.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.singulars)
}

pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// Orthonormal basis (d×K) for the range of a full-column-rank `a`.
///
/// The triangular factor is normalized to a positive real diagonal, so an input
/// that already has orthonormal columns comes back unchanged up to roundoff.
pub fn qr_orthonormal(a: &CMatrix) -> Result<CMatrix> {
    let (d, k) = a.shape();
    if k == 0 || k > d {
        return Err(Error::invalid(format!(
            "qr_orthonormal needs 1 <= K <= d, got {d}x{k}"
        )));
    }
    let s = singular_values(a)?;
    let largest = s[0];
    let smallest = s[k - 1];
    let threshold = (1e-12 * largest).max(ABS_FLOOR);
    if smallest <= threshold {
        return Err(Error::RankDeficient {
            smallest,
            threshold,
        });
    }
    let qr = a.clone().qr();
    let r = qr.r();
    let mut q = qr.q().columns(0, k).clone_owned();
    for j in 0..k {
        let rjj = r[(j, j)];
        let mag = rjj.norm();
        if mag > 0.0 {
            let phase = rjj / mag;
            q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
    }
    Ok(q)
}
