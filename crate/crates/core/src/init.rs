//! Random subspaces and rejection-sampled starting configurations.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{Configuration, Field};
use crate::linalg::{self, CMatrix};

pub const DEFAULT_MAX_DRAWS: usize = 10_000;

/// How a candidate is compared against subspaces already accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimilarityTest {
    /// `‖X_m* X_n‖_F ≤ τ`.
    #[default]
    Frobenius,
    /// `⟨x_m, x_n⟩ ≤ τ` for unit vectors (points on a sphere).
    SignedInnerProduct,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitParams {
    /// Similarity cap τ.
    pub tau: f64,
    /// Maximum number of random subspaces drawn.
    pub max_draws: usize,
    pub seed: u64,
    pub test: SimilarityTest,
}

impl InitParams {
    pub fn new(tau: f64, seed: u64) -> Self {
        InitParams {
            tau,
            max_draws: DEFAULT_MAX_DRAWS,
            seed,
            test: SimilarityTest::Frobenius,
        }
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        let upper = match self.test {
            SimilarityTest::Frobenius => (k as f64).sqrt(),
            SimilarityTest::SignedInnerProduct => 1.0,
        };
        if !(self.tau > 0.0 && self.tau <= upper * (1.0 + 1e-12)) {
            return Err(Error::invalid(format!("tau = {} outside (0, {upper}]", self.tau)));
        }
        if self.max_draws == 0 {
            return Err(Error::invalid("max_draws must be positive"));
        }
        Ok(())
    }
}

/// Independent generator for `trial` under a base seed.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn gaussian_matrix<R: Rng + ?Sized>(d: usize, k: usize, field: Field, rng: &mut R) -> CMatrix {
    match field {
        Field::Real => CMatrix::from_fn(d, k, |_, _| {
            Complex64::new(rng.sample::<f64, _>(StandardNormal), 0.0)
        }),
        Field::Complex => {
            let scale = std::f64::consts::FRAC_1_SQRT_2;
            CMatrix::from_fn(d, k, |_, _| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re * scale, im * scale)
            })
        }
    }
}

/// Orthonormal d×K frame spanning a uniformly distributed K-dimensional
/// subspace: QR of a Gaussian matrix.
pub fn random_subspace<R: Rng + ?Sized>(d: usize, k: usize, field: Field, rng: &mut R) -> Result<CMatrix> {
    if k == 0 || k > d {
        return Err(Error::invalid(format!("need 1 <= K <= d, got K={k}, d={d}")));
    }
    loop {
        let a = gaussian_matrix(d, k, field, rng);
        match linalg::qr_orthonormal(&a) {
            Ok(mut q) => {
                if field == Field::Real {
                    q.iter_mut().for_each(|z| z.im = 0.0);
                }
                return Ok(q);
            }
            Err(Error::RankDeficient { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
}

fn similarity(a: &CMatrix, b: &CMatrix, test: SimilarityTest) -> f64 {
    let inner = a.adjoint() * b;
    match test {
        SimilarityTest::Frobenius => linalg::frobenius_norm(&inner),
        SimilarityTest::SignedInnerProduct => inner[(0, 0)].re,
    }
}

/// Draws random subspaces, keeping each one whose similarity to every
/// subspace kept so far is at most τ, until N are kept or the draw budget
/// runs out.
pub fn initial_configuration(
    d: usize,
    k: usize,
    n: usize,
    field: Field,
    params: &InitParams,
) -> Result<Configuration> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    initial_configuration_with(d, k, n, field, params, &mut rng)
}

/// As [`initial_configuration`], drawing from a caller-supplied generator.
pub fn initial_configuration_with<R: Rng + ?Sized>(
    d: usize,
    k: usize,
    n: usize,
    field: Field,
    params: &InitParams,
    rng: &mut R,
) -> Result<Configuration> {
    params.validate(k)?;
    if n < 2 {
        return Err(Error::invalid(format!("need N >= 2, got {n}")));
    }
    if params.test == SimilarityTest::SignedInnerProduct && (k != 1 || field != Field::Real) {
        return Err(Error::invalid("signed inner products need real unit vectors (K = 1)"));
    }
    let cap = params.tau * (1.0 + 1e-12);
    let mut accepted: Vec<CMatrix> = Vec::with_capacity(n);
    let mut draws = 0;
    while accepted.len() < n {
        if draws >= params.max_draws {
            return Err(Error::InitFailure {
                accepted: accepted.len(),
                wanted: n,
                draws,
            });
        }
        draws += 1;
        let candidate = random_subspace(d, k, field, rng)?;
        if accepted
            .iter()
            .all(|x| similarity(x, &candidate, params.test) <= cap)
        {
            accepted.push(candidate);
        }
    }
    Configuration::from_blocks(field, &accepted)
}
