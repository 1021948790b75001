//! Invariants checked against independent oracles: random feasible points,
//! a golden-section search for the Fubini-Study block problem, and direct
//! eigenvalue checks.

use grasspack::geometry::{self, Configuration};
use grasspack::init::{self, InitParams};
use grasspack::linalg::{self, CMatrix};
use grasspack::projections::{self, SpectralSetSpec, StructuralSetSpec};
use grasspack::solver::{self, SolveParams};
use grasspack::{Complex64, Field, GramMatrix, Metric};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{outcome, Outcome};

fn rng(stream: u64) -> ChaCha8Rng {
    init::trial_rng(0x5eed, stream)
}

fn field_of(rng: &mut ChaCha8Rng) -> Field {
    if rng.random_bool(0.5) {
        Field::Real
    } else {
        Field::Complex
    }
}

fn gaussian(rng: &mut ChaCha8Rng, field: Field) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    match field {
        Field::Real => Complex64::new(re, 0.0),
        Field::Complex => Complex64::new(re, rng.sample(StandardNormal)),
    }
}

fn random_hermitian(rng: &mut ChaCha8Rng, field: Field, dim: usize, scale: f64) -> CMatrix {
    let a = CMatrix::from_fn(dim, dim, |_, _| gaussian(rng, field) * scale);
    linalg::hermitian_part(&a)
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok && failures.len() < 20 {
        failures.push(what());
    }
}

/// 100 solves, 25 per metric, all with nonincreasing gap.
fn monotone_gap(failures: &mut Vec<String>) -> usize {
    let metrics = [Metric::Chordal, Metric::Spectral, Metric::FubiniStudy, Metric::Sphere];
    let mut count = 0;
    for (i, &metric) in metrics.iter().cycle().take(100).enumerate() {
        let mut r = rng(1000 + i as u64);
        let (field, k) = match metric {
            Metric::Sphere => (Field::Real, 1),
            _ => (field_of(&mut r), r.random_range(1..=2)),
        };
        let d = r.random_range(k + 1..=4);
        let n = r.random_range(3..=7);
        let mu = match metric {
            Metric::Chordal => r.random_range(0.2..0.9) * (k as f64).sqrt(),
            Metric::Sphere => r.random_range(-0.4..0.6),
            _ => r.random_range(0.1..0.9),
        };
        let mut ip = InitParams::new(if metric == Metric::Sphere { 0.95 } else { (k as f64).sqrt() }, 0);
        if metric == Metric::Sphere {
            ip.test = init::SimilarityTest::SignedInnerProduct;
        }
        let start = match init::initial_configuration_with(d, k, n, field, &ip, &mut r) {
            Ok(c) => c,
            Err(e) => {
                check(failures, false, || format!("gap: init failed: {e}"));
                continue;
            }
        };
        let mut params = SolveParams::new(metric, mu, d, k, n);
        params.max_iterations = 300;
        match solver::alternate(&geometry::gram(&start), &params) {
            Ok(rep) => {
                let worst = rep
                    .gap_history
                    .windows(2)
                    .map(|w| w[1] - w[0])
                    .fold(f64::NEG_INFINITY, f64::max);
                check(failures, worst <= 1e-9, || {
                    format!("gap grew by {worst:e} ({metric}, d={d}, K={k}, N={n}, mu={mu})")
                });
                count += 1;
            }
            // Renormalization can legitimately fail on a degenerate output;
            // the gap sequence is still checked through the iterations run.
            Err(e) => check(failures, false, || format!("gap: solve failed ({metric}, d={d}, K={k}, N={n}): {e}")),
        }
    }
    count
}

/// Random point of the structural set: identity diagonal, random blocks
/// scaled into the feasible region.
fn feasible_candidate(rng: &mut ChaCha8Rng, field: Field, k: usize, n: usize, metric: Metric, mu: f64) -> GramMatrix {
    let mut m = CMatrix::identity(k * n, k * n);
    for a in 0..n {
        for b in (a + 1)..n {
            let block = match metric {
                Metric::Sphere => {
                    CMatrix::from_element(1, 1, Complex64::new(rng.random_range(-1.0..=mu), 0.0))
                }
                _ => {
                    let raw = CMatrix::from_fn(k, k, |_, _| gaussian(rng, field));
                    let size = match metric {
                        Metric::Chordal => linalg::frobenius_norm(&raw),
                        _ => linalg::spectral_norm(&raw).unwrap(),
                    };
                    raw * Complex64::new(rng.random_range(0.0..=1.0) * mu / size, 0.0)
                }
            };
            m.view_mut((a * k, b * k), (k, k)).copy_from(&block);
            m.view_mut((b * k, a * k), (k, k)).copy_from(&block.adjoint());
        }
    }
    GramMatrix::new(field, k, m).unwrap()
}

/// Moves `y` towards `p` blockwise while staying feasible: a convex
/// combination of two feasible points.
fn blend(p: &GramMatrix, y: &GramMatrix, t: f64) -> GramMatrix {
    let m = p.matrix() * Complex64::new(1.0 - t, 0.0) + y.matrix() * Complex64::new(t, 0.0);
    GramMatrix::new(p.field(), p.k(), m).unwrap()
}

fn nearest_point(failures: &mut Vec<String>) -> usize {
    let metrics = [Metric::Chordal, Metric::Spectral, Metric::Sphere];
    let mut inputs = 0;
    for i in 0..50u64 {
        let mut r = rng(2000 + i);
        let metric = metrics[i as usize % 3];
        let (field, k) = match metric {
            Metric::Sphere => (Field::Real, 1),
            _ => (field_of(&mut r), r.random_range(1..=3)),
        };
        let n = r.random_range(2..=5);
        let mu = match metric {
            Metric::Chordal => r.random_range(0.1..0.9) * (k as f64).sqrt(),
            Metric::Sphere => r.random_range(-0.5..0.8),
            _ => r.random_range(0.1..0.9),
        };
        let g = GramMatrix::new(field, k, random_hermitian(&mut r, field, k * n, 0.7)).unwrap();
        let spec = StructuralSetSpec::new(metric, mu, k, n).unwrap();
        let p = projections::project_structural(&g, &spec).unwrap();
        let dist_p = linalg::frobenius_norm(&(g.matrix() - p.matrix()));
        let mut worst = f64::NEG_INFINITY;
        for j in 0..1000 {
            let y = feasible_candidate(&mut r, field, k, n, metric, mu);
            // Half the candidates sit close to the projection.
            let y = if j % 2 == 0 { y } else { blend(&p, &y, r.random_range(1e-4..0.05)) };
            let dist_y = linalg::frobenius_norm(&(g.matrix() - y.matrix()));
            worst = worst.max(dist_p - dist_y);
        }
        check(failures, worst <= 1e-10, || {
            format!("nearest point beaten by {worst:e} ({metric}, K={k}, N={n}, mu={mu})")
        });
        inputs += 1;
    }
    inputs
}

/// Minimizes the Fubini-Study block objective on the active constraint
/// `x2 = log mu - x1` by a dense scan followed by golden-section refinement.
fn golden_section_fs(c: [f64; 2], mu: f64) -> f64 {
    if c[0] * c[1] <= mu {
        return 0.0;
    }
    let f = |x1: f64| projections::fs_objective(&[x1, mu.ln() - x1], &c);
    // Optimal y1 lies in [mu / c2, c1].
    let (lo, hi) = ((mu / c[1]).ln() - 1.0, c[0].ln() + 1.0);
    let steps = 4000;
    let h = (hi - lo) / steps as f64;
    let best = (0..=steps)
        .map(|i| lo + h * i as f64)
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap();
    let (mut a, mut b) = (best - h, best + h);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let x1 = b - phi * (b - a);
        let x2 = a + phi * (b - a);
        if f(x1) < f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    f(0.5 * (a + b)).min(f(best))
}

fn fs_oracle(failures: &mut Vec<String>) -> usize {
    let mut r = rng(3000);
    for _ in 0..100 {
        let mut c: [f64; 2] = [r.random_range(0.01..1.0), r.random_range(0.01..1.0)];
        c.sort_by(|a, b| b.total_cmp(a));
        let mu = r.random_range(0.01..1.0) * c[0] * c[1] * 1.5;
        let mu = mu.min(1.0);
        let sol = projections::solve_fs_block(&c, mu).unwrap();
        let ours = sol.objective(&c);
        let oracle = golden_section_fs(c, mu);
        let feasible = sol.x.iter().sum::<f64>() <= mu.ln() + 1e-9;
        check(failures, feasible && (ours - oracle).abs() <= 1e-6, || {
            format!("FS block c={c:?} mu={mu}: ours {ours:e}, oracle {oracle:e}, feasible {feasible}")
        });
    }
    100
}

fn spectral_checks(failures: &mut Vec<String>) -> usize {
    for i in 0..100u64 {
        let mut r = rng(4000 + i);
        let field = field_of(&mut r);
        let k = r.random_range(1..=3);
        let n = r.random_range(2..=6);
        let d = r.random_range(k..=k * n);
        let h = GramMatrix::new(field, k, random_hermitian(&mut r, field, k * n, 1.0)).unwrap();
        let spec = SpectralSetSpec::for_packing(d, k, n).unwrap();
        let g = projections::project_spectral(&h, &spec).unwrap();
        let eig = linalg::hermitian_eig(g.matrix()).unwrap();
        let lead = eig.eigenvalues[0];
        let trace: f64 = (0..k * n).map(|j| g.matrix()[(j, j)].re).sum();
        let beyond = eig.eigenvalues.get(d).copied().unwrap_or(0.0);
        let min = *eig.eigenvalues.last().unwrap();
        let target = (k * n) as f64;
        check(failures, (trace - target).abs() <= 1e-9 * target, || {
            format!("spectral trace {trace} vs {target}")
        });
        check(failures, beyond.abs() <= 1e-9 * lead, || format!("spectral rank: lambda_(d+1) = {beyond:e}"));
        check(failures, min >= -1e-9 * lead, || format!("spectral PSD: min eigenvalue {min:e}"));
    }
    100
}

fn random_config(r: &mut ChaCha8Rng) -> Configuration {
    let field = field_of(r);
    let k = r.random_range(1..=3);
    let d = r.random_range(k + 1..=6);
    let n = r.random_range(2..=6);
    let ip = InitParams::new((k as f64).sqrt(), 0);
    init::initial_configuration_with(d, k, n, field, &ip, r).unwrap()
}

fn round_trip(failures: &mut Vec<String>) -> usize {
    for i in 0..100u64 {
        let mut r = rng(5000 + i);
        let cfg = random_config(&mut r);
        let g = geometry::gram(&cfg);
        match geometry::factor(&g, cfg.d()) {
            Ok(back) => {
                let err = linalg::frobenius_norm(&(geometry::gram(&back).matrix() - g.matrix()));
                check(failures, err <= 1e-8, || format!("gram/factor round trip error {err:e}"));
            }
            Err(e) => check(failures, false, || format!("factor failed: {e}")),
        }
    }
    100
}

fn invariance(failures: &mut Vec<String>) -> usize {
    for i in 0..100u64 {
        let mut r = rng(6000 + i);
        let field = field_of(&mut r);
        let k = r.random_range(1..=3);
        let d = r.random_range(k + 1..=6);
        let s = init::random_subspace(d, k, field, &mut r).unwrap();
        let t = init::random_subspace(d, k, field, &mut r).unwrap();
        let u = init::random_subspace(d, d, field, &mut r).unwrap();
        for metric in Metric::SUBSPACE_METRICS {
            let before = geometry::dist(&s, &t, metric).unwrap();
            let after = geometry::dist(&(&u * &s), &(&u * &t), metric).unwrap();
            check(failures, (before - after).abs() <= 1e-10, || {
                format!("{metric} not unitarily invariant: {before} vs {after}")
            });
        }
        let chordal = geometry::dist(&s, &t, Metric::Chordal).unwrap();
        let spectral = geometry::dist(&s, &t, Metric::Spectral).unwrap();
        check(failures, spectral * spectral <= chordal * chordal / k as f64 + 1e-12, || {
            format!("power-mean chain: spectral {spectral}, chordal {chordal}, K={k}")
        });
    }
    100
}

pub fn run() -> Result<Outcome, String> {
    let mut failures = Vec::new();
    let parts = [
        ("monotone gap solves", monotone_gap(&mut failures)),
        ("nearest-point inputs", nearest_point(&mut failures)),
        ("FS oracle blocks", fs_oracle(&mut failures)),
        ("spectral projections", spectral_checks(&mut failures)),
        ("round trips", round_trip(&mut failures)),
        ("invariance pairs", invariance(&mut failures)),
    ];
    for (name, n) in parts {
        println!("    {name}: {n}");
    }
    for f in &failures {
        println!("    violation: {f}");
    }
    let complete = parts[0].1 == 100 && parts[1].1 == 50;
    Ok(outcome(
        failures.is_empty() && complete,
        format!("{} violations", failures.len()),
    ))
}
