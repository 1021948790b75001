//! Fixtures shared by the benchmarks.

use grasspack::geometry::gram;
use grasspack::init::{initial_configuration, InitParams};
use grasspack::projections::{project_structural, StructuralSetSpec};
use grasspack::{Field, GramMatrix, Metric};

/// Gram matrix of a random start for (d, K, N), as the solver would see it.
pub fn start_gram(d: usize, k: usize, n: usize, field: Field, seed: u64) -> GramMatrix {
    let params = InitParams::new((k as f64).sqrt(), seed);
    let config = initial_configuration(d, k, n, field, &params).expect("random start");
    gram(&config)
}

/// A point of the structural set, the input the spectral projection gets.
pub fn structural_point(d: usize, k: usize, n: usize, metric: Metric, mu: f64) -> GramMatrix {
    let g = start_gram(d, k, n, Field::Complex, 7);
    let spec = StructuralSetSpec::new(metric, mu, k, n).expect("structural spec");
    project_structural(&g, &spec).expect("structural projection")
}
