//! Fixed inputs shared by the benchmarks.

use witent::states::random_density;
use witent::{DensityMatrix, HermitianMatrix, StateRng, SystemShape};

/// Hilbert–Schmidt random state of the given bipartite shape, seed fixed.
pub fn sample_state(da: usize, db: usize) -> DensityMatrix {
    random_density(&SystemShape::bipartite(da, db), &mut StateRng::new(42))
}

/// Random Hermitian matrix `(G + G†)/2` with Ginibre `G`.
pub fn sample_hermitian(n: usize) -> HermitianMatrix {
    let mut rng = StateRng::new(n as u64);
    let g = witent::CMatrix::from_fn(n, |_, _| rng.complex_gaussian());
    HermitianMatrix::new(g.add(&g.adjoint()).scale(witent::C64::new(0.5, 0.0))).expect("symmetrized")
}
