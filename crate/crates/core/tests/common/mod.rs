#![allow(dead_code)]

use witent::states::{random_density, random_pure};
use witent::{CMatrix, DensityMatrix, HermitianMatrix, PureState, StateRng, SystemShape, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_herm(n: usize, rng: &mut StateRng) -> HermitianMatrix {
    let g = CMatrix::from_fn(n, |_, _| rng.complex_gaussian());
    HermitianMatrix::new(g.add(&g.adjoint()).scale(c(0.5, 0.0))).unwrap()
}

pub fn random_herm_shaped(shape: &SystemShape, rng: &mut StateRng) -> HermitianMatrix {
    random_herm(shape.total_dim(), rng).with_shape(shape.clone()).unwrap()
}

pub fn rho(shape: &SystemShape, rng: &mut StateRng) -> DensityMatrix {
    random_density(shape, rng)
}

pub fn pure(shape: &SystemShape, rng: &mut StateRng) -> PureState {
    random_pure(shape, rng)
}

/// Swap operator on `d ⊗ d`.
pub fn swap(d: usize) -> HermitianMatrix {
    HermitianMatrix::from_fn(d * d, |r, s| {
        let (i, j) = (r / d, r % d);
        if s == j * d + i {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
    .unwrap()
    .with_shape(SystemShape::bipartite(d, d))
    .unwrap()
}

pub fn pauli(k: usize) -> HermitianMatrix {
    let z = c(0.0, 0.0);
    let entries = match k {
        0 => [c(1.0, 0.0), z, z, c(1.0, 0.0)],
        1 => [z, c(1.0, 0.0), c(1.0, 0.0), z],
        2 => [z, c(0.0, -1.0), c(0.0, 1.0), z],
        _ => [c(1.0, 0.0), z, z, c(-1.0, 0.0)],
    };
    HermitianMatrix::new(CMatrix::from_vec(2, entries.to_vec()).unwrap()).unwrap()
}

pub fn shaped(m: HermitianMatrix, dims: &[usize]) -> HermitianMatrix {
    m.with_shape(SystemShape::new(dims.to_vec()).unwrap()).unwrap()
}

/// `Σ|λ|` over eigenvalues below zero.
pub fn negative_mass(m: &HermitianMatrix) -> f64 {
    m.eigenvalues().unwrap().iter().filter(|&&l| l < 0.0).map(|l| -l).sum()
}

pub fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}
