mod common;

use common::*;
use witent::spin::*;
use witent::states::{basis_state, thermal};
use witent::witness::evaluate;
use witent::{hs_inner, HermitianMatrix, SystemShape};

fn spec(n: usize, j: f64, b: f64, periodic: bool, beta: f64) -> ChainSpec {
    ChainSpec::new(n, j, b, periodic, beta).unwrap()
}

fn total_sz(n: usize) -> HermitianMatrix {
    let d = 1usize << n;
    let diag: Vec<f64> = (0..d)
        .map(|s| (0..n).map(|i| if (s >> i) & 1 == 0 { 1.0 } else { -1.0 }).sum())
        .collect();
    HermitianMatrix::diagonal(&diag)
}

#[test]
fn hamiltonian_examples() {
    let h = xxx_hamiltonian(&spec(2, 1.0, 0.0, false, 1.0)).unwrap();
    let vals = h.eigenvalues().unwrap();
    for (v, w) in vals.iter().zip([1.0, 1.0, 1.0, -3.0]) {
        assert_close(*v, w, 1e-12);
    }
    // Field term commutes with total σ^z.
    for n in 2..=5 {
        let h = xxx_hamiltonian(&spec(n, 0.7, 0.3, true, 1.0)).unwrap();
        let sz = total_sz(n);
        let comm = h
            .as_cmatrix()
            .mul(sz.as_cmatrix())
            .sub(&sz.as_cmatrix().mul(h.as_cmatrix()));
        assert!(comm.frobenius_norm() < 1e-12);
    }
    // Global spin flip symmetry at B = 0.
    let h = xxx_hamiltonian(&spec(3, 1.0, 0.0, true, 1.0)).unwrap();
    let d = 8;
    for i in 0..d {
        for j in 0..d {
            assert_eq!(h.get(i, j), h.get(d - 1 - i, d - 1 - j));
        }
    }
    // Two-site periodic is treated as open.
    let open = xxx_hamiltonian(&spec(2, 1.0, 0.0, false, 1.0)).unwrap();
    let per = xxx_hamiltonian(&spec(2, 1.0, 0.0, true, 1.0)).unwrap();
    assert_eq!(open, per);
    assert!(ChainSpec::new(9, 1.0, 0.0, true, 1.0).is_err());
    assert!(ChainSpec::new(1, 1.0, 0.0, true, 1.0).is_err());
}

#[test]
fn witness_examples() {
    for n in 2..=8 {
        for periodic in [false, true] {
            let w = toth_witness(n, periodic).unwrap();
            assert!(w.op.max_eigenvalue().unwrap() <= 1.0 + 1e-10);
            assert_close(w.op.trace() / (1u64 << n) as f64, 0.5, 1e-12);
            // Nonnegative on product basis states.
            let zeros = basis_state(&SystemShape::new(vec![2; n]).unwrap(), &vec![0; n]).unwrap();
            assert!(evaluate(&w, &zeros.density()).unwrap() >= 0.0);
        }
    }
    // Two-site singlet: (2 + ⟨σ⃗·σ⃗⟩)/4 = (2 − 3)/4.
    let singlet = witent::PureState::normalized(
        vec![c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
        SystemShape::bipartite(2, 2),
    )
    .unwrap();
    assert_close(
        evaluate(&toth_witness(2, false).unwrap(), &singlet.density()).unwrap(),
        -0.25,
        1e-14,
    );
}

#[test]
fn thermal_witness_examples() {
    assert_eq!(rg_witness_lower_thermal(&spec(4, 1.0, 0.0, true, 0.0)).unwrap(), 0.0);
    let v = rg_witness_lower_thermal(&spec(4, 1.0, 0.0, true, 20.0)).unwrap();
    assert!(v > 0.1, "{v}");
    assert_close(v, 0.5, 1e-8);
    assert_eq!(rg_witness_lower_thermal(&spec(4, -1.0, 0.0, true, 50.0)).unwrap(), 0.0);
    // Two sites at low temperature: below R_G(singlet) = 1.
    let v2 = rg_witness_lower_thermal(&spec(2, 1.0, 0.0, false, 40.0)).unwrap();
    assert_close(v2, 0.25, 1e-10);
    assert!(v2 <= 1.0);
}

#[test]
fn dense_and_eigenbasis_routes_agree() {
    for n in [3, 5] {
        let s = spec(n, 1.3, 0.4, true, 0.7);
        let chain = Chain::new(&s).unwrap();
        let h = xxx_hamiltonian(&s).unwrap();
        let rho = thermal(&h, s.beta).unwrap();
        let obs = chain.observables(s.beta).unwrap();
        assert_close(obs.u, hs_inner(&h, rho.as_herm()).unwrap(), 1e-10);
        assert_close(obs.m, hs_inner(&total_sz(n), rho.as_herm()).unwrap(), 1e-10);
        let w = toth_witness(n, true).unwrap();
        assert_close(chain.witness_value(s.beta).unwrap(), evaluate(&w, &rho).unwrap(), 1e-12);
    }
}

#[test]
fn zero_field_identity() {
    for n in [2, 3, 4, 6, 8] {
        let chain = Chain::new(&spec(n, 1.0, 0.0, true, 1.0)).unwrap();
        for k in 0..=40 {
            let beta = k as f64 * 0.5;
            let est = chain.thermo_estimate(beta).unwrap();
            let w = chain.witness_value(beta).unwrap();
            assert_close(est.estimate, -w, 1e-12);
            assert_close(est.opposite_sign_form, -est.estimate - 1.0, 1e-12);
        }
    }
    let est = thermo_estimate(&spec(4, 1.0, 0.0, true, 0.0)).unwrap();
    assert_close(est.estimate, -0.5, 1e-14);
    assert!(thermo_estimate(&spec(4, 0.0, 0.0, true, 1.0)).is_err());
}

#[test]
fn small_field_estimate() {
    for n in [4, 6] {
        let s = spec(n, 1.0, 0.01, true, 30.0);
        let est = thermo_estimate(&s).unwrap();
        let w = Chain::new(&s).unwrap().witness_value(s.beta).unwrap();
        assert!((est.estimate + w).abs() <= 0.02);
    }
}

#[test]
fn susceptibility_examples() {
    for n in [2, 4, 6] {
        let beta = 1e-4;
        let chi = susceptibility(&spec(n, 1.0, 0.0, true, beta)).unwrap();
        assert_close(chi.chi_exact / (n as f64 * beta), 1.0, 1e-3);
    }
    let chi = susceptibility(&spec(2, 1.0, 0.0, false, 40.0)).unwrap();
    assert!(chi.chi_exact.abs() < 1e-10);
    for n in [4, 6] {
        let beta = 5.0;
        let chi = susceptibility(&spec(n, 1.0, 0.0, true, beta)).unwrap();
        assert!(chi.chi_witness_form < n as f64 * beta);
    }
    assert!(susceptibility(&spec(4, 1.0, 0.0, true, 0.0)).is_err());
    assert!(susceptibility(&spec(4, 1.0, 0.1, true, 1.0)).is_err());
}

#[test]
fn antiferromagnetic_witness_value_cools_monotonically() {
    for n in [4, 6] {
        let chain = Chain::new(&spec(n, 1.0, 0.0, true, 1.0)).unwrap();
        let mut prev = 0.0;
        for k in 0..=40 {
            let beta = k as f64 * 0.5;
            let v = (-chain.witness_value(beta).unwrap()).max(0.0);
            assert!(v >= prev - 1e-12, "N={n} beta={beta}");
            prev = v;
        }
    }
}
