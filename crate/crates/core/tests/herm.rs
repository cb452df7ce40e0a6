mod common;

use common::*;
use proptest::prelude::*;
use witent::states::{isotropic, max_entangled};
use witent::{
    eig_hermitian, hs_inner, partial_trace, partial_transpose, tensor, trace_norm, CMatrix, Cut, HermitianMatrix,
    StateRng, SystemShape,
};

fn proj(dim: usize, k: usize) -> HermitianMatrix {
    let mut v = vec![c(0.0, 0.0); dim];
    v[k] = c(1.0, 0.0);
    HermitianMatrix::projector(&v)
}

#[test]
fn tensor_examples() {
    let i2 = HermitianMatrix::identity(2);
    assert_eq!(tensor(&i2, &i2).as_cmatrix(), HermitianMatrix::identity(4).as_cmatrix());
    let zz = tensor(&pauli(3), &pauli(3));
    assert_eq!(
        zz.as_cmatrix(),
        HermitianMatrix::diagonal(&[1.0, -1.0, -1.0, 1.0]).as_cmatrix()
    );
    let p = tensor(&proj(2, 0), &proj(2, 1));
    assert_eq!(p.as_cmatrix(), proj(4, 1).as_cmatrix());
    assert_eq!(p.shape().unwrap().local_dims(), &[2, 2]);
}

#[test]
fn partial_trace_examples() {
    let bell = max_entangled(2).unwrap();
    let red = partial_trace(bell.as_herm(), &Cut::single(0)).unwrap();
    assert!(red.max_abs_diff(&HermitianMatrix::identity(2).scale(0.5)) < 1e-15);

    let mut rng = StateRng::new(1);
    let a = rho(&SystemShape::new(vec![2]).unwrap(), &mut rng);
    let b = rho(&SystemShape::new(vec![3]).unwrap(), &mut rng);
    let ab = tensor(a.as_herm(), b.as_herm());
    assert!(partial_trace(&ab, &Cut::single(0)).unwrap().max_abs_diff(a.as_herm()) < 1e-14);
    assert!(partial_trace(&ab, &Cut::single(1)).unwrap().max_abs_diff(b.as_herm()) < 1e-14);

    for d in 2..=4 {
        let iso = isotropic(d, 0.37).unwrap();
        let red = partial_trace(iso.as_herm(), &Cut::single(0)).unwrap();
        assert!(red.max_abs_diff(&HermitianMatrix::identity(d).scale(1.0 / d as f64)) < 1e-14);
    }
}

#[test]
fn partial_trace_rejects_bad_cuts() {
    let bell = max_entangled(2).unwrap();
    assert!(partial_trace(bell.as_herm(), &Cut::single(2)).is_err());
    assert!(partial_trace(bell.as_herm(), &Cut::new([0, 1]).unwrap()).is_err());
    assert!(partial_trace(&HermitianMatrix::identity(4), &Cut::single(0)).is_err());
}

#[test]
fn partial_transpose_examples() {
    let mut rng = StateRng::new(2);
    let a = random_herm(2, &mut rng);
    let b = random_herm(3, &mut rng);
    let ab = tensor(&a, &b);
    let at = HermitianMatrix::from_fn(2, |i, j| a.get(j, i)).unwrap();
    assert!(
        partial_transpose(&ab, &Cut::single(0))
            .unwrap()
            .max_abs_diff(&tensor(&at, &b))
            < 1e-15
    );

    for d in 2..=4 {
        let pt = max_entangled(d).unwrap().partial_transpose(&Cut::single(0)).unwrap();
        assert!(pt.max_abs_diff(&swap(d).scale(1.0 / d as f64)) < 1e-15);
    }

    let m = random_herm_shaped(&SystemShape::new(vec![2, 3, 2]).unwrap(), &mut rng);
    let cut = Cut::new([0, 2]).unwrap();
    let back = partial_transpose(&partial_transpose(&m, &cut).unwrap(), &cut).unwrap();
    assert_eq!(back.as_cmatrix(), m.as_cmatrix());
}

#[test]
fn eig_examples() {
    let e = eig_hermitian(&HermitianMatrix::diagonal(&[3.0, 1.0, 2.0])).unwrap();
    assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
    let e = eig_hermitian(&pauli(1)).unwrap();
    assert_close(e.values[0], 1.0, 1e-14);
    assert_close(e.values[1], -1.0, 1e-14);
    let pt = max_entangled(2).unwrap().partial_transpose(&Cut::single(0)).unwrap();
    let vals = pt.eigenvalues().unwrap();
    for (v, w) in vals.iter().zip([0.5, 0.5, 0.5, -0.5]) {
        assert_close(*v, w, 1e-14);
    }
}

fn check_decomposition(m: &HermitianMatrix) {
    let e = eig_hermitian(m).unwrap();
    let n = m.dim();
    let v = &e.vectors;
    let lam = CMatrix::from_fn(n, |i, j| if i == j { c(e.values[i], 0.0) } else { c(0.0, 0.0) });
    let recon = v.mul(&lam).mul(&v.adjoint());
    let resid = recon.sub(m.as_cmatrix()).frobenius_norm();
    assert!(
        resid <= 1e-10 * m.frobenius_norm().max(1e-300),
        "dim {n}: residual {resid}"
    );
    let ortho = v.adjoint().mul(v).sub(&CMatrix::identity(n)).frobenius_norm();
    assert!(ortho <= 1e-10, "dim {n}: orthonormality {ortho}");
    assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn eig_on_many_random_matrices() {
    let mut rng = StateRng::new(1000);
    for k in 0..1000 {
        let n = 1 + k % 36;
        check_decomposition(&random_herm(n, &mut rng));
    }
}

#[test]
fn eig_on_degenerate_and_real_matrices() {
    let mut rng = StateRng::new(4);
    for d in 2..=5 {
        check_decomposition(&swap(d));
        check_decomposition(&max_entangled(d).unwrap().partial_transpose(&Cut::single(0)).unwrap());
    }
    for n in [1, 5, 17, 36] {
        let g: Vec<f64> = (0..n * n).map(|_| rng.gaussian()).collect();
        let sym: Vec<f64> = (0..n * n).map(|k| (g[k] + g[(k % n) * n + k / n]) / 2.0).collect();
        check_decomposition(&HermitianMatrix::from_real(n, &sym).unwrap());
    }
    check_decomposition(&HermitianMatrix::identity(6));
}

#[test]
fn trace_norm_examples() {
    let mut rng = StateRng::new(6);
    let r = rho(&SystemShape::bipartite(2, 3), &mut rng);
    assert_close(trace_norm(r.as_herm()).unwrap(), 1.0, 1e-12);
    let pt = max_entangled(2).unwrap().partial_transpose(&Cut::single(0)).unwrap();
    assert_close(trace_norm(&pt).unwrap(), 2.0, 1e-12);
    assert_eq!(trace_norm(&HermitianMatrix::zeros(3)).unwrap(), 0.0);
}

#[test]
fn hs_inner_examples() {
    let mut rng = StateRng::new(8);
    let r = rho(&SystemShape::bipartite(2, 2), &mut rng);
    assert_close(
        hs_inner(&HermitianMatrix::identity(4), r.as_herm()).unwrap(),
        1.0,
        1e-14,
    );
    let p = max_entangled(3).unwrap();
    assert_close(hs_inner(p.as_herm(), p.as_herm()).unwrap(), 1.0, 1e-14);
    assert_eq!(hs_inner(&pauli(1), &pauli(2)).unwrap(), 0.0);
    assert!(hs_inner(&pauli(1), &HermitianMatrix::identity(3)).is_err());
}

#[test]
fn hermiticity_is_enforced() {
    let bad = CMatrix::from_vec(2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert!(HermitianMatrix::new(bad).is_err());
    let slight = CMatrix::from_vec(2, vec![c(1.0, 0.0), c(1.0, 1e-11), c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
    let h = HermitianMatrix::new(slight).unwrap();
    assert_eq!(h.get(0, 1), h.get(1, 0).conj());
}

fn arb_shape() -> impl Strategy<Value = SystemShape> {
    prop::collection::vec(1usize..=3, 2..=3).prop_map(|d| SystemShape::new(d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_transpose_is_involutive(shape in arb_shape(), seed in any::<u64>(), pick in 0usize..3) {
        let mut rng = StateRng::new(seed);
        let m = random_herm_shaped(&shape, &mut rng);
        let cut = Cut::single(pick % shape.parties());
        let pt = partial_transpose(&m, &cut).unwrap();
        let back = partial_transpose(&pt, &cut).unwrap();
        prop_assert_eq!(back.as_cmatrix(), m.as_cmatrix());
        prop_assert!((pt.trace() - m.trace()).abs() < 1e-12);
        prop_assert!(pt.as_cmatrix().max_asymmetry() == 0.0);
    }

    #[test]
    fn partial_trace_of_tensor(da in 1usize..=3, db in 1usize..=3, seed in any::<u64>()) {
        let mut rng = StateRng::new(seed);
        let a = shaped(random_herm(da, &mut rng), &[da]);
        let b = shaped(random_herm(db, &mut rng), &[db]);
        let red = partial_trace(&tensor(&a, &b), &Cut::single(0)).unwrap();
        prop_assert!(red.max_abs_diff(&a.scale(b.trace())) < 1e-12 * (1.0 + a.frobenius_norm() * b.frobenius_norm()));
    }

    #[test]
    fn trace_norm_of_partial_transpose(da in 2usize..=3, db in 2usize..=3, seed in any::<u64>()) {
        let mut rng = StateRng::new(seed);
        let r = rho(&SystemShape::bipartite(da, db), &mut rng);
        let pt = r.partial_transpose(&Cut::single(0)).unwrap();
        prop_assert!((trace_norm(&pt).unwrap() - (1.0 + 2.0 * negative_mass(&pt))).abs() < 1e-10);
    }
}
