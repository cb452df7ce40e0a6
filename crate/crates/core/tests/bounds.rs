mod common;

use common::*;
use witent::bounds::*;
use witent::measures::{e_nm_ppt, isotropic_e_n1, negativity, rg_ppt_closed};
use witent::states::{horodecki_3x3, isotropic, max_entangled};
use witent::witness::Bound;
use witent::{Cut, DensityMatrix, HermitianMatrix, StateRng, SystemShape};

#[test]
fn teleportation_examples() {
    let r = teleport_dmin_upper(1.0, 2, Bound::Finite(2.0)).unwrap();
    assert_eq!(r.value, 0.0);
    assert_eq!(r.quantity, BoundQuantity::TeleportDistanceMin);
    assert_eq!(r.inputs.d, Some(2));
    assert_close(
        teleport_dmin_upper(0.0, 2, Bound::Finite(2.0)).unwrap().value,
        2.0 / 3.0,
        1e-15,
    );
    assert!(teleport_dmin_upper(0.5, 3, Bound::Finite(2.5)).is_err());
    assert!(teleport_dmin_upper(-0.1, 2, Bound::Infinite).is_err());

    // Isotropic two-qubit states: the bound equals (d/(d+1))·2(1−p)(d²−1)/d² for p ≥ 1/3.
    for k in 0..=20 {
        let p = 1.0 / 3.0 + (2.0 / 3.0) * k as f64 / 20.0;
        let e = isotropic_e_n1(2, p, 2.0).unwrap();
        let b = teleport_dmin_upper(e, 2, Bound::Finite(2.0)).unwrap().value;
        assert_close(b, (2.0 / 3.0) * 2.0 * (1.0 - p) * 3.0 / 4.0, 1e-12);
    }
}

#[test]
fn teleportation_range() {
    for d in 2..=6 {
        for k in 0..=40 {
            let e = k as f64 * (d as f64) / 40.0;
            let v = teleport_dmin_upper(e, d, Bound::Infinite).unwrap().value;
            assert!((0.0..=2.0).contains(&v));
            assert_eq!(v == 0.0, e >= d as f64 - 1.0, "d={d} e={e}");
        }
    }
}

#[test]
fn log_measure_examples() {
    assert_eq!(le_n1(0.0).unwrap(), 0.0);
    assert_eq!(le_n1(1.0).unwrap(), 1.0);
    for d in 2..=8 {
        assert_close(le_n1(d as f64 - 1.0).unwrap(), (d as f64).log2(), 1e-14);
    }
    assert!(le_n1(-1.0).is_err());
}

#[test]
fn distillation_examples() {
    let cut = Cut::single(0);
    assert_close(
        distillable_upper(&max_entangled(2).unwrap(), &cut, Bound::Finite(1.0))
            .unwrap()
            .value,
        1.0,
        1e-6,
    );
    let sep = DensityMatrix::new(
        HermitianMatrix::identity(4)
            .scale(0.25)
            .with_shape(SystemShape::bipartite(2, 2))
            .unwrap(),
    )
    .unwrap();
    assert!(distillable_upper(&sep, &cut, Bound::Infinite).unwrap().value < 1e-6);
    for a in [0.2, 0.5, 0.8] {
        assert!(
            distillable_upper(&horodecki_3x3(a).unwrap(), &cut, Bound::Finite(1.0))
                .unwrap()
                .value
                < 1e-6
        );
    }
    assert!(distillable_upper(&sep, &cut, Bound::Finite(0.5)).is_err());
}

#[test]
fn entropy_examples() {
    assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
    assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
    assert_close(binary_entropy(0.5).unwrap(), 1.0, 1e-15);
    assert_close(binary_entropy(0.25).unwrap(), 0.811278, 1e-6);
    assert!(binary_entropy(-0.01).is_err());
}

#[test]
fn formation_examples() {
    assert_eq!(eof_lower_rr(0.0).unwrap().value, 0.0);
    assert_close(eof_lower_rr(0.5).unwrap().value, 1.0, 1e-15);
    assert_close(eof_lower_rr(0.25).unwrap().value, 0.354, 1e-3);
    assert!(eof_lower_rr(0.6).is_err());
    let mut prev = 0.0;
    for k in 0..=100 {
        let v = eof_lower_rr(k as f64 / 200.0).unwrap().value;
        assert!(v >= prev);
        prev = v;
    }

    assert_eq!(eof_lower_rg(0.0, 3).unwrap().value, 0.0);
    let deg = eof_lower_rg(0.7, 2).unwrap();
    assert_eq!(deg.value, 0.0);
    assert!(deg.degenerate);

    assert_close(
        isotropic_eof_exact(3, 8.0 / 9.0).unwrap(),
        3f64.log2() - 1.0 / 3.0,
        1e-12,
    );
    assert_close(isotropic_eof_exact(3, 8.0 / 9.0).unwrap(), 1.2516, 1e-4);
    for d in 3..=10 {
        assert_close(isotropic_eof_exact(d, 1.0).unwrap(), (d as f64).log2(), 1e-12);
    }
    assert!(isotropic_eof_exact(2, 1.0).is_err());
    assert!(isotropic_eof_exact(3, 0.5).is_err());
}

#[test]
fn isotropic_formation_bound_below_exact() {
    for d in 3..=10 {
        let dd = d as f64;
        let lo = 4.0 * (dd - 1.0) / (dd * dd);
        for k in 0..50 {
            let f = lo + (1.0 - lo) * k as f64 / 49.0;
            // R_G of the isotropic state with fidelity F is dF − 1.
            let rg = (dd * f - 1.0).max(0.0);
            let bound = eof_lower_rg(rg, d).unwrap().value;
            assert_close(bound, (dd.log2() - 1.0) * (f - 1.0 / dd), 1e-12);
            assert!(bound <= isotropic_eof_exact(d, f).unwrap() + 1e-10, "d={d} F={f}");
        }
    }
    // The isotropic R_G used above agrees with the SDP.
    let p = 0.7;
    let r = isotropic(3, p).unwrap();
    let f = p + (1.0 - p) / 9.0;
    let sdp = e_nm_ppt(&r, &[Cut::single(0)], Bound::Infinite, Bound::Finite(1.0))
        .unwrap()
        .value;
    assert_close(sdp, 3.0 * f - 1.0, 1e-6);
}

#[test]
fn tensor_square_log_subadditivity() {
    let mut rng = StateRng::new(123);
    let shape = SystemShape::bipartite(2, 2);
    let cut = [Cut::new([0, 2]).unwrap()];
    for _ in 0..3 {
        let r = rho(&shape, &mut rng);
        for n in [Bound::Finite(1.0), Bound::Infinite] {
            let e = e_nm_ppt(&r, &[Cut::single(0)], n, Bound::Finite(1.0)).unwrap().value;
            let e2 = e_nm_ppt(&r.tensor(&r), &cut, n, Bound::Finite(1.0)).unwrap().value;
            assert!(le_n1(e2).unwrap() <= 2.0 * le_n1(e).unwrap() + 1e-5);
        }
    }
}

#[test]
fn bound_chain_for_bell_and_horodecki() {
    let cut = Cut::single(0);
    let bell = max_entangled(2).unwrap();
    let e = e_nm_ppt(
        &bell,
        std::slice::from_ref(&cut),
        Bound::Finite(2.0),
        Bound::Finite(1.0),
    )
    .unwrap()
    .value;
    assert!(teleport_dmin_upper(e, 2, Bound::Finite(2.0)).unwrap().value < 1e-8);
    let h = horodecki_3x3(0.4).unwrap();
    assert!(negativity(&h, &cut).unwrap().value < 1e-9);
    assert!(rg_ppt_closed(&h, &cut).unwrap().value < 1e-9);
}

#[test]
fn reports_serialize() {
    let r = eof_lower_rg(0.5, 3).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["quantity"], "EofLower");
    assert_eq!(v["inputs"]["measure_value"], 0.5);
}
