mod common;

use common::*;
use proptest::prelude::*;
use witent::measures::{e_nm_ppt, isotropic_e_n1};
use witent::states::{isotropic, max_entangled};
use witent::symmetry::*;
use witent::witness::{evaluate, Bound};
use witent::{hs_inner, tensor, Cut, HermitianMatrix, StateRng, SystemShape};

fn optimum(d: usize, p: f64, n: f64) -> f64 {
    let dd = d as f64;
    let f = p + (1.0 - p) / (dd * dd);
    ((n / (dd - 1.0)).min(1.0) * (dd * f - 1.0)).max(0.0)
}

#[test]
fn twirl_fixed_points() {
    for d in 2..=4 {
        let p = max_entangled(d).unwrap().into_herm();
        assert!(twirl_uustar(&p, d).unwrap().max_abs_diff(&p) < 1e-14);
        let id = HermitianMatrix::identity(d * d);
        assert!(twirl_uustar(&id, d).unwrap().max_abs_diff(&id) < 1e-14);
    }
    assert!(twirl_uustar(&HermitianMatrix::identity(5), 2).is_err());
}

#[test]
fn twirl_of_product_states() {
    let mut rng = StateRng::new(8);
    for d in 2..=4 {
        let one = SystemShape::new(vec![d]).unwrap();
        let prod = tensor(rho(&one, &mut rng).as_herm(), rho(&one, &mut rng).as_herm());
        let tw = twirl_uustar(&prod, d).unwrap();
        let pplus = max_entangled(d).unwrap().into_herm();
        // Solve a + b·d² = Tr, a + b = Tr(·P⁺) for tw = a·P⁺ + b·I.
        let (tr, tp) = (prod.trace(), hs_inner(&prod, &pplus).unwrap());
        let dd = (d * d) as f64;
        let b = (tr - tp) / (dd - 1.0);
        let a = tp - b;
        let want = pplus.combine(a, &HermitianMatrix::identity(d * d), b).unwrap();
        assert!(tw.max_abs_diff(&want) < 1e-14);
        // The twirled product state is the isotropic state with this p.
        let p = (tp * dd - 1.0) / (dd - 1.0);
        assert!(tw.max_abs_diff(isotropic(d, p).unwrap().as_herm()) < 1e-12);
        assert!(tp <= 1.0 / d as f64 + 1e-12);
    }
}

#[test]
fn lp_examples() {
    for d in 2..=4 {
        let dd = d as f64;
        for &n in &[0.5, 1.0, dd, 2.0 * dd] {
            for k in 0..20 {
                let p = k as f64 / 19.0;
                let v = symmetric_witness_opt(d, p, Bound::Finite(n), Bound::Finite(1.0)).unwrap();
                assert_close(v.value, optimum(d, p, n), 1e-10);
                if n >= dd - 1.0 {
                    assert_close(v.value, isotropic_e_n1(d, p, n).unwrap(), 1e-10);
                }
                let w = v.witness.as_ref().unwrap();
                assert_close(evaluate(w, &isotropic(d, p).unwrap()).unwrap(), -v.unclipped, 1e-12);
                if p <= 1.0 / (dd + 1.0) {
                    assert!(v.value < 1e-12);
                }
            }
        }
        for k in 0..=10 {
            let v = symmetric_witness_opt(d, k as f64 / 10.0, Bound::Finite(0.0), Bound::Finite(1.0)).unwrap();
            assert_eq!(v.value, 0.0);
        }
    }
    assert!(symmetric_witness_opt(2, 0.5, Bound::Infinite, Bound::Infinite).is_err());
    let rg = symmetric_witness_opt(3, 0.6, Bound::Infinite, Bound::Finite(1.0)).unwrap();
    assert_close(rg.value, optimum(3, 0.6, f64::INFINITY), 1e-10);
}

#[test]
fn lp_matches_full_sdp() {
    for d in 2..=3 {
        for &(n, m) in &[(1.0, 1.0), (0.5, 1.0), (2.0, 0.5), (1.0, 3.0)] {
            for k in [2, 5, 9] {
                let p = k as f64 / 10.0;
                let lp = symmetric_witness_opt(d, p, Bound::Finite(n), Bound::Finite(m)).unwrap();
                let sdp = e_nm_ppt(
                    &isotropic(d, p).unwrap(),
                    &[Cut::single(0)],
                    Bound::Finite(n),
                    Bound::Finite(m),
                )
                .unwrap();
                assert_close(lp.value, sdp.value, 1e-5);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn twirl_is_idempotent_and_trace_preserving(d in 2usize..=4, seed in any::<u64>()) {
        let mut rng = StateRng::new(seed);
        let a = random_herm(d * d, &mut rng);
        let once = twirl_uustar(&a, d).unwrap();
        let twice = twirl_uustar(&once, d).unwrap();
        prop_assert!(twice.max_abs_diff(&once) < 1e-12 * (1.0 + a.frobenius_norm()));
        prop_assert!((once.trace() - a.trace()).abs() < 1e-12 * (1.0 + a.frobenius_norm()));
    }
}
