//! `U⊗U*` twirl and the reduced witness optimization for isotropic states.

use crate::error::{domain, Error, Result};
use crate::herm::{hs_inner, HermitianMatrix, SystemShape};
use crate::measures::MeasureResult;
use crate::states::max_entangled;
use crate::witness::{Bound, TraceNorm, Witness, WitnessClass};

/// Projection onto `span{P⁺, I}` preserving `Tr(a)` and `Tr(a·P⁺)`.
pub fn twirl_uustar(a: &HermitianMatrix, d: usize) -> Result<HermitianMatrix> {
    if d < 2 {
        return domain(format!("local dimension {d} < 2"));
    }
    if a.dim() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            got: a.dim(),
        });
    }
    let pplus = max_entangled(d)?.into_herm();
    let tr = a.trace();
    let tp = hs_inner(a, &pplus)?;
    let beta = (tr - tp) / ((d * d - 1) as f64);
    let alpha = tp - beta;
    pplus
        .combine(alpha, &HermitianMatrix::identity(d * d), beta)?
        .with_shape(SystemShape::bipartite(d, d))
}

/// `max{0, −min Tr(Wρ_p)}` over `W = a·P⁺ + b·I` with `−n·I ⪯ W ⪯ m·I` and
/// `W` nonnegative on product states (`b ≥ 0`, `a/d + b ≥ 0`), solved as a
/// two-variable linear program by vertex enumeration.
pub fn symmetric_witness_opt(d: usize, p: f64, n: Bound, m: Bound) -> Result<MeasureResult> {
    if d < 2 {
        return domain(format!("local dimension {d} < 2"));
    }
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("isotropic weight {p} outside [0, 1]"));
    }
    if n.is_infinite() && m.is_infinite() {
        return domain("n and m cannot both be infinite");
    }
    let dd = d as f64;
    let fidelity = p + (1.0 - p) / (dd * dd);

    // Constraints c·(a, b) ≤ r.
    let mut cons: Vec<([f64; 2], f64)> = vec![([0.0, -1.0], 0.0), ([-1.0 / dd, -1.0], 0.0)];
    if let Some(mv) = m.finite() {
        cons.push(([1.0, 1.0], mv));
        cons.push(([0.0, 1.0], mv));
    }
    if let Some(nv) = n.finite() {
        cons.push(([-1.0, -1.0], nv));
        cons.push(([0.0, -1.0], nv));
    }
    let feasible = |a: f64, b: f64| cons.iter().all(|(c, r)| c[0] * a + c[1] * b <= r + 1e-12);
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 0..cons.len() {
        for j in i + 1..cons.len() {
            let ((c1, r1), (c2, r2)) = (cons[i], cons[j]);
            let det = c1[0] * c2[1] - c1[1] * c2[0];
            if det.abs() < 1e-14 {
                continue;
            }
            let a = (r1 * c2[1] - c1[1] * r2) / det;
            let b = (c1[0] * r2 - r1 * c2[0]) / det;
            if !feasible(a, b) {
                continue;
            }
            let obj = a * fidelity + b;
            if best.map_or(true, |(o, _, _)| obj < o) {
                best = Some((obj, a, b));
            }
        }
    }
    let (obj, a, b) = best.ok_or_else(|| Error::Domain("empty witness set".into()))?;
    let op = max_entangled(d)?
        .into_herm()
        .combine(a, &HermitianMatrix::identity(d * d), b)?
        .with_shape(SystemShape::bipartite(d, d))?;
    let mut res = MeasureResult {
        value: (-obj).max(0.0),
        unclipped: -obj,
        tolerance: 1e-12,
        witness: None,
        certificate: None,
    };
    res.witness = Some(Witness {
        op,
        class: WitnessClass::Fixed,
        n,
        m,
        trace_norm: TraceNorm::None,
    });
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::isotropic_e_n1;

    #[test]
    fn fixed_points() {
        let d = 3;
        let pplus = max_entangled(d).unwrap().into_herm();
        assert!(twirl_uustar(&pplus, d).unwrap().max_abs_diff(&pplus) < 1e-15);
        let id = HermitianMatrix::identity(9);
        assert!(twirl_uustar(&id, d).unwrap().max_abs_diff(&id) < 1e-15);
    }

    #[test]
    fn lp_against_closed_forms() {
        for d in 2..=4 {
            let dd = d as f64;
            for &n in &[0.5, 1.0, dd - 1.0, dd, 2.0 * dd] {
                for k in 0..=20 {
                    let p = k as f64 / 20.0;
                    let lp = symmetric_witness_opt(d, p, Bound::Finite(n), Bound::Finite(1.0)).unwrap();
                    let closed = isotropic_e_n1(d, p, n).unwrap();
                    let f = p + (1.0 - p) / (dd * dd);
                    let optimum = ((n / (dd - 1.0)).min(1.0) * (dd * f - 1.0)).max(0.0);
                    assert!((lp.value - optimum).abs() < 1e-10, "d={d} n={n} p={p}");
                    assert!(lp.value >= closed - 1e-12);
                    if n >= dd - 1.0 {
                        assert!((lp.value - closed).abs() < 1e-10, "d={d} n={n} p={p}");
                    }
                }
            }
        }
    }
}
