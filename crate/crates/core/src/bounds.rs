//! Operational bounds derived from measure values: teleportation distance,
//! distillable entanglement and entanglement of formation. Logs are base 2.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::herm::Cut;
use crate::measures::e_nm_ppt;
use crate::states::DensityMatrix;
use crate::witness::Bound;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundQuantity {
    TeleportDistanceMin,
    DistillableUpper,
    EofLower,
}

/// Which inputs a bound was computed from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub measure: String,
    pub measure_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub quantity: BoundQuantity,
    pub value: f64,
    pub inputs: Provenance,
    /// Set when the bound is vacuous for these inputs.
    pub degenerate: bool,
}

/// Upper bound on the minimal teleportation distance from `E^PPT_{n:1}`, `n ≥ d`:
/// `(2d/(d+1))·(1 − (1+E)/d)`, clipped to `[0, 2]`.
pub fn teleport_dmin_upper(e_ppt_n1: f64, d: usize, n: Bound) -> Result<BoundReport> {
    if d < 2 {
        return domain(format!("dimension {d} < 2"));
    }
    if let Bound::Finite(nv) = n {
        if nv < d as f64 {
            return domain(format!("teleportation bound needs n ≥ d, got n = {nv}, d = {d}"));
        }
    }
    if !(e_ppt_n1 >= 0.0) {
        return domain(format!("measure value {e_ppt_n1} < 0"));
    }
    let dd = d as f64;
    let value = (2.0 * dd / (dd + 1.0) * (1.0 - (1.0 + e_ppt_n1) / dd)).clamp(0.0, 2.0);
    Ok(BoundReport {
        quantity: BoundQuantity::TeleportDistanceMin,
        value,
        inputs: Provenance {
            measure: "e_ppt_n1".into(),
            measure_value: e_ppt_n1,
            n: n.finite(),
            d: Some(d),
        },
        degenerate: false,
    })
}

/// `log₂(1 + E)`
pub fn le_n1(e_value: f64) -> Result<f64> {
    if !(e_value >= 0.0) {
        return domain(format!("measure value {e_value} < 0"));
    }
    Ok((1.0 + e_value).log2())
}

/// Upper bound `log₂(1 + E^PPT_{n:1}(ρ))` on the distillable entanglement, `n ≥ 1`.
pub fn distillable_upper(rho: &DensityMatrix, cut: &Cut, n: Bound) -> Result<BoundReport> {
    if let Bound::Finite(nv) = n {
        if nv < 1.0 {
            return domain(format!("distillation bound needs n ≥ 1, got {nv}"));
        }
    }
    let e = e_nm_ppt(rho, std::slice::from_ref(cut), n, Bound::Finite(1.0))?;
    Ok(BoundReport {
        quantity: BoundQuantity::DistillableUpper,
        value: le_n1(e.value)?,
        inputs: Provenance {
            measure: "e_ppt_n1".into(),
            measure_value: e.value,
            n: n.finite(),
            d: None,
        },
        degenerate: false,
    })
}

/// `H(x) = −x log₂ x − (1−x) log₂(1−x)` with `0·log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("entropy argument {x} outside [0, 1]"));
    }
    let h = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    Ok(h(x) + h(1.0 - x))
}

/// Entanglement-of-formation lower bound `H((1 + √(1 − 4R²))/2)` from a lower
/// bound `R ∈ [0, 1/2]` on the random robustness (c₁c₂ normalization).
pub fn eof_lower_rr(rr_value: f64) -> Result<BoundReport> {
    if !(0.0..=0.5).contains(&rr_value) {
        return domain(format!("robustness value {rr_value} outside [0, 1/2]"));
    }
    let x = (1.0 + (1.0 - 4.0 * rr_value * rr_value).max(0.0).sqrt()) / 2.0;
    Ok(BoundReport {
        quantity: BoundQuantity::EofLower,
        value: binary_entropy(x)?,
        inputs: Provenance {
            measure: "random_robustness".into(),
            measure_value: rr_value,
            n: None,
            d: None,
        },
        degenerate: false,
    })
}

/// Entanglement-of-formation lower bound `((log₂ d − 1)/d)·R_G`.
/// Vacuous (always 0) for `d = 2`.
pub fn eof_lower_rg(rg_value: f64, d: usize) -> Result<BoundReport> {
    if d < 2 {
        return domain(format!("dimension {d} < 2"));
    }
    if !(rg_value >= 0.0) {
        return domain(format!("robustness value {rg_value} < 0"));
    }
    let dd = d as f64;
    Ok(BoundReport {
        quantity: BoundQuantity::EofLower,
        value: (dd.log2() - 1.0) / dd * rg_value,
        inputs: Provenance {
            measure: "generalized_robustness".into(),
            measure_value: rg_value,
            n: None,
            d: Some(d),
        },
        degenerate: d == 2,
    })
}

/// Exact entanglement of formation of the isotropic state with fidelity `F`,
/// `(d·log₂(d−1)/(d−2))·(F − 1) + log₂ d` for `F ∈ [4(d−1)/d², 1]`, `d ≥ 3`.
pub fn isotropic_eof_exact(d: usize, fidelity: f64) -> Result<f64> {
    if d < 3 {
        return domain(format!("closed form needs d ≥ 3, got {d}"));
    }
    let dd = d as f64;
    let lo = 4.0 * (dd - 1.0) / (dd * dd);
    if !(lo - 1e-12..=1.0 + 1e-12).contains(&fidelity) {
        return domain(format!("fidelity {fidelity} outside [{lo}, 1]"));
    }
    Ok(dd * (dd - 1.0).log2() / (dd - 2.0) * (fidelity - 1.0) + dd.log2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.25).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn teleport_examples() {
        assert_eq!(teleport_dmin_upper(1.0, 2, Bound::Infinite).unwrap().value, 0.0);
        assert!((teleport_dmin_upper(0.0, 2, Bound::Finite(2.0)).unwrap().value - 2.0 / 3.0).abs() < 1e-15);
        assert!(teleport_dmin_upper(0.0, 3, Bound::Finite(2.0)).is_err());
    }

    #[test]
    fn eof_examples() {
        assert_eq!(eof_lower_rr(0.0).unwrap().value, 0.0);
        assert!((eof_lower_rr(0.5).unwrap().value - 1.0).abs() < 1e-15);
        let x = (1.0 + (0.75f64).sqrt()) / 2.0;
        assert!((eof_lower_rr(0.25).unwrap().value - binary_entropy(x).unwrap()).abs() < 1e-15);
        assert!((isotropic_eof_exact(3, 8.0 / 9.0).unwrap() - (3f64.log2() - 1.0 / 3.0)).abs() < 1e-12);
        assert!((isotropic_eof_exact(5, 1.0).unwrap() - 5f64.log2()).abs() < 1e-12);
        assert!(eof_lower_rg(3.0, 2).unwrap().degenerate);
    }

    #[test]
    fn log_measure() {
        assert_eq!(le_n1(0.0).unwrap(), 0.0);
        assert_eq!(le_n1(1.0).unwrap(), 1.0);
        assert!((le_n1(3.0).unwrap() - 2.0).abs() < 1e-15);
    }
}
