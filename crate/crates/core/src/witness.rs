//! Witness operators, validity checks, mixing certificates and their JSON form.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herm::{hs_inner, partial_transpose, Cut, HermitianMatrix, SystemShape, C64, ZERO};
use crate::io::MatrixJson;
use crate::rng::StateRng;
use crate::states::DensityMatrix;

/// Tolerance for PSD and bound checks on witness parts.
pub const WITNESS_TOL: f64 = 1e-8;

/// A spectral bound on a witness: finite, or absent (`+∞`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    Finite(f64),
    Infinite,
}

impl Bound {
    pub fn finite(self) -> Option<f64> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Bound::Infinite)
    }

    /// Parses a number or one of `inf`, `infinity`, `∞`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "inf" || t == "infinity" || t == "+inf" || t == "∞" {
            return Ok(Bound::Infinite);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("bound {s:?} is neither a number nor inf")))?;
        if v.is_infinite() && v > 0.0 {
            return Ok(Bound::Infinite);
        }
        if !(v >= 0.0) {
            return Err(Error::Domain(format!("bound {v} must be nonnegative")));
        }
        Ok(Bound::Finite(v))
    }
}

impl From<f64> for Bound {
    fn from(v: f64) -> Self {
        if v.is_infinite() {
            Bound::Infinite
        } else {
            Bound::Finite(v)
        }
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessClass {
    /// `P + Σ_c Q_c^{T_c}` with `P, Q_c ⪰ 0`.
    Decomposable {
        p: HermitianMatrix,
        q: Vec<(Cut, HermitianMatrix)>,
    },
    /// Nonnegative on every state with a two-copy PPT symmetric extension.
    Dps2Certified,
    /// Nonnegative diagonal in the computational basis, `G ⪯ I`.
    SsrDiagonal,
    /// A fixed operator whose validity is known analytically.
    Fixed,
}

impl WitnessClass {
    fn tag(&self) -> &'static str {
        match self {
            WitnessClass::Decomposable { q, .. } if q.len() == 1 => "decomposable_bipartite",
            WitnessClass::Decomposable { .. } => "decomposable_multi",
            WitnessClass::Dps2Certified => "dps2_certified",
            WitnessClass::SsrDiagonal => "ssr_diagonal",
            WitnessClass::Fixed => "fixed",
        }
    }
}

/// Normalization convention attached to a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceNorm {
    None,
    TraceEqualsD,
    OpLeqI,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub op: HermitianMatrix,
    pub class: WitnessClass,
    /// Lower spectral bound `−n·I ⪯ op`.
    pub n: Bound,
    /// Upper spectral bound `op ⪯ m·I`.
    pub m: Bound,
    pub trace_norm: TraceNorm,
}

impl Witness {
    /// Builds a decomposable witness, recomputing `op = P + Σ Q_c^{T_c}`.
    pub fn decomposable(
        p: HermitianMatrix,
        q: Vec<(Cut, HermitianMatrix)>,
        n: Bound,
        m: Bound,
        trace_norm: TraceNorm,
    ) -> Result<Self> {
        let op = recompose(&p, &q)?;
        Ok(Self {
            op,
            class: WitnessClass::Decomposable { p, q },
            n,
            m,
            trace_norm,
        })
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn to_json(&self) -> WitnessJson {
        let (parts, cuts) = match &self.class {
            WitnessClass::Decomposable { p, q } => (
                Some(PartsJson {
                    p: MatrixJson::from_hermitian(p),
                    q: q.iter().map(|(_, m)| MatrixJson::from_hermitian(m)).collect(),
                }),
                Some(q.iter().map(|(c, _)| c.parties().to_vec()).collect()),
            ),
            _ => (None, None),
        };
        WitnessJson {
            class: self.class.tag().to_string(),
            n: self.n.finite(),
            m: self.m.finite(),
            trace_norm: self.trace_norm,
            parts,
            cuts,
            op: MatrixJson::from_hermitian(&self.op),
        }
    }

    pub fn from_json(json: &WitnessJson) -> Result<Self> {
        let op = json.op.to_hermitian()?;
        let class = match json.class.as_str() {
            "decomposable_bipartite" | "decomposable_multi" => {
                let parts = json
                    .parts
                    .as_ref()
                    .ok_or_else(|| Error::Parse("decomposable witness without parts".into()))?;
                let cuts = json
                    .cuts
                    .as_ref()
                    .ok_or_else(|| Error::Parse("decomposable witness without cuts".into()))?;
                if cuts.len() != parts.q.len() {
                    return Err(Error::Parse(format!(
                        "{} cuts for {} Q parts",
                        cuts.len(),
                        parts.q.len()
                    )));
                }
                let q = cuts
                    .iter()
                    .zip(&parts.q)
                    .map(|(c, m)| Ok((Cut::new(c.iter().copied())?, m.to_hermitian()?)))
                    .collect::<Result<Vec<_>>>()?;
                WitnessClass::Decomposable {
                    p: parts.p.to_hermitian()?,
                    q,
                }
            }
            "dps2_certified" => WitnessClass::Dps2Certified,
            "ssr_diagonal" => WitnessClass::SsrDiagonal,
            "fixed" => WitnessClass::Fixed,
            other => return Err(Error::Parse(format!("unknown witness class {other:?}"))),
        };
        let bound = |v: Option<f64>| v.map_or(Bound::Infinite, Bound::Finite);
        Ok(Self {
            op,
            class,
            n: bound(json.n),
            m: bound(json.m),
            trace_norm: json.trace_norm,
        })
    }
}

/// Witness file layout. `n`/`m` are `null` for an absent (infinite) bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessJson {
    pub class: String,
    pub n: Option<f64>,
    pub m: Option<f64>,
    pub trace_norm: TraceNorm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<PartsJson>,
    /// Party sets of the `Q` parts, in order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cuts: Option<Vec<Vec<usize>>>,
    pub op: MatrixJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartsJson {
    #[serde(rename = "P")]
    pub p: MatrixJson,
    #[serde(rename = "Q")]
    pub q: Vec<MatrixJson>,
}

fn recompose(p: &HermitianMatrix, q: &[(Cut, HermitianMatrix)]) -> Result<HermitianMatrix> {
    let mut op = p.clone();
    for (cut, qc) in q {
        op = op.add(&partial_transpose(qc, cut)?)?;
    }
    Ok(op)
}

/// `Tr(W ρ)`
pub fn evaluate(w: &Witness, rho: &DensityMatrix) -> Result<f64> {
    hs_inner(&w.op, rho.as_herm())
}

/// Worst violations found by [`validate_decomposable`]; all are ≥ 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    /// Largest entry of `op − (P + Σ Q_c^{T_c})`.
    pub recompose_error: f64,
    /// Magnitude of the most negative eigenvalue among `P` and the `Q_c`.
    pub part_negativity: f64,
    /// How far `op ⪰ −n·I` is violated.
    pub lower_bound_violation: f64,
    /// How far `op ⪯ m·I` is violated.
    pub upper_bound_violation: f64,
    pub valid: bool,
}

/// Re-checks the decomposition, positivity of the parts and the spectral bounds.
pub fn validate_decomposable(w: &Witness) -> Result<DecompositionReport> {
    let WitnessClass::Decomposable { p, q } = &w.class else {
        return Err(Error::Domain("witness is not decomposable".into()));
    };
    let recompose_error = recompose(p, q)?.max_abs_diff(&w.op);
    let mut part_negativity = (-p.min_eigenvalue()?).max(0.0);
    for (_, qc) in q {
        part_negativity = part_negativity.max(-qc.min_eigenvalue()?);
    }
    let vals = w.op.eigenvalues()?;
    let (lmax, lmin) = (vals[0], *vals.last().expect("nonempty"));
    let lower_bound_violation = w.n.finite().map_or(0.0, |n| (-n - lmin).max(0.0));
    let upper_bound_violation = w.m.finite().map_or(0.0, |m| (lmax - m).max(0.0));
    let valid = recompose_error <= WITNESS_TOL
        && part_negativity <= WITNESS_TOL
        && lower_bound_violation <= WITNESS_TOL
        && upper_bound_violation <= WITNESS_TOL;
    Ok(DecompositionReport {
        recompose_error,
        part_negativity,
        lower_bound_violation,
        upper_bound_violation,
        valid,
    })
}

/// Number of lowest samples refined by projected gradient descent.
pub const MC_REFINEMENTS: usize = 1000;
const MC_STEPS: usize = 200;
const MC_STEP: f64 = 0.1;

fn product_vector(locals: &[Vec<C64>]) -> Vec<C64> {
    let mut v = vec![C64::new(1.0, 0.0)];
    for l in locals {
        let mut next = Vec::with_capacity(v.len() * l.len());
        for a in &v {
            for b in l {
                next.push(a * b);
            }
        }
        v = next;
    }
    v
}

fn normalize(v: &mut [C64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
}

/// `⟨ψ_{−k}| W |ψ_{−k}⟩` on party `k`.
fn local_operator(w: &HermitianMatrix, shape: &SystemShape, locals: &[Vec<C64>], k: usize) -> Vec<C64> {
    let dims = shape.local_dims();
    let dk = dims[k];
    let total = shape.total_dim();
    let stride: usize = dims[k + 1..].iter().product();
    // amplitude of the other parties for each full index
    let mut others = vec![C64::new(1.0, 0.0); total];
    for (i, o) in others.iter_mut().enumerate() {
        let mut rem = i;
        for l in (0..dims.len()).rev() {
            let digit = rem % dims[l];
            rem /= dims[l];
            if l != k {
                *o *= locals[l][digit];
            }
        }
    }
    let digit = |i: usize| (i / stride) % dk;
    let mut out = vec![ZERO; dk * dk];
    for i in 0..total {
        let oi = others[i].conj();
        if oi == ZERO {
            continue;
        }
        for j in 0..total {
            out[digit(i) * dk + digit(j)] += oi * w.get(i, j) * others[j];
        }
    }
    out
}

fn refine(w: &HermitianMatrix, shape: &SystemShape, mut locals: Vec<Vec<C64>>) -> f64 {
    for _ in 0..MC_STEPS {
        for k in 0..locals.len() {
            let wk = local_operator(w, shape, &locals, k);
            let dk = locals[k].len();
            let psi = &locals[k];
            let g: Vec<C64> = (0..dk)
                .map(|a| (0..dk).map(|b| wk[a * dk + b] * psi[b]).sum())
                .collect();
            let f: f64 = psi.iter().zip(&g).map(|(x, y)| (x.conj() * y).re).sum();
            let mut next: Vec<C64> = psi.iter().zip(&g).map(|(x, y)| x - (y - x * f) * MC_STEP).collect();
            normalize(&mut next);
            locals[k] = next;
        }
    }
    w.expectation(&product_vector(&locals))
}

/// Smallest `⟨ψ₁⊗…⊗ψ_k| W |ψ₁⊗…⊗ψ_k⟩` found over `samples` random product
/// vectors, after refining the lowest [`MC_REFINEMENTS`] of them by projected
/// gradient descent. A value below `−1e-6` proves `W` is not a witness for
/// full separability; a nonnegative value is evidence only.
pub fn mc_product_check(w: &Witness, samples: usize, seed: u64) -> Result<f64> {
    let shape = w.op.require_shape()?.clone();
    let draw = |task: usize| -> Vec<Vec<C64>> {
        let mut rng = StateRng::for_task(seed, task as u64);
        shape
            .local_dims()
            .iter()
            .map(|&d| {
                let mut v: Vec<C64> = (0..d).map(|_| rng.complex_gaussian()).collect();
                normalize(&mut v);
                v
            })
            .collect()
    };
    let mut values: Vec<(f64, usize)> = (0..samples)
        .into_par_iter()
        .map(|task| (w.op.expectation(&product_vector(&draw(task))), task))
        .collect();
    values.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let sampled_min = values.first().map_or(f64::INFINITY, |v| v.0);
    let refined_min = values
        .par_iter()
        .take(MC_REFINEMENTS)
        .map(|&(_, task)| refine(&w.op, &shape, draw(task)))
        .reduce(|| f64::INFINITY, f64::min);
    Ok(sampled_min.min(refined_min))
}

/// Decomposition `ρ + s·π₁ = (1 + s − t)·σ + t·π₂` with `σ` PPT.
#[derive(Clone, Debug)]
pub struct MixingCertificate {
    pub s: f64,
    pub t: f64,
    pub sigma: DensityMatrix,
    pub pi1: DensityMatrix,
    pub pi2: DensityMatrix,
}

/// Residuals of a [`MixingCertificate`] against the state it certifies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    /// Largest entry of `ρ + sπ₁ − (1+s−t)σ − tπ₂`.
    pub identity_residual: f64,
    /// Magnitude of the most negative eigenvalue of `σ^{T_c}` over the cuts.
    pub sigma_pt_negativity: f64,
}

impl MixingCertificate {
    pub fn check(&self, rho: &DensityMatrix, cuts: &[Cut]) -> Result<CertificateReport> {
        let lhs = rho.as_herm().combine(1.0, self.pi1.as_herm(), self.s)?;
        let rhs = self
            .sigma
            .as_herm()
            .combine(1.0 + self.s - self.t, self.pi2.as_herm(), self.t)?;
        let identity_residual = lhs.max_abs_diff(&rhs);
        let mut sigma_pt_negativity: f64 = 0.0;
        for cut in cuts {
            let pt = self.sigma.partial_transpose(cut)?;
            sigma_pt_negativity = sigma_pt_negativity.max(-pt.min_eigenvalue()?);
        }
        Ok(CertificateReport {
            identity_residual,
            sigma_pt_negativity,
        })
    }

    /// Objective `m·s + n·t` of the mixing program; infinite bounds contribute 0
    /// (their weight is fixed to zero by construction).
    pub fn objective(&self, n: Bound, m: Bound) -> f64 {
        m.finite().map_or(0.0, |m| m * self.s) + n.finite().map_or(0.0, |n| n * self.t)
    }
}

/// Projects a nearly-positive operator onto the unit-trace PSD cone by clipping
/// negative eigenvalues. Falls back to the maximally mixed state for a
/// (numerically) zero operator.
pub(crate) fn density_from_approx(m: &HermitianMatrix) -> Result<DensityMatrix> {
    let eig = m.eig()?;
    let clipped = eig.map_spectrum(|l| l.max(0.0)).with_shape_of(m);
    let tr = clipped.trace();
    if tr <= 1e-300 {
        let d = m.dim();
        return Ok(DensityMatrix::trusted(
            HermitianMatrix::identity(d).scale(1.0 / d as f64).with_shape_of(m),
        ));
    }
    Ok(DensityMatrix::trusted(clipped.scale(1.0 / tr)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::max_entangled;

    fn bell_pt_witness(q_shift: f64) -> Witness {
        let bell = max_entangled(2).unwrap().into_herm();
        let q = bell
            .add(&HermitianMatrix::identity(4).scale(q_shift).with_shape_of(&bell))
            .unwrap();
        Witness::decomposable(
            HermitianMatrix::zeros(4).with_shape_of(&bell),
            vec![(Cut::single(0), q)],
            Bound::Infinite,
            Bound::Infinite,
            TraceNorm::None,
        )
        .unwrap()
    }

    #[test]
    fn valid_and_invalid_decompositions() {
        assert!(validate_decomposable(&bell_pt_witness(0.0)).unwrap().valid);
        let bad = validate_decomposable(&bell_pt_witness(-0.1)).unwrap();
        assert!(!bad.valid);
        assert!((bad.part_negativity - 0.1).abs() < 1e-12);
    }

    #[test]
    fn bound_parsing() {
        assert_eq!(Bound::parse("inf").unwrap(), Bound::Infinite);
        assert_eq!(Bound::parse("2.5").unwrap(), Bound::Finite(2.5));
        assert!(Bound::parse("-1").is_err());
        assert!(Bound::parse("x").is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let w = bell_pt_witness(0.0);
        let text = serde_json::to_string(&w.to_json()).unwrap();
        let back = Witness::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn mc_check_on_identity_and_minus_identity() {
        let shape = SystemShape::bipartite(2, 2);
        let fixed = |op: HermitianMatrix| Witness {
            op: op.with_shape(shape.clone()).unwrap(),
            class: WitnessClass::Fixed,
            n: Bound::Infinite,
            m: Bound::Infinite,
            trace_norm: TraceNorm::None,
        };
        let min = mc_product_check(&fixed(HermitianMatrix::identity(4)), 50, 3).unwrap();
        assert!((min - 1.0).abs() < 1e-12);
        let min = mc_product_check(&fixed(HermitianMatrix::identity(4).scale(-1.0)), 50, 3).unwrap();
        assert!(min < -0.99);
    }
}
