//! Entanglement measures: spectral closed forms and witness SDPs.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::herm::{hs_inner, partial_transpose, Cut, HermitianMatrix, SystemShape, C64, ZERO};
use crate::sdp::{HermitianSdp, LinearMap, ScalarKind, SdpOptions};
use crate::states::DensityMatrix;
use crate::witness::{density_from_approx, Bound, MixingCertificate, TraceNorm, Witness, WitnessClass};

/// Eigenvalues of a partial transpose below this count as negative.
pub const NEGATIVE_EIGEN_THRESHOLD: f64 = 1e-10;
/// Accuracy quoted for SDP-derived values.
pub const SDP_VALUE_TOL: f64 = 1e-6;
/// Largest extended dimension `d_A·d_B²` accepted by [`rg_dps2`].
pub const DPS2_MAX_EXTENDED_DIM: usize = 36;

#[derive(Clone, Debug)]
pub struct MeasureResult {
    /// `max{0, unclipped}`
    pub value: f64,
    /// `−Tr(Wρ)` (or the optimum it stands for) before clipping at zero.
    pub unclipped: f64,
    pub tolerance: f64,
    pub witness: Option<Witness>,
    pub certificate: Option<MixingCertificate>,
}

impl MeasureResult {
    fn new(unclipped: f64, tolerance: f64) -> Self {
        Self {
            value: unclipped.max(0.0),
            unclipped,
            tolerance,
            witness: None,
            certificate: None,
        }
    }

    /// JSON summary with value, tolerance and the certificate weights.
    pub fn summary(&self) -> MeasureSummary {
        MeasureSummary {
            value: self.value,
            unclipped: self.unclipped,
            tolerance: self.tolerance,
            certificate: self.certificate.as_ref().map(|c| CertificateSummary { s: c.s, t: c.t }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureSummary {
    pub value: f64,
    pub unclipped: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateSummary {
    pub s: f64,
    pub t: f64,
}

fn shape_of(rho: &DensityMatrix) -> Result<&SystemShape> {
    rho.shape().ok_or(Error::MissingShape)
}

fn zeros_like(m: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::zeros(m.dim()).with_shape_of(m)
}

/// Projector onto the eigenspace of `rho^{T_cut}` with eigenvalues below the
/// negativity threshold, together with the negativity itself.
fn negative_part(rho: &DensityMatrix, cut: &Cut) -> Result<(f64, HermitianMatrix)> {
    let pt = rho.partial_transpose(cut)?;
    let eig = pt.eig()?;
    let neg = eig
        .values
        .iter()
        .filter(|&&l| l < -NEGATIVE_EIGEN_THRESHOLD)
        .map(|l| -l)
        .sum();
    let proj = eig
        .map_spectrum(|l| if l < -NEGATIVE_EIGEN_THRESHOLD { 1.0 } else { 0.0 })
        .with_shape_of(&pt);
    Ok((neg, proj))
}

/// Sum of the magnitudes of the negative eigenvalues of `ρ^{T_cut}`.
/// The witness is `P_−^{T_cut}` with `P_−` the negative-eigenspace projector.
pub fn negativity(rho: &DensityMatrix, cut: &Cut) -> Result<MeasureResult> {
    let (neg, proj) = negative_part(rho, cut)?;
    let mut res = MeasureResult::new(neg, 1e-12);
    res.witness = Some(Witness::decomposable(
        zeros_like(&proj),
        vec![(cut.clone(), proj)],
        Bound::Infinite,
        Bound::Infinite,
        TraceNorm::None,
    )?);
    Ok(res)
}

/// Robustness-type value of the feasible witness `P_−^{T_cut} / λ_max(P_−^{T_cut})`:
/// negativity divided by the largest eigenvalue of the partially transposed
/// negative-eigenspace projector. A lower bound on `E^PPT_{∞:1}`.
pub fn rg_ppt_closed(rho: &DensityMatrix, cut: &Cut) -> Result<MeasureResult> {
    let (neg, proj) = negative_part(rho, cut)?;
    if neg == 0.0 {
        return Ok(MeasureResult::new(0.0, 1e-12));
    }
    let lmax = partial_transpose(&proj, cut)?.max_eigenvalue()?;
    let q = proj.scale(1.0 / lmax);
    let mut res = MeasureResult::new(neg / lmax, 1e-10);
    res.witness = Some(Witness::decomposable(
        zeros_like(&q),
        vec![(cut.clone(), q)],
        Bound::Infinite,
        Bound::Finite(1.0),
        TraceNorm::OpLeqI,
    )?);
    Ok(res)
}

/// `E^PPT_{n:m}`: `max{0, −min Tr(Wρ)}` over `W = P + Σ_c Q_c^{T_c}`,
/// `P, Q_c ⪰ 0`, `−n·I ⪯ W ⪯ m·I` (an infinite bound drops its constraint).
///
/// Solved in the mixing form `min m·s + n·t` s.t. `ρ + sπ₁ = (1+s−t)σ + tπ₂`
/// with `σ` PPT across every cut; the witness comes from the duals.
pub fn e_nm_ppt(rho: &DensityMatrix, cuts: &[Cut], n: Bound, m: Bound) -> Result<MeasureResult> {
    e_nm_ppt_with(rho, cuts, n, m, &SdpOptions::default())
}

pub fn e_nm_ppt_with(
    rho: &DensityMatrix,
    cuts: &[Cut],
    n: Bound,
    m: Bound,
    opts: &SdpOptions,
) -> Result<MeasureResult> {
    if n.is_infinite() && m.is_infinite() {
        return domain("n and m cannot both be infinite");
    }
    if cuts.is_empty() {
        return domain("at least one cut is required");
    }
    let shape = shape_of(rho)?.clone();
    for c in cuts {
        c.validate(&shape)?;
    }
    let d = rho.dim();
    let id = HermitianMatrix::identity(d);

    let mut sdp = HermitianSdp::new();
    let s1 = m.finite().map(|mv| (sdp.add_var(d), mv));
    let s2 = n.finite().map(|nv| (sdp.add_var(d), nv));
    let sigma = sdp.add_var(d);
    let rs: Vec<_> = cuts.iter().map(|_| sdp.add_var(d)).collect();

    let mut terms = vec![(sigma, LinearMap::identity(d))];
    if let Some((v, mv)) = s1 {
        sdp.add_objective(v, id.scale(mv))?;
        terms.push((v, LinearMap::identity(d).scaled(-1.0)));
    }
    if let Some((v, nv)) = s2 {
        sdp.add_objective(v, id.scale(nv))?;
        terms.push((v, LinearMap::identity(d)));
    }
    let g0 = sdp.add_equality(terms, vec![], rho.as_herm().clone())?;
    for (cut, &r) in cuts.iter().zip(&rs) {
        sdp.add_equality(
            vec![
                (r, LinearMap::identity(d)),
                (sigma, LinearMap::partial_transpose(&shape, cut)?.scaled(-1.0)),
            ],
            vec![],
            HermitianMatrix::zeros(d),
        )?;
    }
    let sol = sdp.solve(opts)?;

    let tag = |h: &HermitianMatrix| h.clone().with_shape(shape.clone());
    let p = tag(&sol.slacks[sigma_index(&s1, &s2)])?;
    let q = cuts
        .iter()
        .zip(&rs)
        .enumerate()
        .map(|(k, (c, _))| Ok((c.clone(), tag(&sol.slacks[sigma_index(&s1, &s2) + 1 + k])?)))
        .collect::<Result<Vec<_>>>()?;
    let witness = Witness::decomposable(p, q, n, m, TraceNorm::None)?;

    let trace_of = |k: usize| sol.vars[k].trace().max(0.0);
    let (s, pi1) = match s1 {
        Some(_) => (trace_of(0), density_from_approx(&tag(&sol.vars[0])?)?),
        None => (0.0, maximally_mixed(&shape)),
    };
    let (t, pi2) = match s2 {
        Some(_) => {
            let k = usize::from(s1.is_some());
            (trace_of(k), density_from_approx(&tag(&sol.vars[k])?)?)
        }
        None => (0.0, maximally_mixed(&shape)),
    };
    let sigma_state = density_from_approx(&tag(&sol.vars[sigma_index(&s1, &s2)])?)?;
    debug_assert_eq!(g0, 0);

    let mut res = MeasureResult::new(sol.dual_obj, SDP_VALUE_TOL);
    res.witness = Some(witness);
    res.certificate = Some(MixingCertificate {
        s,
        t,
        sigma: sigma_state,
        pi1,
        pi2,
    });
    Ok(res)
}

fn sigma_index<A, B>(s1: &Option<A>, s2: &Option<B>) -> usize {
    usize::from(s1.is_some()) + usize::from(s2.is_some())
}

fn maximally_mixed(shape: &SystemShape) -> DensityMatrix {
    let d = shape.total_dim();
    DensityMatrix::new(
        HermitianMatrix::identity(d)
            .scale(1.0 / d as f64)
            .with_shape(shape.clone())
            .expect("dimension from shape"),
    )
    .expect("maximally mixed state is valid")
}

/// PPT relaxation of the random robustness: `max{0, −min Tr(Wρ)}` over
/// decomposable `W` with `Tr W = D` (total dimension).
pub fn rr_ppt(rho: &DensityMatrix, cut: &Cut) -> Result<MeasureResult> {
    let shape = shape_of(rho)?.clone();
    cut.validate(&shape)?;
    let d = rho.dim();
    let mut sdp = HermitianSdp::new();
    let sigma = sdp.add_var(d);
    let r = sdp.add_var(d);
    let s = sdp.add_scalar(ScalarKind::Nonnegative);
    sdp.add_scalar_objective(s, 1.0);
    sdp.add_equality(
        vec![(sigma, LinearMap::identity(d))],
        vec![(s, HermitianMatrix::identity(d).scale(-1.0 / d as f64))],
        rho.as_herm().clone(),
    )?;
    sdp.add_equality(
        vec![
            (r, LinearMap::identity(d)),
            (sigma, LinearMap::partial_transpose(&shape, cut)?.scaled(-1.0)),
        ],
        vec![],
        HermitianMatrix::zeros(d),
    )?;
    let sol = sdp.solve(&SdpOptions::default())?;
    let p = sol.slacks[0].clone().with_shape(shape.clone())?;
    let q = sol.slacks[1].clone().with_shape(shape.clone())?;
    let mut res = MeasureResult::new(sol.dual_obj, SDP_VALUE_TOL);
    res.witness = Some(Witness::decomposable(
        p,
        vec![(cut.clone(), q)],
        Bound::Infinite,
        Bound::Infinite,
        TraceNorm::TraceEqualsD,
    )?);
    Ok(res)
}

/// PPT-distillation fidelity: `max Tr(Dρ)` over `0 ⪯ D ⪯ I`,
/// `−I/d ⪯ D^{T_cut} ⪯ I/d`, for `d ⊗ d` states.
pub fn rains_fidelity(rho: &DensityMatrix, cut: &Cut) -> Result<f64> {
    let shape = shape_of(rho)?.clone();
    cut.validate(&shape)?;
    let (da, db) = shape.split_dims(cut);
    if da != db {
        return domain(format!("fidelity needs equal local dimensions, got {da} and {db}"));
    }
    let dim = rho.dim();
    let id = HermitianMatrix::identity(dim);
    let local = id.scale(1.0 / da as f64);
    let pt = LinearMap::partial_transpose(&shape, cut)?;

    let mut sdp = HermitianSdp::new();
    let dv = sdp.add_var(dim);
    let s1 = sdp.add_var(dim);
    let s2 = sdp.add_var(dim);
    let s3 = sdp.add_var(dim);
    sdp.add_objective(dv, rho.as_herm().scale(-1.0))?;
    sdp.add_equality(
        vec![(dv, LinearMap::identity(dim)), (s1, LinearMap::identity(dim))],
        vec![],
        id.clone(),
    )?;
    sdp.add_equality(
        vec![(dv, pt.clone()), (s2, LinearMap::identity(dim))],
        vec![],
        local.clone(),
    )?;
    sdp.add_equality(
        vec![(dv, pt.scaled(-1.0)), (s3, LinearMap::identity(dim))],
        vec![],
        local,
    )?;
    let sol = sdp.solve(&SdpOptions::default())?;
    hs_inner(&sol.vars[0], rho.as_herm())
}

/// Two-qubit concurrence `max{0, λ₁−λ₂−λ₃−λ₄}` from the spin-flipped spectrum.
///
/// With `ρ = AA†` and `ρ̃ = ÃÃ†`, `Ã = (σ_y⊗σ_y)A*`, the `λ_i` are the singular
/// values of `A†Ã`; taking them from an SVD avoids square roots of tiny
/// eigenvalues, which would cost half the working precision on pure states.
pub fn concurrence_2q(rho: &DensityMatrix) -> Result<f64> {
    let shape = shape_of(rho)?;
    if shape.local_dims() != [2, 2] {
        return domain(format!("concurrence needs a 2⊗2 state, got {:?}", shape.local_dims()));
    }
    let eig = rho.as_herm().eig()?;
    // σ_y⊗σ_y maps |ab⟩ to −|āb̄⟩ for a = b and +|āb̄⟩ otherwise
    let flip = |i: usize| -> (usize, f64) { (3 - i, if i == 0 || i == 3 { -1.0 } else { 1.0 }) };
    let a = DMatrix::from_fn(4, 4, |i, k| eig.vectors[(i, k)] * eig.values[k].max(0.0).sqrt());
    let a_tilde = DMatrix::from_fn(4, 4, |i, k| {
        let (j, sign) = flip(i);
        a[(j, k)].conj() * sign
    });
    let mut lam: Vec<f64> = (a.adjoint() * a_tilde).singular_values().iter().copied().collect();
    lam.sort_by(|x, y| y.total_cmp(x));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Superselection nonlocality: `max{0, −min Tr(Gρ)}` over Hermitian `G` with
/// nonnegative computational-basis diagonal and `G ⪯ I`.
pub fn ssr_nonlocality(rho: &DensityMatrix) -> Result<MeasureResult> {
    let shape = shape_of(rho)?.clone();
    let d = rho.dim();
    let mut sdp = HermitianSdp::new();
    // S = I − G ⪰ 0, and G_ii = 1 − S_ii = g_i ≥ 0
    let s = sdp.add_var(d);
    sdp.add_objective(s, rho.as_herm().scale(-1.0))?;
    for i in 0..d {
        let g = sdp.add_scalar(ScalarKind::Nonnegative);
        let pick = LinearMap::from_terms(d, 1, vec![(0, 0, i, i, C64::new(1.0, 0.0))])?;
        sdp.add_equality(
            vec![(s, pick)],
            vec![(g, HermitianMatrix::identity(1))],
            HermitianMatrix::identity(1),
        )?;
    }
    let sol = sdp.solve(&SdpOptions::default())?;
    let g = HermitianMatrix::identity(d).sub(&sol.vars[0])?.with_shape(shape)?;
    let val = -hs_inner(&g, rho.as_herm())?;
    let mut res = MeasureResult::new(val, SDP_VALUE_TOL);
    res.witness = Some(Witness {
        op: g,
        class: WitnessClass::SsrDiagonal,
        n: Bound::Infinite,
        m: Bound::Finite(1.0),
        trace_norm: TraceNorm::OpLeqI,
    });
    Ok(res)
}

/// Isometry from `Sym(B⊗B)` into `B⊗B`.
fn symmetric_isometry(db: usize) -> DMatrix<C64> {
    let s = db * (db + 1) / 2;
    let mut v = DMatrix::from_element(db * db, s, ZERO);
    let h = C64::new(0.5f64.sqrt(), 0.0);
    let mut col = 0;
    for i in 0..db {
        for j in i..db {
            if i == j {
                v[(i * db + i, col)] = C64::new(1.0, 0.0);
            } else {
                v[(i * db + j, col)] = h;
                v[(j * db + i, col)] = h;
            }
            col += 1;
        }
    }
    v
}

/// Exchanges the two parties of a bipartite operator.
fn swap_parties(m: &HermitianMatrix, shape: &SystemShape) -> Result<HermitianMatrix> {
    let (da, db) = (shape.local_dims()[0], shape.local_dims()[1]);
    let idx = |i: usize| (i % db) * da + i / db;
    let n = m.dim();
    let mut out = crate::herm::CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(idx(i), idx(j))] = m.get(i, j);
        }
    }
    HermitianMatrix::new(out)?.with_shape(SystemShape::bipartite(db, da))
}

/// Level-2 symmetric-extension bound on the generalized robustness:
/// `max{0, −min Tr(Wρ)}` over `W ⪯ I` nonnegative on every state that has a
/// PPT symmetric extension to two copies of the party outside `cut`.
pub fn rg_dps2(rho: &DensityMatrix, cut: &Cut) -> Result<MeasureResult> {
    let shape = shape_of(rho)?.clone();
    cut.validate(&shape)?;
    if shape.parties() != 2 {
        return domain("symmetric-extension bound needs a bipartite shape");
    }
    // Party A is the cut side; the extension copies the other party.
    let swapped = cut.parties() == [1];
    let (m, sh) = if swapped {
        let m = swap_parties(rho.as_herm(), &shape)?;
        let sh = m.shape().expect("shape set").clone();
        (m, sh)
    } else {
        (rho.as_herm().clone(), shape.clone())
    };
    let (da, db) = (sh.local_dims()[0], sh.local_dims()[1]);
    if da * db * db > DPS2_MAX_EXTENDED_DIM {
        return domain(format!(
            "extended dimension {} exceeds the cap {DPS2_MAX_EXTENDED_DIM}",
            da * db * db
        ));
    }
    let d = da * db;
    let sym_dim = db * (db + 1) / 2;
    let v = symmetric_isometry(db);
    let k = DMatrix::from_fn(da * db * db, da * sym_dim, |r, c| {
        let (a, rr) = (r / (db * db), r % (db * db));
        let (a2, cc) = (c / sym_dim, c % sym_dim);
        if a == a2 {
            v[(rr, cc)]
        } else {
            ZERO
        }
    });
    let embed = LinearMap::conjugation(&k);
    let ext_shape = SystemShape::new(vec![da, db, db])?;
    let sym_shape = SystemShape::new(vec![da, sym_dim])?;
    let reduce = LinearMap::partial_trace(&ext_shape, &Cut::new([0, 1])?)?.compose(&embed)?;
    let pt_b2 = LinearMap::partial_transpose(&ext_shape, &Cut::single(2))?.compose(&embed)?;
    let pt_a = LinearMap::partial_transpose(&sym_shape, &Cut::single(0))?;

    let mut sdp = HermitianSdp::new();
    let s1 = sdp.add_var(d);
    let xi = sdp.add_var(da * sym_dim);
    let ra = sdp.add_var(da * sym_dim);
    let rb = sdp.add_var(da * db * db);
    sdp.add_objective(s1, HermitianMatrix::identity(d))?;
    sdp.add_equality(vec![(xi, reduce), (s1, LinearMap::identity(d).scaled(-1.0))], vec![], m)?;
    sdp.add_equality(
        vec![(ra, LinearMap::identity(da * sym_dim)), (xi, pt_a.scaled(-1.0))],
        vec![],
        HermitianMatrix::zeros(da * sym_dim),
    )?;
    sdp.add_equality(
        vec![(rb, LinearMap::identity(da * db * db)), (xi, pt_b2.scaled(-1.0))],
        vec![],
        HermitianMatrix::zeros(da * db * db),
    )?;
    let sol = sdp.solve(&SdpOptions::default())?;
    let mut w = sol.multipliers[0].scale(-1.0).with_shape(sh)?;
    if swapped {
        w = swap_parties(&w, w.shape().expect("shape set"))?;
    }
    let mut res = MeasureResult::new(sol.dual_obj, SDP_VALUE_TOL);
    res.witness = Some(Witness {
        op: w.with_shape(shape)?,
        class: WitnessClass::Dps2Certified,
        n: Bound::Infinite,
        m: Bound::Finite(1.0),
        trace_norm: TraceNorm::OpLeqI,
    });
    Ok(res)
}

fn check_schmidt(c: &[f64]) -> Result<()> {
    if c.is_empty() {
        return domain("empty Schmidt list");
    }
    if c.iter().any(|&x| !(x >= -1e-12)) {
        return domain("Schmidt coefficients must be nonnegative");
    }
    if c.windows(2).any(|w| w[1] > w[0] + 1e-12) {
        return domain("Schmidt coefficients must be descending");
    }
    let norm: f64 = c.iter().map(|x| x * x).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return domain(format!("squared Schmidt coefficients sum to {norm}"));
    }
    Ok(())
}

/// Generalized robustness of a pure state: `(Σ c_j)² − 1`.
pub fn pure_rg(schmidt: &[f64]) -> Result<f64> {
    check_schmidt(schmidt)?;
    Ok(schmidt.iter().sum::<f64>().powi(2) - 1.0)
}

/// Random-robustness closed form of a pure state: `c₁·c₂`.
pub fn pure_rr(schmidt: &[f64]) -> Result<f64> {
    check_schmidt(schmidt)?;
    Ok(schmidt[0] * schmidt.get(1).copied().unwrap_or(0.0))
}

/// Closed form `min(n+1, d)·F − 1`, clipped at zero, for the isotropic state
/// `p·P⁺ + (1−p)·I/d²` with `F = p + (1−p)/d²`. `n` may be `+∞`.
///
/// This is the value of the witness `I − min(n+1, d)·P⁺`. It equals
/// `E^PPT_{n:1}` for `n ≥ d − 1`; for smaller `n` the optimum is
/// `min(n/(d−1), 1)·(dF − 1)` and this form is only a lower bound.
pub fn isotropic_e_n1(d: usize, p: f64, n: f64) -> Result<f64> {
    if d < 2 {
        return domain(format!("local dimension {d} < 2"));
    }
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("isotropic weight {p} outside [0, 1]"));
    }
    if !(n >= 0.0) {
        return domain(format!("bound n = {n} must be nonnegative"));
    }
    let dd = d as f64;
    let fidelity = p + (1.0 - p) / (dd * dd);
    Ok(((n + 1.0).min(dd) * fidelity - 1.0).max(0.0))
}
