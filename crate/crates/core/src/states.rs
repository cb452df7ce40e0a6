//! Density matrices and the state families used throughout the crate.

use nalgebra::DMatrix;

use crate::eig::HermitianEigen;
use crate::error::{domain, Error, Result};
use crate::herm::{
    compact_index, partial_trace, partial_transpose, tensor, CMatrix, Cut, HermitianMatrix, SystemShape, C64, ONE, ZERO,
};
use crate::io::MatrixJson;
use crate::rng::StateRng;

/// Most negative eigenvalue tolerated in a density matrix.
pub const PSD_TOL: f64 = 1e-10;
/// Allowed deviation of the trace from 1.
pub const TRACE_TOL: f64 = 1e-10;

/// Positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: HermitianMatrix,
}

impl DensityMatrix {
    pub fn new(mat: HermitianMatrix) -> Result<Self> {
        let tr = mat.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let lmin = mat.min_eigenvalue()?;
        if lmin < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lmin:.3e}")));
        }
        Ok(Self { mat })
    }

    /// Rescales a positive operator to unit trace, then validates.
    pub fn normalized(mat: HermitianMatrix) -> Result<Self> {
        let tr = mat.trace();
        if tr <= 0.0 {
            return Err(Error::InvalidState(format!("nonpositive trace {tr}")));
        }
        Self::new(mat.scale(1.0 / tr))
    }

    /// For operators that are density matrices by construction.
    pub(crate) fn trusted(mat: HermitianMatrix) -> Self {
        Self { mat }
    }

    pub fn as_herm(&self) -> &HermitianMatrix {
        &self.mat
    }

    pub fn into_herm(self) -> HermitianMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn shape(&self) -> Option<&SystemShape> {
        self.mat.shape()
    }

    pub fn with_shape(self, shape: SystemShape) -> Result<Self> {
        Ok(Self {
            mat: self.mat.with_shape(shape)?,
        })
    }

    pub fn purity(&self) -> f64 {
        self.mat.as_cmatrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn partial_transpose(&self, cut: &Cut) -> Result<HermitianMatrix> {
        partial_transpose(&self.mat, cut)
    }

    pub fn partial_trace(&self, keep: &Cut) -> Result<DensityMatrix> {
        Ok(Self::trusted(partial_trace(&self.mat, keep)?))
    }

    /// `w·self + (1−w)·other`
    pub fn mix(&self, w: f64, other: &DensityMatrix) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&w) {
            return domain(format!("mixing weight {w} outside [0, 1]"));
        }
        Ok(Self::trusted(self.mat.combine(w, &other.mat, 1.0 - w)?))
    }

    /// `e·self + (1−e)·I/D`
    pub fn with_white_noise(&self, e: f64) -> Result<DensityMatrix> {
        let d = self.dim();
        let mixed = Self::trusted(
            HermitianMatrix::identity(d)
                .scale(1.0 / d as f64)
                .with_shape_of(&self.mat),
        );
        self.mix(e, &mixed)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::trusted(tensor(&self.mat, &other.mat))
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_hermitian(&self.mat)
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        Self::new(json.to_hermitian()?)
    }
}

/// Normalized state vector with subsystem shape.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    shape: SystemShape,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, shape: SystemShape) -> Result<Self> {
        if amplitudes.len() != shape.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: shape.total_dim(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("state vector norm {norm}")));
        }
        Ok(Self { amplitudes, shape })
    }

    /// Divides by the norm before validating.
    pub fn normalized(amplitudes: Vec<C64>, shape: SystemShape) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect(), shape)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn density(&self) -> DensityMatrix {
        let mat = HermitianMatrix::projector(&self.amplitudes)
            .with_shape(self.shape.clone())
            .expect("shape matches amplitude count");
        DensityMatrix::trusted(mat)
    }
}

fn real_vec(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

fn bipartite_shape(d: usize) -> SystemShape {
    SystemShape::bipartite(d, d)
}

/// `(1/√d) Σ_i |ii⟩`
pub fn max_entangled_vector(d: usize) -> Result<PureState> {
    if d < 2 {
        return domain(format!("local dimension {d} < 2"));
    }
    let mut amps = vec![ZERO; d * d];
    for i in 0..d {
        amps[i * d + i] = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    }
    PureState::new(amps, bipartite_shape(d))
}

/// Projector onto the maximally entangled vector of `d ⊗ d`.
pub fn max_entangled(d: usize) -> Result<DensityMatrix> {
    Ok(max_entangled_vector(d)?.density())
}

/// `p·P⁺ + (1−p)·I/d²`
pub fn isotropic(d: usize, p: f64) -> Result<DensityMatrix> {
    let pplus = max_entangled(d)?;
    let lo = -1.0 / ((d * d - 1) as f64);
    if !(lo - 1e-15..=1.0 + 1e-15).contains(&p) {
        return Err(Error::InvalidState(format!("isotropic weight {p} outside [{lo}, 1]")));
    }
    let dd = (d * d) as f64;
    let mat = pplus
        .as_herm()
        .combine(p, &HermitianMatrix::identity(d * d), (1.0 - p) / dd)?;
    Ok(DensityMatrix::trusted(mat))
}

/// The 3⊗3 bound-entangled family with parameter `a ∈ (0, 1)`, unit trace.
pub fn horodecki_3x3(a: f64) -> Result<DensityMatrix> {
    if !(a > 0.0 && a < 1.0) {
        return domain(format!("horodecki parameter {a} outside (0, 1)"));
    }
    let mut m = vec![0.0; 81];
    for &i in &[0, 4, 8] {
        for &j in &[0, 4, 8] {
            m[i * 9 + j] = a;
        }
    }
    for &i in &[1, 2, 3, 5, 7] {
        m[i * 9 + i] = a;
    }
    m[6 * 9 + 6] = (1.0 + a) / 2.0;
    m[8 * 9 + 8] = (1.0 + a) / 2.0;
    let off = (1.0 - a * a).sqrt() / 2.0;
    m[6 * 9 + 8] = off;
    m[8 * 9 + 6] = off;
    let norm = 8.0 * a + 1.0;
    m.iter_mut().for_each(|x| *x /= norm);
    let mat = HermitianMatrix::from_real(9, &m)?.with_shape(bipartite_shape(3))?;
    Ok(DensityMatrix::trusted(mat))
}

/// `(|001⟩ + |010⟩ + |100⟩)/√3`
pub fn w_vector() -> PureState {
    let s = 1.0 / 3f64.sqrt();
    let mut amps = vec![0.0; 8];
    amps[1] = s;
    amps[2] = s;
    amps[4] = s;
    PureState::new(real_vec(&amps), SystemShape::new(vec![2, 2, 2]).unwrap()).unwrap()
}

/// `(|000⟩ + |111⟩)/√2`
pub fn ghz_vector() -> PureState {
    let s = 0.5f64.sqrt();
    let mut amps = vec![0.0; 8];
    amps[0] = s;
    amps[7] = s;
    PureState::new(real_vec(&amps), SystemShape::new(vec![2, 2, 2]).unwrap()).unwrap()
}

/// `q|W⟩⟨W| + (1−q)|GHZ⟩⟨GHZ|`
pub fn w_ghz_mix(q: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&q) {
        return domain(format!("mixing weight {q} outside [0, 1]"));
    }
    w_vector().density().mix(q, &ghz_vector().density())
}

/// Two-qubit state `¼(|00⟩⟨00| + |11⟩⟨11|) + ½|Ψ₊⟩⟨Ψ₊|`, `Ψ₊ = (|01⟩+|10⟩)/√2`.
pub fn vc_ssr_state() -> DensityMatrix {
    let mut m = vec![0.0; 16];
    for i in 0..4 {
        m[i * 4 + i] = 0.25;
    }
    m[4 + 2] = 0.25;
    m[2 * 4 + 1] = 0.25;
    let mat = HermitianMatrix::from_real(4, &m)
        .and_then(|h| h.with_shape(bipartite_shape(2)))
        .expect("fixed valid matrix");
    DensityMatrix::trusted(mat)
}

/// Normalized projector onto the antisymmetric subspace of `d ⊗ d`,
/// equal to `(I − d·(P⁺)^{T_A})/(d² − d)`.
pub fn antisymmetric_werner(d: usize) -> Result<DensityMatrix> {
    if d < 2 {
        return domain(format!("local dimension {d} < 2"));
    }
    let norm = (d * d - d) as f64;
    let mat = HermitianMatrix::from_fn(d * d, |r, c| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (c / d, c % d);
        let id = if r == c { 1.0 } else { 0.0 };
        let swap = if i == l && j == k { 1.0 } else { 0.0 };
        C64::new((id - swap) / norm, 0.0)
    })?
    .with_shape(bipartite_shape(d))?;
    Ok(DensityMatrix::trusted(mat))
}

/// Hilbert–Schmidt random state: `GG†/Tr(GG†)` with Ginibre `G`.
pub fn random_density(shape: &SystemShape, rng: &mut StateRng) -> DensityMatrix {
    let d = shape.total_dim();
    let g = CMatrix::from_fn(d, |_, _| rng.complex_gaussian());
    let ggd = HermitianMatrix::symmetrized(g.mul(&g.adjoint()));
    let tr = ggd.trace();
    let mat = ggd
        .scale(1.0 / tr)
        .with_shape(shape.clone())
        .expect("dimension from shape");
    DensityMatrix::trusted(mat)
}

/// Haar-random pure state.
pub fn random_pure(shape: &SystemShape, rng: &mut StateRng) -> PureState {
    let amps = (0..shape.total_dim()).map(|_| rng.complex_gaussian()).collect();
    PureState::normalized(amps, shape.clone()).expect("gaussian vector is nonzero")
}

/// `exp(−βh)/Z` using a precomputed eigendecomposition of `h`.
pub fn thermal_from_eigen(eig: &HermitianEigen, beta: f64, shape: Option<&SystemShape>) -> Result<DensityMatrix> {
    if !(beta >= 0.0) {
        return domain(format!("inverse temperature {beta} < 0"));
    }
    let lmin = *eig.values.last().expect("nonempty spectrum");
    let z: f64 = eig.values.iter().map(|l| (-beta * (l - lmin)).exp()).sum();
    let mut mat = eig.map_spectrum(|l| (-beta * (l - lmin)).exp() / z);
    if let Some(s) = shape {
        mat = mat.with_shape(s.clone())?;
    }
    Ok(DensityMatrix::trusted(mat))
}

/// Gibbs state of `h` at inverse temperature `beta`.
pub fn thermal(h: &HermitianMatrix, beta: f64) -> Result<DensityMatrix> {
    thermal_from_eigen(&h.eig()?, beta, h.shape())
}

/// Schmidt coefficients of `p` across `cut`, descending.
pub fn schmidt(p: &PureState, cut: &Cut) -> Result<Vec<f64>> {
    let shape = p.shape();
    cut.validate(shape)?;
    let rest = cut.complement(shape);
    let (da, db) = shape.split_dims(cut);
    let row = compact_index(shape, cut.parties());
    let col = compact_index(shape, rest.parties());
    let mut m = DMatrix::<C64>::zeros(da, db);
    for (i, amp) in p.amplitudes().iter().enumerate() {
        m[(row[i], col[i])] = *amp;
    }
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Computational basis product `|i_1 … i_k⟩`.
pub fn basis_state(shape: &SystemShape, digits: &[usize]) -> Result<PureState> {
    if digits.len() != shape.parties() {
        return Err(Error::DimensionMismatch {
            expected: shape.parties(),
            got: digits.len(),
        });
    }
    let mut idx = 0;
    for (d, (&digit, &dim)) in digits.iter().zip(shape.local_dims()).enumerate() {
        if digit >= dim {
            return domain(format!("digit {digit} of party {d} exceeds dimension {dim}"));
        }
        idx = idx * dim + digit;
    }
    let mut amps = vec![ZERO; shape.total_dim()];
    amps[idx] = ONE;
    PureState::new(amps, shape.clone())
}
