//! Dense complex Hermitian linear algebra with multipartite index bookkeeping.
//!
//! Subsystems are ordered row-major: the first subsystem is the slowest-varying
//! digit of a basis index. Every routine in the crate relies on that convention.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eig::{eig_hermitian, HermitianEigen};
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest asymmetric part accepted when building a [`HermitianMatrix`].
pub const HERMITICITY_REJECT: f64 = 1e-9;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Local dimensions of a k-partite system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemShape {
    local_dims: Vec<usize>,
}

impl SystemShape {
    pub fn new(local_dims: Vec<usize>) -> Result<Self> {
        if local_dims.is_empty() {
            return Err(Error::Domain("a shape needs at least one subsystem".into()));
        }
        if local_dims.contains(&0) {
            return Err(Error::Domain(format!("zero local dimension in {local_dims:?}")));
        }
        Ok(Self { local_dims })
    }

    pub fn bipartite(d_a: usize, d_b: usize) -> Self {
        Self::new(vec![d_a, d_b]).expect("positive local dimensions")
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn parties(&self) -> usize {
        self.local_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.local_dims.iter().product()
    }

    pub fn concat(&self, other: &SystemShape) -> SystemShape {
        let mut dims = self.local_dims.clone();
        dims.extend_from_slice(&other.local_dims);
        SystemShape { local_dims: dims }
    }

    /// Stride of each subsystem digit in a flat basis index.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.local_dims.len()];
        for k in (0..self.local_dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.local_dims[k + 1];
        }
        strides
    }

    /// Product of the local dimensions inside and outside `cut`.
    pub fn split_dims(&self, cut: &Cut) -> (usize, usize) {
        let inside: usize = cut.parties().iter().map(|&k| self.local_dims[k]).product();
        (inside, self.total_dim() / inside)
    }

    /// Shape restricted to the given parties, in their original order.
    pub fn restrict(&self, parties: &[usize]) -> SystemShape {
        SystemShape {
            local_dims: parties.iter().map(|&k| self.local_dims[k]).collect(),
        }
    }
}

/// A set of subsystem indices (0-based) defining one side of a bipartition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cut {
    parties: Vec<usize>,
}

impl Cut {
    pub fn new(parties: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut parties: Vec<usize> = parties.into_iter().collect();
        parties.sort_unstable();
        parties.dedup();
        if parties.is_empty() {
            return Err(Error::InvalidCut("empty party set".into()));
        }
        Ok(Self { parties })
    }

    /// Cut consisting of a single party.
    pub fn single(party: usize) -> Self {
        Self { parties: vec![party] }
    }

    pub fn parties(&self) -> &[usize] {
        &self.parties
    }

    pub fn contains(&self, party: usize) -> bool {
        self.parties.binary_search(&party).is_ok()
    }

    /// Checks that the cut is a nonempty proper subset of the shape's parties.
    pub fn validate(&self, shape: &SystemShape) -> Result<()> {
        let k = shape.parties();
        if let Some(&bad) = self.parties.iter().find(|&&p| p >= k) {
            return Err(Error::InvalidCut(format!(
                "party index {bad} out of range for {k} subsystems"
            )));
        }
        if self.parties.len() == k {
            return Err(Error::InvalidCut("cut must be a proper subset".into()));
        }
        Ok(())
    }

    pub fn complement(&self, shape: &SystemShape) -> Cut {
        Cut {
            parties: (0..shape.parties()).filter(|p| !self.contains(*p)).collect(),
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parties.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

/// Dense square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_vec(n: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n, "matrix product dimension mismatch");
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let orow = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        CMatrix { n, data: out }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (n, m) = (self.n, other.n);
        let mut out = CMatrix::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.data[(i * m + k) * (n * m) + j * m + l] = a * other.data[k * m + l];
                    }
                }
            }
        }
        out
    }

    /// Largest entry of the anti-Hermitian part `(m - m†)/2`.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()) * 0.5;
                worst = worst.max(d.norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// Dense Hermitian operator, optionally tagged with its subsystem shape.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    mat: CMatrix,
    shape: Option<SystemShape>,
}

impl HermitianMatrix {
    /// Symmetrizes `(m + m†)/2`, rejecting inputs whose anti-Hermitian part
    /// exceeds [`HERMITICITY_REJECT`].
    pub fn new(mat: CMatrix) -> Result<Self> {
        let asym = mat.max_asymmetry();
        if asym > HERMITICITY_REJECT {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self::symmetrized(mat))
    }

    /// Symmetrizes without the rejection check. For internal results that are
    /// Hermitian up to solver or rounding residue.
    pub(crate) fn symmetrized(mut mat: CMatrix) -> Self {
        let n = mat.n;
        for i in 0..n {
            let d = mat.data[i * n + i];
            mat.data[i * n + i] = C64::new(d.re, 0.0);
            for j in i + 1..n {
                let avg = (mat.data[i * n + j] + mat.data[j * n + i].conj()) * 0.5;
                mat.data[i * n + j] = avg;
                mat.data[j * n + i] = avg.conj();
            }
        }
        Self { mat, shape: None }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(CMatrix::from_fn(n, f))
    }

    /// Builds from a row-major real symmetric array.
    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        Self::from_fn(n, |i, j| C64::new(entries[i * n + j], 0.0))
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            mat: CMatrix::zeros(n),
            shape: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: CMatrix::identity(n),
            shape: None,
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut mat = CMatrix::zeros(n);
        for (i, v) in values.iter().enumerate() {
            mat[(i, i)] = C64::new(*v, 0.0);
        }
        Self { mat, shape: None }
    }

    /// Rank-one operator `|v⟩⟨v|` (not normalized).
    pub fn projector(v: &[C64]) -> Self {
        let n = v.len();
        Self {
            mat: CMatrix::from_fn(n, |i, j| v[i] * v[j].conj()),
            shape: None,
        }
    }

    pub fn with_shape(mut self, shape: SystemShape) -> Result<Self> {
        if shape.total_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: shape.total_dim(),
            });
        }
        self.shape = Some(shape);
        Ok(self)
    }

    pub(crate) fn with_shape_of(mut self, other: &HermitianMatrix) -> Self {
        if other.dim() == self.dim() {
            self.shape = other.shape.clone();
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.mat.n
    }

    pub fn shape(&self) -> Option<&SystemShape> {
        self.shape.as_ref()
    }

    pub(crate) fn require_shape(&self) -> Result<&SystemShape> {
        self.shape.as_ref().ok_or(Error::MissingShape)
    }

    pub fn as_cmatrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_cmatrix(self) -> CMatrix {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.mat.data.iter().all(|z| z.im == 0.0)
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    fn check_dim(&self, other: &HermitianMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.check_dim(other)?;
        Ok(Self {
            mat: self.mat.add(&other.mat),
            shape: self.shape.clone(),
        })
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.check_dim(other)?;
        Ok(Self {
            mat: self.mat.sub(&other.mat),
            shape: self.shape.clone(),
        })
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        Self {
            mat: self.mat.scale(C64::new(s, 0.0)),
            shape: self.shape.clone(),
        }
    }

    /// `a·self + b·other`
    pub fn combine(&self, a: f64, other: &HermitianMatrix, b: f64) -> Result<HermitianMatrix> {
        self.check_dim(other)?;
        let data = self
            .mat
            .data
            .iter()
            .zip(&other.mat.data)
            .map(|(x, y)| x * a + y * b)
            .collect();
        Ok(Self {
            mat: CMatrix { n: self.dim(), data },
            shape: self.shape.clone().or_else(|| other.shape.clone()),
        })
    }

    /// `U · self · U†`
    pub fn conjugate_by(&self, u: &CMatrix) -> HermitianMatrix {
        Self::symmetrized(u.mul(&self.mat).mul(&u.adjoint()))
    }

    /// `⟨v|self|v⟩`
    pub fn expectation(&self, v: &[C64]) -> f64 {
        let mv = self.mat.mul_vec(v);
        v.iter().zip(&mv).map(|(a, b)| (a.conj() * b).re).sum()
    }

    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        self.mat
            .data
            .iter()
            .zip(&other.mat.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn eig(&self) -> Result<HermitianEigen> {
        eig_hermitian(self)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eig_hermitian(self)?.values)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("nonempty spectrum"))
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.mat[idx]
    }
}

/// Kronecker product; shapes concatenate (a missing shape counts as one party).
pub fn tensor(a: &HermitianMatrix, b: &HermitianMatrix) -> HermitianMatrix {
    let sa = a
        .shape
        .clone()
        .unwrap_or_else(|| SystemShape::new(vec![a.dim()]).expect("positive dim"));
    let sb = b
        .shape
        .clone()
        .unwrap_or_else(|| SystemShape::new(vec![b.dim()]).expect("positive dim"));
    HermitianMatrix {
        mat: a.mat.kron(&b.mat),
        shape: Some(sa.concat(&sb)),
    }
}

/// For each flat index, the part contributed by the digits of `parties`.
pub(crate) fn digit_part(shape: &SystemShape, parties: &[usize]) -> Vec<usize> {
    let strides = shape.strides();
    let dims = shape.local_dims();
    (0..shape.total_dim())
        .map(|i| parties.iter().map(|&k| ((i / strides[k]) % dims[k]) * strides[k]).sum())
        .collect()
}

/// Compact index of each flat index restricted to `parties` (row-major over them).
pub(crate) fn compact_index(shape: &SystemShape, parties: &[usize]) -> Vec<usize> {
    let strides = shape.strides();
    let dims = shape.local_dims();
    (0..shape.total_dim())
        .map(|i| {
            parties
                .iter()
                .fold(0, |acc, &k| acc * dims[k] + (i / strides[k]) % dims[k])
        })
        .collect()
}

/// Index map of the partial transpose: entry `(i, j)` moves to the returned pair.
pub(crate) fn partial_transpose_map(shape: &SystemShape, cut: &Cut) -> impl Fn(usize, usize) -> (usize, usize) {
    let part = digit_part(shape, cut.parties());
    move |i, j| {
        let (pi, pj) = (part[i], part[j]);
        (i - pi + pj, j - pj + pi)
    }
}

/// Transposes the indices of the subsystems in `cut`.
pub fn partial_transpose(m: &HermitianMatrix, cut: &Cut) -> Result<HermitianMatrix> {
    let shape = m.require_shape()?;
    cut.validate(shape)?;
    let n = m.dim();
    let map = partial_transpose_map(shape, cut);
    let mut out = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = map(i, j);
            out[(a, b)] = m.mat[(i, j)];
        }
    }
    Ok(HermitianMatrix {
        mat: out,
        shape: Some(shape.clone()),
    })
}

/// Traces out every subsystem not in `keep`. The result carries the kept shape.
pub fn partial_trace(m: &HermitianMatrix, keep: &Cut) -> Result<HermitianMatrix> {
    let shape = m.require_shape()?;
    keep.validate(shape)?;
    let traced = keep.complement(shape);
    let kept_idx = compact_index(shape, keep.parties());
    let traced_idx = compact_index(shape, traced.parties());
    let out_shape = shape.restrict(keep.parties());
    let n_out = out_shape.total_dim();
    let n = m.dim();
    let mut out = CMatrix::zeros(n_out);
    for i in 0..n {
        for j in 0..n {
            if traced_idx[i] == traced_idx[j] {
                out[(kept_idx[i], kept_idx[j])] += m.mat[(i, j)];
            }
        }
    }
    Ok(HermitianMatrix {
        mat: out,
        shape: Some(out_shape),
    })
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(m: &HermitianMatrix) -> Result<f64> {
    Ok(m.eigenvalues()?.iter().map(|l| l.abs()).sum())
}

/// `Tr(a·b)`, real for Hermitian arguments.
pub fn hs_inner(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    a.check_dim(b)?;
    Ok(a.mat.data.iter().zip(&b.mat.data).map(|(x, y)| (x * y.conj()).re).sum())
}
