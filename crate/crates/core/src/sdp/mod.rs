//! Dense semidefinite programs in standard block form.
//!
//! Primal: minimize `⟨C, X⟩` subject to `⟨A_i, X⟩ = b_i`, `X ⪰ 0`.
//! Dual: maximize `bᵀy` subject to `Σ y_i A_i + Z = C`, `Z ⪰ 0`.
//! `X`, `Z`, `C` and every `A_i` are block-diagonal with real symmetric blocks.

mod assemble;
mod solver;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herm::HermitianMatrix;

pub use assemble::{HermitianSdp, HermitianSolution, LinearMap, ScalarId, ScalarKind, VarId};
pub use solver::solve;

/// Block-diagonal real symmetric matrix.
pub type BlockMatrix = Vec<DMatrix<f64>>;

/// Symmetric sparse block stored as its upper triangle `(i, j, v)` with `i ≤ j`.
/// An off-diagonal entry stands for both `(i, j)` and `(j, i)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SparseSym {
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    /// Collects accumulated entries, dropping those below `drop_tol` in magnitude.
    pub fn from_map(map: BTreeMap<(usize, usize), f64>, drop_tol: f64) -> Self {
        Self {
            entries: map
                .into_iter()
                .filter(|(_, v)| v.abs() > drop_tol)
                .map(|((i, j), v)| (i, j, v))
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `⟨self, x⟩ = Tr(self · x)`
    pub fn dot(&self, x: &DMatrix<f64>) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| if i == j { v * x[(i, i)] } else { 2.0 * v * x[(i, j)] })
            .sum()
    }

    pub fn dot_sparse(&self, other: &SparseSym) -> f64 {
        let mut map = BTreeMap::new();
        for &(i, j, v) in &other.entries {
            map.insert((i, j), v);
        }
        self.entries
            .iter()
            .filter_map(|&(i, j, v)| map.get(&(i, j)).map(|w| if i == j { v * w } else { 2.0 * v * w }))
            .sum()
    }

    /// `m += alpha · self`
    pub fn add_to(&self, alpha: f64, m: &mut DMatrix<f64>) {
        for &(i, j, v) in &self.entries {
            m[(i, j)] += alpha * v;
            if i != j {
                m[(j, i)] += alpha * v;
            }
        }
    }

    pub fn to_dense(&self, n: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        self.add_to(1.0, &mut m);
        m
    }
}

/// One equality constraint: the nonzero blocks of `A_i`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub terms: Vec<(usize, SparseSym)>,
}

impl Constraint {
    pub fn dot(&self, x: &[DMatrix<f64>]) -> f64 {
        self.terms.iter().map(|(b, a)| a.dot(&x[*b])).sum()
    }

    pub fn dot_constraint(&self, other: &Constraint) -> f64 {
        let mut total = 0.0;
        for (b, a) in &self.terms {
            for (b2, a2) in &other.terms {
                if b == b2 {
                    total += a.dot_sparse(a2);
                }
            }
        }
        total
    }
}

/// Standard-form SDP. The JSON dump uses the field names `blocks`, `C`, `A`, `b`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    pub blocks: Vec<usize>,
    #[serde(rename = "C")]
    pub c: Vec<SparseSym>,
    #[serde(rename = "A")]
    pub constraints: Vec<Constraint>,
    pub b: Vec<f64>,
}

impl SdpProblem {
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Checks shapes, index ranges and linear independence of the `A_i`
    /// (smallest Gram eigenvalue relative to the largest above 1e-10).
    pub fn validate(&self) -> Result<()> {
        if self.c.len() != self.blocks.len() {
            return Err(Error::DimensionMismatch {
                expected: self.blocks.len(),
                got: self.c.len(),
            });
        }
        if self.b.len() != self.constraints.len() {
            return Err(Error::DimensionMismatch {
                expected: self.constraints.len(),
                got: self.b.len(),
            });
        }
        let check = |blk: usize, s: &SparseSym| -> Result<()> {
            let n = *self
                .blocks
                .get(blk)
                .ok_or_else(|| Error::Parse(format!("block index {blk} out of range")))?;
            for &(i, j, v) in &s.entries {
                if i > j || j >= n || !v.is_finite() {
                    return Err(Error::Parse(format!("bad entry ({i}, {j}, {v}) in block {blk}")));
                }
            }
            Ok(())
        };
        for (blk, s) in self.c.iter().enumerate() {
            check(blk, s)?;
        }
        for con in &self.constraints {
            for (blk, s) in &con.terms {
                check(*blk, s)?;
            }
        }
        let m = self.constraints.len();
        if m == 0 {
            return Ok(());
        }
        let gram = DMatrix::from_fn(m, m, |i, j| self.constraints[i].dot_constraint(&self.constraints[j]));
        let eig = SymmetricEigen::new(gram).eigenvalues;
        let max = eig.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let min = eig.iter().fold(f64::INFINITY, |a, &v| a.min(v));
        if max == 0.0 || min <= 1e-10 * max {
            return Err(Error::Parse(format!(
                "constraint matrices are linearly dependent (Gram eigenvalue ratio {:.3e})",
                if max == 0.0 { 0.0 } else { min / max }
            )));
        }
        Ok(())
    }

    /// `A(X)`
    pub fn apply(&self, x: &[DMatrix<f64>]) -> Vec<f64> {
        self.constraints.iter().map(|c| c.dot(x)).collect()
    }

    /// `Σ y_i A_i`
    pub fn adjoint(&self, y: &[f64]) -> BlockMatrix {
        let mut out: BlockMatrix = self.blocks.iter().map(|&n| DMatrix::zeros(n, n)).collect();
        for (con, &yi) in self.constraints.iter().zip(y) {
            if yi == 0.0 {
                continue;
            }
            for (blk, a) in &con.terms {
                a.add_to(yi, &mut out[*blk]);
            }
        }
        out
    }

    pub fn objective(&self, x: &[DMatrix<f64>]) -> f64 {
        self.c.iter().zip(x).map(|(c, xb)| c.dot(xb)).sum()
    }

    pub fn c_dense(&self) -> BlockMatrix {
        self.c.iter().zip(&self.blocks).map(|(c, &n)| c.to_dense(n)).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Solver termination status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SdpStatus {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct SdpOptions {
    pub max_iter: usize,
    /// Relative duality-gap target.
    pub gap_tol: f64,
    /// Relative primal and dual residual target.
    pub feas_tol: f64,
    /// Fraction of the step to the cone boundary.
    pub step_fraction: f64,
    /// Run the Gram-matrix independence check before solving.
    pub check_independence: bool,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            gap_tol: 1e-9,
            feas_tol: 1e-9,
            step_fraction: 0.98,
            check_independence: false,
        }
    }
}

/// Objective values and residuals of one interior-point iterate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterateRecord {
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub mu: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub x: BlockMatrix,
    pub y: Vec<f64>,
    pub z: BlockMatrix,
    pub primal_obj: f64,
    pub dual_obj: f64,
    /// `⟨C, X⟩ − bᵀy`
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub status: SdpStatus,
    pub iterations: usize,
    pub history: Vec<IterateRecord>,
}

impl SdpSolution {
    /// Errors unless the status is `Optimal`.
    pub fn require_optimal(self) -> Result<Self> {
        match self.status {
            SdpStatus::Optimal => Ok(self),
            s => Err(Error::Solver(s)),
        }
    }
}

/// Real symmetric embedding `[[Re, −Im], [Im, Re]]` of a Hermitian matrix.
pub fn embed_hermitian(h: &HermitianMatrix) -> DMatrix<f64> {
    let n = h.dim();
    DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = h.get(r % n, c % n);
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (false, true) => z.im,
            (true, false) => -z.im,
        }
    })
}
