//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! Complex input is diagonalized through its real symmetric embedding
//! `[[Re, -Im], [Im, Re]]`, whose spectrum is the doubled complex spectrum.
//! Real input skips the embedding.

use crate::error::{Error, Result};
use crate::herm::{CMatrix, HermitianMatrix, C64, ZERO};

/// Sweep cap before the solver gives up.
pub const MAX_SWEEPS: usize = 80;

/// Eigenvalues in descending order with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        let n = self.vectors.dim();
        (0..n).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `Σ f(λ_k) |v_k⟩⟨v_k|`
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.values.len();
        let weights: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = CMatrix::zeros(n);
        for (k, w) in weights.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * *w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        HermitianMatrix::symmetrized(out)
    }
}

/// Diagonalizes a real symmetric row-major matrix in place.
///
/// Returns eigenvalues (unsorted, diagonal order) and the row-major
/// eigenvector matrix whose columns are the eigenvectors.
pub(crate) fn jacobi_symmetric(n: usize, mut a: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    debug_assert_eq!(a.len(), n * n);
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 || n < 2 {
        return Ok(((0..n).map(|i| a[i * n + i]).collect(), v));
    }
    let floor = f64::EPSILON * 1e-2 * frob;

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if apq.abs() <= floor || apq.abs() <= f64::EPSILON * (app.abs() * aqq.abs()).sqrt() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            return Ok(((0..n).map(|i| a[i * n + i]).collect(), v));
        }
    }
    Err(Error::EigenNonConvergence(MAX_SWEEPS))
}

/// Real symmetric eigendecomposition sorted descending; vectors as columns.
pub(crate) fn eig_real_sorted(n: usize, a: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let (vals, vecs) = jacobi_symmetric(n, a)?;
    let order = descending_order(&vals);
    let values = order.iter().map(|&k| vals[k]).collect();
    let mut sorted = vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            sorted[i * n + new] = vecs[i * n + old];
        }
    }
    Ok((values, sorted))
}

fn descending_order(vals: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
    order
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
pub fn eig_hermitian(m: &HermitianMatrix) -> Result<HermitianEigen> {
    let n = m.dim();
    let c = m.as_cmatrix();
    if m.is_real() {
        let a: Vec<f64> = c.as_slice().iter().map(|z| z.re).collect();
        let (values, vecs) = eig_real_sorted(n, a)?;
        let vectors = CMatrix::from_vec(n, vecs.into_iter().map(|x| C64::new(x, 0.0)).collect())?;
        return Ok(HermitianEigen { values, vectors });
    }

    let nn = 2 * n;
    let mut a = vec![0.0; nn * nn];
    for i in 0..n {
        for j in 0..n {
            let z = c[(i, j)];
            a[i * nn + j] = z.re;
            a[(n + i) * nn + n + j] = z.re;
            a[(n + i) * nn + j] = z.im;
            a[i * nn + n + j] = -z.im;
        }
    }
    let (vals, vecs) = eig_real_sorted(nn, a)?;

    // Each complex eigenvalue appears twice; adjacent sorted entries pair up.
    let paired: Vec<f64> = (0..n).map(|k| 0.5 * (vals[2 * k] + vals[2 * k + 1])).collect();
    let scale = paired.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let cluster_tol = 1e-12 * scale.max(f64::MIN_POSITIVE);

    // Candidate complex vectors x + i y from real eigenvectors (x; y).
    let candidate = |k: usize| -> Vec<C64> {
        (0..n)
            .map(|i| C64::new(vecs[i * nn + k], vecs[(n + i) * nn + k]))
            .collect()
    };

    let mut accepted: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (paired[end - 1] - paired[end]).abs() <= cluster_tol {
            end += 1;
        }
        let want = end - start;
        let mut cands: Vec<Vec<C64>> = (2 * start..2 * end).map(candidate).collect();
        for cand in cands.iter_mut() {
            for _ in 0..2 {
                for q in &accepted {
                    project_out(cand, q);
                }
            }
        }
        for _ in 0..want {
            let (best, _) = cands
                .iter()
                .enumerate()
                .map(|(i, v)| (i, norm(v)))
                .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            let mut q = cands.swap_remove(best);
            for prev in &accepted {
                project_out(&mut q, prev);
            }
            let nq = norm(&q);
            if nq == 0.0 {
                return Err(Error::EigenNonConvergence(MAX_SWEEPS));
            }
            q.iter_mut().for_each(|z| *z /= nq);
            for cand in cands.iter_mut() {
                project_out(cand, &q);
            }
            accepted.push(q);
        }
        start = end;
    }

    let mut vectors = CMatrix::zeros(n);
    for (k, v) in accepted.iter().enumerate() {
        for i in 0..n {
            vectors[(i, k)] = v[i];
        }
    }
    Ok(HermitianEigen {
        values: paired,
        vectors,
    })
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn project_out(v: &mut [C64], q: &[C64]) {
    let overlap: C64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    if overlap == ZERO {
        return;
    }
    for (x, a) in v.iter_mut().zip(q) {
        *x -= overlap * a;
    }
}
