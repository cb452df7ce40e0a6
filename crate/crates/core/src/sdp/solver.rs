//! Infeasible primal–dual interior-point method with the HKM search direction
//! and Mehrotra predictor–corrector steps.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen, LU};

use super::{BlockMatrix, IterateRecord, SdpOptions, SdpProblem, SdpSolution, SdpStatus};
use crate::error::Result;

/// Residual level accepted when the iteration stalls before reaching the targets.
const STALL_TOL: f64 = 1e-7;
/// Iterate norm beyond which the problem is declared infeasible.
const DIVERGENCE: f64 = 1e8;

/// Constraint entries grouped by block, with the symmetric-unit scale folded in:
/// `A = Σ w (e_p e_qᵀ + e_q e_pᵀ)` where `w = v` off the diagonal and `v/2` on it.
struct Structure {
    rows: Vec<Vec<(usize, Vec<(usize, usize, f64)>)>>,
}

impl Structure {
    fn new(p: &SdpProblem) -> Self {
        let rows = p
            .constraints
            .iter()
            .map(|con| {
                let mut terms: Vec<(usize, Vec<(usize, usize, f64)>)> = con
                    .terms
                    .iter()
                    .map(|(blk, a)| {
                        let entries = a
                            .entries
                            .iter()
                            .map(|&(i, j, v)| (i, j, if i == j { 0.5 * v } else { v }))
                            .collect();
                        (*blk, entries)
                    })
                    .collect();
                terms.sort_by_key(|t| t.0);
                terms
            })
            .collect();
        Self { rows }
    }

    /// Schur complement `M_ij = Tr(A_i X A_j Z⁻¹)`.
    fn schur(&self, x: &BlockMatrix, zi: &BlockMatrix) -> DMatrix<f64> {
        let m = self.rows.len();
        let mut out = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let mut total = 0.0;
                let (ri, rj) = (&self.rows[i], &self.rows[j]);
                let (mut a, mut b) = (0, 0);
                while a < ri.len() && b < rj.len() {
                    match ri[a].0.cmp(&rj[b].0) {
                        std::cmp::Ordering::Less => a += 1,
                        std::cmp::Ordering::Greater => b += 1,
                        std::cmp::Ordering::Equal => {
                            let blk = ri[a].0;
                            let (xb, zb) = (&x[blk], &zi[blk]);
                            for &(p, q, w1) in &ri[a].1 {
                                for &(r, c, w2) in &rj[b].1 {
                                    let t = xb[(q, r)] * zb[(c, p)]
                                        + xb[(q, c)] * zb[(r, p)]
                                        + xb[(p, r)] * zb[(c, q)]
                                        + xb[(p, c)] * zb[(r, q)];
                                    total += w1 * w2 * t;
                                }
                            }
                            a += 1;
                            b += 1;
                        }
                    }
                }
                out[(i, j)] = total;
                out[(j, i)] = total;
            }
        }
        out
    }
}

fn inner(a: &BlockMatrix, b: &BlockMatrix) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn frob(a: &BlockMatrix) -> f64 {
    a.iter().map(|x| x.norm_squared()).sum::<f64>().sqrt()
}

fn max_abs(a: &BlockMatrix) -> f64 {
    a.iter().flat_map(|x| x.iter()).fold(0.0f64, |m, v| m.max(v.abs()))
}

fn sym(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

fn inverse_spd(blocks: &BlockMatrix) -> Option<BlockMatrix> {
    blocks
        .iter()
        .map(|b| Cholesky::new(b.clone()).map(|c| sym(c.inverse())))
        .collect()
}

/// Largest `α ≤ cap` keeping `x + α·dx ⪰ 0`, scaled by `fraction`.
fn max_step(x: &BlockMatrix, dx: &BlockMatrix, fraction: f64) -> Option<f64> {
    let mut alpha = f64::INFINITY;
    for (xb, db) in x.iter().zip(dx) {
        let chol = Cholesky::new(xb.clone())?;
        let l = chol.l();
        let t = l.solve_lower_triangular(db)?;
        let t = l.solve_lower_triangular(&t.transpose())?;
        let lmin = SymmetricEigen::new(sym(t)).eigenvalues.min();
        if lmin < 0.0 {
            alpha = alpha.min(-1.0 / lmin);
        }
    }
    Some((fraction * alpha).min(1.0))
}

enum Factor {
    Chol(Cholesky<f64, Dyn>),
    Lu(LU<f64, Dyn, Dyn>),
}

impl Factor {
    fn new(m: DMatrix<f64>) -> Option<Self> {
        if let Some(c) = Cholesky::new(m.clone()) {
            return Some(Factor::Chol(c));
        }
        let scale = m.diagonal().iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
        let mut shift = 1e-14 * scale;
        for _ in 0..6 {
            let mut r = m.clone();
            for k in 0..r.nrows() {
                r[(k, k)] += shift;
            }
            if let Some(c) = Cholesky::new(r) {
                return Some(Factor::Chol(c));
            }
            shift *= 100.0;
        }
        let lu = LU::new(m);
        lu.is_invertible().then_some(Factor::Lu(lu))
    }

    fn solve(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        match self {
            Factor::Chol(c) => Some(c.solve(rhs)),
            Factor::Lu(l) => l.solve(rhs),
        }
    }
}

struct Direction {
    dx: BlockMatrix,
    dy: Vec<f64>,
    dz: BlockMatrix,
}

struct Workspace<'a> {
    p: &'a SdpProblem,
    x: &'a BlockMatrix,
    zi: &'a BlockMatrix,
    rd: &'a BlockMatrix,
    factor: &'a Factor,
}

impl Workspace<'_> {
    /// Solves the HKM Newton system for target `σμ` with second-order term `K`.
    fn direction(&self, sigma_mu: f64, k: Option<&BlockMatrix>) -> Option<Direction> {
        let (x, zi, rd) = (self.x, self.zi, self.rd);
        // G = σμ Z⁻¹ − X R_d Z⁻¹ − K Z⁻¹, symmetrized for the pairing with A_i.
        let g: BlockMatrix = (0..x.len())
            .map(|b| {
                let mut inner = &x[b] * &rd[b];
                if let Some(k) = k {
                    inner += &k[b];
                }
                sym(&zi[b] * sigma_mu - inner * &zi[b])
            })
            .collect();
        let ag = self.p.apply(&g);
        let rhs = DVector::from_iterator(ag.len(), self.p.b.iter().zip(&ag).map(|(b, a)| b - a));
        let dy = self.factor.solve(&rhs)?;
        let dy: Vec<f64> = dy.iter().copied().collect();
        let aty = self.p.adjoint(&dy);
        let dz: BlockMatrix = rd.iter().zip(&aty).map(|(r, a)| r - a).collect();
        let dx: BlockMatrix = (0..x.len())
            .map(|b| {
                let mut t = &x[b] * &dz[b];
                if let Some(k) = k {
                    t += &k[b];
                }
                sym(&zi[b] * sigma_mu - &x[b] - t * &zi[b])
            })
            .collect();
        Some(Direction { dx, dy, dz })
    }
}

/// Solves `p`. Errors only on malformed input; convergence problems are
/// reported through [`SdpSolution::status`].
pub fn solve(p: &SdpProblem, opts: &SdpOptions) -> Result<SdpSolution> {
    if opts.check_independence || p.c.len() != p.blocks.len() || p.b.len() != p.constraints.len() {
        p.validate()?;
    }
    let structure = Structure::new(p);
    let c = p.c_dense();
    let n_total = p.total_dim() as f64;
    let b_norm = p.b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let b_inf = p.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let c_norm = frob(&c);
    let tau = 1.0 + b_inf.max(c_norm);

    let mut x: BlockMatrix = p.blocks.iter().map(|&n| DMatrix::identity(n, n) * tau).collect();
    let mut z = x.clone();
    let mut y = vec![0.0; p.constraints.len()];
    let mut history = Vec::new();
    let mut status = SdpStatus::IterationLimit;
    let mut iterations = 0;

    loop {
        let ax = p.apply(&x);
        let rp: Vec<f64> = p.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let aty = p.adjoint(&y);
        let rd: BlockMatrix = (0..c.len()).map(|k| &c[k] - &aty[k] - &z[k]).collect();
        let pobj = inner(&c, &x);
        let dobj: f64 = p.b.iter().zip(&y).map(|(b, y)| b * y).sum();
        let xz = inner(&x, &z);
        let mu = xz / n_total;
        let pres = rp.iter().map(|v| v * v).sum::<f64>().sqrt() / (1.0 + b_norm);
        let dres = frob(&rd) / (1.0 + c_norm);
        history.push(IterateRecord {
            primal_obj: pobj,
            dual_obj: dobj,
            mu,
            primal_residual: pres,
            dual_residual: dres,
        });

        let scale = 1.0 + pobj.abs() + dobj.abs();
        let gap_ok = |tol: f64| (pobj - dobj).abs() <= tol * scale && xz <= tol * scale;
        if gap_ok(opts.gap_tol) && pres <= opts.feas_tol && dres <= opts.feas_tol {
            status = SdpStatus::Optimal;
            break;
        }
        let stalled_ok = gap_ok(STALL_TOL) && pres <= STALL_TOL && dres <= STALL_TOL;
        let bound = DIVERGENCE * tau;
        if max_abs(&x) > bound {
            status = SdpStatus::DualInfeasible;
            break;
        }
        if max_abs(&z) > bound || y.iter().any(|v| v.abs() > bound) {
            status = SdpStatus::PrimalInfeasible;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }

        let step = (|| {
            let zi = inverse_spd(&z)?;
            let factor = Factor::new(structure.schur(&x, &zi))?;
            let ws = Workspace {
                p,
                x: &x,
                zi: &zi,
                rd: &rd,
                factor: &factor,
            };
            let pred = ws.direction(0.0, None)?;
            let ap = max_step(&x, &pred.dx, 1.0)?;
            let ad = max_step(&z, &pred.dz, 1.0)?;
            let x_aff: BlockMatrix = x.iter().zip(&pred.dx).map(|(a, d)| a + d * ap).collect();
            let z_aff: BlockMatrix = z.iter().zip(&pred.dz).map(|(a, d)| a + d * ad).collect();
            let mu_aff = inner(&x_aff, &z_aff) / n_total;
            let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
            let k: BlockMatrix = pred.dx.iter().zip(&pred.dz).map(|(a, b)| a * b).collect();
            let corr = ws.direction(sigma * mu, Some(&k))?;
            let ap = max_step(&x, &corr.dx, opts.step_fraction)?;
            let ad = max_step(&z, &corr.dz, opts.step_fraction)?;
            Some((corr, ap, ad))
        })();

        let Some((dir, ap, ad)) = step else {
            if stalled_ok {
                status = SdpStatus::Optimal;
            }
            break;
        };
        if ap < 1e-12 && ad < 1e-12 {
            if stalled_ok {
                status = SdpStatus::Optimal;
            }
            break;
        }
        for b in 0..x.len() {
            x[b] += &dir.dx[b] * ap;
            z[b] += &dir.dz[b] * ad;
        }
        for (yi, d) in y.iter_mut().zip(&dir.dy) {
            *yi += ad * d;
        }
        iterations += 1;
    }

    let last = history.last().cloned().expect("at least one iterate recorded");
    Ok(SdpSolution {
        gap: last.primal_obj - last.dual_obj,
        primal_obj: last.primal_obj,
        dual_obj: last.dual_obj,
        primal_residual: last.primal_residual,
        dual_residual: last.dual_residual,
        x,
        y,
        z,
        status,
        iterations,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::{Constraint, SparseSym};

    #[test]
    fn fixed_corner_entry() {
        // min Tr X s.t. X_00 = 1 → X = diag(1, 0)
        let p = SdpProblem {
            blocks: vec![2],
            c: vec![SparseSym {
                entries: vec![(0, 0, 1.0), (1, 1, 1.0)],
            }],
            constraints: vec![Constraint {
                terms: vec![(
                    0,
                    SparseSym {
                        entries: vec![(0, 0, 1.0)],
                    },
                )],
            }],
            b: vec![1.0],
        };
        let s = solve(&p, &SdpOptions::default()).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert!((s.primal_obj - 1.0).abs() < 1e-8);
        assert!((s.x[0][(0, 0)] - 1.0).abs() < 1e-7);
        assert!(s.x[0][(1, 1)].abs() < 1e-7);
    }

    #[test]
    fn min_eigenvalue_of_coupling() {
        // min ⟨σ_x, X⟩ s.t. Tr X = 1 → −1
        let p = SdpProblem {
            blocks: vec![2],
            c: vec![SparseSym {
                entries: vec![(0, 1, 1.0)],
            }],
            constraints: vec![Constraint {
                terms: vec![(
                    0,
                    SparseSym {
                        entries: vec![(0, 0, 1.0), (1, 1, 1.0)],
                    },
                )],
            }],
            b: vec![1.0],
        };
        let s = solve(&p, &SdpOptions::default()).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert!((s.primal_obj + 1.0).abs() < 1e-8);
        assert!((s.dual_obj + 1.0).abs() < 1e-8);
    }

    #[test]
    fn infeasible_problem_is_flagged() {
        // X_00 = −1 has no PSD solution.
        let p = SdpProblem {
            blocks: vec![1],
            c: vec![SparseSym {
                entries: vec![(0, 0, 1.0)],
            }],
            constraints: vec![Constraint {
                terms: vec![(
                    0,
                    SparseSym {
                        entries: vec![(0, 0, 1.0)],
                    },
                )],
            }],
            b: vec![-1.0],
        };
        let s = solve(&p, &SdpOptions::default()).unwrap();
        assert_ne!(s.status, SdpStatus::Optimal);
    }
}
