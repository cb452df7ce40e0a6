//! Builder for SDPs over complex Hermitian variables.
//!
//! A Hermitian variable of dimension `n` becomes either a real `n×n` block
//! (when every coefficient in the problem is real) or a real `2n×2n` block `E`
//! read through `Re X = (E₁₁ + E₂₂)/2`, `Im X = (E₂₁ − E₁₂)/2`. Any PSD `E`
//! yields a PSD `X`, and every PSD `X` is reached, so the relaxation is exact.
//! Hermitian-valued equalities are split into real equations on the upper
//! triangle.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;

use super::{solve, Constraint, SdpOptions, SdpProblem, SdpSolution, SparseSym};
use crate::error::{Error, Result};
use crate::herm::{compact_index, partial_transpose_map, CMatrix, Cut, HermitianMatrix, SystemShape, C64, ZERO};

/// Coefficients smaller than this are treated as exact cancellations.
const DROP_TOL: f64 = 1e-14;

/// Linear map between square matrices given by terms `out[r][c] += w · in[a][b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    n_in: usize,
    n_out: usize,
    terms: Vec<(usize, usize, usize, usize, C64)>,
}

impl LinearMap {
    pub fn identity(n: usize) -> Self {
        let mut terms = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                terms.push((a, b, a, b, C64::new(1.0, 0.0)));
            }
        }
        Self {
            n_in: n,
            n_out: n,
            terms,
        }
    }

    pub fn partial_transpose(shape: &SystemShape, cut: &Cut) -> Result<Self> {
        cut.validate(shape)?;
        let n = shape.total_dim();
        let map = partial_transpose_map(shape, cut);
        let mut terms = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let (r, c) = map(a, b);
                terms.push((r, c, a, b, C64::new(1.0, 0.0)));
            }
        }
        Ok(Self {
            n_in: n,
            n_out: n,
            terms,
        })
    }

    /// Traces out every party outside `keep`.
    pub fn partial_trace(shape: &SystemShape, keep: &Cut) -> Result<Self> {
        keep.validate(shape)?;
        let n = shape.total_dim();
        let traced = keep.complement(shape);
        let kept_idx = compact_index(shape, keep.parties());
        let traced_idx = compact_index(shape, traced.parties());
        let n_out = shape.restrict(keep.parties()).total_dim();
        let mut terms = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if traced_idx[a] == traced_idx[b] {
                    terms.push((kept_idx[a], kept_idx[b], a, b, C64::new(1.0, 0.0)));
                }
            }
        }
        Ok(Self { n_in: n, n_out, terms })
    }

    /// `X ↦ K X K†` for a rectangular `K` (`n_out × n_in`).
    pub fn conjugation(k: &DMatrix<C64>) -> Self {
        let (n_out, n_in) = k.shape();
        let mut nz: Vec<Vec<(usize, C64)>> = vec![Vec::new(); n_out];
        for r in 0..n_out {
            for a in 0..n_in {
                if k[(r, a)] != ZERO {
                    nz[r].push((a, k[(r, a)]));
                }
            }
        }
        let mut terms = Vec::new();
        for r in 0..n_out {
            for c in 0..n_out {
                for &(a, ka) in &nz[r] {
                    for &(b, kb) in &nz[c] {
                        terms.push((r, c, a, b, ka * kb.conj()));
                    }
                }
            }
        }
        Self { n_in, n_out, terms }
    }

    /// Map from explicit terms `(r, c, a, b, w)`: `out[r][c] += w · in[a][b]`.
    pub fn from_terms(n_in: usize, n_out: usize, terms: Vec<(usize, usize, usize, usize, C64)>) -> Result<Self> {
        if let Some(t) = terms
            .iter()
            .find(|t| t.0 >= n_out || t.1 >= n_out || t.2 >= n_in || t.3 >= n_in)
        {
            return Err(Error::Domain(format!("map term {t:?} out of range")));
        }
        Ok(Self { n_in, n_out, terms })
    }

    pub fn scaled(mut self, s: f64) -> Self {
        self.terms.iter_mut().for_each(|t| t.4 *= s);
        self
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if inner.n_out != self.n_in {
            return Err(Error::DimensionMismatch {
                expected: self.n_in,
                got: inner.n_out,
            });
        }
        let mut by_input: HashMap<(usize, usize), Vec<(usize, usize, C64)>> = HashMap::new();
        for &(r, c, a, b, w) in &self.terms {
            by_input.entry((a, b)).or_default().push((r, c, w));
        }
        let mut acc: BTreeMap<(usize, usize, usize, usize), C64> = BTreeMap::new();
        for &(r1, c1, a, b, w1) in &inner.terms {
            if let Some(outs) = by_input.get(&(r1, c1)) {
                for &(r, c, w) in outs {
                    *acc.entry((r, c, a, b)).or_insert(ZERO) += w * w1;
                }
            }
        }
        Ok(LinearMap {
            n_in: inner.n_in,
            n_out: self.n_out,
            terms: acc
                .into_iter()
                .filter(|(_, w)| w.norm() > DROP_TOL)
                .map(|((r, c, a, b), w)| (r, c, a, b, w))
                .collect(),
        })
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.4.im == 0.0)
    }

    pub fn apply(&self, x: &HermitianMatrix) -> HermitianMatrix {
        let mut out = CMatrix::zeros(self.n_out);
        for &(r, c, a, b, w) in &self.terms {
            out[(r, c)] += w * x.get(a, b);
        }
        HermitianMatrix::symmetrized(out)
    }

    /// Adjoint with respect to `⟨A, B⟩ = Tr(A B)`.
    pub fn apply_adjoint(&self, y: &HermitianMatrix) -> HermitianMatrix {
        let mut out = CMatrix::zeros(self.n_in);
        for &(r, c, a, b, w) in &self.terms {
            out[(b, a)] += w * y.get(c, r);
        }
        HermitianMatrix::symmetrized(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarId(usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ScalarId(usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarKind {
    Nonnegative,
    /// Modeled as the difference of two nonnegative 1×1 blocks.
    Free,
}

#[derive(Clone, Debug)]
struct Group {
    dim: usize,
    vars: Vec<(VarId, LinearMap)>,
    scalars: Vec<(ScalarId, HermitianMatrix)>,
    rhs: HermitianMatrix,
}

/// SDP over Hermitian PSD variables and scalars, minimizing a linear objective
/// subject to Hermitian-valued linear equalities.
#[derive(Clone, Debug, Default)]
pub struct HermitianSdp {
    var_dims: Vec<usize>,
    scalar_kinds: Vec<ScalarKind>,
    objective: Vec<(VarId, HermitianMatrix)>,
    scalar_objective: Vec<(ScalarId, f64)>,
    groups: Vec<Group>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    Re,
    Im,
}

/// Where each piece of the Hermitian problem lives in the real SDP.
#[derive(Clone, Debug)]
struct Layout {
    real: bool,
    var_block: Vec<usize>,
    scalar_blocks: Vec<(usize, Option<usize>)>,
    /// Per constraint row: (group, r, c, part).
    rows: Vec<(usize, usize, usize, Part)>,
}

/// Solution mapped back to Hermitian form.
#[derive(Clone, Debug)]
pub struct HermitianSolution {
    /// Primal values of the Hermitian variables.
    pub vars: Vec<HermitianMatrix>,
    pub scalars: Vec<f64>,
    /// Dual slack of each Hermitian variable: `C_v − Σ_g L_{g,v}†(Y_g)`.
    pub slacks: Vec<HermitianMatrix>,
    /// Multiplier `Y_g` of each equality group; the dual objective is `Σ Tr(Y_g·rhs_g)`.
    pub multipliers: Vec<HermitianMatrix>,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub raw: SdpSolution,
}

/// Accumulates the real linear form of one equation or the objective.
struct Form<'a> {
    layout: &'a Layout,
    var_dims: &'a [usize],
    blocks: BTreeMap<usize, BTreeMap<(usize, usize), f64>>,
}

impl<'a> Form<'a> {
    fn new(layout: &'a Layout, var_dims: &'a [usize]) -> Self {
        Self {
            layout,
            var_dims,
            blocks: BTreeMap::new(),
        }
    }

    /// Coefficient `w` on block entry `E[p][q]` (as an unsymmetrized linear form).
    fn entry(&mut self, blk: usize, p: usize, q: usize, w: f64) {
        let (i, j) = if p <= q { (p, q) } else { (q, p) };
        let v = if i == j { w } else { 0.5 * w };
        *self.blocks.entry(blk).or_default().entry((i, j)).or_insert(0.0) += v;
    }

    fn re(&mut self, var: VarId, a: usize, b: usize, w: f64) {
        let blk = self.layout.var_block[var.0];
        if self.layout.real {
            self.entry(blk, a, b, w);
        } else {
            let n = self.var_dims[var.0];
            self.entry(blk, a, b, 0.5 * w);
            self.entry(blk, n + a, n + b, 0.5 * w);
        }
    }

    fn im(&mut self, var: VarId, a: usize, b: usize, w: f64) {
        if self.layout.real {
            return;
        }
        let blk = self.layout.var_block[var.0];
        let n = self.var_dims[var.0];
        self.entry(blk, n + a, b, 0.5 * w);
        self.entry(blk, a, n + b, -0.5 * w);
    }

    /// Adds `Re(w · X_ab)` or `Im(w · X_ab)`.
    fn complex_term(&mut self, var: VarId, a: usize, b: usize, w: C64, part: Part) {
        match part {
            Part::Re => {
                if w.re != 0.0 {
                    self.re(var, a, b, w.re);
                }
                if w.im != 0.0 {
                    self.im(var, a, b, -w.im);
                }
            }
            Part::Im => {
                if w.re != 0.0 {
                    self.im(var, a, b, w.re);
                }
                if w.im != 0.0 {
                    self.re(var, a, b, w.im);
                }
            }
        }
    }

    fn scalar(&mut self, s: ScalarId, w: f64) {
        if w == 0.0 {
            return;
        }
        let (u, v) = self.layout.scalar_blocks[s.0];
        self.entry(u, 0, 0, w);
        if let Some(v) = v {
            self.entry(v, 0, 0, -w);
        }
    }

    fn finish(self) -> Vec<(usize, SparseSym)> {
        self.blocks
            .into_iter()
            .map(|(blk, map)| (blk, SparseSym::from_map(map, DROP_TOL)))
            .filter(|(_, s)| !s.is_empty())
            .collect()
    }
}

impl HermitianSdp {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a Hermitian PSD variable of dimension `n`.
    pub fn add_var(&mut self, n: usize) -> VarId {
        self.var_dims.push(n);
        VarId(self.var_dims.len() - 1)
    }

    pub fn add_scalar(&mut self, kind: ScalarKind) -> ScalarId {
        self.scalar_kinds.push(kind);
        ScalarId(self.scalar_kinds.len() - 1)
    }

    pub fn var_dim(&self, v: VarId) -> usize {
        self.var_dims[v.0]
    }

    /// Adds `Tr(c · X_v)` to the minimized objective.
    pub fn add_objective(&mut self, v: VarId, c: HermitianMatrix) -> Result<()> {
        self.check_dim(self.var_dims[v.0], c.dim())?;
        self.objective.push((v, c));
        Ok(())
    }

    pub fn add_scalar_objective(&mut self, s: ScalarId, coef: f64) {
        self.scalar_objective.push((s, coef));
    }

    /// Adds `Σ L_k(X_{v_k}) + Σ x_s·H_s = rhs`; returns the group index.
    pub fn add_equality(
        &mut self,
        vars: Vec<(VarId, LinearMap)>,
        scalars: Vec<(ScalarId, HermitianMatrix)>,
        rhs: HermitianMatrix,
    ) -> Result<usize> {
        let dim = rhs.dim();
        for (v, map) in &vars {
            self.check_dim(self.var_dims[v.0], map.n_in)?;
            self.check_dim(dim, map.n_out)?;
        }
        for (_, h) in &scalars {
            self.check_dim(dim, h.dim())?;
        }
        self.groups.push(Group {
            dim,
            vars,
            scalars,
            rhs,
        });
        Ok(self.groups.len() - 1)
    }

    fn check_dim(&self, expected: usize, got: usize) -> Result<()> {
        if expected != got {
            return Err(Error::DimensionMismatch { expected, got });
        }
        Ok(())
    }

    fn is_real(&self) -> bool {
        self.objective.iter().all(|(_, c)| c.is_real())
            && self.groups.iter().all(|g| {
                g.rhs.is_real() && g.vars.iter().all(|(_, m)| m.is_real()) && g.scalars.iter().all(|(_, h)| h.is_real())
            })
    }

    fn layout(&self) -> (Layout, Vec<usize>) {
        let real = self.is_real();
        let mut blocks = Vec::new();
        let var_block = self
            .var_dims
            .iter()
            .map(|&n| {
                blocks.push(if real { n } else { 2 * n });
                blocks.len() - 1
            })
            .collect();
        let scalar_blocks = self
            .scalar_kinds
            .iter()
            .map(|k| {
                blocks.push(1);
                let u = blocks.len() - 1;
                let v = (*k == ScalarKind::Free).then(|| {
                    blocks.push(1);
                    blocks.len() - 1
                });
                (u, v)
            })
            .collect();
        (
            Layout {
                real,
                var_block,
                scalar_blocks,
                rows: Vec::new(),
            },
            blocks,
        )
    }

    fn build(&self) -> Result<(SdpProblem, Layout)> {
        let (mut layout, blocks) = self.layout();

        let mut obj = Form::new(&layout, &self.var_dims);
        for (v, c) in &self.objective {
            let n = c.dim();
            for a in 0..n {
                for b in 0..n {
                    let w = c.get(b, a);
                    if w != ZERO {
                        obj.complex_term(*v, a, b, w, Part::Re);
                    }
                }
            }
        }
        for &(s, coef) in &self.scalar_objective {
            obj.scalar(s, coef);
        }
        let obj_terms = obj.finish();
        let mut c: Vec<SparseSym> = vec![SparseSym::default(); blocks.len()];
        for (blk, s) in obj_terms {
            c[blk] = s;
        }

        let mut constraints = Vec::new();
        let mut b = Vec::new();
        let mut rows = Vec::new();
        for (g_idx, g) in self.groups.iter().enumerate() {
            let mut by_out: Vec<HashMap<(usize, usize), Vec<(usize, usize, C64)>>> = vec![HashMap::new(); g.vars.len()];
            for (k, (_, map)) in g.vars.iter().enumerate() {
                for &(r, cc, a, bb, w) in &map.terms {
                    if r <= cc {
                        by_out[k].entry((r, cc)).or_default().push((a, bb, w));
                    }
                }
            }
            let parts: &[Part] = if layout.real {
                &[Part::Re]
            } else {
                &[Part::Re, Part::Im]
            };
            for r in 0..g.dim {
                for cc in r..g.dim {
                    for &part in parts {
                        if part == Part::Im && r == cc {
                            continue;
                        }
                        let mut form = Form::new(&layout, &self.var_dims);
                        for (k, (v, _)) in g.vars.iter().enumerate() {
                            if let Some(list) = by_out[k].get(&(r, cc)) {
                                for &(a, bb, w) in list {
                                    form.complex_term(*v, a, bb, w, part);
                                }
                            }
                        }
                        for (s, h) in &g.scalars {
                            let z = h.get(r, cc);
                            form.scalar(*s, if part == Part::Re { z.re } else { z.im });
                        }
                        let z = g.rhs.get(r, cc);
                        let rhs = if part == Part::Re { z.re } else { z.im };
                        let terms = form.finish();
                        if terms.is_empty() {
                            if rhs.abs() > DROP_TOL {
                                return Err(Error::Parse(format!(
                                    "equation group {g_idx} entry ({r}, {cc}) has no variables but rhs {rhs}"
                                )));
                            }
                            continue;
                        }
                        constraints.push(Constraint { terms });
                        b.push(rhs);
                        rows.push((g_idx, r, cc, part));
                    }
                }
            }
        }
        layout.rows = rows;
        Ok((
            SdpProblem {
                blocks,
                c,
                constraints,
                b,
            },
            layout,
        ))
    }

    /// The real standard-form problem this builder produces.
    pub fn to_problem(&self) -> Result<SdpProblem> {
        Ok(self.build()?.0)
    }

    /// Solves and maps back; errors unless the solver reports `Optimal`.
    pub fn solve(&self, opts: &SdpOptions) -> Result<HermitianSolution> {
        let sol = self.solve_any(opts)?;
        sol.raw.clone().require_optimal()?;
        Ok(sol)
    }

    /// Solves and maps back whatever the solver returned.
    pub fn solve_any(&self, opts: &SdpOptions) -> Result<HermitianSolution> {
        let (problem, layout) = self.build()?;
        let raw = solve(&problem, opts)?;

        let unembed = |m: &DMatrix<f64>, n: usize, factor: f64| -> HermitianMatrix {
            if layout.real {
                HermitianMatrix::symmetrized(CMatrix::from_fn(n, |a, b| C64::new(m[(a, b)] * factor, 0.0)))
            } else {
                HermitianMatrix::symmetrized(CMatrix::from_fn(n, |a, b| {
                    C64::new(
                        0.5 * factor * (m[(a, b)] + m[(n + a, n + b)]),
                        0.5 * factor * (m[(n + a, b)] - m[(a, n + b)]),
                    )
                }))
            }
        };
        let slack_factor = if layout.real { 1.0 } else { 2.0 };
        let vars = (0..self.var_dims.len())
            .map(|k| unembed(&raw.x[layout.var_block[k]], self.var_dims[k], 1.0))
            .collect();
        let slacks = (0..self.var_dims.len())
            .map(|k| unembed(&raw.z[layout.var_block[k]], self.var_dims[k], slack_factor))
            .collect();
        let scalars = layout
            .scalar_blocks
            .iter()
            .map(|&(u, v)| raw.x[u][(0, 0)] - v.map_or(0.0, |v| raw.x[v][(0, 0)]))
            .collect();

        let mut mults: Vec<CMatrix> = self.groups.iter().map(|g| CMatrix::zeros(g.dim)).collect();
        for (&(g, r, c, part), &y) in layout.rows.iter().zip(&raw.y) {
            let m = &mut mults[g];
            match (part, r == c) {
                (Part::Re, true) => m[(r, r)] += C64::new(y, 0.0),
                (Part::Re, false) => {
                    m[(c, r)] += C64::new(0.5 * y, 0.0);
                    m[(r, c)] += C64::new(0.5 * y, 0.0);
                }
                (Part::Im, _) => {
                    m[(c, r)] += C64::new(0.0, -0.5 * y);
                    m[(r, c)] += C64::new(0.0, 0.5 * y);
                }
            }
        }
        let multipliers = mults.into_iter().map(HermitianMatrix::symmetrized).collect();

        Ok(HermitianSolution {
            vars,
            scalars,
            slacks,
            multipliers,
            primal_obj: raw.primal_obj,
            dual_obj: raw.dual_obj,
            raw,
        })
    }

    /// Maps Hermitian multipliers back through the constraints:
    /// returns `C_v − Σ_g L_{g,v}†(Y_g)` for every variable.
    pub fn dual_slacks(&self, multipliers: &[HermitianMatrix]) -> Vec<HermitianMatrix> {
        let mut out: Vec<HermitianMatrix> = self.var_dims.iter().map(|&n| HermitianMatrix::zeros(n)).collect();
        for (v, c) in &self.objective {
            out[v.0] = out[v.0].add(c).expect("checked dimension");
        }
        for (g, y) in self.groups.iter().zip(multipliers) {
            for (v, map) in &g.vars {
                out[v.0] = out[v.0].sub(&map.apply_adjoint(y)).expect("checked dimension");
            }
        }
        out
    }
}
