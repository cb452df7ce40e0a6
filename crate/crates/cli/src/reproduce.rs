//! Batch experiments that emit CSV tables.

use rayon::prelude::*;
use serde::Serialize;
use witent::bounds::eof_lower_rr;
use witent::measures::{e_nm_ppt, isotropic_e_n1, negativity, rg_dps2, rg_ppt_closed};
use witent::spin::{Chain, ChainSpec};
use witent::states::{horodecki_3x3, isotropic, random_density, w_ghz_mix};
use witent::symmetry::symmetric_witness_opt;
use witent::witness::evaluate;
use witent::{Bound, Cut, StateRng, SystemShape};

use crate::error::{CliError, CliResult};
use crate::parse::bound_value;
use crate::table::Table;

/// Random-state scatter of negativity against the closed-form PPT robustness.
#[derive(Clone, Debug, Serialize)]
pub struct Fig56Config {
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    /// Also solve the PPT robustness SDP for every sample.
    pub sdp: bool,
}

pub fn fig56(cfg: &Fig56Config) -> CliResult<Table> {
    if cfg.dims.len() != 2 {
        return Err(CliError::BadInput("fig56 needs a bipartite shape".into()));
    }
    let shape = SystemShape::new(cfg.dims.clone())?;
    let cut = Cut::single(0);
    let dmin = *cfg.dims.iter().min().expect("two dims") as f64;
    let rows = (0..cfg.samples)
        .into_par_iter()
        .map(|k| -> CliResult<Vec<f64>> {
            let mut rng = StateRng::for_task(cfg.seed, k as u64);
            let rho = random_density(&shape, &mut rng);
            let n = negativity(&rho, &cut)?.value;
            let r = rg_ppt_closed(&rho, &cut)?.value;
            let mut row = vec![k as f64, n, r, dmin * n];
            if cfg.sdp {
                let s = e_nm_ppt(&rho, std::slice::from_ref(&cut), Bound::Infinite, Bound::Finite(1.0))?;
                row.push(s.value);
            }
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut columns = vec!["sample", "negativity", "rg_ppt", "d_negativity"];
    if cfg.sdp {
        columns.push("rg_ppt_sdp");
    }
    let mut t = Table::new(columns);
    let npt: Vec<&Vec<f64>> = rows.iter().filter(|r| r[1] > 0.0).collect();
    let le2 = |r: &Vec<f64>| r[2] <= 2.0 * r[1];
    let total = rows.len().max(1) as f64;
    t.summary.push(("samples".into(), rows.len() as f64));
    t.summary.push(("npt_samples".into(), npt.len() as f64));
    t.summary.push((
        "fraction_rg_le_2n".into(),
        rows.iter().filter(|r| le2(r)).count() as f64 / total,
    ));
    t.summary.push((
        "fraction_rg_le_2n_npt".into(),
        npt.iter().filter(|r| le2(r)).count() as f64 / npt.len().max(1) as f64,
    ));
    t.rows = rows;
    Ok(t)
}

/// `E^PPT_{n:1}` of the W/GHZ mixture across its three bipartitions and
/// across all of them at once.
#[derive(Clone, Debug, Serialize)]
pub struct Example1Config {
    pub q_grid: Vec<f64>,
    pub n_values: Vec<f64>,
}

pub fn example1(cfg: &Example1Config) -> CliResult<Table> {
    let cuts: Vec<Cut> = (0..3).map(Cut::single).collect();
    let tasks: Vec<(f64, f64)> = cfg
        .q_grid
        .iter()
        .flat_map(|&q| cfg.n_values.iter().map(move |&n| (q, n)))
        .collect();
    let rows = tasks
        .par_iter()
        .map(|&(q, n)| -> CliResult<Vec<f64>> {
            let rho = w_ghz_mix(q)?;
            let nb = Bound::from(n);
            let mut row = vec![q, n];
            for c in &cuts {
                row.push(e_nm_ppt(&rho, std::slice::from_ref(c), nb, Bound::Finite(1.0))?.value);
            }
            row.push(e_nm_ppt(&rho, &cuts, nb, Bound::Finite(1.0))?.value);
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut t = Table::new(vec!["q", "n", "e_cut0", "e_cut1", "e_cut2", "e_all_cuts"]);
    t.rows = rows;
    Ok(t)
}

/// Entanglement-of-formation lower bounds for noisy Horodecki states
/// `e·ρ(a) + (1−e)·I/9` from the level-2 symmetric-extension witness of `ρ(a)`.
#[derive(Clone, Debug, Serialize)]
pub struct Fig7qConfig {
    pub a_grid: Vec<f64>,
    pub e_grid: Vec<f64>,
}

pub fn fig7q(cfg: &Fig7qConfig) -> CliResult<Table> {
    if cfg.e_grid.iter().any(|e| !(0.0..=1.0).contains(e)) {
        return Err(CliError::BadInput("noise weights must lie in [0, 1]".into()));
    }
    let cut = Cut::single(0);
    let per_a = cfg
        .a_grid
        .par_iter()
        .map(|&a| -> CliResult<Vec<Vec<f64>>> {
            let rho = horodecki_3x3(a)?;
            let dps = rg_dps2(&rho, &cut)?;
            let w = dps.witness.expect("symmetric-extension bound returns its witness");
            let tr_w = w.op.trace();
            let mut rows = Vec::with_capacity(cfg.e_grid.len());
            for &e in &cfg.e_grid {
                let noisy = rho.with_white_noise(e)?;
                let value = -evaluate(&w, &noisy)?;
                let x = if tr_w > 0.0 { (value / tr_w).max(0.0) } else { 0.0 };
                let eof = eof_lower_rr(x.min(0.5))?.value;
                let closed = rg_ppt_closed(&noisy, &cut)?.value;
                rows.push(vec![a, e, closed, value, tr_w, x, eof]);
            }
            Ok(rows)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut t = Table::new(vec![
        "a",
        "e",
        "rg_ppt",
        "witness_value",
        "witness_trace",
        "rr_lower",
        "eof_lower",
    ]);
    t.rows = per_a.into_iter().flatten().collect();
    Ok(t)
}

/// Thermal sweep of the Heisenberg chain.
#[derive(Clone, Debug, Serialize)]
pub struct HeisenbergConfig {
    pub sites: usize,
    pub j: f64,
    pub b: f64,
    pub periodic: bool,
    pub beta_grid: Vec<f64>,
}

pub fn heisenberg(cfg: &HeisenbergConfig) -> CliResult<Table> {
    let spec = ChainSpec::new(cfg.sites, cfg.j, cfg.b, cfg.periodic, 0.0)?;
    if cfg.beta_grid.iter().any(|b| !(*b >= 0.0)) {
        return Err(CliError::BadInput("inverse temperatures must be nonnegative".into()));
    }
    let chain = Chain::new(&spec)?;
    let rows = cfg
        .beta_grid
        .par_iter()
        .map(|&beta| -> CliResult<Vec<f64>> {
            let obs = chain.observables(beta)?;
            let wv = -chain.witness_value(beta)?;
            let est = chain.thermo_estimate(beta)?;
            let (chi, chi_w) = if cfg.b == 0.0 && beta > 0.0 {
                let s = chain.susceptibility(beta)?;
                (s.chi_exact, s.chi_witness_form)
            } else {
                (f64::NAN, f64::NAN)
            };
            Ok(vec![beta, 1.0 / beta, obs.u, obs.m, wv, est.estimate, chi, chi_w])
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut t = Table::new(vec![
        "beta",
        "T",
        "U",
        "M",
        "witness_value",
        "estimate",
        "chi_exact",
        "chi_witness_form",
    ]);
    t.summary.push((
        "max_abs_estimate_minus_witness".into(),
        rows.iter().map(|r| (r[5] - r[4]).abs()).fold(0.0, f64::max),
    ));
    t.rows = rows;
    Ok(t)
}

/// Isotropic closed form against the full SDP and the twirled linear program.
#[derive(Clone, Debug, Serialize)]
pub struct IsotropicConfig {
    pub d: usize,
    pub n_values: Vec<f64>,
    pub p_grid: Vec<f64>,
}

impl IsotropicConfig {
    /// `n ∈ {0.5, 1, d−1, d, 2d}` and 20 evenly spaced weights in `[0, 1]`.
    pub fn standard(d: usize) -> Self {
        let dd = d as f64;
        let mut n_values = vec![0.5, 1.0, dd - 1.0, dd, 2.0 * dd];
        n_values.dedup();
        Self {
            d,
            n_values,
            p_grid: (0..20).map(|k| k as f64 / 19.0).collect(),
        }
    }
}

pub fn isotropic_table(cfg: &IsotropicConfig) -> CliResult<Table> {
    let tasks: Vec<(f64, f64)> = cfg
        .n_values
        .iter()
        .flat_map(|&n| cfg.p_grid.iter().map(move |&p| (n, p)))
        .collect();
    let rows = tasks
        .par_iter()
        .map(|&(n, p)| -> CliResult<Vec<f64>> {
            let closed = isotropic_e_n1(cfg.d, p, n)?;
            let rho = isotropic(cfg.d, p)?;
            let nb = Bound::from(n);
            let sdp = e_nm_ppt(&rho, &[Cut::single(0)], nb, Bound::Finite(1.0))?.value;
            let lp = symmetric_witness_opt(cfg.d, p, nb, Bound::Finite(1.0))?.value;
            Ok(vec![
                cfg.d as f64,
                bound_value(nb),
                p,
                closed,
                sdp,
                lp,
                (closed - sdp).abs(),
            ])
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut t = Table::new(vec!["d", "n", "p", "closed", "sdp", "lp", "abs_diff"]);
    t.summary.push((
        "max_abs_diff_closed_sdp".into(),
        rows.iter().map(|r| r[6]).fold(0.0, f64::max),
    ));
    t.summary.push((
        "max_abs_diff_lp_sdp".into(),
        rows.iter().map(|r| (r[5] - r[4]).abs()).fold(0.0, f64::max),
    ));
    t.rows = rows;
    Ok(t)
}
