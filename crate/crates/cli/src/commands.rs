//! Subcommand implementations.

use std::path::{Path, PathBuf};

use serde_json::json;
use witent::io::MatrixJson;
use witent::measures::{
    concurrence_2q, e_nm_ppt, negativity, rains_fidelity, rg_dps2, rg_ppt_closed, rr_ppt, ssr_nonlocality,
};
use witent::states::{
    antisymmetric_werner, horodecki_3x3, isotropic, max_entangled, random_density, random_pure, vc_ssr_state, w_ghz_mix,
};
use witent::witness::{evaluate, mc_product_check, validate_decomposable, WitnessJson, WITNESS_TOL};
use witent::{Bound, Cut, DensityMatrix, MeasureResult, StateRng, SystemShape, Witness, WitnessClass};

use crate::error::{CliError, CliResult};
use crate::reproduce::{
    example1, fig56, fig7q, heisenberg, isotropic_table, Example1Config, Fig56Config, Fig7qConfig, HeisenbergConfig,
    IsotropicConfig,
};
use crate::{parse, Command, ComputeArgs, GenStateArgs, MeasureName, ReproduceCmd, StateKind, ValidateArgs};

pub fn dispatch(cmd: &Command) -> CliResult<()> {
    match cmd {
        Command::Compute(a) => compute(a),
        Command::Reproduce { which } => reproduce(which),
        Command::GenState(a) => gen_state(a),
        Command::ValidateWitness(a) => validate_witness(a),
    }
}

fn emit(output: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn read_state(path: &Path) -> CliResult<DensityMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))?;
    let json: MatrixJson = serde_json::from_str(&text)?;
    Ok(DensityMatrix::from_json(&json)?)
}

fn single_cut(cuts: &[Cut]) -> CliResult<Cut> {
    match cuts {
        [] => Ok(Cut::single(0)),
        [c] => Ok(c.clone()),
        _ => Err(CliError::BadInput("this measure takes a single cut".into())),
    }
}

fn compute(a: &ComputeArgs) -> CliResult<()> {
    let rho = read_state(&a.state)?;
    let cuts = a.cut.iter().map(|s| parse::cut(s)).collect::<CliResult<Vec<_>>>()?;
    let n = Bound::parse(&a.n)?;
    let m = Bound::parse(&a.m)?;
    let scalar = |v: f64| MeasureResult {
        value: v.max(0.0),
        unclipped: v,
        tolerance: 1e-10,
        witness: None,
        certificate: None,
    };
    let res = match a.measure {
        MeasureName::Negativity => negativity(&rho, &single_cut(&cuts)?)?,
        MeasureName::RgPpt => rg_ppt_closed(&rho, &single_cut(&cuts)?)?,
        MeasureName::ENm => {
            let cuts = if cuts.is_empty() { vec![Cut::single(0)] } else { cuts };
            e_nm_ppt(&rho, &cuts, n, m)?
        }
        MeasureName::Rr => rr_ppt(&rho, &single_cut(&cuts)?)?,
        MeasureName::Rains => scalar(rains_fidelity(&rho, &single_cut(&cuts)?)?),
        MeasureName::Concurrence => scalar(concurrence_2q(&rho)?),
        MeasureName::SsrNonlocality => ssr_nonlocality(&rho)?,
        MeasureName::Dps2 => rg_dps2(&rho, &single_cut(&cuts)?)?,
    };
    let mut out = serde_json::to_value(res.summary())?;
    if let Some(path) = &a.witness_out {
        let w = res
            .witness
            .as_ref()
            .ok_or_else(|| CliError::BadInput("this measure has no witness".into()))?;
        std::fs::write(path, serde_json::to_string_pretty(&w.to_json())?)?;
        out["witness_file"] = json!(path.display().to_string());
    }
    out["measure"] = serde_json::to_value(format!("{:?}", a.measure))?;
    emit(a.output.as_ref(), &format!("{}\n", serde_json::to_string_pretty(&out)?))
}

fn reproduce(cmd: &ReproduceCmd) -> CliResult<()> {
    match cmd {
        ReproduceCmd::Fig56 {
            dim,
            dims,
            samples,
            seed,
            sdp,
            output,
        } => {
            let dims = match dims {
                Some(s) => parse::dims(s)?,
                None => vec![*dim, *dim],
            };
            let cfg = Fig56Config {
                dims,
                samples: *samples,
                seed: *seed,
                sdp: *sdp,
            };
            emit(output.as_ref(), &fig56(&cfg)?.render(Some(*seed), &cfg)?)
        }
        ReproduceCmd::Example1 {
            q_grid,
            n_values,
            output,
        } => {
            let cfg = Example1Config {
                q_grid: parse::grid(q_grid)?,
                n_values: parse::bounds(n_values)?.into_iter().map(parse::bound_value).collect(),
            };
            emit(output.as_ref(), &example1(&cfg)?.render(None, &cfg)?)
        }
        ReproduceCmd::Fig7q { a_grid, e_grid, output } => {
            let cfg = Fig7qConfig {
                a_grid: parse::grid(a_grid)?,
                e_grid: parse::grid(e_grid)?,
            };
            emit(output.as_ref(), &fig7q(&cfg)?.render(None, &cfg)?)
        }
        ReproduceCmd::Heisenberg {
            sites,
            j,
            b,
            open,
            beta_grid,
            output,
        } => {
            let cfg = HeisenbergConfig {
                sites: *sites,
                j: *j,
                b: *b,
                periodic: !*open,
                beta_grid: parse::grid(beta_grid)?,
            };
            emit(output.as_ref(), &heisenberg(&cfg)?.render(None, &cfg)?)
        }
        ReproduceCmd::Isotropic {
            d,
            n_values,
            p_grid,
            output,
        } => {
            let mut cfg = IsotropicConfig::standard(*d);
            if let Some(s) = n_values {
                cfg.n_values = parse::bounds(s)?.into_iter().map(parse::bound_value).collect();
            }
            if let Some(s) = p_grid {
                cfg.p_grid = parse::grid(s)?;
            }
            emit(output.as_ref(), &isotropic_table(&cfg)?.render(None, &cfg)?)
        }
    }
}

fn gen_state(a: &GenStateArgs) -> CliResult<()> {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::BadInput(format!("--{name} is required")));
    let random_shape = || -> CliResult<(SystemShape, StateRng)> {
        let seed = a
            .seed
            .ok_or_else(|| CliError::BadInput("--seed is required for random states".into()))?;
        let dims = match &a.dims {
            Some(s) => parse::dims(s)?,
            None => vec![a.d, a.d],
        };
        Ok((SystemShape::new(dims)?, StateRng::new(seed)))
    };
    let rho = match a.kind {
        StateKind::MaxEntangled => max_entangled(a.d)?,
        StateKind::Isotropic => isotropic(a.d, need(a.p, "p")?)?,
        StateKind::Horodecki => horodecki_3x3(need(a.a, "a")?)?,
        StateKind::WGhz => w_ghz_mix(need(a.q, "q")?)?,
        StateKind::VcSsr => vc_ssr_state(),
        StateKind::Werner => antisymmetric_werner(a.d)?,
        StateKind::Random => {
            let (shape, mut rng) = random_shape()?;
            random_density(&shape, &mut rng)
        }
        StateKind::RandomPure => {
            let (shape, mut rng) = random_shape()?;
            random_pure(&shape, &mut rng).density()
        }
    };
    emit(
        a.output.as_ref(),
        &format!("{}\n", serde_json::to_string_pretty(&rho.to_json())?),
    )
}

/// Validity checks by witness class. Decomposable witnesses are re-verified
/// exactly; superselection witnesses by their diagonal and `G ⪯ I`; other
/// classes by sampling product vectors.
fn validate_witness(a: &ValidateArgs) -> CliResult<()> {
    let text =
        std::fs::read_to_string(&a.witness).map_err(|e| CliError::BadInput(format!("{}: {e}", a.witness.display())))?;
    let w = Witness::from_json(&serde_json::from_str::<WitnessJson>(&text)?)?;
    let mut report = json!({ "class": w.to_json().class });
    let upper_ok = match w.m.finite() {
        Some(m) => w.op.max_eigenvalue()? <= m + WITNESS_TOL,
        None => true,
    };
    let lower_ok = match w.n.finite() {
        Some(n) => w.op.min_eigenvalue()? >= -n - WITNESS_TOL,
        None => true,
    };
    let valid = match &w.class {
        WitnessClass::Decomposable { .. } => {
            let r = validate_decomposable(&w)?;
            report["decomposition"] = serde_json::to_value(&r)?;
            r.valid
        }
        WitnessClass::SsrDiagonal => {
            let min_diag = (0..w.dim()).map(|i| w.op.get(i, i).re).fold(f64::INFINITY, f64::min);
            report["min_diagonal"] = json!(min_diag);
            min_diag >= -WITNESS_TOL && upper_ok && lower_ok
        }
        WitnessClass::Dps2Certified | WitnessClass::Fixed => {
            let seed = a
                .seed
                .ok_or_else(|| CliError::BadInput("--seed is required for the product-vector check".into()))?;
            let min = mc_product_check(&w, a.samples, seed)?;
            report["product_min"] = json!(min);
            min >= -1e-6 && upper_ok && lower_ok
        }
    };
    report["valid"] = json!(valid);
    if let Some(path) = &a.state {
        let rho = read_state(path)?;
        report["value_on_state"] = json!(evaluate(&w, &rho)?);
    }
    emit(
        a.output.as_ref(),
        &format!("{}\n", serde_json::to_string_pretty(&report)?),
    )?;
    if valid {
        Ok(())
    } else {
        Err(CliError::BadInput("witness failed validation".into()))
    }
}
