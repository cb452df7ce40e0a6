//! Heisenberg XXX chains: Hamiltonian, thermal states, the nearest-neighbour
//! witness and thermodynamic estimates.
//!
//! Units: `ħ = k = g²μ_B² = 1`; the spin operators are Pauli matrices.
//! A two-site periodic chain is treated as open so its single bond is not
//! counted twice.

use crate::eig::{eig_real_sorted, HermitianEigen};
use crate::error::{domain, Result};
use crate::herm::{CMatrix, HermitianMatrix, SystemShape, C64};
use crate::states::{thermal_from_eigen, DensityMatrix};
use crate::witness::{evaluate, Bound, TraceNorm, Witness, WitnessClass};

pub const MAX_SITES: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct ChainSpec {
    pub sites: usize,
    pub j: f64,
    pub b: f64,
    pub periodic: bool,
    pub beta: f64,
}

impl ChainSpec {
    pub fn new(sites: usize, j: f64, b: f64, periodic: bool, beta: f64) -> Result<Self> {
        let spec = Self {
            sites,
            j,
            b,
            periodic,
            beta,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_SITES).contains(&self.sites) {
            return domain(format!("chain length {} outside 2..={MAX_SITES}", self.sites));
        }
        if !(self.beta >= 0.0) {
            return domain(format!("inverse temperature {} < 0", self.beta));
        }
        if !self.j.is_finite() || !self.b.is_finite() {
            return domain("coupling and field must be finite");
        }
        Ok(())
    }

    pub fn with_beta(&self, beta: f64) -> Self {
        Self { beta, ..self.clone() }
    }

    pub fn shape(&self) -> SystemShape {
        SystemShape::new(vec![2; self.sites]).expect("positive dims")
    }

    /// Nearest-neighbour bonds; the wrap-around bond only for `N > 2`.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.sites;
        let mut b: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        if self.periodic && n > 2 {
            b.push((n - 1, 0));
        }
        b
    }
}

fn bit(state: usize, site: usize, n: usize) -> usize {
    (state >> (n - 1 - site)) & 1
}

/// Real row-major matrix of `Σ_bonds σ⃗_i·σ⃗_j`.
fn bond_sum(n: usize, bonds: &[(usize, usize)]) -> Vec<f64> {
    let dim = 1 << n;
    let mut m = vec![0.0; dim * dim];
    for s in 0..dim {
        for &(i, j) in bonds {
            if bit(s, i, n) == bit(s, j, n) {
                m[s * dim + s] += 1.0;
            } else {
                m[s * dim + s] -= 1.0;
                let flipped = s ^ (1 << (n - 1 - i)) ^ (1 << (n - 1 - j));
                m[s * dim + flipped] += 2.0;
            }
        }
    }
    m
}

/// Diagonal of `M = Σ_i σ_i^z` (|0⟩ is spin up).
fn magnetization(n: usize) -> Vec<f64> {
    (0..1usize << n)
        .map(|s| (0..n).map(|i| if bit(s, i, n) == 0 { 1.0 } else { -1.0 }).sum())
        .collect()
}

fn real_matrix(dim: usize, m: &[f64]) -> HermitianMatrix {
    HermitianMatrix::from_real(dim, m).expect("symmetric by construction")
}

/// `J Σ σ⃗_i·σ⃗_{i+1} + B Σ σ_i^z`
pub fn xxx_hamiltonian(spec: &ChainSpec) -> Result<HermitianMatrix> {
    spec.validate()?;
    let n = spec.sites;
    let dim = 1 << n;
    let mut h: Vec<f64> = bond_sum(n, &spec.bonds()).iter().map(|v| v * spec.j).collect();
    for (s, m) in magnetization(n).iter().enumerate() {
        h[s * dim + s] += spec.b * m;
    }
    real_matrix(dim, &h).with_shape(spec.shape())
}

/// `(N·I + Σ σ⃗_i·σ⃗_{i+1}) / 2N`, normalized so that `W ⪯ I`.
pub fn toth_witness(sites: usize, periodic: bool) -> Result<Witness> {
    let spec = ChainSpec::new(sites, 1.0, 0.0, periodic, 0.0)?;
    let dim = 1 << sites;
    let mut m = bond_sum(sites, &spec.bonds());
    for s in 0..dim {
        m[s * dim + s] += sites as f64;
    }
    m.iter_mut().for_each(|v| *v /= 2.0 * sites as f64);
    Ok(Witness {
        op: real_matrix(dim, &m).with_shape(spec.shape())?,
        class: WitnessClass::Fixed,
        n: Bound::Infinite,
        m: Bound::Finite(1.0),
        trace_norm: TraceNorm::OpLeqI,
    })
}

/// Thermal expectations of one chain at one temperature.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermalObservables {
    pub beta: f64,
    /// `⟨H⟩`
    pub u: f64,
    /// `⟨Σ σ_i^z⟩`
    pub m: f64,
    /// `⟨(Σ σ_i^z)²⟩`
    pub m2: f64,
    /// `Σ_bonds ⟨σ⃗_i·σ⃗_j⟩`
    pub bond_correlation: f64,
}

/// Diagonalized chain, reusable across temperatures.
#[derive(Clone, Debug)]
pub struct Chain {
    spec: ChainSpec,
    eig: HermitianEigen,
    /// `⟨v_k| M |v_k⟩`, `⟨v_k| M² |v_k⟩`, `⟨v_k| Σσ⃗σ⃗ |v_k⟩` per eigenvector.
    m_diag: Vec<f64>,
    m2_diag: Vec<f64>,
    bond_diag: Vec<f64>,
    witness: Witness,
}

impl Chain {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.sites;
        let dim = 1 << n;
        let h = xxx_hamiltonian(spec)?;
        let hr: Vec<f64> = h.as_cmatrix().as_slice().iter().map(|z| z.re).collect();
        let (values, vecs) = eig_real_sorted(dim, hr)?;
        let mag = magnetization(n);
        let bonds = bond_sum(n, &spec.bonds());
        let col = |k: usize| -> Vec<f64> { (0..dim).map(|i| vecs[i * dim + k]).collect() };
        let mut m_diag = Vec::with_capacity(dim);
        let mut m2_diag = Vec::with_capacity(dim);
        let mut bond_diag = Vec::with_capacity(dim);
        for k in 0..dim {
            let v = col(k);
            m_diag.push(v.iter().zip(&mag).map(|(a, m)| a * a * m).sum());
            m2_diag.push(v.iter().zip(&mag).map(|(a, m)| a * a * m * m).sum());
            let mut bv = 0.0;
            for (i, vi) in v.iter().enumerate() {
                if *vi == 0.0 {
                    continue;
                }
                let row = &bonds[i * dim..(i + 1) * dim];
                bv += vi * row.iter().zip(&v).map(|(b, x)| b * x).sum::<f64>();
            }
            bond_diag.push(bv);
        }
        let vectors = CMatrix::from_vec(dim, vecs.into_iter().map(|x| C64::new(x, 0.0)).collect())?;
        Ok(Self {
            spec: spec.clone(),
            eig: HermitianEigen { values, vectors },
            m_diag,
            m2_diag,
            bond_diag,
            witness: toth_witness(n, spec.periodic)?,
        })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig.values
    }

    fn weights(&self, beta: f64) -> Vec<f64> {
        let lmin = *self.eig.values.last().expect("nonempty");
        let w: Vec<f64> = self.eig.values.iter().map(|l| (-beta * (l - lmin)).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect()
    }

    pub fn thermal(&self, beta: f64) -> Result<DensityMatrix> {
        thermal_from_eigen(&self.eig, beta, Some(&self.spec.shape()))
    }

    pub fn observables(&self, beta: f64) -> Result<ThermalObservables> {
        if !(beta >= 0.0) {
            return domain(format!("inverse temperature {beta} < 0"));
        }
        let w = self.weights(beta);
        let avg = |d: &[f64]| w.iter().zip(d).map(|(a, b)| a * b).sum::<f64>();
        Ok(ThermalObservables {
            beta,
            u: avg(&self.eig.values),
            m: avg(&self.m_diag),
            m2: avg(&self.m2_diag),
            bond_correlation: avg(&self.bond_diag),
        })
    }

    /// `Tr(W ρ_β)` evaluated on the dense thermal state.
    pub fn witness_value(&self, beta: f64) -> Result<f64> {
        evaluate(&self.witness, &self.thermal(beta)?)
    }
}

/// `max{0, −Tr(W ρ_β)}`, a lower bound on the generalized robustness of the
/// thermal state.
pub fn rg_witness_lower_thermal(spec: &ChainSpec) -> Result<f64> {
    Ok((-Chain::new(spec)?.witness_value(spec.beta)?).max(0.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThermoEstimate {
    /// `−(U − B·M)/(2NJ) − 1/2`, equal to `−Tr(Wρ)` for every field.
    pub estimate: f64,
    /// `(U − B·M)/(2NJ) − 1/2`, the opposite-sign variant.
    pub opposite_sign_form: f64,
    pub u: f64,
    pub m: f64,
}

fn estimate_from(spec: &ChainSpec, obs: &ThermalObservables) -> Result<ThermoEstimate> {
    if spec.j == 0.0 {
        return domain("estimate needs J ≠ 0");
    }
    let x = (obs.u - spec.b * obs.m) / (2.0 * spec.sites as f64 * spec.j);
    Ok(ThermoEstimate {
        estimate: -x - 0.5,
        opposite_sign_form: x - 0.5,
        u: obs.u,
        m: obs.m,
    })
}

pub fn thermo_estimate(spec: &ChainSpec) -> Result<ThermoEstimate> {
    let chain = Chain::new(spec)?;
    estimate_from(spec, &chain.observables(spec.beta)?)
}

impl Chain {
    pub fn thermo_estimate(&self, beta: f64) -> Result<ThermoEstimate> {
        estimate_from(&self.spec, &self.observables(beta)?)
    }

    pub fn susceptibility(&self, beta: f64) -> Result<Susceptibility> {
        susceptibility_from(&self.spec, &self.observables(beta)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Susceptibility {
    /// `β(⟨M²⟩ − ⟨M⟩²)`
    pub chi_exact: f64,
    /// `β(N + Σ⟨σ⃗_i·σ⃗_{i+1}⟩/3)`
    pub chi_witness_form: f64,
}

fn susceptibility_from(spec: &ChainSpec, obs: &ThermalObservables) -> Result<Susceptibility> {
    if spec.b != 0.0 {
        return domain("susceptibility is defined here at zero field");
    }
    if !(obs.beta > 0.0) {
        return domain("susceptibility needs β > 0");
    }
    Ok(Susceptibility {
        chi_exact: obs.beta * (obs.m2 - obs.m * obs.m),
        chi_witness_form: obs.beta * (spec.sites as f64 + obs.bond_correlation / 3.0),
    })
}

pub fn susceptibility(spec: &ChainSpec) -> Result<Susceptibility> {
    Chain::new(spec)?.susceptibility(spec.beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_spectrum() {
        let h = xxx_hamiltonian(&ChainSpec::new(2, 1.0, 0.0, false, 1.0).unwrap()).unwrap();
        let vals = h.eigenvalues().unwrap();
        for (v, want) in vals.iter().zip([1.0, 1.0, 1.0, -3.0]) {
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn witness_on_maximally_mixed() {
        for n in 2..=5 {
            let w = toth_witness(n, true).unwrap();
            assert!((w.op.trace() / (1 << n) as f64 - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_long_chains() {
        assert!(ChainSpec::new(9, 1.0, 0.0, true, 1.0).is_err());
        assert!(ChainSpec::new(4, 1.0, 0.0, true, -1.0).is_err());
    }
}
