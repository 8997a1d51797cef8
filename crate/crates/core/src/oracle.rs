//! Direct integration of the full truncated Hamiltonian, used to check the
//! effective four-level dynamics.

use ndarray::{s, Array1, Array2};
use num_complex::Complex64 as C64;

use crate::dynamics;
use crate::error::{Error, Result};
use crate::fock::{self, FockOperator, FockSpace, SparseMatrix, MAX_DIM};
use crate::integrator::{self, IntegratorOptions, LinearGenerator};
use crate::linalg::{self, I, ZERO};
use crate::params::ModelParams;
use crate::register::{initial_protocol_families, AmplitudeFamilies};

/// State vector on a truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    pub space: FockSpace,
    pub amplitudes: Array1<C64>,
}

impl FullState {
    pub fn new(space: FockSpace, amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: amplitudes.len() });
        }
        Ok(Self { space, amplitudes })
    }

    pub fn basis(space: FockSpace, k: usize) -> Self {
        let mut amplitudes = Array1::zeros(space.dim());
        amplitudes[k] = C64::from(1.0);
        Self { space, amplitudes }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `Ĥ₀ + Ĥ₁(t)` as a dense matrix.
pub fn full_hamiltonian(p: &ModelParams, space: &FockSpace, t: f64) -> Result<FockOperator> {
    space.check_limit(MAX_DIM)?;
    let h = fock::bare_hamiltonian(p, space) + fock::static_coupling(p, space) + fock::pump_term(p, space, t);
    FockOperator::new(*space, h)
}

/// Lab-frame generator with the pump phase applied explicitly.
pub struct FullGenerator {
    fixed: SparseMatrix,
    a: SparseMatrix,
    a_dag: SparseMatrix,
    e_p: f64,
    omega_p: f64,
    bound: f64,
}

impl FullGenerator {
    pub fn new(p: &ModelParams, space: &FockSpace) -> Result<Self> {
        space.check_limit(MAX_DIM)?;
        let fixed = fock::bare_hamiltonian(p, space) + fock::static_coupling(p, space);
        let a = space.a();
        let a_dag = linalg::dagger(&a.view());
        let fixed = SparseMatrix::from_dense(&fixed.view());
        let a = SparseMatrix::from_dense(&a.view());
        let a_dag = SparseMatrix::from_dense(&a_dag.view());
        let bound = fixed.inf_norm() + p.e_p.abs() * (a.inf_norm() + a_dag.inf_norm());
        Ok(Self { fixed, a, a_dag, e_p: p.e_p, omega_p: p.omega_p, bound })
    }
}

impl LinearGenerator for FullGenerator {
    fn apply(&self, t: f64, x: &Array2<C64>) -> Array2<C64> {
        let ph = C64::from_polar(1.0, self.omega_p * t);
        // −i(H_fixed − iE_P(a e^{iω_P t} − a† e^{−iω_P t}))x
        let mut hx = self.fixed.dot(x);
        let pump = self.a.dot(x) * ph - self.a_dag.dot(x) * ph.conj();
        hx.scaled_add(-I * self.e_p, &pump);
        hx.mapv_into(|z| -I * z)
    }

    fn norm_bound(&self) -> f64 {
        self.bound
    }
}

/// Evolves `psi0` under the full Hamiltonian, sampled on `t_grid`.
pub fn evolve_full(p: &ModelParams, psi0: &FullState, t_grid: &[f64]) -> Result<Vec<FullState>> {
    let space = psi0.space;
    let x0 = psi0.amplitudes.clone().into_shape_with_order((space.dim(), 1)).expect("column vector");
    let out = evolve_columns(p, &space, &x0, t_grid, &IntegratorOptions::default())?;
    Ok(out
        .into_iter()
        .map(|m| FullState { space, amplitudes: m.column(0).to_owned() })
        .collect())
}

fn evolve_columns(
    p: &ModelParams,
    space: &FockSpace,
    x0: &Array2<C64>,
    t_grid: &[f64],
    opts: &IntegratorOptions,
) -> Result<Vec<Array2<C64>>> {
    if x0.nrows() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: x0.nrows() });
    }
    let gen = FullGenerator::new(p, space)?;
    integrator::integrate(&gen, x0, t_grid, opts)
}

/// Multiplies each row by `e^{iE_k t}`, moving a lab-frame state to the
/// interaction picture of the (diagonal) bare Hamiltonian.
pub fn to_interaction_picture(p: &ModelParams, space: &FockSpace, x: &Array2<C64>, t: f64) -> Array2<C64> {
    let h0 = fock::bare_hamiltonian(p, space);
    let mut out = x.clone();
    for (k, mut row) in out.rows_mut().into_iter().enumerate() {
        let ph = C64::from_polar(1.0, h0[[k, k]].re * t);
        row.mapv_inplace(|z| z * ph);
    }
    out
}

/// Full against effective dynamics at one sample time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationSample {
    pub t: f64,
    /// Largest entrywise difference of the `4×4` blocks after removing a
    /// common phase.
    pub deviation: f64,
    /// Population outside the vacuum two-level block.
    pub leakage: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationReport {
    pub samples: Vec<DeviationSample>,
}

impl DeviationReport {
    pub fn max_deviation(&self) -> f64 {
        self.samples.iter().map(|s| s.deviation).fold(0.0, f64::max)
    }

    pub fn max_leakage(&self) -> f64 {
        self.samples.iter().map(|s| s.leakage).fold(0.0, f64::max)
    }
}

/// Largest `|a − e^{iφ}b|` with `φ` chosen to maximize the overlap.
pub fn phase_aligned_deviation(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    let overlap: C64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { C64::from(1.0) };
    let aligned = b.mapv(|z| z * phase);
    linalg::max_abs_diff(&a.view(), &aligned.view())
}

/// Embeds the protocol's initial families in the optical and mechanical
/// vacuum, evolves them with the full Hamiltonian and compares the vacuum
/// block with the effective solution.
pub fn compare_to_effective(p: &ModelParams, space: &FockSpace, t_grid: &[f64]) -> Result<DeviationReport> {
    compare_to_effective_with(p, space, t_grid, &IntegratorOptions::default())
}

pub fn compare_to_effective_with(
    p: &ModelParams,
    space: &FockSpace,
    t_grid: &[f64],
    opts: &IntegratorOptions,
) -> Result<DeviationReport> {
    let init = initial_protocol_families();
    let idx = space.vacuum_block_indices();
    let mut x0 = Array2::from_elem((space.dim(), 4), ZERO);
    for (r, &k) in idx.iter().enumerate() {
        x0.row_mut(k).assign(&init.m.row(r));
    }

    let full = evolve_columns(p, space, &x0, t_grid, opts)?;
    let eff = dynamics::evolve_auto(p, &init, t_grid)?;

    let samples = t_grid
        .iter()
        .zip(full.iter().zip(eff.families.iter()))
        .map(|(&t, (x, f))| {
            let xi = to_interaction_picture(p, space, x, t);
            let block = vacuum_rows(&xi, &idx);
            let total: f64 = xi.iter().map(|z| z.norm_sqr()).sum();
            let inside: f64 = block.iter().map(|z| z.norm_sqr()).sum();
            DeviationSample { t, deviation: phase_aligned_deviation(&f.m, &block), leakage: (total - inside).max(0.0) }
        })
        .collect();
    Ok(DeviationReport { samples })
}

fn vacuum_rows(x: &Array2<C64>, idx: &[usize; 4]) -> Array2<C64> {
    let mut out = Array2::from_elem((4, x.ncols()), ZERO);
    for (r, &k) in idx.iter().enumerate() {
        out.row_mut(r).assign(&x.slice(s![k, ..]));
    }
    out
}

/// Vacuum-block families read from a full-space state matrix.
pub fn vacuum_families(x: &Array2<C64>, space: &FockSpace) -> AmplitudeFamilies {
    AmplitudeFamilies::new(vacuum_rows(x, &space.vacuum_block_indices()))
}
