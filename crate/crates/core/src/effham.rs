//! Numerical construction of the time-averaged effective Hamiltonian.
//!
//! The interaction-picture Hamiltonian is split into harmonics
//! `Σₙ ĥₙ e^{−iωₙt} + h.c.`, and the effective generator is
//! `Σ_{m,n} (1/ω_mn)[ĥₘ†, ĥₙ] e^{i(ωₘ−ωₙ)t}` with `ω_mn` the harmonic mean.
//! Restricting it to the optical and mechanical vacuum leaves the 4×4
//! generator used by [`crate::dynamics`].
//!
//! The pump–pump commutator `[ĥ₄†, ĥ₄] = −E_P²` is a c-number (a common
//! energy offset) and is left out of the operator; its value is kept in
//! [`EffectiveHamiltonian::scalar_offset`].

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{self, FockSpace, Ion, SparseMatrix};
pub use crate::fock::FockOperator;
use crate::linalg::{self, I};
use crate::params::{derived_frequencies, FrequencySet, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HarmonicKind {
    /// `−G â†â b̂` at ω₁
    Optomechanical,
    /// `i g₂ â Σ̂₊⁽²⁾` at ω₂
    Ion2,
    /// `i g₃ â Σ̂₊⁽³⁾` at ω₃
    Ion3,
    /// `−i E_P â` at ω₄
    Pump,
}

impl HarmonicKind {
    pub const ALL: [HarmonicKind; 4] =
        [HarmonicKind::Optomechanical, HarmonicKind::Ion2, HarmonicKind::Ion3, HarmonicKind::Pump];

    /// Zero-based position in the frequency table.
    pub fn index(&self) -> usize {
        *self as usize
    }

    pub fn label(&self) -> &'static str {
        match self {
            HarmonicKind::Optomechanical => "h1 (−G a†a b)",
            HarmonicKind::Ion2 => "h2 (i g2 a Σ+2)",
            HarmonicKind::Ion3 => "h3 (i g3 a Σ+3)",
            HarmonicKind::Pump => "h4 (−i E_P a)",
        }
    }
}

/// One harmonic `ĥ e^{−iωt} + ĥ† e^{iωt}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicTerm {
    pub kind: HarmonicKind,
    pub h: FockOperator,
    pub omega: f64,
}

/// The four harmonics of the interaction-picture Hamiltonian.
pub fn harmonic_terms(p: &ModelParams, space: &FockSpace) -> Result<Vec<HarmonicTerm>> {
    let freqs = derived_frequencies(p)?;
    let a = space.a();
    let ad = linalg::dagger(&a.view());
    let ops = [
        ad.dot(&a).dot(&space.b()) * C64::from(-p.g_om),
        a.dot(&space.big_sigma_plus(Ion::Two)) * (I * p.g2),
        a.dot(&space.big_sigma_plus(Ion::Three)) * (I * p.g3),
        a * (-I * p.e_p),
    ];
    Ok(HarmonicKind::ALL
        .iter()
        .zip(ops)
        .map(|(&kind, matrix)| HarmonicTerm {
            kind,
            h: FockOperator { space: *space, matrix },
            omega: freqs.omega[kind.index()],
        })
        .collect())
}

/// `Σₙ ĥₙ e^{−iωₙt} + h.c.`
pub fn reassemble(terms: &[HarmonicTerm], t: f64) -> Result<FockOperator> {
    let space = terms.first().map(|x| x.h.space).ok_or(Error::DimensionMismatch { expected: 4, found: 0 })?;
    let mut acc = FockOperator::zeros(space);
    for term in terms {
        let ph = C64::from_polar(1.0, -term.omega * t);
        let piece = term.h.matrix.mapv(|z| z * ph);
        acc.matrix = acc.matrix + &piece + &linalg::dagger(&piece.view());
    }
    Ok(acc)
}

/// `e^{iĤ₀t} Ĥ₁(t) e^{−iĤ₀t}` by direct conjugation with the (diagonal) bare
/// Hamiltonian.
pub fn interaction_picture(p: &ModelParams, space: &FockSpace, t: f64) -> FockOperator {
    let h0 = fock::bare_hamiltonian(p, space);
    let u = linalg::expm(&h0.mapv(|z| I * z * t).view());
    let h1 = fock::static_coupling(p, space) + fock::pump_term(p, space, t);
    let matrix = u.dot(&h1).dot(&linalg::dagger(&u.view()));
    FockOperator { space: *space, matrix }
}

/// One `(m, n)` contribution to the effective Hamiltonian.
#[derive(Debug, Clone)]
pub struct CommutatorEntry {
    pub m: HarmonicKind,
    pub n: HarmonicKind,
    /// `1/ω_mn`
    pub weight: f64,
    /// `ωₘ − ωₙ`
    pub beat: f64,
    /// `[ĥₘ†, ĥₙ]`
    pub commutator: Array2<C64>,
}

/// All commutators, computed once and evaluated at any `t`.
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    pub space: FockSpace,
    pub entries: Vec<CommutatorEntry>,
    /// Dropped c-number `−E_P²/ω₄₄`.
    pub scalar_offset: f64,
}

impl EffectiveHamiltonian {
    pub fn new(terms: &[HarmonicTerm], freqs: &FrequencySet) -> Result<Self> {
        let space = terms.first().map(|x| x.h.space).ok_or(Error::DimensionMismatch { expected: 4, found: 0 })?;
        let dense: Vec<&Array2<C64>> = terms.iter().map(|x| &x.h.matrix).collect();
        let sparse: Vec<SparseMatrix> = terms.iter().map(|x| SparseMatrix::from_dense(&x.h.matrix.view())).collect();
        let sparse_dag: Vec<SparseMatrix> =
            terms.iter().map(|x| SparseMatrix::from_dense(&x.h.dagger().matrix.view())).collect();

        let mut entries = Vec::new();
        let mut scalar_offset = 0.0;
        for (mi, tm) in terms.iter().enumerate() {
            for (ni, tn) in terms.iter().enumerate() {
                let weight = 1.0 / freqs.omega_ij[tm.kind.index()][tn.kind.index()];
                if tm.kind == HarmonicKind::Pump && tn.kind == HarmonicKind::Pump {
                    // The smallest nonzero entry of −iE_P·â is ⟨0|â|1⟩ = E_P.
                    let amp = tm.h.matrix.iter().map(|z| z.norm()).filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
                    if amp.is_finite() {
                        scalar_offset = -amp * amp * weight;
                    }
                    continue;
                }
                // [ĥₘ†, ĥₙ] = ĥₘ†ĥₙ − ĥₙĥₘ†
                let left = sparse_dag[mi].dot(dense[ni]);
                let right = sparse[ni].dot(&linalg::dagger(&dense[mi].view()));
                entries.push(CommutatorEntry {
                    m: tm.kind,
                    n: tn.kind,
                    weight,
                    beat: tm.omega - tn.omega,
                    commutator: left - right,
                });
            }
        }
        Ok(Self { space, entries, scalar_offset })
    }

    pub fn at(&self, t: f64) -> FockOperator {
        let n = self.space.dim();
        let mut matrix = Array2::zeros((n, n));
        for e in &self.entries {
            let c = C64::from_polar(e.weight, e.beat * t);
            matrix.scaled_add(c, &e.commutator);
        }
        FockOperator { space: self.space, matrix }
    }
}

/// `Σ_{m,n} (1/ω_mn)[ĥₘ†, ĥₙ] e^{i(ωₘ−ωₙ)t}` without the pump c-number.
pub fn effective_hamiltonian(terms: &[HarmonicTerm], freqs: &FrequencySet, t: f64) -> Result<FockOperator> {
    Ok(EffectiveHamiltonian::new(terms, freqs)?.at(t))
}

/// Restriction to `|0⟩_a|0⟩_b ⊗ span{Φ¹..Φ⁴}`.
pub fn vacuum_block(h_eff: &FockOperator) -> Result<Array2<C64>> {
    let dim = h_eff.space.dim();
    let (r, c) = h_eff.matrix.dim();
    if r != dim || c != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: r.max(c) });
    }
    Ok(h_eff.restrict(&h_eff.space.vacuum_block_indices()))
}

/// `vacuum_block(effective_hamiltonian(...))` straight from parameters.
pub fn derived_s_matrix(p: &ModelParams, space: &FockSpace, t: f64) -> Result<Array2<C64>> {
    let terms = harmonic_terms(p, space)?;
    let freqs = derived_frequencies(p)?;
    vacuum_block(&effective_hamiltonian(&terms, &freqs, t)?)
}

/// One line of the term inventory.
#[derive(Debug, Clone)]
pub struct InventoryRow {
    pub m: HarmonicKind,
    pub n: HarmonicKind,
    pub weight: f64,
    pub beat: f64,
    /// Frobenius norm of the commutator.
    pub norm: f64,
    /// Largest entry of its vacuum block.
    pub vacuum_max: f64,
}

pub fn inventory(h: &EffectiveHamiltonian) -> Vec<InventoryRow> {
    let idx = h.space.vacuum_block_indices();
    h.entries
        .iter()
        .map(|e| {
            let vacuum_max = idx
                .iter()
                .flat_map(|&r| idx.iter().map(move |&c| (r, c)))
                .map(|(r, c)| e.commutator[[r, c]].norm())
                .fold(0.0, f64::max);
            InventoryRow {
                m: e.m,
                n: e.n,
                weight: e.weight,
                beat: e.beat,
                norm: linalg::frobenius_sq(&e.commutator.view()).sqrt(),
                vacuum_max,
            }
        })
        .collect()
}
