//! Projective measurement of the cavity pair and Bell-state measurement on
//! the inner ions of two neighbouring links.

use num_complex::Complex64 as C64;

use crate::dynamics;
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::register::{initial_protocol_families, AmplitudeFamilies, PairState, DEGENERATE_NORM};

/// Spectator state `|Ψⁱ⟩` after finding the cavity pair in `Φⁱ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuredPair {
    /// Unnormalized conditional state.
    pub state: PairState,
    /// One-based outcome index.
    pub outcome: usize,
    pub prob: f64,
    /// `None` when the outcome has zero probability.
    pub conc: Option<f64>,
}

impl MeasuredPair {
    pub fn is_degenerate(&self) -> bool {
        self.conc.is_none()
    }
}

/// Bell projector applied to ions `(4,5)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellChoice {
    /// `(|EE⟩ + |GG⟩)/√2`
    PsiEeGg,
    /// `(|EG⟩ + |GE⟩)/√2`
    PsiEgGe,
}

impl BellChoice {
    pub const ALL: [BellChoice; 2] = [BellChoice::PsiEeGg, BellChoice::PsiEgGe];

    pub fn name(&self) -> &'static str {
        match self {
            BellChoice::PsiEeGg => "PSI_EEGG",
            BellChoice::PsiEgGe => "PSI_EGGE",
        }
    }
}

/// End-pair state after the Bell-state measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapOutcome {
    /// Normalized `(1,8)` state, or the zero state when `prob` vanishes.
    pub state: PairState,
    pub bell: BellChoice,
    /// `N` computed from the unnormalized inputs.
    pub n_factor: f64,
    pub prob: f64,
    pub conc: Option<f64>,
}

/// Reads row `outcome` (one based) of the families as the spectator state.
pub fn project_pair(f: &AmplitudeFamilies, outcome: usize) -> Result<MeasuredPair> {
    if !(1..=4).contains(&outcome) {
        return Err(Error::InvalidOutcome(outcome));
    }
    let state = f.row_state(outcome - 1);
    let prob = state.norm_sq();
    let conc = if prob <= DEGENERATE_NORM { None } else { state.concurrence().ok() };
    Ok(MeasuredPair { state, outcome, prob, conc })
}

/// Unnormalized `(1,8)` amplitudes in `{EG, GE, GG, EE}` order, up to the
/// common `1/√2` of the Bell projector.
fn swapped_amplitudes(a: &PairState, b: &PairState, bell: BellChoice) -> [C64; 4] {
    let (al, be, ga, et) = (a.alpha, a.beta, a.gamma, a.eta);
    let (al2, be2, ga2, et2) = (b.alpha, b.beta, b.gamma, b.eta);
    match bell {
        BellChoice::PsiEeGg => [
            al * ga2 + et * al2,
            ga * be2 + be * et2,
            ga * ga2 + be * al2,
            al * be2 + et * et2,
        ],
        BellChoice::PsiEgGe => [
            al * al2 + et * ga2,
            ga * et2 + be * be2,
            ga * al2 + be * ga2,
            al * et2 + et * be2,
        ],
    }
}

/// Swaps entanglement from `a` = pair `(1,4)` and `b` = pair `(5,8)` onto
/// `(1,8)` by projecting `(4,5)` onto the chosen Bell state.
pub fn swap_bsm(a: &PairState, b: &PairState, bell: BellChoice) -> Result<SwapOutcome> {
    let pa = a.norm_sq();
    let pb = b.norm_sq();
    for n in [pa, pb] {
        if n <= DEGENERATE_NORM {
            return Err(Error::DegenerateState { norm_sq: n });
        }
    }
    debug_assert!(pa >= 0.0 && pb >= 0.0);

    let raw = PairState::from_array(swapped_amplitudes(a, b, bell));
    let n_factor = raw.norm_sq();
    let prob = n_factor / (2.0 * pa * pb);

    if prob <= DEGENERATE_NORM {
        let zero = PairState::from_real(0.0, 0.0, 0.0, 0.0);
        return Ok(SwapOutcome { state: zero, bell, n_factor, prob, conc: None });
    }
    let conc = 2.0 * (raw.eta * raw.gamma - raw.alpha * raw.beta).norm() / n_factor;
    Ok(SwapOutcome { state: raw.normalized()?, bell, n_factor, prob, conc: Some(conc) })
}

/// Everything the protocol reports for one time and one pair of outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolRecord {
    pub t: f64,
    pub pair14: MeasuredPair,
    pub pair58: MeasuredPair,
    pub swap_psi: SwapOutcome,
    pub swap_psiprime: SwapOutcome,
}

impl ProtocolRecord {
    /// Applies both measurement stages to already evolved families. Links
    /// `(1,4)` and `(5,8)` evolve identically, so both read the same matrix.
    pub fn from_families(t: f64, families: &AmplitudeFamilies, i: usize, j: usize) -> Result<Self> {
        let pair14 = project_pair(families, i)?;
        let pair58 = project_pair(families, j)?;
        let swap_psi = swap_bsm(&pair14.state, &pair58.state, BellChoice::PsiEeGg)?;
        let swap_psiprime = swap_bsm(&pair14.state, &pair58.state, BellChoice::PsiEgGe)?;
        Ok(Self { t, pair14, pair58, swap_psi, swap_psiprime })
    }

    pub fn swap(&self, bell: BellChoice) -> &SwapOutcome {
        match bell {
            BellChoice::PsiEeGg => &self.swap_psi,
            BellChoice::PsiEgGe => &self.swap_psiprime,
        }
    }
}

/// Evolves the protocol state to `t`, measures outcomes `i` on `(2,3)` and
/// `j` on `(6,7)`, then swaps onto `(1,8)` with both Bell projectors.
pub fn run_protocol(p: &ModelParams, t: f64, i: usize, j: usize) -> Result<ProtocolRecord> {
    for k in [i, j] {
        if !(1..=4).contains(&k) {
            return Err(Error::InvalidOutcome(k));
        }
    }
    let x0 = initial_protocol_families();
    let grid: Vec<f64> = if t == 0.0 { vec![0.0] } else { vec![0.0, t] };
    let traj = dynamics::evolve_auto(p, &x0, &grid)?;
    let families = traj.families.last().expect("grid is nonempty");
    ProtocolRecord::from_families(t, families, i, j)
}
