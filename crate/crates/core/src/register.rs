//! Two-level encoding of the trapped ions and the pure two-ion states built on
//! it.
//!
//! Each ion is restricted to the closed pair `|G⟩ ≡ |g,0⟩`, `|E⟩ ≡ |e,1⟩`
//! (internal level ⊗ vibrational Fock state). The couplings only ever connect
//! these two states, so `|e,0⟩` and `|g,1⟩` do not appear.
//!
//! Two-ion amplitudes are always stored in the wire order
//! `{EG, GE, GG, EE}`, i.e. `(α, β, γ, η)`.

use ndarray::{Array2, ArrayView1};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Below this squared norm a state is treated as a zero-probability outcome.
pub const DEGENERATE_NORM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IonLevel {
    /// `|e,1⟩`
    E,
    /// `|g,0⟩`
    G,
}

/// Level pairs in the `(α, β, γ, η)` order used for every two-ion state.
pub const PAIR_BASIS: [(IonLevel, IonLevel); 4] = [
    (IonLevel::E, IonLevel::G),
    (IonLevel::G, IonLevel::E),
    (IonLevel::G, IonLevel::G),
    (IonLevel::E, IonLevel::E),
];

/// Index of a level pair in [`PAIR_BASIS`].
pub fn pair_index(first: IonLevel, second: IonLevel) -> usize {
    use IonLevel::*;
    match (first, second) {
        (E, G) => 0,
        (G, E) => 1,
        (G, G) => 2,
        (E, E) => 3,
    }
}

/// A (possibly unnormalized) pure state of two ions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairState {
    /// `|E⟩|G⟩`
    pub alpha: C64,
    /// `|G⟩|E⟩`
    pub beta: C64,
    /// `|G⟩|G⟩`
    pub gamma: C64,
    /// `|E⟩|E⟩`
    pub eta: C64,
}

impl PairState {
    pub const fn new(alpha: C64, beta: C64, gamma: C64, eta: C64) -> Self {
        Self { alpha, beta, gamma, eta }
    }

    pub fn from_real(alpha: f64, beta: f64, gamma: f64, eta: f64) -> Self {
        Self::new(alpha.into(), beta.into(), gamma.into(), eta.into())
    }

    pub fn from_array(v: [C64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn from_view(v: ArrayView1<C64>) -> Self {
        assert_eq!(v.len(), 4, "a pair state has four amplitudes");
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(&self) -> [C64; 4] {
        [self.alpha, self.beta, self.gamma, self.eta]
    }

    /// Amplitude of the given level pair.
    pub fn amplitude(&self, first: IonLevel, second: IonLevel) -> C64 {
        self.to_array()[pair_index(first, second)]
    }

    /// Product state `(a_E|E⟩ + a_G|G⟩) ⊗ (b_E|E⟩ + b_G|G⟩)`.
    pub fn product(first: [C64; 2], second: [C64; 2]) -> Self {
        let [ae, ag] = first;
        let [be, bg] = second;
        Self::new(ae * bg, ag * be, ag * bg, ae * be)
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self::from_array(self.to_array().map(|z| z * c))
    }

    /// `|α|² + |β|² + |γ|² + |η|²`
    pub fn norm_sq(&self) -> f64 {
        self.to_array().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_degenerate(&self) -> bool {
        self.norm_sq() <= DEGENERATE_NORM
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n <= DEGENERATE_NORM {
            return Err(Error::DegenerateState { norm_sq: n });
        }
        Ok(self.scaled(C64::from(1.0 / n.sqrt())))
    }

    /// Pure-state concurrence `2|ηγ − αβ| / norm_sq`, which does not depend on
    /// the normalization of the amplitudes.
    pub fn concurrence(&self) -> Result<f64> {
        let n = self.norm_sq();
        if n <= DEGENERATE_NORM {
            return Err(Error::DegenerateState { norm_sq: n });
        }
        Ok(2.0 * (self.eta * self.gamma - self.alpha * self.beta).norm() / n)
    }

    /// `|⟨self|other⟩|` for normalized copies of both states.
    pub fn overlap_modulus(&self, other: &PairState) -> Result<f64> {
        let a = self.normalized()?.to_array();
        let b = other.normalized()?.to_array();
        Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum::<C64>().norm())
    }
}

/// The sixteen amplitudes of the four-ion state `(1,2,3,4)` grouped by the
/// measured pair `(2,3)`.
///
/// Row `i` is the `(2,3)` basis state `Φⁱ⁺¹ ∈ {GE, EG, EE, GG}`; column `f` is
/// the spectator `(1,4)` basis state `{EG, GE, GG, EE}`, so the columns are
/// the α-, β-, γ- and η-families and row `i` read across is `|Ψⁱ⟩₁,₄`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeFamilies {
    pub m: Array2<C64>,
}

/// `(ion 2, ion 3)` levels of the rows of [`AmplitudeFamilies`].
pub const MEASURED_BASIS: [(IonLevel, IonLevel); 4] = [
    (IonLevel::G, IonLevel::E),
    (IonLevel::E, IonLevel::G),
    (IonLevel::E, IonLevel::E),
    (IonLevel::G, IonLevel::G),
];

impl AmplitudeFamilies {
    pub fn new(m: Array2<C64>) -> Self {
        assert_eq!(m.dim(), (4, 4), "amplitude families are a 4×4 matrix");
        Self { m }
    }

    pub fn total_norm_sq(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum()
    }

    /// The unnormalized spectator state left after projecting `(2,3)` onto
    /// row `row` (zero based).
    pub fn row_state(&self, row: usize) -> PairState {
        PairState::from_view(self.m.row(row))
    }

    /// Gram matrix `M†M` of the family columns.
    pub fn gram(&self) -> Array2<C64> {
        self.m.t().mapv(|z| z.conj()).dot(&self.m)
    }
}

/// Expansion of two Bell-like pairs `(1/√2)(|EG⟩+|GE⟩)` on `(1,2)` and
/// `(3,4)` in the grouped layout: one half times the identity.
pub fn initial_protocol_families() -> AmplitudeFamilies {
    // ½ |E1 G2 E3 G4⟩: (2,3)=GE=Φ¹, (1,4)=EG → α
    // ½ |G1 E2 G3 E4⟩: (2,3)=EG=Φ², (1,4)=GE → β
    // ½ |G1 E2 E3 G4⟩: (2,3)=EE=Φ³, (1,4)=GG → γ
    // ½ |E1 G2 G3 E4⟩: (2,3)=GG=Φ⁴, (1,4)=EE → η
    AmplitudeFamilies::new(Array2::from_diag_elem(4, C64::from(0.5)))
}
