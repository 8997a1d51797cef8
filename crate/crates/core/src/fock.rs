//! Truncated multi-mode Hilbert space of one optomechanical cavity with ions
//! 2 and 3, and the operators of the full Hamiltonian on it.
//!
//! Mode order (most significant first): optical `a`, mechanical `b`, ion 2,
//! ion 3. Each ion is a composite of its internal level (`g` = 0, `e` = 1)
//! and its vibrational mode `c`, indexed `internal·d_c + n_c`.

use ndarray::linalg::kron;
use ndarray::{Array2, ArrayView2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, identity, I, ONE, ZERO};
use crate::params::ModelParams;
use crate::register::IonLevel;

/// Default guard on the product of mode dimensions.
pub const MAX_DIM: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockSpace {
    /// Optical truncation.
    pub d_a: usize,
    /// Mechanical truncation.
    pub d_b: usize,
    /// Vibrational truncation of each ion.
    pub d_c: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ion {
    Two,
    Three,
}

impl FockSpace {
    pub fn new(d_a: usize, d_b: usize, d_c: usize) -> Result<Self> {
        for d in [d_a, d_b, d_c] {
            if d < 2 {
                return Err(Error::TruncationTooSmall(d));
            }
        }
        Ok(Self { d_a, d_b, d_c })
    }

    pub fn ion_dim(&self) -> usize {
        2 * self.d_c
    }

    /// `[d_a, d_b, 2·d_c, 2·d_c]`
    pub fn dims(&self) -> [usize; 4] {
        [self.d_a, self.d_b, self.ion_dim(), self.ion_dim()]
    }

    pub fn dim(&self) -> usize {
        self.dims().iter().product()
    }

    pub fn check_limit(&self, limit: usize) -> Result<()> {
        let dim = self.dim();
        if dim > limit {
            return Err(Error::DimensionOverflow { dim, limit });
        }
        Ok(())
    }

    /// Composite index of `(internal, vibrational)` for one ion.
    pub fn ion_index(&self, excited: bool, n_c: usize) -> usize {
        (excited as usize) * self.d_c + n_c
    }

    /// Composite index of a two-level ion state.
    pub fn level_index(&self, level: IonLevel) -> usize {
        match level {
            IonLevel::G => self.ion_index(false, 0),
            IonLevel::E => self.ion_index(true, 1),
        }
    }

    pub fn index(&self, n_a: usize, n_b: usize, ion2: usize, ion3: usize) -> usize {
        let d = self.ion_dim();
        ((n_a * self.d_b + n_b) * d + ion2) * d + ion3
    }

    /// Inverse of [`FockSpace::index`].
    pub fn decompose(&self, k: usize) -> (usize, usize, usize, usize) {
        let d = self.ion_dim();
        let ion3 = k % d;
        let rest = k / d;
        let ion2 = rest % d;
        let rest = rest / d;
        (rest / self.d_b, rest % self.d_b, ion2, ion3)
    }

    /// Indices of `|0⟩_a|0⟩_b ⊗ Φ¹..Φ⁴` in row order of the measured basis.
    pub fn vacuum_block_indices(&self) -> [usize; 4] {
        crate::register::MEASURED_BASIS
            .map(|(l2, l3)| self.index(0, 0, self.level_index(l2), self.level_index(l3)))
    }

    /// True when both ions sit in `{|g,0⟩, |e,1⟩}`.
    pub fn in_two_level_subspace(&self, k: usize) -> bool {
        let (_, _, s2, s3) = self.decompose(k);
        let ok = |s: usize| s == self.level_index(IonLevel::G) || s == self.level_index(IonLevel::E);
        ok(s2) && ok(s3)
    }

    /// Basis states at least one level below every bosonic cutoff, with both
    /// ions in the two-level subspace. Operator identities hold exactly here.
    pub fn interior_indices(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&k| {
                let (na, nb, _, _) = self.decompose(k);
                na + 2 <= self.d_a && nb + 2 <= self.d_b && self.in_two_level_subspace(k)
            })
            .collect()
    }

    fn embed(&self, op_a: Option<&Array2<C64>>, op_b: Option<&Array2<C64>>, ion2: Option<&Array2<C64>>, ion3: Option<&Array2<C64>>) -> Array2<C64> {
        let [da, db, d2, d3] = self.dims();
        let pick = |op: Option<&Array2<C64>>, d: usize| op.cloned().unwrap_or_else(|| identity(d));
        let ab = kron(&pick(op_a, da), &pick(op_b, db));
        let ions = kron(&pick(ion2, d2), &pick(ion3, d3));
        kron(&ab, &ions)
    }

    fn embed_ion(&self, ion: Ion, op: &Array2<C64>) -> Array2<C64> {
        match ion {
            Ion::Two => self.embed(None, None, Some(op), None),
            Ion::Three => self.embed(None, None, None, Some(op)),
        }
    }

    /// Optical annihilation `â`.
    pub fn a(&self) -> Array2<C64> {
        self.embed(Some(&destroy(self.d_a)), None, None, None)
    }

    /// Mechanical annihilation `b̂`.
    pub fn b(&self) -> Array2<C64> {
        self.embed(None, Some(&destroy(self.d_b)), None, None)
    }

    /// Vibrational annihilation `ĉ_i`.
    pub fn c(&self, ion: Ion) -> Array2<C64> {
        self.embed_ion(ion, &kron(&identity(2), &destroy(self.d_c)))
    }

    /// `σ̂_z⁽ⁱ⁾` with eigenvalue −1 on `g`, +1 on `e`.
    pub fn sigma_z(&self, ion: Ion) -> Array2<C64> {
        let z = ndarray::array![[-ONE, ZERO], [ZERO, ONE]];
        self.embed_ion(ion, &kron(&z, &identity(self.d_c)))
    }

    /// `Σ̂₋⁽ⁱ⁾ = ĉ_i σ̂₋⁽ⁱ⁾`.
    pub fn big_sigma_minus(&self, ion: Ion) -> Array2<C64> {
        let lower = ndarray::array![[ZERO, ONE], [ZERO, ZERO]];
        self.embed_ion(ion, &kron(&lower, &destroy(self.d_c)))
    }

    /// `Σ̂₊⁽ⁱ⁾ = ĉ_i† σ̂₊⁽ⁱ⁾`.
    pub fn big_sigma_plus(&self, ion: Ion) -> Array2<C64> {
        linalg::dagger(&self.big_sigma_minus(ion).view())
    }

    /// `Σ̂_z⁽ⁱ⁾ = [Σ̂₊⁽ⁱ⁾, Σ̂₋⁽ⁱ⁾]`.
    pub fn big_sigma_z(&self, ion: Ion) -> Array2<C64> {
        linalg::commutator(&self.big_sigma_plus(ion), &self.big_sigma_minus(ion))
    }
}

/// Truncated annihilation operator on `d` Fock levels.
pub fn destroy(d: usize) -> Array2<C64> {
    let mut m = Array2::zeros((d, d));
    for n in 1..d {
        m[[n - 1, n]] = C64::from((n as f64).sqrt());
    }
    m
}

fn number(op: &Array2<C64>) -> Array2<C64> {
    linalg::dagger(&op.view()).dot(op)
}

/// A matrix on a [`FockSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub space: FockSpace,
    pub matrix: Array2<C64>,
}

impl FockOperator {
    pub fn new(space: FockSpace, matrix: Array2<C64>) -> Result<Self> {
        let dim = space.dim();
        let (r, c) = matrix.dim();
        if r != dim || c != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: r.max(c) });
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: FockSpace) -> Self {
        let n = space.dim();
        Self { space, matrix: Array2::zeros((n, n)) }
    }

    pub fn dagger(&self) -> Self {
        Self { space: self.space, matrix: linalg::dagger(&self.matrix.view()) }
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(&self.matrix.view())
    }

    /// Sub-matrix on the given basis indices.
    pub fn restrict(&self, indices: &[usize]) -> Array2<C64> {
        let n = indices.len();
        Array2::from_shape_fn((n, n), |(r, c)| self.matrix[[indices[r], indices[c]]])
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|z| *z == ZERO)
    }
}

/// `Ĥ₀ = ω_c â†â + ω_M b̂†b̂ + Σᵢ (ν ĉᵢ†ĉᵢ + ω_0/2 σ̂_z⁽ⁱ⁾)`, diagonal in the
/// number basis.
pub fn bare_hamiltonian(p: &ModelParams, s: &FockSpace) -> Array2<C64> {
    let mut h = number(&s.a()) * C64::from(p.omega_c) + number(&s.b()) * C64::from(p.omega_m);
    for ion in [Ion::Two, Ion::Three] {
        h = h + number(&s.c(ion)) * C64::from(p.nu) + s.sigma_z(ion) * C64::from(0.5 * p.omega_0);
    }
    h
}

/// Time-independent part of `Ĥ₁`:
/// `−G â†â(b̂ + b̂†) + i Σᵢ gᵢ(â Σ̂₊⁽ⁱ⁾ − â† Σ̂₋⁽ⁱ⁾)`.
pub fn static_coupling(p: &ModelParams, s: &FockSpace) -> Array2<C64> {
    let a = s.a();
    let ad = linalg::dagger(&a.view());
    let b = s.b();
    let bd = linalg::dagger(&b.view());
    let mut h = ad.dot(&a).dot(&(b + bd)) * C64::from(-p.g_om);
    for (ion, g) in [(Ion::Two, p.g2), (Ion::Three, p.g3)] {
        let up = s.big_sigma_plus(ion);
        let down = s.big_sigma_minus(ion);
        h = h + (a.dot(&up) - ad.dot(&down)) * (I * g);
    }
    h
}

/// Pump drive `−i E_P (â e^{iω_P t} − â† e^{−iω_P t})`.
pub fn pump_term(p: &ModelParams, s: &FockSpace, t: f64) -> Array2<C64> {
    let a = s.a();
    let ad = linalg::dagger(&a.view());
    let ph = C64::from_polar(1.0, p.omega_p * t);
    (a * ph - ad * ph.conj()) * (-I * p.e_p)
}

/// Row-compressed complex matrix for repeated products with dense blocks.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    rows: Vec<Vec<(usize, C64)>>,
    cols: usize,
}

impl SparseMatrix {
    pub fn from_dense(m: &ArrayView2<C64>) -> Self {
        let rows = m
            .rows()
            .into_iter()
            .map(|row| row.iter().enumerate().filter(|(_, z)| **z != ZERO).map(|(k, z)| (k, *z)).collect())
            .collect();
        Self { rows, cols: m.ncols() }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `self · x` for a dense `x` with any number of columns.
    pub fn dot(&self, x: &Array2<C64>) -> Array2<C64> {
        assert_eq!(x.nrows(), self.cols);
        let k = x.ncols();
        let mut out = Array2::zeros((self.rows.len(), k));
        for (r, row) in self.rows.iter().enumerate() {
            let mut dst = out.row_mut(r);
            for &(c, v) in row {
                dst.scaled_add(v, &x.row(c));
            }
        }
        out
    }

    pub fn inf_norm(&self) -> f64 {
        self.rows.iter().map(|r| r.iter().map(|(_, z)| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }
}
