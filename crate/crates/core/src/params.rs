//! Physical parameters of one optomechanical cavity holding ions 2 and 3.
//!
//! All values are in units of the ion–field coupling `g ≡ g2`, so times are
//! the dimensionless `gt`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Optical mode frequency ω_c.
    pub omega_c: f64,
    /// Mechanical mode frequency ω_M.
    pub omega_m: f64,
    /// Ion vibrational frequency ν.
    pub nu: f64,
    /// Ionic transition frequency ω_0.
    pub omega_0: f64,
    /// Pump laser frequency ω_P.
    pub omega_p: f64,
    /// Pump amplitude E_P.
    pub e_p: f64,
    /// Optomechanical coupling G.
    pub g_om: f64,
    /// Ion 2 – field coupling.
    pub g2: f64,
    /// Ion 3 – field coupling.
    pub g3: f64,
}

/// Names accepted by [`ModelParams::get`] and [`ModelParams::set`]; these are
/// also the configuration-file keys.
pub const PARAM_FIELDS: [&str; 9] =
    ["g2", "g3", "E_P", "G", "omega_c", "omega_M", "nu", "omega_0", "omega_P"];

impl ModelParams {
    /// Red-detuned pump with every detuning equal to `detuning`:
    /// `ν + ω_0 = ω_P` and `ω_c − ω_P = ω_M`.
    ///
    /// The absolute frequencies `ν = 1`, `ω_0 = 2` only matter to the full
    /// lab-frame model.
    pub fn degenerate(detuning: f64, e_p: f64) -> Self {
        let nu = 1.0;
        let omega_0 = 2.0;
        let omega_p = nu + omega_0;
        Self {
            omega_c: omega_p + detuning,
            omega_m: detuning,
            nu,
            omega_0,
            omega_p,
            e_p,
            g_om: 0.1,
            g2: 1.0,
            g3: 1.0,
        }
    }

    /// `ω_M = 0.4g`, `E_P = 0.5g`, `g2 = g3 = g`.
    pub fn baseline() -> Self {
        Self::degenerate(0.4, 0.5)
    }

    pub fn get(&self, field: &str) -> Option<f64> {
        Some(match field {
            "g2" => self.g2,
            "g3" => self.g3,
            "E_P" => self.e_p,
            "G" => self.g_om,
            "omega_c" => self.omega_c,
            "omega_M" => self.omega_m,
            "nu" => self.nu,
            "omega_0" => self.omega_0,
            "omega_P" => self.omega_p,
            _ => return None,
        })
    }

    /// Returns `false` if `field` is not a parameter name.
    pub fn set(&mut self, field: &str, value: f64) -> bool {
        let slot = match field {
            "g2" => &mut self.g2,
            "g3" => &mut self.g3,
            "E_P" => &mut self.e_p,
            "G" => &mut self.g_om,
            "omega_c" => &mut self.omega_c,
            "omega_M" => &mut self.omega_m,
            "nu" => &mut self.nu,
            "omega_0" => &mut self.omega_0,
            "omega_P" => &mut self.omega_p,
            _ => return false,
        };
        *slot = value;
        true
    }

    /// Harmonic frequencies `(ω_1, ω_2, ω_3, ω_4)` without validation.
    pub fn detunings(&self) -> [f64; 4] {
        let ion = self.omega_c - self.nu - self.omega_0;
        [self.omega_m, ion, ion, self.omega_c - self.omega_p]
    }

    /// Copy with `g2`, `g3` and `E_P` multiplied by `factor`.
    pub fn with_couplings_scaled(&self, factor: f64) -> Self {
        Self { g2: self.g2 * factor, g3: self.g3 * factor, e_p: self.e_p * factor, ..*self }
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::baseline()
    }
}

/// The four harmonic frequencies and their pairwise harmonic means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencySet {
    /// `ω_1 … ω_4` (zero based).
    pub omega: [f64; 4],
    /// `1/ω_mn = ½(1/ω_m + 1/ω_n)`.
    pub omega_ij: [[f64; 4]; 4],
}

impl FrequencySet {
    pub fn from_omegas(omega: [f64; 4]) -> Result<Self> {
        for (k, &w) in omega.iter().enumerate() {
            if !(w > 0.0) {
                return Err(Error::NonPositiveDetuning { index: k + 1, value: w });
            }
        }
        let mut omega_ij = [[0.0; 4]; 4];
        for m in 0..4 {
            for n in 0..4 {
                omega_ij[m][n] = harmonic_mean(omega[m], omega[n]);
            }
        }
        Ok(Self { omega, omega_ij })
    }

    /// Largest `|ω_i − ω_j|` among the detunings that enter the ionic
    /// generator (`ω_2`, `ω_3`, `ω_4`).
    pub fn ionic_spread(&self) -> f64 {
        let w = &self.omega[1..];
        let max = w.iter().cloned().fold(f64::MIN, f64::max);
        let min = w.iter().cloned().fold(f64::MAX, f64::min);
        max - min
    }
}

pub fn harmonic_mean(a: f64, b: f64) -> f64 {
    2.0 / (1.0 / a + 1.0 / b)
}

/// `ω_1 = ω_M`, `ω_2 = ω_3 = ω_c − ν − ω_0`, `ω_4 = ω_c − ω_P`, plus the
/// harmonic-mean table. Fails when any of them is not positive.
pub fn derived_frequencies(p: &ModelParams) -> Result<FrequencySet> {
    FrequencySet::from_omegas(p.detunings())
}
