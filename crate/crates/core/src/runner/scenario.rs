//! Scenario execution and column statistics.

use rayon::prelude::*;

use crate::dynamics;
use crate::error::Result;
use crate::measurement::{BellChoice, ProtocolRecord};
use crate::params::ModelParams;
use crate::register::initial_protocol_families;

use super::config::ScenarioConfig;

pub const COLUMNS: [&str; 9] =
    ["t", "C14", "P14", "C58", "P58", "C18_psi", "P18_psi", "C18_psiprime", "P18_psiprime"];

/// One grid point. `None` marks a degenerate concurrence, or a Bell
/// projector that the scenario did not select.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultRow {
    pub t: f64,
    pub c14: Option<f64>,
    pub p14: f64,
    pub c58: Option<f64>,
    pub p58: f64,
    pub c18_psi: Option<f64>,
    pub p18_psi: Option<f64>,
    pub c18_psiprime: Option<f64>,
    pub p18_psiprime: Option<f64>,
}

impl ResultRow {
    pub fn from_record(r: &ProtocolRecord, cfg: &ScenarioConfig) -> Self {
        let pick = |bell: BellChoice| {
            if cfg.bell.includes(bell) {
                let s = r.swap(bell);
                (s.conc, Some(s.prob))
            } else {
                (None, None)
            }
        };
        let (c18_psi, p18_psi) = pick(BellChoice::PsiEeGg);
        let (c18_psiprime, p18_psiprime) = pick(BellChoice::PsiEgGe);
        Self {
            t: r.t,
            c14: r.pair14.conc,
            p14: r.pair14.prob,
            c58: r.pair58.conc,
            p58: r.pair58.prob,
            c18_psi,
            p18_psi,
            c18_psiprime,
            p18_psiprime,
        }
    }

    /// Values in [`COLUMNS`] order.
    pub fn values(&self) -> [Option<f64>; 9] {
        [
            Some(self.t),
            self.c14,
            Some(self.p14),
            self.c58,
            Some(self.p58),
            self.c18_psi,
            self.p18_psi,
            self.c18_psiprime,
            self.p18_psiprime,
        ]
    }
}

/// Rows of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub sweep_value: Option<f64>,
    pub params: ModelParams,
    pub rows: Vec<ResultRow>,
}

impl Dataset {
    /// Column by name with `NaN` in place of missing values.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = COLUMNS.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r.values()[k].unwrap_or(f64::NAN)).collect())
    }

    pub fn summary(&self) -> Vec<ColumnSummary> {
        summarize(&self.rows)
    }
}

/// Runs one parameter set on the scenario grid.
pub fn run_point(cfg: &ScenarioConfig, params: &ModelParams) -> Result<Vec<ResultRow>> {
    let grid = cfg.grid();
    let traj = dynamics::evolve_auto(params, &initial_protocol_families(), &grid)?;
    traj.t_grid
        .iter()
        .zip(traj.families.iter())
        .map(|(&t, f)| {
            let rec = ProtocolRecord::from_families(t, f, cfg.outcome_i, cfg.outcome_j)?;
            Ok(ResultRow::from_record(&rec, cfg))
        })
        .collect()
}

/// All sweep points, evaluated in parallel and returned in sweep order.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<Dataset>> {
    cfg.points()
        .into_par_iter()
        .map(|(sweep_value, params)| Ok(Dataset { sweep_value, params, rows: run_point(cfg, &params)? }))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSummary {
    pub name: &'static str,
    /// `(max, t at max)`, `None` when the column has no values.
    pub max: Option<(f64, f64)>,
}

pub fn summarize(rows: &[ResultRow]) -> Vec<ColumnSummary> {
    COLUMNS
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &name)| {
            let max = rows.iter().fold(None, |best: Option<(f64, f64)>, r| match r.values()[k] {
                Some(v) if best.is_none_or(|(b, _)| v > b) => Some((v, r.t)),
                _ => best,
            });
            ColumnSummary { name, max }
        })
        .collect()
}

/// Noise floor for [`count_local_maxima`].
pub const MAXIMA_FLOOR: f64 = 1e-6;

/// Counts interior points exceeding every neighbour within `window` samples
/// on each side by more than [`MAXIMA_FLOOR`]. `NaN` entries are skipped,
/// and a maximum needs at least one finite neighbour on each side.
pub fn count_local_maxima(column: &[f64], window: usize) -> usize {
    let w = window.max(1);
    if column.len() < 3 {
        return 0;
    }
    (1..column.len() - 1)
        .filter(|&k| {
            let v = column[k];
            if v.is_nan() {
                return false;
            }
            let lo = k.saturating_sub(w);
            let hi = (k + w).min(column.len() - 1);
            let mut seen_left = false;
            let mut seen_right = false;
            for j in lo..=hi {
                if j == k || column[j].is_nan() {
                    continue;
                }
                if v - column[j] <= MAXIMA_FLOOR {
                    return false;
                }
                if j < k {
                    seen_left = true;
                } else {
                    seen_right = true;
                }
            }
            seen_left && seen_right
        })
        .count()
}

/// Sample standard deviation (`n − 1`) of the finite entries.
pub fn sample_std(column: &[f64]) -> Option<f64> {
    let xs: Vec<f64> = column.iter().copied().filter(|x| x.is_finite()).collect();
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    Some((xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::config::BellSelection;
    use std::f64::consts::PI;

    fn small_cfg() -> ScenarioConfig {
        ScenarioConfig { t_max: 5.0, n_steps: 50, ..ScenarioConfig::default() }
    }

    #[test]
    fn maxima_of_simple_columns() {
        assert_eq!(count_local_maxima(&[0.3; 20], 1), 0);
        let sine: Vec<f64> = (0..=100).map(|k| (2.0 * PI * k as f64 / 100.0).sin()).collect();
        assert_eq!(count_local_maxima(&sine, 1), 1);
        assert_eq!(count_local_maxima(&sine, 5), 1);
        assert_eq!(count_local_maxima(&[1.0, 2.0], 1), 0);
    }

    #[test]
    fn maxima_ignore_plateaus_noise_and_gaps() {
        assert_eq!(count_local_maxima(&[0.0, 1.0, 1.0, 0.0], 1), 0);
        assert_eq!(count_local_maxima(&[0.0, 1.0, 1.0 - 1e-9, 0.0], 1), 0);
        assert_eq!(count_local_maxima(&[0.0, f64::NAN, 0.5, 0.1, 0.7, 0.0], 1), 1);
        assert_eq!(count_local_maxima(&[0.0, 0.5, 0.4, 0.6, 0.0], 2), 1);
    }

    #[test]
    fn std_of_known_values() {
        assert!((sample_std(&[1.0, 2.0, 3.0, 4.0]).unwrap() - 1.290_994_448_735_805_6).abs() < 1e-15);
        assert_eq!(sample_std(&[1.0, f64::NAN]), None);
    }

    #[test]
    fn rows_cover_the_grid() {
        let ds = run_scenario(&small_cfg()).unwrap();
        assert_eq!(ds.len(), 1);
        let rows = &ds[0].rows;
        assert_eq!(rows.len(), 51);
        assert_eq!(rows[0].t, 0.0);
        assert_eq!(rows[50].t, 5.0);
        assert!(rows.iter().all(|r| (r.p14 - 0.25).abs() < 1e-9));
        // At t = 0 the (1,4) and (5,8) states are both |EG⟩/2.
        assert_eq!(rows[0].c18_psi, None);
        assert_eq!(rows[0].p18_psi, Some(0.0));
    }

    #[test]
    fn unselected_projector_is_blank() {
        let cfg = ScenarioConfig { bell: BellSelection::Only(BellChoice::PsiEgGe), ..small_cfg() };
        let rows = &run_scenario(&cfg).unwrap()[0].rows;
        assert!(rows.iter().all(|r| r.c18_psi.is_none() && r.p18_psi.is_none()));
        assert!(rows.iter().all(|r| r.p18_psiprime.is_some()));
    }

    #[test]
    fn sweep_keeps_order_and_grid() {
        let text = "t_max = 3\nn_steps = 30\nsweep_field = omega_M\nsweep_values = 4, 0.4, 1";
        let cfg = ScenarioConfig::from_text(text).unwrap();
        let ds = run_scenario(&cfg).unwrap();
        let vals: Vec<_> = ds.iter().map(|d| d.sweep_value.unwrap()).collect();
        assert_eq!(vals, vec![4.0, 0.4, 1.0]);
        assert_eq!(ds[1].params.omega_m, 0.4);
        assert!(ds.windows(2).all(|w| w[0].column("t") == w[1].column("t")));
    }

    #[test]
    fn summary_tracks_argmax() {
        let ds = &run_scenario(&small_cfg()).unwrap()[0];
        let s = ds.summary();
        assert_eq!(s.len(), 8);
        let p18 = s.iter().find(|c| c.name == "P18_psi").unwrap().max.unwrap();
        let col = ds.column("P18_psi").unwrap();
        let best = col.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(p18.0, best);
        let k = col.iter().position(|&v| v == best).unwrap();
        assert_eq!(p18.1, ds.rows[k].t);
    }
}
