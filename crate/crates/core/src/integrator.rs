//! Classical fourth-order Runge–Kutta for `dX/dt = −i·H(t)·X` with
//! Richardson step-halving error control.
//!
//! Each attempted step of size `h` is taken once whole and once as two halves;
//! the difference of the two results, divided by `2⁴ − 1`, estimates the local
//! error of the halved result. Accepted steps keep the extrapolated value
//! `X_half + (X_half − X_full)/15`. The step never exceeds
//! `step_fraction / ‖H‖`.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Right-hand side of a linear Schrödinger equation.
pub trait LinearGenerator {
    /// `−i·H(t)·x`, column by column.
    fn apply(&self, t: f64, x: &Array2<C64>) -> Array2<C64>;

    /// Upper bound on `‖H(t)‖` over all `t`.
    fn norm_bound(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    /// Largest step as a fraction of `1/‖H‖`.
    pub step_fraction: f64,
    /// Local error tolerance (max entrywise modulus).
    pub tolerance: f64,
    /// Give up when the step shrinks below this.
    pub min_step: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self { step_fraction: 1.0 / 50.0, tolerance: 1e-10, min_step: 1e-12 }
    }
}

fn axpy(y: &Array2<C64>, a: f64, k: &Array2<C64>) -> Array2<C64> {
    y + &k.mapv(|z| z * a)
}

/// One classical RK4 step.
pub fn rk4_step<G: LinearGenerator + ?Sized>(gen: &G, t: f64, x: &Array2<C64>, h: f64) -> Array2<C64> {
    let k1 = gen.apply(t, x);
    let k2 = gen.apply(t + 0.5 * h, &axpy(x, 0.5 * h, &k1));
    let k3 = gen.apply(t + 0.5 * h, &axpy(x, 0.5 * h, &k2));
    let k4 = gen.apply(t + h, &axpy(x, h, &k3));
    let incr = k1 + &(k2 * C64::from(2.0)) + &(k3 * C64::from(2.0)) + &k4;
    axpy(x, h / 6.0, &incr)
}

/// Uncontrolled RK4 with `n_steps` equal steps from `t0` to `t1`.
pub fn rk4_fixed<G: LinearGenerator + ?Sized>(
    gen: &G,
    x0: &Array2<C64>,
    t0: f64,
    t1: f64,
    n_steps: usize,
) -> Array2<C64> {
    let h = (t1 - t0) / n_steps as f64;
    let mut x = x0.clone();
    for k in 0..n_steps {
        x = rk4_step(gen, t0 + k as f64 * h, &x, h);
    }
    x
}

fn max_abs(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidGrid("empty time grid".into()));
    }
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid("non-finite time".into()));
    }
    if let Some(w) = t_grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!("times not strictly increasing at {} → {}", w[0], w[1])));
    }
    Ok(())
}

/// Integrates from `t_grid[0]` and returns the state at every grid time
/// (the first entry is `x0`).
pub fn integrate<G: LinearGenerator + ?Sized>(
    gen: &G,
    x0: &Array2<C64>,
    t_grid: &[f64],
    opts: &IntegratorOptions,
) -> Result<Vec<Array2<C64>>> {
    check_grid(t_grid)?;
    let bound = gen.norm_bound();
    let h_max = if bound > 0.0 { opts.step_fraction / bound } else { f64::INFINITY };

    let mut out = Vec::with_capacity(t_grid.len());
    out.push(x0.clone());
    let mut x = x0.clone();
    let mut h_next = h_max;

    for w in t_grid.windows(2) {
        let (mut t, t_end) = (w[0], w[1]);
        while t < t_end {
            let remaining = t_end - t;
            let clipped = h_next >= remaining * (1.0 - 1e-12);
            let h = if clipped { remaining } else { h_next };

            let full = rk4_step(gen, t, &x, h);
            let half = rk4_step(gen, t, &x, 0.5 * h);
            let half = rk4_step(gen, t + 0.5 * h, &half, 0.5 * h);
            let diff = &half - &full;
            let err = max_abs(&diff) / 15.0;

            if err <= opts.tolerance {
                x = half + &(diff / C64::from(15.0));
                t = if clipped { t_end } else { t + h };
                if err < opts.tolerance / 64.0 && !clipped {
                    h_next = (2.0 * h).min(h_max);
                }
            } else {
                h_next = 0.5 * h;
                if h_next < opts.min_step {
                    return Err(Error::IntegratorFailure { t, step: h_next });
                }
            }
        }
        out.push(x.clone());
    }
    Ok(out)
}
