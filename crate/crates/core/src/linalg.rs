//! Dense complex matrix helpers shared by the 4×4 dynamics and the truncated
//! Fock-space code.

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64 as C64;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn identity(n: usize) -> Array2<C64> {
    Array2::from_diag_elem(n, ONE)
}

/// Conjugate transpose.
pub fn dagger(m: &ArrayView2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

/// `A·B − B·A`.
pub fn commutator(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    a.dot(b) - b.dot(a)
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &ArrayView2<C64>, b: &ArrayView2<C64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise modulus of `m − m†`.
pub fn hermiticity_defect(m: &ArrayView2<C64>) -> f64 {
    let (n, k) = m.dim();
    assert_eq!(n, k, "hermiticity_defect needs a square matrix");
    let mut worst = 0.0_f64;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[[r, c]] - m[[c, r]].conj()).norm());
        }
    }
    worst
}

/// Maximum absolute row sum; an upper bound on the spectral norm.
pub fn inf_norm(m: &ArrayView2<C64>) -> f64 {
    m.rows()
        .into_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Sum of squared moduli of all entries.
pub fn frobenius_sq(m: &ArrayView2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The argument is scaled so that its row-sum norm is at most 1/2, where a
/// degree-18 series is accurate to well below machine epsilon.
pub fn expm(m: &ArrayView2<C64>) -> Array2<C64> {
    let (n, k) = m.dim();
    assert_eq!(n, k, "expm needs a square matrix");
    let norm = inf_norm(m);
    let mut squarings = 0_u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let scale = 0.5_f64.powi(squarings as i32);
    let a = m.mapv(|z| z * scale);

    let mut result = identity(n);
    let mut term = identity(n);
    for j in 1..=18 {
        term = term.dot(&a).mapv(|z| z / j as f64);
        result += &term;
        if inf_norm(&term.view()) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// `exp(−i·H·t)` for a Hermitian `H`.
pub fn unitary_propagator(h: &ArrayView2<C64>, t: f64) -> Array2<C64> {
    let generator = h.mapv(|z| -I * z * t);
    expm(&generator.view())
}
