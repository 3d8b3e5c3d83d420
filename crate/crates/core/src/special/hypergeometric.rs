//! Generalized hypergeometric series `pFq(a; b; z)`.

use crate::error::{Error, Result};
use crate::special::gamma::is_non_positive_integer;
use crate::sum::NeumaierSum;

/// Relative size below which a term counts as negligible.
pub const DEFAULT_SERIES_TOL: f64 = 1e-16;
/// Consecutive negligible terms required before the series is declared summed.
pub const CONSECUTIVE_SMALL_TERMS: usize = 3;
pub const MAX_TERMS: usize = 1_000_000;

/// A summed series together with the magnitude information needed to judge
/// cancellation in a surrounding linear combination.
#[derive(Debug, Clone, Copy)]
pub struct SeriesSum {
    pub value: f64,
    /// Sum of the absolute values of all terms.
    pub abs_sum: f64,
    pub terms: usize,
}

/// `pFq(a; b; z) = sum_k prod (a_i)_k / prod (b_j)_k * z^k / k!`.
///
/// Requires `a.len() <= b.len()`, or `a.len() == b.len() + 1` with `|z| < 1`.
pub fn gen_hypergeometric(a: &[f64], b: &[f64], z: f64) -> Result<f64> {
    gen_hypergeometric_detailed(a, b, z, DEFAULT_SERIES_TOL).map(|s| s.value)
}

/// As [`gen_hypergeometric`] with an explicit convergence tolerance.
pub fn gen_hypergeometric_detailed(a: &[f64], b: &[f64], z: f64, tol: f64) -> Result<SeriesSum> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("pFq argument {z}")));
    }
    if let Some(&bad) = b.iter().find(|&&bj| is_non_positive_integer(bj) || !bj.is_finite()) {
        return Err(Error::Parameter(format!("pFq lower parameter {bad} is a non-positive integer")));
    }
    if a.iter().any(|ai| !ai.is_finite()) {
        return Err(Error::Parameter("pFq upper parameter is not finite".into()));
    }
    let terminating = a.iter().any(|&ai| is_non_positive_integer(ai));
    if !terminating {
        if a.len() > b.len() + 1 {
            return Err(Error::Parameter(format!(
                "{}F{} diverges for every z != 0",
                a.len(),
                b.len()
            )));
        }
        if a.len() == b.len() + 1 && z.abs() >= 1.0 {
            return Err(Error::Domain(format!("{}F{} needs |z| < 1, got {z}", a.len(), b.len())));
        }
    }

    let mut sum = NeumaierSum::new();
    let mut abs_sum = 1.0;
    let mut term = 1.0;
    sum.add(1.0);
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let mut ratio = z / (kf + 1.0);
        for &ai in a {
            ratio *= ai + kf;
        }
        for &bj in b {
            ratio /= bj + kf;
        }
        term *= ratio;
        if !term.is_finite() {
            return Err(Error::NonConvergence { terms: k + 1 });
        }
        sum.add(term);
        abs_sum += term.abs();
        if term.abs() <= tol * sum.value().abs() {
            small += 1;
            if small >= CONSECUTIVE_SMALL_TERMS {
                return Ok(SeriesSum { value: sum.value(), abs_sum, terms: k + 2 });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}
