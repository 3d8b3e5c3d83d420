//! Meijer-G by direct quadrature of its Mellin–Barnes integral,
//!
//! ```text
//! G(z) = 1/(2 pi i) * int_{c - i inf}^{c + i inf} Phi(s) ds,
//! Phi(s) = prod_{j<=m} Gamma(b_j + s) prod_{j<=n} Gamma(1 - a_j - s)
//!        / (prod_{j>m} Gamma(1 - b_j - s) prod_{j>n} Gamma(a_j + s)) * z^{-s}
//! ```
//!
//! along a vertical line `Re s = c` that separates the left pole ladders
//! `s = -b_j - k` from the right ladders `s = 1 - a_j + k`. For real parameters
//! and `z > 0` the integrand is conjugate-symmetric, so
//! `G(z) = (1/pi) int_0^inf Re Phi(c + i t) dt`.
//!
//! [`meijer_g_oracle`] places the line at the middle of the strip and shares
//! nothing with the residue-series evaluator except the Gamma function.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::gauss_kronrod_with_peak;
use crate::special::gamma::{ln_gamma, ln_gamma_complex};
use crate::special::meijer::MeijerGSpec;

/// Relative integrand size at which the contour is truncated.
pub const TRUNCATION: f64 = 1e-18;
const PANEL_WIDTH: f64 = 2.0;
const MAX_HEIGHT: f64 = 2000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// Middle of the pole-free strip (or one unit inside a half-infinite strip).
    Midpoint,
    /// Minimum of `|Phi(c)|` on the real axis, i.e. the steepest-descent crossing.
    Saddle,
}

/// The open strip `(left, right)` of admissible `Re s`.
pub fn strip(spec: &MeijerGSpec) -> (f64, f64) {
    let left = spec.b()[..spec.m()].iter().map(|b| -b).fold(f64::NEG_INFINITY, f64::max);
    let right = spec.a()[..spec.n()].iter().map(|a| 1.0 - a).fold(f64::INFINITY, f64::min);
    (left, right)
}

/// Exponential decay rate `m + n - (p + q)/2` of the integrand along the line.
fn decay_rate(spec: &MeijerGSpec) -> f64 {
    (spec.m() + spec.n()) as f64 - 0.5 * (spec.p() + spec.q()) as f64
}

pub(crate) fn is_feasible(spec: &MeijerGSpec) -> bool {
    let (left, right) = strip(spec);
    left < right && (left.is_finite() || right.is_finite()) && decay_rate(spec) > 0.0
}

/// `ln Phi(s)`, or `None` where a reciprocal Gamma factor vanishes.
fn ln_integrand(spec: &MeijerGSpec, ln_z: f64, s: Complex64) -> Option<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let (m, n) = (spec.m(), spec.n());
    let mut acc = -s * ln_z;
    for &b in &spec.b()[..m] {
        acc += ln_gamma_complex(s + b).ok()?;
    }
    for &a in &spec.a()[..n] {
        acc += ln_gamma_complex(one - a - s).ok()?;
    }
    for &b in &spec.b()[m..] {
        acc -= ln_gamma_complex(one - b - s).ok()?;
    }
    for &a in &spec.a()[n..] {
        acc -= ln_gamma_complex(s + a).ok()?;
    }
    Some(acc)
}

/// `ln |Phi(c)|` on the real axis; reciprocal-Gamma zeros are ignored.
fn ln_abs_real(spec: &MeijerGSpec, ln_z: f64, c: f64) -> f64 {
    let (m, n) = (spec.m(), spec.n());
    let lg = |x: f64| ln_gamma(x).map(|g| g.ln).unwrap_or(0.0);
    let mut acc = -c * ln_z;
    acc += spec.b()[..m].iter().map(|&b| lg(b + c)).sum::<f64>();
    acc += spec.a()[..n].iter().map(|&a| lg(1.0 - a - c)).sum::<f64>();
    acc -= spec.b()[m..].iter().map(|&b| lg(1.0 - b - c)).sum::<f64>();
    acc -= spec.a()[n..].iter().map(|&a| lg(a + c)).sum::<f64>();
    acc
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if (hi - lo).abs() <= 1e-9 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

fn saddle(spec: &MeijerGSpec, ln_z: f64, left: f64, right: f64) -> f64 {
    let f = |c: f64| ln_abs_real(spec, ln_z, c);
    let (lo, hi) = match (left.is_finite(), right.is_finite()) {
        (true, true) => {
            let pad = 1e-3 * (right - left);
            (left + pad, right - pad)
        }
        (true, false) => {
            let lo = left + 1e-3;
            let mut step = 1.0;
            let mut hi = left + step;
            while f(hi + step) < f(hi) && step < 1e6 {
                hi += step;
                step *= 2.0;
            }
            (lo, hi + step)
        }
        _ => {
            let hi = right - 1e-3;
            let mut step = 1.0;
            let mut lo = right - step;
            while f(lo - step) < f(lo) && step < 1e6 {
                lo -= step;
                step *= 2.0;
            }
            (lo - step, hi)
        }
    };
    golden_min(f, lo, hi)
}

/// Integrates along `Re s = c`.
pub fn contour_integral(spec: &MeijerGSpec, z: f64, c: f64) -> Result<f64> {
    if decay_rate(spec) <= 0.0 {
        return Err(Error::Quadrature(format!(
            "integrand of G^{},{}_{},{} does not decay along vertical lines",
            spec.m(),
            spec.n(),
            spec.p(),
            spec.q()
        )));
    }
    let ln_z = z.ln();
    let ln_at = |t: f64| ln_integrand(spec, ln_z, Complex64::new(c, t));
    // Normalize by the largest |Phi| among a few probe heights.
    let reference = [0.0, 0.25, 1.0, 3.0]
        .iter()
        .filter_map(|&t| ln_at(t).map(|l| l.re))
        .fold(f64::NEG_INFINITY, f64::max);
    if !reference.is_finite() {
        return Err(Error::Quadrature("integrand vanishes at every probe point".into()));
    }
    let mut integrand = |t: f64| match ln_at(t) {
        Some(l) => (l - reference).exp().re,
        None => 0.0,
    };

    let mut total = 0.0;
    let mut peak = 0.0f64;
    let mut lo = 0.0;
    while lo < MAX_HEIGHT {
        let hi = lo + PANEL_WIDTH;
        // the integrand is normalized to order one at its peak
        let abs_tol = 1e-14 * PANEL_WIDTH;
        let (panel, panel_peak) = gauss_kronrod_with_peak(&mut integrand, lo, hi, abs_tol, 1e-14, 4000)?;
        total += panel.value;
        peak = peak.max(panel_peak);
        if panel_peak < TRUNCATION * peak && integrand(hi).abs() < TRUNCATION * peak {
            return Ok(total * reference.exp() / std::f64::consts::PI);
        }
        lo = hi;
    }
    Err(Error::Quadrature(format!("integrand still above truncation level at height {MAX_HEIGHT}")))
}

pub(crate) fn contour_value(spec: &MeijerGSpec, z: f64, placement: Placement) -> Result<f64> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Domain(format!("Meijer-G needs 0 < z < inf, got {z}")));
    }
    let (left, right) = strip(spec);
    if !(left < right) || !(left.is_finite() || right.is_finite()) {
        return Err(Error::ContourPlacement { left, right });
    }
    let c = match placement {
        Placement::Midpoint => match (left.is_finite(), right.is_finite()) {
            (true, true) => 0.5 * (left + right),
            (true, false) => left + 1.0,
            _ => right - 1.0,
        },
        Placement::Saddle => saddle(spec, z.ln(), left, right),
    };
    contour_integral(spec, z, c)
}

/// Independent evaluation of `G(z)` on the mid-strip contour.
pub fn meijer_g_oracle(spec: &MeijerGSpec, z: f64) -> Result<f64> {
    contour_value(spec, z, Placement::Midpoint)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn identities_at_unit_argument() {
        let exp = MeijerGSpec::new(1, 0, vec![], vec![0.0]).unwrap();
        assert!(rel(meijer_g_oracle(&exp, 1.0).unwrap(), (-1.0f64).exp()) < 1e-10);
        let rational = MeijerGSpec::new(1, 1, vec![0.0], vec![0.0]).unwrap();
        assert!(rel(meijer_g_oracle(&rational, 1.0).unwrap(), 0.5) < 1e-10);
    }

    #[test]
    fn saddle_rescues_deep_exponential_tail() {
        let exp = MeijerGSpec::new(1, 0, vec![], vec![0.0]).unwrap();
        let v = contour_value(&exp, 100.0, Placement::Saddle).unwrap();
        assert!(rel(v, (-100.0f64).exp()) < 1e-12, "{v}");
    }

    #[test]
    fn strip_and_placement_errors() {
        // b = 0 gives left edge 0; a = 2 gives right edge -1: no separating line
        let g = MeijerGSpec::new(1, 1, vec![2.0], vec![0.0, 0.5]).unwrap();
        assert_eq!(strip(&g), (0.0, -1.0));
        assert!(matches!(meijer_g_oracle(&g, 1.0), Err(Error::ContourPlacement { .. })));
    }

    #[test]
    fn vanishes_as_argument_goes_to_zero() {
        let g = MeijerGSpec::new(2, 0, vec![], vec![0.4, 1.1]).unwrap();
        let small = meijer_g_oracle(&g, 1e-6).unwrap();
        let smaller = meijer_g_oracle(&g, 1e-9).unwrap();
        assert!(small > 0.0 && smaller < small && smaller < 1e-3);
    }
}
