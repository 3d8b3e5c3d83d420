//! DPSK bit-error rate `P_e = 1/2 int_0^inf e^{-g} F(g) dg`.
//!
//! With `F = F_RF + (1 - F_RF) F_FSO` the integral splits into an elementary
//! RF part and Laplace transforms of `F_FSO`, which are `G^{6,3}_{5,8}`
//! functions of `w(s) = (alpha beta kappa)^2 / (16 gamma_bar_FSO s)`:
//!
//! ```text
//! int e^{-s g} F_FSO(g) dg     = C 2^{alpha+beta-3} / s   * G(w(s) | psi1; psi2)
//! int g e^{-s g} F_FSO(g) dg   = C 2^{alpha+beta-3} / s^2 * G(w(s) | psi3; psi2)
//! C = xi^2 / (pi Gamma(alpha) Gamma(beta))
//! ```

use std::f64::consts::PI;

use crate::channel::{FsoParams, Scheme};
use crate::error::{param, Error, Result};
use crate::link::outage::end_to_end_cdf;
use crate::link::LinkConfig;
use crate::quadrature::exp_sinh;
use crate::special::{ln_gamma, meijer_g, MeijerGSpec};

/// Relative agreement required between successive quadrature refinements.
pub const QUADRATURE_REL_TOL: f64 = 1e-8;
/// Closed forms outside `[-RANGE_TOL, 1/2 + RANGE_TOL]` are reported as errors.
pub const RANGE_TOL: f64 = 1e-9;

/// Parameter lists of the `G^{6,3}_{5,8}` terms.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiVectors {
    pub psi1: [f64; 5],
    pub psi2: [f64; 8],
    pub psi3: [f64; 5],
}

impl PsiVectors {
    pub fn new(p: &FsoParams) -> Self {
        let x2 = p.xi_squared();
        let (a, b) = (p.alpha, p.beta);
        let psi1 = [0.0, 0.5, 1.0, (1.0 + x2) / 2.0, (2.0 + x2) / 2.0];
        let mut psi3 = psi1;
        psi3[0] = -1.0;
        let psi2 = [x2 / 2.0, (x2 + 1.0) / 2.0, a / 2.0, (a + 1.0) / 2.0, b / 2.0, (b + 1.0) / 2.0, 0.0, 0.5];
        PsiVectors { psi1, psi2, psi3 }
    }

    /// `G^{6,3}_{5,8}(. | psi1; psi2)`.
    pub fn first(&self) -> MeijerGSpec {
        MeijerGSpec::new(6, 3, self.psi1.to_vec(), self.psi2.to_vec()).expect("orders fit")
    }

    /// `G^{6,3}_{5,8}(. | psi3; psi2)`.
    pub fn third(&self) -> MeijerGSpec {
        MeijerGSpec::new(6, 3, self.psi3.to_vec(), self.psi2.to_vec()).expect("orders fit")
    }
}

/// `1/2 int_0^inf e^{-g} F(g) dg` by exp-sinh quadrature.
///
/// `cdf` must take values in `[0, 1]`; levels are refined until two successive
/// estimates agree to [`QUADRATURE_REL_TOL`].
pub fn ber_quadrature<F>(mut cdf: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let r = exp_sinh(
        |g| Ok(0.5 * (-g).exp() * cdf(g)?),
        |g| 0.5 * (-g).exp(),
        QUADRATURE_REL_TOL,
        1e-300,
    )?;
    Ok(r.value)
}

/// Quadrature BER over the end-to-end CDF of `cfg`.
pub fn ber_numeric(cfg: &LinkConfig) -> Result<f64> {
    ber_quadrature(|g| end_to_end_cdf(g, cfg))
}

fn check_range(value: f64) -> Result<f64> {
    if !(value >= -RANGE_TOL && value <= 0.5 + RANGE_TOL) {
        return Err(Error::OutOfRange { what: "closed-form BER", value });
    }
    Ok(value.clamp(0.0, 0.5))
}

fn require(cfg: &LinkConfig, scheme: Scheme) -> Result<()> {
    if cfg.rf.scheme != scheme {
        return param(format!("expected an {scheme:?} configuration, got {:?}", cfg.rf.scheme));
    }
    Ok(())
}

/// `xi^2 2^{alpha+beta-shift} / (pi Gamma(alpha) Gamma(beta))`.
fn prefactor(p: &FsoParams, shift: f64) -> Result<f64> {
    let ln = p.xi_squared().ln() + (p.alpha + p.beta - shift) * std::f64::consts::LN_2
        - PI.ln()
        - ln_gamma(p.alpha)?.ln
        - ln_gamma(p.beta)?.ln;
    Ok(ln.exp())
}

/// `(alpha beta kappa)^2 / (16 gamma_bar_FSO s)`.
fn argument(p: &FsoParams, s: f64) -> f64 {
    let k = p.alpha * p.beta * p.kappa;
    k * k / (16.0 * p.gamma_bar_fso * s)
}

/// Coefficient of the `psi3` term.
#[derive(Clone, Copy)]
enum Psi3Weight {
    /// `1 / (2 gamma_bar_RF (1 + 1/gamma_bar_RF)^2)`.
    Printed,
    /// `1 / (gamma_bar_RF (1 + 1/gamma_bar_RF)^2)`.
    Corrected,
}

fn ber_ac(cfg: &LinkConfig, psi: &PsiVectors, weight: Psi3Weight) -> Result<f64> {
    require(cfg, Scheme::Alamouti)?;
    let g = cfg.rf.gamma_bar_rf;
    let s1 = 1.0 + 1.0 / g;
    // 1/2 - (1 + 2/g) / (2 s1^2), rearranged to 1 / (2 (g + 1)^2)
    let rf_part = 0.5 / ((g + 1.0) * (g + 1.0));
    let w = argument(&cfg.fso, s1);
    let c3 = match weight {
        Psi3Weight::Printed => 1.0 / (g * 2.0 * s1 * s1),
        Psi3Weight::Corrected => 1.0 / (g * s1 * s1),
    };
    let bracket = meijer_g(&psi.first(), w)? / s1 + c3 * meijer_g(&psi.third(), w)?;
    check_range(rf_part + prefactor(&cfg.fso, 4.0)? * bracket)
}

/// Closed-form BER with Alamouti coding, with every coefficient as printed in
/// the source derivation.
///
/// The `psi3` term there carries an extra factor 1/2; see
/// [`ber_ac_closed_corrected`].
pub fn ber_ac_closed(cfg: &LinkConfig) -> Result<f64> {
    ber_ac(cfg, &PsiVectors::new(&cfg.fso), Psi3Weight::Printed)
}

/// Closed-form BER with Alamouti coding, `psi3` coefficient
/// `1 / (gamma_bar_RF (1 + 1/gamma_bar_RF)^2)`.
///
/// Integrating `1/2 e^{-g} (1 + g/gamma_bar_RF) e^{-g/gamma_bar_RF} F_FSO(g)`
/// term by term gives this weight, and it reproduces [`ber_numeric`].
pub fn ber_ac_closed_corrected(cfg: &LinkConfig) -> Result<f64> {
    ber_ac(cfg, &PsiVectors::new(&cfg.fso), Psi3Weight::Corrected)
}

/// Closed-form BER with antenna selection.
pub fn ber_as_closed(cfg: &LinkConfig) -> Result<f64> {
    ber_as(cfg, &PsiVectors::new(&cfg.fso))
}

fn ber_as(cfg: &LinkConfig, psi: &PsiVectors) -> Result<f64> {
    require(cfg, Scheme::AntennaSelection)?;
    let g = cfg.rf.gamma_bar_rf;
    let (s1, s2) = (1.0 + 1.0 / g, 1.0 + 2.0 / g);
    // 1/2 - 1/s1 + 1/(2 s2), rearranged to 1 / ((g + 1)(g + 2))
    let rf_part = 1.0 / ((g + 1.0) * (g + 2.0));
    let first = psi.first();
    let bracket = meijer_g(&first, argument(&cfg.fso, s1))? / s1 - 0.5 / s2 * meijer_g(&first, argument(&cfg.fso, s2))?;
    check_range(rf_part + prefactor(&cfg.fso, 3.0)? * bracket)
}

/// The closed form that matches the end-to-end model for `cfg`'s scheme.
pub fn ber_closed(cfg: &LinkConfig) -> Result<f64> {
    ber_closed_with(cfg, &PsiVectors::new(&cfg.fso))
}

/// [`ber_closed`] with caller-supplied parameter lists.
pub fn ber_closed_with(cfg: &LinkConfig, psi: &PsiVectors) -> Result<f64> {
    match cfg.rf.scheme {
        Scheme::Alamouti => ber_ac(cfg, psi, Psi3Weight::Corrected),
        Scheme::AntennaSelection => ber_as(cfg, psi),
    }
}
