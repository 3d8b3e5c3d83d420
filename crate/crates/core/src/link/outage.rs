//! Outage probability `P(min(gamma_RF, gamma_FSO) < gamma_th)`.

use crate::channel::fso::clamp_probability;
use crate::channel::{cdf_fso, cdf_rf, Scheme};
use crate::error::{param, Error, Result};
use crate::link::LinkConfig;

/// `1 - (1 - p_rf)(1 - p_fso)`: the link is down when either hop is.
pub fn outage_combined(p_rf: f64, p_fso: f64) -> Result<f64> {
    for (name, p) in [("p_rf", p_rf), ("p_fso", p_fso)] {
        if !(0.0..=1.0).contains(&p) {
            return param(format!("{name} must be a probability, got {p}"));
        }
    }
    // p_rf + (1 - p_rf) p_fso avoids 1 - (1 - tiny) round-off
    Ok(p_rf + (1.0 - p_rf) * p_fso)
}

fn require(cfg: &LinkConfig, scheme: Scheme) -> Result<()> {
    if cfg.rf.scheme != scheme {
        return param(format!("expected an {scheme:?} configuration, got {:?}", cfg.rf.scheme));
    }
    Ok(())
}

/// Outage with Alamouti coding on the RF hop,
/// `1 - (1 + u) e^{-u} [1 - F_FSO(gamma_th)]` with `u = gamma_th / gamma_bar_rf`.
pub fn outage_ac(cfg: &LinkConfig) -> Result<f64> {
    require(cfg, Scheme::Alamouti)?;
    end_to_end_cdf(cfg.gamma_th, cfg)
}

/// Outage with antenna selection,
/// `1 - 2e^{-u} + e^{-2u} + (2e^{-u} - e^{-2u}) F_FSO(gamma_th)`.
pub fn outage_as(cfg: &LinkConfig) -> Result<f64> {
    require(cfg, Scheme::AntennaSelection)?;
    end_to_end_cdf(cfg.gamma_th, cfg)
}

/// Outage at `cfg.gamma_th` for whichever scheme `cfg` carries.
pub fn outage(cfg: &LinkConfig) -> Result<f64> {
    end_to_end_cdf(cfg.gamma_th, cfg)
}

/// CDF of the end-to-end SNR `min(gamma_RF, gamma_FSO)` at `gamma`.
///
/// Both closed forms factor as `F_RF + (1 - F_RF) F_FSO`, which is how they
/// are evaluated: the RF factor is computed without cancellation.
pub fn end_to_end_cdf(gamma: f64, cfg: &LinkConfig) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::Domain(format!("SNR must be non-negative, got {gamma}")));
    }
    let f_rf = cdf_rf(gamma, &cfg.rf)?;
    let f_fso = cdf_fso(gamma, &cfg.fso)?;
    clamp_probability("end-to-end CDF", f_rf + (1.0 - f_rf) * f_fso)
}
