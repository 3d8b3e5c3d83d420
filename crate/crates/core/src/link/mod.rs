//! End-to-end outage probability and DPSK bit-error rate of the two-hop link.
//!
//! The relay detects and forwards, so the link is up only when both hops are:
//! the end-to-end CDF is `1 - (1 - F_RF)(1 - F_FSO)`. Closed forms in
//! Meijer-G functions live in [`ber`] next to a direct quadrature of
//! `1/2 int e^{-g} F(g) dg`, which serves as their oracle.

pub mod ber;
pub mod outage;

pub use ber::{
    ber_ac_closed, ber_ac_closed_corrected, ber_as_closed, ber_closed, ber_closed_with, ber_numeric, ber_quadrature, PsiVectors,
};
pub use outage::{end_to_end_cdf, outage, outage_ac, outage_as, outage_combined};

use crate::channel::{FsoParams, Regime, RfParams, Scheme};
use crate::error::{param, Result};
use crate::units::db_to_linear;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    pub fso: FsoParams,
    pub rf: RfParams,
    /// Outage threshold, linear SNR.
    pub gamma_th: f64,
    /// Electrical-to-optical conversion efficiency; already folded into
    /// `fso.gamma_bar_fso`.
    pub eta: f64,
}

impl LinkConfig {
    pub fn new(fso: FsoParams, rf: RfParams, gamma_th: f64) -> Result<Self> {
        if !(gamma_th > 0.0 && gamma_th.is_finite()) {
            return param(format!("gamma_th must be positive and finite, got {gamma_th}"));
        }
        Ok(LinkConfig { fso, rf, gamma_th, eta: 1.0 })
    }

    /// Both hops at the same average SNR, everything in dB.
    pub fn symmetric(regime: Regime, scheme: Scheme, gamma_bar_db: f64, gamma_th_db: f64) -> Result<Self> {
        let g = db_to_linear(gamma_bar_db);
        Self::new(FsoParams::preset(regime, g)?, RfParams::new(g, scheme)?, db_to_linear(gamma_th_db))
    }

    /// Rescales the FSO average SNR by `(eta / self.eta)^2`.
    pub fn with_eta(self, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return param(format!("eta must be positive and finite, got {eta}"));
        }
        let scale = (eta / self.eta).powi(2);
        Ok(LinkConfig { fso: self.fso.with_gamma_bar(self.fso.gamma_bar_fso * scale)?, eta, ..self })
    }

    /// Sets both average SNRs (linear).
    pub fn with_gamma_bar(self, gamma_bar: f64) -> Result<Self> {
        Ok(LinkConfig {
            fso: self.fso.with_gamma_bar(gamma_bar)?,
            rf: RfParams::new(gamma_bar, self.rf.scheme)?,
            ..self
        })
    }

    pub fn with_scheme(self, scheme: Scheme) -> Self {
        LinkConfig { rf: RfParams { scheme, ..self.rf }, ..self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_folds_into_fso_average() {
        let cfg = LinkConfig::symmetric(Regime::Strong, Scheme::Alamouti, 10.0, 10.0).unwrap();
        let half = cfg.with_eta(0.5).unwrap();
        assert!((half.fso.gamma_bar_fso - 2.5).abs() < 1e-12);
        assert_eq!(half.rf.gamma_bar_rf, cfg.rf.gamma_bar_rf);
        let back = half.with_eta(1.0).unwrap();
        assert!((back.fso.gamma_bar_fso - 10.0).abs() < 1e-12);
        assert!(LinkConfig::new(cfg.fso, cfg.rf, 0.0).is_err());
    }
}
