//! Per-hop fading models: samplers and analytic CDFs.

pub mod fso;
pub mod rf;
pub mod rng;

pub use fso::{
    cdf_fso, sample_fso_snr, sample_gamma_gamma, sample_pointing_loss, sample_pointing_loss_inverse, FsoParams,
    Regime,
};
pub use rf::{cdf_rayleigh, cdf_rf, mgf_rf_alamouti, sample_rf_snr, RfParams, Scheme};
pub use rng::RngStream;
