//! Gamma-Gamma turbulence with Rayleigh-displacement pointing error.
//!
//! The received intensity is `I = I_a h_p`, where `I_a = X Y` is the product of
//! two unit-mean Gamma variates and `h_p = exp(-r^2 / (2 xi^2))` is the
//! pointing loss for a Rayleigh radial displacement `r`. Under square-law
//! detection the electrical SNR is `gamma_bar (I / E[I])^2`, with
//! `E[I] = xi^2 / (1 + xi^2)`.

use crate::channel::rng::RngStream;
use crate::error::{param, Error, Result};
use crate::special::{ln_gamma, meijer_g, MeijerGSpec};

/// Slack allowed before a CDF value outside `[0, 1]` is treated as an error.
pub const CDF_CLAMP_TOL: f64 = 1e-9;

/// Named turbulence conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// alpha = 4, beta = 1.9, xi = 10.45.
    Moderate,
    /// alpha = 4.2, beta = 1.4, xi = 2.45.
    Strong,
}

impl Regime {
    pub const ALL: [Regime; 2] = [Regime::Moderate, Regime::Strong];

    /// `(alpha, beta, xi)`.
    pub fn shape(self) -> (f64, f64, f64) {
        match self {
            Regime::Moderate => (4.0, 1.9, 10.45),
            Regime::Strong => (4.2, 1.4, 2.45),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Moderate => "moderate",
            Regime::Strong => "strong",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "moderate" => Ok(Regime::Moderate),
            "strong" => Ok(Regime::Strong),
            other => param(format!("unknown regime '{other}' (expected moderate or strong)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsoParams {
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
    /// Scale in the CDF argument; `xi^2 / (1 + xi^2)` unless overridden.
    pub kappa: f64,
    /// Average electrical SNR, linear.
    pub gamma_bar_fso: f64,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        param(format!("{name} must be positive and finite, got {x}"))
    }
}

impl FsoParams {
    pub fn new(alpha: f64, beta: f64, xi: f64, gamma_bar_fso: f64) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        positive("xi", xi)?;
        positive("gamma_bar_fso", gamma_bar_fso)?;
        let x2 = xi * xi;
        Ok(FsoParams { alpha, beta, xi, kappa: x2 / (1.0 + x2), gamma_bar_fso })
    }

    /// Reads the pointing parameter as `xi^2` rather than `xi`.
    pub fn from_xi_squared(alpha: f64, beta: f64, xi_squared: f64, gamma_bar_fso: f64) -> Result<Self> {
        positive("xi^2", xi_squared)?;
        Self::new(alpha, beta, xi_squared.sqrt(), gamma_bar_fso)
    }

    pub fn preset(regime: Regime, gamma_bar_fso: f64) -> Result<Self> {
        let (a, b, xi) = regime.shape();
        Self::new(a, b, xi, gamma_bar_fso)
    }

    pub fn with_kappa(self, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa < 1.0) {
            return param(format!("kappa must lie in (0, 1), got {kappa}"));
        }
        Ok(FsoParams { kappa, ..self })
    }

    pub fn with_gamma_bar(self, gamma_bar_fso: f64) -> Result<Self> {
        positive("gamma_bar_fso", gamma_bar_fso)?;
        Ok(FsoParams { gamma_bar_fso, ..self })
    }

    pub fn xi_squared(&self) -> f64 {
        self.xi * self.xi
    }

    /// `E[I] = xi^2 / (1 + xi^2)`.
    pub fn mean_intensity(&self) -> f64 {
        let x2 = self.xi_squared();
        x2 / (1.0 + x2)
    }

    /// `G^{3,1}_{2,4}(. | 1, 1 + xi^2; xi^2, alpha, beta, 0)`.
    pub fn cdf_kernel(&self) -> MeijerGSpec {
        let x2 = self.xi_squared();
        MeijerGSpec::new(3, 1, vec![1.0, 1.0 + x2], vec![x2, self.alpha, self.beta, 0.0])
            .expect("orders fit the parameter lists")
    }

    /// `xi^2 / (Gamma(alpha) Gamma(beta))`.
    pub fn cdf_prefactor(&self) -> Result<f64> {
        let ln = self.xi_squared().ln() - ln_gamma(self.alpha)?.ln - ln_gamma(self.beta)?.ln;
        Ok(ln.exp())
    }
}

/// Unit-mean Gamma-Gamma irradiance `X Y`.
pub fn sample_gamma_gamma(alpha: f64, beta: f64, rng: &mut RngStream) -> Result<f64> {
    positive("alpha", alpha)?;
    positive("beta", beta)?;
    Ok(gamma_gamma(alpha, beta, rng))
}

pub(crate) fn gamma_gamma(alpha: f64, beta: f64, rng: &mut RngStream) -> f64 {
    let x = rng.gamma(alpha) / alpha;
    let y = rng.gamma(beta) / beta;
    x * y
}

/// Normalized pointing loss `h_p / A_0` from a Gaussian displacement pair.
pub fn sample_pointing_loss(xi: f64, rng: &mut RngStream) -> Result<f64> {
    positive("xi", xi)?;
    Ok(pointing_loss(xi, rng))
}

pub(crate) fn pointing_loss(xi: f64, rng: &mut RngStream) -> f64 {
    let (x, y) = (rng.normal(), rng.normal());
    let e = 0.5 * (x * x + y * y);
    (-e / (xi * xi)).exp()
}

/// Same law as [`sample_pointing_loss`] by inversion: `U^{1/xi^2}`.
pub fn sample_pointing_loss_inverse(xi: f64, rng: &mut RngStream) -> Result<f64> {
    positive("xi", xi)?;
    Ok(rng.uniform_pos().powf(1.0 / (xi * xi)))
}

/// Instantaneous electrical SNR of the FSO hop.
pub fn sample_fso_snr(p: &FsoParams, rng: &mut RngStream) -> f64 {
    let i = gamma_gamma(p.alpha, p.beta, rng) * pointing_loss(p.xi, rng);
    let r = i / p.mean_intensity();
    p.gamma_bar_fso * r * r
}

/// Clamps a CDF value that has strayed from `[0, 1]` by round-off.
pub(crate) fn clamp_probability(what: &'static str, value: f64) -> Result<f64> {
    if !(value >= -CDF_CLAMP_TOL && value <= 1.0 + CDF_CLAMP_TOL) {
        return Err(Error::OutOfRange { what, value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// CDF of the FSO SNR,
/// `xi^2 / (Gamma(alpha) Gamma(beta)) G^{3,1}_{2,4}(alpha beta kappa sqrt(gamma / gamma_bar))`.
pub fn cdf_fso(gamma: f64, p: &FsoParams) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::Domain(format!("SNR must be non-negative, got {gamma}")));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    if gamma.is_infinite() {
        return Ok(1.0);
    }
    let z = p.alpha * p.beta * p.kappa * (gamma / p.gamma_bar_fso).sqrt();
    if z == 0.0 {
        return Ok(0.0);
    }
    let value = p.cdf_prefactor()? * meijer_g(&p.cdf_kernel(), z)?;
    clamp_probability("FSO CDF", value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_defaults_and_overrides() {
        let p = FsoParams::preset(Regime::Moderate, 10.0).unwrap();
        assert!((p.kappa - 109.2025 / 110.2025).abs() < 1e-15);
        assert_eq!(p.kappa, p.mean_intensity());
        assert_eq!(p.with_kappa(0.5).unwrap().kappa, 0.5);
        assert!(p.with_kappa(1.0).is_err());
        let q = FsoParams::from_xi_squared(4.0, 1.9, 109.2025, 10.0).unwrap();
        assert!((q.xi - 10.45).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FsoParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(FsoParams::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(FsoParams::new(1.0, 1.0, f64::NAN, 1.0).is_err());
        assert!("weak".parse::<Regime>().is_err());
        assert_eq!("Strong".parse::<Regime>().unwrap(), Regime::Strong);
        let mut r = RngStream::new(0, 0);
        assert!(sample_gamma_gamma(0.0, 1.0, &mut r).is_err());
        assert!(sample_pointing_loss(-2.0, &mut r).is_err());
    }

    #[test]
    fn cdf_limits() {
        for regime in Regime::ALL {
            let p = FsoParams::preset(regime, 10.0).unwrap();
            assert_eq!(cdf_fso(0.0, &p).unwrap(), 0.0);
            assert_eq!(cdf_fso(f64::INFINITY, &p).unwrap(), 1.0);
            assert!(cdf_fso(1e-12, &p).unwrap() < 1e-6);
            assert!(cdf_fso(1e4, &p).unwrap() > 0.999);
            assert!(cdf_fso(-1.0, &p).is_err());
        }
    }

    #[test]
    fn snr_scales_linearly_with_average() {
        let p = FsoParams::preset(Regime::Strong, 3.0).unwrap();
        let q = p.with_gamma_bar(6.0).unwrap();
        let (mut a, mut b) = (RngStream::new(5, 2), RngStream::new(5, 2));
        for _ in 0..1000 {
            assert_eq!(2.0 * sample_fso_snr(&p, &mut a), sample_fso_snr(&q, &mut b));
        }
    }

    #[test]
    fn weak_fading_concentrates_at_average() {
        let p = FsoParams::new(1e6, 1e6, 1e4, 10.0).unwrap();
        let mut r = RngStream::new(11, 0);
        for _ in 0..1000 {
            assert!((sample_fso_snr(&p, &mut r) / 10.0 - 1.0).abs() < 0.02);
        }
    }
}
