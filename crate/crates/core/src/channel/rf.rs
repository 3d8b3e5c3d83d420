//! Rayleigh-faded RF hop with two transmit antennas.

use crate::channel::rng::RngStream;
use crate::error::{param, Error, Result};

/// Transmit diversity scheme on the RF hop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Alamouti space-time block code: post-combining SNR `g1 + g2`.
    Alamouti,
    /// Transmit antenna selection: SNR `max(g1, g2)`.
    AntennaSelection,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Alamouti, Scheme::AntennaSelection];

    /// Short label used in tables: `ac` or `as`.
    pub fn label(self) -> &'static str {
        match self {
            Scheme::Alamouti => "ac",
            Scheme::AntennaSelection => "as",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ac" | "alamouti" => Ok(Scheme::Alamouti),
            // "sc" (selection combining) names the same scheme
            "as" | "sc" | "selection" | "antenna-selection" => Ok(Scheme::AntennaSelection),
            other => param(format!("unknown scheme '{other}' (expected alamouti or as)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfParams {
    /// Average SNR per branch, linear.
    pub gamma_bar_rf: f64,
    pub scheme: Scheme,
}

impl RfParams {
    pub fn new(gamma_bar_rf: f64, scheme: Scheme) -> Result<Self> {
        if !(gamma_bar_rf > 0.0 && gamma_bar_rf.is_finite()) {
            return param(format!("gamma_bar_rf must be positive and finite, got {gamma_bar_rf}"));
        }
        Ok(RfParams { gamma_bar_rf, scheme })
    }
}

/// Instantaneous RF SNR at the relay.
pub fn sample_rf_snr(p: &RfParams, rng: &mut RngStream) -> f64 {
    let g1 = p.gamma_bar_rf * rng.exponential();
    let g2 = p.gamma_bar_rf * rng.exponential();
    match p.scheme {
        Scheme::Alamouti => g1 + g2,
        Scheme::AntennaSelection => g1.max(g2),
    }
}

fn check_snr(gamma: f64) -> Result<()> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::Domain(format!("SNR must be non-negative, got {gamma}")));
    }
    Ok(())
}

/// `1 - exp(-gamma / gamma_bar)`.
pub fn cdf_rayleigh(gamma: f64, gamma_bar: f64) -> Result<f64> {
    check_snr(gamma)?;
    if !(gamma_bar > 0.0) {
        return param(format!("gamma_bar must be positive, got {gamma_bar}"));
    }
    Ok(-(-gamma / gamma_bar).exp_m1())
}

/// `(1 / (s gamma_bar + 1))^2`.
pub fn mgf_rf_alamouti(s: f64, gamma_bar: f64) -> Result<f64> {
    if s.is_nan() || s < 0.0 {
        return Err(Error::Domain(format!("MGF argument must be non-negative, got {s}")));
    }
    if !(gamma_bar > 0.0) {
        return param(format!("gamma_bar must be positive, got {gamma_bar}"));
    }
    Ok((s * gamma_bar + 1.0).powi(-2))
}

/// `1 - (1 + u) e^{-u}` without cancellation for small `u`.
pub(crate) fn erlang2_cdf(u: f64) -> f64 {
    if u < 0.25 {
        // sum_{k>=2} (-1)^k (k - 1) u^k / k!
        let mut term = -u; // (-1)^k u^k / k! at k = 1
        let mut total = 0.0;
        for k in 2..40 {
            term *= -u / k as f64;
            let contribution = (k - 1) as f64 * term;
            total += contribution;
            if contribution.abs() < 1e-17 * total.abs() {
                break;
            }
        }
        total
    } else {
        1.0 - (1.0 + u) * (-u).exp()
    }
}

/// CDF of the RF SNR: `1 - (1 + x) e^{-x}` for Alamouti and `(1 - e^{-x})^2` for
/// selection, with `x = gamma / gamma_bar_rf`.
pub fn cdf_rf(gamma: f64, p: &RfParams) -> Result<f64> {
    check_snr(gamma)?;
    let u = gamma / p.gamma_bar_rf;
    Ok(match p.scheme {
        Scheme::Alamouti => erlang2_cdf(u),
        Scheme::AntennaSelection => {
            let f = -(-u).exp_m1();
            f * f
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_values() {
        let e1 = (-1.0f64).exp();
        assert_eq!(cdf_rayleigh(0.0, 2.0).unwrap(), 0.0);
        assert!((cdf_rayleigh(2.0, 2.0).unwrap() - (1.0 - e1)).abs() < 1e-16);
        assert!((cdf_rayleigh(2.0 * std::f64::consts::LN_2, 2.0).unwrap() - 0.5).abs() < 1e-16);
        let ac = RfParams::new(3.0, Scheme::Alamouti).unwrap();
        let sel = RfParams::new(3.0, Scheme::AntennaSelection).unwrap();
        assert_eq!(cdf_rf(0.0, &ac).unwrap(), 0.0);
        assert_eq!(cdf_rf(0.0, &sel).unwrap(), 0.0);
        assert!((cdf_rf(3.0, &ac).unwrap() - 0.264_241_117_657_115_4).abs() < 1e-15);
        assert!((cdf_rf(3.0, &sel).unwrap() - 0.399_576_400_893_728_05).abs() < 1e-15);
        assert_eq!(mgf_rf_alamouti(0.0, 4.0).unwrap(), 1.0);
        assert_eq!(mgf_rf_alamouti(0.25, 4.0).unwrap(), 0.25);
    }

    #[test]
    fn erlang_cdf_keeps_relative_accuracy_near_zero() {
        let reference = [
            (1e-12, 4.999_999_999_996_666_793_6e-25),
            (1e-6, 4.999_996_666_667_916_666_3e-13),
            (1e-3, 4.996_667_916_333_402_765_9e-7),
            (0.1, 0.004_678_840_160_444_469_519_3),
            (0.2499, 0.026_479_554_061_897_225_242),
            (0.25, 0.026_499_021_160_743_914_694),
            (0.3, 0.036_936_313_113_766_774_113),
        ];
        for (u, expected) in reference {
            let v = erlang2_cdf(u);
            assert!((v / expected - 1.0).abs() < 1e-14, "u = {u}: {v} vs {expected}");
        }
        assert_eq!(erlang2_cdf(1e-150), 0.5e-300);
    }

    #[test]
    fn scheme_names() {
        assert_eq!("alamouti".parse::<Scheme>().unwrap(), Scheme::Alamouti);
        assert_eq!("AS".parse::<Scheme>().unwrap(), Scheme::AntennaSelection);
        assert_eq!("sc".parse::<Scheme>().unwrap(), Scheme::AntennaSelection);
        assert!("mrc".parse::<Scheme>().is_err());
        assert!(RfParams::new(0.0, Scheme::Alamouti).is_err());
    }
}
