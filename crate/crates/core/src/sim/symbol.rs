//! Symbol-level model of the two hops.
//!
//! The RF hop carries an Alamouti block (or the selected antenna alone) over
//! flat Rayleigh gains; the relay hard-detects and re-sends the bit as an
//! intensity-modulated optical signal `x_R = 1 + eta d`.

use num_complex::Complex64;

use super::{counted, normal_interval, BerMode, Method, SimConfig, SimResult};
use crate::channel::{fso, RngStream, Scheme};
use crate::error::{param, Result};
use crate::link::LinkConfig;
use crate::sum::NeumaierSum;

const UNIT_ENERGY_TOL: f64 = 1e-9;

/// Combined outputs of one Alamouti block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlamoutiOutput {
    pub r1: Complex64,
    pub r2: Complex64,
    /// `|h1|^2 + |h2|^2`, the signal coefficient of both outputs.
    pub gain: f64,
    /// `sigma1^2 (|h1|^2 + |h2|^2)`.
    pub noise_var: f64,
}

/// Circularly symmetric Gaussian with `E|n|^2 = var`.
fn complex_normal(var: f64, rng: &mut RngStream) -> Complex64 {
    let s = (0.5 * var).sqrt();
    Complex64::new(s * rng.normal(), s * rng.normal())
}

/// Sends `[x1, x2]` then `[-x2*, x1*]` over `(h1, h2)` and combines.
///
/// Received slots are `y1 = h1 x1 + h2 x2 + e1` and `y2 = -h1 x2* + h2 x1* + e2`;
/// the outputs are `r1 = h1* y1 + h2 y2*` and `r2 = h2* y1 - h1 y2*`.
pub fn alamouti_roundtrip(
    h1: Complex64,
    h2: Complex64,
    x1: Complex64,
    x2: Complex64,
    sigma1: f64,
    rng: &mut RngStream,
) -> Result<AlamoutiOutput> {
    if !(sigma1 >= 0.0 && sigma1.is_finite()) {
        return param(format!("sigma1 must be non-negative and finite, got {sigma1}"));
    }
    for x in [x1, x2] {
        if (x.norm_sqr() - 1.0).abs() > UNIT_ENERGY_TOL {
            return param(format!("symbols must have unit energy, got |x|^2 = {}", x.norm_sqr()));
        }
    }
    let var = sigma1 * sigma1;
    let e1 = complex_normal(var, rng);
    let e2 = complex_normal(var, rng);
    let y1 = h1 * x1 + h2 * x2 + e1;
    let y2 = -h1 * x2.conj() + h2 * x1.conj() + e2;
    let r1 = h1.conj() * y1 + h2 * y2.conj();
    let r2 = h2.conj() * y1 - h1 * y2.conj();
    let gain = h1.norm_sqr() + h2.norm_sqr();
    Ok(AlamoutiOutput { r1, r2, gain, noise_var: var * gain })
}

/// Index (1 or 2) and SNR of the stronger antenna; ties go to antenna 1.
pub fn select_antenna(gamma_11: f64, gamma_12: f64) -> (usize, f64) {
    if gamma_12 > gamma_11 {
        (2, gamma_12)
    } else {
        (1, gamma_11)
    }
}

fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Destination decision on the optical hop.
///
/// The relay sends `x_R = 1 + eta d` through intensity `i`; after the DC term
/// `i` is removed the destination sees `i eta d + n` with `n ~ N(0, sigma2^2)`.
pub fn relay_forward(d: f64, eta: f64, i: f64, sigma2: f64, rng: &mut RngStream) -> Result<f64> {
    if d != 1.0 && d != -1.0 {
        return param(format!("relay symbol must be +1 or -1, got {d}"));
    }
    if !(i > 0.0 && i.is_finite()) {
        return param(format!("intensity must be positive, got {i}"));
    }
    if !(eta >= 0.0 && sigma2 >= 0.0) {
        return param("eta and sigma2 must be non-negative");
    }
    let received = i * (1.0 + eta * d) + sigma2 * rng.normal();
    Ok(sign(received - i))
}

/// One binary DPSK decision at SNR `g`: a reference and a data symbol, each
/// with unit-variance complex noise, decided by `sign(Re(s1 s0*))`.
///
/// The error probability is `1/2 e^{-g}`.
pub fn dpsk_trial(g: f64, d: f64, rng: &mut RngStream) -> f64 {
    let a = g.sqrt();
    let s0 = Complex64::new(a, 0.0) + complex_normal(1.0, rng);
    let s1 = Complex64::new(a * d, 0.0) + complex_normal(1.0, rng);
    sign((s1 * s0.conj()).re)
}

/// Error probability of two cascaded binary hops: `p1 + p2 - 2 p1 p2`.
pub fn compose_hops(p1: f64, p2: f64) -> f64 {
    p1 + p2 - 2.0 * p1 * p2
}

/// Unit-power Rayleigh gains for the two transmit antennas.
fn rayleigh_pair(rng: &mut RngStream) -> (Complex64, Complex64) {
    (complex_normal(1.0, rng), complex_normal(1.0, rng))
}

/// Gains actually driven by `scheme`: both, or the stronger one alone.
fn active_gains(scheme: Scheme, h1: Complex64, h2: Complex64) -> (Complex64, Complex64) {
    match scheme {
        Scheme::Alamouti => (h1, h2),
        Scheme::AntennaSelection => match select_antenna(h1.norm_sqr(), h2.norm_sqr()) {
            (1, _) => (h1, Complex64::new(0.0, 0.0)),
            _ => (h2, Complex64::new(0.0, 0.0)),
        },
    }
}

/// End-to-end BER with the relay deciding before forwarding.
///
/// In [`BerMode::Kernel`] each sample contributes
/// `P1 + P2 - 2 P1 P2` with `P_k = 1/2 e^{-gamma_k}`. In [`BerMode::BitFlip`]
/// a bit is sent differentially through the combined Alamouti outputs, the
/// relay decision is re-sent as one DPSK symbol over the optical hop, and
/// destination errors are counted.
pub fn symbol_level_e2e_ber(cfg: &LinkConfig, sim: &SimConfig) -> Result<SimResult> {
    let g_rf = cfg.rf.gamma_bar_rf;
    let sigma1 = g_rf.recip().sqrt();
    let mode = sim.ber_mode;
    let one = Complex64::new(1.0, 0.0);
    let blocks = sim.run_blocks(|_, mut rng, len| {
        let mut sum = NeumaierSum::new();
        let mut sum_sq = NeumaierSum::new();
        let mut errors = 0u64;
        for _ in 0..len {
            let (h1, h2) = rayleigh_pair(&mut rng);
            let (a1, a2) = active_gains(cfg.rf.scheme, h1, h2);
            let intensity = fso::gamma_gamma(cfg.fso.alpha, cfg.fso.beta, &mut rng)
                * fso::pointing_loss(cfg.fso.xi, &mut rng)
                / cfg.fso.mean_intensity();
            let g2 = cfg.fso.gamma_bar_fso * intensity * intensity;
            match mode {
                BerMode::Kernel => {
                    let g1 = g_rf * (a1.norm_sqr() + a2.norm_sqr());
                    let p = compose_hops(0.5 * (-g1).exp(), 0.5 * (-g2).exp());
                    sum.add(p);
                    sum_sq.add(p * p);
                }
                BerMode::BitFlip => {
                    let d = sign(rng.uniform() - 0.5);
                    let out = alamouti_roundtrip(a1, a2, one, Complex64::new(d, 0.0), sigma1, &mut rng)
                        .expect("unit symbols and positive noise");
                    let relay = sign((out.r2 * out.r1.conj()).re);
                    if dpsk_trial(g2, relay, &mut rng) != d {
                        errors += 1;
                    }
                }
            }
        }
        (sum, sum_sq, errors)
    })?;
    let mut sum = NeumaierSum::new();
    let mut sum_sq = NeumaierSum::new();
    let mut errors = 0;
    for (s, q, e) in &blocks {
        sum.merge(s);
        sum_sq.merge(q);
        errors += e;
    }
    let n = sim.n_samples;
    Ok(match mode {
        BerMode::Kernel => {
            let (mean, half) = normal_interval(sum.value(), sum_sq.value(), n);
            SimResult { estimate: mean, ci95_half_width: half, n_samples: n, method: Method::SymbolLevel, undersampled: false }
        }
        BerMode::BitFlip => counted(errors, n, Method::SymbolLevel),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{FsoParams, Regime, RfParams};
    use crate::sim::{mc_ber, wilson_interval};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn noiseless_combining_is_exact() {
        let mut rng = RngStream::new(1, 0);
        let (h1, h2) = (c(0.3, -1.2), c(0.7, 0.4));
        let (x1, x2) = (c(1.0, 0.0), c(0.0, -1.0));
        let out = alamouti_roundtrip(h1, h2, x1, x2, 0.0, &mut rng).unwrap();
        let g = h1.norm_sqr() + h2.norm_sqr();
        assert_eq!(out.gain, g);
        assert!((out.r1 - x1 * g).norm() < 1e-15);
        assert!((out.r2 - x2 * g).norm() < 1e-15);
        assert_eq!(out.noise_var, 0.0);
    }

    #[test]
    fn dead_antenna_leaves_single_path() {
        let mut rng = RngStream::new(1, 0);
        let h1 = c(0.6, 0.8);
        let out = alamouti_roundtrip(h1, c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), 0.0, &mut rng).unwrap();
        assert_eq!(out.gain, h1.norm_sqr());
        assert!((out.r1 + h1.norm_sqr()).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut rng = RngStream::new(1, 0);
        let one = c(1.0, 0.0);
        assert!(alamouti_roundtrip(one, one, c(2.0, 0.0), one, 1.0, &mut rng).is_err());
        assert!(alamouti_roundtrip(one, one, one, one, -1.0, &mut rng).is_err());
        assert!(relay_forward(0.5, 1.0, 1.0, 1.0, &mut rng).is_err());
        assert!(relay_forward(1.0, 1.0, 0.0, 1.0, &mut rng).is_err());
    }

    #[test]
    fn selection() {
        assert_eq!(select_antenna(3.0, 1.0), (1, 3.0));
        assert_eq!(select_antenna(1.0, 3.0), (2, 3.0));
        assert_eq!(select_antenna(2.0, 2.0), (1, 2.0));
    }

    #[test]
    fn relay_limits() {
        let mut rng = RngStream::new(4, 0);
        for d in [-1.0, 1.0] {
            assert!((0..1000).all(|_| relay_forward(d, 0.8, 0.3, 0.0, &mut rng).unwrap() == d));
        }
        let n = 200_000;
        let flips = (0..n).filter(|_| relay_forward(1.0, 0.0, 1.0, 1.0, &mut rng).unwrap() != 1.0).count();
        let (p, half) = wilson_interval(flips as u64, n);
        assert!((p - 0.5).abs() < 2.0 * half, "{p}");
    }

    #[test]
    fn dpsk_error_rate() {
        let mut rng = RngStream::new(8, 3);
        for g in [0.0, 1.0, 3.0] {
            let n = 400_000;
            let errs = (0..n).filter(|_| dpsk_trial(g, -1.0, &mut rng) != -1.0).count();
            let (p, half) = wilson_interval(errs as u64, n);
            let expected = 0.5 * (-g as f64).exp();
            assert!((p - expected).abs() < 2.0 * half, "g = {g}: {p} vs {expected}");
        }
    }

    #[test]
    fn composition_identities() {
        assert_eq!(compose_hops(0.0, 0.0), 0.0);
        assert_eq!(compose_hops(0.125, 0.0), 0.125);
        assert_eq!(compose_hops(0.0, 0.3), 0.3);
        assert_eq!(compose_hops(0.5, 0.5), 0.5);
    }

    #[test]
    fn noiseless_hops_give_no_errors() {
        let fso = FsoParams::new(1e9, 1e9, 1e6, 1e6).unwrap();
        let cfg = LinkConfig::new(fso, RfParams::new(1e6, Scheme::Alamouti).unwrap(), 1.0).unwrap();
        let kernel = symbol_level_e2e_ber(&cfg, &SimConfig::new(10_000, 2)).unwrap();
        assert!(kernel.estimate < 1e-100);
        let flips = SimConfig { ber_mode: BerMode::BitFlip, ..SimConfig::new(10_000, 2) };
        assert_eq!(symbol_level_e2e_ber(&cfg, &flips).unwrap().estimate, 0.0);
    }

    #[test]
    fn bounded_by_min_snr_estimator() {
        // P1 + P2 - 2 P1 P2 lies between max(P1, P2) and 2 max(P1, P2)
        for scheme in Scheme::ALL {
            let cfg = LinkConfig::symmetric(Regime::Moderate, scheme, 15.0, 10.0).unwrap();
            let sim = SimConfig::new(200_000, 5);
            let exact = symbol_level_e2e_ber(&cfg, &sim).unwrap();
            let min_snr = mc_ber(&cfg, &sim).unwrap();
            let ratio = exact.estimate / min_snr.estimate;
            assert!((1.0..=2.0).contains(&ratio), "{scheme:?}: {ratio}");
            assert_eq!(exact.method, Method::SymbolLevel);
        }
    }

    #[test]
    fn audit_mode_agrees_with_kernel_mode() {
        let cfg = LinkConfig::symmetric(Regime::Strong, Scheme::Alamouti, 5.0, 10.0).unwrap();
        let kernel = symbol_level_e2e_ber(&cfg, &SimConfig::new(200_000, 6)).unwrap();
        let audit = SimConfig { ber_mode: BerMode::BitFlip, ..SimConfig::new(200_000, 7) };
        let flips = symbol_level_e2e_ber(&cfg, &audit).unwrap();
        let tol = 3.0 * (kernel.ci95_half_width + flips.ci95_half_width);
        assert!((kernel.estimate - flips.estimate).abs() < tol, "{kernel:?} vs {flips:?}");
    }
}
