use fsorf::channel::*;
use fsorf::link::*;
use fsorf::quadrature::gauss_kronrod;
use fsorf::sim::*;
use num_complex::Complex64;

fn cfg(regime: Regime, scheme: Scheme, db: f64) -> LinkConfig {
    LinkConfig::symmetric(regime, scheme, db, 10.0).unwrap()
}

#[test]
fn monte_carlo_agrees_with_analytics() {
    let sim = SimConfig::new(1_000_000, 17);
    for (regime, scheme, db) in [
        (Regime::Moderate, Scheme::Alamouti, 10.0),
        (Regime::Strong, Scheme::AntennaSelection, 20.0),
        (Regime::Moderate, Scheme::AntennaSelection, 20.0),
    ] {
        let c = cfg(regime, scheme, db);
        let est = mc_link(&c, &sim).unwrap();
        let (p, b) = (outage(&c).unwrap(), ber_closed(&c).unwrap());
        assert!(est.outage.agrees_with(p, 3.0), "{regime:?} {scheme:?} {db}: {:?} vs {p}", est.outage);
        assert!(est.ber.agrees_with(b, 3.0), "{regime:?} {scheme:?} {db}: {:?} vs {b}", est.ber);
    }
}

#[test]
fn bit_flipping_agrees_with_the_kernel() {
    let c = cfg(Regime::Strong, Scheme::Alamouti, 5.0);
    let sim = SimConfig { ber_mode: BerMode::BitFlip, ..SimConfig::new(1_000_000, 23) };
    let flips = mc_ber(&c, &sim).unwrap();
    let kernel = mc_ber(&c, &SimConfig::new(1_000_000, 23)).unwrap();
    assert!(flips.agrees_with(ber_closed(&c).unwrap(), 3.0), "{flips:?}");
    assert!(kernel.ci95_half_width < flips.ci95_half_width, "averaging over the noise reduces variance");
}

#[test]
fn reproducible_across_partitioning() {
    let c = cfg(Regime::Moderate, Scheme::Alamouti, 12.0);
    let base = SimConfig { n_workers: 1, batch_size: 4096, ..SimConfig::new(300_001, 99) };
    let reference = mc_link(&c, &base).unwrap();
    for (workers, batch) in [(2, 1), (4, 50_000), (8, 1 << 22)] {
        let other = SimConfig { n_workers: workers, batch_size: batch, ..base.clone() };
        assert_eq!(mc_link(&c, &other).unwrap(), reference);
        assert_eq!(symbol_level_e2e_ber(&c, &other).unwrap(), symbol_level_e2e_ber(&c, &base).unwrap());
    }
    let reseeded = SimConfig { seed: 100, ..base };
    assert_ne!(mc_link(&c, &reseeded).unwrap(), reference);
}

#[test]
fn interval_shrinks_as_root_n() {
    let c = cfg(Regime::Strong, Scheme::AntennaSelection, 10.0);
    let small = mc_link(&c, &SimConfig::new(100_000, 1)).unwrap();
    let large = mc_link(&c, &SimConfig::new(10_000_000, 1)).unwrap();
    for (s, l) in [(small.outage, large.outage), (small.ber, large.ber)] {
        let ratio = s.ci95_half_width / l.ci95_half_width;
        assert!((ratio / 10.0 - 1.0).abs() < 0.1, "{ratio}");
    }
}

#[test]
fn alamouti_noise_variance() {
    let (h1, h2) = (Complex64::new(0.8, -0.3), Complex64::new(-0.2, 1.1));
    let sigma = 0.7;
    let x = Complex64::new(1.0, 0.0);
    let mut rng = RngStream::new(7, 0);
    let n = 1_000_000;
    let mut acc = 0.0;
    let mut gain = 0.0;
    for _ in 0..n {
        let out = alamouti_roundtrip(h1, h2, x, x, sigma, &mut rng).unwrap();
        gain = out.gain;
        acc += (out.r1 - out.gain * x).norm_sqr() + (out.r2 - out.gain * x).norm_sqr();
    }
    let measured = acc / (2.0 * n as f64) / gain;
    assert!((measured / (sigma * sigma) - 1.0).abs() < 0.01, "{measured}");
}

#[test]
fn relay_flip_rate_matches_gaussian_tail() {
    let density = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let tail = gauss_kronrod(density, 3.0, 40.0, 1e-18, 1e-14, 200).unwrap().value;
    assert!((tail - 0.001_349_898_031_630_1).abs() < 1e-15);
    let mut rng = RngStream::new(15, 0);
    let n = 1_000_000;
    // I eta / sigma2 = 0.6 * 0.5 / 0.1 = 3
    let flips = (0..n).filter(|_| relay_forward(-1.0, 0.5, 0.6, 0.1, &mut rng).unwrap() != -1.0).count();
    let p = flips as f64 / n as f64;
    let se = (tail * (1.0 - tail) / n as f64).sqrt();
    assert!((p - tail).abs() <= 3.0 * se, "{p} vs {tail}");
}

#[test]
fn post_combining_snr_mean() {
    let c = cfg(Regime::Moderate, Scheme::Alamouti, 7.0);
    let mean = mean_rf_snr(&c, &SimConfig::new(1_000_000, 4)).unwrap();
    assert!((mean / (2.0 * c.rf.gamma_bar_rf) - 1.0).abs() < 0.01);
}

#[test]
fn decode_and_forward_within_twice_the_min_snr_estimate() {
    for scheme in Scheme::ALL {
        let c = cfg(Regime::Moderate, scheme, 15.0);
        let sim = SimConfig::new(1_000_000, 8);
        let exact = symbol_level_e2e_ber(&c, &sim).unwrap();
        let min_snr = mc_ber(&c, &sim).unwrap();
        let ratio = exact.estimate / min_snr.estimate;
        assert!((0.5..=2.0).contains(&ratio), "{scheme:?}: ratio {ratio}");
    }
}
