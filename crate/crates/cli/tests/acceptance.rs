//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

use std::time::Instant;

use fsorf::channel::*;
use fsorf::link::{ber_closed, outage, LinkConfig};
use fsorf::sim::{alamouti_roundtrip, mc_link, SimConfig};
use fsorf::validate::{self, Fault, IDENTITY_TOL, ORACLE_TOL};
use num_complex::Complex64;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn special_functions() -> Verdict {
    let start = Instant::now();
    let suite = validate::special_suite();
    let secs = start.elapsed().as_secs_f64();
    let oracle: Vec<_> = suite.checks.iter().filter(|c| c.tolerance == ORACLE_TOL).collect();
    let identity: Vec<_> = suite.checks.iter().filter(|c| c.tolerance == IDENTITY_TOL).collect();
    let worst = |cs: &[&validate::Check]| cs.iter().map(|c| c.measured).fold(0.0, f64::max);
    let covers = |needle: &str| Regime::ALL.iter().all(|r| oracle.iter().any(|c| c.name.contains(needle) && c.name.contains(r.name())));
    let passed = suite.passed() && oracle.len() >= 20 && !identity.is_empty() && covers("cdf") && covers("psi") && secs < 30.0;
    verdict(
        passed,
        format!(
            "special functions: {} oracle cases (worst {:.1e}), {} identities (worst {:.1e}), {secs:.2} s",
            oracle.len(),
            worst(&oracle),
            identity.len(),
            worst(&identity)
        ),
    )
}

fn closed_form_ber() -> Verdict {
    let suite = validate::ber_suite(Fault::None);
    let report = validate::ber_discrepancy_report().expect("report");
    let worst = suite.checks.iter().map(|c| c.measured).fold(0.0, f64::max);
    let printed = report.iter().map(|d| d.printed_error()).fold(0.0, f64::max);
    let reported = !suite.notes.is_empty() && suite.notes.iter().any(|n| n.contains("printed"));
    verdict(
        suite.passed() && reported && suite.checks.len() == 28,
        format!(
            "closed-form BER vs quadrature: {} points, worst {worst:.1e}; printed Alamouti form off by up to {printed:.2e}, discrepancy report {}",
            suite.checks.len(),
            if reported { "emitted" } else { "missing" }
        ),
    )
}

fn monte_carlo() -> Verdict {
    let start = Instant::now();
    let sim = SimConfig::new(10_000_000, 2024);
    let (mut compared, mut skipped, mut worst) = (0, 0, 0.0f64);
    let mut misses = Vec::new();
    for regime in Regime::ALL {
        for scheme in Scheme::ALL {
            for db in (0..=30).step_by(5) {
                let cfg = LinkConfig::symmetric(regime, scheme, db as f64, 10.0).unwrap();
                let est = mc_link(&cfg, &sim).unwrap();
                let ber = ber_closed(&cfg).unwrap();
                let pairs = [("outage", est.outage, outage(&cfg).unwrap()), ("ber", est.ber, ber)];
                for (what, r, exact) in pairs {
                    if exact < 1e-6 {
                        skipped += 1;
                        continue;
                    }
                    compared += 1;
                    let k = (r.estimate - exact).abs() / r.ci95_half_width;
                    worst = worst.max(k);
                    if k > 3.0 {
                        misses.push(format!("{what} {} {} {db} dB", scheme.label(), regime.name()));
                    }
                }
            }
        }
    }
    verdict(
        misses.is_empty(),
        format!(
            "analytic vs Monte Carlo at 1e7: {compared} comparisons, {skipped} below 1e-6 skipped, worst {worst:.2} half-widths, {:.0} s{}",
            start.elapsed().as_secs_f64(),
            if misses.is_empty() { String::new() } else { format!("; outside: {}", misses.join(", ")) }
        ),
    )
}

fn ber_at(regime: Regime, scheme: Scheme, db: f64) -> f64 {
    ber_closed(&LinkConfig::symmetric(regime, scheme, db, 10.0).unwrap()).unwrap()
}

fn ber_shape() -> Verdict {
    let grid: Vec<f64> = (0..=15).map(|i| 2.0 * i as f64).collect();
    let mut gap = 0.0f64;
    for regime in Regime::ALL {
        for &db in &grid {
            let d = (ber_at(regime, Scheme::Alamouti, db).log10() - ber_at(regime, Scheme::AntennaSelection, db).log10()).abs();
            gap = gap.max(d);
        }
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for scheme in Scheme::ALL {
        for &db in grid.iter().filter(|&&db| db <= 10.0) {
            let r = ber_at(Regime::Moderate, scheme, db) / ber_at(Regime::Strong, scheme, db);
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    verdict(
        gap <= 0.3 && lo >= 1.0 / 3.0 && hi <= 3.0,
        format!("BER curves: max |log10 AC - log10 AS| = {gap:.3}, moderate/strong ratio at <= 10 dB in [{lo:.3}, {hi:.3}]"),
    )
}

fn outage_shape() -> Verdict {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = fsorf_cli::run(["fsorf", "fig3", "--outputs", "analytic", "--snr-db", "20:30:2"], &mut out, &mut err);
    if code != 0 {
        return verdict(false, format!("fig3 failed: {}", String::from_utf8_lossy(&err)));
    }
    let text = String::from_utf8(out).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').collect()).collect();
    let mut worst = 0.0f64;
    for r in rows.iter().filter(|r| r[0] == "ac") {
        let twin = rows.iter().find(|s| s[0] == "as" && s[1] == r[1] && s[2] == r[2]).unwrap();
        let (ac, as_): (f64, f64) = (r[3].parse().unwrap(), twin[3].parse().unwrap());
        worst = worst.max((ac - as_).abs() / as_);
    }
    verdict(
        !rows.is_empty() && worst < 0.05,
        format!("outage AC vs AS at >= 20 dB: worst relative gap {:.2}% over {} points", 100.0 * worst, rows.len() / 2),
    )
}

fn quantile(cdf: impl Fn(f64) -> f64, p: f64) -> f64 {
    let (mut lo, mut hi) = (1e-12f64, 1e12f64);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn signal_model() -> Verdict {
    let mut notes = Vec::new();
    let mut passed = true;

    let mut rng = RngStream::new(31, 0);
    let sigma = 0.7;
    let x = Complex64::new(1.0, 0.0);
    let mut worst_var = 0.0f64;
    for (h1, h2) in [(Complex64::new(0.8, -0.3), Complex64::new(-0.2, 1.1)), (Complex64::new(0.1, 0.05), Complex64::new(2.0, 0.0))] {
        let n = 1_000_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let o = alamouti_roundtrip(h1, h2, x, x, sigma, &mut rng).unwrap();
            acc += (o.r1 - o.gain * x).norm_sqr() + (o.r2 - o.gain * x).norm_sqr();
        }
        let expected = sigma * sigma * (h1.norm_sqr() + h2.norm_sqr());
        worst_var = worst_var.max((acc / (2.0 * n as f64) / expected - 1.0).abs());
    }
    passed &= worst_var < 0.01;
    notes.push(format!("combined noise variance off by {:.2}%", 100.0 * worst_var));

    let n = 10_000_000;
    let mut worst_se = 0.0f64;
    for (i, scheme) in Scheme::ALL.into_iter().enumerate() {
        let p = RfParams::new(10.0, scheme).unwrap();
        let cdf = |g: f64| cdf_rf(g, &p).unwrap();
        let points: Vec<f64> = [0.05, 0.25, 0.5, 0.75, 0.95].iter().map(|&q| quantile(cdf, q)).collect();
        let mut below = [0usize; 5];
        let mut rng = RngStream::new(32, i as u64);
        for _ in 0..n {
            let g = sample_rf_snr(&p, &mut rng);
            for (c, &q) in below.iter_mut().zip(&points) {
                *c += usize::from(g <= q);
            }
        }
        for (c, &q) in below.iter().zip(&points) {
            let f = cdf(q);
            let se = (f * (1.0 - f) / n as f64).sqrt();
            worst_se = worst_se.max((*c as f64 / n as f64 - f).abs() / se);
        }
    }
    passed &= worst_se <= 3.0;
    notes.push(format!("RF CDF quantiles within {worst_se:.2} SE"));

    let mut worst_mean = 0.0f64;
    for (i, regime) in Regime::ALL.into_iter().enumerate() {
        let xi = regime.shape().2;
        let mut rng = RngStream::new(33, i as u64);
        let sum: f64 = (0..n).map(|_| sample_pointing_loss(xi, &mut rng).unwrap()).sum();
        let expected = xi * xi / (xi * xi + 1.0);
        worst_mean = worst_mean.max((sum / n as f64 / expected - 1.0).abs());
    }
    passed &= worst_mean < 1e-3;
    notes.push(format!("pointing-loss mean off by {:.4}%", 100.0 * worst_mean));

    verdict(passed, format!("signal model: {}", notes.join(", ")))
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for name in ["first.csv", "second.csv"] {
        let path = dir.path().join(name);
        let p = path.display().to_string();
        let args = ["fsorf", "sweep", "--snr-db", "0:30:5", "--samples", "100000", "--seed", "11", "--out", &p];
        let code = fsorf_cli::run(args, &mut Vec::new(), &mut Vec::new());
        if code != 0 {
            return verdict(false, format!("sweep exited with {code}"));
        }
        files.push(std::fs::read(path).unwrap());
    }
    verdict(
        !files[0].is_empty() && files[0] == files[1],
        format!("determinism: two seeded sweeps wrote {} and {} bytes, identical: {}", files[0].len(), files[1].len(), files[0] == files[1]),
    )
}

fn main() {
    let criteria: [fn() -> Verdict; 7] =
        [special_functions, closed_form_ber, monte_carlo, ber_shape, outage_shape, signal_model, determinism];
    let mut failed = 0;
    for (i, criterion) in criteria.iter().enumerate() {
        let v = criterion();
        println!("{} [{}] {}", if v.passed { "PASS" } else { "FAIL" }, i + 1, v.detail);
        failed += usize::from(!v.passed);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
