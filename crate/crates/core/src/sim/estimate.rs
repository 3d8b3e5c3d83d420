/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Proportion `events / n` and the half-width of its Wilson 95% interval.
///
/// The half-width stays positive at zero or `n` events.
pub fn wilson_interval(events: u64, n: u64) -> (f64, f64) {
    assert!(n > 0 && events <= n);
    let nf = n as f64;
    let p = events as f64 / nf;
    let z2 = Z95 * Z95;
    let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / (1.0 + z2 / nf);
    (p, half)
}

/// Sample mean and normal 95% half-width from a sum and a sum of squares.
pub fn normal_interval(sum: f64, sum_sq: f64, n: u64) -> (f64, f64) {
    assert!(n > 1);
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sum_sq - sum * mean) / (nf - 1.0)).max(0.0);
    (mean, Z95 * (var / nf).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference() {
        // 20 of 100: interval (0.1334, 0.2888)
        let (p, h) = wilson_interval(20, 100);
        assert_eq!(p, 0.2);
        assert!((2.0 * h - (0.288_83 - 0.133_37)).abs() < 2e-5, "{h}");
        let (p, h) = wilson_interval(0, 1000);
        assert_eq!(p, 0.0);
        assert!(h > 0.0 && h < 0.004);
    }

    #[test]
    fn normal_reference() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let (m, h) = normal_interval(xs.iter().sum(), xs.iter().map(|x| x * x).sum(), 4);
        assert_eq!(m, 2.5);
        // sample variance 5/3
        assert!((h - Z95 * (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        let (_, h) = normal_interval(6.0, 12.0, 3);
        assert_eq!(h, 0.0);
    }
}
