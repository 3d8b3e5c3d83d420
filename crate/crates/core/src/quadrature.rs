//! Numerical integration.
//!
//! [`gauss_kronrod`] is a globally adaptive 7/15-point Gauss–Kronrod scheme on a
//! finite interval; [`exp_sinh`] is the double-exponential rule for `[0, inf)`,
//! which tolerates algebraic endpoint behaviour such as `x^0.7` at the origin.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Largest |f| seen at the panel's nodes.
    peak: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut peak = fc.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
        peak = peak.max(f1.abs()).max(f2.abs());
    }
    if !(kronrod.is_finite() && gauss.is_finite()) {
        return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
    }
    Ok(Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        peak,
    })
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Refines the panel with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol * |integral|)`.
pub fn gauss_kronrod<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<QuadResult> {
    let (result, _) = gauss_kronrod_with_peak(&mut f, a, b, abs_tol, rel_tol, max_panels)?;
    Ok(result)
}

/// As [`gauss_kronrod`], additionally returning the largest |f| sampled.
pub(crate) fn gauss_kronrod_with_peak<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<(QuadResult, f64)> {
    let first = kronrod_panel(f, a, b)?;
    let mut peak = first.peak;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut evaluations = 15;
    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok((QuadResult { value, error, evaluations }, peak));
        }
        if heap.len() >= max_panels {
            return Err(Error::Quadrature(format!(
                "{max_panels} panels exhausted on [{a}, {b}], error estimate {error:e}"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let p = kronrod_panel(f, lo, hi)?;
            peak = peak.max(p.peak);
            heap.push(p);
        }
        evaluations += 30;
    }
}

/// Double-exponential (exp-sinh) quadrature of `f` over `[0, inf)`.
///
/// `bound(x)` must bound `|f(x)|`; nodes whose weighted bound is below
/// `abs_floor` are skipped without evaluating `f`. The step is halved until
/// two successive levels agree to `rel_tol`.
pub fn exp_sinh<F, B>(mut f: F, bound: B, rel_tol: f64, abs_floor: f64) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
    B: Fn(f64) -> f64,
{
    const T_MAX: f64 = 5.0;
    const MIN_LEVEL: usize = 3;
    const MAX_LEVEL: usize = 12;

    let mut evaluations = 0;
    let node = |t: f64, f: &mut F, evaluations: &mut usize| -> Result<f64> {
        let x = (FRAC_PI_2 * t.sinh()).exp();
        let w = FRAC_PI_2 * t.cosh() * x;
        if !(x.is_finite() && w.is_finite()) || x == 0.0 || w * bound(x) <= abs_floor {
            return Ok(0.0);
        }
        *evaluations += 1;
        Ok(w * f(x)?)
    };

    // Level 0: integer nodes, h = 1.
    let mut raw = 0.0;
    let n0 = T_MAX as i64;
    for k in -n0..=n0 {
        raw += node(k as f64, &mut f, &mut evaluations)?;
    }
    let mut h = 1.0;
    let mut estimate = raw * h;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let count = (T_MAX / h) as i64;
        let mut k = -count + 1;
        while k <= count {
            raw += node(k as f64 * h, &mut f, &mut evaluations)?;
            k += 2;
        }
        let next = raw * h;
        let change = (next - estimate).abs();
        estimate = next;
        if level >= MIN_LEVEL && change <= rel_tol * next.abs() {
            return Ok(QuadResult { value: next, error: change, evaluations });
        }
    }
    Err(Error::Quadrature(format!(
        "exp-sinh levels did not agree to {rel_tol:e} after {MAX_LEVEL} halvings"
    )))
}
