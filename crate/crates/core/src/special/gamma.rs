//! Logarithm of the Gamma function for real and complex arguments.
//!
//! Both versions use the Stirling series on an argument shifted above
//! [`SHIFT_THRESHOLD`] plus the reflection formula for the left half-plane.
//! The complex version is only ever used inside `exp(...)` of a sum, so its
//! imaginary part is returned modulo an arbitrary multiple of 2π.

use std::f64::consts::PI;
use std::ops::{Div, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

const SHIFT_THRESHOLD: f64 = 15.0;
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// B_{2k} / (2k (2k - 1)) for k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// A real number stored as `sign * exp(ln)`, used to multiply long chains of
/// Gamma values without overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub ln: f64,
    pub sign: f64,
}

impl SignedLog {
    pub const ONE: SignedLog = SignedLog { ln: 0.0, sign: 1.0 };

    pub fn from_value(x: f64) -> Self {
        SignedLog { ln: x.abs().ln(), sign: if x < 0.0 { -1.0 } else { 1.0 } }
    }

    pub fn exp(self) -> f64 {
        self.sign * self.ln.exp()
    }

    /// Multiplies by `x^power` for positive `x`.
    pub fn scale_pow(self, x: f64, power: f64) -> Self {
        SignedLog { ln: self.ln + power * x.ln(), sign: self.sign }
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;
    fn mul(self, rhs: SignedLog) -> SignedLog {
        SignedLog { ln: self.ln + rhs.ln, sign: self.sign * rhs.sign }
    }
}

impl Div for SignedLog {
    type Output = SignedLog;
    fn div(self, rhs: SignedLog) -> SignedLog {
        SignedLog { ln: self.ln - rhs.ln, sign: self.sign * rhs.sign }
    }
}

/// Returns true when `x` is one of 0, -1, -2, ...
pub fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `sin(pi x)` with exact argument reduction, so that zeros at the integers
/// are reproduced exactly.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let mut r = x - 2.0 * (0.5 * x).round();
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

fn stirling_tail(w: f64) -> f64 {
    STIRLING.iter().rev().fold(0.0, |acc, &c| acc * w + c)
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Stirling series for `x >= SHIFT_THRESHOLD`.
///
/// `(x - 1/2) ln x` reaches ~870 near the overflow limit, so `ln x` is formed as
/// `k ln 2 + ln m` with a split `ln 2` and the product is kept in two parts.
fn ln_gamma_stirling(x: f64) -> (f64, f64) {
    // fdlibm split of ln 2; LN2_HI has trailing zero bits so k * LN2_HI is exact
    const LN2_HI: f64 = 6.931_471_803_691_238_164_90e-1;
    const LN2_LO: f64 = 1.908_214_929_270_587_700_02e-10;
    let k = x.log2().floor();
    let m = x / k.exp2();
    let (l_hi, l_lo) = two_sum(k * LN2_HI, m.ln());
    let l_lo = l_lo + k * LN2_LO;
    let a = x - 0.5;
    let p = a * l_hi;
    let p_err = a.mul_add(l_hi, -p) + a * l_lo;
    let (s, s_err) = two_sum(p, -x);
    let inv = 1.0 / x;
    (s, s_err + p_err + HALF_LN_TWO_PI + inv * stirling_tail(inv * inv))
}

/// `ln Gamma(x)` for `x >= 1/2` as an unevaluated sum `hi + lo`.
fn ln_gamma_positive(x: f64) -> (f64, f64) {
    if x >= SHIFT_THRESHOLD {
        return ln_gamma_stirling(x);
    }
    let steps = (SHIFT_THRESHOLD - x).ceil() as usize;
    let mut prod = 1.0;
    for k in 0..steps {
        prod *= x + k as f64;
    }
    let (hi, lo) = ln_gamma_stirling(x + steps as f64);
    (hi, lo - prod.ln())
}

/// `ln |Gamma(x)|` together with the sign of `Gamma(x)`.
///
/// Fails with [`Error::Pole`] at the non-positive integers.
pub fn ln_gamma(x: f64) -> Result<SignedLog> {
    if !x.is_finite() {
        return Err(Error::Parameter(format!("ln_gamma of non-finite {x}")));
    }
    if is_non_positive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let (hi, lo) = ln_gamma_positive(1.0 - x);
        let (t, t_err) = two_sum(-hi, LN_PI - s.abs().ln());
        return Ok(SignedLog { ln: t + (t_err - lo), sign: s.signum() });
    }
    let (hi, lo) = ln_gamma_positive(x);
    Ok(SignedLog { ln: hi + lo, sign: 1.0 })
}

/// `Gamma(x)` itself; overflows to infinity above x ~ 171.6.
pub fn gamma(x: f64) -> Result<f64> {
    ln_gamma(x).map(SignedLog::exp)
}

/// `1 / Gamma(x)`, which is zero at the poles of Gamma.
pub fn rgamma(x: f64) -> f64 {
    match ln_gamma(x) {
        Ok(g) => g.sign * (-g.ln).exp(),
        Err(_) => 0.0,
    }
}

/// `ln sin(pi z)` for complex `z`, stable for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() <= 15.0 {
        return (z * PI).sin().ln();
    }
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin(w) = -exp(-iw) (1 - exp(2iw)) / (2i), with |exp(2iw)| = exp(-2 pi Im z)
    let i = Complex64::i();
    let w = z * PI;
    let small = (i * w * 2.0).exp();
    -i * w - std::f64::consts::LN_2 + i * (PI / 2.0) + (Complex64::new(1.0, 0.0) - small).ln()
}

fn ln_gamma_stirling_complex(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let w = inv * inv;
    let tail = STIRLING.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c);
    (z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + inv * tail
}

/// Complex `ln Gamma(z)`; the imaginary part is determined only modulo 2π.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Parameter(format!("ln_gamma of non-finite {z}")));
    }
    if z.im == 0.0 && is_non_positive_integer(z.re) {
        return Err(Error::Pole(z.re));
    }
    if z.re < 0.5 {
        let one = Complex64::new(1.0, 0.0);
        return Ok(LN_PI - ln_sin_pi(z) - ln_gamma_complex(one - z)?);
    }
    if z.re >= SHIFT_THRESHOLD {
        return Ok(ln_gamma_stirling_complex(z));
    }
    let steps = (SHIFT_THRESHOLD - z.re).ceil() as usize;
    let mut prod = Complex64::new(1.0, 0.0);
    for k in 0..steps {
        prod *= z + k as f64;
    }
    Ok(ln_gamma_stirling_complex(z + steps as f64) - prod.ln())
}
