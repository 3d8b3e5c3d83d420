//! Meijer G-function of a positive real argument.
//!
//! The primary route is the Slater residue expansion: for simple poles of
//! `Gamma(b_h + s)`,
//!
//! ```text
//! G(z) = sum_{h<=m} C_h z^{b_h} pF_{q-1}(1 + b_h - a; 1 + b_h - b_{j != h}; (-1)^{p-m-n} z)
//! ```
//!
//! with `C_h` a ratio of Gamma products assembled in log space. Instances with
//! `p > q` (or `p = q` and `z > 1`) are first mapped to
//! `G^{n,m}_{q,p}(1/z | 1 - b; 1 - a)`.
//!
//! The residue series can cancel catastrophically for large `z`. The sum of
//! absolute term magnitudes is tracked, and when it exceeds the result by more
//! than [`MeijerGOptions::max_condition`] the value is recomputed by
//! integrating along a vertical contour through the saddle of the integrand
//! (see [`crate::special::contour`]).

use crate::error::{Error, Result};
use crate::special::contour::{self, Placement};
use crate::special::gamma::{is_non_positive_integer, ln_gamma, SignedLog};
use crate::special::hypergeometric::{gen_hypergeometric_detailed, DEFAULT_SERIES_TOL};
use crate::sum::NeumaierSum;

/// Parameters of `G^{m,n}_{p,q}(z | a_1..a_p; b_1..b_q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    m: usize,
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl MeijerGSpec {
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if m > b.len() || n > a.len() {
            return Err(Error::Parameter(format!(
                "orders m = {m}, n = {n} exceed q = {}, p = {}",
                b.len(),
                a.len()
            )));
        }
        if a.iter().chain(&b).any(|x| !x.is_finite()) {
            return Err(Error::Parameter("Meijer-G parameters must be finite".into()));
        }
        Ok(MeijerGSpec { m, n, a, b })
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> usize {
        self.a.len()
    }
    pub fn q(&self) -> usize {
        self.b.len()
    }
    pub fn a(&self) -> &[f64] {
        &self.a
    }
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `G^{n,m}_{q,p}(1/z | 1 - b; 1 - a)`, equal to `G(z)` of `self`.
    pub fn inverted(&self) -> MeijerGSpec {
        MeijerGSpec {
            m: self.n,
            n: self.m,
            a: self.b.iter().map(|x| 1.0 - x).collect(),
            b: self.a.iter().map(|x| 1.0 - x).collect(),
        }
    }

    pub fn evaluate(&self, z: f64) -> Result<Evaluation> {
        meijer_g_with(self, z, &MeijerGOptions::default())
    }
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Residue series in `z`.
    Slater,
    /// Residue series of the inverted function in `1/z`.
    SlaterInverted,
    /// Numerical Mellin–Barnes integral through the saddle point.
    Contour,
}

/// Which parameter list a regularization shift was applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    A(usize),
    B(usize),
}

/// A parameter perturbation applied to split coincident poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shift {
    pub parameter: Parameter,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub method: Method,
    /// Perturbations applied to the original parameters (empty for most inputs).
    pub shifts: Vec<Shift>,
    /// Sum of absolute residue-series terms over `|value|`; 1 for contour values.
    pub condition: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGOptions {
    /// Relative term size that ends each hypergeometric series.
    pub series_tol: f64,
    /// Shift applied to a `b` parameter that differs from another by an integer.
    pub regularization_shift: f64,
    /// Two parameters closer than this to an integer difference are coincident.
    pub collision_tol: f64,
    /// Residue sums with more cancellation than this fall back to the contour.
    pub max_condition: f64,
    pub allow_contour: bool,
}

impl Default for MeijerGOptions {
    fn default() -> Self {
        MeijerGOptions {
            series_tol: DEFAULT_SERIES_TOL,
            regularization_shift: 1e-7,
            collision_tol: 1e-12,
            max_condition: 1e3,
            allow_contour: true,
        }
    }
}

/// `G^{m,n}_{p,q}(z | a; b)` for `z > 0`.
pub fn meijer_g(spec: &MeijerGSpec, z: f64) -> Result<f64> {
    spec.evaluate(z).map(|e| e.value)
}

pub fn meijer_g_with(spec: &MeijerGSpec, z: f64, opts: &MeijerGOptions) -> Result<Evaluation> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Domain(format!("Meijer-G needs 0 < z < inf, got {z}")));
    }
    let contour_ok = opts.allow_contour && contour::is_feasible(spec);
    let (p, q) = (spec.p(), spec.q());
    let series = if q > p || (p == q && z < 1.0) {
        if p == q && z >= 0.5 && contour_ok {
            None
        } else {
            Some(slater(spec, z, opts, false))
        }
    } else if p == q && z <= 2.0 && contour_ok {
        None
    } else {
        Some(slater(&spec.inverted(), 1.0 / z, opts, true))
    };

    let series = match series {
        Some(Ok(ev)) if ev.condition <= opts.max_condition || !contour_ok => return Ok(ev),
        Some(Err(e @ (Error::NonConvergence { .. } | Error::Domain(_)))) if contour_ok => Err(e),
        Some(Err(e)) => return Err(e),
        Some(Ok(ev)) => Ok(ev),
        None => Err(Error::Domain(format!(
            "G^{},{}_{},{} at z = {z} needs the contour route",
            spec.m, spec.n, p, q
        ))),
    };
    match contour::contour_value(spec, z, Placement::Saddle) {
        Ok(value) => Ok(Evaluation { value, method: Method::Contour, shifts: Vec::new(), condition: 1.0 }),
        Err(e) => series.or(Err(e)),
    }
}

fn collides(x: f64, y: f64, tol: f64) -> bool {
    let d = x - y;
    (d - d.round()).abs() <= tol * d.abs().max(1.0)
}

/// Splits integer-spaced entries of `b[..m]` by shifting later entries.
fn regularize(b: &mut [f64], m: usize, shift: f64, tol: f64) -> Result<Vec<(usize, f64)>> {
    let mut shifts = Vec::new();
    for j in 1..m {
        if (0..j).any(|i| collides(b[i], b[j], tol)) {
            b[j] += shift;
            shifts.push((j, shift));
        }
    }
    for j in 1..m {
        if let Some(i) = (0..j).find(|&i| collides(b[i], b[j], tol)) {
            return Err(Error::Degenerate(format!(
                "b[{i}] = {} and b[{j}] = {} still differ by an integer after regularization",
                b[i], b[j]
            )));
        }
    }
    Ok(shifts)
}

fn slater(spec: &MeijerGSpec, z: f64, opts: &MeijerGOptions, inverted: bool) -> Result<Evaluation> {
    let (m, n, p, q) = (spec.m, spec.n, spec.p(), spec.q());
    let a = &spec.a;
    let mut b = spec.b.clone();
    let raw_shifts = regularize(&mut b, m, opts.regularization_shift, opts.collision_tol)?;
    // In the inverted problem b' = 1 - a, so a shift of +d on b'_j is -d on a_j.
    let shifts = raw_shifts
        .into_iter()
        .map(|(j, d)| {
            if inverted {
                Shift { parameter: Parameter::A(j), delta: -d }
            } else {
                Shift { parameter: Parameter::B(j), delta: d }
            }
        })
        .collect();

    let arg = if (p + m + n) % 2 == 0 { z } else { -z };
    let mut total = NeumaierSum::new();
    let mut magnitude = 0.0;
    let mut upper = Vec::with_capacity(p);
    let mut lower = Vec::with_capacity(q.saturating_sub(1));

    'residues: for h in 0..m {
        let bh = b[h];
        let mut coef = SignedLog::ONE;
        for (j, &bj) in b.iter().enumerate().take(m) {
            if j != h {
                coef = coef * ln_gamma(bj - bh)?;
            }
        }
        for &aj in &a[..n] {
            let x = 1.0 - aj + bh;
            if is_non_positive_integer(x) {
                return Err(Error::Degenerate(format!(
                    "pole of Gamma(1 - a + s) at a = {aj} coincides with a pole of Gamma(b - s) at b = {bh}"
                )));
            }
            coef = coef * ln_gamma(x)?;
        }
        for &bj in &b[m..] {
            let x = 1.0 + bh - bj;
            if is_non_positive_integer(x) {
                return Err(Error::Degenerate(format!(
                    "residue at b = {bh} needs a regularized series (1 + b_h - b_j = {x})"
                )));
            }
            coef = coef / ln_gamma(x)?;
        }
        for &aj in &a[n..] {
            let x = aj - bh;
            if is_non_positive_integer(x) {
                // 1/Gamma vanishes: this residue contributes nothing.
                continue 'residues;
            }
            coef = coef / ln_gamma(x)?;
        }

        upper.clear();
        upper.extend(a.iter().map(|aj| 1.0 + bh - aj));
        lower.clear();
        lower.extend(b.iter().enumerate().filter(|&(j, _)| j != h).map(|(_, bj)| 1.0 + bh - bj));
        let series = gen_hypergeometric_detailed(&upper, &lower, arg, opts.series_tol)?;

        let scale = coef.scale_pow(z, bh);
        let size = scale.ln.exp();
        let term = scale.sign * size * series.value;
        if !term.is_finite() {
            return Err(Error::Domain(format!("residue at b = {bh} overflows at z = {z}")));
        }
        total.add(term);
        magnitude += size * series.abs_sum;
    }

    let value = total.value();
    let condition = if value != 0.0 {
        magnitude / value.abs()
    } else if magnitude == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    Ok(Evaluation {
        value,
        method: if inverted { Method::SlaterInverted } else { Method::Slater },
        shifts,
        condition: condition.max(1.0),
    })
}
