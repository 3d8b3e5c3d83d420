//! Self-checks that pit every analytic route against an independent one.
//!
//! Each suite returns named [`Check`]s with the measured discrepancy and the
//! tolerance it was held to. The BER suite also reports how far the printed
//! Alamouti closed form sits from the quadrature value.

use std::fmt;

use crate::channel::{cdf_fso, cdf_rf, FsoParams, Regime, RfParams, Scheme};
use crate::error::{Error, Result};
use crate::link::{ber_ac_closed, ber_closed_with, ber_numeric, end_to_end_cdf, outage, LinkConfig, PsiVectors};
use crate::quadrature::gauss_kronrod;
use crate::special::{ln_gamma, meijer_g, meijer_g_oracle, MeijerGSpec};

/// Required agreement between the residue series and the contour oracle.
pub const ORACLE_TOL: f64 = 1e-8;
/// Required agreement with elementary closed forms.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Required agreement between a CDF and its quadrature oracle.
pub const CDF_TOL: f64 = 1e-7;
/// Required agreement between a BER closed form and the quadrature.
pub const BER_TOL: f64 = 1e-6;
/// Average SNRs of the BER suite, dB.
pub const BER_GRID_DB: [f64; 7] = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Relative discrepancy; absolute when the reference is zero.
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check { name: name.into(), measured, tolerance, passed: measured <= tolerance }
    }

    fn failed(name: impl Into<String>, err: &Error) -> Self {
        Check { name: format!("{} ({err})", name.into()), measured: f64::INFINITY, tolerance: 0.0, passed: false }
    }

    fn relative(name: impl Into<String>, value: Result<f64>, reference: f64, tolerance: f64) -> Self {
        match value {
            Ok(v) => Check::new(name, rel_err(v, reference), tolerance),
            Err(e) => Check::failed(name, &e),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub name: &'static str,
    pub checks: Vec<Check>,
    /// Findings that are reported but not pass/fail.
    pub notes: Vec<String>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "== {} ({verdict}, {} checks) ==", self.name, self.checks.len())?;
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{mark} {:<48} err={:.3e} tol={:.0e}", c.name, c.measured, c.tolerance)?;
        }
        for n in &self.notes {
            writeln!(f, "note {n}")?;
        }
        Ok(())
    }
}

/// Deliberate corruption used to prove the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Adds this offset to the first entry of `psi2` in every closed form.
    Psi2Offset(f64),
}

fn rel_err(value: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        value.abs()
    } else {
        ((value - reference) / reference).abs()
    }
}

/// The two Meijer-G instances behind the link formulas, for one regime.
fn regime_instances(regime: Regime) -> Vec<(String, MeijerGSpec, Vec<f64>)> {
    let fso = FsoParams::preset(regime, 1.0).expect("preset is valid");
    let psi = PsiVectors::new(&fso);
    let r = regime.name();
    vec![
        (format!("{r} cdf kernel"), fso.cdf_kernel(), vec![0.01, 0.1, 1.0, 2.0]),
        (format!("{r} psi1"), psi.first(), vec![1e-4, 1e-3, 0.01, 0.1]),
        (format!("{r} psi3"), psi.third(), vec![1e-4, 1e-3, 0.01, 0.1]),
    ]
}

/// Residue series against the contour oracle, plus elementary identities.
pub fn special_suite() -> Suite {
    let mut checks = Vec::new();
    for regime in Regime::ALL {
        for (name, spec, zs) in regime_instances(regime) {
            for z in zs {
                let label = format!("G {name} z={z}");
                match meijer_g_oracle(&spec, z) {
                    Ok(o) => checks.push(Check::relative(label, meijer_g(&spec, z), o, ORACLE_TOL)),
                    Err(e) => checks.push(Check::failed(label, &e)),
                }
            }
        }
    }
    let exp = MeijerGSpec::new(1, 0, vec![], vec![0.0]).expect("valid orders");
    let rational = MeijerGSpec::new(1, 1, vec![0.0], vec![0.0]).expect("valid orders");
    let shifted = MeijerGSpec::new(1, 0, vec![], vec![1.5]).expect("valid orders");
    for z in [0.01, 0.1, 1.0, 10.0, 100.0] {
        checks.push(Check::relative(format!("G10 = e^-z z={z}"), meijer_g(&exp, z), (-z).exp(), IDENTITY_TOL));
        checks.push(Check::relative(
            format!("G11 = 1/(1+z) z={z}"),
            meijer_g(&rational, z),
            1.0 / (1.0 + z),
            IDENTITY_TOL,
        ));
        checks.push(Check::relative(
            format!("G10(b=1.5) = z^1.5 e^-z z={z}"),
            meijer_g(&shifted, z),
            z.powf(1.5) * (-z).exp(),
            IDENTITY_TOL,
        ));
    }
    Suite { name: "special", checks, notes: Vec::new() }
}

fn unit_gamma_density(shape: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let lg = ln_gamma(shape).expect("shape is positive").ln;
    (shape * shape.ln() + (shape - 1.0) * x.ln() - shape * x - lg).exp()
}

/// FSO CDF by direct integration over the turbulence factors.
///
/// With `I = X Y h`, `X`, `Y` unit-mean Gamma and `P(h < s) = min(s, 1)^{xi^2}`,
/// `F(gamma) = E[min(t / (X Y), 1)^{xi^2}]` where
/// `t = E[I] sqrt(gamma / gamma_bar)`.
pub fn fso_cdf_by_quadrature(gamma: f64, p: &FsoParams) -> Result<f64> {
    const UPPER: f64 = 60.0;
    const TOL: f64 = 1e-14;
    const PANELS: usize = 4000;
    if gamma <= 0.0 {
        return Ok(0.0);
    }
    let x2 = p.xi_squared();
    let t = p.mean_intensity() * (gamma / p.gamma_bar_fso).sqrt();
    let mut failure = None;
    let mut inner = |x: f64| -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let s = t / x;
        let fy = |y: f64| unit_gamma_density(p.beta, y);
        let split = s.min(UPPER);
        let below = gauss_kronrod(fy, 0.0, split, TOL, 1e-12, PANELS);
        let above = if s < UPPER {
            // y = s e^u; the weight e^{-xi^2 u} is negligible beyond u = 40 / xi^2
            let u_max = (40.0 / x2).min((UPPER / s).ln());
            gauss_kronrod(|u| fy(s * u.exp()) * s * (u * (1.0 - x2)).exp(), 0.0, u_max, TOL, 1e-12, PANELS)
        } else {
            Ok(crate::quadrature::QuadResult { value: 0.0, error: 0.0, evaluations: 0 })
        };
        match (below, above) {
            (Ok(b), Ok(a)) => unit_gamma_density(p.alpha, x) * (b.value + a.value),
            (Err(e), _) | (_, Err(e)) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let outer = gauss_kronrod(&mut inner, 0.0, UPPER, TOL, 1e-12, PANELS)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(outer.value),
    }
}

/// Analytic CDFs against direct integration of their defining densities.
pub fn cdf_suite() -> Suite {
    let mut checks = Vec::new();
    for regime in Regime::ALL {
        let p = FsoParams::preset(regime, 10.0).expect("preset is valid");
        for gamma in [0.5, 2.0, 10.0, 40.0] {
            let label = format!("F_FSO {} g={gamma}", regime.name());
            match fso_cdf_by_quadrature(gamma, &p) {
                Ok(reference) => checks.push(Check::relative(label, cdf_fso(gamma, &p), reference, CDF_TOL)),
                Err(e) => checks.push(Check::failed(label, &e)),
            }
        }
    }
    let g = 4.0;
    let density = |x: f64| (-x / g).exp() / g;
    for gamma in [0.1, 1.0, 4.0, 20.0] {
        // sum of two branches: convolution of the exponential densities
        let conv = gauss_kronrod(|x| density(x) * -(-(gamma - x) / g).exp_m1(), 0.0, gamma, 1e-16, 1e-13, 200);
        let ac = RfParams::new(g, Scheme::Alamouti).expect("valid");
        let label = format!("F_RF ac g={gamma}");
        match conv {
            Ok(r) => checks.push(Check::relative(label, cdf_rf(gamma, &ac), r.value, CDF_TOL)),
            Err(e) => checks.push(Check::failed(label, &e)),
        }
        // max of two branches: 2 f(x) F(x)
        let max = gauss_kronrod(|x| 2.0 * density(x) * -(-x / g).exp_m1(), 0.0, gamma, 1e-16, 1e-13, 200);
        let sel = RfParams::new(g, Scheme::AntennaSelection).expect("valid");
        let label = format!("F_RF as g={gamma}");
        match max {
            Ok(r) => checks.push(Check::relative(label, cdf_rf(gamma, &sel), r.value, CDF_TOL)),
            Err(e) => checks.push(Check::failed(label, &e)),
        }
    }
    for regime in Regime::ALL {
        for scheme in Scheme::ALL {
            let cfg = LinkConfig::symmetric(regime, scheme, 15.0, 10.0).expect("valid");
            let label = format!("P_out = F(g_th) {} {}", scheme.label(), regime.name());
            match end_to_end_cdf(cfg.gamma_th, &cfg) {
                Ok(f) => checks.push(Check::relative(label, outage(&cfg), f, IDENTITY_TOL)),
                Err(e) => checks.push(Check::failed(label, &e)),
            }
        }
    }
    Suite { name: "cdf", checks, notes: Vec::new() }
}

/// One row of the printed-formula discrepancy report.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    pub regime: Regime,
    pub gamma_bar_db: f64,
    pub printed: f64,
    pub corrected: f64,
    pub quadrature: f64,
}

impl Discrepancy {
    pub fn printed_error(&self) -> f64 {
        rel_err(self.printed, self.quadrature)
    }

    pub fn corrected_error(&self) -> f64 {
        rel_err(self.corrected, self.quadrature)
    }
}

/// Printed and corrected Alamouti closed forms next to the quadrature.
pub fn ber_discrepancy_report() -> Result<Vec<Discrepancy>> {
    let mut rows = Vec::new();
    for regime in Regime::ALL {
        for db in BER_GRID_DB {
            let cfg = LinkConfig::symmetric(regime, Scheme::Alamouti, db, 10.0)?;
            rows.push(Discrepancy {
                regime,
                gamma_bar_db: db,
                printed: ber_ac_closed(&cfg)?,
                corrected: crate::link::ber_ac_closed_corrected(&cfg)?,
                quadrature: ber_numeric(&cfg)?,
            });
        }
    }
    Ok(rows)
}

/// Closed forms against the quadrature over [`BER_GRID_DB`], both schemes and regimes.
pub fn ber_suite(fault: Fault) -> Suite {
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for regime in Regime::ALL {
        for scheme in Scheme::ALL {
            for db in BER_GRID_DB {
                let label = format!("BER {} {} {db} dB", scheme.label(), regime.name());
                let cfg = LinkConfig::symmetric(regime, scheme, db, 10.0).expect("valid");
                let mut psi = PsiVectors::new(&cfg.fso);
                if let Fault::Psi2Offset(d) = fault {
                    psi.psi2[0] += d;
                }
                match ber_numeric(&cfg) {
                    Ok(q) => checks.push(Check::relative(label, ber_closed_with(&cfg, &psi), q, BER_TOL)),
                    Err(e) => checks.push(Check::failed(label, &e)),
                }
            }
        }
    }
    match ber_discrepancy_report() {
        Ok(rows) => {
            let worst = rows.iter().map(Discrepancy::printed_error).fold(0.0, f64::max);
            if worst > BER_TOL {
                notes.push(format!(
                    "printed Alamouti form deviates from the quadrature by up to {worst:.2e}; \
                     psi3 coefficient 1/(2 g s1^2) should be 1/(g s1^2), quadrature is authoritative"
                ));
                for r in &rows {
                    notes.push(format!(
                        "  {:<8} {:>4} dB  printed={:.10e} corrected={:.10e} quadrature={:.10e} printed_err={:.2e}",
                        r.regime.name(),
                        r.gamma_bar_db,
                        r.printed,
                        r.corrected,
                        r.quadrature,
                        r.printed_error()
                    ));
                }
            }
        }
        Err(e) => checks.push(Check::failed("printed-form discrepancy report", &e)),
    }
    Suite { name: "ber", checks, notes }
}

/// Which suites to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    Special,
    Cdf,
    Ber,
    All,
}

impl std::str::FromStr for Selection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "special" => Ok(Selection::Special),
            "cdf" => Ok(Selection::Cdf),
            "ber" => Ok(Selection::Ber),
            "all" => Ok(Selection::All),
            other => Err(Error::Parameter(format!("unknown suite '{other}' (special, cdf, ber, all)"))),
        }
    }
}

pub fn run(selection: Selection, fault: Fault) -> Vec<Suite> {
    match selection {
        Selection::Special => vec![special_suite()],
        Selection::Cdf => vec![cdf_suite()],
        Selection::Ber => vec![ber_suite(fault)],
        Selection::All => vec![special_suite(), cdf_suite(), ber_suite(fault)],
    }
}
