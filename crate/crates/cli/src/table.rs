//! Sweep rows and their CSV/JSON rendering.

use serde::Serialize;

use fsorf::channel::RfParams;
use fsorf::link::{ber_closed, outage, LinkConfig};
use fsorf::sim::{mc_link, SimConfig};
use fsorf::units::db_to_linear;

use crate::spec::SweepSpec;
use crate::CliError;

pub const HEADER: [&str; 10] = [
    "scheme",
    "regime",
    "gamma_avg_db",
    "pout_analytic",
    "pout_mc",
    "pout_ci95",
    "ber_analytic",
    "ber_mc",
    "ber_ci95",
    "n_samples",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub scheme: &'static str,
    pub regime: &'static str,
    pub gamma_avg_db: f64,
    pub pout_analytic: Option<f64>,
    pub pout_mc: Option<f64>,
    pub pout_ci95: Option<f64>,
    pub ber_analytic: Option<f64>,
    pub ber_mc: Option<f64>,
    pub ber_ci95: Option<f64>,
    pub n_samples: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn runtime(e: fsorf::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Evaluates every `(regime, scheme, grid point)` of `spec`, in that order.
///
/// Every grid point reuses `spec.seed`, so neighbouring Monte Carlo points
/// share random numbers and the curves stay smooth.
pub fn compute(spec: &SweepSpec, warnings: &mut Vec<String>) -> Result<Vec<SweepRow>, CliError> {
    let mut rows = Vec::new();
    for regime in &spec.regimes {
        for &scheme in &spec.schemes {
            for db in spec.snr_db.points() {
                let g = db_to_linear(db);
                let fso = regime.fso(g)?;
                let rf = RfParams::new(g, scheme).map_err(runtime)?;
                let cfg = LinkConfig::new(fso, rf, db_to_linear(spec.gamma_th_db)).map_err(runtime)?;
                let q = spec.quantity;
                let mut row = SweepRow {
                    scheme: scheme.label(),
                    regime: regime.name,
                    gamma_avg_db: db,
                    pout_analytic: None,
                    pout_mc: None,
                    pout_ci95: None,
                    ber_analytic: None,
                    ber_mc: None,
                    ber_ci95: None,
                    n_samples: None,
                };
                if spec.outputs.analytic() {
                    row.pout_analytic = q.outage().then(|| outage(&cfg)).transpose().map_err(runtime)?;
                    row.ber_analytic = q.ber().then(|| ber_closed(&cfg)).transpose().map_err(runtime)?;
                }
                if spec.outputs.mc() {
                    let est = mc_link(&cfg, &SimConfig::new(spec.n_samples, spec.seed)).map_err(runtime)?;
                    if q.outage() {
                        row.pout_mc = Some(est.outage.estimate);
                        row.pout_ci95 = Some(est.outage.ci95_half_width);
                        if est.outage.undersampled {
                            warnings.push(format!(
                                "{} {} {db} dB: fewer than {} outage events, interval is unreliable",
                                row.scheme,
                                row.regime,
                                fsorf::sim::MIN_EVENTS
                            ));
                        }
                    }
                    if q.ber() {
                        row.ber_mc = Some(est.ber.estimate);
                        row.ber_ci95 = Some(est.ber.ci95_half_width);
                    }
                    row.n_samples = Some(spec.n_samples);
                }
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// `{:.10e}` below 1e-3, `{:.10}` otherwise; exact zero stays fixed-point.
pub fn format_value(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-3 {
        format!("{x:.10e}")
    } else {
        format!("{x:.10}")
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(format_value).unwrap_or_default()
}

pub fn render(rows: &[SweepRow], format: Format, comments: &[String]) -> Result<String, CliError> {
    let io = |e: &dyn std::fmt::Display| CliError::Runtime(format!("cannot render output: {e}"));
    match format {
        Format::Csv => {
            let mut out = String::new();
            for c in comments {
                out.push_str(&format!("# {c}\n"));
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(HEADER).map_err(|e| io(&e))?;
            for r in rows {
                w.write_record([
                    r.scheme.to_string(),
                    r.regime.to_string(),
                    r.gamma_avg_db.to_string(),
                    cell(r.pout_analytic),
                    cell(r.pout_mc),
                    cell(r.pout_ci95),
                    cell(r.ber_analytic),
                    cell(r.ber_mc),
                    cell(r.ber_ci95),
                    r.n_samples.map(|n| n.to_string()).unwrap_or_default(),
                ])
                .map_err(|e| io(&e))?;
            }
            let bytes = w.into_inner().map_err(|e| io(&e))?;
            out.push_str(&String::from_utf8(bytes).map_err(|e| io(&e))?);
            Ok(out)
        }
        Format::Json => {
            let mut out = String::new();
            for c in comments {
                out.push_str(&format!("// {c}\n"));
            }
            out.push_str(&serde_json::to_string_pretty(rows).map_err(|e| io(&e))?);
            out.push('\n');
            Ok(out)
        }
    }
}
