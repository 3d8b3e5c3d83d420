//! Command-line front end: parameter sweeps, figure data and validation suites.
//!
//! Exit statuses are 0 on success, 1 when a computation or validation fails
//! and 2 on a usage error.

pub mod spec;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use fsorf::channel::{Regime, Scheme};
use fsorf::validate::{self, Fault, Selection};

use spec::{Quantity, RegimeSpec, Settings, SweepSpec, PRECISE_SAMPLES};
use table::Format;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
    /// A validation suite failed; the report has already been written.
    Failed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) | CliError::Failed => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
            CliError::Failed => write!(f, "validation failed"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fsorf", version, about = "Outage and DPSK BER of a dual-hop RF/FSO relay link")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic and Monte Carlo outage and BER over an SNR grid.
    Sweep(SweepArgs),
    /// BER of both schemes in both regimes.
    Fig2(CommonArgs),
    /// Outage of both schemes in both regimes.
    Fig3(CommonArgs),
    /// Outage of antenna selection in moderate turbulence.
    Fig4(CommonArgs),
    /// Run the self-check suites.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// ac, as or both.
    #[arg(long)]
    pub scheme: Option<String>,
    /// moderate, strong or both.
    #[arg(long)]
    pub regime: Option<String>,
    /// Large-scale turbulence shape; makes the regime custom.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Small-scale turbulence shape; makes the regime custom.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Pointing-error ratio; makes the regime custom.
    #[arg(long)]
    pub xi: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Outage threshold in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_th_db: Option<f64>,
    /// Average SNR grid, start:stop:step in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<String>,
    /// Monte Carlo samples per grid point.
    #[arg(long, conflicts_with = "precise")]
    pub samples: Option<u64>,
    /// Use 10^8 Monte Carlo samples per grid point.
    #[arg(long)]
    pub precise: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// analytic, mc or both.
    #[arg(long)]
    pub outputs: Option<String>,
    /// key = value or JSON file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// special, cdf, ber or all.
    #[arg(default_value = "all")]
    pub suite: String,
    #[arg(long, hide = true)]
    pub inject_fault: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn settings(common: &CommonArgs, extra: &[(&str, Option<String>)]) -> Result<Settings, CliError> {
    let mut s = match &common.config {
        Some(path) => spec::read_config(path)?,
        None => Settings::new(),
    };
    let flags = [
        ("gamma_th_db", common.gamma_th_db.map(|v| v.to_string())),
        ("snr_db", common.snr_db.clone()),
        ("n_samples", common.samples.map(|v| v.to_string())),
        ("seed", common.seed.map(|v| v.to_string())),
        ("outputs", common.outputs.clone()),
    ];
    for (k, v) in flags.into_iter().chain(extra.iter().map(|(k, v)| (*k, v.clone()))) {
        if let Some(v) = v {
            s.insert(k.to_string(), v);
        }
    }
    if common.precise {
        s.insert("n_samples".into(), PRECISE_SAMPLES.to_string());
    }
    Ok(s)
}

/// Command-level overrides applied after the config file and flags.
struct Fixed {
    name: &'static str,
    schemes: Option<Vec<Scheme>>,
    regimes: Option<Vec<Regime>>,
    quantity: Quantity,
    notes: &'static [&'static str],
}

fn sweep_spec(common: &CommonArgs, extra: &[(&str, Option<String>)], fixed: &Fixed) -> Result<SweepSpec, CliError> {
    let mut s = settings(common, extra)?;
    if fixed.schemes.is_some() || fixed.regimes.is_some() {
        for key in ["scheme", "regime", "alpha", "beta", "xi"] {
            if s.remove(key).is_some() {
                return Err(CliError::Usage(format!("{} fixes scheme and regime; '{key}' is not accepted", fixed.name)));
            }
        }
    }
    let mut spec = spec::resolve(&s, SweepSpec { quantity: fixed.quantity, ..SweepSpec::default() })?;
    if let Some(schemes) = &fixed.schemes {
        spec.schemes = schemes.clone();
    }
    if let Some(regimes) = &fixed.regimes {
        spec.regimes = regimes.iter().map(|&r| RegimeSpec::preset(r)).collect();
    }
    Ok(spec)
}

fn emit(path: Option<&PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Runtime(format!("cannot write output: {e}"));
    match path {
        Some(p) => std::fs::write(p, text).map_err(io),
        None => stdout.write_all(text.as_bytes()).map_err(io),
    }
}

fn run_table(common: &CommonArgs, extra: &[(&str, Option<String>)], fixed: Fixed, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let spec = sweep_spec(common, extra, &fixed)?;
    let mut warnings = Vec::new();
    let rows = table::compute(&spec, &mut warnings)?;
    let mut comments = vec![format!("fsorf {} command={} {}", env!("CARGO_PKG_VERSION"), fixed.name, spec.describe())];
    comments.extend(fixed.notes.iter().map(|n| n.to_string()));
    let text = table::render(&rows, common.format, &comments)?;
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    emit(common.out.as_ref(), &text, out)
}

fn run_validate(args: &ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let selection: Selection = args.suite.parse().map_err(|e: fsorf::Error| CliError::Usage(e.to_string()))?;
    let fault = args.inject_fault.map_or(Fault::None, Fault::Psi2Offset);
    let suites = validate::run(selection, fault);
    let report: String = suites.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
    emit(args.out.as_ref(), &report, out)?;
    let first = suites.iter().find_map(|s| s.failures().next().map(|c| (s.name, c)));
    match first {
        None => Ok(()),
        Some((suite, check)) => {
            let _ = writeln!(
                err,
                "first failing check: {suite}: {} (err {:.3e} > tol {:.0e})",
                check.name, check.measured, check.tolerance
            );
            Err(CliError::Failed)
        }
    }
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Sweep(a) => {
            let extra = [
                ("scheme", a.scheme.clone()),
                ("regime", a.regime.clone()),
                ("alpha", a.alpha.map(|v| v.to_string())),
                ("beta", a.beta.map(|v| v.to_string())),
                ("xi", a.xi.map(|v| v.to_string())),
            ];
            let fixed = Fixed { name: "sweep", schemes: None, regimes: None, quantity: Quantity::Both, notes: &[] };
            run_table(&a.common, &extra, fixed, out, err)
        }
        Command::Fig2(c) => {
            let fixed = Fixed {
                name: "fig2",
                schemes: Some(Scheme::ALL.to_vec()),
                regimes: Some(Regime::ALL.to_vec()),
                quantity: Quantity::Ber,
                notes: &[],
            };
            run_table(c, &[], fixed, out, err)
        }
        Command::Fig3(c) => {
            let fixed = Fixed {
                name: "fig3",
                schemes: Some(Scheme::ALL.to_vec()),
                regimes: Some(Regime::ALL.to_vec()),
                quantity: Quantity::Outage,
                notes: &[],
            };
            run_table(c, &[], fixed, out, err)
        }
        Command::Fig4(c) => {
            let fixed = Fixed {
                name: "fig4",
                schemes: Some(vec![Scheme::AntennaSelection]),
                regimes: Some(vec![Regime::Moderate]),
                quantity: Quantity::Outage,
                notes: &["comparison curves for other relaying schemes are out of scope and not emitted"],
            };
            run_table(c, &[], fixed, out, err)
        }
        Command::Validate(a) => run_validate(a, out, err),
    }
}

/// Parses `args` and runs the command, returning the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(e, CliError::Failed) {
                let _ = writeln!(err, "{e}");
            }
            e.exit_code()
        }
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
