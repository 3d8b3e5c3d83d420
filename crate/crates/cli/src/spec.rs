//! Resolution of sweep parameters from defaults, a config file and flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use fsorf::channel::{FsoParams, Regime, Scheme};

use crate::CliError;

pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const PRECISE_SAMPLES: u64 = 100_000_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_GAMMA_TH_DB: f64 = 10.0;

/// Keys accepted in a config file; they mirror [`SweepSpec`] field names.
pub const CONFIG_KEYS: [&str; 10] =
    ["scheme", "regime", "alpha", "beta", "xi", "snr_db", "gamma_th_db", "n_samples", "seed", "outputs"];

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// Inclusive dB grid `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub const DEFAULT: Grid = Grid { start: 0.0, stop: 30.0, step: 2.0 };

    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, CliError> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return usage("snr_db bounds must be finite");
        }
        if start > stop {
            return usage(format!("snr_db start {start} exceeds stop {stop}"));
        }
        if step <= 0.0 {
            return usage(format!("snr_db step must be positive, got {step}"));
        }
        Ok(Grid { start, stop, step })
    }

    /// Grid points, rounded to 1e-9 dB so decimal steps print cleanly.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| ((self.start + k as f64 * self.step) * 1e9).round() / 1e9).collect()
    }
}

impl std::str::FromStr for Grid {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| t.parse::<f64>().map_err(|_| CliError::Usage(format!("bad number '{t}' in snr_db '{s}'")));
        match parts.as_slice() {
            [single] => {
                let v = num(single)?;
                Grid::new(v, v, 1.0)
            }
            [a, b, c] => Grid::new(num(a)?, num(b)?, num(c)?),
            _ => usage(format!("snr_db must be start:stop:step, got '{s}'")),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

/// Turbulence condition of one sweep curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeSpec {
    pub name: &'static str,
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
}

impl RegimeSpec {
    pub fn preset(regime: Regime) -> Self {
        let (alpha, beta, xi) = regime.shape();
        RegimeSpec { name: regime.name(), alpha, beta, xi }
    }

    pub fn fso(&self, gamma_bar: f64) -> Result<FsoParams, CliError> {
        FsoParams::new(self.alpha, self.beta, self.xi, gamma_bar).map_err(|e| CliError::Usage(e.to_string()))
    }
}

impl fmt::Display for RegimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(alpha={},beta={},xi={})", self.name, self.alpha, self.beta, self.xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outputs {
    Analytic,
    Mc,
    Both,
}

impl Outputs {
    pub fn analytic(self) -> bool {
        self != Outputs::Mc
    }

    pub fn mc(self) -> bool {
        self != Outputs::Analytic
    }

    pub fn name(self) -> &'static str {
        match self {
            Outputs::Analytic => "analytic",
            Outputs::Mc => "mc",
            Outputs::Both => "both",
        }
    }
}

impl std::str::FromStr for Outputs {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "analytic" => Ok(Outputs::Analytic),
            "mc" => Ok(Outputs::Mc),
            "both" => Ok(Outputs::Both),
            _ => usage(format!("outputs must be analytic, mc or both, got '{s}'")),
        }
    }
}

/// Which probabilities a command reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Outage,
    Ber,
    Both,
}

impl Quantity {
    pub fn outage(self) -> bool {
        self != Quantity::Ber
    }

    pub fn ber(self) -> bool {
        self != Quantity::Outage
    }
}

/// Fully resolved sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub schemes: Vec<Scheme>,
    pub regimes: Vec<RegimeSpec>,
    pub snr_db: Grid,
    pub gamma_th_db: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub outputs: Outputs,
    pub quantity: Quantity,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            schemes: Scheme::ALL.to_vec(),
            regimes: Regime::ALL.iter().map(|&r| RegimeSpec::preset(r)).collect(),
            snr_db: Grid::DEFAULT,
            gamma_th_db: DEFAULT_GAMMA_TH_DB,
            n_samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            outputs: Outputs::Both,
            quantity: Quantity::Both,
        }
    }
}

impl SweepSpec {
    /// One line listing every resolved parameter.
    pub fn describe(&self) -> String {
        let schemes: Vec<&str> = self.schemes.iter().map(|s| s.label()).collect();
        let regimes: Vec<String> = self.regimes.iter().map(ToString::to_string).collect();
        format!(
            "seed={} n_samples={} outputs={} scheme={} regime={} snr_db={} gamma_th_db={} kappa=xi^2/(1+xi^2) eta=1 \
             gamma_bar_rf=gamma_bar_fso",
            self.seed,
            self.n_samples,
            self.outputs.name(),
            schemes.join(","),
            regimes.join(";"),
            self.snr_db,
            self.gamma_th_db
        )
    }
}

/// Raw `key -> value` settings before validation.
pub type Settings = BTreeMap<String, String>;

/// Reads a flat `key = value` file or a JSON object with the same keys.
pub fn read_config(path: &Path) -> Result<Settings, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<Settings, CliError> {
    let mut out = Settings::new();
    if text.trim_start().starts_with('{') {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config is not valid JSON: {e}")))?;
        let object = value.as_object().ok_or_else(|| CliError::Usage("config must be a JSON object".into()))?;
        for (key, v) in object {
            let text = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::Object(o) if key == "snr_db" => {
                    let part = |k: &str| o.get(k).and_then(|x| x.as_f64());
                    match (part("start"), part("stop"), part("step")) {
                        (Some(a), Some(b), Some(c)) => format!("{a}:{b}:{c}"),
                        _ => return usage("snr_db object needs numeric start, stop and step"),
                    }
                }
                other => return usage(format!("unsupported value for '{key}': {other}")),
            };
            out.insert(key.clone(), text);
        }
    } else {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return usage(format!("config line {}: expected key = value", n + 1));
            };
            out.insert(k.trim().to_string(), v.trim().trim_matches('"').to_string());
        }
    }
    if let Some(bad) = out.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
        return usage(format!("unknown config key '{bad}' (expected one of {})", CONFIG_KEYS.join(", ")));
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Usage(format!("invalid value '{v}' for {key}")))
}

pub fn parse_schemes(v: &str) -> Result<Vec<Scheme>, CliError> {
    match v {
        "both" => Ok(Scheme::ALL.to_vec()),
        other => other.parse::<Scheme>().map(|s| vec![s]).map_err(|e| CliError::Usage(e.to_string())),
    }
}

fn parse_regimes(v: &str) -> Result<Vec<Regime>, CliError> {
    match v {
        "both" => Ok(Regime::ALL.to_vec()),
        other => other.parse::<Regime>().map(|r| vec![r]).map_err(|e| CliError::Usage(e.to_string())),
    }
}

/// Builds a spec from merged settings; later layers have already overwritten
/// earlier ones.
pub fn resolve(settings: &Settings, base: SweepSpec) -> Result<SweepSpec, CliError> {
    let mut spec = base;
    let get = |k: &str| settings.get(k).map(String::as_str);
    if let Some(v) = get("scheme") {
        spec.schemes = parse_schemes(v)?;
    }
    let presets = match get("regime") {
        Some(v) => Some(parse_regimes(v)?),
        None => None,
    };
    let custom: Vec<(&str, Option<f64>)> = ["alpha", "beta", "xi"]
        .into_iter()
        .map(|k| get(k).map(|v| parse_num::<f64>(k, v)).transpose().map(|x| (k, x)))
        .collect::<Result<_, _>>()?;
    if custom.iter().any(|(_, v)| v.is_some()) {
        // custom shape: unset fields come from the named regime, else moderate
        let base_regime = match presets.as_deref() {
            None => Regime::Moderate,
            Some([one]) => *one,
            Some(_) => return usage("custom alpha/beta/xi need a single base regime"),
        };
        let mut r = RegimeSpec::preset(base_regime);
        r.name = "custom";
        for (k, v) in custom {
            if let Some(v) = v {
                match k {
                    "alpha" => r.alpha = v,
                    "beta" => r.beta = v,
                    _ => r.xi = v,
                }
            }
        }
        r.fso(1.0)?;
        spec.regimes = vec![r];
    } else if let Some(p) = presets {
        spec.regimes = p.into_iter().map(RegimeSpec::preset).collect();
    }
    if let Some(v) = get("snr_db") {
        spec.snr_db = v.parse()?;
    }
    if let Some(v) = get("gamma_th_db") {
        spec.gamma_th_db = parse_num("gamma_th_db", v)?;
        if !spec.gamma_th_db.is_finite() {
            return usage("gamma_th_db must be finite");
        }
    }
    if let Some(v) = get("n_samples") {
        spec.n_samples = parse_num("n_samples", v)?;
    }
    if let Some(v) = get("seed") {
        spec.seed = parse_num("seed", v)?;
    }
    if let Some(v) = get("outputs") {
        spec.outputs = v.parse()?;
    }
    if spec.outputs.mc() && spec.n_samples < fsorf::sim::MIN_SAMPLES {
        return usage(format!("n_samples must be at least {}", fsorf::sim::MIN_SAMPLES));
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        assert_eq!(Grid::DEFAULT.points().len(), 16);
        assert_eq!("10:10:1".parse::<Grid>().unwrap().points(), vec![10.0]);
        assert_eq!("0:1:0.1".parse::<Grid>().unwrap().points().len(), 11);
        assert_eq!("0:1:0.1".parse::<Grid>().unwrap().points()[3], 0.3);
        assert!("5:0:1".parse::<Grid>().is_err());
        assert!("0:5:0".parse::<Grid>().is_err());
        assert!("0:5".parse::<Grid>().is_err());
    }

    #[test]
    fn config_formats_agree() {
        let flat = parse_config("# comment\nscheme = as\nsnr_db = 0:10:5\nseed=7\n").unwrap();
        let json = parse_config(r#"{"scheme": "as", "snr_db": {"start": 0, "stop": 10, "step": 5}, "seed": 7}"#).unwrap();
        let a = resolve(&flat, SweepSpec::default()).unwrap();
        let b = resolve(&json, SweepSpec::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.schemes, vec![Scheme::AntennaSelection]);
        assert_eq!(a.seed, 7);
        assert!(parse_config("samples = 10").is_err());
        assert!(parse_config("{\"scheme\": [1]}").is_err());
    }

    #[test]
    fn custom_regime() {
        let mut s = Settings::new();
        s.insert("regime".into(), "strong".into());
        s.insert("xi".into(), "1.5".into());
        let spec = resolve(&s, SweepSpec::default()).unwrap();
        assert_eq!(spec.regimes, vec![RegimeSpec { name: "custom", alpha: 4.2, beta: 1.4, xi: 1.5 }]);
        s.insert("alpha".into(), "-1".into());
        assert!(resolve(&s, SweepSpec::default()).is_err());
    }
}
