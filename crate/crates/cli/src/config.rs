//! Run configuration: a flat `key = value` file overlaid by command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use radshock::gas::{build_shock, GasParams, RadiationParams};
use radshock::phaseplane::SolverOptions;
use radshock::reduction::{reduce_hamer, reduce_radhydro};
use radshock::{Error, ErrorKind, ReducedSystem};
use serde::Serialize;

/// Failure surfaced to the user, with a stable code and an exit status.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub code: String,
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn validation(code: &str, message: impl Into<String>) -> Self {
        Self {
            code: code.into(),
            kind: ErrorKind::Validation,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            code: "IoError".into(),
            kind: ErrorKind::Numerical,
            message: format!("{}: {err}", path.display()),
        }
    }

    /// 2 validation, 3 numerical failure, 4 unsupported regime.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Validation => 2,
            ErrorKind::Numerical => 3,
            ErrorKind::Unsupported => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: e.code().into(),
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

/// Canonical keys, in header order.
pub const KEYS: &[&str] = &[
    "model",
    "gamma",
    "R",
    "rho-minus",
    "Uc",
    "delta",
    "c",
    "u-minus",
    "u-plus",
    "sigma",
    "sigma-s",
    "tau",
    "alpha",
    "tol-int",
    "tol-match",
    "tol-connect",
    "zeta-max",
    "format",
    "workers",
];

const RADHYDRO_ONLY: &[&str] = &["gamma", "R", "rho-minus", "Uc", "delta", "c", "sigma-s", "tau"];
const HAMER_ONLY: &[&str] = &["u-minus", "u-plus"];

/// Maps spellings such as `U_c`, `rho_minus` or `--tol-int` to the canonical key.
pub fn canonical_key(raw: &str) -> Option<&'static str> {
    let k = raw.trim().trim_start_matches("--").replace('_', "-").to_ascii_lowercase();
    let k = if k == "u-c" { "uc".to_string() } else { k };
    KEYS.iter().copied().find(|c| c.to_ascii_lowercase() == k)
}

/// Explicitly given values keyed by canonical key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides(pub BTreeMap<&'static str, String>);

impl Overrides {
    pub fn set(&mut self, raw_key: &str, value: impl Into<String>) -> Result<(), CliError> {
        let key = canonical_key(raw_key)
            .ok_or_else(|| CliError::validation("UnknownKey", format!("unknown configuration key `{raw_key}`")))?;
        self.0.insert(key, value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// Later values win.
    pub fn overlay(mut self, top: &Overrides) -> Self {
        for (k, v) in &top.0 {
            self.0.insert(k, v.clone());
        }
        self
    }

    pub fn parse_file_text(text: &str) -> Result<Self, CliError> {
        let mut out = Self::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::validation("ConfigSyntax", format!("line {}: expected `key = value`", no + 1))
            })?;
            out.set(k, v.trim())?;
        }
        Ok(out)
    }

    pub fn read_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError {
            kind: ErrorKind::Validation,
            ..CliError::io(path, e)
        })?;
        Self::parse_file_text(&text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelChoice {
    Radhydro,
    Hamer,
}

impl ModelChoice {
    pub fn name(self) -> &'static str {
        match self {
            ModelChoice::Radhydro => "radhydro",
            ModelChoice::Hamer => "hamer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: ModelChoice,
    pub gamma: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub rho_minus: f64,
    #[serde(rename = "U_c")]
    pub u_c: Option<f64>,
    pub delta: Option<f64>,
    pub c: f64,
    pub u_minus: Option<f64>,
    pub u_plus: Option<f64>,
    pub sigma: f64,
    pub sigma_s: f64,
    pub tau: f64,
    pub alpha: f64,
    pub tol_int: f64,
    pub tol_match: f64,
    pub tol_connect: f64,
    pub zeta_max: f64,
    pub format: Format,
    pub workers: Option<usize>,
}

fn num(key: &str, v: &str) -> Result<f64, CliError> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| CliError::validation("InvalidNumber", format!("{key}: cannot parse `{v}` as a number")))?;
    if x.is_nan() {
        return Err(CliError::validation("InvalidNumber", format!("{key}: NaN is not allowed")));
    }
    Ok(x)
}

/// `format` and `workers`, which do not depend on the model.
pub fn output_settings(o: &Overrides) -> Result<(Format, Option<usize>), CliError> {
    let format = match o.get("format").unwrap_or("csv").to_ascii_lowercase().as_str() {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => {
            return Err(CliError::validation(
                "InvalidFormat",
                format!("format must be csv or json (got `{other}`)"),
            ))
        }
    };
    let workers = match o.get("workers") {
        None => None,
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => {
                return Err(CliError::validation(
                    "InvalidNumber",
                    format!("workers must be a positive integer (got `{v}`)"),
                ))
            }
        },
    };
    Ok((format, workers))
}

impl RunConfig {
    /// Builds the configuration from explicit values; unset keys take the
    /// defaults of the numerical experiments (γ = 5/3, R = 8.31, ρ₋ = 0.1,
    /// σ = σ_s = τ = 1, α = 2).
    pub fn from_overrides(o: &Overrides) -> Result<Self, CliError> {
        let model = match o.get("model").unwrap_or("radhydro").to_ascii_lowercase().as_str() {
            "radhydro" => ModelChoice::Radhydro,
            "hamer" => ModelChoice::Hamer,
            other => {
                return Err(CliError::validation(
                    "InvalidModel",
                    format!("model must be radhydro or hamer (got `{other}`)"),
                ))
            }
        };
        let foreign = match model {
            ModelChoice::Radhydro => HAMER_ONLY,
            ModelChoice::Hamer => RADHYDRO_ONLY,
        };
        if let Some(k) = foreign.iter().find(|k| o.get(k).is_some()) {
            return Err(CliError::validation(
                "ConflictingParameters",
                format!("`{k}` does not apply to model {}", model.name()),
            ));
        }
        let get = |k: &str, default: f64| o.get(k).map_or(Ok(default), |v| num(k, v));
        let opt = |k: &str| o.get(k).map(|v| num(k, v)).transpose();
        let (format, workers) = output_settings(o)?;
        let defaults = SolverOptions::default();
        let cfg = Self {
            model,
            gamma: get("gamma", 5.0 / 3.0)?,
            r: get("R", 8.31)?,
            rho_minus: get("rho-minus", 0.1)?,
            u_c: opt("Uc")?,
            delta: opt("delta")?,
            c: get("c", 0.0)?,
            u_minus: opt("u-minus")?,
            u_plus: opt("u-plus")?,
            sigma: get("sigma", 1.0)?,
            sigma_s: get("sigma-s", 1.0)?,
            tau: get("tau", 1.0)?,
            alpha: get("alpha", 2.0)?,
            tol_int: get("tol-int", defaults.tol_int)?,
            tol_match: get("tol-match", defaults.tol_match)?,
            tol_connect: get("tol-connect", defaults.tol_connect)?,
            zeta_max: get("zeta-max", defaults.zeta_max)?,
            format,
            workers,
        };
        let missing: &[(&str, Option<f64>)] = match model {
            ModelChoice::Radhydro => &[("Uc", cfg.u_c), ("delta", cfg.delta)],
            ModelChoice::Hamer => &[("u-minus", cfg.u_minus), ("u-plus", cfg.u_plus)],
        };
        if let Some((k, _)) = missing.iter().find(|(_, v)| v.is_none()) {
            return Err(CliError::validation(
                "MissingParameter",
                format!("model {} requires `{k}`", model.name()),
            ));
        }
        cfg.solver_options().validate()?;
        Ok(cfg)
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            tol_int: self.tol_int,
            tol_match: self.tol_match,
            tol_connect: self.tol_connect,
            zeta_max: self.zeta_max,
            ..SolverOptions::default()
        }
    }

    /// Builds and validates the reduced system; no integration is performed.
    pub fn system(&self) -> Result<ReducedSystem, CliError> {
        match self.model {
            ModelChoice::Radhydro => {
                let gas = GasParams::new(self.gamma, self.r)?;
                let shock = build_shock(
                    gas,
                    self.rho_minus,
                    self.u_c.unwrap_or(f64::NAN),
                    self.delta.unwrap_or(f64::NAN),
                    self.c,
                )?;
                let rad = RadiationParams::new(self.sigma, self.sigma_s, self.tau, self.alpha)?;
                Ok(reduce_radhydro(shock, rad)?)
            }
            ModelChoice::Hamer => {
                if !(self.alpha >= 1.0 && self.alpha.fract() == 0.0 && self.alpha <= f64::from(u32::MAX)) {
                    return Err(CliError::validation(
                        "InvalidParameter",
                        format!("the Hamer model needs a positive integer alpha (got {})", self.alpha),
                    ));
                }
                Ok(reduce_hamer(
                    self.u_minus.unwrap_or(f64::NAN),
                    self.u_plus.unwrap_or(f64::NAN),
                    self.sigma,
                    self.alpha as u32,
                )?)
            }
        }
    }

    /// `key = value` lines for every key that applies to the model.
    pub fn header_lines(&self) -> Vec<String> {
        let f = |x: f64| format!("{x}");
        let mut out = vec![format!("model = {}", self.model.name())];
        let mut push = |k: &str, v: String| out.push(format!("{k} = {v}"));
        match self.model {
            ModelChoice::Radhydro => {
                push("gamma", f(self.gamma));
                push("R", f(self.r));
                push("rho-minus", f(self.rho_minus));
                push("Uc", f(self.u_c.unwrap_or(f64::NAN)));
                push("delta", f(self.delta.unwrap_or(f64::NAN)));
                push("c", f(self.c));
                push("sigma", f(self.sigma));
                push("sigma-s", f(self.sigma_s));
                push("tau", f(self.tau));
            }
            ModelChoice::Hamer => {
                push("u-minus", f(self.u_minus.unwrap_or(f64::NAN)));
                push("u-plus", f(self.u_plus.unwrap_or(f64::NAN)));
                push("sigma", f(self.sigma));
            }
        }
        push("alpha", f(self.alpha));
        push("tol-int", f(self.tol_int));
        push("tol-match", f(self.tol_match));
        push("tol-connect", f(self.tol_connect));
        push("zeta-max", f(self.zeta_max));
        out
    }
}

/// Loads `--config FILE` (if any) and overlays the flags.
pub fn load(config_file: Option<&PathBuf>, flags: &Overrides) -> Result<RunConfig, CliError> {
    let base = match config_file {
        Some(p) => Overrides::read_file(p)?,
        None => Overrides::default(),
    };
    RunConfig::from_overrides(&base.overlay(flags))
}
