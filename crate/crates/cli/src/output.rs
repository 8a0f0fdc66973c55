//! CSV and JSON emission with fixed float formatting.

use std::fmt::Write as _;

use radshock::phaseplane::Connection;
use radshock::profile::{JumpAdmissibility, JumpRecord, ProfileSample};
use radshock::{RegimeReport, ResidualReport, ShockProfile, SpikeInfo};
use serde::Serialize;

use crate::config::RunConfig;

pub const PROFILE_COLUMNS: [&str; 8] = ["xi", "x", "y", "rho", "u", "theta", "n", "m"];

/// 17 significant digits: every `f64` survives a text round trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn profile_csv(cfg: &RunConfig, profile: &ShockProfile) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# radshock {}", env!("CARGO_PKG_VERSION"));
    for line in cfg.header_lines() {
        let _ = writeln!(s, "# {line}");
    }
    let _ = writeln!(s, "{}", PROFILE_COLUMNS.join(","));
    for p in &profile.samples {
        let row = sample_row(p).map(fmt_f64);
        let _ = writeln!(s, "{}", row.join(","));
    }
    s
}

pub fn sample_row(p: &ProfileSample) -> [f64; 8] {
    let st = &p.state;
    [p.xi, p.x, p.y, st.rho, st.u, st.theta, st.n, st.m]
}

/// Everything `solve` reports besides the samples.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub config: RunConfig,
    pub regime: RegimeReport,
    pub connection: Connection,
    pub jump: Option<JumpRecord>,
    pub jump_admissibility: Option<JumpAdmissibility>,
    pub spike: Option<SpikeInfo>,
    pub residuals: ResidualReport,
    /// `max_ode_residual` below the calibrated threshold of `1e-5`
    pub residual_ok: bool,
    pub samples_left: usize,
    pub samples_right: usize,
}

/// `--format json`: the summary plus every sample.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileDocument<'a> {
    #[serde(flatten)]
    pub summary: &'a Summary,
    pub columns: [&'static str; 8],
    pub samples: Vec<[f64; 8]>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn profile_json(summary: &Summary, profile: &ShockProfile) -> String {
    to_json(&ProfileDocument {
        summary,
        columns: PROFILE_COLUMNS,
        samples: profile.samples.iter().map(sample_row).collect(),
    })
}

/// Empty for absent or non-finite values.
pub fn opt_cell(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => fmt_f64(v),
        _ => String::new(),
    }
}
