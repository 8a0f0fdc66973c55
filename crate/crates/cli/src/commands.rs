use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use radshock::phaseplane::{solve_orbit, Connection};
use radshock::profile::{jump_admissibility, reconstruct, verify, SpikeLocation};
use radshock::{RegimeReport, ShockProfile};
use rayon::prelude::*;

use crate::config::{canonical_key, CliError, Format, Overrides, RunConfig};
use crate::output::{fmt_f64, opt_cell, profile_csv, profile_json, to_json, Summary};

/// Residuals above this are reported, not rejected.
pub const RESIDUAL_THRESHOLD: f64 = 1e-5;

pub struct Solved {
    pub summary: Summary,
    pub profile: ShockProfile,
}

pub fn solve(cfg: &RunConfig) -> Result<Solved, CliError> {
    let rs = cfg.system()?;
    let regime = rs.classify();
    let orbit = solve_orbit(&rs, &cfg.solver_options())?;
    let profile = reconstruct(&orbit, &rs)?;
    let residuals = verify(&profile)?;
    let summary = Summary {
        config: cfg.clone(),
        regime,
        connection: profile.connection,
        jump: profile.jump,
        jump_admissibility: jump_admissibility(&profile),
        spike: profile.spike,
        residual_ok: residuals.max_ode_residual < RESIDUAL_THRESHOLD,
        residuals,
        samples_left: profile.left().len(),
        samples_right: profile.right().len(),
    };
    Ok(Solved { summary, profile })
}

/// `<dir>/<stem>.summary.json` next to the profile file.
pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.summary.json"))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Solves and writes the outputs; returns what goes to standard output.
/// Nothing is written unless the solve succeeds.
pub fn cmd_solve(cfg: &RunConfig, out: Option<&Path>) -> Result<String, CliError> {
    let Solved { summary, profile } = solve(cfg)?;
    let body = match cfg.format {
        Format::Csv => profile_csv(cfg, &profile),
        Format::Json => profile_json(&summary, &profile),
    };
    match out {
        None => Ok(body),
        Some(path) => {
            write(path, &body)?;
            let mut msg = format!("wrote {}\n", path.display());
            if cfg.format == Format::Csv {
                let sp = summary_path(path);
                write(&sp, &to_json(&summary))?;
                let _ = writeln!(msg, "wrote {}", sp.display());
            }
            Ok(msg)
        }
    }
}

/// Closed-form classification only.
pub fn cmd_classify(cfg: &RunConfig) -> Result<String, CliError> {
    Ok(to_json(&cfg.system()?.classify()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: &'static str,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    /// `name:min:max:count`
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::validation("InvalidAxis", format!("axis `{s}`: {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [name, min, max, count] = parts[..] else {
            return Err(bad("expected name:min:max:count"));
        };
        let name = canonical_key(name).ok_or_else(|| bad("unknown parameter"))?;
        if matches!(name, "model" | "format" | "workers") {
            return Err(bad("not a numeric parameter"));
        }
        let min: f64 = min.trim().parse().map_err(|_| bad("min is not a number"))?;
        let max: f64 = max.trim().parse().map_err(|_| bad("max is not a number"))?;
        let count: usize = count.trim().parse().map_err(|_| bad("count is not an integer"))?;
        if count < 2 {
            return Err(bad("count must be at least 2"));
        }
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(bad("need finite min < max"));
        }
        Ok(Self { name, min, max, count })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    /// Solve every point, not only classify it.
    pub solve: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub coords: Vec<f64>,
    pub predicted: Option<RegimeReport>,
    pub solved: Option<PointSolve>,
    pub error: Option<CliError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSolve {
    pub regime: String,
    pub connection: Connection,
    pub theta_peak: Option<f64>,
    pub spike_location: Option<SpikeLocation>,
    pub max_ode_residual: f64,
}

/// `monotone_continuous`, `nonmonotone_discontinuous`, ...; no monotonicity
/// part for the Hamer model.
pub fn regime_name(spike: Option<bool>, jump: bool) -> String {
    let cont = if jump { "discontinuous" } else { "continuous" };
    match spike {
        Some(true) => format!("nonmonotone_{cont}"),
        Some(false) => format!("monotone_{cont}"),
        None => cont.to_string(),
    }
}

fn predicted_regime(r: &RegimeReport) -> String {
    let spike = r.delta.map(|_| r.spike_predicted);
    regime_name(spike, r.jump_predicted)
}

fn run_point(cfg: &RunConfig, coords: Vec<f64>, solve_it: bool) -> SweepRow {
    let mut row = SweepRow {
        coords,
        predicted: None,
        solved: None,
        error: None,
    };
    let rs = match cfg.system() {
        Ok(rs) => rs,
        Err(e) => {
            row.error = Some(e);
            return row;
        }
    };
    row.predicted = Some(rs.classify());
    if solve_it {
        match solve(cfg) {
            Ok(s) => {
                let spike = s.summary.spike;
                row.solved = Some(PointSolve {
                    regime: regime_name(spike.map(|sp| sp.present), s.summary.connection.is_jump()),
                    connection: s.summary.connection,
                    theta_peak: spike.map(|sp| sp.theta_peak),
                    spike_location: spike.and_then(|sp| sp.location),
                    max_ode_residual: s.summary.residuals.max_ode_residual,
                });
            }
            Err(e) => row.error = Some(e),
        }
    }
    row
}

/// Per-point configurations in axis-major order.
pub fn grid(base: &Overrides, spec: &SweepSpec) -> Result<Vec<(Vec<f64>, RunConfig)>, CliError> {
    if let Some(a2) = &spec.axis2 {
        if a2.name == spec.axis1.name {
            return Err(CliError::validation("InvalidAxis", "the two axes must differ"));
        }
    }
    let n2 = spec.axis2.as_ref().map_or(1, |a| a.count);
    let mut out = Vec::with_capacity(spec.axis1.count * n2);
    for i in 0..spec.axis1.count {
        for j in 0..n2 {
            let mut o = base.clone();
            let mut coords = vec![spec.axis1.value(i)];
            o.set(spec.axis1.name, format!("{}", coords[0]))?;
            if let Some(a2) = &spec.axis2 {
                coords.push(a2.value(j));
                o.set(a2.name, format!("{}", coords[1]))?;
            }
            let cfg = RunConfig::from_overrides(&o)?;
            if let Some(d) = cfg.delta {
                let max = 2.0 / cfg.gamma;
                if !(d > 0.0 && d < max) {
                    return Err(radshock::Error::InadmissibleDelta { delta: d, max }.into());
                }
            }
            out.push((coords, cfg));
        }
    }
    Ok(out)
}

pub fn run_sweep(base: &Overrides, spec: &SweepSpec, workers: Option<usize>) -> Result<Vec<SweepRow>, CliError> {
    let points = grid(base, spec)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::validation("InvalidWorkers", e.to_string()))?;
    // `collect` on an indexed parallel iterator keeps the grid order
    Ok(pool.install(|| {
        points
            .into_par_iter()
            .map(|(coords, cfg)| run_point(&cfg, coords, spec.solve))
            .collect()
    }))
}

pub const SWEEP_COLUMNS: [&str; 16] = [
    "predicted_regime",
    "jump_predicted",
    "spike_predicted",
    "forced_jump_by_g0",
    "spiral",
    "G_prime_at_0",
    "nu",
    "solved_regime",
    "connection",
    "y_c",
    "x_left",
    "x_right",
    "theta_peak",
    "spike_location",
    "max_ode_residual",
    "error",
];

/// Header and text cells of the regime map.
pub fn sweep_table(spec: &SweepSpec, rows: &[SweepRow]) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let mut head: Vec<&'static str> = vec![spec.axis1.name];
    if let Some(a2) = &spec.axis2 {
        head.push(a2.name);
    }
    head.extend(SWEEP_COLUMNS);
    let mut table = Vec::with_capacity(rows.len());
    for r in rows {
        let mut cells: Vec<String> = r.coords.iter().map(|&c| fmt_f64(c)).collect();
        match &r.predicted {
            Some(p) => {
                cells.push(predicted_regime(p));
                cells.push(p.jump_predicted.to_string());
                cells.push(p.spike_predicted.to_string());
                cells.push(p.forced_jump_by_g0.to_string());
                cells.push(p.spiral.to_string());
                cells.push(fmt_f64(p.g_prime_at_0));
                cells.push(fmt_f64(p.nu));
            }
            None => cells.extend(std::iter::repeat_n(String::new(), 7)),
        }
        match &r.solved {
            Some(sv) => {
                let (kind, y, xl, xr) = match sv.connection {
                    Connection::Continuous { y } => ("continuous", y, None, None),
                    Connection::Jump { x_left, x_right, y_c, .. } => ("jump", y_c, Some(x_left), Some(x_right)),
                };
                cells.push(sv.regime.clone());
                cells.push(kind.into());
                cells.push(fmt_f64(y));
                cells.push(opt_cell(xl));
                cells.push(opt_cell(xr));
                cells.push(opt_cell(sv.theta_peak));
                cells.push(match sv.spike_location {
                    Some(SpikeLocation::AtJump) => "at_jump".into(),
                    Some(SpikeLocation::SmoothInterior) => "smooth_interior".into(),
                    None => String::new(),
                });
                cells.push(fmt_f64(sv.max_ode_residual));
            }
            None => cells.extend(std::iter::repeat_n(String::new(), 8)),
        }
        cells.push(r.error.as_ref().map(|e| e.code.clone()).unwrap_or_default());
        table.push(cells);
    }
    (head, table)
}

pub fn sweep_csv(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let (head, table) = sweep_table(spec, rows);
    let mut s = String::new();
    let _ = writeln!(s, "{}", head.join(","));
    for cells in table {
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

/// Typed JSON value of a CSV cell. Non-finite numbers keep their text.
fn json_cell(v: String) -> serde_json::Value {
    use serde_json::Value;
    if v.is_empty() {
        return Value::Null;
    }
    if let Ok(b) = v.parse::<bool>() {
        return Value::Bool(b);
    }
    match v.parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
        Some(n) => Value::Number(n),
        None => Value::String(v),
    }
}

/// One object per grid point with the CSV columns as keys; empty cells become `null`.
pub fn sweep_json(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let (head, table) = sweep_table(spec, rows);
    let objects: Vec<serde_json::Map<String, serde_json::Value>> = table
        .into_iter()
        .map(|cells| {
            head.iter()
                .zip(cells)
                .map(|(k, v)| (k.to_string(), json_cell(v)))
                .collect()
        })
        .collect();
    to_json(&objects)
}

pub fn cmd_sweep(
    base: &Overrides,
    spec: &SweepSpec,
    format: Format,
    workers: Option<usize>,
    out: Option<&Path>,
) -> Result<String, CliError> {
    let rows = run_sweep(base, spec, workers)?;
    let body = match format {
        Format::Csv => sweep_csv(spec, &rows),
        Format::Json => sweep_json(spec, &rows),
    };
    match out {
        None => Ok(body),
        Some(path) => {
            write(path, &body)?;
            Ok(format!("wrote {}\n", path.display()))
        }
    }
}
