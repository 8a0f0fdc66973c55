use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use radshock::ErrorKind;
use radshock_cli::commands::{cmd_classify, cmd_solve, cmd_sweep, Axis, SweepSpec};
use radshock_cli::config::{load, output_settings, CliError, Overrides};

#[derive(Parser)]
#[command(name = "radshock", version, about = "Radiative shock profiles via heteroclinic orbits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one profile and write it with a JSON summary.
    Solve(Common),
    /// Closed-form regime classification, printed as JSON.
    Classify(Common),
    /// Classify (and solve) a one- or two-axis parameter grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// name:min:max:count
        #[arg(long)]
        axis1: String,
        /// name:min:max:count
        #[arg(long)]
        axis2: Option<String>,
        /// Only classify the grid points.
        #[arg(long)]
        no_solve: bool,
    },
}

#[derive(Args)]
struct Common {
    /// radhydro or hamer
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long = "R")]
    r: Option<String>,
    #[arg(long)]
    rho_minus: Option<String>,
    #[arg(long = "Uc")]
    u_c: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    u_minus: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    u_plus: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    sigma_s: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    tol_int: Option<String>,
    #[arg(long)]
    tol_match: Option<String>,
    #[arg(long)]
    tol_connect: Option<String>,
    #[arg(long)]
    zeta_max: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn overrides(&self) -> Result<Overrides, CliError> {
        let mut o = Overrides::default();
        let pairs = [
            ("model", &self.model),
            ("gamma", &self.gamma),
            ("R", &self.r),
            ("rho-minus", &self.rho_minus),
            ("Uc", &self.u_c),
            ("delta", &self.delta),
            ("c", &self.c),
            ("u-minus", &self.u_minus),
            ("u-plus", &self.u_plus),
            ("sigma", &self.sigma),
            ("sigma-s", &self.sigma_s),
            ("tau", &self.tau),
            ("alpha", &self.alpha),
            ("tol-int", &self.tol_int),
            ("tol-match", &self.tol_match),
            ("tol-connect", &self.tol_connect),
            ("zeta-max", &self.zeta_max),
            ("format", &self.format),
            ("workers", &self.workers),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                o.set(k, v.clone())?;
            }
        }
        Ok(o)
    }

    /// File values overlaid by flags.
    fn merged(&self) -> Result<Overrides, CliError> {
        let base = match &self.config {
            Some(p) => Overrides::read_file(p)?,
            None => Overrides::default(),
        };
        Ok(base.overlay(&self.overrides()?))
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Solve(c) => {
            let cfg = load(c.config.as_ref(), &c.overrides()?)?;
            cmd_solve(&cfg, c.out.as_deref())
        }
        Command::Classify(c) => cmd_classify(&load(c.config.as_ref(), &c.overrides()?)?),
        Command::Sweep {
            common,
            axis1,
            axis2,
            no_solve,
        } => {
            let spec = SweepSpec {
                axis1: Axis::parse(&axis1)?,
                axis2: axis2.as_deref().map(Axis::parse).transpose()?,
                solve: !no_solve,
            };
            let base = common.merged()?;
            let (format, workers) = output_settings(&base)?;
            cmd_sweep(&base, &spec, format, workers, common.out.as_deref())
        }
    }
}

fn print_error(e: &CliError) {
    let body = serde_json::json!({ "error": e });
    let _ = writeln!(std::io::stderr(), "{body}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            print_error(&CliError {
                code: "UsageError".into(),
                kind: ErrorKind::Validation,
                message: e.to_string().trim().to_string(),
            });
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            print_error(&e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
