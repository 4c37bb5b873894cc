use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use fracvar::suite::SuiteOptions;
use fracvar_cli::config::{RunConfig, Settings};
use fracvar_cli::run::{run_convergence, run_solve, run_verify};
use fracvar_cli::CliError;

/// Ritz solver for Riemann–Liouville fractional variational problems.
#[derive(Parser)]
#[command(name = "fracvar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for each degree; writes solution CSVs and a report into --out (a directory).
    Solve(RunArgs),
    /// Run the identity and exact-solution suites and print a pass/fail table.
    Verify(VerifyArgs),
    /// Print (or write to --out) the error and objective table over --degrees.
    Convergence(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key = value file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ex1, ex2, ex3, ex4, ex5, remark3 or custom.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Fractional integral order; must equal 1 - alpha.
    #[arg(long, allow_hyphen_values = true)]
    beta_order: Option<String>,
    /// Exponent in g(x) = 1/(1 + x^p) (ex1, ex4).
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    /// Rate in e^{-nu x} (ex2, ex4).
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    /// Boundary value of I^{1-alpha} y at b.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Comma-separated, e.g. 3,6.
    #[arg(long)]
    degrees: Option<String>,
    /// Gauss–Legendre node count.
    #[arg(long)]
    quad: Option<String>,
    /// Number of output grid points.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// auto, lls or qn.
    #[arg(long)]
    solver: Option<String>,
    /// on or off; off writes zero wall times for reproducible files.
    #[arg(long)]
    timing: Option<String>,
    /// Custom problem: g(x).
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    /// Custom problem: h(x).
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    /// Custom problem: g'(x).
    #[arg(long, allow_hyphen_values = true)]
    gp: Option<String>,
    /// Custom problem: h'(x).
    #[arg(long, allow_hyphen_values = true)]
    hp: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Debug hook: relative perturbation of the derivative Γ-ratio.
    #[arg(long, hide = true, allow_hyphen_values = true, default_value_t = 0.0)]
    perturb_gamma_ratio: f64,
}

impl RunArgs {
    fn settings(&self) -> Result<Settings, CliError> {
        let mut s = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    source: e,
                })?;
                Settings::parse(&text)?
            }
            None => Settings::default(),
        };
        let flags = [
            ("problem", &self.problem),
            ("alpha", &self.alpha),
            ("beta_order", &self.beta_order),
            ("p", &self.p),
            ("nu", &self.nu),
            ("epsilon", &self.epsilon),
            ("a", &self.a),
            ("b", &self.b),
            ("degrees", &self.degrees),
            ("quad", &self.quad),
            ("grid", &self.grid),
            ("out", &self.out),
            ("solver", &self.solver),
            ("timing", &self.timing),
            ("g", &self.g),
            ("h", &self.h),
            ("gp", &self.gp),
            ("hp", &self.hp),
        ];
        let mut over = Settings::default();
        for (k, v) in flags {
            if let Some(v) = v {
                over.set(k, v).map_err(CliError::Validation)?;
            }
        }
        s.overlay(&over);
        Ok(s)
    }

    fn config(&self) -> Result<RunConfig, CliError> {
        RunConfig::from_settings(&self.settings()?)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => {
            let cfg = args.config()?;
            let dir = run_solve(&cfg)?;
            println!("wrote {}", dir.display());
        }
        Command::Convergence(args) => {
            let cfg = args.config()?;
            if let Some(csv) = run_convergence(&cfg)? {
                print!("{csv}");
            }
        }
        Command::Verify(args) => {
            let (table, ok) = run_verify(SuiteOptions {
                perturb_gamma_ratio: args.perturb_gamma_ratio,
            })?;
            print!("{table}");
            if !ok {
                return Err(CliError::Verification(
                    "one or more suites exceeded tolerance".into(),
                ));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fracvar: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
