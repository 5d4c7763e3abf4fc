//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{self, BranchArgs, BranchMethod, SpectrumArgs};
use crate::error::{CliError, CliResult};
use crate::method::{BcArg, Method};
use crate::pool;
use crate::verify::{self, Suite, VerifyOptions};

/// Eigenvalue branches of the magnetic Laplacian on the unit disc.
#[derive(Debug, Parser)]
#[command(name = "landau", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchMethodArg {
    Fem,
    Kummer,
    Asymptotic,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumMethodArg {
    Fem,
    Kummer,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One branch `b ↦ λ_n` of fiber `m` over a grid of field strengths.
    Branch {
        #[arg(long, allow_negative_numbers = true)]
        m: i32,
        #[arg(long)]
        n: u32,
        /// dirichlet, neumann or robin:GAMMA
        #[arg(long)]
        bc: BcArg,
        #[arg(long)]
        b_min: f64,
        #[arg(long)]
        b_max: f64,
        #[arg(long)]
        b_steps: usize,
        #[arg(long, value_enum, default_value = "fem")]
        method: BranchMethodArg,
    },
    /// Disc spectrum at one field strength, assembled from all fibers.
    Spectrum {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        bc: BcArg,
        #[arg(long)]
        m_max: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = f64::INFINITY)]
        lambda_max: f64,
        #[arg(long, value_enum, default_value = "fem")]
        method: SpectrumMethodArg,
    },
    /// Temple and Rayleigh–Ritz bounds next to the computed eigenvalue.
    Bracket {
        #[arg(long, allow_negative_numbers = true)]
        m: i32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        bc: BcArg,
        #[arg(long, default_value_t = 2.0)]
        floor_c: f64,
    },
    /// Run invariant suites; exit 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Floor constant handed to the bracket check.
        #[arg(long, default_value_t = 2.0)]
        floor_c: f64,
    },
    /// Write branch data for `0 <= m <= 25`, `1 <= n <= 3` to CSV files.
    Figure {
        #[arg(long)]
        bc: BcArg,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        b_min: f64,
        #[arg(long, default_value_t = 50.0)]
        b_max: f64,
        #[arg(long, default_value_t = 41)]
        b_steps: usize,
    },
}

/// Outcome of a command that ran without a usage or runtime error.
enum Outcome {
    Text(String),
    /// Verify report and whether every check passed.
    Report(String, bool),
}

fn execute(cmd: Command) -> CliResult<Outcome> {
    let pool = pool::build()?;
    match cmd {
        Command::Branch {
            m,
            n,
            bc,
            b_min,
            b_max,
            b_steps,
            method,
        } => {
            let args = BranchArgs {
                m,
                n,
                bc: bc.0,
                b_grid: commands::linspace(b_min, b_max, b_steps)?,
                method: match method {
                    BranchMethodArg::Fem => BranchMethod::Fem,
                    BranchMethodArg::Kummer => BranchMethod::Kummer,
                    BranchMethodArg::Asymptotic => BranchMethod::Asymptotic,
                    BranchMethodArg::All => BranchMethod::All,
                },
            };
            let rows = commands::branch_rows(&pool, &args)?;
            Ok(Outcome::Text(commands::branch_csv(&rows)))
        }
        Command::Spectrum {
            b,
            bc,
            m_max,
            n_max,
            lambda_max,
            method,
        } => {
            let args = SpectrumArgs {
                b,
                bc: bc.0,
                m_max,
                n_max,
                lambda_max,
                method: match method {
                    SpectrumMethodArg::Fem => Method::Fem,
                    SpectrumMethodArg::Kummer => Method::Kummer,
                },
            };
            let entries = commands::spectrum(&pool, &args)?;
            Ok(Outcome::Text(commands::spectrum_csv(&entries)))
        }
        Command::Bracket {
            m,
            n,
            b,
            bc,
            floor_c,
        } => {
            let row = commands::bracket_row(m, n, b, bc.0, floor_c)?;
            Ok(Outcome::Text(commands::bracket_csv(&row)))
        }
        Command::Verify { suite, floor_c } => {
            let checks = verify::run(&pool, suite, VerifyOptions { floor_c });
            let ok = checks.iter().all(verify::Check::passed);
            Ok(Outcome::Report(verify::report(&checks), ok))
        }
        Command::Figure {
            bc,
            out_dir,
            b_min,
            b_max,
            b_steps,
        } => {
            let grid = commands::linspace(b_min, b_max, b_steps)?;
            let written = commands::write_figure(&pool, bc.0, &grid, &out_dir)?;
            let mut text = String::new();
            for path in written {
                text.push_str(&format!("{}\n", path.display()));
            }
            Ok(Outcome::Text(text))
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code: 0 ok, 1 verification failure, 2 usage error, 3 runtime error.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let (text, code) = match execute(cli.command) {
        Ok(Outcome::Text(t)) => (t, 0),
        Ok(Outcome::Report(t, ok)) => (t, if ok { 0 } else { 1 }),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        let e = CliError::Io {
            context: "cannot write output".into(),
            source: e,
        };
        let _ = writeln!(err, "error: {e}");
        return e.exit_code();
    }
    code
}
