use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qlax_cli::{
    cmd_commutator, cmd_convergence, cmd_kdv_verify, cmd_lax_solve, cmd_symmetry, exit, CliError,
    Format, Outcome, Settings,
};

/// Exact verification of q-deformed Lax equations.
#[derive(Debug, Parser)]
#[command(name = "qlax", version)]
struct Cli {
    /// Truncation order N; overrides the problem file [default: file's N, else 2]
    #[arg(long, global = true)]
    qorder: Option<usize>,
    /// Orders kept below the leading one when composing pseudo-differential symbols
    #[arg(long, global = true, default_value_t = qlax_core::psdo::DEFAULT_DEPTH)]
    depth: i64,
    /// Output format; QLAX_FORMAT takes precedence
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Seed for randomly drawn inputs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// JSON array of extra probe operators for the symmetry checks
    #[arg(long, global = true)]
    probe_set: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check [P, L] = 6 u u_1 - u_3 for the KdV pair
    KdvVerify {
        /// Add EPS*u to P (default EPS = 1); the check should then fail
        #[arg(long, value_name = "EPS", num_args = 0..=1, default_missing_value = "1")]
        perturb: Option<String>,
    },
    /// Print the commutator [A, B] of two operator expressions
    Commutator {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Solve the deformed Lax equation and check the residual
    LaxSolve { file: PathBuf },
    /// Transport the symmetry S0 and check the symmetry equations
    Symmetry { file: PathBuf },
    /// Truncation error against a higher-order reference (matrix problems)
    Convergence {
        file: PathBuf,
        /// Comma-separated q values, e.g. "1/8,1/16"
        #[arg(long, default_value = "1/8,1/16")]
        q: String,
        /// Reference order [default: N + 6]
        #[arg(long = "ref-n", alias = "refN")]
        ref_n: Option<usize>,
    },
}

fn run(cli: &Cli) -> Result<(Outcome, Format), CliError> {
    let env = std::env::var("QLAX_FORMAT").ok();
    let format = Format::resolve(cli.format, env.as_deref())?;
    let settings = Settings {
        qorder: cli.qorder,
        depth: cli.depth,
        seed: cli.seed,
        probe_set: cli.probe_set.clone(),
    };
    let outcome = match &cli.command {
        Command::KdvVerify { perturb } => cmd_kdv_verify(&settings, perturb.as_deref())?,
        Command::Commutator { a, b } => cmd_commutator(&settings, a, b)?,
        Command::LaxSolve { file } => cmd_lax_solve(&settings, file)?,
        Command::Symmetry { file } => cmd_symmetry(&settings, file)?,
        Command::Convergence { file, q, ref_n } => cmd_convergence(&settings, file, q, *ref_n)?,
    };
    Ok((outcome, format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() {
                exit::INPUT_ERROR
            } else {
                exit::PASS
            };
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok((outcome, format)) => {
            println!("{}", outcome.render(format));
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::INPUT_ERROR as u8)
        }
    }
}
