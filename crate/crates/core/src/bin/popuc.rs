use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use popuc::cli::{self, Command, JobSpec, OutputFormat, Source};
use popuc::Error;

/// Tables and verification reports for three-term recurrences with a
/// quadratic transfer weight and their unit-circle counterparts.
#[derive(Parser)]
#[command(name = "popuc", version)]
struct TopLevel {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Zeros x_r of P_n with their circle images zeta_r.
    Zeros(CommonArgs),
    /// Quadrature weights lambda_r and probability weights lambda_hat_r.
    Weights(CommonArgs),
    /// Verblunsky coefficients alpha_k with the rotations tau_{k+1}.
    Verblunsky(CommonArgs),
    /// Companion-measure data: beta, maximal parameters, gamma norms.
    Nu(CommonArgs),
    /// The s-parameterized family sharing the source's circle measure.
    Sfamily(CommonArgs),
    /// Discrete moments of the node measure (exact for |k| < n).
    Moments(CommonArgs),
    /// Aggregated verification report; exits nonzero on any FAIL row.
    Verify(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Builtin family: ex1 | ex2 | ex3 | ex4.
    #[arg(long, conflicts_with = "input")]
    example: Option<String>,
    /// Point mass for ex2, in (0, 1).
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<f64>,
    /// Real part of the ex4 parameter (> -1).
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Imaginary part of the ex4 parameter.
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<f64>,
    /// Family rotation parameter s.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    /// Table size / polynomial degree (at least 2).
    #[arg(long)]
    n: usize,
    /// JSON file with {"c": [...], "d": [...]}; d[0] holds d_2.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputArg::Csv)]
    output: OutputArg,
    /// Seed for the randomized verification block.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Csv,
    Json,
}

impl CommonArgs {
    fn into_job_spec(self, command: Command) -> Result<JobSpec, Error> {
        let source = match (self.input, self.example) {
            (Some(path), None) => {
                for (flag, value) in [
                    ("--kappa", self.kappa),
                    ("--lambda", self.lambda),
                    ("--eta", self.eta),
                ] {
                    if value.is_some() {
                        return Err(Error::InvalidInput(format!(
                            "{flag} does not apply to --input sources"
                        )));
                    }
                }
                Source::File { path, s: self.s }
            }
            (None, Some(example)) => Source::Builtin {
                example,
                kappa: self.kappa,
                lambda: self.lambda,
                eta: self.eta,
                s: self.s,
            },
            (None, None) => {
                return Err(Error::InvalidInput(
                    "either --example or --input is required".into(),
                ))
            }
            (Some(_), Some(_)) => unreachable!("clap forbids --example with --input"),
        };
        Ok(JobSpec {
            source,
            n: self.n,
            commands: vec![command],
            output: match self.output {
                OutputArg::Csv => OutputFormat::Csv,
                OutputArg::Json => OutputFormat::Json,
            },
            seed: self.seed,
        })
    }
}

fn main() -> ExitCode {
    let top = TopLevel::parse();
    let (command, args) = match top.command {
        Sub::Zeros(a) => (Command::Zeros, a),
        Sub::Weights(a) => (Command::Weights, a),
        Sub::Verblunsky(a) => (Command::Verblunsky, a),
        Sub::Nu(a) => (Command::Nu, a),
        Sub::Sfamily(a) => (Command::Sfamily, a),
        Sub::Moments(a) => (Command::Moments, a),
        Sub::Verify(a) => (Command::Verify, a),
    };
    let spec = match args.into_job_spec(command) {
        Ok(spec) => spec,
        Err(e) => return fail(&e),
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match cli::run(&spec, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}
