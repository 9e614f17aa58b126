use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fresco_cli::{execute, Command, CommandRequest, Format, Options};

#[derive(Parser)]
#[command(name = "fresco", version, about = "Exact computations with (a,b)-modules and frescos")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Global {
    /// b-adic precision of truncated series.
    #[arg(long, global = true, default_value_t = 32)]
    precision: usize,
    /// Iteration cap for saturation.
    #[arg(long, global = true, default_value_t = 64)]
    max_iter: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Largest |e| allowed for b^e in Laurent mode.
    #[arg(long, global = true, default_value_t = 16)]
    laurent_window: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Args)]
struct Inputs {
    /// Inline expressions, inline JSON, JSON files, or "-" for stdin.
    inputs: Vec<String>,
}

#[derive(Subcommand)]
enum Sub {
    /// Normal-order an expression in a, b (and b^-1 with --laurent).
    Normalize {
        /// Allow b^-n.
        #[arg(long)]
        laurent: bool,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Bernstein polynomial of a monic homogeneous element.
    Bpoly {
        /// Comma separated lambdas of (a - l1 b)...(a - lk b).
        #[arg(long, allow_hyphen_values = true)]
        factors: Option<String>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Bernstein element of a monic polynomial with rational coefficients.
    Belem(Inputs),
    /// Right division Q = W*P of homogeneous elements, with the cofactor of W.
    Divide(Inputs),
    /// Bernstein polynomial of an extension from B_F and B_H.
    ExactSeq {
        /// Rank of H; defaults to deg B_H.
        #[arg(long)]
        rank_h: Option<u32>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Expand a presentation, take its initial form and Bernstein polynomial.
    FromPi(Inputs),
    /// Bernstein polynomial through the saturated lattice.
    Saturate(Inputs),
    /// Gauss-Manin recurrence for n + 2 monomials.
    Gm(Inputs),
    /// Run a pole ledger script.
    Poles(Inputs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut options = Options {
        precision: cli.global.precision,
        max_iter: cli.global.max_iter,
        format: match cli.global.format {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        },
        laurent_window: cli.global.laurent_window,
        ..Options::default()
    };
    let (command, inputs) = match cli.command {
        Sub::Normalize { laurent, inputs } => {
            options.laurent = laurent;
            (Command::Normalize, inputs)
        }
        Sub::Bpoly { factors, inputs } => {
            options.factors = factors;
            (Command::Bpoly, inputs)
        }
        Sub::Belem(i) => (Command::Belem, i),
        Sub::Divide(i) => (Command::Divide, i),
        Sub::ExactSeq { rank_h, inputs } => {
            options.rank_h = rank_h;
            (Command::ExactSeq, inputs)
        }
        Sub::FromPi(i) => (Command::FromPi, i),
        Sub::Saturate(i) => (Command::Saturate, i),
        Sub::Gm(i) => (Command::Gm, i),
        Sub::Poles(i) => (Command::Poles, i),
    };
    let outcome = execute(&CommandRequest { command, inputs: inputs.inputs, options });
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.exit_code as u8)
}
