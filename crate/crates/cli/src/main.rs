mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Parser)]
#[command(name = "center-algebra", version, about = "Exact path signatures, return maps and centers for v' = Σ a_i(x) v^(i+1)")]
struct Cli {
    /// Truncation order N.
    #[arg(long, global = true, default_value_t = 8)]
    order: usize,
    /// Path JSON file.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
pub enum Command {
    /// Every iterated integral I_w with weight(w) <= N.
    Integrals,
    /// The truncated monodromy E(a).
    Monodromy,
    /// Center test to order N.
    Center,
    /// Largest n with all integrals of weight <= n zero.
    Universal,
    /// First-return map from the monodromy.
    ReturnMap,
    /// Algebraic return map against the ODE oracle.
    OracleCompare,
    /// Evaluate a moment file on the input path.
    Moments {
        #[arg(long)]
        moment: PathBuf,
    },
    /// Distance between the monodromies of two paths.
    Metric {
        /// Second path JSON file.
        #[arg(long)]
        other: PathBuf,
    },
    /// Free Lie algebra utilities.
    Lie {
        #[command(subcommand)]
        command: LieCommand,
    },
    /// Split a Lie series into its kernel part and its two-letter part.
    Decompose {
        /// Lie series in text form; defaults to log of the input path's monodromy.
        #[arg(long)]
        series: Option<String>,
    },
    /// Factor the input monodromy as c·b with b on two letters.
    Factorize,
    /// The element e^a e^b e^{-s(a,b)} for diagonal vectors a, b.
    PlCenter {
        /// Comma-separated coefficients of X_1, X_2, ...
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// γ for the right-nested bracket of a word.
    Gamma {
        /// Comma-separated letter indices, e.g. 1,1,2.
        #[arg(long)]
        word: String,
    },
}

#[derive(Subcommand)]
pub enum LieCommand {
    /// Dimension of the weight-n slice of the free Lie algebra.
    Dims {
        #[arg(long)]
        n: u64,
    },
    /// Number of two-letter generators in weight n.
    AbelCount {
        #[arg(long)]
        n: u64,
    },
    /// Lyndon words of a given weight.
    Lyndon {
        #[arg(long)]
        weight: usize,
        #[arg(long)]
        max_index: Option<u32>,
    },
    /// log(e^a e^b) for Lie series in text form.
    Bch {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, cli.order, cli.input.as_deref()) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
