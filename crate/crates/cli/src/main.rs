use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::{CliError, Report};

#[derive(Parser, Debug)]
#[command(name = "chernflat", version, about = "Exact checks and normal forms for almost complex Lie algebras")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Complex dimension 4, non-integrable.
    Dim4,
    /// Odd complex dimension with one-dimensional complex center.
    Center1,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every structural check on algebra files, directories of them, or `@name` catalog entries.
    Verify {
        #[arg(required = true)]
        sources: Vec<String>,
        /// Hermitian matrix (JSON rows of Q(i) scalars) for the quasi-Kähler check; identity by default.
        #[arg(long)]
        metric: Option<PathBuf>,
    },
    /// Reduce to a normal form and print the frame change with the normalized brackets.
    NormalForm {
        source: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Also write the normalized real algebra, with its complex structure, to this file.
        #[arg(long)]
        write_algebra: Option<PathBuf>,
    },
    /// Dimension of the space of infinitesimal deformations.
    Deform {
        source: String,
        /// Print a basis of the solution space.
        #[arg(long)]
        dump_kernel: bool,
    },
    /// Solve the invariant (2,0)-form equation and check that every solution is closed.
    Lemma {
        source: String,
        /// Print a basis of the solutions.
        #[arg(long)]
        show_solutions: bool,
    },
    /// Write the conjugate complexification of a real 2-step nilpotent algebra.
    Construct {
        source: String,
        /// Destination file; standard output by default.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List catalog entries, or print one as an algebra file.
    Catalog { name: Option<String> },
    /// Apply a random (1,0)-frame change and print the resulting algebra file.
    Scramble {
        source: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bound on the real and imaginary parts of the random frame entries.
        #[arg(long, default_value_t = 1)]
        bound: i64,
    },
    /// Scramble repeatedly and check that the normal form is recovered every time.
    ScrambleTest {
        source: String,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

fn run(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::Verify { sources, metric } => commands::verify(&sources, metric.as_deref()),
        Command::NormalForm { source, mode, write_algebra } => {
            commands::normal_form(&source, mode, write_algebra.as_deref())
        }
        Command::Deform { source, dump_kernel } => commands::deform(&source, dump_kernel),
        Command::Lemma { source, show_solutions } => commands::lemma(&source, show_solutions),
        Command::Construct { source, output } => commands::construct(&source, output.as_deref()),
        Command::Catalog { name } => commands::catalog(name.as_deref()),
        Command::Scramble { source, seed, bound } => commands::scramble(&source, seed, bound),
        Command::ScrambleTest { source, mode, seed, trials } => commands::scramble_test(&source, mode, seed, trials),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            report.print(format);
            report.exit_code()
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
