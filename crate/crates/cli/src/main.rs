use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nmrgate::{CompileOptions, HadamardStyle, ZRealization};

mod commands;
mod report;

use commands::{CliError, Outcome};

#[derive(Parser)]
#[command(
    name = "nmrgate",
    version,
    about = "Compile quantum circuits to NMR pulse sequences and verify them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lower a circuit file to a pulse listing.
    Compile {
        #[command(flatten)]
        common: Common,
        /// Replace z rotations by composite three-pulse sandwiches.
        #[arg(long)]
        expand_z: bool,
        /// Coupling constants (`q0 q1 <Hz>` per line) for delay annotations.
        #[arg(long = "j", value_name = "FILE")]
        couplings: Option<PathBuf>,
    },
    /// Run a compiled circuit on an initial density matrix.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "thermal")]
        init: String,
    },
    /// Check every lowered gate and the whole circuit against the ideal matrices.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = nmrgate::verify::DEFAULT_TOL)]
        tol: f64,
    },
    /// Product-operator decomposition of a Hermitian matrix (JSON rows) or an initial state.
    Decompose {
        /// JSON matrix file, `-` for stdin. Omit to decompose `--init`.
        input: Option<String>,
        #[arg(long)]
        init: Option<String>,
        /// Spin count for `--init thermal|pseudopure`.
        #[arg(long, default_value_t = 2)]
        spins: usize,
        /// Also print the coherence-order histogram.
        #[arg(long)]
        orders: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct Common {
    /// Circuit file, `-` for stdin.
    input: String,
    #[arg(long, value_enum, default_value_t = Hadamard::Tilted)]
    hadamard: Hadamard,
    #[arg(long, value_enum, default_value_t = ZMode::Zrot)]
    z: ZMode,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl Common {
    fn options(&self) -> CompileOptions {
        CompileOptions {
            hadamard: match self.hadamard {
                Hadamard::Tilted => HadamardStyle::Tilted,
                Hadamard::Sandwich => HadamardStyle::Sandwich,
            },
            z: match self.z {
                ZMode::Zrot => ZRealization::ZRot,
                ZMode::Composite => ZRealization::Composite,
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Hadamard {
    Tilted,
    Sandwich,
}

#[derive(Clone, Copy, ValueEnum)]
enum ZMode {
    Zrot,
    Composite,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Compile { common, expand_z, couplings } => {
            let text = read_input(&common.input)?;
            let table = couplings.map(|p| read_input(&p.to_string_lossy())).transpose()?;
            commands::compile(&text, common.options(), expand_z, table.as_deref(), common.format)
        }
        Command::Simulate { common, init } => {
            let text = read_input(&common.input)?;
            commands::simulate(&text, common.options(), &init, common.format)
        }
        Command::Verify { common, tol } => {
            let text = read_input(&common.input)?;
            commands::verify(&text, common.options(), tol, common.format)
        }
        Command::Decompose { input, init, spins, orders, format } => {
            let matrix = input.as_deref().map(read_input).transpose()?;
            commands::decompose(matrix.as_deref(), init.as_deref(), spins, orders, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
