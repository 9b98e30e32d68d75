use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loqc_cli::builtin;
use loqc_cli::{run_text, CliError, Format, Overrides};

#[derive(Parser)]
#[command(name = "loqc", version, about = "Linear-optical quantum computing experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Args)]
struct Output {
    /// Output format; defaults to the spec's `emit`, then JSON.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment file.
    Run {
        file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Two-photon interference on a beamsplitter.
    Hom {
        #[arg(long, default_value_t = 0.5)]
        reflectivity: f64,
        /// Wavepacket overlap in [0, 1].
        #[arg(long)]
        overlap: Option<f64>,
        /// Sweep the overlap from 0 to 1 in this many steps.
        #[arg(long, conflicts_with = "overlap")]
        sweep: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Heralded KLM CNOT on a basis input.
    CnotHerald {
        #[arg(long, default_value = "10")]
        input: String,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Threshold (click/no-click) detectors.
        #[arg(long)]
        threshold: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Teleported CNOT resource count.
    TeleportCnot {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "10")]
        input: String,
        #[command(flatten)]
        output: Output,
    },
    /// Single-qubit rotation on a five-node linear cluster.
    ClusterDemo {
        /// Three measurement angles in degrees.
        #[arg(long, value_delimiter = ',', default_values_t = [30.0, 45.0, 60.0], allow_negative_numbers = true)]
        angles: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
}

fn execute(cmd: Command) -> Result<(String, Option<PathBuf>), CliError> {
    let (text, overrides, out) = match cmd {
        Command::Run { file, seed, trials, output } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|source| CliError::Io { path: file.display().to_string(), source })?;
            (text, Overrides { seed, trials, format: output.format.map(Into::into) }, output.out)
        }
        Command::Hom { reflectivity, overlap, sweep, output } => (
            builtin::hom(reflectivity, overlap, sweep),
            Overrides { format: output.format.map(Into::into), ..Overrides::default() },
            output.out,
        ),
        Command::CnotHerald { input, eta, threshold, output } => (
            builtin::cnot_herald(&input, eta, !threshold),
            Overrides { format: output.format.map(Into::into), ..Overrides::default() },
            output.out,
        ),
        Command::TeleportCnot { trials, seed, input, output } => (
            builtin::teleport_cnot(&input, trials, seed),
            Overrides { format: output.format.map(Into::into), ..Overrides::default() },
            output.out,
        ),
        Command::ClusterDemo { angles, seed, trials, output } => (
            builtin::cluster_demo(
                angles.try_into().map_err(|_| CliError::Override("--angles takes exactly three values".into()))?,
                seed,
            ),
            Overrides { trials, format: output.format.map(Into::into), ..Overrides::default() },
            output.out,
        ),
    };
    Ok((run_text(&text, &overrides)?, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(cli.command).and_then(|(rendered, out)| match out {
        Some(path) => {
            std::fs::write(&path, rendered).map_err(|source| CliError::Io { path: path.display().to_string(), source })
        }
        None => {
            print!("{rendered}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
