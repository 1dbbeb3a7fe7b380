use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use linopt_cli::commands::{cmd_planes, cmd_rates, cmd_run, cmd_scheme, cmd_sweep, CliError, SchemeName};
use linopt_cli::report::{Format, Render};

#[derive(Parser, Debug)]
#[command(name = "linopt", version, about = "Polarization linear-optics circuit simulator")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a built-in scheme
    Scheme {
        #[arg(long, value_enum)]
        name: SchemeName,
        /// Photon number (GHZ only; defaults to 3)
        #[arg(long)]
        n: Option<usize>,
    },
    /// Success probability and fidelity of GHZ-n for n = 2..=n_max
    Sweep {
        #[arg(long)]
        n_max: usize,
    },
    /// Execute a JSON circuit file
    Run { file: PathBuf },
    /// Source statistics and GHZ production rates
    Rates {
        /// Mean photon pairs per pulse
        #[arg(long, allow_negative_numbers = true)]
        w: f64,
        /// Pulse repetition rate in Hz
        #[arg(long, allow_negative_numbers = true)]
        rep_rate: f64,
        /// GHZ size; the scheme succeeds with probability 2^(1-n)
        #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
        n: usize,
    },
    /// States of the three-photon circuit at planes P1, P2, P3
    Planes,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let rendered: Result<String, CliError> = match cli.command {
        Command::Scheme { name, n } => cmd_scheme(name, n).map(|r| r.render(cli.format)),
        Command::Sweep { n_max } => cmd_sweep(n_max).map(|r| r.render(cli.format)),
        Command::Run { file } => cmd_run(&file).map(|r| r.render(cli.format)),
        Command::Rates { w, rep_rate, n } => cmd_rates(w, rep_rate, n).map(|r| r.render(cli.format)),
        Command::Planes => cmd_planes().map(|r| r.render(cli.format)),
    };
    match rendered {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
