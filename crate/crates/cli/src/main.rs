mod commands;
mod error;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::Format;

/// Holographic Fourier encoding: encode, crop, recover, and measure.
#[derive(Debug, Parser)]
#[command(name = "holo", version)]
pub struct Cli {
    /// Seed for every random draw (phase fields, channels, trials).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Report format on stdout and in --report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Also write the report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a PGM image or CSV signal into a .holo hologram.
    Encode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Store the raw phase field instead of its seed.
        #[arg(long)]
        embed_phase: bool,
    },
    /// Recover amplitudes from a .holo file or a directory of .hpkt packets.
    Recover {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Encode, keep only a window of the hologram, recover, and score.
    CropRecover {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Monte Carlo windowed-energy (or all-ones weight) moment experiment.
    Stats {
        /// Signal length M.
        #[arg(long, default_value_t = 256)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        window_start: usize,
        #[arg(long, default_value_t = 64)]
        window_len: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Constant signal level I0.
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// Sum `size` unit phasors directly instead of running windowed recovery.
        #[arg(long)]
        unit_weights: bool,
    },
    /// Continuous-transform demo: regularized inversion and box-filter reconstruction.
    ChftDemo {
        #[arg(long, value_enum, default_value_t = TestFunction::RaisedCosine)]
        function: TestFunction,
        /// Number of grid samples.
        #[arg(long, default_value_t = 512)]
        size: usize,
        /// Regularization index; repeat for several.
        #[arg(long = "reg-n", default_values_t = [4.0, 8.0, 16.0, 32.0])]
        reg_n: Vec<f64>,
        /// Knot spacing of the continuous phase used for inversion.
        #[arg(long, default_value_t = 0.5)]
        phase_spacing: f64,
        /// Box-filter cutoff k; enables the reconstruction experiment.
        #[arg(long)]
        cutoff_k: Option<f64>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Packetize a hologram, pass it through a lossy channel, and render progressively.
    ProgressiveSim {
        /// PGM image or CSV signal; defaults to a constant signal of --size samples.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        size: usize,
        #[arg(long, default_value_t = 8)]
        packets: usize,
        #[arg(long, default_value_t = 0.0)]
        loss_rate: f64,
        /// Shuffle delivered packets.
        #[arg(long)]
        reorder: bool,
        /// Channel seed; defaults to --seed.
        #[arg(long)]
        channel_seed: Option<u64>,
        /// Final render.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write each delivered packet here as packet_NNNN.hpkt.
        #[arg(long)]
        packet_dir: Option<PathBuf>,
    },
    /// Run the numeric identity battery.
    IdentitySuite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestFunction {
    RaisedCosine,
    Gaussian,
    Box,
}

/// A window on the leading axis (rows in 2D) and, in 2D, optionally on columns.
#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    #[arg(long)]
    window_start: Option<usize>,
    #[arg(long)]
    window_len: Option<usize>,
    #[arg(long)]
    window_col_start: Option<usize>,
    #[arg(long)]
    window_col_len: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("holo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
