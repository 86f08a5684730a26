//! `ax-goodput`: table export, single-point analysis, curve sweeps and
//! simulator runs for the 802.11ax DL TCP goodput models.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 model infeasible,
//! 3 analytic/simulator validation mismatch.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use ax_goodput::{ModelError, Strategy};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ax-goodput", version, about = "802.11ax DL TCP goodput/delay models")]
pub struct Cli {
    /// TOML file with scenario defaults; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    SuRd,
    SuContention,
    Mu,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::SuRd => Strategy::SuRd,
            StrategyArg::SuContention => Strategy::SuContention,
            StrategyArg::Mu => Strategy::Mu,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    #[value(name = "1A", alias = "1a")]
    F1A,
    #[value(name = "1B", alias = "1b")]
    F1B,
    #[value(name = "1C", alias = "1c")]
    F1C,
    #[value(name = "1D", alias = "1d")]
    F1D,
    #[value(name = "1E", alias = "1e")]
    F1E,
    #[value(name = "1F", alias = "1f")]
    F1F,
    #[value(name = "2")]
    F2,
    #[value(name = "3")]
    F3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Scenario flags shared by `analyze` and `simulate`.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Number of stations (1, 4, 8, 16, 32, 64).
    #[arg(long)]
    pub stations: Option<u32>,
    /// MCS index 0-11.
    #[arg(long)]
    pub mcs: Option<u8>,
    /// TCP payload bytes (1460, 464, 208).
    #[arg(long)]
    pub segment: Option<u64>,
    /// TCP data segments per station per TXOP.
    #[arg(long)]
    pub n: Option<u64>,
    /// One TCP ack per two data segments.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", action = ArgAction::Set)]
    pub delayed_acks: Option<bool>,
    /// Two SIFS in the MU ack exchange (false: three).
    #[arg(long, num_args = 0..=1, default_missing_value = "true", action = ArgAction::Set)]
    pub strict_paper_timing: Option<bool>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Measured cycles.
    #[arg(long)]
    pub cycles: Option<u64>,
    /// Warmup cycles discarded before measuring.
    #[arg(long)]
    pub warmup: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Itemized TXOP timing and goodput of one operating point.
    Analyze {
        #[arg(value_enum)]
        strategy: Option<StrategyArg>,
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Also write the breakdown as JSON.
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
        /// Print the A-MPDU schedule.
        #[arg(long)]
        dump_schedule: bool,
    },
    /// Goodput-vs-delay curves over N, with comparison report.
    Sweep {
        #[arg(value_enum)]
        strategies: Vec<StrategyArg>,
        /// Scenario grid of one of the published figures.
        #[arg(long, value_enum)]
        paper_figure: Option<Figure>,
        #[arg(long, value_delimiter = ',')]
        stations: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        mcs: Vec<u8>,
        #[arg(long, value_delimiter = ',')]
        segment: Vec<u64>,
        #[arg(long, num_args = 0..=1, default_missing_value = "true", action = ArgAction::Set)]
        delayed_acks: Option<bool>,
        /// Sweep with and without delayed acks and report the gain.
        #[arg(long)]
        compare_delayed_acks: bool,
        #[arg(long, num_args = 0..=1, default_missing_value = "true", action = ArgAction::Set)]
        strict_paper_timing: Option<bool>,
        /// Evaluate every k-th N (1 and the cap are always included).
        #[arg(long)]
        stride: Option<u64>,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
    },
    /// Run the simulator for one operating point.
    Simulate {
        #[arg(value_enum)]
        strategy: Option<StrategyArg>,
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        sim: SimArgs,
        /// Replay su-rd/mu deterministically and require equality with the
        /// closed form.
        #[arg(long)]
        validate_analytic: bool,
        /// Per-cycle CSV trace (su-contention).
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
        #[arg(long)]
        dump_schedule: bool,
    },
    /// Dump the embedded PHY tables.
    ExportTables {
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

/// Bad or missing arguments (exit 1).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Deterministic replay disagreed with the closed form (exit 3).
#[derive(Debug)]
pub struct ValidationMismatch(pub String);

impl std::fmt::Display for ValidationMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MISMATCH: {}", self.0)
    }
}

impl std::error::Error for ValidationMismatch {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    if err.downcast_ref::<ValidationMismatch>().is_some() {
        return 3;
    }
    match err.downcast_ref::<ModelError>() {
        Some(ModelError::Config(_)) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            eprintln!("error: {err:#}");
            if code == 1 && err.downcast_ref::<UsageError>().is_some() {
                use clap::CommandFactory;
                eprintln!("\n{}", Cli::command().render_usage());
            }
            ExitCode::from(code)
        }
    }
}
