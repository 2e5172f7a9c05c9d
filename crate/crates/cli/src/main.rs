use clap::{Parser, Subcommand};
use rangeseek::commands::{self, optimum_degrees};
use rangeseek::config::{load_config, Mode};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Console status line. A consumer hanging up early (`rangeseek … | head`)
/// must not turn a finished command into a panic, so write errors on these
/// advisory lines are dropped; the artifacts on disk are written with
/// checked errors long before we get here.
macro_rules! status {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "rangeseek",
    version,
    about = "Seeks the range-optimal flight condition of a simulated quadcopter online \
             and checks it against a brute-force sweep of the power model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one closed-loop simulation; write its trace CSV and a summary
    Simulate {
        /// Experiment description (TOML); see `generate-config`
        #[arg(long)]
        config: PathBuf,
        /// Override the controller variant on both channels
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Output directory (overrides the config's `output.directory`)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the measurement-noise seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run both variants with matched seeds; write traces and a comparison
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sweep the cost surface; write it and the refined optimum
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the reference config, or write DIR/config.toml with --out DIR
    GenerateConfig {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Simulate {
            config,
            mode,
            out,
            seed,
        } => {
            let cfg = load_config(&config)?;
            let art = commands::cmd_simulate(&cfg, mode, out.as_deref(), seed)?;
            status!("wrote {}", art.trace_path.display());
            status!("wrote {}", art.summary_path.display());
            if art.settling_time.is_finite() {
                status!("settled at {:.1} s", art.settling_time);
            } else {
                status!("did not settle within the run");
            }
        }
        Command::Compare { config, out, seed } => {
            let cfg = load_config(&config)?;
            let art = commands::cmd_compare(&cfg, out.as_deref(), seed)?;
            status!("wrote {}", art.adaptive_trace_path.display());
            status!("wrote {}", art.standard_trace_path.display());
            status!("wrote {}", art.report_path.display());
            match art.report.settling_ratio {
                Some(r) => status!("settling ratio (adaptive / standard): {r:.3}"),
                None => status!("settling ratio: n/a (at least one run did not settle)"),
            }
        }
        Command::Oracle { config, out } => {
            let cfg = load_config(&config)?;
            let art = commands::cmd_oracle(&cfg, out.as_deref())?;
            status!("wrote {}", art.surface_path.display());
            status!("wrote {}", art.optimum_path.display());
            let (v, s, c) = optimum_degrees(&art.refined);
            status!("optimum: speed {v:.5} m/s, sideslip {s:.3} deg, cost {c:.6} W/(m/s)");
        }
        Command::GenerateConfig { out } => {
            if let Some(path) = commands::cmd_generate_config(out.as_deref())? {
                status!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
