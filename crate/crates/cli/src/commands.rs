//! Subcommand bodies. Each returns the paths it wrote (plus the headline
//! numbers) so both `main` and the integration tests can use them directly.

use crate::config::{ExperimentConfig, Mode, DEFAULT_CONFIG_TOML, DEG};
use crate::output;
use anyhow::{Context, Result};
use rangeseek_core::{
    compare_runs, final_means, grid_search, refine, run_simulation, settling_time,
    ComparisonReport, OracleResult, SimTrace,
};
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

pub struct SimulateArtifacts {
    pub trace_path: PathBuf,
    pub summary_path: PathBuf,
    pub settling_time: f64,
    pub oracle: OracleResult,
}

pub struct CompareArtifacts {
    pub adaptive_trace_path: PathBuf,
    pub standard_trace_path: PathBuf,
    pub report_path: PathBuf,
    pub report: ComparisonReport,
    pub oracle: OracleResult,
}

pub struct OracleArtifacts {
    pub surface_path: PathBuf,
    pub optimum_path: PathBuf,
    pub refined: OracleResult,
}

fn out_dir(config: &ExperimentConfig, out: Option<&Path>) -> Result<PathBuf> {
    let dir = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(&config.output.directory));
    fs::create_dir_all(&dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    Ok(dir)
}

/// Ground truth the run reports are scored against: full sweep of the
/// configured domain, then local refinement around the argmin.
pub fn oracle_target(config: &ExperimentConfig) -> Result<OracleResult> {
    let params = config.vehicle_params();
    let (speed_range, sideslip_range, steps) = config.oracle_domain();
    let coarse = grid_search(&params, speed_range, sideslip_range, steps)
        .context("oracle grid search failed")?;
    refine(&params, &coarse, config.domain.refine_levels).context("oracle refinement failed")
}

fn write_trace(path: &Path, trace: &SimTrace, decimation: usize) -> Result<()> {
    let mut w = BufWriter::new(
        File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
    );
    output::write_trace_csv(&mut w, trace, decimation)?;
    w.flush()?;
    Ok(())
}

fn mode_label(config: &ExperimentConfig, mode_override: Option<Mode>) -> String {
    let (mv, ms) = config.resolved_modes(mode_override);
    if mv == ms {
        mv.to_string()
    } else {
        "mixed".to_string()
    }
}

pub fn cmd_simulate(
    config: &ExperimentConfig,
    mode: Option<Mode>,
    out: Option<&Path>,
    seed: Option<u64>,
) -> Result<SimulateArtifacts> {
    let dir = out_dir(config, out)?;
    let sim = config.sim_config(mode, seed);
    let trace = run_simulation(&sim)?;
    let oracle = oracle_target(config)?;

    let tol_speed = sim.speed_channel.dither_amplitude;
    let tol_sideslip = sim.sideslip_channel.dither_amplitude;
    let settled = settling_time(
        &trace,
        oracle.optimal_speed,
        oracle.optimal_sideslip,
        tol_speed,
        tol_sideslip,
    );
    let (final_speed, final_sideslip, final_cost) = final_means(&trace);

    let label = mode_label(config, mode);
    let trace_path = dir.join(format!("trace-{label}.csv"));
    write_trace(&trace_path, &trace, config.output.decimation)?;

    let summary = output::simulate_summary(&output::RunReport {
        mode_label: &label,
        seed: sim.seed,
        trace: &trace,
        initial_speed: sim.speed_channel.initial_setpoint,
        initial_sideslip: sim.sideslip_channel.initial_setpoint,
        oracle: &oracle,
        settling_time: settled,
        tol_speed,
        tol_sideslip,
        final_speed,
        final_sideslip,
        final_cost,
    });
    let summary_path = dir.join(format!("summary-{label}.txt"));
    fs::write(&summary_path, summary)
        .with_context(|| format!("cannot write {}", summary_path.display()))?;

    Ok(SimulateArtifacts {
        trace_path,
        summary_path,
        settling_time: settled,
        oracle,
    })
}

pub fn cmd_compare(
    config: &ExperimentConfig,
    out: Option<&Path>,
    seed: Option<u64>,
) -> Result<CompareArtifacts> {
    let dir = out_dir(config, out)?;
    let sim_a = config.sim_config(Some(Mode::Adaptive), seed);
    let sim_b = config.sim_config(Some(Mode::Standard), seed);

    // the two runs share nothing mutable, so let them race
    let (trace_a, trace_b) = std::thread::scope(|s| {
        let ha = s.spawn(|| run_simulation(&sim_a));
        let hb = s.spawn(|| run_simulation(&sim_b));
        (ha.join(), hb.join())
    });
    let trace_a = trace_a.expect("adaptive run panicked")?;
    let trace_b = trace_b.expect("standard run panicked")?;

    let oracle = oracle_target(config)?;
    let tol_speed = sim_a.speed_channel.dither_amplitude;
    let tol_sideslip = sim_a.sideslip_channel.dither_amplitude;
    let report = compare_runs(
        &trace_a,
        &trace_b,
        oracle.optimal_speed,
        oracle.optimal_sideslip,
        tol_speed,
        tol_sideslip,
    )?;

    let adaptive_trace_path = dir.join("trace-adaptive.csv");
    let standard_trace_path = dir.join("trace-standard.csv");
    write_trace(&adaptive_trace_path, &trace_a, config.output.decimation)?;
    write_trace(&standard_trace_path, &trace_b, config.output.decimation)?;

    let text = output::comparison_text(
        &report,
        &oracle,
        sim_a.seed,
        sim_a.speed_channel.initial_setpoint,
        sim_a.sideslip_channel.initial_setpoint,
        tol_speed,
        tol_sideslip,
        &output::ComparePaths {
            adaptive: &adaptive_trace_path.display().to_string(),
            standard: &standard_trace_path.display().to_string(),
        },
    );
    let report_path = dir.join("comparison.txt");
    fs::write(&report_path, text)
        .with_context(|| format!("cannot write {}", report_path.display()))?;

    Ok(CompareArtifacts {
        adaptive_trace_path,
        standard_trace_path,
        report_path,
        report,
        oracle,
    })
}

pub fn cmd_oracle(config: &ExperimentConfig, out: Option<&Path>) -> Result<OracleArtifacts> {
    let dir = out_dir(config, out)?;
    let params = config.vehicle_params();
    let (speed_range, sideslip_range, steps) = config.oracle_domain();
    let coarse = grid_search(&params, speed_range, sideslip_range, steps)?;
    let refined = refine(&params, &coarse, config.domain.refine_levels)?;

    let surface_path = dir.join("surface.csv");
    let mut w = BufWriter::new(
        File::create(&surface_path)
            .with_context(|| format!("cannot create {}", surface_path.display()))?,
    );
    output::write_surface_csv(&mut w, &coarse)?;
    w.flush()?;

    let optimum_path = dir.join("optimum.txt");
    let line = output::optimum_line(&refined, steps, config.domain.refine_levels);
    fs::write(&optimum_path, format!("{line}\n"))
        .with_context(|| format!("cannot write {}", optimum_path.display()))?;

    Ok(OracleArtifacts {
        surface_path,
        optimum_path,
        refined,
    })
}

/// Write the reference config to `DIR/config.toml`, or to stdout when no
/// directory is given. Returns the written path, if any.
pub fn cmd_generate_config(out: Option<&Path>) -> Result<Option<PathBuf>> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)
                .with_context(|| format!("cannot create output directory {}", dir.display()))?;
            let path = dir.join("config.toml");
            fs::write(&path, DEFAULT_CONFIG_TOML)
                .with_context(|| format!("cannot write {}", path.display()))?;
            Ok(Some(path))
        }
        None => {
            // Stdout is the artifact here, so surface real write failures;
            // a closed pipe just means the reader has seen enough.
            match io::stdout().write_all(DEFAULT_CONFIG_TOML.as_bytes()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    Err(e).context("cannot write the config template to stdout")?
                }
                _ => {}
            }
            Ok(None)
        }
    }
}

/// Degree-flavoured view of the refined optimum for console one-liners.
pub fn optimum_degrees(oracle: &OracleResult) -> (f64, f64, f64) {
    (
        oracle.optimal_speed,
        oracle.optimal_sideslip / DEG,
        oracle.optimal_cost,
    )
}
