//! Writers for the trace/surface CSVs and the human-readable reports.
//!
//! CSV floats carry nine significant digits; angles are written in degrees.

use crate::config::DEG;
use rangeseek_core::{export_surface, ComparisonReport, OracleResult, SimTrace};
use std::io::{self, Write};

pub const TRACE_HEADER: &str = "t,speed_ref,sideslip_ref,speed_actual,sideslip_actual,\
power_measured,cost_measured,q_lp_v,q_lp_s,g_v,g_s";

pub const SURFACE_HEADER: &str = "speed,sideslip,cost";

fn num(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn write_trace_csv(w: &mut impl Write, trace: &SimTrace, decimation: usize) -> io::Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for (i, r) in trace.records.iter().enumerate() {
        if i % decimation != 0 {
            continue;
        }
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            num(r.t),
            num(r.speed_ref),
            num(r.sideslip_ref / DEG),
            num(r.speed_actual),
            num(r.sideslip_actual / DEG),
            num(r.power_measured),
            num(r.cost_measured),
            num(r.q_lp_v),
            num(r.q_lp_s),
            num(r.g_v),
            num(r.g_s),
        )?;
    }
    Ok(())
}

/// The coarse sweep in long format, row-major by sideslip then speed.
pub fn write_surface_csv(w: &mut impl Write, oracle: &OracleResult) -> io::Result<()> {
    writeln!(w, "{SURFACE_HEADER}")?;
    for (speed, sideslip, cost) in export_surface(oracle) {
        writeln!(w, "{},{},{}", num(speed), num(sideslip / DEG), num(cost))?;
    }
    Ok(())
}

pub fn optimum_line(refined: &OracleResult, grid: (usize, usize), levels: u32) -> String {
    format!(
        "optimum: speed = {:.9} m/s, sideslip = {:.9} deg, cost = {:.9} W/(m/s) \
         [{}x{} grid, {} refinement levels, {}]",
        refined.optimal_speed,
        refined.optimal_sideslip / DEG,
        refined.optimal_cost,
        grid.0,
        grid.1,
        levels,
        if refined.interior { "interior" } else { "boundary" },
    )
}

pub struct RunReport<'a> {
    pub mode_label: &'a str,
    pub seed: u64,
    pub trace: &'a SimTrace,
    pub initial_speed: f64,
    /// rad
    pub initial_sideslip: f64,
    pub oracle: &'a OracleResult,
    pub settling_time: f64,
    pub tol_speed: f64,
    /// rad
    pub tol_sideslip: f64,
    pub final_speed: f64,
    /// rad
    pub final_sideslip: f64,
    pub final_cost: f64,
}

pub fn simulate_summary(r: &RunReport) -> String {
    let settled = if r.settling_time.is_finite() {
        format!("{:.1} s", r.settling_time)
    } else {
        "not reached within the run".to_string()
    };
    format!(
        "run summary\n\
         ===========\n\
         mode:              {}\n\
         seed:              {}\n\
         timestep:          {} s, duration {} s ({} samples)\n\
         initial reference: speed {:.3} m/s, sideslip {:.2} deg\n\
         oracle optimum:    speed {:.5} m/s, sideslip {:.3} deg, cost {:.6} W/(m/s)\n\
         final (period-averaged over the slowest dither):\n\
         \x20 speed {:.4} m/s, sideslip {:.3} deg, cost {:.4} W/(m/s)\n\
         settling time:     {}\n\
         \x20 (first time the period-averaged references stay within {:.3} m/s and\n\
         \x20 {:.2} deg of the oracle optimum)\n",
        r.mode_label,
        r.seed,
        r.trace.dt,
        r.trace.duration,
        r.trace.len(),
        r.initial_speed,
        r.initial_sideslip / DEG,
        r.oracle.optimal_speed,
        r.oracle.optimal_sideslip / DEG,
        r.oracle.optimal_cost,
        r.final_speed,
        r.final_sideslip / DEG,
        r.final_cost,
        settled,
        r.tol_speed,
        r.tol_sideslip / DEG,
    )
}

pub struct ComparePaths<'a> {
    pub adaptive: &'a str,
    pub standard: &'a str,
}

pub fn comparison_text(
    report: &ComparisonReport,
    oracle: &OracleResult,
    seed: u64,
    initial_speed: f64,
    initial_sideslip: f64,
    tol_speed: f64,
    tol_sideslip: f64,
    paths: &ComparePaths,
) -> String {
    let fmt_settle = |t: f64| {
        if t.is_finite() {
            format!("{t:.1} s")
        } else {
            "never".to_string()
        }
    };
    let ratio = match report.settling_ratio {
        Some(r) => format!("{r:.3}"),
        None => "n/a (at least one run did not settle)".to_string(),
    };
    format!(
        "adaptive vs standard comparison\n\
         ===============================\n\
         seed:              {} (matched)\n\
         initial reference: speed {:.3} m/s, sideslip {:.2} deg\n\
         target (oracle):   speed {:.5} m/s, sideslip {:.3} deg, cost {:.6} W/(m/s)\n\
         tolerance:         {:.3} m/s, {:.2} deg on period-averaged references\n\
         \n\
         variant    settling   final cost   speed err    sideslip err\n\
         adaptive   {:<10} {:<12.4} {:<+12.4} {:<+.3} deg\n\
         standard   {:<10} {:<12.4} {:<+12.4} {:<+.3} deg\n\
         \n\
         settling ratio (adaptive / standard): {}\n\
         \n\
         traces: {} , {}\n",
        seed,
        initial_speed,
        initial_sideslip / DEG,
        oracle.optimal_speed,
        oracle.optimal_sideslip / DEG,
        oracle.optimal_cost,
        tol_speed,
        tol_sideslip / DEG,
        fmt_settle(report.settling_time_a),
        report.final_cost_a,
        report.final_speed_error_a,
        report.final_sideslip_error_a / DEG,
        fmt_settle(report.settling_time_b),
        report.final_cost_b,
        report.final_speed_error_b,
        report.final_sideslip_error_b / DEG,
        ratio,
        paths.adaptive,
        paths.standard,
    )
}
