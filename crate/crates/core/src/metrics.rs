//! Convergence metrics over simulation traces.
//!
//! References oscillate by design (the dither never stops), so tolerance
//! checks apply to the mean of each reference over one of its own dither
//! periods, not to instantaneous values.

use crate::error::{Error, Result};
use crate::sim::SimTrace;

/// Seconds-per-channel averaging window: one full dither period, rounded to
/// whole samples.
fn period_samples(dither_frequency: f64, dt: f64) -> usize {
    ((2.0 * std::f64::consts::PI / dither_frequency) / dt).round() as usize
}

/// Forward-looking rolling means of `values` over windows of `n` samples:
/// `out[i] = mean(values[i..i+n])`, defined for `i <= len - n`.
fn rolling_means(values: impl Iterator<Item = f64> + ExactSizeIterator, n: usize) -> Vec<f64> {
    let len = values.len();
    if n == 0 || n > len {
        return Vec::new();
    }
    let mut prefix = Vec::with_capacity(len + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for v in values {
        acc += v;
        prefix.push(acc);
    }
    (0..=len - n)
        .map(|i| (prefix[i + n] - prefix[i]) / n as f64)
        .collect()
}

/// Earliest index from which every defined window mean stays within
/// tolerance, or `None` if the final window is already out (or no window
/// exists at all).
fn settle_index(means: &[f64], target: f64, tol: f64) -> Option<usize> {
    if means.is_empty() {
        return None;
    }
    let mut idx = means.len();
    for (i, m) in means.iter().enumerate().rev() {
        if (m - target).abs() <= tol {
            idx = i;
        } else {
            break;
        }
    }
    if idx == means.len() {
        None
    } else {
        Some(idx)
    }
}

/// Earliest time t* such that from t* onward the period-averaged speed and
/// sideslip references both stay within tolerance of their targets. Returns
/// `f64::INFINITY` when the trace never settles.
pub fn settling_time(
    trace: &SimTrace,
    target_speed: f64,
    target_sideslip: f64,
    tol_speed: f64,
    tol_sideslip: f64,
) -> f64 {
    let n_v = period_samples(trace.speed_dither_frequency, trace.dt);
    let n_s = period_samples(trace.sideslip_dither_frequency, trace.dt);
    let speed_means = rolling_means(trace.records.iter().map(|r| r.speed_ref), n_v);
    let sideslip_means = rolling_means(trace.records.iter().map(|r| r.sideslip_ref), n_s);
    let iv = settle_index(&speed_means, target_speed, tol_speed);
    let is = settle_index(&sideslip_means, target_sideslip, tol_sideslip);
    match (iv, is) {
        (Some(a), Some(b)) => a.max(b) as f64 * trace.dt,
        _ => f64::INFINITY,
    }
}

/// Mean of the final full window of per-record values, using the longest
/// dither period in the trace as the window.
fn final_window_mean(trace: &SimTrace, mut value: impl FnMut(&crate::sim::SimRecord) -> f64) -> f64 {
    let n = period_samples(
        trace
            .speed_dither_frequency
            .min(trace.sideslip_dither_frequency),
        trace.dt,
    )
    .min(trace.records.len());
    let tail = &trace.records[trace.records.len() - n..];
    tail.iter().map(&mut value).sum::<f64>() / n as f64
}

/// Period-averaged terminal state of a run: means of `speed_ref`,
/// `sideslip_ref`, and `cost_measured` over the final full window of the
/// longest dither period.
pub fn final_means(trace: &SimTrace) -> (f64, f64, f64) {
    (
        final_window_mean(trace, |r| r.speed_ref),
        final_window_mean(trace, |r| r.sideslip_ref),
        final_window_mean(trace, |r| r.cost_measured),
    )
}

/// Side-by-side outcome of two runs against the same targets.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub settling_time_a: f64,
    pub settling_time_b: f64,
    /// settling_time_a / settling_time_b; `None` when either run did not
    /// settle.
    pub settling_ratio: Option<f64>,
    pub final_cost_a: f64,
    pub final_cost_b: f64,
    pub final_speed_error_a: f64,
    pub final_speed_error_b: f64,
    pub final_sideslip_error_a: f64,
    pub final_sideslip_error_b: f64,
}

/// Compare two traces (e.g. adaptive vs standard) against shared targets.
pub fn compare_runs(
    trace_a: &SimTrace,
    trace_b: &SimTrace,
    target_speed: f64,
    target_sideslip: f64,
    tol_speed: f64,
    tol_sideslip: f64,
) -> Result<ComparisonReport> {
    if trace_a.dt != trace_b.dt || trace_a.duration != trace_b.duration {
        return Err(Error::MismatchedTraces(format!(
            "dt {} vs {} / duration {} vs {}",
            trace_a.dt, trace_b.dt, trace_a.duration, trace_b.duration
        )));
    }
    let settling_time_a = settling_time(trace_a, target_speed, target_sideslip, tol_speed, tol_sideslip);
    let settling_time_b = settling_time(trace_b, target_speed, target_sideslip, tol_speed, tol_sideslip);
    let settling_ratio = (settling_time_a.is_finite() && settling_time_b.is_finite() && settling_time_b > 0.0)
        .then(|| settling_time_a / settling_time_b);
    Ok(ComparisonReport {
        settling_time_a,
        settling_time_b,
        settling_ratio,
        final_cost_a: final_window_mean(trace_a, |r| r.cost_measured),
        final_cost_b: final_window_mean(trace_b, |r| r.cost_measured),
        final_speed_error_a: final_window_mean(trace_a, |r| r.speed_ref) - target_speed,
        final_speed_error_b: final_window_mean(trace_b, |r| r.speed_ref) - target_speed,
        final_sideslip_error_a: final_window_mean(trace_a, |r| r.sideslip_ref) - target_sideslip,
        final_sideslip_error_b: final_window_mean(trace_b, |r| r.sideslip_ref) - target_sideslip,
    })
}
