//! Brute-force ground truth: exhaustive evaluation of the plant cost over a
//! (speed, sideslip) grid, with optional local refinement around the argmin.
//! The controller is judged against this, never the other way around, so the
//! search makes no smoothness assumptions beyond what the grid resolves.

use crate::error::{Error, Result};
use crate::plant::{evaluate_cost, FlightCondition, VehicleParams};

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub optimal_speed: f64,
    /// Sideslip of the optimum, rad.
    pub optimal_sideslip: f64,
    pub optimal_cost: f64,
    /// Grid cell size (speed, sideslip) of the search that produced this
    /// result.
    pub grid_resolution: (f64, f64),
    /// Speed grid nodes, ascending.
    pub speed_axis: Vec<f64>,
    /// Sideslip grid nodes, ascending, rad.
    pub sideslip_axis: Vec<f64>,
    /// Cost at every node, row-major by sideslip then speed:
    /// `surface[ib * speed_axis.len() + iv]`.
    pub surface: Vec<f64>,
    /// True when the argmin is strictly inside the searched ranges. A
    /// boundary optimum means the domain clipped the real one.
    pub interior: bool,
}

impl OracleResult {
    pub fn speed_range(&self) -> (f64, f64) {
        (
            *self.speed_axis.first().unwrap(),
            *self.speed_axis.last().unwrap(),
        )
    }

    pub fn sideslip_range(&self) -> (f64, f64) {
        (
            *self.sideslip_axis.first().unwrap(),
            *self.sideslip_axis.last().unwrap(),
        )
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
        .collect()
}

fn search(
    params: &VehicleParams,
    speed_range: (f64, f64),
    sideslip_range: (f64, f64),
    steps: (usize, usize),
) -> Result<OracleResult> {
    let speed_axis = linspace(speed_range.0, speed_range.1, steps.0);
    let sideslip_axis = linspace(sideslip_range.0, sideslip_range.1, steps.1);
    let mut surface = Vec::with_capacity(steps.0 * steps.1);
    let mut best: Option<(f64, f64, f64, usize, usize)> = None;
    for (ib, &b) in sideslip_axis.iter().enumerate() {
        for (iv, &v) in speed_axis.iter().enumerate() {
            let c = evaluate_cost(params, FlightCondition::new(v, b))?;
            surface.push(c);
            let better = match &best {
                None => true,
                // ties break toward lower speed, then lower sideslip
                Some((bc, bv, bb, _, _)) => {
                    c < *bc || (c == *bc && (v < *bv || (v == *bv && b < *bb)))
                }
            };
            if better {
                best = Some((c, v, b, iv, ib));
            }
        }
    }
    let (optimal_cost, optimal_speed, optimal_sideslip, iv, ib) = best.unwrap();
    let interior = iv > 0 && iv < steps.0 - 1 && ib > 0 && ib < steps.1 - 1;
    Ok(OracleResult {
        optimal_speed,
        optimal_sideslip,
        optimal_cost,
        grid_resolution: (
            (speed_range.1 - speed_range.0) / (steps.0 - 1) as f64,
            (sideslip_range.1 - sideslip_range.0) / (steps.1 - 1) as f64,
        ),
        speed_axis,
        sideslip_axis,
        surface,
        interior,
    })
}

/// Evaluate the cost at every node of the grid and return the argmin with its
/// full surface. Ties break toward lower speed, then lower sideslip, so the
/// result does not depend on evaluation order.
pub fn grid_search(
    params: &VehicleParams,
    speed_range: (f64, f64),
    sideslip_range: (f64, f64),
    steps: (usize, usize),
) -> Result<OracleResult> {
    if !(speed_range.0 > 0.0) {
        return Err(Error::InvalidInput(format!(
            "grid_search requires speed_range.min > 0, got {}",
            speed_range.0
        )));
    }
    if !(speed_range.0 < speed_range.1) || !(sideslip_range.0 < sideslip_range.1) {
        return Err(Error::InvalidInput(
            "grid_search ranges must be non-degenerate".to_string(),
        ));
    }
    if steps.0 < 16 || steps.1 < 16 {
        return Err(Error::InvalidInput(format!(
            "grid_search needs at least 16 steps per axis, got {steps:?}"
        )));
    }
    search(params, speed_range, sideslip_range, steps)
}

/// Repeated 5×5 local searches in a ±1-cell window around the current argmin,
/// halving the resolution per level. The window is clipped to the original
/// search domain. `levels = 0` returns the input unchanged.
pub fn refine(params: &VehicleParams, coarse: &OracleResult, levels: u32) -> Result<OracleResult> {
    let speed_domain = coarse.speed_range();
    let sideslip_domain = coarse.sideslip_range();
    let mut current = coarse.clone();
    for _ in 0..levels {
        let (dv, db) = current.grid_resolution;
        let v_lo = (current.optimal_speed - dv).max(speed_domain.0);
        let v_hi = (current.optimal_speed + dv).min(speed_domain.1);
        let b_lo = (current.optimal_sideslip - db).max(sideslip_domain.0);
        let b_hi = (current.optimal_sideslip + db).min(sideslip_domain.1);
        let mut refined = search(params, (v_lo, v_hi), (b_lo, b_hi), (5, 5))?;
        refined.interior = refined.optimal_speed > speed_domain.0
            && refined.optimal_speed < speed_domain.1
            && refined.optimal_sideslip > sideslip_domain.0
            && refined.optimal_sideslip < sideslip_domain.1;
        current = refined;
    }
    Ok(current)
}

/// Long-format rows `(speed, sideslip, cost)`, row-major by sideslip then
/// speed, for plotting or CSV export.
pub fn export_surface(result: &OracleResult) -> Vec<(f64, f64, f64)> {
    let nv = result.speed_axis.len();
    result
        .surface
        .iter()
        .enumerate()
        .map(|(idx, &c)| (result.speed_axis[idx % nv], result.sideslip_axis[idx / nv], c))
        .collect()
}
