//! Extremum-seeking flight-setpoint optimizer with a physics-based plant.
//!
//! The crate has three layers:
//!
//! * [`plant`] — a quasi-static power model of a small multirotor in steady
//!   level flight; its cost (power over speed) is what everything else
//!   minimizes.
//! * [`filter`], [`adapter`], [`channel`], [`controller`] — the
//!   extremum-seeking controller: per-variable dither/demodulate/integrate
//!   channels with either a constant or an adaptive step size.
//! * [`sim`], [`metrics`], [`oracle`] — the closed-loop harness, settling
//!   metrics, and the brute-force grid search the controller is validated
//!   against.

pub mod adapter;
pub mod channel;
pub mod controller;
pub mod error;
pub mod filter;
pub mod metrics;
pub mod oracle;
pub mod plant;
pub mod sim;

pub use adapter::{AdapterConfig, AdapterState};
pub use channel::{Channel, ChannelConfig, ChannelSignals};
pub use controller::Controller;
pub use error::{Error, Result};
pub use filter::{FilterKind, FirstOrderFilter};
pub use metrics::{compare_runs, final_means, settling_time, ComparisonReport};
pub use oracle::{export_surface, grid_search, refine, OracleResult};
pub use plant::{
    drag_coefficients, drag_magnitude, evaluate_cost, flight_range, hover_induced_velocity,
    induced_power, induced_velocity, total_power, trim, FlightCondition, TrimState, VehicleParams,
};
pub use sim::{run_simulation, run_simulation_with, SimConfig, SimRecord, SimTrace};
