//! Closed-loop harness: the controller commands speed/sideslip references,
//! the vehicle tracks them through a first-order lag, and the plant answers
//! with a noisy power reading whose cost is fed back on the next step.

use crate::channel::ChannelConfig;
use crate::controller::Controller;
use crate::error::{Error, Result};
use crate::plant::{evaluate_cost, FlightCondition, VehicleParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    /// Controller/measurement timestep, s.
    pub dt: f64,
    /// Simulated run length, s.
    pub duration: f64,
    /// Seed for the measurement-noise stream.
    pub seed: u64,
    /// Standard deviation of the additive Gaussian noise on the power
    /// measurement, W.
    pub power_noise_std: f64,
    /// First-order tracking lag from reference to actual, s. Zero means the
    /// vehicle follows the reference exactly.
    pub tracking_time_constant: f64,
    pub vehicle: VehicleParams,
    pub speed_channel: ChannelConfig,
    pub sideslip_channel: ChannelConfig,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.vehicle.validate()?;
        self.speed_channel.validate()?;
        self.sideslip_channel.validate()?;
        if !(self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "dt must be > 0, got {}",
                self.dt
            )));
        }
        let max_cutoff = self
            .speed_channel
            .hp_cutoff
            .max(self.speed_channel.lp_cutoff)
            .max(self.sideslip_channel.hp_cutoff)
            .max(self.sideslip_channel.lp_cutoff);
        if self.dt * max_cutoff >= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "dt {} is too coarse for filter cutoff {max_cutoff} rad/s \
                 (need dt * cutoff < 1)",
                self.dt
            )));
        }
        let min_freq = self
            .speed_channel
            .dither_frequency
            .min(self.sideslip_channel.dither_frequency);
        let max_period = 2.0 * std::f64::consts::PI / min_freq;
        if self.duration < 10.0 * max_period {
            return Err(Error::InvalidConfig(format!(
                "duration {} s is shorter than 10 dither periods ({} s)",
                self.duration,
                10.0 * max_period
            )));
        }
        if !(self.power_noise_std >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "power_noise_std must be >= 0, got {}",
                self.power_noise_std
            )));
        }
        if !(self.tracking_time_constant >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tracking_time_constant must be >= 0, got {}",
                self.tracking_time_constant
            )));
        }
        Ok(())
    }
}

/// Everything observable at one step of the loop.
#[derive(Debug, Clone, Copy)]
pub struct SimRecord {
    pub t: f64,
    pub speed_ref: f64,
    pub sideslip_ref: f64,
    pub speed_actual: f64,
    pub sideslip_actual: f64,
    pub power_true: f64,
    pub power_measured: f64,
    pub cost_measured: f64,
    pub q_lp_v: f64,
    pub q_lp_s: f64,
    pub g_v: f64,
    pub g_s: f64,
    pub setpoint_v: f64,
    pub setpoint_s: f64,
}

#[derive(Debug, Clone)]
pub struct SimTrace {
    pub dt: f64,
    pub duration: f64,
    /// Dither frequency of the speed channel, rad/s (defines the averaging
    /// period for settling metrics).
    pub speed_dither_frequency: f64,
    /// Dither frequency of the sideslip channel, rad/s.
    pub sideslip_dither_frequency: f64,
    pub records: Vec<SimRecord>,
}

impl SimTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Run the closed loop against the vehicle power model.
pub fn run_simulation(config: &SimConfig) -> Result<SimTrace> {
    let vehicle = config.vehicle;
    run_simulation_with(config, |speed, sideslip| {
        let state = crate::plant::trim(&vehicle, FlightCondition::new(speed, sideslip))?;
        Ok(state.total_power)
    })
}

/// Run the closed loop against an arbitrary power source `power_of(speed,
/// sideslip)`. The cost fed to the controller is always measured power over
/// actual speed.
pub fn run_simulation_with<F>(config: &SimConfig, mut power_of: F) -> Result<SimTrace>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    config.validate()?;
    let mut controller = Controller::new(config.speed_channel, config.sideslip_channel)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let noise = Normal::new(0.0, config.power_noise_std)
        .map_err(|e| Error::InvalidConfig(format!("power noise: {e}")))?;

    let steps = (config.duration / config.dt).floor() as usize;
    let mut records = Vec::with_capacity(steps);

    let mut speed_actual = config.speed_channel.initial_setpoint;
    let mut sideslip_actual = config.sideslip_channel.initial_setpoint;
    let tau = config.tracking_time_constant;
    let lag = if tau > 0.0 {
        (config.dt / tau).min(1.0)
    } else {
        1.0
    };

    // The controller consumes the measurement taken on the previous step, so
    // the very first step needs one taken at the initial operating point.
    let mut cost_measured =
        (power_of(speed_actual, sideslip_actual)? + noise.sample(&mut rng)) / speed_actual;

    for i in 0..steps {
        let t = i as f64 * config.dt;
        let (speed_ref, sideslip_ref) = controller.step(cost_measured, t, config.dt)?;
        speed_actual += lag * (speed_ref - speed_actual);
        sideslip_actual += lag * (sideslip_ref - sideslip_actual);
        let power_true = power_of(speed_actual, sideslip_actual)?;
        let power_measured = power_true + noise.sample(&mut rng);
        cost_measured = power_measured / speed_actual;
        let sv = controller.speed().signals();
        let ss = controller.sideslip().signals();
        records.push(SimRecord {
            t,
            speed_ref,
            sideslip_ref,
            speed_actual,
            sideslip_actual,
            power_true,
            power_measured,
            cost_measured,
            q_lp_v: sv.q_lp,
            q_lp_s: ss.q_lp,
            g_v: sv.gradient,
            g_s: ss.gradient,
            setpoint_v: controller.speed().setpoint(),
            setpoint_s: controller.sideslip().setpoint(),
        });
    }

    Ok(SimTrace {
        dt: config.dt,
        duration: config.duration,
        speed_dither_frequency: config.speed_channel.dither_frequency,
        sideslip_dither_frequency: config.sideslip_channel.dither_frequency,
        records,
    })
}

/// Convenience used by tests and the oracle-relative metrics: evaluate the
/// deterministic plant cost at one condition.
pub fn plant_cost(vehicle: &VehicleParams, speed: f64, sideslip: f64) -> Result<f64> {
    evaluate_cost(vehicle, FlightCondition::new(speed, sideslip))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapter::AdapterConfig;

    fn table_config(adaptive: bool) -> SimConfig {
        let adapter = adaptive.then(AdapterConfig::default);
        SimConfig {
            dt: 0.01,
            duration: 300.0,
            seed: 1,
            power_noise_std: 2.0,
            tracking_time_constant: 0.3,
            vehicle: VehicleParams::default(),
            speed_channel: ChannelConfig {
                dither_amplitude: 0.15,
                dither_frequency: 1.0,
                hp_cutoff: 1.0,
                lp_cutoff: 1.0,
                gain: if adaptive { 0.1 } else { 0.025 },
                initial_setpoint: 2.2,
                bounds: (0.2, 8.0),
                adapter,
            },
            sideslip_channel: ChannelConfig {
                dither_amplitude: 7.5_f64.to_radians(),
                dither_frequency: 0.5,
                hp_cutoff: 0.5,
                lp_cutoff: 0.5,
                gain: if adaptive { 0.1 } else { 0.02 },
                initial_setpoint: 50.0_f64.to_radians(),
                bounds: (0.0, std::f64::consts::PI),
                adapter,
            },
        }
    }

    #[test]
    fn record_count_is_duration_over_dt() {
        let mut cfg = table_config(true);
        cfg.duration = 130.0;
        let trace = run_simulation(&cfg).unwrap();
        assert_eq!(trace.len(), 13_000);
        for (i, r) in trace.records.iter().enumerate() {
            assert_eq!(r.t, i as f64 * cfg.dt);
        }
    }

    #[test]
    fn fixed_seed_reproduces_the_trace() {
        let mut cfg = table_config(true);
        cfg.duration = 130.0;
        let a = run_simulation(&cfg).unwrap();
        let b = run_simulation(&cfg).unwrap();
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert_eq!(ra.speed_ref.to_bits(), rb.speed_ref.to_bits());
            assert_eq!(ra.sideslip_ref.to_bits(), rb.sideslip_ref.to_bits());
            assert_eq!(ra.power_measured.to_bits(), rb.power_measured.to_bits());
        }
    }

    #[test]
    fn zero_noise_cost_matches_plant_exactly() {
        let mut cfg = table_config(false);
        cfg.duration = 130.0;
        cfg.power_noise_std = 0.0;
        let trace = run_simulation(&cfg).unwrap();
        for r in trace.records.iter().step_by(500) {
            let expected = plant_cost(&cfg.vehicle, r.speed_actual, r.sideslip_actual).unwrap();
            assert_eq!(r.cost_measured.to_bits(), expected.to_bits());
        }
    }

    #[test]
    fn constant_cost_plant_keeps_references_on_the_dither() {
        let mut cfg = table_config(false);
        cfg.duration = 130.0;
        cfg.power_noise_std = 0.0;
        cfg.tracking_time_constant = 0.0;
        // power proportional to speed makes the measured cost constant
        let trace = run_simulation_with(&cfg, |speed, _| Ok(25.0 * speed)).unwrap();
        for r in trace.records.iter() {
            let expected = 2.2 + 0.15 * (1.0 * r.t).sin();
            assert!(
                (r.speed_ref - expected).abs() < 1e-12,
                "t={} ref={} expected={expected}",
                r.t,
                r.speed_ref
            );
        }
    }

    #[test]
    fn tracking_lag_converges_to_reference() {
        let mut cfg = table_config(false);
        cfg.duration = 130.0;
        cfg.power_noise_std = 0.0;
        cfg.tracking_time_constant = 0.5;
        // freeze both integrators so the references are pure sinusoids, then
        // check the actuals follow with the first-order lag's gain
        cfg.speed_channel.gain = 0.0;
        cfg.sideslip_channel.gain = 0.0;
        let trace = run_simulation_with(&cfg, |speed, _| Ok(25.0 * speed)).unwrap();
        // after a few time constants the lagged response of a sinusoid has
        // amplitude a/sqrt(1+(w*tau)^2); check against samples
        let gain = 1.0 / (1.0f64 + 0.5 * 0.5).sqrt();
        let late: Vec<_> = trace.records.iter().skip(5_000).collect();
        let max_act = late
            .iter()
            .map(|r| (r.speed_actual - 2.2).abs())
            .fold(0.0, f64::max);
        assert!(
            (max_act - 0.15 * gain).abs() < 0.01,
            "lagged amplitude {max_act} vs expected {}",
            0.15 * gain
        );
    }

    #[test]
    fn rejects_too_short_duration() {
        let mut cfg = table_config(true);
        cfg.duration = 60.0; // < 10 sideslip dither periods (125.7 s)
        assert!(matches!(
            run_simulation(&cfg),
            Err(Error::InvalidConfig(_))
        ));
    }
}
