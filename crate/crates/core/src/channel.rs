//! One extremum-seeking channel: dither injection, demodulation, filtering,
//! and the clamped setpoint integrator, for a single controlled variable.
//!
//! Per step the channel high-passes the measured cost to strip its mean,
//! multiplies by the dither carrier sin(ωt) so the component in phase with
//! the dither rectifies to DC, low-passes that product into a gradient
//! estimate, scales it (directly, or through the step-size adapter), and
//! integrates downhill.

use crate::adapter::{AdapterConfig, AdapterState};
use crate::error::{Error, Result};
use crate::filter::FirstOrderFilter;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    /// Dither amplitude, in the units of the controlled variable.
    pub dither_amplitude: f64,
    /// Dither frequency, rad/s.
    pub dither_frequency: f64,
    /// High-pass cutoff applied to the cost, rad/s.
    pub hp_cutoff: f64,
    /// Low-pass cutoff applied to the demodulated signal, rad/s.
    pub lp_cutoff: f64,
    /// Integrator gain. Zero freezes the setpoint, which is useful for
    /// inspecting the raw gradient estimate.
    pub gain: f64,
    /// Setpoint at t = 0.
    pub initial_setpoint: f64,
    /// Closed interval the setpoint is clamped to. The returned reference may
    /// exceed it by up to the dither amplitude.
    pub bounds: (f64, f64),
    /// Present = adapt the step size; absent = constant-gain descent.
    pub adapter: Option<AdapterConfig>,
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.dither_amplitude > 0.0) {
            return err(format!(
                "dither amplitude must be > 0, got {}",
                self.dither_amplitude
            ));
        }
        if !(self.dither_frequency > 0.0) {
            return err(format!(
                "dither frequency must be > 0, got {}",
                self.dither_frequency
            ));
        }
        if !(self.hp_cutoff > 0.0) || !(self.lp_cutoff > 0.0) {
            return err(format!(
                "filter cutoffs must be > 0, got hp={} lp={}",
                self.hp_cutoff, self.lp_cutoff
            ));
        }
        if !(self.gain >= 0.0) {
            return err(format!("gain must be >= 0, got {}", self.gain));
        }
        let (lo, hi) = self.bounds;
        if !(lo < hi) {
            return err(format!("bounds must satisfy min < max, got [{lo}, {hi}]"));
        }
        if !(self.initial_setpoint >= lo && self.initial_setpoint <= hi) {
            return err(format!(
                "initial setpoint {} outside bounds [{lo}, {hi}]",
                self.initial_setpoint
            ));
        }
        if let Some(a) = &self.adapter {
            if !(a.beta1 >= 0.0 && a.beta1 < 1.0) || !(a.beta2 >= 0.0 && a.beta2 < 1.0) {
                return err(format!(
                    "adapter averaging factors must be in [0, 1), got beta1={} beta2={}",
                    a.beta1, a.beta2
                ));
            }
            if !(a.epsilon > 0.0) {
                return err(format!("adapter epsilon must be > 0, got {}", a.epsilon));
            }
            if !(a.threshold > 0.0) {
                return err(format!(
                    "adapter threshold must be > 0, got {}",
                    a.threshold
                ));
            }
        }
        Ok(())
    }
}

/// Internal signals from the most recent step, for tracing.
#[derive(Debug, Clone, Copy, Default)]
pub struct ChannelSignals {
    /// High-passed cost.
    pub q_hp: f64,
    /// Demodulated product q_hp·sin(ωt).
    pub xi: f64,
    /// Low-passed gradient estimate.
    pub q_lp: f64,
    /// Scaled step fed to the integrator.
    pub gradient: f64,
}

#[derive(Debug, Clone)]
pub struct Channel {
    config: ChannelConfig,
    hp: FirstOrderFilter,
    lp: FirstOrderFilter,
    adapter: Option<AdapterState>,
    setpoint: f64,
    signals: ChannelSignals,
}

impl Channel {
    pub fn new(config: ChannelConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            hp: FirstOrderFilter::high_pass(config.hp_cutoff),
            lp: FirstOrderFilter::low_pass(config.lp_cutoff),
            adapter: config.adapter.map(AdapterState::new),
            setpoint: config.initial_setpoint,
            signals: ChannelSignals::default(),
            config,
        })
    }

    /// Consume one cost measurement at time `t`, advance the setpoint, and
    /// return the dithered reference to command.
    pub fn step(&mut self, cost: f64, t: f64, dt: f64) -> Result<f64> {
        let q_hp = self.hp.step(cost, dt)?;
        let carrier = (self.config.dither_frequency * t).sin();
        let xi = q_hp * carrier;
        let q_lp = self.lp.step(xi, dt)?;
        let gradient = match self.adapter.as_mut() {
            Some(adapter) => adapter.step(q_lp),
            None => q_lp,
        };
        let (lo, hi) = self.config.bounds;
        self.setpoint = (self.setpoint - self.config.gain * gradient * dt).clamp(lo, hi);
        self.signals = ChannelSignals {
            q_hp,
            xi,
            q_lp,
            gradient,
        };
        Ok(self.setpoint + self.config.dither_amplitude * carrier)
    }

    /// Current clamped setpoint (the reference minus its dither).
    pub fn setpoint(&self) -> f64 {
        self.setpoint
    }

    pub fn signals(&self) -> ChannelSignals {
        self.signals
    }

    pub fn config(&self) -> &ChannelConfig {
        &self.config
    }

    pub fn adapter(&self) -> Option<&AdapterState> {
        self.adapter.as_ref()
    }
}
