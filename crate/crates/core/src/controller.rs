//! Two-channel extremum-seeking controller: one channel trims speed, the
//! other sideslip, both demodulating the same scalar cost. The dither
//! frequencies must be well separated so each channel rejects the other's
//! perturbation.

use crate::channel::{Channel, ChannelConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Controller {
    speed: Channel,
    sideslip: Channel,
}

impl Controller {
    pub fn new(speed_config: ChannelConfig, sideslip_config: ChannelConfig) -> Result<Self> {
        let w_v = speed_config.dither_frequency;
        let w_s = sideslip_config.dither_frequency;
        if (w_v - w_s).abs() <= 0.01 * w_v.max(w_s) {
            return Err(Error::InvalidConfig(format!(
                "dither frequencies must be distinct by more than 1% \
                 (speed {w_v} rad/s vs sideslip {w_s} rad/s)"
            )));
        }
        Ok(Self {
            speed: Channel::new(speed_config)?,
            sideslip: Channel::new(sideslip_config)?,
        })
    }

    /// Feed one cost measurement to both channels; returns the dithered
    /// (speed, sideslip) references.
    pub fn step(&mut self, cost: f64, t: f64, dt: f64) -> Result<(f64, f64)> {
        let speed_ref = self.speed.step(cost, t, dt)?;
        let sideslip_ref = self.sideslip.step(cost, t, dt)?;
        Ok((speed_ref, sideslip_ref))
    }

    pub fn speed(&self) -> &Channel {
        &self.speed
    }

    pub fn sideslip(&self) -> &Channel {
        &self.sideslip
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn speed_cfg() -> ChannelConfig {
        ChannelConfig {
            dither_amplitude: 0.15,
            dither_frequency: 1.0,
            hp_cutoff: 1.0,
            lp_cutoff: 1.0,
            gain: 0.1,
            initial_setpoint: 2.2,
            bounds: (0.2, 8.0),
            adapter: None,
        }
    }

    fn sideslip_cfg() -> ChannelConfig {
        ChannelConfig {
            dither_amplitude: 7.5_f64.to_radians(),
            dither_frequency: 0.5,
            hp_cutoff: 0.5,
            lp_cutoff: 0.5,
            gain: 0.1,
            initial_setpoint: 50.0_f64.to_radians(),
            bounds: (0.0, std::f64::consts::PI),
            adapter: None,
        }
    }

    #[test]
    fn rejects_equal_dither_frequencies() {
        let mut s = sideslip_cfg();
        s.dither_frequency = 1.0;
        let err = Controller::new(speed_cfg(), s).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
        assert!(err.to_string().contains("distinct"));
    }

    #[test]
    fn rejects_nearly_equal_dither_frequencies() {
        let mut s = sideslip_cfg();
        s.dither_frequency = 1.005;
        assert!(Controller::new(speed_cfg(), s).is_err());
    }

    #[test]
    fn accepts_the_default_frequency_pair() {
        assert!(Controller::new(speed_cfg(), sideslip_cfg()).is_ok());
    }

    #[test]
    fn separable_quadratic_converges_on_both_axes() {
        let (v_star, s_star) = (2.5_f64, 1.6_f64);
        let mut speed = speed_cfg();
        speed.hp_cutoff = 0.1;
        speed.lp_cutoff = 0.3;
        speed.initial_setpoint = 3.0;
        let mut side = sideslip_cfg();
        side.hp_cutoff = 0.05;
        side.lp_cutoff = 0.15;
        side.dither_amplitude = 0.13;
        side.initial_setpoint = 1.0;
        let mut ctrl = Controller::new(speed, side).unwrap();
        let dt = 0.01;
        let (mut v_ref, mut s_ref) = (3.0, 1.0);
        for i in 0..(250.0 / dt) as usize {
            let t = i as f64 * dt;
            let cost = (v_ref - v_star).powi(2) + 2.0 * (s_ref - s_star).powi(2);
            (v_ref, s_ref) = ctrl.step(cost, t, dt).unwrap();
        }
        let v_err = (ctrl.speed().setpoint() - v_star).abs();
        let s_err = (ctrl.sideslip().setpoint() - s_star).abs();
        assert!(v_err < 0.15, "speed error {v_err}");
        assert!(s_err < 0.13, "sideslip error {s_err}");
    }
}
