//! Property tests over the plant math and the controller state machines.

use proptest::prelude::*;
use rangeseek_core::*;
use std::f64::consts::PI;

fn residual(nu: f64, nu_h: f64, nu_inf: f64, alpha: f64) -> f64 {
    let planar = nu_inf * alpha.cos();
    let axial = nu_inf * alpha.sin();
    nu * (planar * planar + (axial + nu) * (axial + nu)).sqrt() - nu_h * nu_h
}

proptest! {
    #[test]
    fn induced_velocity_residual_is_tiny(
        nu_h in 1.0..10.0f64,
        nu_inf in 0.0..20.0f64,
        alpha in (-PI / 3.0)..0.0f64,
    ) {
        let nu = induced_velocity(nu_h, nu_inf, alpha).unwrap();
        prop_assert!(nu > 0.0);
        prop_assert!(residual(nu, nu_h, nu_inf, alpha).abs() < 1e-10 * (nu_h * nu_h));
    }

    #[test]
    fn induced_velocity_hover_matches_closed_form(nu_h in 0.5..12.0f64) {
        let nu = induced_velocity(nu_h, 0.0, 0.0).unwrap();
        prop_assert!((nu - nu_h).abs() < 1e-9);
    }

    #[test]
    fn induced_velocity_shrinks_in_level_flight(
        nu_h in 1.0..10.0f64,
        nu_inf in 1e-6..20.0f64,
    ) {
        let nu = induced_velocity(nu_h, nu_inf, 0.0).unwrap();
        prop_assert!(nu <= nu_h);
    }

    #[test]
    fn trim_keeps_inflow_positive_and_power_positive(
        speed in 0.0..10.0f64,
        sideslip in -10.0..10.0f64,
    ) {
        let p = VehicleParams::default();
        let state = trim(&p, FlightCondition::new(speed, sideslip)).unwrap();
        // with the disk leaning into the wind the free stream feeds the
        // downwash, so the induced velocity never exceeds its hover value
        prop_assert!(state.induced_velocity <= state.hover_induced_velocity * (1.0 + 1e-12));
        prop_assert!(state.induced_power > 0.0);
        prop_assert!(state.total_power >= state.induced_power);
    }

    #[test]
    fn trim_thrust_exceeds_weight_in_motion(
        speed in 1e-3..10.0f64,
        sideslip in -10.0..10.0f64,
    ) {
        let p = VehicleParams::default();
        let state = trim(&p, FlightCondition::new(speed, sideslip)).unwrap();
        prop_assert!(state.thrust_total > p.weight());
    }

    #[test]
    fn cost_is_half_turn_periodic(
        speed in 0.2..10.0f64,
        sideslip in -7.0..7.0f64,
    ) {
        let p = VehicleParams::default();
        let a = evaluate_cost(&p, FlightCondition::new(speed, sideslip)).unwrap();
        let b = evaluate_cost(&p, FlightCondition::new(speed, sideslip + PI)).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs(),
            "cost {a} vs {b} at sideslip {sideslip}");
    }

    #[test]
    fn cost_is_exactly_periodic_when_the_shift_is_exact(
        speed in 0.2..10.0f64,
        sideslip in 0.0..PI,
    ) {
        // when beta + pi loses nothing to rounding, the costs must agree to
        // the bit; the reduction modulo pi guarantees it
        let shifted = sideslip + PI;
        prop_assume!(shifted.rem_euclid(PI) == sideslip.rem_euclid(PI));
        let p = VehicleParams::default();
        let a = evaluate_cost(&p, FlightCondition::new(speed, sideslip)).unwrap();
        let b = evaluate_cost(&p, FlightCondition::new(speed, shifted)).unwrap();
        prop_assert!(a.to_bits() == b.to_bits());
    }

    #[test]
    fn symmetric_drag_makes_cost_sideslip_free(
        speed in 0.2..10.0f64,
        s1 in -7.0..7.0f64,
        s2 in -7.0..7.0f64,
        mu1 in 0.0..0.8f64,
        mu2 in 0.05..1.5f64,
    ) {
        let p = VehicleParams {
            mu1_long: mu1,
            mu1_lat: mu1,
            mu2_long: mu2,
            mu2_lat: mu2,
            ..VehicleParams::default()
        };
        let a = evaluate_cost(&p, FlightCondition::new(speed, s1)).unwrap();
        let b = evaluate_cost(&p, FlightCondition::new(speed, s2)).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn channel_setpoint_never_leaves_bounds(
        costs in prop::collection::vec(-1e6..1e6f64, 1..400),
        gain in 0.0..100.0f64,
        lo in 0.1..2.0f64,
        width in 0.5..8.0f64,
    ) {
        let cfg = ChannelConfig {
            dither_amplitude: 0.15,
            dither_frequency: 1.0,
            hp_cutoff: 1.0,
            lp_cutoff: 1.0,
            gain,
            initial_setpoint: lo + width / 2.0,
            bounds: (lo, lo + width),
            adapter: None,
        };
        let mut ch = Channel::new(cfg).unwrap();
        for (i, cost) in costs.iter().enumerate() {
            ch.step(*cost, i as f64 * 0.01, 0.01).unwrap();
            let sp = ch.setpoint();
            prop_assert!(sp >= lo && sp <= lo + width, "setpoint {sp} escaped [{lo}, {}]", lo + width);
        }
    }

    #[test]
    fn channel_trajectories_are_deterministic(
        costs in prop::collection::vec(-1e3..1e3f64, 1..200),
        adaptive in any::<bool>(),
    ) {
        let cfg = ChannelConfig {
            dither_amplitude: 0.15,
            dither_frequency: 1.0,
            hp_cutoff: 1.0,
            lp_cutoff: 1.0,
            gain: 0.1,
            initial_setpoint: 2.2,
            bounds: (0.2, 8.0),
            adapter: adaptive.then(AdapterConfig::default),
        };
        let mut a = Channel::new(cfg).unwrap();
        let mut b = Channel::new(cfg).unwrap();
        for (i, cost) in costs.iter().enumerate() {
            let t = i as f64 * 0.01;
            let ra = a.step(*cost, t, 0.01).unwrap();
            let rb = b.step(*cost, t, 0.01).unwrap();
            prop_assert!(ra.to_bits() == rb.to_bits());
            prop_assert!(a.setpoint().to_bits() == b.setpoint().to_bits());
        }
    }

    #[test]
    fn adapter_output_respects_the_cauchy_schwarz_bound(
        inputs in prop::collection::vec(-50.0..50.0f64, 1..300),
    ) {
        // the first moment uses faster-decaying weights than the second, so
        // |m| / sqrt(v) is not bounded by 1, but Cauchy-Schwarz on the two
        // weight sequences still caps it: |m| <= B sqrt(v) with
        // B^2 = 1 + (1-b1)^2 / ((1-b2)(1 - b1^2/b2)), seed term included
        let cfg = AdapterConfig::default();
        let (b1, b2) = (cfg.beta1, cfg.beta2);
        let bound = (1.0 + (1.0 - b1).powi(2) / ((1.0 - b2) * (1.0 - b1 * b1 / b2))).sqrt();
        let mut a = AdapterState::new(cfg);
        for q in inputs {
            let g = a.step(q);
            prop_assert!(g.abs() <= bound * (1.0 + 1e-6), "g={g} exceeds {bound}");
        }
    }
}
