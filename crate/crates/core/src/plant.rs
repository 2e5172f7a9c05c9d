//! Steady-flight power model for a small multirotor.
//!
//! The vehicle is treated as quasi-static: at a commanded horizontal speed and
//! sideslip the rotor disk tilts just enough for the thrust to balance weight
//! plus aerodynamic drag, and the electrical power needed to hold that trim is
//! computed from momentum theory. Dividing power by speed gives the cost that
//! the extremum-seeking controller minimizes — its reciprocal is distance
//! flown per joule.
//!
//! Drag depends on sideslip because the airframe presents a different face to
//! the flow along each body axis; the two coefficient pairs are blended with a
//! smooth cos²/sin² law, making every derived quantity π-periodic in sideslip.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Physical constants of the simulated vehicle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleParams {
    /// Takeoff mass, kg.
    pub mass: f64,
    /// Single rotor radius, m.
    pub rotor_radius: f64,
    /// Air density, kg/m³.
    pub air_density: f64,
    /// Gravitational acceleration, m/s².
    pub gravity: f64,
    /// Combined motor/propeller electrical efficiency, in (0, 1].
    pub eta: f64,
    /// Induced-power correction factor, ≥ 1.
    pub kappa: f64,
    /// Linear drag coefficient along the body forward axis, N·s/m.
    pub mu1_long: f64,
    /// Linear drag coefficient along the body lateral axis, N·s/m.
    pub mu1_lat: f64,
    /// Quadratic drag coefficient along the body forward axis, N·s²/m².
    pub mu2_long: f64,
    /// Quadratic drag coefficient along the body lateral axis, N·s²/m².
    pub mu2_lat: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            mass: 0.66,
            rotor_radius: 0.1015,
            air_density: 1.225,
            gravity: 9.81,
            eta: 0.55,
            kappa: 1.15,
            mu1_long: 0.50,
            mu1_lat: 0.05,
            mu2_long: 1.05,
            mu2_lat: 0.70,
        }
    }
}

impl VehicleParams {
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidConfig(msg.to_string()))
            }
        };
        check(self.mass > 0.0, "mass must be > 0")?;
        check(self.rotor_radius > 0.0, "rotor_radius must be > 0")?;
        check(self.air_density > 0.0, "air_density must be > 0")?;
        check(self.gravity > 0.0, "gravity must be > 0")?;
        check(self.eta > 0.0 && self.eta <= 1.0, "eta must be in (0, 1]")?;
        check(self.kappa >= 1.0, "kappa must be >= 1")?;
        check(
            self.mu1_long >= 0.0
                && self.mu1_lat >= 0.0
                && self.mu2_long >= 0.0
                && self.mu2_lat >= 0.0,
            "drag coefficients must be >= 0",
        )?;
        check(
            self.mu2_long + self.mu2_lat > 0.0,
            "at least one quadratic drag coefficient must be > 0",
        )
    }

    /// Weight force m·g, N.
    pub fn weight(&self) -> f64 {
        self.mass * self.gravity
    }
}

/// The two optimization variables: horizontal airspeed and sideslip angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlightCondition {
    /// Free-stream speed magnitude, m/s.
    pub speed: f64,
    /// Sideslip angle, rad. The drag model is π-periodic in this angle.
    pub sideslip: f64,
}

impl FlightCondition {
    pub fn new(speed: f64, sideslip: f64) -> Self {
        Self { speed, sideslip }
    }
}

/// Force/power balance of the vehicle holding one flight condition.
#[derive(Debug, Clone, Copy)]
pub struct TrimState {
    /// Aerodynamic drag magnitude, N.
    pub drag: f64,
    /// Total rotor thrust needed to balance weight and drag, N.
    pub thrust_total: f64,
    /// Rotor-plane tilt from horizontal, rad.
    pub tilt: f64,
    /// Angle of attack of the free stream relative to the rotor plane, rad.
    /// Negative in forward flight: the disk leans into the wind.
    pub angle_of_attack: f64,
    /// Momentum-theory induced velocity at this trim, m/s.
    pub induced_velocity: f64,
    /// Induced velocity at hover for the same vehicle, m/s.
    pub hover_induced_velocity: f64,
    /// Aerodynamic (induced) power, W.
    pub induced_power: f64,
    /// Electrical power after efficiency losses, W.
    pub total_power: f64,
}

/// Blend the body-axis drag coefficient pairs at a given sideslip.
///
/// Returns `(mu1, mu2)`. The sideslip is first reduced modulo π so that the
/// blend — and everything computed from it — repeats exactly every half turn.
pub fn drag_coefficients(params: &VehicleParams, sideslip: f64) -> (f64, f64) {
    let beta = sideslip.rem_euclid(PI);
    let (sin, cos) = beta.sin_cos();
    let (c2, s2) = (cos * cos, sin * sin);
    (
        params.mu1_long * c2 + params.mu1_lat * s2,
        params.mu2_long * c2 + params.mu2_lat * s2,
    )
}

/// Drag force magnitude mu1·v + mu2·v², N.
pub fn drag_magnitude(mu1: f64, mu2: f64, speed: f64) -> f64 {
    mu1 * speed + mu2 * speed * speed
}

/// Induced velocity at hover: √(m·g / (8·ρ·π·r²)), m/s.
pub fn hover_induced_velocity(params: &VehicleParams) -> f64 {
    let r = params.rotor_radius;
    (params.weight() / (8.0 * params.air_density * PI * r * r)).sqrt()
}

/// Solve the momentum-theory implicit equation for the induced velocity ν:
///
/// ```text
/// ν · √((ν∞·cos α)² + (ν∞·sin α + ν)²) = ν_h²
/// ```
///
/// Newton iteration starts from the hover solution ν_h; if it leaves the
/// positive reals or fails to converge within 50 iterations, a guarded
/// bisection takes over. The residual of the product form is driven below
/// `1e-10·ν_h²`.
pub fn induced_velocity(nu_h: f64, nu_inf: f64, alpha: f64) -> Result<f64> {
    let target = nu_h * nu_h;
    let tol = 1e-10 * target;
    let planar = nu_inf * alpha.cos();
    let axial = nu_inf * alpha.sin();
    let residual = |nu: f64| nu * (planar * planar + (axial + nu) * (axial + nu)).sqrt() - target;

    let fail = || Error::NonConvergence {
        nu_h,
        nu_inf,
        alpha,
    };

    let mut nu = nu_h;
    for _ in 0..50 {
        let r = residual(nu);
        if r.abs() < tol {
            return Ok(nu);
        }
        let root = (planar * planar + (axial + nu) * (axial + nu)).sqrt();
        let slope = root + nu * (axial + nu) / root;
        let next = nu - r / slope;
        if !next.is_finite() || next <= 0.0 {
            break;
        }
        nu = next;
    }
    if residual(nu).abs() < tol {
        return Ok(nu);
    }

    // Bisection fallback. The root exceeds nu_h when the free stream blows
    // down through the disk (alpha < 0 at low speed), so the upper end of the
    // bracket may need to grow before it straddles.
    let lo = 1e-6 * nu_h;
    let mut hi = nu_h;
    if residual(lo) > 0.0 {
        return Err(fail());
    }
    let mut expansions = 0;
    while residual(hi) < 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return Err(fail());
        }
    }
    let mut lo = lo;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let r = residual(mid);
        if r.abs() < tol {
            return Ok(mid);
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(fail())
}

/// Induced power κ·(ν + ν∞·sin α)·T, W.
pub fn induced_power(kappa: f64, nu: f64, nu_inf: f64, alpha: f64, thrust_total: f64) -> f64 {
    kappa * (nu + nu_inf * alpha.sin()) * thrust_total
}

/// Electrical power drawn to supply a given induced power, W.
pub fn total_power(params: &VehicleParams, induced_power: f64) -> f64 {
    induced_power / params.eta
}

/// Solve the force and power balance for one flight condition.
pub fn trim(params: &VehicleParams, condition: FlightCondition) -> Result<TrimState> {
    let v = condition.speed;
    if !(v >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "trim requires speed >= 0, got {v}"
        )));
    }
    let (mu1, mu2) = drag_coefficients(params, condition.sideslip);
    let drag = drag_magnitude(mu1, mu2, v);
    let weight = params.weight();
    let tilt = (drag / weight).atan();
    let thrust_total = weight.hypot(drag);
    let nu_h = hover_induced_velocity(params);
    // The disk leans into the wind by `tilt`, so the free stream carries a
    // positive component down through the rotor plane. The momentum balance
    // and the power integral see that inflow angle; the v·sin(tilt)·T term is
    // the work done against drag. The geometric angle of attack reported in
    // the trim state is its negative.
    let inflow = tilt;
    let nu = induced_velocity(nu_h, v, inflow)?;
    let p_induced = induced_power(params.kappa, nu, v, inflow, thrust_total);
    Ok(TrimState {
        drag,
        thrust_total,
        tilt,
        angle_of_attack: -tilt,
        induced_velocity: nu,
        hover_induced_velocity: nu_h,
        induced_power: p_induced,
        total_power: total_power(params, p_induced),
    })
}

/// Power per unit speed, W·s/m — the quantity the controller minimizes.
pub fn evaluate_cost(params: &VehicleParams, condition: FlightCondition) -> Result<f64> {
    if !(condition.speed > 0.0) {
        return Err(Error::InvalidSpeed(condition.speed));
    }
    Ok(trim(params, condition)?.total_power / condition.speed)
}

/// Distance covered while draining `delta_energy` joules at constant speed
/// and power: v·ΔE/P, m.
pub fn flight_range(speed: f64, power: f64, delta_energy: f64) -> Result<f64> {
    if !(power > 0.0) {
        return Err(Error::InvalidInput(format!(
            "flight_range requires power > 0, got {power}"
        )));
    }
    if !(speed > 0.0) {
        return Err(Error::InvalidInput(format!(
            "flight_range requires speed > 0, got {speed}"
        )));
    }
    if !(delta_energy >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "flight_range requires delta_energy >= 0, got {delta_energy}"
        )));
    }
    Ok(speed * delta_energy / power)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn defaults() -> VehicleParams {
        VehicleParams::default()
    }

    #[test]
    fn drag_coefficients_select_axes() {
        let p = VehicleParams {
            mu1_long: 0.2,
            mu1_lat: 0.4,
            ..defaults()
        };
        assert_abs_diff_eq!(drag_coefficients(&p, 0.0).0, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(drag_coefficients(&p, PI / 2.0).0, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(drag_coefficients(&p, PI / 4.0).0, 0.3, epsilon = 1e-15);
    }

    #[test]
    fn drag_coefficients_repeat_every_half_turn() {
        let p = defaults();
        // These angles shift by pi exactly in floating point, so the reduced
        // angle — and both coefficients — must match bit for bit.
        for beta in [0.0, 0.5, 1.0, 2.0] {
            let (a1, a2) = drag_coefficients(&p, beta);
            let (b1, b2) = drag_coefficients(&p, beta + PI);
            assert_eq!(a1, b1);
            assert_eq!(a2, b2);
        }
    }

    #[test]
    fn drag_magnitude_examples() {
        assert_eq!(drag_magnitude(0.2, 0.05, 0.0), 0.0);
        assert_abs_diff_eq!(drag_magnitude(0.2, 0.05, 2.0), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(drag_magnitude(0.0, 0.05, 4.0), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn hover_induced_velocity_default_vehicle() {
        assert_abs_diff_eq!(hover_induced_velocity(&defaults()), 4.518064795359, epsilon = 1e-9);
    }

    #[test]
    fn hover_induced_velocity_scaling() {
        let base = hover_induced_velocity(&defaults());
        let heavy = VehicleParams {
            mass: 2.0 * 0.66,
            ..defaults()
        };
        assert_relative_eq!(
            hover_induced_velocity(&heavy),
            base * 2.0_f64.sqrt(),
            max_relative = 1e-12
        );
        let wide = VehicleParams {
            rotor_radius: 2.0 * 0.1015,
            ..defaults()
        };
        assert_relative_eq!(hover_induced_velocity(&wide), base / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn induced_velocity_hover_is_exact() {
        let nu = induced_velocity(4.518, 0.0, 0.0).unwrap();
        assert_eq!(nu, 4.518);
    }

    #[test]
    fn induced_velocity_high_speed_limit() {
        let nu_h = 4.518;
        let nu = induced_velocity(nu_h, 10.0, 0.0).unwrap();
        assert_abs_diff_eq!(nu, 2.0015339798, epsilon = 1e-8);
        // approaches nu_h^2 / nu_inf from below as speed grows
        assert!((nu - nu_h * nu_h / 10.0).abs() < 0.05);
        let residual = nu * (100.0 + nu * nu).sqrt() - nu_h * nu_h;
        assert!(residual.abs() < 1e-10 * nu_h * nu_h);
    }

    #[test]
    fn induced_velocity_drops_in_level_flight() {
        for nu_inf in [0.5, 1.0, 3.0, 10.0, 20.0] {
            let nu = induced_velocity(4.518, nu_inf, 0.0).unwrap();
            assert!(nu <= 4.518, "nu={nu} at nu_inf={nu_inf}");
        }
    }

    #[test]
    fn induced_velocity_handles_descending_inflow() {
        // With the stream blowing down through the disk the root exceeds the
        // hover value, which is what forces the fallback bracket to expand.
        let nu_h = 4.518;
        let nu = induced_velocity(nu_h, 1.0, -PI / 3.0).unwrap();
        assert!(nu > nu_h);
        let planar = 1.0 * (PI / 3.0).cos();
        let axial = -(PI / 3.0).sin();
        let residual = nu * (planar * planar + (axial + nu) * (axial + nu)).sqrt() - nu_h * nu_h;
        assert!(residual.abs() < 1e-10 * nu_h * nu_h);
    }

    #[test]
    fn induced_power_examples() {
        let p = defaults();
        let nu_h = hover_induced_velocity(&p);
        let hover = induced_power(p.kappa, nu_h, 0.0, 0.0, p.weight());
        assert_abs_diff_eq!(hover, 33.6405616726, epsilon = 1e-6);
        assert_eq!(induced_power(1.0, 1.0, 0.0, 0.0, 1.0), 1.0);
        let tilted = induced_power(1.15, 3.0, 5.0, -0.2, 7.0);
        assert!(tilted < 1.15 * 3.0 * 7.0);
    }

    #[test]
    fn total_power_examples() {
        let unit = VehicleParams { eta: 1.0, ..defaults() };
        assert_eq!(total_power(&unit, 33.65), 33.65);
        let half = VehicleParams { eta: 0.5, ..defaults() };
        assert_abs_diff_eq!(total_power(&half, 33.65), 67.3, epsilon = 1e-12);
        let p = VehicleParams { eta: 0.7, ..defaults() };
        assert_eq!(total_power(&p, 0.0), 0.0);
    }

    #[test]
    fn trim_hover() {
        let p = defaults();
        let state = trim(&p, FlightCondition::new(0.0, 0.3)).unwrap();
        assert_eq!(state.drag, 0.0);
        assert_eq!(state.tilt, 0.0);
        assert_eq!(state.angle_of_attack, 0.0);
        assert_eq!(state.thrust_total, p.weight());
        assert_abs_diff_eq!(state.induced_velocity, state.hover_induced_velocity, epsilon = 1e-12);
    }

    #[test]
    fn trim_at_known_drag() {
        // choose a sideslip/speed pair that produces exactly 0.6 N of drag:
        // mu1 = 0.2, mu2 = 0.05 at v = 2 (long-axis coefficients)
        let p = VehicleParams {
            mu1_long: 0.2,
            mu2_long: 0.05,
            ..defaults()
        };
        let state = trim(&p, FlightCondition::new(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(state.drag, 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(state.thrust_total, 6.5023415136, epsilon = 1e-9);
        assert_abs_diff_eq!(state.tilt, 0.092405902586, epsilon = 1e-11);
        assert_abs_diff_eq!(state.angle_of_attack, -0.092405902586, epsilon = 1e-11);
        assert_relative_eq!(
            state.total_power,
            state.induced_power / p.eta,
            max_relative = 1e-15
        );
    }

    #[test]
    fn trim_thrust_never_below_weight() {
        let p = defaults();
        for v in [0.0, 0.5, 2.0, 5.0, 8.0] {
            for b in [0.0, 0.7, 1.3, 2.9] {
                let state = trim(&p, FlightCondition::new(v, b)).unwrap();
                assert!(state.thrust_total >= p.weight());
                assert!(state.induced_power > 0.0);
            }
        }
    }

    #[test]
    fn cost_blows_up_at_low_speed() {
        let p = defaults();
        let c = |v: f64| evaluate_cost(&p, FlightCondition::new(v, 1.0)).unwrap();
        assert!(c(0.01) > c(0.05));
        assert!(c(0.05) > c(0.1));
        assert!(c(0.1) > c(1.0));
        assert!(evaluate_cost(&p, FlightCondition::new(0.0, 1.0)).is_err());
        assert!(evaluate_cost(&p, FlightCondition::new(-1.0, 1.0)).is_err());
    }

    #[test]
    fn cost_is_deterministic() {
        let p = defaults();
        let cond = FlightCondition::new(3.123456789, 0.87654321);
        let a = evaluate_cost(&p, cond).unwrap();
        let b = evaluate_cost(&p, cond).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn flight_range_examples() {
        assert_eq!(flight_range(3.0, 150.0, 180_000.0).unwrap(), 3600.0);
        assert_eq!(flight_range(5.0, 80.0, 0.0).unwrap(), 0.0);
        let once = flight_range(4.0, 120.0, 90_000.0).unwrap();
        let twice = flight_range(4.0, 120.0, 180_000.0).unwrap();
        assert_relative_eq!(twice, 2.0 * once, max_relative = 1e-15);
        assert!(flight_range(0.0, 150.0, 1.0).is_err());
        assert!(flight_range(3.0, 0.0, 1.0).is_err());
    }
}
