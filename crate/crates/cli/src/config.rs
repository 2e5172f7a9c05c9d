//! On-disk experiment description: TOML schema, validation with key-path
//! diagnostics, and conversion into the core crate's native config structs.
//!
//! Angles are degrees in the file (and in the CSV output); everything is
//! radians internally. The `k` table carries the gains for both controller
//! variants so one file can drive a paired comparison run.

use rangeseek_core::{AdapterConfig, ChannelConfig, SimConfig, VehicleParams};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

pub const DEG: f64 = PI / 180.0;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {}", .path.display())]
    Parse {
        path: PathBuf,
        source: Box<toml::de::Error>,
    },
    #[error("invalid config: {0}")]
    Validation(String),
}

/// Which controller variant a channel runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Normalize the gradient estimate through the moment tracker.
    Adaptive,
    /// Use the raw gradient estimate with a fixed gain.
    Standard,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Adaptive => "adaptive",
            Mode::Standard => "standard",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VehicleSection {
    pub mass: f64,
    pub rotor_radius: f64,
    pub air_density: f64,
    pub gravity: f64,
    pub eta: f64,
    pub kappa: f64,
    pub mu1_long: f64,
    pub mu1_lat: f64,
    pub mu2_long: f64,
    pub mu2_lat: f64,
}

impl Default for VehicleSection {
    fn default() -> Self {
        let p = VehicleParams::default();
        Self {
            mass: p.mass,
            rotor_radius: p.rotor_radius,
            air_density: p.air_density,
            gravity: p.gravity,
            eta: p.eta,
            kappa: p.kappa,
            mu1_long: p.mu1_long,
            mu1_lat: p.mu1_lat,
            mu2_long: p.mu2_long,
            mu2_lat: p.mu2_lat,
        }
    }
}

/// Search domain for the brute-force oracle. Sideslip in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DomainSection {
    pub speed_range: [f64; 2],
    pub sideslip_range: [f64; 2],
    pub speed_steps: usize,
    pub sideslip_steps: usize,
    pub refine_levels: u32,
}

impl Default for DomainSection {
    fn default() -> Self {
        Self {
            speed_range: [0.2, 8.0],
            sideslip_range: [0.0, 180.0],
            speed_steps: 157,
            sideslip_steps: 181,
            refine_levels: 3,
        }
    }
}

/// Gains for the two controller variants, kept side by side so a comparison
/// run needs only one file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainPair {
    pub adaptive: f64,
    pub standard: f64,
}

impl GainPair {
    pub fn for_mode(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Adaptive => self.adaptive,
            Mode::Standard => self.standard,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdapterSection {
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub threshold: f64,
}

impl Default for AdapterSection {
    fn default() -> Self {
        let a = AdapterConfig::default();
        Self {
            beta1: a.beta1,
            beta2: a.beta2,
            epsilon: a.epsilon,
            threshold: a.threshold,
        }
    }
}

impl AdapterSection {
    fn to_core(self) -> AdapterConfig {
        AdapterConfig {
            beta1: self.beta1,
            beta2: self.beta2,
            epsilon: self.epsilon,
            threshold: self.threshold,
        }
    }
}

/// One seeking channel. For the sideslip channel `a`, `r0`, and `bounds` are
/// degrees; for the speed channel they are m/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub mode: Mode,
    pub a: f64,
    pub omega: f64,
    pub hp_cutoff: f64,
    pub lp_cutoff: f64,
    pub k: GainPair,
    pub r0: f64,
    pub bounds: [f64; 2],
    #[serde(default)]
    pub adapter: AdapterSection,
}

impl ChannelSection {
    fn default_speed() -> Self {
        Self {
            mode: Mode::Adaptive,
            a: 0.15,
            omega: 1.0,
            hp_cutoff: 1.0,
            lp_cutoff: 1.0,
            k: GainPair {
                adaptive: 0.1,
                standard: 0.025,
            },
            r0: 2.2,
            bounds: [0.2, 8.0],
            adapter: AdapterSection::default(),
        }
    }

    fn default_sideslip() -> Self {
        Self {
            mode: Mode::Adaptive,
            a: 7.5,
            omega: 0.5,
            hp_cutoff: 0.5,
            lp_cutoff: 0.5,
            k: GainPair {
                adaptive: 0.1,
                standard: 0.02,
            },
            r0: 50.0,
            bounds: [0.0, 180.0],
            adapter: AdapterSection::default(),
        }
    }

    fn to_core(self, mode: Mode, scale: f64) -> ChannelConfig {
        ChannelConfig {
            dither_amplitude: self.a * scale,
            dither_frequency: self.omega,
            hp_cutoff: self.hp_cutoff,
            lp_cutoff: self.lp_cutoff,
            gain: self.k.for_mode(mode),
            initial_setpoint: self.r0 * scale,
            bounds: (self.bounds[0] * scale, self.bounds[1] * scale),
            adapter: (mode == Mode::Adaptive).then(|| self.adapter.to_core()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EscSection {
    #[serde(default = "ChannelSection::default_speed")]
    pub speed_channel: ChannelSection,
    #[serde(default = "ChannelSection::default_sideslip")]
    pub sideslip_channel: ChannelSection,
}

impl Default for EscSection {
    fn default() -> Self {
        Self {
            speed_channel: ChannelSection::default_speed(),
            sideslip_channel: ChannelSection::default_sideslip(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSection {
    pub dt: f64,
    pub duration: f64,
    pub seed: u64,
    pub power_noise_std: f64,
    pub tracking_tau: f64,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            dt: 0.01,
            duration: 300.0,
            seed: 42,
            power_noise_std: 2.0,
            tracking_tau: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub directory: String,
    pub decimation: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: "out".to_string(),
            decimation: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub vehicle: VehicleSection,
    pub domain: DomainSection,
    pub esc: EscSection,
    pub sim: SimSection,
    pub output: OutputSection,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::Validation(msg()))
    }
}

fn validate_channel(prefix: &str, ch: &ChannelSection) -> Result<(), ConfigError> {
    ensure(ch.a > 0.0, || format!("{prefix}.a must be > 0, got {}", ch.a))?;
    ensure(ch.omega > 0.0, || {
        format!("{prefix}.omega must be > 0, got {}", ch.omega)
    })?;
    ensure(ch.hp_cutoff > 0.0, || {
        format!("{prefix}.hp_cutoff must be > 0, got {}", ch.hp_cutoff)
    })?;
    ensure(ch.lp_cutoff > 0.0, || {
        format!("{prefix}.lp_cutoff must be > 0, got {}", ch.lp_cutoff)
    })?;
    ensure(ch.k.adaptive > 0.0, || {
        format!("{prefix}.k.adaptive must be > 0, got {}", ch.k.adaptive)
    })?;
    ensure(ch.k.standard > 0.0, || {
        format!("{prefix}.k.standard must be > 0, got {}", ch.k.standard)
    })?;
    ensure(ch.bounds[0] < ch.bounds[1], || {
        format!(
            "{prefix}.bounds must be ascending, got [{}, {}]",
            ch.bounds[0], ch.bounds[1]
        )
    })?;
    ensure(ch.r0 >= ch.bounds[0] && ch.r0 <= ch.bounds[1], || {
        format!(
            "{prefix}.r0 = {} lies outside {prefix}.bounds [{}, {}]",
            ch.r0, ch.bounds[0], ch.bounds[1]
        )
    })?;
    let ad = &ch.adapter;
    ensure(ad.beta1 > 0.0 && ad.beta1 < 1.0, || {
        format!("{prefix}.adapter.beta1 must be in (0, 1), got {}", ad.beta1)
    })?;
    ensure(ad.beta2 > 0.0 && ad.beta2 < 1.0, || {
        format!("{prefix}.adapter.beta2 must be in (0, 1), got {}", ad.beta2)
    })?;
    ensure(ad.epsilon > 0.0, || {
        format!("{prefix}.adapter.epsilon must be > 0, got {}", ad.epsilon)
    })?;
    ensure(ad.threshold > 0.0, || {
        format!(
            "{prefix}.adapter.threshold must be > 0, got {}",
            ad.threshold
        )
    })
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let v = &self.vehicle;
        ensure(v.mass > 0.0, || {
            format!("vehicle.mass must be > 0, got {}", v.mass)
        })?;
        ensure(v.rotor_radius > 0.0, || {
            format!("vehicle.rotor_radius must be > 0, got {}", v.rotor_radius)
        })?;
        ensure(v.air_density > 0.0, || {
            format!("vehicle.air_density must be > 0, got {}", v.air_density)
        })?;
        ensure(v.gravity > 0.0, || {
            format!("vehicle.gravity must be > 0, got {}", v.gravity)
        })?;
        ensure(v.eta > 0.0 && v.eta <= 1.0, || {
            format!("vehicle.eta must be in (0, 1], got {}", v.eta)
        })?;
        ensure(v.kappa >= 1.0, || {
            format!("vehicle.kappa must be >= 1, got {}", v.kappa)
        })?;
        for (key, mu) in [
            ("vehicle.mu1_long", v.mu1_long),
            ("vehicle.mu1_lat", v.mu1_lat),
            ("vehicle.mu2_long", v.mu2_long),
            ("vehicle.mu2_lat", v.mu2_lat),
        ] {
            ensure(mu >= 0.0, || format!("{key} must be >= 0, got {mu}"))?;
        }
        ensure(v.mu2_long + v.mu2_lat > 0.0, || {
            "vehicle.mu2_long and vehicle.mu2_lat cannot both be zero".to_string()
        })?;

        let d = &self.domain;
        ensure(d.speed_range[0] > 0.0, || {
            format!(
                "domain.speed_range must start above 0, got {}",
                d.speed_range[0]
            )
        })?;
        ensure(d.speed_range[0] < d.speed_range[1], || {
            format!(
                "domain.speed_range must be ascending, got [{}, {}]",
                d.speed_range[0], d.speed_range[1]
            )
        })?;
        ensure(d.sideslip_range[0] < d.sideslip_range[1], || {
            format!(
                "domain.sideslip_range must be ascending, got [{}, {}]",
                d.sideslip_range[0], d.sideslip_range[1]
            )
        })?;
        ensure(d.speed_steps >= 16, || {
            format!("domain.speed_steps must be >= 16, got {}", d.speed_steps)
        })?;
        ensure(d.sideslip_steps >= 16, || {
            format!(
                "domain.sideslip_steps must be >= 16, got {}",
                d.sideslip_steps
            )
        })?;

        validate_channel("esc.speed_channel", &self.esc.speed_channel)?;
        validate_channel("esc.sideslip_channel", &self.esc.sideslip_channel)?;
        let (wv, ws) = (self.esc.speed_channel.omega, self.esc.sideslip_channel.omega);
        ensure((wv - ws).abs() > 0.01 * wv.max(ws), || {
            format!(
                "esc.speed_channel.omega = {wv} and esc.sideslip_channel.omega = {ws} \
                 must be distinct frequencies (more than 1% apart) so the channels can \
                 demodulate independently"
            )
        })?;

        let s = &self.sim;
        ensure(s.dt > 0.0, || format!("sim.dt must be > 0, got {}", s.dt))?;
        ensure(s.duration > 0.0, || {
            format!("sim.duration must be > 0, got {}", s.duration)
        })?;
        ensure(s.power_noise_std >= 0.0, || {
            format!(
                "sim.power_noise_std must be >= 0, got {}",
                s.power_noise_std
            )
        })?;
        ensure(s.tracking_tau >= 0.0, || {
            format!("sim.tracking_tau must be >= 0, got {}", s.tracking_tau)
        })?;

        let o = &self.output;
        ensure(!o.directory.is_empty(), || {
            "output.directory must not be empty".to_string()
        })?;
        ensure(o.decimation >= 1, || {
            format!("output.decimation must be >= 1, got {}", o.decimation)
        })?;

        // run the simulator's own coupled checks (dt vs cutoffs, duration vs
        // dither period) for both variants so a bad file fails at load time
        for mode in [Mode::Adaptive, Mode::Standard] {
            self.sim_config(Some(mode), None)
                .validate()
                .map_err(|e| ConfigError::Validation(format!("sim: {e}")))?;
        }
        Ok(())
    }

    pub fn vehicle_params(&self) -> VehicleParams {
        let v = &self.vehicle;
        VehicleParams {
            mass: v.mass,
            rotor_radius: v.rotor_radius,
            air_density: v.air_density,
            gravity: v.gravity,
            eta: v.eta,
            kappa: v.kappa,
            mu1_long: v.mu1_long,
            mu1_lat: v.mu1_lat,
            mu2_long: v.mu2_long,
            mu2_lat: v.mu2_lat,
        }
    }

    /// Per-channel modes after applying an optional global override.
    pub fn resolved_modes(&self, mode_override: Option<Mode>) -> (Mode, Mode) {
        match mode_override {
            Some(m) => (m, m),
            None => (self.esc.speed_channel.mode, self.esc.sideslip_channel.mode),
        }
    }

    /// Oracle search domain in radians.
    pub fn oracle_domain(&self) -> ((f64, f64), (f64, f64), (usize, usize)) {
        let d = &self.domain;
        (
            (d.speed_range[0], d.speed_range[1]),
            (d.sideslip_range[0] * DEG, d.sideslip_range[1] * DEG),
            (d.speed_steps, d.sideslip_steps),
        )
    }

    pub fn sim_config(&self, mode_override: Option<Mode>, seed_override: Option<u64>) -> SimConfig {
        let (mode_v, mode_s) = self.resolved_modes(mode_override);
        SimConfig {
            dt: self.sim.dt,
            duration: self.sim.duration,
            seed: seed_override.unwrap_or(self.sim.seed),
            power_noise_std: self.sim.power_noise_std,
            tracking_time_constant: self.sim.tracking_tau,
            vehicle: self.vehicle_params(),
            speed_channel: self.esc.speed_channel.to_core(mode_v, 1.0),
            sideslip_channel: self.esc.sideslip_channel.to_core(mode_s, DEG),
        }
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let config: ExperimentConfig = toml::from_str(&text).map_err(|source| ConfigError::Parse {
        path: path.to_path_buf(),
        source: Box::new(source),
    })?;
    config.validate()?;
    Ok(config)
}

/// The reference config emitted by `generate-config`. Parses back to exactly
/// `ExperimentConfig::default()`.
pub const DEFAULT_CONFIG_TOML: &str = r#"# Range-seeking simulator: reference configuration.
# Units: speed m/s, angles degrees, frequencies rad/s, time s, power W.
# Angles are converted to radians internally; CSV output uses degrees again.

[vehicle]
mass = 0.66            # takeoff mass, kg
rotor_radius = 0.1015  # single rotor radius, m
air_density = 1.225    # kg/m^3
gravity = 9.81         # m/s^2
eta = 0.55             # electrical efficiency of the drive train, (0, 1]
kappa = 1.15           # induced-power correction, >= 1
mu1_long = 0.50        # linear drag, body forward axis, N s/m
mu1_lat = 0.05         # linear drag, body lateral axis, N s/m
mu2_long = 1.05        # quadratic drag, body forward axis, N s^2/m^2
mu2_lat = 0.70         # quadratic drag, body lateral axis, N s^2/m^2

# Brute-force search domain for the `oracle` subcommand and for the optimum
# the run summaries are scored against.
[domain]
speed_range = [0.2, 8.0]       # m/s; lower edge must stay above 0
sideslip_range = [0.0, 180.0]  # degrees; the drag model repeats every 180
speed_steps = 157
sideslip_steps = 181
refine_levels = 3              # local 5x5 refinement passes after the sweep

# One seeking channel per optimization variable. `mode` picks the controller
# variant per channel; `--mode` on the simulate subcommand overrides both.
# `k` holds the integrator gain for each variant so that a comparison run
# can use matched settings from a single file.
[esc.speed_channel]
mode = "adaptive"
a = 0.15          # dither amplitude, m/s
omega = 1.0       # dither frequency, rad/s
hp_cutoff = 1.0   # washout filter cutoff, rad/s
lp_cutoff = 1.0   # demodulation smoothing cutoff, rad/s
k = { adaptive = 0.1, standard = 0.025 }
r0 = 2.2          # initial speed reference, m/s
bounds = [0.2, 8.0]

[esc.speed_channel.adapter]
beta1 = 0.9       # first-moment decay
beta2 = 0.999     # second-moment decay
epsilon = 1e-8    # divide-by-zero guard
threshold = 1.0   # RMS level separating normalization from attenuation

[esc.sideslip_channel]
mode = "adaptive"
a = 7.5           # dither amplitude, degrees
omega = 0.5       # dither frequency, rad/s
hp_cutoff = 0.5
lp_cutoff = 0.5
k = { adaptive = 0.1, standard = 0.02 }
r0 = 50.0         # initial sideslip reference, degrees
bounds = [0.0, 180.0]

[esc.sideslip_channel.adapter]
beta1 = 0.9
beta2 = 0.999
epsilon = 1e-8
threshold = 1.0

[sim]
dt = 0.01             # controller/measurement step, s
duration = 300.0      # simulated time, s
seed = 42             # measurement-noise seed
power_noise_std = 2.0 # additive Gaussian noise on measured power, W
tracking_tau = 0.3    # first-order lag from reference to actual, s

[output]
directory = "out" # created if missing; --out overrides
decimation = 1    # keep every Nth sample in trace CSVs
"#;
