//! Step-size adapter for the gradient estimate.
//!
//! Keeps exponential moving averages of the demodulated gradient (first
//! moment) and of its square (second moment). When the RMS gradient is large
//! the output is the moment ratio m/√v — a normalized step of magnitude ≈ 1
//! whatever the cost scale, so differently-scaled channels descend at
//! comparable rates. When the RMS falls below a threshold the output is
//! attenuated by √v instead, which quiets the hunting that a fixed step keeps
//! up around an optimum.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdapterConfig {
    /// First-moment averaging factor.
    pub beta1: f64,
    /// Second-moment averaging factor.
    pub beta2: f64,
    /// Keeps the normalized branch finite at zero RMS.
    pub epsilon: f64,
    /// RMS level separating the normalized and attenuated branches.
    pub threshold: f64,
}

impl Default for AdapterConfig {
    fn default() -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            threshold: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AdapterState {
    config: AdapterConfig,
    first_moment: f64,
    second_moment: f64,
    step_index: u64,
    initialized: bool,
}

impl AdapterState {
    pub fn new(config: AdapterConfig) -> Self {
        Self {
            config,
            first_moment: 0.0,
            second_moment: 0.0,
            step_index: 0,
            initialized: false,
        }
    }

    /// Feed one gradient-estimate sample, returning the scaled step `g`.
    ///
    /// The first sample seeds both moments and is then processed by the same
    /// update as every later sample.
    pub fn step(&mut self, q_lp: f64) -> f64 {
        if !self.initialized {
            self.first_moment = q_lp;
            self.second_moment = q_lp * q_lp;
            self.initialized = true;
        }
        let c = self.config;
        self.first_moment = c.beta1 * self.first_moment + (1.0 - c.beta1) * q_lp;
        self.second_moment = c.beta2 * self.second_moment + (1.0 - c.beta2) * q_lp * q_lp;
        self.step_index += 1;
        let rms = self.second_moment.sqrt();
        if rms > c.threshold {
            self.first_moment / (rms + c.epsilon)
        } else {
            self.first_moment * (rms + c.epsilon) / (c.threshold * c.threshold)
        }
    }

    pub fn config(&self) -> AdapterConfig {
        self.config
    }

    pub fn first_moment(&self) -> f64 {
        self.first_moment
    }

    pub fn second_moment(&self) -> f64 {
        self.second_moment
    }

    pub fn step_index(&self) -> u64 {
        self.step_index
    }
}
