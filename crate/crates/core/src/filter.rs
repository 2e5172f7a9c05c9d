//! First-order high-pass and low-pass filters, discretized with backward
//! Euler so they stay stable for any timestep.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    HighPass,
    LowPass,
}

#[derive(Debug, Clone, Copy)]
pub struct FirstOrderFilter {
    kind: FilterKind,
    cutoff: f64,
    prev_input: f64,
    prev_output: f64,
    initialized: bool,
}

impl FirstOrderFilter {
    pub fn new(kind: FilterKind, cutoff: f64) -> Self {
        assert!(cutoff > 0.0, "filter cutoff must be > 0, got {cutoff}");
        Self {
            kind,
            cutoff,
            prev_input: 0.0,
            prev_output: 0.0,
            initialized: false,
        }
    }

    pub fn high_pass(cutoff: f64) -> Self {
        Self::new(FilterKind::HighPass, cutoff)
    }

    pub fn low_pass(cutoff: f64) -> Self {
        Self::new(FilterKind::LowPass, cutoff)
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Advance the filter by one sample.
    ///
    /// The first sample seeds the state: a low-pass starts *at* the signal and
    /// a high-pass starts at zero output, so neither injects a startup
    /// transient into the loop.
    pub fn step(&mut self, input: f64, dt: f64) -> Result<f64> {
        if !(dt > 0.0) {
            return Err(Error::InvalidTimestep(dt));
        }
        if !self.initialized {
            self.prev_input = input;
            self.prev_output = match self.kind {
                FilterKind::LowPass => input,
                FilterKind::HighPass => 0.0,
            };
            self.initialized = true;
        }
        let out = match self.kind {
            FilterKind::LowPass => {
                let blend = dt * self.cutoff / (1.0 + dt * self.cutoff);
                self.prev_output + blend * (input - self.prev_output)
            }
            FilterKind::HighPass => {
                (self.prev_output + input - self.prev_input) / (1.0 + dt * self.cutoff)
            }
        };
        self.prev_input = input;
        self.prev_output = out;
        Ok(out)
    }

    pub fn output(&self) -> f64 {
        self.prev_output
    }
}
