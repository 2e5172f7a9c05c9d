use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "induced-velocity solve did not converge (nu_h={nu_h}, nu_inf={nu_inf}, alpha={alpha})"
    )]
    NonConvergence { nu_h: f64, nu_inf: f64, alpha: f64 },

    #[error("cost is undefined at speed {0} m/s (requires speed > 0)")]
    InvalidSpeed(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("timestep must be positive, got {0}")]
    InvalidTimestep(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("traces are not comparable: {0}")]
    MismatchedTraces(String),
}

pub type Result<T> = std::result::Result<T, Error>;
