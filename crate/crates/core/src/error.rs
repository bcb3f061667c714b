use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario parameters: {0}")]
    InvalidParams(String),

    /// The wave function (squared modulus) fell below the node threshold,
    /// so `∂ₓΨ/Ψ` and the guidance velocity are undefined there.
    #[error("wave-function node at x = {x} nm, z = {z} nm (density {density:e})")]
    NodeSingularity { x: f64, z: f64, density: f64 },

    #[error("quadrature did not converge: relative change {change:e} on doubling to {n_points} points")]
    QuadratureUnconverged { n_points: usize, change: f64 },

    #[error("profile needs at least 3 samples, got {0}")]
    EmptyProfile(usize),

    #[error("plane z = {z} nm outside simulated range [{z_min}, {z_max}] nm")]
    PlaneOutOfRange { z: f64, z_min: f64, z_max: f64 },

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 3,
            Error::Config(_)
            | Error::InvalidParams(_)
            | Error::InvalidConfig(_)
            | Error::PlaneOutOfRange { .. } => 2,
            _ => 1,
        }
    }
}
