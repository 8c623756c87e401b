use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("power-law exponent {0} is out of range")]
    InvalidExponent(i64),
    #[error("box half-width must be positive and finite, got {0}")]
    InvalidWidth(f64),
    #[error("energy must be positive and finite, got {0}")]
    NonPositiveEnergy(f64),
    #[error("grid needs at least 101 points, got {0}")]
    TooFewPoints(usize),
    #[error("symmetric grids need an odd point count so x = 0 is a node, got {0}")]
    EvenPointCount(usize),
    #[error("c_lambda must be at least 2, got {0}")]
    InvalidExtent(f64),
    #[error("requested {requested} states but at most {allowed} are resolvable on this grid")]
    TooManyStates { requested: usize, allowed: usize },
    #[error("state index {index} out of range for a spectrum of {count} states")]
    StateIndex { index: usize, count: usize },
    #[error("eigenpair {index} did not converge after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },
    #[error("quadrature did not converge after {levels} refinements (last change {change:e})")]
    QuadratureNoConvergence { levels: usize, change: f64 },
    #[error("state is not normalized: norm = {0}")]
    Unnormalized(f64),
    #[error("kinetic and derivative <P^2> routes disagree: {kinetic} vs {derivative}")]
    RouteDisagreement { kinetic: f64, derivative: f64 },
    #[error("operation requires a power-law family")]
    NotPowerFamily,
    #[error("operation requires a symmetric power-law family")]
    NotSymmetricPower,
    #[error("moment order {0} is not supported")]
    UnsupportedMoment(u32),
    #[error("box states are numbered from 1")]
    BoxStateIndex,
    #[error("state has a node at grid index {0}; a nodeless ground state is required")]
    NodeDetected(usize),
    #[error("no turning point found for E = {energy} ({reason})")]
    TurningPoint { energy: f64, reason: &'static str },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("{label}: {source}")]
    InPotential { label: String, source: Box<Error> },
}

impl Error {
    /// Whether the error comes from bad input rather than a failed
    /// computation.
    pub fn is_config(&self) -> bool {
        match self {
            Error::InPotential { source, .. } => source.is_config(),
            Error::InvalidExponent(_)
            | Error::InvalidWidth(_)
            | Error::TooFewPoints(_)
            | Error::EvenPointCount(_)
            | Error::InvalidExtent(_)
            | Error::TooManyStates { .. }
            | Error::StateIndex { .. }
            | Error::NotPowerFamily
            | Error::NotSymmetricPower
            | Error::UnsupportedMoment(_)
            | Error::BoxStateIndex
            | Error::OutOfRange(_) => true,
            _ => false,
        }
    }
}
