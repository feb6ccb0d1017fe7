//! Error types shared across the library.

use thiserror::Error;

/// Which denominator of a time-constant computation degenerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Denominator {
    /// `D = x^T B x / 2` fell below the dissipation floor.
    Dissipation,
    /// `D_t = xdot^T B xdot / 2` fell below the dissipation floor.
    TangentDissipation,
}

impl std::fmt::Display for Denominator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Denominator::Dissipation => write!(f, "dissipation D"),
            Denominator::TangentDissipation => write!(f, "tangent dissipation D_t"),
        }
    }
}

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("non-finite input in {context}")]
    NonFiniteInput { context: &'static str },

    #[error("time constant undefined: {which} at or below the floor")]
    UndefinedTimeConstant { which: Denominator },

    #[error("singular load voltage: |v| = {value} V at or below the {limit} V floor")]
    SingularLoadVoltage { value: f64, limit: f64 },

    #[error("singular frequency: |omega| = {value} rad/s at or below the {limit} rad/s floor")]
    SingularFrequency { value: f64, limit: f64 },

    #[error("control map singular: |i| = {value} A at or below the {limit} A floor")]
    ControlSingularity { value: f64, limit: f64 },

    #[error("component has no port {0:?}")]
    UnknownPort(crate::components::PortId),

    #[error("divergence at step {step}: non-finite value in RK4 stage {stage}")]
    Divergence { step: usize, stage: usize },

    #[error("simulation failed at step {step} (t = {time} s): {source}")]
    SimulationAborted {
        step: usize,
        time: f64,
        #[source]
        source: Box<CoreError>,
    },

    #[error("equilibrium solve did not converge in {iterations} iterations (residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid scenario: {key}: {reason}")]
    InvalidScenario { key: String, reason: String },

    #[error("invalid load table: {0}")]
    InvalidLoadTable(String),
}

impl CoreError {
    /// Step index at which a simulation aborted, if this is an abort error.
    pub fn step(&self) -> Option<usize> {
        match self {
            CoreError::SimulationAborted { step, .. } => Some(*step),
            _ => None,
        }
    }
}
