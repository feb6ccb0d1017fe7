//! Fixed-step simulation of the augmented closed loop (plant + controller
//! internal state + interaction-variable integrals), trajectory recording of
//! both layers, residual monitors, and performance metrics.

mod engine;
mod monitors;
mod scenario;
mod trajectory;

pub use engine::{build_controller, build_plant, dissipation_at, simulate, Controller, Plant,
    SimOutcome};
pub use monitors::{
    max_residual_in_window, residual_monitors, ResidualReport, ResidualSummary,
    LIFT_TOLERANCE_REL,
};
pub use scenario::{
    ControllerConfig, DisturbanceConfig, LoadConfig, PlantConfig, Scenario,
};
pub use trajectory::{
    compute_metrics, Metrics, Trajectory, DEFAULT_WINDOW_FRACTION, SETTLING_BAND_FRACTION,
};
