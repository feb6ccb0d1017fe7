//! Energy-space modeling and distributed component-level control.
//!
//! Physical component models (an inverter-fed RLC voltage source, a
//! synchronous generator with a first-order turbine) are lifted to a linear
//! third-order energy space `(E, p = dE/dt, E_t)`. Controllers are
//! synthesized in that space from local states plus port-interaction rates
//! communicated by neighbors, then mapped back to the physical actuator.
//! The simulation engine integrates the augmented closed loop with fixed-step
//! RK4 and monitors the Lyapunov and reaching-time certificates of the
//! energy-based laws alongside conventional benchmark controllers.
//!
//! The math core (`energy`, `components`, `controllers`, `interconnect`,
//! `integrate`) is generic over the scalar type through [`scalar::Real`];
//! the scenario/simulation/analysis layer is pinned to `f64`, for which
//! aliases are exported at the crate root.

pub mod analysis;
pub mod components;
pub mod controllers;
pub mod energy;
pub mod error;
pub mod integrate;
pub mod interconnect;
pub mod scalar;
pub mod sim;

pub use error::CoreError;
pub use scalar::Real;

/// `f64` instances of the generic core types.
pub type EffortFlowSample64 = energy::EffortFlowSample<f64>;
pub type EnergyState64 = energy::EnergyState<f64>;
pub type InteractionRate64 = energy::InteractionRate<f64>;
pub type InteractionVariable64 = energy::InteractionVariable<f64>;
pub type TimeConstants64 = energy::TimeConstants<f64>;
pub type EnergyLiftParams64 = energy::EnergyLiftParams<f64>;
pub type EnergyReference64 = controllers::EnergyReference<f64>;
pub type RlcParams64 = components::RlcParams<f64>;
pub type GenParams64 = components::GenParams<f64>;
pub type LoadProfile64 = components::LoadProfile<f64>;
