//! Physical-layer component models: the inverter-fed RLC source and the
//! synchronous generator with a first-order turbine, plus load subsystems.
//!
//! Both components follow the affine input structure
//! `xdot = f(x) + g_r(x) r + g_u(x) u` with the port input `r` being the
//! power drawn by the attached load. Neither carries a physical exogenous
//! input channel (`g_m = 0`); the exogenous interaction of the control layer
//! is informational and lives in [`crate::interconnect`].

mod generator;
mod load;
mod rlc;

pub use generator::{generator_equilibrium, GenParams, TurbineGenerator};
pub use load::{load_interaction, LoadProfile, LoadSample};
pub use rlc::{RlcParams, RlcSource};

use crate::energy::{EffortFlowSample, EnergyLiftParams};
use crate::error::CoreError;
use crate::scalar::Real;

/// Identifies an effort/flow port of a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortId {
    /// Actuation channel: `(u, i)` for the RLC source, `(Pm/omega, omega)`
    /// for the generator.
    Control,
    /// Internal capacitor pair `(v, C vdot)`; only the RLC source has one.
    Capacitor,
}

/// Input time-derivatives needed to evaluate the analytic second derivative
/// of the state (the jet).
#[derive(Debug, Clone, Copy, Default)]
pub struct InputRates<T> {
    pub u_dot: T,
    pub load_power_dot: T,
}

/// Contract every physical component satisfies: state dynamics, the analytic
/// derivative chain for effort/flow rates, and the energy-lift parameters.
pub trait PhysComponent<T: Real> {
    fn state_dim(&self) -> usize;

    /// State derivative `xdot` at `(x, u, r)` where `r` is the load power
    /// drawn at the port.
    fn rhs(&self, x: &[T], u: T, load_power: T, out: &mut [T]) -> Result<(), CoreError>;

    /// `(xdot, xddot)` with the second derivative computed analytically from
    /// the supplied input rates. The first output equals [`Self::rhs`].
    fn rhs_jet(
        &self,
        x: &[T],
        u: T,
        load_power: T,
        rates: &InputRates<T>,
        xdot: &mut [T],
        xddot: &mut [T],
    ) -> Result<(), CoreError>;

    fn ports(&self) -> &'static [PortId];

    /// Effort/flow sample of the named port, including time derivatives.
    fn effort_flow(
        &self,
        port: PortId,
        x: &[T],
        xdot: &[T],
        u: T,
        u_dot: T,
    ) -> Result<EffortFlowSample<T>, CoreError>;

    fn lift_params(&self) -> &EnergyLiftParams<T>;

    /// Rate of reactive power injected into the component's capacitor;
    /// zero for components without one.
    fn qdot_capacitor(&self, x: &[T], xdot: &[T], xddot: &[T]) -> T;

    /// Output of interest `y` (terminal voltage, rotor speed).
    fn output(&self, x: &[T]) -> T;
}
