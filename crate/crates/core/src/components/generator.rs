//! Synchronous generator: classical swing equation plus a first-order
//! turbine driven by the governor valve position.
//!
//! State `x = [omega, Pm]`: rotor speed and turbine mechanical power.
//!
//! ```text
//! domega/dt = -(D1/J1) omega + Pm/(J1 omega) - P_load/(J1 omega)
//! dPm/dt    = -Pm/Tt + (Kt/Tt) a
//! ```
//!
//! Only the rotor coordinate carries energy (`H = diag(J1, 0)`); the turbine
//! state enters the energy layer through the control-port effort `Pm/omega`.
//! `B = diag(2 D1, 0)` makes the dissipation the damping loss `D1 omega^2`.

use super::{InputRates, PhysComponent, PortId};
use crate::energy::{EffortFlowSample, EnergyLiftParams};
use crate::error::CoreError;
use crate::scalar::{cast, Real};

/// Default guard on the rotor speed before the torque terms divide by it.
pub const DEFAULT_OMEGA_MIN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams<T> {
    /// Rotor inertia (kg m^2).
    pub j1: T,
    /// Damping coefficient (N m s/rad).
    pub d1: T,
    /// Turbine time constant (s).
    pub tt: T,
    /// Turbine gain (W/cm of valve position).
    pub kt: T,
    /// Singularity guard on |omega| (rad/s).
    pub omega_min: T,
}

impl<T: Real> GenParams<T> {
    pub fn new(j1: T, d1: T, tt: T, kt: T) -> Self {
        Self {
            j1,
            d1,
            tt,
            kt,
            omega_min: cast(DEFAULT_OMEGA_MIN),
        }
    }

    /// Parameter set used throughout the frequency-regulation example:
    /// J1 = 10 kg m^2, D1 = 0.01 N m s/rad, Tt = 0.5 s, Kt = 1000 W/cm.
    pub fn example() -> Self {
        Self::new(cast(10.0), cast(0.01), cast(0.5), cast(1000.0))
    }
}

#[derive(Debug, Clone)]
pub struct TurbineGenerator<T> {
    pub params: GenParams<T>,
    lift: EnergyLiftParams<T>,
}

impl<T: Real> TurbineGenerator<T> {
    pub fn new(params: GenParams<T>) -> Self {
        let two = cast::<T>(2.0);
        let lift = EnergyLiftParams::new(
            vec![params.j1, T::zero()],
            vec![two * params.d1, T::zero()],
        );
        Self { params, lift }
    }

    fn guard_speed(&self, omega: T) -> Result<(), CoreError> {
        if omega.abs() <= self.params.omega_min {
            Err(CoreError::SingularFrequency {
                value: omega.to_f64().unwrap_or(f64::NAN),
                limit: self.params.omega_min.to_f64().unwrap_or(f64::NAN),
            })
        } else {
            Ok(())
        }
    }
}

impl<T: Real> PhysComponent<T> for TurbineGenerator<T> {
    fn state_dim(&self) -> usize {
        2
    }

    fn rhs(&self, x: &[T], valve: T, load_power: T, out: &mut [T]) -> Result<(), CoreError> {
        let (omega, pm) = (x[0], x[1]);
        self.guard_speed(omega)?;
        let p = &self.params;
        out[0] = -(p.d1 / p.j1) * omega + (pm - load_power) / (p.j1 * omega);
        out[1] = -pm / p.tt + (p.kt / p.tt) * valve;
        Ok(())
    }

    fn rhs_jet(
        &self,
        x: &[T],
        valve: T,
        load_power: T,
        rates: &InputRates<T>,
        xdot: &mut [T],
        xddot: &mut [T],
    ) -> Result<(), CoreError> {
        self.rhs(x, valve, load_power, xdot)?;
        let p = &self.params;
        let omega = x[0];
        let pm = x[1];
        let (dw, dpm) = (xdot[0], xdot[1]);
        xddot[0] = -(p.d1 / p.j1) * dw
            + ((dpm - rates.load_power_dot) * omega - (pm - load_power) * dw)
                / (p.j1 * omega * omega);
        xddot[1] = -dpm / p.tt + (p.kt / p.tt) * rates.u_dot;
        Ok(())
    }

    fn ports(&self) -> &'static [PortId] {
        &[PortId::Control]
    }

    fn effort_flow(
        &self,
        port: PortId,
        x: &[T],
        xdot: &[T],
        _valve: T,
        _valve_dot: T,
    ) -> Result<EffortFlowSample<T>, CoreError> {
        match port {
            // (e, f) = (Pm/omega, omega): turbine torque against rotor speed.
            PortId::Control => {
                let (omega, pm) = (x[0], x[1]);
                let (dw, dpm) = (xdot[0], xdot[1]);
                Ok(EffortFlowSample::new(
                    pm / omega,
                    omega,
                    (dpm * omega - pm * dw) / (omega * omega),
                    dw,
                ))
            }
            PortId::Capacitor => Err(CoreError::UnknownPort(port)),
        }
    }

    fn lift_params(&self) -> &EnergyLiftParams<T> {
        &self.lift
    }

    fn qdot_capacitor(&self, _x: &[T], _xdot: &[T], _xddot: &[T]) -> T {
        T::zero()
    }

    fn output(&self, x: &[T]) -> T {
        x[0]
    }
}

/// Turbine power and valve position holding the rotor at `omega` against
/// `load_power`: `Pm* = P + D1 omega^2`, `a* = Pm*/Kt`.
pub fn generator_equilibrium<T: Real>(params: &GenParams<T>, omega: T, load_power: T) -> (T, T) {
    let pm = load_power + params.d1 * omega * omega;
    (pm, pm / params.kt)
}
