//! Control laws: the energy-based FBLC and SMC synthesized in energy space,
//! their reference lifts and physical realization maps, and the three
//! conventional benchmarks (proportional voltage control, Brayton-Moser
//! voltage control, droop governor).

mod benchmarks;
mod energy_ctrl;

pub use benchmarks::{
    brayton_moser_u, droop_a_dot, droop_steady_state_valve, proportional_u, BmGains, DroopGains,
    PropGains,
};
pub use energy_ctrl::{
    fblc_uz, gen_reference_lift, gen_uz_to_u, rlc_reference_lift, rlc_uz_du_dt, smc_sigma,
    smc_uz, smoothed_sign, FblcGains, SmcGains, DEFAULT_I_MIN,
};

use crate::scalar::Real;

/// Energy-space output reference `(E_ref, p_ref, pdot_ref)`.
///
/// `p_ref` is the exact time derivative of `E_ref` along the load profile, so
/// that the energy-error dynamics close; for constant physical reference and
/// constant load both rates vanish.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyReference<T> {
    pub e_ref: T,
    pub p_ref: T,
    pub pdot_ref: T,
}

impl<T: Real> EnergyReference<T> {
    pub fn new(e_ref: T, p_ref: T, pdot_ref: T) -> Self {
        Self { e_ref, p_ref, pdot_ref }
    }
}
