//! Energy-space control laws and the component-specific maps around them:
//! reference lifts into `(E_ref, p_ref, pdot_ref)` and realizations of the
//! primary control input `u_z = Qdot^u` as a physical actuation.

use super::EnergyReference;
use crate::components::{GenParams, LoadProfile, RlcParams};
use crate::energy::EnergyState;
use crate::error::CoreError;
use crate::scalar::{cast, Real};

/// Feedback-linearization gains; both must be positive for the closed-loop
/// error dynamics to be stable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FblcGains<T> {
    pub k1: T,
    pub k2: T,
}

/// Sliding-mode gains: switching gain `m0` (W/s), surface slope `m1` (1/s),
/// and the boundary-layer width `eps_bl` (W) of the smoothed sign. With
/// `eps_bl = 0` the switching term is the exact sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmcGains<T> {
    pub m0: T,
    pub m1: T,
    pub eps_bl: T,
}

/// Sign with an optional linear boundary layer: exact sign for
/// `eps_bl = 0`, else `sigma / max(|sigma|, eps_bl)`. Zero at the origin
/// under both conventions.
pub fn smoothed_sign<T: Real>(sigma: T, eps_bl: T) -> T {
    if sigma == T::zero() {
        T::zero()
    } else if eps_bl <= T::zero() {
        sigma.signum()
    } else {
        sigma / sigma.abs().max(eps_bl)
    }
}

/// Energy-based feedback-linearization law:
///
/// ```text
/// u_z = 4 E_t + 2 Qdot_C + sum_j Qdot_j^r
///     + K1 (E - E_ref) + K2 (p - p_ref) - pdot_ref
/// ```
///
/// Cancels the nonlinear terms of the energy dynamics so the tracking error
/// obeys `edd = -K2 ed - K1 e` up to the exogenous `Qdot^m`.
pub fn fblc_uz<T: Real>(
    xz: &EnergyState<T>,
    qdot_c: T,
    neighbor_qdot_sum: T,
    r: &EnergyReference<T>,
    g: &FblcGains<T>,
) -> T {
    let four = cast::<T>(4.0);
    let two = cast::<T>(2.0);
    four * xz.e_t + two * qdot_c + neighbor_qdot_sum
        + g.k1 * (xz.e - r.e_ref)
        + g.k2 * (xz.p - r.p_ref)
        - r.pdot_ref
}

/// Sliding surface `sigma = (p - p_ref) + M1 (E - E_ref)`.
pub fn smc_sigma<T: Real>(xz: &EnergyState<T>, r: &EnergyReference<T>, g: &SmcGains<T>) -> T {
    (xz.p - r.p_ref) + g.m1 * (xz.e - r.e_ref)
}

/// Energy-based sliding-mode law; returns `(u_z, sigma)`.
///
/// ```text
/// u_z = 4 E_t + 2 Qdot_C + sum_j Qdot_j^r
///     + M1 (p - p_ref) + M0 sgn_eps(sigma) - pdot_ref
/// ```
pub fn smc_uz<T: Real>(
    xz: &EnergyState<T>,
    qdot_c: T,
    neighbor_qdot_sum: T,
    r: &EnergyReference<T>,
    g: &SmcGains<T>,
) -> (T, T) {
    let four = cast::<T>(4.0);
    let two = cast::<T>(2.0);
    let sigma = smc_sigma(xz, r, g);
    let uz = four * xz.e_t + two * qdot_c + neighbor_qdot_sum
        + g.m1 * (xz.p - r.p_ref)
        + g.m0 * smoothed_sign(sigma, g.eps_bl)
        - r.pdot_ref;
    (uz, sigma)
}

/// Energy reference for terminal-voltage regulation of the RLC source:
///
/// ```text
/// E_ref    = L1 (P/y_ref)^2 / 2 + C1 y_ref^2 / 2
/// p_ref    = L1 (P/y_ref^2) Pdot
/// pdot_ref = L1 (Pdot^2 + P Pddot) / y_ref^2
/// ```
///
/// `pdot_ref` is the analytic derivative of `p_ref` for constant `y_ref`.
pub fn rlc_reference_lift<T: Real>(
    profile: &LoadProfile<T>,
    t: T,
    y_ref: T,
    params: &RlcParams<T>,
) -> Result<EnergyReference<T>, CoreError> {
    if y_ref <= T::zero() {
        return Err(CoreError::InvalidScenario {
            key: "y_ref".into(),
            reason: "voltage reference must be positive".into(),
        });
    }
    let two = cast::<T>(2.0);
    let s = profile.sample(t);
    let i_ref = s.p / y_ref;
    let y2 = y_ref * y_ref;
    Ok(EnergyReference {
        e_ref: params.l1 * i_ref * i_ref / two + params.c1 * y2 / two,
        p_ref: params.l1 * (s.p / y2) * s.p_dot,
        pdot_ref: params.l1 * (s.p_dot * s.p_dot + s.p * s.p_ddot) / y2,
    })
}

/// Energy reference for rotor-speed regulation: `(J1 y_ref^2 / 2, 0, 0)`.
pub fn gen_reference_lift<T: Real>(y_ref: T, params: &GenParams<T>) -> EnergyReference<T> {
    let two = cast::<T>(2.0);
    EnergyReference {
        e_ref: params.j1 * y_ref * y_ref / two,
        p_ref: T::zero(),
        pdot_ref: T::zero(),
    }
}

/// Derivative of the RLC realization map: the inverter voltage evolves under
///
/// ```text
/// du/dt = (u/i) di/dt - u_z/i
/// ```
///
/// which makes the realized `Qdot^u = u di/dt - i du/dt` equal `u_z` exactly.
/// Integrated as part of the augmented system with the plant.
pub fn rlc_uz_du_dt<T: Real>(u_z: T, i: T, di_dt: T, u: T, i_min: T) -> Result<T, CoreError> {
    if i.abs() <= i_min {
        return Err(CoreError::ControlSingularity {
            value: i.to_f64().unwrap_or(f64::NAN),
            limit: i_min.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((u / i) * di_dt - u_z / i)
}

/// Default guard on the inductor current in the RLC realization map.
pub const DEFAULT_I_MIN: f64 = 1e-3;

/// Algebraic realization of `u_z` as the governor valve position:
///
/// ```text
/// a = (Tt (2 omegadot Pm/omega - u_z) + Pm) / Kt
/// ```
///
/// Substituted into the turbine dynamics this makes the realized
/// `Qdot^u = 2 Pm omegadot/omega - Pmdot` equal `u_z` exactly.
pub fn gen_uz_to_u<T: Real>(
    u_z: T,
    x: &[T],
    xdot: &[T],
    params: &GenParams<T>,
) -> Result<T, CoreError> {
    let (omega, pm) = (x[0], x[1]);
    if omega.abs() <= params.omega_min {
        return Err(CoreError::SingularFrequency {
            value: omega.to_f64().unwrap_or(f64::NAN),
            limit: params.omega_min.to_f64().unwrap_or(f64::NAN),
        });
    }
    let two = cast::<T>(2.0);
    Ok((params.tt * (two * xdot[0] * pm / omega - u_z) + pm) / params.kt)
}
