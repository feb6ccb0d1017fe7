//! Conventional benchmark controllers the energy-based laws are compared
//! against: a proportional voltage controller, the Brayton-Moser nonlinear
//! voltage controller, and a droop governor.

use crate::components::{GenParams, RlcParams};
use crate::error::CoreError;
use crate::scalar::Real;

/// Gains of the proportional voltage benchmark.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropGains<T> {
    pub ki: T,
    pub kv: T,
}

/// Gains of the Brayton-Moser voltage benchmark. Stability holds for
/// references above zero and load power at most `pi_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmGains<T> {
    pub n1: T,
    pub n2: T,
    pub n3: T,
    pub pi_max: T,
}

/// Droop governor: time constant `tg` (s) and droop coefficient `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroopGains<T> {
    pub tg: T,
    pub r: T,
}

/// Proportional benchmark around the feedforward reference input
/// `u_ref = y_ref + R1 P/y_ref` (the input holding `vdot = 0` at the target):
///
/// ```text
/// u = u_ref - Ki (i - P/y_ref) - Kv (v - y_ref)
/// ```
pub fn proportional_u<T: Real>(
    x: &[T],
    y_ref: T,
    load_power: T,
    g: &PropGains<T>,
    params: &RlcParams<T>,
) -> T {
    let i_ref = load_power / y_ref;
    let u_ref = y_ref + params.r1 * i_ref;
    u_ref - g.ki * (x[0] - i_ref) - g.kv * (x[1] - y_ref)
}

/// Brayton-Moser benchmark:
///
/// ```text
/// u = y_ref + R1 i - L1 (Pi/v^2 + N3) vdot - (N1 (v - y_ref) + N2 vdot)
/// ```
///
/// `v_dot` comes from the plant dynamics at the current state.
pub fn brayton_moser_u<T: Real>(
    x: &[T],
    v_dot: T,
    y_ref: T,
    g: &BmGains<T>,
    params: &RlcParams<T>,
) -> Result<T, CoreError> {
    let (i, v) = (x[0], x[1]);
    if v.abs() <= params.v_min {
        return Err(CoreError::SingularLoadVoltage {
            value: v.to_f64().unwrap_or(f64::NAN),
            limit: params.v_min.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(y_ref + params.r1 * i
        - params.l1 * (g.pi_max / (v * v) + g.n3) * v_dot
        - (g.n1 * (v - y_ref) + g.n2 * v_dot))
}

/// Droop-governor valve dynamics, integrated with the plant:
///
/// ```text
/// da/dt = -a/Tg - (omega - y_ref)/(Tg r)
/// ```
pub fn droop_a_dot<T: Real>(a: T, omega: T, y_ref: T, g: &DroopGains<T>) -> T {
    -a / g.tg - (omega - y_ref) / (g.tg * g.r)
}

/// Closed-loop droop steady state: the rotor speed solving
/// `Kt a_ss = P_load + D1 omega^2` with `a_ss = -(omega - y_ref)/r`,
/// by bisection to near machine precision. Returns `(omega_ss, a_ss)`.
///
/// This is the documented steady-state frequency offset proportional to the
/// load; used as the oracle the simulated droop equilibrium must match.
pub fn droop_steady_state_valve(
    params: &GenParams<f64>,
    g: &DroopGains<f64>,
    y_ref: f64,
    load_power: f64,
) -> Result<(f64, f64), CoreError> {
    let residual = |w: f64| -> f64 {
        params.kt * (-(w - y_ref) / g.r) - load_power - params.d1 * w * w
    };
    // Droop pulls the speed below the reference under positive load.
    let mut lo = y_ref * 0.5;
    let mut hi = y_ref;
    if residual(lo) <= 0.0 || residual(hi) >= 0.0 {
        // Widen once; the physical bracket is generous for sane parameters.
        lo = 1.0;
        hi = y_ref * 2.0;
        if residual(lo) * residual(hi) > 0.0 {
            return Err(CoreError::NoConvergence { iterations: 0, residual: residual(hi) });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= f64::EPSILON * hi.abs() {
            break;
        }
    }
    let w = 0.5 * (lo + hi);
    Ok((w, -(w - y_ref) / g.r))
}
