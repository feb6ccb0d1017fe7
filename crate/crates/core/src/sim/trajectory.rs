//! Recorded time series of one run and the performance metrics derived
//! from it.

use crate::energy::InteractionRate;

type Rate = InteractionRate<f64>;

/// Time-indexed record of both layers: physical states and inputs, the
/// energy lift, references, interaction rates (own port / neighbor-reported /
/// control / exogenous), and the controller diagnostics. Uniform time grid.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub name: String,
    /// Recording grid step: integrator step times the record decimation.
    pub dt: f64,
    pub t: Vec<f64>,
    pub x0: Vec<f64>,
    pub x1: Vec<f64>,
    pub xdot0: Vec<f64>,
    pub xdot1: Vec<f64>,
    pub u: Vec<f64>,
    pub u_z: Vec<f64>,
    pub y: Vec<f64>,
    pub y_ref: Vec<f64>,
    pub e: Vec<f64>,
    pub p: Vec<f64>,
    pub e_t: Vec<f64>,
    pub e_ref: Vec<f64>,
    pub p_ref: Vec<f64>,
    pub pdot_ref: Vec<f64>,
    pub qdot_c: Vec<f64>,
    /// Own port rate, from exact physics.
    pub r_own: Vec<Rate>,
    /// Neighbor-reported rate as the controller saw it (held + injected).
    pub r_nb: Vec<Rate>,
    pub r_u: Vec<Rate>,
    /// Exogenous channel: delay residual plus injected signal.
    pub r_m: Vec<Rate>,
    /// Sliding surface, NaN unless an SMC runs.
    pub sigma: Vec<f64>,
    /// Lyapunov value of the active energy controller, NaN for benchmarks.
    pub v_lyap: Vec<f64>,
    /// Interaction-variable integrals accumulated inside the integrator.
    pub z_r: Vec<[f64; 3]>,
    pub z_u: Vec<[f64; 3]>,
    pub z_m: Vec<[f64; 3]>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub(crate) fn reserve(&mut self, n: usize) {
        self.t.reserve(n);
        self.x0.reserve(n);
        self.x1.reserve(n);
        self.xdot0.reserve(n);
        self.xdot1.reserve(n);
        self.u.reserve(n);
        self.u_z.reserve(n);
        self.y.reserve(n);
        self.y_ref.reserve(n);
        self.e.reserve(n);
        self.p.reserve(n);
        self.e_t.reserve(n);
        self.e_ref.reserve(n);
        self.p_ref.reserve(n);
        self.pdot_ref.reserve(n);
        self.qdot_c.reserve(n);
        self.r_own.reserve(n);
        self.r_nb.reserve(n);
        self.r_u.reserve(n);
        self.r_m.reserve(n);
        self.sigma.reserve(n);
        self.v_lyap.reserve(n);
        self.z_r.reserve(n);
        self.z_u.reserve(n);
        self.z_m.reserve(n);
    }
}

/// Scalar performance summary of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    /// Mean |y - y_ref| over the trailing window.
    pub steady_state_error: f64,
    /// Peak excursion past the setpoint, as a fraction of the initial
    /// setpoint step span |y_ref - y(0)|.
    pub overshoot: f64,
    /// Last time |y - y_ref| leaves the +/-2 % band around the setpoint;
    /// `None` when still outside the band at the horizon.
    pub settling_time_2pct: Option<f64>,
    /// Integral of (u - u_ss)^2 dt over the run.
    pub control_effort_l2: f64,
    /// Total variation of u over the run.
    pub control_effort_tv: f64,
    /// First crossing of the sliding surface (SMC runs only).
    pub reaching_time: Option<f64>,
    /// Steady-state input over the trailing window.
    pub u_ss: f64,
}

/// Fraction of the horizon treated as the steady-state window.
pub const DEFAULT_WINDOW_FRACTION: f64 = 0.1;

/// Band for the settling-time metric, relative to the setpoint magnitude.
pub const SETTLING_BAND_FRACTION: f64 = 0.02;

/// Compute [`Metrics`] from a recorded trajectory against the setpoint
/// `y_ref`, with `window` seconds of trailing data treated as steady state.
pub fn compute_metrics(traj: &Trajectory, y_ref: f64, window: f64) -> Metrics {
    assert!(!traj.is_empty(), "metrics need at least one sample");
    let t_end = *traj.t.last().unwrap();
    let t_window = t_end - window.max(0.0);
    let tail: Vec<usize> =
        (0..traj.len()).filter(|&k| traj.t[k] >= t_window).collect();

    let mean_tail = |series: &[f64]| -> f64 {
        tail.iter().map(|&k| series[k]).sum::<f64>() / tail.len() as f64
    };
    let steady_state_error =
        tail.iter().map(|&k| (traj.y[k] - y_ref).abs()).sum::<f64>() / tail.len() as f64;
    let u_ss = mean_tail(&traj.u);

    // Overshoot relative to the initial setpoint step span.
    let span = (y_ref - traj.y[0]).abs();
    let dir = (y_ref - traj.y[0]).signum();
    let overshoot = if span > 1e-12 * y_ref.abs().max(1.0) {
        traj.y
            .iter()
            .map(|&y| ((y - y_ref) * dir).max(0.0))
            .fold(0.0f64, f64::max)
            / span
    } else {
        0.0
    };

    // Settling: last exit from the +/-2 % band around the setpoint.
    let band = SETTLING_BAND_FRACTION * y_ref.abs();
    let mut settling = Some(traj.t[0]);
    for k in 0..traj.len() {
        if (traj.y[k] - y_ref).abs() > band {
            settling = if k + 1 < traj.len() { Some(traj.t[k + 1]) } else { None };
        }
    }

    // Control effort around the steady-state input.
    let mut l2 = 0.0;
    let mut tv = 0.0;
    for k in 1..traj.len() {
        let dt = traj.t[k] - traj.t[k - 1];
        let a = traj.u[k - 1] - u_ss;
        let b = traj.u[k] - u_ss;
        l2 += 0.5 * (a * a + b * b) * dt;
        tv += (traj.u[k] - traj.u[k - 1]).abs();
    }

    // Reaching time: first sign change or zero of sigma, linearly
    // interpolated between samples.
    let mut reaching_time = None;
    if traj.sigma.iter().any(|s| s.is_finite()) {
        let s0 = traj.sigma[0];
        if s0 == 0.0 {
            reaching_time = Some(0.0);
        } else {
            for k in 1..traj.len() {
                let (a, b) = (traj.sigma[k - 1], traj.sigma[k]);
                if !a.is_finite() || !b.is_finite() {
                    continue;
                }
                if b == 0.0 {
                    reaching_time = Some(traj.t[k]);
                    break;
                }
                if a.signum() != b.signum() {
                    let frac = a.abs() / (a.abs() + b.abs());
                    reaching_time = Some(traj.t[k - 1] + frac * (traj.t[k] - traj.t[k - 1]));
                    break;
                }
            }
        }
    }

    Metrics {
        steady_state_error,
        overshoot,
        settling_time_2pct: settling,
        control_effort_l2: l2,
        control_effort_tv: tv,
        reaching_time,
        u_ss,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(y: Vec<f64>, dt: f64) -> Trajectory {
        let n = y.len();
        Trajectory {
            dt,
            t: (0..n).map(|k| k as f64 * dt).collect(),
            u: vec![0.0; n],
            sigma: vec![f64::NAN; n],
            y,
            ..Default::default()
        }
    }

    #[test]
    fn constant_trajectory_has_zero_errors() {
        let traj = synthetic(vec![80.0; 101], 0.01);
        let m = compute_metrics(&traj, 80.0, 0.1);
        assert_eq!(m.steady_state_error, 0.0);
        assert_eq!(m.overshoot, 0.0);
        assert_eq!(m.settling_time_2pct, Some(0.0));
        assert_eq!(m.control_effort_tv, 0.0);
    }

    #[test]
    fn exponential_settling_matches_closed_form() {
        // y = y_ref (1 + 0.1 exp(-t)) leaves the 2 % band until t = ln 5.
        let dt = 1e-4;
        let n = (8.0 / dt) as usize + 1;
        let y: Vec<f64> =
            (0..n).map(|k| 80.0 * (1.0 + 0.1 * (-(k as f64) * dt).exp())).collect();
        let traj = synthetic(y, dt);
        let m = compute_metrics(&traj, 80.0, 0.8);
        let t = m.settling_time_2pct.unwrap();
        assert!(
            (t - 5.0f64.ln()).abs() < 1e-3,
            "settling {t} vs ln5 {}",
            5.0f64.ln()
        );
    }

    #[test]
    fn unsettled_flagged() {
        let traj = synthetic(vec![90.0; 51], 0.01);
        let m = compute_metrics(&traj, 80.0, 0.1);
        assert_eq!(m.settling_time_2pct, None);
        assert!(m.steady_state_error > 9.9);
    }

    #[test]
    fn reaching_time_interpolates_crossing() {
        let mut traj = synthetic(vec![80.0; 5], 0.1);
        traj.sigma = vec![-2.0, -1.0, 1.0, 1.0, 0.5];
        let m = compute_metrics(&traj, 80.0, 0.1);
        assert!((m.reaching_time.unwrap() - 0.15).abs() < 1e-12);
        // Starting on the surface reaches immediately.
        traj.sigma[0] = 0.0;
        let m = compute_metrics(&traj, 80.0, 0.1);
        assert_eq!(m.reaching_time, Some(0.0));
    }

    #[test]
    fn overshoot_measured_against_step_span() {
        let y = vec![79.0, 79.5, 80.3, 80.1, 80.0, 80.0];
        let traj = synthetic(y, 0.1);
        let m = compute_metrics(&traj, 80.0, 0.1);
        assert!((m.overshoot - 0.3).abs() < 1e-12);
    }
}
