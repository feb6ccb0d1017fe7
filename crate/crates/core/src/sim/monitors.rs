//! Per-step residual monitors: how well the recorded trajectory satisfies
//! the third-order energy dynamics, the interconnection constraint, and the
//! inter-layer consistency between energy tracking and physical tracking.

use crate::energy::energy_rhs_with_dissipation;
use crate::energy::EnergyState;
use crate::energy::InteractionRate;
use crate::sim::engine::{dissipation_at, Plant};
use crate::sim::trajectory::Trajectory;

/// Per-step residual series (NaN on the stencil edges) plus summary stats.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    /// Stored-energy balance: FD(E) minus the model rate.
    pub res_e: Vec<f64>,
    /// Energy-rate balance: FD(p) minus the model rate.
    pub res_p: Vec<f64>,
    /// Tangent-energy balance: FD(E_t) minus the model rate.
    pub res_et: Vec<f64>,
    /// Interconnection residual on the power component, relative to the
    /// largest port power seen.
    pub res_tellegen_p: Vec<f64>,
    /// Absolute interconnection residuals of the reactive-rate and
    /// tangent-power components.
    pub res_tellegen_qdot: Vec<f64>,
    pub res_tellegen_pt: Vec<f64>,
    /// Physical output error wherever both energy errors are inside the
    /// lift tolerance; NaN elsewhere.
    pub interlayer_gap: Vec<f64>,
    /// Tolerance on |y - y_ref| implied by the lift tolerance.
    pub interlayer_tol: f64,
    pub summary: ResidualSummary,
}

#[derive(Debug, Clone, Default)]
pub struct ResidualSummary {
    pub max_res_e: f64,
    pub rms_res_e: f64,
    pub max_res_p: f64,
    pub rms_res_p: f64,
    pub max_res_et: f64,
    pub rms_res_et: f64,
    pub max_tellegen_p_rel: f64,
    pub max_interlayer_excess: f64,
}

/// Relative lift tolerance for the inter-layer consistency check.
pub const LIFT_TOLERANCE_REL: f64 = 1e-3;

fn max_rms(series: &[f64]) -> (f64, f64) {
    let finite: Vec<f64> = series.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let max = finite.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let rms = (finite.iter().map(|v| v * v).sum::<f64>() / finite.len() as f64).sqrt();
    (max, rms)
}

/// Fourth-order central difference of a uniformly sampled series; NaN on the
/// two samples at each edge.
fn fd4(series: &[f64], dt: f64) -> Vec<f64> {
    let n = series.len();
    let mut out = vec![f64::NAN; n];
    for k in 2..n.saturating_sub(2) {
        out[k] = (-series[k + 2] + 8.0 * series[k + 1] - 8.0 * series[k - 1] + series[k - 2])
            / (12.0 * dt);
    }
    out
}

/// Evaluate all residual monitors over a full-rate recording.
///
/// The model side uses the product-form energy dynamics with the true own
/// port rate and no exogenous term: injected disturbances are informational
/// and message delay only redistributes between the `r` and `m` channels, so
/// the physical balance is unchanged.
pub fn residual_monitors(traj: &Trajectory, plant: &Plant, y_ref: f64) -> ResidualReport {
    let n = traj.len();
    let fd_e = fd4(&traj.e, traj.dt);
    let fd_p = fd4(&traj.p, traj.dt);
    let fd_et = fd4(&traj.e_t, traj.dt);

    let mut res_e = vec![f64::NAN; n];
    let mut res_p = vec![f64::NAN; n];
    let mut res_et = vec![f64::NAN; n];
    let mut res_tp = vec![f64::NAN; n];
    let mut res_tq = vec![f64::NAN; n];
    let mut res_tpt = vec![f64::NAN; n];
    let mut gap = vec![f64::NAN; n];

    let zero = InteractionRate::<f64>::zero();
    let mut max_port_power = 0.0f64;

    // Lift tolerance and its image under the inverse reference lift.
    let e_ref_scale = traj.e_ref.first().copied().unwrap_or(1.0).abs().max(1.0);
    let tol_e = LIFT_TOLERANCE_REL * e_ref_scale;
    let interlayer_tol = match plant {
        // |dv| ~ |dE|/(C v) around the target, with slack for the current
        // branch of the inversion.
        Plant::Rlc(c) => 2.0 * tol_e / (c.params.c1 * y_ref),
        // |dw| = |dE|/(J w).
        Plant::Generator(c) => 2.0 * tol_e / (c.params.j1 * y_ref),
    };
    let mut max_excess = 0.0f64;

    for k in 0..n {
        let x = [traj.x0[k], traj.x1[k]];
        let xdot = [traj.xdot0[k], traj.xdot1[k]];
        let (d, d_t) = dissipation_at(plant, &x, &xdot);
        let xz = EnergyState { e: traj.e[k], p: traj.p[k], e_t: traj.e_t[k] };
        let model = energy_rhs_with_dissipation(
            &xz,
            d,
            d_t,
            traj.qdot_c[k],
            &traj.r_own[k],
            &traj.r_u[k],
            &zero,
        );
        if fd_e[k].is_finite() {
            res_e[k] = fd_e[k] - model.e;
            res_p[k] = fd_p[k] - model.p;
            res_et[k] = fd_et[k] - model.e_t;
        }

        // Interconnection residual between the component's own port rate and
        // the neighbor's true published rate (own = -true by construction;
        // the view column may differ under delay/injection, which is exactly
        // the m-channel content).
        let nb_true = traj.r_nb[k] - traj.r_m[k];
        let tell = crate::energy::tellegen_residual(&[nb_true], &traj.r_own[k]);
        max_port_power = max_port_power.max(traj.r_own[k].p.abs()).max(nb_true.p.abs());
        res_tp[k] = tell.p;
        res_tq[k] = tell.qdot;
        res_tpt[k] = tell.p_t;

        // Theorem-1 style runtime check: once the energy errors are inside
        // the lift tolerance, the physical output must be inside the
        // propagated tolerance.
        let e_err = (traj.e[k] - traj.e_ref[k]).abs();
        let p_err = (traj.p[k] - traj.p_ref[k]).abs();
        if e_err <= tol_e && p_err <= LIFT_TOLERANCE_REL * e_ref_scale.max(traj.p_ref[k].abs()) {
            let g = (traj.y[k] - y_ref).abs();
            gap[k] = g;
            max_excess = max_excess.max(g - interlayer_tol);
        }
    }

    // Normalize the Tellegen power residual.
    let scale = max_port_power.max(f64::MIN_POSITIVE);
    for v in &mut res_tp {
        if v.is_finite() {
            *v /= scale;
        }
    }

    let (max_res_e, rms_res_e) = max_rms(&res_e);
    let (max_res_p, rms_res_p) = max_rms(&res_p);
    let (max_res_et, rms_res_et) = max_rms(&res_et);
    let (max_tellegen_p_rel, _) = max_rms(&res_tp);

    ResidualReport {
        res_e,
        res_p,
        res_et,
        res_tellegen_p: res_tp,
        res_tellegen_qdot: res_tq,
        res_tellegen_pt: res_tpt,
        interlayer_gap: gap,
        interlayer_tol,
        summary: ResidualSummary {
            max_res_e,
            rms_res_e,
            max_res_p,
            rms_res_p,
            max_res_et,
            rms_res_et,
            max_tellegen_p_rel,
            max_interlayer_excess: max_excess,
        },
    }
}

/// Largest |residual| within a time window, for order-of-accuracy studies on
/// smooth segments.
pub fn max_residual_in_window(t: &[f64], series: &[f64], t_lo: f64, t_hi: f64) -> f64 {
    t.iter()
        .zip(series)
        .filter(|(tk, v)| **tk >= t_lo && **tk <= t_hi && v.is_finite())
        .map(|(_, v)| v.abs())
        .fold(0.0, f64::max)
}
