//! Offline verification: equilibrium solving, linearization with eigenvalue
//! reporting, and the Lyapunov/reaching certificate evaluators for the
//! energy-based controllers.

use nalgebra::{Complex, DMatrix, DVector};

use crate::components::{generator_equilibrium, PhysComponent};
use crate::controllers::{droop_steady_state_valve, DroopGains, FblcGains, SmcGains};
use crate::error::CoreError;
use crate::sim::{Plant, Trajectory};

/// A certified stationary point of a plant with its input.
#[derive(Debug, Clone)]
pub struct Equilibrium {
    pub x_eq: Vec<f64>,
    pub u_eq: f64,
    /// Scaled infinity-norm of the defining residual.
    pub residual: f64,
}

/// Residual norm every certified equilibrium satisfies, in scaled units.
pub const EQUILIBRIUM_TOLERANCE: f64 = 1e-10;

fn plant_rhs(plant: &Plant, x: &[f64], u: f64, load: f64) -> Result<[f64; 2], CoreError> {
    let mut out = [0.0f64; 2];
    match plant {
        Plant::Rlc(c) => c.rhs(x, u, load, &mut out)?,
        Plant::Generator(c) => c.rhs(x, u, load, &mut out)?,
    }
    Ok(out)
}

fn plant_output(plant: &Plant, x: &[f64]) -> f64 {
    match plant {
        Plant::Rlc(c) => c.output(x),
        Plant::Generator(c) => c.output(x),
    }
}

/// Row scales making the equilibrium residual dimensionless: each dynamics
/// row is divided by the magnitude of its largest constituent term.
fn residual_scales(plant: &Plant, x: &[f64], u: f64, load: f64, setpoint: f64) -> [f64; 3] {
    match plant {
        Plant::Rlc(c) => {
            let p = &c.params;
            let s0 = ((p.r1 * x[0]).abs() + x[1].abs() + u.abs()).max(1.0) / p.l1;
            let s1 = (x[0].abs() + load / x[1].abs().max(1.0)).max(1.0) / p.c1;
            [s0, s1, setpoint.abs().max(1.0)]
        }
        Plant::Generator(c) => {
            let p = &c.params;
            let s0 = ((p.d1 / p.j1) * x[0].abs()
                + (x[1].abs() + load) / (p.j1 * x[0].abs().max(1.0)))
            .max(1.0);
            let s1 = (x[1].abs() / p.tt + p.kt / p.tt * u.abs()).max(1.0);
            [s0, s1, setpoint.abs().max(1.0)]
        }
    }
}

/// Damped Newton with a central finite-difference Jacobian and a
/// backtracking line search on the residual norm.
fn damped_newton<F>(mut x: Vec<f64>, f: F, max_iter: usize) -> Result<Vec<f64>, CoreError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, CoreError>,
{
    let n = x.len();
    let norm = |v: &[f64]| v.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let mut r = f(&x)?;
    for _ in 0..max_iter {
        if norm(&r) < 1e-300 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let step = 1e-6 * x[j].abs().max(1e-3);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += step;
            xm[j] -= step;
            let (fp, fm) = (f(&xp)?, f(&xm)?);
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * step);
            }
        }
        let rhs = DVector::from_iterator(n, r.iter().map(|v| -v));
        let delta = jac
            .lu()
            .solve(&rhs)
            .ok_or(CoreError::NoConvergence { iterations: 0, residual: norm(&r) })?;

        let r0 = norm(&r);
        let mut lambda = 1.0f64;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> =
                x.iter().zip(delta.iter()).map(|(xi, di)| xi + lambda * di).collect();
            match f(&trial) {
                Ok(rt) if norm(&rt) < r0 || norm(&rt) < 1e-13 => {
                    x = trial;
                    r = rt;
                    accepted = true;
                    break;
                }
                _ => lambda *= 0.5,
            }
        }
        if !accepted {
            break;
        }
    }
    Ok(x)
}

/// Stationary state and input holding the output of interest at `setpoint`
/// under a constant `load_power`. Damped Newton on the augmented residual
/// `(rhs, y - setpoint)`; the default guess is the plant's nominal initial
/// condition.
pub fn solve_equilibrium(
    plant: &Plant,
    setpoint: f64,
    load_power: f64,
    guess: Option<(Vec<f64>, f64)>,
) -> Result<Equilibrium, CoreError> {
    let (x0, u0) = guess.unwrap_or_else(|| match plant {
        Plant::Rlc(_) => (vec![12.8, 79.0], 79.0),
        Plant::Generator(c) => {
            let (pm, a) = generator_equilibrium(&c.params, setpoint, load_power);
            (vec![setpoint * 0.99, pm], a)
        }
    });
    let full0 = vec![x0[0], x0[1], u0];
    let f = |z: &[f64]| -> Result<Vec<f64>, CoreError> {
        let x = [z[0], z[1]];
        let dx = plant_rhs(plant, &x, z[2], load_power)?;
        Ok(vec![dx[0], dx[1], plant_output(plant, &x) - setpoint])
    };
    let sol = damped_newton(full0, f, 100)?;
    let res = f(&sol)?;
    let scales = residual_scales(plant, &sol[0..2], sol[2], load_power, setpoint);
    let scaled = res
        .iter()
        .zip(scales.iter())
        .fold(0.0f64, |a, (r, s)| a.max((r / s).abs()));
    if scaled > EQUILIBRIUM_TOLERANCE {
        return Err(CoreError::NoConvergence { iterations: 100, residual: scaled });
    }
    Ok(Equilibrium { x_eq: sol[0..2].to_vec(), u_eq: sol[2], residual: scaled })
}

/// Closed-loop droop steady state: bisection oracle for the speed, then a
/// Newton polish of the full `(omega, Pm, a)` fixed point.
pub fn solve_droop_equilibrium(
    plant: &Plant,
    gains: &DroopGains<f64>,
    y_ref: f64,
    load_power: f64,
) -> Result<Equilibrium, CoreError> {
    let c = match plant {
        Plant::Generator(c) => c,
        Plant::Rlc(_) => {
            return Err(CoreError::InvalidScenario {
                key: "controller".into(),
                reason: "droop equilibrium needs the generator plant".into(),
            })
        }
    };
    let (w0, a0) = droop_steady_state_valve(&c.params, gains, y_ref, load_power)?;
    let pm0 = c.params.kt * a0;
    let f = |z: &[f64]| -> Result<Vec<f64>, CoreError> {
        let x = [z[0], z[1]];
        let dx = plant_rhs(plant, &x, z[2], load_power)?;
        Ok(vec![dx[0], dx[1], crate::controllers::droop_a_dot(z[2], z[0], y_ref, gains)])
    };
    let sol = damped_newton(vec![w0, pm0, a0], f, 100)?;
    let res = f(&sol)?;
    let scales = residual_scales(plant, &sol[0..2], sol[2], load_power, y_ref);
    let scaled = res
        .iter()
        .zip(scales.iter())
        .fold(0.0f64, |a, (r, s)| a.max((r / s).abs()));
    if scaled > EQUILIBRIUM_TOLERANCE {
        return Err(CoreError::NoConvergence { iterations: 100, residual: scaled });
    }
    Ok(Equilibrium { x_eq: sol[0..2].to_vec(), u_eq: sol[2], residual: scaled })
}

/// Central finite-difference Jacobian (relative step 1e-6) of `f` at `x0`,
/// with its eigenvalues from a dense solver.
pub fn linearize_fn<F>(f: F, x0: &[f64]) -> Result<(DMatrix<f64>, Vec<Complex<f64>>), CoreError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, CoreError>,
{
    let n = x0.len();
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let step = 1e-6 * x0[j].abs().max(1.0);
        let mut xp = x0.to_vec();
        let mut xm = x0.to_vec();
        xp[j] += step;
        xm[j] -= step;
        let (fp, fm) = (f(&xp)?, f(&xm)?);
        for i in 0..n {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * step);
        }
    }
    let eigen: Vec<Complex<f64>> = jac.clone().complex_eigenvalues().iter().copied().collect();
    Ok((jac, eigen))
}

/// Which certificate a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Fblc,
    Smc,
}

impl std::fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertificateKind::Fblc => write!(f, "FBLC"),
            CertificateKind::Smc => write!(f, "SMC"),
        }
    }
}

/// Evaluation of a stability certificate along one trajectory.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub kind: CertificateKind,
    pub steps: usize,
    /// Fraction of steps on which the theorem's disturbance condition held.
    pub condition_fraction: f64,
    pub condition_first_violation: Option<f64>,
    /// FBLC: count of V increases beyond round-off. SMC: count of decrease-
    /// rate bound violations before reaching.
    pub lyapunov_violations: usize,
    pub lyapunov_first_violation: Option<f64>,
    pub v_initial: f64,
    pub v_final: f64,
    /// Largest |Qdot^m| seen along the run.
    pub max_qdot_m: f64,
    /// FBLC: tracking error the disturbance ultimately allows,
    /// max |Qdot^m| / K2.
    pub ultimate_p_error_bound: Option<f64>,
    /// SMC only: measured reaching time (chatter-band entry), its
    /// certificate bound, the initial surface value, the band, and the count
    /// of post-reaching band exits.
    pub reaching_time: Option<f64>,
    pub reaching_bound: Option<f64>,
    pub sigma_initial: Option<f64>,
    pub sliding_band: Option<f64>,
    pub sliding_violations: Option<usize>,
    /// SMC only: fitted post-reaching decay rate of the energy error against
    /// the expected surface slope -M1.
    pub fitted_decay_rate: Option<f64>,
    pub expected_decay_rate: Option<f64>,
    pub mbar: Option<f64>,
}

impl CertificateReport {
    /// Serialize as the key-value text document consumed by the CLI and the
    /// test suite.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(": ");
            s.push_str(&v);
            s.push('\n');
        };
        kv("kind", self.kind.to_string());
        kv("steps", self.steps.to_string());
        kv("condition_fraction", format!("{:.17e}", self.condition_fraction));
        kv(
            "condition_first_violation",
            self.condition_first_violation
                .map_or("none".into(), |t| format!("{t:.17e}")),
        );
        kv("lyapunov_violations", self.lyapunov_violations.to_string());
        kv(
            "lyapunov_first_violation",
            self.lyapunov_first_violation
                .map_or("none".into(), |t| format!("{t:.17e}")),
        );
        kv("v_initial", format!("{:.17e}", self.v_initial));
        kv("v_final", format!("{:.17e}", self.v_final));
        kv("max_qdot_m", format!("{:.17e}", self.max_qdot_m));
        if let Some(b) = self.ultimate_p_error_bound {
            kv("ultimate_p_error_bound", format!("{b:.17e}"));
        }
        if let Some(t) = self.reaching_time {
            kv("reaching_time", format!("{t:.17e}"));
        }
        if let Some(t) = self.reaching_bound {
            kv("reaching_bound", format!("{t:.17e}"));
        }
        if let Some(v) = self.sigma_initial {
            kv("sigma_initial", format!("{v:.17e}"));
        }
        if let Some(v) = self.sliding_band {
            kv("sliding_band", format!("{v:.17e}"));
        }
        if let Some(v) = self.sliding_violations {
            kv("sliding_violations", v.to_string());
        }
        if let Some(v) = self.fitted_decay_rate {
            kv("fitted_decay_rate", format!("{v:.17e}"));
        }
        if let Some(v) = self.expected_decay_rate {
            kv("expected_decay_rate", format!("{v:.17e}"));
        }
        if let Some(v) = self.mbar {
            kv("mbar", format!("{v:.17e}"));
        }
        s
    }
}

/// Round-off threshold for V-monotonicity, relative to the series maximum.
pub const V_MONOTONE_THRESHOLD: f64 = 1e-12;

/// Evaluate the FBLC certificate along a trajectory:
/// `V = (K1 e_E^2 + e_p^2)/2` must be non-increasing whenever the
/// disturbance condition `|Qdot^m| <= K2 |e_p|` holds. Condition violations
/// and V increases are reported separately; the condition is sufficient,
/// not necessary.
pub fn fblc_certificate(traj: &Trajectory, gains: &FblcGains<f64>) -> CertificateReport {
    let n = traj.len();
    let mut v = Vec::with_capacity(n);
    let mut e_p = Vec::with_capacity(n);
    for k in 0..n {
        let ee = traj.e[k] - traj.e_ref[k];
        let ep = traj.p[k] - traj.p_ref[k];
        e_p.push(ep);
        v.push(0.5 * (gains.k1 * ee * ee + ep * ep));
    }
    let v_max = v.iter().fold(0.0f64, |a, &b| a.max(b));

    let mut lyap_violations = 0usize;
    let mut lyap_first = None;
    for k in 1..n {
        if v[k] - v[k - 1] > V_MONOTONE_THRESHOLD * v_max {
            lyap_violations += 1;
            lyap_first.get_or_insert(traj.t[k]);
        }
    }

    let mut cond_ok = 0usize;
    let mut cond_first = None;
    let mut max_qm = 0.0f64;
    for k in 0..n {
        let qm = traj.r_m[k].qdot;
        max_qm = max_qm.max(qm.abs());
        if qm.abs() <= gains.k2 * e_p[k].abs() + f64::EPSILON {
            cond_ok += 1;
        } else {
            cond_first.get_or_insert(traj.t[k]);
        }
    }

    CertificateReport {
        kind: CertificateKind::Fblc,
        steps: n,
        condition_fraction: cond_ok as f64 / n as f64,
        condition_first_violation: cond_first,
        lyapunov_violations: lyap_violations,
        lyapunov_first_violation: lyap_first,
        v_initial: v[0],
        v_final: v[n - 1],
        max_qdot_m: max_qm,
        ultimate_p_error_bound: Some(max_qm / gains.k2),
        reaching_time: None,
        reaching_bound: None,
        sigma_initial: None,
        sliding_band: None,
        sliding_violations: None,
        fitted_decay_rate: None,
        expected_decay_rate: None,
        mbar: None,
    }
}

/// Evaluate the SMC certificate along an exact-sign trajectory.
///
/// Reaching is measured as first entry into the chatter band
/// `max(eps_bl, dt (M0 + Mbar))` (the surface cannot be resolved more finely
/// than one discrete step) and compared against `|sigma(0)|/(M0 - Mbar)`.
/// Pre-reaching, the decrease rate `dV/dt <= -(M0 - Mbar)|sigma|` is checked
/// per step against the midpoint value of sigma, which makes the
/// discretization of the constant-rate reaching phase exact. The slack term
/// carries, besides round-off and the disturbance's within-step variation,
/// a contribution proportional to the discrete curvature of sigma: off the
/// surface the reaching law predicts a piecewise-linear sigma, so observed
/// curvature measures exactly the integrator's unresolved-layer error and
/// bounds its drift contribution to dV/dt. Post-reaching, the energy error
/// must decay at the surface slope M1 (log-linear fit).
pub fn smc_certificate(traj: &Trajectory, gains: &SmcGains<f64>, mbar: f64) -> CertificateReport {
    let n = traj.len();
    let dt = traj.dt;
    let sigma = &traj.sigma;
    let sigma0 = sigma[0];
    let band = gains.eps_bl.max(dt * (gains.m0 + mbar));
    let margin = gains.m0 - mbar;

    let reach_idx = (0..n).find(|&k| {
        sigma[k].abs() <= band || (k > 0 && sigma[k].signum() != sigma[k - 1].signum())
    });
    // Band entry interpolated between the straddling samples; the grid
    // itself only resolves the crossing to one step.
    let reaching_time = reach_idx.map(|k| {
        if k == 0 || sigma[k - 1].abs() <= band {
            return traj.t[k];
        }
        let prev = sigma[k - 1].abs();
        let here = sigma[k].abs().min(band);
        let frac = if prev > here { (prev - band) / (prev - here) } else { 0.0 };
        traj.t[k - 1] + frac.clamp(0.0, 1.0) * dt
    });
    let reaching_bound = if margin > 0.0 { Some(sigma0.abs() / margin) } else { None };

    // Pre-reaching decrease rate.
    let mut vdot_violations = 0usize;
    let mut vdot_first = None;
    let base_slack = 1e-9 * (1.0 + sigma0 * sigma0) + dt * mbar * (gains.m0 + mbar);
    let pre_end = reach_idx.unwrap_or(n);
    for k in 1..pre_end {
        let v_prev = 0.5 * sigma[k - 1] * sigma[k - 1];
        let v_now = 0.5 * sigma[k] * sigma[k];
        let sig_mid = 0.5 * (sigma[k - 1] + sigma[k]);
        let dv = (v_now - v_prev) / dt;
        let d2 = if k + 1 < n {
            sigma[k + 1] - 2.0 * sigma[k] + sigma[k - 1]
        } else {
            0.0
        };
        let slack = base_slack + 2.0 * d2.abs() * sig_mid.abs() / dt;
        if dv > -margin * sig_mid.abs() + slack {
            vdot_violations += 1;
            vdot_first.get_or_insert(traj.t[k]);
        }
    }

    // Sliding invariance after reaching.
    let mut sliding_violations = 0usize;
    if let Some(kr) = reach_idx {
        for k in kr..n {
            if sigma[k].abs() > band * (1.0 + 1e-9) {
                sliding_violations += 1;
            }
        }
    }

    // Post-reaching decay of the energy error at the surface slope.
    let mut fitted = None;
    if let Some(kr) = reach_idx {
        let floor = 20.0 * band / gains.m1;
        let mut ts = Vec::new();
        let mut logs = Vec::new();
        for k in kr..n {
            let ee = (traj.e[k] - traj.e_ref[k]).abs();
            if ee > floor {
                ts.push(traj.t[k]);
                logs.push(ee.ln());
            }
        }
        if ts.len() >= 10 {
            let m = ts.len() as f64;
            let mean_t = ts.iter().sum::<f64>() / m;
            let mean_l = logs.iter().sum::<f64>() / m;
            let mut num = 0.0;
            let mut den = 0.0;
            for (t, l) in ts.iter().zip(&logs) {
                num += (t - mean_t) * (l - mean_l);
                den += (t - mean_t) * (t - mean_t);
            }
            if den > 0.0 {
                fitted = Some(num / den);
            }
        }
    }

    // Theorem condition: |Qdot^m| <= Mbar < M0 throughout.
    let mut cond_ok = 0usize;
    let mut cond_first = None;
    let mut max_qm = 0.0f64;
    for k in 0..n {
        let qm = traj.r_m[k].qdot.abs();
        max_qm = max_qm.max(qm);
        if qm <= mbar + f64::EPSILON && mbar < gains.m0 {
            cond_ok += 1;
        } else {
            cond_first.get_or_insert(traj.t[k]);
        }
    }

    CertificateReport {
        kind: CertificateKind::Smc,
        steps: n,
        condition_fraction: cond_ok as f64 / n as f64,
        condition_first_violation: cond_first,
        lyapunov_violations: vdot_violations,
        lyapunov_first_violation: vdot_first,
        v_initial: 0.5 * sigma0 * sigma0,
        v_final: 0.5 * sigma[n - 1] * sigma[n - 1],
        max_qdot_m: max_qm,
        ultimate_p_error_bound: None,
        reaching_time,
        reaching_bound,
        sigma_initial: Some(sigma0),
        sliding_band: Some(band),
        sliding_violations: Some(sliding_violations),
        fitted_decay_rate: fitted,
        expected_decay_rate: Some(-gains.m1),
        mbar: Some(mbar),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::{GenParams, RlcParams, RlcSource, TurbineGenerator};

    #[test]
    fn rlc_equilibrium_closed_form() {
        let plant = Plant::Rlc(RlcSource::new(RlcParams::example()));
        let eq = solve_equilibrium(&plant, 80.0, 1000.0, None).unwrap();
        assert!((eq.x_eq[0] - 12.5).abs() < 1e-9, "i = {}", eq.x_eq[0]);
        assert!((eq.x_eq[1] - 80.0).abs() < 1e-9, "v = {}", eq.x_eq[1]);
        assert!((eq.u_eq - 81.25).abs() < 1e-9, "u = {}", eq.u_eq);
        assert!(eq.residual <= EQUILIBRIUM_TOLERANCE);
    }

    #[test]
    fn generator_equilibrium_closed_form() {
        let plant = Plant::Generator(TurbineGenerator::new(GenParams::example()));
        let eq = solve_equilibrium(&plant, 377.0, 1000.0, None).unwrap();
        assert!((eq.x_eq[0] - 377.0).abs() < 1e-9);
        assert!((eq.x_eq[1] - 2421.29).abs() < 1e-6);
        assert!((eq.u_eq - 2.42129).abs() < 1e-9);
    }

    #[test]
    fn droop_equilibrium_matches_bisection() {
        let plant = Plant::Generator(TurbineGenerator::new(GenParams::example()));
        let g = DroopGains { tg: 0.2, r: 0.2 };
        let eq = solve_droop_equilibrium(&plant, &g, 377.0, 2000.0).unwrap();
        let (w_oracle, a_oracle) =
            droop_steady_state_valve(&GenParams::example(), &g, 377.0, 2000.0).unwrap();
        assert!((eq.x_eq[0] - w_oracle).abs() <= 1e-9 * w_oracle);
        assert!((eq.u_eq - a_oracle).abs() <= 1e-6 * a_oracle.abs());
        assert!(eq.x_eq[0] < 377.0);
    }

    #[test]
    fn linearize_rotation_has_imaginary_pair() {
        let f = |x: &[f64]| -> Result<Vec<f64>, CoreError> { Ok(vec![x[1], -x[0]]) };
        let (jac, eigen) = linearize_fn(f, &[0.3, -0.4]).unwrap();
        assert!((jac[(0, 1)] - 1.0).abs() < 1e-9);
        assert!((jac[(1, 0)] + 1.0).abs() < 1e-9);
        for e in &eigen {
            assert!(e.re.abs() < 1e-8);
            assert!((e.im.abs() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn linearize_recovers_linear_system_exactly() {
        let a = [[0.5, -2.0], [1.5, -3.0]];
        let f = move |x: &[f64]| -> Result<Vec<f64>, CoreError> {
            Ok(vec![
                a[0][0] * x[0] + a[0][1] * x[1],
                a[1][0] * x[0] + a[1][1] * x[1],
            ])
        };
        let (jac, _) = linearize_fn(f, &[1.0, 1.0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((jac[(i, j)] - a[i][j]).abs() < 1e-7);
            }
        }
    }

    fn synthetic_fblc_traj() -> Trajectory {
        // Exact solution of the closed-loop error dynamics on a grid.
        let (k1, k2) = (10.0f64, 10.0);
        let disc = (k2 * k2 / 4.0 - k1).sqrt();
        let (l1, l2) = (-k2 / 2.0 + disc, -k2 / 2.0 - disc);
        let (e0, p0) = (-0.5, -5.0);
        let a = (p0 - l2 * e0) / (l1 - l2);
        let b = (l1 * e0 - p0) / (l1 - l2);
        let dt = 1e-3;
        let n = 8001;
        let mut traj = Trajectory { dt, ..Default::default() };
        for k in 0..n {
            let t = k as f64 * dt;
            let e = a * (l1 * t).exp() + b * (l2 * t).exp();
            let p = a * l1 * (l1 * t).exp() + b * l2 * (l2 * t).exp();
            traj.t.push(t);
            traj.e.push(e);
            traj.e_ref.push(0.0);
            traj.p.push(p);
            traj.p_ref.push(0.0);
            traj.r_m.push(crate::energy::InteractionRate::zero());
            traj.sigma.push(f64::NAN);
        }
        traj
    }

    #[test]
    fn fblc_certificate_clean_on_exact_solution() {
        let traj = synthetic_fblc_traj();
        let rep = fblc_certificate(&traj, &FblcGains { k1: 10.0, k2: 10.0 });
        assert_eq!(rep.lyapunov_violations, 0);
        assert_eq!(rep.condition_fraction, 1.0);
        assert!(rep.v_final < 1e-6 * rep.v_initial);
        let text = rep.to_text();
        assert!(text.contains("kind: FBLC"));
        assert!(text.contains("lyapunov_violations: 0"));
    }

    #[test]
    fn smc_certificate_on_synthetic_reaching() {
        // sigma ramps to zero at rate M0 then stays; e_E decays at M1.
        let g = SmcGains { m0: 5.4, m1: 2.9, eps_bl: 0.0 };
        let dt = 1e-4;
        let sigma0 = -6.5f64;
        let t_reach = sigma0.abs() / g.m0;
        let n = 40001;
        let mut traj = Trajectory { dt, ..Default::default() };
        let e_at_reach = -0.6f64;
        for k in 0..n {
            let t = k as f64 * dt;
            let s = if t < t_reach { sigma0 + g.m0 * t } else { 0.0 };
            let ee = if t < t_reach {
                e_at_reach
            } else {
                e_at_reach * (-(g.m1) * (t - t_reach)).exp()
            };
            traj.t.push(t);
            traj.sigma.push(s);
            traj.e.push(ee);
            traj.e_ref.push(0.0);
            traj.p.push(0.0);
            traj.p_ref.push(0.0);
            traj.r_m.push(crate::energy::InteractionRate::zero());
        }
        let rep = smc_certificate(&traj, &g, 0.0);
        let tr = rep.reaching_time.unwrap();
        assert!(tr <= rep.reaching_bound.unwrap());
        assert_eq!(rep.lyapunov_violations, 0);
        assert_eq!(rep.sliding_violations, Some(0));
        let fit = rep.fitted_decay_rate.unwrap();
        assert!((fit - (-g.m1)).abs() <= 0.05 * g.m1, "fit {fit}");
    }
}
