//! Closed-loop assembly and fixed-step integration.
//!
//! The augmented state carries the plant, any controller-internal state (the
//! inverter voltage under the energy laws, the droop valve), and the running
//! integrals of the three interaction variables. One evaluation routine
//! serves both the RK4 stages and the trajectory recorder, so every recorded
//! quantity is the exact function of state the dynamics used.
//!
//! Communication semantics: the load publishes its port rate once per step
//! through a delay line. With zero delay the controller's neighbor term is
//! evaluated live (the message carries the current values of locally known
//! quantities), which realizes the continuous-time laws the stability proofs
//! assume. With delay, the controller holds the stale message and the
//! difference between true and held rates is booked as the exogenous
//! interaction `zdot^m`, together with any injected disturbance.

use crate::components::{
    InputRates, LoadProfile, PhysComponent, RlcSource, TurbineGenerator,
};
use crate::controllers::{
    brayton_moser_u, droop_a_dot, fblc_uz, gen_reference_lift, gen_uz_to_u, proportional_u,
    rlc_reference_lift, rlc_uz_du_dt, smc_uz, BmGains, DroopGains, EnergyReference, FblcGains,
    PropGains, SmcGains, DEFAULT_I_MIN,
};
use crate::energy::{
    dissipation, energy_rate, interaction_rate, stored_energy, tangent_energy, EnergyState,
    InteractionRate,
};
use crate::error::CoreError;
use crate::integrate::Rk4;
use crate::interconnect::{
    channel_injects, disturbance_rate, DisturbanceChannel, DisturbanceContext, Mailbox,
};
use crate::sim::scenario::{ControllerConfig, PlantConfig, Scenario};
use crate::sim::trajectory::Trajectory;

type Rate = InteractionRate<f64>;

#[derive(Debug, Clone)]
pub enum Plant {
    Rlc(RlcSource<f64>),
    Generator(TurbineGenerator<f64>),
}

#[derive(Debug, Clone)]
pub enum Controller {
    Fblc(FblcGains<f64>),
    Smc(SmcGains<f64>),
    Proportional(PropGains<f64>),
    BraytonMoser(BmGains<f64>),
    Droop(DroopGains<f64>),
}

impl Controller {
    pub fn name(&self) -> &'static str {
        match self {
            Controller::Fblc(_) => "fblc",
            Controller::Smc(_) => "smc",
            Controller::Proportional(_) => "proportional",
            Controller::BraytonMoser(_) => "brayton_moser",
            Controller::Droop(_) => "droop",
        }
    }

    /// Whether the physical input is an integrated internal state.
    fn has_internal_state(&self, plant: &Plant) -> bool {
        matches!(
            (plant, self),
            (Plant::Rlc(_), Controller::Fblc(_))
                | (Plant::Rlc(_), Controller::Smc(_))
                | (Plant::Generator(_), Controller::Droop(_))
        )
    }

    fn rate_gain(&self) -> f64 {
        match self {
            Controller::Fblc(g) => g.k2,
            Controller::Smc(g) => g.m1,
            _ => 0.0,
        }
    }
}

/// Result of one simulation; on failure the trajectory up to the failing
/// step is retained.
#[derive(Debug)]
pub struct SimOutcome {
    pub trajectory: Trajectory,
    pub error: Option<CoreError>,
}

impl SimOutcome {
    pub fn is_complete(&self) -> bool {
        self.error.is_none()
    }
}

/// Per-step communication context, constant across the RK4 stages of a step.
#[derive(Debug, Clone, Copy)]
struct StepCtx {
    held_nb: Rate,
    held_uz: Option<f64>,
    pdot_ref_est: f64,
}

/// Everything the evaluator knows at one `(t, y)` point.
#[derive(Debug, Clone, Copy)]
struct EvalOut {
    xdot: [f64; 2],
    u: f64,
    u_z: f64,
    sigma: f64,
    v_lyap: f64,
    lift: EnergyState<f64>,
    eref: EnergyReference<f64>,
    qdot_c: f64,
    y_out: f64,
    rate_own: Rate,
    rate_nb_view: Rate,
    rate_u: Rate,
    rate_m: Rate,
}

pub struct Engine<'a> {
    plant: &'a Plant,
    controller: &'a Controller,
    profile: &'a LoadProfile<f64>,
    channel: &'a DisturbanceChannel<f64>,
    y_ref: f64,
    live_neighbor: bool,
    pdot_estimator: bool,
    ctrl_dim: usize,
}

impl<'a> Engine<'a> {
    pub fn new(
        plant: &'a Plant,
        controller: &'a Controller,
        profile: &'a LoadProfile<f64>,
        channel: &'a DisturbanceChannel<f64>,
        y_ref: f64,
        delay_steps: usize,
        pdot_estimator: bool,
    ) -> Self {
        let ctrl_dim = usize::from(controller.has_internal_state(plant));
        Self {
            plant,
            controller,
            profile,
            channel,
            y_ref,
            live_neighbor: delay_steps == 0,
            pdot_estimator,
            ctrl_dim,
        }
    }

    pub fn state_dim(&self) -> usize {
        2 + self.ctrl_dim + 9
    }

    fn z_base(&self) -> usize {
        2 + self.ctrl_dim
    }

    /// Bus-variable rate without knowing the control input: `vdot` for the
    /// RLC (independent of u), `omegadot` for the generator (independent of
    /// the valve).
    fn coupling_rate(&self, t: f64, y: &[f64]) -> Result<(f64, f64), CoreError> {
        let s = self.profile.sample(t);
        match self.plant {
            Plant::Rlc(c) => {
                let p = &c.params;
                let v = y[1];
                if v.abs() <= p.v_min {
                    return Err(CoreError::SingularLoadVoltage { value: v, limit: p.v_min });
                }
                Ok((v, y[0] / p.c1 - s.p / (p.c1 * v)))
            }
            Plant::Generator(c) => {
                let p = &c.params;
                let w = y[0];
                if w.abs() <= p.omega_min {
                    return Err(CoreError::SingularFrequency { value: w, limit: p.omega_min });
                }
                Ok((w, -(p.d1 / p.j1) * w + (y[1] - s.p) / (p.j1 * w)))
            }
        }
    }

    /// The rate the load publishes: its true port interaction at `(t, y)`.
    pub fn load_rate(&self, t: f64, y: &[f64]) -> Result<Rate, CoreError> {
        let s = self.profile.sample(t);
        let (coupling, coupling_dot) = self.coupling_rate(t, y)?;
        let effort_is_coupling = matches!(self.plant, Plant::Rlc(_));
        crate::components::load_interaction(&s, coupling, coupling_dot, effort_is_coupling)
    }

    /// Analytic `p_ref` at `t`, for the finite-difference estimator.
    fn p_ref_analytic(&self, t: f64) -> Result<f64, CoreError> {
        Ok(match self.plant {
            Plant::Rlc(c) => rlc_reference_lift(self.profile, t, self.y_ref, &c.params)?.p_ref,
            Plant::Generator(c) => gen_reference_lift(self.y_ref, &c.params).p_ref,
        })
    }

    fn reference(&self, t: f64, ctx: &StepCtx) -> Result<EnergyReference<f64>, CoreError> {
        let mut eref = match self.plant {
            Plant::Rlc(c) => rlc_reference_lift(self.profile, t, self.y_ref, &c.params)?,
            Plant::Generator(c) => gen_reference_lift(self.y_ref, &c.params),
        };
        if self.pdot_estimator {
            eref.pdot_ref = ctx.pdot_ref_est;
        }
        Ok(eref)
    }

    /// Controller's view of the neighbor rate plus the exogenous channel
    /// this view implies: `(view, zdot^m)` with `zdot^m = view - true`.
    fn neighbor_view(
        &self,
        t: f64,
        ctx: &StepCtx,
        rate_nb_true: Rate,
        p_error: f64,
    ) -> (Rate, Rate) {
        let held = if self.live_neighbor { rate_nb_true } else { ctx.held_nb };
        let delay_residual = held - rate_nb_true;
        let dctx = DisturbanceContext {
            t,
            p_error,
            rate_gain: self.controller.rate_gain(),
            delay_residual,
        };
        let injected = if channel_injects(self.channel) {
            disturbance_rate(self.channel, &dctx)
        } else {
            Rate::zero()
        };
        (held + injected, delay_residual + injected)
    }

    fn eval(&self, t: f64, y: &[f64], ctx: &StepCtx, out: &mut [f64]) -> Result<EvalOut, CoreError> {
        let ev = match self.plant {
            Plant::Rlc(c) => self.eval_rlc(c, t, y, ctx, out)?,
            Plant::Generator(c) => self.eval_gen(c, t, y, ctx, out)?,
        };
        let zb = self.z_base();
        out[zb] = ev.rate_own.p;
        out[zb + 1] = ev.rate_own.qdot;
        out[zb + 2] = ev.rate_own.p_t;
        out[zb + 3] = ev.rate_u.p;
        out[zb + 4] = ev.rate_u.qdot;
        out[zb + 5] = ev.rate_u.p_t;
        out[zb + 6] = ev.rate_m.p;
        out[zb + 7] = ev.rate_m.qdot;
        out[zb + 8] = ev.rate_m.p_t;
        Ok(ev)
    }

    fn eval_rlc(
        &self,
        c: &RlcSource<f64>,
        t: f64,
        y: &[f64],
        ctx: &StepCtx,
        out: &mut [f64],
    ) -> Result<EvalOut, CoreError> {
        let s = self.profile.sample(t);
        let x = [y[0], y[1]];
        let lift_params = c.lift_params();

        // vdot is u-independent; benchmarks that feed back on it use this.
        let (v, vdot) = { let (cv, cd) = self.coupling_rate(t, y)?; (cv, cd) };
        let rate_nb_true = crate::components::load_interaction(&s, v, vdot, true)?;

        // Physical input, its rate, the full state derivative, and the
        // second-derivative row for the capacitor pair.
        let mut xdot = [0.0f64; 2];
        let mut xddot = [0.0f64; 2];
        let (u, u_dot, u_z, sigma, lift, eref, qdot_c, nb_view, rate_m);
        match self.controller {
            Controller::Proportional(g) => {
                let u_val = proportional_u(&x, self.y_ref, s.p, g, &c.params);
                c.rhs(&x, u_val, s.p, &mut xdot)?;
                let u_dot_val = c.params.r1 * s.p_dot / self.y_ref
                    - g.ki * (xdot[0] - s.p_dot / self.y_ref)
                    - g.kv * xdot[1];
                c.rhs_jet(
                    &x,
                    u_val,
                    s.p,
                    &InputRates { u_dot: u_dot_val, load_power_dot: s.p_dot },
                    &mut xdot,
                    &mut xddot,
                )?;
                lift = self.lift_of(&x, &xdot, lift_params)?;
                eref = self.reference(t, ctx)?;
                qdot_c = c.qdot_capacitor(&x, &xdot, &xddot);
                let (view, m) = self.neighbor_view(t, ctx, rate_nb_true, lift.p - eref.p_ref);
                nb_view = view;
                rate_m = m;
                u = u_val;
                u_dot = u_dot_val;
                u_z = f64::NAN;
                sigma = f64::NAN;
            }
            Controller::BraytonMoser(g) => {
                let u_val = brayton_moser_u(&x, vdot, self.y_ref, g, &c.params)?;
                c.rhs(&x, u_val, s.p, &mut xdot)?;
                // vddot is u-independent: jet row 1 with any input rate.
                c.rhs_jet(
                    &x,
                    u_val,
                    s.p,
                    &InputRates { u_dot: 0.0, load_power_dot: s.p_dot },
                    &mut xdot,
                    &mut xddot,
                )?;
                let vddot = xddot[1];
                let u_dot_val = c.params.r1 * xdot[0]
                    - c.params.l1
                        * ((-2.0 * g.pi_max / (v * v * v)) * vdot * vdot
                            + (g.pi_max / (v * v) + g.n3) * vddot)
                    - g.n1 * vdot
                    - g.n2 * vddot;
                // Rebuild the full jet with the real input rate.
                c.rhs_jet(
                    &x,
                    u_val,
                    s.p,
                    &InputRates { u_dot: u_dot_val, load_power_dot: s.p_dot },
                    &mut xdot,
                    &mut xddot,
                )?;
                lift = self.lift_of(&x, &xdot, lift_params)?;
                eref = self.reference(t, ctx)?;
                qdot_c = c.qdot_capacitor(&x, &xdot, &xddot);
                let (view, m) = self.neighbor_view(t, ctx, rate_nb_true, lift.p - eref.p_ref);
                nb_view = view;
                rate_m = m;
                u = u_val;
                u_dot = u_dot_val;
                u_z = f64::NAN;
                sigma = f64::NAN;
            }
            Controller::Fblc(_) | Controller::Smc(_) => {
                let u_state = y[2];
                c.rhs(&x, u_state, s.p, &mut xdot)?;
                // Row 1 (vddot) of the jet is independent of u_dot; the
                // energy law needs it before the input rate exists.
                c.rhs_jet(
                    &x,
                    u_state,
                    s.p,
                    &InputRates { u_dot: 0.0, load_power_dot: s.p_dot },
                    &mut xdot,
                    &mut xddot,
                )?;
                lift = self.lift_of(&x, &xdot, lift_params)?;
                eref = self.reference(t, ctx)?;
                qdot_c = c.qdot_capacitor(&x, &xdot, &xddot);
                let (view, m) = self.neighbor_view(t, ctx, rate_nb_true, lift.p - eref.p_ref);
                nb_view = view;
                rate_m = m;
                let (uz_live, sg) = match self.controller {
                    Controller::Fblc(g) => {
                        (fblc_uz(&lift, qdot_c, nb_view.qdot, &eref, g), f64::NAN)
                    }
                    Controller::Smc(g) => {
                        let (uz, sg) = smc_uz(&lift, qdot_c, nb_view.qdot, &eref, g);
                        (uz, sg)
                    }
                    _ => unreachable!(),
                };
                let uz_used = ctx.held_uz.unwrap_or(uz_live);
                let du = rlc_uz_du_dt(uz_used, x[0], xdot[0], u_state, DEFAULT_I_MIN)?;
                out[2] = du;
                u = u_state;
                u_dot = du;
                u_z = uz_used;
                sigma = sg;
            }
            Controller::Droop(_) => unreachable!("validated: droop drives the generator"),
        }
        out[0] = xdot[0];
        out[1] = xdot[1];

        let ef = c.effort_flow(crate::components::PortId::Control, &x, &xdot, u, u_dot)?;
        let rate_u = interaction_rate(&ef);
        let rate_own = -rate_nb_true;
        let v_lyap = self.lyapunov(&lift, &eref, sigma);

        Ok(EvalOut {
            xdot,
            u,
            u_z,
            sigma,
            v_lyap,
            lift,
            eref,
            qdot_c,
            y_out: c.output(&x),
            rate_own,
            rate_nb_view: nb_view,
            rate_u,
            rate_m,
        })
    }

    fn eval_gen(
        &self,
        c: &TurbineGenerator<f64>,
        t: f64,
        y: &[f64],
        ctx: &StepCtx,
        out: &mut [f64],
    ) -> Result<EvalOut, CoreError> {
        let s = self.profile.sample(t);
        let x = [y[0], y[1]];
        let lift_params = c.lift_params();

        // Rotor acceleration is valve-independent: available before the law.
        let (omega, wdot) = self.coupling_rate(t, y)?;
        let rate_nb_true = crate::components::load_interaction(&s, omega, wdot, false)?;
        let xdot_partial = [wdot, 0.0];
        // The turbine coordinate carries no energy, so the lift only sees
        // the rotor row even before Pmdot is known.
        let lift = self.lift_of(&x, &xdot_partial, lift_params)?;
        let eref = self.reference(t, ctx)?;
        let qdot_c = 0.0;
        let (nb_view, rate_m) = self.neighbor_view(t, ctx, rate_nb_true, lift.p - eref.p_ref);

        let mut xdot = [0.0f64; 2];
        let (u, u_z, sigma);
        match self.controller {
            Controller::Fblc(g) => {
                let uz_live = fblc_uz(&lift, qdot_c, nb_view.qdot, &eref, g);
                let uz_used = ctx.held_uz.unwrap_or(uz_live);
                let a = gen_uz_to_u(uz_used, &x, &xdot_partial, &c.params)?;
                c.rhs(&x, a, s.p, &mut xdot)?;
                u = a;
                u_z = uz_used;
                sigma = f64::NAN;
            }
            Controller::Smc(g) => {
                let (uz_live, sg) = smc_uz(&lift, qdot_c, nb_view.qdot, &eref, g);
                let uz_used = ctx.held_uz.unwrap_or(uz_live);
                let a = gen_uz_to_u(uz_used, &x, &xdot_partial, &c.params)?;
                c.rhs(&x, a, s.p, &mut xdot)?;
                u = a;
                u_z = uz_used;
                sigma = sg;
            }
            Controller::Droop(g) => {
                let a = y[2];
                c.rhs(&x, a, s.p, &mut xdot)?;
                out[2] = droop_a_dot(a, omega, self.y_ref, g);
                u = a;
                u_z = f64::NAN;
                sigma = f64::NAN;
            }
            _ => unreachable!("validated: voltage benchmarks drive the rlc plant"),
        }
        out[0] = xdot[0];
        out[1] = xdot[1];

        let ef = c.effort_flow(crate::components::PortId::Control, &x, &xdot, u, 0.0)?;
        let rate_u = interaction_rate(&ef);
        let rate_own = -rate_nb_true;
        let v_lyap = self.lyapunov(&lift, &eref, sigma);

        Ok(EvalOut {
            xdot,
            u,
            u_z,
            sigma,
            v_lyap,
            lift,
            eref,
            qdot_c,
            y_out: c.output(&x),
            rate_own,
            rate_nb_view: nb_view,
            rate_u,
            rate_m,
        })
    }

    fn lift_of(
        &self,
        x: &[f64],
        xdot: &[f64],
        params: &crate::energy::EnergyLiftParams<f64>,
    ) -> Result<EnergyState<f64>, CoreError> {
        Ok(EnergyState {
            e: stored_energy(x, params)?,
            p: energy_rate(x, xdot, params)?,
            e_t: tangent_energy(xdot, params, x)?,
        })
    }

    fn lyapunov(&self, lift: &EnergyState<f64>, eref: &EnergyReference<f64>, sigma: f64) -> f64 {
        match self.controller {
            Controller::Fblc(g) => {
                let e_e = lift.e - eref.e_ref;
                let e_p = lift.p - eref.p_ref;
                0.5 * (g.k1 * e_e * e_e + e_p * e_p)
            }
            Controller::Smc(_) => 0.5 * sigma * sigma,
            _ => f64::NAN,
        }
    }
}

pub fn build_plant(scn: &Scenario) -> Plant {
    match &scn.plant {
        PlantConfig::Rlc { .. } => {
            Plant::Rlc(RlcSource::new(scn.rlc_params().expect("rlc plant")))
        }
        PlantConfig::Generator { .. } => {
            Plant::Generator(TurbineGenerator::new(scn.gen_params().expect("generator plant")))
        }
    }
}

pub fn build_controller(scn: &Scenario) -> Controller {
    match &scn.controller {
        ControllerConfig::Fblc { .. } => Controller::Fblc(scn.fblc_gains().unwrap()),
        ControllerConfig::Smc { .. } => Controller::Smc(scn.smc_gains().unwrap()),
        ControllerConfig::Proportional { .. } => {
            Controller::Proportional(scn.prop_gains().unwrap())
        }
        ControllerConfig::BraytonMoser { .. } => Controller::BraytonMoser(scn.bm_gains().unwrap()),
        ControllerConfig::Droop { .. } => Controller::Droop(scn.droop_gains().unwrap()),
    }
}

fn initial_state(scn: &Scenario, ctrl_dim: usize) -> Vec<f64> {
    let mut y = Vec::with_capacity(2 + ctrl_dim + 9);
    match &scn.plant {
        PlantConfig::Rlc { i0, v0, u0, .. } => {
            y.push(*i0);
            y.push(*v0);
            if ctrl_dim == 1 {
                y.push(*u0);
            }
        }
        PlantConfig::Generator { omega0, pm0, a0, kt, .. } => {
            y.push(*omega0);
            y.push(*pm0);
            if ctrl_dim == 1 {
                // Valve starts at the turbine's internal equilibrium unless
                // configured otherwise.
                y.push(a0.unwrap_or(pm0 / kt));
            }
        }
    }
    y.extend_from_slice(&[0.0; 9]);
    y
}

fn pdot_estimator_enabled(scn: &Scenario) -> bool {
    matches!(
        scn.controller,
        ControllerConfig::Fblc { pdot_ref_estimator: true, .. }
            | ControllerConfig::Smc { pdot_ref_estimator: true, .. }
    )
}

/// Run a scenario: per step the load publishes and the mailbox delivers,
/// the control hold updates if decimated, the sample is recorded, and the
/// augmented system advances one RK4 step. A singularity or divergence stops
/// the run and the partial trajectory is kept.
pub fn simulate(scn: &Scenario) -> Result<SimOutcome, CoreError> {
    scn.validate()?;
    let plant = build_plant(scn);
    let controller = build_controller(scn);
    let profile = scn.load_profile()?;
    let channel = scn.disturbance_channel();
    let engine = Engine::new(
        &plant,
        &controller,
        &profile,
        &channel,
        scn.y_ref,
        scn.delay_steps,
        pdot_estimator_enabled(scn),
    );

    let h = scn.step;
    let n_steps = (scn.horizon / h).round().max(1.0) as usize;
    let dim = engine.state_dim();
    let mut y = initial_state(scn, engine.ctrl_dim);
    debug_assert_eq!(y.len(), dim);

    let mut mailbox = Mailbox::new(scn.delay_steps);
    let mut ctx = StepCtx { held_nb: Rate::zero(), held_uz: None, pdot_ref_est: 0.0 };
    let mut prev_p_ref: Option<f64> = None;
    let mut rk4 = Rk4::new(dim);
    let mut scratch = vec![0.0f64; dim];

    let mut traj = Trajectory {
        name: scn.name.clone(),
        dt: h * scn.record_decimation as f64,
        ..Default::default()
    };
    traj.reserve(n_steps / scn.record_decimation + 2);

    let estimator = pdot_estimator_enabled(scn);

    for k in 0..=n_steps {
        let t = k as f64 * h;

        let step_result: Result<(), CoreError> = (|| {
            // Publish and deliver this step's interaction rates.
            let outgoing = engine.load_rate(t, &y)?;
            ctx.held_nb = mailbox.exchange(k, outgoing);

            // Practical pdot_ref estimator: filtered finite difference with
            // a 10-step time constant.
            if estimator {
                let p_ref_now = engine.p_ref_analytic(t)?;
                if let Some(prev) = prev_p_ref {
                    let fd = (p_ref_now - prev) / h;
                    ctx.pdot_ref_est += 0.1 * (fd - ctx.pdot_ref_est);
                }
                prev_p_ref = Some(p_ref_now);
            }

            // Sample-and-hold control when decimated; 0 keeps the law live.
            if scn.control_decimation >= 1 && k % scn.control_decimation == 0 {
                ctx.held_uz = None;
                let ev = engine.eval(t, &y, &ctx, &mut scratch)?;
                ctx.held_uz = Some(ev.u_z);
            }

            if k % scn.record_decimation == 0 {
                let ev = engine.eval(t, &y, &ctx, &mut scratch)?;
                record(&mut traj, t, &y, engine.z_base(), &ev, scn.y_ref);
            }
            Ok(())
        })();

        if let Err(e) = step_result {
            return Ok(SimOutcome {
                trajectory: traj,
                error: Some(CoreError::SimulationAborted { step: k, time: t, source: Box::new(e) }),
            });
        }

        if k == n_steps {
            break;
        }

        let advanced = rk4.step(t, h, &mut y, |ts, ys, out| {
            engine.eval(ts, ys, &ctx, out).map(|_| ())
        });
        if let Err(e) = advanced {
            return Ok(SimOutcome {
                trajectory: traj,
                error: Some(CoreError::SimulationAborted { step: k, time: t, source: Box::new(e) }),
            });
        }
    }

    Ok(SimOutcome { trajectory: traj, error: None })
}

fn record(traj: &mut Trajectory, t: f64, y: &[f64], z_base: usize, ev: &EvalOut, y_ref: f64) {
    traj.t.push(t);
    traj.x0.push(y[0]);
    traj.x1.push(y[1]);
    traj.xdot0.push(ev.xdot[0]);
    traj.xdot1.push(ev.xdot[1]);
    traj.u.push(ev.u);
    traj.u_z.push(ev.u_z);
    traj.y.push(ev.y_out);
    traj.y_ref.push(y_ref);
    traj.e.push(ev.lift.e);
    traj.p.push(ev.lift.p);
    traj.e_t.push(ev.lift.e_t);
    traj.e_ref.push(ev.eref.e_ref);
    traj.p_ref.push(ev.eref.p_ref);
    traj.pdot_ref.push(ev.eref.pdot_ref);
    traj.qdot_c.push(ev.qdot_c);
    traj.r_own.push(ev.rate_own);
    traj.r_nb.push(ev.rate_nb_view);
    traj.r_u.push(ev.rate_u);
    traj.r_m.push(ev.rate_m);
    traj.sigma.push(ev.sigma);
    traj.v_lyap.push(ev.v_lyap);
    traj.z_r.push([y[z_base], y[z_base + 1], y[z_base + 2]]);
    traj.z_u.push([y[z_base + 3], y[z_base + 4], y[z_base + 5]]);
    traj.z_m.push([y[z_base + 6], y[z_base + 7], y[z_base + 8]]);
}

/// Dissipation powers at a recorded sample, for the residual monitors.
pub fn dissipation_at(plant: &Plant, x: &[f64], xdot: &[f64]) -> (f64, f64) {
    let params = match plant {
        Plant::Rlc(c) => c.lift_params(),
        Plant::Generator(c) => c.lift_params(),
    };
    (
        dissipation(x, params).unwrap_or(f64::NAN),
        crate::energy::tangent_dissipation(xdot, params, x).unwrap_or(f64::NAN),
    )
}
