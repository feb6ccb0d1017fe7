use enspace::sim::*;

fn rlc_scenario(ctrl: ControllerConfig, horizon: f64) -> Scenario {
    Scenario {
        name: "smoke".into(),
        plant: PlantConfig::Rlc { r1: 0.1, l1: 1.12e-3, c1: 6.8e-3, i0: 12.8, v0: 79.0, u0: 79.0 },
        load: LoadConfig::Constant { power: 1000.0 },
        controller: ctrl,
        y_ref: 80.0,
        horizon,
        step: 1e-4,
        delay_steps: 0,
        control_decimation: 0,
        record_decimation: 1,
        disturbance: DisturbanceConfig::Zero,
        seed: 0,
    }
}

#[test]
fn fblc_rlc_converges() {
    let scn = rlc_scenario(ControllerConfig::Fblc { k1: 10.0, k2: 10.0, pdot_ref_estimator: false }, 5.0);
    let out = simulate(&scn).unwrap();
    assert!(out.is_complete(), "error: {:?}", out.error);
    let traj = &out.trajectory;
    let n = traj.len();
    println!("samples: {n}");
    println!("terminal: i={} v={} u={}", traj.x0[n-1], traj.x1[n-1], traj.u[n-1]);
    println!("terminal E={} p={} E_t={}", traj.e[n-1], traj.p[n-1], traj.e_t[n-1]);
    println!("V(0)={} V(T)={} ratio={}", traj.v_lyap[0], traj.v_lyap[n-1], traj.v_lyap[n-1]/traj.v_lyap[0]);
    assert!((traj.x1[n-1] - 80.0).abs() < 0.08, "v = {}", traj.x1[n-1]);
    assert!((traj.x0[n-1] - 12.5).abs() < 0.0125, "i = {}", traj.x0[n-1]);
    assert!((traj.u[n-1] - 81.25).abs() < 0.08125, "u = {}", traj.u[n-1]);
}

#[test]
fn smc_rlc_converges() {
    let scn = rlc_scenario(ControllerConfig::Smc { m0: 5.4, m1: 2.9, eps_bl: 0.0, pdot_ref_estimator: false }, 5.0);
    let out = simulate(&scn).unwrap();
    assert!(out.is_complete(), "error: {:?}", out.error);
    let traj = &out.trajectory;
    let n = traj.len();
    println!("sigma(0)={} terminal v={} u={}", traj.sigma[0], traj.x1[n-1], traj.u[n-1]);
    let m = compute_metrics(traj, 80.0, 0.5);
    println!("reaching_time={:?} bound={}", m.reaching_time, traj.sigma[0].abs()/5.4);
    assert!((traj.x1[n-1] - 80.0).abs() < 0.08, "v = {}", traj.x1[n-1]);
    let tr = m.reaching_time.expect("must reach");
    assert!(tr <= traj.sigma[0].abs()/5.4 + 2.0*1e-4, "t_r = {tr}"); // sign crossing: one-step resolution
}

#[test]
fn closed_loop_matches_linear_ode() {
    // Eq-8 check: energy error follows edd = -K2 ed - K1 e exactly.
    let scn = rlc_scenario(ControllerConfig::Fblc { k1: 10.0, k2: 10.0, pdot_ref_estimator: false }, 5.0);
    let out = simulate(&scn).unwrap();
    let traj = &out.trajectory;
    // analytic solution of [e; ep]' = [[0,1],[-10,-10]] via eigen decomposition
    let (k1, k2) = (10.0f64, 10.0f64);
    let disc = (k2*k2/4.0 - k1).sqrt(); // real: 25-10=15
    let l1 = -k2/2.0 + disc;
    let l2 = -k2/2.0 - disc;
    let e0 = traj.e[0] - traj.e_ref[0];
    let ep0 = traj.p[0] - traj.p_ref[0];
    let a = (ep0 - l2*e0)/(l1-l2);
    let b = (l1*e0 - ep0)/(l1-l2);
    let mut max_err_e: f64 = 0.0;
    let mut max_abs_e: f64 = 0.0;
    let mut max_err_p: f64 = 0.0;
    let mut max_abs_p: f64 = 0.0;
    for k in 0..traj.len() {
        let t = traj.t[k];
        let ana_e = a*(l1*t).exp() + b*(l2*t).exp();
        let ana_p = a*l1*(l1*t).exp() + b*l2*(l2*t).exp();
        let me = (traj.e[k]-traj.e_ref[k]) - ana_e;
        let mp = (traj.p[k]-traj.p_ref[k]) - ana_p;
        max_err_e = max_err_e.max(me.abs());
        max_abs_e = max_abs_e.max(ana_e.abs());
        max_err_p = max_err_p.max(mp.abs());
        max_abs_p = max_abs_p.max(ana_p.abs());
    }
    println!("rel err e_E: {}", max_err_e/max_abs_e);
    println!("rel err e_p: {}", max_err_p/max_abs_p);
    assert!(max_err_e/max_abs_e < 0.01);
    assert!(max_err_p/max_abs_p < 0.01);
}
