use enspace::sim::*;
use enspace::analysis::*;
use enspace::controllers::SmcGains;

fn main() {
    // RLC SMC, no disturbance
    let s = Scenario {
        name: "r".into(),
        plant: PlantConfig::Rlc { r1: 0.1, l1: 1.12e-3, c1: 6.8e-3, i0: 12.8, v0: 79.0, u0: 79.0 },
        load: LoadConfig::Constant { power: 1000.0 },
        controller: ControllerConfig::Smc { m0: 5.4, m1: 2.9, eps_bl: 0.0, pdot_ref_estimator: false },
        y_ref: 80.0, horizon: 5.0, step: 1e-4, delay_steps: 0,
        control_decimation: 0, record_decimation: 1,
        disturbance: DisturbanceConfig::Zero, seed: 0,
    };
    let out = simulate(&s).unwrap();
    let rep = smc_certificate(&out.trajectory, &SmcGains { m0: 5.4, m1: 2.9, eps_bl: 0.0 }, 0.0);
    println!("rlc: t_r {:?} bound {:?} viol {} slide {:?} fit {:?}",
        rep.reaching_time, rep.reaching_bound, rep.lyapunov_violations, rep.sliding_violations, rep.fitted_decay_rate);

    // gen delay sweep with the new slack
    for d in [0usize, 16, 32] {
        let mut g = Scenario {
            name: "g".into(),
            plant: PlantConfig::Generator { j1: 10.0, d1: 0.01, tt: 0.5, kt: 1000.0, omega0: 373.23, pm0: 1000.0, a0: None },
            load: LoadConfig::Sigmoid { p0: 1000.0, delta: 1000.0, rate: 2.0, t0: 5.0 },
            controller: ControllerConfig::Smc { m0: 10.0, m1: 1.0, eps_bl: 0.0, pdot_ref_estimator: false },
            y_ref: 377.0, horizon: 15.0, step: 1e-3, delay_steps: d,
            control_decimation: 0, record_decimation: 1,
            disturbance: DisturbanceConfig::Zero, seed: 0,
        };
        g.delay_steps = d;
        let out = simulate(&g).unwrap();
        let t = &out.trajectory;
        let maxq = t.r_m.iter().map(|r| r.qdot.abs()).fold(0.0, f64::max);
        let rep = smc_certificate(t, &SmcGains { m0: 10.0, m1: 1.0, eps_bl: 0.0 }, 8.0);
        println!("gen d={d}: max|Qm| {maxq:.3} viol {} cond {:.4}", rep.lyapunov_violations, rep.condition_fraction);
    }
}
