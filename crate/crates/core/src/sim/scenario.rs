//! Scenario description: plant, load, controller, communication, and
//! integration settings for one simulation run.

use serde::{Deserialize, Serialize};

use crate::components::{GenParams, LoadProfile, RlcParams};
use crate::controllers::{BmGains, DroopGains, FblcGains, PropGains, SmcGains};
use crate::error::CoreError;
use crate::interconnect::DisturbanceChannel;

fn default_record_decimation() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    pub plant: PlantConfig,
    pub load: LoadConfig,
    pub controller: ControllerConfig,
    /// Physical output reference: terminal voltage (V) or rotor speed (rad/s).
    pub y_ref: f64,
    /// Horizon (s).
    pub horizon: f64,
    /// Integrator step (s).
    pub step: f64,
    /// Communication delay in integrator steps.
    #[serde(default)]
    pub delay_steps: usize,
    /// Control update decimation: 0 evaluates the law continuously (at every
    /// integrator stage); n >= 1 samples and holds `u_z` every n steps.
    #[serde(default)]
    pub control_decimation: usize,
    /// Store every n-th step in the trajectory.
    #[serde(default = "default_record_decimation")]
    pub record_decimation: usize,
    #[serde(default)]
    pub disturbance: DisturbanceConfig,
    /// Sweep-ordering seed; recorded in run manifests.
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlantConfig {
    Rlc {
        #[serde(default = "RlcDefaults::r1")]
        r1: f64,
        #[serde(default = "RlcDefaults::l1")]
        l1: f64,
        #[serde(default = "RlcDefaults::c1")]
        c1: f64,
        #[serde(default = "RlcDefaults::i0")]
        i0: f64,
        #[serde(default = "RlcDefaults::v0")]
        v0: f64,
        /// Initial inverter voltage; used when the controller integrates it.
        #[serde(default = "RlcDefaults::u0")]
        u0: f64,
    },
    Generator {
        #[serde(default = "GenDefaults::j1")]
        j1: f64,
        #[serde(default = "GenDefaults::d1")]
        d1: f64,
        #[serde(default = "GenDefaults::tt")]
        tt: f64,
        #[serde(default = "GenDefaults::kt")]
        kt: f64,
        #[serde(default = "GenDefaults::omega0")]
        omega0: f64,
        #[serde(default = "GenDefaults::pm0")]
        pm0: f64,
        /// Initial valve position; defaults to the turbine's internal
        /// equilibrium `Pm(0)/Kt`.
        #[serde(default)]
        a0: Option<f64>,
    },
}

struct RlcDefaults;
impl RlcDefaults {
    fn r1() -> f64 {
        0.1
    }
    fn l1() -> f64 {
        1.12e-3
    }
    fn c1() -> f64 {
        6.8e-3
    }
    fn i0() -> f64 {
        12.8
    }
    fn v0() -> f64 {
        79.0
    }
    fn u0() -> f64 {
        79.0
    }
}

struct GenDefaults;
impl GenDefaults {
    fn j1() -> f64 {
        10.0
    }
    fn d1() -> f64 {
        0.01
    }
    fn tt() -> f64 {
        0.5
    }
    fn kt() -> f64 {
        1000.0
    }
    fn omega0() -> f64 {
        373.23
    }
    fn pm0() -> f64 {
        1000.0
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LoadConfig {
    Constant {
        power: f64,
    },
    Sigmoid {
        #[serde(default = "SigmoidDefaults::p0")]
        p0: f64,
        #[serde(default = "SigmoidDefaults::delta")]
        delta: f64,
        #[serde(default = "SigmoidDefaults::rate")]
        rate: f64,
        #[serde(default = "SigmoidDefaults::t0")]
        t0: f64,
    },
    Piecewise {
        points: Vec<(f64, f64)>,
    },
    Tabulated {
        path: String,
    },
}

struct SigmoidDefaults;
impl SigmoidDefaults {
    fn p0() -> f64 {
        1000.0
    }
    fn delta() -> f64 {
        1000.0
    }
    fn rate() -> f64 {
        2.0
    }
    fn t0() -> f64 {
        5.0
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ControllerConfig {
    Fblc {
        k1: f64,
        k2: f64,
        #[serde(default)]
        pdot_ref_estimator: bool,
    },
    Smc {
        m0: f64,
        m1: f64,
        #[serde(default)]
        eps_bl: f64,
        #[serde(default)]
        pdot_ref_estimator: bool,
    },
    Proportional {
        ki: f64,
        kv: f64,
    },
    BraytonMoser {
        n1: f64,
        n2: f64,
        n3: f64,
        pi_max: f64,
    },
    Droop {
        tg: f64,
        r: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DisturbanceConfig {
    #[default]
    Zero,
    Sine {
        #[serde(default)]
        amp_p: f64,
        #[serde(default)]
        amp_qdot: f64,
        #[serde(default)]
        amp_pt: f64,
        freq: f64,
    },
    ProportionalPError {
        coeff: f64,
    },
    Implicit,
}

impl Scenario {
    /// Validate ranges and plant/controller pairing; the error names the
    /// offending key.
    pub fn validate(&self) -> Result<(), CoreError> {
        let bad = |key: &str, reason: &str| {
            Err(CoreError::InvalidScenario {
                key: key.into(),
                reason: reason.into(),
            })
        };
        if !(self.step > 0.0) {
            return bad("step", "must be positive");
        }
        if self.horizon < self.step {
            return bad("horizon", "must be at least one step");
        }
        if self.record_decimation == 0 {
            return bad("record_decimation", "must be at least 1");
        }
        if !(self.y_ref > 0.0) {
            return bad("y_ref", "must be positive");
        }
        match (&self.plant, &self.controller) {
            (PlantConfig::Rlc { .. }, ControllerConfig::Droop { .. }) => {
                return bad("controller", "droop governor drives the generator plant only");
            }
            (PlantConfig::Generator { .. }, ControllerConfig::Proportional { .. })
            | (PlantConfig::Generator { .. }, ControllerConfig::BraytonMoser { .. }) => {
                return bad("controller", "voltage benchmarks drive the rlc plant only");
            }
            _ => {}
        }
        match &self.plant {
            PlantConfig::Rlc { r1, l1, c1, .. } => {
                if !(*r1 > 0.0 && *l1 > 0.0 && *c1 > 0.0) {
                    return bad("plant", "r1, l1, c1 must be positive");
                }
            }
            PlantConfig::Generator { j1, d1, tt, kt, .. } => {
                if !(*j1 > 0.0 && *d1 > 0.0 && *tt > 0.0 && *kt > 0.0) {
                    return bad("plant", "j1, d1, tt, kt must be positive");
                }
            }
        }
        match &self.controller {
            ControllerConfig::Fblc { k1, k2, .. } => {
                if !(*k1 > 0.0 && *k2 > 0.0) {
                    return bad("controller.k1", "fblc gains must be positive");
                }
            }
            ControllerConfig::Smc { m0, m1, eps_bl, .. } => {
                if !(*m0 > 0.0 && *m1 > 0.0) {
                    return bad("controller.m0", "smc gains must be positive");
                }
                if *eps_bl < 0.0 {
                    return bad("controller.eps_bl", "boundary layer must be non-negative");
                }
            }
            ControllerConfig::Droop { tg, r } => {
                if !(*tg > 0.0 && *r > 0.0) {
                    return bad("controller.tg", "droop constants must be positive");
                }
            }
            _ => {}
        }
        match &self.load {
            LoadConfig::Constant { power } if !(*power >= 0.0) => {
                return bad("load.power", "must be non-negative");
            }
            LoadConfig::Piecewise { points } => {
                LoadProfile::<f64>::piecewise(points.clone()).map(|_| ()).map_err(|e| {
                    CoreError::InvalidScenario { key: "load.points".into(), reason: e.to_string() }
                })?;
            }
            _ => {}
        }
        Ok(())
    }

    pub fn rlc_params(&self) -> Option<RlcParams<f64>> {
        match self.plant {
            PlantConfig::Rlc { r1, l1, c1, .. } => Some(RlcParams::new(r1, l1, c1)),
            _ => None,
        }
    }

    pub fn gen_params(&self) -> Option<GenParams<f64>> {
        match self.plant {
            PlantConfig::Generator { j1, d1, tt, kt, .. } => {
                Some(GenParams::new(j1, d1, tt, kt))
            }
            _ => None,
        }
    }

    /// Build the load profile; tabulated profiles read their file here.
    pub fn load_profile(&self) -> Result<LoadProfile<f64>, CoreError> {
        match &self.load {
            LoadConfig::Constant { power } => Ok(LoadProfile::constant(*power)),
            LoadConfig::Sigmoid { p0, delta, rate, t0 } => Ok(LoadProfile::SigmoidStep {
                p0: *p0,
                delta: *delta,
                rate: *rate,
                t0: *t0,
            }),
            LoadConfig::Piecewise { points } => LoadProfile::piecewise(points.clone()),
            LoadConfig::Tabulated { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CoreError::InvalidLoadTable(format!("{path}: {e}"))
                })?;
                LoadProfile::tabulated_from_str(&text)
            }
        }
    }

    pub fn disturbance_channel(&self) -> DisturbanceChannel<f64> {
        match &self.disturbance {
            DisturbanceConfig::Zero => DisturbanceChannel::Zero,
            DisturbanceConfig::Sine { amp_p, amp_qdot, amp_pt, freq } => {
                DisturbanceChannel::Sine {
                    amp_p: *amp_p,
                    amp_qdot: *amp_qdot,
                    amp_pt: *amp_pt,
                    freq: *freq,
                }
            }
            DisturbanceConfig::ProportionalPError { coeff } => {
                DisturbanceChannel::ProportionalPError { coeff: *coeff }
            }
            DisturbanceConfig::Implicit => DisturbanceChannel::Implicit,
        }
    }

    pub fn fblc_gains(&self) -> Option<FblcGains<f64>> {
        match self.controller {
            ControllerConfig::Fblc { k1, k2, .. } => Some(FblcGains { k1, k2 }),
            _ => None,
        }
    }

    pub fn smc_gains(&self) -> Option<SmcGains<f64>> {
        match self.controller {
            ControllerConfig::Smc { m0, m1, eps_bl, .. } => Some(SmcGains { m0, m1, eps_bl }),
            _ => None,
        }
    }

    pub fn prop_gains(&self) -> Option<PropGains<f64>> {
        match self.controller {
            ControllerConfig::Proportional { ki, kv } => Some(PropGains { ki, kv }),
            _ => None,
        }
    }

    pub fn bm_gains(&self) -> Option<BmGains<f64>> {
        match self.controller {
            ControllerConfig::BraytonMoser { n1, n2, n3, pi_max } => {
                Some(BmGains { n1, n2, n3, pi_max })
            }
            _ => None,
        }
    }

    pub fn droop_gains(&self) -> Option<DroopGains<f64>> {
        match self.controller {
            ControllerConfig::Droop { tg, r } => Some(DroopGains { tg, r }),
            _ => None,
        }
    }
}
