//! Energy-space definitions: stored/tangent energy, dissipation, time
//! constants, effort/flow samples, interaction rates and variables, the
//! third-order energy dynamics, and the interconnection (Tellegen) residual.

use crate::error::{CoreError, Denominator};
use crate::scalar::{cast, Real};

/// Floor below which a dissipation power is treated as degenerate and the
/// ratio form of a time constant is refused.
pub const DISSIPATION_FLOOR: f64 = 1e-12;

/// An effort/flow pair with its time derivatives, sampled at one instant.
///
/// Effort is a generalized force (voltage, torque-per-speed-scaled quantity),
/// flow its conjugate (current, angular speed); `e * f` is power in watts and
/// `e_dot * f_dot` carries W/s^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffortFlowSample<T> {
    pub e: T,
    pub f: T,
    pub e_dot: T,
    pub f_dot: T,
}

impl<T: Real> EffortFlowSample<T> {
    pub fn new(e: T, f: T, e_dot: T, f_dot: T) -> Self {
        Self { e, f, e_dot, f_dot }
    }

    pub fn is_finite(&self) -> bool {
        self.e.is_finite() && self.f.is_finite() && self.e_dot.is_finite() && self.f_dot.is_finite()
    }
}

/// Upper-layer state of a component: stored energy `E` (J), its rate
/// `p = dE/dt` (W), and tangent-space energy `E_t` (J/s^2).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyState<T> {
    pub e: T,
    pub p: T,
    pub e_t: T,
}

impl<T: Real> EnergyState<T> {
    pub fn new(e: T, p: T, e_t: T) -> Self {
        Self { e, p, e_t }
    }
}

/// Component time constant `tau = E/D` and tangent-space time constant
/// `tau_t = E_t/D_t`; defined only while both dissipations are positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeConstants<T> {
    pub tau: T,
    pub tau_t: T,
}

/// Rate of an interaction variable: instantaneous power `P` (W), rate of
/// generalized reactive power `Qdot = e*fdot - f*edot` (W/s), and
/// tangent-space power `P_t = edot*fdot` (W/s^2).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InteractionRate<T> {
    pub p: T,
    pub qdot: T,
    pub p_t: T,
}

impl<T: Real> InteractionRate<T> {
    pub const fn new(p: T, qdot: T, p_t: T) -> Self {
        Self { p, qdot, p_t }
    }

    pub fn zero() -> Self {
        Self {
            p: T::zero(),
            qdot: T::zero(),
            p_t: T::zero(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.p.is_finite() && self.qdot.is_finite() && self.p_t.is_finite()
    }

    /// Largest absolute component, used for relative residual scales.
    pub fn max_abs(&self) -> T {
        self.p.abs().max(self.qdot.abs()).max(self.p_t.abs())
    }
}

impl<T: Real> std::ops::Add for InteractionRate<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            p: self.p + rhs.p,
            qdot: self.qdot + rhs.qdot,
            p_t: self.p_t + rhs.p_t,
        }
    }
}

impl<T: Real> std::ops::Sub for InteractionRate<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            p: self.p - rhs.p,
            qdot: self.qdot - rhs.qdot,
            p_t: self.p_t - rhs.p_t,
        }
    }
}

impl<T: Real> std::ops::Neg for InteractionRate<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            p: -self.p,
            qdot: -self.qdot,
            p_t: -self.p_t,
        }
    }
}

/// Running integral of an [`InteractionRate`] from `t0`: accumulated energy
/// (J), reactive (W), and tangent (W/s) exchanges at a port or input channel.
///
/// Accumulation happens inside the simulation's augmented state vector with
/// the same integrator as the physical states; this type carries the result.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InteractionVariable<T> {
    pub z: [T; 3],
    pub t0: T,
}

impl<T: Real> InteractionVariable<T> {
    pub fn starting_at(t0: T) -> Self {
        Self {
            z: [T::zero(); 3],
            t0,
        }
    }
}

/// Quadratic-form parameters of the energy lift: diagonal inertia matrix `H`
/// (storage: inductance/capacitance or rotational inertia) and diagonal
/// dissipation matrix `B`. Both components of this library have constant
/// diagonal `H` and `B`; `H` is positive definite on the energy-carrying
/// coordinates and `B` is positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLiftParams<T> {
    pub h_diag: Vec<T>,
    pub b_diag: Vec<T>,
}

impl<T: Real> EnergyLiftParams<T> {
    pub fn new(h_diag: Vec<T>, b_diag: Vec<T>) -> Self {
        assert_eq!(h_diag.len(), b_diag.len(), "H and B dimension mismatch");
        Self { h_diag, b_diag }
    }

    fn quad(&self, diag: &[T], x: &[T]) -> T {
        assert_eq!(diag.len(), x.len(), "state dimension mismatch");
        let two = cast::<T>(2.0);
        x.iter()
            .zip(diag)
            .fold(T::zero(), |acc, (&xi, &d)| acc + d * xi * xi / two)
    }
}

fn ensure_finite<T: Real>(x: &[T], context: &'static str) -> Result<(), CoreError> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(CoreError::NonFiniteInput { context })
    }
}

/// Stored energy `E(x) = x^T H x / 2`; non-negative for admissible states.
pub fn stored_energy<T: Real>(x: &[T], params: &EnergyLiftParams<T>) -> Result<T, CoreError> {
    ensure_finite(x, "stored_energy state")?;
    Ok(params.quad(&params.h_diag, x))
}

/// Tangent-space energy `E_t(x, xdot) = xdot^T H(x) xdot / 2`.
///
/// Not a physical storage; it is the construct that closes the third-order
/// energy model. `x` is accepted for parity with state-dependent `H`, which
/// both concrete components keep constant.
pub fn tangent_energy<T: Real>(
    x_dot: &[T],
    params: &EnergyLiftParams<T>,
    _x: &[T],
) -> Result<T, CoreError> {
    ensure_finite(x_dot, "tangent_energy state derivative")?;
    Ok(params.quad(&params.h_diag, x_dot))
}

/// Energy rate `p = dE/dt = x^T H xdot` for constant `H`; the second entry
/// of the lifted state.
pub fn energy_rate<T: Real>(
    x: &[T],
    x_dot: &[T],
    params: &EnergyLiftParams<T>,
) -> Result<T, CoreError> {
    ensure_finite(x, "energy_rate state")?;
    ensure_finite(x_dot, "energy_rate state derivative")?;
    Ok(x.iter()
        .zip(x_dot)
        .zip(&params.h_diag)
        .fold(T::zero(), |acc, ((&xi, &di), &h)| acc + h * xi * di))
}

/// Instantaneous dissipated power `D(x) = x^T B x / 2`.
pub fn dissipation<T: Real>(x: &[T], params: &EnergyLiftParams<T>) -> Result<T, CoreError> {
    ensure_finite(x, "dissipation state")?;
    Ok(params.quad(&params.b_diag, x))
}

/// Tangent-space dissipated power `D_t(x, xdot) = xdot^T B(x) xdot / 2`.
pub fn tangent_dissipation<T: Real>(
    x_dot: &[T],
    params: &EnergyLiftParams<T>,
    _x: &[T],
) -> Result<T, CoreError> {
    ensure_finite(x_dot, "tangent_dissipation state derivative")?;
    Ok(params.quad(&params.b_diag, x_dot))
}

/// Time constants `tau = E/D`, `tau_t = E_t/D_t`.
///
/// Fails with the offending denominator when a dissipation is at or below
/// [`DISSIPATION_FLOOR`]; callers then use the product-form dynamics
/// ([`energy_rhs_with_dissipation`]) in which `E/tau` is replaced by `D`.
pub fn time_constants<T: Real>(e: T, d: T, e_t: T, d_t: T) -> Result<TimeConstants<T>, CoreError> {
    let floor = cast::<T>(DISSIPATION_FLOOR);
    if d <= floor {
        return Err(CoreError::UndefinedTimeConstant {
            which: Denominator::Dissipation,
        });
    }
    if d_t <= floor {
        return Err(CoreError::UndefinedTimeConstant {
            which: Denominator::TangentDissipation,
        });
    }
    Ok(TimeConstants {
        tau: e / d,
        tau_t: e_t / d_t,
    })
}

/// Interaction rate of an input channel from its effort/flow sample:
/// `P = e*f`, `Qdot = e*fdot - f*edot`, `P_t = edot*fdot`.
pub fn interaction_rate<T: Real>(s: &EffortFlowSample<T>) -> InteractionRate<T> {
    InteractionRate {
        p: s.e * s.f,
        qdot: s.e * s.f_dot - s.f * s.e_dot,
        p_t: s.e_dot * s.f_dot,
    }
}

/// Third-order energy dynamics in ratio form:
///
/// ```text
/// dE/dt   = -E/tau     + P^r + P^u + P^m
/// dp/dt   = 4 E_t + 2 Qdot_C - Qdot^r - Qdot^u - Qdot^m
/// dE_t/dt = -E_t/tau_t + P_t^r + P_t^u + P_t^m
/// ```
pub fn energy_rhs<T: Real>(
    xz: &EnergyState<T>,
    tc: &TimeConstants<T>,
    qdot_c: T,
    r: &InteractionRate<T>,
    u: &InteractionRate<T>,
    m: &InteractionRate<T>,
) -> EnergyState<T> {
    let four = cast::<T>(4.0);
    let two = cast::<T>(2.0);
    EnergyState {
        e: -xz.e / tc.tau + r.p + u.p + m.p,
        p: four * xz.e_t + two * qdot_c - r.qdot - u.qdot - m.qdot,
        e_t: -xz.e_t / tc.tau_t + r.p_t + u.p_t + m.p_t,
    }
}

/// Third-order energy dynamics in product form, with the dissipation powers
/// substituted directly for `E/tau` and `E_t/tau_t`. Identical to
/// [`energy_rhs`] whenever the time constants are defined, and well-posed
/// when they are not.
pub fn energy_rhs_with_dissipation<T: Real>(
    xz: &EnergyState<T>,
    d: T,
    d_t: T,
    qdot_c: T,
    r: &InteractionRate<T>,
    u: &InteractionRate<T>,
    m: &InteractionRate<T>,
) -> EnergyState<T> {
    let four = cast::<T>(4.0);
    let two = cast::<T>(2.0);
    EnergyState {
        e: -d + r.p + u.p + m.p,
        p: four * xz.e_t + two * qdot_c - r.qdot - u.qdot - m.qdot,
        e_t: -d_t + r.p_t + u.p_t + m.p_t,
    }
}

/// Interconnection residual `own + sum(neighbors)`, zero componentwise iff
/// the sum-zero constraint `zdot_i^r = -sum_j zdot_j^r` holds. Diagnostic.
pub fn tellegen_residual<T: Real>(
    neighbor_rates: &[InteractionRate<T>],
    own: &InteractionRate<T>,
) -> InteractionRate<T> {
    neighbor_rates.iter().fold(*own, |acc, r| acc + *r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const RLC_H: [f64; 2] = [1.12e-3, 6.8e-3];
    const RLC_B: [f64; 2] = [0.2, 0.0]; // 2*R1 so that D = R1*i^2

    fn rlc_lift() -> EnergyLiftParams<f64> {
        EnergyLiftParams::new(RLC_H.to_vec(), RLC_B.to_vec())
    }

    /// Independent quadratic-form evaluator over a full symmetric matrix,
    /// used as the oracle for the diagonal fast path.
    fn quad_form_full(m: &[Vec<f64>], x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (i, row) in m.iter().enumerate() {
            for (j, &mij) in row.iter().enumerate() {
                acc += 0.5 * x[i] * mij * x[j];
            }
        }
        acc
    }

    #[test]
    fn stored_energy_rlc_example() {
        let x = [12.5, 80.0];
        let e = stored_energy(&x, &rlc_lift()).unwrap();
        let oracle = quad_form_full(
            &[vec![1.12e-3, 0.0], vec![0.0, 6.8e-3]],
            &x,
        );
        assert!((e - oracle).abs() <= 1e-12 * oracle);
        assert!((e - 21.8475).abs() <= 1e-12 * 21.8475);
    }

    #[test]
    fn stored_energy_zero_state() {
        assert_eq!(stored_energy(&[0.0, 0.0], &rlc_lift()).unwrap(), 0.0);
    }

    #[test]
    fn stored_energy_rotor() {
        // 1/2 * J1 * omega^2 with J1 = 10 kg m^2 at synchronous speed.
        let lift = EnergyLiftParams::<f64>::new(vec![10.0], vec![0.02]);
        let e = stored_energy(&[377.0], &lift).unwrap();
        assert!((e - 710_645.0).abs() <= 1e-9 * 710_645.0);
    }

    #[test]
    fn stored_energy_rejects_non_finite() {
        let err = stored_energy(&[f64::NAN, 1.0], &rlc_lift());
        assert!(matches!(err, Err(CoreError::NonFiniteInput { .. })));
    }

    #[test]
    fn tangent_energy_zero_at_rest() {
        let e_t = tangent_energy(&[0.0, 0.0], &rlc_lift(), &[12.5, 80.0]).unwrap();
        assert_eq!(e_t, 0.0);
    }

    #[test]
    fn dissipation_examples() {
        let d = dissipation(&[12.5, 80.0], &rlc_lift()).unwrap();
        assert!((d - 15.625).abs() <= 1e-12 * 15.625); // R1*i^2
        assert_eq!(dissipation(&[0.0, 0.0], &rlc_lift()).unwrap(), 0.0);

        let gen = EnergyLiftParams::<f64>::new(vec![10.0, 0.0], vec![0.02, 0.0]);
        let d = dissipation(&[377.0, 2421.29], &gen).unwrap();
        assert!((d - 1421.29).abs() <= 1e-9 * 1421.29); // D1*omega^2
    }

    #[test]
    fn time_constants_generator_is_state_independent() {
        // tau = (J/2 w^2)/(D1 w^2) = J/(2 D1) = 500 s at any speed.
        let lift = EnergyLiftParams::<f64>::new(vec![10.0], vec![0.02]);
        for w in [100.0, 377.0, 512.3] {
            let e = stored_energy(&[w], &lift).unwrap();
            let d = dissipation(&[w], &lift).unwrap();
            let tc = time_constants(e, d, e, d).unwrap();
            assert!((tc.tau - 500.0).abs() <= 1e-9 * 500.0);
        }
    }

    #[test]
    fn time_constants_ratio_and_rlc_value() {
        let tc = time_constants(15.625f64 * 3.0, 15.625, 1.0, 1.0).unwrap();
        assert!((tc.tau - 3.0).abs() < 1e-12);
        let tc = time_constants(21.8475f64, 15.625, 1.0, 1.0).unwrap();
        assert!((tc.tau - 1.39824).abs() <= 1e-12 * 1.39824);
    }

    #[test]
    fn time_constants_degenerate_denominators() {
        match time_constants(1.0, 0.0, 1.0, 1.0) {
            Err(CoreError::UndefinedTimeConstant { which }) => {
                assert_eq!(which, Denominator::Dissipation)
            }
            other => panic!("expected undefined tau, got {other:?}"),
        }
        match time_constants(1.0, 1.0, 1.0, 1e-13) {
            Err(CoreError::UndefinedTimeConstant { which }) => {
                assert_eq!(which, Denominator::TangentDissipation)
            }
            other => panic!("expected undefined tau_t, got {other:?}"),
        }
    }

    #[test]
    fn interaction_rate_constant_power_load() {
        let s = EffortFlowSample::new(80.0, 12.5, 0.0, 0.0);
        let r = interaction_rate(&s);
        assert_eq!(r.p, 1000.0);
        assert_eq!(r.qdot, 0.0);
        assert_eq!(r.p_t, 0.0);
    }

    #[test]
    fn interaction_rate_arithmetic() {
        let r = interaction_rate(&EffortFlowSample::new(2.0, 3.0, 5.0, 7.0));
        assert_eq!(r.p, 6.0);
        assert_eq!(r.qdot, 2.0 * 7.0 - 3.0 * 5.0);
        assert_eq!(r.p_t, 35.0);
    }

    #[test]
    fn energy_rhs_pure_dissipation() {
        let xz = EnergyState::new(10.0, -1.0, 0.0);
        let tc = TimeConstants { tau: 2.0, tau_t: 1.0 };
        let z = InteractionRate::zero();
        let d = energy_rhs(&xz, &tc, 0.0, &z, &z, &z);
        assert_eq!(d.e, -5.0);
        assert_eq!(d.p, 0.0);
        assert_eq!(d.e_t, 0.0);
    }

    #[test]
    fn energy_rhs_fixed_point() {
        // E/tau balanced by injected power, E_t = 0 and Qdot terms balancing
        // 2*Qdot_C gives a stationary energy state.
        let xz = EnergyState::new(10.0, 0.0, 0.0);
        let tc = TimeConstants { tau: 2.0, tau_t: 1.0 };
        let r = InteractionRate::new(3.0, 1.0, 0.0);
        let u = InteractionRate::new(2.0, 0.5, 0.0);
        let m = InteractionRate::zero();
        let qdot_c = (r.qdot + u.qdot) / 2.0;
        let d = energy_rhs(&xz, &tc, qdot_c, &r, &u, &m);
        assert_eq!(d.e, 0.0);
        assert_eq!(d.p, 0.0);
        assert_eq!(d.e_t, 0.0);
    }

    #[test]
    fn energy_rhs_forms_agree() {
        let xz = EnergyState::<f64>::new(21.8475, -5.0, 733.0);
        let d = 15.625;
        let d_t = 130.6;
        let tc = time_constants(xz.e, d, xz.e_t, d_t).unwrap();
        let r = InteractionRate::new(-1000.0, 528.0, -3.0);
        let u = InteractionRate::new(1015.0, -100.0, 7.0);
        let m = InteractionRate::zero();
        let a = energy_rhs(&xz, &tc, -90_000.0, &r, &u, &m);
        let b = energy_rhs_with_dissipation(&xz, d, d_t, -90_000.0, &r, &u, &m);
        assert!((a.e - b.e).abs() <= 1e-9);
        assert!((a.p - b.p).abs() <= 1e-9);
        assert!((a.e_t - b.e_t).abs() <= 1e-9);
    }

    #[test]
    fn tellegen_residual_lossless_pair() {
        let own = InteractionRate::new(5.0, 1.0, 0.0);
        let nb = InteractionRate::new(-5.0, -1.0, 0.0);
        let res = tellegen_residual(&[nb], &own);
        assert_eq!(res.p, 0.0);
        assert_eq!(res.qdot, 0.0);
        assert_eq!(res.p_t, 0.0);
    }

    #[test]
    fn interaction_variable_starts_clean() {
        let z = InteractionVariable::<f64>::starting_at(1.5);
        assert_eq!(z.z, [0.0; 3]);
        assert_eq!(z.t0, 1.5);
    }

    #[test]
    fn generic_scalar_f32() {
        let lift = EnergyLiftParams::<f32>::new(vec![1.12e-3, 6.8e-3], vec![0.2, 0.0]);
        let e = stored_energy(&[12.5f32, 80.0], &lift).unwrap();
        assert!((e - 21.8475).abs() <= 1e-3);
    }

    proptest! {
        #[test]
        fn stored_energy_non_negative(i in -200.0f64..200.0, v in -500.0f64..500.0) {
            let e = stored_energy(&[i, v], &rlc_lift()).unwrap();
            prop_assert!(e >= 0.0);
        }

        #[test]
        fn tangent_energy_scales_quadratically(
            di in -1e4f64..1e4, dv in -1e4f64..1e4, c in -8.0f64..8.0
        ) {
            let lift = rlc_lift();
            let base = tangent_energy(&[di, dv], &lift, &[0.0, 0.0]).unwrap();
            let scaled = tangent_energy(&[c * di, c * dv], &lift, &[0.0, 0.0]).unwrap();
            prop_assert!((scaled - c * c * base).abs() <= 1e-9 * (1.0 + scaled.abs()));
        }

        #[test]
        fn stored_energy_homogeneous_for_constant_h(
            i in -50.0f64..50.0, v in -200.0f64..200.0, c in -4.0f64..4.0
        ) {
            let lift = rlc_lift();
            let base = stored_energy(&[i, v], &lift).unwrap();
            let scaled = stored_energy(&[c * i, c * v], &lift).unwrap();
            prop_assert!((scaled - c * c * base).abs() <= 1e-9 * (1.0 + scaled.abs()));
        }

        #[test]
        fn qdot_antisymmetric_under_role_swap(
            e in -100.0f64..100.0, f in -100.0f64..100.0,
            ed in -100.0f64..100.0, fd in -100.0f64..100.0
        ) {
            let a = interaction_rate(&EffortFlowSample::new(e, f, ed, fd));
            let b = interaction_rate(&EffortFlowSample::new(f, e, fd, ed));
            prop_assert_eq!(a.p, b.p);
            prop_assert_eq!(a.p_t, b.p_t);
            prop_assert!((a.qdot + b.qdot).abs() <= 1e-12 * (1.0 + a.qdot.abs()));
        }
    }
}
