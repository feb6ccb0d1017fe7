//! Load subsystems: power-demand profiles with exact analytic derivatives,
//! and the port interaction they report to their neighbor.
//!
//! The load is the black-box side of each example: it draws `P_load(t)` at
//! the shared bus variable (terminal voltage or rotor speed) and publishes
//! the full `(P, Qdot, P_t)` rate of its port interaction variable.

use crate::energy::InteractionRate;
use crate::error::CoreError;
use crate::scalar::{cast, Real};

/// Power demand and its first two time derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LoadSample<T> {
    pub p: T,
    pub p_dot: T,
    pub p_ddot: T,
}

/// Time profile of the power drawn by a load. `P(t)` must stay positive on
/// the scenario horizon; derivatives are analytic, never numerical.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadProfile<T> {
    Constant {
        power: T,
    },
    /// Smooth step `P(t) = p0 + delta / (1 + exp(-k (t - t0)))`.
    SigmoidStep {
        p0: T,
        delta: T,
        rate: T,
        t0: T,
    },
    /// Linear interpolation between breakpoints; derivative is piecewise
    /// constant, second derivative zero away from breakpoints.
    PiecewiseLinear {
        points: Vec<(T, T)>,
    },
    /// Natural cubic spline through tabulated samples.
    Tabulated(CubicTable<T>),
}

impl<T: Real> LoadProfile<T> {
    pub fn constant(power: T) -> Self {
        LoadProfile::Constant { power }
    }

    /// Sigmoid step defaults for the frequency-regulation scenario:
    /// 1 kW base, 1 kW step around t = 5 s with rate 2 /s. The published
    /// figures are matched qualitatively; these values are configurable.
    pub fn sigmoid_default() -> Self {
        LoadProfile::SigmoidStep {
            p0: cast(1000.0),
            delta: cast(1000.0),
            rate: cast(2.0),
            t0: cast(5.0),
        }
    }

    pub fn piecewise(points: Vec<(T, T)>) -> Result<Self, CoreError> {
        if points.len() < 2 {
            return Err(CoreError::InvalidLoadTable(
                "piecewise profile needs at least two points".into(),
            ));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(CoreError::InvalidLoadTable(
                    "piecewise breakpoints must be strictly increasing in time".into(),
                ));
            }
        }
        Ok(LoadProfile::PiecewiseLinear { points })
    }

    pub fn tabulated(times: Vec<T>, powers: Vec<T>) -> Result<Self, CoreError> {
        Ok(LoadProfile::Tabulated(CubicTable::fit(times, powers)?))
    }

    /// Parse a two-column time/power text table: one `t P` pair per line,
    /// whitespace or comma separated, `#` comments, strictly increasing time.
    pub fn tabulated_from_str(text: &str) -> Result<Self, CoreError> {
        let mut times = Vec::new();
        let mut powers = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let cols: Vec<&str> = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            if cols.len() != 2 {
                return Err(CoreError::InvalidLoadTable(format!(
                    "line {}: expected two columns, found {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            let parse = |s: &str| -> Result<T, CoreError> {
                s.parse::<f64>()
                    .map(cast)
                    .map_err(|e| CoreError::InvalidLoadTable(format!("line {}: {e}", lineno + 1)))
            };
            times.push(parse(cols[0])?);
            powers.push(parse(cols[1])?);
        }
        Self::tabulated(times, powers)
    }

    /// Power and derivatives at `t`. Outside the covered interval the profile
    /// holds its boundary value.
    pub fn sample(&self, t: T) -> LoadSample<T> {
        match self {
            LoadProfile::Constant { power } => LoadSample {
                p: *power,
                p_dot: T::zero(),
                p_ddot: T::zero(),
            },
            LoadProfile::SigmoidStep { p0, delta, rate, t0 } => {
                let one = T::one();
                let s = one / (one + (-(*rate) * (t - *t0)).exp());
                let sp = s * (one - s);
                LoadSample {
                    p: *p0 + *delta * s,
                    p_dot: *delta * *rate * sp,
                    p_ddot: *delta * *rate * *rate * sp * (one - cast::<T>(2.0) * s),
                }
            }
            LoadProfile::PiecewiseLinear { points } => {
                let first = points.first().unwrap();
                let last = points.last().unwrap();
                if t <= first.0 {
                    return LoadSample { p: first.1, p_dot: T::zero(), p_ddot: T::zero() };
                }
                if t >= last.0 {
                    return LoadSample { p: last.1, p_dot: T::zero(), p_ddot: T::zero() };
                }
                let idx = points.partition_point(|(ti, _)| *ti <= t) - 1;
                let (t0, p0) = points[idx];
                let (t1, p1) = points[idx + 1];
                let slope = (p1 - p0) / (t1 - t0);
                LoadSample {
                    p: p0 + slope * (t - t0),
                    p_dot: slope,
                    p_ddot: T::zero(),
                }
            }
            LoadProfile::Tabulated(table) => table.sample(t),
        }
    }
}

/// Natural cubic spline over strictly increasing knots, carrying analytic
/// first and second derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicTable<T> {
    times: Vec<T>,
    values: Vec<T>,
    /// Second derivative at each knot (natural: zero at the ends).
    m: Vec<T>,
}

impl<T: Real> CubicTable<T> {
    fn fit(times: Vec<T>, values: Vec<T>) -> Result<Self, CoreError> {
        let n = times.len();
        if n < 2 || values.len() != n {
            return Err(CoreError::InvalidLoadTable(
                "table needs at least two rows of matching length".into(),
            ));
        }
        for w in times.windows(2) {
            if w[1] <= w[0] {
                return Err(CoreError::InvalidLoadTable(
                    "table times must be strictly increasing".into(),
                ));
            }
        }

        // Tridiagonal solve for the natural-spline moments.
        let mut m = vec![T::zero(); n];
        if n > 2 {
            let dim = n - 2;
            let mut diag = vec![T::zero(); dim];
            let mut upper = vec![T::zero(); dim];
            let mut rhs = vec![T::zero(); dim];
            let six = cast::<T>(6.0);
            let two = cast::<T>(2.0);
            for k in 0..dim {
                let h0 = times[k + 1] - times[k];
                let h1 = times[k + 2] - times[k + 1];
                diag[k] = two * (h0 + h1);
                upper[k] = h1;
                rhs[k] = six
                    * ((values[k + 2] - values[k + 1]) / h1 - (values[k + 1] - values[k]) / h0);
            }
            // Thomas algorithm; the lower diagonal equals the previous upper.
            for k in 1..dim {
                let lower = upper[k - 1];
                let w = lower / diag[k - 1];
                diag[k] = diag[k] - w * upper[k - 1];
                rhs[k] = rhs[k] - w * rhs[k - 1];
            }
            m[dim] = rhs[dim - 1] / diag[dim - 1];
            for k in (0..dim.saturating_sub(1)).rev() {
                m[k + 1] = (rhs[k] - upper[k] * m[k + 2]) / diag[k];
            }
        }
        Ok(Self { times, values, m })
    }

    fn sample(&self, t: T) -> LoadSample<T> {
        let n = self.times.len();
        if t <= self.times[0] {
            return LoadSample { p: self.values[0], p_dot: T::zero(), p_ddot: T::zero() };
        }
        if t >= self.times[n - 1] {
            return LoadSample { p: self.values[n - 1], p_dot: T::zero(), p_ddot: T::zero() };
        }
        let idx = self.times.partition_point(|ti| *ti <= t) - 1;
        let (t0, t1) = (self.times[idx], self.times[idx + 1]);
        let (y0, y1) = (self.values[idx], self.values[idx + 1]);
        let (m0, m1) = (self.m[idx], self.m[idx + 1]);
        let h = t1 - t0;
        let a = (t1 - t) / h;
        let b = (t - t0) / h;
        let six = cast::<T>(6.0);
        let three = cast::<T>(3.0);
        let p = a * y0
            + b * y1
            + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / six;
        let p_dot = (y1 - y0) / h
            + h / six * ((three * b * b - T::one()) * m1 - (three * a * a - T::one()) * m0);
        let p_ddot = a * m0 + b * m1;
        LoadSample { p, p_dot, p_ddot }
    }
}

/// Full `(P, Qdot, P_t)` rate reported by a load coupled through the pair
/// `(e, f) = (v, P/v)` on a voltage bus or `(P/omega, omega)` on a frequency
/// bus. Either way `P = P_load(t)` exactly and the derivatives come from the
/// pair's analytic chain rule.
///
/// `coupling` is the shared bus variable and `coupling_dot` its rate.
pub fn load_interaction<T: Real>(
    sample: &LoadSample<T>,
    coupling: T,
    coupling_dot: T,
    effort_is_coupling: bool,
) -> Result<InteractionRate<T>, CoreError> {
    if coupling == T::zero() {
        return Err(CoreError::NonFiniteInput {
            context: "load coupling variable is zero",
        });
    }
    let (p, pd) = (sample.p, sample.p_dot);
    let quotient_dot = (pd * coupling - p * coupling_dot) / (coupling * coupling);
    let (e, f, e_dot, f_dot) = if effort_is_coupling {
        // (e, f) = (v, P/v)
        (coupling, p / coupling, coupling_dot, quotient_dot)
    } else {
        // (e, f) = (P/omega, omega)
        (p / coupling, coupling, quotient_dot, coupling_dot)
    };
    Ok(crate::energy::interaction_rate(
        &crate::energy::EffortFlowSample::new(e, f, e_dot, f_dot),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_profile() {
        let p = LoadProfile::constant(1000.0f64);
        let s = p.sample(3.7);
        assert_eq!((s.p, s.p_dot, s.p_ddot), (1000.0, 0.0, 0.0));
    }

    #[test]
    fn sigmoid_midpoint_symmetry() {
        let p = LoadProfile::<f64>::SigmoidStep { p0: 1000.0, delta: 1000.0, rate: 2.0, t0: 5.0 };
        let s = p.sample(5.0);
        assert!((s.p - 1500.0).abs() < 1e-9);
        assert!(s.p_ddot.abs() < 1e-9); // inflection at the midpoint
    }

    fn fd_check(profile: &LoadProfile<f64>, t: f64) {
        let h = 1e-5;
        let s = profile.sample(t);
        let fwd = profile.sample(t + h);
        let bwd = profile.sample(t - h);
        let fd1 = (fwd.p - bwd.p) / (2.0 * h);
        let fd2 = (fwd.p - 2.0 * s.p + bwd.p) / (h * h);
        let scale = s.p.abs().max(1.0);
        assert!(
            (fd1 - s.p_dot).abs() <= 1e-4 * scale.max(s.p_dot.abs()),
            "p_dot: fd {fd1} vs analytic {} at t = {t}",
            s.p_dot
        );
        assert!(
            (fd2 - s.p_ddot).abs() <= 1e-2 * scale.max(s.p_ddot.abs()),
            "p_ddot: fd {fd2} vs analytic {} at t = {t}",
            s.p_ddot
        );
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let sigmoid =
            LoadProfile::<f64>::SigmoidStep { p0: 1000.0, delta: 800.0, rate: 2.0, t0: 5.0 };
        for t in [3.0, 4.9, 5.0, 5.4, 7.0] {
            fd_check(&sigmoid, t);
        }
        let pw = LoadProfile::piecewise(vec![(0.0, 1000.0), (2.0, 1600.0), (5.0, 900.0)]).unwrap();
        for t in [0.5, 1.2, 3.3, 4.1] {
            fd_check(&pw, t); // away from breakpoints
        }
        let tab = LoadProfile::tabulated(
            vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            vec![1000.0, 1210.0, 1380.0, 1150.0, 980.0, 1000.0],
        )
        .unwrap();
        for t in [0.4, 1.5, 2.5, 3.6, 4.5] {
            fd_check(&tab, t);
        }
    }

    #[test]
    fn spline_interpolates_knots() {
        let times = vec![0.0, 1.0, 2.5, 4.0];
        let values = vec![1000.0, 1500.0, 1300.0, 1700.0];
        let tab = LoadProfile::<f64>::tabulated(times.clone(), values.clone()).unwrap();
        for (t, v) in times.iter().zip(&values) {
            let s = tab.sample(*t + 1e-12);
            assert!((s.p - v).abs() <= 1e-6 * v, "knot at t = {t}");
        }
    }

    #[test]
    fn table_parser_accepts_comments_and_commas() {
        let text = "# time power\n0.0, 1000\n1.0  1250 # ramp\n\n2.0,1100\n";
        let p = LoadProfile::<f64>::tabulated_from_str(text).unwrap();
        let s = p.sample(1.0);
        assert!((s.p - 1250.0).abs() < 1e-9);
    }

    #[test]
    fn table_parser_rejects_bad_input() {
        assert!(LoadProfile::<f64>::tabulated_from_str("0 1 2\n1 2 3").is_err());
        assert!(LoadProfile::<f64>::tabulated_from_str("1.0 100\n0.5 200").is_err());
        assert!(LoadProfile::<f64>::tabulated_from_str("1.0 100").is_err());
    }

    #[test]
    fn load_interaction_constant_power() {
        let s = LoadSample::<f64> { p: 1000.0, p_dot: 0.0, p_ddot: 0.0 };
        let r = load_interaction(&s, 80.0, 0.0, true).unwrap();
        assert_eq!(r.p, 1000.0);
        assert_eq!(r.qdot, 0.0);
        assert_eq!(r.p_t, 0.0);
    }

    #[test]
    fn load_interaction_qdot_closed_form() {
        // For (e, f) = (v, P/v): Qdot = Pdot - 2 P vdot / v, checked against
        // a finite-difference of the pair along synthetic linear trajectories.
        let cases = [
            (75.0, 12.0, 1000.0, -300.0),
            (82.0, -5.0, 1400.0, 150.0),
            (60.0, 0.3, 800.0, 0.0),
            (90.0, 40.0, 2000.0, 900.0),
            (79.0, 20.86, 1000.0, 0.0),
        ];
        for (v, vd, p, pd) in cases {
            let s = LoadSample::<f64> { p, p_dot: pd, p_ddot: 0.0 };
            let r = load_interaction(&s, v, vd, true).unwrap();
            let closed = pd - 2.0 * p * vd / v;
            assert!((r.qdot - closed).abs() <= 1e-9 * (1.0 + closed.abs()));

            let h = 1e-6;
            let e = |t: f64| v + vd * t;
            let f = |t: f64| (p + pd * t) / (v + vd * t);
            let fd_e = (e(h) - e(-h)) / (2.0 * h);
            let fd_f = (f(h) - f(-h)) / (2.0 * h);
            let qdot_fd = e(0.0) * fd_f - f(0.0) * fd_e;
            assert!((r.qdot - qdot_fd).abs() <= 1e-5 * (1.0 + qdot_fd.abs()));
        }
    }

    #[test]
    fn load_interaction_frequency_bus() {
        // (e, f) = (P/omega, omega) reports P exactly as well.
        let s = LoadSample::<f64> { p: 1500.0, p_dot: 120.0, p_ddot: 0.0 };
        let r = load_interaction(&s, 377.0, -0.4, false).unwrap();
        assert!((r.p - 1500.0).abs() < 1e-12);
        // Qdot = e fdot - f edot = 2 P wdot / omega - Pdot.
        let closed = 2.0 * 1500.0 * (-0.4) / 377.0 - 120.0;
        assert!((r.qdot - closed).abs() <= 1e-9 * closed.abs());
    }

    #[test]
    fn load_interaction_zero_coupling_rejected() {
        let s = LoadSample::<f64> { p: 1000.0, p_dot: 0.0, p_ddot: 0.0 };
        assert!(load_interaction(&s, 0.0, 0.0, true).is_err());
    }
}
