//! Fixed-step classical RK4 over slice-valued states.

use crate::error::CoreError;
use crate::scalar::{cast, Real};

/// Reusable RK4 stepper; owns its stage buffers so stepping never allocates.
#[derive(Debug, Clone)]
pub struct Rk4<T> {
    k1: Vec<T>,
    k2: Vec<T>,
    k3: Vec<T>,
    k4: Vec<T>,
    tmp: Vec<T>,
}

impl<T: Real> Rk4<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            k1: vec![T::zero(); dim],
            k2: vec![T::zero(); dim],
            k3: vec![T::zero(); dim],
            k4: vec![T::zero(); dim],
            tmp: vec![T::zero(); dim],
        }
    }

    /// One classical 4th-order step of size `h`, advancing `y` in place.
    ///
    /// `rhs(t, y, dy)` fills the derivative; a non-finite stage value aborts
    /// with the stage index (1..=4).
    pub fn step<F>(&mut self, t: T, h: T, y: &mut [T], mut rhs: F) -> Result<(), CoreError>
    where
        F: FnMut(T, &[T], &mut [T]) -> Result<(), CoreError>,
    {
        let half = cast::<T>(0.5);
        let sixth = T::one() / cast::<T>(6.0);
        let two = cast::<T>(2.0);
        let n = y.len();

        rhs(t, y, &mut self.k1)?;
        Self::check(&self.k1, 1)?;

        for i in 0..n {
            self.tmp[i] = y[i] + half * h * self.k1[i];
        }
        rhs(t + half * h, &self.tmp, &mut self.k2)?;
        Self::check(&self.k2, 2)?;

        for i in 0..n {
            self.tmp[i] = y[i] + half * h * self.k2[i];
        }
        rhs(t + half * h, &self.tmp, &mut self.k3)?;
        Self::check(&self.k3, 3)?;

        for i in 0..n {
            self.tmp[i] = y[i] + h * self.k3[i];
        }
        rhs(t + h, &self.tmp, &mut self.k4)?;
        Self::check(&self.k4, 4)?;

        for i in 0..n {
            y[i] = y[i]
                + h * sixth * (self.k1[i] + two * self.k2[i] + two * self.k3[i] + self.k4[i]);
        }
        Ok(())
    }

    fn check(k: &[T], stage: usize) -> Result<(), CoreError> {
        if k.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(CoreError::Divergence { step: 0, stage })
        }
    }
}

/// Convenience single-shot step for small systems and tests.
pub fn rk4_step<T: Real, F>(t: T, h: T, y: &mut [T], rhs: F) -> Result<(), CoreError>
where
    F: FnMut(T, &[T], &mut [T]) -> Result<(), CoreError>,
{
    Rk4::new(y.len()).step(t, h, y, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_order() {
        // xdot = -x from 1.0 over h = 0.1: the RK4 polynomial gives
        // 0.9048375, the exact flow exp(-0.1) = 0.90483741...
        let mut y = [1.0f64];
        rk4_step(0.0, 0.1, &mut y, |_, x, d| {
            d[0] = -x[0];
            Ok(())
        })
        .unwrap();
        assert!((y[0] - 0.9048375).abs() < 1e-12);
        assert!((y[0] - (-0.1f64).exp()).abs() < 1e-7);
    }

    #[test]
    fn zero_rhs_keeps_state() {
        let mut y = [3.5, -1.25];
        rk4_step(0.0, 0.7, &mut y, |_, _, d| {
            d.fill(0.0);
            Ok(())
        })
        .unwrap();
        assert_eq!(y, [3.5, -1.25]);
    }

    #[test]
    fn linear_system_matches_truncated_matrix_exponential() {
        // One RK4 step on xdot = A x equals (I + hA + .. + (hA)^4/4!) x.
        let a = [[0.3, -1.2], [0.8, -0.5]];
        let x0 = [1.0, 2.0];
        let h = 0.05;

        let mut y = x0;
        rk4_step(0.0, h, &mut y, |_, x, d| {
            d[0] = a[0][0] * x[0] + a[0][1] * x[1];
            d[1] = a[1][0] * x[0] + a[1][1] * x[1];
            Ok(())
        })
        .unwrap();

        // Truncated series oracle.
        let matvec = |m: &[[f64; 2]; 2], v: &[f64; 2]| -> [f64; 2] {
            [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
        };
        let mut acc = x0;
        let mut term = x0;
        let mut factorial = 1.0;
        for k in 1..=4 {
            term = matvec(&a, &term);
            term = [term[0] * h, term[1] * h];
            factorial *= k as f64;
            acc[0] += term[0] / factorial;
            acc[1] += term[1] / factorial;
        }
        assert!((y[0] - acc[0]).abs() < 1e-14);
        assert!((y[1] - acc[1]).abs() < 1e-14);
    }

    #[test]
    fn non_finite_stage_reports_divergence() {
        let mut y = [1.0];
        let err = rk4_step(0.0, 0.1, &mut y, |_, x, d| {
            d[0] = if x[0] > 1.01 { f64::NAN } else { x[0] * 10.0 };
            Ok(())
        });
        match err {
            Err(CoreError::Divergence { stage, .. }) => assert!(stage >= 2),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn generic_f32_step() {
        let mut y = [1.0f32];
        rk4_step(0.0f32, 0.1, &mut y, |_, x, d| {
            d[0] = -x[0];
            Ok(())
        })
        .unwrap();
        assert!((y[0] - 0.9048375).abs() < 1e-6);
    }
}
