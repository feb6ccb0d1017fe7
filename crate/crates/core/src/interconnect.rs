//! Distributed-communication layer: components coupled on a shared bus
//! exchange their port interaction rates once per step, optionally through a
//! delay line, and the exogenous channel `zdot^m` absorbs whatever the
//! controller's view of its neighbors gets wrong.

use crate::energy::InteractionRate;
use crate::scalar::Real;

/// The physical variable a coupling shares between its members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharedVariable {
    BusVoltage,
    BusFrequency,
}

/// A coupling of N members on one shared variable. Exactly one member (the
/// storage owner) determines the shared variable's dynamics; per-member
/// orientations are +1 for power flowing into the member, so exact exchange
/// satisfies the sum-zero constraint by construction.
#[derive(Debug, Clone)]
pub struct Coupling {
    pub shared: SharedVariable,
    pub member_ids: Vec<usize>,
    pub orientations: Vec<i8>,
    pub storage_owner: usize,
}

impl Coupling {
    pub fn two_member(shared: SharedVariable) -> Self {
        Self {
            shared,
            member_ids: vec![0, 1],
            orientations: vec![1, 1],
            storage_owner: 0,
        }
    }
}

/// Per-recipient delay line of published interaction rates.
///
/// Delivery at step `k` hands out the payload published at step `k - delay`;
/// the line is pre-seeded with the step-0 payload so early deliveries are
/// defined. No loss, no reordering.
#[derive(Debug, Clone)]
pub struct Mailbox<T> {
    delay_steps: usize,
    buffer: Vec<InteractionRate<T>>,
    head: usize,
    seeded: bool,
    latest: InteractionRate<T>,
    latest_step: usize,
}

impl<T: Real> Mailbox<T> {
    pub fn new(delay_steps: usize) -> Self {
        Self {
            delay_steps,
            buffer: vec![InteractionRate::zero(); delay_steps + 1],
            head: 0,
            seeded: false,
            latest: InteractionRate::zero(),
            latest_step: 0,
        }
    }

    pub fn delay_steps(&self) -> usize {
        self.delay_steps
    }

    /// Publish the sender's rate for step `k` and return the delivered
    /// payload (the rate from `delay` steps earlier).
    pub fn exchange(&mut self, step: usize, outgoing: InteractionRate<T>) -> InteractionRate<T> {
        if !self.seeded {
            self.buffer.fill(outgoing);
            self.seeded = true;
        }
        self.buffer[self.head] = outgoing;
        self.head = (self.head + 1) % self.buffer.len();
        // After the rotation, head points at the oldest entry: step - delay.
        self.latest = self.buffer[self.head];
        self.latest_step = step.saturating_sub(self.delay_steps);
        self.latest
    }

    /// Most recently delivered payload (zero-order hold between exchanges).
    pub fn held(&self) -> InteractionRate<T> {
        self.latest
    }

    /// Step index the held payload was published at.
    pub fn held_step(&self) -> usize {
        self.latest_step
    }
}

/// Own port rate from the received neighbor rates via the sum-zero
/// constraint: `zdot_i^r = -sum_j zdot_j^r`.
pub fn own_port_rate<T: Real>(neighbor_rates: &[InteractionRate<T>]) -> InteractionRate<T> {
    -neighbor_rates
        .iter()
        .fold(InteractionRate::zero(), |acc, r| acc + *r)
}

/// Generator of the exogenous interaction rate `zdot^m`.
///
/// The configured modes corrupt the controller's view of its neighbors (the
/// controllers never see the channel itself); `Implicit` is the bookkeeping
/// mode in which the channel equals whatever mismatch the delay line already
/// created between true and held neighbor rates.
#[derive(Debug, Clone, PartialEq)]
pub enum DisturbanceChannel<T> {
    Zero,
    /// Sinusoidal rate on each component: `amp_* sin(freq t)`.
    Sine {
        amp_p: T,
        amp_qdot: T,
        amp_pt: T,
        freq: T,
    },
    /// `Qdot^m = coeff * K2 * (p - p_ref)` with the controller's own rate
    /// gain; `|coeff| <= 1` keeps the FBLC disturbance condition satisfied,
    /// `coeff < -1` violates it and destabilizes the error dynamics.
    ProportionalPError { coeff: T },
    /// Channel equals the delay-induced residual `held - true`; nothing is
    /// injected beyond what the mailbox already held.
    Implicit,
}

/// Context available to the disturbance generator at evaluation time.
#[derive(Debug, Clone, Copy)]
pub struct DisturbanceContext<T> {
    pub t: T,
    /// `p - p_ref` of the component under control.
    pub p_error: T,
    /// Rate-error gain of the active controller (`K2` for the FBLC); zero
    /// for controllers without one.
    pub rate_gain: T,
    /// `held - true` neighbor-rate residual from the delay line.
    pub delay_residual: InteractionRate<T>,
}

/// Sample the channel. The returned triple is what the certificate monitors
/// treat as `zdot^m`; injected modes additionally corrupt the controller's
/// neighbor term by the same amount.
pub fn disturbance_rate<T: Real>(
    channel: &DisturbanceChannel<T>,
    ctx: &DisturbanceContext<T>,
) -> InteractionRate<T> {
    match channel {
        DisturbanceChannel::Zero => InteractionRate::zero(),
        DisturbanceChannel::Sine { amp_p, amp_qdot, amp_pt, freq } => {
            let s = (*freq * ctx.t).sin();
            InteractionRate::new(*amp_p * s, *amp_qdot * s, *amp_pt * s)
        }
        DisturbanceChannel::ProportionalPError { coeff } => {
            InteractionRate::new(T::zero(), *coeff * ctx.rate_gain * ctx.p_error, T::zero())
        }
        DisturbanceChannel::Implicit => ctx.delay_residual,
    }
}

/// Whether a channel injects a rate on top of the delay residual.
pub fn channel_injects<T: Real>(channel: &DisturbanceChannel<T>) -> bool {
    !matches!(
        channel,
        DisturbanceChannel::Zero | DisturbanceChannel::Implicit
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mailbox_zero_delay_is_identity() {
        let mut mb = Mailbox::new(0);
        for k in 0..5 {
            let sent = InteractionRate::new(k as f64, -(k as f64), 0.5 * k as f64);
            let got = mb.exchange(k, sent);
            assert_eq!(got, sent);
            assert_eq!(mb.held_step(), k);
        }
    }

    #[test]
    fn mailbox_two_step_delay() {
        let mut mb = Mailbox::new(2);
        let rate = |k: usize| InteractionRate::new(k as f64, 0.0, 0.0);
        // Seeded with the first payload until real traffic ages in.
        assert_eq!(mb.exchange(0, rate(10)), rate(10));
        assert_eq!(mb.exchange(1, rate(11)), rate(10));
        assert_eq!(mb.exchange(2, rate(12)), rate(10));
        assert_eq!(mb.exchange(3, rate(13)), rate(11));
        assert_eq!(mb.exchange(4, rate(14)), rate(12));
        assert_eq!(mb.held(), rate(12));
        assert_eq!(mb.held_step(), 2);
    }

    #[test]
    fn own_rate_single_neighbor() {
        let own = own_port_rate(&[InteractionRate::new(1000.0, 0.0, 0.0)]);
        assert_eq!(own, InteractionRate::new(-1000.0, 0.0, 0.0));
    }

    #[test]
    fn own_rate_isolated_component() {
        let own = own_port_rate::<f64>(&[]);
        assert_eq!(own, InteractionRate::zero());
    }

    #[test]
    fn own_rate_three_member_star() {
        let a = InteractionRate::new(700.0, 12.0, -3.0);
        let b = InteractionRate::new(-150.0, 4.5, 0.25);
        let own = own_port_rate(&[a, b]);
        // Brute-force componentwise sum.
        assert_eq!(own.p, -(700.0 - 150.0));
        assert_eq!(own.qdot, -(12.0 + 4.5));
        assert_eq!(own.p_t, -(-3.0 + 0.25));
        // And it closes the sum-zero constraint exactly.
        let res = crate::energy::tellegen_residual(&[a, b], &own);
        assert_eq!((res.p, res.qdot, res.p_t), (0.0, 0.0, 0.0));
    }

    #[test]
    fn disturbance_modes() {
        let ctx = DisturbanceContext {
            t: std::f64::consts::FRAC_PI_2,
            p_error: -2.0,
            rate_gain: 10.0,
            delay_residual: InteractionRate::new(1.0, 2.0, 3.0),
        };
        assert_eq!(disturbance_rate(&DisturbanceChannel::Zero, &ctx), InteractionRate::zero());

        let sine = DisturbanceChannel::Sine { amp_p: 0.0, amp_qdot: 0.5, amp_pt: 0.0, freq: 1.0 };
        let r = disturbance_rate(&sine, &ctx);
        assert!((r.qdot - 0.5).abs() < 1e-12);

        let prop = DisturbanceChannel::ProportionalPError { coeff: -2.0 };
        let r = disturbance_rate(&prop, &ctx);
        assert!((r.qdot - (-2.0 * 10.0 * -2.0)).abs() < 1e-12);

        let r = disturbance_rate(&DisturbanceChannel::Implicit, &ctx);
        assert_eq!(r, ctx.delay_residual);
    }
}
