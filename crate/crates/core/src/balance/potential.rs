//! Potential functions for the balancer's regret analysis.
//!
//! With `s = √T` and `x ∈ [0, s]`:
//!
//! * `phi_alg(x) = s/8 - (2x - s)^2 / (8s)`, maximal at `x = s/2`;
//! * `phi_yes(x) = (s - x)^2 / (2s)`, minimal at `x = s`;
//! * `phi_no(x) = x^2 / (2s)`, minimal at `x = 0`.
//!
//! Adding them to `r_alg`, `c_yes` and `c_no` respectively, the expected
//! one-round gain of the algorithm's sum dominates each adversary sum up to
//! `O(1/√T)`; [`step_invariant_deltas`] computes those gains exactly.

use libm::sqrt;

use super::{BalancePoint, Balancer, BalanceSubroutine};
use crate::{Error, Result, TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potentials {
    pub alg: f64,
    pub yes: f64,
    pub no: f64,
}

fn closed_forms(x: f64, s: f64) -> Potentials {
    let d = 2.0 * x - s;
    Potentials {
        alg: s / 8.0 - d * d / (8.0 * s),
        yes: (s - x) * (s - x) / (2.0 * s),
        no: x * x / (2.0 * s),
    }
}

pub fn potentials(x: f64, horizon: u64) -> Result<Potentials> {
    if horizon == 0 {
        return Err(Error::Config("horizon must be at least 1".into()));
    }
    let s = sqrt(horizon as f64);
    if !(x >= -TOLERANCE && x <= s + TOLERANCE) {
        return Err(Error::Domain { x, upper: s });
    }
    Ok(closed_forms(x.clamp(0.0, s), s))
}

/// Expected one-round changes of `r_alg + phi_alg`, `c_yes + phi_yes` and
/// `c_no + phi_no`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantDeltas {
    pub alg: f64,
    pub yes: f64,
    pub no: f64,
    /// `2 / √T`.
    pub slack: f64,
}

impl InvariantDeltas {
    /// `alg >= max(yes, no) - 2/√T`.
    pub fn holds(&self) -> bool {
        self.alg >= self.yes.max(self.no) - self.slack
    }

    pub fn margin(&self) -> f64 {
        self.alg - self.yes.max(self.no) + self.slack
    }
}

/// Exact expected changes for a balancer at `x = p·√T` answering one round
/// against `point`: yes with probability `p`, then the update and cap.
pub fn step_invariant_deltas(p: f64, point: BalancePoint, horizon: u64) -> Result<InvariantDeltas> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain { x: p, upper: 1.0 });
    }
    let s = sqrt(horizon as f64);
    let mut balancer = Balancer::with_x(horizon, (p * s).min(s))?;
    let before = closed_forms(balancer.x(), s);
    balancer.observe(point);
    let after = closed_forms(balancer.x(), s);

    let (a, b) = (point.alpha(), point.beta());
    let reward = p * a / 2.0 + (1.0 - p) * b / 2.0;
    let c_yes = (1.0 - p) * a;
    let c_no = p * b;
    Ok(InvariantDeltas {
        alg: reward + after.alg - before.alg,
        yes: c_yes + after.yes - before.yes,
        no: c_no + after.no - before.no,
        slack: 2.0 / s,
    })
}
