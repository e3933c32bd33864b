//! The balance game: each round a subroutine answers yes/no, then an
//! adversary reveals a point `(alpha, beta)` in the triangle spanned by
//! up `(1, 1)`, right `(1, -1)` and left `(-1, 1)`.
//!
//! Choosing yes earns `alpha / 2` and adds `beta` to the "no" pile of missed
//! opportunity; choosing no earns `beta / 2` and adds `alpha` to the "yes"
//! pile. The a-regret of a run is `a * max(c_yes, c_no) - r_alg`.

mod balancer;
mod doubling;
mod experts;
mod point;
mod potential;

pub use balancer::Balancer;
pub use doubling::Doubling;
pub use experts::TwoExperts;
pub use point::{decompose, BalancePoint, ConvexWeights, Extremal, POINT_SLACK};
pub use potential::{potentials, step_invariant_deltas, InvariantDeltas, Potentials};

use alloc::boxed::Box;
use core::fmt;
use core::str::FromStr;

use crate::Error;

/// One yes/no answer and the probability of "yes" it was drawn with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub chose_yes: bool,
    pub p_used: f64,
}

impl Decision {
    /// Draws yes iff `coin < p`.
    pub fn draw(p: f64, coin: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&p), "probability {p} outside [0, 1]");
        Self { chose_yes: coin < p, p_used: p }
    }
}

/// A binary-action online learner for the balance game.
///
/// Every round the caller invokes [`decide`](Self::decide) with exactly one
/// uniform draw from `[0, 1)` and then [`observe`](Self::observe) with the
/// revealed point.
pub trait BalanceSubroutine {
    fn decide(&mut self, coin: f64) -> Decision;
    fn observe(&mut self, point: BalancePoint);

    /// `decide` followed by `observe`, for callers that already hold the point.
    fn step(&mut self, point: BalancePoint, coin: f64) -> Decision {
        let d = self.decide(coin);
        self.observe(point);
        d
    }
}

impl<S: BalanceSubroutine + ?Sized> BalanceSubroutine for alloc::boxed::Box<S> {
    fn decide(&mut self, coin: f64) -> Decision {
        (**self).decide(coin)
    }
    fn observe(&mut self, point: BalancePoint) {
        (**self).observe(point)
    }
}

/// Yes with a fixed probability, ignoring feedback. Probability ½ is the
/// uniform-random baseline; 1 and 0 are the always-yes / always-no stubs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedProbability(pub f64);

impl FixedProbability {
    pub const UNIFORM: Self = Self(0.5);
    pub const ALWAYS_YES: Self = Self(1.0);
    pub const ALWAYS_NO: Self = Self(0.0);
}

impl BalanceSubroutine for FixedProbability {
    fn decide(&mut self, coin: f64) -> Decision {
        Decision::draw(self.0, coin)
    }
    fn observe(&mut self, _: BalancePoint) {}
}

/// Named subroutines buildable for a known horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubroutineKind {
    Balancer,
    Mw,
    Uniform,
    AlwaysYes,
    AlwaysNo,
    /// Balancer behind the horizon-doubling wrapper.
    BalancerDoubling,
    /// Multiplicative weights behind the horizon-doubling wrapper.
    MwDoubling,
}

impl SubroutineKind {
    pub const ALL: [SubroutineKind; 7] = [
        SubroutineKind::Balancer,
        SubroutineKind::Mw,
        SubroutineKind::Uniform,
        SubroutineKind::AlwaysYes,
        SubroutineKind::AlwaysNo,
        SubroutineKind::BalancerDoubling,
        SubroutineKind::MwDoubling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SubroutineKind::Balancer => "balancer",
            SubroutineKind::Mw => "mw",
            SubroutineKind::Uniform => "uniform",
            SubroutineKind::AlwaysYes => "always-yes",
            SubroutineKind::AlwaysNo => "always-no",
            SubroutineKind::BalancerDoubling => "balancer-doubling",
            SubroutineKind::MwDoubling => "mw-doubling",
        }
    }

    /// A fresh instance for a run of `horizon` rounds. Doubling variants
    /// ignore the horizon.
    pub fn build(self, horizon: u64) -> crate::Result<Box<dyn BalanceSubroutine + Send>> {
        Ok(match self {
            SubroutineKind::Balancer => Box::new(Balancer::new(horizon)?),
            SubroutineKind::Mw => Box::new(TwoExperts::new(horizon)?),
            SubroutineKind::Uniform => Box::new(FixedProbability::UNIFORM),
            SubroutineKind::AlwaysYes => Box::new(FixedProbability::ALWAYS_YES),
            SubroutineKind::AlwaysNo => Box::new(FixedProbability::ALWAYS_NO),
            SubroutineKind::BalancerDoubling => {
                Box::new(Doubling::new(|t| Balancer::new(t).expect("guess is at least 1")))
            }
            SubroutineKind::MwDoubling => {
                Box::new(Doubling::new(|t| TwoExperts::new(t).expect("guess is at least 1")))
            }
        })
    }
}

impl FromStr for SubroutineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::Config(alloc::format!(
                "unknown subroutine {s:?}, expected one of balancer, mw, uniform, always-yes, always-no, balancer-doubling, mw-doubling"
            ))
        })
    }
}

impl fmt::Display for SubroutineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Running totals of one balance-game run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Ledger {
    pub r_alg: f64,
    pub c_yes: f64,
    pub c_no: f64,
    pub rounds: u64,
}

impl Ledger {
    pub fn update(&mut self, decision: Decision, point: BalancePoint) {
        if decision.chose_yes {
            self.r_alg += 0.5 * point.alpha();
            self.c_no += point.beta();
        } else {
            self.r_alg += 0.5 * point.beta();
            self.c_yes += point.alpha();
        }
        self.rounds += 1;
    }

    /// `a * max(c_yes, c_no) - r_alg`.
    pub fn alpha_regret(&self, a: f64) -> f64 {
        balance_alpha_regret(self, a)
    }
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} r_alg={} c_yes={} c_no={}", self.rounds, self.r_alg, self.c_yes, self.c_no)
    }
}

pub fn balance_alpha_regret(ledger: &Ledger, a: f64) -> f64 {
    a * ledger.c_yes.max(ledger.c_no) - ledger.r_alg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yes() -> Decision {
        Decision { chose_yes: true, p_used: 1.0 }
    }
    fn no() -> Decision {
        Decision { chose_yes: false, p_used: 0.0 }
    }

    #[test]
    fn ledger_yes_on_right() {
        let mut l = Ledger::default();
        l.update(yes(), Extremal::Right.point());
        assert_eq!((l.r_alg, l.c_yes, l.c_no), (0.5, 0.0, -1.0));
    }

    #[test]
    fn ledger_no_on_right() {
        let mut l = Ledger::default();
        l.update(no(), Extremal::Right.point());
        assert_eq!((l.r_alg, l.c_yes, l.c_no), (-0.5, 1.0, 0.0));
    }

    #[test]
    fn ledger_zero_point() {
        let zero = BalancePoint::new(0.0, 0.0).unwrap();
        for d in [yes(), no()] {
            let mut l = Ledger::default();
            l.update(d, zero);
            assert_eq!((l.r_alg, l.c_yes, l.c_no), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn alpha_regret_formula() {
        let l = |r_alg, c_yes, c_no| Ledger { r_alg, c_yes, c_no, rounds: 0 };
        assert_eq!(l(1.0, 2.0, 0.0).alpha_regret(1.0), 1.0);
        assert_eq!(Ledger::default().alpha_regret(1.0), 0.0);
        assert_eq!(l(0.0, 4.0, 6.0).alpha_regret(0.5), 3.0);
    }

    #[test]
    fn fixed_probability_stubs() {
        let pt = Extremal::Up.point();
        let (mut yes, mut no, mut uniform) =
            (FixedProbability::ALWAYS_YES, FixedProbability::ALWAYS_NO, FixedProbability::UNIFORM);
        assert!(yes.step(pt, 0.999_999).chose_yes);
        assert!(!no.step(pt, 0.0).chose_yes);
        assert!(uniform.decide(0.49).chose_yes);
        assert!(!uniform.decide(0.5).chose_yes);
    }

    #[test]
    fn kinds_round_trip() {
        for k in SubroutineKind::ALL {
            assert_eq!(k.name().parse::<SubroutineKind>().unwrap(), k);
            k.build(10).unwrap().step(Extremal::Up.point(), 0.5);
        }
        assert!("hedge".parse::<SubroutineKind>().is_err());
    }

    proptest::proptest! {
        #[test]
        fn reward_stays_within_half_t(
            moves in proptest::collection::vec((-1.0f64..=1.0, 0.0f64..=1.0, proptest::bool::ANY), 1..200)
        ) {
            let mut l = Ledger::default();
            for (t, &(alpha, s, yes)) in moves.iter().enumerate() {
                // beta in [-alpha, 1] keeps the point in the triangle.
                let beta = -alpha + s * (1.0 + alpha);
                let pt = BalancePoint::new(alpha, beta.min(1.0)).unwrap();
                l.update(Decision { chose_yes: yes, p_used: 0.5 }, pt);
                let t = (t + 1) as f64;
                proptest::prop_assert!(l.r_alg.abs() <= t / 2.0 + 1e-12);
                proptest::prop_assert!(l.c_yes.abs() <= t + 1e-12 && l.c_no.abs() <= t + 1e-12);
            }
        }
    }
}
