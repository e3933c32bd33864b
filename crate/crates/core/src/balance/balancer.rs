use libm::sqrt;

use super::{BalancePoint, BalanceSubroutine, Decision};
use crate::{Error, Result};

/// The balancing subroutine.
///
/// Keeps a scalar `x` in `[0, √T]` and answers yes with probability
/// `p = x / √T`. After the point is revealed it is written as
/// `c_up·up + c_right·right + c_left·left` and `x` moves by
/// `(1 - 2p)·c_up + c_right - c_left`, then is capped back into `[0, √T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Balancer {
    x: f64,
    horizon: u64,
    sqrt_t: f64,
}

impl Balancer {
    pub fn new(horizon: u64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Config("balancer horizon must be at least 1".into()));
        }
        let sqrt_t = sqrt(horizon as f64);
        Ok(Self { x: sqrt_t / 2.0, horizon, sqrt_t })
    }

    /// Starts from a given `x` instead of `√T / 2`.
    pub fn with_x(horizon: u64, x: f64) -> Result<Self> {
        let mut b = Self::new(horizon)?;
        if !(0.0..=b.sqrt_t).contains(&x) {
            return Err(Error::Domain { x, upper: b.sqrt_t });
        }
        b.x = x;
        Ok(b)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn sqrt_t(&self) -> f64 {
        self.sqrt_t
    }

    pub fn probability(&self) -> f64 {
        (self.x / self.sqrt_t).clamp(0.0, 1.0)
    }
}

impl BalanceSubroutine for Balancer {
    fn decide(&mut self, coin: f64) -> Decision {
        Decision::draw(self.probability(), coin)
    }

    fn observe(&mut self, point: BalancePoint) {
        // x has not moved since `decide`, so this is the p the decision used.
        let p = self.probability();
        let w = point.weights();
        let moved = self.x + (1.0 - 2.0 * p) * w.up + w.right - w.left;
        self.x = moved.clamp(0.0, self.sqrt_t);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn up_at_midpoint_leaves_x() {
        let mut b = Balancer::new(100).unwrap();
        let d = b.step(BalancePoint::UP, 0.3);
        assert_eq!(d.p_used, 0.5);
        assert!(d.chose_yes);
        assert_eq!(b.x(), 5.0);
    }

    #[test]
    fn caps_at_lower_boundary() {
        let mut b = Balancer::with_x(100, 0.0).unwrap();
        let d = b.step(BalancePoint::LEFT, 0.0);
        assert_eq!(d, Decision { chose_yes: false, p_used: 0.0 });
        assert_eq!(b.x(), 0.0);
    }

    #[test]
    fn caps_at_upper_boundary() {
        let mut b = Balancer::with_x(100, 10.0).unwrap();
        let d = b.step(BalancePoint::RIGHT, 0.999_999_9);
        assert_eq!(d, Decision { chose_yes: true, p_used: 1.0 });
        assert_eq!(b.x(), 10.0);
    }

    #[test]
    fn right_moves_up_by_one() {
        let mut b = Balancer::new(100).unwrap();
        b.step(BalancePoint::RIGHT, 0.5);
        assert_eq!(b.x(), 6.0);
        b.step(BalancePoint::LEFT, 0.5);
        b.step(BalancePoint::LEFT, 0.5);
        assert_eq!(b.x(), 4.0);
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(Balancer::new(0).is_err());
        assert!(matches!(Balancer::with_x(4, 2.5), Err(Error::Domain { .. })));
    }

    proptest::proptest! {
        #[test]
        fn x_stays_in_range(seed in proptest::num::u64::ANY, horizon in 1u64..500) {
            let mut rng = crate::seed::rng_from_seed(seed);
            let mut b = Balancer::new(horizon).unwrap();
            for _ in 0..horizon {
                let alpha = rng.gen_range(-1.0..=1.0);
                let beta = rng.gen_range(-alpha..=1.0f64);
                b.step(BalancePoint::new(alpha, beta).unwrap(), rng.gen());
                proptest::prop_assert!(b.x() >= 0.0 && b.x() <= b.sqrt_t());
            }
        }
    }
}
