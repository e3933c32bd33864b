use core::fmt;

use super::{BalancePoint, BalanceSubroutine, Decision};

/// Runs a horizon-aware subroutine without knowing the horizon.
///
/// Starts with the guess `T = 1`. When round `t` exceeds the current guess,
/// the guess doubles and the inner subroutine is rebuilt from scratch, so
/// the epoch with guess `2^k` covers rounds `2^(k-1) + 1 ..= 2^k`.
pub struct Doubling<S, F> {
    factory: F,
    inner: S,
    guess: u64,
    rounds: u64,
    restarts: u32,
}

impl<S, F: FnMut(u64) -> S> Doubling<S, F> {
    pub fn new(mut factory: F) -> Self {
        let inner = factory(1);
        Self { factory, inner, guess: 1, rounds: 0, restarts: 0 }
    }

    pub fn guess(&self) -> u64 {
        self.guess
    }

    pub fn restarts(&self) -> u32 {
        self.restarts
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }
}

impl<S: BalanceSubroutine, F: FnMut(u64) -> S> BalanceSubroutine for Doubling<S, F> {
    fn decide(&mut self, coin: f64) -> Decision {
        if self.rounds >= self.guess {
            self.guess *= 2;
            self.inner = (self.factory)(self.guess);
            self.restarts += 1;
        }
        self.rounds += 1;
        self.inner.decide(coin)
    }

    fn observe(&mut self, point: BalancePoint) {
        self.inner.observe(point);
    }
}

impl<S: fmt::Debug, F> fmt::Debug for Doubling<S, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Doubling")
            .field("inner", &self.inner)
            .field("guess", &self.guess)
            .field("rounds", &self.rounds)
            .field("restarts", &self.restarts)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balance::{Balancer, Extremal};
    use alloc::vec::Vec;
    use rand::Rng;

    fn balancer_doubling() -> Doubling<Balancer, impl FnMut(u64) -> Balancer> {
        Doubling::new(|t| Balancer::new(t).unwrap())
    }

    #[test]
    fn second_round_restarts_with_two() {
        let mut d = balancer_doubling();
        d.step(BalancePoint::UP, 0.5);
        assert_eq!((d.guess(), d.restarts()), (1, 0));
        d.step(BalancePoint::UP, 0.5);
        assert_eq!((d.guess(), d.restarts()), (2, 1));
    }

    #[test]
    fn restarts_are_ceil_log2() {
        for total in 1u64..=70 {
            let mut d = balancer_doubling();
            for _ in 0..total {
                d.step(BalancePoint::RIGHT, 0.5);
            }
            // Epoch count by direct arithmetic: guesses 1, 2, 4, .. until >= total.
            let mut guess = 1u64;
            let mut expected = 0u32;
            while guess < total {
                guess *= 2;
                expected += 1;
            }
            assert_eq!(d.restarts(), expected, "T = {total}");
            assert_eq!(u64::from(d.restarts()), (total as f64).log2().ceil() as u64);
        }
    }

    #[test]
    fn final_epoch_matches_fresh_balancer() {
        // T = 64: the last epoch (rounds 33..=64) runs a fresh Balancer(64).
        let total = 64u64;
        let mut rng = crate::seed::rng_from_seed(9);
        let points: Vec<BalancePoint> =
            (0..total).map(|_| Extremal::ALL[rng.gen_range(0..3)].point()).collect();
        let coins: Vec<f64> = (0..total).map(|_| rng.gen()).collect();

        let mut d = balancer_doubling();
        let mut epoch_start = 0;
        let mut decisions = Vec::new();
        for t in 0..total as usize {
            let before = d.restarts();
            decisions.push(d.step(points[t], coins[t]));
            if d.restarts() != before {
                epoch_start = t;
            }
        }
        assert_eq!(epoch_start, 32);
        assert_eq!(d.guess(), 64);

        let mut fresh = Balancer::new(64).unwrap();
        for t in 32..64 {
            assert_eq!(fresh.step(points[t], coins[t]), decisions[t]);
        }
    }
}
