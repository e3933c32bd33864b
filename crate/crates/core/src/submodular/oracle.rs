use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

use super::{GroundSet, Subset};
use crate::{Error, Result};

/// A set function `2^[n] -> R`, evaluated without any accounting.
///
/// Implementations must be deterministic. Functions fed to the online
/// framework are expected to map into `[0, 1]`.
pub trait SetFunction {
    fn ground(&self) -> GroundSet;
    fn value(&self, s: Subset) -> f64;
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn ground(&self) -> GroundSet {
        (**self).ground()
    }
    fn value(&self, s: Subset) -> f64 {
        (**self).value(s)
    }
}

impl<F: SetFunction + ?Sized> SetFunction for Arc<F> {
    fn ground(&self) -> GroundSet {
        (**self).ground()
    }
    fn value(&self, s: Subset) -> f64 {
        (**self).value(s)
    }
}

impl<F: SetFunction + ?Sized> SetFunction for alloc::boxed::Box<F> {
    fn ground(&self) -> GroundSet {
        (**self).ground()
    }
    fn value(&self, s: Subset) -> f64 {
        (**self).value(s)
    }
}

/// Value-query access to a set function with a query counter.
///
/// The oracle never caches: every [`Oracle::evaluate`] call reaches the
/// function and bumps the counter by one. The counter is atomic so a shared
/// oracle can serve concurrent read-only evaluations.
pub struct Oracle<F> {
    function: F,
    queries: AtomicU64,
}

impl<F: SetFunction> Oracle<F> {
    pub fn new(function: F) -> Self {
        Self { function, queries: AtomicU64::new(0) }
    }

    pub fn ground(&self) -> GroundSet {
        self.function.ground()
    }

    pub fn evaluate(&self, s: Subset) -> Result<f64> {
        self.function.ground().check(s)?;
        self.queries.fetch_add(1, Ordering::Relaxed);
        Ok(self.function.value(s))
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset_queries(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    /// The wrapped function. Reads through it are not counted; use it for
    /// ground-truth bookkeeping, never inside an algorithm.
    pub fn function(&self) -> &F {
        &self.function
    }

    /// Same function, counter at zero.
    pub fn fresh(&self) -> Self
    where
        F: Clone,
    {
        Self::new(self.function.clone())
    }
}

impl<F: Clone> Clone for Oracle<F> {
    fn clone(&self) -> Self {
        Self {
            function: self.function.clone(),
            queries: AtomicU64::new(self.queries.load(Ordering::Relaxed)),
        }
    }
}

impl<F: fmt::Debug> fmt::Debug for Oracle<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle")
            .field("function", &self.function)
            .field("queries", &self.queries.load(Ordering::Relaxed))
            .finish()
    }
}

/// A set function given by a closure.
#[derive(Clone)]
pub struct FnSet<G> {
    ground: GroundSet,
    f: G,
}

impl<G: Fn(Subset) -> f64> FnSet<G> {
    pub fn new(ground: GroundSet, f: G) -> Self {
        Self { ground, f }
    }
}

impl<G: Fn(Subset) -> f64> SetFunction for FnSet<G> {
    fn ground(&self) -> GroundSet {
        self.ground
    }
    fn value(&self, s: Subset) -> f64 {
        (self.f)(s)
    }
}

impl<G> fmt::Debug for FnSet<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnSet").field("ground", &self.ground).finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant {
    pub ground: GroundSet,
    pub value: f64,
}

impl SetFunction for Constant {
    fn ground(&self) -> GroundSet {
        self.ground
    }
    fn value(&self, _: Subset) -> f64 {
        self.value
    }
}

/// `f(S) = sum of weights[i - 1] over i in S`.
#[derive(Debug, Clone, PartialEq)]
pub struct Modular {
    ground: GroundSet,
    weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let ground = GroundSet::new(weights.len() as u32)?;
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidInstance("modular weights must be finite".into()));
        }
        Ok(Self { ground, weights })
    }
}

impl SetFunction for Modular {
    fn ground(&self) -> GroundSet {
        self.ground
    }
    fn value(&self, s: Subset) -> f64 {
        s.iter().map(|i| self.weights[i as usize - 1]).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counter_counts_every_call() {
        let g = GroundSet::new(3).unwrap();
        let o = Oracle::new(Constant { ground: g, value: 0.25 });
        assert_eq!(o.queries(), 0);
        for k in 1..=5u64 {
            assert_eq!(o.evaluate(Subset(0b101)).unwrap(), 0.25);
            assert_eq!(o.queries(), k);
        }
    }

    #[test]
    fn out_of_range_is_rejected_and_not_counted() {
        let g = GroundSet::new(2).unwrap();
        let o = Oracle::new(Constant { ground: g, value: 0.0 });
        assert_eq!(o.evaluate(Subset(0b100)), Err(Error::InvalidSubset { element: 3, n: 2 }));
        assert_eq!(o.queries(), 0);
    }

    #[test]
    fn fresh_resets_counter() {
        let g = GroundSet::new(2).unwrap();
        let o = Oracle::new(Constant { ground: g, value: 0.0 });
        o.evaluate(Subset::EMPTY).unwrap();
        assert_eq!(o.clone().queries(), 1);
        assert_eq!(o.fresh().queries(), 0);
    }
}
