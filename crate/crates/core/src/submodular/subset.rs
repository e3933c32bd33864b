use core::fmt;

use crate::{Error, Result};

/// The universe `{1, .., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: u32,
}

impl GroundSet {
    /// Bitmask subsets cap the universe at 64 elements.
    pub const MAX_N: u32 = 64;

    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > Self::MAX_N {
            return Err(Error::InvalidInstance(alloc::format!(
                "ground set size must be in 1..={}, got {n}",
                Self::MAX_N
            )));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn contains(&self, s: Subset) -> bool {
        s.0 & !self.full().0 == 0
    }

    /// Errors with the first element of `s` outside the ground set.
    pub fn check(&self, s: Subset) -> Result<()> {
        let stray = s.0 & !self.full().0;
        if stray == 0 {
            Ok(())
        } else {
            Err(Error::InvalidSubset { element: stray.trailing_zeros() + 1, n: self.n })
        }
    }

    pub fn check_enumerable(&self, op: &'static str, max: u32) -> Result<()> {
        if self.n > max {
            Err(Error::TooLarge { op, n: self.n, max })
        } else {
            Ok(())
        }
    }

    /// All `2^n` subsets in increasing bitmask order.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        let end = if self.n >= 64 { u64::MAX } else { 1u64 << self.n };
        (0..end).map(Subset)
    }
}

/// A subset of `{1, .., 64}`; element `i` is bit `i - 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: u32) -> Self {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Self {
        elements.into_iter().fold(Subset::EMPTY, |s, i| s.with(i))
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    #[inline]
    fn bit(i: u32) -> u64 {
        debug_assert!((1..=64).contains(&i), "element {i} out of range");
        1u64 << (i - 1)
    }

    #[inline]
    pub fn contains(&self, i: u32) -> bool {
        self.0 & Self::bit(i) != 0
    }

    #[inline]
    #[must_use]
    pub fn with(self, i: u32) -> Self {
        Subset(self.0 | Self::bit(i))
    }

    #[inline]
    #[must_use]
    pub fn without(self, i: u32) -> Self {
        Subset(self.0 & !Self::bit(i))
    }

    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(&self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> SubsetIter {
        SubsetIter(self.0)
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let mask = self.0;
        let mut next = Some(0u64);
        core::iter::from_fn(move || {
            let cur = next?;
            // Standard "next submask in increasing order" step.
            next = if cur == mask { None } else { Some(((cur | !mask).wrapping_add(1)) & mask) };
            Some(Subset(cur))
        })
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone)]
pub struct SubsetIter(u64);

impl Iterator for SubsetIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn element_ops() {
        let s = Subset::from_elements([1, 3]);
        assert!(s.contains(1) && !s.contains(2) && s.contains(3));
        assert_eq!(s.with(2), Subset::full(3));
        assert_eq!(s.without(1), Subset::from_elements([3]));
        assert_eq!(s.iter().collect::<Vec<_>>(), [1, 3]);
        assert_eq!(alloc::format!("{s}"), "{1,3}");
    }

    #[test]
    fn submasks_in_increasing_order() {
        let s = Subset(0b1011);
        let subs: Vec<u64> = s.subsets().map(|t| t.0).collect();
        assert_eq!(subs, [0, 1, 2, 3, 8, 9, 10, 11]);
        assert_eq!(Subset::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn ground_set_checks() {
        let g = GroundSet::new(3).unwrap();
        assert!(g.check(Subset::full(3)).is_ok());
        assert_eq!(g.check(Subset(0b1001)), Err(Error::InvalidSubset { element: 4, n: 3 }));
        assert!(GroundSet::new(0).is_err());
        assert_eq!(g.subsets().count(), 8);
    }
}
