use crate::{Error, Result};

/// How far outside the triangle a point may be before it is rejected.
pub const POINT_SLACK: f64 = 1e-6;

/// A point `(alpha, beta)` with `|alpha|, |beta| <= 1` and `alpha + beta >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalancePoint {
    alpha: f64,
    beta: f64,
}

impl BalancePoint {
    pub const UP: Self = Self { alpha: 1.0, beta: 1.0 };
    pub const RIGHT: Self = Self { alpha: 1.0, beta: -1.0 };
    pub const LEFT: Self = Self { alpha: -1.0, beta: 1.0 };

    /// Accepts points up to [`POINT_SLACK`] outside the triangle, which
    /// absorbs rounding in marginals computed from oracle values.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let within = |v: f64| (-1.0 - POINT_SLACK..=1.0 + POINT_SLACK).contains(&v);
        if within(alpha) && within(beta) && alpha + beta >= -POINT_SLACK {
            Ok(Self { alpha, beta })
        } else {
            Err(Error::InvalidPoint { alpha, beta })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn weights(&self) -> ConvexWeights {
        decompose(*self)
    }
}

/// The three corners of the triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extremal {
    Up,
    Right,
    Left,
}

impl Extremal {
    pub const ALL: [Extremal; 3] = [Extremal::Up, Extremal::Right, Extremal::Left];

    pub fn point(self) -> BalancePoint {
        match self {
            Extremal::Up => BalancePoint::UP,
            Extremal::Right => BalancePoint::RIGHT,
            Extremal::Left => BalancePoint::LEFT,
        }
    }

    pub fn from_symbol(c: char) -> Result<Self> {
        match c {
            'U' => Ok(Extremal::Up),
            'R' => Ok(Extremal::Right),
            'L' => Ok(Extremal::Left),
            other => Err(Error::Config(alloc::format!(
                "unknown extremal symbol {other:?}, expected one of U, R, L"
            ))),
        }
    }
}

/// Barycentric weights on up, right and left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexWeights {
    pub up: f64,
    pub right: f64,
    pub left: f64,
}

impl ConvexWeights {
    /// `up * (1, 1) + right * (1, -1) + left * (-1, 1)`.
    pub fn reconstruct(&self) -> (f64, f64) {
        (self.up + self.right - self.left, self.up - self.right + self.left)
    }
}

/// Writes `point` as a convex combination of the three corners.
///
/// The affine weights are unique: `up = (a + b) / 2`, `right = (1 - b) / 2`,
/// `left = (1 - a) / 2`. Points inside the slack band can produce slightly
/// negative weights; those are clamped to zero and the rest renormalized.
pub fn decompose(point: BalancePoint) -> ConvexWeights {
    let (a, b) = (point.alpha, point.beta);
    let raw = ConvexWeights { up: (a + b) / 2.0, right: (1.0 - b) / 2.0, left: (1.0 - a) / 2.0 };
    if raw.up >= 0.0 && raw.right >= 0.0 && raw.left >= 0.0 {
        return raw;
    }
    let up = raw.up.max(0.0);
    let right = raw.right.max(0.0);
    let left = raw.left.max(0.0);
    let sum = up + right + left;
    ConvexWeights { up: up / sum, right: right / sum, left: left / sum }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corners() {
        assert_eq!(decompose(BalancePoint::UP), ConvexWeights { up: 1.0, right: 0.0, left: 0.0 });
        assert_eq!(decompose(BalancePoint::RIGHT), ConvexWeights { up: 0.0, right: 1.0, left: 0.0 });
        assert_eq!(decompose(BalancePoint::LEFT), ConvexWeights { up: 0.0, right: 0.0, left: 1.0 });
    }

    #[test]
    fn origin_solves_linear_system() {
        // Weights (u, r, l) with u + r + l = 1, u + r - l = 0, u - r + l = 0
        // give l = r, u = 0, r = 1/2.
        let w = decompose(BalancePoint::new(0.0, 0.0).unwrap());
        assert_eq!(w, ConvexWeights { up: 0.0, right: 0.5, left: 0.5 });
    }

    #[test]
    fn outside_points_rejected() {
        assert!(BalancePoint::new(0.5, -0.6).is_err());
        assert!(BalancePoint::new(1.1, 0.0).is_err());
        assert!(BalancePoint::new(0.0, -1.5).is_err());
        assert!(BalancePoint::new(f64::NAN, 0.0).is_err());
        // Inside the slack band.
        let p = BalancePoint::new(0.5, -0.5 - 1e-8).unwrap();
        let w = decompose(p);
        assert!(w.up >= 0.0 && w.right >= 0.0 && w.left >= 0.0);
        assert!((w.up + w.right + w.left - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symbols() {
        assert_eq!(Extremal::from_symbol('R').unwrap().point(), BalancePoint::RIGHT);
        assert!(Extremal::from_symbol('D').is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(100_000))]
        #[test]
        fn reconstructs_point(u in 0.0f64..=1.0, r in 0.0f64..=1.0) {
            // Sample the triangle by folding the unit square.
            let (u, r) = if u + r > 1.0 { (1.0 - u, 1.0 - r) } else { (u, r) };
            let l = 1.0 - u - r;
            let (alpha, beta) = (u + r - l, u - r + l);
            let w = decompose(BalancePoint::new(alpha, beta).unwrap());
            let (a2, b2) = w.reconstruct();
            proptest::prop_assert!((a2 - alpha).abs() <= 1e-9 && (b2 - beta).abs() <= 1e-9);
            proptest::prop_assert!(w.up >= 0.0 && w.right >= 0.0 && w.left >= 0.0);
            proptest::prop_assert!((w.up + w.right + w.left - 1.0).abs() <= 1e-9);
        }
    }
}
