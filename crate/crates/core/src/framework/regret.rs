use alloc::vec;
use alloc::vec::Vec;

use libm::log;

use crate::submodular::{GroundSet, Oracle, SetFunction, Subset};
use crate::{Error, Result};

/// Largest `n` for which the best fixed set is found by enumeration.
pub const OPT_MAX_N: u32 = 20;

/// Running totals `sum_t f^t(S)` for every fixed `S`, giving the best fixed
/// set in hindsight after any prefix of rounds.
#[derive(Debug, Clone)]
pub struct HindsightOpt {
    ground: GroundSet,
    totals: Vec<f64>,
}

impl HindsightOpt {
    pub fn new(ground: GroundSet) -> Result<Self> {
        ground.check_enumerable("best fixed set in hindsight", OPT_MAX_N)?;
        Ok(Self { ground, totals: vec![0.0; 1usize << ground.n()] })
    }

    /// Reads `f` through [`SetFunction::value`]; bookkeeping, not algorithm queries.
    pub fn add<F: SetFunction>(&mut self, f: &F) -> Result<()> {
        if f.ground() != self.ground {
            return Err(Error::Config("function ground set differs from the hindsight table".into()));
        }
        for (k, total) in self.totals.iter_mut().enumerate() {
            *total += f.value(Subset(k as u64));
        }
        Ok(())
    }

    pub fn total(&self, s: Subset) -> f64 {
        self.totals[s.0 as usize]
    }

    /// Maximizer with the smallest bitmask among ties, and its total.
    pub fn best(&self) -> (Subset, f64) {
        let mut best = (Subset::EMPTY, self.totals[0]);
        for (k, &v) in self.totals.iter().enumerate().skip(1) {
            if v > best.1 {
                best = (Subset(k as u64), v);
            }
        }
        best
    }
}

/// `a * sum_t f^t(S*) - sum_t f^t(S^t)`, with `S*` either given or the best
/// fixed set in hindsight (enumerated, `n <= 20`).
pub fn usm_alpha_regret<F: SetFunction>(
    history: &[(&Oracle<F>, Subset)],
    a: f64,
    opt: Option<Subset>,
) -> Result<f64> {
    let Some((first, _)) = history.first() else {
        return Ok(0.0);
    };
    let alg: f64 = history.iter().map(|(f, s)| f.function().value(*s)).sum();
    let best = match opt {
        Some(s) => {
            first.ground().check(s)?;
            history.iter().map(|(f, _)| f.function().value(s)).sum()
        }
        None => {
            let mut table = HindsightOpt::new(first.ground())?;
            for (f, _) in history {
                table.add(f.function())?;
            }
            table.best().1
        }
    };
    Ok(a * best - alg)
}

/// `T/16, T/8, T/4, T/2, T`, dropping zeros and duplicates.
pub fn checkpoints(horizon: u64) -> Vec<u64> {
    let mut out: Vec<u64> = [16, 8, 4, 2, 1].iter().map(|d| horizon / d).filter(|&t| t > 0).collect();
    out.dedup();
    out
}

/// Least-squares slope of `ln(regret)` against `ln(t)`.
///
/// Points with nonpositive `t` or regret are skipped; `None` if fewer than
/// two remain or all `t` coincide.
pub fn fit_growth_exponent(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> =
        points.iter().filter(|(t, r)| *t > 0.0 && *r > 0.0).map(|&(t, r)| (log(t), log(r))).collect();
    if logs.len() < 2 {
        return None;
    }
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submodular::{DirectedGraph, Edge, FnSet};

    fn single_edge() -> Oracle<crate::submodular::CutFunction> {
        DirectedGraph::new(2, vec![Edge { source: 1, target: 2, weight: 1.0 }]).unwrap().normalize()
    }

    #[test]
    fn matching_opt_has_zero_regret() {
        let o = single_edge();
        let history: Vec<_> = (0..5).map(|_| (&o, Subset::from_elements([1]))).collect();
        assert_eq!(usm_alpha_regret(&history, 1.0, None).unwrap(), 0.0);
    }

    #[test]
    fn single_round_half() {
        let g = GroundSet::new(1).unwrap();
        let o = Oracle::new(FnSet::new(g, |s: Subset| s.len() as f64));
        assert_eq!(usm_alpha_regret(&[(&o, Subset::EMPTY)], 0.5, None).unwrap(), 0.5);
    }

    #[test]
    fn repeated_single_edge() {
        // Each round: OPT value 1, algorithm value 1, so regret = (a - 1) T.
        let o = single_edge();
        let t = 40;
        let history: Vec<_> = (0..t).map(|_| (&o, Subset::from_elements([1]))).collect();
        for a in [0.25, 0.5, 1.0] {
            let r = usm_alpha_regret(&history, a, None).unwrap();
            assert!((r - (a - 1.0) * t as f64).abs() < 1e-12);
            assert!(r <= 0.0);
        }
        let given = usm_alpha_regret(&history, 1.0, Some(Subset::from_elements([2]))).unwrap();
        assert_eq!(given, -(t as f64));
    }

    #[test]
    fn size_limit() {
        let g = GroundSet::new(21).unwrap();
        let o = Oracle::new(FnSet::new(g, |_| 0.0));
        assert!(matches!(usm_alpha_regret(&[(&o, Subset::EMPTY)], 0.5, None), Err(Error::TooLarge { .. })));
        assert!(usm_alpha_regret(&[(&o, Subset::EMPTY)], 0.5, Some(Subset::EMPTY)).is_ok());
    }

    #[test]
    fn hindsight_tie_break() {
        let g = GroundSet::new(3).unwrap();
        let mut h = HindsightOpt::new(g).unwrap();
        h.add(&FnSet::new(g, |_| 0.3)).unwrap();
        assert_eq!(h.best(), (Subset::EMPTY, 0.3));
    }

    #[test]
    fn exponent_fit() {
        let sqrt_pts: Vec<(f64, f64)> = [100.0, 400.0, 1600.0].iter().map(|&t: &f64| (t, 3.0 * t.sqrt())).collect();
        assert!((fit_growth_exponent(&sqrt_pts).unwrap() - 0.5).abs() < 1e-12);
        let lin: Vec<(f64, f64)> = [10.0, 20.0, 40.0].iter().map(|&t| (t, 0.1 * t)).collect();
        assert!((fit_growth_exponent(&lin).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(fit_growth_exponent(&[(10.0, -1.0), (20.0, 3.0)]), None);
        assert_eq!(checkpoints(1600), [100, 200, 400, 800, 1600]);
        assert_eq!(checkpoints(3), [1, 3]);
    }
}
