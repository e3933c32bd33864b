//! Offline baselines: exhaustive optimum, deterministic and randomized
//! double greedy, and the exact value of a uniformly random set.

use libm::sqrt;
use rand::Rng;

use crate::submodular::{Oracle, SetFunction, Subset};
use crate::{seed, Error, Result};

/// Largest `n` for the enumeration-based operations.
pub const ENUMERATION_MAX_N: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfflineResult {
    pub set: Subset,
    pub value: f64,
    /// Oracle queries spent.
    pub queries: u64,
    /// Set for repeated randomized runs.
    pub trials: Option<TrialStats>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialStats {
    pub trials: usize,
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator).
    pub std_dev: f64,
}

impl TrialStats {
    pub fn std_err(&self) -> f64 {
        self.std_dev / sqrt(self.trials as f64)
    }
}

/// Exact maximizer over all `2^n` sets; ties go to the smallest bitmask.
pub fn brute_force_opt<F: SetFunction>(f: &Oracle<F>) -> Result<OfflineResult> {
    let ground = f.ground();
    ground.check_enumerable("brute-force optimum", ENUMERATION_MAX_N)?;
    let start = f.queries();
    let mut best = (Subset::EMPTY, f64::NEG_INFINITY);
    for s in ground.subsets() {
        let v = f.evaluate(s)?;
        if v > best.1 {
            best = (s, v);
        }
    }
    Ok(OfflineResult { set: best.0, value: best.1, queries: f.queries() - start, trials: None })
}

/// One double-greedy sweep; `rule(alpha, beta, i)` says whether to add `i`.
fn sweep<F, D>(f: &Oracle<F>, mut rule: D) -> Result<OfflineResult>
where
    F: SetFunction,
    D: FnMut(f64, f64) -> bool,
{
    let n = f.ground().n();
    let start = f.queries();
    let (mut x, mut y) = (Subset::EMPTY, Subset::full(n));
    let (mut fx, mut fy) = (f.evaluate(x)?, f.evaluate(y)?);
    for i in 1..=n {
        let fx_in = f.evaluate(x.with(i))?;
        let fy_out = f.evaluate(y.without(i))?;
        if rule(fx_in - fx, fy_out - fy) {
            x = x.with(i);
            fx = fx_in;
        } else {
            y = y.without(i);
            fy = fy_out;
        }
    }
    debug_assert_eq!(x, y);
    Ok(OfflineResult { set: x, value: fx, queries: f.queries() - start, trials: None })
}

/// Adds `i` iff `alpha_i >= beta_i`.
pub fn det_double_greedy<F: SetFunction>(f: &Oracle<F>) -> Result<OfflineResult> {
    sweep(f, |alpha, beta| alpha >= beta)
}

/// Probability of adding `i`: `a+ / (a+ + b+)`, and 1 when both parts vanish.
pub fn rand_double_greedy_probability(alpha: f64, beta: f64) -> f64 {
    let (a, b) = (alpha.max(0.0), beta.max(0.0));
    if a + b == 0.0 {
        1.0
    } else {
        a / (a + b)
    }
}

/// One randomized double-greedy sweep, one uniform draw per element.
pub fn rand_double_greedy<F: SetFunction, R: Rng + ?Sized>(f: &Oracle<F>, rng: &mut R) -> Result<OfflineResult> {
    sweep(f, |alpha, beta| rng.gen::<f64>() < rand_double_greedy_probability(alpha, beta))
}

/// `trials` independent sweeps; trial `k` uses a stream derived from `(seed, k)`.
/// The returned set and value are those of the best trial.
pub fn rand_double_greedy_trials<F: SetFunction>(
    f: &Oracle<F>,
    trials: usize,
    seed: u64,
) -> Result<OfflineResult> {
    if trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    let start = f.queries();
    let mut best: Option<OfflineResult> = None;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for k in 0..trials {
        let mut rng = seed::rng_from_seed(seed::child_seed(seed, k as u64));
        let r = rand_double_greedy(f, &mut rng)?;
        sum += r.value;
        sum_sq += r.value * r.value;
        if best.is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    let m = trials as f64;
    let mean = sum / m;
    let var = if trials > 1 { ((sum_sq - m * mean * mean) / (m - 1.0)).max(0.0) } else { 0.0 };
    let best = best.expect("trials > 0");
    Ok(OfflineResult {
        set: best.set,
        value: best.value,
        queries: f.queries() - start,
        trials: Some(TrialStats { trials, mean, std_dev: sqrt(var) }),
    })
}

/// `2^-n * sum_S f(S)`, by enumeration.
pub fn uniform_random_value<F: SetFunction>(f: &Oracle<F>) -> Result<f64> {
    let ground = f.ground();
    ground.check_enumerable("uniform random value", ENUMERATION_MAX_N)?;
    let mut sum = 0.0;
    for s in ground.subsets() {
        sum += f.evaluate(s)?;
    }
    Ok(sum / (1u64 << ground.n()) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submodular::{random_digraph, Constant, DirectedGraph, Edge, GroundSet, Modular};
    use alloc::vec;

    fn single_edge() -> Oracle<crate::submodular::CutFunction> {
        DirectedGraph::new(2, vec![Edge { source: 1, target: 2, weight: 1.0 }]).unwrap().normalize()
    }

    #[test]
    fn brute_force_examples() {
        let r = brute_force_opt(&single_edge()).unwrap();
        assert_eq!((r.set, r.value, r.queries), (Subset::from_elements([1]), 1.0, 4));

        let c = Oracle::new(Constant { ground: GroundSet::new(4).unwrap(), value: 0.3 });
        assert_eq!(brute_force_opt(&c).unwrap().set, Subset::EMPTY);

        let m = Oracle::new(Modular::new(vec![0.1, 0.0, 0.3, 0.2, 0.0]).unwrap());
        assert_eq!(brute_force_opt(&m).unwrap().set, Subset::from_elements([1, 3, 4]));

        let big = Oracle::new(Constant { ground: GroundSet::new(21).unwrap(), value: 0.0 });
        assert!(matches!(brute_force_opt(&big), Err(Error::TooLarge { .. })));
        assert!(matches!(uniform_random_value(&big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn det_greedy_examples() {
        let r = det_double_greedy(&single_edge()).unwrap();
        assert_eq!((r.set, r.value), (Subset::from_elements([1]), 1.0));
        assert_eq!(r.queries, 2 * 2 + 2);

        let c = Oracle::new(Constant { ground: GroundSet::new(5).unwrap(), value: 0.5 });
        assert_eq!(det_double_greedy(&c).unwrap().set, Subset::full(5));
    }

    #[test]
    fn rand_probability_rule() {
        assert_eq!(rand_double_greedy_probability(1.0, 0.0), 1.0);
        assert_eq!(rand_double_greedy_probability(-0.2, 0.4), 0.0);
        assert_eq!(rand_double_greedy_probability(0.3, 0.3), 0.5);
        assert_eq!(rand_double_greedy_probability(0.0, 0.0), 1.0);
        assert_eq!(rand_double_greedy_probability(-0.1, -0.1), 1.0);
    }

    #[test]
    fn rand_greedy_reproducible() {
        let mut rng = seed::rng_from_seed(4);
        let o = random_digraph(8, 0.5, (0.0, 1.0), &mut rng).unwrap().normalize();
        let a = rand_double_greedy_trials(&o, 200, 77).unwrap();
        let b = rand_double_greedy_trials(&o, 200, 77).unwrap();
        assert_eq!(a.trials, b.trials);
        assert_eq!(a.set, b.set);
        assert!(a.queries <= 200 * (4 * 8 + 2));
    }

    #[test]
    fn uniform_examples() {
        assert_eq!(uniform_random_value(&single_edge()).unwrap(), 0.25);
        let c = Oracle::new(Constant { ground: GroundSet::new(6).unwrap(), value: 0.4 });
        assert!((uniform_random_value(&c).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn ratios_on_small_instances() {
        let mut rng = seed::rng_from_seed(12);
        for k in 0..60 {
            let n = 2 + k % 11;
            let density = [0.2, 0.5, 0.9][k as usize % 3];
            let o = random_digraph(n, density, (0.0, 1.0), &mut rng).unwrap().normalize();
            let opt = brute_force_opt(&o).unwrap().value;
            assert!(det_double_greedy(&o).unwrap().value >= opt / 3.0 - 1e-9);
            assert!(uniform_random_value(&o).unwrap() >= opt / 4.0 - 1e-9);
            let before = o.queries();
            rand_double_greedy(&o, &mut rng).unwrap();
            assert!(o.queries() - before <= u64::from(4 * n + 2));
        }
    }
}
