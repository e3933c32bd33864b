use alloc::vec::Vec;

use rand::Rng;

use super::{Oracle, SetFunction, Subset};
use crate::{Result, TOLERANCE};

/// Largest ground set the exhaustive verifier accepts.
pub const EXHAUSTIVE_MAX_N: u32 = 16;

/// A triple breaking diminishing returns: `T ⊆ S`, `i ∉ S`, and
/// `f(S + i) - f(S) > f(T + i) - f(T) + tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub s: Subset,
    pub t: Subset,
    pub i: u32,
    /// `f(S + i) - f(S)`
    pub marginal_s: f64,
    /// `f(T + i) - f(T)`
    pub marginal_t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Pass,
    Violation(Witness),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Exhaustively checks diminishing returns over every `(S, T, i)` with
/// `T ⊆ S` and `i ∉ S`.
///
/// Triples are visited with `S` in increasing bitmask order, then `T` in
/// increasing bitmask order, then `i` ascending; the first violation is
/// returned. Queries the oracle once per subset.
pub fn verify_submodularity<F: SetFunction>(oracle: &Oracle<F>) -> Result<Verdict> {
    let ground = oracle.ground();
    ground.check_enumerable("exhaustive submodularity check", EXHAUSTIVE_MAX_N)?;
    let table = ground.subsets().map(|s| oracle.evaluate(s)).collect::<Result<Vec<f64>>>()?;
    let value = |s: Subset| table[s.0 as usize];
    let full = ground.full();

    for s in ground.subsets() {
        let outside = Subset(full.0 & !s.0);
        if outside.is_empty() {
            continue;
        }
        let mut marginal_s = [0.0f64; EXHAUSTIVE_MAX_N as usize + 1];
        for i in outside.iter() {
            marginal_s[i as usize] = value(s.with(i)) - value(s);
        }
        for t in s.subsets() {
            for i in outside.iter() {
                let marginal_t = value(t.with(i)) - value(t);
                if marginal_s[i as usize] > marginal_t + TOLERANCE {
                    return Ok(Verdict::Violation(Witness {
                        s,
                        t,
                        i,
                        marginal_s: marginal_s[i as usize],
                        marginal_t,
                    }));
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Checks `samples` random triples; usable for any ground-set size.
///
/// A pass here is evidence, not proof.
pub fn verify_submodularity_sampled<F: SetFunction, R: Rng + ?Sized>(
    oracle: &Oracle<F>,
    samples: usize,
    rng: &mut R,
) -> Result<Verdict> {
    let ground = oracle.ground();
    let n = ground.n();
    let full = ground.full().0;
    for _ in 0..samples {
        let i = rng.gen_range(1..=n);
        let s = Subset(rng.gen::<u64>() & full).without(i);
        let t = Subset(rng.gen::<u64>() & s.0);
        let marginal_s = oracle.evaluate(s.with(i))? - oracle.evaluate(s)?;
        let marginal_t = oracle.evaluate(t.with(i))? - oracle.evaluate(t)?;
        if marginal_s > marginal_t + TOLERANCE {
            return Ok(Verdict::Violation(Witness { s, t, i, marginal_s, marginal_t }));
        }
    }
    Ok(Verdict::Pass)
}
