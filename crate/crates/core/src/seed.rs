//! Seed derivation for trials and per-subroutine coin streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// One step of SplitMix64.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `key` into `parent`, giving a child seed that is independent across keys.
pub fn child_seed(parent: u64, key: u64) -> u64 {
    splitmix64(splitmix64(parent) ^ splitmix64(key.wrapping_add(GOLDEN_GAMMA)))
}

/// Seed for trial `trial` under `master`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    child_seed(master, trial)
}

/// Seed for subroutine `index` inside a trial.
pub fn subroutine_seed(trial_seed: u64, index: u64) -> u64 {
    child_seed(trial_seed ^ 0x5b5_u64, index)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn children_differ() {
        let a = child_seed(7, 0);
        let b = child_seed(7, 1);
        let c = child_seed(8, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, child_seed(7, 0));
    }
}
