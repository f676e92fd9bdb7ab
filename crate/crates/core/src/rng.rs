//! Seed plumbing. Every randomized component owns a ChaCha generator seeded
//! from a 64-bit value, and composite drivers derive component seeds from a
//! master seed in a fixed, documented order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The deterministic generator used throughout the crate.
pub type SessionRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SessionRng {
    SessionRng::seed_from_u64(seed)
}

/// Derives `N` independent component seeds from a master seed.
///
/// Seeds are drawn from a ChaCha stream in index order, so seed `i` is
/// stable regardless of how many components a caller peels off after it.
pub fn derive_seeds<const N: usize>(master: u64) -> [u64; N] {
    let mut rng = rng_from_seed(master);
    let mut out = [0u64; N];
    for slot in &mut out {
        *slot = rng.next_u64();
    }
    out
}

/// Per-trial seeds for Monte Carlo loops: trial `i` always receives the same
/// seed for a given master, so aggregation order cannot matter.
pub fn trial_seeds(master: u64, trials: usize) -> Vec<u64> {
    let mut rng = rng_from_seed(master);
    (0..trials).map(|_| rng.next_u64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_prefix_stable() {
        let [a, b] = derive_seeds::<2>(42);
        let [a2, b2, _c] = derive_seeds::<3>(42);
        assert_eq!(a, a2);
        assert_eq!(b, b2);
    }

    #[test]
    fn trial_seeds_are_deterministic_and_distinct() {
        let s1 = trial_seeds(7, 100);
        let s2 = trial_seeds(7, 100);
        assert_eq!(s1, s2);
        let unique: std::collections::HashSet<_> = s1.iter().collect();
        assert_eq!(unique.len(), 100);
    }
}
