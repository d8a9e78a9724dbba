//! Small deterministic helpers shared by the unit tests.

use alloc::vec::Vec;

use crate::linalg::{c64, CMat, C64};

/// splitmix64 — tiny, seedable, and good enough for test data.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Uniform f64 in [−1, 1].
pub fn uniform_pm1(state: &mut u64) -> f64 {
    (splitmix64(state) as f64 / u64::MAX as f64) * 2.0 - 1.0
}

/// Dense complex matrix with i.i.d. uniform entries in the unit square.
pub fn random_cmat(nrows: usize, ncols: usize, seed: u64) -> CMat {
    let mut state = seed;
    CMat::from_fn(nrows, ncols, |_, _| {
        c64(uniform_pm1(&mut state), uniform_pm1(&mut state))
    })
}

/// Random complex vector with entries in the unit square.
pub fn random_cvec(len: usize, seed: u64) -> Vec<C64> {
    let mut state = seed;
    (0..len)
        .map(|_| c64(uniform_pm1(&mut state), uniform_pm1(&mut state)))
        .collect()
}
