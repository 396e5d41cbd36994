//! Shared inputs for the benchmarks.

use qperm_core::exact::{rat, Rat, RatMatrix, RingMatrix};
use qperm_core::random::Sampler;

/// Sizes for the Hessenberg fast path; the log-log slope is fitted over these.
pub const FAST_SIZES: [usize; 4] = [8, 16, 32, 64];

/// Sizes at which the naive expansion is still cheap enough to compare.
pub const NAIVE_SIZES: [usize; 3] = [4, 6, 8];

/// The numeric parameter used by the timing suite.
pub fn q0() -> Rat {
    rat(3, 2)
}

/// A random rational lower Hessenberg matrix, fixed by `(n, seed)`.
pub fn hessenberg_input(n: usize, seed: u64) -> RatMatrix {
    Sampler::new(seed ^ ((n as u64) << 32)).hessenberg_rat(n)
}

/// The same matrix with Laurent entries, for the symbolic paths.
pub fn hessenberg_ring_input(n: usize, seed: u64) -> RingMatrix {
    hessenberg_input(n, seed).to_ring()
}
