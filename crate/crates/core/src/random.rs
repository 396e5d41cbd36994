//! Seeded sampling of small exact test inputs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{rat, Laurent, Matrix, Rat, RatMatrix, RingMatrix};
use crate::perm::Perm;
use num_traits::Zero;

/// Deterministic source of random rationals, Laurent values and matrices.
///
/// Numerators stay within ±9 and denominators within 1..=4, which keeps
/// coefficient growth in symbolic checks small.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int(&mut self, bound: i64) -> Rat {
        rat(self.rng.gen_range(-bound..=bound), 1)
    }

    pub fn rat(&mut self) -> Rat {
        rat(self.rng.gen_range(-9..=9), self.rng.gen_range(1..=4))
    }

    pub fn nonzero_rat(&mut self) -> Rat {
        loop {
            let r = self.rat();
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// A Laurent polynomial with up to `max_terms` terms and integer
    /// q-exponents in `-2..=2`.
    pub fn laurent(&mut self, max_terms: usize) -> Laurent {
        let terms = self.rng.gen_range(1..=max_terms.max(1));
        (0..terms).fold(Laurent::zero(), |acc, _| {
            let e = rat(self.rng.gen_range(-2..=2), 1);
            let c = self.rat();
            &acc + &Laurent::monomial(c, &e)
        })
    }

    pub fn rat_matrix(&mut self, n: usize) -> RatMatrix {
        Matrix::square(n, |_, _| self.rat())
    }

    pub fn int_matrix(&mut self, n: usize, bound: i64) -> RatMatrix {
        Matrix::square(n, |_, _| self.int(bound))
    }

    pub fn laurent_matrix(&mut self, n: usize, max_terms: usize) -> RingMatrix {
        Matrix::square(n, |_, _| self.laurent(max_terms))
    }

    /// Lower Hessenberg: zero wherever `j > i + 1`.
    pub fn hessenberg_rat(&mut self, n: usize) -> RatMatrix {
        Matrix::square(n, |i, j| if j > i + 1 { Rat::zero() } else { self.rat() })
    }

    pub fn perm(&mut self, n: usize) -> Perm {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(&mut self.rng);
        Perm::new(v).expect("shuffle is a bijection")
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}
