//! Exact scalar and linear-algebra substrate.
//!
//! Everything here is exact: big rationals, Laurent polynomials in a
//! root `t` of `q`, dense matrices over either, and rational/integer
//! linear-system solvers.

mod det;
mod lattice;
mod laurent;
mod linsys;
mod matrix;

pub use det::{det_bareiss, det_rational};
pub use lattice::{solve_integer, solve_modular};
pub use laurent::{BaseSign, Laurent};
pub use linsys::{
    clear_denominators, kernel, left_nullspace, rank, rref, solve_many, solve_rational, AffineSolutionSpace,
    LinearSolution, RatLinearSystem, Rref,
};
pub use matrix::{ExponentMatrix, Matrix, RatMatrix, RingMatrix};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Mul, Neg, Sub};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rat = BigRational;

/// Commutative ring operations used by the generic matrix algorithms.
pub trait Ring:
    Clone + PartialEq + fmt::Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + PartialEq + fmt::Debug + Zero + One + Neg<Output = T> + Sub<Output = T> + Mul<Output = T>
{
}

/// Rings with exact division (division that is known to leave no remainder).
pub trait ExactDiv: Ring {
    /// Returns `self / d` when `d` divides `self` exactly.
    fn exact_div(&self, d: &Self) -> Option<Self>;
}

impl ExactDiv for BigInt {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (quot, rem) = self.div_rem(d);
        rem.is_zero().then_some(quot)
    }
}

impl ExactDiv for Rat {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        (!d.is_zero()).then(|| self / d)
    }
}

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Integer value of `r` if it is an integer that fits in an `i64`.
pub fn to_i64(r: &Rat) -> Option<i64> {
    use num_traits::ToPrimitive;
    if is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Canonical text form of a rational: `3`, `-1/2`.
pub fn format_rat(r: &Rat) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p`, `p/q` (whitespace tolerated).
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Rat::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// Exact `root`-th root of a rational, if one exists.
pub fn exact_root(value: &Rat, root: u32) -> Option<Rat> {
    if root == 1 {
        return Some(value.clone());
    }
    let n = int_root(value.numer(), root)?;
    let d = int_root(value.denom(), root)?;
    Some(Rat::new(n, d))
}

fn int_root(value: &BigInt, root: u32) -> Option<BigInt> {
    if value.is_negative() {
        if root.is_multiple_of(2) {
            return None;
        }
        return int_root(&-value, root).map(|r| -r);
    }
    let r = value.nth_root(root);
    (num_traits::pow(r.clone(), root as usize) == *value).then_some(r)
}

/// `base^exp` for a signed integer exponent; `base` must be nonzero when `exp < 0`.
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    let p = num_traits::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp < 0 {
        p.recip()
    } else {
        p
    }
}

pub(crate) fn lcm_u32(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;
    use proptest::prelude::*;

    /// Laplace expansion along the first row.
    fn cofactor_det(a: &RatMatrix) -> Rat {
        let n = a.rows();
        if n == 0 {
            return Rat::one();
        }
        (0..n).fold(Rat::zero(), |acc, j| {
            let minor = Matrix::from_fn(n - 1, n - 1, |i, k| a[(i + 1, if k < j { k } else { k + 1 })].clone());
            let term = &a[(0, j)] * cofactor_det(&minor);
            if j % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        })
    }

    #[test]
    fn roots_and_parsing() {
        assert_eq!(exact_root(&rat(-27, 8), 3), Some(rat(-3, 2)));
        assert_eq!(exact_root(&rat(-4, 1), 2), None);
        assert_eq!(parse_rat(" -3/6 "), Some(rat(-1, 2)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(format_rat(&rat(4, 2)), "2");
    }

    #[test]
    fn substitution_commutes_with_ring_operations() {
        let mut s = Sampler::new(11);
        for _ in 0..200 {
            let a = s.laurent(3);
            let b = s.laurent(3);
            let q0 = s.nonzero_rat();
            let (va, vb) = (a.substitute(&q0).unwrap(), b.substitute(&q0).unwrap());
            assert_eq!((&a * &b).substitute(&q0).unwrap(), &va * &vb);
            assert_eq!((&a + &b).substitute(&q0).unwrap(), &va + &vb);
            assert_eq!((&a - &b).substitute(&q0).unwrap(), &va - &vb);
            assert_eq!(
                a.invert_q().substitute(&q0).unwrap(),
                a.substitute(&q0.recip()).unwrap()
            );
        }
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let mut s = Sampler::new(12);
        for n in 1..=6 {
            for _ in 0..5 {
                let a = s.rat_matrix(n);
                assert_eq!(det_rational(&a), cofactor_det(&a));
                assert_eq!(det_bareiss(&a), cofactor_det(&a));
                let ring = a.to_ring();
                assert_eq!(det_bareiss(&ring), Laurent::constant(cofactor_det(&a)));
            }
        }
        let a = s.int_matrix(5, 20);
        assert_eq!(det_rational(&a), cofactor_det(&a));
    }

    #[test]
    fn bareiss_over_laurent_entries() {
        let mut s = Sampler::new(13);
        for _ in 0..5 {
            let a = s.laurent_matrix(4, 2);
            let q0 = rat(5, 3);
            let d = det_bareiss(&a).substitute(&q0).unwrap();
            assert_eq!(d, cofactor_det(&a.substitute(&q0).unwrap()));
        }
    }

    proptest! {
        #[test]
        fn laurent_ring_axioms(sa in 0u64..10_000, sb in 0u64..10_000, sc in 0u64..10_000) {
            let (a, b, c) = (Sampler::new(sa).laurent(3), Sampler::new(sb).laurent(3), Sampler::new(sc).laurent(3));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }
    }
}
