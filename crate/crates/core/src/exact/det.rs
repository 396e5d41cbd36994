use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{ExactDiv, Matrix, Rat};

/// Determinant by fraction-free (Bareiss) elimination, `O(n^3)` ring operations.
///
/// Every division performed is exact in an integral domain; an inexact
/// division means the arithmetic is broken and panics.
pub fn det_bareiss<T: ExactDiv>(a: &Matrix<T>) -> T {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return T::one();
    }
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[(r, k)].is_zero()) else {
                return T::zero();
            };
            m.swap_rows(k, p);
            negate = !negate;
        }
        let pivot = m[(k, k)].clone();
        for i in k + 1..n {
            let lead = m[(i, k)].clone();
            for j in k + 1..n {
                let mut v = m[(i, j)].clone() * pivot.clone();
                if !lead.is_zero() && !m[(k, j)].is_zero() {
                    v = v - lead.clone() * m[(k, j)].clone();
                }
                m[(i, j)] = v.exact_div(&prev).expect("Bareiss division must be exact");
            }
            m[(i, k)] = T::zero();
        }
        prev = pivot;
    }
    let d = m[(n - 1, n - 1)].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant of a rational matrix: rows are cleared to integers and the
/// integer matrix goes through Bareiss.
pub fn det_rational(a: &Matrix<Rat>) -> Rat {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows();
    let mut scale = BigInt::one();
    let mut ints = Vec::with_capacity(n * n);
    for i in 0..n {
        let l = a.row(i).iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        for v in a.row(i) {
            ints.push(v.numer() * (&l / v.denom()));
        }
        scale *= l;
    }
    let d = det_bareiss(&Matrix::from_vec(n, n, ints));
    if d.is_zero() {
        return Rat::zero();
    }
    Rat::new(d, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, Laurent};

    #[test]
    fn identity_has_unit_determinant() {
        assert_eq!(det_bareiss(&Matrix::<Rat>::identity(4)), int(1));
        assert_eq!(det_bareiss(&Matrix::<Laurent>::identity(4)), Laurent::from_int(1));
    }

    #[test]
    fn upper_triangular_with_negated_corner() {
        // The matrix B from the invertibility argument: first row -a_{1j}, identity below.
        let a11 = int(7);
        let m = Matrix::square(4, |i, j| {
            if i == 0 {
                match j {
                    0 => -a11.clone(),
                    _ => int(j as i64 + 2),
                }
            } else if i == j {
                int(1)
            } else {
                int(0)
            }
        });
        assert_eq!(det_bareiss(&m), -a11.clone());
        assert_eq!(det_rational(&m), -a11);
    }

    #[test]
    fn zero_pivot_requires_row_swap() {
        let m = Matrix::from_i64_rows(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        // 0*(0+9) - 1*(8-12) + 2*(-3-0) = 4 - 6 = -2
        assert_eq!(det_bareiss(&m), int(-2));
        assert_eq!(det_rational(&m), int(-2));
    }

    #[test]
    fn singular_column() {
        let m = Matrix::from_i64_rows(&[&[0, 1], &[0, 3]]);
        assert_eq!(det_bareiss(&m), int(0));
    }
}
