//! Integer and modular solving through a diagonal normal form `P A Q = D`
//! with `P`, `Q` unimodular.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Matrix, Rat, RatMatrix};

struct Diagonal {
    p: Matrix<BigInt>,
    q: Matrix<BigInt>,
    d: Vec<BigInt>,
}

fn to_int_matrix(a: &RatMatrix) -> Option<Matrix<BigInt>> {
    a.try_map(|_, _, v| {
        if v.denom().is_one() {
            Ok(v.numer().clone())
        } else {
            Err(())
        }
    })
    .ok()
}

fn diagonalize(a: &Matrix<BigInt>) -> Diagonal {
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut p = Matrix::<BigInt>::identity(m);
    let mut q = Matrix::<BigInt>::identity(n);
    let mut d = Vec::new();
    for t in 0..m.min(n) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let v = &w[(i, j)];
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < w[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Diagonal { p, q, d };
            };
            w.swap_rows(t, bi);
            p.swap_rows(t, bi);
            swap_cols(&mut w, t, bj);
            swap_cols(&mut q, t, bj);
            let pivot = w[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                if w[(i, t)].is_zero() {
                    continue;
                }
                let f = w[(i, t)].div_floor(&pivot);
                add_row(&mut w, i, t, &f);
                add_row(&mut p, i, t, &f);
                clean &= w[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if w[(t, j)].is_zero() {
                    continue;
                }
                let f = w[(t, j)].div_floor(&pivot);
                add_col(&mut w, j, t, &f);
                add_col(&mut q, j, t, &f);
                clean &= w[(t, j)].is_zero();
            }
            if clean {
                break;
            }
        }
        d.push(w[(t, t)].clone());
    }
    Diagonal { p, q, d }
}

fn swap_cols(m: &mut Matrix<BigInt>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let tmp = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = tmp;
    }
}

/// row_dst -= f * row_src
fn add_row(m: &mut Matrix<BigInt>, dst: usize, src: usize, f: &BigInt) {
    for j in 0..m.cols() {
        if !m[(src, j)].is_zero() {
            let v = f * &m[(src, j)];
            m[(dst, j)] -= v;
        }
    }
}

/// col_dst -= f * col_src
fn add_col(m: &mut Matrix<BigInt>, dst: usize, src: usize, f: &BigInt) {
    for i in 0..m.rows() {
        if !m[(i, src)].is_zero() {
            let v = f * &m[(i, src)];
            m[(i, dst)] -= v;
        }
    }
}

fn apply(m: &Matrix<BigInt>, v: &[BigInt]) -> Vec<BigInt> {
    (0..m.rows())
        .map(|i| (0..m.cols()).fold(BigInt::zero(), |acc, j| acc + &m[(i, j)] * &v[j]))
        .collect()
}

/// An integer solution of `A x = b` for integer `A`, `b`, if one exists.
///
/// Returns `None` when `A` or `b` has non-integer entries or when no
/// integer solution exists.
pub fn solve_integer(a: &RatMatrix, b: &[Rat]) -> Option<Vec<BigInt>> {
    let ai = to_int_matrix(a)?;
    let bi: Vec<BigInt> = b
        .iter()
        .map(|v| v.denom().is_one().then(|| v.numer().clone()))
        .collect::<Option<_>>()?;
    let Diagonal { p, q, d } = diagonalize(&ai);
    let c = apply(&p, &bi);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        match d.get(i) {
            Some(di) => {
                let (quot, rem) = ci.div_rem(di);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = quot;
            }
            None if !ci.is_zero() => return None,
            None => {}
        }
    }
    Some(apply(&q, &y))
}

/// A solution of `A x ≡ b (mod m)` with entries in `[0, m)`, if one exists.
pub fn solve_modular(a: &RatMatrix, b: &[Rat], modulus: u64) -> Option<Vec<BigInt>> {
    assert!(modulus >= 2, "modulus must be at least 2");
    let m = BigInt::from(modulus);
    let ai = to_int_matrix(a)?;
    let bi: Vec<BigInt> = b
        .iter()
        .map(|v| v.denom().is_one().then(|| v.numer().mod_floor(&m)))
        .collect::<Option<_>>()?;
    let Diagonal { p, q, d } = diagonalize(&ai);
    let c: Vec<BigInt> = apply(&p, &bi).into_iter().map(|v| v.mod_floor(&m)).collect();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        match d.get(i) {
            Some(di) => {
                let di = di.mod_floor(&m);
                let g = di.gcd(&m);
                if !(ci % &g).is_zero() {
                    return None;
                }
                let mg = &m / &g;
                if mg.is_one() {
                    continue;
                }
                let inv = mod_inverse(&(&di / &g), &mg)?;
                y[i] = ((ci / &g) * inv).mod_floor(&mg);
            }
            None if !ci.is_zero() => return None,
            None => {}
        }
    }
    Some(apply(&q, &y).into_iter().map(|v| v.mod_floor(&m)).collect())
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}
