//! Evaluation of q-permanents, permanents and determinants by expansion.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{BaseSign, ExponentMatrix, Laurent, Matrix, Rat, RatMatrix, Ring, RingMatrix};
use crate::perm::{Perm, MAX_ENUMERATE};
use num_traits::{One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    Naive,
    HessenbergDet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QPermResult {
    pub value: Laurent,
    pub method: Method,
    /// Number of permutations the method sums over.
    pub term_count: u64,
}

/// Below this size the expansion runs on one thread.
const PARALLEL_FROM: usize = 7;

/// `S_k = Σ_{ℓ(σ)=k} wt_σ(A)` for `k = 0..=n(n-1)/2`.
///
/// Every q-weighted sum over `𝔖_n` factors through these sums, so the
/// q-permanent, permanent and determinant all come from one expansion.
pub fn length_graded_sums<T>(a: &Matrix<T>) -> Result<Vec<T>>
where
    T: Ring + Send + Sync,
{
    let n = a.ensure_square()?;
    if n > MAX_ENUMERATE {
        return Err(Error::SizeTooLarge { n, max: MAX_ENUMERATE });
    }
    let levels = n * n.saturating_sub(1) / 2 + 1;
    if n == 0 {
        return Ok(vec![T::one()]);
    }
    let first_row = |c: usize| {
        let mut sums = vec![T::zero(); levels];
        let v = &a[(0, c)];
        if !v.is_zero() {
            dfs(a, 1, 1u32 << c, 0, v.clone(), &mut sums);
        }
        sums
    };
    let partial: Vec<Vec<T>> = if n >= PARALLEL_FROM {
        (0..n).into_par_iter().map(first_row).collect()
    } else {
        (0..n).map(first_row).collect()
    };
    // Fixed reduction order keeps the result identical to the sequential one.
    let mut out = vec![T::zero(); levels];
    for sums in partial {
        for (o, s) in out.iter_mut().zip(sums) {
            if !s.is_zero() {
                *o = o.clone() + s;
            }
        }
    }
    Ok(out)
}

fn dfs<T: Ring>(a: &Matrix<T>, row: usize, used: u32, inv: usize, prod: T, sums: &mut [T]) {
    let n = a.rows();
    if row == n {
        sums[inv] = sums[inv].clone() + prod;
        return;
    }
    for c in 0..n {
        if used & (1 << c) != 0 {
            continue;
        }
        let v = &a[(row, c)];
        if v.is_zero() {
            continue;
        }
        let added = (used >> (c + 1)).count_ones() as usize;
        dfs(a, row + 1, used | (1 << c), inv + added, prod.clone() * v.clone(), sums);
    }
}

/// `Σ_k r^k S_k` for an arbitrary weight `r`.
pub fn combine_graded<T: Ring>(sums: &[T], r: &T) -> T {
    let mut acc = T::zero();
    let mut pow = T::one();
    for (k, s) in sums.iter().enumerate() {
        if k > 0 {
            pow = pow * r.clone();
        }
        if !s.is_zero() {
            acc = acc + s.clone() * pow.clone();
        }
    }
    acc
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `P_q(A) = Σ_σ q^{ℓ(σ)} Π a_{i,σ(i)}`, summed over all of `𝔖_n`.
pub fn qperm_naive(a: &RingMatrix) -> Result<QPermResult> {
    let value = qperm_with_parameter(a, &Laurent::q())?;
    Ok(QPermResult {
        value,
        method: Method::Naive,
        term_count: factorial(a.rows()),
    })
}

/// `P_r(A)` for any Laurent parameter `r` (for instance `q^{-1}` or `q^x`).
pub fn qperm_with_parameter(a: &RingMatrix, r: &Laurent) -> Result<Laurent> {
    Ok(combine_graded(&length_graded_sums(a)?, r))
}

pub fn permanent(a: &RingMatrix) -> Result<Laurent> {
    Ok(length_graded_sums(a)?
        .into_iter()
        .fold(Laurent::zero(), |acc, s| &acc + &s))
}

/// `Σ_σ (−1)^{ℓ(σ)} wt_σ(A)`.
pub fn det_by_expansion(a: &RingMatrix) -> Result<Laurent> {
    qperm_with_parameter(a, &Laurent::from_int(-1))
}

/// Exact rational value of `P_{q0}(A)` for a rational matrix.
pub fn qperm_numeric(a: &RatMatrix, q0: &Rat) -> Result<Rat> {
    Ok(combine_graded(&length_graded_sums(a)?, q0))
}

/// `P_q(A)` with `q = q0` substituted.
pub fn qperm_substituted(a: &RingMatrix, q0: &Rat) -> Result<Rat> {
    if q0.is_zero() {
        return Err(Error::ZeroQ);
    }
    match a.substitute(q0) {
        Ok(num) => qperm_numeric(&num, q0),
        // Entries need a root of q0 that does not exist; the total may still be rational.
        Err(Error::NoExactRoot { .. }) => qperm_naive(a)?.value.substitute(q0),
        Err(e) => Err(e),
    }
}

/// `wt_σ(A) = Π a_{i,σ(i)}`.
pub fn weight<T: Ring>(a: &Matrix<T>, s: &Perm) -> T {
    (0..s.n()).fold(T::one(), |acc, i| acc * a[(i, s.apply(i))].clone())
}

/// Entries `(±q)^{λ_{i,j}} · a_{i,j}`.
pub fn schur_apply(l: &ExponentMatrix, a: &RingMatrix, sign: BaseSign) -> Result<RingMatrix> {
    schur_apply_with(l, a, sign, false)
}

/// As [`schur_apply`]; with `skip_zero_entries` the exponent at a zero
/// entry of `A` is never evaluated (and so is never validated).
pub fn schur_apply_with(
    l: &ExponentMatrix,
    a: &RingMatrix,
    sign: BaseSign,
    skip_zero_entries: bool,
) -> Result<RingMatrix> {
    let n = a.ensure_square()?;
    l.ensure_dim(n)?;
    a.try_map(|i, j, v| {
        if skip_zero_entries && v.is_zero() {
            return Ok(Laurent::zero());
        }
        Ok(&Laurent::q_power(&l[(i, j)], sign)? * v)
    })
}

/// `A P_τ`, whose entry `(i, j)` is `a_{i, τ⁻¹(j)}`.
pub fn permute_columns<T: Clone>(a: &Matrix<T>, tau: &Perm) -> Matrix<T> {
    let inv = tau.inverse();
    Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, inv.apply(j))].clone())
}

/// `A` with every entry multiplied by `c`.
fn scale_entries(a: &RingMatrix, c: &Laurent) -> RingMatrix {
    a.map(|v| v * c)
}

/// Checks `P_q(A P_{σ₀}) = q^{n(n-1)/2} P_{q⁻¹}(A) = P_{q⁻¹}(q^{(n-1)/2} A)`.
pub fn duality_check(a: &RingMatrix) -> Result<bool> {
    let n = a.ensure_square()?;
    let s0 = Perm::longest(n);
    let q_inv = Laurent::q().powi(-1).expect("monomial");
    let lhs = qperm_naive(&permute_columns(a, &s0))?.value;
    let top = Laurent::q_power(
        &Rat::from_integer(((n * n.saturating_sub(1)) / 2).into()),
        BaseSign::Plus,
    )?;
    let mid = &top * &qperm_with_parameter(a, &q_inv)?;
    let half = Laurent::q_power(&Rat::new((n as i64 - 1).into(), 2.into()), BaseSign::Plus)?;
    let rhs = qperm_with_parameter(&scale_entries(a, &half), &q_inv)?;
    Ok(lhs == mid && mid == rhs)
}

impl QPermResult {
    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }
}
