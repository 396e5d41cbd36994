//! Writing `P_q(A)` as `(1+q)/2 · per(A⁺) + (1−q)/2 · det(A⁻)` with
//! `A^± = (±q)^M ∘ A`.
//!
//! Comparing coefficients of `wt_σ` shows that `M` works exactly when
//! every gap `δ_σ = ℓ(σ) − Tr_σ(M)` is 0 or 1. The admissible gap vectors
//! are those whose targets `b = ℓ − δ` lie in the column space of the
//! incidence matrix, i.e. are orthogonal to its left nullspace.

use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{combine_graded, det_by_expansion, length_graded_sums, permanent, qperm_naive, schur_apply, weight};
use crate::exact::{
    det_rational, format_rat, int, is_integer, left_nullspace, rat, rat_pow, solve_integer, solve_rational, to_i64,
    BaseSign, ExponentMatrix, Laurent, LinearSolution, Matrix, Rat, RatLinearSystem, RatMatrix, RingMatrix,
};
use crate::perm::{dihedral_group, enumerate_sn, incidence_matrix, sigma_trace, DihedralKind, Perm};
use crate::preservers::{basis, reduce_mod_preservers, unvec, PreserverBasis};
use crate::random::Sampler;

/// Largest size with a nonempty solution set worth searching.
pub const MAX_MIXED: usize = 4;

/// A target `b_σ = ℓ(σ) − δ_σ`, indexed by `𝔖_n` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TargetVector {
    pub n: usize,
    pub b: Vec<i64>,
    pub delta: Vec<u8>,
}

impl TargetVector {
    pub fn from_delta(n: usize, delta: Vec<u8>) -> Result<Self> {
        let perms = enumerate_sn(n)?;
        if delta.len() != perms.len() {
            return Err(Error::DimensionMismatch {
                expected: perms.len(),
                found: delta.len(),
            });
        }
        if let Some(d) = delta.iter().find(|&&d| d > 1) {
            return Err(Error::InvalidArgument(format!("gap {d} is not 0 or 1")));
        }
        let b = perms
            .iter()
            .zip(&delta)
            .map(|(p, &d)| p.ell() as i64 - d as i64)
            .collect();
        Ok(Self { n, b, delta })
    }

    /// Fails unless every `ℓ(σ) − b_σ` is 0 or 1.
    pub fn from_b(n: usize, b: Vec<i64>) -> Result<Self> {
        let perms = enumerate_sn(n)?;
        if b.len() != perms.len() {
            return Err(Error::DimensionMismatch {
                expected: perms.len(),
                found: b.len(),
            });
        }
        let delta = perms
            .iter()
            .zip(&b)
            .map(|(p, &v)| match p.ell() as i64 - v {
                d @ (0 | 1) => Ok(d as u8),
                _ => Err(Error::InvalidArgument(format!("b_{p} = {v} is not ℓ or ℓ − 1"))),
            })
            .collect::<Result<_>>()?;
        Ok(Self { n, b, delta })
    }

    fn from_mask(n: usize, perms: &[Perm], mask: u32) -> Self {
        let delta: Vec<u8> = (0..perms.len()).map(|k| ((mask >> k) & 1) as u8).collect();
        let b = perms
            .iter()
            .zip(&delta)
            .map(|(p, &d)| p.ell() as i64 - d as i64)
            .collect();
        Self { n, b, delta }
    }

    pub fn delta_sum(&self) -> i64 {
        self.delta.iter().map(|&d| d as i64).sum()
    }

    fn b_rat(&self) -> Vec<Rat> {
        self.b.iter().map(|&v| int(v)).collect()
    }
}

/// `b` is consistent iff `y·b = 0` for every left-null vector `y`.
/// Returns `y·ℓ` and, per permutation, the vector of `y_σ`.
struct Residuals {
    perms: Vec<Perm>,
    base: Vec<i64>,
    cols: Vec<Vec<i64>>,
}

impl Residuals {
    fn new(n: usize) -> Result<Self> {
        let perms = enumerate_sn(n)?;
        let null = left_nullspace(&incidence_matrix(n)?);
        let null: Vec<Vec<i64>> = null
            .iter()
            .map(|y| y.iter().map(|v| v.to_i64().expect("small left-null entries")).collect())
            .collect();
        let base = null
            .iter()
            .map(|y| y.iter().zip(&perms).map(|(c, p)| c * p.ell() as i64).sum())
            .collect();
        let cols = (0..perms.len()).map(|s| null.iter().map(|y| y[s]).collect()).collect();
        Ok(Self { perms, base, cols })
    }

    fn residual(&self, delta: &[u8]) -> Vec<i64> {
        let mut r = self.base.clone();
        for (s, _) in delta.iter().enumerate().filter(|(_, &d)| d == 1) {
            sub_assign(&mut r, &self.cols[s]);
        }
        r
    }

    /// Consistent masks among Gray-code indices `start..end`.
    fn scan(&self, start: u64, end: u64) -> Vec<u32> {
        let mut out = Vec::new();
        if start >= end {
            return out;
        }
        let mut mask = (start ^ (start >> 1)) as u32;
        let mut r = self.base.clone();
        for s in 0..self.perms.len() {
            if (mask >> s) & 1 == 1 {
                sub_assign(&mut r, &self.cols[s]);
            }
        }
        if r.iter().all(|&x| x == 0) {
            out.push(mask);
        }
        for g in start + 1..end {
            let bit = g.trailing_zeros() as usize;
            mask ^= 1 << bit;
            if (mask >> bit) & 1 == 1 {
                sub_assign(&mut r, &self.cols[bit]);
            } else {
                for (x, c) in r.iter_mut().zip(&self.cols[bit]) {
                    *x += c;
                }
            }
            if r.iter().all(|&x| x == 0) {
                out.push(mask);
            }
        }
        out
    }
}

fn sub_assign(r: &mut [i64], c: &[i64]) {
    for (x, y) in r.iter_mut().zip(c) {
        *x -= y;
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    if n > MAX_MIXED {
        return Err(Error::SizeTooLarge { n, max: MAX_MIXED });
    }
    Ok(())
}

/// Every admissible gap vector for `n ≤ 4`, sorted by `δ` ascending
/// (equivalently `b` descending).
///
/// The `2^{n!}` gap vectors are walked in Gray-code order, so each step
/// flips one `δ_σ` and updates the residual by one precomputed column.
/// `jobs = 0` uses the global rayon pool.
pub fn search_consistent_targets(n: usize, jobs: usize) -> Result<Vec<TargetVector>> {
    check_size(n)?;
    let res = Residuals::new(n)?;
    let total: u64 = 1 << res.perms.len();
    let chunks = total.min(256);
    let size = total.div_ceil(chunks);
    let work = || -> Vec<u32> {
        (0..chunks)
            .into_par_iter()
            .flat_map_iter(|c| res.scan(c * size, ((c + 1) * size).min(total)))
            .collect()
    };
    let masks = if jobs == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(work)
    };
    let mut found: Vec<TargetVector> = masks
        .into_iter()
        .map(|m| TargetVector::from_mask(n, &res.perms, m))
        .collect();
    found.sort_by(|a, b| a.delta.cmp(&b.delta));
    Ok(found)
}

/// Consistency through the left nullspace.
pub fn is_consistent(t: &TargetVector) -> Result<bool> {
    check_size(t.n)?;
    let res = Residuals::new(t.n)?;
    Ok(res.residual(&t.delta).iter().all(|&x| x == 0))
}

/// Consistency by solving the linear system outright.
pub fn is_consistent_by_rank(t: &TargetVector) -> Result<bool> {
    let sys = RatLinearSystem::new(incidence_matrix(t.n)?, t.b_rat())?;
    Ok(solve_rational(&sys).is_consistent())
}

/// One affine piece `M₀ + R_n` of the solution set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedComponent {
    pub target: TargetVector,
    #[serde(rename = "M0", serialize_with = "crate::format::ser_rat_matrix")]
    pub m0: ExponentMatrix,
    /// False when no integer representative was found.
    pub integral: bool,
}

impl MixedComponent {
    pub fn n(&self) -> usize {
        self.target.n
    }

    pub fn kernel_basis(&self) -> Result<PreserverBasis> {
        basis(self.n())
    }

    /// `Tr_σ(M₀) = b_σ` for every σ.
    pub fn reproduces_target(&self) -> bool {
        let perms = enumerate_sn(self.n()).expect("size checked");
        perms
            .iter()
            .zip(&self.target.b)
            .all(|(p, &b)| sigma_trace(&self.m0, p).is_ok_and(|t| t == int(b)))
    }

    /// The ±1 matrix `(−1)^{M₀}`.
    pub fn sign_matrix(&self) -> Result<RatMatrix> {
        sign_matrix(&self.m0)
    }
}

fn check_integer(m: &ExponentMatrix) -> Result<()> {
    match m.iter().find(|(_, _, v)| !is_integer(v)) {
        Some((row, col, v)) => Err(Error::NonIntegerExponent {
            row: row + 1,
            col: col + 1,
            value: format_rat(v),
        }),
        None => Ok(()),
    }
}

fn sign_matrix(m: &ExponentMatrix) -> Result<RatMatrix> {
    check_integer(m)?;
    Ok(m.map(|v| if v.numer().bit(0) { int(-1) } else { int(1) }))
}

/// An integer `M₀` with `Tr_σ(M₀) = b_σ`, reduced to the representative
/// with zero last row (see [`reduce_mod_preservers`]).
pub fn recover_base_matrix(t: &TargetVector) -> Result<MixedComponent> {
    let a = incidence_matrix(t.n)?;
    let b = t.b_rat();
    let (m0, integral) = match solve_integer(&a, &b) {
        Some(x) => {
            let v: Vec<Rat> = x.into_iter().map(Rat::from_integer).collect();
            (unvec(t.n, &v), true)
        }
        None => match solve_rational(&RatLinearSystem::new(a, b)?) {
            LinearSolution::Solution(s) => (unvec(t.n, &s.particular), false),
            LinearSolution::Inconsistent { .. } => return Err(Error::InconsistentTarget),
        },
    };
    let m0 = reduce_mod_preservers(&m0);
    Ok(MixedComponent {
        target: t.clone(),
        integral: integral && m0.iter().all(|(_, _, v)| is_integer(v)),
        m0,
    })
}

/// `ℓ(σ) − Tr_σ(M)` for every σ, lexicographic order.
pub fn trace_gaps(m: &ExponentMatrix) -> Result<Vec<Rat>> {
    let n = m.ensure_square()?;
    enumerate_sn(n)?
        .iter()
        .map(|p| Ok(int(p.ell() as i64) - sigma_trace(m, p)?))
        .collect()
}

/// Both sides of the mixed identity agree as Laurent polynomials on
/// `trials` random rational matrices.
pub fn verify_mixed_identity(m: &ExponentMatrix, trials: usize, seed: u64) -> Result<bool> {
    let n = m.ensure_square()?;
    check_size(n)?;
    check_integer(m)?;
    let q = Laurent::q();
    let half = Laurent::constant(rat(1, 2));
    let plus = &half * &(&Laurent::one() + &q);
    let minus = &half * &(&Laurent::one() - &q);
    let mut sampler = Sampler::new(seed);
    for _ in 0..trials {
        let a = sampler.rat_matrix(n).to_ring();
        let lhs = qperm_naive(&a)?.value;
        let per = permanent(&schur_apply(m, &a, BaseSign::Plus)?)?;
        let det = det_by_expansion(&schur_apply(m, &a, BaseSign::Minus)?)?;
        if lhs != &(&plus * &per) + &(&minus * &det) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Why no admissible gap vector exists once `n ≥ 5`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub rotation_length_sum: i64,
    pub reflection_length_sum: i64,
    /// `Σ_{C₅} P_σ = Σ_{R₅} P_σ = J₅`.
    pub matrix_sums_equal: bool,
    /// Value forced on `Σ_{C₅} δ − Σ_{R₅} δ`.
    pub required_difference: i64,
    /// Range of that difference over `δ ∈ {0,1}`.
    pub achievable: (i64, i64),
    pub contradiction: bool,
}

pub fn obstruction_n5() -> ObstructionReport {
    let d5 = dihedral_group(5).expect("n = 5 is supported");
    let (rot, refl): (Vec<_>, Vec<_>) = d5.iter().partition(|(_, k)| matches!(k, DihedralKind::Rotation(_)));
    let len_sum = |v: &[&(Perm, DihedralKind)]| v.iter().map(|(p, _)| p.ell() as i64).sum::<i64>();
    let mat_sum = |v: &[&(Perm, DihedralKind)]| {
        v.iter()
            .fold(RatMatrix::zeros(5, 5), |acc, (p, _)| acc.add(&p.matrix::<Rat>()))
    };
    let j5 = RatMatrix::all_ones(5);
    let matrix_sums_equal = mat_sum(&rot) == j5 && mat_sum(&refl) == j5;
    let (rotation_length_sum, reflection_length_sum) = (len_sum(&rot), len_sum(&refl));
    let required_difference = rotation_length_sum - reflection_length_sum;
    let achievable = (-(refl.len() as i64), rot.len() as i64);
    ObstructionReport {
        rotation_length_sum,
        reflection_length_sum,
        matrix_sums_equal,
        required_difference,
        achievable,
        contradiction: matrix_sums_equal && !(achievable.0..=achievable.1).contains(&required_difference),
    }
}

/// Determinant, permanent and trace of `(−1)^{M₀}`, next to the values
/// predicted from the gap vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignMatrixReport {
    pub n: usize,
    pub det: i64,
    pub per: i64,
    pub trace: i64,
    /// `n! − 2 Σ δ_σ`.
    pub det_predicted: i64,
    /// `−2 Σ (−1)^{ℓ(σ)} δ_σ`.
    pub per_predicted: i64,
}

impl SignMatrixReport {
    pub fn formulas_hold(&self) -> bool {
        self.det == self.det_predicted && self.per == self.per_predicted
    }
}

pub fn sign_matrix_invariants(comp: &MixedComponent) -> Result<SignMatrixReport> {
    let n = comp.n();
    let s = comp.sign_matrix()?;
    let as_int = |r: Rat| to_i64(&r).expect("small integer");
    let det = as_int(det_rational(&s));
    let per = as_int(length_graded_sums(&s)?.into_iter().fold(Rat::zero(), |a, x| a + x));
    let trace = as_int(s.trace());
    let perms = enumerate_sn(n)?;
    let alternating: i64 = perms
        .iter()
        .zip(&comp.target.delta)
        .map(|(p, &d)| p.sign() * d as i64)
        .sum();
    let factorial = perms.len() as i64;
    Ok(SignMatrixReport {
        n,
        det,
        per,
        trace,
        det_predicted: factorial - 2 * comp.target.delta_sum(),
        per_predicted: -2 * alternating,
    })
}

/// `Σ ε^{ℓ(σ)} δ_σ wt_σ(A) = ½ (P_ε(A) − P_{−ε}((−1)^M ∘ A))` on the
/// identity, the all-ones matrix and `trials` random rational matrices.
pub fn derivative_identity_check(comp: &MixedComponent, eps: i64, trials: usize, seed: u64) -> Result<bool> {
    if eps != 1 && eps != -1 {
        return Err(Error::InvalidArgument(format!("eps must be 1 or -1, got {eps}")));
    }
    let n = comp.n();
    check_size(n)?;
    let s = comp.sign_matrix()?;
    let perms = enumerate_sn(n)?;
    let e = int(eps);
    let mut sampler = Sampler::new(seed);
    let mut inputs = vec![RatMatrix::identity(n), RatMatrix::all_ones(n)];
    inputs.extend((0..trials).map(|_| sampler.rat_matrix(n)));
    for a in &inputs {
        let lhs = perms
            .iter()
            .zip(&comp.target.delta)
            .filter(|(_, &d)| d == 1)
            .fold(Rat::zero(), |acc, (p, _)| {
                acc + rat_pow(&e, p.ell() as i64) * weight(a, p)
            });
        let first = combine_graded(&length_graded_sums(a)?, &e);
        let second = combine_graded(&length_graded_sums(&s.hadamard(a))?, &-e.clone());
        if lhs != (first - second) / int(2) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `P_{q0}(A) = 0` for a rational matrix, after checking the equivalence
/// `P_{q0}(A) = 0 ⟺ per(A⁺) = det(W ∘ A⁺)`, where `W` is `(−1)^{M₀}` with
/// its first row scaled by `(q0 − 1)/(q0 + 1)`.
///
/// Scaling the last row instead must give the same determinant.
pub fn zero_locus_check_numeric(a: &RatMatrix, q0: &Rat, comp: &MixedComponent) -> Result<bool> {
    let n = a.ensure_square()?;
    comp.m0.ensure_dim(n)?;
    check_size(n)?;
    if q0.is_zero() {
        return Err(Error::ZeroQ);
    }
    if q0.is_one() || *q0 == int(-1) {
        return Err(Error::QAtSingularity(format_rat(q0)));
    }
    let s = comp.sign_matrix()?;
    let p = combine_graded(&length_graded_sums(a)?, q0);
    let a_plus = Matrix::square(n, |i, j| {
        rat_pow(q0, to_i64(&comp.m0[(i, j)]).expect("integer exponent")) * &a[(i, j)]
    });
    let per = length_graded_sums(&a_plus)?.into_iter().fold(Rat::zero(), |x, y| x + y);
    let c = (q0 - Rat::one()) / (q0 + Rat::one());
    let scaled_det = |row: usize| {
        let w = Matrix::square(n, |i, j| if i == row { &s[(i, j)] * &c } else { s[(i, j)].clone() });
        det_rational(&w.hadamard(&a_plus))
    };
    let det = scaled_det(0);
    if det != scaled_det(n - 1) {
        return Err(Error::BiconditionalViolated);
    }
    let vanishes = p.is_zero();
    if vanishes != (per == det) {
        return Err(Error::BiconditionalViolated);
    }
    Ok(vanishes)
}

/// As [`zero_locus_check_numeric`] for a matrix over `Q[q^{±1/D}]`.
pub fn zero_locus_check(a: &RingMatrix, q0: &Rat, comp: &MixedComponent) -> Result<bool> {
    if q0.is_zero() {
        return Err(Error::ZeroQ);
    }
    zero_locus_check_numeric(&a.substitute(q0)?, q0, comp)
}

/// The dense zero of `P_q` on 4×4 matrices, with its last row multiplied
/// by `1 − q − q²` so that every entry is a polynomial.
pub fn zero_locus_example_cleared() -> RingMatrix {
    let q = Laurent::q();
    let one = Laurent::one();
    let mq = -q.clone();
    let f = &(&one - &q) - &q.pow(2);
    let corner = &(&q.pow(2) - &q.pow(6)) - &q.pow(7);
    Matrix::from_vec(
        4,
        4,
        vec![
            one.clone(),
            mq.clone(),
            mq.clone(),
            mq.clone(),
            one.clone(),
            one.clone(),
            mq.clone(),
            mq.clone(),
            one.clone(),
            one.clone(),
            one.clone(),
            mq,
            f.clone(),
            f.clone(),
            f,
            corner,
        ],
    )
}

/// The same matrix at `q = q0`, with `w(q0) = q0²(1 − q0⁴ − q0⁵)/(1 − q0 − q0²)`.
pub fn zero_locus_example_at(q0: &Rat) -> RatMatrix {
    let one = Rat::one();
    let mq = -q0.clone();
    let w = rat_pow(q0, 2) * (&one - rat_pow(q0, 4) - rat_pow(q0, 5)) / (&one - q0 - rat_pow(q0, 2));
    Matrix::from_vec(
        4,
        4,
        vec![
            one.clone(),
            mq.clone(),
            mq.clone(),
            mq.clone(),
            one.clone(),
            one.clone(),
            mq.clone(),
            mq.clone(),
            one.clone(),
            one.clone(),
            one.clone(),
            mq,
            one.clone(),
            one.clone(),
            one,
            w,
        ],
    )
}
