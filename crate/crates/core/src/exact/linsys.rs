use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{Matrix, Rat, RatMatrix};
use crate::error::{Error, Result};

/// `A x = b` over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct RatLinearSystem {
    pub a: RatMatrix,
    pub b: Vec<Rat>,
}

impl RatLinearSystem {
    pub fn new(a: RatMatrix, b: Vec<Rat>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: b.len(),
            });
        }
        Ok(Self { a, b })
    }

    pub fn unknowns(&self) -> usize {
        self.a.cols()
    }
}

/// Particular solution plus a kernel basis; the full solution set is
/// `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineSolutionSpace {
    #[serde(serialize_with = "crate::format::ser_rat_vec")]
    pub particular: Vec<Rat>,
    #[serde(serialize_with = "crate::format::ser_rat_vecs")]
    pub kernel: Vec<Vec<Rat>>,
    pub rank: usize,
}

impl AffineSolutionSpace {
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    /// `particular + Σ c_i kernel_i`.
    pub fn point(&self, coeffs: &[Rat]) -> Vec<Rat> {
        let mut x = self.particular.clone();
        for (c, k) in coeffs.iter().zip(&self.kernel) {
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi += c * ki;
            }
        }
        x
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution {
    Inconsistent { rank: usize },
    Solution(AffineSolutionSpace),
}

impl LinearSolution {
    pub fn solution(&self) -> Option<&AffineSolutionSpace> {
        match self {
            Self::Solution(s) => Some(s),
            Self::Inconsistent { .. } => None,
        }
    }

    pub fn into_solution(self) -> Option<AffineSolutionSpace> {
        match self {
            Self::Solution(s) => Some(s),
            Self::Inconsistent { .. } => None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self, Self::Solution(_))
    }
}

/// Reduced row echelon form; `pivots[r]` is the pivot column of row `r`.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: RatMatrix,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination choosing pivots only among the first `pivot_cols` columns.
fn rref_limited(a: &RatMatrix, pivot_cols: usize) -> Rref {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m[(r, c)].recip();
        for j in c..cols {
            if !m[(r, j)].is_zero() {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
        }
        let pivot_row: Vec<(usize, Rat)> = (c..cols)
            .filter(|&j| !m[(r, j)].is_zero())
            .map(|j| (j, m[(r, j)].clone()))
            .collect();
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for (j, v) in &pivot_row {
                let d = &f * v;
                m[(i, *j)] -= d;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: m, pivots }
}

pub fn rref(a: &RatMatrix) -> Rref {
    rref_limited(a, a.cols())
}

pub fn rank(a: &RatMatrix) -> usize {
    rref(a).pivots.len()
}

/// Basis of the right kernel `{x : A x = 0}` read off the free columns of the RREF.
pub fn kernel(a: &RatMatrix) -> Vec<Vec<Rat>> {
    kernel_from_rref(&rref(a), a.cols())
}

fn kernel_from_rref(r: &Rref, n: usize) -> Vec<Vec<Rat>> {
    let mut is_pivot = vec![false; n];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (row, &p) in r.pivots.iter().enumerate() {
                v[p] = -r.matrix[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// Solves `A x = b` exactly, returning the affine solution space or the rank on inconsistency.
pub fn solve_rational(sys: &RatLinearSystem) -> LinearSolution {
    let mut out = solve_many(&sys.a, std::slice::from_ref(&sys.b));
    out.pop().expect("one right-hand side")
}

/// Solves `A x = b_k` for several right-hand sides with a single elimination.
pub fn solve_many(a: &RatMatrix, rhs: &[Vec<Rat>]) -> Vec<LinearSolution> {
    let (m, n) = (a.rows(), a.cols());
    for b in rhs {
        assert_eq!(b.len(), m, "right-hand side length must match row count");
    }
    let aug = Matrix::from_fn(m, n + rhs.len(), |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            rhs[j - n][i].clone()
        }
    });
    let r = rref_limited(&aug, n);
    let rank = r.pivots.len();
    let kern = kernel_from_rref(&r, n);
    (0..rhs.len())
        .map(|k| {
            let col = n + k;
            if (rank..m).any(|i| !r.matrix[(i, col)].is_zero()) {
                return LinearSolution::Inconsistent { rank };
            }
            let mut particular = vec![Rat::zero(); n];
            for (row, &p) in r.pivots.iter().enumerate() {
                particular[p] = r.matrix[(row, col)].clone();
            }
            LinearSolution::Solution(AffineSolutionSpace {
                particular,
                kernel: kern.clone(),
                rank,
            })
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector (content 1,
/// first nonzero entry positive).
pub fn clear_denominators(v: &[Rat]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in &mut ints {
            *x = -&*x;
        }
    }
    ints
}

/// Integer basis of `{y : yᵀ M = 0}`, each vector primitive.
pub fn left_nullspace(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    kernel(&m.transpose()).iter().map(|v| clear_denominators(v)).collect()
}
