//! Preserver exponents: matrices `R` with `P_q(z^R ∘ A) = P_q(A)`.
//!
//! `R` is a preserver exactly when every σ-trace vanishes, which is the
//! same as `r_{i,j} = u_i + v_j` with `Σu + Σv = 0`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::length_graded_sums;
use crate::exact::{
    int, lcm_u32, rat_pow, solve_rational, ExponentMatrix, LinearSolution, Matrix, Rat, RatLinearSystem,
};
use crate::perm::{enumerate_sn, incidence_matrix, sigma_trace, MAX_INCIDENCE};
use crate::random::Sampler;

/// The `2n − 2` matrices `R_1, …, R_n, S_2, …, S_{n−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PreserverBasis {
    pub n: usize,
    pub matrices: Vec<ExponentMatrix>,
    pub labels: Vec<String>,
}

pub fn basis(n: usize) -> Result<PreserverBasis> {
    if n < 2 {
        return Err(Error::SizeTooSmall { n, min: 2 });
    }
    let last = n - 1;
    let mut matrices = Vec::with_capacity(2 * n - 2);
    let mut labels = Vec::with_capacity(2 * n - 2);
    for i in 0..n {
        matrices.push(Matrix::square(n, |a, b| {
            if b == i && a != last {
                int(1)
            } else if a == last && b != i {
                int(-1)
            } else {
                int(0)
            }
        }));
        labels.push(format!("R{}", i + 1));
    }
    for j in 1..last {
        matrices.push(Matrix::square(n, |a, _| {
            if a == j {
                int(1)
            } else if a == last {
                int(-1)
            } else {
                int(0)
            }
        }));
        labels.push(format!("S{}", j + 1));
    }
    Ok(PreserverBasis { n, matrices, labels })
}

impl PreserverBasis {
    /// `Σ c_k B_k`.
    pub fn combination(&self, coeffs: &[Rat]) -> ExponentMatrix {
        self.matrices
            .iter()
            .zip(coeffs)
            .fold(ExponentMatrix::zeros(self.n, self.n), |acc, (b, c)| {
                acc.add(&b.scale(c))
            })
    }
}

/// Exhaustive test `Tr_σ(R) = 0` for every σ.
pub fn is_preserver(r: &ExponentMatrix) -> Result<bool> {
    let n = r.ensure_square()?;
    if n > MAX_INCIDENCE {
        return Err(Error::SizeTooLarge { n, max: MAX_INCIDENCE });
    }
    if n == 0 {
        return Ok(true);
    }
    for s in enumerate_sn(n)? {
        if !sigma_trace(r, &s)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership through the Monge condition and a vanishing trace; valid for any `n`.
pub fn in_preserver_space(r: &ExponentMatrix) -> Result<bool> {
    r.ensure_square()?;
    Ok(matches!(uv_decompose(r), UvResult::Decomposition(_)) && r.trace().is_zero())
}

/// `r_{i,j} = u_i + v_j`, in the gauge `Σu = Σv`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UVDecomposition {
    #[serde(serialize_with = "crate::format::ser_rat_vec")]
    pub u: Vec<Rat>,
    #[serde(serialize_with = "crate::format::ser_rat_vec")]
    pub v: Vec<Rat>,
}

impl UVDecomposition {
    pub fn reconstruct(&self) -> ExponentMatrix {
        Matrix::square(self.u.len(), |i, j| &self.u[i] + &self.v[j])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum UvResult {
    Decomposition(UVDecomposition),
    /// One-based `(i₁, i₂, a, b)` with `r_{i₁,a} + r_{i₂,b} ≠ r_{i₁,b} + r_{i₂,a}`.
    MongeViolation {
        witness: (usize, usize, usize, usize),
    },
}

/// Splits a Monge matrix as `u_i + v_j`.
///
/// The additive representation is unique up to `u ↦ u + c`, `v ↦ v − c`;
/// the gauge `Σu = Σv` is used. For a preserver this means `Σu = Σv = 0`.
pub fn uv_decompose(r: &ExponentMatrix) -> UvResult {
    let n = r.rows();
    for i1 in 0..n {
        for i2 in i1 + 1..n {
            for a in 0..n {
                for b in a + 1..n {
                    if &r[(i1, a)] + &r[(i2, b)] != &r[(i1, b)] + &r[(i2, a)] {
                        return UvResult::MongeViolation {
                            witness: (i1 + 1, i2 + 1, a + 1, b + 1),
                        };
                    }
                }
            }
        }
    }
    if n == 0 {
        return UvResult::Decomposition(UVDecomposition { u: vec![], v: vec![] });
    }
    let u0: Vec<Rat> = (0..n).map(|i| r[(i, 0)].clone()).collect();
    let v0: Vec<Rat> = (0..n).map(|j| &r[(0, j)] - &r[(0, 0)]).collect();
    let su: Rat = u0.iter().sum();
    let sv: Rat = v0.iter().sum();
    let c = (su - sv) / int(2 * n as i64);
    UvResult::Decomposition(UVDecomposition {
        u: u0.iter().map(|x| x - &c).collect(),
        v: v0.iter().map(|x| x + &c).collect(),
    })
}

/// Checks `Σ_σ q^{ℓ(σ)} z^{Tr_σ(R)} wt_σ(A) = P_q(A)` on random `A` and `z`.
///
/// `z = w^D` with `D` the common denominator of `R`, so every weight is an
/// integer power of a rational `w` and the check stays exact.
pub fn verify_preserver_action(r: &ExponentMatrix, trials: usize, seed: u64) -> Result<bool> {
    let n = r.ensure_square()?;
    if n > MAX_INCIDENCE {
        return Err(Error::SizeTooLarge { n, max: MAX_INCIDENCE });
    }
    let d = r.as_slice().iter().fold(1u32, |acc, x| {
        lcm_u32(acc, u32::try_from(x.denom()).expect("denominator fits in u32"))
    });
    let perms = enumerate_sn(n)?;
    let traces: Vec<i64> = perms
        .iter()
        .map(|s| {
            let t = sigma_trace(r, s)? * int(d.into());
            Ok(crate::exact::to_i64(&t).expect("scaled trace is an integer"))
        })
        .collect::<Result<_>>()?;
    let mut sampler = Sampler::new(seed);
    for _ in 0..trials {
        let a = sampler.rat_matrix(n);
        let w = loop {
            let w = sampler.nonzero_rat();
            if w.abs() != Rat::one() {
                break w;
            }
        };
        let mut weighted = vec![Rat::zero(); n * n.saturating_sub(1) / 2 + 1];
        for (s, &t) in perms.iter().zip(&traces) {
            let wt = crate::eval::weight(&a, s);
            if !wt.is_zero() {
                weighted[s.ell()] += wt * rat_pow(&w, t);
            }
        }
        if weighted != length_graded_sums(&a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ABC + CBA` for preservers `A`, `B`, `C`.
pub fn ternary_product(a: &ExponentMatrix, b: &ExponentMatrix, c: &ExponentMatrix) -> Result<ExponentMatrix> {
    for (index, m) in [a, b, c].into_iter().enumerate() {
        if !in_preserver_space(m)? {
            return Err(Error::NotAPreserver { index });
        }
    }
    let abc = a.matmul(b)?.matmul(c)?;
    let cba = c.matmul(b)?.matmul(a)?;
    let out = abc.add(&cba);
    if !in_preserver_space(&out)? {
        return Err(Error::ClosureViolation);
    }
    Ok(out)
}

/// A sheet of the unit-circle preserver set: `Tr_σ(R) = k_σ / θ` for `z = e^{2πiθ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SheetSpec {
    pub n: usize,
    pub theta: Rat,
    /// Indexed by `𝔖_n` in lexicographic order.
    pub k: Vec<i64>,
}

pub const MAX_SHEET: usize = 5;

pub(crate) fn check_theta(theta: &Rat) -> Result<()> {
    let half = Rat::new(1.into(), 2.into());
    if !theta.is_positive() || *theta >= Rat::one() || *theta == half {
        return Err(Error::InvalidArgument(format!(
            "theta must lie in (0, 1) and differ from 1/2, got {}",
            crate::exact::format_rat(theta)
        )));
    }
    Ok(())
}

/// Solves `Tr_σ(R) = k_σ/θ` for all σ; the solution is in vectorized (row-major) form.
pub fn sheet_solve(spec: &SheetSpec) -> Result<LinearSolution> {
    let n = spec.n;
    if n > MAX_SHEET {
        return Err(Error::SizeTooLarge { n, max: MAX_SHEET });
    }
    check_theta(&spec.theta)?;
    let a = incidence_matrix(n)?;
    if spec.k.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: spec.k.len(),
        });
    }
    let b = spec.k.iter().map(|&k| int(k) / &spec.theta).collect();
    Ok(solve_rational(&RatLinearSystem::new(a, b)?))
}

/// The closed-form n = 3 particular solution, with `k` indexed by
/// id, (23), (12), (123), (132), (13). Valid when `k` is admissible.
pub fn sheet_template_n3(k: &[i64; 6], theta: &Rat) -> ExponentMatrix {
    let [k1, k2, k3, _k4, k5, k6] = *k;
    let m = Matrix::from_i64_rows(&[&[0, 0, 0], &[0, k1 - k3, k2 - k5], &[-k1 + k3 + k6, k5, k3]]);
    m.scale(&theta.recip())
}

/// Reshapes a row-major vector into a square matrix.
pub fn unvec(n: usize, v: &[Rat]) -> ExponentMatrix {
    Matrix::from_vec(n, n, v[..n * n].to_vec())
}

/// The representative of `M + R_n` whose last row vanishes, as do the
/// last-column entries of rows `2..n−1`. Integer input stays integer.
pub fn reduce_mod_preservers(m: &ExponentMatrix) -> ExponentMatrix {
    let n = m.rows();
    if n < 2 {
        return m.clone();
    }
    let last = n - 1;
    // Subtract K = (u_i + v_j) with Σu + Σv = 0, which has zero σ-traces.
    let v: Vec<Rat> = (0..n).map(|j| m[(last, j)].clone()).collect();
    let mut u = vec![Rat::zero(); n];
    for i in 1..last {
        u[i] = &m[(i, last)] - &v[last];
    }
    let total = u.iter().chain(&v).fold(Rat::zero(), |acc, x| acc + x);
    u[0] = -total;
    Matrix::square(n, |i, j| &m[(i, j)] - &u[i] - &v[j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rank, rat, solve_many};
    use crate::perm::Perm;
    use proptest::prelude::*;

    fn random_preserver(s: &mut Sampler, n: usize) -> ExponentMatrix {
        let b = basis(n).unwrap();
        let coeffs: Vec<Rat> = (0..b.matrices.len()).map(|_| s.rat()).collect();
        b.combination(&coeffs)
    }

    #[test]
    fn reduction_is_a_canonical_coset_representative() {
        let mut s = Sampler::new(5);
        for n in 2..=5 {
            let m = s.rat_matrix(n);
            let red = reduce_mod_preservers(&m);
            assert!(in_preserver_space(&m.sub(&red)).unwrap());
            assert!(red.row(n - 1).iter().all(Zero::is_zero));
            assert!((1..n - 1).all(|i| red[(i, n - 1)].is_zero()));
            assert_eq!(reduce_mod_preservers(&m.add(&random_preserver(&mut s, n))), red);
        }
    }

    #[test]
    fn basis_for_three() {
        let b = basis(3).unwrap();
        let want = [
            Matrix::from_i64_rows(&[&[1, 0, 0], &[1, 0, 0], &[0, -1, -1]]),
            Matrix::from_i64_rows(&[&[0, 1, 0], &[0, 1, 0], &[-1, 0, -1]]),
            Matrix::from_i64_rows(&[&[0, 0, 1], &[0, 0, 1], &[-1, -1, 0]]),
            Matrix::from_i64_rows(&[&[0, 0, 0], &[1, 1, 1], &[-1, -1, -1]]),
        ];
        assert_eq!(b.matrices, want);
        assert_eq!(b.labels, ["R1", "R2", "R3", "S2"]);
        assert_eq!(basis(2).unwrap().matrices.len(), 2);
    }

    #[test]
    fn basis_dimension_and_traces() {
        for n in 2..=6 {
            let b = basis(n).unwrap();
            assert_eq!(b.matrices.len(), 2 * n - 2);
            let stacked = Matrix::from_fn(b.matrices.len(), n * n, |k, c| b.matrices[k].as_slice()[c].clone());
            assert_eq!(rank(&stacked), 2 * n - 2);
            for m in &b.matrices {
                assert!(is_preserver(m).unwrap());
                assert!(m.trace().is_zero());
                assert!(rank(m) <= 2);
            }
        }
    }

    #[test]
    fn basis_spans_the_kernel() {
        for n in 2..=5 {
            let a = incidence_matrix(n).unwrap();
            assert_eq!(crate::exact::kernel(&a).len(), 2 * n - 2);
        }
    }

    #[test]
    fn membership_examples() {
        assert!(is_preserver(&ExponentMatrix::zeros(3, 3)).unwrap());
        assert!(is_preserver(&basis(3).unwrap().matrices[0]).unwrap());
        assert!(!is_preserver(&ExponentMatrix::unit(3, 0, 0)).unwrap());
        assert!(is_preserver(&ExponentMatrix::zeros(7, 7)).is_err());
        assert!(in_preserver_space(&basis(9).unwrap().matrices[3]).unwrap());
    }

    #[test]
    fn uv_examples() {
        let mut s = Sampler::new(21);
        for n in 2..=5 {
            let u: Vec<Rat> = (0..n).map(|_| s.rat()).collect();
            let v: Vec<Rat> = (0..n).map(|_| s.rat()).collect();
            let r = Matrix::square(n, |i, j| &u[i] + &v[j]);
            let UvResult::Decomposition(d) = uv_decompose(&r) else {
                panic!("Monge by construction")
            };
            assert_eq!(d.reconstruct(), r);
            let shift = &d.u[0] - &u[0];
            assert!(d.u.iter().zip(&u).all(|(a, b)| a - b == shift));
            assert_eq!(d.u.iter().sum::<Rat>(), d.v.iter().sum::<Rat>());
        }
        for n in 2..=4 {
            assert_eq!(
                uv_decompose(&ExponentMatrix::unit(n, 0, 0)),
                UvResult::MongeViolation { witness: (1, 2, 1, 2) }
            );
            let UvResult::Decomposition(d) = uv_decompose(&ExponentMatrix::all_ones(n)) else {
                panic!()
            };
            assert!(d.u.iter().chain(&d.v).all(|x| *x == rat(1, 2)));
        }
        let r = random_preserver(&mut s, 4);
        let UvResult::Decomposition(d) = uv_decompose(&r) else {
            panic!()
        };
        assert!(d.u.iter().sum::<Rat>().is_zero());
        assert!(d.v.iter().sum::<Rat>().is_zero());
    }

    #[test]
    fn action_identity() {
        assert!(verify_preserver_action(&ExponentMatrix::zeros(3, 3), 3, 0).unwrap());
        let s2 = basis(3).unwrap().matrices[3].clone();
        assert!(verify_preserver_action(&s2, 50, 1).unwrap());
        assert!(!verify_preserver_action(&ExponentMatrix::unit(3, 0, 1), 5, 2).unwrap());
        let half = random_preserver(&mut Sampler::new(3), 4);
        assert!(verify_preserver_action(&half, 5, 4).unwrap());
    }

    #[test]
    fn ternary_closure() {
        let z = ExponentMatrix::zeros(3, 3);
        assert!(ternary_product(&z, &z, &z).unwrap().is_zero());
        let mut s = Sampler::new(5);
        for _ in 0..10 {
            let r = random_preserver(&mut s, 3);
            let cube = ternary_product(&r, &r, &r).unwrap();
            assert!(is_preserver(&cube).unwrap());
            let (a, b, c) = (
                random_preserver(&mut s, 4),
                random_preserver(&mut s, 4),
                random_preserver(&mut s, 4),
            );
            assert!(is_preserver(&ternary_product(&a, &b, &c).unwrap()).unwrap());
        }
        assert_eq!(
            ternary_product(&z, &ExponentMatrix::unit(3, 0, 0), &z),
            Err(Error::NotAPreserver { index: 1 })
        );
    }

    #[test]
    fn sheets_for_three() {
        let theta = rat(1, 3);
        let zero = sheet_solve(&SheetSpec {
            n: 3,
            theta: theta.clone(),
            k: vec![0; 6],
        })
        .unwrap();
        let zero = zero.solution().unwrap();
        assert!(zero.particular.iter().all(Zero::is_zero));
        assert_eq!(zero.kernel_dim(), 4);
        let bad = sheet_solve(&SheetSpec {
            n: 3,
            theta: theta.clone(),
            k: vec![1, 0, 0, 0, 0, 0],
        })
        .unwrap();
        assert!(!bad.is_consistent());
        let k = [1, 2, 0, 3, -1, 1];
        let good = sheet_solve(&SheetSpec {
            n: 3,
            theta: theta.clone(),
            k: k.to_vec(),
        })
        .unwrap();
        let sol = good.solution().unwrap();
        let r = unvec(3, &sol.particular);
        let template = sheet_template_n3(&k, &theta);
        let perms = enumerate_sn(3).unwrap();
        for (s, &ks) in perms.iter().zip(&k) {
            assert_eq!(sigma_trace(&r, s).unwrap(), int(ks) / &theta);
            assert_eq!(sigma_trace(&template, s).unwrap(), int(ks) / &theta);
        }
        assert!(is_preserver(&r.sub(&template)).unwrap());
        assert!(sheet_solve(&SheetSpec {
            n: 3,
            theta: rat(1, 2),
            k: vec![0; 6]
        })
        .is_err());
    }

    #[test]
    fn sheet_consistency_is_the_parity_balance() {
        let a = incidence_matrix(3).unwrap();
        let theta = rat(2, 5);
        let mut rhs = Vec::new();
        let mut ks = Vec::new();
        for code in 0..729u32 {
            let mut c = code;
            let k: Vec<i64> = (0..6)
                .map(|_| {
                    let d = (c % 3) as i64 - 1;
                    c /= 3;
                    d
                })
                .collect();
            rhs.push(k.iter().map(|&x| int(x) / &theta).collect());
            ks.push(k);
        }
        let perms = enumerate_sn(3).unwrap();
        for (k, sol) in ks.iter().zip(solve_many(&a, &rhs)) {
            let even: i64 = perms.iter().zip(k).filter(|(s, _)| s.sign() == 1).map(|(_, v)| v).sum();
            let odd: i64 = perms
                .iter()
                .zip(k)
                .filter(|(s, _)| s.sign() == -1)
                .map(|(_, v)| v)
                .sum();
            assert_eq!(sol.is_consistent(), even == odd, "{k:?}");
            if let LinearSolution::Solution(space) = sol {
                // Divergence bound: |Tr_σ(R)| ≤ n max|r| forces max|r| ≥ |k_σ| / (nθ).
                let r = unvec(3, &space.particular);
                let norm = r.as_slice().iter().map(|x| x.abs()).max().unwrap();
                for &kv in k {
                    assert!(norm >= int(kv.abs()) / (int(3) * &theta));
                }
            }
        }
    }

    #[test]
    fn zr_has_rank_one() {
        let mut s = Sampler::new(9);
        let b = basis(4).unwrap();
        for _ in 0..10 {
            let coeffs: Vec<Rat> = (0..6).map(|_| s.int(3)).collect();
            let r = b.combination(&coeffs);
            if r.is_zero() {
                continue;
            }
            let z0 = rat(3, 2);
            let zr = r.map(|e| rat_pow(&z0, crate::exact::to_i64(e).unwrap()));
            assert_eq!(rank(&zr), 1);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn invariance_under_transpose_and_permutations(seed in 0u64..10_000, n in 2usize..=5) {
            let mut s = Sampler::new(seed);
            let r = random_preserver(&mut s, n);
            prop_assert!(r.trace().is_zero());
            prop_assert!(rank(&r) <= 2);
            prop_assert!(in_preserver_space(&r.transpose()).unwrap());
            let (tau, nu): (Perm, Perm) = (s.perm(n), s.perm(n));
            let moved = tau.matrix::<Rat>().matmul(&r).unwrap().matmul(&nu.matrix()).unwrap();
            prop_assert!(is_preserver(&moved).unwrap());
        }
    }
}
