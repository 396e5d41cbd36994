//! Lower Hessenberg matrices (`a_{i,j} = 0` for `j > i + 1`).
//!
//! Only the `2^{n-1}` permutations with `σ(i) ≤ i + 1` contribute to any
//! expansion of such a matrix, and on those `Tr_σ(H₀) = ℓ(σ)` for the
//! superdiagonal matrix `H₀`. Hence `P_q(A) = det((−q)^{H₀} ∘ A)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{schur_apply_with, Method, QPermResult};
use crate::exact::{
    det_bareiss, det_rational, int, is_integer, left_nullspace, rank, BaseSign, ExponentMatrix, Laurent, Matrix, Rat,
    RatMatrix, Ring, RingMatrix,
};
use crate::perm::{hessenberg_perms, sigma_trace, Perm};
use crate::preservers::check_theta;

/// Superdiagonal ones.
pub fn h0(n: usize) -> ExponentMatrix {
    Matrix::square(n, |i, j| if j == i + 1 { int(1) } else { int(0) })
}

/// First nonzero entry above the superdiagonal, zero-based.
pub fn hessenberg_violation<T: Ring>(a: &Matrix<T>) -> Option<(usize, usize)> {
    let n = a.rows();
    for i in 0..n {
        for j in i + 2..a.cols() {
            if !a[(i, j)].is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

fn check_pattern<T: Ring>(a: &Matrix<T>) -> Result<usize> {
    let n = a.ensure_square()?;
    if let Some((row, col)) = hessenberg_violation(a) {
        return Err(Error::NotHessenberg {
            row: row + 1,
            col: col + 1,
        });
    }
    Ok(n)
}

/// `P_q(A)` as `det((−q)^{H₀} ∘ A)` with fraction-free elimination.
pub fn qperm_hessenberg_fast(a: &RingMatrix) -> Result<QPermResult> {
    let n = check_pattern(a)?;
    let b = schur_apply_with(&h0(n), a, BaseSign::Minus, true)?;
    Ok(QPermResult {
        value: det_bareiss(&b),
        method: Method::HessenbergDet,
        term_count: 1u64 << n.saturating_sub(1).min(63),
    })
}

/// `(−q₀)^{H₀} ∘ A`: the superdiagonal is multiplied by `−q₀`.
fn signed_superdiagonal(a: &RatMatrix, q0: &Rat) -> RatMatrix {
    let mq = -q0.clone();
    Matrix::square(a.rows(), |i, j| {
        if j == i + 1 {
            &a[(i, j)] * &mq
        } else {
            a[(i, j)].clone()
        }
    })
}

/// `P_{q0}(A)` for a rational Hessenberg matrix.
pub fn qperm_hessenberg_numeric(a: &RatMatrix, q0: &Rat) -> Result<Rat> {
    check_pattern(a)?;
    if q0.is_zero() {
        return Err(Error::ZeroQ);
    }
    Ok(det_rational(&signed_superdiagonal(a, q0)))
}

/// Leading-minor recurrence for lower Hessenberg determinants, `O(n²)` ring
/// operations:
/// `D_k = Σ_{i ≤ k} (−1)^{k−i} b_{k,i} (Π_{j=i}^{k−1} b_{j,j+1}) D_{i−1}`.
pub fn det_lower_hessenberg_recurrence<T: Ring>(b: &Matrix<T>) -> Result<T> {
    let n = check_pattern(b)?;
    let mut d: Vec<T> = Vec::with_capacity(n + 1);
    d.push(T::one());
    for k in 0..n {
        let mut acc = T::zero();
        let mut chain = T::one();
        // Walk i downward from k so the superdiagonal product grows by one factor per step.
        for i in (0..=k).rev() {
            if i < k {
                chain = chain * b[(i, i + 1)].clone();
                if chain.is_zero() {
                    break;
                }
            }
            let entry = &b[(k, i)];
            if entry.is_zero() {
                continue;
            }
            let term = entry.clone() * chain.clone() * d[i].clone();
            acc = if (k - i) % 2 == 0 { acc + term } else { acc - term };
        }
        d.push(acc);
    }
    Ok(d.pop().expect("nonempty"))
}

/// Regime for the parameter `q`.
#[derive(Clone, Debug, PartialEq)]
pub enum QSpec {
    /// `|q| ≠ 1`.
    GenericModulus,
    /// `q = e^{2πiθ}` with rational `θ ∈ (0, 1) \ {1/2}`.
    RootOfUnityTheta(Rat),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    PlusOnly,
    PlusAndMinus,
    Neither,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HessenbergExponent {
    pub h: ExponentMatrix,
    pub classification: Classification,
    /// Sheet index `k_σ = θ (Tr_σ(H) − ℓ(σ))` over `𝔖_n*`, when every entry is an integer.
    pub k: Option<Vec<BigInt>>,
}

pub const MAX_MEMBERSHIP: usize = 6;

/// Decides whether `per(q^H ∘ A)` and/or `det((−q)^H ∘ A)` equal `P_q(A)` on all Hessenberg `A`.
pub fn membership(h: &ExponentMatrix, q_spec: &QSpec) -> Result<HessenbergExponent> {
    let n = h.ensure_square()?;
    if n > MAX_MEMBERSHIP {
        return Err(Error::SizeTooLarge { n, max: MAX_MEMBERSHIP });
    }
    let perms = hessenberg_perms(n.max(1))?;
    let diffs: Vec<Rat> = if n == 0 {
        vec![]
    } else {
        perms
            .iter()
            .map(|s| Ok(sigma_trace(h, s)? - int(s.ell() as i64)))
            .collect::<Result<_>>()?
    };
    let (classification, k) = match q_spec {
        QSpec::GenericModulus => {
            let exact = diffs.iter().all(Zero::is_zero);
            let c = if exact {
                Classification::PlusAndMinus
            } else {
                Classification::Neither
            };
            (c, exact.then(|| vec![BigInt::zero(); diffs.len()]))
        }
        QSpec::RootOfUnityTheta(theta) => {
            check_theta(theta)?;
            let ks: Vec<Rat> = diffs.iter().map(|d| d * theta).collect();
            if ks.iter().all(is_integer) {
                let parity = diffs.iter().all(|d| is_integer(&(d / int(2))));
                let c = if parity {
                    Classification::PlusAndMinus
                } else {
                    Classification::PlusOnly
                };
                (c, Some(ks.iter().map(|k| k.numer().clone()).collect()))
            } else {
                (Classification::Neither, None)
            }
        }
    };
    Ok(HessenbergExponent {
        h: h.clone(),
        classification,
        k,
    })
}

/// Sheet-index parity rule for `θ = p/r` in lowest terms: `k ∈ 2pℤ` for odd
/// `r`, `k ∈ pℤ` for even `r`.
pub fn determinant_sheet_allowed(k: &BigInt, theta: &Rat) -> bool {
    let p = theta.numer().abs();
    let r = theta.denom();
    let step = if r % 2u32 == BigInt::zero() { p } else { p * 2 };
    (k % step).is_zero()
}

/// The five-parameter family of exponents for n = 3 on the unit circle,
/// exactly as laid out entrywise:
///
/// ```text
/// [ a                  b                  h13 ]
/// [ k1/θ + 1 − b − d   k2/θ − a − d       c   ]
/// [ k3/θ + 2 − b − c   k4/θ + 1 − a − c   d   ]
/// ```
///
/// Its σ-traces are `ℓ(σ) + k/θ` with `k1 ↔ (12)`, `k2 ↔ id`,
/// `k3 ↔ (123)`, `k4 ↔ (23)`.
#[derive(Clone, Debug, PartialEq)]
pub struct N3SheetParams {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
    pub h13: Rat,
    pub k: [i64; 4],
    pub theta: Rat,
}

pub fn n3_sheet_family(p: &N3SheetParams) -> Result<ExponentMatrix> {
    check_theta(&p.theta)?;
    let kt = |i: usize| int(p.k[i]) / &p.theta;
    let one = int(1);
    let two = int(2);
    Matrix::from_rows(vec![
        vec![p.a.clone(), p.b.clone(), p.h13.clone()],
        vec![kt(0) + &one - &p.b - &p.d, kt(1) - &p.a - &p.d, p.c.clone()],
        vec![kt(2) + &two - &p.b - &p.c, kt(3) + &one - &p.a - &p.c, p.d.clone()],
    ])
}

/// The permutation that each `k_i` of [`n3_sheet_family`] is attached to.
pub fn n3_sheet_slots() -> [Perm; 4] {
    ["(12)", "id", "(123)", "(23)"].map(|c| Perm::from_cycles(3, c).expect("valid"))
}

/// Left null space of the trace map `H ↦ (Tr_σ(H))_{σ ∈ 𝔖_n*}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeConstraints {
    pub n: usize,
    pub perms: Vec<Perm>,
    /// Dimension of the lower Hessenberg space, `(n² + 3n − 2)/2`.
    pub d_n: usize,
    pub rank: usize,
    #[serde(serialize_with = "crate::format::ser_bigint_vecs")]
    pub relations: Vec<Vec<BigInt>>,
}

impl LatticeConstraints {
    pub fn is_surjective(&self) -> bool {
        self.relations.is_empty()
    }

    /// Renders a relation as `k_id + k_(12)(34) - k_(12) - k_(34) = 0`.
    pub fn describe(&self, idx: usize) -> String {
        let mut out = String::new();
        for (c, s) in self.relations[idx].iter().zip(&self.perms) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&format!("k_{s}"));
        }
        out.push_str(" = 0");
        out
    }
}

pub const MAX_LATTICE: usize = 7;

pub fn lattice_constraints(n: usize) -> Result<LatticeConstraints> {
    if n > MAX_LATTICE {
        return Err(Error::SizeTooLarge { n, max: MAX_LATTICE });
    }
    let perms = hessenberg_perms(n)?;
    let cols: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j <= i + 1).map(move |j| (i, j)))
        .collect();
    let m = Matrix::from_fn(perms.len(), cols.len(), |r, c| {
        let (i, j) = cols[c];
        if perms[r].apply(i) == j {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    Ok(LatticeConstraints {
        n,
        d_n: cols.len(),
        rank: rank(&m),
        relations: left_nullspace(&m),
        perms,
    })
}

/// Rank of the trace map over all `n × n` matrices restricted to `𝔖_n*`.
pub fn restricted_kernel_dim(n: usize) -> Result<usize> {
    let perms = hessenberg_perms(n)?;
    Ok(n * n - rank(&crate::perm::incidence_for(&perms)))
}

/// `per(q^{H} ∘ A)` and `det((−q)^{H} ∘ A)` for a Hessenberg `A`, skipping
/// exponents at structurally zero positions.
pub fn converted_pair(h: &ExponentMatrix, a: &RingMatrix) -> Result<(Laurent, Laurent)> {
    check_pattern(a)?;
    let plus = schur_apply_with(h, a, BaseSign::Plus, true)?;
    let minus = schur_apply_with(h, a, BaseSign::Minus, true)?;
    Ok((crate::eval::permanent(&plus)?, det_bareiss(&minus)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::qperm_naive;
    use crate::exact::rat;
    use crate::random::Sampler;

    #[test]
    fn h0_small() {
        assert_eq!(h0(2), Matrix::from_i64_rows(&[&[0, 1], &[0, 0]]));
        for s in hessenberg_perms(6).unwrap() {
            assert_eq!(sigma_trace(&h0(6), &s).unwrap(), int(s.ell() as i64));
        }
    }

    #[test]
    fn fast_matches_naive() {
        let mut s = Sampler::new(31);
        for n in 1..=7 {
            let a = s.hessenberg_rat(n).to_ring();
            let fast = qperm_hessenberg_fast(&a).unwrap();
            assert_eq!(fast.method, Method::HessenbergDet);
            assert_eq!(fast.value, qperm_naive(&a).unwrap().value);
        }
        let tri = Matrix::from_i64_rows(&[&[2, 0, 0], &[5, 3, 0], &[1, 1, -4]]).to_ring();
        assert_eq!(qperm_hessenberg_fast(&tri).unwrap().value, Laurent::from_int(-24));
    }

    #[test]
    fn pattern_violation_reports_position() {
        let mut a = RingMatrix::identity(4);
        a[(0, 3)] = Laurent::one();
        assert_eq!(
            qperm_hessenberg_fast(&a).unwrap_err(),
            Error::NotHessenberg { row: 1, col: 4 }
        );
    }

    #[test]
    fn numeric_fast_path_agrees_with_recurrence() {
        let mut s = Sampler::new(32);
        let q0 = rat(3, 2);
        for n in [6, 12, 30] {
            let a = s.hessenberg_rat(n);
            let b = signed_superdiagonal(&a, &q0);
            assert_eq!(
                qperm_hessenberg_numeric(&a, &q0).unwrap(),
                det_lower_hessenberg_recurrence(&b).unwrap()
            );
        }
        let a = s.hessenberg_rat(6);
        assert_eq!(
            qperm_hessenberg_numeric(&a, &q0).unwrap(),
            crate::eval::qperm_numeric(&a, &q0).unwrap()
        );
    }

    #[test]
    fn three_way_equality() {
        let mut s = Sampler::new(33);
        for n in 2..=6 {
            let a = s.hessenberg_rat(n).to_ring();
            let (per, det) = converted_pair(&h0(n), &a).unwrap();
            let p = qperm_naive(&a).unwrap().value;
            assert_eq!(per, p);
            assert_eq!(det, p);
        }
    }

    #[test]
    fn membership_examples() {
        let theta = QSpec::RootOfUnityTheta(rat(1, 3));
        for spec in [QSpec::GenericModulus, theta.clone()] {
            assert_eq!(
                membership(&h0(3), &spec).unwrap().classification,
                Classification::PlusAndMinus
            );
            let free = h0(3).add(&ExponentMatrix::unit(3, 0, 2));
            assert_eq!(
                membership(&free, &spec).unwrap().classification,
                Classification::PlusAndMinus
            );
            let bad = h0(3).add(&ExponentMatrix::unit(3, 0, 0));
            assert_eq!(membership(&bad, &spec).unwrap().classification, Classification::Neither);
        }
        // One sheet step k/θ = 3 is odd: permanent converter only.
        let p = N3SheetParams {
            a: int(0),
            b: int(0),
            c: int(0),
            d: int(0),
            h13: int(0),
            k: [1, 0, 0, 0],
            theta: rat(1, 3),
        };
        let h = n3_sheet_family(&p).unwrap();
        let m = membership(&h, &theta).unwrap();
        assert_eq!(m.classification, Classification::PlusOnly);
        assert_eq!(
            membership(&h, &QSpec::GenericModulus).unwrap().classification,
            Classification::Neither
        );
        assert!(membership(&h0(7), &QSpec::GenericModulus).is_err());
    }

    #[test]
    fn parity_rule_matches_direct_condition() {
        for (p, r) in [(1, 3), (2, 3), (1, 4), (3, 4), (2, 5), (3, 8)] {
            let theta = rat(p, r);
            for k in -20i64..=20 {
                let direct = is_integer(&(int(k) / &theta / int(2)));
                assert_eq!(
                    determinant_sheet_allowed(&BigInt::from(k), &theta),
                    direct,
                    "{p}/{r} k={k}"
                );
            }
        }
    }

    #[test]
    fn n3_sheet_traces() {
        let zero = N3SheetParams {
            a: int(0),
            b: int(0),
            c: int(0),
            d: int(0),
            h13: int(0),
            k: [0; 4],
            theta: rat(1, 3),
        };
        let h = n3_sheet_family(&zero).unwrap();
        assert_eq!(h, Matrix::from_i64_rows(&[&[0, 0, 0], &[1, 0, 0], &[2, 1, 0]]));
        for s in hessenberg_perms(3).unwrap() {
            assert_eq!(sigma_trace(&h, &s).unwrap(), int(s.ell() as i64));
        }
        let mut rng = Sampler::new(34);
        for _ in 0..20 {
            let p = N3SheetParams {
                a: rng.rat(),
                b: rng.rat(),
                c: rng.rat(),
                d: rng.rat(),
                h13: rng.rat(),
                k: [rng.int(3), rng.int(3), rng.int(3), rng.int(3)].map(|x| crate::exact::to_i64(&x).unwrap()),
                theta: rat(2, 7),
            };
            let h = n3_sheet_family(&p).unwrap();
            for (slot, k) in n3_sheet_slots().iter().zip(p.k) {
                assert_eq!(
                    sigma_trace(&h, slot).unwrap(),
                    int(slot.ell() as i64) + int(k) / &p.theta
                );
            }
            // Same k, different free parameters: same coset of the Hessenberg kernel.
            let base = n3_sheet_family(&N3SheetParams {
                a: int(1),
                b: int(1),
                c: int(1),
                d: int(1),
                ..p.clone()
            })
            .unwrap();
            let diff = h.sub(&base);
            for s in hessenberg_perms(3).unwrap() {
                assert!(sigma_trace(&diff, &s).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn first_sheet_step_lands_on_the_transposition_12() {
        let p = N3SheetParams {
            a: int(0),
            b: int(0),
            c: int(0),
            d: int(0),
            h13: int(0),
            k: [1, 0, 0, 0],
            theta: rat(1, 3),
        };
        let h = n3_sheet_family(&p).unwrap();
        let t12 = Perm::from_cycles(3, "(12)").unwrap();
        let t23 = Perm::from_cycles(3, "(23)").unwrap();
        assert_eq!(sigma_trace(&h, &t12).unwrap(), int(1 + 3));
        assert_eq!(sigma_trace(&h, &t23).unwrap(), int(1));
    }

    #[test]
    fn lattice_relations() {
        assert!(lattice_constraints(2).unwrap().is_surjective());
        let l4 = lattice_constraints(4).unwrap();
        assert_eq!(l4.relations.len(), 1);
        assert_eq!(l4.describe(0), "k_id - k_(34) - k_(12) + k_(12)(34) = 0");
        let coeff = |c: &str| {
            let s = Perm::from_cycles(4, c).unwrap();
            let i = l4.perms.iter().position(|p| *p == s).unwrap();
            l4.relations[0][i].clone()
        };
        let want = [("id", 1), ("(12)(34)", 1), ("(12)", -1), ("(34)", -1)];
        for (c, v) in want {
            assert_eq!(coeff(c), BigInt::from(v));
        }
        assert_eq!(l4.relations[0].iter().filter(|c| !c.is_zero()).count(), 4);
        let l5 = lattice_constraints(5).unwrap();
        assert_eq!((l5.d_n, l5.rank, l5.relations.len()), (19, 11, 5));
        let l6 = lattice_constraints(6).unwrap();
        assert_eq!(l6.d_n, 26);
        assert!(l6.relations.len() >= 6);
        assert!(lattice_constraints(8).is_err());
    }

    #[test]
    fn restricted_kernel_dimension() {
        for n in 2..=6 {
            assert_eq!(restricted_kernel_dim(n).unwrap(), (2 * n - 2) + (n - 1) * (n - 2) / 2);
        }
    }

    #[test]
    fn generic_members_convert() {
        let mut s = Sampler::new(35);
        let b = crate::preservers::basis(4).unwrap();
        for _ in 0..5 {
            let coeffs: Vec<Rat> = (0..6).map(|_| s.int(2)).collect();
            let mut h = h0(4).add(&b.combination(&coeffs));
            // Free non-integer exponents above the superdiagonal.
            h[(0, 2)] = rat(1, 3);
            h[(0, 3)] = rat(-5, 2);
            h[(1, 3)] = rat(7, 4);
            assert_eq!(
                membership(&h, &QSpec::GenericModulus).unwrap().classification,
                Classification::PlusAndMinus
            );
            let a = s.hessenberg_rat(4).to_ring();
            let (per, det) = converted_pair(&h, &a).unwrap();
            let p = qperm_naive(&a).unwrap().value;
            assert_eq!(per, p);
            assert_eq!(det, p);
        }
    }
}
