//! Converters for a column permutation: `P_q(A P_τ) = P_r(q^Λ ∘ A)` with
//! `r = q^x`.
//!
//! Comparing the coefficients of `wt_ν` gives one linear equation per ν,
//! `Tr_ν(Λ) + x ℓ(ν) = ℓ(τ∘ν)`, in the unknowns `(vec Λ, x)`.

use std::sync::OnceLock;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{permute_columns, qperm_naive, qperm_with_parameter, schur_apply};
use crate::exact::{
    int, is_integer, solve_modular, solve_rational, to_i64, AffineSolutionSpace, BaseSign, ExponentMatrix, Laurent,
    LinearSolution, Matrix, Rat, RatLinearSystem,
};
use crate::golden::table1;
use crate::perm::{
    dihedral_kind, enumerate_sn, incidence_for, is_dihedral, standardize, BalancedQuadruple, Perm, MAX_ENUMERATE,
    MAX_INCIDENCE,
};
use crate::preservers::{is_preserver, reduce_mod_preservers, unvec};
use crate::random::Sampler;

/// Largest size for the modular solver.
pub const MAX_MODULAR: usize = 5;

/// One element `(Λ, x)` of the converter space of `τ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Converter {
    pub tau: Perm,
    #[serde(serialize_with = "crate::format::ser_rat")]
    pub x: Rat,
    #[serde(serialize_with = "crate::format::ser_rat_matrix")]
    pub lambda: ExponentMatrix,
}

/// The affine space of `Λ` for the value of `x` the system selects.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauConverter {
    /// `Λ` is the reduced representative of the particular solution.
    pub converter: Converter,
    /// False when every `x` admits a solution; `x = sgn(τ)` is then chosen.
    pub x_forced: bool,
    /// Solutions for `Λ` with `x` fixed; the kernel is `R_n`.
    pub space: AffineSolutionSpace,
}

impl TauConverter {
    pub fn kernel_dim(&self) -> usize {
        self.space.kernel_dim()
    }
}

/// A balanced quadruple on which `f(π) = ℓ(τ∘π) − x ℓ(π)` has a nonzero
/// alternating sum that does not depend on `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionCertificate {
    pub quadruple: BalancedQuadruple,
    /// One-based positions carrying the non-dihedral pattern.
    pub positions: [usize; 4],
    pub gap: i64,
}

impl ObstructionCertificate {
    /// Recomputes balance, the vanishing `x`-coefficient and the gap.
    pub fn verify(&self, tau: &Perm) -> bool {
        let q = &self.quadruple;
        q.0.iter().all(|p| p.n() == tau.n())
            && crate::perm::is_balanced(&q.0)
            && q.alternating(|p| p.ell() as i64) == 0
            && q.alternating(|p| tau.compose(p).ell() as i64) == self.gap
            && self.gap != 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TauSolution {
    Converter(TauConverter),
    Empty {
        certificate: Option<ObstructionCertificate>,
    },
}

impl TauSolution {
    pub fn converter(&self) -> Option<&TauConverter> {
        match self {
            Self::Converter(c) => Some(c),
            Self::Empty { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&ObstructionCertificate> {
        match self {
            Self::Empty { certificate } => certificate.as_ref(),
            Self::Converter(_) => None,
        }
    }
}

fn lambda_system(tau: &Perm, perms: &[Perm], x: &Rat) -> Result<RatLinearSystem> {
    let b = perms
        .iter()
        .map(|nu| int(tau.compose(nu).ell() as i64) - x * int(nu.ell() as i64))
        .collect();
    RatLinearSystem::new(incidence_for(perms), b)
}

/// Solves the trace system for `τ ∈ 𝔖_n`, `n ≤ 6`.
pub fn solve_tau(tau: &Perm) -> Result<TauSolution> {
    let n = tau.n();
    if n > MAX_INCIDENCE {
        return Err(Error::SizeTooLarge { n, max: MAX_INCIDENCE });
    }
    let perms = enumerate_sn(n)?;
    let nn = n * n;
    // Unknowns (vec Λ, x).
    let a = Matrix::from_fn(perms.len(), nn + 1, |r, col| {
        if col == nn {
            int(perms[r].ell() as i64)
        } else if perms[r].apply(col / n) == col % n {
            int(1)
        } else {
            int(0)
        }
    });
    let b = perms.iter().map(|nu| int(tau.compose(nu).ell() as i64)).collect();
    let full = match solve_rational(&RatLinearSystem::new(a, b)?) {
        LinearSolution::Solution(s) => s,
        LinearSolution::Inconsistent { .. } => {
            return Ok(TauSolution::Empty {
                certificate: certificate(tau),
            })
        }
    };
    let x_forced = full.kernel.iter().all(|k| k[nn].is_zero());
    let x = if x_forced {
        full.particular[nn].clone()
    } else {
        int(tau.sign())
    };
    let space = solve_rational(&lambda_system(tau, &perms, &x)?)
        .into_solution()
        .expect("x was taken from a consistent system");
    let lambda = reduce_mod_preservers(&unvec(n, &space.particular));
    Ok(TauSolution::Converter(TauConverter {
        converter: Converter {
            tau: tau.clone(),
            x,
            lambda,
        },
        x_forced,
        space,
    }))
}

/// Solutions for every `τ ∈ 𝔖_n` in lexicographic order.
pub fn classify_all(n: usize) -> Result<Vec<(Perm, TauSolution)>> {
    let perms = enumerate_sn(n)?;
    perms.into_par_iter().map(|t| solve_tau(&t).map(|s| (t, s))).collect()
}

/// The quadruple displayed for the pattern `(12)`.
fn displayed_quadruple() -> [Perm; 4] {
    [[1, 2, 4, 3], [4, 2, 1, 3], [1, 3, 4, 2], [4, 3, 1, 2]].map(|v| Perm::from_one_line(&v).expect("valid"))
}

/// Certificate quadruple in `𝔖_4` for each non-dihedral pattern.
fn pattern_quadruples() -> &'static Vec<(Perm, [Perm; 4])> {
    static TABLE: OnceLock<Vec<(Perm, [Perm; 4])>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let s4 = enumerate_sn(4).expect("n = 4");
        let displayed_pattern = Perm::transposition(4, 0, 1);
        s4.iter()
            .filter(|p| !is_dihedral(p))
            .map(|p| {
                let quad = if *p == displayed_pattern {
                    displayed_quadruple()
                } else {
                    search_quadruple(p, &s4).expect("every non-dihedral pattern has an obstruction")
                };
                (p.clone(), quad)
            })
            .collect()
    })
}

/// First quadruple (lexicographic in `(π₁, π₄, π₂)`) whose `x`-coefficient
/// vanishes and whose constant term does not.
fn search_quadruple(p: &Perm, s4: &[Perm]) -> Option<[Perm; 4]> {
    for p1 in s4 {
        for p4 in s4 {
            for p2 in s4 {
                // π₃ is forced by balance.
                let images: Option<Vec<usize>> = (0..4)
                    .map(|i| {
                        let (a, d, b) = (p1.apply(i), p4.apply(i), p2.apply(i));
                        if b == a {
                            Some(d)
                        } else if b == d {
                            Some(a)
                        } else {
                            None
                        }
                    })
                    .collect();
                let Some(p3) = images.and_then(|v| Perm::new(v).ok()) else {
                    continue;
                };
                let quad = BalancedQuadruple([p1.clone(), p2.clone(), p3, p4.clone()]);
                if quad.alternating(|q| q.ell() as i64) == 0 && quad.alternating(|q| p.compose(q).ell() as i64) != 0 {
                    return Some(quad.0);
                }
            }
        }
    }
    None
}

/// Acts on the positions `idx` like `pattern`, fixing everything else.
fn lift(pattern: &Perm, idx: [usize; 4], n: usize) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    for k in 0..4 {
        images[idx[k]] = idx[pattern.apply(k)];
    }
    Perm::new(images).expect("lift of a permutation")
}

/// A certificate from the lexicographically first 4-subset whose pattern
/// is not dihedral. `None` when every pattern is dihedral (so `τ ∈ D_n`).
pub fn certificate(tau: &Perm) -> Option<ObstructionCertificate> {
    let n = tau.n();
    if n < 4 {
        return None;
    }
    let table = pattern_quadruples();
    for i1 in 0..n {
        for i2 in i1 + 1..n {
            for i3 in i2 + 1..n {
                for i4 in i3 + 1..n {
                    let idx = [i1, i2, i3, i4];
                    let pattern = standardize(tau, idx).expect("increasing indices");
                    let Some((_, quad)) = table.iter().find(|(p, _)| *p == pattern) else {
                        continue;
                    };
                    let lifted = BalancedQuadruple(quad.clone().map(|q| lift(&q, idx, n)));
                    let cert = ObstructionCertificate {
                        gap: lifted.alternating(|q| tau.compose(q).ell() as i64),
                        quadruple: lifted,
                        positions: idx.map(|i| i + 1),
                    };
                    if cert.verify(tau) {
                        return Some(cert);
                    }
                }
            }
        }
    }
    None
}

/// Both sides of the conversion identity agree on `trials` random matrices.
pub fn verify_converter(tau: &Perm, lambda: &ExponentMatrix, x: &Rat, trials: usize, seed: u64) -> Result<bool> {
    if !is_integer(x) {
        return Err(Error::NonIntegerTargetExponent {
            x: crate::exact::format_rat(x),
        });
    }
    let n = lambda.ensure_square()?;
    if tau.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: tau.n(),
        });
    }
    if n > MAX_ENUMERATE {
        return Err(Error::SizeTooLarge { n, max: MAX_ENUMERATE });
    }
    let r = Laurent::q_power(x, BaseSign::Plus)?;
    let mut sampler = Sampler::new(seed);
    for _ in 0..trials {
        let a = sampler.rat_matrix(n).to_ring();
        let lhs = qperm_naive(&permute_columns(&a, tau))?.value;
        let rhs = qperm_with_parameter(&schur_apply(lambda, &a, BaseSign::Plus)?, &r)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(x₁Λ₂ + Λ₁P_{τ₂}ᵀ, x₁x₂)`, a converter for `τ₁∘τ₂`.
pub fn compose(c1: &Converter, c2: &Converter) -> Result<Converter> {
    let n = c1.tau.n();
    if c2.tau.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c2.tau.n(),
        });
    }
    let pt = c2.tau.matrix::<Rat>().transpose();
    Ok(Converter {
        tau: c1.tau.compose(&c2.tau),
        x: &c1.x * &c2.x,
        lambda: c2.lambda.scale(&c1.x).add(&c1.lambda.matmul(&pt)?),
    })
}

/// The trivial converter, `σ₀` with `(n−1)/2 · J_n`, and `c` with the
/// last-column matrix `2i − n − 1`.
pub fn identity_converter(n: usize) -> Converter {
    Converter {
        tau: Perm::identity(n),
        x: int(1),
        lambda: ExponentMatrix::zeros(n, n),
    }
}

pub fn reversal_converter(n: usize) -> Converter {
    Converter {
        tau: Perm::longest(n),
        x: int(-1),
        lambda: ExponentMatrix::all_ones(n).scale(&Rat::new((n as i64 - 1).into(), 2.into())),
    }
}

pub fn shift_converter(n: usize) -> Converter {
    Converter {
        tau: Perm::cycle(n),
        x: int(1),
        lambda: Matrix::square(n, |i, j| {
            if j + 1 == n {
                int(2 * (i as i64 + 1) - n as i64 - 1)
            } else {
                int(0)
            }
        }),
    }
}

/// Status of `Λ₀(αβ) = Λ₀(β) + sgn(β) Λ₀(α)` for one tabulated pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocyclePair {
    pub alpha: Perm,
    pub beta: Perm,
    pub exact: bool,
    /// Equality up to a preserver.
    pub modulo_preservers: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    pub pairs: Vec<CocyclePair>,
    pub exact_count: usize,
    pub modulo_count: usize,
    /// `Λ₀(12) + Λ₀(132) = Λ₀(23) + Λ₀(123) = Λ₀(13)`.
    pub dualities_hold: bool,
}

/// Checks the cocycle rule on the tabulated `n = 3` matrices, with the
/// product `αβ = α∘β` and the table's own labels.
pub fn cocycle_check() -> CocycleReport {
    let table = table1();
    let get = |p: &Perm| &table.iter().find(|(q, _)| q == p).expect("all of 𝔖_3 tabulated").1;
    let mut pairs = Vec::with_capacity(36);
    for (alpha, la) in &table {
        for (beta, lb) in &table {
            let lhs = get(&alpha.compose(beta));
            let rhs = lb.add(&la.scale(&int(beta.sign())));
            pairs.push(CocyclePair {
                alpha: alpha.clone(),
                beta: beta.clone(),
                exact: *lhs == rhs,
                modulo_preservers: is_preserver(&lhs.sub(&rhs)).expect("n = 3"),
            });
        }
    }
    let by = |c: &str| get(&Perm::from_cycles(3, c).expect("valid")).clone();
    let left = by("(12)").add(&by("(132)"));
    let mid = by("(23)").add(&by("(123)"));
    CocycleReport {
        exact_count: pairs.iter().filter(|p| p.exact).count(),
        modulo_count: pairs.iter().filter(|p| p.modulo_preservers).count(),
        dualities_hold: left == mid && mid == by("(13)"),
        pairs,
    }
}

/// Congruence solutions modulo the order `m` of a root of unity.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ModularSolution {
    Lattice {
        x: i64,
        modulus: u64,
        /// Entries in `[0, m)`.
        #[serde(serialize_with = "crate::format::ser_rat_matrix")]
        particular: ExponentMatrix,
    },
    Empty {
        certificate: Option<ObstructionCertificate>,
    },
}

/// Solves `Tr_ν(Λ) ≡ ℓ(τν) − x ℓ(ν) (mod m)` with `x` fixed by `τ`:
/// the dihedral character for `n ≥ 4`, the sign for `n ≤ 3`.
pub fn root_of_unity_mode(tau: &Perm, m: u64) -> Result<ModularSolution> {
    let n = tau.n();
    if n > MAX_MODULAR {
        return Err(Error::SizeTooLarge { n, max: MAX_MODULAR });
    }
    if m < 3 {
        return Err(Error::InvalidArgument(format!("modulus must be at least 3, got {m}")));
    }
    let x = match (n, dihedral_kind(tau)) {
        (0..=3, _) => tau.sign(),
        (_, Some(kind)) => kind.character(),
        (_, None) => tau.sign(),
    };
    let perms = enumerate_sn(n)?;
    let sys = lambda_system(tau, &perms, &int(x))?;
    match solve_modular(&sys.a, &sys.b, m) {
        Some(v) => {
            let v: Vec<Rat> = v.into_iter().map(Rat::from_integer).collect();
            Ok(ModularSolution::Lattice {
                x,
                modulus: m,
                particular: unvec(n, &v),
            })
        }
        None => {
            let certificate = certificate(tau).filter(|c| !c.gap.unsigned_abs().is_multiple_of(m));
            Ok(ModularSolution::Empty { certificate })
        }
    }
}

/// `Tr_ν(Λ) + x ℓ(ν) − ℓ(τν)` is divisible by `m` for every ν.
pub fn satisfies_congruences(tau: &Perm, lambda: &ExponentMatrix, x: i64, m: u64) -> Result<bool> {
    let perms = enumerate_sn(tau.n())?;
    let m = m as i64;
    for nu in &perms {
        let t = crate::perm::sigma_trace(lambda, nu)?;
        let Some(t) = to_i64(&t) else { return Ok(false) };
        if (t + x * nu.ell() as i64 - tau.compose(nu).ell() as i64).rem_euclid(m) != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::perm::{dihedral_group, DihedralKind};
    use crate::preservers::basis;
    use proptest::prelude::*;

    fn p(n: usize, c: &str) -> Perm {
        Perm::from_cycles(n, c).unwrap()
    }

    #[test]
    fn n3_transposition_matches_table() {
        let s = solve_tau(&p(3, "(12)")).unwrap();
        let c = s.converter().unwrap();
        assert_eq!(c.converter.x, int(-1));
        let tab = table1().into_iter().find(|(t, _)| *t == p(3, "(12)")).unwrap().1;
        assert!(is_preserver(&tab.sub(&c.converter.lambda)).unwrap());
    }

    #[test]
    fn n3_everything_solvable_with_sign() {
        for (t, s) in classify_all(3).unwrap() {
            let c = s.converter().unwrap();
            assert!(c.x_forced);
            assert_eq!(c.converter.x, int(t.sign()));
            assert_eq!(c.kernel_dim(), 4);
            assert!(verify_converter(&t, &c.converter.lambda, &c.converter.x, 2, 0).unwrap());
        }
    }

    #[test]
    fn n2_target_exponent_is_free() {
        for (t, s) in classify_all(2).unwrap() {
            let c = s.converter().unwrap();
            assert!(!c.x_forced);
            assert_eq!(c.converter.x, int(t.sign()));
            assert!(verify_converter(&t, &c.converter.lambda, &c.converter.x, 3, 1).unwrap());
        }
    }

    /// The tabulated 3-cycle entries convert for the inverse cycle here.
    #[test]
    fn table_entries_convert_for_the_inverse_label() {
        for (label, lambda) in table1() {
            let x = int(label.sign());
            assert!(
                verify_converter(&label.inverse(), &lambda, &x, 5, 2).unwrap(),
                "{label}"
            );
            let same = verify_converter(&label, &lambda, &x, 1, 2).unwrap();
            assert_eq!(same, label == label.inverse(), "{label}");
        }
    }

    #[test]
    fn n4_dihedral_threshold_with_certificates() {
        let all = classify_all(4).unwrap();
        let solvable: Vec<_> = all.iter().filter(|(_, s)| s.converter().is_some()).collect();
        assert_eq!(solvable.len(), 8);
        for (t, s) in &all {
            match dihedral_kind(t) {
                Some(kind) => {
                    let c = s.converter().unwrap();
                    assert_eq!(c.converter.x, int(kind.character()));
                    assert_eq!(c.kernel_dim(), 6);
                }
                None => assert!(s.certificate().unwrap().verify(t)),
            }
        }
    }

    #[test]
    fn n5_has_ten_solvable() {
        let all = classify_all(5).unwrap();
        assert_eq!(all.iter().filter(|(_, s)| s.converter().is_some()).count(), 10);
        assert!(all
            .iter()
            .filter(|(t, _)| !is_dihedral(t))
            .all(|(t, s)| s.certificate().is_some_and(|c| c.verify(t))));
    }

    #[test]
    fn displayed_certificate_for_a_transposition() {
        let s = solve_tau(&p(4, "(12)")).unwrap();
        let cert = s.certificate().unwrap();
        assert_eq!(cert.quadruple.0, displayed_quadruple());
        assert_eq!(cert.gap, 2);
        assert_eq!(cert.positions, [1, 2, 3, 4]);
    }

    #[test]
    fn every_pattern_has_a_quadruple() {
        assert_eq!(pattern_quadruples().len(), 16);
        for (pat, quad) in pattern_quadruples() {
            let q = BalancedQuadruple::new(quad.clone()).unwrap();
            assert_eq!(q.alternating(|r| r.ell() as i64), 0);
            assert_ne!(q.alternating(|r| pat.compose(r).ell() as i64), 0);
        }
    }

    #[test]
    fn shift_matrix_solves_n5() {
        let s = solve_tau(&Perm::cycle(5)).unwrap();
        let c = s.converter().unwrap();
        assert_eq!(c.converter.x, int(1));
        let shift = shift_converter(5);
        assert!(is_preserver(&shift.lambda.sub(&c.converter.lambda)).unwrap());
        assert!(verify_converter(&shift.tau, &shift.lambda, &shift.x, 1, 0).unwrap());
    }

    #[test]
    fn closed_form_converters() {
        assert!(verify_converter(&Perm::identity(4), &ExponentMatrix::zeros(4, 4), &int(1), 2, 0).unwrap());
        let r = reversal_converter(4);
        assert!(verify_converter(&r.tau, &r.lambda, &r.x, 2, 0).unwrap());
        assert_eq!(
            verify_converter(&r.tau, &r.lambda, &rat(1, 2), 1, 0),
            Err(Error::NonIntegerTargetExponent { x: "1/2".into() })
        );
    }

    #[test]
    fn composition() {
        let t = shift_converter(4);
        let composed = compose(&identity_converter(4), &t).unwrap();
        assert_eq!(composed, t);
        let s0 = reversal_converter(5);
        let sq = compose(&s0, &s0).unwrap();
        assert!(sq.tau.is_identity());
        assert_eq!(sq.x, int(1));
        assert!(is_preserver(&sq.lambda).unwrap());
        let cs = compose(&shift_converter(5), &s0).unwrap();
        assert_eq!(cs.x, int(-1));
        assert!(verify_converter(&cs.tau, &cs.lambda, &cs.x, 1, 3).unwrap());
        assert!(matches!(compose(&s0, &t), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn x_is_a_character_on_d4_and_d5() {
        for n in [4, 5] {
            let d = dihedral_group(n).unwrap();
            let xs: Vec<(Perm, Rat)> = d
                .iter()
                .map(|(t, _)| {
                    (
                        t.clone(),
                        solve_tau(t).unwrap().converter().unwrap().converter.x.clone(),
                    )
                })
                .collect();
            let x_of = |t: &Perm| xs.iter().find(|(u, _)| u == t).unwrap().1.clone();
            for (a, xa) in &xs {
                for (b, xb) in &xs {
                    assert_eq!(x_of(&a.compose(b)), xa * xb);
                }
            }
            for (t, kind) in &d {
                let expected = if matches!(kind, DihedralKind::Rotation(_)) {
                    1
                } else {
                    -1
                };
                assert_eq!(x_of(t), int(expected));
            }
        }
    }

    #[test]
    fn kernel_is_the_preserver_space() {
        let c = solve_tau(&Perm::longest(4)).unwrap();
        let space = &c.converter().unwrap().space;
        let b = basis(4).unwrap();
        for k in &space.kernel {
            assert!(is_preserver(&unvec(4, k)).unwrap());
        }
        assert_eq!(space.kernel.len(), b.matrices.len());
    }

    #[test]
    fn cocycle_report() {
        let r = cocycle_check();
        assert_eq!(r.pairs.len(), 36);
        assert!(r.dualities_hold);
        let idid = &r.pairs[0];
        assert!(idid.alpha.is_identity() && idid.beta.is_identity() && idid.exact);
        assert!(r.exact_count <= r.modulo_count);
        assert_eq!((r.exact_count, r.modulo_count), (20, 20));
    }

    #[test]
    fn modular_mode() {
        assert!(matches!(
            root_of_unity_mode(&p(4, "(12)"), 5).unwrap(),
            ModularSolution::Empty { certificate: Some(_) }
        ));
        match root_of_unity_mode(&Perm::cycle(4), 3).unwrap() {
            ModularSolution::Lattice { x, particular, .. } => {
                assert_eq!(x, 1);
                assert!(satisfies_congruences(&Perm::cycle(4), &particular, x, 3).unwrap());
            }
            other => panic!("{other:?}"),
        }
        for t in enumerate_sn(3).unwrap() {
            assert!(matches!(
                root_of_unity_mode(&t, 7).unwrap(),
                ModularSolution::Lattice { .. }
            ));
        }
        assert!(root_of_unity_mode(&p(3, "(12)"), 2).is_err());
        assert!(matches!(
            root_of_unity_mode(&Perm::identity(6), 3),
            Err(Error::SizeTooLarge { .. })
        ));
    }

    proptest! {
        #[test]
        fn balanced_quadruples_kill_traces(seed in 0u64..200, which in 0usize..16) {
            let (_, quad) = &pattern_quadruples()[which];
            let q = BalancedQuadruple(quad.clone());
            let mut s = Sampler::new(seed);
            let l = s.rat_matrix(4);
            let alt = q.alternating(|r| crate::perm::sigma_trace(&l, r).unwrap());
            prop_assert!(alt.is_zero());
        }

        #[test]
        fn lifted_certificates_verify(seed in 0u64..500) {
            let mut s = Sampler::new(seed);
            let t = s.perm(6);
            if let Some(c) = certificate(&t) {
                prop_assert!(!is_dihedral(&t));
                prop_assert!(c.verify(&t));
            } else {
                prop_assert!(is_dihedral(&t));
            }
        }
    }
}
