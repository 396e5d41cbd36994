//! Linear maps `φ` on 2×2 matrices with `P_q(X) = det(φ(X))`.
//!
//! With `w = [x, y, z, t]ᵀ` the row-major entries of `X`, the map is a
//! 4×4 matrix `M` and the condition is `Mᵀ J(−1) M = J(q)`, where
//! `J(q) = antidiag(1, q, q, 1)`. Solutions split by the rank of the
//! leading 2×2 block: invertible (family I) or zero (family II).

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{det_rational, format_rat, ExactDiv, Laurent, Matrix, Rat, RatMatrix, RingMatrix};
use crate::random::Sampler;

/// A 4×4 matrix over `Q[q, 1/q]`.
pub type ConverterMatrix2 = RingMatrix;

fn lq(c: &Rat) -> Laurent {
    Laurent::constant(c.clone())
}

fn q_inv() -> Laurent {
    Laurent::q().powi(-1).expect("monomial")
}

/// `antidiag(1, q, q, 1)`; at `q = −1` this is the determinant form.
pub fn j_form(q: &Laurent) -> RingMatrix {
    Matrix::square(4, |i, j| match (i, j) {
        (0, 3) | (3, 0) => Laurent::one(),
        (1, 2) | (2, 1) => q.clone(),
        _ => Laurent::zero(),
    })
}

/// `E = [[0, 1], [−1, 0]]`.
pub fn e2() -> RatMatrix {
    Matrix::from_i64_rows(&[&[0, 1], &[-1, 0]])
}

fn det2(g: &RatMatrix) -> Rat {
    &g[(0, 0)] * &g[(1, 1)] - &g[(0, 1)] * &g[(1, 0)]
}

fn check_g(g: &RatMatrix) -> Result<Rat> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: g.rows(),
        });
    }
    let d = det2(g);
    if d.is_zero() {
        return Err(Error::SingularG);
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyIParams {
    #[serde(serialize_with = "crate::format::ser_rat_matrix")]
    pub g: RatMatrix,
    #[serde(serialize_with = "crate::format::ser_rat")]
    pub alpha: Rat,
    #[serde(serialize_with = "crate::format::ser_rat")]
    pub beta: Rat,
}

impl FamilyIParams {
    /// `γ = −q/det(G) − αβ`.
    pub fn gamma(&self) -> Result<Laurent> {
        let d = check_g(&self.g)?;
        Ok(&Laurent::q().scale_by(&-d.recip()) - &lq(&(&self.alpha * &self.beta)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyIIParams {
    #[serde(serialize_with = "crate::format::ser_rat_matrix")]
    pub g: RatMatrix,
    #[serde(serialize_with = "crate::format::ser_rat")]
    pub mu: Rat,
}

/// `G Q_{1/q} E = [[−a, b/q], [−c, d/q]]`.
fn g_q_e(g: &RatMatrix) -> Matrix<Laurent> {
    let qi = q_inv();
    Matrix::square(2, |i, j| {
        if j == 0 {
            lq(&-g[(i, 0)].clone())
        } else {
            qi.scale_by(&g[(i, 1)])
        }
    })
}

fn assemble(a: &Matrix<Laurent>, b: &Matrix<Laurent>, c: &Matrix<Laurent>, d: &Matrix<Laurent>) -> ConverterMatrix2 {
    Matrix::square(4, |i, j| {
        let blk = match (i < 2, j < 2) {
            (true, true) => a,
            (true, false) => b,
            (false, true) => c,
            (false, false) => d,
        };
        blk[(i % 2, j % 2)].clone()
    })
}

/// `[[G, B], [αG, D]]` with `B = β G Q_{1/q} E` and `D = −γ G Q_{1/q} E`.
pub fn build_family_i(p: &FamilyIParams) -> Result<ConverterMatrix2> {
    let gamma = p.gamma()?;
    let gqe = g_q_e(&p.g);
    let g = p.g.map(lq);
    let b = gqe.map(|v| v.scale_by(&p.beta));
    let d = gqe.map(|v| -(v * &gamma));
    Ok(assemble(&g, &b, &g.map(|v| v.scale_by(&p.alpha)), &d))
}

/// `[[0, B], [G, μB]]` with `B = [[aq, −b], [cq, −d]] / det(G)`.
pub fn build_family_ii(p: &FamilyIIParams) -> Result<ConverterMatrix2> {
    let inv = check_g(&p.g)?.recip();
    let q = Laurent::q();
    let b = Matrix::square(2, |i, j| {
        if j == 0 {
            q.scale_by(&(&p.g[(i, 0)] * &inv))
        } else {
            lq(&-(&p.g[(i, 1)] * &inv))
        }
    });
    let zero = Matrix::square(2, |_, _| Laurent::zero());
    Ok(assemble(&zero, &b, &p.g.map(lq), &b.map(|v| v.scale_by(&p.mu))))
}

/// `Mᵀ J(−1) M = J(q)`, checked symbolically.
pub fn congruence_holds(m: &ConverterMatrix2) -> Result<bool> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: m.rows(),
        });
    }
    let lhs = m.transpose().matmul(&j_form(&Laurent::from_int(-1)))?.matmul(m)?;
    Ok(lhs == j_form(&Laurent::q()))
}

/// `φ(X)`: the row-major reshape of `M [x, y, z, t]ᵀ`.
pub fn apply_map(m: &ConverterMatrix2, x: &RingMatrix) -> RingMatrix {
    let w = [&x[(0, 0)], &x[(0, 1)], &x[(1, 0)], &x[(1, 1)]];
    Matrix::square(2, |i, j| {
        let r = 2 * i + j;
        (0..4).fold(Laurent::zero(), |acc, k| &acc + &(&m[(r, k)] * w[k]))
    })
}

/// `P_q(X) = det(φ(X))` on `trials` random rational `X`.
pub fn conversion_holds(m: &ConverterMatrix2, trials: usize, seed: u64) -> bool {
    let mut s = Sampler::new(seed);
    (0..trials).all(|_| {
        let x = s.rat_matrix(2).to_ring();
        let pq = &(&x[(0, 0)] * &x[(1, 1)]) + &(&Laurent::q() * &(&x[(0, 1)] * &x[(1, 0)]));
        let y = apply_map(m, &x);
        let det = &(&y[(0, 0)] * &y[(1, 1)]) - &(&y[(0, 1)] * &y[(1, 0)]);
        pq == det
    })
}

/// Symbolic congruence plus a spot check of the conversion itself.
pub fn verify_congruence(m: &ConverterMatrix2, trials: usize, seed: u64) -> Result<bool> {
    Ok(congruence_holds(m)? && conversion_holds(m, trials, seed))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family")]
pub enum Dim2Class {
    #[serde(rename = "I")]
    FamilyI(FamilyIParams),
    #[serde(rename = "II")]
    FamilyII(FamilyIIParams),
    #[serde(rename = "none")]
    NotAConverter,
}

fn block(m: &ConverterMatrix2, bi: usize, bj: usize) -> Matrix<Laurent> {
    Matrix::square(2, |i, j| m[(2 * bi + i, 2 * bj + j)].clone())
}

fn constant_block(b: &Matrix<Laurent>) -> Result<RatMatrix> {
    b.try_map(|_, _, v| v.as_constant().ok_or(Error::NonConstantBlock))
}

/// `num / den` where the quotient must be a constant.
fn constant_ratio(num: &Laurent, den: &Laurent) -> Result<Rat> {
    num.exact_div(den)
        .and_then(|r| r.as_constant())
        .ok_or(Error::NonConstantBlock)
}

/// First nonzero position of `G` in row-major order.
fn pivot(g: &RatMatrix) -> (usize, usize) {
    g.iter()
        .find(|(_, _, v)| !v.is_zero())
        .map(|(i, j, _)| (i, j))
        .expect("invertible G has a nonzero entry")
}

/// Sorts a converter into its family and reads off the parameters.
pub fn classify(m: &ConverterMatrix2) -> Result<Dim2Class> {
    if !congruence_holds(m)? {
        return Ok(Dim2Class::NotAConverter);
    }
    let a = constant_block(&block(m, 0, 0))?;
    let det_a = det2(&a);
    let (class, rebuilt) = if !det_a.is_zero() {
        let k = pivot(&a);
        let alpha = constant_ratio(&block(m, 1, 0)[k], &lq(&a[k]))?;
        let beta = constant_ratio(&block(m, 0, 1)[k], &g_q_e(&a)[k])?;
        let p = FamilyIParams { g: a, alpha, beta };
        let rebuilt = build_family_i(&p)?;
        (Dim2Class::FamilyI(p), rebuilt)
    } else if a.is_zero() {
        let g = constant_block(&block(m, 1, 0))?;
        check_g(&g)?;
        let b = block(m, 0, 1);
        let k = b
            .iter()
            .find(|(_, _, v)| !v.is_zero())
            .map(|(i, j, _)| (i, j))
            .expect("B is invertible");
        let mu = constant_ratio(&block(m, 1, 1)[k], &b[k])?;
        let p = FamilyIIParams { g, mu };
        let rebuilt = build_family_ii(&p)?;
        (Dim2Class::FamilyII(p), rebuilt)
    } else {
        return Err(Error::RankOneParadox);
    };
    if rebuilt != *m {
        return Err(Error::InvalidArgument(
            "congruence holds but the blocks do not match the extracted parameters".into(),
        ));
    }
    Ok(class)
}

/// `Xᵀ E X = det(X) E` on `trials` random rational 2×2 matrices.
pub fn adjugate_identity_holds(trials: usize, seed: u64) -> bool {
    let e = e2();
    let mut s = Sampler::new(seed);
    (0..trials).all(|_| {
        let x = s.rat_matrix(2);
        let lhs = x.transpose().matmul(&e).and_then(|y| y.matmul(&x)).expect("2×2");
        lhs == e.scale(&det_rational(&x))
    })
}

fn random_g(s: &mut Sampler) -> RatMatrix {
    loop {
        let g = s.rat_matrix(2);
        if !det2(&g).is_zero() {
            return g;
        }
    }
}

pub fn random_family_i(s: &mut Sampler) -> FamilyIParams {
    FamilyIParams {
        g: random_g(s),
        alpha: s.rat(),
        beta: s.rat(),
    }
}

pub fn random_family_ii(s: &mut Sampler) -> FamilyIIParams {
    FamilyIIParams {
        g: random_g(s),
        mu: s.rat(),
    }
}

/// Human-readable parameters, for reports.
pub fn describe(class: &Dim2Class) -> String {
    let g_text = |g: &RatMatrix| {
        let r: Vec<String> = (0..2)
            .map(|i| format!("[{}, {}]", format_rat(&g[(i, 0)]), format_rat(&g[(i, 1)])))
            .collect();
        format!("[{}]", r.join(", "))
    };
    match class {
        Dim2Class::FamilyI(p) => format!(
            "family I: G = {}, alpha = {}, beta = {}, gamma = {}",
            g_text(&p.g),
            format_rat(&p.alpha),
            format_rat(&p.beta),
            p.gamma().map(|g| g.to_string()).unwrap_or_default()
        ),
        Dim2Class::FamilyII(p) => format!("family II: G = {}, mu = {}", g_text(&p.g), format_rat(&p.mu)),
        Dim2Class::NotAConverter => "not a converter".into(),
    }
}
