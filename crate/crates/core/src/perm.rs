//! Permutations of `{0, …, n-1}` and the combinatorics built on them.
//!
//! Storage is zero-based one-line notation. User-facing text uses the
//! one-based conventions: `[2, 1, 3]` for one-line notation, and cycle
//! notation in which `(123)` sends 1 to 2, 2 to 3 and 3 to 1.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{Matrix, Rat, RatMatrix, Ring};

pub const MAX_ENUMERATE: usize = 10;
pub const MAX_HESSENBERG: usize = 20;
pub const MAX_INCIDENCE: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
    ell: usize,
}

impl Perm {
    /// Builds from zero-based images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[v] = true;
        }
        Ok(Self::from_images_unchecked(images))
    }

    fn from_images_unchecked(images: Vec<usize>) -> Self {
        let ell = inversions(&images);
        Self { images, ell }
    }

    /// Builds from one-based one-line notation `(σ(1), …, σ(n))`.
    pub fn from_one_line(one_based: &[usize]) -> Result<Self> {
        let images = one_based
            .iter()
            .map(|&v| {
                v.checked_sub(1)
                    .ok_or_else(|| Error::InvalidPermutation("one-line entries start at 1".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(images)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
            ell: 0,
        }
    }

    /// The reversal `σ₀(i) = n + 1 − i`.
    pub fn longest(n: usize) -> Self {
        Self::from_images_unchecked((0..n).rev().collect())
    }

    /// The cyclic shift `c = (12…n)`.
    pub fn cycle(n: usize) -> Self {
        Self::from_images_unchecked((0..n).map(|i| (i + 1) % n.max(1)).collect())
    }

    /// Transposition of two zero-based points.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Self::from_images_unchecked(images)
    }

    /// Parses cycle notation such as `(12)(34)`, `(1 10 3)`, `id` or `()`.
    ///
    /// Inside a cycle, points are single digits unless spaces or commas
    /// separate them.
    pub fn from_cycles(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        let mut images: Vec<usize> = (0..n).collect();
        if text == "id" || text.is_empty() {
            return Ok(Self::identity(n));
        }
        let bad = |m: &str| Error::InvalidPermutation(format!("{text:?}: {m}"));
        let mut rest = text;
        let mut seen = vec![false; n];
        while !rest.is_empty() {
            rest = rest.trim_start();
            let inner_end = rest.find(')').ok_or_else(|| bad("unbalanced parenthesis"))?;
            if !rest.starts_with('(') {
                return Err(bad("expected '('"));
            }
            let body = &rest[1..inner_end];
            rest = &rest[inner_end + 1..];
            let points: Vec<usize> = if body.contains([' ', ',']) {
                body.split([' ', ','])
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|_| bad("bad point")))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| bad("bad point")))
                    .collect::<Result<_>>()?
            };
            for &p in &points {
                if p == 0 || p > n {
                    return Err(bad("point out of range"));
                }
                if seen[p - 1] {
                    return Err(bad("point repeated"));
                }
                seen[p - 1] = true;
            }
            for (k, &p) in points.iter().enumerate() {
                images[p - 1] = points[(k + 1) % points.len()] - 1;
            }
        }
        Self::new(images)
    }

    /// Accepts cycle notation or a one-line array such as `[2,1,3]` / `2 1 3`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('(') || t == "id" {
            return Self::from_cycles(n, t);
        }
        let body = t.trim_start_matches('[').trim_end_matches(']');
        let one: Vec<usize> = body
            .split([' ', ','])
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidPermutation(format!("cannot parse {t:?}")))?;
        if one.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: one.len(),
            });
        }
        Self::from_one_line(&one)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Inversion length `ℓ(σ)`.
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn sign(&self) -> i64 {
        if self.ell.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Zero-based image of a zero-based point.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.ell == 0
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n(), "composing permutations of different sizes");
        Self::from_images_unchecked(other.images.iter().map(|&i| self.images[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Self {
            images: inv,
            ell: self.ell,
        }
    }

    pub fn pow(&self, k: usize) -> Perm {
        (0..k).fold(Self::identity(self.n()), |acc, _| acc.compose(self))
    }

    /// Whether `σ(i) ≤ i + 1` for every `i` (one-based), the permutations
    /// compatible with the lower Hessenberg zero pattern.
    pub fn is_hessenberg(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v <= i + 1)
    }

    /// Cycle notation, fixed points omitted; `id` for the identity.
    pub fn to_cycles(&self) -> String {
        let n = self.n();
        let sep = if n >= 10 { " " } else { "" };
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push((i + 1).to_string());
                i = self.images[i];
            }
            out.push('(');
            out.push_str(&cyc.join(sep));
            out.push(')');
        }
        if out.is_empty() {
            "id".into()
        } else {
            out
        }
    }

    /// Permutation matrix `P_σ` with ones at `(i, σ(i))`.
    pub fn matrix<T: Ring>(&self) -> Matrix<T> {
        Matrix::square(self.n(), |i, j| if self.images[i] == j { T::one() } else { T::zero() })
    }
}

fn inversions(images: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i] > images[j] {
                count += 1;
            }
        }
    }
    count
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycles())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.one_line())
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

/// All of `𝔖_n` in lexicographic one-line order.
///
/// For n = 3 and n = 4 this is also the order used by the published
/// tables of target vectors.
pub fn enumerate_sn(n: usize) -> Result<Vec<Perm>> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    if n > MAX_ENUMERATE {
        return Err(Error::SizeTooLarge { n, max: MAX_ENUMERATE });
    }
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        out.push(Perm::from_images_unchecked(cur.clone()));
        if !next_permutation(&mut cur) {
            return Ok(out);
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Index of every permutation in the lexicographic order.
pub fn lex_rank(p: &Perm) -> usize {
    let n = p.n();
    let mut rank = 0;
    let mut fact = (1..n).product::<usize>();
    let mut used = vec![false; n];
    for i in 0..n {
        let v = p.images[i];
        let smaller = (0..v).filter(|&u| !used[u]).count();
        rank += smaller * fact;
        used[v] = true;
        if i + 1 < n {
            fact /= n - 1 - i;
        }
    }
    rank
}

/// `Tr_σ(M) = Σᵢ m_{i,σ(i)}`.
pub fn sigma_trace<T: Ring>(m: &Matrix<T>, s: &Perm) -> Result<T> {
    m.ensure_dim(s.n())?;
    Ok((0..s.n()).fold(T::zero(), |acc, i| acc + m[(i, s.images[i])].clone()))
}

/// The `2^{n-1}` permutations with `σ(i) ≤ i + 1`, in lexicographic order.
pub fn hessenberg_perms(n: usize) -> Result<Vec<Perm>> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    if n > MAX_HESSENBERG {
        return Err(Error::SizeTooLarge { n, max: MAX_HESSENBERG });
    }
    let mut out = Vec::with_capacity(1 << (n - 1));
    let mut cur = Vec::with_capacity(n);
    hess_dfs(n, &mut cur, 0u32, &mut out);
    Ok(out)
}

fn hess_dfs(n: usize, cur: &mut Vec<usize>, used: u32, out: &mut Vec<Perm>) {
    let i = cur.len();
    if i == n {
        out.push(Perm::from_images_unchecked(cur.clone()));
        return;
    }
    for v in 0..=(i + 1).min(n - 1) {
        if used & (1 << v) == 0 {
            cur.push(v);
            hess_dfs(n, cur, used | (1 << v), out);
            cur.pop();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DihedralKind {
    /// `c^k`.
    Rotation(usize),
    /// `c^k ∘ σ₀`.
    Reflection(usize),
}

impl DihedralKind {
    /// `+1` on rotations, `-1` on reflections.
    pub fn character(self) -> i64 {
        match self {
            Self::Rotation(_) => 1,
            Self::Reflection(_) => -1,
        }
    }
}

/// `D_n = ⟨c, σ₀⟩` as `[c⁰, …, c^{n-1}, c⁰σ₀, …, c^{n-1}σ₀]`.
pub fn dihedral_group(n: usize) -> Result<Vec<(Perm, DihedralKind)>> {
    if n < 3 {
        return Err(Error::SizeTooSmall { n, min: 3 });
    }
    let c = Perm::cycle(n);
    let s0 = Perm::longest(n);
    let mut out = Vec::with_capacity(2 * n);
    let mut ck = Perm::identity(n);
    for k in 0..n {
        out.push((ck.clone(), DihedralKind::Rotation(k)));
        ck = c.compose(&ck);
    }
    for k in 0..n {
        let (r, _) = &out[k];
        out.push((r.compose(&s0), DihedralKind::Reflection(k)));
    }
    Ok(out)
}

/// Dihedral tag of `tau`, or `None` if `tau ∉ D_n`.
pub fn dihedral_kind(tau: &Perm) -> Option<DihedralKind> {
    let n = tau.n();
    if n < 3 {
        return None;
    }
    let shift = tau.apply(0);
    if (0..n).all(|i| tau.apply(i) == (i + shift) % n) {
        return Some(DihedralKind::Rotation(shift));
    }
    // c^k σ₀ sends i to (n - 1 - i + k) mod n.
    let k = (tau.apply(0) + 1) % n;
    if (0..n).all(|i| tau.apply(i) == (2 * n - 1 - i + k) % n) {
        return Some(DihedralKind::Reflection(k));
    }
    None
}

pub fn is_dihedral(tau: &Perm) -> bool {
    dihedral_kind(tau).is_some()
}

/// Relative-order pattern of `(τ(i₁), …, τ(i₄))` for zero-based increasing indices.
pub fn standardize(tau: &Perm, idx: [usize; 4]) -> Result<Perm> {
    let n = tau.n();
    if !(idx.windows(2).all(|w| w[0] < w[1]) && idx[3] < n) {
        return Err(Error::BadIndexSet { n });
    }
    let vals = idx.map(|i| tau.apply(i));
    let images = vals.iter().map(|v| vals.iter().filter(|w| *w < v).count()).collect();
    Ok(Perm::from_images_unchecked(images))
}

/// `{π₁(i), π₄(i)} = {π₂(i), π₃(i)}` as multisets at every position.
pub fn is_balanced(quad: &[Perm; 4]) -> bool {
    let n = quad[0].n();
    if quad.iter().any(|p| p.n() != n) {
        return false;
    }
    (0..n).all(|i| {
        let mut a = [quad[0].apply(i), quad[3].apply(i)];
        let mut b = [quad[1].apply(i), quad[2].apply(i)];
        a.sort_unstable();
        b.sort_unstable();
        a == b
    })
}

/// Four permutations satisfying the positionwise multiset condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancedQuadruple(pub [Perm; 4]);

impl BalancedQuadruple {
    pub fn new(quad: [Perm; 4]) -> Option<Self> {
        is_balanced(&quad).then_some(Self(quad))
    }

    /// `g(π₁) − g(π₂) − g(π₃) + g(π₄)`.
    pub fn alternating<T: std::ops::Add<Output = T> + std::ops::Sub<Output = T>>(
        &self,
        mut g: impl FnMut(&Perm) -> T,
    ) -> T {
        let [a, b, c, d] = &self.0;
        g(a) - g(b) - g(c) + g(d)
    }
}

/// The `n! × n²` 0/1 matrix whose row for σ has ones in columns `i·n + σ(i)`.
pub fn incidence_matrix(n: usize) -> Result<RatMatrix> {
    if n > MAX_INCIDENCE {
        return Err(Error::SizeTooLarge { n, max: MAX_INCIDENCE });
    }
    let perms = enumerate_sn(n)?;
    Ok(incidence_for(&perms))
}

/// Incidence rows for an arbitrary list of permutations of one size.
pub fn incidence_for(perms: &[Perm]) -> RatMatrix {
    let n = perms.first().map_or(0, Perm::n);
    Matrix::from_fn(perms.len(), n * n, |r, col| {
        let (i, j) = (col / n, col % n);
        if perms[r].apply(i) == j {
            Rat::from_integer(1.into())
        } else {
            Rat::from_integer(0.into())
        }
    })
}
