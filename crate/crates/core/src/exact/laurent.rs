use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{exact_root, format_rat, is_integer, lcm_u32, rat_pow, ExactDiv, Rat};
use crate::error::{Error, Result};

/// Sign of the base in `(±q)^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseSign {
    Plus,
    Minus,
}

/// Element of `Q[t, 1/t]` with `q = t^scale`.
///
/// Rational powers of `q` are represented through the scale: `q^(p/d)`
/// is `t^p` at scale `d`. Values are kept canonical (no zero
/// coefficients and the smallest scale that represents them), so
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent {
    scale: u32,
    terms: BTreeMap<i64, Rat>,
}

impl Laurent {
    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        Self { scale: 1, terms }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rat::from_integer(c.into()))
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(Rat::one(), &Rat::one())
    }

    /// `coeff * q^exponent`.
    pub fn monomial(coeff: Rat, exponent: &Rat) -> Self {
        let scale: u32 = exponent
            .denom()
            .try_into()
            .expect("exponent denominator must fit in u32");
        let t_exp: i64 = exponent.numer().try_into().expect("exponent numerator must fit in i64");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(t_exp, coeff);
        }
        Self::from_parts(scale, terms)
    }

    /// `q^e` (or `(-q)^e`, defined only for integer `e`).
    pub fn q_power(e: &Rat, sign: BaseSign) -> Result<Self> {
        match sign {
            BaseSign::Plus => Ok(Self::monomial(Rat::one(), e)),
            BaseSign::Minus => {
                if !is_integer(e) {
                    return Err(Error::NonIntegerSignedPower {
                        exponent: format_rat(e),
                    });
                }
                let odd = e.numer().is_odd();
                let c = if odd { -Rat::one() } else { Rat::one() };
                Ok(Self::monomial(c, e))
            }
        }
    }

    /// Builds a value from raw `t`-exponents at the given scale.
    pub fn from_parts(scale: u32, terms: BTreeMap<i64, Rat>) -> Self {
        assert!(scale > 0, "scale must be positive");
        let mut out = Self { scale, terms };
        out.normalize();
        out
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Raw `(t-exponent, coefficient)` pairs in increasing exponent order.
    pub fn t_terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// `(q-exponent, coefficient)` pairs in increasing exponent order.
    pub fn q_terms(&self) -> impl Iterator<Item = (Rat, &Rat)> + '_ {
        let d = BigInt::from(self.scale);
        self.terms
            .iter()
            .map(move |(k, c)| (Rat::new(BigInt::from(*k), d.clone()), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `q^e`.
    pub fn coeff(&self, e: &Rat) -> Rat {
        let scaled = e * Rat::from_integer(self.scale.into());
        if !is_integer(&scaled) {
            return Rat::zero();
        }
        let k: i64 = match scaled.numer().try_into() {
            Ok(k) => k,
            Err(_) => return Rat::zero(),
        };
        self.terms.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Terms re-expressed at scale `d` (a multiple of the current scale).
    fn rescaled(&self, d: u32) -> BTreeMap<i64, Rat> {
        debug_assert_eq!(d % self.scale, 0);
        let f = i64::from(d / self.scale);
        self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect()
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.scale = 1;
            return;
        }
        let mut g = i64::from(self.scale);
        for k in self.terms.keys() {
            g = g.gcd(k);
            if g == 1 {
                return;
            }
        }
        if g > 1 {
            self.scale /= g as u32;
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(k, c)| (k / g, c))
                .collect();
        }
    }

    /// Substitutes `t = t0` directly.
    pub fn eval_t(&self, t0: &Rat) -> Rat {
        self.terms
            .iter()
            .fold(Rat::zero(), |acc, (k, c)| acc + c * rat_pow(t0, *k))
    }

    /// Substitutes `q = q0`. Requires an exact `scale`-th root of `q0`.
    pub fn substitute(&self, q0: &Rat) -> Result<Rat> {
        if q0.is_zero() {
            return Err(Error::ZeroQ);
        }
        let t0 = exact_root(q0, self.scale).ok_or_else(|| Error::NoExactRoot {
            value: format_rat(q0),
            root: self.scale,
        })?;
        Ok(self.eval_t(&t0))
    }

    /// The substitution `q -> 1/q`.
    pub fn invert_q(&self) -> Self {
        Self {
            scale: self.scale,
            terms: self.terms.iter().map(|(k, c)| (-k, c.clone())).collect(),
        }
    }

    pub fn scale_by(&self, c: &Rat) -> Self {
        let mut out = Self {
            scale: self.scale,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        };
        out.normalize();
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Integer power of `self`, allowing negative exponents for monomials.
    pub fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            return Some(self.pow(e as u32));
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        let mut terms = BTreeMap::new();
        terms.insert(k * e, rat_pow(c, e));
        Some(Self::from_parts(self.scale, terms))
    }

    fn binary(&self, other: &Self, f: impl Fn(&mut BTreeMap<i64, Rat>, i64, &Rat)) -> Self {
        let d = lcm_u32(self.scale, other.scale);
        let mut terms = self.rescaled(d);
        let factor = i64::from(d / other.scale);
        for (k, c) in &other.terms {
            f(&mut terms, k * factor, c);
        }
        Self::from_parts(d, terms)
    }
}

impl Zero for Laurent {
    fn zero() -> Self {
        Self {
            scale: 1,
            terms: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Laurent {
    fn one() -> Self {
        Self::constant(Rat::one())
    }
}

impl From<Rat> for Laurent {
    fn from(c: Rat) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a Laurent> for &'a Laurent {
    type Output = Laurent;

    fn add(self, other: &Laurent) -> Laurent {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        self.binary(other, |terms, k, c| {
            *terms.entry(k).or_insert_with(Rat::zero) += c;
        })
    }
}

impl<'a> Sub<&'a Laurent> for &'a Laurent {
    type Output = Laurent;

    fn sub(self, other: &Laurent) -> Laurent {
        self.binary(other, |terms, k, c| {
            *terms.entry(k).or_insert_with(Rat::zero) -= c;
        })
    }
}

impl<'a> Mul<&'a Laurent> for &'a Laurent {
    type Output = Laurent;

    fn mul(self, other: &Laurent) -> Laurent {
        if self.is_zero() || other.is_zero() {
            return Laurent::zero();
        }
        let d = lcm_u32(self.scale, other.scale);
        let a = self.rescaled(d);
        let b = other.rescaled(d);
        let mut terms: BTreeMap<i64, Rat> = BTreeMap::new();
        for (ka, ca) in &a {
            for (kb, cb) in &b {
                *terms.entry(ka + kb).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        Laurent::from_parts(d, terms)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;

    fn neg(self) -> Laurent {
        Laurent {
            scale: self.scale,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for Laurent {
            type Output = Laurent;
            fn $m(self, other: Laurent) -> Laurent {
                (&self).$m(&other)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}

impl AddAssign<&Laurent> for Laurent {
    fn add_assign(&mut self, other: &Laurent) {
        *self = &*self + other;
    }
}

impl ExactDiv for Laurent {
    /// Polynomial long division after factoring out the lowest powers of `t`.
    fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let scale = lcm_u32(self.scale, d.scale);
        let a = self.rescaled(scale);
        let b = d.rescaled(scale);
        let a_low = *a.keys().next().unwrap();
        let b_low = *b.keys().next().unwrap();
        let mut num: Vec<Rat> = dense(&a, a_low);
        let den: Vec<Rat> = dense(&b, b_low);
        if num.len() < den.len() {
            return None;
        }
        let lead = den.last().unwrap().clone();
        let mut quot = vec![Rat::zero(); num.len() - den.len() + 1];
        for i in (0..quot.len()).rev() {
            let top = &num[i + den.len() - 1];
            if top.is_zero() {
                continue;
            }
            let f = top / &lead;
            for (j, c) in den.iter().enumerate() {
                if !c.is_zero() {
                    num[i + j] -= &f * c;
                }
            }
            quot[i] = f;
        }
        if num.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let shift = a_low - b_low;
        let terms = quot
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 + shift, c))
            .collect();
        Some(Self::from_parts(scale, terms))
    }
}

fn dense(terms: &BTreeMap<i64, Rat>, low: i64) -> Vec<Rat> {
    let high = *terms.keys().next_back().unwrap();
    let mut v = vec![Rat::zero(); (high - low + 1) as usize];
    for (k, c) in terms {
        v[(k - low) as usize] = c.clone();
    }
    v
}

impl fmt::Display for Laurent {
    /// Canonical text form, e.g. `1 + q`, `-q^3`, `3/2*q^(1/2)`, `2*q^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.q_terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            if e.is_zero() {
                f.write_str(&format_rat(&abs))?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{}*", format_rat(&abs))?;
            }
            f.write_str("q")?;
            if e.is_one() {
                continue;
            }
            if is_integer(&e) {
                write!(f, "^{}", e.numer())?;
            } else {
                write!(f, "^({})", format_rat(&e))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}
