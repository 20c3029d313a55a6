//! Laurent polynomials in one variable `q` over an exact coefficient ring.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, BigUint, Integer, Signed};
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Coefficient ring for [`LaurentPoly`].
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Division that either is exact in the ring or reports failure.
pub trait ExactDiv: Sized {
    fn exact_div(&self, rhs: &Self) -> Option<Self>;
}

impl ExactDiv for BigRational {
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }
}

impl ExactDiv for BigInt {
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (quot, rem) = self.div_rem(rhs);
        rem.is_zero().then_some(quot)
    }
}

impl ExactDiv for i64 {
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if *rhs == 0 || self % rhs != 0 {
            None
        } else {
            self.checked_div(*rhs)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact division")]
    InexactDivision,
    #[error("exponent overflow")]
    ExponentOverflow,
}

/// `Σ c_k q^k` with finitely many nonzero terms.
///
/// Stored densely from the lowest nonzero exponent; both ends are always
/// nonzero, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly<C> {
    low: i64,
    coeffs: Vec<C>,
}

impl<C: Coeff> LaurentPoly<C> {
    fn normalized(mut low: i64, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead);
        low += lead as i64;
        LaurentPoly { low, coeffs }
    }

    pub fn monomial(c: C, e: i64) -> Self {
        Self::normalized(e, vec![c])
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(C::one(), e)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(terms: I) -> Self {
        let terms: Vec<(i64, C)> = terms.into_iter().collect();
        let (Some(lo), Some(hi)) = (
            terms.iter().map(|t| t.0).min(),
            terms.iter().map(|t| t.0).max(),
        ) else {
            return Self::zero();
        };
        let mut coeffs = vec![C::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = slot.clone() + c;
        }
        Self::normalized(lo, coeffs)
    }

    pub fn low_degree(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.low)
    }

    pub fn high_degree(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> C {
        if e < self.low {
            return C::zero();
        }
        self.coeffs
            .get((e - self.low) as usize)
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i64, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms().count()
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::normalized(
            self.low,
            self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        )
    }

    /// `q ↦ 1/q`.
    pub fn reverse(&self) -> Self {
        match self.high_degree() {
            None => Self::zero(),
            Some(hi) => LaurentPoly {
                low: -hi,
                coeffs: self.coeffs.iter().rev().cloned().collect(),
            },
        }
    }

    /// `q ↦ q^k` for `k ≥ 1`.
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k >= 1, "substitution exponent must be positive");
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c.clone())))
    }

    /// `q ↦ q²`.
    pub fn substitute_q2(&self) -> Self {
        self.substitute_power(2)
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> C {
        self.coeffs.iter().fold(C::zero(), |acc, c| acc + c.clone())
    }

    pub fn is_palindromic(&self) -> bool {
        self.reverse() == *self
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::normalized(self.low, self.coeffs.iter().map(f).collect())
    }
}

impl<C: Coeff + ExactDiv> LaurentPoly<C> {
    /// The unique `c` with `self = rhs · c`, or an error if none exists.
    pub fn div_exact(&self, rhs: &Self) -> Result<Self, LaurentError> {
        let (Some(b_lo), Some(b_hi)) = (rhs.low_degree(), rhs.high_degree()) else {
            return Err(LaurentError::DivisionByZero);
        };
        let Some(a_lo) = self.low_degree() else {
            return Ok(Self::zero());
        };
        let lead = rhs.coeff(b_hi);
        let mut rem = self.clone();
        let mut quot: Vec<(i64, C)> = Vec::new();
        let floor = a_lo - b_lo;
        while let Some(r_hi) = rem.high_degree() {
            let shift = r_hi - b_hi;
            if shift < floor {
                return Err(LaurentError::InexactDivision);
            }
            let t = rem
                .coeff(r_hi)
                .exact_div(&lead)
                .ok_or(LaurentError::InexactDivision)?;
            rem = &rem - &rhs.scale(&t).shift(shift);
            quot.push((shift, t));
        }
        Ok(Self::from_terms(quot))
    }
}

impl<C: Coeff> Zero for LaurentPoly<C> {
    fn zero() -> Self {
        LaurentPoly {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<C: Coeff> One for LaurentPoly<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Coeff> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn add(self, rhs: Self) -> LaurentPoly<C> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(rhs.low);
        let hi = self.high_degree().max(rhs.high_degree()).unwrap_or(lo);
        let coeffs = (lo..=hi).map(|e| self.coeff(e) + rhs.coeff(e)).collect();
        LaurentPoly::normalized(lo, coeffs)
    }
}

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<C: Coeff> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        self + &(-rhs)
    }
}

impl<C: Coeff> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (a_idx, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (b_idx, b) in rhs.coeffs.iter().enumerate() {
                let slot = &mut coeffs[a_idx + b_idx];
                *slot = std::mem::replace(slot, C::zero()) + a.clone() * b.clone();
            }
        }
        LaurentPoly::normalized(self.low + rhs.low, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<C: Coeff> $tr for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $method(self, rhs: Self) -> LaurentPoly<C> {
                (&self).$method(&rhs)
            }
        }
        impl<C: Coeff> $tr<&LaurentPoly<C>> for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $method(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

impl<C: Coeff> AddAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn add_assign(&mut self, rhs: &LaurentPoly<C>) {
        *self = &*self + rhs;
    }
}

impl<C: Coeff> SubAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn sub_assign(&mut self, rhs: &LaurentPoly<C>) {
        *self = &*self - rhs;
    }
}

impl<C: Coeff> MulAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn mul_assign(&mut self, rhs: &LaurentPoly<C>) {
        *self = &*self * rhs;
    }
}

impl<C: Coeff> Sum for LaurentPoly<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| &acc + &p)
    }
}

impl<C: Coeff> Product for LaurentPoly<C> {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, p| &acc * &p)
    }
}

impl<C: Coeff + fmt::Display + Signed> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let mag = c.abs();
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = mag.is_one();
            match (e, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}*q^{e}")?,
            }
        }
        Ok(())
    }
}

/// Laurent polynomial with rational coefficients; the value type of every TGF.
pub type LaurentQ = LaurentPoly<BigRational>;
/// Laurent polynomial with integer coefficients.
pub type LaurentZ = LaurentPoly<BigInt>;

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^{-k}` as a rational, for any integer `k`.
pub fn pow2_inv(k: i64) -> BigRational {
    let p = BigInt::from(BigUint::one() << k.unsigned_abs());
    if k >= 0 {
        BigRational::new(BigInt::one(), p)
    } else {
        BigRational::from_integer(p)
    }
}

impl LaurentQ {
    /// Canonical `(exponent, "num/den")` pairs in increasing exponent order.
    pub fn canonical_pairs(&self) -> Vec<(i64, String)> {
        self.terms()
            .map(|(e, c)| (e, format!("{}/{}", c.numer(), c.denom())))
            .collect()
    }

    pub fn from_canonical_pairs(pairs: &[(i64, String)]) -> Option<Self> {
        let terms = pairs
            .iter()
            .map(|(e, s)| parse_rational(s).map(|c| (*e, c)))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::from_terms(terms))
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

impl Serialize for LaurentQ {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs = self.canonical_pairs();
        let mut seq = serializer.serialize_seq(Some(pairs.len()))?;
        for pair in &pairs {
            seq.serialize_element(pair)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentQ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs: Vec<(i64, String)> = Vec::deserialize(deserializer)?;
        Self::from_canonical_pairs(&pairs)
            .ok_or_else(|| serde::de::Error::custom("malformed rational coefficient"))
    }
}
