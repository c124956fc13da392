//! Integer scalars used throughout the engine.
//!
//! Every algorithm is generic over [`Scalar`]. The pipeline first runs with
//! `i64` and checked arithmetic; any overflow surfaces as [`Overflow`] and the
//! whole computation is repeated with [`BigInt`], so results never depend on
//! machine word size.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("machine integer overflow")]
pub struct Overflow;

pub type Checked<T> = Result<T, Overflow>;

pub trait Scalar: Clone + Eq + Ord + Hash + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
    fn to_i64(&self) -> Option<i64>;

    fn is_zero(&self) -> bool;
    fn sign(&self) -> Ordering;

    fn try_add(&self, rhs: &Self) -> Checked<Self>;
    fn try_sub(&self, rhs: &Self) -> Checked<Self>;
    fn try_mul(&self, rhs: &Self) -> Checked<Self>;
    /// Truncating division. `rhs` must be nonzero.
    fn try_div(&self, rhs: &Self) -> Checked<Self>;
    fn try_neg(&self) -> Checked<Self>;
    /// Floor division and the matching nonnegative remainder for `m > 0`.
    fn try_div_mod_floor(&self, m: &Self) -> Checked<(Self, Self)>;
    /// Nonnegative gcd.
    fn try_gcd(&self, rhs: &Self) -> Checked<Self>;

    fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn try_abs(&self) -> Checked<Self> {
        if self.is_negative() {
            self.try_neg()
        } else {
            Ok(self.clone())
        }
    }

    fn try_rem_floor(&self, m: &Self) -> Checked<Self> {
        Ok(self.try_div_mod_floor(m)?.1)
    }

    /// `self * a + b * c`
    fn try_mul_add(&self, a: &Self, b: &Self, c: &Self) -> Checked<Self> {
        self.try_mul(a)?.try_add(&b.try_mul(c)?)
    }

    fn dot(a: &[Self], b: &[Self]) -> Checked<Self> {
        debug_assert_eq!(a.len(), b.len());
        let mut acc = Self::zero();
        for (x, y) in a.iter().zip(b) {
            if x.is_zero() || y.is_zero() {
                continue;
            }
            acc = acc.try_add(&x.try_mul(y)?)?;
        }
        Ok(acc)
    }
}

impl Scalar for i64 {
    #[inline]
    fn zero() -> Self {
        0
    }
    #[inline]
    fn one() -> Self {
        1
    }
    #[inline]
    fn from_i64(v: i64) -> Self {
        v
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        ToPrimitive::to_i64(v)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn to_i64(&self) -> Option<i64> {
        Some(*self)
    }
    #[inline]
    fn is_zero(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn sign(&self) -> Ordering {
        self.cmp(&0)
    }
    #[inline]
    fn try_add(&self, rhs: &Self) -> Checked<Self> {
        self.checked_add(*rhs).ok_or(Overflow)
    }
    #[inline]
    fn try_sub(&self, rhs: &Self) -> Checked<Self> {
        self.checked_sub(*rhs).ok_or(Overflow)
    }
    #[inline]
    fn try_mul(&self, rhs: &Self) -> Checked<Self> {
        self.checked_mul(*rhs).ok_or(Overflow)
    }
    #[inline]
    fn try_div(&self, rhs: &Self) -> Checked<Self> {
        self.checked_div(*rhs).ok_or(Overflow)
    }
    #[inline]
    fn try_neg(&self) -> Checked<Self> {
        self.checked_neg().ok_or(Overflow)
    }
    #[inline]
    fn try_div_mod_floor(&self, m: &Self) -> Checked<(Self, Self)> {
        if *self == i64::MIN && *m == -1 {
            return Err(Overflow);
        }
        Ok(Integer::div_mod_floor(self, m))
    }
    #[inline]
    fn try_gcd(&self, rhs: &Self) -> Checked<Self> {
        let g = (self.unsigned_abs()).gcd(&rhs.unsigned_abs());
        i64::try_from(g).map_err(|_| Overflow)
    }
    #[inline]
    fn try_mul_add(&self, a: &Self, b: &Self, c: &Self) -> Checked<Self> {
        let v = (*self as i128) * (*a as i128) + (*b as i128) * (*c as i128);
        i64::try_from(v).map_err(|_| Overflow)
    }
    #[inline]
    fn dot(a: &[Self], b: &[Self]) -> Checked<Self> {
        debug_assert_eq!(a.len(), b.len());
        let mut acc: i128 = 0;
        for (x, y) in a.iter().zip(b) {
            acc = acc.checked_add((*x as i128) * (*y as i128)).ok_or(Overflow)?;
        }
        i64::try_from(acc).map_err(|_| Overflow)
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sign(&self) -> Ordering {
        if Signed::is_negative(self) {
            Ordering::Less
        } else if Zero::is_zero(self) {
            Ordering::Equal
        } else {
            Ordering::Greater
        }
    }
    fn try_add(&self, rhs: &Self) -> Checked<Self> {
        Ok(self + rhs)
    }
    fn try_sub(&self, rhs: &Self) -> Checked<Self> {
        Ok(self - rhs)
    }
    fn try_mul(&self, rhs: &Self) -> Checked<Self> {
        Ok(self * rhs)
    }
    fn try_div(&self, rhs: &Self) -> Checked<Self> {
        Ok(self / rhs)
    }
    fn try_neg(&self) -> Checked<Self> {
        Ok(-self)
    }
    fn try_div_mod_floor(&self, m: &Self) -> Checked<(Self, Self)> {
        Ok(Integer::div_mod_floor(self, m))
    }
    fn try_gcd(&self, rhs: &Self) -> Checked<Self> {
        Ok(Integer::gcd(self, rhs))
    }
}

/// Converts a vector of big integers into the target scalar type.
pub fn vec_from_bigint<T: Scalar>(v: &[BigInt]) -> Checked<Vec<T>> {
    v.iter().map(|x| T::from_bigint(x).ok_or(Overflow)).collect()
}

pub fn vec_to_bigint<T: Scalar>(v: &[T]) -> Vec<BigInt> {
    v.iter().map(Scalar::to_bigint).collect()
}

/// Gcd of all entries (zero for the zero vector).
pub fn content<T: Scalar>(v: &[T]) -> Checked<T> {
    let mut g = T::zero();
    for x in v {
        if !x.is_zero() {
            g = g.try_gcd(x)?;
            if g.is_one() {
                break;
            }
        }
    }
    Ok(g)
}
