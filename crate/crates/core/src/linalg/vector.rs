use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An integer vector of fixed length with arbitrary-precision entries.
///
/// Ordering is lexicographic on the entries, which is the order used for
/// every sorted point list in this crate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        Self(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        Self(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![BigInt::zero(); len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[i] = BigInt::one();
        v
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> IntVector {
        Self(self.0.iter().map(|a| -a).collect())
    }

    /// Appends one coordinate, e.g. the homogenizing 1 of `P × {1}`.
    pub fn extended(&self, last: BigInt) -> IntVector {
        let mut v = self.0.clone();
        v.push(last);
        Self(v)
    }

    /// Drops the last coordinate.
    pub fn truncated(&self) -> IntVector {
        Self(self.0[..self.0.len() - 1].to_vec())
    }

    pub fn last(&self) -> Option<&BigInt> {
        self.0.last()
    }

    /// gcd of the absolute values of the entries (0 for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// The unique positive rational multiple with coprime integer entries.
    pub fn primitive(&self) -> Result<IntVector> {
        let g = self.content();
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(Self(self.0.iter().map(|x| x / &g).collect()))
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(self.0.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl Deref for IntVector {
    type Target = [BigInt];
    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

impl FromIterator<BigInt> for IntVector {
    fn from_iter<T: IntoIterator<Item = BigInt>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl From<Vec<BigInt>> for IntVector {
    fn from(v: Vec<BigInt>) -> Self {
        Self(v)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A vector of rationals. `BigRational` keeps every entry in lowest terms
/// with a positive denominator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(Vec<BigRational>);

impl RationalVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        Self(entries)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![BigRational::zero(); len])
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<BigRational> {
        self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn to_integral(&self) -> Option<IntVector> {
        self.is_integral().then(|| self.0.iter().map(|x| x.to_integer()).collect())
    }

    pub fn add(&self, other: &RationalVector) -> RationalVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &BigRational) -> RationalVector {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn dot_int(&self, other: &IntVector) -> BigRational {
        self.0
            .iter()
            .zip(other.iter())
            .map(|(a, b)| a * BigRational::from_integer(b.clone()))
            .sum()
    }

    /// Positive integer multiple with coprime entries; same direction.
    pub fn clear_denominators(&self) -> IntVector {
        let l = self.0.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let v: IntVector = self.0.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
        v.primitive().unwrap_or(v)
    }
}

impl Deref for RationalVector {
    type Target = [BigRational];
    fn deref(&self) -> &[BigRational] {
        &self.0
    }
}

impl FromIterator<BigRational> for RationalVector {
    fn from_iter<T: IntoIterator<Item = BigRational>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl From<&IntVector> for RationalVector {
    fn from(v: &IntVector) -> Self {
        v.to_rational()
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

pub(crate) fn floor(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

pub(crate) fn ceil(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_divides_by_content() {
        let v = IntVector::from_i64s(&[2, 4, 6]);
        assert_eq!(v.primitive().unwrap(), IntVector::from_i64s(&[1, 2, 3]));
        let v = IntVector::from_i64s(&[1, 0]);
        assert_eq!(v.primitive().unwrap(), v);
        let v = IntVector::from_i64s(&[-3, -6]);
        assert_eq!(v.primitive().unwrap(), IntVector::from_i64s(&[-1, -2]));
    }

    #[test]
    fn primitive_of_zero_is_an_error() {
        let err = IntVector::zeros(3).primitive().unwrap_err();
        assert_eq!(err.to_string(), "no primitive representative");
    }

    #[test]
    fn clear_denominators_keeps_direction() {
        let v = RationalVector::new(vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-1).into(), 3.into()),
        ]);
        assert_eq!(v.clear_denominators(), IntVector::from_i64s(&[3, -2]));
    }
}
