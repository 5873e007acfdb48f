//! Exact coefficient arithmetic: arbitrary-precision rationals, dense
//! univariate polynomials over them, polynomial-matrix determinants and
//! complex root finding.

mod det;
mod poly;
mod roots;

pub use det::{det_poly_matrix, det_rat};
pub use poly::{interpolate, poly_gcd, IntPoly, RatPoly};
pub use roots::complex_roots;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Exact rational scalar, always stored reduced with positive denominator.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse an exact rational written as `"3/2"`, `"-1"` or `"4164/865"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let err = || Error::RationalParse(s.to_string());
    let (ns, ds) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let n: BigInt = ns.trim().parse().map_err(|_| err())?;
    let d: BigInt = ds.trim().parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rat::new(n, d))
}

/// How a coefficient should appear in front of a basis element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CoeffKind {
    One,
    MinusOne,
    /// A single atom with an extractable sign, e.g. `3/2` or `2u^2`.
    Atom { text: String, negative: bool },
    /// A sum that needs parentheses, e.g. `u + 2`.
    Composite(String),
}

/// Coefficient ring shared by the linear-combination machinery. Implemented
/// by integers (multiplicity counts), exact rationals, and polynomials in u.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_int(n: i64) -> Self;
    /// Scale by an exact rational; used when reducing against rational rows.
    fn mul_rat(&self, r: &Rat) -> Self;
    fn kind(&self) -> CoeffKind;
}

impl Coeff for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_int(n: i64) -> Self {
        rat_int(n)
    }
    fn mul_rat(&self, r: &Rat) -> Self {
        self * r
    }
    fn kind(&self) -> CoeffKind {
        if self.is_one() {
            CoeffKind::One
        } else if (-self).is_one() {
            CoeffKind::MinusOne
        } else {
            CoeffKind::Atom {
                text: self.abs().to_string(),
                negative: self.is_negative(),
            }
        }
    }
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.checked_add(*rhs).expect("integer overflow")
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.checked_sub(*rhs).expect("integer overflow")
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.checked_mul(*rhs).expect("integer overflow")
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_int(n: i64) -> Self {
        n
    }
    fn mul_rat(&self, r: &Rat) -> Self {
        let p = r * rat_int(*self);
        assert!(p.is_integer(), "non-integral scaling of an integer count");
        p.to_integer().to_i64().expect("integer overflow")
    }
    fn kind(&self) -> CoeffKind {
        match *self {
            1 => CoeffKind::One,
            -1 => CoeffKind::MinusOne,
            n => CoeffKind::Atom {
                text: n.abs().to_string(),
                negative: n < 0,
            },
        }
    }
}
