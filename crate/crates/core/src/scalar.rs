//! Coefficient abstractions shared by the polynomial layer.
//!
//! Polynomials, reduction and the exact oracle are written against
//! [`Scalar`]. Three families implement it: finite-precision field elements
//! ([`Cdvf`](crate::Cdvf)), exact rationals ([`BigRational`]) and prime fields
//! ([`Fp`]).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by exact zero")]
    DivisionByZero,
    #[error("divisor is indistinguishable from zero at the available precision")]
    AmbiguousDivisor,
    #[error("operands live in different fields ({0})")]
    ContextMismatch(String),
}

/// A coefficient type for [`Polynomial`](crate::Polynomial).
///
/// `Zero::zero()` is the exact zero; polynomials never store it. Values that
/// are merely indistinguishable from zero (finite precision) are stored.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + Add<Output = Self>
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    /// True when the value is known to be nonzero.
    fn is_certified_nonzero(&self) -> bool;

    fn try_div(&self, rhs: &Self) -> Result<Self, ScalarError>;

    /// True when a finite-precision value carries no information at all
    /// (nonpositive absolute precision and no certified digit).
    fn is_exhausted(&self) -> bool {
        false
    }
}

/// Exact fields: every nonzero element is invertible and equality is decidable.
pub trait ExactField: Scalar + One {
    fn inv(&self) -> Option<Self>;
}

impl Scalar for BigRational {
    fn is_certified_nonzero(&self) -> bool {
        !self.is_zero()
    }

    fn try_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }
}

impl ExactField for BigRational {
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

/// Element of the prime field `Z/PZ`. `P` must be prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(value: i64) -> Self {
        Fp(value.rem_euclid(P as i64) as u64)
    }

    pub fn from_bigint(value: &BigInt) -> Self {
        let r = value % BigInt::from(P);
        let r = if r < BigInt::zero() { r + BigInt::from(P) } else { r };
        Fp(r.try_into().expect("residue fits in u64"))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + P as u128 - rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in Fp")
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn is_certified_nonzero(&self) -> bool {
        self.0 != 0
    }

    fn try_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        rhs.inv()
            .map(|r| *self * r)
            .ok_or(ScalarError::DivisionByZero)
    }
}

impl<const P: u64> ExactField for Fp<P> {
    fn inv(&self) -> Option<Self> {
        // Fermat: a^(P-2)
        (self.0 != 0).then(|| self.pow(P - 2))
    }
}
