//! Finite-precision arithmetic in a complete discrete valuation field.
//!
//! Two fields are supported: `Q_p` (uniformizer `p`) and `F_p((t))`
//! (uniformizer `t`). An element is either the exact zero or a ball
//! `a + O(pi^n)` in the capped-absolute-precision model: the value is kept
//! reduced modulo `pi^n` and every operation computes the exact order of the
//! result from the orders and valuations of its operands.
//!
//! Elements of negative valuation are stored as `u * pi^e` with `e < 0` and
//! `u` a unit; elements of the valuation ring always have `e = 0`.

mod digits;

use std::cmp::{min, Ordering};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::{Scalar, ScalarError};
use digits::{pow_big, Digits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdvfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("operands belong to different fields: {0} and {1}")]
    ContextMismatch(CdvfContext, CdvfContext),
    #[error("division by exact zero")]
    DivisionByExactZero,
    #[error("divisor is indistinguishable from zero at the available precision")]
    AmbiguousDivisor,
    #[error("target order {0} is negative")]
    NegativeOrder(i64),
    #[error("{0} is not invertible in the residue field F_{1}")]
    NotInvertibleModP(BigInt, u64),
    #[error("cannot lift from order {from} to order {to}")]
    LiftBelowOrder { from: i64, to: i64 },
    #[error("exact conversion is only available for p-adic elements")]
    NotPadic,
}

impl From<CdvfError> for ScalarError {
    fn from(e: CdvfError) -> Self {
        match e {
            CdvfError::DivisionByExactZero => ScalarError::DivisionByZero,
            CdvfError::AmbiguousDivisor => ScalarError::AmbiguousDivisor,
            other => ScalarError::ContextMismatch(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// `Q_p`, valuation ring `Z_p`.
    PAdic,
    /// `F_p((t))`, valuation ring `F_p[[t]]`.
    PowerSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CdvfContext {
    kind: FieldKind,
    p: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for CdvfContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::PAdic => write!(f, "Q_{}", self.p),
            FieldKind::PowerSeries => write!(f, "F_{}((t))", self.p),
        }
    }
}

impl CdvfContext {
    pub fn new(kind: FieldKind, p: u64) -> Result<Self, CdvfError> {
        if !is_prime(p) {
            return Err(CdvfError::NotPrime(p));
        }
        Ok(CdvfContext { kind, p })
    }

    pub fn padic(p: u64) -> Result<Self, CdvfError> {
        Self::new(FieldKind::PAdic, p)
    }

    pub fn power_series(p: u64) -> Result<Self, CdvfError> {
        Self::new(FieldKind::PowerSeries, p)
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// How the uniformizer is written: `5` in `Q_5`, `t` in `F_5((t))`.
    pub fn uniformizer_symbol(&self) -> String {
        match self.kind {
            FieldKind::PAdic => self.p.to_string(),
            FieldKind::PowerSeries => "t".to_string(),
        }
    }

    fn empty_digits(&self) -> Digits {
        match self.kind {
            FieldKind::PAdic => Digits::Int(BigUint::zero()),
            FieldKind::PowerSeries => Digits::Series(Vec::new()),
        }
    }

    /// `O(pi^order)`: a value indistinguishable from zero.
    pub fn big_o(&self, order: i64) -> Cdvf {
        Cdvf::from_parts(*self, self.empty_digits(), min(order, 0), order)
    }

    pub fn one(&self, order: i64) -> Cdvf {
        self.from_integer(&BigInt::one(), order)
    }

    /// The integer `n` known up to `O(pi^order)`. In `F_p((t))` integers are
    /// constants reduced modulo `p`.
    pub fn from_integer(&self, n: &BigInt, order: i64) -> Cdvf {
        if order <= 0 {
            return self.big_o(order);
        }
        let digits = match self.kind {
            FieldKind::PAdic => {
                let m = BigInt::from_biguint(Sign::Plus, pow_big(self.p, order as usize));
                Digits::Int(n.mod_floor(&m).to_biguint().unwrap())
            }
            FieldKind::PowerSeries => {
                let c = n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap();
                Digits::Series(if c == 0 { vec![] } else { vec![c] })
            }
        };
        Cdvf::from_parts(*self, digits, 0, order)
    }

    pub fn from_u64(&self, n: u64, order: i64) -> Cdvf {
        self.from_integer(&BigInt::from(n), order)
    }

    /// `num/den + O(pi^order)`. Powers of `p` in the denominator become a
    /// negative shift (p-adic case only).
    pub fn from_rational(&self, num: &BigInt, den: &BigInt, order: i64) -> Result<Cdvf, CdvfError> {
        if order < 0 {
            return Err(CdvfError::NegativeOrder(order));
        }
        if den.is_zero() {
            return Err(CdvfError::DivisionByExactZero);
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        match self.kind {
            FieldKind::PAdic => {
                let p = BigInt::from(self.p);
                let mut den = den;
                let mut shift = 0i64;
                while (&den % &p).is_zero() {
                    den /= &p;
                    shift -= 1;
                }
                let width = order - shift;
                let m = BigInt::from_biguint(Sign::Plus, pow_big(self.p, width as usize));
                let inv = den.extended_gcd(&m).x.mod_floor(&m);
                let value = (num.mod_floor(&m) * inv).mod_floor(&m);
                Ok(Cdvf::from_parts(
                    *self,
                    Digits::Int(value.to_biguint().unwrap()),
                    shift,
                    order,
                ))
            }
            FieldKind::PowerSeries => {
                let p = BigInt::from(self.p);
                let d = den.mod_floor(&p);
                if d.is_zero() {
                    return Err(CdvfError::NotInvertibleModP(den, self.p));
                }
                let inv = d.extended_gcd(&p).x.mod_floor(&p);
                let c = (num.mod_floor(&p) * inv).mod_floor(&p);
                Ok(self.from_integer(&c, order))
            }
        }
    }

    pub fn from_bigrational(&self, q: &BigRational, order: i64) -> Result<Cdvf, CdvfError> {
        if q.is_zero() {
            return Ok(self.big_o(order));
        }
        self.from_rational(q.numer(), q.denom(), order)
    }

    /// `pi^k + O(pi^order)`.
    pub fn uniformizer_power(&self, k: i64, order: i64) -> Cdvf {
        let one = match self.kind {
            FieldKind::PAdic => Digits::Int(BigUint::one()),
            FieldKind::PowerSeries => Digits::Series(vec![1]),
        };
        Cdvf::from_parts(*self, one, k, order)
    }

    /// A power series given by its coefficients (lowest degree first).
    pub fn from_series(&self, coeffs: &[i64], order: i64) -> Cdvf {
        let p = self.p as i64;
        let digits = match self.kind {
            FieldKind::PowerSeries => Digits::Series(
                coeffs.iter().map(|c| c.rem_euclid(p) as u64).collect::<Vec<_>>(),
            ),
            FieldKind::PAdic => {
                let mut acc = BigInt::zero();
                for c in coeffs.iter().rev() {
                    acc = acc * p + c;
                }
                let m = BigInt::from_biguint(Sign::Plus, pow_big(self.p, order.max(0) as usize));
                Digits::Int(acc.mod_floor(&m).to_biguint().unwrap())
            }
        };
        Cdvf::from_parts(*self, digits, 0, order)
    }
}

/// Valuation of a finite-precision element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
    /// All known digits vanish: the element cannot be told apart from zero.
    Undefined,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Ball {
    ctx: CdvfContext,
    /// Reduced modulo `pi^(order - shift)`.
    digits: Digits,
    shift: i64,
    order: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Zero,
    Ball(Ball),
}

/// An element of a finite-precision CDVF: exact zero or `a + O(pi^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cdvf(Repr);

impl Cdvf {
    pub const ZERO: Cdvf = Cdvf(Repr::Zero);

    /// Canonicalises `digits * pi^shift + O(pi^order)`.
    fn from_parts(ctx: CdvfContext, digits: Digits, shift: i64, order: i64) -> Cdvf {
        let p = ctx.p;
        if order <= shift {
            return Cdvf(Repr::Ball(Ball {
                ctx,
                digits: digits.zero_like(),
                shift: min(order, 0),
                order,
            }));
        }
        let digits = digits.reduce(p, order - shift);
        match digits.valuation(p) {
            None => Cdvf(Repr::Ball(Ball {
                ctx,
                digits,
                shift: min(order, 0),
                order,
            })),
            Some(v) => {
                let val = shift + v as i64;
                let target = min(val, 0);
                let digits = match target.cmp(&shift) {
                    Ordering::Equal => digits,
                    Ordering::Greater => digits.div_pi(p, (target - shift) as u64),
                    Ordering::Less => digits.mul_pi(p, (shift - target) as u64),
                };
                Cdvf(Repr::Ball(Ball {
                    ctx,
                    digits,
                    shift: target,
                    order,
                }))
            }
        }
    }

    fn ball(&self) -> Option<&Ball> {
        match &self.0 {
            Repr::Zero => None,
            Repr::Ball(b) => Some(b),
        }
    }

    pub fn context(&self) -> Option<CdvfContext> {
        self.ball().map(|b| b.ctx)
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.0, Repr::Zero)
    }

    /// Absolute precision; `None` stands for `+inf` (exact zero).
    pub fn order(&self) -> Option<i64> {
        self.ball().map(|b| b.order)
    }

    pub fn valuation(&self) -> Valuation {
        match &self.0 {
            Repr::Zero => Valuation::Infinite,
            Repr::Ball(b) => match b.digits.valuation(b.ctx.p) {
                None => Valuation::Undefined,
                Some(v) => Valuation::Finite(b.shift + v as i64),
            },
        }
    }

    pub fn is_indistinguishable_from_zero(&self) -> bool {
        self.valuation() == Valuation::Undefined
    }

    /// Shift `e` of the representation `u * pi^e` (0 for ring elements).
    pub fn shift(&self) -> i64 {
        self.ball().map_or(0, |b| b.shift)
    }

    /// Valuation when defined, otherwise the order: the exponent `n` in
    /// `eps * pi^n + O(pi^m)` used by the precision formulas.
    fn effective_valuation(&self) -> Option<i64> {
        match self.valuation() {
            Valuation::Finite(v) => Some(v),
            Valuation::Undefined => self.order(),
            Valuation::Infinite => None,
        }
    }

    fn check_ctx(a: &Ball, b: &Ball) -> Result<(), CdvfError> {
        if a.ctx == b.ctx {
            Ok(())
        } else {
            Err(CdvfError::ContextMismatch(a.ctx, b.ctx))
        }
    }

    pub fn try_add(&self, rhs: &Cdvf) -> Result<Cdvf, CdvfError> {
        let (a, b) = match (&self.0, &rhs.0) {
            (Repr::Zero, _) => return Ok(rhs.clone()),
            (_, Repr::Zero) => return Ok(self.clone()),
            (Repr::Ball(a), Repr::Ball(b)) => (a, b),
        };
        Self::check_ctx(a, b)?;
        let p = a.ctx.p;
        let order = min(a.order, b.order);
        let s = min(a.shift, b.shift);
        let k = order - s;
        let da = a.digits.mul_pi(p, (a.shift - s) as u64);
        let db = b.digits.mul_pi(p, (b.shift - s) as u64);
        Ok(Cdvf::from_parts(a.ctx, da.add(&db, p, k), s, order))
    }

    pub fn try_neg(&self) -> Cdvf {
        match &self.0 {
            Repr::Zero => Cdvf::ZERO,
            Repr::Ball(b) => Cdvf::from_parts(
                b.ctx,
                b.digits.neg(b.ctx.p, b.order - b.shift),
                b.shift,
                b.order,
            ),
        }
    }

    pub fn try_sub(&self, rhs: &Cdvf) -> Result<Cdvf, CdvfError> {
        self.try_add(&rhs.try_neg())
    }

    /// Order of the product is `min(m_a + n_b, m_b + n_a)` where `n` is the
    /// valuation (or the order for values indistinguishable from zero).
    pub fn try_mul(&self, rhs: &Cdvf) -> Result<Cdvf, CdvfError> {
        let (a, b) = match (&self.0, &rhs.0) {
            (Repr::Zero, _) | (_, Repr::Zero) => return Ok(Cdvf::ZERO),
            (Repr::Ball(a), Repr::Ball(b)) => (a, b),
        };
        Self::check_ctx(a, b)?;
        let p = a.ctx.p;
        let na = self.effective_valuation().unwrap();
        let nb = rhs.effective_valuation().unwrap();
        let order = min(a.order + nb, b.order + na);
        let s = a.shift + b.shift;
        let digits = a.digits.mul(&b.digits, p, order - s);
        Ok(Cdvf::from_parts(a.ctx, digits, s, order))
    }

    /// `(eps pi^n1 + O(pi^m1)) / (mu pi^n0 + O(pi^m0))
    ///  = eps/mu pi^(n1-n0) + O(pi^min(m1-n0, m0+n1-2n0))`.
    pub fn try_div(&self, rhs: &Cdvf) -> Result<Cdvf, CdvfError> {
        let b = match &rhs.0 {
            Repr::Zero => return Err(CdvfError::DivisionByExactZero),
            Repr::Ball(b) => b,
        };
        let a = match &self.0 {
            Repr::Zero => return Ok(Cdvf::ZERO),
            Repr::Ball(a) => a,
        };
        Self::check_ctx(a, b)?;
        let n0 = rhs.valuation().finite().ok_or(CdvfError::AmbiguousDivisor)?;
        let n1 = self.effective_valuation().unwrap();
        let p = a.ctx.p;
        let order = min(a.order - n0, b.order + n1 - 2 * n0);
        let shift = a.shift - n0;
        let k = order - shift;
        let unit = b.digits.div_pi(p, (n0 - b.shift) as u64);
        let inv = unit.inv_unit(p, k);
        let digits = a.digits.mul(&inv, p, k);
        Ok(Cdvf::from_parts(a.ctx, digits, shift, order))
    }

    /// Canonical lift: same digits, order raised to `order` (the new
    /// pi-digits are zero).
    pub fn lift_to(&self, order: i64) -> Result<Cdvf, CdvfError> {
        match &self.0 {
            Repr::Zero => Ok(Cdvf::ZERO),
            Repr::Ball(b) => {
                if order < b.order {
                    return Err(CdvfError::LiftBelowOrder { from: b.order, to: order });
                }
                Ok(Cdvf::from_parts(b.ctx, b.digits.clone(), b.shift, order))
            }
        }
    }

    /// Forgets the digits at and above `pi^order`.
    pub fn truncate_to(&self, order: i64) -> Cdvf {
        match &self.0 {
            Repr::Zero => Cdvf::ZERO,
            Repr::Ball(b) if order >= b.order => self.clone(),
            Repr::Ball(b) => Cdvf::from_parts(b.ctx, b.digits.clone(), b.shift, order),
        }
    }

    /// Exact rational `digits * p^shift` (p-adic only). Exact zero maps to 0.
    pub fn to_rational(&self) -> Result<BigRational, CdvfError> {
        match &self.0 {
            Repr::Zero => Ok(BigRational::zero()),
            Repr::Ball(b) => match (&b.digits, b.ctx.kind) {
                (Digits::Int(n), FieldKind::PAdic) => {
                    let n = BigInt::from_biguint(Sign::Plus, n.clone());
                    let scale = BigInt::from_biguint(
                        Sign::Plus,
                        pow_big(b.ctx.p, b.shift.unsigned_abs() as usize),
                    );
                    Ok(if b.shift >= 0 {
                        BigRational::from_integer(n * scale)
                    } else {
                        BigRational::new(n, scale)
                    })
                }
                _ => Err(CdvfError::NotPadic),
            },
        }
    }

    /// The stored representative `a` with `0 <= a < p^order` for p-adic ring
    /// elements.
    pub fn representative(&self) -> Option<BigUint> {
        match &self.0 {
            Repr::Ball(Ball { digits: Digits::Int(n), shift: 0, .. }) => Some(n.clone()),
            _ => None,
        }
    }

    /// pi-adic digits of the mantissa, lowest first, up to the order.
    pub fn digits(&self) -> Vec<u64> {
        match &self.0 {
            Repr::Zero => Vec::new(),
            Repr::Ball(b) => b.digits.expansion(b.ctx.p, (b.order - b.shift).max(0) as usize),
        }
    }

    /// Multiplies by `pi^k` exactly (orders shift by `k`).
    pub fn mul_pi_power(&self, k: i64) -> Cdvf {
        match &self.0 {
            Repr::Zero => Cdvf::ZERO,
            Repr::Ball(b) => Cdvf::from_parts(b.ctx, b.digits.clone(), b.shift + k, b.order + k),
        }
    }
}

impl fmt::Display for Cdvf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = match &self.0 {
            Repr::Zero => return write!(f, "0"),
            Repr::Ball(b) => b,
        };
        let sym = b.ctx.uniformizer_symbol();
        match &b.digits {
            Digits::Int(n) => {
                if b.shift < 0 {
                    write!(f, "{}/{}^{}", n, b.ctx.p, -b.shift)?;
                } else {
                    write!(f, "{}", n)?;
                }
            }
            Digits::Series(c) => {
                let mut first = true;
                for (i, &x) in c.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    let e = i as i64 + b.shift;
                    match e {
                        0 => write!(f, "{}", x)?,
                        1 if x == 1 => write!(f, "t")?,
                        1 => write!(f, "{}*t", x)?,
                        _ if x == 1 => write!(f, "t^{}", e)?,
                        _ => write!(f, "{}*t^{}", x, e)?,
                    }
                }
                if first {
                    write!(f, "0")?;
                }
            }
        }
        write!(f, " + O({}^{})", sym, b.order)
    }
}

impl Zero for Cdvf {
    fn zero() -> Self {
        Cdvf::ZERO
    }
    fn is_zero(&self) -> bool {
        self.is_exact_zero()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $call:ident) => {
        impl<'a> $trait<&'a Cdvf> for &'a Cdvf {
            type Output = Cdvf;
            fn $method(self, rhs: &'a Cdvf) -> Cdvf {
                self.$call(rhs).unwrap_or_else(|e| panic!("{}", e))
            }
        }
        impl $trait for Cdvf {
            type Output = Cdvf;
            fn $method(self, rhs: Cdvf) -> Cdvf {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for Cdvf {
    type Output = Cdvf;
    fn neg(self) -> Cdvf {
        self.try_neg()
    }
}

impl Neg for &Cdvf {
    type Output = Cdvf;
    fn neg(self) -> Cdvf {
        self.try_neg()
    }
}

impl Scalar for Cdvf {
    fn is_certified_nonzero(&self) -> bool {
        matches!(self.valuation(), Valuation::Finite(_))
    }

    fn try_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Cdvf::try_div(self, rhs).map_err(Into::into)
    }

    fn is_exhausted(&self) -> bool {
        matches!(self.order(), Some(o) if o <= 0) && self.is_indistinguishable_from_zero()
    }
}
