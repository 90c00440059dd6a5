//! Weak lifting: from `G = (F + O(pi^m)) M` to a basis of `F + O(pi^l)`, or of
//! the exact `F`.
//!
//! `M` is lifted canonically (zero digits above its order), `H = F M̂` is
//! formed at the target precision and each `h_k` is reduced by the previously
//! lifted elements. The leading monomials must be preserved.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cdvf::{Cdvf, CdvfError};
use crate::f5::GroebnerResult;
use crate::poly::{divide, Monomial, PolyError, Polynomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("lift verification failed for element {index}: expected leading monomial {expected}")]
    Verification { index: usize, expected: Monomial },
    #[error("target precision {target} does not exceed the computed precision {computed}")]
    TargetNotAbove { computed: i64, target: i64 },
    #[error("the basis carries no coordinates")]
    MissingCoordinates,
    #[error("{expected} generators expected, {found} given")]
    GeneratorCount { expected: usize, found: usize },
    #[error(transparent)]
    Cdvf(#[from] CdvfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Lifted basis with its coordinates: `basis[k] = sum_j f_j coordinates[j][k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lifted<C> {
    pub basis: Vec<Polynomial<C>>,
    pub coordinates: Vec<Vec<Polynomial<C>>>,
    pub leading_monomials: Vec<Monomial>,
    /// Set when the entry precision is at most twice the certified `prec_MF5`.
    pub warning: Option<String>,
}

/// Raises the order of `c` to `l` with zero digits; coefficients already
/// known beyond `l` are truncated.
pub fn canonical_lift(c: &Cdvf, l: i64) -> Cdvf {
    match c.order() {
        Some(o) if o < l => c.lift_to(l).expect("order is below the target"),
        _ => c.truncate_to(l),
    }
}

/// Canonical lift to an exact rational (p-adic only): the stored digits.
pub fn canonical_lift_exact(c: &Cdvf) -> Result<BigRational, CdvfError> {
    c.to_rational()
}

fn lift_matrix<D: Scalar>(
    m: &[Vec<Polynomial<Cdvf>>],
    mut f: impl FnMut(&Cdvf) -> Result<D, CdvfError>,
) -> Result<Vec<Vec<Polynomial<D>>>, CdvfError> {
    m.iter()
        .map(|row| row.iter().map(|p| p.try_map_coefficients(&mut f)).collect())
        .collect()
}

fn precision_warning(result: &GroebnerResult) -> Option<String> {
    let r = &result.report;
    (r.certified && result.entry_order <= 2 * r.bound).then(|| {
        format!(
            "entry precision {} is not above twice the precision bound {}; leading monomials were verified after the fact",
            result.entry_order, r.bound
        )
    })
}

/// The lifting loop over any coefficient type.
fn lift_with<C: Scalar>(
    f: &[Polynomial<C>],
    m_hat: Vec<Vec<Polynomial<C>>>,
    expected: &[Monomial],
) -> Result<(Vec<Polynomial<C>>, Vec<Vec<Polynomial<C>>>), LiftError> {
    let s = f.len();
    if m_hat.len() != s {
        return Err(LiftError::GeneratorCount { expected: m_hat.len(), found: s });
    }
    let (n, order) = (f[0].nvars(), f[0].order());
    let mut basis: Vec<Polynomial<C>> = Vec::new();
    let mut coords: Vec<Vec<Polynomial<C>>> = vec![Vec::new(); s];
    for (k, lm) in expected.iter().enumerate() {
        let mut h = Polynomial::zero(n, order);
        for j in 0..s {
            h = h.add(&f[j].mul(&m_hat[j][k]));
        }
        let div = divide(&h, &basis)?;
        let g = div.remainder;
        match g.leading_monomial() {
            Ok(found) if found == lm => {}
            _ => return Err(LiftError::Verification { index: k, expected: lm.clone() }),
        }
        for j in 0..s {
            let mut c = m_hat[j][k].clone();
            for (i, q) in div.quotients.iter().enumerate() {
                if !q.is_zero() {
                    c = c.sub(&q.mul(&coords[j][i]));
                }
            }
            coords[j].push(c);
        }
        basis.push(g);
    }
    Ok((basis, coords))
}

/// Lifts to precision `l` given `F` (known at least to `l`, or lifted
/// canonically when not).
pub fn weak_lift(
    f: &[Polynomial<Cdvf>],
    result: &GroebnerResult,
    l: i64,
) -> Result<Lifted<Cdvf>, LiftError> {
    let m = result.coordinates.as_ref().ok_or(LiftError::MissingCoordinates)?;
    if l <= result.entry_order {
        return Err(LiftError::TargetNotAbove { computed: result.entry_order, target: l });
    }
    let f_hat: Vec<_> = f.iter().map(|p| p.map_coefficients(|c| canonical_lift(c, l))).collect();
    let m_hat = lift_matrix(m, |c| Ok(canonical_lift(c, l)))?;
    let (basis, coordinates) = lift_with(&f_hat, m_hat, &result.leading_monomials)?;
    Ok(Lifted {
        basis,
        coordinates,
        leading_monomials: result.leading_monomials.clone(),
        warning: precision_warning(result),
    })
}

/// Lifts to the exact rational system `f`. When the reduction introduces
/// denominators, each element is rescaled to a primitive integer polynomial
/// with positive leading coefficient.
pub fn weak_lift_exact(
    f: &[Polynomial<BigRational>],
    result: &GroebnerResult,
) -> Result<Lifted<BigRational>, LiftError> {
    let m = result.coordinates.as_ref().ok_or(LiftError::MissingCoordinates)?;
    let m_hat = lift_matrix(m, canonical_lift_exact)?;
    let (mut basis, mut coordinates) = lift_with(f, m_hat, &result.leading_monomials)?;
    for k in 0..basis.len() {
        if basis[k].terms().iter().all(|(_, c)| c.is_integer()) {
            continue;
        }
        let scale = primitive_scale(&basis[k]);
        basis[k] = basis[k].scale(&scale);
        for row in coordinates.iter_mut() {
            row[k] = row[k].scale(&scale);
        }
    }
    Ok(Lifted {
        basis,
        coordinates,
        leading_monomials: result.leading_monomials.clone(),
        warning: precision_warning(result),
    })
}

/// Inter-reduces an exact lifted basis and makes it monic, keeping the
/// coordinates consistent: the reduced Gröbner basis with its `M`.
pub fn reduce_lifted(mut lifted: Lifted<BigRational>) -> Result<Lifted<BigRational>, LiftError> {
    let r = lifted.basis.len();
    for k in 0..r {
        let others: Vec<_> = (0..r).filter(|&j| j != k).map(|j| lifted.basis[j].clone()).collect();
        let div = divide(&lifted.basis[k], &others)?;
        let idx: Vec<usize> = (0..r).filter(|&j| j != k).collect();
        for row in lifted.coordinates.iter_mut() {
            let mut c = row[k].clone();
            for (q, &j) in div.quotients.iter().zip(&idx) {
                if !q.is_zero() {
                    c = c.sub(&q.mul(&row[j]));
                }
            }
            row[k] = c;
        }
        let lc = div.remainder.leading_term()?.1.clone();
        let inv = BigRational::one() / lc;
        lifted.basis[k] = div.remainder.scale(&inv);
        for row in lifted.coordinates.iter_mut() {
            row[k] = row[k].scale(&inv);
        }
    }
    Ok(lifted)
}

/// `c` such that `c * g` has coprime integer coefficients and a positive
/// leading coefficient.
pub fn primitive_scale(g: &Polynomial<BigRational>) -> BigRational {
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for (_, c) in g.terms() {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    if num.is_zero() {
        return BigRational::one();
    }
    let scale = BigRational::new(den, num);
    match g.terms().first() {
        Some((_, c)) if c.is_negative() => -scale,
        _ => scale,
    }
}
