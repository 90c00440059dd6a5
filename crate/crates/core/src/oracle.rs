//! Exact reduced Gröbner bases by Buchberger's algorithm, and the structural
//! checks built on them (regular sequences, weakly-w ideals).
//!
//! Deliberately independent of the Macaulay-matrix code: it is the reference
//! the approximate computations are tested against.

use thiserror::Error;

use crate::poly::{reduce, Monomial, MonomialOrder, PolyError, Polynomial};
use crate::scalar::ExactField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("basis grew beyond {0} elements")]
    ResourceCap(usize),
    #[error("degree-truncated computation needs homogeneous input")]
    NotHomogeneous,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Caps for desk-scale runs.
#[derive(Clone, Copy, Debug)]
pub struct OracleLimits {
    pub max_basis: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_basis: 2000 }
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn s_polynomial<C: ExactField>(f: &Polynomial<C>, g: &Polynomial<C>, lcm: &Monomial) -> Polynomial<C> {
    let (lf, cf) = f.leading_term().expect("nonzero");
    let (lg, cg) = g.leading_term().expect("nonzero");
    let a = f.mul_term(&lf.quotient_of(lcm).unwrap(), &cf.inv().unwrap());
    let b = g.mul_term(&lg.quotient_of(lcm).unwrap(), &cg.inv().unwrap());
    a.sub(&b)
}

/// Reduced Gröbner basis, monic, sorted by degree and then by decreasing
/// leading monomial. With `degree_cap`, homogeneous inputs give the reduced
/// basis of the ideal truncated at that degree (pairs beyond it are skipped).
pub fn buchberger_reduced<C: ExactField>(
    f: &[Polynomial<C>],
    order: MonomialOrder,
    degree_cap: Option<u32>,
    limits: OracleLimits,
) -> Result<Vec<Polynomial<C>>, OracleError> {
    if degree_cap.is_some() && !f.iter().all(|p| p.is_homogeneous()) {
        return Err(OracleError::NotHomogeneous);
    }
    let mut basis: Vec<Polynomial<C>> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let within = |m: &Monomial| degree_cap.is_none_or(|d| m.degree() <= d);

    let add = |basis: &mut Vec<Polynomial<C>>, pairs: &mut Vec<Pair>, g: Polynomial<C>| {
        let g = g.monic();
        let lm = g.leading_monomial().unwrap().clone();
        let k = basis.len();
        for (i, h) in basis.iter().enumerate() {
            let lh = h.leading_monomial().unwrap();
            if lh.is_coprime(&lm) {
                continue;
            }
            let lcm = lh.lcm(&lm);
            if within(&lcm) {
                pairs.push(Pair { i, j: k, lcm });
            }
        }
        basis.push(g);
    };

    for p in f {
        let p = p.with_order(order);
        let r = reduce(&p, &basis)?;
        if !r.is_zero() {
            add(&mut basis, &mut pairs, r);
        }
    }
    while !pairs.is_empty() {
        // normal strategy: smallest lcm first
        let k = (0..pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pairs[a], &pairs[b]);
                order.cmp(&pa.lcm, &pb.lcm).then((pa.i, pa.j).cmp(&(pb.i, pb.j)))
            })
            .unwrap();
        let pair = pairs.swap_remove(k);
        let s = s_polynomial(&basis[pair.i], &basis[pair.j], &pair.lcm);
        let r = reduce(&s, &basis)?;
        if !r.is_zero() {
            if basis.len() >= limits.max_basis {
                return Err(OracleError::ResourceCap(limits.max_basis));
            }
            add(&mut basis, &mut pairs, r);
        }
    }
    Ok(reduce_basis(basis)?)
}

/// Minimalizes, inter-reduces and normalizes a Gröbner basis.
pub fn reduce_basis<C: ExactField>(basis: Vec<Polynomial<C>>) -> Result<Vec<Polynomial<C>>, PolyError> {
    let lms: Vec<Monomial> = basis
        .iter()
        .map(|g| g.leading_monomial().cloned())
        .collect::<Result<_, _>>()?;
    let mut keep: Vec<Polynomial<C>> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let redundant = lms.iter().enumerate().any(|(j, l)| {
            j != k && l.divides(&lms[k]) && (l != &lms[k] || j < k)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let others: Vec<Polynomial<C>> =
            keep.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, g)| g.clone()).collect();
        out.push(reduce(&keep[k], &others)?.monic());
    }
    sort_basis(&mut out);
    Ok(out)
}

/// Degree first, then decreasing leading monomial.
pub fn sort_basis<C: crate::scalar::Scalar>(basis: &mut [Polynomial<C>]) {
    basis.sort_by(|a, b| {
        let (la, lb) = (a.leading_monomial().unwrap(), b.leading_monomial().unwrap());
        la.degree().cmp(&lb.degree()).then_with(|| a.order().cmp(lb, la))
    });
}

/// Number of degree-`d` monomials in the ideal generated by `lms`.
pub fn leading_ideal_dimension(lms: &[Monomial], nvars: usize, d: u32) -> usize {
    MonomialOrder::GREVLEX
        .monomials_of_degree(nvars, d)
        .iter()
        .filter(|m| lms.iter().any(|l| l.divides(m)))
        .count()
}

/// Hilbert function of a regular sequence of the given degrees, for `t^0..t^cap`.
pub fn regular_hilbert_function(nvars: usize, degrees: &[u32], cap: u32) -> Vec<i128> {
    let len = cap as usize + 1;
    let mut num = vec![0i128; len];
    num[0] = 1;
    for &d in degrees {
        let d = d as usize;
        for k in (d..len).rev() {
            num[k] -= num[k - d];
        }
    }
    // divide by (1 - t)^n: n prefix sums
    for _ in 0..nvars {
        for k in 1..len {
            num[k] += num[k - 1];
        }
    }
    num
}

fn truncated_bases<C: ExactField>(
    f: &[Polynomial<C>],
    order: MonomialOrder,
    cap: u32,
) -> Result<Vec<Vec<Polynomial<C>>>, OracleError> {
    (1..=f.len())
        .map(|i| buchberger_reduced(&f[..i], order, Some(cap), OracleLimits::default()))
        .collect()
}

/// Every prefix `f_1..f_i` has the Hilbert function of a regular sequence up
/// to degree `cap` (homogeneous input).
pub fn check_regular_sequence<C: ExactField>(
    f: &[Polynomial<C>],
    order: MonomialOrder,
    cap: u32,
) -> Result<bool, OracleError> {
    let n = f.first().map_or(0, |p| p.nvars());
    let degrees: Vec<u32> = f.iter().map(|p| p.degree().unwrap_or(0)).collect();
    for (i, g) in truncated_bases(f, order, cap)?.iter().enumerate() {
        let lms: Vec<Monomial> = g.iter().map(|p| p.leading_monomial().unwrap().clone()).collect();
        let hf = regular_hilbert_function(n, &degrees[..=i], cap);
        for d in 0..=cap {
            let total = order.monomials_of_degree(n, d).len() as i128;
            if total - leading_ideal_dimension(&lms, n, d) as i128 != hf[d as usize] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every prefix ideal is weakly-w up to degree `cap`: each monomial of the
/// same degree above a leading monomial of the reduced basis is itself a
/// leading monomial of the ideal.
pub fn check_weakly_w<C: ExactField>(
    f: &[Polynomial<C>],
    order: MonomialOrder,
    cap: u32,
) -> Result<bool, OracleError> {
    let n = f.first().map_or(0, |p| p.nvars());
    for g in truncated_bases(f, order, cap)? {
        let lms: Vec<Monomial> = g.iter().map(|p| p.leading_monomial().unwrap().clone()).collect();
        for lm in &lms {
            for m in order.monomials_of_degree(n, lm.degree()) {
                if order.cmp(&m, lm).is_le() {
                    break;
                }
                if !lms.iter().any(|l| l.divides(&m)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
