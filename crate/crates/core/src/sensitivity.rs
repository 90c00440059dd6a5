//! First-order sensitivity of the reduced Gröbner basis: `δg = δf M mod G`,
//! and the three ways of measuring precision loss on one instance (direct
//! computation, exact difference of two bases, differential).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cdvf::{Cdvf, CdvfContext, CdvfError};
use crate::f5::{reduce_approximate, weak_mf5, F5Error, GroebnerResult, SystemInput};
use crate::lifting::{reduce_lifted, weak_lift_exact, LiftError, Lifted};
use crate::oracle::{buchberger_reduced, OracleError, OracleLimits};
use crate::poly::{reduce, Monomial, MonomialOrder, PolyError, Polynomial};
use crate::scalar::Scalar;

type Q = Polynomial<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SensitivityError {
    #[error("leading monomials differ between the bases of f and f + df")]
    LeadingMonomialInstability,
    #[error("{0} perturbations for {1} generators")]
    Shape(usize, usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    F5(#[from] F5Error),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Cdvf(#[from] CdvfError),
}

/// `δg_k = reduce(sum_j δf_j M_{j,k}, G)`.
pub fn differential<C: Scalar>(
    m: &[Vec<Polynomial<C>>],
    g: &[Polynomial<C>],
    df: &[Polynomial<C>],
) -> Result<Vec<Polynomial<C>>, SensitivityError> {
    if df.len() != m.len() {
        return Err(SensitivityError::Shape(df.len(), m.len()));
    }
    (0..g.len())
        .map(|k| {
            let mut acc = Polynomial::zero(g[k].nvars(), g[k].order());
            for (dfj, row) in df.iter().zip(m) {
                if !dfj.is_zero() && !row[k].is_zero() {
                    acc = acc.add(&dfj.mul(&row[k]));
                }
            }
            Ok(reduce(&acc, g)?)
        })
        .collect()
}

/// p-adic valuation of a rational; `None` for zero.
pub fn padic_valuation(q: &BigRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut v = 0i64;
        loop {
            let (d, r) = n.div_rem(&p);
            if !r.is_zero() {
                return v;
            }
            n = d;
            v += 1;
        }
    };
    Some(count(q.numer()) - count(q.denom()))
}

/// Per-coefficient valuations of `g(f + df) - g(f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceReport {
    /// `None` stands for an infinite valuation (equal coefficients).
    pub valuations: Vec<Vec<(Monomial, Option<i64>)>>,
    pub min: Option<i64>,
}

/// Difference method: exact reduced bases of `f` and `f + df`.
pub fn difference_method(
    f: &[Q],
    df: &[Q],
    p: u64,
    order: MonomialOrder,
    degree_cap: Option<u32>,
) -> Result<DifferenceReport, SensitivityError> {
    if df.len() != f.len() {
        return Err(SensitivityError::Shape(df.len(), f.len()));
    }
    let f2: Vec<Q> = f.iter().zip(df).map(|(a, b)| a.add(b)).collect();
    let g1 = buchberger_reduced(f, order, degree_cap, OracleLimits::default())?;
    let g2 = buchberger_reduced(&f2, order, degree_cap, OracleLimits::default())?;
    let lms = |g: &[Q]| g.iter().map(|p| p.leading_monomial().cloned()).collect::<Result<Vec<_>, _>>();
    if g1.len() != g2.len() || lms(&g1)? != lms(&g2)? {
        return Err(SensitivityError::LeadingMonomialInstability);
    }
    let mut valuations = Vec::new();
    let mut min: Option<i64> = None;
    for (a, b) in g1.iter().zip(&g2) {
        let d = b.sub(a);
        let mut monos: Vec<Monomial> = a.terms().iter().chain(b.terms()).map(|(m, _)| m.clone()).collect();
        monos.sort_by(|u, v| order.cmp(v, u));
        monos.dedup();
        let row: Vec<(Monomial, Option<i64>)> = monos
            .into_iter()
            .map(|m| {
                let v = d.coefficient(&m).and_then(|c| padic_valuation(c, p));
                (m, v)
            })
            .collect();
        for v in row.iter().filter_map(|(_, v)| *v) {
            min = Some(min.map_or(v, |x| x.min(v)));
        }
        valuations.push(row);
    }
    Ok(DifferenceReport { valuations, min })
}

/// One column of the comparison table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Estimate {
    Value(i64),
    Infinite,
    Failed(String),
}

impl std::fmt::Display for Estimate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Estimate::Value(v) => write!(f, "{v}"),
            Estimate::Infinite => write!(f, "inf"),
            Estimate::Failed(_) => write!(f, "fail"),
        }
    }
}

impl Estimate {
    fn from_min(v: Option<i64>) -> Self {
        v.map_or(Estimate::Infinite, Estimate::Value)
    }

    pub fn value(&self) -> Option<i64> {
        match self {
            Estimate::Value(v) => Some(*v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodMinima {
    /// Smallest order in the reduced basis computed at finite precision.
    pub direct: Estimate,
    /// Smallest valuation of `g(f + df) - g(f)`.
    pub difference: Estimate,
    /// Smallest valuation of the first-order term `δg = δf M mod G`.
    pub differential: Estimate,
    /// Set when `df` is not smaller than the certified `prec_Mac` neighbourhood.
    pub warning: Option<String>,
}

fn approximate(f: &[Q], ctx: CdvfContext, prec: i64) -> Result<Vec<Polynomial<Cdvf>>, CdvfError> {
    f.iter().map(|p| p.try_map_coefficients(|c| ctx.from_bigrational(c, prec))).collect()
}

fn weak_mf5_at(
    f: &[Q],
    ctx: CdvfContext,
    prec: i64,
    cap: u32,
    order: MonomialOrder,
) -> Result<GroebnerResult, SensitivityError> {
    let input = SystemInput::new(approximate(f, ctx, prec)?, cap, order)?;
    Ok(weak_mf5(&input)?)
}

/// Exact reduced basis and its coordinates, by lifting a finite-precision
/// run (the precision is doubled a few times if the lift cannot be verified).
pub fn exact_reduced_basis(
    f: &[Q],
    ctx: CdvfContext,
    prec: i64,
    cap: u32,
    order: MonomialOrder,
) -> Result<Lifted<BigRational>, SensitivityError> {
    let mut k = prec;
    let mut last = None;
    for _ in 0..3 {
        match weak_mf5_at(f, ctx, k, cap, order).and_then(|r| Ok(weak_lift_exact(f, &r)?)) {
            Ok(l) => return Ok(reduce_lifted(l)?),
            Err(e) => last = Some(e),
        }
        k *= 2;
    }
    Err(last.unwrap())
}

/// Balls `O(p^v)` at the valuations of the coefficients of `df`.
pub fn ball_perturbation(df: &[Q], ctx: CdvfContext) -> Vec<Polynomial<Cdvf>> {
    df.iter()
        .map(|p| {
            p.map_coefficients(|c| match padic_valuation(c, ctx.p()) {
                Some(v) => ctx.big_o(v),
                None => Cdvf::ZERO,
            })
        })
        .collect()
}

fn min_order(g: &[Polynomial<Cdvf>]) -> Option<i64> {
    g.iter().flat_map(|p| p.terms()).filter_map(|(_, c)| c.order()).min()
}

/// The three estimates on one instance `f` (exact) with perturbation `df`.
pub fn compare_methods(
    f: &[Q],
    df: &[Q],
    ctx: CdvfContext,
    prec: i64,
    cap: u32,
    order: MonomialOrder,
) -> MethodMinima {
    let direct = weak_mf5_at(f, ctx, prec, cap, order)
        .and_then(|r| Ok(reduce_approximate(&r.basis)?))
        .map_or_else(|e| Estimate::Failed(e.to_string()), |g| Estimate::from_min(min_order(&g)));

    let difference = match difference_method(f, df, ctx.p(), order, Some(cap)) {
        Ok(r) => Estimate::from_min(r.min),
        Err(e) => Estimate::Failed(e.to_string()),
    };

    let differential = exact_reduced_basis(f, ctx, prec, cap, order)
        .and_then(|l| differential(&l.coordinates, &l.basis, df))
        .map_or_else(
            |e| Estimate::Failed(e.to_string()),
            |dg| {
                let v = dg.iter().flat_map(|p| p.terms()).filter_map(|(_, c)| padic_valuation(c, ctx.p())).min();
                Estimate::from_min(v)
            },
        );

    let warning = SystemInput::new(approximate(f, ctx, prec).unwrap_or_default(), cap, order)
        .ok()
        .and_then(|input| crate::f5::prec_mac(&input).ok())
        .and_then(|rep| {
            let v = df.iter().flat_map(|p| p.terms()).filter_map(|(_, c)| padic_valuation(c, ctx.p())).min()?;
            (rep.certified && v <= rep.bound).then(|| {
                format!("perturbation valuation {v} does not exceed the precision bound {}", rep.bound)
            })
        });

    MethodMinima { direct, difference, differential, warning }
}
