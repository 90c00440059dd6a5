//! Multivariate polynomials with per-term coefficients over any [`Scalar`].
//!
//! Terms are kept sorted decreasingly for the ambient order. Exact zeros are
//! never stored; finite-precision coefficients that are indistinguishable
//! from zero are, since they carry the precision of their monomial slot.

mod monomial;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::{ExactField, Scalar, ScalarError};

pub use monomial::{default_names, Monomial, MonomialOrder, OrderKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("leading term is ambiguous: the coefficient of {0} is indistinguishable from zero")]
    AmbiguousLeadingTerm(Monomial),
    #[error("monomials have {0} and {1} variables")]
    DimensionMismatch(usize, usize),
    #[error("precision exhausted during reduction (coefficient of {0})")]
    PrecisionExhausted(Monomial),
    #[error("unknown monomial order `{0}`")]
    UnknownOrder(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<C> {
    nvars: usize,
    order: MonomialOrder,
    terms: Vec<(Monomial, C)>,
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero(nvars: usize, order: MonomialOrder) -> Self {
        Polynomial { nvars, order, terms: Vec::new() }
    }

    /// Builds a polynomial from arbitrary terms; repeated monomials are added
    /// and exact zeros dropped.
    pub fn from_terms(
        nvars: usize,
        order: MonomialOrder,
        terms: impl IntoIterator<Item = (Monomial, C)>,
    ) -> Self {
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        let mut seen: Vec<Monomial> = Vec::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial has the wrong number of variables");
            match acc.remove(&m) {
                Some(prev) => {
                    acc.insert(m, prev + c);
                }
                None => {
                    seen.push(m.clone());
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Monomial, C)> = seen
            .into_iter()
            .filter_map(|m| {
                let c = acc.remove(&m)?;
                (!c.is_zero()).then_some((m, c))
            })
            .collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { nvars, order, terms }
    }

    /// `c * m` as a polynomial.
    pub fn term(order: MonomialOrder, m: Monomial, c: C) -> Self {
        let nvars = m.nvars();
        Self::from_terms(nvars, order, [(m, c)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// Terms, decreasing.
    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms
            .binary_search_by(|(t, _)| self.order.cmp(m, t))
            .ok()
            .map(|i| &self.terms[i].1)
    }

    /// Largest total degree of a stored term.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(m, _)| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Greatest monomial whose coefficient is certified nonzero. Fails if a
    /// greater term cannot be told apart from zero.
    pub fn leading_term(&self) -> Result<(&Monomial, &C), PolyError> {
        let (m, c) = self.terms.first().ok_or(PolyError::ZeroPolynomial)?;
        if c.is_certified_nonzero() {
            Ok((m, c))
        } else {
            Err(PolyError::AmbiguousLeadingTerm(m.clone()))
        }
    }

    pub fn leading_monomial(&self) -> Result<&Monomial, PolyError> {
        self.leading_term().map(|(m, _)| m)
    }

    /// Sum of the terms of highest total degree.
    pub fn top_component(&self) -> Result<Self, PolyError> {
        let d = self.degree().ok_or(PolyError::ZeroPolynomial)?;
        Ok(Polynomial {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect(),
        })
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        Self::from_terms(self.nvars, order, self.terms.iter().cloned())
    }

    pub fn map_coefficients<D: Scalar>(&self, mut f: impl FnMut(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(
            self.nvars,
            self.order,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    pub fn try_map_coefficients<D: Scalar, E>(
        &self,
        mut f: impl FnMut(&C) -> Result<D, E>,
    ) -> Result<Polynomial<D>, E> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.clone(), f(c)?)))
            .collect::<Result<Vec<_>, E>>()?;
        Ok(Polynomial::from_terms(self.nvars, self.order, terms))
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.nvars, other.nvars, "polynomials have different variable counts");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let ord = self.order;
        let rhs = |c: &C| if negate { -c.clone() } else { c.clone() };
        while i < self.terms.len() || j < other.terms.len() {
            let step = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => ord.cmp(&a.0, &b.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match step {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), rhs(c)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.clone() + rhs(&other.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { nvars: self.nvars, order: self.order, terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    /// `c * m * self`. Multiplying by a monomial preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(t, a)| (t.mul(m), a.clone() * c.clone()))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Polynomial { nvars: self.nvars, order: self.order, terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        self.mul_term(&Monomial::one(self.nvars), c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_terms(
            self.nvars,
            self.order,
            self.terms.iter().flat_map(|(m, a)| {
                other.terms.iter().map(move |(n, b)| (m.mul(n), a.clone() * b.clone()))
            }),
        )
    }

    /// Renders with the given variable names, e.g. `(10 + O(5^4))*x`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains([' ', '+', '-']) => (true, rest.to_string()),
                _ => (false, cs),
            };
            if k > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let plain = !body.contains([' ', '/', '+', '-']);
            let coeff = if plain { body } else { format!("({})", body) };
            if m.is_one() {
                out.push_str(&coeff);
            } else if coeff == "1" {
                out.push_str(&m.render(names));
            } else {
                out.push_str(&format!("{}*{}", coeff, m.render(names)));
            }
        }
        out
    }
}

impl<C: ExactField> Polynomial<C> {
    pub fn constant(nvars: usize, order: MonomialOrder, c: C) -> Self {
        Self::from_terms(nvars, order, [(Monomial::one(nvars), c)])
    }

    pub fn variable(nvars: usize, order: MonomialOrder, i: usize) -> Self {
        Self::term(order, Monomial::var(nvars, i), C::one())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = lc.inv().expect("leading coefficient of an exact polynomial is nonzero");
                self.scale(&inv)
            }
        }
    }
}

impl<C: Scalar> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&default_names(self.nvars)))
    }
}

/// Result of dividing `f` by a list: `f = sum q_j g_j + remainder`.
#[derive(Clone, Debug)]
pub struct Division<C> {
    pub quotients: Vec<Polynomial<C>>,
    pub remainder: Polynomial<C>,
}

/// Multivariate division: repeatedly eliminates the greatest term divisible
/// by some `LM(g_j)`, using the first such `g_j`. Eliminated positions become
/// exact zeros, including coefficients indistinguishable from zero.
pub fn divide<C: Scalar>(f: &Polynomial<C>, g: &[Polynomial<C>]) -> Result<Division<C>, PolyError> {
    let leads = g
        .iter()
        .map(|p| p.leading_term().map(|(m, c)| (m.clone(), c.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let order = f.order;
    let mut quotients: Vec<Polynomial<C>> =
        g.iter().map(|_| Polynomial::zero(f.nvars, order)).collect();
    let mut rest = f.clone();
    // Terms at index < start are known not to be reducible.
    let mut start = 0;
    while start < rest.terms.len() {
        let hit = rest.terms[start..].iter().enumerate().find_map(|(k, (m, _))| {
            leads
                .iter()
                .position(|(lm, _)| lm.divides(m))
                .map(|j| (start + k, j))
        });
        let Some((pos, j)) = hit else { break };
        let (m, c) = rest.terms[pos].clone();
        let (lm, lc) = &leads[j];
        let q = c.try_div(lc)?;
        let shift = lm.quotient_of(&m).expect("divisibility was checked");
        let mut step = g[j].mul_term(&shift, &q);
        // the leading term cancels exactly
        step.terms.retain(|(t, _)| *t != m);
        rest.terms.remove(pos);
        rest = rest.sub(&step);
        quotients[j] = quotients[j].add(&Polynomial::term(order, shift, q));
        start = pos;
    }
    if let Some((m, _)) = rest.terms.iter().find(|(_, c)| c.is_exhausted()) {
        return Err(PolyError::PrecisionExhausted(m.clone()));
    }
    Ok(Division { quotients, remainder: rest })
}

/// Remainder of [`divide`].
pub fn reduce<C: Scalar>(f: &Polynomial<C>, g: &[Polynomial<C>]) -> Result<Polynomial<C>, PolyError> {
    divide(f, g).map(|d| d.remainder)
}
