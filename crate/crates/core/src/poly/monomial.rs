use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::PolyError;

/// `X_1^{u_1} ... X_n^{u_n}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u32; 6]>);

impl Monomial {
    pub fn new(exponents: impl IntoIterator<Item = u32>) -> Self {
        Monomial(exponents.into_iter().collect())
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    /// The variable `X_{i+1}` (zero-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Renders with the given variable names; `1` for the unit monomial.
    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{}", names[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Default variable names: `x, y, z` for up to three variables, else `x1..xn`.
pub fn default_names(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{}", i)).collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&default_names(self.nvars())))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum OrderKind {
    #[default]
    Grevlex,
    Lex,
}

/// A monomial order; variables take precedence in declaration order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct MonomialOrder {
    pub kind: OrderKind,
}

impl MonomialOrder {
    pub const GREVLEX: MonomialOrder = MonomialOrder { kind: OrderKind::Grevlex };
    pub const LEX: MonomialOrder = MonomialOrder { kind: OrderKind::Lex };

    pub fn refines_degree(&self) -> bool {
        self.kind == OrderKind::Grevlex
    }

    pub fn compare(&self, u: &Monomial, v: &Monomial) -> Result<Ordering, PolyError> {
        if u.nvars() != v.nvars() {
            return Err(PolyError::DimensionMismatch(u.nvars(), v.nvars()));
        }
        Ok(self.cmp(u, v))
    }

    /// Same as [`compare`](Self::compare) for monomials of equal length.
    pub fn cmp(&self, u: &Monomial, v: &Monomial) -> Ordering {
        let (a, b) = (u.exponents(), v.exponents());
        match self.kind {
            OrderKind::Lex => a.cmp(b),
            OrderKind::Grevlex => u.degree().cmp(&v.degree()).then_with(|| {
                a.iter()
                    .zip(b)
                    .rev()
                    .find(|(x, y)| x != y)
                    .map_or(Ordering::Equal, |(x, y)| y.cmp(x))
            }),
        }
    }

    /// All monomials of degree `d` in `nvars` variables, decreasing.
    pub fn monomials_of_degree(&self, nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fill(&mut cur, 0, d, &mut out);
        out.sort_by(|u, v| self.cmp(v, u));
        out
    }
}

fn fill(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Monomial>) {
    let n = cur.len();
    if n == 0 {
        if left == 0 {
            out.push(Monomial::new([]));
        }
        return;
    }
    if i == n - 1 {
        cur[i] = left;
        out.push(Monomial::new(cur.iter().copied()));
        return;
    }
    for e in 0..=left {
        cur[i] = e;
        fill(cur, i + 1, left - e, out);
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OrderKind::Grevlex => write!(f, "grevlex"),
            OrderKind::Lex => write!(f, "lex"),
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "grevlex" => Ok(Self::GREVLEX),
            "lex" => Ok(Self::LEX),
            other => Err(PolyError::UnknownOrder(other.to_string())),
        }
    }
}
