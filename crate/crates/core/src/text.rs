//! Text syntax for polynomials: `3*x^2*y - 5*y^3`, `(1 + O(5^4))*x^2`,
//! `(2 + t)*x` over `F_p[[t]]`. Juxtaposition multiplies (`10x`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::cdvf::{Cdvf, CdvfContext, FieldKind};
use crate::poly::{Monomial, MonomialOrder, Polynomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based.
    pub column: usize,
    pub message: String,
}

fn err<T>(column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { column, message: message.into() })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((Tok::Int(text.parse().unwrap()), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return err(col, format!("unexpected character `{}`", c));
        }
    }
    Ok(out)
}

/// Builds coefficients of type `C` for the evaluator.
pub trait CoefficientSource<C> {
    fn integer(&self, n: &BigInt) -> C;
    /// `O(base^exp)`; `base` is `None` for the series variable `t`.
    fn big_o(&self, base: Option<&BigInt>, exp: i64) -> Result<C, String>;
    /// The series variable `t`, when the field has one.
    fn series_variable(&self) -> Option<C>;
}

/// Finite-precision coefficients; integers are known up to `O(pi^default_order)`.
#[derive(Clone, Copy, Debug)]
pub struct CdvfSource {
    pub ctx: CdvfContext,
    pub default_order: i64,
}

impl CoefficientSource<Cdvf> for CdvfSource {
    fn integer(&self, n: &BigInt) -> Cdvf {
        self.ctx.from_integer(n, self.default_order)
    }

    fn big_o(&self, base: Option<&BigInt>, exp: i64) -> Result<Cdvf, String> {
        let ok = match (self.ctx.kind(), base) {
            (FieldKind::PAdic, Some(b)) => *b == BigInt::from(self.ctx.p()),
            (FieldKind::PowerSeries, None) => true,
            _ => false,
        };
        if !ok {
            return Err(format!("O(...) must use the uniformizer {}", self.ctx.uniformizer_symbol()));
        }
        Ok(self.ctx.big_o(exp))
    }

    fn series_variable(&self) -> Option<Cdvf> {
        (self.ctx.kind() == FieldKind::PowerSeries)
            .then(|| self.ctx.uniformizer_power(1, self.default_order))
    }
}

/// Exact rational coefficients.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalSource;

impl CoefficientSource<BigRational> for RationalSource {
    fn integer(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn big_o(&self, _: Option<&BigInt>, _: i64) -> Result<BigRational, String> {
        Err("O(...) terms are not allowed in exact input".to_string())
    }

    fn series_variable(&self) -> Option<BigRational> {
        None
    }
}

struct Parser<'a, C, S> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
    order: MonomialOrder,
    src: &'a S,
    _c: std::marker::PhantomData<C>,
}

impl<C: Scalar, S: CoefficientSource<C>> Parser<'_, C, S> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.col(), format!("expected `{}`", c))
        }
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn constant(&self, c: C) -> Polynomial<C> {
        Polynomial::from_terms(self.nvars(), self.order, [(Monomial::one(self.nvars()), c)])
    }

    fn expr(&mut self) -> Result<Polynomial<C>, ParseError> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<Polynomial<C>, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.peek() == Some(&Tok::Op('/')) {
                let col = self.col();
                self.pos += 1;
                let d = self.power()?;
                acc = self.divide(acc, d, col)?;
            } else if self.starts_atom() {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn divide(&self, num: Polynomial<C>, den: Polynomial<C>, col: usize) -> Result<Polynomial<C>, ParseError> {
        let c = match den.terms() {
            [] => return err(col, "division by zero"),
            [(m, c)] if m.is_one() => c.clone(),
            _ => return err(col, "only division by constants is supported"),
        };
        num.try_map_coefficients(|a| a.try_div(&c))
            .or_else(|e| err(col, e.to_string()))
    }

    fn power(&mut self) -> Result<Polynomial<C>, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let col = self.col();
        let e = match self.peek() {
            Some(Tok::Int(n)) => n.to_u32(),
            _ => None,
        };
        let Some(e) = e else {
            return err(col, "exponent must be a non-negative integer");
        };
        self.pos += 1;
        let mut acc = self.constant(self.src.integer(&BigInt::one()));
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Polynomial<C>, ParseError> {
        let col = self.col();
        let Some(tok) = self.peek().cloned() else {
            return err(col, "unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(self.constant(self.src.integer(&n))),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Op('-') => Ok(self.power()?.neg()),
            Tok::Op(c) => err(col, format!("unexpected `{}`", c)),
            Tok::Ident(name) if name == "O" && self.peek() == Some(&Tok::Op('(')) => {
                self.pos += 1;
                let b = self.big_o(col)?;
                self.expect(')')?;
                Ok(b)
            }
            Tok::Ident(name) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Polynomial::term(
                        self.order,
                        Monomial::var(self.nvars(), i),
                        self.src.integer(&BigInt::one()),
                    ));
                }
                if name == "t" {
                    if let Some(t) = self.src.series_variable() {
                        return Ok(self.constant(t));
                    }
                }
                err(col, format!("unknown variable `{}`", name))
            }
        }
    }

    fn big_o(&mut self, col: usize) -> Result<Polynomial<C>, ParseError> {
        let base = match self.peek().cloned() {
            Some(Tok::Int(n)) => Some(n),
            Some(Tok::Ident(s)) if s == "t" => None,
            _ => return err(self.col(), "expected the uniformizer inside O(...)"),
        };
        self.pos += 1;
        let exp = if self.eat('^') {
            let neg = self.eat('-');
            let c = self.col();
            match self.peek() {
                Some(Tok::Int(n)) => {
                    let v = n.to_i64().ok_or(ParseError { column: c, message: "exponent too large".into() })?;
                    self.pos += 1;
                    if neg { -v } else { v }
                }
                _ => return err(c, "expected an integer exponent"),
            }
        } else {
            1
        };
        match self.src.big_o(base.as_ref(), exp) {
            Ok(c) if c.is_zero() => Ok(Polynomial::zero(self.nvars(), self.order)),
            Ok(c) => Ok(self.constant(c)),
            Err(m) => err(col, m),
        }
    }
}

/// Parses one polynomial in the variables `vars`.
pub fn parse_polynomial<C: Scalar, S: CoefficientSource<C>>(
    s: &str,
    vars: &[String],
    order: MonomialOrder,
    src: &S,
) -> Result<Polynomial<C>, ParseError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return err(1, "empty expression");
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: s.chars().count() + 1,
        vars,
        order,
        src,
        _c: std::marker::PhantomData,
    };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return err(p.col(), "unexpected trailing input");
    }
    Ok(out)
}

/// Parses a single coefficient such as `3/10 + O(5^4)`.
pub fn parse_coefficient<C: Scalar, S: CoefficientSource<C>>(s: &str, src: &S) -> Result<C, ParseError> {
    let p = parse_polynomial(s, &[], MonomialOrder::GREVLEX, src)?;
    Ok(p.terms().first().map(|(_, c)| c.clone()).unwrap_or_else(C::zero))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn q5(order: i64) -> CdvfSource {
        CdvfSource { ctx: CdvfContext::padic(5).unwrap(), default_order: order }
    }

    #[test]
    fn parses_exact_polynomial() {
        let v = names(&["x", "y", "z"]);
        let f = parse_polynomial("25x*y^2 + y^3 + z^3", &v, MonomialOrder::GREVLEX, &RationalSource).unwrap();
        assert_eq!(f.to_string(), "25*x*y^2 + y^3 + z^3");
        let g = parse_polynomial("(x - y)^2 / 2", &v, MonomialOrder::GREVLEX, &RationalSource).unwrap();
        assert_eq!(g.to_string(), "(1/2)*x^2 - x*y + (1/2)*y^2");
    }

    #[test]
    fn parses_balls() {
        let v = names(&["x", "y"]);
        let f = parse_polynomial("(10 + O(5^4))*x + 3*y", &v, MonomialOrder::GREVLEX, &q5(6)).unwrap();
        assert_eq!(f.to_string(), "(10 + O(5^4))*x + (3 + O(5^6))*y");
        let g = parse_polynomial("O(5^3)*x^2 + x*y", &v, MonomialOrder::GREVLEX, &q5(3)).unwrap();
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn parses_coefficients() {
        let c = parse_coefficient("3/10 + O(5^4)", &q5(10)).unwrap();
        assert_eq!(c.order(), Some(4));
        let z = parse_coefficient("0", &q5(10)).unwrap();
        assert!(z.is_indistinguishable_from_zero());
    }

    #[test]
    fn power_series_variable() {
        let src = CdvfSource { ctx: CdvfContext::power_series(3).unwrap(), default_order: 5 };
        let f = parse_polynomial("(1 + 2t^2)*x + O(t^3)*y", &names(&["x", "y"]), MonomialOrder::GREVLEX, &src).unwrap();
        assert_eq!(f.to_string(), "(1 + 2*t^2 + O(t^5))*x + (0 + O(t^3))*y");
    }

    #[test]
    fn errors_carry_columns() {
        let v = names(&["x"]);
        let e = parse_polynomial("x + y", &v, MonomialOrder::GREVLEX, &RationalSource).unwrap_err();
        assert_eq!(e.column, 5);
        let e = parse_polynomial("x +", &v, MonomialOrder::GREVLEX, &RationalSource).unwrap_err();
        assert_eq!(e.column, 4);
        let e = parse_polynomial("O(5^2)", &v, MonomialOrder::GREVLEX, &RationalSource).unwrap_err();
        assert_eq!(e.column, 1);
        assert!(parse_polynomial("O(7)", &v, MonomialOrder::GREVLEX, &q5(3)).is_err());
        assert!(parse_polynomial("", &v, MonomialOrder::GREVLEX, &q5(3)).is_err());
        assert!(parse_polynomial("x / x", &v, MonomialOrder::GREVLEX, &RationalSource).is_err());
    }
}
