//! System files:
//!
//! ```text
//! # comment
//! field: qp 5
//! vars: x, y, z
//! order: grevlex
//! prec: 10
//! x
//! x*y^2 + y^3 + z^3
//! ```
//!
//! `field:` takes `qp <p>` or `fpt <p>`; `prec:` is the default order of
//! coefficients written without `O(...)`. Command-line flags override headers.

use cdvf_gb::text::{parse_polynomial, CdvfSource, ParseError, RationalSource};
use cdvf_gb::{CdvfContext, FieldKind, MonomialOrder, PadicPolynomial, RationalPolynomial};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{0}")]
    Missing(String),
}

impl InputError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        InputError::Syntax { line, column, message: message.into() }
    }
}

/// Raw contents of a system file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SystemFile {
    pub field: Option<(FieldKind, u64)>,
    pub vars: Option<Vec<String>>,
    pub order: Option<MonomialOrder>,
    pub prec: Option<i64>,
    /// `(line number, text)`.
    pub polys: Vec<(usize, String)>,
}

/// Values supplied on the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub field: Option<FieldKind>,
    pub p: Option<u64>,
    pub prec: Option<i64>,
    pub order: Option<MonomialOrder>,
}

pub const DEFAULT_PREC: i64 = 30;

pub fn parse_field(s: &str) -> Option<FieldKind> {
    match s {
        "qp" => Some(FieldKind::PAdic),
        "fpt" => Some(FieldKind::PowerSeries),
        _ => None,
    }
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let mut out = SystemFile::default();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let indent = content.len() - content.trim_start().len();
            let body = content.trim();
            let header = body.split_once(':').filter(|(key, _)| {
                matches!(key.trim(), "field" | "vars" | "order" | "prec")
            });
            let Some((key, value)) = header else {
                out.polys.push((line, content.to_string()));
                continue;
            };
            if !out.polys.is_empty() {
                return Err(InputError::at(line, indent + 1, "header after the first polynomial"));
            }
            let vcol = indent + key.len() + 2;
            let value = value.trim();
            match key.trim() {
                "field" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    let (Some(kind), Some(p)) = (
                        parts.first().and_then(|s| parse_field(s)),
                        parts.get(1).and_then(|s| s.parse::<u64>().ok()),
                    ) else {
                        return Err(InputError::at(line, vcol, "expected `qp <p>` or `fpt <p>`"));
                    };
                    if parts.len() != 2 {
                        return Err(InputError::at(line, vcol, "expected `qp <p>` or `fpt <p>`"));
                    }
                    out.field = Some((kind, p));
                }
                "vars" => {
                    let vars: Vec<String> =
                        value.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
                    if vars.is_empty() {
                        return Err(InputError::at(line, vcol, "no variables"));
                    }
                    out.vars = Some(vars);
                }
                "order" => {
                    out.order = Some(value.parse().map_err(|_| {
                        InputError::at(line, vcol, format!("unknown monomial order `{value}`"))
                    })?);
                }
                _ => {
                    out.prec = Some(value.parse().map_err(|_| {
                        InputError::at(line, vcol, format!("invalid precision `{value}`"))
                    })?);
                }
            }
        }
        if out.polys.is_empty() {
            return Err(InputError::at(1, 1, "no polynomials"));
        }
        Ok(out)
    }
}

/// A system with every setting decided.
#[derive(Clone, Debug)]
pub struct System {
    pub ctx: CdvfContext,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
    pub prec: i64,
    pub polys: Vec<PadicPolynomial>,
    /// The same polynomials over the rationals, when they are written
    /// exactly (p-adic field, no `O(...)` terms).
    pub exact: Option<Vec<RationalPolynomial>>,
}

impl System {
    pub fn resolve(file: &SystemFile, o: &Overrides) -> Result<Self, InputError> {
        let kind = o.field.or(file.field.map(|f| f.0)).unwrap_or(FieldKind::PAdic);
        let p = o
            .p
            .or(file.field.map(|f| f.1))
            .ok_or_else(|| InputError::Missing("no prime: use `field: qp <p>` or --p".into()))?;
        let ctx = CdvfContext::new(kind, p).map_err(|e| InputError::Missing(e.to_string()))?;
        let vars = file.vars.clone().unwrap_or_else(|| {
            ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
        });
        let order = o.order.or(file.order).unwrap_or_default();
        let prec = o.prec.or(file.prec).unwrap_or(DEFAULT_PREC);
        let src = CdvfSource { ctx, default_order: prec };
        let wrap = |line: usize, e: ParseError| InputError::at(line, e.column, e.message);
        let polys = file
            .polys
            .iter()
            .map(|(line, s)| parse_polynomial(s, &vars, order, &src).map_err(|e| wrap(*line, e)))
            .collect::<Result<Vec<_>, _>>()?;
        let exact = (kind == FieldKind::PAdic)
            .then(|| {
                file.polys
                    .iter()
                    .map(|(_, s)| parse_polynomial(s, &vars, order, &RationalSource).ok())
                    .collect::<Option<Vec<_>>>()
            })
            .flatten();
        Ok(System { ctx, vars, order, prec, polys, exact })
    }

    pub fn load(text: &str, o: &Overrides) -> Result<Self, InputError> {
        Self::resolve(&SystemFile::parse(text)?, o)
    }
}
