//! Versioned JSON documents and plain-text rendering of results.

use cdvf_gb::f5::{GroebnerResult, Method, PrecisionReport, StepReport};
use cdvf_gb::text::{parse_coefficient, CdvfSource};
use cdvf_gb::{Cdvf, CdvfContext, FieldKind, Monomial, MonomialOrder, PadicPolynomial, Polynomial, Scalar};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "cdvf-gb.result";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub exponents: Vec<u32>,
    /// Coefficient in the text syntax, e.g. `10 + O(5^4)` or `3/2`.
    pub value: String,
    /// Absolute precision; absent for exact coefficients.
    pub order: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub text: String,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldDoc {
    /// `qp`, `fpt` or `q` (exact rationals).
    pub kind: String,
    pub p: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepDoc {
    pub degree: u32,
    pub generator: usize,
    pub rows: usize,
    pub stop_column: usize,
    pub loss_bound: i64,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundDoc {
    pub method: String,
    pub value: i64,
    pub certified: bool,
    pub rescaled: bool,
    pub steps: Vec<StepDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossDoc {
    pub realized: i64,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub schema: String,
    pub version: u32,
    pub field: FieldDoc,
    pub vars: Vec<String>,
    pub order: String,
    pub degree_cap: u32,
    pub method: String,
    pub entry_order: i64,
    pub inputs: Vec<PolyDoc>,
    pub basis: Vec<PolyDoc>,
    pub leading_monomials: Vec<Vec<u32>>,
    /// `coordinates[j][k]`: coefficient of input `j` in basis element `k`.
    pub coordinates: Option<Vec<Vec<PolyDoc>>>,
    pub bound: BoundDoc,
    pub losses: LossDoc,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

pub fn field_doc(ctx: CdvfContext) -> FieldDoc {
    let kind = match ctx.kind() {
        FieldKind::PAdic => "qp",
        FieldKind::PowerSeries => "fpt",
    };
    FieldDoc { kind: kind.into(), p: Some(ctx.p()) }
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Mf5 => "mf5",
        Method::Matrix => "matrix",
    }
}

/// Exact coefficients have no order.
pub trait Precision {
    fn precision(&self) -> Option<i64>;
}

impl Precision for Cdvf {
    fn precision(&self) -> Option<i64> {
        self.order()
    }
}

impl Precision for num_rational::BigRational {
    fn precision(&self) -> Option<i64> {
        None
    }
}

pub fn poly_doc<C: Scalar + Precision>(p: &Polynomial<C>, vars: &[String]) -> PolyDoc {
    PolyDoc {
        text: p.render(vars),
        terms: p
            .terms()
            .iter()
            .map(|(m, c)| TermDoc { exponents: m.exponents().to_vec(), value: c.to_string(), order: c.precision() })
            .collect(),
    }
}

pub fn bound_doc(r: &PrecisionReport) -> BoundDoc {
    BoundDoc {
        method: method_name(r.method).into(),
        value: r.bound,
        certified: r.certified,
        rescaled: r.rescaled,
        steps: r
            .steps
            .iter()
            .map(|s| StepDoc {
                degree: s.degree,
                generator: s.generator,
                rows: s.rows,
                stop_column: s.stop_column,
                loss_bound: s.loss_bound,
                certified: s.certified,
            })
            .collect(),
    }
}

pub fn mean(v: &[i64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<i64>() as f64 / v.len() as f64
    }
}

#[allow(clippy::too_many_arguments)]
pub fn result_doc(
    res: &GroebnerResult,
    ctx: CdvfContext,
    vars: &[String],
    order: MonomialOrder,
    method: &str,
    inputs: &[PadicPolynomial],
    warnings: Vec<String>,
) -> ResultDoc {
    ResultDoc {
        schema: SCHEMA.into(),
        version: VERSION,
        field: field_doc(ctx),
        vars: vars.to_vec(),
        order: order.to_string(),
        degree_cap: res.degree_cap,
        method: method.into(),
        entry_order: res.entry_order,
        inputs: inputs.iter().map(|p| poly_doc(p, vars)).collect(),
        basis: res.basis.iter().map(|p| poly_doc(p, vars)).collect(),
        leading_monomials: res.leading_monomials.iter().map(|m| m.exponents().to_vec()).collect(),
        coordinates: res
            .coordinates
            .as_ref()
            .map(|m| m.iter().map(|row| row.iter().map(|p| poly_doc(p, vars)).collect()).collect()),
        bound: bound_doc(&res.report),
        losses: LossDoc { realized: res.realized_loss(), mean: mean(&res.coefficient_losses()) },
        warnings,
    }
}

fn read_poly(doc: &PolyDoc, ctx: CdvfContext, nvars: usize, order: MonomialOrder) -> Result<PadicPolynomial, String> {
    let terms = doc
        .terms
        .iter()
        .map(|t| {
            if t.exponents.len() != nvars {
                return Err(format!("term of `{}` has {} exponents", doc.text, t.exponents.len()));
            }
            let o = t.order.ok_or_else(|| format!("coefficient `{}` has no order", t.value))?;
            // generous working order; the explicit O(...) term caps it
            let src = CdvfSource { ctx, default_order: o + 64 };
            let c = parse_coefficient(&t.value, &src).map_err(|e| format!("`{}`: {e}", t.value))?;
            Ok((Monomial::new(t.exponents.iter().copied()), c))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(Polynomial::from_terms(nvars, order, terms))
}

/// A saved finite-precision result, ready for lifting.
pub struct LoadedResult {
    pub ctx: CdvfContext,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
    pub inputs: Vec<PadicPolynomial>,
    pub result: GroebnerResult,
}

pub fn load_result(doc: &ResultDoc) -> Result<LoadedResult, String> {
    if doc.schema != SCHEMA || doc.version != VERSION {
        return Err(format!("unsupported document {} v{}", doc.schema, doc.version));
    }
    let kind = crate::input::parse_field(&doc.field.kind).ok_or("result is not over a p-adic or series field")?;
    let ctx = CdvfContext::new(kind, doc.field.p.ok_or("missing prime")?).map_err(|e| e.to_string())?;
    let order: MonomialOrder = doc.order.parse().map_err(|_| format!("unknown order {}", doc.order))?;
    let n = doc.vars.len();
    let polys = |v: &[PolyDoc]| v.iter().map(|p| read_poly(p, ctx, n, order)).collect::<Result<Vec<_>, _>>();
    let coordinates = doc
        .coordinates
        .as_ref()
        .map(|m| m.iter().map(|row| polys(row)).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let method = match doc.bound.method.as_str() {
        "matrix" => Method::Matrix,
        _ => Method::Mf5,
    };
    let report = PrecisionReport {
        method,
        steps: doc
            .bound
            .steps
            .iter()
            .map(|s| StepReport {
                degree: s.degree,
                generator: s.generator,
                rows: s.rows,
                stop_column: s.stop_column,
                pivot_valuations: Vec::new(),
                loss_bound: s.loss_bound,
                completed: 0,
                certified: s.certified,
            })
            .collect(),
        bound: doc.bound.value,
        certified: doc.bound.certified,
        rescaled: doc.bound.rescaled,
    };
    let result = GroebnerResult {
        basis: polys(&doc.basis)?,
        coordinates,
        leading_monomials: doc.leading_monomials.iter().map(|e| Monomial::new(e.iter().copied())).collect(),
        report,
        degree_cap: doc.degree_cap,
        entry_order: doc.entry_order,
    };
    Ok(LoadedResult { ctx, vars: doc.vars.clone(), order, inputs: polys(&doc.inputs)?, result })
}

/// Human-readable summary of a basis computation.
pub fn render_text(doc: &ResultDoc) -> String {
    let mut out = String::new();
    let p = doc.field.p.map(|p| p.to_string()).unwrap_or_default();
    out.push_str(&format!(
        "field {} {}, order {}, degree cap {}, method {}\n",
        doc.field.kind, p, doc.order, doc.degree_cap, doc.method
    ));
    out.push_str("basis:\n");
    for g in &doc.basis {
        out.push_str(&format!("  {}\n", g.text));
    }
    if let Some(m) = &doc.coordinates {
        out.push_str("coordinates (row j = input j):\n");
        for row in m {
            let cells: Vec<&str> = row.iter().map(|p| if p.terms.is_empty() { "0" } else { p.text.as_str() }).collect();
            out.push_str(&format!("  [{}]\n", cells.join(", ")));
        }
    }
    out.push_str(&format!(
        "precision bound ({}): {}{}\n",
        doc.bound.method,
        doc.bound.value,
        if doc.bound.certified { "" } else { " (not certified)" }
    ));
    out.push_str(&format!("realized loss: {} (mean {:.3})\n", doc.losses.realized, doc.losses.mean));
    for w in &doc.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}
