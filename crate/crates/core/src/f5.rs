//! Approximate D-Gröbner bases by echelonizing Macaulay matrices.
//!
//! For every degree `d <= D` and prefix `f_1..f_i` of the (degree-sorted)
//! input, the F5-filtered Macaulay matrix `M_{d,i}` is echelonized up to its
//! first column without a certified pivot. The missing leading monomials are
//! then filled in with multiples `X_k * P` of rows `P` of the degree `d - 1`
//! result. Rows with new leading monomials form a minimal basis.
//!
//! The weak-Matrix variant echelonizes the full `Mac_d(f_1..f_i)` instead of
//! `M_{d,i}`, which lowers the precision requirement at a higher cost.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::cdvf::{Cdvf, CdvfContext, Valuation};
use crate::linalg::{row_echelon_prefix, LabeledMatrix, LinalgError, Matrix, Signature};
use crate::poly::{Monomial, MonomialOrder, PolyError, Polynomial};

type Poly = Polynomial<Cdvf>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum F5Error {
    #[error("empty input system")]
    EmptySystem,
    #[error("generator {0} is the zero polynomial")]
    ZeroGenerator(usize),
    #[error("generator {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error("generators use different variable counts or fields")]
    Inconsistent,
    #[error("the monomial order must refine the total degree")]
    OrderDoesNotRefineDegree,
    #[error(
        "structure or precision failure at degree {degree}, generator {generator}, column {column}: \
         the ideals are not weakly-w, the sequence is not regular, or the precision is not enough"
    )]
    StructureOrPrecisionFailure { degree: u32, generator: usize, column: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Method {
    /// Echelonize the F5-filtered matrices.
    #[default]
    Mf5,
    /// Echelonize the full Macaulay matrices.
    Matrix,
}

/// Homogeneous generators, a degree cap and a monomial order.
#[derive(Clone, Debug)]
pub struct SystemInput {
    pub polys: Vec<Poly>,
    pub degree_cap: u32,
    pub order: MonomialOrder,
}

impl SystemInput {
    pub fn new(polys: Vec<Poly>, degree_cap: u32, order: MonomialOrder) -> Result<Self, F5Error> {
        let input = SystemInput { polys, degree_cap, order };
        input.check(true)?;
        Ok(input)
    }

    /// Uses the Macaulay bound as degree cap.
    pub fn with_macaulay_bound(polys: Vec<Poly>, order: MonomialOrder) -> Result<Self, F5Error> {
        let degs: Vec<u32> = polys.iter().map(|p| p.degree().unwrap_or(0)).collect();
        Self::new(polys, macaulay_bound(&degs), order)
    }

    fn check(&self, homogeneous: bool) -> Result<(), F5Error> {
        let first = self.polys.first().ok_or(F5Error::EmptySystem)?;
        let n = first.nvars();
        let mut ctx: Option<CdvfContext> = None;
        for (i, p) in self.polys.iter().enumerate() {
            if p.is_zero() {
                return Err(F5Error::ZeroGenerator(i + 1));
            }
            if homogeneous && !p.is_homogeneous() {
                return Err(F5Error::NotHomogeneous(i + 1));
            }
            if p.nvars() != n {
                return Err(F5Error::Inconsistent);
            }
            for (_, c) in p.terms() {
                match (ctx, c.context()) {
                    (None, c) => ctx = c,
                    (Some(a), Some(b)) if a != b => return Err(F5Error::Inconsistent),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.polys[0].nvars()
    }

    pub fn context(&self) -> Option<CdvfContext> {
        self.polys.iter().flat_map(|p| p.terms()).find_map(|(_, c)| c.context())
    }

    /// Smallest absolute precision among the input coefficients.
    pub fn entry_order(&self) -> Option<i64> {
        self.polys.iter().flat_map(|p| p.terms()).filter_map(|(_, c)| c.order()).min()
    }
}

/// `sum (d_i - 1) + 1`.
pub fn macaulay_bound(degrees: &[u32]) -> u32 {
    degrees.iter().map(|&d| d.saturating_sub(1)).sum::<u32>() + 1
}

/// Per `(d, i)` echelonization data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub degree: u32,
    /// 1-based index in the degree-sorted input.
    pub generator: usize,
    /// Number of rows of `M_{d,i}`.
    pub rows: usize,
    /// Number of leading columns echelonized before the first pivotless one.
    pub stop_column: usize,
    pub pivot_valuations: Vec<i64>,
    /// Sum of the pivot valuations.
    pub loss_bound: i64,
    /// Rows filled in with multiples of the previous degree.
    pub completed: usize,
    /// Pivots provably have minimal valuation and the completion succeeded.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionReport {
    pub method: Method,
    pub steps: Vec<StepReport>,
    /// `prec_MF5` (F5-filtered matrices) or `prec_Mac` (full matrices).
    pub bound: i64,
    pub certified: bool,
    /// Generators were multiplied by powers of the uniformizer to bring them
    /// into the valuation ring; the bound then refers to the rescaled system.
    pub rescaled: bool,
}

impl PrecisionReport {
    fn from_steps(method: Method, steps: Vec<StepReport>, complete: bool, rescaled: bool) -> Self {
        let bound = steps.iter().map(|s| s.loss_bound).max().unwrap_or(0);
        let certified = complete && !rescaled && steps.iter().all(|s| s.certified);
        PrecisionReport { method, steps, bound, certified, rescaled }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerResult {
    /// Sorted by degree, then by decreasing leading monomial.
    pub basis: Vec<Poly>,
    /// `coordinates[j][k]` is `M_{j,k}`, so that `g_k = sum_j f_j M_{j,k}`
    /// (input order of the generators).
    pub coordinates: Option<Vec<Vec<Poly>>>,
    pub leading_monomials: Vec<Monomial>,
    pub report: PrecisionReport,
    pub degree_cap: u32,
    /// Smallest order among the input coefficients.
    pub entry_order: i64,
}

impl GroebnerResult {
    /// Losses `entry_order - order` over every non-exact output coefficient.
    pub fn coefficient_losses(&self) -> Vec<i64> {
        self.basis
            .iter()
            .flat_map(|g| g.terms())
            .filter_map(|(_, c)| c.order())
            .map(|o| self.entry_order - o)
            .collect()
    }

    pub fn realized_loss(&self) -> i64 {
        self.coefficient_losses().into_iter().max().unwrap_or(0).max(0)
    }

    pub fn min_output_order(&self) -> Option<i64> {
        self.basis.iter().flat_map(|g| g.terms()).filter_map(|(_, c)| c.order()).min()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub method: Method,
    pub track_coordinates: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { method: Method::Mf5, track_coordinates: true }
    }
}

/// Degree-sorted, rescaled copy of the input.
struct Prepared {
    polys: Vec<Poly>,
    degrees: Vec<u32>,
    /// `perm[k]` is the original index of sorted generator `k`.
    perm: Vec<usize>,
    /// Sorted generator `k` was multiplied by `pi^shifts[k]`.
    shifts: Vec<i64>,
    nvars: usize,
    order: MonomialOrder,
    cap: u32,
    label_order: i64,
    ctx: CdvfContext,
}

fn prepare(input: &SystemInput) -> Result<Prepared, F5Error> {
    input.check(true)?;
    let ctx = input.context().ok_or(F5Error::ZeroGenerator(1))?;
    let mut idx: Vec<usize> = (0..input.polys.len()).collect();
    idx.sort_by_key(|&k| input.polys[k].degree().unwrap());
    let mut polys = Vec::new();
    let mut shifts = Vec::new();
    for &k in &idx {
        let p = input.polys[k].with_order(input.order);
        let low = p
            .terms()
            .iter()
            .filter_map(|(_, c)| match c.valuation() {
                Valuation::Finite(v) => Some(v),
                Valuation::Undefined => c.order(),
                Valuation::Infinite => None,
            })
            .min()
            .unwrap_or(0);
        let shift = (-low).max(0);
        polys.push(if shift > 0 {
            p.map_coefficients(|c| c.mul_pi_power(shift))
        } else {
            p
        });
        shifts.push(shift);
    }
    let degrees = polys.iter().map(|p| p.degree().unwrap()).collect();
    let label_order = polys
        .iter()
        .flat_map(|p| p.terms())
        .filter_map(|(_, c)| c.order())
        .max()
        .unwrap_or(0)
        .max(1);
    Ok(Prepared {
        nvars: input.nvars(),
        order: input.order,
        cap: input.degree_cap,
        polys,
        degrees,
        perm: idx,
        shifts,
        label_order,
        ctx,
    })
}

/// Monomials of degree `d` and row signatures of `Mac_d(f_1..f_s)`.
struct Layout {
    cols: Vec<Monomial>,
    col_index: HashMap<Monomial, usize>,
    sig_index: HashMap<(usize, Monomial), usize>,
    sigs: Vec<(usize, Monomial)>,
}

impl Layout {
    fn new(prep: &Prepared, d: u32) -> Layout {
        let cols = prep.order.monomials_of_degree(prep.nvars, d);
        let col_index = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut sigs = Vec::new();
        for (j, &dj) in prep.degrees.iter().enumerate() {
            if d >= dj {
                for a in prep.order.monomials_of_degree(prep.nvars, d - dj) {
                    sigs.push((j, a));
                }
            }
        }
        let sig_index = sigs.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Layout { cols, col_index, sig_index, sigs }
    }
}

/// Echelonized rows at some `(d, i)` with their leading columns.
#[derive(Default, Clone)]
struct Stored {
    rows: Vec<Vec<Cdvf>>,
    lead: Vec<usize>,
    lm_set: HashSet<Monomial>,
}

fn macaulay_row(prep: &Prepared, lay: &Layout, j: usize, alpha: &Monomial, tail: bool) -> Vec<Cdvf> {
    let width = lay.cols.len() + if tail { lay.sigs.len() } else { 0 };
    let mut row = vec![Cdvf::ZERO; width];
    for (m, c) in prep.polys[j].terms() {
        row[lay.col_index[&m.mul(alpha)]] = c.clone();
    }
    if tail {
        let k = lay.sig_index[&(j, alpha.clone())];
        row[lay.cols.len() + k] = prep.ctx.one(prep.label_order);
    }
    row
}

struct EngineRun {
    steps: Vec<StepReport>,
    outcome: Result<Vec<(u32, Vec<Cdvf>, usize)>, F5Error>,
    layouts: HashMap<u32, Layout>,
}

fn run_engine(prep: &Prepared, opts: EngineOptions) -> EngineRun {
    let s = prep.polys.len();
    let mut steps = Vec::new();
    let mut layouts: HashMap<u32, Layout> = HashMap::new();
    let mut tilde: HashMap<(u32, usize), Stored> = HashMap::new();
    // (degree, row, leading column)
    let mut basis: Vec<(u32, Vec<Cdvf>, usize)> = Vec::new();
    let mut basis_lms: Vec<Monomial> = Vec::new();
    let tail = opts.track_coordinates;

    for d in 0..=prep.cap {
        layouts.insert(d, Layout::new(prep, d));
        let lay = &layouts[&d];
        let ncols = lay.cols.len();
        tilde.insert((d, 0), Stored::default());
        let mut filtered: Vec<Vec<Cdvf>> = Vec::new();
        for i in 1..=s {
            let j = i - 1;
            let dj = prep.degrees[j];
            let mut full_new = Vec::new();
            if d >= dj {
                let prev = if i == 1 { None } else { tilde.get(&(d - dj, i - 1)) };
                for a in prep.order.monomials_of_degree(prep.nvars, d - dj) {
                    let row = macaulay_row(prep, lay, j, &a, tail);
                    if prev.is_none_or(|t| !t.lm_set.contains(&a)) {
                        filtered.push(row.clone());
                    }
                    full_new.push(row);
                }
            }
            let expected = filtered.len();
            let target = match opts.method {
                Method::Mf5 => Matrix::new(filtered.clone(), ncols),
                Method::Matrix => {
                    let mut rows = Vec::new();
                    for (jj, &djj) in prep.degrees.iter().enumerate().take(i) {
                        if d >= djj {
                            for a in prep.order.monomials_of_degree(prep.nvars, d - djj) {
                                rows.push(macaulay_row(prep, lay, jj, &a, tail));
                            }
                        }
                    }
                    Matrix::new(rows, ncols)
                }
            };
            drop(full_new);
            let (ech, rep) = match row_echelon_prefix(&target) {
                Ok(x) => x,
                Err(e) => return EngineRun { steps, outcome: Err(e.into()), layouts },
            };
            let l = rep.stop_column;
            let mut step = StepReport {
                degree: d,
                generator: i,
                rows: expected,
                stop_column: l,
                pivot_valuations: rep.pivots.iter().map(|p| p.valuation).collect(),
                loss_bound: rep.loss_bound,
                completed: 0,
                certified: rep.pivots.iter().all(|p| p.certified),
            };
            let failure = F5Error::StructureOrPrecisionFailure { degree: d, generator: i, column: l };
            if l > expected {
                step.certified = false;
                steps.push(step);
                return EngineRun { steps, outcome: Err(failure), layouts };
            }
            let missing = expected - l;

            // completion with multiples of the degree d-1 rows
            let mut completion: Vec<(usize, Vec<Cdvf>)> = Vec::new();
            if missing > 0 && d > 0 {
                let lower = &tilde[&(d - 1, i)];
                let low_lay = &layouts[&(d - 1)];
                for u in l..ncols {
                    let target_m = &lay.cols[u];
                    let hit = lower.lead.iter().enumerate().find_map(|(r, &c)| {
                        (0..prep.nvars)
                            .find(|&k| low_lay.cols[c].mul(&Monomial::var(prep.nvars, k)) == *target_m)
                            .map(|k| (r, k))
                    });
                    if let Some((r, k)) = hit {
                        let xk = Monomial::var(prep.nvars, k);
                        let src = &lower.rows[r];
                        let mut row = vec![Cdvf::ZERO; ncols + if tail { lay.sigs.len() } else { 0 }];
                        for (c, e) in src[..low_lay.cols.len()].iter().enumerate() {
                            if !e.is_exact_zero() {
                                row[lay.col_index[&low_lay.cols[c].mul(&xk)]] = e.clone();
                            }
                        }
                        if tail {
                            for (t, e) in src[low_lay.cols.len()..].iter().enumerate() {
                                if !e.is_exact_zero() {
                                    let (jj, b) = &low_lay.sigs[t];
                                    row[ncols + lay.sig_index[&(*jj, b.mul(&xk))]] = e.clone();
                                }
                            }
                        }
                        completion.push((u, row));
                    }
                }
            }
            step.completed = completion.len();
            if completion.len() != missing {
                step.certified = false;
                steps.push(step);
                return EngineRun { steps, outcome: Err(failure), layouts };
            }
            steps.push(step);

            let mut stored = Stored::default();
            for (pos, row) in ech.rows.into_iter().take(l).enumerate() {
                stored.rows.push(row);
                stored.lead.push(pos);
            }
            for (u, row) in completion {
                stored.rows.push(row);
                stored.lead.push(u);
            }
            stored.lm_set = stored.lead.iter().map(|&c| lay.cols[c].clone()).collect();
            for (row, &c) in stored.rows.iter().zip(&stored.lead) {
                let lm = &lay.cols[c];
                if !basis_lms.iter().any(|b| b.divides(lm)) {
                    basis_lms.push(lm.clone());
                    basis.push((d, row.clone(), c));
                }
            }
            tilde.insert((d, i), stored);
        }
    }
    EngineRun { steps, outcome: Ok(basis), layouts }
}

fn finish(
    prep: &Prepared,
    run: EngineRun,
    opts: EngineOptions,
    entry_order: i64,
) -> Result<GroebnerResult, F5Error> {
    let rescaled = prep.shifts.iter().any(|&s| s != 0);
    let report = PrecisionReport::from_steps(opts.method, run.steps, run.outcome.is_ok(), rescaled);
    let mut rows = run.outcome?;
    rows.sort_by(|a, b| {
        let la = &run.layouts[&a.0].cols[a.2];
        let lb = &run.layouts[&b.0].cols[b.2];
        a.0.cmp(&b.0).then_with(|| prep.order.cmp(lb, la))
    });
    let s = prep.polys.len();
    let mut basis = Vec::new();
    let mut lms = Vec::new();
    let mut coords: Vec<Vec<Poly>> = vec![Vec::new(); s];
    for (d, row, c) in &rows {
        let lay = &run.layouts[d];
        let ncols = lay.cols.len();
        let g = Poly::from_terms(
            prep.nvars,
            prep.order,
            row[..ncols]
                .iter()
                .enumerate()
                .filter(|(_, e)| !e.is_exact_zero())
                .map(|(k, e)| (lay.cols[k].clone(), e.clone())),
        );
        basis.push(g);
        lms.push(lay.cols[*c].clone());
        if opts.track_coordinates {
            let mut per_gen: Vec<Vec<(Monomial, Cdvf)>> = vec![Vec::new(); s];
            for (t, e) in row[ncols..].iter().enumerate() {
                if !e.is_exact_zero() {
                    let (j, b) = &lay.sigs[t];
                    per_gen[*j].push((b.clone(), e.clone()));
                }
            }
            for (j, terms) in per_gen.into_iter().enumerate() {
                let shift = prep.shifts[j];
                let terms = terms.into_iter().map(|(m, e)| (m, if shift > 0 { e.mul_pi_power(shift) } else { e }));
                coords[prep.perm[j]].push(Poly::from_terms(prep.nvars, prep.order, terms));
            }
        }
    }
    Ok(GroebnerResult {
        basis,
        coordinates: opts.track_coordinates.then_some(coords),
        leading_monomials: lms,
        report,
        degree_cap: prep.cap,
        entry_order,
    })
}

/// Runs the engine with explicit options.
pub fn compute(input: &SystemInput, opts: EngineOptions) -> Result<GroebnerResult, F5Error> {
    let prep = prepare(input)?;
    let entry_order = input.entry_order().unwrap_or(0);
    let run = run_engine(&prep, opts);
    finish(&prep, run, opts, entry_order)
}

/// Weak Matrix-F5 with coordinate tracking.
pub fn weak_mf5(input: &SystemInput) -> Result<GroebnerResult, F5Error> {
    compute(input, EngineOptions { method: Method::Mf5, track_coordinates: true })
}

/// Weak-Matrix variant (full Macaulay matrices) with coordinate tracking.
pub fn weak_matrix(input: &SystemInput) -> Result<GroebnerResult, F5Error> {
    compute(input, EngineOptions { method: Method::Matrix, track_coordinates: true })
}

/// Precision bound of the given method at the precision of the input. The
/// report is uncertified when the run fails or a pivot choice cannot be
/// proven minimal.
pub fn precision_bound(input: &SystemInput, method: Method) -> Result<PrecisionReport, F5Error> {
    let prep = prepare(input)?;
    let run = run_engine(&prep, EngineOptions { method, track_coordinates: false });
    let rescaled = prep.shifts.iter().any(|&s| s != 0);
    Ok(PrecisionReport::from_steps(method, run.steps, run.outcome.is_ok(), rescaled))
}

pub fn prec_mf5(input: &SystemInput) -> Result<PrecisionReport, F5Error> {
    precision_bound(input, Method::Mf5)
}

pub fn prec_mac(input: &SystemInput) -> Result<PrecisionReport, F5Error> {
    precision_bound(input, Method::Matrix)
}

/// Precision bound of an exactly known system (rational coefficients):
/// evaluates at increasing working precision, starting at `start` and
/// doubling up to `cap`, until the bound is certified.
pub fn exact_precision_bound(
    polys: &[Polynomial<BigRational>],
    ctx: CdvfContext,
    degree_cap: u32,
    order: MonomialOrder,
    method: Method,
    start: i64,
    cap: i64,
) -> Result<PrecisionReport, F5Error> {
    let mut k = start.max(1);
    loop {
        let approx = polys
            .iter()
            .map(|p| {
                p.try_map_coefficients(|c| ctx.from_bigrational(c, k))
                    .map_err(|e| F5Error::Poly(PolyError::Scalar(e.into())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let input = SystemInput::new(approx, degree_cap, order)?;
        let rep = precision_bound(&input, method)?;
        if rep.certified || k >= cap {
            return Ok(rep);
        }
        k = (k * 2).min(cap);
    }
}

/// Affine systems: runs on the top-degree components and rebuilds
/// `g_k = g_k^h + sum_j M_{j,k} (f_j - f_j^h)`.
pub fn affine_weak_mf5(input: &SystemInput) -> Result<GroebnerResult, F5Error> {
    if !input.order.refines_degree() {
        return Err(F5Error::OrderDoesNotRefineDegree);
    }
    input.check(false)?;
    if input.polys.iter().all(|p| p.is_homogeneous()) {
        return weak_mf5(input);
    }
    let tops = input
        .polys
        .iter()
        .map(|p| p.top_component())
        .collect::<Result<Vec<_>, _>>()?;
    let homog = SystemInput { polys: tops.clone(), degree_cap: input.degree_cap, order: input.order };
    let mut res = weak_mf5(&homog)?;
    let coords = res.coordinates.as_ref().expect("coordinates are tracked");
    let lows: Vec<Poly> = input
        .polys
        .iter()
        .map(|f| {
            let top = f.degree().unwrap_or(0);
            Poly::from_terms(
                f.nvars(),
                input.order,
                f.terms().iter().filter(|(m, _)| m.degree() < top).cloned(),
            )
        })
        .collect();
    for (k, g) in res.basis.iter_mut().enumerate() {
        let mut acc = g.clone();
        for (j, low) in lows.iter().enumerate() {
            if !low.is_zero() {
                acc = acc.add(&coords[j][k].mul(low));
            }
        }
        *g = acc;
    }
    res.entry_order = input.entry_order().unwrap_or(res.entry_order);
    Ok(res)
}

/// Inter-reduces a minimal basis at finite precision and divides each
/// element by its leading coefficient.
pub fn reduce_approximate(basis: &[Poly]) -> Result<Vec<Poly>, PolyError> {
    let mut out = Vec::with_capacity(basis.len());
    for k in 0..basis.len() {
        let others: Vec<Poly> =
            basis.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, g)| g.clone()).collect();
        let r = crate::poly::reduce(&basis[k], &others)?;
        let lc = r.leading_term()?.1.clone();
        out.push(r.try_map_coefficients(|c| c.try_div(&lc)).map_err(|e| PolyError::Scalar(e.into()))?);
    }
    Ok(out)
}

/// `Mac_d(f_1..f_s)`: rows `x^alpha f_j` for `x^alpha` of degree `d - d_j`,
/// columns the degree-`d` monomials in decreasing order.
pub fn macaulay_matrix(polys: &[Poly], d: u32, order: MonomialOrder) -> LabeledMatrix {
    let n = polys.first().map_or(0, |p| p.nvars());
    let cols = order.monomials_of_degree(n, d);
    let index: HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (j, f) in polys.iter().enumerate() {
        let Some(dj) = f.degree() else { continue };
        if d < dj {
            continue;
        }
        for a in order.monomials_of_degree(n, d - dj) {
            let mut row = vec![Cdvf::ZERO; cols.len()];
            for (m, c) in f.terms() {
                row[index[&m.mul(&a)]] = c.clone();
            }
            rows.push(row);
            labels.push(Signature { generator: j, multiplier: a });
        }
    }
    LabeledMatrix { matrix: Matrix::new(rows, cols.len()), row_labels: labels, column_labels: cols }
}

/// F5 criterion: drops rows `x^alpha f_j` with `x^alpha` among
/// `previous_lms[j]`, the leading monomials of the echelonized
/// `M_{d - d_j, j - 1}` (empty for the first generator).
pub fn f5_filter(mac: &LabeledMatrix, previous_lms: &[HashSet<Monomial>]) -> LabeledMatrix {
    let keep: Vec<usize> = (0..mac.row_labels.len())
        .filter(|&r| {
            let sig = &mac.row_labels[r];
            previous_lms.get(sig.generator).is_none_or(|s| !s.contains(&sig.multiplier))
        })
        .collect();
    LabeledMatrix {
        matrix: Matrix::new(
            keep.iter().map(|&r| mac.matrix.rows[r].clone()).collect(),
            mac.matrix.ncols,
        ),
        row_labels: keep.iter().map(|&r| mac.row_labels[r].clone()).collect(),
        column_labels: mac.column_labels.clone(),
    }
}

/// Integer system as exact rationals, for the adaptive bound.
pub fn integer_polynomial(nvars: usize, order: MonomialOrder, terms: &[(i64, Vec<u32>)]) -> Polynomial<BigRational> {
    Polynomial::from_terms(
        nvars,
        order,
        terms
            .iter()
            .map(|(c, e)| (Monomial::new(e.iter().copied()), BigRational::from_integer(BigInt::from(*c)))),
    )
}
