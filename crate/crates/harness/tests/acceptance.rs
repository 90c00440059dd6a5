//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
//!
//! Reference values come from independent computations in this file (exact
//! rational elimination, brute-force minors) or from the Buchberger oracle.

use std::time::{Duration, Instant};

use cdvf_gb::f5::{
    affine_weak_mf5, exact_precision_bound, macaulay_bound, prec_mac, prec_mf5, reduce_approximate, weak_mf5,
    F5Error, Method, SystemInput,
};
use cdvf_gb::lifting::weak_lift_exact;
use cdvf_gb::linalg::{row_echelon_prefix, Matrix};
use cdvf_gb::oracle::{buchberger_reduced, check_regular_sequence, check_weakly_w, OracleLimits};
use cdvf_gb::sensitivity::differential;
use cdvf_gb::text::{parse_polynomial, CdvfSource, RationalSource};
use cdvf_gb::{Cdvf, CdvfContext, Monomial, MonomialOrder, Polynomial};
use cdvf_gb_harness::experiment::{run_comparison, run_experiment, ExperimentConfig};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = Polynomial<BigRational>;
type P = Polynomial<Cdvf>;
const W: MonomialOrder = MonomialOrder::GREVLEX;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn vars() -> Vec<String> {
    ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
}

fn padic(p: u64, prec: i64, polys: &[&str]) -> Vec<P> {
    let src = CdvfSource { ctx: CdvfContext::padic(p).unwrap(), default_order: prec };
    polys.iter().map(|s| parse_polynomial(s, &vars(), W, &src).unwrap()).collect()
}

fn exact(polys: &[&str]) -> Vec<Q> {
    polys.iter().map(|s| parse_polynomial(s, &vars(), W, &RationalSource).unwrap()).collect()
}

fn approx(f: &[Q], ctx: CdvfContext, prec: i64) -> Vec<P> {
    f.iter().map(|p| p.map_coefficients(|c| ctx.from_bigrational(c, prec).unwrap())).collect()
}

fn mono(e: &[u32]) -> Monomial {
    Monomial::new(e.iter().copied())
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// p-adic valuation, computed independently of the library.
fn val(q: &BigRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut v = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            v += 1;
        }
        v
    };
    Some(count(q.numer()) - count(q.denom()))
}

/// `x` lies in the ball `c`.
fn contains(c: Option<&Cdvf>, x: &BigRational, p: u64) -> bool {
    match c {
        None => x.is_zero(),
        Some(c) if c.is_exact_zero() => x.is_zero(),
        Some(c) => {
            let center = c.to_rational().unwrap();
            val(&(x - center), p).is_none_or(|v| v >= c.order().unwrap())
        }
    }
}

/// Every coefficient of `exact` lies in the matching ball of `approx`.
fn poly_contains(approx: &P, exact: &Q, p: u64) -> bool {
    let mut monos = approx.terms().iter().map(|(m, _)| m).chain(exact.terms().iter().map(|(m, _)| m));
    monos.all(|m| contains(approx.coefficient(m), &exact.coefficient(m).cloned().unwrap_or_else(|| rat(0)), p))
}

fn dense(rng: &mut ChaCha8Rng, degrees: &[u32]) -> Vec<Q> {
    degrees
        .iter()
        .map(|&d| {
            Polynomial::from_terms(
                3,
                W,
                W.monomials_of_degree(3, d).into_iter().map(|m| (m, rat(rng.gen_range(-9..10)))),
            )
        })
        .collect()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn worked_example() -> Outcome {
    let (res, dt) = timed(|| {
        let input = SystemInput::new(padic(5, 10, &["x", "x*y^2 + y^3 + z^3"]), 3, W).unwrap();
        weak_mf5(&input)
    });
    let Ok(res) = res else { return outcome(false, "weak_mf5 failed") };
    let lms_ok = res.leading_monomials == vec![mono(&[1, 0, 0]), mono(&[0, 3, 0])];
    let g_exact = exact(&["x", "y^3 + z^3"]);
    let m_exact = [exact(&["1", "-y^2"]), vec![Q::zero(3, W), exact(&["1"])[0].clone()]];
    let loss = res.report.bound;
    let m = res.coordinates.as_ref().unwrap();
    let mut coeffs_ok = res.basis.len() == 2;
    for k in 0..2 {
        coeffs_ok &= poly_contains(&res.basis[k], &g_exact[k], 5);
        for j in 0..2 {
            coeffs_ok &= poly_contains(&m[j][k], &m_exact[j][k], 5);
            coeffs_ok &= m[j][k].terms().iter().all(|(_, c)| c.order().is_none_or(|o| o >= 10 - loss));
        }
    }
    let fast = dt < Duration::from_secs(1);
    outcome(lms_ok && coeffs_ok && fast, format!("LMs {lms_ok}, coefficients {coeffs_ok}, {dt:.2?}"))
}

fn precision_bounds() -> Outcome {
    let ((mf5, mac), dt) = timed(|| {
        let input = SystemInput::new(padic(5, 10, &["5*x", "y", "25*x*y + z^2"]), 2, W).unwrap();
        (prec_mf5(&input).unwrap(), prec_mac(&input).unwrap())
    });
    let pass = mf5.bound == 3 && mac.bound == 2 && dt < Duration::from_secs(1);
    outcome(pass, format!("prec_mf5 = {}, prec_mac = {}, {dt:.2?}", mf5.bound, mac.bound))
}

fn lifting_example() -> Outcome {
    let (lifted, dt) = timed(|| {
        let input = SystemInput::with_macaulay_bound(padic(5, 4, &["10*x", "25*x*y^2 + y^3 + z^3"]), W).unwrap();
        let res = weak_mf5(&input).ok()?;
        weak_lift_exact(&exact(&["10*x", "25*x*y^2 + y^3 + z^3"]), &res).ok()
    });
    let Some(lifted) = lifted else { return outcome(false, "pipeline failed") };
    let pass = lifted.basis == exact(&["10*x", "y^3 + z^3"]) && dt < Duration::from_secs(1);
    let shown: Vec<String> = lifted.basis.iter().map(|g| g.render(&vars())).collect();
    outcome(pass, format!("({}), {dt:.2?}", shown.join(", ")))
}

fn differential_example() -> Outcome {
    let g = padic(5, 40, &["x", "y^3 + z^3"]);
    let m = vec![padic(5, 40, &["1", "-y^2"]), vec![P::zero(3, W), padic(5, 40, &["1"])[0].clone()]];
    let df = padic(5, 40, &["O(5^5)*x", "O(5^5)*x*y^2 + O(5^5)*y^3 + O(5^5)*z^3"]);
    let Ok(dg) = differential(&m, &g, &df) else { return outcome(false, "differential failed") };
    let second = match dg[1].terms() {
        [(mo, c)] => mo == &mono(&[0, 0, 3]) && c.is_indistinguishable_from_zero() && c.order() == Some(5),
        _ => false,
    };
    let pass = dg[0].is_zero() && second;
    outcome(pass, format!("({}, {})", dg[0].render(&vars()), dg[1].render(&vars())))
}

fn random_integer_matrix(rng: &mut ChaCha8Rng, p: u64, rows: usize, cols: usize) -> Vec<Vec<BigInt>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    let e: u32 = rng.gen_range(0..3);
                    BigInt::from(rng.gen_range(-60i64..60)) * BigInt::from(p).pow(e)
                })
                .collect()
        })
        .collect()
}

fn to_matrix(ctx: CdvfContext, rows: &[Vec<BigInt>], k: i64) -> Matrix {
    Matrix::new(rows.iter().map(|r| r.iter().map(|v| ctx.from_integer(v, k)).collect()).collect(), rows[0].len())
}

fn row_precision() -> Outcome {
    let k = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut violations = 0;
    let mut checked = 0;
    for t in 0..500 {
        let p = [2u64, 5, 7][t % 3];
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=8));
        let rows = random_integer_matrix(&mut rng, p, r, c);
        let ctx = CdvfContext::padic(p).unwrap();
        let Ok((e, rep)) = row_echelon_prefix(&to_matrix(ctx, &rows, k)) else {
            violations += 1;
            continue;
        };
        checked += 1;
        let mut ex: Vec<Vec<BigRational>> = rep
            .permutation
            .iter()
            .map(|&i| rows[i].iter().map(|v| BigRational::from_integer(v.clone())).collect())
            .collect();
        for pv in &rep.pivots {
            let (pr, pc) = (pv.position, pv.column);
            for t in pr + 1..ex.len() {
                let q = &ex[t][pc] / &ex[pr][pc];
                for j in pc..ex[t].len() {
                    let s = &q * &ex[pr][j];
                    ex[t][j] -= s;
                }
            }
        }
        for i in 0..e.nrows() {
            for j in 0..c {
                let entry = e.get(i, j);
                let order_ok = entry.order().is_none_or(|o| o >= k - rep.loss_bound);
                if !order_ok || !contains(Some(entry), &ex[i][j], p) {
                    violations += 1;
                }
            }
        }
    }
    outcome(violations == 0, format!("{checked} matrices, {violations} violations"))
}

/// Determinant over the rationals by fraction-based elimination.
fn det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut d = rat(1);
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| !a[r][c].is_zero()) else { return rat(0) };
        if r != c {
            a.swap(r, c);
            d = -d;
        }
        d *= a[c][c].clone();
        for r in c + 1..n {
            let q = &a[r][c] / &a[c][c];
            for j in c..n {
                let s = &q * &a[c][j];
                a[r][j] -= s;
            }
        }
    }
    d
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn minimal_minors() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut violations, mut skipped) = (0, 0);
    for t in 0..200 {
        let p = [2u64, 3, 5][t % 3];
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=7));
        let rows = random_integer_matrix(&mut rng, p, r, c);
        let ctx = CdvfContext::padic(p).unwrap();
        let Ok((_, rep)) = row_echelon_prefix(&to_matrix(ctx, &rows, 40)) else {
            violations += 1;
            continue;
        };
        let l = rep.stop_column;
        if l == 0 || rep.pivots.iter().any(|pv| !pv.certified) {
            skipped += 1;
            continue;
        }
        let brute = subsets(r, l)
            .into_iter()
            .filter_map(|s| {
                let minor = s.iter().map(|&i| rows[i][..l].iter().map(|v| BigRational::from_integer(v.clone())).collect()).collect();
                val(&det(minor), p)
            })
            .min();
        if brute != Some(rep.loss_bound) {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("{} matrices, {skipped} without pivots, {violations} violations", 200))
}

fn oracle_equivalence() -> Outcome {
    let sets: [&[u32]; 3] = [&[2, 2], &[2, 3], &[2, 2, 3]];
    let (mut lm_ok, mut coeff_ok, mut errors) = (0, 0, Vec::new());
    for case in 0..50u64 {
        let degrees = sets[case as usize % 3];
        let p = [5u64, 7][case as usize % 2];
        let cap = macaulay_bound(degrees);
        let mut rng = ChaCha8Rng::seed_from_u64(700 + case);
        let f = loop {
            let f = dense(&mut rng, degrees);
            if f.iter().all(|g| !g.is_zero())
                && check_regular_sequence(&f, W, cap).unwrap()
                && check_weakly_w(&f, W, cap).unwrap()
            {
                break f;
            }
        };
        let ctx = CdvfContext::padic(p).unwrap();
        let bound = match exact_precision_bound(&f, ctx, cap, W, Method::Mf5, 10, 4096) {
            Ok(r) => r.bound,
            Err(e) => {
                errors.push(format!("case {case}: {e}"));
                continue;
            }
        };
        let m = 2 * bound + 5;
        let oracle = buchberger_reduced(&f, W, Some(cap), OracleLimits::default()).unwrap();
        let Ok(res) = weak_mf5(&SystemInput::new(approx(&f, ctx, m), cap, W).unwrap()) else {
            errors.push(format!("case {case}: weak_mf5 failed at precision {m}"));
            continue;
        };
        let oracle_lms: Vec<Monomial> = oracle.iter().map(|g| g.leading_monomial().unwrap().clone()).collect();
        if res.leading_monomials != oracle_lms {
            continue;
        }
        lm_ok += 1;
        match reduce_approximate(&res.basis) {
            Ok(g) if g.len() == oracle.len() && g.iter().zip(&oracle).all(|(a, b)| poly_contains(a, b, p)) => {
                coeff_ok += 1
            }
            _ => errors.push(format!("case {case}: coefficients disagree")),
        }
    }
    let pass = lm_ok == 50 && coeff_ok == 50;
    let mut detail = format!("LMs {lm_ok}/50, coefficients {coeff_ok}/50");
    if let Some(e) = errors.first() {
        detail.push_str(&format!(", first problem: {e}"));
    }
    outcome(pass, detail)
}

fn seed(default: u64) -> u64 {
    std::env::var("ACCEPTANCE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn statistical_band() -> Outcome {
    let mut cfg = ExperimentConfig::new(vec![3, 4, 7], 7, 30);
    cfg.prec = 30;
    cfg.seed = seed(20_261_016);
    let (rep, dt) = timed(|| run_experiment(&cfg));
    let Ok(rep) = rep else { return outcome(false, "invalid configuration") };
    let within = rep.trials.iter().all(|t| matches!((t.max_loss, t.bound), (Some(l), Some(b)) if l <= b));
    let s = &rep.stats;
    let pass = s.failures == 0 && s.max <= 5 && within && cfg.degree_cap == 12 && dt < Duration::from_secs(600);
    outcome(
        pass,
        format!(
            "seed {}, D {}, max {}, mean {:.2}, gap {}, failures {}, loss within bound on every trial {within}, {dt:.1?}",
            cfg.seed, cfg.degree_cap, s.max, s.mean, s.gap, s.failures
        ),
    )
}

fn agreement_band() -> Outcome {
    let mut cfg = ExperimentConfig::new(vec![2, 2, 3], 7, 10);
    cfg.degree_cap = 5;
    cfg.prec = 30;
    cfg.seed = seed(20_261_016);
    let Ok(records) = run_comparison(&cfg, 30) else { return outcome(false, "invalid configuration") };
    let agree = records
        .iter()
        .filter(|r| match (r.difference.parse::<i64>(), r.differential.parse::<i64>()) {
            (Ok(a), Ok(b)) => (a - b).abs() <= 1,
            _ => r.difference == "inf" && r.differential == "inf",
        })
        .count();
    let col = |f: fn(&cdvf_gb_harness::experiment::ComparisonRecord) -> &String| {
        records.iter().map(|r| f(r).as_str()).collect::<Vec<_>>().join(",")
    };
    outcome(
        agree >= 8,
        format!("{agree}/10 within 1; difference [{}], differential [{}]", col(|r| &r.difference), col(|r| &r.differential)),
    )
}

fn negative_structure() -> Outcome {
    let cases = [(["x + y", "x*y + y^2 + z^2"], (true, false)), (["x + y", "x^2 + x*y"], (false, true))];
    let mut pass = true;
    let mut notes = Vec::new();
    for (polys, (h1, h2)) in cases {
        let input = SystemInput::with_macaulay_bound(padic(5, 10, &polys), W).unwrap();
        let failed = matches!(weak_mf5(&input), Err(F5Error::StructureOrPrecisionFailure { .. }));
        let f = exact(&polys);
        let cap = input.degree_cap.max(3);
        let got = (check_regular_sequence(&f, W, cap).unwrap(), check_weakly_w(&f, W, cap).unwrap());
        pass &= failed && got == (h1, h2);
        notes.push(format!("failure {failed}, H1 {}, H2 {}", got.0, got.1));
    }
    outcome(pass, notes.join("; "))
}

fn invariants() -> Outcome {
    let sets: [&[u32]; 3] = [&[2, 2], &[2, 3], &[2, 2, 3]];
    let ctx = CdvfContext::padic(5).unwrap();
    let (mut compared, mut violations, mut affine_mismatch) = (0, 0, 0);
    for t in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + t);
        let f = dense(&mut rng, sets[t as usize % 3]);
        if f.iter().any(|g| g.is_zero()) {
            continue;
        }
        let input = SystemInput::with_macaulay_bound(approx(&f, ctx, 30), W).unwrap();
        if let (Ok(mac), Ok(mf5)) = (prec_mac(&input), prec_mf5(&input)) {
            compared += 1;
            if mac.bound > mf5.bound {
                violations += 1;
            }
        }
        if affine_weak_mf5(&input) != weak_mf5(&input) {
            affine_mismatch += 1;
        }
    }
    let bounds = (macaulay_bound(&[2, 3, 4]), macaulay_bound(&[3, 4, 7]));
    let pass = violations == 0 && affine_mismatch == 0 && bounds == (7, 12) && compared > 0;
    outcome(
        pass,
        format!(
            "{compared} systems compared, {violations} with prec_mac > prec_mf5, {affine_mismatch} affine mismatches, bounds {bounds:?}"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("worked example: basis and coordinates", worked_example),
        ("precision bounds prec_mf5 and prec_mac", precision_bounds),
        ("exact lift of the lifting example", lifting_example),
        ("differential of the worked example", differential_example),
        ("row-echelon precision on random matrices", row_precision),
        ("pivot valuations equal the minimal minor", minimal_minors),
        ("leading monomials and coefficients against the oracle", oracle_equivalence),
        ("statistical band for degrees [3,4,7]", statistical_band),
        ("difference and differential agreement", agreement_band),
        ("negative structure examples", negative_structure),
        ("bound ordering, affine consistency, Macaulay bounds", invariants),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
