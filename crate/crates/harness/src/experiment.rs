//! Random systems and the statistics of repeated runs.
//!
//! Trial `k` of a run with seed `s` draws from `ChaCha8Rng::seed_from_u64(s)`
//! on stream `k`, so trials are independent of each other and of the number
//! of threads.

use cdvf_gb::f5::{affine_weak_mf5, compute, macaulay_bound, EngineOptions, Method, SystemInput};
use cdvf_gb::sensitivity::{compare_methods, MethodMinima};
use cdvf_gb::{CdvfContext, FieldKind, Monomial, MonomialOrder, PadicPolynomial, Polynomial, RationalPolynomial};
use num_bigint::{BigInt, BigUint, RandBigInt};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentMethod {
    Mf5,
    Matrix,
    Affine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub degrees: Vec<u32>,
    pub degree_cap: u32,
    pub field: String,
    pub p: u64,
    pub trials: usize,
    pub prec: i64,
    pub nvars: usize,
    pub order: String,
    pub seed: u64,
    pub method: ExperimentMethod,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("degree cap {cap} is below the largest degree {max}")]
    CapTooSmall { cap: u32, max: u32 },
    #[error("at least one trial and one generator are needed")]
    Empty,
    #[error("{0}")]
    Invalid(String),
}

impl ExperimentConfig {
    /// Defaults: three variables, precision 30, grevlex, Macaulay bound.
    pub fn new(degrees: Vec<u32>, p: u64, trials: usize) -> Self {
        ExperimentConfig {
            degree_cap: macaulay_bound(&degrees),
            degrees,
            field: "qp".into(),
            p,
            trials,
            prec: 30,
            nvars: 3,
            order: "grevlex".into(),
            seed: 0,
            method: ExperimentMethod::Mf5,
        }
    }

    pub fn validate(&self) -> Result<(CdvfContext, MonomialOrder), ConfigError> {
        if self.trials == 0 || self.degrees.is_empty() || self.nvars == 0 {
            return Err(ConfigError::Empty);
        }
        let max = *self.degrees.iter().max().unwrap();
        if self.degree_cap < max {
            return Err(ConfigError::CapTooSmall { cap: self.degree_cap, max });
        }
        if self.prec < 1 {
            return Err(ConfigError::Invalid("precision must be positive".into()));
        }
        let kind = crate::input::parse_field(&self.field)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown field `{}`", self.field)))?;
        let ctx = CdvfContext::new(kind, self.p).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let order = self.order.parse().map_err(|_| ConfigError::Invalid(format!("unknown order `{}`", self.order)))?;
        Ok((ctx, order))
    }

    pub fn rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }
}

/// A random system and, over `Q_p`, the integers it was drawn from.
pub struct RandomSystem {
    pub polys: Vec<PadicPolynomial>,
    pub exact: Option<Vec<RationalPolynomial>>,
    /// Coefficients that came out indistinguishable from zero.
    pub zero_coefficients: usize,
}

fn support(cfg: &ExperimentConfig, order: MonomialOrder, d: u32) -> Vec<Monomial> {
    if cfg.method == ExperimentMethod::Affine {
        (0..=d).rev().flat_map(|e| order.monomials_of_degree(cfg.nvars, e)).collect()
    } else {
        order.monomials_of_degree(cfg.nvars, d)
    }
}

/// Dense polynomials of the configured degrees (all monomials up to the
/// degree for affine runs) with coefficients uniform in `Z/p^prec`, read as
/// elements known up to `O(p^prec)`.
pub fn random_system(cfg: &ExperimentConfig, trial: usize) -> Result<RandomSystem, ConfigError> {
    let (ctx, order) = cfg.validate()?;
    let mut rng = cfg.rng(trial);
    Ok(draw_system(cfg, ctx, order, &mut rng))
}

fn draw_system(cfg: &ExperimentConfig, ctx: CdvfContext, order: MonomialOrder, rng: &mut ChaCha8Rng) -> RandomSystem {
    let modulus = BigUint::from(cfg.p).pow(cfg.prec as u32);
    let mut polys = Vec::new();
    let mut exact = Vec::new();
    let mut zeros = 0;
    for &d in &cfg.degrees {
        let mut terms = Vec::new();
        let mut ints = Vec::new();
        for m in support(cfg, order, d) {
            let c = match ctx.kind() {
                FieldKind::PAdic => {
                    let v = rng.gen_biguint_below(&modulus);
                    let v = BigInt::from(v);
                    ints.push((m.clone(), BigRational::from_integer(v.clone())));
                    ctx.from_integer(&v, cfg.prec)
                }
                FieldKind::PowerSeries => {
                    let digits: Vec<i64> = (0..cfg.prec).map(|_| rng.gen_range(0..cfg.p) as i64).collect();
                    ctx.from_series(&digits, cfg.prec)
                }
            };
            if c.is_indistinguishable_from_zero() {
                zeros += 1;
            }
            terms.push((m, c));
        }
        polys.push(Polynomial::from_terms(cfg.nvars, order, terms));
        exact.push(Polynomial::from_terms(cfg.nvars, order, ints));
    }
    RandomSystem {
        polys,
        exact: (ctx.kind() == FieldKind::PAdic).then_some(exact),
        zero_coefficients: zeros,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub failure: Option<String>,
    /// Precision bound of the method used (prec_MF5 or prec_Mac).
    pub bound: Option<i64>,
    pub bound_certified: bool,
    pub max_loss: Option<i64>,
    pub loss_sum: i64,
    pub coefficients: usize,
    pub zero_coefficients: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentStats {
    /// Largest loss over every output coefficient of every trial.
    pub max: i64,
    /// Mean loss over every output coefficient of every trial.
    pub mean: f64,
    /// Largest `bound - max loss` over the successful trials.
    pub gap: i64,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialRecord>,
    pub stats: ExperimentStats,
}

pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<TrialRecord, ConfigError> {
    let sys = random_system(cfg, trial)?;
    let (_, order) = cfg.validate()?;
    let input = SystemInput { polys: sys.polys, degree_cap: cfg.degree_cap, order };
    let out = match cfg.method {
        ExperimentMethod::Mf5 => compute(&input, EngineOptions { method: Method::Mf5, track_coordinates: false }),
        ExperimentMethod::Matrix => {
            compute(&input, EngineOptions { method: Method::Matrix, track_coordinates: false })
        }
        ExperimentMethod::Affine => affine_weak_mf5(&input),
    };
    let mut rec = TrialRecord {
        trial,
        failure: None,
        bound: None,
        bound_certified: false,
        max_loss: None,
        loss_sum: 0,
        coefficients: 0,
        zero_coefficients: sys.zero_coefficients,
    };
    match out {
        Ok(res) => {
            let losses = res.coefficient_losses();
            rec.bound = Some(res.report.bound);
            rec.bound_certified = res.report.certified;
            rec.max_loss = Some(losses.iter().copied().max().unwrap_or(0).max(0));
            rec.loss_sum = losses.iter().sum();
            rec.coefficients = losses.len();
        }
        Err(e) => rec.failure = Some(e.to_string()),
    }
    Ok(rec)
}

/// Aggregates per-trial records.
pub fn aggregate(trials: &[TrialRecord]) -> ExperimentStats {
    let ok = || trials.iter().filter(|t| t.failure.is_none());
    let count: usize = ok().map(|t| t.coefficients).sum();
    let sum: i64 = ok().map(|t| t.loss_sum).sum();
    ExperimentStats {
        max: ok().filter_map(|t| t.max_loss).max().unwrap_or(0),
        mean: if count == 0 { 0.0 } else { sum as f64 / count as f64 },
        gap: ok().filter_map(|t| Some(t.bound? - t.max_loss?)).max().unwrap_or(0),
        failures: trials.len() - ok().count(),
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    let trials = (0..cfg.trials)
        .into_par_iter()
        .map(|k| run_trial(cfg, k))
        .collect::<Result<Vec<_>, _>>()?;
    let stats = aggregate(&trials);
    Ok(ExperimentReport { config: cfg.clone(), trials, stats })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub trial: usize,
    pub direct: String,
    pub difference: String,
    pub differential: String,
    pub warning: Option<String>,
}

impl ComparisonRecord {
    fn new(trial: usize, m: MethodMinima) -> Self {
        ComparisonRecord {
            trial,
            direct: m.direct.to_string(),
            difference: m.difference.to_string(),
            differential: m.differential.to_string(),
            warning: m.warning,
        }
    }
}

/// Three loss estimates per trial; the perturbation has coefficients
/// `p^k * u` with `u` uniform in `Z/p^prec`.
pub fn run_comparison(cfg: &ExperimentConfig, k: u32) -> Result<Vec<ComparisonRecord>, ConfigError> {
    let (ctx, order) = cfg.validate()?;
    if ctx.kind() != FieldKind::PAdic || cfg.method == ExperimentMethod::Affine {
        return Err(ConfigError::Invalid("comparisons need homogeneous systems over Q_p".into()));
    }
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = cfg.rng(t);
            let sys = draw_system(cfg, ctx, order, &mut rng);
            let f = sys.exact.expect("p-adic systems have exact coefficients");
            let scale = BigInt::from(cfg.p).pow(k);
            let modulus = BigUint::from(cfg.p).pow(cfg.prec as u32);
            let df: Vec<RationalPolynomial> = f
                .iter()
                .map(|p| {
                    Polynomial::from_terms(
                        cfg.nvars,
                        order,
                        p.terms().iter().map(|(m, _)| {
                            let u = BigInt::from(rng.gen_biguint_below(&modulus));
                            (m.clone(), BigRational::from_integer(&scale * u))
                        }),
                    )
                })
                .collect();
            Ok(ComparisonRecord::new(t, compare_methods(&f, &df, ctx, cfg.prec, cfg.degree_cap, order)))
        })
        .collect()
}

/// Aligned table: one line per method, one column per trial.
pub fn comparison_table(p: u64, records: &[ComparisonRecord]) -> String {
    let row = |name: &str, f: &dyn Fn(&ComparisonRecord) -> &str| {
        let cells: Vec<&str> = records.iter().map(f).collect();
        format!("{:<6}{:<14}[{}]\n", "", name, cells.join(", "))
    };
    let mut out = format!("p={p}\n");
    out.push_str(&row("direct", &|r| &r.direct));
    out.push_str(&row("difference", &|r| &r.difference));
    out.push_str(&row("differential", &|r| &r.differential));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn systems_are_deterministic_per_seed() {
        let cfg = ExperimentConfig::new(vec![3, 4, 7], 7, 2);
        let a = random_system(&cfg, 1).unwrap().polys;
        let b = random_system(&cfg, 1).unwrap().polys;
        assert_eq!(a, b);
        assert_ne!(a, random_system(&cfg, 0).unwrap().polys);
        let sizes: Vec<usize> = a.iter().map(|p| p.len()).collect();
        assert!(sizes[0] <= 10 && sizes[1] <= 15 && sizes[2] <= 36);
    }

    #[test]
    fn coefficients_are_uniform() {
        // 10^4 draws of a single coefficient modulo 7, chi-square with 6 dof
        let mut cfg = ExperimentConfig::new(vec![1], 7, 1);
        cfg.nvars = 1;
        cfg.prec = 1;
        let mut counts = [0usize; 7];
        for t in 0..10_000 {
            let sys = random_system(&cfg, t).unwrap();
            let c = sys.exact.unwrap()[0].terms().first().map(|(_, c)| c.to_integer()).unwrap_or_default();
            counts[usize::try_from(c).unwrap()] += 1;
        }
        let e = 10_000.0 / 7.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
        assert!(chi2 < 22.46, "chi2 = {chi2}"); // p = 0.001
    }

    #[test]
    fn aggregation_is_pure() {
        let rec = |t, bound, max, sum, n| TrialRecord {
            trial: t,
            failure: None,
            bound: Some(bound),
            bound_certified: true,
            max_loss: Some(max),
            loss_sum: sum,
            coefficients: n,
            zero_coefficients: 0,
        };
        let mut failed = rec(2, 0, 0, 0, 0);
        failed.failure = Some("x".into());
        let stats = aggregate(&[rec(0, 10, 2, 4, 8), rec(1, 5, 1, 0, 8), failed]);
        assert_eq!(stats, ExperimentStats { max: 2, mean: 0.25, gap: 8, failures: 1 });
    }

    #[test]
    fn validation() {
        let mut cfg = ExperimentConfig::new(vec![3, 4], 7, 1);
        cfg.degree_cap = 3;
        assert_eq!(cfg.validate().unwrap_err(), ConfigError::CapTooSmall { cap: 3, max: 4 });
        cfg.trials = 0;
        assert_eq!(cfg.validate().unwrap_err(), ConfigError::Empty);
    }

    #[test]
    fn unit_pivot_system_loses_nothing() {
        let mut cfg = ExperimentConfig::new(vec![1], 7, 1);
        cfg.prec = 10;
        let rep = run_experiment(&cfg).unwrap();
        assert_eq!((rep.stats.max, rep.stats.mean, rep.stats.failures), (0, 0.0, 0));
    }
}
