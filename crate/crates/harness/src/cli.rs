//! Command-line front end. Exit codes: 0 success, 1 parse or usage error,
//! 2 structure or precision failure, 3 ambiguous coefficient.

use std::io::Write;
use std::path::PathBuf;

use cdvf_gb::f5::{
    affine_weak_mf5, exact_precision_bound, macaulay_bound, prec_mac, prec_mf5, reduce_approximate, weak_matrix,
    weak_mf5, F5Error, Method, PrecisionReport, SystemInput,
};
use cdvf_gb::lifting::{weak_lift, weak_lift_exact, LiftError};
use cdvf_gb::linalg::LinalgError;
use cdvf_gb::oracle::{buchberger_reduced, check_regular_sequence, check_weakly_w, OracleLimits};
use cdvf_gb::sensitivity::compare_methods;
use cdvf_gb::{CdvfError, FieldKind, MonomialOrder, PolyError, ScalarError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint, RandBigInt};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::experiment::{comparison_table, run_comparison, run_experiment, ExperimentConfig, ExperimentMethod};
use crate::input::{InputError, Overrides, System};
use crate::output::{load_result, poly_doc, result_doc, PolyDoc, ResultDoc};

#[derive(Parser, Debug)]
#[command(name = "cdvf-gb", version, about = "Approximate Gröbner bases over p-adic and power-series fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Qp,
    Fpt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Grevlex,
    Lex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Mf5,
    Matrix,
    Affine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum OutArg {
    Json,
    #[default]
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, value_enum)]
    pub field: Option<FieldArg>,
    #[arg(long)]
    pub p: Option<u64>,
    /// Default order of coefficients written without O(...).
    #[arg(long)]
    pub prec: Option<i64>,
    #[arg(long, value_enum)]
    pub order: Option<OrderArg>,
    /// Defaults to the Macaulay bound of the input degrees.
    #[arg(long)]
    pub degree_cap: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    pub out: OutArg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Approximate D-Gröbner basis of a system file.
    Gb {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "mf5")]
        method: MethodArg,
        /// Inter-reduce and normalize the basis.
        #[arg(long)]
        reduced: bool,
    },
    /// Precision bounds prec_MF5 and prec_Mac.
    Prec {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Lift a saved JSON result to higher precision or to the rationals.
    Lift {
        result: PathBuf,
        /// System file with the generators at the target precision.
        #[arg(long)]
        system: Option<PathBuf>,
        /// Target precision; omitted means exact.
        #[arg(long)]
        to: Option<i64>,
        #[arg(long, value_enum, default_value = "text")]
        out: OutArg,
    },
    /// Direct, difference and differential loss estimates for one system.
    Diff {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Valuation of the random perturbation.
        #[arg(long)]
        perturbation: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Repeated runs on random systems.
    Experiment {
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u32>,
        #[arg(long)]
        degree_cap: Option<u32>,
        #[arg(long, value_enum, default_value = "qp")]
        field: FieldArg,
        #[arg(long, default_value_t = 7)]
        p: u64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 30)]
        prec: i64,
        #[arg(long, default_value_t = 3)]
        nvars: usize,
        #[arg(long, value_enum, default_value = "grevlex")]
        order: OrderArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "mf5")]
        method: MethodArg,
        /// Compare the three loss estimates with perturbations of this valuation.
        #[arg(long)]
        compare: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        out: OutArg,
    },
    /// Exact reduced Gröbner basis over the rationals.
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Structure(String),
    Ambiguity(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Structure(_) => 2,
            CliError::Ambiguity(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Structure(m) | CliError::Ambiguity(m) => m,
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn scalar_error(e: &ScalarError) -> bool {
    matches!(e, ScalarError::AmbiguousDivisor)
}

fn poly_error(e: PolyError) -> CliError {
    let msg = e.to_string();
    match e {
        PolyError::AmbiguousLeadingTerm(_) => CliError::Ambiguity(msg),
        PolyError::Scalar(ref s) if scalar_error(s) => CliError::Ambiguity(msg),
        PolyError::PrecisionExhausted(_) | PolyError::Scalar(_) => CliError::Structure(msg),
        _ => CliError::Usage(msg),
    }
}

impl From<F5Error> for CliError {
    fn from(e: F5Error) -> Self {
        let msg = e.to_string();
        match e {
            F5Error::StructureOrPrecisionFailure { .. } => CliError::Structure(msg),
            F5Error::Linalg(LinalgError::AmbiguousColumn { .. } | LinalgError::UncertifiedPivot) => {
                CliError::Ambiguity(msg)
            }
            F5Error::Linalg(LinalgError::Arithmetic(CdvfError::AmbiguousDivisor)) => CliError::Ambiguity(msg),
            F5Error::Linalg(_) => CliError::Structure(msg),
            F5Error::Poly(p) => poly_error(p),
            _ => CliError::Usage(msg),
        }
    }
}

impl From<LiftError> for CliError {
    fn from(e: LiftError) -> Self {
        let msg = e.to_string();
        match e {
            LiftError::Verification { .. } => CliError::Structure(msg),
            LiftError::Poly(p) => poly_error(p),
            LiftError::Cdvf(CdvfError::AmbiguousDivisor) => CliError::Ambiguity(msg),
            _ => CliError::Usage(msg),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn overrides(c: &Common) -> Overrides {
    Overrides {
        field: c.field.map(|f| match f {
            FieldArg::Qp => FieldKind::PAdic,
            FieldArg::Fpt => FieldKind::PowerSeries,
        }),
        p: c.p,
        prec: c.prec,
        order: c.order.map(order_of),
    }
}

fn order_of(o: OrderArg) -> MonomialOrder {
    match o {
        OrderArg::Grevlex => MonomialOrder::GREVLEX,
        OrderArg::Lex => MonomialOrder::LEX,
    }
}

fn load(file: &PathBuf, c: &Common) -> Result<System, CliError> {
    Ok(System::load(&read(file)?, &overrides(c))?)
}

fn cap_for(sys: &System, c: &Common) -> u32 {
    c.degree_cap.unwrap_or_else(|| {
        let degs: Vec<u32> = sys.polys.iter().map(|p| p.degree().unwrap_or(0)).collect();
        macaulay_bound(&degs)
    })
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn cmd_gb(file: &PathBuf, c: &Common, method: MethodArg, reduced: bool) -> Result<String, CliError> {
    let sys = load(file, c)?;
    let input = SystemInput { polys: sys.polys.clone(), degree_cap: cap_for(&sys, c), order: sys.order };
    let (mut res, name) = match method {
        MethodArg::Mf5 => (weak_mf5(&SystemInput::new(input.polys, input.degree_cap, input.order)?)?, "mf5"),
        MethodArg::Matrix => (weak_matrix(&SystemInput::new(input.polys, input.degree_cap, input.order)?)?, "matrix"),
        MethodArg::Affine => (affine_weak_mf5(&input)?, "affine"),
    };
    let mut warnings = Vec::new();
    if res.report.rescaled {
        warnings.push("generators were rescaled into the valuation ring; the precision bound is not certified".into());
    }
    if reduced {
        res.basis = reduce_approximate(&res.basis).map_err(poly_error)?;
        res.coordinates = None;
        warnings.push("basis inter-reduced; coordinates dropped".into());
    }
    let doc = result_doc(&res, sys.ctx, &sys.vars, sys.order, name, &sys.polys, warnings);
    Ok(match c.out {
        OutArg::Json => json(&doc),
        OutArg::Text => crate::output::render_text(&doc),
    })
}

#[derive(Serialize)]
struct BoundSummary {
    value: i64,
    certified: bool,
}

#[derive(Serialize)]
struct PrecDoc {
    schema: &'static str,
    version: u32,
    degree_cap: u32,
    working_precision: Option<i64>,
    prec_mf5: BoundSummary,
    prec_mac: BoundSummary,
}

fn cmd_prec(file: &PathBuf, c: &Common) -> Result<String, CliError> {
    let sys = load(file, c)?;
    let cap = cap_for(&sys, c);
    let summary = |r: PrecisionReport| BoundSummary { value: r.bound, certified: r.certified };
    let (mf5, mac, working) = match &sys.exact {
        // exact input: raise the working precision until the bounds are certified
        Some(f) => {
            let bound = |m| exact_precision_bound(f, sys.ctx, cap, sys.order, m, sys.prec, 4096);
            (bound(Method::Mf5)?, bound(Method::Matrix)?, None)
        }
        None => {
            let input = SystemInput::new(sys.polys.clone(), cap, sys.order)?;
            (prec_mf5(&input)?, prec_mac(&input)?, Some(sys.prec))
        }
    };
    let doc = PrecDoc {
        schema: "cdvf-gb.prec",
        version: 1,
        degree_cap: cap,
        working_precision: working,
        prec_mf5: summary(mf5),
        prec_mac: summary(mac),
    };
    Ok(match c.out {
        OutArg::Json => json(&doc),
        OutArg::Text => {
            let flag = |b: &BoundSummary| if b.certified { "" } else { " (not certified)" };
            format!(
                "prec_mf5 = {}{}\nprec_mac = {}{}\n",
                doc.prec_mf5.value,
                flag(&doc.prec_mf5),
                doc.prec_mac.value,
                flag(&doc.prec_mac)
            )
        }
    })
}

#[derive(Serialize)]
struct LiftDoc {
    schema: &'static str,
    version: u32,
    target: Option<i64>,
    basis: Vec<PolyDoc>,
    coordinates: Vec<Vec<PolyDoc>>,
    warnings: Vec<String>,
}

fn cmd_lift(result: &PathBuf, system: Option<&PathBuf>, to: Option<i64>, out: OutArg) -> Result<String, CliError> {
    let doc: ResultDoc =
        serde_json::from_str(&read(result)?).map_err(|e| CliError::Usage(format!("{}: {e}", result.display())))?;
    let loaded = load_result(&doc).map_err(CliError::Usage)?;
    let vars = loaded.vars.clone();
    let sys = system
        .map(|path| {
            let o = Overrides {
                field: Some(loaded.ctx.kind()),
                p: Some(loaded.ctx.p()),
                prec: to,
                order: Some(loaded.order),
            };
            System::load(&read(path)?, &o).map_err(CliError::from)
        })
        .transpose()?;
    let lift_doc = match to {
        Some(l) => {
            let f = sys.map(|s| s.polys).unwrap_or(loaded.inputs);
            let lifted = weak_lift(&f, &loaded.result, l)?;
            LiftDoc {
                schema: "cdvf-gb.lift",
                version: 1,
                target: Some(l),
                basis: lifted.basis.iter().map(|p| poly_doc(p, &vars)).collect(),
                coordinates: lifted.coordinates.iter().map(|r| r.iter().map(|p| poly_doc(p, &vars)).collect()).collect(),
                warnings: lifted.warning.into_iter().collect(),
            }
        }
        None => {
            let f = sys
                .and_then(|s| s.exact)
                .ok_or_else(|| CliError::Usage("an exact lift needs --system with exactly written generators".into()))?;
            let lifted = weak_lift_exact(&f, &loaded.result)?;
            LiftDoc {
                schema: "cdvf-gb.lift",
                version: 1,
                target: None,
                basis: lifted.basis.iter().map(|p| poly_doc(p, &vars)).collect(),
                coordinates: lifted.coordinates.iter().map(|r| r.iter().map(|p| poly_doc(p, &vars)).collect()).collect(),
                warnings: lifted.warning.into_iter().collect(),
            }
        }
    };
    Ok(match out {
        OutArg::Json => json(&lift_doc),
        OutArg::Text => {
            let mut s = String::from("lifted basis:\n");
            for g in &lift_doc.basis {
                s.push_str(&format!("  {}\n", g.text));
            }
            for w in &lift_doc.warnings {
                s.push_str(&format!("warning: {w}\n"));
            }
            s
        }
    })
}

fn cmd_diff(file: &PathBuf, c: &Common, k: u32, seed: u64) -> Result<String, CliError> {
    let sys = load(file, c)?;
    let f = sys
        .exact
        .clone()
        .ok_or_else(|| CliError::Usage("the difference method needs exactly written generators over Q_p".into()))?;
    let cap = cap_for(&sys, c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = BigInt::from(sys.ctx.p()).pow(k);
    let modulus = BigUint::from(sys.ctx.p()).pow(sys.prec.max(1) as u32);
    let df: Vec<_> = f
        .iter()
        .map(|p| {
            p.map_coefficients(|_| BigRational::from_integer(&scale * BigInt::from(rng.gen_biguint_below(&modulus))))
        })
        .collect();
    let m = compare_methods(&f, &df, sys.ctx, sys.prec, cap, sys.order);
    Ok(match c.out {
        OutArg::Json => json(&serde_json::json!({
            "schema": "cdvf-gb.diff",
            "version": 1,
            "direct": m.direct.to_string(),
            "difference": m.difference.to_string(),
            "differential": m.differential.to_string(),
            "warning": m.warning,
        })),
        OutArg::Text => {
            let mut s = format!(
                "direct       {}\ndifference   {}\ndifferential {}\n",
                m.direct, m.difference, m.differential
            );
            if let Some(w) = m.warning {
                s.push_str(&format!("warning: {w}\n"));
            }
            s
        }
    })
}

fn cmd_oracle(file: &PathBuf, c: &Common) -> Result<String, CliError> {
    let sys = load(file, c)?;
    let f = sys
        .exact
        .clone()
        .ok_or_else(|| CliError::Usage("the oracle needs exactly written generators".into()))?;
    let homogeneous = f.iter().all(|p| p.is_homogeneous());
    let g = buchberger_reduced(&f, sys.order, None, OracleLimits::default())
        .map_err(|e| CliError::Structure(e.to_string()))?;
    let checks = if homogeneous {
        let cap = cap_for(&sys, c);
        let h1 = check_regular_sequence(&f, sys.order, cap).map_err(|e| CliError::Structure(e.to_string()))?;
        let h2 = check_weakly_w(&f, sys.order, cap).map_err(|e| CliError::Structure(e.to_string()))?;
        Some((h1, h2))
    } else {
        None
    };
    Ok(match c.out {
        OutArg::Json => json(&serde_json::json!({
            "schema": "cdvf-gb.oracle",
            "version": 1,
            "basis": g.iter().map(|p| poly_doc(p, &sys.vars)).collect::<Vec<_>>(),
            "regular_sequence": checks.map(|c| c.0),
            "weakly_w": checks.map(|c| c.1),
        })),
        OutArg::Text => {
            let mut s = String::from("reduced basis:\n");
            for p in &g {
                s.push_str(&format!("  {}\n", p.render(&sys.vars)));
            }
            if let Some((h1, h2)) = checks {
                s.push_str(&format!("regular sequence: {h1}\nweakly-{}: {h2}\n", sys.order));
            }
            s
        }
    })
}

fn run_command(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Gb { file, common, method, reduced } => cmd_gb(&file, &common, method, reduced),
        Command::Prec { file, common } => cmd_prec(&file, &common),
        Command::Lift { result, system, to, out } => cmd_lift(&result, system.as_ref(), to, out),
        Command::Diff { file, common, perturbation, seed } => cmd_diff(&file, &common, perturbation, seed),
        Command::Oracle { file, common } => cmd_oracle(&file, &common),
        Command::Experiment {
            degrees,
            degree_cap,
            field,
            p,
            trials,
            prec,
            nvars,
            order,
            seed,
            method,
            compare,
            out,
        } => {
            let mut cfg = ExperimentConfig::new(degrees, p, trials);
            cfg.degree_cap = degree_cap.unwrap_or(cfg.degree_cap);
            cfg.field = match field {
                FieldArg::Qp => "qp",
                FieldArg::Fpt => "fpt",
            }
            .into();
            cfg.prec = prec;
            cfg.nvars = nvars;
            cfg.order = order_of(order).to_string();
            cfg.seed = seed;
            cfg.method = match method {
                MethodArg::Mf5 => ExperimentMethod::Mf5,
                MethodArg::Matrix => ExperimentMethod::Matrix,
                MethodArg::Affine => ExperimentMethod::Affine,
            };
            let usage = |e: crate::experiment::ConfigError| CliError::Usage(e.to_string());
            if let Some(k) = compare {
                let records = run_comparison(&cfg, k).map_err(usage)?;
                return Ok(match out {
                    OutArg::Json => json(&serde_json::json!({
                        "schema": "cdvf-gb.comparison",
                        "version": 1,
                        "config": cfg,
                        "perturbation": k,
                        "trials": records,
                    })),
                    OutArg::Text => comparison_table(p, &records),
                });
            }
            let rep = run_experiment(&cfg).map_err(usage)?;
            Ok(match out {
                OutArg::Json => json(&rep),
                OutArg::Text => {
                    let d: Vec<String> = cfg.degrees.iter().map(|d| d.to_string()).collect();
                    format!(
                        "{:<12}{:>4}{:>4}{:>6}{:>6}{:>8}{:>6}{:>4}\n{:<12}{:>4}{:>4}{:>6}{:>6}{:>8.2}{:>6}{:>4}\n",
                        "d", "D", "p", "n_exp", "max", "mean", "gap", "f",
                        format!("[{}]", d.join(",")),
                        cfg.degree_cap,
                        cfg.p,
                        cfg.trials,
                        rep.stats.max,
                        rep.stats.mean,
                        rep.stats.gap,
                        rep.stats.failures
                    )
                }
            })
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match run_command(cli.command) {
        Ok(s) => {
            let _ = out.write_all(s.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}
