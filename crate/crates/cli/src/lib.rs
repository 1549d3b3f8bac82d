//! Command-line front end: each subcommand runs one verification and emits a
//! JSON `RunReport` (or CSV for `table`).
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on
//! malformed arguments.

use std::fmt::Write as _;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use mahler_core::exact::{fmt_rational, parse_rational, LaurentPi, PiScaled, RatFunPi, Rational};
use mahler_core::measure::{find_roots, mahler_from_roots, mahler_quadrature, DEFAULT_TOL};
use mahler_core::montecarlo::{mc_hn, mc_volume, McEstimate};
use mahler_core::polynomial::{CoeffVec, RootVec};
use mahler_core::spectral::{
    det_ratfun, h_closed, h_hat, h_product, hjk_closed, hjk_quadrature, i_entry, i_matrix,
    omega_psi_check, volume_exact, volume_via_mellin,
};
use mahler_core::symfun::{default_step, jacobian_real_factor, numeric_jacobian, roots_to_coeffs};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Number, Value};

pub const ENTRY_RADII: [f64; 4] = [1.0, 1.1, 2.0, 5.0];
pub const ENTRY_REL_TOL: f64 = 1e-10;
pub const JACOBIAN_REL_TOL: f64 = 1e-5;
pub const MEASURE_AGREEMENT: f64 = 1e-6;
/// Roots closer than this to the unit circle skip the quadrature cross-check.
pub const CIRCLE_MARGIN: f64 = 1e-2;
pub const MC_SIGMAS: f64 = 3.0;

#[derive(Parser, Debug)]
#[command(name = "mahler", about = "Verification runs for Mahler-measure distribution results")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mahler measure of a polynomial by roots and by quadrature.
    Measure {
        /// Ascending coefficients as JSON `[[re, im], ...]`.
        #[arg(long)]
        coeffs: String,
        #[arg(long, default_value_t = 4096)]
        nodes: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Closed form of h_N, optionally evaluated at xi.
    Hn {
        #[arg(long = "N")]
        n: usize,
        /// Decimal or `p/q`; evaluated exactly.
        #[arg(long)]
        xi: Option<String>,
    },
    /// Exact volume of the reciprocal star body.
    Volume {
        #[arg(long = "N")]
        n: usize,
    },
    /// Exact determinant of the N x N matrix of entries against the product.
    VerifyDet {
        #[arg(long = "N")]
        n: usize,
    },
    /// Quadrature of one matrix entry's profile against its closed form.
    VerifyEntries {
        #[arg(long = "J")]
        j: u32,
        #[arg(long = "K")]
        k: u32,
        /// Even node count; defaults to 4(J+K)+16.
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Rank-one structure of the entry matrix.
    RankOne {
        #[arg(long = "N")]
        n: usize,
    },
    /// Jacobian formula against finite differences at seeded random points.
    JacobianTest {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// A single point as JSON `[[re, im], ...]` instead of random points.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Monte Carlo estimate against the exact value.
    Mc {
        #[arg(long, value_enum)]
        mode: McMode,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        xi: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// CSV of (xi, h_N(xi)) on an even grid.
    Table {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value = "1")]
        xi_min: String,
        #[arg(long, default_value = "3")]
        xi_max: String,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum McMode {
    Hn,
    Volume,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: String,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            status: if pass { "pass" } else { "fail" }.to_string(),
            detail,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub exact_results: Map<String, Value>,
    pub numeric_results: Map<String, Value>,
    pub checks: Vec<Check>,
}

impl RunReport {
    fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Map::new(),
            exact_results: Map::new(),
            numeric_results: Map::new(),
            checks: Vec::new(),
        }
    }

    fn input(&mut self, key: &str, v: Value) {
        self.inputs.insert(key.to_string(), v);
    }

    fn exact(&mut self, key: &str, v: Value) {
        self.exact_results.insert(key.to_string(), v);
    }

    fn numeric(&mut self, key: &str, v: Value) {
        self.numeric_results.insert(key.to_string(), v);
    }

    fn check(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(Check::new(name, pass, detail));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Result of one invocation: exit code plus what goes to stdout and stderr.
#[derive(Clone, Debug)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<RunReport>,
}

impl Output {
    fn usage(message: String) -> Self {
        Self {
            code: 2,
            stdout: String::new(),
            stderr: message,
            report: None,
        }
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                    report: None,
                }
            } else {
                Output::usage(text)
            };
        }
    };
    if let Command::Table {
        n,
        xi_min,
        xi_max,
        steps,
    } = &cli.command
    {
        return match table(*n, xi_min, xi_max, *steps) {
            Ok(csv) => Output {
                code: 0,
                stdout: csv,
                stderr: String::new(),
                report: None,
            },
            Err(e) => Output::usage(format!("error: {e}\n")),
        };
    }
    match dispatch(cli.command) {
        Ok(report) => {
            let code = if report.passed() { 0 } else { 1 };
            let mut stdout = serde_json::to_string_pretty(&report).expect("report serializes");
            stdout.push('\n');
            Output {
                code,
                stdout,
                stderr: String::new(),
                report: Some(report),
            }
        }
        Err(e) => Output::usage(format!("error: {e}\n")),
    }
}

fn dispatch(command: Command) -> Result<RunReport, String> {
    match command {
        Command::Measure { coeffs, nodes, tol } => measure(&coeffs, nodes, tol),
        Command::Hn { n, xi } => hn(n, xi.as_deref()),
        Command::Volume { n } => volume(n),
        Command::VerifyDet { n } => verify_det(n),
        Command::VerifyEntries { j, k, nodes } => verify_entries(j, k, nodes),
        Command::RankOne { n } => rank_one(n),
        Command::JacobianTest {
            n,
            points,
            seed,
            alpha,
        } => jacobian_test(n, points, seed, alpha.as_deref()),
        Command::Mc {
            mode,
            n,
            xi,
            samples,
            seed,
            workers,
        } => mc(mode, n, xi.as_deref(), samples, seed, workers),
        Command::Table { .. } => unreachable!("handled before dispatch"),
    }
}

/// A float with 15 significant digits; non-finite values become `null`.
pub fn num15(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&fmt15(x)).expect("valid JSON number"))
}

/// Text form used by [`num15`] and the CSV table.
pub fn fmt15(x: f64) -> String {
    format!("{x:.14e}")
}

fn exact_scalar(v: &PiScaled) -> Value {
    Value::String(v.to_string())
}

fn exact_ratfun(f: &RatFunPi) -> Value {
    let coeffs = |p: &[Rational]| -> Value { p.iter().map(|c| Value::String(fmt_rational(c))).collect() };
    json!({
        "pi_power": f.pi_power(),
        "num": coeffs(f.num().coeffs()),
        "den": coeffs(f.den().coeffs()),
        "display": f.to_string(),
    })
}

fn exact_laurent(g: &LaurentPi) -> Value {
    g.terms()
        .iter()
        .map(|(e, c)| json!({"exponent": e, "coeff": exact_scalar(c)}))
        .collect()
}

fn complex_json(z: Complex64) -> Value {
    json!([num15(z.re), num15(z.im)])
}

/// Parses a coefficient vector written as `[[re, im], ...]`.
pub fn parse_coeff_vec(text: &str) -> Result<Vec<Complex64>, String> {
    let pairs: Vec<[f64; 2]> =
        serde_json::from_str(text).map_err(|e| format!("coefficient vector must be [[re, im], ...]: {e}"))?;
    Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}

/// Parses a decimal (`1.25`), integer, or fraction (`5/4`) exactly.
pub fn parse_exact(text: &str) -> Result<Rational, String> {
    let bad = || format!("not a decimal or fraction: {text:?}");
    let t = text.trim();
    if let Some((int_part, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac}");
        let numer = parse_rational(&digits).ok_or_else(bad)?;
        let denom = num_traits::pow(Rational::from_integer(10.into()), frac.len());
        return Ok(numer / denom);
    }
    parse_rational(t).ok_or_else(bad)
}

fn require_positive(n: usize, name: &str) -> Result<(), String> {
    if n == 0 {
        return Err(format!("--{name} must be at least 1"));
    }
    Ok(())
}

fn measure(coeffs: &str, nodes: usize, tol: f64) -> Result<RunReport, String> {
    let f = CoeffVec::new(parse_coeff_vec(coeffs)?);
    let mut r = RunReport::new("measure");
    r.input("coeffs", f.entries().iter().map(|&z| complex_json(z)).collect());
    r.input("nodes", json!(nodes));
    r.input("tol", num15(tol));

    let trimmed = f.trimmed();
    let mu = mahler_from_roots(&f, tol).map_err(|e| e.to_string())?;
    r.numeric("mahler_roots", num15(mu));
    let mut margin = f64::INFINITY;
    if trimmed.len() > 1 {
        let roots = find_roots(&trimmed, tol).map_err(|e| e.to_string())?;
        margin = roots
            .roots
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(f64::INFINITY, f64::min);
        r.numeric("residual", num15(roots.residual));
        r.numeric("roots", roots.roots.iter().map(|&z| complex_json(z)).collect());
        r.check(
            "root_residual",
            roots.residual <= tol,
            format!("max relative residual {} <= tol {tol:e}", fmt15(roots.residual)),
        );
    } else {
        r.numeric("residual", num15(0.0));
        r.numeric("roots", json!([]));
    }
    r.numeric("distance_to_unit_circle", num15(margin));
    match mahler_quadrature(&f, nodes) {
        Ok(q) => {
            r.numeric("mahler_quadrature", num15(q));
            if margin >= CIRCLE_MARGIN {
                let rel = (q - mu).abs() / mu;
                r.check(
                    "quadrature_agreement",
                    rel <= MEASURE_AGREEMENT,
                    format!("relative difference {} <= {MEASURE_AGREEMENT:e}", fmt15(rel)),
                );
            }
        }
        Err(e) => {
            r.numeric("mahler_quadrature", Value::Null);
            r.numeric("quadrature_error", json!(e.to_string()));
        }
    }
    Ok(r)
}

fn hn(n: usize, xi: Option<&str>) -> Result<RunReport, String> {
    require_positive(n, "N")?;
    let mut r = RunReport::new("hn");
    r.input("N", json!(n));
    let h = h_closed(n);
    let hat = h_hat(n);
    r.exact("h_N", exact_laurent(&h));
    r.exact("h_N_mellin", exact_ratfun(&hat));
    r.numeric(
        "h_N",
        h.terms()
            .iter()
            .map(|(e, c)| json!({"exponent": e, "coeff": num15(c.to_f64())}))
            .collect(),
    );
    if let Some(text) = xi {
        let q = parse_exact(text)?;
        r.input("xi", json!(text));
        let value = h.eval_exact(&q);
        r.exact("h_N(xi)", exact_scalar(&value));
        r.numeric("h_N(xi)", num15(value.to_f64()));
    }
    let mellin = h.mellin().map_err(|e| e.to_string())?;
    r.check(
        "mellin_matches_product",
        mellin == hat,
        "exact: Mellin transform of h_N equals H_N(s)/(2s)".into(),
    );
    r.check(
        "vanishes_at_one",
        h.at_one().is_zero(),
        "exact: h_N(1) = 0".into(),
    );
    Ok(r)
}

fn volume(n: usize) -> Result<RunReport, String> {
    require_positive(n, "N")?;
    let mut r = RunReport::new("volume");
    r.input("N", json!(n));
    let exact = volume_exact(n);
    let via = volume_via_mellin(n);
    r.exact("volume", exact_scalar(&exact));
    r.exact("volume_via_mellin", exact_scalar(&via));
    r.numeric("volume", num15(exact.to_f64()));
    r.check(
        "mellin_matches_closed_form",
        exact == via,
        "exact: 2 pi H_N(N+1)/(2(N+1)) equals 2^N pi^(N+1) (N+1)^N / (2N+1)!".into(),
    );
    Ok(r)
}

fn verify_det(n: usize) -> Result<RunReport, String> {
    require_positive(n, "N")?;
    let mut r = RunReport::new("verify-det");
    r.input("N", json!(n));
    let det = det_ratfun(&i_matrix(n)).map_err(|e| e.to_string())?;
    let product = h_product(n);
    r.exact("det", exact_ratfun(&det));
    r.exact("product", exact_ratfun(&product));
    r.check(
        "det_equals_product",
        det == product,
        "exact: det of entry matrix equals prod_n 2 pi s/(s^2 - n^2)".into(),
    );
    Ok(r)
}

fn verify_entries(j: u32, k: u32, nodes: Option<usize>) -> Result<RunReport, String> {
    if j == 0 || k == 0 {
        return Err("--J and --K must be at least 1".into());
    }
    let nodes = nodes.unwrap_or(4 * (j + k) as usize + 16);
    let mut r = RunReport::new("verify-entries");
    r.input("J", json!(j));
    r.input("K", json!(k));
    r.input("nodes", json!(nodes));
    let closed = hjk_closed(j as i64, k as i64);
    r.exact("profile", exact_laurent(&closed));
    r.exact("entry", exact_ratfun(&i_entry(j as i64, k as i64)));
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for radius in ENTRY_RADII {
        let q = hjk_quadrature(j, k, radius, nodes).map_err(|e| e.to_string())?;
        let c = closed.eval(radius, std::f64::consts::PI);
        let err = (q - c).abs() / (1.0 + c.abs());
        worst = worst.max(err);
        rows.push(json!({"r": num15(radius), "quadrature": num15(q), "closed_form": num15(c), "error": num15(err)}));
    }
    r.numeric("profile_values", Value::Array(rows));
    r.check(
        "quadrature_matches_closed_form",
        worst <= ENTRY_REL_TOL,
        format!("max |q - c|/(1 + |c|) = {} <= {ENTRY_REL_TOL:e}", fmt15(worst)),
    );
    Ok(r)
}

fn rank_one(n: usize) -> Result<RunReport, String> {
    let mut r = RunReport::new("rank-one");
    r.input("N", json!(n));
    let report = omega_psi_check(n).map_err(|e| e.to_string())?;
    r.exact("psi", report.psi.iter().map(|q| json!(fmt_rational(q))).collect());
    r.exact("c_matrix", json!(report.c_matrix.rows()));
    r.exact("det_c", json!(fmt_rational(&report.det_c)));
    r.check("psi_in_kernel", report.kernel_ok, "exact: omega_n . psi = 0 for n < N".into());
    r.check(
        "eigen_identity",
        report.eigen_identity_ok,
        "exact: I psi = (2 pi s/(s^2 - N^2)) B_N psi".into(),
    );
    r.check(
        "triangular_factorization",
        report.factorization_ok,
        "exact: I = C^T diag(2 pi s/(s^2 - n^2)) C".into(),
    );
    r.check(
        "unit_determinant",
        report.det_c == Rational::from_integer(1.into()),
        "exact: det C = 1".into(),
    );
    Ok(r)
}

/// Random roots with moduli in [0.5, 2], rejecting points near the null
/// set where the Jacobian vanishes.
fn random_generic_roots(rng: &mut ChaCha8Rng, n: usize) -> RootVec {
    loop {
        let alpha: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let beta: Vec<Complex64> = alpha.iter().map(|a| a + a.inv()).collect();
        let near_unit = alpha.iter().any(|a| (a * a - 1.0).norm() < 0.2);
        let close_beta = (0..n).any(|i| (0..i).any(|j| (beta[i] - beta[j]).norm() < 0.2));
        if !near_unit && !close_beta {
            return RootVec::new(alpha).expect("nonzero moduli");
        }
    }
}

fn jacobian_test(n: usize, points: usize, seed: u64, alpha: Option<&str>) -> Result<RunReport, String> {
    let mut r = RunReport::new("jacobian-test");
    let samples: Vec<RootVec> = match alpha {
        Some(text) => {
            let a = parse_coeff_vec(text)?;
            r.input("alpha", a.iter().map(|&z| complex_json(z)).collect());
            vec![RootVec::new(a).map_err(|e| e.to_string())?]
        }
        None => {
            require_positive(n, "N")?;
            r.input("N", json!(n));
            r.input("points", json!(points));
            r.input("seed", json!(seed));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..points).map(|_| random_generic_roots(&mut rng, n)).collect()
        }
    };
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for a in &samples {
        let h = default_step(a);
        let fd = numeric_jacobian(roots_to_coeffs, a, h)
            .map_err(|e| e.to_string())?
            .determinant();
        let formula = jacobian_real_factor(a);
        let rel = if formula == 0.0 { fd.abs() } else { (fd - formula).abs() / formula };
        worst = worst.max(rel);
        rows.push(json!({
            "alpha": a.entries().iter().map(|&z| complex_json(z)).collect::<Value>(),
            "formula": num15(formula),
            "finite_difference": num15(fd),
            "relative_error": num15(rel),
        }));
    }
    r.numeric("points", Value::Array(rows));
    r.check(
        "formula_matches_finite_difference",
        worst <= JACOBIAN_REL_TOL,
        format!("max relative error {} <= {JACOBIAN_REL_TOL:e}", fmt15(worst)),
    );
    Ok(r)
}

fn estimate_json(e: &McEstimate) -> Value {
    json!({
        "mean": num15(e.mean),
        "std_error": num15(e.std_error),
        "samples": e.samples,
        "seed": e.seed,
        "region_volume": num15(e.region_volume),
        "hits": e.hits,
        "rejected": e.rejected,
    })
}

fn mc(
    mode: McMode,
    n: usize,
    xi: Option<&str>,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<RunReport, String> {
    require_positive(n, "N")?;
    let mut r = RunReport::new("mc");
    r.input("mode", json!(if mode == McMode::Hn { "hn" } else { "volume" }));
    r.input("N", json!(n));
    let (estimate, target) = match mode {
        McMode::Hn => {
            let text = xi.ok_or("--mode hn needs --xi")?;
            let q = parse_exact(text)?;
            r.input("xi", json!(text));
            r.input("samples", json!(samples));
            r.input("seed", json!(seed));
            r.input("workers", json!(workers));
            let xi_f = rational_f64(&q);
            let target = h_closed(n).eval_exact(&q);
            let e = mc_hn(n, xi_f, samples, seed, workers).map_err(|e| e.to_string())?;
            (e, target)
        }
        McMode::Volume => {
            if xi.is_some() {
                return Err("--xi is only used with --mode hn".into());
            }
            r.input("samples", json!(samples));
            r.input("seed", json!(seed));
            r.input("workers", json!(workers));
            let e = mc_volume(n, samples, seed, workers).map_err(|e| e.to_string())?;
            (e, volume_exact(n))
        }
    };
    let target_f = target.to_f64();
    r.exact("target", exact_scalar(&target));
    r.numeric("target", num15(target_f));
    r.numeric("estimate", estimate_json(&estimate));
    let z = estimate.z_score(target_f);
    r.numeric("z_score", num15(z));
    r.check(
        "within_three_sigma",
        estimate.covers(target_f, MC_SIGMAS),
        format!("|z| = {} <= {MC_SIGMAS}", fmt15(z.abs())),
    );
    Ok(r)
}

fn rational_f64(q: &Rational) -> f64 {
    mahler_core::exact::rational_to_f64(q)
}

fn table(n: usize, xi_min: &str, xi_max: &str, steps: usize) -> Result<String, String> {
    require_positive(n, "N")?;
    require_positive(steps, "steps")?;
    let lo = parse_exact(xi_min)?;
    let hi = parse_exact(xi_max)?;
    if hi < lo {
        return Err("--xi-max must not be below --xi-min".into());
    }
    let h = h_closed(n);
    let step = (&hi - &lo) / Rational::from_integer(steps.into());
    let mut out = String::from("xi,h_N\n");
    for i in 0..=steps {
        let x = &lo + &step * Rational::from_integer(i.into());
        let v = h.eval_exact(&x).to_f64();
        writeln!(out, "{},{}", fmt15(rational_f64(&x)), fmt15(v)).expect("write to string");
    }
    Ok(out)
}
