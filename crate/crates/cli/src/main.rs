mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diagcount_core::characters::{self, MultCharacter};
use diagcount_core::counting::{
    self, applicable_methods, count_auto, count_with, i_is_zero_predicate, i_value, weil_bound, DiagonalEquation,
    IMethod, Method,
};
use diagcount_core::extremal::{self, classify_affine, classify_curve, classify_projective, ExtremalReport};
use diagcount_core::gf::{build_field, FieldCtx, FieldElement};
use diagcount_core::grid::{self, estimate_work, verify_grid, GridError, GridReport, GridSpec, Rhs};
use diagcount_core::oracle::{self, OraclePath};
use diagcount_core::par::{self, Mode};
use output::{Format, Record};
use serde_json::{json, Value};
use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const REPORTED_MISMATCHES: usize = 100;

#[derive(Parser, Debug)]
#[command(name = "diagcount", version, about = "Exact counts and extremality checks for diagonal equations over finite fields")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count solutions with the closed forms, falling back to the oracle.
    Count(CountArgs),
    /// Count solutions by the brute-force oracle.
    Brute(BruteArgs),
    /// Points of the curve a x^n + b y^m = c.
    Curve(CurveArgs),
    /// Maximal / minimal classification.
    Classify(ClassifyArgs),
    /// Points of a_1 x_1^d + ... + a_s x_s^d = 0 in projective space.
    Projective(ProjectiveArgs),
    /// Jacobi sum of characters chi_{d_i}^{l_i}.
    Jacobi(JacobiArgs),
    /// The I(d_1, ..., d_s) value by every method.
    Ivalue(IvalueArgs),
    /// Main term and Weil bounds.
    Bounds(BoundsArgs),
    /// Cross-check closed forms, bounds and classifiers over a grid.
    VerifyGrid(GridArgs),
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: u32,
}

#[derive(Args, Debug)]
struct EquationArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Coefficients as `alpha^k` or integers.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    a: Vec<Coef>,
    /// Exponents; a single value applies to every term.
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<u64>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    b: Coef,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Mixed,
    Common,
    Nonzero,
    S2,
    Oracle,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    eq: EquationArgs,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PathArg {
    Auto,
    Naive,
    Convolution,
    Transform,
}

#[derive(Args, Debug)]
struct BruteArgs {
    #[command(flatten)]
    eq: EquationArgs,
    #[arg(long, value_enum, default_value = "auto")]
    path: PathArg,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// The two coefficients `a,b`.
    #[arg(long, value_delimiter = ',', num_args = 1, required = true, allow_hyphen_values = true)]
    a: Vec<Coef>,
    /// Exponents `n` or `n,m`.
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<u64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Coef,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    eq: EquationArgs,
    /// Classify the projective variety against the Weil-Deligne bound.
    #[arg(long)]
    projective: bool,
}

#[derive(Args, Debug)]
struct ProjectiveArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    a: Vec<Coef>,
    #[arg(long)]
    d: u64,
}

#[derive(Args, Debug)]
struct JacobiArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Character orders `d_i`.
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<u64>,
    /// Character exponents `l_i`.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    l: Vec<i64>,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    b: Coef,
    /// Sum over all tuples instead of convolving.
    #[arg(long)]
    direct: bool,
}

#[derive(Args, Debug)]
struct IvalueArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<u64>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<u64>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    b: Coef,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Start from the extended grid (p <= 11, Q <= 16384, s <= 4).
    #[arg(long)]
    full: bool,
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    #[arg(long)]
    max_field: Option<u64>,
    /// Largest extension degree 2t.
    #[arg(long)]
    max_degree: Option<u32>,
    #[arg(long)]
    max_arity: Option<usize>,
    #[arg(long)]
    max_exponent: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    audit_samples: Option<usize>,
    /// Right-hand sides among `0`, `1`, `alpha`.
    #[arg(long, value_delimiter = ',')]
    rhs: Option<Vec<RhsArg>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Pin the exponent vector.
    #[arg(long, value_delimiter = ',')]
    exponents: Option<Vec<u64>>,
    /// Pin the coefficients as powers of alpha.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coefficients: Option<Vec<i64>>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Run even when the work estimate exceeds the limit.
    #[arg(long)]
    force: bool,
    /// Write every row as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the mismatch report as CSV.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, hide = true)]
    fault: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RhsArg {
    #[value(name = "0")]
    Zero,
    #[value(name = "1")]
    One,
    Alpha,
}

/// A coefficient as typed: `alpha^k`, `alpha`, or an integer read in the
/// prime subfield.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Coef {
    AlphaPow(i64),
    Int(i64),
}

impl FromStr for Coef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "alpha" {
            return Ok(Coef::AlphaPow(1));
        }
        if let Some(k) = s.strip_prefix("alpha^") {
            let k = k.trim_start_matches('(').trim_end_matches(')');
            return k
                .parse()
                .map(Coef::AlphaPow)
                .map_err(|_| format!("bad exponent in {s:?}"));
        }
        s.parse()
            .map(Coef::Int)
            .map_err(|_| format!("expected alpha^k or an integer, got {s:?}"))
    }
}

impl Coef {
    fn element(self, field: &FieldCtx) -> FieldElement {
        match self {
            Coef::AlphaPow(k) => field.alpha_pow(k),
            Coef::Int(v) => field.from_int(v),
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain { kind: String, message: String },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Domain { kind, message } => write!(f, "{kind}: {message}"),
        }
    }
}

const WRAPPERS: &[&str] = &["Count", "Oracle", "Field", "Char", "Cyc"];

/// The innermost variant name of a nested error, e.g. `WitnessMissing`.
fn error_kind(debug: &str) -> String {
    debug
        .split('(')
        .map(|seg| seg.split([' ', '{', ')', ',']).next().unwrap_or("").to_string())
        .find(|name| !WRAPPERS.contains(&name.as_str()))
        .unwrap_or_else(|| "Error".to_string())
}

fn domain<E: fmt::Debug + fmt::Display>(e: E) -> Failure {
    Failure::Domain {
        kind: error_kind(&format!("{e:?}")),
        message: e.to_string(),
    }
}

struct Outcome {
    record: Record,
    mismatch: bool,
    /// Grid rows, printed instead of the record for CSV output.
    rows: Option<Vec<grid::GridRow>>,
}

impl From<Record> for Outcome {
    fn from(record: Record) -> Self {
        Self {
            record,
            mismatch: false,
            rows: None,
        }
    }
}

fn field(args: &FieldArgs) -> Result<FieldCtx, Failure> {
    build_field(args.p, args.n).map_err(domain)
}

fn broadcast(d: &[u64], s: usize) -> Result<Vec<u64>, Failure> {
    match d.len() {
        1 => Ok(vec![d[0]; s]),
        n if n == s => Ok(d.to_vec()),
        n => Err(Failure::Usage(format!("{s} coefficients but {n} exponents"))),
    }
}

fn equation<'f>(f: &'f FieldCtx, args: &EquationArgs) -> Result<DiagonalEquation<'f>, Failure> {
    let a = args.a.iter().map(|c| c.element(f)).collect::<Vec<_>>();
    let d = broadcast(&args.d, a.len())?;
    DiagonalEquation::new(f, a, d, args.b.element(f)).map_err(domain)
}

fn method_name(m: Method) -> &'static str {
    grid::method_name(m)
}

fn verdict_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn put_equation(r: &mut Record, eq: &DiagonalEquation) {
    let f = eq.field();
    r.put("p", f.characteristic())
        .put("n", f.degree())
        .put("d", eq.exponents().to_vec());
}

fn run_count(args: &CountArgs) -> Result<Outcome, Failure> {
    let f = field(&args.eq.field)?;
    let eq = equation(&f, &args.eq)?;
    let res = match args.method {
        MethodArg::Auto => count_auto(&eq),
        MethodArg::Mixed => count_with(&eq, Method::MixedTheorem),
        MethodArg::Common => count_with(&eq, Method::CommonCorollary),
        MethodArg::Nonzero => count_with(&eq, Method::NonzeroTheorem),
        MethodArg::S2 => count_with(&eq, Method::S2Proposition),
        MethodArg::Oracle => count_with(&eq, Method::Oracle),
    }
    .map_err(domain)?;
    let mut r = Record::new("count");
    put_equation(&mut r, &eq);
    r.count("value", &res.value)
        .put("method", method_name(res.method))
        .count("main_term", eq.main_term())
        .put(
            "applicable",
            applicable_methods(&eq).into_iter().map(method_name).collect::<Vec<_>>(),
        );
    if let Some(w) = &res.witness {
        r.put("witness_r", verdict_value(&w.r)).put("common_r", verdict_value(&w.common));
    }
    Ok(r.into())
}

fn run_brute(args: &BruteArgs) -> Result<Outcome, Failure> {
    let f = field(&args.eq.field)?;
    let eq = equation(&f, &args.eq)?;
    let (value, path) = match args.path {
        PathArg::Auto => (oracle::brute_count(&eq), "auto"),
        PathArg::Naive => (oracle::brute_count_with(&eq, OraclePath::Naive), "naive"),
        PathArg::Convolution => (oracle::brute_count_with(&eq, OraclePath::Convolution), "convolution"),
        PathArg::Transform => (oracle::brute_count_with(&eq, OraclePath::Transform), "transform"),
    };
    let mut r = Record::new("brute");
    put_equation(&mut r, &eq);
    r.count("value", value.map_err(domain)?).put("path", path);
    Ok(r.into())
}

fn put_curve(r: &mut Record, c: &extremal::CurveReport) {
    r.count("affine", &c.affine)
        .count("infinity", &c.infinity)
        .put("infinity_formula", c.infinity_formula.as_ref().map(ToString::to_string))
        .count("projective", &c.projective)
        .put("genus", c.genus)
        .put("hasse_weil_bound", c.hasse_weil_bound.to_string())
        .put("point_verdict", verdict_value(&c.verdict))
        .put("method", method_name(c.method));
}

fn run_curve(args: &CurveArgs) -> Result<Outcome, Failure> {
    let f = field(&args.field)?;
    let [a, b] = args.a[..] else {
        return Err(Failure::Usage("--a takes exactly two coefficients".into()));
    };
    let (n, m) = match args.d[..] {
        [n] => (n, n),
        [n, m] => (n, m),
        _ => return Err(Failure::Usage("--d takes n or n,m".into())),
    };
    let (a, b, c) = (a.element(&f), b.element(&f), args.c.element(&f));
    let mut r = Record::new("curve");
    r.put("p", args.field.p).put("n", args.field.n).put("d", vec![n, m]);
    if n == m && n > 2 && !c.is_zero() && f.square_exponent().is_some() {
        let cls = classify_curve(&f, a, b, c, n).map_err(domain)?;
        r.put("verdict", verdict_value(&cls.verdict))
            .put("literal_verdict", verdict_value(&cls.literal_verdict))
            .put("checklist", verdict_value(&cls.checklist));
        put_curve(&mut r, &cls.points);
    } else {
        let pts = extremal::curve_points(&f, a, b, c, n, m).map_err(domain)?;
        r.put("verdict", verdict_value(&pts.verdict));
        put_curve(&mut r, &pts);
    }
    Ok(r.into())
}

fn put_report(r: &mut Record, rep: &ExtremalReport) {
    r.put("verdict", verdict_value(&rep.verdict))
        .count("count", &rep.count)
        .count("main_term", &rep.main_term)
        .put("bound", rep.bound.to_string())
        .put("bound_approx", rep.bound.to_f64())
        .put("attained", rep.attained)
        .put("direct_verdict", verdict_value(&rep.direct_verdict))
        .put("literal_verdict", verdict_value(&rep.literal_verdict))
        .put("scope", verdict_value(&rep.scope))
        .put("checklist", verdict_value(&rep.checklist))
        .put("witness_r", rep.witness_r)
        .put("method", method_name(rep.method));
}

fn run_classify(args: &ClassifyArgs) -> Result<Outcome, Failure> {
    let f = field(&args.eq.field)?;
    let mut r = Record::new("classify");
    if args.projective {
        if args.eq.b != Coef::Int(0) {
            return Err(Failure::Usage("--projective needs --b 0".into()));
        }
        let a = args.eq.a.iter().map(|c| c.element(&f)).collect::<Vec<_>>();
        let d = broadcast(&args.eq.d, a.len())?;
        if d.iter().any(|&x| x != d[0]) {
            return Err(domain(extremal::ExtremalError::ExponentsNotEqual));
        }
        let rep = classify_projective(&f, &a, d[0]).map_err(domain)?;
        r.put("p", args.eq.field.p)
            .put("n", args.eq.field.n)
            .put("d", d)
            .put("projective", true);
        put_report(&mut r, &rep);
    } else {
        let eq = equation(&f, &args.eq)?;
        let rep = classify_affine(&eq).map_err(domain)?;
        put_equation(&mut r, &eq);
        r.put("projective", false);
        put_report(&mut r, &rep);
    }
    Ok(r.into())
}

fn run_projective(args: &ProjectiveArgs) -> Result<Outcome, Failure> {
    let f = field(&args.field)?;
    let a = args.a.iter().map(|c| c.element(&f)).collect::<Vec<_>>();
    let eq = DiagonalEquation::new(&f, a, vec![args.d; args.a.len()], f.zero()).map_err(domain)?;
    let affine = count_auto(&eq).map_err(domain)?;
    let v = extremal::projective_from_affine(&affine.value, f.size() as u64).map_err(domain)?;
    let mut r = Record::new("projective");
    put_equation(&mut r, &eq);
    r.count("count", v)
        .count("affine", &affine.value)
        .put("method", method_name(affine.method));
    Ok(r.into())
}

fn run_jacobi(args: &JacobiArgs) -> Result<Outcome, Failure> {
    if args.d.len() != args.l.len() {
        return Err(Failure::Usage(format!(
            "{} orders but {} exponents",
            args.d.len(),
            args.l.len()
        )));
    }
    let f = field(&args.field)?;
    let chars = args
        .d
        .iter()
        .zip(&args.l)
        .map(|(&d, &l)| MultCharacter::new(&f, d, l))
        .collect::<Result<Vec<_>, _>>()
        .map_err(domain)?;
    let b = args.b.element(&f);
    let value = if args.direct {
        characters::jacobi_sum_direct(&chars, b)
    } else {
        characters::jacobi_sum(&chars, b)
    }
    .map_err(domain)?;
    let (re, im) = value.to_complex();
    let mut r = Record::new("jacobi");
    r.put("p", args.field.p)
        .put("n", args.field.n)
        .put("orders", args.d.clone())
        .put("exponents", args.l.clone())
        .put("level", value.level())
        .put("value", value.to_string())
        .put("approx", vec![re, im])
        .put("abs_square", value.abs_square().as_rational_integer().map(|n| n.to_string()))
        .put("method", if args.direct { "direct" } else { "convolution" });
    Ok(r.into())
}

/// A JSON number when it fits in `i64`, else a decimal string.
fn small_int(n: impl ToString) -> Value {
    let s = n.to_string();
    s.parse::<i64>().map_or(Value::String(s), Value::from)
}

fn run_ivalue(args: &IvalueArgs) -> Result<Outcome, Failure> {
    let get = |m| i_value(&args.d, m).map_err(domain);
    let mut r = Record::new("ivalue");
    r.put("d", args.d.clone())
        .put("enumerate", small_int(get(IMethod::Enumerate)?))
        .put("lcm", small_int(get(IMethod::LcmFormula)?))
        .put("incl_excl", small_int(get(IMethod::InclusionExclusion)?))
        .put("zero_predicate", i_is_zero_predicate(&args.d).ok());
    Ok(r.into())
}

fn run_bounds(args: &BoundsArgs) -> Result<Outcome, Failure> {
    let f = field(&args.field)?;
    let b = args.b.element(&f);
    let q = f.size() as u64;
    let ones = vec![f.one(); args.d.len()];
    let eq = DiagonalEquation::new(&f, ones, args.d.clone(), b).map_err(domain)?;
    let d = eq.exponents();
    let bound = weil_bound(d, q, b.is_zero()).map_err(domain)?;
    let mut r = Record::new("bounds");
    put_equation(&mut r, &eq);
    r.count("main_term", eq.main_term())
        .put("weil_bound", bound.to_string())
        .put("weil_bound_approx", bound.to_f64());
    if b.is_zero() {
        r.put(
            "mixed_bound",
            counting::mixed_bound_rhs(&eq).ok().map(|n| n.to_string()),
        );
        let equal = d.iter().all(|&x| x == d[0]);
        let wd = (equal && d.len() >= 3)
            .then(|| extremal::weil_deligne_bound(d[0], d.len(), q).ok())
            .flatten();
        r.put("weil_deligne_bound", wd.map(|x| x.to_string()));
    }
    Ok(r.into())
}

fn grid_spec(args: &GridArgs) -> GridSpec {
    let mut spec = if args.full { GridSpec::full() } else { GridSpec::default() };
    if let Some(v) = &args.primes {
        spec.primes = v.clone();
    }
    if let Some(v) = args.max_field {
        spec.max_field = v;
    }
    if let Some(v) = args.max_degree {
        spec.max_degree = v;
    }
    if let Some(v) = args.max_arity {
        spec.max_arity = v;
    }
    if let Some(v) = args.max_exponent {
        spec.max_exponent = v;
    }
    if let Some(v) = args.samples {
        spec.samples = v;
    }
    if let Some(v) = args.audit_samples {
        spec.audit_samples = v;
    }
    if let Some(v) = &args.rhs {
        spec.rhs = v
            .iter()
            .map(|r| match r {
                RhsArg::Zero => Rhs::Zero,
                RhsArg::One => Rhs::One,
                RhsArg::Alpha => Rhs::Alpha,
            })
            .collect();
    }
    if let Some(v) = args.seed {
        spec.seed = v;
    }
    spec.exponents = args.exponents.clone();
    spec.coefficients = args.coefficients.clone();
    spec.fault = args.fault;
    spec.mode = if args.jobs == 1 { Mode::Sequential } else { Mode::default() };
    spec
}

fn write_rows<T: serde::Serialize>(rows: &[T], out: impl Write) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}

fn offending(report: &GridReport) -> Vec<Value> {
    report
        .mismatches
        .iter()
        .take(REPORTED_MISMATCHES)
        .map(|m| {
            json!({
                "row": m.row,
                "kind": m.kind,
                "detail": m.detail,
                "data": report.rows.get(m.row),
            })
        })
        .collect()
}

fn run_grid(args: &GridArgs, format: Format) -> Result<Outcome, Failure> {
    let spec = grid_spec(args);
    let work = estimate_work(&spec);
    eprintln!("estimated work: {work} basic operations (limit {})", grid::WORK_LIMIT);
    let report = par::with_jobs(args.jobs, || verify_grid(&spec, args.force)).map_err(|e| match e {
        GridError::TooMuchWork(_) => Failure::Usage(e.to_string()),
        e => domain(e),
    })?;
    let io_err = |e: io::Error| Failure::Usage(e.to_string());
    if let Some(path) = &args.out {
        let file = std::fs::File::create(path).map_err(io_err)?;
        write_rows(&report.rows, file).map_err(io_err)?;
    }
    let bad = offending(&report);
    if let Some(path) = &args.report {
        let file = std::fs::File::create(path).map_err(io_err)?;
        let flat: Vec<_> = report
            .mismatches
            .iter()
            .take(REPORTED_MISMATCHES)
            .map(|m| (m.row, format!("{:?}", m.kind), m.detail.clone()))
            .collect();
        write_rows(&flat, file).map_err(io_err)?;
    }
    if !report.passed() {
        eprintln!(
            "{} mismatches; the first {} are in the report",
            report.mismatches.len(),
            bad.len()
        );
    }
    let mut r = Record::new("verify-grid");
    r.put("passed", report.passed())
        .put("estimated_work", work.to_string())
        .put("fields", report.fields)
        .put("rows", report.rows.len())
        .put("oracle_counts", report.oracle_counts)
        .put("closed_form_checks", report.closed_form_checks)
        .put("bound_checks", report.bound_checks)
        .put("classifier_checks", report.classifier_checks)
        .put("in_scope_checks", report.in_scope_checks)
        .put("literal_contradictions", report.literal_contradictions)
        .put("mismatch_count", report.mismatches.len());
    if format != Format::Csv {
        r.put("mismatches", bad);
    }
    Ok(Outcome {
        record: r,
        mismatch: !report.passed(),
        rows: (format == Format::Csv).then_some(report.rows),
    })
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Count(a) => run_count(a),
        Command::Brute(a) => run_brute(a),
        Command::Curve(a) => run_curve(a),
        Command::Classify(a) => run_classify(a),
        Command::Projective(a) => run_projective(a),
        Command::Jacobi(a) => run_jacobi(a),
        Command::Ivalue(a) => run_ivalue(a),
        Command::Bounds(a) => run_bounds(a),
        Command::VerifyGrid(a) => run_grid(a, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match dispatch(&cli) {
        Ok(outcome) => {
            let written = match &outcome.rows {
                Some(rows) => write_rows(rows, &mut out),
                None => outcome.record.write(cli.format, &mut out),
            };
            if let Err(e) = written {
                eprintln!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(if outcome.mismatch { EXIT_MISMATCH } else { 0 })
        }
        Err(fail) => {
            let code = match &fail {
                Failure::Usage(_) => EXIT_USAGE,
                Failure::Domain { .. } => EXIT_DOMAIN,
            };
            if cli.format == Format::Json {
                let (kind, message) = match &fail {
                    Failure::Usage(m) => ("Usage".to_string(), m.clone()),
                    Failure::Domain { kind, message } => (kind.clone(), message.clone()),
                };
                eprintln!(
                    "{}",
                    json!({"schema": output::SCHEMA, "error": {"kind": kind, "message": message}})
                );
            } else {
                eprintln!("{fail}");
            }
            ExitCode::from(code)
        }
    }
}
