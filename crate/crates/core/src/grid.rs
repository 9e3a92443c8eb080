//! Verification sweep: every applicable closed form against the oracle, Weil
//! bound compliance for every oracle count, and classifier consistency for
//! equal exponents.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::counting::{
    self, applicable_methods, count_with, weil_bound, CountResult, DiagonalEquation, ExactBound, Method,
};
use crate::extremal::{self, Scope, Verdict};
use crate::gf::{build_field, FieldCtx, FieldElement, GfError};
use crate::oracle::TransformOracle;
use crate::par::{self, Mode};

/// Grids estimated above this many basic operations need `force`.
pub const WORK_LIMIT: u128 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rhs {
    Zero,
    One,
    Alpha,
}

impl Rhs {
    pub fn element(self, field: &FieldCtx) -> FieldElement {
        match self {
            Rhs::Zero => field.zero(),
            Rhs::One => field.one(),
            Rhs::Alpha => field.alpha(),
        }
    }
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rhs::Zero => "0",
            Rhs::One => "1",
            Rhs::Alpha => "alpha",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub primes: Vec<u64>,
    /// Largest `Q = p^{2t}`.
    pub max_field: u64,
    /// Largest extension degree `2t`.
    pub max_degree: u32,
    pub max_arity: usize,
    pub max_exponent: u64,
    /// Coefficient vectors per witnessed exponent vector.
    pub samples: usize,
    /// Coefficient vectors per exponent vector lacking a witness; these rows
    /// only audit the bound. Zero skips them.
    pub audit_samples: usize,
    pub rhs: Vec<Rhs>,
    pub seed: u64,
    /// Pins the exponent vector.
    pub exponents: Option<Vec<u64>>,
    /// Pins the coefficients as powers of alpha.
    pub coefficients: Option<Vec<i64>>,
    /// Adds one to every closed-form value, for testing the harness.
    pub fault: bool,
    pub mode: Mode,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            primes: vec![3, 5],
            max_field: 1 << 16,
            max_degree: 4,
            max_arity: 3,
            max_exponent: 16,
            samples: 20,
            audit_samples: 2,
            rhs: vec![Rhs::Zero, Rhs::One, Rhs::Alpha],
            seed: 0x5eed,
            exponents: None,
            coefficients: None,
            fault: false,
            mode: Mode::default(),
        }
    }
}

impl GridSpec {
    /// `p in {3, 5, 7, 11}`, `Q <= 16384`, `s <= 4`, `d_i <= 16`.
    pub fn full() -> Self {
        Self {
            primes: vec![3, 5, 7, 11],
            max_field: 16384,
            max_degree: 64,
            max_arity: 4,
            ..Self::default()
        }
    }

    fn fields(&self) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        for &p in &self.primes {
            let mut n = 2;
            while n <= self.max_degree && arith::checked_pow(p, n).is_some_and(|q| q <= self.max_field) {
                out.push((p, n));
                n += 2;
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Config {
    d: Vec<u64>,
    witnessed: bool,
    samples: usize,
    index: usize,
}

/// Exponent vectors (sorted, entries in `values`) of every arity up to `max`.
pub fn multisets(values: &[u64], max: usize) -> Vec<Vec<u64>> {
    fn rec(values: &[u64], start: usize, k: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..values.len() {
            cur.push(values[i]);
            rec(values, i, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for k in 1..=max {
        rec(values, 0, k, &mut Vec::new(), &mut out);
    }
    out
}

fn configs(spec: &GridSpec, p: u64, n: u32) -> Vec<Config> {
    let t = (n / 2) as u64;
    let m = p.pow(n) - 1;
    let witnessed = |d: u64| arith::find_witness(d, p, t).is_some();
    let mut out = Vec::new();
    let mut push = |d: Vec<u64>, w: bool, samples: usize| {
        if samples > 0 {
            let index = out.len();
            out.push(Config {
                d,
                witnessed: w,
                samples,
                index,
            });
        }
    };
    if let Some(d) = &spec.exponents {
        let d: Vec<u64> = d.iter().map(|&x| arith::gcd(x, m)).collect();
        let w = d.iter().all(|&x| witnessed(x));
        let samples = if spec.coefficients.is_some() { 1 } else { spec.samples };
        push(d, w, samples);
        return out;
    }
    let usable: Vec<u64> = (2..=spec.max_exponent).filter(|d| m % d == 0).collect();
    for d in multisets(&usable, spec.max_arity) {
        if d.iter().all(|&x| witnessed(x)) {
            push(d, true, spec.samples);
        } else {
            push(d, false, spec.audit_samples);
        }
    }
    out
}

fn coefficient_vectors(spec: &GridSpec, p: u64, n: u32, cfg: &Config) -> Vec<Vec<i64>> {
    if let Some(a) = &spec.coefficients {
        return vec![a.clone()];
    }
    let m = (p.pow(n) - 1) as i64;
    let mixed = spec.seed ^ (p << 48) ^ ((n as u64) << 40) ^ (cfg.index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let mut rng = ChaCha8Rng::seed_from_u64(mixed);
    (0..cfg.samples)
        .map(|_| (0..cfg.d.len()).map(|_| rng.gen_range(0..m)).collect())
        .collect()
}

/// Rough count of basic operations: transforms per field plus one pointwise
/// product and readout per equation.
pub fn estimate_work(spec: &GridSpec) -> u128 {
    let mut total = 0u128;
    for (p, n) in spec.fields() {
        let q = p.pow(n) as u128;
        let cfgs = configs(spec, p, n);
        let keys: u128 = cfgs
            .iter()
            .flat_map(|c| c.d.iter().copied())
            .collect::<std::collections::BTreeSet<_>>()
            .iter()
            .map(|&d| d as u128)
            .sum();
        total += keys * q * (p as u128) * n as u128;
        for c in &cfgs {
            total += c.samples as u128 * q * (c.d.len() + spec.rhs.len()) as u128;
        }
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MismatchKind {
    ClosedForm,
    ClosedFormError,
    BoundViolation,
    Classifier,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub row: usize,
    pub kind: MismatchKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridRow {
    pub p: u64,
    pub t: u32,
    pub s: usize,
    pub d: String,
    pub a_classes: String,
    pub b: String,
    pub b_class: String,
    #[serde(rename = "N")]
    pub n: String,
    pub method: String,
    pub bound: String,
    pub attained: bool,
    pub verdict: String,
    pub witnessed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridReport {
    pub rows: Vec<GridRow>,
    pub mismatches: Vec<Mismatch>,
    pub fields: usize,
    pub oracle_counts: usize,
    pub closed_form_checks: usize,
    pub bound_checks: usize,
    pub classifier_checks: usize,
    /// Classifier checks inside theorem scope with `d > 2`.
    pub in_scope_checks: usize,
    /// In-scope rows where the uncorrected attainment rule disagrees with
    /// the count.
    pub literal_contradictions: usize,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn mismatches_of(&self, kind: MismatchKind) -> usize {
        self.mismatches.iter().filter(|m| m.kind == kind).count()
    }

    fn absorb(&mut self, part: GridReport) {
        let offset = self.rows.len();
        self.rows.extend(part.rows);
        self.mismatches.extend(part.mismatches.into_iter().map(|mut m| {
            m.row += offset;
            m
        }));
        self.oracle_counts += part.oracle_counts;
        self.closed_form_checks += part.closed_form_checks;
        self.bound_checks += part.bound_checks;
        self.classifier_checks += part.classifier_checks;
        self.in_scope_checks += part.in_scope_checks;
        self.literal_contradictions += part.literal_contradictions;
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("estimated {0} basic operations exceeds the limit; pass --force to run anyway")]
    TooMuchWork(u128),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("pinned coefficients have length {got}, exponents {want}")]
    ShapeMismatch { got: usize, want: usize },
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Maximal => "Maximal",
        Verdict::Minimal => "Minimal",
        Verdict::Neither => "Neither",
        Verdict::OutsideTheoremScope => "OutsideTheoremScope",
    }
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::MixedTheorem => "MixedTheorem",
        Method::CommonCorollary => "CommonCorollary",
        Method::NonzeroTheorem => "NonzeroTheorem",
        Method::S2Proposition => "S2Proposition",
        Method::Oracle => "Oracle",
    }
}

struct FieldRun<'a, 'f> {
    spec: &'a GridSpec,
    field: &'f FieldCtx,
    oracle: TransformOracle<'f>,
    p: u64,
    n: u32,
}

impl FieldRun<'_, '_> {
    fn run_config(&self, cfg: &Config) -> GridReport {
        let field = self.field;
        let q = field.size() as u64;
        let rhs: Vec<FieldElement> = self.spec.rhs.iter().map(|r| r.element(field)).collect();
        let bounds: Vec<ExactBound> = self
            .spec
            .rhs
            .iter()
            .map(|&r| weil_bound(&cfg.d, q, r == Rhs::Zero).expect("grid exponents are at least 2"))
            .collect();
        let lcm = arith::lcm_all(&cfg.d);
        let mut memo: HashMap<Vec<u64>, Vec<BigUint>> = HashMap::new();
        let mut report = GridReport::default();
        for exps in coefficient_vectors(self.spec, self.p, self.n, cfg) {
            let a: Vec<FieldElement> = exps.iter().map(|&k| field.alpha_pow(k)).collect();
            let classes: Vec<u64> = a
                .iter()
                .zip(&cfg.d)
                .map(|(x, &d)| x.exponent().unwrap() as u64 % d)
                .collect();
            let counts = memo
                .entry(classes.clone())
                .or_insert_with(|| self.oracle.count(&a, &cfg.d, &rhs))
                .clone();
            for (k, (&b, count)) in rhs.iter().zip(counts).enumerate() {
                self.check(cfg, &a, b, count, &bounds[k], &classes, lcm, k, &mut report);
            }
        }
        report
    }

    #[allow(clippy::too_many_arguments)]
    fn check(
        &self,
        cfg: &Config,
        a: &[FieldElement],
        b: FieldElement,
        count: BigUint,
        bound: &ExactBound,
        classes: &[u64],
        lcm: u64,
        k: usize,
        report: &mut GridReport,
    ) {
        let field = self.field;
        let row = report.rows.len();
        let eq = DiagonalEquation::new(field, a.to_vec(), cfg.d.clone(), b).expect("grid equation is valid");
        let mut fail = |kind, detail: String| report_push(&mut report.mismatches, row, kind, detail);
        report.oracle_counts += 1;

        let main = eq.main_term();
        report.bound_checks += 1;
        if !counting::within(&count, &main, bound) {
            fail(MismatchKind::BoundViolation, format!("N = {count}, bound {bound}"));
        }

        let methods = applicable_methods(&eq);
        for &m in &methods {
            report.closed_form_checks += 1;
            match count_with(&eq, m) {
                Ok(res) => {
                    let value = if self.spec.fault { res.value + 1u32 } else { res.value };
                    if value != count {
                        fail(
                            MismatchKind::ClosedForm,
                            format!("{} gives {value}, oracle {count}", method_name(m)),
                        );
                    }
                }
                Err(e) => fail(MismatchKind::ClosedFormError, format!("{}: {e}", method_name(m))),
            }
        }

        let d0 = cfg.d[0];
        let equal = cfg.d.iter().all(|&x| x == d0);
        let mut verdict = extremal::direct_verdict(&count, &main, bound);
        if equal && eq.arity() >= 2 {
            let oracle_result = CountResult {
                value: count.clone(),
                method: Method::Oracle,
                witness: None,
            };
            match extremal::classify_affine_with(&eq, oracle_result) {
                Ok(rep) => {
                    report.classifier_checks += 1;
                    if rep.scope == Scope::Theorem && d0 > 2 {
                        report.in_scope_checks += 1;
                        if rep.literal_verdict != Some(rep.direct_verdict) {
                            report.literal_contradictions += 1;
                        }
                    }
                    if !rep.consistent() {
                        fail(
                            MismatchKind::Classifier,
                            format!(
                                "checklist {:?} ({:?}), count says {:?}",
                                rep.verdict, rep.checklist, rep.direct_verdict
                            ),
                        );
                    }
                    verdict = rep.verdict;
                }
                Err(e) => fail(MismatchKind::Classifier, e.to_string()),
            }
        }

        let b_class = b.exponent().map_or(String::from("-"), |e| (e as u64 % lcm).to_string());
        report.rows.push(GridRow {
            p: self.p,
            t: self.n / 2,
            s: cfg.d.len(),
            d: join(&cfg.d),
            a_classes: join(classes),
            b: self.spec.rhs[k].to_string(),
            b_class,
            n: count.to_string(),
            method: method_name(methods.first().copied().unwrap_or(Method::Oracle)).to_string(),
            bound: bound.to_string(),
            attained: counting::attains(&count, &main, bound),
            verdict: verdict_name(verdict).to_string(),
            witnessed: cfg.witnessed,
        });
    }
}

fn report_push(list: &mut Vec<Mismatch>, row: usize, kind: MismatchKind, detail: String) {
    list.push(Mismatch { row, kind, detail });
}

/// Runs the sweep. Rows come back in grid order whatever the mode.
pub fn verify_grid(spec: &GridSpec, force: bool) -> Result<GridReport, GridError> {
    let work = estimate_work(spec);
    if work > WORK_LIMIT && !force {
        return Err(GridError::TooMuchWork(work));
    }
    if let (Some(a), Some(d)) = (&spec.coefficients, &spec.exponents) {
        if a.len() != d.len() {
            return Err(GridError::ShapeMismatch {
                got: a.len(),
                want: d.len(),
            });
        }
    }
    let mut total = GridReport::default();
    for (p, n) in spec.fields() {
        let field = build_field(p, n)?;
        let cfgs = configs(spec, p, n);
        let arity = cfgs.iter().map(|c| c.d.len()).max().unwrap_or(1);
        let run = FieldRun {
            spec,
            oracle: TransformOracle::new(&field, arity),
            field: &field,
            p,
            n,
        };
        for part in par::map_with(spec.mode, &cfgs, |c| run.run_config(c)) {
            total.absorb(part);
        }
        total.fields += 1;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(&[2, 4], 2), vec![vec![2], vec![4], vec![2, 2], vec![2, 4], vec![4, 4]]);
        assert_eq!(multisets(&[2, 3, 4, 5], 4).len(), 4 + 10 + 20 + 35);
    }

    #[test]
    fn fields_of_full_grid() {
        let sizes: Vec<u64> = GridSpec::full().fields().iter().map(|&(p, n)| p.pow(n)).collect();
        assert_eq!(sizes, vec![9, 81, 729, 6561, 25, 625, 15625, 49, 2401, 121, 14641]);
    }

    #[test]
    fn small_grid_is_clean() {
        let spec = GridSpec {
            primes: vec![3],
            max_degree: 2,
            samples: 4,
            ..GridSpec::default()
        };
        let rep = verify_grid(&spec, false).unwrap();
        assert!(rep.passed(), "{:?}", rep.mismatches);
        assert!(rep.closed_form_checks > 0);
        assert_eq!(rep.bound_checks, rep.rows.len());
    }

    #[test]
    fn fault_is_detected() {
        let spec = GridSpec {
            primes: vec![3],
            max_degree: 2,
            samples: 2,
            fault: true,
            ..GridSpec::default()
        };
        let rep = verify_grid(&spec, false).unwrap();
        assert!(rep.mismatches_of(MismatchKind::ClosedForm) > 0);
    }

    #[test]
    fn single_point_matches_count() {
        let spec = GridSpec {
            primes: vec![3],
            max_degree: 2,
            exponents: Some(vec![4, 4]),
            coefficients: Some(vec![0, 0]),
            rhs: vec![Rhs::One],
            ..GridSpec::default()
        };
        let rep = verify_grid(&spec, false).unwrap();
        assert_eq!(rep.rows.len(), 1);
        assert_eq!(rep.rows[0].n, "24");
        assert_eq!(rep.rows[0].method, "S2Proposition");
    }

    #[test]
    fn work_limit_applies() {
        let spec = GridSpec::full();
        assert!(estimate_work(&spec) > 0);
        let tiny = GridSpec {
            samples: 1,
            primes: vec![3],
            max_degree: 2,
            ..GridSpec::default()
        };
        assert!(estimate_work(&tiny) < WORK_LIMIT);
    }
}
