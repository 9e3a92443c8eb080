//! Closed-form solution counts of diagonal equations over `F_{q^2}`,
//! `q = p^t`, together with the `I(d_1, ..., d_s)` invariant and the Weil
//! bounds.
//!
//! Throughout, `Q = q^2` is the field size and exponents are normalized to
//! divisors of `Q - 1`. A witness for `d` is a divisor `r` of `t` with
//! `d | p^r + 1`; every closed form needs one.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::gf::{FieldCtx, FieldElement, GfError};
use crate::oracle::{self, OracleError};

/// Work limit for [`IMethod::Enumerate`].
pub const ENUMERATION_LIMIT: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("an equation needs at least one term")]
    EmptyEquation,
    #[error("{a} coefficients but {d} exponents")]
    ShapeMismatch { a: usize, d: usize },
    #[error("coefficient a_{0} is zero")]
    ZeroCoefficient(usize),
    #[error("exponent d_{0} must be positive")]
    InvalidExponent(usize),
    #[error("exponent d_{index} acts bijectively; the count is {count}")]
    DegenerateExponent { index: usize, count: BigUint },
    #[error("closed forms need odd characteristic")]
    EvenCharacteristic,
    #[error("closed forms need a field of size p^(2t)")]
    NotSquareField,
    #[error("no divisor r of t has d_{index} = {d} dividing p^r + 1")]
    WitnessMissing { index: usize, d: u64 },
    #[error("no single divisor r of t serves every exponent")]
    NoCommonWitness,
    #[error("this formula requires b = 0")]
    NonzeroB,
    #[error("this formula requires b != 0")]
    ZeroB,
    #[error("this formula requires s = 2, got s = {0}")]
    ArityNotTwo(usize),
    #[error("this needs s > 2, got s = {0}")]
    ArityTooSmall(usize),
    #[error("exponents must be at least 2")]
    ExponentTooSmall,
    #[error("enumeration of {0} tuples exceeds the limit")]
    EnumerationTooLarge(u64),
    #[error("{first:?} gives {first_value} but {second:?} gives {second_value}")]
    Inconsistent {
        first: Method,
        first_value: BigInt,
        second: Method,
        second_value: BigInt,
    },
}

/// `a_1 x_1^{d_1} + ... + a_s x_s^{d_s} = b` over a fixed field.
#[derive(Clone, Debug)]
pub struct DiagonalEquation<'f> {
    field: &'f FieldCtx,
    a: Vec<FieldElement>,
    d: Vec<u64>,
    b: FieldElement,
}

impl<'f> DiagonalEquation<'f> {
    /// Exponents are replaced by `gcd(d_i, Q - 1)`, which leaves the count
    /// unchanged. An exponent that becomes `1` is reported with the count
    /// `Q^{s-1}`.
    pub fn new(field: &'f FieldCtx, a: Vec<FieldElement>, d: Vec<u64>, b: FieldElement) -> Result<Self, CountError> {
        if a.is_empty() {
            return Err(CountError::EmptyEquation);
        }
        if a.len() != d.len() {
            return Err(CountError::ShapeMismatch { a: a.len(), d: d.len() });
        }
        if !a.iter().chain([&b]).all(|&x| field.contains(x)) {
            return Err(GfError::MixedFields.into());
        }
        if let Some(i) = a.iter().position(|x| x.is_zero()) {
            return Err(CountError::ZeroCoefficient(i));
        }
        if let Some(i) = d.iter().position(|&x| x == 0) {
            return Err(CountError::InvalidExponent(i));
        }
        let m = field.group_order() as u64;
        let d: Vec<u64> = d.iter().map(|&x| arith::gcd(x, m)).collect();
        if let Some(index) = d.iter().position(|&x| x == 1) {
            let count = BigUint::from(field.size()).pow(a.len() as u32 - 1);
            return Err(CountError::DegenerateExponent { index, count });
        }
        Ok(Self { field, a, d, b })
    }

    pub fn field(&self) -> &'f FieldCtx {
        self.field
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.a
    }

    /// Normalized exponents.
    pub fn exponents(&self) -> &[u64] {
        &self.d
    }

    pub fn rhs(&self) -> FieldElement {
        self.b
    }

    pub fn arity(&self) -> usize {
        self.a.len()
    }

    pub fn with_rhs(&self, b: FieldElement) -> Self {
        assert!(self.field.contains(b));
        Self { b, ..self.clone() }
    }

    /// `Q^{s-1}`, the expected count.
    pub fn main_term(&self) -> BigUint {
        BigUint::from(self.field.size()).pow(self.arity() as u32 - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    MixedTheorem,
    CommonCorollary,
    NonzeroTheorem,
    S2Proposition,
    Oracle,
}

/// Per-exponent witness data for `F_{p^{2t}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentWitness {
    pub t: u64,
    /// Smallest `r_i | t` with `d_i | p^{r_i} + 1`.
    pub r: Vec<Option<u64>>,
    /// `(-1)^{t / r_i}`.
    pub eps: Vec<Option<i64>>,
    /// Whether `d_i | p^t + 1`, which shifts the classes by `alpha^{(p^t+1)/2}`.
    pub lambda_shift: Vec<bool>,
    /// Smallest `r | t` serving every exponent.
    pub common: Option<u64>,
}

impl ExponentWitness {
    pub fn all_present(&self) -> bool {
        self.r.iter().all(Option::is_some)
    }

    /// `(-1)^{t/r}` for the common witness.
    pub fn common_eps(&self) -> Option<i64> {
        self.common.map(|r| arith::sign_pow(self.t / r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    pub value: BigUint,
    pub method: Method,
    pub witness: Option<ExponentWitness>,
}

pub fn find_witness(d: u64, p: u64, t: u64) -> Option<u64> {
    arith::find_witness(d, p, t)
}

/// `(p, t, q)` for `F_{p^{2t}}` with odd `p`.
fn square_shape(field: &FieldCtx) -> Result<(u64, u64, u64), CountError> {
    if field.characteristic() == 2 {
        return Err(CountError::EvenCharacteristic);
    }
    let t = field.square_exponent().ok_or(CountError::NotSquareField)? as u64;
    let p = field.characteristic() as u64;
    Ok((p, t, p.pow(t as u32)))
}

pub fn exponent_witness(field: &FieldCtx, d: &[u64]) -> Result<ExponentWitness, CountError> {
    let (p, t, q) = square_shape(field)?;
    let r: Vec<Option<u64>> = d.iter().map(|&di| find_witness(di, p, t)).collect();
    let eps = r.iter().map(|ri| ri.map(|ri| arith::sign_pow(t / ri))).collect();
    let lambda_shift = d.iter().map(|&di| (q + 1) % di == 0).collect();
    let common = arith::divisors(t)
        .into_iter()
        .find(|&rr| d.iter().all(|&di| (arith::pow_mod(p, rr, di) + 1) % di == 0));
    Ok(ExponentWitness {
        t,
        r,
        eps,
        lambda_shift,
        common,
    })
}

fn log_of(x: FieldElement) -> u64 {
    x.exponent().expect("nonzero element") as u64
}

/// `sum_{j=1}^{len} prod_i (1 - d_i)^{[j = c_i mod d_i]}` for `len` a multiple
/// of every `d_i`, folded to one period of `lcm(d_i)`.
fn folded_sum(classes: &[(u64, u64)], len: u64) -> i128 {
    let period = arith::lcm_all(&classes.iter().map(|c| c.0).collect::<Vec<_>>());
    assert_eq!(len % period, 0, "range must be a union of full periods");
    let one_period: i128 = (0..period)
        .map(|j| {
            classes
                .iter()
                .filter(|&&(d, c)| j % d == c)
                .map(|&(d, _)| 1 - d as i128)
                .product::<i128>()
        })
        .sum();
    one_period * (len / period) as i128
}

/// `main + q^{s-2} * sum`, dividing exactly when `s = 1`.
fn assemble(main: BigInt, q: u64, s: usize, sum: BigInt) -> BigInt {
    if s >= 2 {
        main + BigInt::from(q).pow(s as u32 - 2) * sum
    } else {
        let (quot, rem) = sum.div_rem(&BigInt::from(q));
        assert!(rem.is_zero(), "character sum not divisible by q for s = 1");
        main + quot
    }
}

fn to_count(value: BigInt) -> BigUint {
    value.to_biguint().expect("a point count is nonnegative")
}

/// Mixed-exponent formula for `b = 0`:
/// `Q^{s-1} + q^{s-2} sum_{j=1}^{Q-1} prod_i eps_i (1 - d_i)^{Delta_{ij}}`
/// with `Delta_{ij} = theta_{d_i}(a_i, lambda_i alpha^j)`.
pub fn count_b0_mixed(eq: &DiagonalEquation) -> Result<CountResult, CountError> {
    let field = eq.field();
    let (_, _, q) = square_shape(field)?;
    if !eq.rhs().is_zero() {
        return Err(CountError::NonzeroB);
    }
    let w = exponent_witness(field, eq.exponents())?;
    if let Some(index) = w.r.iter().position(Option::is_none) {
        return Err(CountError::WitnessMissing {
            index,
            d: eq.exponents()[index],
        });
    }
    // every r | t witnesses d_i = 2, but the formula needs t / r_i odd there
    let sign: i64 = w
        .eps
        .iter()
        .zip(eq.exponents())
        .map(|(e, &d)| if d == 2 { -1 } else { e.unwrap() })
        .product();
    let shift = (q + 1) / 2;
    let classes: Vec<(u64, u64)> = eq
        .coefficients()
        .iter()
        .zip(eq.exponents())
        .zip(&w.lambda_shift)
        .map(|((&a, &d), &lam)| {
            let s = if lam { shift % d } else { 0 };
            (d, (log_of(a) + d - s) % d)
        })
        .collect();
    let sum = folded_sum(&classes, field.group_order() as u64) * sign as i128;
    let main = BigInt::from(eq.main_term());
    let value = assemble(main, q, eq.arity(), BigInt::from(sum));
    Ok(CountResult {
        value: to_count(value),
        method: Method::MixedTheorem,
        witness: Some(w),
    })
}

fn common_witness(eq: &DiagonalEquation) -> Result<(ExponentWitness, u64, i64), CountError> {
    let (_, _, q) = square_shape(eq.field())?;
    let w = exponent_witness(eq.field(), eq.exponents())?;
    if let Some(index) = w.r.iter().position(Option::is_none) {
        return Err(CountError::WitnessMissing {
            index,
            d: eq.exponents()[index],
        });
    }
    let eps = w.common_eps().ok_or(CountError::NoCommonWitness)?;
    Ok((w, q, eps))
}

fn delta_classes(eq: &DiagonalEquation) -> Vec<(u64, u64)> {
    eq.coefficients()
        .iter()
        .zip(eq.exponents())
        .map(|(&a, &d)| (d, log_of(a) % d))
        .collect()
}

/// Common-witness formula for `b = 0`:
/// `Q^{s-1} + eps^s q^{s-2} (q + eps) sum_{j=1}^{q-eps} prod_i (1 - d_i)^{delta_{ij}}`.
pub fn count_b0_common(eq: &DiagonalEquation) -> Result<CountResult, CountError> {
    if !eq.rhs().is_zero() {
        return Err(CountError::NonzeroB);
    }
    let (w, q, eps) = common_witness(eq)?;
    let s = eq.arity();
    let len = (q as i64 - eps) as u64;
    let sum = folded_sum(&delta_classes(eq), len);
    let eps_s = if eps == -1 { arith::sign_pow(s as u64) } else { 1 };
    let factor = eps_s as i128 * (q as i128 + eps as i128);
    let value = assemble(BigInt::from(eq.main_term()), q, s, BigInt::from(sum * factor));
    Ok(CountResult {
        value: to_count(value),
        method: Method::CommonCorollary,
        witness: Some(w),
    })
}

/// Formula for `b != 0`:
/// `Q^{s-1} - eps^{s+1} q^{s-2} (q prod_i (1 - d_i)^{nu_i} - sum_{j=1}^{q-eps} prod_i (1 - d_i)^{delta_{ij}})`
/// with `nu_i = theta_{d_i}(a_i, b)`.
pub fn count_bnz(eq: &DiagonalEquation) -> Result<CountResult, CountError> {
    let lb = eq.rhs().exponent().ok_or(CountError::ZeroB)? as u64;
    let (w, q, eps) = common_witness(eq)?;
    let s = eq.arity();
    let classes = delta_classes(eq);
    let nu: i128 = classes
        .iter()
        .filter(|&&(d, c)| lb % d == c)
        .map(|&(d, _)| 1 - d as i128)
        .product();
    let sum = folded_sum(&classes, (q as i64 - eps) as u64);
    let sign = if eps == -1 && (s + 1) % 2 == 1 { -1 } else { 1 };
    let inner = -(sign as i128) * (q as i128 * nu - sum);
    let value = assemble(BigInt::from(eq.main_term()), q, s, BigInt::from(inner));
    Ok(CountResult {
        value: to_count(value),
        method: Method::NonzeroTheorem,
        witness: Some(w),
    })
}

/// Two-variable formulas with `l = gcd(d_1, d_2)`.
pub fn count_s2(eq: &DiagonalEquation) -> Result<CountResult, CountError> {
    if eq.arity() != 2 {
        return Err(CountError::ArityNotTwo(eq.arity()));
    }
    let (w, q, eps) = common_witness(eq)?;
    let field = eq.field();
    let big_q = field.size() as i128;
    let (a, d) = (eq.coefficients(), eq.exponents());
    let l = arith::gcd(d[0], d[1]);
    let same = |x: FieldElement, y: FieldElement, m: u64| log_of(x) % m == log_of(y) % m;
    let pw = |base: u64, on: bool| if on { 1 - base as i128 } else { 1 };
    let tail = pw(l, same(a[0], a[1], l));
    let value = if eq.rhs().is_zero() {
        big_q - (big_q - 1) * tail
    } else {
        let b = eq.rhs();
        let (q, eps) = (q as i128, eps as i128);
        big_q - eps * q * pw(d[0], same(a[0], b, d[0])) * pw(d[1], same(a[1], b, d[1])) - eps * (q - eps) * tail
    };
    Ok(CountResult {
        value: to_count(BigInt::from(value)),
        method: Method::S2Proposition,
        witness: Some(w),
    })
}

fn agree(first: &CountResult, second: &CountResult) -> Result<(), CountError> {
    if first.value == second.value {
        Ok(())
    } else {
        Err(CountError::Inconsistent {
            first: first.method,
            first_value: first.value.clone().into(),
            second: second.method,
            second_value: second.value.clone().into(),
        })
    }
}

/// The closed forms that apply to `eq`, most specialized first.
pub fn applicable_methods(eq: &DiagonalEquation) -> Vec<Method> {
    let Ok(w) = exponent_witness(eq.field(), eq.exponents()) else {
        return vec![];
    };
    if !w.all_present() {
        return vec![];
    }
    let b0 = eq.rhs().is_zero();
    let mut out = Vec::new();
    if w.common.is_some() {
        if eq.arity() == 2 {
            out.push(Method::S2Proposition);
        }
        out.push(if b0 { Method::CommonCorollary } else { Method::NonzeroTheorem });
    }
    if b0 {
        out.push(Method::MixedTheorem);
    }
    out
}

pub fn count_with(eq: &DiagonalEquation, method: Method) -> Result<CountResult, CountError> {
    match method {
        Method::MixedTheorem => count_b0_mixed(eq),
        Method::CommonCorollary => count_b0_common(eq),
        Method::NonzeroTheorem => count_bnz(eq),
        Method::S2Proposition => count_s2(eq),
        Method::Oracle => Ok(CountResult {
            value: oracle::brute_count(eq)?,
            method: Method::Oracle,
            witness: None,
        }),
    }
}

/// Evaluates every applicable closed form, checks they agree, and returns the
/// most specialized one; falls back to the oracle when none applies.
pub fn count_auto(eq: &DiagonalEquation) -> Result<CountResult, CountError> {
    let methods = applicable_methods(eq);
    let Some((&best, rest)) = methods.split_first() else {
        let mut res = count_with(eq, Method::Oracle)?;
        res.witness = exponent_witness(eq.field(), eq.exponents()).ok();
        return Ok(res);
    };
    let result = count_with(eq, best)?;
    for &m in rest {
        agree(&result, &count_with(eq, m)?)?;
    }
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IMethod {
    Enumerate,
    LcmFormula,
    InclusionExclusion,
}

/// `I(d_1, ..., d_s)`: the number of `(y_1, ..., y_s)` with `0 < y_i < d_i`
/// and `y_1/d_1 + ... + y_s/d_s` an integer.
pub fn i_value(d: &[u64], method: IMethod) -> Result<BigInt, CountError> {
    if d.is_empty() {
        return Err(CountError::EmptyEquation);
    }
    if d.iter().any(|&x| x < 2) {
        return Err(CountError::ExponentTooSmall);
    }
    match method {
        IMethod::Enumerate => i_enumerate(d).map(BigInt::from),
        IMethod::LcmFormula => Ok(i_lcm(d)),
        IMethod::InclusionExclusion => Ok(i_incl_excl(d)),
    }
}

/// Tallies the tuples one coordinate at a time, keyed by the partial sum of
/// `y_i D / d_i` mod `D = lcm(d_i)`.
fn i_enumerate(d: &[u64]) -> Result<u128, CountError> {
    let big_d = arith::lcm_all(d);
    let work = d
        .iter()
        .try_fold(0u64, |acc, &x| acc.checked_add(x - 1))
        .and_then(|w| w.checked_mul(big_d))
        .unwrap_or(u64::MAX);
    if work > ENUMERATION_LIMIT {
        return Err(CountError::EnumerationTooLarge(work));
    }
    let m = big_d as usize;
    let mut ways = vec![0u128; m];
    ways[0] = 1;
    for &di in d {
        let step = m / di as usize;
        let mut next = vec![0u128; m];
        for (r, &w) in ways.iter().enumerate().filter(|(_, w)| **w != 0) {
            for y in 1..di as usize {
                next[(r + y * step) % m] += w;
            }
        }
        ways = next;
    }
    Ok(ways[0])
}

/// `(-1)^s / D * sum_{m=1}^{D} prod_{d_i | m} (1 - d_i)` with `D = lcm(d_i)`.
fn i_lcm(d: &[u64]) -> BigInt {
    let big_d = arith::lcm_all(d);
    i_period_sum(d, big_d)
}

fn i_period_sum(d: &[u64], period: u64) -> BigInt {
    let mut total = BigInt::zero();
    for m in 1..=period {
        let mut term = BigInt::one();
        for &di in d {
            if m % di == 0 {
                term *= 1 - di as i64;
            }
        }
        total += term;
    }
    let (quot, rem) = total.div_rem(&BigInt::from(period));
    assert!(rem.is_zero(), "period sum not divisible by its length");
    quot * arith::sign_pow(d.len() as u64)
}

/// `I` through a full period `Q - 1` of a field instead of `lcm(d_i)`; every
/// `d_i` must divide `period`.
pub fn i_value_over_period(d: &[u64], period: u64) -> BigInt {
    assert!(d.iter().all(|&x| period % x == 0));
    i_period_sum(d, period)
}

/// `(-1)^s + (-1)^s sum_{r=1}^{s} (-1)^r sum_{i_1<...<i_r} d_{i_1}...d_{i_r} / lcm(d_{i_1}, ..., d_{i_r})`.
fn i_incl_excl(d: &[u64]) -> BigInt {
    let s = d.len();
    let mut total = BigInt::one();
    for mask in 1u32..(1 << s) {
        let chosen: Vec<u64> = (0..s).filter(|&i| mask >> i & 1 == 1).map(|i| d[i]).collect();
        let prod: BigInt = chosen.iter().map(|&x| BigInt::from(x)).product();
        let term = prod / BigInt::from(arith::lcm_all(&chosen));
        if chosen.len() % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    total * arith::sign_pow(s as u64)
}

/// Criterion for `I(d_1, ..., d_s) = 0` when `s > 2`.
pub fn i_is_zero_predicate(d: &[u64]) -> Result<bool, CountError> {
    let s = d.len();
    if s <= 2 {
        return Err(CountError::ArityTooSmall(s));
    }
    let coprime_to_rest = (0..s).any(|i| {
        let rest = (0..s)
            .filter(|&j| j != i)
            .fold(1u128, |acc, j| acc * d[j] as u128);
        (d[i] as u128).gcd(&rest) == 1
    });
    if coprime_to_rest {
        return Ok(true);
    }
    let even: Vec<u64> = d.iter().copied().filter(|x| x % 2 == 0).collect();
    let odd: Vec<u64> = d.iter().copied().filter(|x| x % 2 == 1).collect();
    let halves_coprime = even
        .iter()
        .enumerate()
        .all(|(i, &x)| even[i + 1..].iter().all(|&y| arith::gcd(x / 2, y / 2) == 1));
    let prime_to_odd = even.iter().all(|&x| odd.iter().all(|&y| arith::gcd(x, y) == 1));
    Ok(even.len() % 2 == 1 && halves_coprime && prime_to_odd)
}

/// `rational + radical * sqrt(Q)`, exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactBound {
    pub rational: BigInt,
    pub radical: BigInt,
    pub field_size: BigUint,
}

impl ExactBound {
    pub fn integer(value: BigInt, field_size: u64) -> Self {
        Self {
            rational: value,
            radical: BigInt::zero(),
            field_size: BigUint::from(field_size),
        }
    }

    /// `Q^{k/2} * (rational + radical sqrt(Q))` for `k >= 0`.
    fn times_half_power(mut self, k: u32) -> Self {
        let q = BigInt::from(self.field_size.clone());
        let whole = q.pow(k / 2);
        self.rational *= &whole;
        self.radical *= &whole;
        if k % 2 == 1 {
            // sqrt(Q) (A + B sqrt(Q)) = B Q + A sqrt(Q)
            let a = std::mem::take(&mut self.rational);
            self.rational = &self.radical * &q;
            self.radical = a;
        }
        self
    }

    fn sqrt_q(&self) -> Option<BigInt> {
        let r = self.field_size.sqrt();
        (&r * &r == self.field_size).then(|| r.into())
    }

    /// The value as an integer, when it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.radical.is_zero() {
            return Some(self.rational.clone());
        }
        self.sqrt_q().map(|r| &self.rational + &self.radical * r)
    }

    /// Exact comparison of an integer against the bound.
    pub fn cmp_int(&self, n: &BigInt) -> Ordering {
        let x = n - &self.rational;
        let b = &self.radical;
        let q = BigInt::from(self.field_size.clone());
        match b.sign() {
            Sign::NoSign => x.cmp(&BigInt::zero()),
            Sign::Plus => {
                if !x.is_positive() {
                    Ordering::Less
                } else {
                    (&x * &x).cmp(&(b * b * q))
                }
            }
            Sign::Minus => {
                if !x.is_negative() {
                    Ordering::Greater
                } else {
                    (b * b * q).cmp(&(&x * &x))
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let q = self.field_size.to_f64().unwrap_or(f64::INFINITY);
        self.rational.to_f64().unwrap_or(f64::NAN) + self.radical.to_f64().unwrap_or(f64::NAN) * q.sqrt()
    }
}

impl fmt::Display for ExactBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        write!(f, "{} + {}*sqrt({})", self.rational, self.radical, self.field_size)
    }
}

/// `|N - Q^{s-1}|` as an integer.
pub fn deviation(count: &BigUint, main_term: &BigUint) -> BigInt {
    (BigInt::from(count.clone()) - BigInt::from(main_term.clone())).abs()
}

/// Weil bound on `|N - Q^{s-1}|`: `I (Q - 1) Q^{(s-2)/2}` for `b = 0`, and
/// `Q^{(s-2)/2} (sqrt(Q) prod (d_i - 1) - (sqrt(Q) - 1) I)` for `b != 0`.
pub fn weil_bound(d: &[u64], field_size: u64, b_is_zero: bool) -> Result<ExactBound, CountError> {
    let i = i_value(d, IMethod::InclusionExclusion)?;
    let s = d.len() as u32;
    let core = if b_is_zero {
        ExactBound::integer(&i * (field_size - 1), field_size)
    } else {
        let prod: BigInt = d.iter().map(|&x| BigInt::from(x - 1)).product();
        ExactBound {
            rational: i.clone(),
            radical: prod - &i,
            field_size: BigUint::from(field_size),
        }
    };
    if s >= 2 {
        return Ok(core.times_half_power(s - 2));
    }
    // s = 1 has I = 0, so only the sqrt(Q) part survives the Q^{-1/2} factor
    assert!(core.rational.is_zero());
    Ok(ExactBound::integer(core.radical, field_size))
}

/// Whether `|N - Q^{s-1}|` equals the bound.
pub fn attains(count: &BigUint, main_term: &BigUint, bound: &ExactBound) -> bool {
    bound.cmp_int(&deviation(count, main_term)) == Ordering::Equal
}

/// Whether `|N - Q^{s-1}|` stays within the bound.
pub fn within(count: &BigUint, main_term: &BigUint, bound: &ExactBound) -> bool {
    bound.cmp_int(&deviation(count, main_term)) != Ordering::Greater
}

/// `q^{s-2} |sum_{m=1}^{Q-1} prod_{d_i | m} (1 - d_i)|`.
pub fn mixed_bound_rhs(eq: &DiagonalEquation) -> Result<BigInt, CountError> {
    let (_, _, q) = square_shape(eq.field())?;
    let w = exponent_witness(eq.field(), eq.exponents())?;
    if let Some(index) = w.r.iter().position(Option::is_none) {
        return Err(CountError::WitnessMissing {
            index,
            d: eq.exponents()[index],
        });
    }
    let classes: Vec<(u64, u64)> = eq.exponents().iter().map(|&d| (d, 0)).collect();
    let sum = folded_sum(&classes, eq.field().group_order() as u64).abs();
    Ok(assemble(BigInt::zero(), q, eq.arity(), BigInt::from(sum)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::build_field;

    fn eq<'f>(f: &'f FieldCtx, a: &[i64], d: &[u64], b: Option<i64>) -> DiagonalEquation<'f> {
        let a = a.iter().map(|&k| f.alpha_pow(k)).collect();
        let b = b.map_or(f.zero(), |k| f.alpha_pow(k));
        DiagonalEquation::new(f, a, d.to_vec(), b).unwrap()
    }

    fn val(r: Result<CountResult, CountError>) -> u64 {
        r.unwrap().value.to_u64().unwrap()
    }

    #[test]
    fn construction_normalizes_exponents() {
        let f9 = build_field(3, 2).unwrap();
        let e = eq(&f9, &[0, 0], &[12, 4], None);
        assert_eq!(e.exponents(), &[4, 4]);
        let err = DiagonalEquation::new(&f9, vec![f9.one(), f9.one()], vec![3, 4], f9.zero()).unwrap_err();
        assert_eq!(
            err,
            CountError::DegenerateExponent {
                index: 0,
                count: BigUint::from(9u32)
            }
        );
        assert_eq!(
            DiagonalEquation::new(&f9, vec![f9.zero()], vec![4], f9.zero()).unwrap_err(),
            CountError::ZeroCoefficient(0)
        );
    }

    #[test]
    fn b0_examples() {
        let f9 = build_field(3, 2).unwrap();
        for (a, d, n) in [
            (vec![0, 0], vec![4, 4], 33),
            (vec![0, 0, 0], vec![2, 2, 2], 81),
            (vec![0, 0, 0], vec![4, 4, 4], 225),
            (vec![0, 1], vec![4, 4], 1),
        ] {
            let e = eq(&f9, &a, &d, None);
            assert_eq!(val(count_b0_mixed(&e)), n);
            assert_eq!(val(count_b0_common(&e)), n);
        }
    }

    #[test]
    fn bnz_examples() {
        let f9 = build_field(3, 2).unwrap();
        assert_eq!(val(count_bnz(&eq(&f9, &[0, 0], &[4, 4], Some(0)))), 24);
        assert_eq!(val(count_bnz(&eq(&f9, &[0, 0, 0], &[2, 2, 2], Some(0)))), 90);
        assert_eq!(val(count_bnz(&eq(&f9, &[0, 0], &[2, 4], Some(0)))), 14);
        assert_eq!(count_bnz(&eq(&f9, &[0, 0], &[4, 4], None)).unwrap_err(), CountError::ZeroB);
    }

    #[test]
    fn s2_examples() {
        let f9 = build_field(3, 2).unwrap();
        assert_eq!(val(count_s2(&eq(&f9, &[0, 0], &[4, 4], None))), 33);
        assert_eq!(val(count_s2(&eq(&f9, &[0, 0], &[4, 4], Some(0)))), 24);
        assert_eq!(val(count_s2(&eq(&f9, &[0, 1], &[4, 4], None))), 1);
        assert_eq!(
            count_s2(&eq(&f9, &[0, 0, 0], &[4, 4, 4], None)).unwrap_err(),
            CountError::ArityNotTwo(3)
        );
        let f81 = build_field(3, 4).unwrap();
        assert_eq!(val(count_s2(&eq(&f81, &[0, 0], &[4, 4], Some(0)))), 24);
        assert_eq!(val(count_s2(&eq(&f81, &[0, 0], &[4, 4], None))), 321);
        assert_eq!(val(count_s2(&eq(&f81, &[0, 0], &[2, 2], None))), 161);
        assert_eq!(val(count_s2(&eq(&f81, &[0, 0], &[2, 2], Some(0)))), 80);
    }

    #[test]
    fn dispatch() {
        let f9 = build_field(3, 2).unwrap();
        assert_eq!(count_auto(&eq(&f9, &[0, 0], &[4, 4], Some(0))).unwrap().method, Method::S2Proposition);
        let f81 = build_field(3, 4).unwrap();
        let mixed = eq(&f81, &[0, 0, 0], &[4, 5, 4], None);
        assert_eq!(count_auto(&mixed).unwrap().method, Method::MixedTheorem);
        assert_eq!(
            count_auto(&mixed).unwrap().value,
            oracle::brute_count(&mixed).unwrap()
        );
        let f7 = build_field(7, 1).unwrap();
        let e = eq(&f7, &[0, 0], &[3, 3], Some(0));
        let r = count_auto(&e).unwrap();
        assert_eq!(r.method, Method::Oracle);
        assert_eq!(r.value, BigUint::from(6u32));
    }

    #[test]
    fn missing_witness_is_reported() {
        let f81 = build_field(3, 4).unwrap();
        let e = eq(&f81, &[0, 0], &[4, 8], None);
        assert_eq!(
            count_b0_mixed(&e).unwrap_err(),
            CountError::WitnessMissing { index: 1, d: 8 }
        );
        let e = eq(&f81, &[0, 0], &[4, 5], Some(0));
        assert_eq!(count_bnz(&e).unwrap_err(), CountError::NoCommonWitness);
        assert_eq!(find_witness(4, 3, 2), Some(1));
        assert_eq!(find_witness(5, 3, 2), Some(2));
        assert_eq!(find_witness(5, 7, 1), None);
    }

    #[test]
    fn i_value_examples() {
        for m in [IMethod::Enumerate, IMethod::LcmFormula, IMethod::InclusionExclusion] {
            assert_eq!(i_value(&[4, 4], m).unwrap(), BigInt::from(3));
            assert_eq!(i_value(&[3, 3, 3], m).unwrap(), BigInt::from(2));
            assert_eq!(i_value(&[2, 3], m).unwrap(), BigInt::from(0));
            assert_eq!(i_value(&[5], m).unwrap(), BigInt::from(0));
        }
        assert_eq!(i_value(&[1, 3], IMethod::Enumerate), Err(CountError::ExponentTooSmall));
        assert_eq!(i_value_over_period(&[4, 4], 8), BigInt::from(3));
        assert!(matches!(
            i_value(&[10_007, 10_009], IMethod::Enumerate),
            Err(CountError::EnumerationTooLarge(_))
        ));
    }

    #[test]
    fn tally_matches_tuple_walk() {
        let walk = |d: &[u64]| {
            let mut hits = 0u128;
            let mut ys = vec![1u64; d.len()];
            loop {
                let big_d = arith::lcm_all(d);
                let total: u64 = ys.iter().zip(d).map(|(y, di)| y * (big_d / di)).sum();
                hits += (total % big_d == 0) as u128;
                let mut i = 0;
                while i < d.len() {
                    ys[i] += 1;
                    if ys[i] < d[i] {
                        break;
                    }
                    ys[i] = 1;
                    i += 1;
                }
                if i == d.len() {
                    return hits;
                }
            }
        };
        for d in [vec![2, 2], vec![3, 6, 4], vec![6, 10, 15], vec![4, 4, 4, 4], vec![2, 3, 5, 7]] {
            assert_eq!(i_enumerate(&d).unwrap(), walk(&d), "{d:?}");
        }
    }

    #[test]
    fn sun_wan_examples() {
        assert_eq!(i_is_zero_predicate(&[2, 3, 5]), Ok(true));
        assert_eq!(i_is_zero_predicate(&[3, 3, 3]), Ok(false));
        let i = i_value(&[2, 6, 9], IMethod::Enumerate).unwrap();
        assert_eq!(i_is_zero_predicate(&[2, 6, 9]), Ok(i.is_zero()));
        assert_eq!(i_is_zero_predicate(&[2, 2]), Err(CountError::ArityTooSmall(2)));
    }

    #[test]
    fn weil_examples() {
        let b = weil_bound(&[4, 4], 9, true).unwrap();
        assert_eq!(b.as_integer(), Some(BigInt::from(24)));
        assert!(attains(&BigUint::from(33u32), &BigUint::from(9u32), &b));
        let b = weil_bound(&[4, 4], 9, false).unwrap();
        assert_eq!(b.as_integer(), Some(BigInt::from(21)));
        assert!(!attains(&BigUint::from(24u32), &BigUint::from(9u32), &b));
        assert!(within(&BigUint::from(24u32), &BigUint::from(9u32), &b));
        // s = 3 over a non-square field keeps sqrt(Q) symbolic
        let b = weil_bound(&[3, 3, 3], 7, true).unwrap();
        assert_eq!(b.as_integer(), None);
        assert_eq!(b.radical, BigInt::from(12));
        assert_eq!(b.cmp_int(&BigInt::from(31)), Ordering::Less);
        assert_eq!(b.cmp_int(&BigInt::from(32)), Ordering::Greater);
    }

    #[test]
    fn mixed_rhs_example() {
        let f9 = build_field(3, 2).unwrap();
        assert_eq!(mixed_bound_rhs(&eq(&f9, &[0, 0], &[4, 4], None)), Ok(BigInt::from(24)));
    }
}
