//! Brute-force ground truth for every closed-form count.
//!
//! Three independent routes to `#{x : a_1 x_1^d_1 + ... + a_s x_s^d_s = b}`:
//! a naive loop over `F^s`, additive convolution of value distributions
//! indexed by element encodings, and the same convolution carried out in the
//! Fourier domain of the additive group `(Z/p)^n` modulo word-sized primes
//! `l = 1 (mod p)`, recombined by CRT.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;
use crate::counting::DiagonalEquation;
use crate::gf::{FieldCtx, FieldElement, FieldId};

/// Largest field the oracle accepts.
pub const ORACLE_FIELD_LIMIT: u64 = 1 << 16;
pub const MAX_ARITY: usize = 8;
/// Largest `Q^s` for the naive loop.
pub const NAIVE_LIMIT: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("field of size {0} exceeds the oracle limit")]
    FieldTooLarge(u64),
    #[error("arity {0} exceeds the oracle limit")]
    ArityTooLarge(usize),
    #[error("naive enumeration of {0} points exceeds the limit")]
    EnumerationTooLarge(u128),
    #[error("coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("exponents must be positive")]
    ZeroExponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OraclePath {
    Naive,
    Convolution,
    Transform,
}

/// `counts[v] = #{x in F : a x^d = v}`, indexed by encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueDistribution {
    pub field: FieldId,
    pub counts: Vec<u64>,
}

pub fn value_distribution(field: &FieldCtx, a: FieldElement, d: u64) -> ValueDistribution {
    let mut counts = vec![0u64; field.size() as usize];
    counts[0] = 1;
    if let Some(la) = a.exponent() {
        let m = field.group_order() as u64;
        for k in 0..m {
            let e = field.exp_encoding(((la as u64 + d * k) % m) as u32);
            counts[e as usize] += 1;
        }
    } else {
        counts[0] += field.group_order() as u64;
    }
    ValueDistribution {
        field: field.id(),
        counts,
    }
}

fn check_shape(field: &FieldCtx, s: usize) -> Result<(), OracleError> {
    let q = field.size() as u64;
    if q > ORACLE_FIELD_LIMIT {
        return Err(OracleError::FieldTooLarge(q));
    }
    if s > MAX_ARITY || (q as f64).powi(s as i32) >= 2f64.powi(127) {
        return Err(OracleError::ArityTooLarge(s));
    }
    Ok(())
}

/// Count with the default route: the Fourier route when the additive group
/// has more than one digit and is large, else direct convolution.
pub fn brute_count(eq: &DiagonalEquation) -> Result<BigUint, OracleError> {
    let field = eq.field();
    let path = if field.degree() > 1 && field.size() > 256 {
        OraclePath::Transform
    } else {
        OraclePath::Convolution
    };
    brute_count_with(eq, path)
}

pub fn brute_count_with(eq: &DiagonalEquation, path: OraclePath) -> Result<BigUint, OracleError> {
    count_terms(eq.field(), eq.coefficients(), eq.exponents(), eq.rhs(), path)
}

/// Oracle count for raw terms; exponents are taken as given.
pub fn count_terms(
    field: &FieldCtx,
    a: &[FieldElement],
    d: &[u64],
    b: FieldElement,
    path: OraclePath,
) -> Result<BigUint, OracleError> {
    assert_eq!(a.len(), d.len());
    check_shape(field, a.len())?;
    if a.iter().any(|x| x.is_zero()) {
        return Err(OracleError::ZeroCoefficient);
    }
    if d.contains(&0) {
        return Err(OracleError::ZeroExponent);
    }
    if a.is_empty() {
        return Ok(BigUint::from(b.is_zero() as u8));
    }
    match path {
        OraclePath::Naive => naive(field, a, d, b),
        OraclePath::Convolution => Ok(BigUint::from(convolve(field, a, d, b))),
        OraclePath::Transform => {
            let oracle = TransformOracle::new(field, a.len());
            Ok(oracle.count(a, d, &[b]).remove(0))
        }
    }
}

fn naive(field: &FieldCtx, a: &[FieldElement], d: &[u64], b: FieldElement) -> Result<BigUint, OracleError> {
    let q = field.size();
    let s = a.len();
    let work = (q as u128).pow(s as u32);
    if work > NAIVE_LIMIT as u128 {
        return Err(OracleError::EnumerationTooLarge(work));
    }
    // term tables: encoding of a_i x^{d_i} for every x
    let terms: Vec<Vec<u32>> = a
        .iter()
        .zip(d)
        .map(|(&ai, &di)| {
            field
                .elements()
                .map(|x| field.encoding(field.mul(ai, field.pow(x, di))))
                .collect()
        })
        .collect();
    let target = field.encoding(b);
    let mut xs = vec![0u32; s];
    let mut hits = 0u64;
    loop {
        let mut sum = 0;
        for (t, &x) in terms.iter().zip(&xs) {
            sum = field.enc_add(sum, t[x as usize]);
        }
        hits += (sum == target) as u64;
        let mut i = 0;
        while i < s {
            xs[i] += 1;
            if xs[i] < q {
                break;
            }
            xs[i] = 0;
            i += 1;
        }
        if i == s {
            return Ok(BigUint::from(hits));
        }
    }
}

fn convolve(field: &FieldCtx, a: &[FieldElement], d: &[u64], b: FieldElement) -> u128 {
    let q = field.size() as usize;
    let dists: Vec<Vec<u64>> = a
        .iter()
        .zip(d)
        .map(|(&ai, &di)| value_distribution(field, ai, di).counts)
        .collect();
    let mut acc: Vec<u128> = dists[0].iter().map(|&c| c as u128).collect();
    let s = dists.len();
    let middle: &[Vec<u64>] = if s > 2 { &dists[1..s - 1] } else { &[] };
    for dist in middle {
        let mut next = vec![0u128; q];
        for (u, &cu) in acc.iter().enumerate() {
            if cu == 0 {
                continue;
            }
            for (x, &cx) in dist.iter().enumerate() {
                if cx != 0 {
                    next[field.enc_add(u as u32, x as u32) as usize] += cu * cx as u128;
                }
            }
        }
        acc = next;
    }
    let target = field.encoding(b);
    if s == 1 {
        return acc[target as usize];
    }
    dists[s - 1]
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c != 0)
        .map(|(x, &cx)| acc[field.enc_sub(target, x as u32) as usize] * cx as u128)
        .sum()
}

/// One CRT prime `l = 1 (mod p)` with a primitive `p`-th root of unity.
#[derive(Clone, Debug)]
struct Lane {
    modulus: u64,
    roots: Vec<u64>,
    q_inv: u64,
}

impl Lane {
    fn mul(&self, a: u64, b: u64) -> u64 {
        arith::mul_mod(a, b, self.modulus)
    }
}

fn lanes(p: u64, q: u64, count: usize) -> Vec<Lane> {
    let mut out = Vec::with_capacity(count);
    let mut k = ((1u64 << 62) - 1) / (2 * p);
    while out.len() < count {
        let l = 2 * p * k + 1;
        k -= 1;
        if !arith::is_prime(l) {
            continue;
        }
        let omega = (2..)
            .map(|g| arith::pow_mod(g, (l - 1) / p, l))
            .find(|&w| w != 1)
            .expect("a non-residue exists");
        let roots = (0..p).map(|j| arith::pow_mod(omega, j, l)).collect();
        let q_inv = arith::pow_mod(q % l, l - 2, l);
        out.push(Lane {
            modulus: l,
            roots,
            q_inv,
        });
    }
    out
}

/// Fourier-domain oracle for one field. Transformed distributions are cached
/// by `(d, log(a) mod d)`, which determines the distribution of `a x^d`.
pub struct TransformOracle<'f> {
    field: &'f FieldCtx,
    lanes: Vec<Lane>,
    cache: Mutex<HashMap<(u64, u64), Arc<Vec<Vec<u64>>>>>,
    pairings: Mutex<HashMap<u32, Arc<Vec<u32>>>>,
}

impl<'f> TransformOracle<'f> {
    /// Prepares enough CRT lanes for counts of up to `max_arity` terms.
    pub fn new(field: &'f FieldCtx, max_arity: usize) -> Self {
        let q = field.size() as u64;
        let bits = (q as f64).log2() * max_arity.max(1) as f64 + 1.0;
        let count = (bits / 61.0).ceil().max(1.0) as usize;
        Self {
            field,
            lanes: lanes(field.characteristic() as u64, q, count),
            cache: Mutex::new(HashMap::new()),
            pairings: Mutex::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> &'f FieldCtx {
        self.field
    }

    fn transformed(&self, a: FieldElement, d: u64) -> Arc<Vec<Vec<u64>>> {
        let m = self.field.group_order() as u64;
        let g = arith::gcd(d, m);
        let key = (g, a.exponent().expect("nonzero coefficient") as u64 % g);
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let dist = value_distribution(self.field, a, d).counts;
        let per_lane: Vec<Vec<u64>> = self.lanes.iter().map(|lane| self.dft(&dist, lane)).collect();
        let value = Arc::new(per_lane);
        self.cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(value)
            .clone()
    }

    /// `T[c] = sum_u A[u] omega^{<c, u>}` over `(Z/p)^n`, one digit at a time.
    fn dft(&self, data: &[u64], lane: &Lane) -> Vec<u64> {
        let p = self.field.characteristic() as usize;
        let q = data.len();
        let mut v: Vec<u64> = data.iter().map(|&x| x % lane.modulus).collect();
        let mut buf = vec![0u64; p];
        let mut place = 1;
        while place < q {
            for base in 0..q {
                if (base / place) % p != 0 {
                    continue;
                }
                for c in 0..p {
                    let mut acc = 0u128;
                    for j in 0..p {
                        let w = lane.roots[(c * j) % p];
                        acc += v[base + j * place] as u128 * w as u128;
                    }
                    buf[c] = (acc % lane.modulus as u128) as u64;
                }
                for c in 0..p {
                    v[base + c * place] = buf[c];
                }
            }
            place *= p;
        }
        v
    }

    /// `<c, b>` mod `p` for every encoding `c`.
    fn pairing(&self, b: FieldElement) -> Arc<Vec<u32>> {
        let enc = self.field.encoding(b);
        if let Some(hit) = self.pairings.lock().unwrap().get(&enc) {
            return hit.clone();
        }
        let p = self.field.characteristic();
        let digits = self.field.enc_digits(enc);
        let table: Vec<u32> = (0..self.field.size())
            .map(|c| {
                self.field
                    .enc_digits(c)
                    .iter()
                    .zip(&digits)
                    .map(|(x, y)| x * y)
                    .sum::<u32>()
                    % p
            })
            .collect();
        self.pairings.lock().unwrap().entry(enc).or_insert(Arc::new(table)).clone()
    }

    /// Counts of `sum a_i x_i^{d_i} = b` for each requested `b`.
    pub fn count(&self, a: &[FieldElement], d: &[u64], rhs: &[FieldElement]) -> Vec<BigUint> {
        let pairings: Vec<Arc<Vec<u32>>> = rhs.iter().map(|&b| self.pairing(b)).collect();
        self.count_with_pairings(a, d, &pairings)
    }

    fn count_with_pairings(&self, a: &[FieldElement], d: &[u64], pairings: &[Arc<Vec<u32>>]) -> Vec<BigUint> {
        let terms: Vec<Arc<Vec<Vec<u64>>>> = a.iter().zip(d).map(|(&ai, &di)| self.transformed(ai, di)).collect();
        let q = self.field.size() as usize;
        let mut residues = vec![Vec::with_capacity(self.lanes.len()); pairings.len()];
        for (li, lane) in self.lanes.iter().enumerate() {
            let mut prod = terms[0][li].clone();
            for t in &terms[1..] {
                for (x, &y) in prod.iter_mut().zip(&t[li]) {
                    *x = lane.mul(*x, y);
                }
            }
            let p = lane.roots.len();
            for (out, pair) in residues.iter_mut().zip(pairings) {
                // inverse transform at b: Q^{-1} sum_c prod[c] omega^{-<c,b>}
                let mut by_phase = vec![0u128; p];
                for c in 0..q {
                    by_phase[pair[c] as usize] += prod[c] as u128;
                    if by_phase[pair[c] as usize] >= 1 << 126 {
                        by_phase[pair[c] as usize] %= lane.modulus as u128;
                    }
                }
                let mut total = 0u64;
                for (phase, &sum) in by_phase.iter().enumerate() {
                    let sum = (sum % lane.modulus as u128) as u64;
                    let w = lane.roots[(p - phase) % p];
                    total = (total + lane.mul(sum, w)) % lane.modulus;
                }
                out.push(lane.mul(total, lane.q_inv));
            }
        }
        residues.iter().map(|r| self.crt(r)).collect()
    }

    fn crt(&self, residues: &[u64]) -> BigUint {
        let mut x = BigUint::from(residues[0]);
        let mut m = BigUint::from(self.lanes[0].modulus);
        for (lane, &r) in self.lanes.iter().zip(residues).skip(1) {
            let l = lane.modulus;
            let xm = (&x % l).to_u64().unwrap();
            let mm = (&m % l).to_u64().unwrap();
            let inv = arith::pow_mod(mm, l - 2, l);
            let k = arith::mul_mod((r + l - xm) % l, inv, l);
            x += &m * k;
            m *= l;
        }
        x
    }
}

/// Points of `a_1 x_1^d + ... + a_s x_s^d = 0` in `P^{s-1}`, split by the
/// last nonzero coordinate (normalized to `1`).
pub fn brute_projective_count(field: &FieldCtx, a: &[FieldElement], d: u64) -> Result<BigUint, OracleError> {
    check_shape(field, a.len())?;
    if a.iter().any(|x| x.is_zero()) {
        return Err(OracleError::ZeroCoefficient);
    }
    let mut total = BigUint::zero();
    for k in 1..a.len() {
        let rhs = field.neg(a[k]);
        let exps = vec![d; k];
        total += count_terms(field, &a[..k], &exps, rhs, OraclePath::Convolution)?;
    }
    Ok(total)
}

/// Literal enumeration of normalized projective representatives.
pub fn brute_projective_enumerate(field: &FieldCtx, a: &[FieldElement], d: u64) -> Result<BigUint, OracleError> {
    let s = a.len();
    let q = field.size();
    let work = (q as u128).pow(s.saturating_sub(1) as u32) * s as u128;
    if work > NAIVE_LIMIT as u128 {
        return Err(OracleError::EnumerationTooLarge(work));
    }
    let terms: Vec<Vec<u32>> = a
        .iter()
        .map(|&ai| field.elements().map(|x| field.encoding(field.mul(ai, field.pow(x, d)))).collect())
        .collect();
    let one = field.encoding(field.one()) as usize;
    let mut total = 0u64;
    for k in 0..s {
        // x_k = 1, x_j = 0 for j > k, x_0..x_{k-1} free
        let mut xs = vec![0u32; k];
        loop {
            let mut sum = terms[k][one];
            for (t, &x) in terms.iter().zip(&xs) {
                sum = field.enc_add(sum, t[x as usize]);
            }
            total += (sum == 0) as u64;
            let mut i = 0;
            while i < k {
                xs[i] += 1;
                if xs[i] < q {
                    break;
                }
                xs[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    Ok(BigUint::from(total))
}

/// Points at `z = 0` of `a x^n + b y^m = c z^{max(n, m)}` (homogenized when
/// `n != m`).
pub fn brute_points_at_infinity(
    field: &FieldCtx,
    a: FieldElement,
    b: FieldElement,
    n: u64,
    m: u64,
) -> Result<BigUint, OracleError> {
    if a.is_zero() || b.is_zero() {
        return Err(OracleError::ZeroCoefficient);
    }
    if n == 0 || m == 0 {
        return Err(OracleError::ZeroExponent);
    }
    // z = 0 keeps only the top-degree terms
    let count = if n == m {
        // [x : 1 : 0] with a x^n = -b; [1 : 0 : 0] would need a = 0
        let target = field.neg(b);
        field.elements().filter(|&x| field.mul(a, field.pow(x, n)) == target).count()
    } else {
        // only [0 : 1 : 0] or [1 : 0 : 0] survives
        1
    };
    Ok(BigUint::from(count))
}

/// Raw point counts of `a x^n + b y^m = c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvePoints {
    pub affine: BigUint,
    /// Points at `z = 0` of the closure homogenized with degree `max(n, m)`.
    pub infinity: BigUint,
    /// `affine + infinity`.
    pub projective: BigUint,
    /// `affine + 1`, the single added point the closed form assumes for
    /// `n != m`. Equal to `projective` whenever the degrees differ.
    pub one_point_closure: BigUint,
}

pub fn brute_curve_points(
    field: &FieldCtx,
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    n: u64,
    m: u64,
) -> Result<CurvePoints, OracleError> {
    check_shape(field, 2)?;
    if a.is_zero() || b.is_zero() {
        return Err(OracleError::ZeroCoefficient);
    }
    if n == 0 || m == 0 {
        return Err(OracleError::ZeroExponent);
    }
    let affine = count_terms(field, &[a, b], &[n, m], c, OraclePath::Convolution)?;
    let infinity = brute_points_at_infinity(field, a, b, n, m)?;
    Ok(CurvePoints {
        projective: &affine + &infinity,
        one_point_closure: &affine + BigUint::one(),
        affine,
        infinity,
    })
}
