//! Exact arithmetic in the cyclotomic rings `Z[zeta_D]`.
//!
//! A [`CycInt`] at level `D` stores the unique representative of degree below
//! `phi(D)` modulo the cyclotomic polynomial `Phi_D`. Values at different
//! levels are lifted to the least common multiple before any binary operation,
//! so equality is always exact coefficient comparison.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;

/// Largest supported level.
pub const MAX_LEVEL: u32 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycError {
    #[error("cyclotomic level {0} is outside 1..={MAX_LEVEL}")]
    LevelTooLarge(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Sub,
    Mul,
    Conj,
}

fn check_level(d: u64) -> Result<u32, CycError> {
    if d == 0 || d > MAX_LEVEL as u64 {
        Err(CycError::LevelTooLarge(d))
    } else {
        Ok(d as u32)
    }
}

/// Coefficients of `Phi_D`, lowest degree first.
pub fn cyclotomic_polynomial(d: u64) -> Result<Vec<BigInt>, CycError> {
    let d = check_level(d)?;
    Ok(phi_poly(d).iter().map(|&c| BigInt::from(c)).collect())
}

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn phi_poly(d: u32) -> Arc<Vec<i64>> {
    if let Some(hit) = phi_cache().lock().unwrap().get(&d) {
        return hit.clone();
    }
    let computed = Arc::new(compute_phi(d));
    phi_cache()
        .lock()
        .unwrap()
        .entry(d)
        .or_insert(computed)
        .clone()
}

/// `Phi_D = prod_{e | D} (x^e - 1)^{mu(D/e)}`: multiply by the binomials with
/// `mu = +1`, then divide exactly by those with `mu = -1`.
fn compute_phi(d: u32) -> Vec<i64> {
    let divs = arith::divisors(d as u64);
    let mut poly: Vec<BigInt> = vec![BigInt::one()];
    for &e in &divs {
        if arith::moebius(d as u64 / e) == 1 {
            let e = e as usize;
            let mut next = vec![BigInt::zero(); poly.len() + e];
            for (k, c) in poly.iter().enumerate() {
                next[k + e] += c;
                next[k] -= c;
            }
            poly = next;
        }
    }
    for &e in &divs {
        if arith::moebius(d as u64 / e) == -1 {
            let e = e as usize;
            let deg = poly.len() - 1;
            let mut quot = vec![BigInt::zero(); deg + 1 - e];
            for k in (0..quot.len()).rev() {
                let carry = quot.get(k + e).cloned().unwrap_or_default();
                quot[k] = &poly[k + e] + carry;
            }
            poly = quot;
        }
    }
    poly.iter()
        .map(|c| c.to_i64().expect("cyclotomic coefficient fits in i64"))
        .collect()
}

/// Element of `Z[zeta_level]` in canonical reduced form.
#[derive(Clone, Debug)]
pub struct CycInt {
    level: u32,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(level: u32) -> Self {
        let phi = arith::totient(level as u64) as usize;
        Self {
            level,
            coeffs: vec![BigInt::zero(); phi],
        }
    }

    pub fn from_int(level: u32, n: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(level);
        out.coeffs[0] = n.into();
        out
    }

    pub fn one(level: u32) -> Self {
        Self::from_int(level, 1)
    }

    /// `zeta_D^j` for any integer `j`.
    pub fn root_power(level: u32, j: i64) -> Self {
        let idx = j.rem_euclid(level as i64) as usize;
        let mut counts = vec![0i64; level as usize];
        counts[idx] = 1;
        Self::from_root_counts(level, &counts)
    }

    /// `sum_j counts[j] * zeta_D^j` for a redundant length-`D` vector.
    pub fn from_root_counts(level: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), level as usize);
        let wide: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
        Self::reduce_wide(level, wide).unwrap_or_else(|| {
            Self::reduce_big(level, counts.iter().map(|&c| BigInt::from(c)).collect())
        })
    }

    /// Machine-word reduction; `None` on overflow.
    fn reduce_wide(level: u32, mut wide: Vec<i128>) -> Option<Self> {
        let phi = phi_poly(level);
        let deg = phi.len() - 1;
        for k in (deg..wide.len()).rev() {
            let c = wide[k];
            if c == 0 {
                continue;
            }
            for (i, &f) in phi.iter().enumerate() {
                let idx = k - deg + i;
                wide[idx] = (f as i128).checked_mul(c).and_then(|m| wide[idx].checked_sub(m))?;
            }
        }
        wide.truncate(deg);
        wide.resize(deg, 0);
        Some(Self {
            level,
            coeffs: wide.into_iter().map(BigInt::from).collect(),
        })
    }

    fn reduce_big(level: u32, mut big: Vec<BigInt>) -> Self {
        let phi = phi_poly(level);
        let deg = phi.len() - 1;
        for k in (deg..big.len()).rev() {
            if big[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut big[k]);
            for (i, &f) in phi.iter().enumerate().take(deg) {
                if f != 0 {
                    big[k - deg + i] -= &c * f;
                }
            }
        }
        big.truncate(deg);
        big.resize(deg, BigInt::zero());
        Self { level, coeffs: big }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Coefficients on the basis `1, zeta, ..., zeta^{phi(D)-1}`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Re-expresses `self` at a level divisible by the current one.
    pub fn lift(&self, level: u32) -> Result<Self, CycError> {
        let level = check_level(level as u64)?;
        assert_eq!(level % self.level, 0, "lift target must be a multiple");
        if level == self.level {
            return Ok(self.clone());
        }
        let step = (level / self.level) as usize;
        let mut big = vec![BigInt::zero(); level as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            big[j * step] = c.clone();
        }
        Ok(Self::reduce_big(level, big))
    }

    fn common(&self, other: &Self) -> Result<(Self, Self), CycError> {
        let l = arith::lcm(self.level as u64, other.level as u64);
        let l = check_level(l)?;
        Ok((self.lift(l)?, other.lift(l)?))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycError> {
        let (mut a, b) = self.common(other)?;
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        Ok(a)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CycError> {
        let (mut a, b) = self.common(other)?;
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        Ok(a)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycError> {
        let (a, b) = self.common(other)?;
        let mut prod = vec![BigInt::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        Ok(Self::reduce_big(a.level, prod))
    }

    /// Complex conjugation `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        let d = self.level as usize;
        let mut big = vec![BigInt::zero(); d];
        for (j, c) in self.coeffs.iter().enumerate() {
            big[(d - j) % d] += c;
        }
        Self::reduce_big(self.level, big)
    }

    /// `x * conj(x)`.
    pub fn abs_square(&self) -> Self {
        self.checked_mul(&self.conj())
            .expect("same level cannot overflow")
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.level);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `Some(n)` iff the value is the rational integer `n`.
    pub fn as_rational_integer(&self) -> Option<BigInt> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    /// Image under `zeta_D -> exp(2 pi i / D)`; display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let d = self.level as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (j, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                let angle = std::f64::consts::TAU * j as f64 / d;
                (re + c * angle.cos(), im + c * angle.sin())
            })
    }

    /// Checked binary entry point; `y` is ignored for `Conj`.
    pub fn cyc_arith(op: CycOp, x: &Self, y: &Self) -> Result<Self, CycError> {
        match op {
            CycOp::Add => x.checked_add(y),
            CycOp::Sub => x.checked_sub(y),
            CycOp::Mul => x.checked_mul(y),
            CycOp::Conj => Ok(x.conj()),
        }
    }
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.coeffs == other.coeffs;
        }
        match self.common(other) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => false,
        }
    }
}

impl Eq for CycInt {}

impl<'a> Add<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.checked_add(rhs).expect("cyclotomic level overflow")
    }
}

impl<'a> Sub<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.checked_sub(rhs).expect("cyclotomic level overflow")
    }
}

impl<'a> Mul<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.checked_mul(rhs).expect("cyclotomic level overflow")
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "z{}^{j}", self.level)?,
                _ => write!(f, "{mag}*z{}^{j}", self.level)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
