//! Table-driven arithmetic in `F_{p^n}`.
//!
//! Every nonzero element is stored as a power of a fixed primitive element
//! `alpha`, so multiplication, inversion and power-residue questions reduce to
//! arithmetic on exponents modulo `q - 1`. Addition goes through a Zech
//! logarithm table. Elements also have an integer *encoding*
//! `c_0 + c_1 p + ... + c_{n-1} p^{n-1}` of their polynomial-basis
//! coordinates, which indexes the additive group.
//!
//! Construction is deterministic: the modulus is the first monic irreducible
//! polynomial in ascending encoding order of `(c_0, ..., c_{n-1})`, and `alpha`
//! is the primitive element with the smallest encoding.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

/// Default bound on `p^n` for table construction.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 22;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field {p}^{n} exceeds the table limit of {limit} elements")]
    FieldTooLarge { p: u64, n: u32, limit: u64 },
    #[error("characteristic 2 requires the allow_even option")]
    EvenCharacteristicRejected,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("discrete logarithm of zero")]
    LogOfZero,
    #[error("argument must be nonzero")]
    ZeroInput,
    #[error("{d} does not divide the group order {order}")]
    DNotDividing { d: u64, order: u64 },
}

/// Identifies a field. Construction is deterministic, so `(p, n)` pins the
/// modulus and primitive element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldId {
    pub p: u32,
    pub n: u32,
}

/// Zero or a power of the primitive element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Repr {
    Zero,
    /// `alpha^k`, `0 <= k < q - 1`.
    Power(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FieldId,
    repr: Repr,
}

impl FieldElement {
    pub fn repr(self) -> Repr {
        self.repr
    }

    pub fn field(self) -> FieldId {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.repr == Repr::Zero
    }

    /// The exponent `k` with `self = alpha^k`, if nonzero.
    pub fn exponent(self) -> Option<u32> {
        match self.repr {
            Repr::Zero => None,
            Repr::Power(k) => Some(k),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Power(k) => write!(f, "alpha^{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub table_limit: u64,
    pub allow_even: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            table_limit: DEFAULT_TABLE_LIMIT,
            allow_even: false,
        }
    }
}

/// An immutable finite field with discrete-log and Zech tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    id: FieldId,
    size: u32,
    modulus: Vec<u32>,
    alpha: u32,
    exp_table: Vec<u32>,
    log_table: Vec<u32>,
    zech: Vec<u32>,
    neg_shift: u32,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.id.p)
            .field("n", &self.id.n)
            .field("modulus", &self.modulus)
            .field("alpha", &self.alpha)
            .finish()
    }
}

/// Builds `F_{p^n}` with the default options (odd `p`, `p^n <= 2^22`).
pub fn build_field(p: u64, n: u32) -> Result<FieldCtx, GfError> {
    FieldCtx::build_with(p, n, BuildOptions::default())
}

impl FieldCtx {
    pub fn build_with(p: u64, n: u32, opts: BuildOptions) -> Result<Self, GfError> {
        if !arith::is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if n == 0 {
            return Err(GfError::ZeroDegree);
        }
        if p == 2 && !opts.allow_even {
            return Err(GfError::EvenCharacteristicRejected);
        }
        let too_large = GfError::FieldTooLarge {
            p,
            n,
            limit: opts.table_limit,
        };
        let size = match arith::checked_pow(p, n) {
            Some(s) if s <= opts.table_limit && s <= u32::MAX as u64 / 2 => s as u32,
            _ => return Err(too_large),
        };
        let p32 = p as u32;
        let n_us = n as usize;

        let modulus = (0..size)
            .map(|e| {
                let mut coeffs = digits(e, p32, n_us);
                coeffs.push(1);
                coeffs
            })
            .find(|f| poly::is_irreducible(f, p32))
            .expect("an irreducible polynomial of every degree exists");

        let order = (size - 1) as u64;
        let factors = arith::prime_factors(order);
        let one = poly::one(n_us);
        let alpha = (1..size)
            .find(|&e| {
                let g = digits(e, p32, n_us);
                factors
                    .iter()
                    .all(|&l| poly::pow_mod(&g, order / l, &modulus, p32) != one)
            })
            .expect("the multiplicative group is cyclic");

        let alpha_poly = digits(alpha, p32, n_us);
        let group = size as usize - 1;
        let mut exp_table = Vec::with_capacity(group);
        let mut log_table = vec![NO_LOG; size as usize];
        let mut cur = one;
        for k in 0..group {
            let e = encode(&cur, p32);
            debug_assert_eq!(log_table[e as usize], NO_LOG, "alpha is not primitive");
            exp_table.push(e);
            log_table[e as usize] = k as u32;
            cur = poly::mul_mod(&cur, &alpha_poly, &modulus, p32);
        }

        let zech = exp_table
            .iter()
            .map(|&e| {
                // 1 + alpha^k only changes the constant coordinate.
                let bumped = if e % p32 == p32 - 1 { e - (p32 - 1) } else { e + 1 };
                if bumped == 0 {
                    NO_LOG
                } else {
                    log_table[bumped as usize]
                }
            })
            .collect();

        let neg_shift = if p == 2 { 0 } else { (size - 1) / 2 };
        Ok(Self {
            id: FieldId { p: p32, n },
            size,
            modulus,
            alpha,
            exp_table,
            log_table,
            zech,
            neg_shift,
        })
    }

    pub fn id(&self) -> FieldId {
        self.id
    }

    pub fn characteristic(&self) -> u32 {
        self.id.p
    }

    pub fn degree(&self) -> u32 {
        self.id.n
    }

    /// Number of elements `p^n`.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Order of the multiplicative group, `p^n - 1`.
    pub fn group_order(&self) -> u32 {
        self.size - 1
    }

    /// Modulus coefficients `c_0, ..., c_n` with `c_n = 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Encoding of the primitive element.
    pub fn alpha_encoding(&self) -> u32 {
        self.alpha
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.id,
            repr: Repr::Zero,
        }
    }

    pub fn one(&self) -> FieldElement {
        self.alpha_pow(0)
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha_pow(1)
    }

    /// `alpha^k` for any integer `k`.
    pub fn alpha_pow(&self, k: i64) -> FieldElement {
        let m = self.group_order() as i64;
        FieldElement {
            field: self.id,
            repr: Repr::Power(k.rem_euclid(m) as u32),
        }
    }

    pub fn from_encoding(&self, e: u32) -> FieldElement {
        assert!(e < self.size, "encoding {e} out of range");
        if e == 0 {
            self.zero()
        } else {
            self.alpha_pow(self.log_table[e as usize] as i64)
        }
    }

    pub fn encoding(&self, x: FieldElement) -> u32 {
        self.check(x);
        match x.repr {
            Repr::Zero => 0,
            Repr::Power(k) => self.exp_table[k as usize],
        }
    }

    /// Element of the prime subfield congruent to `v`.
    pub fn from_int(&self, v: i64) -> FieldElement {
        self.from_encoding(v.rem_euclid(self.id.p as i64) as u32)
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size).map(|e| self.from_encoding(e))
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.field == self.id
            && match x.repr {
                Repr::Zero => true,
                Repr::Power(k) => k < self.group_order(),
            }
    }

    fn check(&self, x: FieldElement) {
        assert!(self.contains(x), "element {x:?} does not belong to {:?}", self.id);
    }

    /// Checked arithmetic entry point; `y` is ignored for unary operations.
    pub fn arith(
        &self,
        op: ArithOp,
        x: FieldElement,
        y: FieldElement,
    ) -> Result<FieldElement, GfError> {
        let unary = matches!(op, ArithOp::Neg | ArithOp::Inv);
        if !self.contains(x) || (!unary && !self.contains(y)) {
            return Err(GfError::MixedFields);
        }
        Ok(match op {
            ArithOp::Add => self.add(x, y),
            ArithOp::Sub => self.sub(x, y),
            ArithOp::Mul => self.mul(x, y),
            ArithOp::Neg => self.neg(x),
            ArithOp::Inv => return self.inv(x),
        })
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.check(x);
        self.check(y);
        match (x.repr, y.repr) {
            (Repr::Power(i), Repr::Power(j)) => self.alpha_pow(i as i64 + j as i64),
            _ => self.zero(),
        }
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        self.check(x);
        match x.repr {
            Repr::Zero => x,
            Repr::Power(k) => self.alpha_pow(k as i64 + self.neg_shift as i64),
        }
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.check(x);
        self.check(y);
        match (x.repr, y.repr) {
            (Repr::Zero, _) => y,
            (_, Repr::Zero) => x,
            (Repr::Power(i), Repr::Power(j)) => {
                let m = self.group_order();
                let diff = (j + m - i) % m;
                match self.zech[diff as usize] {
                    NO_LOG => self.zero(),
                    z => self.alpha_pow(i as i64 + z as i64),
                }
            }
        }
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement, GfError> {
        self.check(x);
        match x.repr {
            Repr::Zero => Err(GfError::DivisionByZero),
            Repr::Power(k) => Ok(self.alpha_pow(-(k as i64))),
        }
    }

    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        self.check(x);
        match x.repr {
            Repr::Zero if e == 0 => self.one(),
            Repr::Zero => x,
            Repr::Power(k) => {
                let m = self.group_order() as u64;
                self.alpha_pow(((k as u64 * (e % m)) % m) as i64)
            }
        }
    }

    /// Discrete logarithm base `alpha`.
    pub fn log(&self, x: FieldElement) -> Result<u32, GfError> {
        self.check(x);
        x.exponent().ok_or(GfError::LogOfZero)
    }

    /// Absolute trace to `F_p`, returned as a residue in `[0, p)`.
    pub fn trace_to_prime(&self, x: FieldElement) -> u32 {
        let p = self.id.p as u64;
        let mut acc = self.zero();
        let mut term = x;
        for _ in 0..self.id.n {
            acc = self.add(acc, term);
            term = self.pow(term, p);
        }
        let e = self.encoding(acc);
        assert!(e < self.id.p, "trace left the prime subfield");
        e
    }

    /// Traces of all elements, indexed by encoding. Uses linearity over the
    /// polynomial basis.
    pub fn trace_table(&self) -> Vec<u32> {
        let p = self.id.p;
        let basis: Vec<u32> = (0..self.id.n)
            .map(|i| self.trace_to_prime(self.from_encoding(p.pow(i))))
            .collect();
        (0..self.size)
            .map(|e| {
                digits(e, p, self.id.n as usize)
                    .iter()
                    .zip(&basis)
                    .map(|(c, t)| c * t)
                    .sum::<u32>()
                    % p
            })
            .collect()
    }

    /// Index of the coset of `d`-th powers containing `x`: `log(x) mod d`.
    pub fn power_residue_class(&self, x: FieldElement, d: u64) -> Result<u32, GfError> {
        self.check_divisor(d)?;
        let k = x.exponent().ok_or(GfError::ZeroInput)?;
        Ok((k as u64 % d) as u32)
    }

    pub fn check_divisor(&self, d: u64) -> Result<(), GfError> {
        let order = self.group_order() as u64;
        if d == 0 || order % d != 0 {
            return Err(GfError::DNotDividing { d, order });
        }
        Ok(())
    }

    /// Raw encoding of `alpha^k`; `k < q - 1`.
    #[inline]
    pub fn exp_encoding(&self, k: u32) -> u32 {
        self.exp_table[k as usize]
    }

    /// Raw discrete log of a nonzero encoding.
    #[inline]
    pub fn log_of_encoding(&self, e: u32) -> Option<u32> {
        match self.log_table[e as usize] {
            NO_LOG => None,
            k => Some(k),
        }
    }

    /// Sum of two encodings in the additive group `(Z/p)^n`.
    #[inline]
    pub fn enc_add(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.id.p;
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            let s = (a % p + b % p) % p;
            out += s * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub fn enc_neg(&self, mut a: u32) -> u32 {
        let p = self.id.p;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            let c = a % p;
            out += ((p - c) % p) * place;
            place *= p;
            a /= p;
        }
        out
    }

    #[inline]
    pub fn enc_sub(&self, a: u32, b: u32) -> u32 {
        self.enc_add(a, self.enc_neg(b))
    }

    /// Coordinates of an encoding.
    pub fn enc_digits(&self, e: u32) -> Vec<u32> {
        digits(e, self.id.p, self.id.n as usize)
    }

    /// Whether the field has the shape `p^{2t}` with odd `p`; returns `t`.
    pub fn square_exponent(&self) -> Option<u32> {
        (self.id.p != 2 && self.id.n % 2 == 0).then_some(self.id.n / 2)
    }
}

fn digits(mut e: u32, p: u32, n: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(e % p);
        e /= p;
    }
    out
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Dense polynomials over `F_p`, coefficients low to high.
mod poly {
    use crate::arith;

    pub fn one(n: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        v[0] = 1;
        v
    }

    fn trim(mut v: Vec<u32>) -> Vec<u32> {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
        v
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        arith::pow_mod(a as u64, p as u64 - 2, p as u64) as u32
    }

    /// Remainder of `a` modulo `f`, padded to `deg f` coefficients.
    pub fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let n = f.len() - 1;
        let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
        let lead_inv = inv_mod(f[n], p) as u64;
        let p64 = p as u64;
        for k in (n..r.len()).rev() {
            let c = r[k] % p64 * lead_inv % p64;
            if c != 0 {
                for i in 0..=n {
                    let idx = k - n + i;
                    r[idx] = (r[idx] + p64 - c * f[i] as u64 % p64) % p64;
                }
            }
        }
        let mut out: Vec<u32> = r.iter().take(n).map(|&c| (c % p64) as u32).collect();
        out.resize(n.max(1), 0);
        out
    }

    pub fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let p64 = p as u64;
        let mut prod = vec![0u64; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        rem(&prod, f, p)
    }

    pub fn pow_mod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
        let n = f.len() - 1;
        let mut acc = one(n.max(1));
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, f, p);
            }
            b = mul_mod(&b, &b, f, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(a: Vec<u32>, b: Vec<u32>, p: u32) -> Vec<u32> {
        let (mut a, mut b) = (trim(a), trim(b));
        while !(b.len() == 1 && b[0] == 0) {
            let r = trim(rem(&a, &b, p));
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or test: `f` of degree `n` is irreducible iff
    /// `gcd(f, x^{p^i} - x) = 1` for `1 <= i <= n/2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        if n == 1 {
            return true;
        }
        let mut frob = vec![0; n];
        frob[1] = 1;
        for _ in 0..n / 2 {
            frob = pow_mod(&frob, p as u64, f, p);
            let mut h = frob.clone();
            h[1] = (h[1] + p - 1) % p;
            if gcd(f.to_vec(), h, p).len() > 1 {
                return false;
            }
        }
        true
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldCtx {
        build_field(3, 2).unwrap()
    }

    #[test]
    fn f9_modulus_and_alpha() {
        let f = f9();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // x + 1
        assert_eq!(f.alpha_encoding(), 4);
    }

    #[test]
    fn prime_field_alphas() {
        let f5 = build_field(5, 1).unwrap();
        assert_eq!(f5.modulus(), &[0, 1]);
        assert_eq!(f5.alpha_encoding(), 2);
        assert_eq!(build_field(3, 1).unwrap().alpha_encoding(), 2);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(build_field(9, 1).unwrap_err(), GfError::NotPrime(9));
        assert_eq!(
            build_field(2, 3).unwrap_err(),
            GfError::EvenCharacteristicRejected
        );
        assert!(matches!(
            build_field(3, 15).unwrap_err(),
            GfError::FieldTooLarge { .. }
        ));
        let even = FieldCtx::build_with(
            2,
            3,
            BuildOptions {
                allow_even: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(even.size(), 8);
        let x = even.alpha();
        assert_eq!(even.add(x, x), even.zero());
    }

    #[test]
    fn f9_arith_examples() {
        let f = f9();
        let a = |k| f.alpha_pow(k);
        assert_eq!(f.mul(a(2), a(3)), a(5));
        assert_eq!(f.add(a(0), a(4)), f.zero());
        assert_eq!(f.inv(a(3)).unwrap(), a(5));
        assert_eq!(f.inv(f.zero()), Err(GfError::DivisionByZero));
        let g = build_field(5, 1).unwrap();
        assert_eq!(
            f.arith(ArithOp::Add, a(1), g.one()),
            Err(GfError::MixedFields)
        );
    }

    #[test]
    fn f9_log_examples() {
        let f = f9();
        assert_eq!(f.log(f.alpha_pow(5)).unwrap(), 5);
        assert_eq!(f.log(f.one()).unwrap(), 0);
        assert_eq!(f.log(f.from_int(2)).unwrap(), 4);
        assert_eq!(f.log(f.zero()), Err(GfError::LogOfZero));
    }

    #[test]
    fn f9_trace_examples() {
        let f = f9();
        assert_eq!(f.trace_to_prime(f.one()), 2);
        // x has encoding 3
        assert_eq!(f.trace_to_prime(f.from_encoding(3)), 0);
        assert_eq!(f.trace_to_prime(f.zero()), 0);
    }

    #[test]
    fn f9_residue_classes() {
        let f = f9();
        assert_eq!(f.power_residue_class(f.one(), 4).unwrap(), 0);
        assert_eq!(f.power_residue_class(f.alpha_pow(5), 4).unwrap(), 1);
        assert_eq!(f.power_residue_class(f.from_int(-1), 4).unwrap(), 0);
        assert_eq!(
            f.power_residue_class(f.zero(), 4),
            Err(GfError::ZeroInput)
        );
        assert!(matches!(
            f.power_residue_class(f.one(), 3),
            Err(GfError::DNotDividing { .. })
        ));
    }

    #[test]
    fn encoding_group_ops() {
        let f = build_field(5, 2).unwrap();
        for a in 0..f.size() {
            assert_eq!(f.enc_add(a, f.enc_neg(a)), 0);
            for b in (0..f.size()).step_by(7) {
                let sum = f.add(f.from_encoding(a), f.from_encoding(b));
                assert_eq!(f.encoding(sum), f.enc_add(a, b));
            }
        }
    }
}
