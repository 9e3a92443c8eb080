//! Multiplicative and additive characters, Jacobi sums and power sums.
//!
//! The order-`d` character is pinned by `chi_d(alpha) = zeta_d`, so
//! `chi_d^l(alpha^k) = zeta_d^{lk}`. Every character is `0` at `0` inside sums.

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith;
use crate::cyclotomic::CycInt;
use crate::gf::{FieldCtx, FieldElement, GfError};
use crate::par;

/// Work limit for the direct Jacobi summation.
pub const DIRECT_LIMIT: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("character {index} is trivial")]
    TrivialCharacter { index: usize },
    #[error("characters belong to different fields")]
    MixedFields,
    #[error("a Jacobi sum needs at least two characters, got {0}")]
    ArityTooSmall(usize),
    #[error("coefficient must be nonzero")]
    ZeroCoefficient,
    #[error("r = {r} is not a witness for d = {d} in this field")]
    WitnessInvalid { d: u64, r: u64 },
    #[error("field size is not an even power of an odd prime")]
    NotSquareField,
    #[error("|x|^2 does not equal the supplied modulus")]
    ModulusMismatch,
    #[error("purity is not claimed for s = 3 with d = {0} <= 3")]
    ExclusionViolated(u64),
    #[error("direct summation needs {0} terms, above the limit")]
    EnumerationTooLarge(u64),
}

/// `chi_d^l` on a fixed field.
#[derive(Clone, Copy, Debug)]
pub struct MultCharacter<'f> {
    field: &'f FieldCtx,
    order: u32,
    exponent: u32,
}

impl<'f> MultCharacter<'f> {
    pub fn new(field: &'f FieldCtx, order: u64, exponent: i64) -> Result<Self, CharError> {
        field.check_divisor(order)?;
        Ok(Self {
            field,
            order: order as u32,
            exponent: exponent.rem_euclid(order as i64) as u32,
        })
    }

    pub fn field(&self) -> &'f FieldCtx {
        self.field
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    /// Exact multiplicative order `d / gcd(d, l)`.
    pub fn exact_order(&self) -> u32 {
        self.order / arith::gcd(self.order as u64, self.exponent as u64) as u32
    }

    /// Exponent of `zeta_level` taken at `alpha^k`; `level` must be a multiple
    /// of the order.
    #[inline]
    fn zeta_exponent(&self, k: u32, level: u32) -> u32 {
        let e = (self.exponent as u64 * k as u64) % self.order as u64;
        (e * (level / self.order) as u64) as u32
    }

    pub fn eval(&self, x: FieldElement) -> CycInt {
        char_eval(self, x)
    }
}

pub fn char_eval(chi: &MultCharacter, x: FieldElement) -> CycInt {
    match chi.field.log(x) {
        Ok(k) => CycInt::root_power(chi.order, chi.zeta_exponent(k, chi.order) as i64),
        Err(_) => CycInt::zero(chi.order),
    }
}

/// `psi_a(x) = zeta_p^{tr(a x)}`.
#[derive(Clone, Copy, Debug)]
pub struct AdditiveCharacter<'f> {
    field: &'f FieldCtx,
    shift: FieldElement,
}

impl<'f> AdditiveCharacter<'f> {
    pub fn new(field: &'f FieldCtx, shift: FieldElement) -> Self {
        Self { field, shift }
    }

    pub fn eval(&self, x: FieldElement) -> CycInt {
        let tr = self.field.trace_to_prime(self.field.mul(self.shift, x));
        CycInt::root_power(self.field.characteristic(), tr as i64)
    }
}

/// `1` iff `a` and `b` lie in the same coset of `d`-th powers.
pub fn theta(field: &FieldCtx, d: u64, a: FieldElement, b: FieldElement) -> Result<u8, CharError> {
    let ca = field.power_residue_class(a, d)?;
    let cb = field.power_residue_class(b, d)?;
    Ok((ca == cb) as u8)
}

fn common_field<'f>(chars: &[MultCharacter<'f>], b: FieldElement) -> Result<&'f FieldCtx, CharError> {
    if chars.len() < 2 {
        return Err(CharError::ArityTooSmall(chars.len()));
    }
    let field = chars[0].field;
    if chars.iter().any(|c| c.field.id() != field.id()) || !field.contains(b) {
        return Err(CharError::MixedFields);
    }
    if let Some(index) = chars.iter().position(MultCharacter::is_trivial) {
        return Err(CharError::TrivialCharacter { index });
    }
    Ok(field)
}

const NONE: u32 = u32::MAX;

/// Per-encoding `zeta_level` exponents of a character, `NONE` at zero.
fn value_table(chi: &MultCharacter, level: u32) -> Vec<u32> {
    let f = chi.field;
    (0..f.size())
        .map(|e| match f.log_of_encoding(e) {
            Some(k) => chi.zeta_exponent(k, level),
            None => NONE,
        })
        .collect()
}

/// `J(chi_1, ..., chi_k; b)`, the sum of `chi_1(x_1)...chi_k(x_k)` over
/// `x_1 + ... + x_k = b`, by folding additive convolutions of the value
/// distributions.
pub fn jacobi_sum(chars: &[MultCharacter], b: FieldElement) -> Result<CycInt, CharError> {
    let field = common_field(chars, b)?;
    let level = arith::lcm_all(&chars.iter().map(|c| c.order as u64).collect::<Vec<_>>()) as u32;
    let tables: Vec<Vec<u32>> = chars.iter().map(|c| value_table(c, level)).collect();
    let q = field.size() as usize;
    let dl = level as usize;
    let target = field.encoding(b);
    let k = chars.len();

    // After the first fold, acc[u * level + j] counts partial sums equal to u
    // carrying zeta^j.
    let mut acc = vec![0i64; q * dl];
    let (t0, t1) = (&tables[0], &tables[1]);
    if k == 2 {
        let mut hist = vec![0i64; dl];
        for x in 1..q as u32 {
            let y = field.enc_sub(target, x);
            if y != 0 {
                hist[((t0[x as usize] + t1[y as usize]) % level) as usize] += 1;
            }
        }
        return Ok(CycInt::from_root_counts(level, &hist));
    }
    for x in 1..q as u32 {
        for y in 1..q as u32 {
            let w = field.enc_add(x, y) as usize;
            acc[w * dl + ((t0[x as usize] + t1[y as usize]) % level) as usize] += 1;
        }
    }
    for t in &tables[2..k - 1] {
        let mut next = vec![0i64; q * dl];
        for u in 0..q as u32 {
            let row = &acc[u as usize * dl..(u as usize + 1) * dl];
            if row.iter().all(|&c| c == 0) {
                continue;
            }
            for x in 1..q as u32 {
                let w = field.enc_add(u, x) as usize;
                let e = t[x as usize] as usize;
                for (j, &c) in row.iter().enumerate() {
                    next[w * dl + (j + e) % dl] += c;
                }
            }
        }
        acc = next;
    }
    let last = &tables[k - 1];
    let mut hist = vec![0i64; dl];
    for x in 1..q as u32 {
        let u = field.enc_sub(target, x) as usize;
        let e = last[x as usize] as usize;
        for (j, &c) in acc[u * dl..(u + 1) * dl].iter().enumerate() {
            hist[(j + e) % dl] += c;
        }
    }
    Ok(CycInt::from_root_counts(level, &hist))
}

/// Direct summation over `(x_1, ..., x_{k-1})`; cross-check for
/// [`jacobi_sum`].
pub fn jacobi_sum_direct(chars: &[MultCharacter], b: FieldElement) -> Result<CycInt, CharError> {
    let field = common_field(chars, b)?;
    let level = arith::lcm_all(&chars.iter().map(|c| c.order as u64).collect::<Vec<_>>()) as u32;
    let tables: Vec<Vec<u32>> = chars.iter().map(|c| value_table(c, level)).collect();
    let q = field.size();
    let k = chars.len();
    let work = (q as u64 - 1).saturating_pow(k as u32 - 1);
    if work > DIRECT_LIMIT {
        return Err(CharError::EnumerationTooLarge(work));
    }
    let target = field.encoding(b);
    let mut hist = vec![0i64; level as usize];
    let mut xs = vec![1u32; k - 1];
    loop {
        let mut sum = 0;
        let mut e = 0;
        for (i, &x) in xs.iter().enumerate() {
            sum = field.enc_add(sum, x);
            e += tables[i][x as usize];
        }
        let last = field.enc_sub(target, sum);
        if last != 0 {
            e += tables[k - 1][last as usize];
            hist[(e % level) as usize] += 1;
        }
        // odometer over nonzero encodings
        let mut i = 0;
        while i < xs.len() {
            xs[i] += 1;
            if xs[i] < q {
                break;
            }
            xs[i] = 1;
            i += 1;
        }
        if i == xs.len() {
            break;
        }
    }
    Ok(CycInt::from_root_counts(level, &hist))
}

/// `S(c) = sum over all x in F of psi_{c a}(x^d)`, an element of `Z[zeta_p]`.
pub fn power_sum(field: &FieldCtx, c: FieldElement, a: FieldElement, d: u64) -> Result<CycInt, CharError> {
    field.check_divisor(d)?;
    if a.is_zero() {
        return Err(CharError::ZeroCoefficient);
    }
    let p = field.characteristic();
    let shift = field.mul(c, a);
    let Some(s) = shift.exponent() else {
        return Ok(CycInt::from_int(p, field.size()));
    };
    let traces = field.trace_table();
    let m = field.group_order() as u64;
    let mut hist = vec![0i64; p as usize];
    hist[0] += 1;
    for k in 0..m {
        let e = field.exp_encoding(((s as u64 + d * k) % m) as u32);
        hist[traces[e as usize] as usize] += 1;
    }
    Ok(CycInt::from_root_counts(p, &hist))
}

/// Closed form of [`power_sum`] when `r | t` and `d | p^r + 1` in
/// `F_{p^{2t}}`: `-eps (d - 1) p^t` if `(c a)^{(Q-1)/d}` equals
/// `eps^{(p^r+1)/d}`, else `eps p^t`, with `eps = (-1)^{t/r}`.
pub fn wolfmann_closed_power_sum(
    field: &FieldCtx,
    c: FieldElement,
    a: FieldElement,
    d: u64,
    r: u64,
) -> Result<BigInt, CharError> {
    let t = field.square_exponent().ok_or(CharError::NotSquareField)? as u64;
    let p = field.characteristic() as u64;
    field.check_divisor(d)?;
    if r == 0 || t % r != 0 || (arith::pow_mod(p, r, d) + 1) % d != 0 {
        return Err(CharError::WitnessInvalid { d, r });
    }
    let ca = field.mul(c, a);
    if ca.is_zero() {
        return Err(CharError::ZeroCoefficient);
    }
    let eps = arith::sign_pow(t / r);
    let target = if eps == 1 || ((p.pow(r as u32) + 1) / d) % 2 == 0 {
        field.one()
    } else {
        field.neg(field.one())
    };
    let pt = BigInt::from(p).pow(t as u32);
    let power = field.pow(ca, field.group_order() as u64 / d);
    Ok(if power == target {
        -(BigInt::from(eps) * (d as i64 - 1) * pt)
    } else {
        BigInt::from(eps) * pt
    })
}

/// Whether some positive power of `x` is real, given `|x|^2`.
///
/// `x` is pure iff `x^2 = |x|^2 * u` for a root of unity `u` of the ambient
/// cyclotomic field, and those are exactly `+-zeta_D^j`.
pub fn is_pure(x: &CycInt, modulus_square: &BigInt) -> Result<bool, CharError> {
    let level = x.level();
    if x.abs_square() != CycInt::from_int(level, modulus_square.clone()) {
        return Err(CharError::ModulusMismatch);
    }
    if x.is_zero() {
        return Ok(true);
    }
    let sq = x * x;
    let m = CycInt::from_int(level, modulus_square.clone());
    Ok((0..level as i64).any(|j| {
        let u = &m * &CycInt::root_power(level, j);
        sq == u || sq == -&u
    }))
}

/// Whether every `J(chi_d^{l_1}, ..., chi_d^{l_s}; 1)` with all `l_i` in
/// `1..d` and `sum l_i` not divisible by `d` is pure.
pub fn purity_scan(field: &FieldCtx, d: u64, s: usize) -> Result<bool, CharError> {
    purity_scan_with(field, d, s, par::Mode::default())
}

pub fn purity_scan_with(field: &FieldCtx, d: u64, s: usize, mode: par::Mode) -> Result<bool, CharError> {
    field.check_divisor(d)?;
    if s < 2 {
        return Err(CharError::ArityTooSmall(s));
    }
    if s == 3 && d <= 3 {
        return Err(CharError::ExclusionViolated(d));
    }
    let tuples = exponent_tuples(d, s);
    let modulus = BigInt::from(field.size()).pow(s as u32 - 1);
    let one = field.one();
    let verdicts = par::map_with(mode, &tuples, |ls| -> Result<bool, CharError> {
        let chars = ls
            .iter()
            .map(|&l| MultCharacter::new(field, d, l as i64))
            .collect::<Result<Vec<_>, _>>()?;
        is_pure(&jacobi_sum(&chars, one)?, &modulus)
    });
    for v in verdicts {
        if !v? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tuples in `[1, d-1]^s` whose sum is not divisible by `d`.
pub fn exponent_tuples(d: u64, s: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    if d < 2 {
        return out;
    }
    let mut cur = vec![1u64; s];
    loop {
        if cur.iter().sum::<u64>() % d != 0 {
            out.push(cur.clone());
        }
        let mut i = 0;
        while i < s {
            cur[i] += 1;
            if cur[i] < d {
                break;
            }
            cur[i] = 1;
            i += 1;
        }
        if i == s {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::build_field;

    fn chi<'f>(f: &'f FieldCtx, d: u64, l: i64) -> MultCharacter<'f> {
        MultCharacter::new(f, d, l).unwrap()
    }

    #[test]
    fn char_eval_examples() {
        let f9 = build_field(3, 2).unwrap();
        let c = chi(&f9, 4, 1);
        assert_eq!(c.eval(f9.alpha()), CycInt::root_power(4, 1));
        assert_eq!(c.eval(f9.from_int(-1)), CycInt::one(4));
        assert!(c.eval(f9.zero()).is_zero());
        assert_eq!(chi(&f9, 4, 2).exact_order(), 2);
        assert!(MultCharacter::new(&f9, 3, 1).is_err());
    }

    #[test]
    fn theta_examples() {
        let f9 = build_field(3, 2).unwrap();
        let a = |k| f9.alpha_pow(k);
        assert_eq!(theta(&f9, 4, f9.one(), f9.one()), Ok(1));
        assert_eq!(theta(&f9, 4, a(1), a(5)), Ok(1));
        assert_eq!(theta(&f9, 4, a(1), a(2)), Ok(0));
        assert!(theta(&f9, 4, f9.zero(), a(2)).is_err());
        assert!(theta(&f9, 3, a(1), a(2)).is_err());
    }

    #[test]
    fn jacobi_examples() {
        let f9 = build_field(3, 2).unwrap();
        let one = f9.one();
        // the Hermitian evaluation is +q here, not eps * q = -3
        let j = jacobi_sum(&[chi(&f9, 4, 1), chi(&f9, 4, 1)], one).unwrap();
        assert_eq!(j.as_rational_integer(), Some(BigInt::from(3)));
        let j = jacobi_sum(&[chi(&f9, 4, 1), chi(&f9, 4, 3)], one).unwrap();
        assert_eq!(j.as_rational_integer(), Some(BigInt::from(-1)));
        let j = jacobi_sum(&[chi(&f9, 4, 1), chi(&f9, 4, 1)], f9.zero()).unwrap();
        assert!(j.is_zero());

        let f5 = build_field(5, 1).unwrap();
        let j = jacobi_sum(&[chi(&f5, 2, 1), chi(&f5, 2, 1)], f5.one()).unwrap();
        assert_eq!(j.as_rational_integer(), Some(BigInt::from(-1)));
    }

    #[test]
    fn jacobi_rejects_bad_input() {
        let f9 = build_field(3, 2).unwrap();
        let f5 = build_field(5, 1).unwrap();
        let one = f9.one();
        assert_eq!(
            jacobi_sum(&[chi(&f9, 4, 1), chi(&f9, 4, 4)], one),
            Err(CharError::TrivialCharacter { index: 1 })
        );
        assert_eq!(
            jacobi_sum(&[chi(&f9, 4, 1), chi(&f5, 4, 1)], one),
            Err(CharError::MixedFields)
        );
        assert_eq!(jacobi_sum(&[chi(&f9, 4, 1)], one), Err(CharError::ArityTooSmall(1)));
    }

    #[test]
    fn convolution_matches_direct() {
        for (p, n) in [(3, 2), (5, 1), (7, 1), (13, 1)] {
            let f = build_field(p, n).unwrap();
            let m = f.group_order() as u64;
            let orders: Vec<u64> = arith::divisors(m).into_iter().filter(|&d| d > 1).collect();
            for &d1 in &orders {
                for &d2 in &orders {
                    for b in [f.zero(), f.one(), f.alpha()] {
                        let cs = [chi(&f, d1, 1), chi(&f, d2, -1)];
                        assert_eq!(jacobi_sum(&cs, b), jacobi_sum_direct(&cs, b));
                        let cs = [chi(&f, d1, 1), chi(&f, d2, 1), chi(&f, d1, 1)];
                        assert_eq!(jacobi_sum(&cs, b), jacobi_sum_direct(&cs, b));
                    }
                }
            }
        }
    }

    #[test]
    fn four_fold_convolution_matches_direct() {
        let f = build_field(7, 1).unwrap();
        let cs = [chi(&f, 3, 1), chi(&f, 2, 1), chi(&f, 6, 5), chi(&f, 3, 2)];
        for b in f.elements() {
            assert_eq!(jacobi_sum(&cs, b), jacobi_sum_direct(&cs, b));
        }
    }

    #[test]
    fn power_sum_examples() {
        let f9 = build_field(3, 2).unwrap();
        let one = f9.one();
        let a2 = f9.alpha_pow(2);
        let int = |x: CycInt| x.as_rational_integer().unwrap();
        assert_eq!(int(power_sum(&f9, one, one, 4).unwrap()), BigInt::from(-3));
        assert_eq!(int(power_sum(&f9, a2, one, 4).unwrap()), BigInt::from(9));
        assert_eq!(int(power_sum(&f9, f9.zero(), one, 4).unwrap()), BigInt::from(9));
        assert_eq!(power_sum(&f9, one, f9.zero(), 4), Err(CharError::ZeroCoefficient));

        assert_eq!(wolfmann_closed_power_sum(&f9, one, one, 4, 1), Ok(BigInt::from(-3)));
        assert_eq!(wolfmann_closed_power_sum(&f9, a2, one, 4, 1), Ok(BigInt::from(9)));
        let f81 = build_field(3, 4).unwrap();
        let o = f81.one();
        assert_eq!(wolfmann_closed_power_sum(&f81, o, o, 4, 1), Ok(BigInt::from(-27)));
        assert_eq!(int(power_sum(&f81, o, o, 4).unwrap()), BigInt::from(-27));
        assert_eq!(
            wolfmann_closed_power_sum(&f81, o, o, 5, 1),
            Err(CharError::WitnessInvalid { d: 5, r: 1 })
        );
    }

    #[test]
    fn wolfmann_matches_power_sum() {
        for (p, n) in [(3, 2), (3, 4), (5, 2), (7, 2)] {
            let f = build_field(p, n).unwrap();
            let t = n as u64 / 2;
            let m = f.group_order() as u64;
            for d in arith::divisors(m).into_iter().filter(|&d| d > 1) {
                let Some(r) = arith::find_witness(d, p, t) else { continue };
                for k in 0..m.min(12) {
                    let c = f.alpha_pow(k as i64);
                    let direct = power_sum(&f, c, f.one(), d).unwrap();
                    let closed = wolfmann_closed_power_sum(&f, c, f.one(), d, r).unwrap();
                    assert_eq!(direct.as_rational_integer(), Some(closed), "p={p} n={n} d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn purity_examples() {
        assert_eq!(is_pure(&CycInt::from_int(4, -3), &BigInt::from(9)), Ok(true));
        assert_eq!(
            is_pure(&CycInt::from_int(4, -3), &BigInt::from(8)),
            Err(CharError::ModulusMismatch)
        );
        let f25 = build_field(5, 2).unwrap();
        let j = jacobi_sum(&[chi(&f25, 3, 1), chi(&f25, 3, 1)], f25.one()).unwrap();
        assert_eq!(is_pure(&j, &BigInt::from(25)), Ok(true));
        let f7 = build_field(7, 1).unwrap();
        let j = jacobi_sum(&[chi(&f7, 3, 1), chi(&f7, 3, 1)], f7.one()).unwrap();
        assert_eq!(is_pure(&j, &BigInt::from(7)), Ok(false));

        let f9 = build_field(3, 2).unwrap();
        assert_eq!(purity_scan(&f9, 4, 2), Ok(true));
        assert_eq!(purity_scan(&f7, 3, 2), Ok(false));
        assert_eq!(purity_scan(&f25, 3, 2), Ok(true));
        assert_eq!(purity_scan(&f25, 6, 2), Ok(true));
        assert_eq!(purity_scan(&f7, 3, 3), Err(CharError::ExclusionViolated(3)));
    }

    #[test]
    fn tuple_enumeration() {
        let t = exponent_tuples(4, 2);
        assert_eq!(t.len(), 9 - 3);
        assert!(t.iter().all(|v| v.iter().sum::<u64>() % 4 != 0));
    }
}
