use diagcount_core::gf::{BuildOptions, FieldCtx};
use proptest::prelude::*;
use std::sync::OnceLock;

const SMALL: &[(u64, u32)] = &[(2, 4), (3, 2), (5, 2), (7, 1), (3, 5), (13, 2), (2, 8)];

fn build_field(p: u64, n: u32) -> Result<FieldCtx, diagcount_core::gf::GfError> {
    let opts = BuildOptions {
        allow_even: true,
        ..BuildOptions::default()
    };
    FieldCtx::build_with(p, n, opts)
}

fn fields() -> &'static [FieldCtx] {
    static CELL: OnceLock<Vec<FieldCtx>> = OnceLock::new();
    CELL.get_or_init(|| SMALL.iter().map(|&(p, n)| build_field(p, n).unwrap()).collect())
}

/// Every `p^n <= 2^16` with `p <= 13`, plus the largest prime below `2^16`.
fn sweep_fields() -> Vec<(u64, u32)> {
    let mut out = vec![(65521, 1)];
    for p in [2u64, 3, 5, 7, 11, 13] {
        let mut n = 1;
        while p.pow(n) <= 1 << 16 {
            out.push((p, n));
            n += 1;
        }
    }
    out
}

#[test]
fn frobenius_fixes_every_element() {
    for (p, n) in sweep_fields() {
        let f = build_field(p, n).unwrap();
        let q = f.size() as u64;
        for x in f.elements() {
            assert_eq!(f.pow(x, q), x, "F_{}^{}", p, n);
        }
    }
}

#[test]
fn trace_is_linear_and_onto() {
    for (p, n) in sweep_fields() {
        let f = build_field(p, n).unwrap();
        let table = f.trace_table();
        let mut hit = vec![false; p as usize];
        let mut prev = f.zero();
        for x in f.elements() {
            let tx = f.trace_to_prime(x);
            hit[tx as usize] = true;
            let sum = f.trace_to_prime(f.add(x, prev));
            assert_eq!(sum, (tx + f.trace_to_prime(prev)) % p as u32);
            let c = (tx as u64 * 7 + 3) % p;
            let scaled = f.trace_to_prime(f.mul(f.from_int(c as i64), x));
            assert_eq!(scaled as u64, c * tx as u64 % p);
            assert_eq!(table[f.encoding(x) as usize], tx);
            prev = x;
        }
        assert!(hit.iter().all(|&h| h), "trace not onto over F_{}^{}", p, n);
    }
}

#[test]
fn rebuild_is_deterministic() {
    for &(p, n) in SMALL.iter().chain(&[(5, 6), (65521, 1)]) {
        let a = build_field(p, n).unwrap();
        let b = build_field(p, n).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.alpha_encoding(), b.alpha_encoding());
        for k in 0..a.group_order() {
            assert_eq!(a.exp_encoding(k), b.exp_encoding(k));
        }
    }
}

fn pick() -> impl Strategy<Value = (usize, u32, u32, u32)> {
    (0..SMALL.len(), any::<u32>(), any::<u32>(), any::<u32>())
}

proptest! {
    #[test]
    fn log_turns_products_into_sums((i, x, y, _) in pick()) {
        let f = &fields()[i];
        let m = f.group_order();
        let (x, y) = (f.alpha_pow((x % m) as i64), f.alpha_pow((y % m) as i64));
        let lhs = f.log(f.mul(x, y)).unwrap();
        prop_assert_eq!(lhs, (f.log(x).unwrap() + f.log(y).unwrap()) % m);
    }

    #[test]
    fn ring_laws((i, x, y, z) in pick()) {
        let f = &fields()[i];
        let q = f.size();
        let (x, y, z) = (f.from_encoding(x % q), f.from_encoding(y % q), f.from_encoding(z % q));
        prop_assert_eq!(f.add(x, y), f.add(y, x));
        prop_assert_eq!(f.mul(x, y), f.mul(y, x));
        prop_assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.sub(f.add(x, y), y), x);
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
        }
    }
}
