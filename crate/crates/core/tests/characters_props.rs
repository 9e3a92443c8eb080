use diagcount_core::characters::{jacobi_sum, jacobi_sum_direct, theta, MultCharacter};
use diagcount_core::gf::{build_field, FieldCtx};
use proptest::prelude::*;
use std::sync::OnceLock;

const SMALL: &[(u64, u32)] = &[(7, 1), (3, 2), (13, 1), (5, 2), (3, 3)];

fn fields() -> &'static [FieldCtx] {
    static CELL: OnceLock<Vec<FieldCtx>> = OnceLock::new();
    CELL.get_or_init(|| SMALL.iter().map(|&(p, n)| build_field(p, n).unwrap()).collect())
}

#[test]
fn jacobi_sums_scale_by_the_product_character() {
    for (p, n) in [(3, 2), (5, 2)] {
        let f = build_field(p, n).unwrap();
        let m = f.group_order() as i64;
        for l1 in 1..m {
            for l2 in 1..m {
                let chars = [
                    MultCharacter::new(&f, m as u64, l1).unwrap(),
                    MultCharacter::new(&f, m as u64, l2).unwrap(),
                ];
                let at_one = jacobi_sum(&chars, f.one()).unwrap();
                for k in 1..m {
                    let b = f.alpha_pow(k);
                    let scale = &chars[0].eval(b) * &chars[1].eval(b);
                    assert_eq!(jacobi_sum(&chars, b).unwrap(), &scale * &at_one, "F_{p}^{n} ({l1}, {l2}) b = alpha^{k}");
                }
            }
        }
    }
}

#[test]
fn theta_sums_vanish_over_a_period() {
    for (p, n) in [(3u64, 2u32), (5, 2), (7, 2)] {
        let f = build_field(p, n).unwrap();
        let q = p.pow(n / 2) as i64;
        for eps in [1i64, -1] {
            let len = q - eps;
            for d in (1..=len).filter(|d| len % d == 0) {
                for k in 0..f.group_order() as i64 {
                    let b = f.alpha_pow(k);
                    let sum: i64 = (1..=len)
                        .map(|j| (1 - d).pow(theta(&f, d as u64, f.alpha_pow(j), b).unwrap() as u32))
                        .sum();
                    assert_eq!(sum, 0, "F_{p}^{n} eps {eps} d {d} b = alpha^{k}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn convolution_matches_direct_sum(
        i in 0..SMALL.len(),
        k in 2usize..=3,
        orders in prop::collection::vec(any::<u32>(), 3),
        exps in prop::collection::vec(any::<i64>(), 3),
        b in any::<u32>(),
    ) {
        let f = &fields()[i];
        let divisors: Vec<u64> = diagcount_core::arith::divisors(f.group_order() as u64)
            .into_iter()
            .filter(|&d| d > 1)
            .collect();
        let chars: Vec<_> = (0..k)
            .map(|j| {
                let d = divisors[orders[j] as usize % divisors.len()];
                MultCharacter::new(f, d, 1 + exps[j].rem_euclid(d as i64 - 1)).unwrap()
            })
            .collect();
        let b = f.from_encoding(b % f.size());
        prop_assert_eq!(jacobi_sum(&chars, b).unwrap(), jacobi_sum_direct(&chars, b).unwrap());
    }
}
