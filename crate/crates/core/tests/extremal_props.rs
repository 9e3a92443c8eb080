use diagcount_core::arith;
use diagcount_core::counting::DiagonalEquation;
use diagcount_core::extremal::{classify_affine, classify_curve, classify_projective, projective_count, Verdict};
use diagcount_core::gf::{build_field, FieldCtx};
use diagcount_core::oracle::brute_count;
use num_bigint::BigUint;
use proptest::prelude::*;
use std::sync::OnceLock;

const FIELDS: &[(u64, u32)] = &[(3, 2), (5, 2), (7, 2), (3, 4), (11, 2), (13, 1), (3, 3)];

fn fields() -> &'static [FieldCtx] {
    static CELL: OnceLock<Vec<FieldCtx>> = OnceLock::new();
    CELL.get_or_init(|| FIELDS.iter().map(|&(p, n)| build_field(p, n).unwrap()).collect())
}

fn exponent(f: &FieldCtx, seed: usize, min: u64) -> Option<u64> {
    let ds: Vec<u64> = arith::divisors(f.group_order() as u64)
        .into_iter()
        .filter(|&d| d >= min)
        .collect();
    (!ds.is_empty()).then(|| ds[seed % ds.len()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extremal_verdicts_imply_attainment(
        i in 0..FIELDS.len(),
        seed in any::<usize>(),
        a in prop::collection::vec(any::<u32>(), 2..=3),
        b in 0u32..3,
        same_class in any::<bool>(),
    ) {
        let f = &fields()[i];
        let d = exponent(f, seed, 3).unwrap();
        let rhs = [f.zero(), f.one(), f.alpha()][b as usize];
        let a = a
            .iter()
            .map(|&k| {
                let k = if same_class { k % 4 * d as u32 } else { k };
                f.alpha_pow((k % f.group_order()) as i64)
            })
            .collect::<Vec<_>>();
        let eq = DiagonalEquation::new(f, a.clone(), vec![d; a.len()], rhs).unwrap();
        let Ok(report) = classify_affine(&eq) else { return Ok(()) };
        prop_assert!(report.consistent());
        match report.verdict {
            Verdict::Maximal => prop_assert!(report.attained && report.count > report.main_term),
            Verdict::Minimal => prop_assert!(report.attained && report.count < report.main_term),
            _ => {}
        }
    }

    #[test]
    fn homogeneous_counts_are_one_mod_group_order(
        i in 0..FIELDS.len(),
        seeds in prop::collection::vec(any::<usize>(), 2..=4),
        a in prop::collection::vec(any::<u32>(), 4),
    ) {
        let f = &fields()[i];
        let d: Vec<u64> = seeds.iter().map(|&s| exponent(f, s, 2).unwrap()).collect();
        let a = a[..d.len()].iter().map(|&k| f.alpha_pow((k % f.group_order()) as i64)).collect();
        let eq = DiagonalEquation::new(f, a, d, f.zero()).unwrap();
        let n = brute_count(&eq).unwrap();
        prop_assert_eq!((n - 1u32) % BigUint::from(f.group_order()), BigUint::from(0u32));
    }

    #[test]
    fn curve_and_ternary_projective_verdicts_agree(
        i in 0..5usize,
        seed in any::<usize>(),
        a in prop::collection::vec(any::<u32>(), 3),
    ) {
        let f = &fields()[i];
        let n = exponent(f, seed, 3).unwrap();
        let [x, y, z] = [0, 1, 2].map(|j| f.alpha_pow((a[j] % f.group_order()) as i64));
        let curve = classify_curve(f, x, y, z, n).unwrap();
        let proj = classify_projective(f, &[x, y, f.neg(z)], n).unwrap();
        prop_assert!(curve.consistent());
        prop_assert_eq!(curve.verdict, proj.direct_verdict);
        prop_assert_eq!(&curve.points.projective, &projective_count(f, &[x, y, f.neg(z)], n).unwrap());
    }
}
