use beq_core::cumulants::{cumulants_from_moments, moments_from_cumulants, CumulantSpec};
use beq_core::definetti::{apply_en, boolean_iid_vector, invariance_defect, NCPoly};
use beq_core::matrix::{invert_matrix, rank};
use beq_core::partitions::{enumerate_all, enumerate_category, join, kernel, leq};
use beq_core::posets::interval_poset;
use beq_core::representations::positivity_holds;
use beq_core::scalar::{int, rational};
use beq_core::weingarten::projection_matrix;
use beq_core::{CategoryId, ExactMatrix, ExactScalar, SetPartition};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

const CATEGORIES: [CategoryId; 4] = [CategoryId::S, CategoryId::O, CategoryId::H, CategoryId::B];

fn category() -> impl Strategy<Value = CategoryId> {
    prop::sample::select(CATEGORIES.to_vec())
}

fn scalar(d: u64) -> impl Strategy<Value = ExactScalar> {
    (-20i64..=20, 1i64..=6, -20i64..=20, 1i64..=6)
        .prop_map(move |(a, b, c, e)| ExactScalar::new(rational(a, b), rational(c, e), d))
}

fn labels(max_k: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..4, 1..=max_k)
}

fn partition(max_k: usize) -> impl Strategy<Value = SetPartition> {
    labels(max_k).prop_map(|l| SetPartition::from_labels(&l))
}

fn partition_pair(max_k: usize) -> impl Strategy<Value = (SetPartition, SetPartition)> {
    (1..=max_k).prop_flat_map(|k| {
        let p = prop::collection::vec(0u8..4, k).prop_map(|l| SetPartition::from_labels(&l));
        (p.clone(), p)
    })
}

fn poly(n: usize, k: usize) -> impl Strategy<Value = NCPoly> {
    prop::collection::vec((prop::collection::vec(1..=n, k), -5i64..=5), 1..=4).prop_map(|terms| {
        let mut p = NCPoly::zero();
        for (w, c) in terms {
            p.add_term(&w, int(c)).unwrap();
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_laws(a in scalar(5), b in scalar(5), c in scalar(5)) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inverse().unwrap(), ExactScalar::one());
        }
    }

    #[test]
    fn scalar_sign_matches_float(a in scalar(7)) {
        let approx = a.rational_part().to_f64()
            .zip(a.radical_part().to_f64())
            .map(|(r, s)| r + s * 7f64.sqrt());
        if let Some(f) = approx {
            if f.abs() > 1e-9 {
                prop_assert_eq!(a.is_nonnegative(), f > 0.0);
            }
        }
    }

    #[test]
    fn triangular_products_invert(diag in prop::collection::vec(1i64..=4, 3), off in prop::collection::vec(-3i64..=3, 6)) {
        let l = ExactMatrix::from_ints(&[&[diag[0], 0, 0], &[off[0], diag[1], 0], &[off[1], off[2], diag[2]]]);
        let u = ExactMatrix::from_ints(&[&[1, off[3], off[4]], &[0, 1, off[5]], &[0, 0, 1]]);
        let m = l.checked_mul(&u).unwrap();
        prop_assert_eq!(rank(&m).unwrap(), 3);
        let inv = invert_matrix(&m).unwrap();
        prop_assert_eq!(m.checked_mul(&inv).unwrap(), ExactMatrix::identity(3));
    }

    #[test]
    fn blocks_round_trip(p in partition(7)) {
        let again = SetPartition::from_blocks(p.ground_size(), &p.blocks()).unwrap();
        prop_assert_eq!(&again, &p);
        prop_assert_eq!(p.block_sizes().iter().sum::<usize>(), p.ground_size());
        prop_assert_eq!(kernel(&p.labels().iter().map(|&l| l as usize + 1).collect::<Vec<_>>()), p);
    }

    #[test]
    fn join_is_least_upper_bound((a, b) in partition_pair(6)) {
        let j = join(&a, &b).unwrap();
        prop_assert!(leq(&a, &j).unwrap() && leq(&b, &j).unwrap());
        for c in enumerate_all(a.ground_size()) {
            if leq(&a, &c).unwrap() && leq(&b, &c).unwrap() {
                prop_assert!(leq(&j, &c).unwrap());
            }
        }
        prop_assert_eq!(leq(&a, &b).unwrap() && leq(&b, &a).unwrap(), a == b);
    }

    #[test]
    fn tensor_splits_back((a, b) in (partition(4), partition(4))) {
        let t = a.tensor(&b);
        prop_assert_eq!(t.restrict(1, a.ground_size()), a.clone());
        prop_assert_eq!(t.restrict(a.ground_size() + 1, t.ground_size()), b.clone());
        prop_assert_eq!(t.is_interval(), a.is_interval() && b.is_interval());
    }

    #[test]
    fn category_partitions_are_interval(x in category(), k in 1usize..=7) {
        for p in enumerate_category(x, k) {
            prop_assert!(p.is_interval() && x.contains(&p));
            prop_assert!(p.block_sizes().iter().all(|&m| x.allows_block(m)));
        }
    }

    #[test]
    fn cumulant_round_trip(x in category(), raw in prop::collection::vec((-9i64..=9, 1i64..=5), 8)) {
        let spec = CumulantSpec::new(
            x,
            raw.iter().enumerate().filter(|(i, _)| x.allows_block(i + 1)).map(|(i, &(a, b))| (i + 1, rational(a, b))),
        );
        let moments: Vec<_> = (1..=8).map(|m| moments_from_cumulants(&spec, m)).collect();
        let report = cumulants_from_moments(&moments, x);
        prop_assert!(report.violations.is_empty());
        prop_assert_eq!(report.spec, spec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn conditional_expectation_is_linear_and_idempotent(
        x in prop::sample::select(vec![CategoryId::S, CategoryId::B]),
        p in poly(3, 2),
        q in poly(3, 2),
        a in -4i64..=4,
    ) {
        let combo = p.scaled(&int(a)).add(&q);
        let lhs = apply_en(x, 3, &combo).unwrap();
        let rhs = apply_en(x, 3, &p).unwrap().scaled(&int(a)).add(&apply_en(x, 3, &q).unwrap());
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(apply_en(x, 3, &lhs).unwrap(), lhs);
    }

    #[test]
    fn iid_moments_are_invariant(x in category(), raw in prop::collection::vec((-4i64..=4, 1i64..=3), 4), n in 2usize..=4) {
        let spec = CumulantSpec::new(
            x,
            raw.iter().enumerate().filter(|(i, _)| x.allows_block(i + 1)).map(|(i, &(a, b))| (i + 1, rational(a, b))),
        );
        let k = if x == CategoryId::O || x == CategoryId::H { 2 } else { 3 };
        let v = boolean_iid_vector(&spec, k, n).unwrap();
        prop_assert!(invariance_defect(&v).unwrap().is_zero());
    }

    #[test]
    fn state_is_positive(x in prop::sample::select(vec![CategoryId::S, CategoryId::O, CategoryId::H]), n in 2usize..=4, seed in any::<u64>()) {
        prop_assert!(positivity_holds(x, n, 10, seed).unwrap());
    }
}

#[test]
fn interval_mobius_inverts_zeta() {
    for k in 1..=6 {
        let poset = interval_poset(k);
        let el = poset.elements();
        for a in el {
            for b in el {
                let mut total = BigInt::zero();
                for c in el {
                    if leq(a, c).unwrap() && leq(c, b).unwrap() {
                        total += poset.mobius_int(a, c).unwrap();
                    }
                }
                let expected = if a == b { BigInt::one() } else { BigInt::zero() };
                assert_eq!(total, expected, "k={k} {a:?} {b:?}");
                if leq(a, b).unwrap() {
                    let sign = if (a.num_blocks() - b.num_blocks()) % 2 == 0 { 1 } else { -1 };
                    assert_eq!(poset.mobius_int(a, b).unwrap(), BigInt::from(sign));
                }
            }
        }
    }
}

#[test]
fn projections_are_symmetric_idempotents() {
    for x in CATEGORIES {
        for (k, n) in [(1, 3), (2, 2), (2, 3), (3, 2)] {
            let Ok(p) = projection_matrix(x, k, n, 64) else { continue };
            let m = &p.matrix;
            assert!(m.is_symmetric(), "{x:?} k={k} n={n}");
            assert_eq!(&m.checked_mul(m).unwrap(), m, "{x:?} k={k} n={n}");
        }
    }
}
