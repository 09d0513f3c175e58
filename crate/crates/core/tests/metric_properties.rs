use p4metric::metrics::{basic_rates, f1, markedness, mcc, p4, youden};
use p4metric::{evaluate_all, ConfusionMatrix, MetricValue};
use proptest::prelude::*;

fn harmonic_mean(xs: &[f64]) -> f64 {
    xs.len() as f64 / xs.iter().map(|x| 1.0 / x).sum::<f64>()
}

fn matrix() -> impl Strategy<Value = ConfusionMatrix> {
    // Mix small counts (to hit zero denominators) with large ones.
    let count = prop_oneof![0u64..4, 0u64..1_000_000];
    (count.clone(), count.clone(), count.clone(), count)
        .prop_filter_map("non-empty", |(a, b, c, d)| {
            ConfusionMatrix::from_counts(a, b, c, d).ok()
        })
}

fn same(a: MetricValue, b: MetricValue) -> bool {
    a.approx_eq(&b, 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn label_swap_symmetry(c in matrix()) {
        let s = c.swap_labels();
        prop_assert!(same(p4(&c), p4(&s)));
        prop_assert!(same(mcc(&c), mcc(&s)));
        prop_assert!(same(youden(&c), youden(&s)));
        prop_assert!(same(markedness(&c), markedness(&s)));

        let (r, rs) = (basic_rates(&c), basic_rates(&s));
        prop_assert_eq!(r.prec, rs.npv);
        prop_assert_eq!(r.npv, rs.prec);
        prop_assert_eq!(r.rec, rs.spec);
        prop_assert_eq!(r.spec, rs.rec);
    }

    #[test]
    fn closed_forms_match_harmonic_means(c in matrix()) {
        let rates = basic_rates(&c).as_array().map(|v| v.value());
        if let [Some(a), Some(b), Some(s), Some(n)] = rates {
            if a > 0.0 && b > 0.0 && s > 0.0 && n > 0.0 {
                let closed = p4(&c).value().unwrap();
                prop_assert!((closed - harmonic_mean(&[a, b, s, n])).abs() <= 1e-12);
                let closed = f1(&c).value().unwrap();
                prop_assert!((closed - harmonic_mean(&[a, b])).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn p4_bounded_by_rates(c in matrix()) {
        let rates = basic_rates(&c).as_array();
        if let (Some(v), true) = (p4(&c).value(), rates.iter().all(|r| r.is_defined())) {
            let rates: Vec<f64> = rates.iter().map(|r| r.value().unwrap()).collect();
            let lo = rates.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = rates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(v <= 4.0 * lo + 1e-12);
            prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
        }
    }

    #[test]
    fn defined_values_stay_in_range(c in matrix()) {
        for (kind, v) in evaluate_all(&c).entries() {
            if let Some(x) = v.value() {
                prop_assert!(v.range().contains(x), "{:?} = {}", kind, x);
            }
        }
    }

    #[test]
    fn scaled_fields_follow_raw(c in matrix()) {
        let r = evaluate_all(&c);
        for (raw, scaled) in [(r.mcc, r.mcc_scaled), (r.j, r.j_scaled), (r.mk, r.mk_scaled)] {
            match raw.value() {
                Some(x) => prop_assert_eq!(scaled.value(), Some((x + 1.0) / 2.0)),
                None => prop_assert!(!scaled.is_defined()),
            }
        }
    }
}

#[test]
fn p4_strictly_monotone_on_small_grid() {
    let p = |c: [u64; 4]| {
        p4(&ConfusionMatrix::from_counts(c[0], c[1], c[2], c[3]).unwrap())
            .value()
            .unwrap()
    };
    for tp in 1..=12 {
        for fp in 1..=12 {
            for fn_ in 1..=12 {
                for tn in 1..=12 {
                    let base = [tp, fp, fn_, tn];
                    // Increasing in tp (index 0) and tn (3), decreasing in fp (1) and fn (2).
                    for (idx, increasing) in [(0, true), (1, false), (2, false), (3, true)] {
                        if base[idx] == 12 {
                            continue;
                        }
                        let mut next = base;
                        next[idx] += 1;
                        let (a, b) = (p(base), p(next));
                        if increasing {
                            assert!(b > a, "{base:?} -> {next:?}");
                        } else {
                            assert!(b < a, "{base:?} -> {next:?}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn f1_is_not_swap_symmetric() {
    let c1 = ConfusionMatrix::from_counts(45, 995, 5, 8955).unwrap();
    let a = f1(&c1).value().unwrap();
    let b = f1(&c1.swap_labels()).value().unwrap();
    assert!((a - b).abs() > 0.5);
}
