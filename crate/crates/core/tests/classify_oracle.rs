use std::path::PathBuf;

use p4metric::table::read_samples_path;
use p4metric::{classify_at_threshold, Label, ScoredSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/scored_demo.csv")
}

/// Per-sample loop, independent of the library's tallying.
fn naive_counts(samples: &[(f64, bool)], tau: f64) -> [u64; 4] {
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for &(score, positive) in samples {
        let predicted = score > tau;
        if predicted && positive {
            tp += 1;
        } else if predicted {
            fp += 1;
        } else if positive {
            fn_ += 1;
        } else {
            tn += 1;
        }
    }
    [tp, fp, fn_, tn]
}

#[test]
fn agrees_with_naive_loop_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..40);
        let raw: Vec<(f64, bool)> = (0..n)
            .map(|_| {
                // Coarse scores so ties with tau occur.
                let s = if rng.gen_bool(0.5) {
                    f64::from(rng.gen_range(0..=20u32)) / 20.0
                } else {
                    rng.gen::<f64>()
                };
                (s, rng.gen_bool(0.4))
            })
            .collect();
        let tau = if rng.gen_bool(0.5) {
            f64::from(rng.gen_range(0..=20u32)) / 20.0
        } else {
            rng.gen::<f64>()
        };
        let samples: Vec<ScoredSample> = raw
            .iter()
            .map(|&(s, p)| {
                ScoredSample::new(s, if p { Label::Positive } else { Label::Negative }).unwrap()
            })
            .collect();
        let c = classify_at_threshold(&samples, tau).unwrap();
        assert_eq!(
            c.counts(),
            naive_counts(&raw, tau),
            "tau {tau} samples {raw:?}"
        );
        assert_eq!(c.population(), n as u64);
    }
}

#[test]
fn fixture_at_half() {
    let samples = read_samples_path(fixture()).unwrap();
    assert_eq!(samples.len(), 200);
    // Frozen from a linear scan of the fixture file.
    let frozen = [
        (0.0, [83, 117, 0, 0]),
        (0.25, [81, 60, 2, 57]),
        (0.5, [73, 10, 10, 107]),
        (0.75, [38, 0, 45, 117]),
        (1.0, [0, 0, 83, 117]),
    ];
    let raw: Vec<(f64, bool)> = samples
        .iter()
        .map(|s| (s.score(), s.label().is_positive()))
        .collect();
    for (tau, counts) in frozen {
        assert_eq!(naive_counts(&raw, tau), counts);
        assert_eq!(
            classify_at_threshold(&samples, tau).unwrap().counts(),
            counts
        );
    }
}
