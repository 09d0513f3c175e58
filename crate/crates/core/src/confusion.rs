//! Confusion matrices and thresholded classification.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 2x2 binary confusion matrix of exact counts.
///
/// Laid out as
///
/// ```text
/// [ TP  FP ]
/// [ FN  TN ]
/// ```
///
/// At least one count is non-zero; an all-zero matrix cannot be built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    tp: u64,
    fp: u64,
    #[serde(rename = "fn")]
    fn_: u64,
    tn: u64,
}

impl ConfusionMatrix {
    /// Builds a matrix from `(tp, fp, fn, tn)`.
    pub fn from_counts(tp: u64, fp: u64, fn_: u64, tn: u64) -> Result<Self> {
        if tp == 0 && fp == 0 && fn_ == 0 && tn == 0 {
            return Err(Error::EmptyMatrix);
        }
        Ok(Self { tp, fp, fn_, tn })
    }

    /// Same as [`from_counts`](Self::from_counts) for signed input coming
    /// from user-facing parsers, rejecting negative counts.
    pub fn from_signed_counts(tp: i64, fp: i64, fn_: i64, tn: i64) -> Result<Self> {
        let check = |field: &'static str, value: i64| {
            u64::try_from(value).map_err(|_| Error::NegativeCount { field, value })
        };
        Self::from_counts(
            check("tp", tp)?,
            check("fp", fp)?,
            check("fn", fn_)?,
            check("tn", tn)?,
        )
    }

    pub fn true_positives(&self) -> u64 {
        self.tp
    }

    pub fn false_positives(&self) -> u64 {
        self.fp
    }

    pub fn false_negatives(&self) -> u64 {
        self.fn_
    }

    pub fn true_negatives(&self) -> u64 {
        self.tn
    }

    /// Counts in `(tp, fp, fn, tn)` order.
    pub fn counts(&self) -> [u64; 4] {
        [self.tp, self.fp, self.fn_, self.tn]
    }

    pub fn actual_positives(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn actual_negatives(&self) -> u64 {
        self.fp + self.tn
    }

    pub fn predicted_positives(&self) -> u64 {
        self.tp + self.fp
    }

    pub fn predicted_negatives(&self) -> u64 {
        self.fn_ + self.tn
    }

    pub fn population(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// Relabels positives as negatives and vice versa: TP and TN trade
    /// places, as do FP and FN.
    #[must_use]
    pub fn swap_labels(&self) -> Self {
        Self {
            tp: self.tn,
            fp: self.fn_,
            fn_: self.fp,
            tn: self.tp,
        }
    }
}

impl fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TP={} FP={} FN={} TN={}",
            self.tp, self.fp, self.fn_, self.tn
        )
    }
}

/// True class of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    #[must_use]
    pub fn swap(self) -> Self {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }
}

impl FromStr for Label {
    type Err = String;

    /// Accepts `1`/`0` and `positive`/`negative` in any case.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" || s.eq_ignore_ascii_case("positive") {
            Ok(Label::Positive)
        } else if s == "0" || s.eq_ignore_ascii_case("negative") {
            Ok(Label::Negative)
        } else {
            Err(format!("unknown label {s:?}"))
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        })
    }
}

/// A classifier score (probability of the positive class) with its true label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoredSample {
    score: f64,
    label: Label,
}

impl ScoredSample {
    pub fn new(score: f64, label: Label) -> Result<Self> {
        if !(0.0..=1.0).contains(&score) {
            return Err(Error::InvalidParameter {
                name: "score",
                value: score,
                reason: "must lie in [0, 1]",
            });
        }
        Ok(Self { score, label })
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn label(&self) -> Label {
        self.label
    }

    /// Strict positivity predicate: positive iff `score > tau`.
    pub fn predicted_positive(&self, tau: f64) -> bool {
        self.score > tau
    }
}

/// Tallies samples against their labels at threshold `tau`.
///
/// A sample is predicted positive iff its score is strictly greater than
/// `tau`, so `tau = 1` yields no predicted positives.
pub fn classify_at_threshold(samples: &[ScoredSample], tau: f64) -> Result<ConfusionMatrix> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::ThresholdOutOfRange(tau));
    }
    let mut counts = [0u64; 4];
    for s in samples {
        let idx = match (s.predicted_positive(tau), s.label) {
            (true, Label::Positive) => 0,
            (true, Label::Negative) => 1,
            (false, Label::Positive) => 2,
            (false, Label::Negative) => 3,
        };
        counts[idx] += 1;
    }
    let [tp, fp, fn_, tn] = counts;
    ConfusionMatrix::from_counts(tp, fp, fn_, tn)
}
