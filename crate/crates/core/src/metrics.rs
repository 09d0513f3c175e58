//! Basic rates, composite metrics and the per-matrix report.
//!
//! Every metric with a zero denominator evaluates to
//! an undefined [`MetricValue`] rather than being coerced to 0 or 1.
//! F1 and P4 use their closed forms on exact integer counts, so they stay
//! defined (and equal to 0) when a component rate is 0 even if another
//! component rate is undefined.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::confusion::ConfusionMatrix;
use crate::error::{Error, Result};

/// Interval a metric is declared on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricRange {
    /// `[0, 1]`
    Unit,
    /// `[-1, 1]`
    Signed,
}

impl MetricRange {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            MetricRange::Unit => (0.0, 1.0),
            MetricRange::Signed => (-1.0, 1.0),
        }
    }

    pub fn contains(self, v: f64) -> bool {
        let (lo, hi) = self.bounds();
        (lo..=hi).contains(&v)
    }
}

/// A metric value on a declared range, or undefined (0/0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    value: Option<f64>,
    range: MetricRange,
}

impl MetricValue {
    /// A defined value. Floating error that pushes the value just outside
    /// the declared range is clamped back into it.
    pub fn defined(value: f64, range: MetricRange) -> Self {
        let (lo, hi) = range.bounds();
        debug_assert!(
            value >= lo - 1e-9 && value <= hi + 1e-9,
            "{value} outside {range:?}"
        );
        Self {
            value: Some(value.clamp(lo, hi)),
            range,
        }
    }

    pub fn undefined(range: MetricRange) -> Self {
        Self { value: None, range }
    }

    /// `num / den`, undefined when `den == 0`.
    fn ratio(num: u128, den: u128, range: MetricRange) -> Self {
        if den == 0 {
            Self::undefined(range)
        } else {
            Self::defined(num as f64 / den as f64, range)
        }
    }

    pub fn value(&self) -> Option<f64> {
        self.value
    }

    pub fn is_defined(&self) -> bool {
        self.value.is_some()
    }

    pub fn range(&self) -> MetricRange {
        self.range
    }

    /// The value, or NaN when undefined.
    pub fn to_f64(&self) -> f64 {
        self.value.unwrap_or(f64::NAN)
    }

    /// Four decimal places (half-to-even on the exact binary value), `n/a`
    /// when undefined.
    pub fn display_4dp(&self) -> String {
        match self.value {
            Some(v) => format!("{v:.4}"),
            None => "n/a".to_string(),
        }
    }

    /// Shortest decimal that round-trips to the same `f64`; `nan` when
    /// undefined.
    pub fn display_exact(&self) -> String {
        match self.value {
            Some(v) => format!("{v}"),
            None => "nan".to_string(),
        }
    }

    /// Same state and, when defined, values within `tol`.
    pub fn approx_eq(&self, other: &MetricValue, tol: f64) -> bool {
        match (self.value, other.value) {
            (Some(a), Some(b)) => (a - b).abs() <= tol,
            (None, None) => true,
            _ => false,
        }
    }

    fn map2(
        a: MetricValue,
        b: MetricValue,
        range: MetricRange,
        f: impl Fn(f64, f64) -> f64,
    ) -> Self {
        match (a.value, b.value) {
            (Some(x), Some(y)) => Self::defined(f(x, y), range),
            _ => Self::undefined(range),
        }
    }
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_exact())
    }
}

impl Serialize for MetricValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.value {
            Some(v) => serializer.serialize_f64(v),
            None => serializer.serialize_str("nan"),
        }
    }
}

/// The four conditional probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasicRates {
    /// P(+ | C+)
    pub prec: MetricValue,
    /// P(C+ | +)
    pub rec: MetricValue,
    /// P(C- | -)
    pub spec: MetricValue,
    /// P(- | C-)
    pub npv: MetricValue,
}

impl BasicRates {
    pub fn as_array(&self) -> [MetricValue; 4] {
        [self.prec, self.rec, self.spec, self.npv]
    }
}

pub fn basic_rates(c: &ConfusionMatrix) -> BasicRates {
    let [tp, fp, fn_, tn] = c.counts().map(u128::from);
    let unit = MetricRange::Unit;
    BasicRates {
        prec: MetricValue::ratio(tp, tp + fp, unit),
        rec: MetricValue::ratio(tp, tp + fn_, unit),
        spec: MetricValue::ratio(tn, tn + fp, unit),
        npv: MetricValue::ratio(tn, tn + fn_, unit),
    }
}

pub fn precision(c: &ConfusionMatrix) -> MetricValue {
    basic_rates(c).prec
}

pub fn recall(c: &ConfusionMatrix) -> MetricValue {
    basic_rates(c).rec
}

pub fn specificity(c: &ConfusionMatrix) -> MetricValue {
    basic_rates(c).spec
}

pub fn npv(c: &ConfusionMatrix) -> MetricValue {
    basic_rates(c).npv
}

/// `TP / (TP + (FP + FN) / 2)`, evaluated as `2TP / (2TP + FP + FN)`.
pub fn f1(c: &ConfusionMatrix) -> MetricValue {
    let [tp, fp, fn_, _] = c.counts().map(u128::from);
    MetricValue::ratio(2 * tp, 2 * tp + fp + fn_, MetricRange::Unit)
}

/// `4·TP·TN / (4·TP·TN + (TP + TN)(FP + FN))`.
///
/// Equal to the harmonic mean of precision, recall, specificity and NPV
/// whenever all four are defined and positive.
pub fn p4(c: &ConfusionMatrix) -> MetricValue {
    let [tp, fp, fn_, tn] = c.counts().map(u128::from);
    let exact = (|| {
        let num = tp.checked_mul(tn)?.checked_mul(4)?;
        let den = (tp + tn).checked_mul(fp + fn_)?.checked_add(num)?;
        Some((num, den))
    })();
    match exact {
        Some((num, den)) => MetricValue::ratio(num, den, MetricRange::Unit),
        None => {
            // Only reachable for counts near u64::MAX.
            let [tp, fp, fn_, tn] = [tp, fp, fn_, tn].map(|x| x as f64);
            let num = 4.0 * tp * tn;
            MetricValue::defined(num / (num + (tp + tn) * (fp + fn_)), MetricRange::Unit)
        }
    }
}

/// Youden's J (informedness): `REC + SPEC - 1`.
pub fn youden(c: &ConfusionMatrix) -> MetricValue {
    let r = basic_rates(c);
    MetricValue::map2(r.rec, r.spec, MetricRange::Signed, |a, b| a + b - 1.0)
}

/// Markedness: `PREC + NPV - 1`.
pub fn markedness(c: &ConfusionMatrix) -> MetricValue {
    let r = basic_rates(c);
    MetricValue::map2(r.prec, r.npv, MetricRange::Signed, |a, b| a + b - 1.0)
}

/// Matthews correlation coefficient.
///
/// Numerator and radicand are exact integers; a single floating square root
/// is taken at the end. Undefined iff any marginal total is zero.
pub fn mcc(c: &ConfusionMatrix) -> MetricValue {
    let [tp, fp, fn_, tn] = c.counts().map(u128::from);
    let marginals = [tp + fp, tp + fn_, tn + fp, tn + fn_];
    if marginals.contains(&0) {
        return MetricValue::undefined(MetricRange::Signed);
    }
    let (agree, disagree) = (tp * tn, fp * fn_);
    let numerator = if agree >= disagree {
        (agree - disagree) as f64
    } else {
        -((disagree - agree) as f64)
    };
    let radicand = marginals
        .iter()
        .try_fold(1u128, |acc, &m| acc.checked_mul(m));
    let denominator = match radicand {
        Some(r) => (r as f64).sqrt(),
        // Radicand beyond 2^128: fall back to a product of square roots.
        None => marginals.iter().map(|&m| (m as f64).sqrt()).product(),
    };
    MetricValue::defined(numerator / denominator, MetricRange::Signed)
}

/// Maps a `[-1, 1]` metric onto `[0, 1]` via `(v + 1) / 2`.
pub fn scale_to_unit(v: MetricValue) -> Result<MetricValue> {
    if v.range != MetricRange::Signed {
        return Err(Error::RangeMismatch);
    }
    Ok(match v.value {
        Some(x) => MetricValue::defined((x + 1.0) / 2.0, MetricRange::Unit),
        None => MetricValue::undefined(MetricRange::Unit),
    })
}

/// Every metric column, in report/CSV order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Prec,
    Rec,
    Spec,
    Npv,
    F1,
    P4,
    Mcc,
    MccScaled,
    J,
    JScaled,
    Mk,
    MkScaled,
}

impl MetricKind {
    pub const ALL: [MetricKind; 12] = [
        MetricKind::Prec,
        MetricKind::Rec,
        MetricKind::Spec,
        MetricKind::Npv,
        MetricKind::F1,
        MetricKind::P4,
        MetricKind::Mcc,
        MetricKind::MccScaled,
        MetricKind::J,
        MetricKind::JScaled,
        MetricKind::Mk,
        MetricKind::MkScaled,
    ];

    /// Column name in CSV/JSON output.
    pub fn column(self) -> &'static str {
        match self {
            MetricKind::Prec => "prec",
            MetricKind::Rec => "rec",
            MetricKind::Spec => "spec",
            MetricKind::Npv => "npv",
            MetricKind::F1 => "f1",
            MetricKind::P4 => "p4",
            MetricKind::Mcc => "mcc",
            MetricKind::MccScaled => "mcc_scaled",
            MetricKind::J => "j",
            MetricKind::JScaled => "j_scaled",
            MetricKind::Mk => "mk",
            MetricKind::MkScaled => "mk_scaled",
        }
    }

    /// Human label used in tables.
    pub fn label(self) -> &'static str {
        match self {
            MetricKind::Prec => "PREC",
            MetricKind::Rec => "REC",
            MetricKind::Spec => "SPEC",
            MetricKind::Npv => "NPV",
            MetricKind::F1 => "F1",
            MetricKind::P4 => "P4",
            MetricKind::Mcc => "MCC",
            MetricKind::MccScaled => "MCC'",
            MetricKind::J => "J",
            MetricKind::JScaled => "J'",
            MetricKind::Mk => "MK",
            MetricKind::MkScaled => "MK'",
        }
    }

    pub fn range(self) -> MetricRange {
        match self {
            MetricKind::Mcc | MetricKind::J | MetricKind::Mk => MetricRange::Signed,
            _ => MetricRange::Unit,
        }
    }

    pub fn from_column(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.column() == name)
    }
}

/// All basic and composite metrics for one matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricReport {
    pub prec: MetricValue,
    pub rec: MetricValue,
    pub spec: MetricValue,
    pub npv: MetricValue,
    pub f1: MetricValue,
    pub p4: MetricValue,
    pub mcc: MetricValue,
    pub mcc_scaled: MetricValue,
    pub j: MetricValue,
    pub j_scaled: MetricValue,
    pub mk: MetricValue,
    pub mk_scaled: MetricValue,
}

impl MetricReport {
    pub fn get(&self, kind: MetricKind) -> MetricValue {
        match kind {
            MetricKind::Prec => self.prec,
            MetricKind::Rec => self.rec,
            MetricKind::Spec => self.spec,
            MetricKind::Npv => self.npv,
            MetricKind::F1 => self.f1,
            MetricKind::P4 => self.p4,
            MetricKind::Mcc => self.mcc,
            MetricKind::MccScaled => self.mcc_scaled,
            MetricKind::J => self.j,
            MetricKind::JScaled => self.j_scaled,
            MetricKind::Mk => self.mk,
            MetricKind::MkScaled => self.mk_scaled,
        }
    }

    /// `(kind, value)` pairs in column order.
    pub fn entries(&self) -> impl Iterator<Item = (MetricKind, MetricValue)> + '_ {
        MetricKind::ALL.into_iter().map(|k| (k, self.get(k)))
    }
}

pub fn evaluate_all(c: &ConfusionMatrix) -> MetricReport {
    let rates = basic_rates(c);
    let mcc = mcc(c);
    let j = youden(c);
    let mk = markedness(c);
    let scaled = |v| scale_to_unit(v).expect("signed metric");
    MetricReport {
        prec: rates.prec,
        rec: rates.rec,
        spec: rates.spec,
        npv: rates.npv,
        f1: f1(c),
        p4: p4(c),
        mcc,
        mcc_scaled: scaled(mcc),
        j,
        j_scaled: scaled(j),
        mk,
        mk_scaled: scaled(mk),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(tp: u64, fp: u64, fn_: u64, tn: u64) -> ConfusionMatrix {
        ConfusionMatrix::from_counts(tp, fp, fn_, tn).unwrap()
    }

    fn v(x: MetricValue) -> f64 {
        x.value().expect("defined")
    }

    fn close4(x: MetricValue, expected: f64) {
        let got = v(x);
        assert!(
            (got - expected).abs() <= 0.5e-4 + 1e-12,
            "{got} vs {expected}"
        );
    }

    #[test]
    fn case_one_rates() {
        let r = basic_rates(&m(45, 995, 5, 8955));
        close4(r.prec, 0.0433);
        close4(r.rec, 0.9000);
        close4(r.spec, 0.9000);
        close4(r.npv, 0.9994);
    }

    #[test]
    fn case_three_rates() {
        let r = basic_rates(&m(50, 9, 950, 8991));
        close4(r.prec, 0.8475);
        close4(r.rec, 0.0500);
        close4(r.spec, 0.9990);
        close4(r.npv, 0.9044);
    }

    #[test]
    fn perfect_classifier() {
        let c = m(5, 0, 0, 5);
        for r in basic_rates(&c).as_array() {
            assert_eq!(v(r), 1.0);
        }
        assert_eq!(v(f1(&c)), 1.0);
        assert_eq!(v(p4(&m(50, 0, 0, 50))), 1.0);
        assert_eq!(v(youden(&c)), 1.0);
        assert_eq!(v(markedness(&c)), 1.0);
        assert_eq!(v(mcc(&c)), 1.0);
    }

    #[test]
    fn composite_values() {
        close4(f1(&m(45, 995, 5, 8955)), 0.0826);
        close4(f1(&m(8955, 5, 995, 45)), 0.9471);
        close4(p4(&m(45, 995, 5, 8955)), 0.1519);
        close4(p4(&m(50, 9, 950, 8991)), 0.1718);

        let c1 = m(45, 995, 5, 8955);
        close4(scale_to_unit(youden(&c1)).unwrap(), 0.9000);
        close4(scale_to_unit(markedness(&c1)).unwrap(), 0.5214);
        close4(mcc(&c1), 0.1848);
        close4(scale_to_unit(mcc(&c1)).unwrap(), 0.5924);

        let c3 = m(50, 9, 950, 8991);
        close4(scale_to_unit(youden(&c3)).unwrap(), 0.5245);
        close4(scale_to_unit(markedness(&c3)).unwrap(), 0.8759);
        close4(scale_to_unit(mcc(&c3)).unwrap(), 0.5960);
    }

    #[test]
    fn uninformative_mcc_is_zero() {
        assert_eq!(v(mcc(&m(1, 1, 1, 1))), 0.0);
    }

    #[test]
    fn undefined_states() {
        // No predicted positives: precision 0/0.
        let c = m(0, 0, 4, 6);
        let r = basic_rates(&c);
        assert!(!r.prec.is_defined());
        assert_eq!(v(r.rec), 0.0);
        assert!(!mcc(&c).is_defined());
        assert!(!markedness(&c).is_defined());
        assert_eq!(v(youden(&c)), 0.0);
        // Closed forms still give 0.
        assert_eq!(v(f1(&c)), 0.0);
        assert_eq!(v(p4(&c)), 0.0);

        // Only true negatives: F1 is 0/0, P4 is 0/0.
        let c = m(0, 0, 0, 9);
        assert!(!f1(&c).is_defined());
        assert!(!p4(&c).is_defined());
    }

    #[test]
    fn scale_endpoints_and_mismatch() {
        let one = MetricValue::defined(1.0, MetricRange::Signed);
        let minus = MetricValue::defined(-1.0, MetricRange::Signed);
        assert_eq!(v(scale_to_unit(one).unwrap()), 1.0);
        assert_eq!(v(scale_to_unit(minus).unwrap()), 0.0);
        let undef = scale_to_unit(MetricValue::undefined(MetricRange::Signed)).unwrap();
        assert!(!undef.is_defined());
        assert_eq!(undef.range(), MetricRange::Unit);
        assert_eq!(
            scale_to_unit(MetricValue::defined(0.5, MetricRange::Unit)),
            Err(Error::RangeMismatch)
        );
    }

    #[test]
    fn symmetric_fixed_point_report() {
        let r = evaluate_all(&m(7, 3, 3, 7));
        assert_eq!(r.prec, r.npv);
        assert_eq!(r.rec, r.spec);
        // All four rates equal 0.7, so F1 and P4 coincide.
        assert!(r.f1.approx_eq(&r.p4, 1e-15));
        close4(r.p4, 0.7);
    }

    #[test]
    fn four_decimal_display_rounds_half_to_even() {
        let d = |x| MetricValue::defined(x, MetricRange::Unit).display_4dp();
        assert_eq!(d(0.03125), "0.0312");
        assert_eq!(d(0.15189), "0.1519");
        assert_eq!(
            MetricValue::undefined(MetricRange::Unit).display_4dp(),
            "n/a"
        );
        assert_eq!(
            MetricValue::undefined(MetricRange::Unit).display_exact(),
            "nan"
        );
    }

    #[test]
    fn metric_kind_columns_round_trip() {
        for k in MetricKind::ALL {
            assert_eq!(MetricKind::from_column(k.column()), Some(k));
        }
    }

    #[test]
    fn mcc_survives_large_populations() {
        let c = m(4_000_000_000, 1_000_000_000, 2_000_000_000, 3_000_000_000);
        let got = v(mcc(&c));
        let (tp, fp, fn_, tn) = (4e9f64, 1e9, 2e9, 3e9);
        let expected =
            (tp * tn - fp * fn_) / ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt();
        assert!((got - expected).abs() < 1e-12);
    }
}
