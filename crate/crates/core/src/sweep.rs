//! Threshold sweeps over scored predictions and MCC-paired curves.
//!
//! The optimal threshold of a paired curve is the one whose point lies
//! closest (Euclidean) to the ideal corner `(1, 1)` of the unit square,
//! considering only points where both coordinates are defined. Ties go to
//! the smallest threshold.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::confusion::{classify_at_threshold, ConfusionMatrix, ScoredSample};
use crate::error::{Error, Result};
use crate::metrics::{evaluate_all, MetricReport, MetricValue};

/// Thresholds are snapped to this many decimal places so grid values
/// compare equal to the decimal literals they stand for.
const TAU_DECIMALS: i32 = 12;
const MAX_GRID_POINTS: usize = 10_000_000;

fn snap(tau: f64) -> f64 {
    let scale = 10f64.powi(TAU_DECIMALS);
    (tau * scale).round() / scale
}

/// `tau0, tau0 + delta, ...` up to and including `tau_n` exactly.
pub fn threshold_grid(tau0: f64, tau_n: f64, delta: f64) -> Result<Vec<f64>> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::BadGrid(format!(
            "step must be positive, got {delta}"
        )));
    }
    if !(0.0..=1.0).contains(&tau0) || !(0.0..=1.0).contains(&tau_n) {
        return Err(Error::BadGrid(format!(
            "thresholds must lie in [0, 1], got {tau0}..{tau_n}"
        )));
    }
    if tau0 >= tau_n {
        return Err(Error::BadGrid(format!(
            "start {tau0} must be below end {tau_n}"
        )));
    }
    let steps = ((tau_n - tau0) / delta + 1e-9).floor();
    if steps + 2.0 > MAX_GRID_POINTS as f64 {
        return Err(Error::BadGrid(format!(
            "step {delta} gives too many points"
        )));
    }
    let mut taus: Vec<f64> = (0..=steps as u64)
        .map(|i| snap(tau0 + i as f64 * delta))
        .collect();
    let last = taus.last_mut().expect("at least tau0");
    if *last >= tau_n - 1e-9 {
        *last = tau_n;
    } else {
        taus.push(tau_n);
    }
    if taus.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadGrid(format!(
            "step {delta} is below grid resolution"
        )));
    }
    Ok(taus)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub tau: f64,
    pub matrix: ConfusionMatrix,
    pub report: MetricReport,
}

/// Per-threshold matrices and reports, in increasing threshold order.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdCurve {
    pub points: Vec<CurvePoint>,
}

impl ThresholdCurve {
    pub fn taus(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.tau)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_at(&self, tau: f64) -> Option<&CurvePoint> {
        self.points.iter().find(|p| p.tau == tau)
    }
}

pub fn threshold_sweep(
    samples: &[ScoredSample],
    tau0: f64,
    tau_n: f64,
    delta: f64,
) -> Result<ThresholdCurve> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    sweep_over(samples, &threshold_grid(tau0, tau_n, delta)?)
}

/// Sweeps an explicit, strictly increasing list of thresholds.
pub fn sweep_over(samples: &[ScoredSample], taus: &[f64]) -> Result<ThresholdCurve> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    if taus.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadGrid(
            "thresholds must be strictly increasing".into(),
        ));
    }
    let points = taus
        .iter()
        .map(|&tau| {
            let matrix = classify_at_threshold(samples, tau)?;
            Ok(CurvePoint {
                tau,
                matrix,
                report: evaluate_all(&matrix),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ThresholdCurve { points })
}

/// The metric plotted against MCC' in a paired curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairedMetric {
    F1,
    P4,
}

impl PairedMetric {
    pub const ALL: [PairedMetric; 2] = [PairedMetric::F1, PairedMetric::P4];

    pub fn name(self) -> &'static str {
        match self {
            PairedMetric::F1 => "mcc-f1",
            PairedMetric::P4 => "mcc-p4",
        }
    }

    fn pick(self, report: &MetricReport) -> MetricValue {
        match self {
            PairedMetric::F1 => report.f1,
            PairedMetric::P4 => report.p4,
        }
    }
}

impl fmt::Display for PairedMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PairedMetric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mcc-f1" | "f1" => Ok(PairedMetric::F1),
            "mcc-p4" | "p4" => Ok(PairedMetric::P4),
            other => Err(format!("unknown metric pair {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedCurvePoint {
    pub tau: f64,
    /// MCC'
    pub x: MetricValue,
    /// F1 or P4
    pub y: MetricValue,
}

impl PairedCurvePoint {
    /// Both coordinates defined; undefined points are kept in the curve
    /// but never selected as optimal.
    pub fn is_defined(&self) -> bool {
        self.x.is_defined() && self.y.is_defined()
    }

    /// Distance to `(1, 1)`, if both coordinates are defined.
    pub fn distance_to_ideal(&self) -> Option<f64> {
        let (x, y) = (self.x.value()?, self.y.value()?);
        Some((1.0 - x).hypot(1.0 - y))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairedCurve {
    pub metric: PairedMetric,
    pub points: Vec<PairedCurvePoint>,
}

pub fn paired_curve(curve: &ThresholdCurve, metric: PairedMetric) -> PairedCurve {
    let points = curve
        .points
        .iter()
        .map(|p| PairedCurvePoint {
            tau: p.tau,
            x: p.report.mcc_scaled,
            y: metric.pick(&p.report),
        })
        .collect();
    PairedCurve { metric, points }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalThreshold {
    pub tau: f64,
    pub distance: f64,
    pub metric: PairedMetric,
    pub x: f64,
    pub y: f64,
}

pub fn optimal_threshold(curve: &PairedCurve) -> Result<OptimalThreshold> {
    curve
        .points
        .iter()
        .filter_map(|p| Some((p.distance_to_ideal()?, p)))
        .min_by(|(da, a), (db, b)| {
            da.partial_cmp(db)
                .unwrap_or(Ordering::Equal)
                .then(a.tau.total_cmp(&b.tau))
        })
        .map(|(distance, p)| OptimalThreshold {
            tau: p.tau,
            distance,
            metric: curve.metric,
            x: p.x.to_f64(),
            y: p.y.to_f64(),
        })
        .ok_or(Error::NoDefinedPoints)
}
