//! Binary-classifier evaluation built around the P4 metric.
//!
//! The crate is organised in four layers:
//!
//! * [`confusion`] - exact-count confusion matrices, label swapping and
//!   thresholded classification of scored samples.
//! * [`metrics`] - precision, recall, specificity, NPV, F1, P4, Youden's J,
//!   markedness and MCC, with an explicit `Undefined` state for 0/0.
//! * [`simulate`] - deterministic rate-based classifiers, the four
//!   reference edge-case matrices and the two parameter sweeps.
//! * [`sweep`] - threshold sweeps over scored predictions, MCC-F1 / MCC-P4
//!   paired curves and optimal threshold selection.
//!
//! [`table`] holds the CSV readers and writers shared by all of the above.

pub mod confusion;
pub mod error;
pub mod metrics;
pub mod simulate;
pub mod sweep;
pub mod table;

pub use confusion::{classify_at_threshold, ConfusionMatrix, Label, ScoredSample};
pub use error::{Error, Result};
pub use metrics::{evaluate_all, MetricKind, MetricRange, MetricReport, MetricValue};
pub use simulate::{edge_cases, SimulationSpec, SweepSeries};
pub use sweep::{OptimalThreshold, PairedCurvePoint, PairedMetric, ThresholdCurve};
