//! Deterministic rate-based classifiers and parameter sweeps.
//!
//! A "simulated classifier" here is plain rate arithmetic: given a
//! population size, the fraction of actual positives and the true
//! positive/negative rates, the confusion matrix is obtained by rounding
//! (half away from zero) first the number of actual positives, then TP and
//! TN, with FN and FP as remainders.

use std::fmt;

use crate::confusion::ConfusionMatrix;
use crate::error::{Error, Result};
use crate::metrics::{evaluate_all, MetricReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationSpec {
    pub population: u64,
    pub pos_fraction: f64,
    pub tpr: f64,
    pub tnr: f64,
}

impl SimulationSpec {
    pub fn new(population: u64, pos_fraction: f64, tpr: f64, tnr: f64) -> Result<Self> {
        let spec = Self {
            population,
            pos_fraction,
            tpr,
            tnr,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(Error::InvalidParameter {
                name: "population",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        if !(self.pos_fraction > 0.0 && self.pos_fraction < 1.0) {
            return Err(Error::InvalidParameter {
                name: "pos_fraction",
                value: self.pos_fraction,
                reason: "must lie in (0, 1)",
            });
        }
        for (name, value) in [("tpr", self.tpr), ("tnr", self.tnr)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must lie in [0, 1]",
                });
            }
        }
        Ok(())
    }
}

pub fn confusion_from_rates(spec: &SimulationSpec) -> Result<ConfusionMatrix> {
    spec.validate()?;
    let n = spec.population;
    let actual_positives = ((spec.pos_fraction * n as f64).round() as u64).min(n);
    let actual_negatives = n - actual_positives;
    if actual_positives == 0 || actual_negatives == 0 {
        return Err(Error::DegeneratePopulation {
            actual_positives,
            actual_negatives,
        });
    }
    let tp = ((spec.tpr * actual_positives as f64).round() as u64).min(actual_positives);
    let tn = ((spec.tnr * actual_negatives as f64).round() as u64).min(actual_negatives);
    ConfusionMatrix::from_counts(tp, actual_negatives - tn, actual_positives - tp, tn)
}

/// A reference edge-case matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCase {
    pub name: &'static str,
    pub title: &'static str,
    pub matrix: ConfusionMatrix,
    /// Rate description that regenerates `matrix` through
    /// [`confusion_from_rates`].
    pub spec: SimulationSpec,
}

fn edge_case(
    name: &'static str,
    title: &'static str,
    counts: [u64; 4],
    (pos_fraction, tpr, tnr): (f64, f64, f64),
) -> EdgeCase {
    let [tp, fp, fn_, tn] = counts;
    EdgeCase {
        name,
        title,
        matrix: ConfusionMatrix::from_counts(tp, fp, fn_, tn).expect("non-empty"),
        spec: SimulationSpec {
            population: 10_000,
            pos_fraction,
            tpr,
            tnr,
        },
    }
}

/// The four edge cases, each with one conditional probability near zero.
///
/// C2 is C1 with labels swapped; C4 is C3 with labels swapped.
pub fn edge_cases() -> [EdgeCase; 4] {
    [
        edge_case(
            "C1",
            "alarming precision",
            [45, 995, 5, 8955],
            (0.005, 0.9, 0.9),
        ),
        edge_case(
            "C2",
            "alarming negative predictive value",
            [8955, 5, 995, 45],
            (0.995, 0.9, 0.9),
        ),
        edge_case(
            "C3",
            "alarming recall",
            [50, 9, 950, 8991],
            (0.10, 0.05, 0.999),
        ),
        edge_case(
            "C4",
            "alarming specificity",
            [8991, 950, 9, 50],
            (0.90, 0.999, 0.05),
        ),
    ]
}

/// The parameter a [`SweepSeries`] varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    PosFraction,
    Tpr,
}

impl SweepParameter {
    pub fn column(self) -> &'static str {
        match self {
            SweepParameter::PosFraction => "pos_fraction",
            SweepParameter::Tpr => "tpr",
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub value: f64,
    pub matrix: ConfusionMatrix,
    pub report: MetricReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSeries {
    pub varying: SweepParameter,
    pub population: u64,
    pub points: Vec<SeriesPoint>,
}

/// `i / 100` for `i` in `1..=99`.
pub fn default_balance_grid() -> Vec<f64> {
    (1..=99).map(|i| f64::from(i) / 100.0).collect()
}

/// `i / 100` for `i` in `0..=100`.
pub fn default_tpr_grid() -> Vec<f64> {
    (0..=100).map(|i| f64::from(i) / 100.0).collect()
}

fn check_grid(grid: &[f64], open_interval: bool) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::BadGrid("grid is empty".into()));
    }
    for &x in grid {
        let ok = if open_interval {
            x > 0.0 && x < 1.0
        } else {
            (0.0..=1.0).contains(&x)
        };
        if !ok {
            return Err(Error::BadGrid(format!("grid value {x} out of range")));
        }
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadGrid("grid must be strictly increasing".into()));
    }
    Ok(())
}

fn run_series(
    varying: SweepParameter,
    population: u64,
    grid: &[f64],
    spec_at: impl Fn(f64) -> SimulationSpec,
) -> Result<SweepSeries> {
    let points = grid
        .iter()
        .map(|&value| {
            let matrix = confusion_from_rates(&spec_at(value))?;
            Ok(SeriesPoint {
                value,
                matrix,
                report: evaluate_all(&matrix),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepSeries {
        varying,
        population,
        points,
    })
}

/// Metrics as a function of the fraction of actual positives, with fixed
/// TPR and TNR.
pub fn balance_sweep(population: u64, tpr: f64, tnr: f64, grid: &[f64]) -> Result<SweepSeries> {
    check_grid(grid, true)?;
    SimulationSpec::new(population, 0.5, tpr, tnr)?;
    run_series(
        SweepParameter::PosFraction,
        population,
        grid,
        |pos_fraction| SimulationSpec {
            population,
            pos_fraction,
            tpr,
            tnr,
        },
    )
}

/// Metrics as a function of TPR, with fixed positive fraction and TNR.
pub fn tpr_sweep(
    population: u64,
    pos_fraction: f64,
    tnr: f64,
    grid: &[f64],
) -> Result<SweepSeries> {
    check_grid(grid, false)?;
    SimulationSpec::new(population, pos_fraction, 0.5, tnr)?;
    run_series(SweepParameter::Tpr, population, grid, |tpr| {
        SimulationSpec {
            population,
            pos_fraction,
            tpr,
            tnr,
        }
    })
}
