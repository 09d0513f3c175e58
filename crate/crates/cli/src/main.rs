mod render;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use p4metric::simulate::{balance_sweep, edge_cases, tpr_sweep, SweepSeries};
use p4metric::sweep::{optimal_threshold, paired_curve, threshold_sweep, OptimalThreshold};
use p4metric::table::{read_samples_path, report_csv_string, ReportRow, ReportTable};
use p4metric::{classify_at_threshold, evaluate_all, ConfusionMatrix, MetricKind, PairedMetric};

use render::{render_table, report_block, row_json, OutputFormat};
use svg::{PlotSpec, Series};

#[derive(Parser)]
#[command(version, about = "P4, F1, MCC and friends for binary classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Output path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render an SVG chart next to the output
    #[arg(long)]
    svg: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one confusion matrix or a scored-sample file at a threshold
    Eval {
        /// Counts as TP,FP,FN,TN
        #[arg(
            long,
            value_name = "TP,FP,FN,TN",
            allow_hyphen_values = true,
            conflicts_with = "file",
            required_unless_present = "file"
        )]
        counts: Option<String>,
        /// CSV file with a `score,label` header
        #[arg(long)]
        file: Option<PathBuf>,
        /// Threshold for file input; a sample is positive iff score > tau
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        tau: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the four edge-case matrices with all metrics
    Cases {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a simulated-classifier parameter sweep
    Simulate {
        #[arg(value_enum)]
        kind: SimulationKind,
        /// Population size
        #[arg(long, default_value_t = 10_000)]
        n: u64,
        /// Fraction of actual positives (tpr sweep)
        #[arg(long, default_value_t = 0.95, allow_hyphen_values = true)]
        pos: f64,
        /// True positive rate (balance sweep)
        #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
        tpr: f64,
        /// True negative rate
        #[arg(long, allow_hyphen_values = true)]
        tnr: Option<f64>,
        /// Grid step
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep thresholds over a scored-sample file and pick optimal thresholds
    Sweep {
        /// CSV file with a `score,label` header
        #[arg(long)]
        file: PathBuf,
        /// Threshold step
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 1.0)]
        to: f64,
        #[arg(long, value_enum, default_value_t = PairArg::Both)]
        pair: PairArg,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SimulationKind {
    Balance,
    Tpr,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PairArg {
    MccF1,
    MccP4,
    Both,
}

impl PairArg {
    fn metrics(self) -> Vec<PairedMetric> {
        match self {
            PairArg::MccF1 => vec![PairedMetric::F1],
            PairArg::MccP4 => vec![PairedMetric::P4],
            PairArg::Both => PairedMetric::ALL.to_vec(),
        }
    }
}

fn parse_counts(raw: &str) -> Result<ConfusionMatrix> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    let [tp, fp, fn_, tn] = parts.as_slice() else {
        bail!("expected four comma-separated counts TP,FP,FN,TN, got {raw:?}");
    };
    let num =
        |s: &str| -> Result<i64> { s.parse().with_context(|| format!("invalid count {s:?}")) };
    Ok(ConfusionMatrix::from_signed_counts(
        num(tp)?,
        num(fp)?,
        num(fn_)?,
        num(tn)?,
    )?)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_svg(path: &Path, plot: &PlotSpec) -> Result<()> {
    fs::write(path, plot.render()).with_context(|| format!("writing {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn svg_next_to(out: Option<&Path>) -> Result<PathBuf> {
    match out {
        Some(p) => Ok(p.with_extension("svg")),
        None => bail!("--svg requires --out"),
    }
}

fn cmd_eval(
    counts: Option<&str>,
    file: Option<&Path>,
    tau: f64,
    output: &OutputArgs,
) -> Result<()> {
    let (key_column, key, matrix) = match (counts, file) {
        (Some(raw), None) => ("case", "input".to_string(), parse_counts(raw)?),
        (None, Some(path)) => {
            let samples = read_samples_path(path)?;
            (
                "tau",
                format!("{tau}"),
                classify_at_threshold(&samples, tau)?,
            )
        }
        _ => bail!("exactly one of --counts or --file is required"),
    };
    if output.svg {
        bail!("eval does not produce charts");
    }
    let row = ReportRow {
        key,
        matrix,
        report: evaluate_all(&matrix),
    };
    let text = match output.format.unwrap_or(OutputFormat::Table) {
        OutputFormat::Table => report_block(None, &row.matrix, &row.report),
        OutputFormat::Csv => report_csv_string(&ReportTable {
            key_column: key_column.into(),
            rows: vec![row],
        }),
        OutputFormat::Json => {
            serde_json::to_string_pretty(&row_json(key_column, &row)).expect("json") + "\n"
        }
    };
    emit(&text, output.out.as_deref())
}

fn cmd_cases(output: &OutputArgs) -> Result<()> {
    if output.svg {
        bail!("cases does not produce charts");
    }
    let cases = edge_cases();
    let text = match output.format.unwrap_or(OutputFormat::Table) {
        OutputFormat::Table => cases
            .iter()
            .map(|c| {
                let title = format!("{} ({})", c.name, c.title);
                report_block(Some(&title), &c.matrix, &evaluate_all(&c.matrix))
            })
            .collect::<Vec<_>>()
            .join("\n"),
        format => {
            let table = ReportTable {
                key_column: "case".into(),
                rows: cases
                    .iter()
                    .map(|c| ReportRow {
                        key: c.name.to_string(),
                        matrix: c.matrix,
                        report: evaluate_all(&c.matrix),
                    })
                    .collect(),
            };
            render_table(&table, format)
        }
    };
    emit(&text, output.out.as_deref())
}

fn grid(lo: f64, hi: f64, step: f64, open: bool) -> Result<Vec<f64>> {
    let mut g = p4metric::sweep::threshold_grid(lo, hi, step)?;
    if open {
        g.retain(|&x| x > 0.0 && x < 1.0);
    }
    Ok(g)
}

fn series_plot(series: &SweepSeries, title: String, x_label: &str) -> PlotSpec {
    let kinds = [
        MetricKind::P4,
        MetricKind::F1,
        MetricKind::MccScaled,
        MetricKind::JScaled,
        MetricKind::MkScaled,
    ];
    PlotSpec {
        width: 720,
        height: 440,
        title,
        x_label: x_label.into(),
        y_label: "metric value".into(),
        x_range: (0.0, 1.0),
        y_range: (0.0, 1.0),
        series: kinds
            .iter()
            .map(|&k| Series {
                name: k.label().into(),
                points: series
                    .points
                    .iter()
                    .map(|p| (p.value, p.report.get(k).to_f64()))
                    .collect(),
            })
            .collect(),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    kind: SimulationKind,
    n: u64,
    pos: f64,
    tpr: f64,
    tnr: Option<f64>,
    step: f64,
    output: &OutputArgs,
) -> Result<()> {
    // Every flag is range-checked, including the one the chosen sweep varies.
    p4metric::SimulationSpec::new(n, pos, tpr, tnr.unwrap_or(0.5))?;
    let (series, plot) = match kind {
        SimulationKind::Balance => {
            let tnr = tnr.unwrap_or(0.1);
            let s = balance_sweep(n, tpr, tnr, &grid(0.0, 1.0, step, true)?)?;
            let title = format!("metrics vs positive fraction (TPR = {tpr}, TNR = {tnr}, N = {n})");
            let plot = series_plot(&s, title, "actual positives / population");
            (s, plot)
        }
        SimulationKind::Tpr => {
            let tnr = tnr.unwrap_or(0.8);
            let s = tpr_sweep(n, pos, tnr, &grid(0.0, 1.0, step, false)?)?;
            let title = format!("metrics vs TPR (positive fraction = {pos}, TNR = {tnr}, N = {n})");
            let plot = series_plot(&s, title, "true positive rate");
            (s, plot)
        }
    };
    let svg_path = output
        .svg
        .then(|| svg_next_to(output.out.as_deref()))
        .transpose()?;
    let table = ReportTable::from(&series);
    emit(
        &render_table(&table, output.format.unwrap_or(OutputFormat::Csv)),
        output.out.as_deref(),
    )?;
    if let Some(path) = svg_path {
        write_svg(&path, &plot)?;
    }
    Ok(())
}

fn optimal_line(best: &OptimalThreshold) -> String {
    format!(
        "optimal tau ({}) = {}, distance = {}",
        best.metric, best.tau, best.distance
    )
}

fn cmd_sweep(
    file: &Path,
    delta: f64,
    from: f64,
    to: f64,
    pair: PairArg,
    output: &OutputArgs,
) -> Result<()> {
    let samples = read_samples_path(file)?;
    let curve = threshold_sweep(&samples, from, to, delta)?;
    let metrics = pair.metrics();
    let paired: Vec<_> = metrics.iter().map(|&m| paired_curve(&curve, m)).collect();
    let best = paired
        .iter()
        .map(optimal_threshold)
        .collect::<Result<Vec<_>, _>>()?;

    if let Some(dir) = output.out.as_deref() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let csv = report_csv_string(&ReportTable::from(&curve));
        for m in &metrics {
            let path = dir.join(format!("curve-{}.csv", m.name()));
            fs::write(&path, &csv).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        if output.svg {
            let plot = PlotSpec {
                width: 640,
                height: 480,
                title: format!("paired threshold curves ({})", file.display()),
                x_label: "MCC'".into(),
                y_label: "F1 / P4".into(),
                x_range: (0.0, 1.0),
                y_range: (0.0, 1.0),
                series: paired
                    .iter()
                    .map(|pc| Series {
                        name: pc.metric.name().into(),
                        points: pc
                            .points
                            .iter()
                            .map(|p| (p.x.to_f64(), p.y.to_f64()))
                            .collect(),
                    })
                    .collect(),
            };
            write_svg(&dir.join("curves.svg"), &plot)?;
        }
    } else if output.svg {
        bail!("--svg requires --out");
    }

    let text = match output.format.unwrap_or(OutputFormat::Table) {
        OutputFormat::Table => best.iter().map(|b| optimal_line(b) + "\n").collect(),
        OutputFormat::Csv => {
            let mut s = String::from("pair,tau,distance,mcc_scaled,y\n");
            for b in &best {
                s += &format!("{},{},{},{},{}\n", b.metric, b.tau, b.distance, b.x, b.y);
            }
            s
        }
        OutputFormat::Json => {
            let rows: Vec<_> = best
                .iter()
                .map(|b| {
                    serde_json::json!({
                        "pair": b.metric.name(),
                        "tau": b.tau,
                        "distance": b.distance,
                        "mcc_scaled": b.x,
                        "y": b.y,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("json") + "\n"
        }
    };
    print!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Eval {
            counts,
            file,
            tau,
            output,
        } => cmd_eval(counts.as_deref(), file.as_deref(), *tau, output),
        Command::Cases { output } => cmd_cases(output),
        Command::Simulate {
            kind,
            n,
            pos,
            tpr,
            tnr,
            step,
            output,
        } => cmd_simulate(*kind, *n, *pos, *tpr, *tnr, *step, output),
        Command::Sweep {
            file,
            delta,
            from,
            to,
            pair,
            output,
        } => cmd_sweep(file, *delta, *from, *to, *pair, output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
