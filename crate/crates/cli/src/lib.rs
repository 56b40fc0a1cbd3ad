//! Command-line front end. Every verb is a thin shell over `milstab-core`.
//!
//! Exit codes: 0 success, 1 I/O failure while writing output, 2 invalid
//! input (config, report, data, unknown classifier), 3 a classifier failed on
//! every replicate.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use milstab_core::evaluation::pareto_frontier;
use milstab_core::mildata::{generate_synthetic, load_dataset, write_dataset, write_instance_labels, SynthConfig};
use milstab_core::stability::positiveness_histogram;
use milstab_core::{ExperimentConfig, InstanceLabeling, Measure, StabilityReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TOTAL_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "milstab", version, about = "MIL classifiers and instance-label stability")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    #[value(name = "s")]
    S,
    #[value(name = "s+")]
    SPlus,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::S => Measure::Agreement,
            MeasureArg::SPlus => Measure::PositiveAgreement,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the resampling experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// AUC vs stability table with Pareto-frontier membership.
    Pareto {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "s+")]
        measure: MeasureArg,
    },
    /// Pairwise S and S+ matrices of one classifier as CSV.
    Matrix {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        classifier: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-instance positiveness counts and their histogram as CSV.
    Histogram {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        classifier: String,
        #[arg(long)]
        out: PathBuf,
        /// Restrict to the instances of one test bag.
        #[arg(long)]
        bag: Option<String>,
    },
    /// Generate a synthetic dataset from a JSON config.
    Synth {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long = "labels-out")]
        labels_out: PathBuf,
    },
    /// Summarize a dataset file.
    Inspect {
        #[arg(long)]
        data: PathBuf,
    },
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

type CliResult = Result<i32, CliError>;

/// Dispatches one parsed command, writing human-readable output to `stdout`.
pub fn execute(cli: Cli, stdout: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Run { config, out } => cmd_run(&config, &out, stdout),
        Command::Pareto {
            report,
            csv,
            measure,
        } => cmd_pareto(&report, csv.as_deref(), measure.into(), stdout),
        Command::Matrix {
            report,
            classifier,
            out,
        } => cmd_matrix(&report, &classifier, &out),
        Command::Histogram {
            report,
            classifier,
            out,
            bag,
        } => cmd_histogram(&report, &classifier, &out, bag.as_deref()),
        Command::Synth {
            config,
            out,
            labels_out,
        } => cmd_synth(&config, &out, &labels_out),
        Command::Inspect { data } => cmd_inspect(&data, stdout),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "n/a".into())
}

fn out_err(e: std::io::Error) -> CliError {
    CliError {
        code: EXIT_IO,
        message: format!("stdout: {e}"),
    }
}

pub fn cmd_run(config: &Path, out: &Path, stdout: &mut dyn Write) -> CliResult {
    let text = read_text(config)?;
    let mut cfg = ExperimentConfig::from_json(&text).map_err(|e| CliError::input(e.to_string()))?;
    cfg.resolve_paths(config.parent().unwrap_or(Path::new(".")));
    let dataset = cfg.load_data().map_err(|e| CliError::input(e.to_string()))?;
    let report = milstab_core::run_experiment_on(&cfg, &dataset, milstab_core::Execution::Parallel)
        .map_err(|e| CliError::input(e.to_string()))?;
    let bytes = report.to_json().map_err(|e| CliError::io(out, e))?;
    write_bytes(out, &bytes)?;

    for c in &report.classifiers {
        writeln!(
            stdout,
            "{}\tauc={}\tS={}\tS+={}\tfailed={}/{}",
            c.name,
            fmt_opt(c.mean_auc),
            fmt_opt(c.mean_s),
            fmt_opt(c.mean_s_plus),
            c.failed_replicates,
            c.replicates.len()
        )
        .map_err(out_err)?;
    }
    if report.has_total_failure() {
        let names: Vec<&str> = report
            .classifiers
            .iter()
            .filter(|c| c.all_failed())
            .map(|c| c.name.as_str())
            .collect();
        return Err(CliError {
            code: EXIT_TOTAL_FAILURE,
            message: format!("every replicate failed for: {}", names.join(", ")),
        });
    }
    Ok(EXIT_OK)
}

pub fn load_report(path: &Path) -> Result<StabilityReport, CliError> {
    let text = read_text(path)?;
    StabilityReport::from_json(&text)
        .map_err(|e| CliError::input(format!("{}: invalid report: {e}", path.display())))
}

fn measure_label(m: Measure) -> &'static str {
    match m {
        Measure::Agreement => "S",
        Measure::PositiveAgreement => "S+",
    }
}

/// Pareto rows `(classifier, auc, stability, on_frontier)`, baseline last.
pub fn pareto_rows(report: &StabilityReport, measure: Measure) -> Result<Vec<(String, f64, f64, bool)>, CliError> {
    let points = report.pareto_points(measure);
    let result = pareto_frontier(&points).map_err(|e| CliError::input(e.to_string()))?;
    Ok(points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.id.clone(), p.auc, p.stability, result.is_on_frontier(i)))
        .collect())
}

pub fn cmd_pareto(report: &Path, csv_out: Option<&Path>, measure: Measure, stdout: &mut dyn Write) -> CliResult {
    let report = load_report(report)?;
    let rows = pareto_rows(&report, measure)?;
    let label = measure_label(measure);
    writeln!(stdout, "{:<24} {:>8} {:>8} frontier", "classifier", "auc", label).map_err(out_err)?;
    for (name, auc, stab, on) in &rows {
        writeln!(stdout, "{name:<24} {auc:>8.4} {stab:>8.4} {}", if *on { "*" } else { "" })
            .map_err(out_err)?;
    }
    if let Some(path) = csv_out {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = ["classifier", "auc", "stability", "measure", "on_frontier"];
        w.write_record(header).map_err(|e| CliError::io(path, e))?;
        for (name, auc, stab, on) in &rows {
            w.write_record([
                name.as_str(),
                &auc.to_string(),
                &stab.to_string(),
                label,
                if *on { "1" } else { "0" },
            ])
            .map_err(|e| CliError::io(path, e))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::io(path, e))?;
        write_bytes(path, &bytes)?;
    }
    Ok(EXIT_OK)
}

fn find_classifier<'a>(
    report: &'a StabilityReport,
    name: &str,
) -> Result<&'a milstab_core::evaluation::ClassifierReport, CliError> {
    report.classifier(name).ok_or_else(|| {
        CliError::input(format!(
            "unknown classifier {name:?}; available: {}",
            report.classifier_names().join(", ")
        ))
    })
}

pub fn cmd_matrix(report: &Path, classifier: &str, out: &Path) -> CliResult {
    let report = load_report(report)?;
    let c = find_classifier(&report, classifier)?;
    let (Some(s), Some(sp)) = (&c.s_matrix, &c.s_plus_matrix) else {
        return Err(CliError::input(format!(
            "classifier {classifier} has fewer than two successful replicates"
        )));
    };
    let r = s.len();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["measure".to_string(), "replicate".to_string()];
    header.extend((0..r).map(|j| format!("r{j}")));
    w.write_record(&header).map_err(|e| CliError::io(out, e))?;
    for (label, m) in [("S", s), ("S+", sp)] {
        for (i, row) in m.iter().enumerate() {
            let mut rec = vec![label.to_string(), i.to_string()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(|e| CliError::io(out, e))?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::io(out, e))?;
    write_bytes(out, &bytes)?;
    Ok(EXIT_OK)
}

pub fn cmd_histogram(report: &Path, classifier: &str, out: &Path, bag: Option<&str>) -> CliResult {
    let report = load_report(report)?;
    let c = find_classifier(&report, classifier)?;
    let offsets = report.bag_offsets();
    let ranges: Vec<(String, std::ops::Range<usize>)> = match bag {
        None => offsets,
        Some(id) => vec![offsets
            .into_iter()
            .find(|(b, _)| b == id)
            .ok_or_else(|| CliError::input(format!("unknown test bag {id:?}")))?],
    };
    let labelings: Vec<InstanceLabeling> = c
        .replicates
        .iter()
        .filter_map(|r| {
            let labels = r.instance_labels.as_ref()?;
            Some(InstanceLabeling {
                replicate: r.index,
                labels: ranges.iter().flat_map(|(_, rg)| labels[rg.clone()].iter().copied()).collect(),
            })
        })
        .collect();
    let pos = positiveness_histogram(&labelings).map_err(|e| CliError::input(e.to_string()))?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["section", "index", "bag_id", "value"])
        .map_err(|e| CliError::io(out, e))?;
    let mut counts = pos.counts.iter();
    for (bag_id, rg) in &ranges {
        for k in rg.clone() {
            let count = counts.next().expect("one count per instance");
            w.write_record(["instance", &k.to_string(), bag_id, &count.to_string()])
                .map_err(|e| CliError::io(out, e))?;
        }
    }
    for (value, n) in pos.histogram.iter().enumerate() {
        w.write_record(["bin", &value.to_string(), "", &n.to_string()])
            .map_err(|e| CliError::io(out, e))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io(out, e))?;
    write_bytes(out, &bytes)?;
    Ok(EXIT_OK)
}

pub fn cmd_synth(config: &Path, out: &Path, labels_out: &Path) -> CliResult {
    let text = read_text(config)?;
    let cfg: SynthConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", config.display())))?;
    let data = generate_synthetic(&cfg).map_err(|e| CliError::input(e.to_string()))?;
    let mut buf = Vec::new();
    write_dataset(&data.dataset, &mut buf).map_err(|e| CliError::io(out, e))?;
    write_bytes(out, &buf)?;
    let mut buf = Vec::new();
    write_instance_labels(&data.dataset, &data.instance_labels, &mut buf)
        .map_err(|e| CliError::io(labels_out, e))?;
    write_bytes(labels_out, &buf)?;
    Ok(EXIT_OK)
}

pub fn cmd_inspect(data: &Path, stdout: &mut dyn Write) -> CliResult {
    let ds = load_dataset(data).map_err(|e| CliError::input(e.to_string()))?;
    let (min, max) = ds.bag_size_range();
    writeln!(stdout, "dataset\tbags\tinstances\tinst per bag\tfeatures").map_err(out_err)?;
    writeln!(
        stdout,
        "{}\t{}+, {}-\t{}\t{} to {}\t{}",
        ds.name,
        ds.n_positive(),
        ds.n_negative(),
        ds.n_instances(),
        min,
        max,
        ds.d
    )
    .map_err(out_err)?;
    Ok(EXIT_OK)
}
