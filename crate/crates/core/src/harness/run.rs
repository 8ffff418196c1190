use std::fs;
use std::path::{Path, PathBuf};

use super::ExperimentConfig;
use crate::ensemble::{build_model, ModelKind};
use crate::error::{Error, Result};
use crate::eval::{prequential_run, round_sig, PrequentialReport, RunOptions};
use crate::stream::{open_csv_stream, LabelMap};

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: PrequentialReport,
    pub report_path: PathBuf,
    pub window_path: PathBuf,
}

/// One line of `suite.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow {
    pub key: ModelKind,
    pub model: String,
    pub acc: Option<f64>,
    pub p: Option<f64>,
    pub r: Option<f64>,
    pub f1: Option<f64>,
    pub runtime_s: f64,
}

#[derive(Debug, Clone)]
pub struct SuiteOutput {
    /// Sorted by binary recall, highest first.
    pub rows: Vec<SuiteRow>,
    pub runs: Vec<RunOutput>,
    pub suite_path: PathBuf,
}

/// Runs `kind` prequentially over the configured dataset without writing
/// anything.
fn evaluate(config: &ExperimentConfig, kind: ModelKind) -> Result<PrequentialReport> {
    let schema = config.schema()?;
    let normal_class = config.normal_index(&schema)?;
    let class_names = schema.class_names().to_vec();
    let mut model = build_model(
        kind,
        &config.model.params,
        schema.feature_count(),
        class_names.len(),
        config.seed,
    )?;
    let stream = open_csv_stream(&config.dataset.path, &schema, LabelMap::for_schema(&schema))?;
    let options = RunOptions {
        window: config.window,
        normal_class,
        model_label: kind.label().to_string(),
        seed: Some(config.seed),
        class_names,
    };
    let mut report = prequential_run(stream, model.as_mut(), &options)?;
    report.config = Some(serde_json::to_value(config).map_err(|e| Error::Config(e.to_string()))?);
    Ok(report)
}

fn remove_all(paths: &[PathBuf]) {
    for p in paths {
        let _ = fs::remove_file(p);
    }
}

/// Writes `<label>.report.json` and `<label>.window.csv` under `dir`.
pub fn emit_report(report: &PrequentialReport, dir: &Path, label: &str) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let json_path = dir.join(format!("{label}.report.json"));
    let csv_path = dir.join(format!("{label}.window.csv"));
    let json = report.to_json()?;
    fs::write(&json_path, json).map_err(|e| Error::io(&json_path, e))?;
    if let Err(e) = fs::write(&csv_path, report.window_csv()) {
        remove_all(&[json_path, csv_path.clone()]);
        return Err(Error::io(csv_path, e));
    }
    Ok((json_path, csv_path))
}

/// Runs the configured model and writes its report and window series.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let report = evaluate(config, config.model_kind()?)?;
    let (report_path, window_path) = emit_report(&report, &config.output_dir, &config.run_label())?;
    Ok(RunOutput {
        report,
        report_path,
        window_path,
    })
}

/// The config a suite member runs under; identical to running that model
/// on its own.
fn member_config(config: &ExperimentConfig, kind: ModelKind) -> ExperimentConfig {
    let mut c = config.clone();
    c.model.name = kind.key().to_string();
    c.run_label = None;
    c.suite = None;
    c
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| round_sig(v, 6).to_string()).unwrap_or_default()
}

/// Runs every suite model, writes each report plus `suite.csv`. With
/// `parallel` the models run on separate threads and the runtime column is
/// renamed `runtime_s_noncomparable`.
pub fn run_suite(config: &ExperimentConfig, parallel: bool) -> Result<SuiteOutput> {
    config.validate()?;
    let kinds = config.suite_models()?;
    let configs: Vec<ExperimentConfig> = kinds.iter().map(|&k| member_config(config, k)).collect();
    let reports: Vec<Result<PrequentialReport>> = if parallel {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        let mut out = Vec::with_capacity(kinds.len());
        for chunk in configs.iter().zip(&kinds).collect::<Vec<_>>().chunks(workers) {
            std::thread::scope(|s| {
                let handles: Vec<_> = chunk
                    .iter()
                    .map(|&(c, &k)| s.spawn(move || evaluate(c, k)))
                    .collect();
                for h in handles {
                    out.push(h.join().unwrap_or_else(|_| {
                        Err(Error::Config("a suite worker panicked".into()))
                    }));
                }
            });
        }
        out
    } else {
        configs.iter().zip(&kinds).map(|(c, &k)| evaluate(c, k)).collect()
    };

    let mut written = Vec::new();
    let mut runs = Vec::new();
    for ((report, c), &kind) in reports.into_iter().zip(&configs).zip(&kinds) {
        let result = report.and_then(|r| {
            let (json, csv) = emit_report(&r, &config.output_dir, kind.key())?;
            Ok(RunOutput {
                report: r,
                report_path: json,
                window_path: csv,
            })
        });
        match result {
            Ok(run) => {
                written.push(run.report_path.clone());
                written.push(run.window_path.clone());
                runs.push(run);
            }
            Err(e) => {
                remove_all(&written);
                return Err(match e {
                    Error::Config(m) => Error::Config(format!("{}: {m}", c.model.name)),
                    other => other,
                });
            }
        }
    }

    let mut rows: Vec<SuiteRow> = runs
        .iter()
        .zip(&kinds)
        .map(|(run, &key)| {
            let m = run.report.binary.metrics;
            SuiteRow {
                key,
                model: key.label().to_string(),
                acc: m.accuracy,
                p: m.precision,
                r: m.recall,
                f1: m.f1,
                runtime_s: run.report.runtime_s,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        let key = |r: &SuiteRow| r.r.unwrap_or(f64::NEG_INFINITY);
        key(b).total_cmp(&key(a))
    });

    let runtime_header = if parallel {
        "runtime_s_noncomparable"
    } else {
        "runtime_s"
    };
    let mut csv = format!("model,acc,p,r,f1,{runtime_header}\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.model,
            fmt_opt(r.acc),
            fmt_opt(r.p),
            fmt_opt(r.r),
            fmt_opt(r.f1),
            round_sig(r.runtime_s, 6)
        ));
    }
    let suite_path = config.output_dir.join("suite.csv");
    if let Err(e) = fs::write(&suite_path, csv) {
        remove_all(&written);
        return Err(Error::io(suite_path, e));
    }
    Ok(SuiteOutput {
        rows,
        runs,
        suite_path,
    })
}
