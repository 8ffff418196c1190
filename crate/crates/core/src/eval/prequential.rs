use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{compute_metrics, per_class_metrics, BinaryCounts, ClassMetrics, ConfusionMatrix, Metrics, WindowPoint, WindowTally};
use crate::error::{Error, Result};
use crate::learners::{argmax, Classifier};
use crate::stream::Instance;

/// Settings for one prequential run.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub window: usize,
    pub normal_class: usize,
    pub class_names: Vec<String>,
    pub model_label: String,
    pub seed: Option<u64>,
}

impl RunOptions {
    pub fn new(model_label: impl Into<String>, class_names: Vec<String>) -> Self {
        Self {
            window: 1000,
            normal_class: 0,
            class_names,
            model_label: model_label.into(),
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryReport {
    pub normal_class: String,
    pub counts: BinaryCounts,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrequentialReport {
    pub model: String,
    pub seed: Option<u64>,
    pub instances: u64,
    pub window: usize,
    /// Wall-clock seconds spent in predict and learn calls.
    pub runtime_s: f64,
    pub class_names: Vec<String>,
    pub multiclass_accuracy: Option<f64>,
    pub binary: BinaryReport,
    pub per_class: Vec<ClassMetrics>,
    pub macro_avg: Metrics,
    pub confusion_matrix: ConfusionMatrix,
    pub windowed_accuracy: Vec<WindowPoint>,
    pub config: Option<Value>,
}

/// Rounds to `digits` significant digits.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1), v).parse().unwrap_or(v)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round_sig(n.as_f64().expect("f64"), 6);
            if let Some(num) = serde_json::Number::from_f64(r) {
                *n = num;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

impl PrequentialReport {
    pub fn binary_metrics(&self) -> &Metrics {
        &self.binary.metrics
    }

    /// Pretty JSON with sorted keys and floats at 6 significant digits.
    pub fn to_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self).map_err(|e| Error::Config(e.to_string()))?;
        round_floats(&mut v);
        let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Config(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// `end_index,accuracy` rows with a header line.
    pub fn window_csv(&self) -> String {
        let mut s = String::from("end_index,accuracy\n");
        for p in &self.windowed_accuracy {
            s.push_str(&format!("{},{}\n", p.end_index, round_sig(p.accuracy, 6)));
        }
        s
    }
}

#[cfg(not(target_arch = "wasm32"))]
mod clock {
    pub struct Clock(std::time::Duration);

    impl Clock {
        pub fn new() -> Self {
            Self(std::time::Duration::ZERO)
        }

        pub fn time<T>(&mut self, f: impl FnOnce() -> T) -> T {
            let start = std::time::Instant::now();
            let out = f();
            self.0 += start.elapsed();
            out
        }

        pub fn seconds(&self) -> f64 {
            self.0.as_secs_f64()
        }
    }
}

#[cfg(target_arch = "wasm32")]
mod clock {
    pub struct Clock;

    impl Clock {
        pub fn new() -> Self {
            Self
        }

        pub fn time<T>(&mut self, f: impl FnOnce() -> T) -> T {
            f()
        }

        pub fn seconds(&self) -> f64 {
            0.0
        }
    }
}

fn check_proba(p: &[f64], n_classes: usize) -> std::result::Result<(), String> {
    if p.len() != n_classes {
        return Err(format!("probability vector has {} entries, expected {n_classes}", p.len()));
    }
    if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(format!("invalid probability vector {p:?}"));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(format!("probabilities sum to {sum}"));
    }
    Ok(())
}

/// Test-then-train over `stream`: each instance is predicted, recorded,
/// and only then learned.
pub fn prequential_run<I>(stream: I, model: &mut dyn Classifier, options: &RunOptions) -> Result<PrequentialReport>
where
    I: IntoIterator<Item = Result<Instance>>,
{
    let n_classes = model.n_classes();
    if options.window == 0 {
        return Err(Error::Config("window must be positive".into()));
    }
    let mut cm = ConfusionMatrix::new(n_classes);
    let mut tally = WindowTally::new(options.window);
    let mut clock = clock::Clock::new();
    for (index, instance) in stream.into_iter().enumerate() {
        let instance = instance?;
        let proba = clock.time(|| model.predict_proba(&instance.features));
        check_proba(&proba, n_classes).map_err(|message| Error::Model { index, message })?;
        let predicted = argmax(&proba);
        cm.update(instance.label, predicted).map_err(|e| Error::Model {
            index,
            message: e.to_string(),
        })?;
        tally.record(instance.label == predicted);
        clock.time(|| model.learn_one(&instance.features, instance.label));
    }
    let binary_counts = cm.binary_collapse(options.normal_class)?;
    let (per_class, macro_avg) = per_class_metrics(&cm, &options.class_names);
    let normal_name = options
        .class_names
        .get(options.normal_class)
        .cloned()
        .unwrap_or_else(|| options.normal_class.to_string());
    Ok(PrequentialReport {
        model: options.model_label.clone(),
        seed: options.seed,
        instances: cm.total(),
        window: options.window,
        runtime_s: clock.seconds(),
        class_names: options.class_names.clone(),
        multiclass_accuracy: (cm.total() > 0).then(|| cm.correct() as f64 / cm.total() as f64),
        binary: BinaryReport {
            normal_class: normal_name,
            counts: binary_counts,
            metrics: compute_metrics(&binary_counts),
        },
        per_class,
        macro_avg,
        confusion_matrix: cm,
        windowed_accuracy: tally.finish(),
        config: None,
    })
}
