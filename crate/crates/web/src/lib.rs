//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each export takes plain numbers and returns a JSON string produced by
//! the plain Rust function of the same name, which the native tests cover.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;
use wsnids::drift::Adwin;
use wsnids::ensemble::{build_model, Hyperparams, ModelKind};
use wsnids::eval::{prequential_run, RunOptions, WindowPoint};
use wsnids::stream::{generate_drift_stream, DriftStreamSpec};
use wsnids::tree::hoeffding_bound;

#[derive(Debug, Serialize, PartialEq)]
pub struct AdwinTrace {
    /// Window mean after each value.
    pub mean: Vec<f64>,
    /// Window length after each value.
    pub width: Vec<u64>,
    /// Positions (0-based) where the window shrank.
    pub detections: Vec<usize>,
}

/// Feeds ADWIN a Bernoulli stream whose rate jumps from `p_before` to
/// `p_after` at `change_at`.
pub fn adwin_trace(
    p_before: f64,
    p_after: f64,
    change_at: usize,
    length: usize,
    delta: f64,
    seed: u64,
) -> Result<AdwinTrace, String> {
    for p in [p_before, p_after] {
        if !(0.0..=1.0).contains(&p) {
            return Err(format!("rate {p} outside [0, 1]"));
        }
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(format!("delta {delta} outside (0, 1)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adwin = Adwin::new(delta);
    let mut trace = AdwinTrace {
        mean: Vec::with_capacity(length),
        width: Vec::with_capacity(length),
        detections: Vec::new(),
    };
    for t in 0..length {
        let p = if t < change_at { p_before } else { p_after };
        let v = if rng.gen::<f64>() < p { 1.0 } else { 0.0 };
        if adwin.add(v).map_err(|e| e.to_string())? {
            trace.detections.push(t);
        }
        trace.mean.push(adwin.estimate());
        trace.width.push(adwin.len());
    }
    Ok(trace)
}

#[derive(Debug, Serialize)]
pub struct Curve {
    pub model: String,
    pub points: Vec<WindowPoint>,
}

/// Windowed prequential accuracy of each model on a two-feature stream whose
/// labels invert at `switch_at`.
pub fn drift_curves(
    models: &[ModelKind],
    length: u64,
    switch_at: u64,
    noise: f64,
    window: usize,
    seed: u64,
) -> Result<Vec<Curve>, String> {
    let spec = DriftStreamSpec::inversion(switch_at, noise, seed);
    let mut curves = Vec::new();
    for &kind in models {
        let stream = generate_drift_stream(&spec, length).map_err(|e| e.to_string())?;
        let mut model = build_model(kind, &Hyperparams::default(), 2, 2, seed).map_err(|e| e.to_string())?;
        let options = RunOptions {
            window,
            ..RunOptions::new(kind.label(), vec!["0".into(), "1".into()])
        };
        let report = prequential_run(stream.map(Ok), model.as_mut(), &options).map_err(|e| e.to_string())?;
        curves.push(Curve {
            model: kind.label().to_string(),
            points: report.windowed_accuracy,
        });
    }
    Ok(curves)
}

/// `(n, epsilon)` pairs of the Hoeffding bound for information gain over
/// `n_classes` classes.
pub fn bound_curve(n_classes: usize, delta: f64, max_n: u32, steps: u32) -> Result<Vec<(f64, f64)>, String> {
    if n_classes < 2 {
        return Err("need at least two classes".into());
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(format!("delta {delta} outside (0, 1)"));
    }
    let range = (n_classes as f64).log2();
    let steps = steps.max(2);
    Ok((1..=steps)
        .map(|i| {
            let n = f64::from(max_n) * f64::from(i) / f64::from(steps);
            (n, hoeffding_bound(range, delta, n.max(1.0)))
        })
        .collect())
}

fn to_js<T: Serialize>(value: Result<T, String>) -> Result<String, JsValue> {
    value
        .and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = adwinTrace)]
pub fn adwin_trace_js(
    p_before: f64,
    p_after: f64,
    change_at: u32,
    length: u32,
    delta: f64,
    seed: u32,
) -> Result<String, JsValue> {
    to_js(adwin_trace(
        p_before,
        p_after,
        change_at as usize,
        length as usize,
        delta,
        u64::from(seed),
    ))
}

/// `models` is a comma-separated list of registry keys such as `ht,hat,arf10`.
#[wasm_bindgen(js_name = driftCurves)]
pub fn drift_curves_js(
    models: &str,
    length: u32,
    switch_at: u32,
    noise: f64,
    window: u32,
    seed: u32,
) -> Result<String, JsValue> {
    let kinds: Result<Vec<ModelKind>, String> = models
        .split(',')
        .map(|m| m.trim().parse::<ModelKind>().map_err(|e| e.to_string()))
        .collect();
    to_js(kinds.and_then(|k| {
        drift_curves(
            &k,
            u64::from(length),
            u64::from(switch_at),
            noise,
            window as usize,
            u64::from(seed),
        )
    }))
}

#[wasm_bindgen(js_name = boundCurve)]
pub fn bound_curve_js(n_classes: u32, delta: f64, max_n: u32, steps: u32) -> Result<String, JsValue> {
    to_js(bound_curve(n_classes as usize, delta, max_n, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adwin_trace_sees_the_step() {
        let t = adwin_trace(0.2, 0.8, 2_000, 3_000, 0.002, 1).unwrap();
        assert_eq!(t.mean.len(), 3_000);
        let first = t.detections.iter().copied().find(|&d| d >= 2_000).unwrap();
        assert!(first < 2_300, "{first}");
        assert!(t.width[2_999] < 3_000);
        assert!((t.mean[2_999] - 0.8).abs() < 0.1);
    }

    #[test]
    fn adwin_trace_rejects_bad_rates() {
        assert!(adwin_trace(1.5, 0.2, 10, 20, 0.002, 0).is_err());
        assert!(adwin_trace(0.5, 0.2, 10, 20, 0.0, 0).is_err());
    }

    #[test]
    fn curves_show_recovery() {
        let curves = drift_curves(&[ModelKind::Ht, ModelKind::Hat], 20_000, 10_000, 0.0, 1_000, 3).unwrap();
        assert_eq!(curves.len(), 2);
        assert_eq!(curves[0].points.len(), 20);
        let last = |c: &Curve| c.points.last().unwrap().accuracy;
        assert!(last(&curves[1]) > 0.9, "HAT {}", last(&curves[1]));
    }

    #[test]
    fn bound_decreases() {
        let c = bound_curve(5, 1e-7, 1_000, 50).unwrap();
        assert_eq!(c.len(), 50);
        assert!(c.windows(2).all(|w| w[1].1 < w[0].1));
        assert!(bound_curve(1, 0.1, 10, 5).is_err());
    }

    #[test]
    fn js_wrappers_return_json() {
        let json = bound_curve_js(2, 0.05, 50, 2).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!((v[1][1].as_f64().unwrap() - 0.17309).abs() < 1e-5);
        let json = drift_curves_js("ht, nb", 2_000, 1_000, 0.1, 500, 1).unwrap();
        assert!(json.contains("\"model\":\"NB\""));
    }
}
