use serde::{Deserialize, Serialize};

use super::{BinaryCounts, ConfusionMatrix};

/// Accuracy, precision, recall and F1; `None` where a denominator is zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub counts: BinaryCounts,
    pub metrics: Metrics,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn compute_metrics(b: &BinaryCounts) -> Metrics {
    let accuracy = ratio(b.tp + b.tn, b.total());
    let precision = ratio(b.tp, b.tp + b.fp);
    let recall = ratio(b.tp, b.tp + b.fn_);
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        _ => None,
    };
    Metrics {
        accuracy,
        precision,
        recall,
        f1,
    }
}

fn mean_defined(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let (sum, n) = values.flatten().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// One-vs-rest metrics per class and their unweighted macro means over the
/// defined values.
pub fn per_class_metrics(cm: &ConfusionMatrix, class_names: &[String]) -> (Vec<ClassMetrics>, Metrics) {
    let per: Vec<ClassMetrics> = (0..cm.n_classes())
        .map(|c| {
            let counts = cm.one_vs_rest(c);
            ClassMetrics {
                class: class_names.get(c).cloned().unwrap_or_else(|| c.to_string()),
                counts,
                metrics: compute_metrics(&counts),
            }
        })
        .collect();
    let macro_avg = Metrics {
        accuracy: mean_defined(per.iter().map(|m| m.metrics.accuracy)),
        precision: mean_defined(per.iter().map(|m| m.metrics.precision)),
        recall: mean_defined(per.iter().map(|m| m.metrics.recall)),
        f1: mean_defined(per.iter().map(|m| m.metrics.f1)),
    };
    (per, macro_avg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn worked_example() {
        let m = compute_metrics(&BinaryCounts {
            tp: 9000,
            fn_: 1000,
            fp: 500,
            tn: 89500,
        });
        assert_abs_diff_eq!(m.accuracy.unwrap(), 0.985, epsilon = 1e-12);
        assert_abs_diff_eq!(m.precision.unwrap(), 9000.0 / 9500.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.precision.unwrap(), 0.94737, epsilon = 1e-5);
        assert_abs_diff_eq!(m.recall.unwrap(), 0.9, epsilon = 1e-12);
        assert_abs_diff_eq!(m.f1.unwrap(), 0.92308, epsilon = 1e-5);
    }

    #[test]
    fn perfect_and_degenerate() {
        let m = compute_metrics(&BinaryCounts { tp: 4, fn_: 0, fp: 0, tn: 9 });
        assert_eq!(m, Metrics { accuracy: Some(1.0), precision: Some(1.0), recall: Some(1.0), f1: Some(1.0) });

        let m = compute_metrics(&BinaryCounts { tp: 0, fn_: 5, fp: 0, tn: 9 });
        assert_eq!(m.recall, Some(0.0));
        assert_eq!(m.precision, None);
        assert_eq!(m.f1, None);

        assert_eq!(compute_metrics(&BinaryCounts::default()), Metrics::default());
    }

    #[test]
    fn per_class_example() {
        let mut log = Vec::new();
        for (a, p, n) in [(0, 0, 8), (0, 1, 2), (1, 0, 4), (1, 1, 6)] {
            log.extend(std::iter::repeat_n((a, p), n));
        }
        let cm = ConfusionMatrix::from_log(2, &log).unwrap();
        let (per, macro_avg) = per_class_metrics(&cm, &[]);
        assert_abs_diff_eq!(per[0].metrics.precision.unwrap(), 8.0 / 12.0, epsilon = 1e-12);
        assert_abs_diff_eq!(per[0].metrics.recall.unwrap(), 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(per[1].metrics.precision.unwrap(), 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(per[1].metrics.recall.unwrap(), 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(macro_avg.recall.unwrap(), 0.7, epsilon = 1e-12);
        assert_eq!(per[1].class, "1");
    }

    #[test]
    fn macro_skips_undefined() {
        // class 2 never occurs and is never predicted
        let cm = ConfusionMatrix::from_log(3, &[(0, 0), (1, 1)]).unwrap();
        let (per, macro_avg) = per_class_metrics(&cm, &[]);
        assert_eq!(per[2].metrics.recall, None);
        assert_eq!(macro_avg.recall, Some(1.0));
    }
}
