//! Prequential evaluation: confusion matrices, metrics, drift curves.

mod confusion;
mod metrics;
mod prequential;
mod window;

pub use confusion::{BinaryCounts, ConfusionMatrix};
pub use metrics::{compute_metrics, per_class_metrics, ClassMetrics, Metrics};
pub use prequential::{prequential_run, round_sig, BinaryReport, PrequentialReport, RunOptions};
pub use window::{windowed_accuracy, WindowPoint, WindowTally};
