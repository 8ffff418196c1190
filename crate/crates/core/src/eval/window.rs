use serde::{Deserialize, Serialize};

/// Accuracy over the window ending at `end_index` (1-based count of
/// instances processed).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowPoint {
    pub end_index: u64,
    pub accuracy: f64,
}

/// Streaming tally of non-overlapping windows.
#[derive(Debug, Clone)]
pub struct WindowTally {
    window: u64,
    seen: u64,
    in_window: u64,
    correct: u64,
    series: Vec<WindowPoint>,
}

impl WindowTally {
    pub fn new(window: usize) -> Self {
        assert!(window > 0, "window must be positive");
        Self {
            window: window as u64,
            seen: 0,
            in_window: 0,
            correct: 0,
            series: Vec::new(),
        }
    }

    pub fn record(&mut self, correct: bool) {
        self.seen += 1;
        self.in_window += 1;
        self.correct += u64::from(correct);
        if self.in_window == self.window {
            self.close();
        }
    }

    fn close(&mut self) {
        self.series.push(WindowPoint {
            end_index: self.seen,
            accuracy: self.correct as f64 / self.in_window as f64,
        });
        self.in_window = 0;
        self.correct = 0;
    }

    /// The series including a trailing partial window.
    pub fn finish(mut self) -> Vec<WindowPoint> {
        if self.in_window > 0 {
            self.close();
        }
        self.series
    }
}

pub fn windowed_accuracy(log: &[(usize, usize)], window: usize) -> Vec<WindowPoint> {
    let mut tally = WindowTally::new(window);
    for &(a, p) in log {
        tally.record(a == p);
    }
    tally.finish()
}
