use std::sync::{Arc, Mutex};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsnids::eval::{
    compute_metrics, per_class_metrics, prequential_run, windowed_accuracy, ConfusionMatrix,
    RunOptions,
};
use wsnids::learners::MajorityClass;
use wsnids::{Classifier, Instance};

fn random_matrix(rng: &mut ChaCha8Rng) -> ConfusionMatrix {
    let c = rng.gen_range(2..=6);
    let mut log = Vec::new();
    for a in 0..c {
        for p in 0..c {
            // sparse cells exercise the undefined branches
            let n = if rng.gen_bool(0.3) { 0 } else { rng.gen_range(0..50) };
            log.extend(std::iter::repeat_n((a, p), n));
        }
    }
    ConfusionMatrix::from_log(c, &log).unwrap()
}

fn close(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => (a - b).abs() <= 1e-12,
        (None, None) => true,
        _ => false,
    }
}

#[test]
fn metric_identities_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1_000 {
        let cm = random_matrix(&mut rng);
        let c = cm.n_classes();
        let normal = rng.gen_range(0..c);
        let b = cm.binary_collapse(normal).unwrap();
        assert_eq!(b.total(), cm.total());

        // direct tally oracle
        let (mut tp, mut fn_, mut fp, mut tn) = (0u64, 0u64, 0u64, 0u64);
        for a in 0..c {
            for p in 0..c {
                let v = cm.get(a, p);
                match (a == normal, p == normal) {
                    (false, false) => tp += v,
                    (false, true) => fn_ += v,
                    (true, false) => fp += v,
                    (true, true) => tn += v,
                }
            }
        }
        assert_eq!((b.tp, b.fn_, b.fp, b.tn), (tp, fn_, fp, tn));
        let (tp, fn_, fp, tn) = (tp as f64, fn_ as f64, fp as f64, tn as f64);
        let m = compute_metrics(&b);
        let total = tp + fn_ + fp + tn;
        let acc = (total > 0.0).then(|| (tp + tn) / total);
        let p = (tp + fp > 0.0).then(|| tp / (tp + fp));
        let r = (tp + fn_ > 0.0).then(|| tp / (tp + fn_));
        assert!(close(m.accuracy, acc));
        assert!(close(m.precision, p));
        assert!(close(m.recall, r));
        if let (Some(p), Some(r), Some(f1)) = (m.precision, m.recall, m.f1) {
            assert!((f1 - 2.0 * p * r / (p + r)).abs() <= 1e-12);
        }

        let (per, macro_avg) = per_class_metrics(&cm, &[]);
        let recalls: Vec<f64> = per.iter().filter_map(|m| m.metrics.recall).collect();
        let mean = (!recalls.is_empty()).then(|| recalls.iter().sum::<f64>() / recalls.len() as f64);
        assert!(close(macro_avg.recall, mean));
        for cls in &per {
            assert_eq!(cls.counts.total(), cm.total());
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Call {
    Predict(usize),
    Learn(usize),
}

/// Records call order; the instance index travels in feature 0.
struct Spy {
    calls: Arc<Mutex<Vec<Call>>>,
}

impl Classifier for Spy {
    fn n_classes(&self) -> usize {
        3
    }

    fn learn_one(&mut self, x: &[f64], _: usize) {
        self.calls.lock().unwrap().push(Call::Learn(x[0] as usize));
    }

    fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        self.calls.lock().unwrap().push(Call::Predict(x[0] as usize));
        vec![1.0 / 3.0; 3]
    }
}

fn stream(labels: &[usize]) -> Vec<wsnids::Result<Instance>> {
    labels
        .iter()
        .enumerate()
        .map(|(i, &label)| {
            Ok(Instance {
                features: vec![i as f64],
                label,
                sequence_number: i as u64,
            })
        })
        .collect()
}

#[test]
fn every_instance_is_predicted_before_it_is_learned() {
    let calls = Arc::new(Mutex::new(Vec::new()));
    let mut spy = Spy { calls: calls.clone() };
    let labels: Vec<usize> = (0..500).map(|i| i % 3).collect();
    let options = RunOptions::new("spy", vec!["a".into(), "b".into(), "c".into()]);
    prequential_run(stream(&labels), &mut spy, &options).unwrap();
    let calls = calls.lock().unwrap();
    assert_eq!(calls.len(), 1_000);
    for (i, pair) in calls.chunks(2).enumerate() {
        assert_eq!(pair, [Call::Predict(i), Call::Learn(i)]);
    }
}

proptest! {
    #[test]
    fn overall_accuracy_is_weighted_window_mean(
        labels in prop::collection::vec(0usize..3, 1..400),
        window in 1usize..50,
    ) {
        let mut model = MajorityClass::new(3);
        let options = RunOptions { window, ..RunOptions::new("mc", vec![]) };
        let report = prequential_run(stream(&labels), &mut model, &options).unwrap();
        let mut prev = 0;
        let mut weighted = 0.0;
        for p in &report.windowed_accuracy {
            weighted += p.accuracy * (p.end_index - prev) as f64;
            prev = p.end_index;
        }
        prop_assert_eq!(prev, labels.len() as u64);
        let overall = report.multiclass_accuracy.unwrap();
        prop_assert!((weighted / labels.len() as f64 - overall).abs() <= 1e-12);
        prop_assert_eq!(report.confusion_matrix.total(), labels.len() as u64);
    }

    #[test]
    fn streaming_tally_matches_batch_recount(
        log in prop::collection::vec((0usize..4, 0usize..4), 0..300),
    ) {
        let mut cm = ConfusionMatrix::new(4);
        for &(a, p) in &log {
            cm.update(a, p).unwrap();
        }
        let mut counts = [[0u64; 4]; 4];
        for &(a, p) in &log {
            counts[a][p] += 1;
        }
        for a in 0..4 {
            for p in 0..4 {
                prop_assert_eq!(cm.get(a, p), counts[a][p]);
            }
        }
        let series = windowed_accuracy(&log, 7);
        prop_assert_eq!(series.len(), log.len().div_ceil(7));
    }
}
