//! Streaming classifiers, ADWIN drift detection, Hoeffding trees, online
//! ensembles and a prequential (test-then-train) evaluation harness, built
//! around the WSN-DS wireless sensor network intrusion dataset.
//!
//! Every model implements [`Classifier`], so single learners, trees and
//! ensembles are interchangeable inside [`eval::prequential_run`].

pub mod drift;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod harness;
pub mod learners;
pub mod stream;
pub mod tree;

pub use error::{Error, Result};
pub use learners::Classifier;
pub use stream::{Instance, LabelMap, Schema};
