//! Fault-tolerant quantum computing resource estimator.

pub mod algorithm;
pub mod chem;
pub mod cli;
pub mod engine;
pub mod error;
pub mod gsc;
pub mod hardware;
pub mod math;
pub mod profile;
pub mod qec;
pub mod report;
pub mod transform;

pub use error::{Error, Layer, Result};
