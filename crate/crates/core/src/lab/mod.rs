//! Evaluation harness: reproducible salt-and-pepper injection, PSNR/MSE,
//! median-filter baselines and density sweeps.

pub mod baseline;
pub mod metrics;
pub mod noise;
pub mod phantom;
pub mod rng;
pub mod sweep;

pub use baseline::median_filter;
pub use metrics::{mse, psnr};
pub use noise::{inject, NoiseSpec};
pub use phantom::phantom;
pub use rng::{splitmix64, XorShift64Star};
pub use sweep::{sweep, AggregateRow, CorpusImage, EvalReport, EvalRow, Method};
