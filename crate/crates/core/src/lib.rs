//! Salt-and-pepper noise removal for 8-bit grayscale images.
//!
//! The pipeline has two stages. [`detector`] labels every pixel as `0`, `255`
//! or "other" and flags an extreme pixel as noisy when more than `t1` of its
//! eight neighbours carry a different label. [`restorer`] replaces each flagged
//! pixel with the median of its non-noisy neighbours, computed the way a
//! fixed-width median circuit would: noisy inputs are padded with alternating
//! extremes, two padded windows are sorted, and the two medians are averaged.
//!
//! [`stream`] runs the same computation over a raster-order pixel stream with
//! line buffers only, and [`lab`] holds the noise-injection and PSNR harness
//! used to evaluate it.

pub mod detector;
pub mod error;
pub mod image;
pub mod lab;
pub mod pgm;
pub mod restorer;
pub mod stream;

pub use detector::{detect, inspect_pixel, label_image, label_pixel, DetectorConfig, Label};
pub use error::{Error, Result};
pub use image::{BorderPolicy, GrayImage, LabelImage, NoiseMask, Plane};
pub use pgm::{read_pgm, write_pgm};
pub use restorer::{denoise, median9, mfig, restore_pixel};
pub use stream::{stream_denoise, StreamDenoiser, StreamStats};
