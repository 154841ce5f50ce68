use crate::error::{Error, Result};
use crate::image::{GrayImage, NoiseMask};
use crate::lab::rng::XorShift64Star;

/// Salt-and-pepper corruption parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    density: f64,
    salt_ratio: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(density: f64, salt_ratio: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::invalid(format!(
                "density must be in [0, 1], got {density}"
            )));
        }
        if !(0.0..=1.0).contains(&salt_ratio) {
            return Err(Error::invalid(format!(
                "salt ratio must be in [0, 1], got {salt_ratio}"
            )));
        }
        Ok(Self {
            density,
            salt_ratio,
            seed,
        })
    }

    /// Equal salt and pepper.
    pub fn symmetric(density: f64, seed: u64) -> Result<Self> {
        Self::new(density, 0.5, seed)
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn salt_ratio(&self) -> f64 {
        self.salt_ratio
    }
}

/// Corrupts each pixel independently; returns the noisy image and the mask
/// of corrupted positions.
///
/// A [`XorShift64Star`] seeded with `spec.seed` draws two values per pixel in
/// raster order. The pixel is corrupted when the first value, as a 53-bit
/// fraction, is below `density`; it becomes 255 when the second is below
/// `salt_ratio` and 0 otherwise. Pixels that are already 0 or 255 are
/// treated like any other.
pub fn inject(img: &GrayImage, spec: &NoiseSpec) -> (GrayImage, NoiseMask) {
    let mut rng = XorShift64Star::new(spec.seed);
    let mut out = Vec::with_capacity(img.len());
    let mut mask = Vec::with_capacity(img.len());
    for &v in img.as_slice() {
        let hit = rng.next_f64() < spec.density;
        let salt = rng.next_f64() < spec.salt_ratio;
        mask.push(hit);
        out.push(match (hit, salt) {
            (false, _) => v,
            (true, true) => 255,
            (true, false) => 0,
        });
    }
    (
        GrayImage::new(img.width(), img.height(), out).expect("same dimensions"),
        NoiseMask::new(img.width(), img.height(), mask).expect("same dimensions"),
    )
}
