//! Stage one: pixel labelling and local label-similarity inspection.

use crate::error::{Error, Result};
use crate::image::{BorderPolicy, GrayImage, LabelImage, NoiseMask};

/// Three-way pixel class. The discriminants are the 2-bit codes a hardware
/// labeller emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Label {
    /// Intensity 0.
    Zero = 0,
    /// Intensity 255.
    Full = 1,
    /// Any other intensity. Never noisy.
    Other = 2,
}

impl Label {
    #[inline]
    pub fn code(self) -> u8 {
        self as u8
    }

    #[inline]
    pub fn from_code(code: u8) -> Option<Label> {
        match code {
            0 => Some(Label::Zero),
            1 => Some(Label::Full),
            2 => Some(Label::Other),
            _ => None,
        }
    }
}

/// Detection parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DetectorConfig {
    t1: u8,
    pub border: BorderPolicy,
}

impl DetectorConfig {
    pub const DEFAULT_T1: u8 = 4;

    /// `t1` is the largest number of differing neighbours (out of 8) an
    /// extreme pixel may have and still count as clean.
    pub fn new(t1: u8) -> Result<Self> {
        if t1 > 8 {
            return Err(Error::invalid(format!("t1 must be in 0..=8, got {t1}")));
        }
        Ok(Self {
            t1,
            border: BorderPolicy::Replicate,
        })
    }

    #[inline]
    pub fn t1(&self) -> u8 {
        self.t1
    }
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            t1: Self::DEFAULT_T1,
            border: BorderPolicy::Replicate,
        }
    }
}

#[inline]
pub fn label_pixel(v: u8) -> Label {
    match v {
        0 => Label::Zero,
        255 => Label::Full,
        _ => Label::Other,
    }
}

pub fn label_image(img: &GrayImage) -> LabelImage {
    img.map(label_pixel)
}

/// Similarity decision on a 3×3 label window (centre at index 4).
#[inline]
pub(crate) fn is_noisy(window: &[Label; 9], t1: u8) -> bool {
    let center = window[4];
    if center == Label::Other {
        return false;
    }
    let differing = window
        .iter()
        .enumerate()
        .filter(|&(k, &l)| k != 4 && l != center)
        .count();
    differing > usize::from(t1)
}

/// Whether the pixel at `(x, y)` is noisy.
pub fn inspect_pixel(
    labels: &LabelImage,
    x: usize,
    y: usize,
    cfg: &DetectorConfig,
) -> Result<bool> {
    let window = labels.window3(x, y, cfg.border)?;
    Ok(is_noisy(&window, cfg.t1))
}

/// Computes the noise mask of `img`. Every decision reads the original labels.
pub fn detect(img: &GrayImage, cfg: &DetectorConfig) -> NoiseMask {
    let labels = label_image(img);
    NoiseMask::from_fn(img.width(), img.height(), |x, y| {
        // Pixels labelled Other skip the window gather entirely.
        labels.as_slice()[y * img.width() + x] != Label::Other
            && is_noisy(&labels.window3_unchecked(x, y, cfg.border), cfg.t1)
    })
}
