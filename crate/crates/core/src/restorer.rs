//! Stage two: restore flagged pixels from their non-noisy neighbours.
//!
//! A fixed 9-input median cannot skip inputs, so the noisy positions of a
//! window are overwritten with alternating 0/255 values before sorting. The
//! extremes land at both ends of the sorted order and the rank-5 element
//! falls inside the non-noisy values. With an odd number of noisy inputs the
//! padding is lopsided by one, so two padded windows are built (one starting
//! the alternation at 0, one at 255) and their medians averaged. The result
//! equals the ordinary median of the non-noisy values, with even-sized sets
//! taking the rounded mean of the two middle values.

use crate::detector::{detect, DetectorConfig};
use crate::error::{Error, Result};
use crate::image::{GrayImage, NoiseMask};

/// Nine median inputs produced by [`mfig`], in window scan order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MfigOutput(pub [u8; 9]);

impl MfigOutput {
    pub fn values(&self) -> &[u8; 9] {
        &self.0
    }
}

/// Median filter input generator.
///
/// Non-noisy positions pass through. Noisy positions receive 0 and 255 in
/// alternation, in row-major order, starting with 0 when `trigger` is false
/// and with 255 when it is true.
pub fn mfig(window: &[u8], flags: &[bool], trigger: bool) -> Result<MfigOutput> {
    let window = as_nine(window, "window")?;
    let flags = as_nine(flags, "flags")?;
    Ok(MfigOutput(mfig9(window, flags, trigger)))
}

#[inline]
pub(crate) fn mfig9(window: &[u8; 9], flags: &[bool; 9], trigger: bool) -> [u8; 9] {
    let mut out = *window;
    let mut next_full = trigger;
    for (v, &noisy) in out.iter_mut().zip(flags) {
        if noisy {
            *v = if next_full { 255 } else { 0 };
            next_full = !next_full;
        }
    }
    out
}

/// The 5th smallest of nine values.
pub fn median9(values: &[u8]) -> Result<u8> {
    Ok(median9_net(*as_nine(values, "values")?))
}

/// 19 compare-exchange selection network for the median of nine.
#[inline]
pub(crate) fn median9_net(mut p: [u8; 9]) -> u8 {
    #[inline(always)]
    fn cx(p: &mut [u8; 9], a: usize, b: usize) {
        let (lo, hi) = (p[a].min(p[b]), p[a].max(p[b]));
        p[a] = lo;
        p[b] = hi;
    }
    cx(&mut p, 1, 2);
    cx(&mut p, 4, 5);
    cx(&mut p, 7, 8);
    cx(&mut p, 0, 1);
    cx(&mut p, 3, 4);
    cx(&mut p, 6, 7);
    cx(&mut p, 1, 2);
    cx(&mut p, 4, 5);
    cx(&mut p, 7, 8);
    cx(&mut p, 0, 3);
    cx(&mut p, 5, 8);
    cx(&mut p, 4, 7);
    cx(&mut p, 3, 6);
    cx(&mut p, 1, 4);
    cx(&mut p, 2, 5);
    cx(&mut p, 4, 7);
    cx(&mut p, 2, 4);
    cx(&mut p, 4, 6);
    cx(&mut p, 2, 4);
    p[4]
}

/// Restored value for a noisy centre pixel: the round-half-up mean of the
/// medians of both MFIG windows.
///
/// When every position is noisy the two medians are 0 and 255 and the
/// result is 128.
pub fn restore_pixel(window: &[u8], flags: &[bool]) -> Result<u8> {
    let window = as_nine(window, "window")?;
    let flags = as_nine(flags, "flags")?;
    Ok(restore9(window, flags))
}

#[inline]
pub(crate) fn restore9(window: &[u8; 9], flags: &[bool; 9]) -> u8 {
    let m0 = u16::from(median9_net(mfig9(window, flags, false)));
    let m1 = u16::from(median9_net(mfig9(window, flags, true)));
    ((m0 + m1 + 1) >> 1) as u8
}

/// Full reference pipeline: detect, then restore every flagged pixel from
/// the original image and the precomputed mask.
pub fn denoise(img: &GrayImage, cfg: &DetectorConfig) -> GrayImage {
    let mask = detect(img, cfg);
    restore_with_mask(img, &mask, cfg)
}

/// Restores the pixels flagged in `mask`; all others are copied unchanged.
///
/// # Panics
///
/// Panics if `mask` and `img` differ in size.
pub fn restore_with_mask(img: &GrayImage, mask: &NoiseMask, cfg: &DetectorConfig) -> GrayImage {
    assert!(img.same_dims(mask), "mask and image dimensions differ");
    let width = img.width();
    let mut out = img.clone();
    for (i, _) in mask.as_slice().iter().enumerate().filter(|(_, &m)| m) {
        let (x, y) = (i % width, i / width);
        let window = img.window3_unchecked(x, y, cfg.border);
        let flags = mask.window3_unchecked(x, y, cfg.border);
        out.set(x, y, restore9(&window, &flags));
    }
    out
}

fn as_nine<'a, T>(s: &'a [T], what: &str) -> Result<&'a [T; 9]> {
    s.try_into()
        .map_err(|_| Error::invalid(format!("{what} must have 9 entries, got {}", s.len())))
}
