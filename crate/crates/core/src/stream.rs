//! Raster-order streaming denoiser built from line buffers.
//!
//! The engine is a three-stage pipeline fed one pixel at a time:
//!
//! 1. the labeller turns each incoming intensity into a 2-bit [`Label`];
//! 2. similarity inspection decides the flag of pixel `(x, y)` as soon as the
//!    label of its lower-right neighbour `(x + 1, y + 1)` is known;
//! 3. restoration and placement emit output pixel `(x, y)` as soon as the
//!    flag of `(x + 1, y + 1)` is known.
//!
//! Each stage keeps a circular delay line indexed by raster position, long
//! enough to reach one row back from the oldest pending pixel. Neighbours
//! outside the image are read from the buffered edge rows and columns by
//! clamping, so the source is never re-read. Output is bit-identical to
//! [`crate::restorer::denoise`].

use std::fmt;

use crate::detector::{is_noisy, label_pixel, DetectorConfig, Label};
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::restorer::restore9;

/// Counters reported by a finished stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StreamStats {
    pub pixels_in: usize,
    pub pixels_out: usize,
    /// Input pixels consumed before the first output pixel, minus one.
    pub latency_pixels: usize,
    /// Bytes held by all line buffers.
    pub peak_buffer_bytes: usize,
}

impl fmt::Display for StreamStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pixels_in={}", self.pixels_in)?;
        writeln!(f, "pixels_out={}", self.pixels_out)?;
        writeln!(f, "latency_pixels={}", self.latency_pixels)?;
        writeln!(f, "peak_buffer_bytes={}", self.peak_buffer_bytes)
    }
}

/// Circular store of fixed-width bit fields addressed by absolute raster
/// index. Only the last `cap` written indices are readable.
#[derive(Debug)]
struct PackedRing {
    bits: usize,
    cap: usize,
    words: Vec<u8>,
    written: usize,
}

impl PackedRing {
    fn new(bits: usize, cap: usize) -> Self {
        debug_assert!(bits == 1 || bits == 2);
        Self {
            bits,
            cap,
            words: vec![0; (cap * bits).div_ceil(8)],
            written: 0,
        }
    }

    #[inline]
    fn push(&mut self, value: u8) {
        let bit = (self.written % self.cap) * self.bits;
        let mask = ((1u8 << self.bits) - 1) << (bit % 8);
        let word = &mut self.words[bit / 8];
        *word = (*word & !mask) | ((value << (bit % 8)) & mask);
        self.written += 1;
    }

    #[inline]
    fn get(&self, index: usize) -> u8 {
        debug_assert!(
            index < self.written && index + self.cap >= self.written,
            "ring miss at {index}"
        );
        let bit = (index % self.cap) * self.bits;
        (self.words[bit / 8] >> (bit % 8)) & ((1u8 << self.bits) - 1)
    }

    fn bytes(&self) -> usize {
        self.words.len()
    }
}

#[derive(Debug)]
struct ByteRing {
    cap: usize,
    slots: Vec<u8>,
    written: usize,
}

impl ByteRing {
    fn new(cap: usize) -> Self {
        Self {
            cap,
            slots: vec![0; cap],
            written: 0,
        }
    }

    #[inline]
    fn push(&mut self, value: u8) {
        self.slots[self.written % self.cap] = value;
        self.written += 1;
    }

    #[inline]
    fn get(&self, index: usize) -> u8 {
        debug_assert!(
            index < self.written && index + self.cap >= self.written,
            "ring miss at {index}"
        );
        self.slots[index % self.cap]
    }

    fn bytes(&self) -> usize {
        self.slots.len()
    }
}

/// Push-style streaming denoiser for one image of known size.
#[derive(Debug)]
pub struct StreamDenoiser {
    width: usize,
    height: usize,
    total: usize,
    cfg: DetectorConfig,
    values: ByteRing,
    labels: PackedRing,
    flags: PackedRing,
    flagged: usize,
    emitted: usize,
    latency: Option<usize>,
}

impl StreamDenoiser {
    pub fn new(width: usize, height: usize, cfg: DetectorConfig) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(format!(
                "stream dimensions must be positive, got {width}x{height}"
            )));
        }
        let total = width
            .checked_mul(height)
            .ok_or_else(|| Error::invalid("stream dimensions overflow"))?;
        // Labels and flags span two rows plus the clamped 3-wide column
        // footprint; values additionally cover the two-stage lookahead.
        let label_cap = (2 * width + width.min(3)).min(total);
        let value_cap = (3 * width + width.min(4)).min(total);
        Ok(Self {
            width,
            height,
            total,
            cfg,
            values: ByteRing::new(value_cap),
            labels: PackedRing::new(2, label_cap),
            flags: PackedRing::new(1, label_cap),
            flagged: 0,
            emitted: 0,
            latency: None,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels_in(&self) -> usize {
        self.values.written
    }

    pub fn pixels_out(&self) -> usize {
        self.emitted
    }

    pub fn buffer_bytes(&self) -> usize {
        self.values.bytes() + self.labels.bytes() + self.flags.bytes()
    }

    /// Feeds the next raster-order pixel, passing every output pixel that
    /// becomes ready to `sink` in raster order.
    pub fn push(&mut self, value: u8, mut sink: impl FnMut(u8)) -> Result<()> {
        let index = self.values.written;
        if index == self.total {
            return Err(Error::invalid(format!(
                "stream already received all {} pixels of a {}x{} image",
                self.total, self.width, self.height
            )));
        }
        self.values.push(value);
        self.labels.push(label_pixel(value).code());

        // Flags and outputs advance in lockstep so the flag buffer never runs
        // more than one lookahead ahead of placement. On the last pixel this
        // drains the bottom rows the same way replicated rows would.
        loop {
            while self.emitted < self.flagged && self.lookahead(self.emitted) < self.flagged {
                let out = self.place(self.emitted);
                if self.latency.is_none() {
                    self.latency = Some(index);
                }
                sink(out);
                self.emitted += 1;
            }
            if self.flagged == self.total || self.lookahead(self.flagged) > index {
                break;
            }
            let flag = self.inspect(self.flagged);
            self.flags.push(u8::from(flag));
            self.flagged += 1;
        }
        Ok(())
    }

    /// Completes the stream. Fails if fewer than `width * height` pixels
    /// were pushed.
    pub fn finish(self) -> Result<StreamStats> {
        let received = self.values.written;
        if received < self.total {
            return Err(Error::Truncated {
                received,
                expected: self.total,
            });
        }
        debug_assert_eq!(self.emitted, self.total);
        Ok(StreamStats {
            pixels_in: received,
            pixels_out: self.emitted,
            latency_pixels: self.latency.unwrap_or(0),
            peak_buffer_bytes: self.buffer_bytes(),
        })
    }

    /// Raster index of the clamped lower-right neighbour of `index`, the
    /// last upstream result the pixel at `index` depends on.
    #[inline]
    fn lookahead(&self, index: usize) -> usize {
        let (x, y) = (index % self.width, index / self.width);
        let nx = (x + 1).min(self.width - 1);
        let ny = (y + 1).min(self.height - 1);
        ny * self.width + nx
    }

    /// Raster indices of the replicate-padded 3×3 window around `index`.
    #[inline]
    fn neighbourhood(&self, index: usize) -> [usize; 9] {
        let (x, y) = (index % self.width, index / self.width);
        let xs = [x.saturating_sub(1), x, (x + 1).min(self.width - 1)];
        let ys = [y.saturating_sub(1), y, (y + 1).min(self.height - 1)];
        std::array::from_fn(|k| ys[k / 3] * self.width + xs[k % 3])
    }

    fn inspect(&self, index: usize) -> bool {
        if self.labels.get(index) == Label::Other.code() {
            return false;
        }
        let window = self
            .neighbourhood(index)
            .map(|i| Label::from_code(self.labels.get(i)).expect("2-bit label code"));
        is_noisy(&window, self.cfg.t1())
    }

    fn place(&self, index: usize) -> u8 {
        if self.flags.get(index) == 0 {
            return self.values.get(index);
        }
        let taps = self.neighbourhood(index);
        let window = taps.map(|i| self.values.get(i));
        let flags = taps.map(|i| self.flags.get(i) == 1);
        restore9(&window, &flags)
    }
}

/// Runs `source` through a [`StreamDenoiser`], handing output pixels to
/// `sink` as they become ready.
pub fn stream_denoise_into<I, F>(
    width: usize,
    height: usize,
    source: I,
    cfg: &DetectorConfig,
    mut sink: F,
) -> Result<StreamStats>
where
    I: IntoIterator<Item = u8>,
    F: FnMut(u8),
{
    let mut engine = StreamDenoiser::new(width, height, *cfg)?;
    for value in source {
        engine.push(value, &mut sink)?;
    }
    engine.finish()
}

/// Streams `source` and collects the output into an image.
pub fn stream_denoise<I>(
    width: usize,
    height: usize,
    source: I,
    cfg: &DetectorConfig,
) -> Result<(GrayImage, StreamStats)>
where
    I: IntoIterator<Item = u8>,
{
    let mut out = Vec::with_capacity(width.saturating_mul(height));
    let stats = stream_denoise_into(width, height, source, cfg, |v| out.push(v))?;
    Ok((GrayImage::new(width, height, out)?, stats))
}
