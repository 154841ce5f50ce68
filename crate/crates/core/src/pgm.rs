//! Portable graymap (PGM) codec, maxval 255 only.
//!
//! Binary `P5` and plain `P2` are both decoded; encoding always produces `P5`.
//! [`PgmDecoder`] yields pixels one at a time so a file can feed
//! [`crate::stream::StreamDenoiser`] without being loaded whole.

use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};
use crate::image::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmKind {
    /// `P2`, whitespace-separated decimal samples.
    Plain,
    /// `P5`, one byte per sample.
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PgmHeader {
    pub kind: PgmKind,
    pub width: usize,
    pub height: usize,
}

/// Incremental PGM reader that tracks its byte offset for diagnostics.
pub struct PgmDecoder<R> {
    reader: R,
    offset: u64,
    header: PgmHeader,
    remaining: usize,
    field_start: u64,
}

impl<R: BufRead> PgmDecoder<R> {
    /// Parses the header and leaves the reader positioned at the first sample.
    pub fn new(reader: R) -> Result<Self> {
        let mut dec = PgmDecoder {
            reader,
            offset: 0,
            header: PgmHeader {
                kind: PgmKind::Raw,
                width: 0,
                height: 0,
            },
            remaining: 0,
            field_start: 0,
        };
        let magic = [dec.next_byte()?, dec.next_byte()?];
        let kind = match &magic {
            [Some(b'P'), Some(b'5')] => PgmKind::Raw,
            [Some(b'P'), Some(b'2')] => PgmKind::Plain,
            _ => return Err(dec.format_at(0, "expected magic number P5 or P2")),
        };
        dec.header.kind = kind;
        let width = dec.header_field("width")?;
        let height = dec.header_field("height")?;
        let maxval = dec.header_field("maxval")?;
        let maxval_at = dec.field_start;
        if maxval != 255 {
            return Err(dec.format_at(maxval_at, format!("maxval must be 255, found {maxval}")));
        }
        if width == 0 || height == 0 {
            return Err(dec.format_at(0, format!("zero-sized image {width}x{height}")));
        }
        let total = (width as usize)
            .checked_mul(height as usize)
            .ok_or_else(|| dec.format_at(0, "image dimensions overflow"))?;
        // Exactly one whitespace byte separates the header from raw samples.
        match dec.next_byte()? {
            Some(b) if b.is_ascii_whitespace() => {}
            Some(_) => return Err(dec.format("expected whitespace after maxval")),
            None => return Err(dec.truncated(total, 0)),
        }
        dec.header.width = width as usize;
        dec.header.height = height as usize;
        dec.remaining = total;
        Ok(dec)
    }

    pub fn header(&self) -> PgmHeader {
        self.header
    }

    pub fn width(&self) -> usize {
        self.header.width
    }

    pub fn height(&self) -> usize {
        self.header.height
    }

    /// Byte offset of the next unread input byte.
    pub fn offset(&self) -> u64 {
        self.offset
    }

    /// Reads the next sample, or `None` once all `width * height` samples
    /// have been delivered. Running out of input early is a format error.
    pub fn next_pixel(&mut self) -> Result<Option<u8>> {
        if self.remaining == 0 {
            return Ok(None);
        }
        let total = self.header.width * self.header.height;
        let got = total - self.remaining;
        let value = match self.header.kind {
            PgmKind::Raw => match self.next_byte()? {
                Some(b) => b,
                None => return Err(self.truncated(total, got)),
            },
            PgmKind::Plain => match self.decimal()? {
                Some(v) if v <= 255 => v as u8,
                Some(v) => {
                    return Err(
                        self.format_at(self.field_start, format!("sample {v} exceeds maxval 255"))
                    )
                }
                None => return Err(self.truncated(total, got)),
            },
        };
        self.remaining -= 1;
        Ok(Some(value))
    }

    /// Decodes every remaining sample into an image.
    pub fn into_image(mut self) -> Result<GrayImage> {
        let mut data = Vec::with_capacity(self.remaining);
        while let Some(v) = self.next_pixel()? {
            data.push(v);
        }
        GrayImage::new(self.header.width, self.header.height, data)
    }

    fn next_byte(&mut self) -> Result<Option<u8>> {
        let byte = {
            let buf = loop {
                match self.reader.fill_buf() {
                    Ok(buf) => break buf,
                    Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
                    Err(e) => return Err(e.into()),
                }
            };
            match buf.first() {
                Some(&b) => b,
                None => return Ok(None),
            }
        };
        self.reader.consume(1);
        self.offset += 1;
        Ok(Some(byte))
    }

    fn peek_byte(&mut self) -> Result<Option<u8>> {
        loop {
            match self.reader.fill_buf() {
                Ok(buf) => return Ok(buf.first().copied()),
                Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
                Err(e) => return Err(e.into()),
            }
        }
    }

    /// Skips whitespace and `#` comments, then reads an unsigned decimal.
    /// Returns `None` at end of input.
    fn decimal(&mut self) -> Result<Option<u32>> {
        loop {
            match self.peek_byte()? {
                None => return Ok(None),
                Some(b'#') => {
                    while let Some(b) = self.next_byte()? {
                        if b == b'\n' || b == b'\r' {
                            break;
                        }
                    }
                }
                Some(b) if b.is_ascii_whitespace() => {
                    self.next_byte()?;
                }
                Some(b) if b.is_ascii_digit() => break,
                Some(b) => {
                    return Err(self.format(format!("unexpected byte 0x{b:02x}, expected a digit")))
                }
            }
        }
        let start = self.offset;
        self.field_start = start;
        let mut value: u32 = 0;
        while let Some(b) = self.peek_byte()? {
            if !b.is_ascii_digit() {
                break;
            }
            self.next_byte()?;
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u32::from(b - b'0')))
                .ok_or_else(|| self.format_at(start, "number too large"))?;
        }
        Ok(Some(value))
    }

    fn header_field(&mut self, name: &str) -> Result<u32> {
        self.decimal()?
            .ok_or_else(|| self.format(format!("header ended before {name}")))
    }

    fn format(&self, reason: impl Into<String>) -> Error {
        self.format_at(self.offset, reason)
    }

    fn format_at(&self, offset: u64, reason: impl Into<String>) -> Error {
        Error::Format {
            offset,
            reason: reason.into(),
        }
    }

    fn truncated(&self, total: usize, got: usize) -> Error {
        self.format(format!("payload truncated after {got} of {total} samples"))
    }
}

/// Decodes a complete P5 or P2 graymap.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    PgmDecoder::new(bytes)?.into_image()
}

/// Encodes `img` as binary P5.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = Vec::with_capacity(img.len() + 20);
    write_pgm_to(&mut out, img).expect("writing to a Vec cannot fail");
    out
}

pub fn write_pgm_to<W: Write>(mut w: W, img: &GrayImage) -> io::Result<()> {
    write_pgm_header(&mut w, img.width(), img.height())?;
    w.write_all(img.as_slice())
}

/// Writes a P5 header; the caller follows it with `width * height` bytes.
pub fn write_pgm_header<W: Write>(mut w: W, width: usize, height: usize) -> io::Result<()> {
    write!(w, "P5\n{width} {height}\n255\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GrayImage {
        GrayImage::new(2, 2, vec![0, 255, 128, 7]).unwrap()
    }

    #[test]
    fn decodes_raw() {
        let mut bytes = b"P5 2 2 255\n".to_vec();
        bytes.extend([0, 255, 128, 7]);
        assert_eq!(read_pgm(&bytes).unwrap(), sample());
    }

    #[test]
    fn decodes_plain_with_comments() {
        let text = b"P2\n# made by hand\n2 2\n255\n0 255\n128   7\n";
        assert_eq!(read_pgm(text).unwrap(), sample());
    }

    #[test]
    fn encodes_raw() {
        let bytes = write_pgm(&sample());
        assert_eq!(&bytes[..11], b"P5\n2 2\n255\n");
        assert_eq!(&bytes[11..], &[0, 255, 128, 7]);
        assert_eq!(read_pgm(&bytes).unwrap(), sample());

        let one = write_pgm(&GrayImage::new(1, 1, vec![0]).unwrap());
        assert_eq!(one, b"P5\n1 1\n255\n\0");
    }

    #[test]
    fn rejects_sixteen_bit() {
        let err = read_pgm(b"P5 1 1 65535\n\0\0").unwrap_err();
        match err {
            Error::Format { offset, reason } => {
                assert_eq!(offset, 7);
                assert!(reason.contains("65535"), "{reason}");
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn reports_truncation_offset() {
        let err = read_pgm(b"P5 2 2 255\n\x01\x02").unwrap_err();
        match err {
            Error::Format { offset, reason } => {
                assert_eq!(offset, 13);
                assert!(reason.contains("2 of 4"), "{reason}");
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(
            read_pgm(b"P2 2 1 255\n4"),
            Err(Error::Format { .. })
        ));
    }

    #[test]
    fn rejects_malformed_headers() {
        for bad in [
            &b""[..],
            b"P6 1 1 255\n\0",
            b"P5 x 1 255\n\0",
            b"P5 0 1 255\n",
            b"P5 1 1",
        ] {
            assert!(
                matches!(read_pgm(bad), Err(Error::Format { .. })),
                "{:?}",
                String::from_utf8_lossy(bad)
            );
        }
        assert!(matches!(
            read_pgm(b"P2 1 1 255\n256\n"),
            Err(Error::Format { offset: 11, .. })
        ));
    }

    #[test]
    fn decoder_streams_samples() {
        let bytes = write_pgm(&sample());
        let mut dec = PgmDecoder::new(&bytes[..]).unwrap();
        assert_eq!((dec.width(), dec.height()), (2, 2));
        let mut got = vec![];
        while let Some(v) = dec.next_pixel().unwrap() {
            got.push(v);
        }
        assert_eq!(got, vec![0, 255, 128, 7]);
        assert_eq!(dec.next_pixel().unwrap(), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn raw_round_trip(w in 1usize..20, h in 1usize..20, seed in any::<u64>()) {
                let img = GrayImage::from_fn(w, h, |x, y| {
                    (seed.rotate_left((x * 7 + y * 13) as u32) >> 3) as u8
                });
                prop_assert_eq!(read_pgm(&write_pgm(&img)).unwrap(), img);
            }

            #[test]
            fn plain_matches_raw(data in proptest::collection::vec(any::<u8>(), 1..40)) {
                let w = data.len();
                let mut text = format!("P2\n{w} 1\n255\n");
                for v in &data {
                    text.push_str(&format!("{v}\n"));
                }
                let img = GrayImage::new(w, 1, data).unwrap();
                prop_assert_eq!(read_pgm(text.as_bytes()).unwrap(), img);
            }
        }
    }
}
