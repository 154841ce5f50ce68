//! Row-major raster containers and border sampling.

use crate::detector::Label;
use crate::error::{Error, Result};

/// How samples outside the image are resolved.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum BorderPolicy {
    /// Clamp the coordinate to the nearest edge pixel.
    #[default]
    Replicate,
}

/// A row-major 2-D grid with non-zero dimensions.
///
/// Padding is never stored; out-of-range reads go through [`Plane::sample`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plane<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

/// 8-bit grayscale intensities.
pub type GrayImage = Plane<u8>;
/// Per-pixel [`Label`]s of a [`GrayImage`].
pub type LabelImage = Plane<Label>;
/// Per-pixel noisy flags; `true` marks a noisy pixel.
pub type NoiseMask = Plane<bool>;

impl<T: Copy> Plane<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width
            .checked_mul(height)
            .ok_or_else(|| Error::invalid(format!("image dimensions {width}x{height} overflow")))?;
        if data.len() != expected {
            return Err(Error::invalid(format!(
                "{width}x{height} image needs {expected} samples, got {}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Builds a plane by evaluating `f(x, y)` at every pixel.
    ///
    /// # Panics
    ///
    /// Panics if either dimension is zero.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn filled(width: usize, height: usize, value: T) -> Self {
        Self::from_fn(width, height, |_, _| value)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always false; planes have at least one pixel.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<T> {
        if x < self.width && y < self.height {
            Some(self.data[y * self.width + x])
        } else {
            None
        }
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: T) {
        assert!(
            x < self.width && y < self.height,
            "({x}, {y}) out of bounds"
        );
        self.data[y * self.width + x] = value;
    }

    /// Reads at a signed coordinate, resolving out-of-range positions with
    /// `policy`.
    #[inline]
    pub fn sample(&self, x: isize, y: isize, policy: BorderPolicy) -> T {
        match policy {
            BorderPolicy::Replicate => {
                let cx = x.clamp(0, self.width as isize - 1) as usize;
                let cy = y.clamp(0, self.height as isize - 1) as usize;
                self.data[cy * self.width + cx]
            }
        }
    }

    /// The 3×3 neighbourhood of `(x, y)` in row-major order; the centre is
    /// element 4.
    pub fn window3(&self, x: usize, y: usize, policy: BorderPolicy) -> Result<[T; 9]> {
        self.check_coords(x, y)?;
        Ok(self.window3_unchecked(x, y, policy))
    }

    #[inline]
    pub(crate) fn window3_unchecked(&self, x: usize, y: usize, policy: BorderPolicy) -> [T; 9] {
        let (xi, yi) = (x as isize, y as isize);
        let mut out = [self.data[0]; 9];
        let mut k = 0;
        for dy in -1..=1 {
            for dx in -1..=1 {
                out[k] = self.sample(xi + dx, yi + dy, policy);
                k += 1;
            }
        }
        out
    }

    pub(crate) fn check_coords(&self, x: usize, y: usize) -> Result<()> {
        if x < self.width && y < self.height {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "coordinate ({x}, {y}) outside {}x{} image",
                self.width, self.height
            )))
        }
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(T) -> U) -> Plane<U> {
        Plane {
            width: self.width,
            height: self.height,
            data: self.data.iter().copied().map(f).collect(),
        }
    }

    pub fn same_dims<U>(&self, other: &Plane<U>) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub(crate) fn ensure_same_dims<U>(&self, other: &Plane<U>) -> Result<()> {
        if self.same_dims(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ))
        }
    }
}

impl NoiseMask {
    /// Number of pixels flagged noisy.
    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Renders the mask as an image: 255 for noisy pixels, 0 otherwise.
    pub fn to_image(&self) -> GrayImage {
        self.map(|noisy| if noisy { 255 } else { 0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp3() -> GrayImage {
        GrayImage::new(3, 3, (1..=9).collect()).unwrap()
    }

    #[test]
    fn interior_window_is_the_neighbourhood() {
        let w = ramp3().window3(1, 1, BorderPolicy::Replicate).unwrap();
        assert_eq!(w, [1, 2, 3, 4, 5, 6, 7, 8, 9]);
    }

    #[test]
    fn corner_window_replicates_edges() {
        let w = ramp3().window3(0, 0, BorderPolicy::Replicate).unwrap();
        assert_eq!(w, [1, 1, 2, 1, 1, 2, 4, 4, 5]);
        let w = ramp3().window3(2, 2, BorderPolicy::Replicate).unwrap();
        assert_eq!(w, [5, 6, 6, 8, 9, 9, 8, 9, 9]);
    }

    #[test]
    fn single_pixel_window() {
        let img = GrayImage::new(1, 1, vec![7]).unwrap();
        assert_eq!(img.window3(0, 0, BorderPolicy::Replicate).unwrap(), [7; 9]);
    }

    #[test]
    fn window_out_of_range() {
        let img = ramp3();
        assert!(matches!(
            img.window3(3, 0, BorderPolicy::Replicate),
            Err(Error::InvalidArgument(_))
        ));
        assert!(img.window3(0, 3, BorderPolicy::Replicate).is_err());
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(GrayImage::new(0, 3, vec![]).is_err());
        assert!(GrayImage::new(2, 2, vec![1, 2, 3]).is_err());
    }

    #[test]
    fn mask_renders_as_extremes() {
        let mask = NoiseMask::new(2, 1, vec![true, false]).unwrap();
        assert_eq!(mask.to_image().as_slice(), &[255, 0]);
        assert_eq!(mask.count(), 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn image() -> impl Strategy<Value = GrayImage> {
            (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
                proptest::collection::vec(any::<u8>(), w * h)
                    .prop_map(move |d| GrayImage::new(w, h, d).unwrap())
            })
        }

        proptest! {
            #[test]
            fn window_values_come_from_the_image(img in image(), sx in 0usize..12, sy in 0usize..12) {
                let (x, y) = (sx % img.width(), sy % img.height());
                let w = img.window3(x, y, BorderPolicy::Replicate).unwrap();
                prop_assert_eq!(w.len(), 9);
                prop_assert_eq!(w[4], img.get(x, y).unwrap());
                for v in w {
                    prop_assert!(img.as_slice().contains(&v));
                }
                if x > 0 && y > 0 && x + 1 < img.width() && y + 1 < img.height() {
                    for (k, v) in w.iter().enumerate() {
                        let (nx, ny) = (x + k % 3 - 1, y + k / 3 - 1);
                        prop_assert_eq!(*v, img.get(nx, ny).unwrap());
                    }
                }
            }
        }
    }
}
