use crate::error::{Error, Result};
use crate::image::{BorderPolicy, GrayImage};

/// Plain k×k median filter (k = 3 or 5) with replicated borders.
pub fn median_filter(img: &GrayImage, k: usize) -> Result<GrayImage> {
    match k {
        3 => Ok(median_k::<3, 9>(img)),
        5 => Ok(median_k::<5, 25>(img)),
        _ => Err(Error::invalid(format!(
            "median window must be 3 or 5, got {k}"
        ))),
    }
}

fn median_k<const K: usize, const N: usize>(img: &GrayImage) -> GrayImage {
    let r = (K / 2) as isize;
    GrayImage::from_fn(img.width(), img.height(), |x, y| {
        let mut buf = [0u8; N];
        let mut i = 0;
        for dy in -r..=r {
            for dx in -r..=r {
                buf[i] = img.sample(x as isize + dx, y as isize + dy, BorderPolicy::Replicate);
                i += 1;
            }
        }
        *buf.select_nth_unstable(N / 2).1
    })
}
