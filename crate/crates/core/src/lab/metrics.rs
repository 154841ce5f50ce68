use crate::error::Result;
use crate::image::GrayImage;

/// Peak value squared for 8-bit images.
pub const PEAK_SQUARED: f64 = 255.0 * 255.0;

/// Mean squared intensity difference.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.ensure_same_dims(b)?;
    let sum: u64 = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(&p, &q)| {
            let d = u64::from(p.abs_diff(q));
            d * d
        })
        .sum();
    Ok(sum as f64 / a.len() as f64)
}

/// PSNR in dB; [`f64::INFINITY`] for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    Ok(psnr_from_mse(mse(a, b)?))
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK_SQUARED / mse).log10()
    }
}
