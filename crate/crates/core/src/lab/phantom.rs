//! Synthetic MR-like axial head slices for desk-scale evaluation.
//!
//! Each slice has an exactly-black background with sparse faint speckle, a
//! bright scalp ring that saturates to 255 in places, a dark skull, textured
//! brain tissue with a brighter white-matter core, dark ventricles and a few
//! saturated lesions. That mix of genuine 0 and 255 pixels next to ordinary
//! intensities is what separates the detector from a plain median filter.

use crate::image::GrayImage;
use crate::lab::rng::XorShift64Star;

struct Blob {
    cx: f64,
    cy: f64,
    rx: f64,
    ry: f64,
}

impl Blob {
    fn radius(&self, u: f64, v: f64) -> f64 {
        (((u - self.cx) / self.rx).powi(2) + ((v - self.cy) / self.ry).powi(2)).sqrt()
    }
}

/// A `size`×`size` phantom; `seed` varies the anatomy and texture.
pub fn phantom(size: usize, seed: u64) -> GrayImage {
    let mut rng = XorShift64Star::new(seed ^ 0x5048_414E_544F_4D00);
    let mut uni = |lo: f64, hi: f64| lo + (hi - lo) * rng.next_f64();

    let head = Blob {
        cx: uni(-0.04, 0.04),
        cy: uni(-0.04, 0.04),
        rx: uni(0.70, 0.82),
        ry: uni(0.82, 0.93),
    };
    let tilt = uni(-0.25, 0.25);
    let (sin_t, cos_t) = tilt.sin_cos();
    let scalp = uni(0.90, 0.93);
    let skull = uni(0.84, 0.87);
    let ventricle_gap = uni(0.07, 0.12);
    let ventricles = [-1.0, 1.0].map(|side| Blob {
        cx: side * ventricle_gap,
        cy: uni(-0.12, 0.0),
        rx: uni(0.05, 0.09),
        ry: uni(0.18, 0.28),
    });
    let lesions: Vec<Blob> = (0..(2 + (seed % 3) as usize))
        .map(|_| {
            let r = uni(0.02, 0.06);
            Blob {
                cx: uni(-0.45, 0.45),
                cy: uni(-0.5, 0.5),
                rx: r,
                ry: r * uni(0.7, 1.3),
            }
        })
        .collect();
    let gyri = uni(9.0, 15.0);
    let gyri_phase = uni(0.0, std::f64::consts::TAU);
    let gray = uni(95.0, 125.0);
    let white = uni(150.0, 175.0);
    let scalp_peak = uni(235.0, 262.0);

    let mut noise = XorShift64Star::new(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 1);
    let scale = 2.0 / size as f64;
    GrayImage::from_fn(size, size, |x, y| {
        let n1 = noise.next_f64();
        let n2 = noise.next_f64();
        // Triangular texture noise in (-1, 1).
        let grain = n1 + n2 - 1.0;

        let (px, py) = (
            (x as f64 + 0.5) * scale - 1.0,
            (y as f64 + 0.5) * scale - 1.0,
        );
        let (u, v) = (px - head.cx, py - head.cy);
        let (u, v) = (u * cos_t + v * sin_t, -u * sin_t + v * cos_t);
        let r = Blob {
            cx: 0.0,
            cy: 0.0,
            rx: head.rx,
            ry: head.ry,
        }
        .radius(u, v);

        let value = if r > 1.0 {
            // Background: mostly exactly zero with sparse faint speckle.
            if n1 < 0.92 {
                0.0
            } else {
                1.0 + (n2 * 5.0).floor()
            }
        } else if r > scalp {
            // Partial-volume falloff towards both edges of the scalp band.
            let s = (r - scalp) / (1.0 - scalp);
            let profile = (std::f64::consts::PI * s).sin().powf(0.6);
            40.0 + (scalp_peak - 40.0) * profile + 8.0 * grain
        } else if r > skull {
            25.0 + 6.0 * grain
        } else if ventricles.iter().any(|b| b.radius(u, v) < 1.0) {
            30.0 + 5.0 * grain
        } else if let Some(l) = lesions.iter().find(|b| b.radius(u, v) < 1.0) {
            // Saturated core fading into the surrounding tissue.
            let t = l.radius(u, v);
            300.0 - 120.0 * t + 4.0 * grain
        } else {
            let angle = v.atan2(u);
            let folds = (gyri * angle + 7.0 * r + gyri_phase).sin() * (3.0 * r).cos();
            let core = ((0.62 - r) * 10.0).clamp(0.0, 1.0);
            gray + (white - gray) * core + 14.0 * folds + 5.0 * grain
        };
        value.round().clamp(0.0, 255.0) as u8
    })
}
