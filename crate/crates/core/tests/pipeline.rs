use impulse_core::lab::{inject, mse, phantom, NoiseSpec};
use impulse_core::pgm::PgmDecoder;
use impulse_core::{denoise, detect, write_pgm, DetectorConfig, GrayImage, StreamDenoiser};

/// Dark background meeting bright tissue along a diagonal, with impulses
/// dropped on and near the boundary.
#[test]
fn edge_region_keeps_edges_and_drops_impulses() {
    let clean = GrayImage::from_fn(12, 12, |x, y| if x + y < 12 { 0 } else { 255 });
    let mut noisy = clean.clone();
    let impulses = [(2, 2, 255), (9, 9, 0), (6, 5, 255), (5, 7, 0)];
    for &(x, y, v) in &impulses {
        noisy.set(x, y, v);
    }
    let cfg = DetectorConfig::default();
    let mask = detect(&noisy, &cfg);
    for &(x, y, _) in &impulses {
        assert!(mask.get(x, y).unwrap(), "impulse at ({x}, {y}) missed");
    }
    let out = denoise(&noisy, &cfg);
    assert_eq!(out, clean);
}

#[test]
fn phantom_noise_is_mostly_removed() {
    let clean = phantom(128, 8);
    let (noisy, truth) = inject(&clean, &NoiseSpec::symmetric(0.1, 21).unwrap());
    let cfg = DetectorConfig::default();
    let flagged = detect(&noisy, &cfg);
    let hits = truth
        .as_slice()
        .iter()
        .zip(flagged.as_slice())
        .filter(|(&t, &f)| t && f)
        .count();
    // Pepper on black background and salt on saturated tissue are
    // invisible by construction; everything else should be found.
    assert!(
        hits as f64 > 0.6 * truth.count() as f64,
        "{hits} of {}",
        truth.count()
    );
    let restored = denoise(&noisy, &cfg);
    assert!(mse(&clean, &restored).unwrap() < mse(&clean, &noisy).unwrap() / 20.0);
}

#[test]
fn decoder_feeds_streaming_engine() {
    let (noisy, _) = inject(&phantom(40, 1), &NoiseSpec::symmetric(0.2, 5).unwrap());
    let bytes = write_pgm(&noisy);
    let mut decoder = PgmDecoder::new(&bytes[..]).unwrap();
    let cfg = DetectorConfig::default();
    let mut engine = StreamDenoiser::new(decoder.width(), decoder.height(), cfg).unwrap();
    let mut out = Vec::new();
    while let Some(v) = decoder.next_pixel().unwrap() {
        engine.push(v, |p| out.push(p)).unwrap();
    }
    let stats = engine.finish().unwrap();
    assert_eq!(stats.pixels_in, 1600);
    assert_eq!(stats.latency_pixels, 82);
    assert_eq!(out, denoise(&noisy, &cfg).into_vec());
}
