//! Density sweeps over a corpus and the CSV report they produce.
//!
//! Every (image, density) cell gets its own injection seed, so all methods
//! in a cell see the same corrupted image, and cells can run in any order.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::detector::DetectorConfig;
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::lab::baseline::median_filter;
use crate::lab::metrics::{mse, psnr_from_mse};
use crate::lab::noise::{inject, NoiseSpec};
use crate::lab::rng::splitmix64;
use crate::restorer::denoise;

/// A denoiser under evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Median3,
    Median5,
    /// Detect-then-restore with the given detector settings.
    Proposed(DetectorConfig),
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Median3 => "median3",
            Method::Median5 => "median5",
            Method::Proposed(_) => "proposed",
        }
    }

    pub fn apply(&self, img: &GrayImage) -> GrayImage {
        match self {
            Method::Median3 => median_filter(img, 3).expect("supported window"),
            Method::Median5 => median_filter(img, 5).expect("supported window"),
            Method::Proposed(cfg) => denoise(img, cfg),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "median3" => Ok(Method::Median3),
            "median5" => Ok(Method::Median5),
            "proposed" => Ok(Method::Proposed(DetectorConfig::default())),
            other => Err(Error::invalid(format!(
                "unknown method {other:?} (expected median3, median5 or proposed)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusImage {
    pub id: String,
    pub image: GrayImage,
}

impl CorpusImage {
    pub fn new(id: impl Into<String>, image: GrayImage) -> Self {
        Self {
            id: id.into(),
            image,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub image: String,
    pub density: f64,
    pub method: String,
    pub psnr_db: f64,
    pub mse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub density: f64,
    pub method: String,
    pub mean_psnr_db: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalReport {
    /// Ordered by image, then density, then method, following input order.
    pub rows: Vec<EvalRow>,
    /// Ordered by density, then method.
    pub aggregates: Vec<AggregateRow>,
}

impl EvalReport {
    pub fn mean_psnr(&self, density: f64, method: &str) -> Option<f64> {
        self.aggregates
            .iter()
            .find(|a| a.density == density && a.method == method)
            .map(|a| a.mean_psnr_db)
    }

    /// Serializes the report: per-image rows under
    /// `image,density,method,psnr_db,mse`, a blank line, then means under
    /// `density,method,mean_psnr_db`. Densities are percentages with one
    /// decimal; infinite PSNR is written `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("image,density,method,psnr_db,mse\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.1},{},{},{}",
                r.image,
                r.density * 100.0,
                r.method,
                fmt_db(r.psnr_db),
                r.mse
            );
        }
        out.push_str("\ndensity,method,mean_psnr_db\n");
        for a in &self.aggregates {
            let _ = writeln!(
                out,
                "{:.1},{},{}",
                a.density * 100.0,
                a.method,
                fmt_db(a.mean_psnr_db)
            );
        }
        out
    }
}

/// Formats a PSNR value, writing `inf` for identical images.
pub fn fmt_db(db: f64) -> String {
    if db.is_infinite() && db > 0.0 {
        "inf".to_string()
    } else {
        format!("{db}")
    }
}

/// Injection seed for one (image, density) cell:
/// `splitmix64(seed ^ splitmix64((image_index << 32) | density_index))`.
pub fn cell_seed(seed: u64, image_index: usize, density_index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(((image_index as u64) << 32) | density_index as u64))
}

/// Corrupts every corpus image at every density (symmetric salt and
/// pepper), runs every method and scores it against the clean original.
pub fn sweep(
    corpus: &[CorpusImage],
    densities: &[f64],
    methods: &[Method],
    seed: u64,
) -> Result<EvalReport> {
    if corpus.is_empty() {
        return Err(Error::invalid("corpus is empty"));
    }
    if densities.is_empty() {
        return Err(Error::invalid("no densities given"));
    }
    if methods.is_empty() {
        return Err(Error::invalid("no methods given"));
    }
    let specs = densities
        .iter()
        .enumerate()
        .map(|(di, &d)| Ok((di, d, NoiseSpec::symmetric(d, 0)?)))
        .collect::<Result<Vec<_>>>()?;

    let cells: Vec<(usize, usize, f64, NoiseSpec)> = (0..corpus.len())
        .flat_map(|ii| specs.iter().map(move |&(di, d, s)| (ii, di, d, s)))
        .collect();

    let rows: Vec<EvalRow> = cells
        .par_iter()
        .map(|&(ii, di, density, spec)| {
            let clean = &corpus[ii].image;
            let mut spec = spec;
            spec.seed = cell_seed(seed, ii, di);
            let (noisy, _) = inject(clean, &spec);
            methods
                .iter()
                .map(|m| {
                    let restored = m.apply(&noisy);
                    let err = mse(clean, &restored).expect("same dimensions");
                    EvalRow {
                        image: corpus[ii].id.clone(),
                        density,
                        method: m.name().to_string(),
                        psnr_db: psnr_from_mse(err),
                        mse: err,
                    }
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect();

    let mut aggregates = Vec::with_capacity(densities.len() * methods.len());
    for &density in densities {
        for m in methods {
            let cell: Vec<f64> = rows
                .iter()
                .filter(|r| r.density == density && r.method == m.name())
                .map(|r| r.psnr_db)
                .collect();
            aggregates.push(AggregateRow {
                density,
                method: m.name().to_string(),
                mean_psnr_db: cell.iter().sum::<f64>() / cell.len() as f64,
            });
        }
    }
    Ok(EvalReport { rows, aggregates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::phantom::phantom;

    fn corpus(n: usize) -> Vec<CorpusImage> {
        (0..n)
            .map(|i| CorpusImage::new(format!("p{i}"), phantom(48, i as u64)))
            .collect()
    }

    fn table_methods() -> Vec<Method> {
        ["median3", "median5", "proposed"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect()
    }

    #[test]
    fn zero_density_is_lossless_for_proposed() {
        let clean = GrayImage::from_fn(20, 20, |x, y| (20 + 5 * x + 3 * y) as u8);
        let corpus = [CorpusImage::new("ramp", clean)];
        let report = sweep(
            &corpus,
            &[0.0],
            &[Method::Proposed(DetectorConfig::default())],
            1,
        )
        .unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].psnr_db, f64::INFINITY);
        assert!(report.to_csv().contains(",inf,0\n"));
    }

    #[test]
    fn table_shaped_grid() {
        let densities = [0.05, 0.10, 0.15, 0.20];
        let report = sweep(&corpus(2), &densities, &table_methods(), 1).unwrap();
        assert_eq!(report.rows.len(), 2 * 4 * 3);
        assert_eq!(report.aggregates.len(), 12);
        for d in densities {
            for m in ["median3", "median5", "proposed"] {
                assert!(report.mean_psnr(d, m).is_some());
            }
        }
        let csv = report.to_csv();
        let sections: Vec<&str> = csv.split("\n\n").collect();
        assert_eq!(sections.len(), 2);
        assert_eq!(
            sections[0].lines().next(),
            Some("image,density,method,psnr_db,mse")
        );
        assert_eq!(sections[1].lines().count(), 13);
        assert!(sections[1]
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("5.0,median3,"));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let c = corpus(3);
        let a = sweep(&c, &[0.1, 0.2], &table_methods(), 9).unwrap();
        let b = sweep(&c, &[0.1, 0.2], &table_methods(), 9).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        let other = sweep(&c, &[0.1, 0.2], &table_methods(), 10).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn psnr_and_mse_agree_on_every_row() {
        let report = sweep(&corpus(2), &[0.05, 0.25], &table_methods(), 4).unwrap();
        for r in &report.rows {
            assert!(r.mse > 0.0);
            let expect = 10.0 * (65025.0 / r.mse).log10();
            assert!(((r.psnr_db - expect) / expect).abs() < 1e-9);
        }
    }

    #[test]
    fn argument_errors() {
        assert!(sweep(&[], &[0.1], &table_methods(), 0).is_err());
        assert!(sweep(&corpus(1), &[], &table_methods(), 0).is_err());
        assert!(sweep(&corpus(1), &[1.5], &table_methods(), 0).is_err());
        assert!("median7".parse::<Method>().is_err());
    }

    #[test]
    fn cell_seeds_differ() {
        assert_ne!(cell_seed(1, 0, 0), cell_seed(1, 0, 1));
        assert_ne!(cell_seed(1, 0, 1), cell_seed(1, 1, 0));
        assert_ne!(cell_seed(1, 0, 0), cell_seed(2, 0, 0));
    }
}
