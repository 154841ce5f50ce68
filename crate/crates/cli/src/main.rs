use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use impulse_core::lab::sweep::{fmt_db, CorpusImage, Method};
use impulse_core::lab::{inject, mse, phantom, psnr, sweep, NoiseSpec};
use impulse_core::pgm::{write_pgm_header, PgmDecoder};
use impulse_core::{
    denoise, detect, read_pgm, write_pgm, DetectorConfig, GrayImage, StreamDenoiser,
};

#[derive(Parser)]
#[command(
    name = "impulse",
    version,
    about = "Salt-and-pepper noise removal for 8-bit PGM images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    /// Whole-image implementation.
    Reference,
    /// Line-buffered raster streaming; same output, O(width) memory.
    Streaming,
}

#[derive(Subcommand)]
enum Command {
    /// Remove salt-and-pepper noise from a PGM image.
    Denoise {
        #[arg(long = "in", value_name = "PGM")]
        input: PathBuf,
        #[arg(long = "out", value_name = "PGM")]
        output: PathBuf,
        /// Differing neighbours (of 8) tolerated before a 0/255 pixel is noisy.
        #[arg(long, default_value_t = DetectorConfig::DEFAULT_T1, value_parser = clap::value_parser!(u8).range(0..=8))]
        t1: u8,
        #[arg(long, value_enum, default_value_t = Engine::Reference)]
        engine: Engine,
        /// Print streaming statistics to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Write the detection mask as a PGM (255 = noisy).
    Mask {
        #[arg(long = "in", value_name = "PGM")]
        input: PathBuf,
        #[arg(long = "out", value_name = "PGM")]
        output: PathBuf,
        #[arg(long, default_value_t = DetectorConfig::DEFAULT_T1, value_parser = clap::value_parser!(u8).range(0..=8))]
        t1: u8,
    },
    /// Corrupt an image with salt-and-pepper noise.
    Inject {
        #[arg(long = "in", value_name = "PGM")]
        input: PathBuf,
        #[arg(long = "out", value_name = "PGM")]
        output: PathBuf,
        /// Ground-truth corruption mask (255 = corrupted).
        #[arg(long = "mask-out", value_name = "PGM")]
        mask_out: Option<PathBuf>,
        /// Noise density in percent.
        #[arg(long)]
        density: f64,
        /// Fraction of corrupted pixels set to 255.
        #[arg(long, default_value_t = 0.5)]
        salt_ratio: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print PSNR and MSE between a reference and a test image.
    Eval {
        #[arg(long = "ref", value_name = "PGM")]
        reference: PathBuf,
        #[arg(long = "test", value_name = "PGM")]
        test: PathBuf,
    },
    /// Run a density sweep over a directory of PGM images and write a CSV report.
    Sweep {
        #[arg(long, value_name = "DIR")]
        corpus: PathBuf,
        /// Comma-separated densities in percent.
        #[arg(long, value_delimiter = ',', default_value = "5,10,15,20")]
        densities: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "median3,median5,proposed"
        )]
        methods: Vec<String>,
        #[arg(long, default_value_t = DetectorConfig::DEFAULT_T1, value_parser = clap::value_parser!(u8).range(0..=8))]
        t1: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "out", value_name = "CSV")]
        output: PathBuf,
    },
    /// Generate synthetic MR-like phantom images.
    Phantom {
        #[arg(long = "out-dir", value_name = "DIR")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 12)]
        count: usize,
        #[arg(long, default_value_t = 256)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Denoise {
            input,
            output,
            t1,
            engine,
            stats,
        } => {
            let cfg = DetectorConfig::new(t1)?;
            match engine {
                Engine::Reference => {
                    let img = load(&input)?;
                    save(&output, &denoise(&img, &cfg))
                }
                Engine::Streaming => stream_file(&input, &output, cfg, stats),
            }
        }
        Command::Mask { input, output, t1 } => {
            let img = load(&input)?;
            save(&output, &detect(&img, &DetectorConfig::new(t1)?).to_image())
        }
        Command::Inject {
            input,
            output,
            mask_out,
            density,
            salt_ratio,
            seed,
        } => {
            let spec = NoiseSpec::new(percent(density)?, salt_ratio, seed)?;
            let (noisy, mask) = inject(&load(&input)?, &spec);
            save(&output, &noisy)?;
            if let Some(path) = mask_out {
                save(&path, &mask.to_image())?;
            }
            Ok(())
        }
        Command::Eval { reference, test } => {
            let (a, b) = (load(&reference)?, load(&test)?);
            let err = mse(&a, &b).with_context(|| {
                format!("comparing {} with {}", reference.display(), test.display())
            })?;
            println!("psnr_db={} mse={}", fmt_db(psnr(&a, &b)?), err);
            Ok(())
        }
        Command::Sweep {
            corpus,
            densities,
            methods,
            t1,
            seed,
            output,
        } => {
            let cfg = DetectorConfig::new(t1)?;
            let methods = methods
                .iter()
                .map(|m| match m.parse::<Method>()? {
                    Method::Proposed(_) => Ok(Method::Proposed(cfg)),
                    other => Ok(other),
                })
                .collect::<Result<Vec<_>>>()?;
            let densities = densities
                .into_iter()
                .map(percent)
                .collect::<Result<Vec<_>>>()?;
            let images = load_corpus(&corpus)?;
            let report = sweep(&images, &densities, &methods, seed)?;
            fs::write(&output, report.to_csv())
                .with_context(|| format!("writing {}", output.display()))
        }
        Command::Phantom {
            out_dir,
            count,
            size,
            seed,
        } => {
            if size == 0 {
                bail!("size must be positive");
            }
            fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            for i in 0..count {
                let path = out_dir.join(format!("phantom_{i:02}.pgm"));
                save(&path, &phantom(size, seed.wrapping_add(i as u64)))?;
            }
            Ok(())
        }
    }
}

/// Densities arrive as percentages and must lie in (0, 100].
fn percent(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 100.0) {
        bail!("density must be in (0, 100] percent, got {p}");
    }
    Ok(p / 100.0)
}

fn load(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    read_pgm(&bytes).with_context(|| format!("decoding {}", path.display()))
}

fn save(path: &Path, img: &GrayImage) -> Result<()> {
    fs::write(path, write_pgm(img)).with_context(|| format!("writing {}", path.display()))
}

fn load_corpus(dir: &Path) -> Result<Vec<CorpusImage>> {
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "pgm") {
            paths.push(path);
        }
    }
    paths.sort();
    if paths.is_empty() {
        bail!("no .pgm files in {}", dir.display());
    }
    paths
        .into_iter()
        .map(|p| {
            let id = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(CorpusImage::new(id, load(&p)?))
        })
        .collect()
}

/// Pipes a PGM file through the streaming engine without holding the frame.
fn stream_file(input: &Path, output: &Path, cfg: DetectorConfig, print_stats: bool) -> Result<()> {
    let file = File::open(input).with_context(|| format!("reading {}", input.display()))?;
    let mut decoder = PgmDecoder::new(BufReader::new(file))
        .with_context(|| format!("decoding {}", input.display()))?;
    let (width, height) = (decoder.width(), decoder.height());
    let out = File::create(output).with_context(|| format!("writing {}", output.display()))?;
    let mut out = BufWriter::new(out);
    write_pgm_header(&mut out, width, height)
        .with_context(|| format!("writing {}", output.display()))?;

    let mut engine = StreamDenoiser::new(width, height, cfg)?;
    let mut write_err = None;
    while let Some(v) = decoder
        .next_pixel()
        .with_context(|| format!("decoding {}", input.display()))?
    {
        engine.push(v, |px| {
            if write_err.is_none() {
                write_err = out.write_all(&[px]).err();
            }
        })?;
    }
    if let Some(e) = write_err {
        return Err(e).with_context(|| format!("writing {}", output.display()));
    }
    let stats = engine.finish()?;
    out.flush()
        .with_context(|| format!("writing {}", output.display()))?;
    if print_stats {
        eprint!("{stats}");
    }
    Ok(())
}
