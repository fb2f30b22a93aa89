//! `sarwake`: synthesize wake scenes, add noise, denoise, run the Radon
//! transform, detect wake lines, and benchmark the pipeline.

mod bench;
mod config;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use config::{Settings, SharedFlags};
use sarwake_core::image::{add_gaussian_noise, NoiseSpec};
use sarwake_core::pgm::{read_pgm, write_pgm};
use sarwake_core::radon::{detect_wake, radon_transform, Denoiser, DetectConfig};
use sarwake_core::shrinkage::{denoise_neighshrink, denoise_sureshrink, DenoiseParams};
use sarwake_core::synth::{synth_wake, WakeScene};
use sarwake_core::wavelet::{dwt2, pad_replicate, wavelet_filters};
use sarwake_core::{Image, Mat};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "sarwake", version, about)]
struct Cli {
    #[command(flatten)]
    shared: SharedFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic wake scene (PGM) and its ground-truth lines (CSV).
    Synth {
        /// Square image side in pixels.
        #[arg(long, default_value_t = 120)]
        size: usize,
        /// Centerline angle in degrees, [0, 180).
        #[arg(long, default_value_t = 45.0)]
        theta: f64,
        /// Centerline offset from the image center in pixels.
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        rho: f64,
        /// Half-angle between each arm and the centerline, degrees.
        #[arg(long, default_value_t = 19.5)]
        arm_half_angle: f64,
        /// Background grey level.
        #[arg(long, default_value_t = 128.0)]
        background: f64,
        /// Signed line contrast (negative = dark wake).
        #[arg(long, default_value_t = -80.0, allow_hyphen_values = true)]
        line_delta: f64,
        /// Background texture std-dev (0 to 2 grey levels).
        #[arg(long, default_value_t = 1.0)]
        texture_std: f64,
    },
    /// Add seeded Gaussian noise to a PGM image.
    Noise {
        /// Input PGM path.
        #[arg(long)]
        input: PathBuf,
        /// Noise standard deviation in grey levels.
        #[arg(long)]
        sigma: f64,
    },
    /// Wavelet-shrinkage denoise a PGM image.
    Denoise {
        /// Input PGM path.
        #[arg(long)]
        input: PathBuf,
        /// Shrinkage rule.
        #[arg(long, default_value = "sure")]
        method: Denoiser,
        /// Known noise sigma; omitted = robust estimate from the image.
        #[arg(long)]
        sigma: Option<f64>,
        /// Write the per-subband threshold report to this CSV path.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Dump the input's wavelet subbands as rescaled PGMs in out-dir.
        #[arg(long)]
        dump_subbands: bool,
    },
    /// Radon-transform a PGM image into a sinogram CSV.
    Radon {
        /// Input PGM path.
        #[arg(long)]
        input: PathBuf,
        /// Also write the sinogram as a rescaled PGM heatmap.
        #[arg(long)]
        heatmap: bool,
    },
    /// Detect wake lines; prints ranked peaks as CSV on stdout.
    Detect {
        /// Input PGM path.
        #[arg(long)]
        input: PathBuf,
        /// Denoiser to run before the transform.
        #[arg(long, visible_alias = "denoiser", default_value = "none")]
        method: Denoiser,
        /// Known noise sigma for the denoiser.
        #[arg(long)]
        sigma: Option<f64>,
        /// Number of ranked peaks to report.
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Benchmark both denoisers over built-in scenes and noise levels.
    Bench {
        /// Comma-separated noise sigmas.
        #[arg(long, default_value = "10,20,30,50,75,100")]
        sigmas: String,
        /// Comma-separated methods (none|sure|neighshrink).
        #[arg(long, default_value = "sure,neighshrink")]
        methods: String,
        /// Write 0 in elapsed_ms so identical configs give identical bytes.
        #[arg(long)]
        no_timing: bool,
    },
}

fn load_image(path: &Path) -> Result<Image> {
    let bytes =
        std::fs::read(path).with_context(|| format!("reading image {}", path.display()))?;
    read_pgm(&bytes).with_context(|| format!("parsing PGM {}", path.display()))
}

fn save(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating directory {}", dir.display()))?;
    }
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Affine-rescales a coefficient matrix to the 0-255 grey range.
fn rescaled_image(mat: &Mat) -> Result<Image> {
    let lo = mat.data().iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = mat.data().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = if hi > lo { 255.0 / (hi - lo) } else { 0.0 };
    let pixels = mat.data().iter().map(|&v| (v - lo) * scale).collect();
    Ok(Image::new(mat.cols(), mat.rows(), pixels)?)
}

fn dump_subbands(image: &Image, params: &DenoiseParams, out_dir: &Path) -> Result<()> {
    let filters = wavelet_filters(&params.wavelet)?;
    let padded = pad_replicate(image, params.levels);
    let pyramid = dwt2(&padded, &filters, params.levels)?;
    let ll_name = format!("subband_L{}_LL.pgm", pyramid.levels());
    save(&out_dir.join(ll_name), &write_pgm(&rescaled_image(&pyramid.ll)?))?;
    for (i, bands) in pyramid.details.iter().enumerate() {
        for (name, mat) in bands.iter() {
            let file = format!("subband_L{}_{}.pgm", i + 1, name);
            save(&out_dir.join(file), &write_pgm(&rescaled_image(mat)?))?;
        }
    }
    Ok(())
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    let items: Result<Vec<T>> = raw
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| anyhow::anyhow!("bad {what} {s:?}: {e}")))
        .collect();
    let items = items?;
    if items.is_empty() {
        bail!("empty {what} list");
    }
    Ok(items)
}

fn run(cli: Cli) -> Result<()> {
    let settings: Settings = cli.shared.resolve()?;
    let params = DenoiseParams {
        wavelet: settings.wavelet.clone(),
        levels: settings.levels,
        window: settings.window,
    };
    match cli.command {
        Command::Synth {
            size,
            theta,
            rho,
            arm_half_angle,
            background,
            line_delta,
            texture_std,
        } => {
            let scene = WakeScene {
                size,
                track_theta: theta,
                track_rho: rho,
                arm_half_angle,
                background,
                line_delta,
                texture_std,
                seed: settings.seed,
            };
            let (image, truth) = synth_wake(&scene)?;
            save(&settings.out_dir.join("scene.pgm"), &write_pgm(&image))?;
            save(&settings.out_dir.join("truth.csv"), truth.to_csv().as_bytes())?;
        }
        Command::Noise { input, sigma } => {
            let image = load_image(&input)?;
            let spec = NoiseSpec {
                sigma,
                seed: settings.seed,
            };
            let noisy = add_gaussian_noise(&image, &spec)?;
            save(&settings.out_dir.join("noisy.pgm"), &write_pgm(&noisy))?;
        }
        Command::Denoise {
            input,
            method,
            sigma,
            report,
            dump_subbands: dump,
        } => {
            let image = load_image(&input)?;
            if dump {
                dump_subbands(&image, &params, &settings.out_dir)?;
            }
            let denoised = match method {
                Denoiser::None => bail!("denoise needs --method sure or neighshrink"),
                Denoiser::Sure => {
                    let (out, threshold_report) = denoise_sureshrink(&image, sigma, &params)?;
                    if let Some(path) = &report {
                        save(path, threshold_report.to_csv().as_bytes())?;
                    }
                    out
                }
                Denoiser::NeighShrink => {
                    if report.is_some() {
                        bail!("--report is only produced by --method sure");
                    }
                    denoise_neighshrink(&image, sigma, &params)?
                }
            };
            save(&settings.out_dir.join("denoised.pgm"), &write_pgm(&denoised))?;
        }
        Command::Radon { input, heatmap } => {
            let image = load_image(&input)?;
            let sino = radon_transform(&image, settings.theta_step)?;
            save(&settings.out_dir.join("sinogram.csv"), sino.to_csv().as_bytes())?;
            if heatmap {
                save(&settings.out_dir.join("heatmap.pgm"), &write_pgm(&sino.to_heatmap()))?;
            }
        }
        Command::Detect {
            input,
            method,
            sigma,
            k,
        } => {
            let image = load_image(&input)?;
            let cfg = DetectConfig {
                denoiser: method,
                sigma,
                k,
                theta_step: settings.theta_step,
                denoise: params,
                ..DetectConfig::default()
            };
            let (detection, _) = detect_wake(&image, &cfg)?;
            if detection.low_confidence {
                eprintln!("warning: top peak score is ~0; detection is low confidence");
            }
            print!("{}", detection.to_csv());
        }
        Command::Bench {
            sigmas,
            methods,
            no_timing,
        } => {
            let opts = bench::BenchOptions {
                sigmas: parse_list(&sigmas, "sigma")?,
                methods: parse_list::<Denoiser>(&methods, "method")
                    .map_err(|e| anyhow::anyhow!("{e}"))?,
                no_timing,
            };
            let path = settings.out_dir.join("bench.csv");
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir)?;
            }
            let mut file = std::fs::File::create(&path)
                .with_context(|| format!("creating {}", path.display()))?;
            bench::run_bench(&settings, &opts, &mut file)?;
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
