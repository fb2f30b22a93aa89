//! Discrete Radon transform, sinogram peak extraction, and the wake-arm
//! angle rule.
//!
//! Lines are parameterized as `rho = x*cos(theta) + y*sin(theta)` in
//! center-origin coordinates: `x = col - (M-1)/2`, `y = row - (M-1)/2`,
//! y pointing down. The transform samples each (rho, theta) line with
//! nearest-neighbor lookup at unit steps along the line; ties at half-pixel
//! distance round down, which makes the theta = 0 projection an exact
//! partition of the image.

use crate::image::Image;
use crate::metrics::{self, QualityReport};
use crate::shrinkage::{self, DenoiseParams};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RadonError {
    #[error("image must be square (got {0}x{1})")]
    NonSquareImage(usize, usize),
    #[error("theta step must be in (0, 90] degrees (got {0})")]
    BadThetaStep(f64),
    #[error("no sinogram cell reaches min_count = {0}")]
    NoValidCells(u32),
    #[error("theta must be in [0, 180) degrees (got {0})")]
    OutOfRangeTheta(f64),
    #[error("peak count k must be at least 1")]
    ZeroPeaks,
    #[error(transparent)]
    Shrinkage(#[from] shrinkage::ShrinkageError),
    #[error(transparent)]
    Metrics(#[from] metrics::MetricsError),
}

/// Nearest integer with half-way cases rounded down.
#[inline]
pub(crate) fn nearest(v: f64) -> i64 {
    (v - 0.5).ceil() as i64
}

/// Radon accumulator over a (theta, rho) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Sinogram {
    /// Angles in degrees, ascending, within [0, 180).
    pub thetas: Vec<f64>,
    /// Rho spans the signed integer offsets [-rho_max, rho_max].
    pub rho_max: i32,
    /// Line sums, indexed `[theta_index * n_rho + rho_index]`.
    pub accum: Vec<f64>,
    /// In-bounds sample count per cell, same indexing.
    pub counts: Vec<u32>,
    /// Mean grey level of the source image.
    pub image_mean: f64,
}

impl Sinogram {
    pub fn n_rho(&self) -> usize {
        2 * self.rho_max as usize + 1
    }

    #[inline]
    pub fn index(&self, theta_idx: usize, rho: i32) -> usize {
        theta_idx * self.n_rho() + (rho + self.rho_max) as usize
    }

    /// CSV dump with header `theta,rho,accum,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,rho,accum,count\n");
        for (ti, &theta) in self.thetas.iter().enumerate() {
            for rho in -self.rho_max..=self.rho_max {
                let i = self.index(ti, rho);
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    theta, rho, self.accum[i], self.counts[i]
                ));
            }
        }
        out
    }

    /// Accumulator affine-rescaled to 0-255 as a theta × rho grey image
    /// (one row per angle).
    pub fn to_heatmap(&self) -> Image {
        let lo = self.accum.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.accum.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let scale = if hi > lo { 255.0 / (hi - lo) } else { 0.0 };
        let pixels = self.accum.iter().map(|&v| (v - lo) * scale).collect();
        Image::new(self.n_rho(), self.thetas.len(), pixels).expect("heatmap dims valid")
    }
}

/// Discrete Radon transform of a square image over theta in [0, 180) at
/// `theta_step` degree increments.
pub fn radon_transform(image: &Image, theta_step: f64) -> Result<Sinogram, RadonError> {
    let m = image.width();
    if image.height() != m {
        return Err(RadonError::NonSquareImage(image.width(), image.height()));
    }
    if !(theta_step > 0.0 && theta_step <= 90.0) {
        return Err(RadonError::BadThetaStep(theta_step));
    }
    let rho_max = ((m as f64) * std::f64::consts::SQRT_2 / 2.0).ceil() as i32;
    let n_theta = (180.0 / theta_step).ceil() as usize;
    let thetas: Vec<f64> = (0..n_theta)
        .map(|i| i as f64 * theta_step)
        .filter(|&t| t < 180.0 - 1e-9)
        .collect();
    let center = (m as f64 - 1.0) / 2.0;
    let n_rho = 2 * rho_max as usize + 1;

    // Projections for distinct angles are independent.
    let columns: Vec<(Vec<f64>, Vec<u32>)> = thetas
        .par_iter()
        .map(|&theta_deg| {
            let (sin_t, cos_t) = theta_deg.to_radians().sin_cos();
            let mut accum = vec![0.0; n_rho];
            let mut counts = vec![0u32; n_rho];
            for (ri, rho) in (-rho_max..=rho_max).enumerate() {
                let rho = rho as f64;
                let mut sum = 0.0;
                let mut count = 0u32;
                for s in -rho_max..=rho_max {
                    let s = s as f64;
                    let x = rho * cos_t - s * sin_t;
                    let y = rho * sin_t + s * cos_t;
                    let col = nearest(x + center);
                    let row = nearest(y + center);
                    if col >= 0 && (col as usize) < m && row >= 0 && (row as usize) < m {
                        sum += image.get(row as usize, col as usize);
                        count += 1;
                    }
                }
                accum[ri] = sum;
                counts[ri] = count;
            }
            (accum, counts)
        })
        .collect();

    let mut accum = Vec::with_capacity(thetas.len() * n_rho);
    let mut counts = Vec::with_capacity(thetas.len() * n_rho);
    for (a, c) in columns {
        accum.extend(a);
        counts.extend(c);
    }
    Ok(Sinogram {
        thetas,
        rho_max,
        accum,
        counts,
        image_mean: image.mean(),
    })
}

/// Sign of a detected line's deviation from the image mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Bright,
    Dark,
}

impl std::fmt::Display for Polarity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Polarity::Bright => write!(f, "bright"),
            Polarity::Dark => write!(f, "dark"),
        }
    }
}

/// One ranked sinogram peak.
#[derive(Debug, Clone, PartialEq)]
pub struct Peak {
    pub rho: i32,
    pub theta: f64,
    pub score: f64,
    pub polarity: Polarity,
}

/// Greedy top-k peak extraction with non-maximum suppression.
///
/// Cells are scored `|accum - counts * image_mean| / sqrt(counts)`, a
/// zero-mean matched filter that detects bright and dark lines without
/// favoring long chords. Cells with fewer than `min_count` in-bounds samples
/// are excluded. Suppression spans `±nms_rho` pixels and `±nms_theta`
/// degrees with wraparound at 180°.
pub fn find_peaks(
    sino: &Sinogram,
    k: usize,
    nms_rho: i32,
    nms_theta: f64,
    min_count: u32,
) -> Result<Vec<Peak>, RadonError> {
    if k == 0 {
        return Err(RadonError::ZeroPeaks);
    }
    let min_count = min_count.max(1);
    struct Cell {
        theta_idx: usize,
        rho: i32,
        score: f64,
        bright: bool,
    }
    let mut cells = Vec::new();
    for ti in 0..sino.thetas.len() {
        for rho in -sino.rho_max..=sino.rho_max {
            let i = sino.index(ti, rho);
            let count = sino.counts[i];
            if count < min_count {
                continue;
            }
            let dev = sino.accum[i] - count as f64 * sino.image_mean;
            cells.push(Cell {
                theta_idx: ti,
                rho,
                score: dev.abs() / (count as f64).sqrt(),
                bright: dev >= 0.0,
            });
        }
    }
    if cells.is_empty() {
        return Err(RadonError::NoValidCells(min_count));
    }
    // Deterministic order: score descending, then (theta, rho) ascending.
    cells.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap()
            .then(a.theta_idx.cmp(&b.theta_idx))
            .then(a.rho.cmp(&b.rho))
    });
    let theta_dist = |a: f64, b: f64| {
        let d = (a - b).abs() % 180.0;
        d.min(180.0 - d)
    };
    let mut peaks: Vec<Peak> = Vec::with_capacity(k);
    for cell in &cells {
        let theta = sino.thetas[cell.theta_idx];
        let suppressed = peaks.iter().any(|p| {
            (p.rho - cell.rho).abs() <= nms_rho && theta_dist(p.theta, theta) <= nms_theta
        });
        if suppressed {
            continue;
        }
        peaks.push(Peak {
            rho: cell.rho,
            theta,
            score: cell.score,
            polarity: if cell.bright {
                Polarity::Bright
            } else {
                Polarity::Dark
            },
        });
        if peaks.len() == k {
            break;
        }
    }
    Ok(peaks)
}

/// The wake-arm angle: the detected track-normal angle plus 90°, reduced
/// modulo 180.
pub fn wake_arm_angle(theta_peak: f64) -> Result<f64, RadonError> {
    if !(0.0..180.0).contains(&theta_peak) {
        return Err(RadonError::OutOfRangeTheta(theta_peak));
    }
    Ok((theta_peak + 90.0) % 180.0)
}

/// Denoiser selection for the detection pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Denoiser {
    None,
    Sure,
    NeighShrink,
}

impl std::str::FromStr for Denoiser {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Denoiser::None),
            "sure" => Ok(Denoiser::Sure),
            "neighshrink" => Ok(Denoiser::NeighShrink),
            other => Err(format!("unknown denoiser {other:?} (none|sure|neighshrink)")),
        }
    }
}

impl std::fmt::Display for Denoiser {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Denoiser::None => write!(f, "none"),
            Denoiser::Sure => write!(f, "sure"),
            Denoiser::NeighShrink => write!(f, "neighshrink"),
        }
    }
}

/// Tuning for [`detect_wake`].
#[derive(Debug, Clone, PartialEq)]
pub struct DetectConfig {
    pub denoiser: Denoiser,
    /// Known noise sigma; `None` uses the MAD estimate.
    pub sigma: Option<f64>,
    pub k: usize,
    pub theta_step: f64,
    pub nms_rho: i32,
    pub nms_theta: f64,
    /// Minimum in-bounds samples per cell; `None` defaults to M/4.
    pub min_count: Option<u32>,
    pub denoise: DenoiseParams,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            denoiser: Denoiser::None,
            sigma: None,
            k: 3,
            theta_step: 1.0,
            nms_rho: 5,
            nms_theta: 5.0,
            min_count: None,
            denoise: DenoiseParams::default(),
        }
    }
}

/// Ranked wake line hypotheses plus the derived arm angle.
#[derive(Debug, Clone, PartialEq)]
pub struct WakeDetection {
    pub peaks: Vec<Peak>,
    /// Arm angle from the top peak via the +90° rule.
    pub arm_angle: f64,
    /// True when the top peak's score is indistinguishable from zero.
    pub low_confidence: bool,
}

impl WakeDetection {
    /// CSV dump with header `rank,rho,theta,score,polarity,arm_angle`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,rho,theta,score,polarity,arm_angle\n");
        for (rank, p) in self.peaks.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                rank + 1,
                p.rho,
                p.theta,
                p.score,
                p.polarity,
                self.arm_angle
            ));
        }
        out
    }
}

/// End-to-end detection: optional denoise, Radon transform, peak extraction,
/// arm angle from the top peak. When a denoiser runs, the returned
/// [`QualityReport`] compares the input against the denoised image.
pub fn detect_wake(
    image: &Image,
    config: &DetectConfig,
) -> Result<(WakeDetection, Option<QualityReport>), RadonError> {
    let (processed, report) = match config.denoiser {
        Denoiser::None => (image.clone(), None),
        Denoiser::Sure => {
            let (out, _) = shrinkage::denoise_sureshrink(image, config.sigma, &config.denoise)?;
            let q = metrics::quality_report(image, &out)?;
            (out, Some(q))
        }
        Denoiser::NeighShrink => {
            let out = shrinkage::denoise_neighshrink(image, config.sigma, &config.denoise)?;
            let q = metrics::quality_report(image, &out)?;
            (out, Some(q))
        }
    };
    let sino = radon_transform(&processed, config.theta_step)?;
    let min_count = config
        .min_count
        .unwrap_or_else(|| (image.width() as u32 / 4).max(1));
    let peaks = find_peaks(&sino, config.k, config.nms_rho, config.nms_theta, min_count)?;
    let top = &peaks[0];
    let detection = WakeDetection {
        arm_angle: wake_arm_angle(top.theta)?,
        low_confidence: top.score <= f64::EPSILON,
        peaks,
    };
    Ok((detection, report))
}
