//! Quality metrics: empirical standard deviation, SNR, MSE and PSNR.
//!
//! PSNR uses a fixed peak of 255 (8-bit convention) and is reported as
//! `f64::INFINITY` exactly when the MSE is zero.

use crate::image::Image;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("image has no pixels")]
    EmptyImage,
    #[error("noise std must be positive")]
    ZeroNoise,
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
}

/// One row of a quality comparison; `psnr_db` is infinite iff `mse` is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub mse: f64,
    pub psnr_db: f64,
    pub snr: Option<f64>,
    pub signal_std: f64,
    pub noise_std: f64,
    /// Peak value the PSNR is referenced to.
    pub peak: f64,
}

/// Population standard deviation over all pixels (divisor |I|, no Bessel
/// correction).
pub fn empirical_std(image: &Image) -> f64 {
    let n = image.pixels().len() as f64;
    let mean = image.mean();
    let var = image
        .pixels()
        .iter()
        .map(|&p| (p - mean) * (p - mean))
        .sum::<f64>()
        / n;
    var.sqrt()
}

/// Signal-to-noise ratio as the plain ratio of standard deviations.
pub fn snr(signal_std: f64, noise_std: f64) -> Result<f64, MetricsError> {
    if noise_std <= 0.0 {
        return Err(MetricsError::ZeroNoise);
    }
    Ok(signal_std / noise_std)
}

/// Mean squared pixel difference.
pub fn mse(reference: &Image, test: &Image) -> Result<f64, MetricsError> {
    if reference.width() != test.width() || reference.height() != test.height() {
        return Err(MetricsError::DimensionMismatch(
            reference.width(),
            reference.height(),
            test.width(),
            test.height(),
        ));
    }
    let sum: f64 = reference
        .pixels()
        .iter()
        .zip(test.pixels())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / reference.pixels().len() as f64)
}

/// PSNR in dB against a peak of 255; infinite for identical images.
pub fn psnr(reference: &Image, test: &Image) -> Result<f64, MetricsError> {
    let e = mse(reference, test)?;
    if e == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(10.0 * (255.0 * 255.0 / e).log10())
    }
}

/// Full report for a reference/test pair. `noise_std` of the difference image
/// feeds the SNR; when the difference is exactly zero the SNR is omitted.
pub fn quality_report(reference: &Image, test: &Image) -> Result<QualityReport, MetricsError> {
    let e = mse(reference, test)?;
    let diff_pixels: Vec<f64> = reference
        .pixels()
        .iter()
        .zip(test.pixels())
        .map(|(a, b)| a - b)
        .collect();
    let diff = Image::new(reference.width(), reference.height(), diff_pixels)
        .map_err(|_| MetricsError::EmptyImage)?;
    let noise_std = empirical_std(&diff);
    let signal_std = empirical_std(reference);
    Ok(QualityReport {
        mse: e,
        psnr_db: if e == 0.0 {
            f64::INFINITY
        } else {
            10.0 * (255.0 * 255.0 / e).log10()
        },
        snr: snr(signal_std, noise_std).ok(),
        signal_std,
        noise_std,
        peak: 255.0,
    })
}
