//! Grey-level image type and seeded Gaussian noise injection.
//!
//! Pixels are stored as `f64` in row-major order on a nominal 0-255 scale;
//! values may leave that range internally. Quantization to 8 bits happens
//! only on PGM export (see [`crate::pgm`]).

use crate::rng::GaussianStream;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ImageError {
    #[error("image dimensions must be at least 1x1 (got {width}x{height})")]
    EmptyDimensions { width: usize, height: usize },
    #[error("pixel buffer has {got} values, expected {expected}")]
    PixelCountMismatch { expected: usize, got: usize },
    #[error("pixel values must be finite")]
    NonFinitePixel,
    #[error("noise sigma must be non-negative (got {0})")]
    NegativeSigma(f64),
}

/// A width × height grey-level image, row-major, real-valued.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyDimensions { width, height });
        }
        if pixels.len() != width * height {
            return Err(ImageError::PixelCountMismatch {
                expected: width * height,
                got: pixels.len(),
            });
        }
        if pixels.iter().any(|p| !p.is_finite()) {
            return Err(ImageError::NonFinitePixel);
        }
        Ok(Image {
            width,
            height,
            pixels,
        })
    }

    /// Uniform image filled with `value`.
    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self, ImageError> {
        Image::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        self.pixels[row * self.width + col] = v;
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().sum::<f64>() / self.pixels.len() as f64
    }
}

/// Parameters for reproducible additive Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Standard deviation in grey levels.
    pub sigma: f64,
    /// Seed for the ChaCha12 + Box-Muller stream.
    pub seed: u64,
}

/// Adds iid Normal(0, sigma^2) noise to every pixel. No clamping; the output
/// stays in the real domain. Identical `(image, sigma, seed)` triples produce
/// bit-identical outputs.
pub fn add_gaussian_noise(image: &Image, spec: &NoiseSpec) -> Result<Image, ImageError> {
    if spec.sigma < 0.0 || !spec.sigma.is_finite() {
        return Err(ImageError::NegativeSigma(spec.sigma));
    }
    if spec.sigma == 0.0 {
        return Ok(image.clone());
    }
    let mut stream = GaussianStream::new(spec.seed);
    let pixels = image
        .pixels
        .iter()
        .map(|p| p + spec.sigma * stream.next_standard())
        .collect();
    Image::new(image.width, image.height, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(
            Image::new(0, 4, vec![]).unwrap_err(),
            ImageError::EmptyDimensions { width: 0, height: 4 }
        );
        assert!(matches!(
            Image::new(2, 2, vec![1.0; 3]).unwrap_err(),
            ImageError::PixelCountMismatch { .. }
        ));
        assert_eq!(
            Image::new(1, 1, vec![f64::NAN]).unwrap_err(),
            ImageError::NonFinitePixel
        );
    }

    #[test]
    fn zero_sigma_is_identity() {
        let img = Image::constant(8, 8, 42.0).unwrap();
        let out = add_gaussian_noise(&img, &NoiseSpec { sigma: 0.0, seed: 99 }).unwrap();
        assert_eq!(img, out);
    }

    #[test]
    fn negative_sigma_rejected() {
        let img = Image::constant(2, 2, 0.0).unwrap();
        let err = add_gaussian_noise(&img, &NoiseSpec { sigma: -1.0, seed: 0 }).unwrap_err();
        assert_eq!(err, ImageError::NegativeSigma(-1.0));
    }

    #[test]
    fn noise_is_deterministic_per_seed() {
        let img = Image::constant(16, 16, 128.0).unwrap();
        let spec = NoiseSpec { sigma: 20.0, seed: 1234 };
        let a = add_gaussian_noise(&img, &spec).unwrap();
        let b = add_gaussian_noise(&img, &spec).unwrap();
        assert_eq!(a, b);
        let c = add_gaussian_noise(&img, &NoiseSpec { seed: 1235, ..spec }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn noise_std_close_to_sigma() {
        // 120x120 constant image, sigma 20: empirical std within 5%.
        let img = Image::constant(120, 120, 128.0).unwrap();
        let out = add_gaussian_noise(&img, &NoiseSpec { sigma: 20.0, seed: 7 }).unwrap();
        let diffs: Vec<f64> = out
            .pixels()
            .iter()
            .zip(img.pixels())
            .map(|(a, b)| a - b)
            .collect();
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / diffs.len() as f64;
        let std = var.sqrt();
        assert!((std - 20.0).abs() / 20.0 < 0.05, "std {std}");
    }
}
