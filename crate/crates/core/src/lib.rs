//! Ship-wake line detection for SAR-style grey-level imagery.
//!
//! The pipeline is denoise → transform → detect: an image is optionally
//! denoised by wavelet shrinkage (SURE-optimal soft thresholding or
//! NeighShrink), mapped to a (ρ, θ) sinogram by a discrete Radon transform,
//! and wake lines are read off as sinogram peaks. Synthetic wake scenes with
//! exact ground truth and the usual quality metrics (MSE/PSNR/SNR) round out
//! the toolbox so the whole chain can be benchmarked end to end.

pub mod image;
pub mod mat;
pub mod metrics;
pub mod pgm;
pub mod radon;
pub mod shrinkage;
pub mod synth;
pub mod wavelet;

mod rng;

pub use image::{Image, ImageError, NoiseSpec};
pub use mat::Mat;
pub use metrics::QualityReport;
pub use pgm::PgmError;
pub use radon::{Denoiser, DetectConfig, Peak, Polarity, Sinogram, WakeDetection};
pub use shrinkage::{DenoiseParams, ThresholdReport};
pub use synth::{GroundTruth, WakeScene};
pub use wavelet::{FilterPair, WaveletPyramid};
