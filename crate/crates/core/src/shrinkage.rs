//! Wavelet-domain denoisers: per-subband SURE-optimal soft thresholding and
//! NeighShrink, plus the MAD noise estimator.
//!
//! Both denoisers leave the coarsest approximation band untouched and only
//! shrink detail subbands. SURE risk for a unit-variance coefficient vector
//! `x` and threshold `t` is
//!
//! ```text
//! sure(t; x) = d - 2 * #{i : |x_i| <= t} + sum_i min(|x_i|, t)^2
//! ```
//!
//! which is minimized exactly on the candidate set {0} ∪ {|x_i|} ∪ {λ_u}
//! because the risk is piecewise quadratic between sorted magnitudes.

use crate::image::Image;
use crate::mat::Mat;
use crate::wavelet::{self, WaveletError, WaveletPyramid};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ShrinkageError {
    #[error("level-1 HH subband is empty")]
    EmptySubband,
    #[error("threshold must be non-negative (got {0})")]
    NegativeThreshold(f64),
    #[error("coefficient vector is empty")]
    EmptyVector,
    #[error("neighborhood window must be odd (got {0})")]
    EvenWindow(usize),
    #[error(transparent)]
    Wavelet(#[from] WaveletError),
}

/// Tuning shared by both denoisers.
#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseParams {
    pub wavelet: String,
    pub levels: usize,
    /// NeighShrink neighborhood side length (odd).
    pub window: usize,
}

impl Default for DenoiseParams {
    fn default() -> Self {
        DenoiseParams {
            wavelet: "sym8".to_string(),
            levels: 4,
            window: 3,
        }
    }
}

/// Where the noise sigma came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaSource {
    Given,
    Estimated,
}

/// Per-subband threshold choice made by the SURE denoiser.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandThreshold {
    pub level: usize,
    pub band: &'static str,
    pub sigma: f64,
    /// Chosen threshold on the unit-variance scale.
    pub threshold: f64,
    /// Realized SURE risk at the chosen threshold.
    pub risk: f64,
    /// True when the universal cap λ_u won the argmin.
    pub capped: bool,
}

/// Thresholding decisions for one denoise run.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub sigma_used: f64,
    pub sigma_source: SigmaSource,
    pub rows: Vec<SubbandThreshold>,
}

impl ThresholdReport {
    /// CSV with header `subband,sigma,t,risk,capped`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("subband,sigma,t,risk,capped\n");
        for r in &self.rows {
            out.push_str(&format!(
                "L{}_{},{},{},{},{}\n",
                r.level, r.band, r.sigma, r.threshold, r.risk, r.capped
            ));
        }
        out
    }
}

/// Robust MAD noise estimate from the finest diagonal subband:
/// `median(|HH1|) / 0.6745`.
pub fn estimate_noise_sigma(pyramid: &WaveletPyramid) -> Result<f64, ShrinkageError> {
    let hh1 = pyramid
        .details
        .first()
        .map(|d| &d.hh)
        .ok_or(ShrinkageError::EmptySubband)?;
    if hh1.is_empty() {
        return Err(ShrinkageError::EmptySubband);
    }
    let mut mags: Vec<f64> = hh1.data().iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = mags.len();
    let median = if n % 2 == 1 {
        mags[n / 2]
    } else {
        0.5 * (mags[n / 2 - 1] + mags[n / 2])
    };
    Ok(median / 0.6745)
}

/// Soft-threshold rule `sign(x) * max(|x| - t, 0)`.
pub fn soft_threshold(x: f64, t: f64) -> Result<f64, ShrinkageError> {
    if t < 0.0 {
        return Err(ShrinkageError::NegativeThreshold(t));
    }
    Ok(soft(x, t))
}

#[inline]
fn soft(x: f64, t: f64) -> f64 {
    x.signum() * (x.abs() - t).max(0.0)
}

/// SURE risk of soft thresholding a unit-variance vector at `t`.
pub fn sure_cost(x: &[f64], t: f64) -> Result<f64, ShrinkageError> {
    if x.is_empty() {
        return Err(ShrinkageError::EmptyVector);
    }
    if t < 0.0 {
        return Err(ShrinkageError::NegativeThreshold(t));
    }
    let d = x.len() as f64;
    let mut below = 0.0;
    let mut sum = 0.0;
    for &v in x {
        let a = v.abs();
        if a <= t {
            below += 1.0;
        }
        let m = a.min(t);
        sum += m * m;
    }
    Ok(d - 2.0 * below + sum)
}

/// Outcome of the candidate-set SURE minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SureChoice {
    pub threshold: f64,
    pub risk: f64,
    /// True when the universal cap λ_u = sqrt(2 ln d) was selected.
    pub capped: bool,
}

/// SURE-optimal soft threshold for a unit-variance vector, capped at the
/// universal threshold. Ties break toward the smaller threshold.
pub fn sure_threshold_choice(x: &[f64]) -> Result<SureChoice, ShrinkageError> {
    if x.is_empty() {
        return Err(ShrinkageError::EmptyVector);
    }
    let lambda_u = (2.0 * (x.len() as f64).ln()).sqrt().max(0.0);
    let mut candidates: Vec<f64> = vec![0.0];
    candidates.extend(x.iter().map(|v| v.abs()).filter(|&a| a <= lambda_u));
    candidates.push(lambda_u);
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best = SureChoice {
        threshold: 0.0,
        risk: f64::INFINITY,
        capped: false,
    };
    for &t in &candidates {
        let risk = sure_cost(x, t)?;
        if risk < best.risk {
            best = SureChoice {
                threshold: t,
                risk,
                capped: false,
            };
        }
    }
    best.capped = best.threshold == lambda_u && lambda_u > 0.0;
    Ok(best)
}

/// SURE-optimal threshold; see [`sure_threshold_choice`].
pub fn sure_threshold(x: &[f64]) -> Result<f64, ShrinkageError> {
    sure_threshold_choice(x).map(|c| c.threshold)
}

/// Applies SURE-optimal soft thresholding to every detail subband in place.
/// Coefficients are normalized by `sigma` for threshold selection; the LL
/// band passes through untouched.
pub fn sureshrink_pyramid(
    pyramid: &mut WaveletPyramid,
    sigma: f64,
) -> Result<ThresholdReport, ShrinkageError> {
    let mut rows = Vec::new();
    if sigma <= 0.0 {
        return Ok(ThresholdReport {
            sigma_used: sigma.max(0.0),
            sigma_source: SigmaSource::Given,
            rows,
        });
    }
    for (i, bands) in pyramid.details.iter_mut().enumerate() {
        let level = i + 1;
        for (name, band) in [
            ("LH", &mut bands.lh),
            ("HL", &mut bands.hl),
            ("HH", &mut bands.hh),
        ] {
            let normalized: Vec<f64> = band.data().iter().map(|c| c / sigma).collect();
            let choice = sure_threshold_choice(&normalized)?;
            let t_grey = choice.threshold * sigma;
            for c in band.data_mut() {
                *c = soft(*c, t_grey);
            }
            rows.push(SubbandThreshold {
                level,
                band: name,
                sigma,
                threshold: choice.threshold,
                risk: choice.risk,
                capped: choice.capped,
            });
        }
    }
    Ok(ThresholdReport {
        sigma_used: sigma,
        sigma_source: SigmaSource::Given,
        rows,
    })
}

/// NeighShrink in place: each detail coefficient is scaled by
/// `β = max(0, 1 - λ²/S²)` where `S²` sums squared coefficients over the
/// window×window neighborhood (zero-padded at borders) and
/// `λ² = 2σ² ln n` with `n` the subband coefficient count.
pub fn neighshrink_pyramid(
    pyramid: &mut WaveletPyramid,
    sigma: f64,
    window: usize,
) -> Result<(), ShrinkageError> {
    if window % 2 == 0 || window == 0 {
        return Err(ShrinkageError::EvenWindow(window));
    }
    if sigma <= 0.0 {
        return Ok(());
    }
    let half = (window / 2) as isize;
    for bands in pyramid.details.iter_mut() {
        for band in [&mut bands.lh, &mut bands.hl, &mut bands.hh] {
            let n = band.len() as f64;
            let lambda2 = 2.0 * sigma * sigma * n.ln();
            let shrunk = neighshrink_band(band, lambda2, half);
            *band = shrunk;
        }
    }
    Ok(())
}

fn neighshrink_band(band: &Mat, lambda2: f64, half: isize) -> Mat {
    let (rows, cols) = (band.rows() as isize, band.cols() as isize);
    let mut out = Mat::zeros(band.rows(), band.cols());
    for r in 0..rows {
        for c in 0..cols {
            let mut s2 = 0.0;
            for dr in -half..=half {
                for dc in -half..=half {
                    let (rr, cc) = (r + dr, c + dc);
                    if rr >= 0 && rr < rows && cc >= 0 && cc < cols {
                        let v = band.get(rr as usize, cc as usize);
                        s2 += v * v;
                    }
                }
            }
            let coeff = band.get(r as usize, c as usize);
            let beta = if s2 > 0.0 {
                (1.0 - lambda2 / s2).max(0.0)
            } else {
                0.0
            };
            out.set(r as usize, c as usize, beta * coeff);
        }
    }
    out
}

fn transform(
    image: &Image,
    params: &DenoiseParams,
) -> Result<(WaveletPyramid, wavelet::FilterPair), ShrinkageError> {
    let filters = wavelet::wavelet_filters(&params.wavelet)?;
    let padded = wavelet::pad_replicate(image, params.levels);
    let pyramid = wavelet::dwt2(&padded, &filters, params.levels)?;
    Ok((pyramid, filters))
}

fn resolve_sigma(
    sigma: Option<f64>,
    pyramid: &WaveletPyramid,
) -> Result<(f64, SigmaSource), ShrinkageError> {
    match sigma {
        Some(s) => Ok((s, SigmaSource::Given)),
        None => Ok((estimate_noise_sigma(pyramid)?, SigmaSource::Estimated)),
    }
}

/// Full SURE denoise: DWT, per-subband SURE soft thresholding, inverse DWT,
/// crop back to the input size. `sigma = None` uses the MAD estimate.
pub fn denoise_sureshrink(
    image: &Image,
    sigma: Option<f64>,
    params: &DenoiseParams,
) -> Result<(Image, ThresholdReport), ShrinkageError> {
    let (mut pyramid, filters) = transform(image, params)?;
    let (sigma, source) = resolve_sigma(sigma, &pyramid)?;
    if sigma <= 0.0 {
        // All thresholds are 0 * sigma = 0; the output is the input exactly.
        return Ok((
            image.clone(),
            ThresholdReport {
                sigma_used: 0.0,
                sigma_source: source,
                rows: Vec::new(),
            },
        ));
    }
    let mut report = sureshrink_pyramid(&mut pyramid, sigma)?;
    report.sigma_source = source;
    let recon = wavelet::idwt2(&pyramid, &filters)?;
    Ok((
        wavelet::crop(&recon, image.width(), image.height()),
        report,
    ))
}

/// Full NeighShrink denoise; same framing as [`denoise_sureshrink`].
pub fn denoise_neighshrink(
    image: &Image,
    sigma: Option<f64>,
    params: &DenoiseParams,
) -> Result<Image, ShrinkageError> {
    if params.window % 2 == 0 || params.window == 0 {
        return Err(ShrinkageError::EvenWindow(params.window));
    }
    let (mut pyramid, filters) = transform(image, params)?;
    let (sigma, _) = resolve_sigma(sigma, &pyramid)?;
    if sigma <= 0.0 {
        return Ok(image.clone());
    }
    neighshrink_pyramid(&mut pyramid, sigma, params.window)?;
    let recon = wavelet::idwt2(&pyramid, &filters)?;
    Ok(wavelet::crop(&recon, image.width(), image.height()))
}
