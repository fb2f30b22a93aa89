//! Orthonormal separable 2-D discrete wavelet transform with periodic
//! boundary extension, plus the exact inverse.
//!
//! Periodic extension keeps the transform orthonormal, so Parseval holds and
//! unit-variance noise stays unit-variance in every subband. Images whose
//! side is not divisible by 2^levels must be padded first (see
//! [`pad_replicate`] / [`crop`]).

use crate::image::Image;
use crate::mat::Mat;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum WaveletError {
    #[error("unknown wavelet {0:?}")]
    UnknownWavelet(String),
    #[error("image must be square with side divisible by 2^levels (got {width}x{height}, levels {levels})")]
    BadDimensions {
        width: usize,
        height: usize,
        levels: usize,
    },
    #[error("malformed pyramid: {0}")]
    MalformedPyramid(String),
}

/// Analysis filter bank: orthonormal lowpass taps and their quadrature
/// mirror highpass.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    pub lowpass: Vec<f64>,
    pub highpass: Vec<f64>,
}

impl FilterPair {
    fn from_lowpass(lowpass: &[f64]) -> Self {
        let len = lowpass.len();
        let highpass = (0..len)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * lowpass[len - 1 - k]
            })
            .collect();
        FilterPair {
            lowpass: lowpass.to_vec(),
            highpass,
        }
    }
}

/// Haar lowpass taps.
const HAAR: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];

/// sym8 decomposition lowpass taps (least-asymmetric, 8 vanishing moments).
const SYM8: [f64; 16] = [
    -0.003_382_415_951_006_125_6,
    -0.000_542_132_331_791_148_1,
    0.031_695_087_811_492_98,
    0.007_607_487_324_917_605,
    -0.143_294_238_350_809_7,
    -0.061_273_359_067_658_52,
    0.481_359_651_258_372_2,
    0.777_185_751_700_523_5,
    0.364_441_894_835_331_4,
    -0.051_945_838_107_709_04,
    -0.027_219_029_917_056_003,
    0.049_137_179_673_607_506,
    0.003_808_752_013_890_615,
    -0.014_952_258_337_048_231,
    -0.000_302_920_514_721_366_8,
    0.001_889_950_332_759_460_9,
];

/// db8 decomposition lowpass taps.
const DB8: [f64; 16] = [
    -0.000_117_476_784_002_281_92,
    0.000_675_449_405_998_556_8,
    -0.000_391_740_372_995_977_1,
    -0.004_870_352_993_010_66,
    0.008_746_094_047_015_655,
    0.013_981_027_917_015_516,
    -0.044_088_253_931_064_72,
    -0.017_369_301_002_022_11,
    0.128_747_426_620_186,
    0.000_472_484_573_997_972_54,
    -0.284_015_542_962_428_1,
    -0.015_829_105_256_023_893,
    0.585_354_683_654_869_1,
    0.675_630_736_298_012_8,
    0.312_871_590_914_465_9,
    0.054_415_842_243_081_61,
];

/// Looks up the analysis filter bank for a wavelet identifier.
/// Supported: `"haar"`, `"sym8"`, `"db8"`.
pub fn wavelet_filters(name: &str) -> Result<FilterPair, WaveletError> {
    match name {
        "haar" => Ok(FilterPair::from_lowpass(&HAAR)),
        "sym8" => Ok(FilterPair::from_lowpass(&SYM8)),
        "db8" => Ok(FilterPair::from_lowpass(&DB8)),
        other => Err(WaveletError::UnknownWavelet(other.to_string())),
    }
}

/// One level's detail subbands. `lh` is low-x/high-y (horizontal edges),
/// `hl` high-x/low-y, `hh` diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailBands {
    pub lh: Mat,
    pub hl: Mat,
    pub hh: Mat,
}

impl DetailBands {
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Mat)> {
        [("LH", &self.lh), ("HL", &self.hl), ("HH", &self.hh)].into_iter()
    }
}

/// L-level 2-D DWT decomposition. `details[0]` is the finest level (level 1).
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletPyramid {
    pub ll: Mat,
    pub details: Vec<DetailBands>,
}

impl WaveletPyramid {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// Total coefficient count across all subbands.
    pub fn coeff_count(&self) -> usize {
        self.ll.len() + self.details.iter().map(|d| d.lh.len() + d.hl.len() + d.hh.len()).sum::<usize>()
    }

    /// Sum of squared coefficients.
    pub fn energy(&self) -> f64 {
        self.ll.energy()
            + self
                .details
                .iter()
                .map(|d| d.lh.energy() + d.hl.energy() + d.hh.energy())
                .sum::<f64>()
    }

    fn validate(&self) -> Result<usize, WaveletError> {
        let levels = self.details.len();
        if levels == 0 {
            return Err(WaveletError::MalformedPyramid("no detail levels".into()));
        }
        let mut side = self.ll.rows();
        if self.ll.cols() != side || side == 0 {
            return Err(WaveletError::MalformedPyramid("LL band not square".into()));
        }
        // Coarsest detail level matches LL; each finer level doubles.
        for (i, d) in self.details.iter().enumerate().rev() {
            for (name, band) in d.iter() {
                if band.rows() != side || band.cols() != side {
                    return Err(WaveletError::MalformedPyramid(format!(
                        "level {} band {} is {}x{}, expected {}x{}",
                        i + 1,
                        name,
                        band.rows(),
                        band.cols(),
                        side,
                        side
                    )));
                }
            }
            side *= 2;
        }
        Ok(side)
    }
}

/// Single-level periodic analysis of one row: `input` of even length n into
/// n/2 approximation and n/2 detail coefficients.
fn analyze_1d(input: &[f64], filters: &FilterPair, approx: &mut [f64], detail: &mut [f64]) {
    let n = input.len();
    let taps = filters.lowpass.len();
    for i in 0..n / 2 {
        let mut a = 0.0;
        let mut d = 0.0;
        for k in 0..taps {
            let x = input[(2 * i + k) % n];
            a += filters.lowpass[k] * x;
            d += filters.highpass[k] * x;
        }
        approx[i] = a;
        detail[i] = d;
    }
}

/// Inverse of [`analyze_1d`]: transpose of the orthonormal analysis operator.
fn synthesize_1d(approx: &[f64], detail: &[f64], filters: &FilterPair, output: &mut [f64]) {
    let n = output.len();
    let taps = filters.lowpass.len();
    output.fill(0.0);
    for i in 0..n / 2 {
        for k in 0..taps {
            let idx = (2 * i + k) % n;
            output[idx] += filters.lowpass[k] * approx[i] + filters.highpass[k] * detail[i];
        }
    }
}

/// One 2-D analysis level: n×n input into four n/2×n/2 quadrant bands.
fn analyze_level(input: &Mat, filters: &FilterPair) -> (Mat, Mat, Mat, Mat) {
    let n = input.rows();
    let half = n / 2;
    // Rows pass: lowpass into columns [0, half), highpass into [half, n).
    let mut rowpass = Mat::zeros(n, n);
    let mut a = vec![0.0; half];
    let mut d = vec![0.0; half];
    for r in 0..n {
        analyze_1d(input.row(r), filters, &mut a, &mut d);
        for c in 0..half {
            rowpass.set(r, c, a[c]);
            rowpass.set(r, half + c, d[c]);
        }
    }
    // Columns pass on each half.
    let mut ll = Mat::zeros(half, half);
    let mut lh = Mat::zeros(half, half);
    let mut hl = Mat::zeros(half, half);
    let mut hh = Mat::zeros(half, half);
    let mut col = vec![0.0; n];
    for c in 0..n {
        for r in 0..n {
            col[r] = rowpass.get(r, c);
        }
        analyze_1d(&col, filters, &mut a, &mut d);
        for r in 0..half {
            if c < half {
                ll.set(r, c, a[r]);
                lh.set(r, c, d[r]);
            } else {
                hl.set(r, c - half, a[r]);
                hh.set(r, c - half, d[r]);
            }
        }
    }
    (ll, lh, hl, hh)
}

fn synthesize_level(ll: &Mat, lh: &Mat, hl: &Mat, hh: &Mat, filters: &FilterPair) -> Mat {
    let half = ll.rows();
    let n = half * 2;
    // Invert the columns pass.
    let mut rowpass = Mat::zeros(n, n);
    let mut a = vec![0.0; half];
    let mut d = vec![0.0; half];
    let mut col = vec![0.0; n];
    for c in 0..n {
        for r in 0..half {
            if c < half {
                a[r] = ll.get(r, c);
                d[r] = lh.get(r, c);
            } else {
                a[r] = hl.get(r, c - half);
                d[r] = hh.get(r, c - half);
            }
        }
        synthesize_1d(&a, &d, filters, &mut col);
        for r in 0..n {
            rowpass.set(r, c, col[r]);
        }
    }
    // Invert the rows pass.
    let mut out = Mat::zeros(n, n);
    let mut row = vec![0.0; n];
    for r in 0..n {
        for c in 0..half {
            a[c] = rowpass.get(r, c);
            d[c] = rowpass.get(r, half + c);
        }
        synthesize_1d(&a, &d, filters, &mut row);
        for c in 0..n {
            out.set(r, c, row[c]);
        }
    }
    out
}

/// Forward L-level 2-D DWT. The image must be square with side divisible by
/// 2^levels.
pub fn dwt2(image: &Image, filters: &FilterPair, levels: usize) -> Result<WaveletPyramid, WaveletError> {
    let (w, h) = (image.width(), image.height());
    if levels == 0 || w != h || levels > 63 || w % (1usize << levels) != 0 {
        return Err(WaveletError::BadDimensions {
            width: w,
            height: h,
            levels,
        });
    }
    let mut current = Mat::from_vec(h, w, image.pixels().to_vec());
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        let (ll, lh, hl, hh) = analyze_level(&current, filters);
        details.push(DetailBands { lh, hl, hh });
        current = ll;
    }
    Ok(WaveletPyramid {
        ll: current,
        details,
    })
}

/// Exact inverse of [`dwt2`] up to floating-point error.
pub fn idwt2(pyramid: &WaveletPyramid, filters: &FilterPair) -> Result<Image, WaveletError> {
    pyramid.validate()?;
    let mut current = pyramid.ll.clone();
    for d in pyramid.details.iter().rev() {
        current = synthesize_level(&current, &d.lh, &d.hl, &d.hh, filters);
    }
    let n = current.rows();
    Image::new(n, n, current.data().to_vec())
        .map_err(|e| WaveletError::MalformedPyramid(e.to_string()))
}

/// Pads an image on the right and bottom by edge replication so both sides
/// become the next multiple of `1 << levels`. Returns the padded image and
/// the original size for [`crop`].
pub fn pad_replicate(image: &Image, levels: usize) -> Image {
    let step = 1usize << levels;
    let round_up = |n: usize| n.div_ceil(step) * step;
    let (w, h) = (image.width(), image.height());
    let (pw, ph) = (round_up(w), round_up(h));
    if (pw, ph) == (w, h) {
        return image.clone();
    }
    let mut pixels = Vec::with_capacity(pw * ph);
    for r in 0..ph {
        let src_r = r.min(h - 1);
        for c in 0..pw {
            pixels.push(image.get(src_r, c.min(w - 1)));
        }
    }
    Image::new(pw, ph, pixels).expect("padded image is valid")
}

/// Crops the top-left `width` × `height` region; inverse of [`pad_replicate`].
pub fn crop(image: &Image, width: usize, height: usize) -> Image {
    if (image.width(), image.height()) == (width, height) {
        return image.clone();
    }
    let mut pixels = Vec::with_capacity(width * height);
    for r in 0..height {
        for c in 0..width {
            pixels.push(image.get(r, c));
        }
    }
    Image::new(width, height, pixels).expect("cropped image is valid")
}
