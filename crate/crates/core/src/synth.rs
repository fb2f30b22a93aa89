//! Parametric synthetic wake scenes with exact ground truth.
//!
//! A scene is a uniform background plus three 1-pixel-wide rasterized lines:
//! the turbulent-wake centerline at (track_rho, track_theta) and two arms at
//! track_theta ± arm_half_angle. The arms emanate from the vertex (the
//! centerline point closest to the image center) in one direction, like the
//! V of a Kelvin wake, which also keeps the centerline the strongest peak.
//! Optional low-amplitude seeded texture goes on the background only, so the
//! ground truth stays exact.

use crate::image::Image;
use crate::radon::nearest;
use crate::rng::GaussianStream;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("invalid scene: {0}")]
    InvalidScene(String),
}

/// Parameters of a synthetic wake scene.
#[derive(Debug, Clone, PartialEq)]
pub struct WakeScene {
    /// Square image side in pixels.
    pub size: usize,
    /// Centerline angle in degrees, [0, 180).
    pub track_theta: f64,
    /// Centerline signed offset from the image center, pixels.
    pub track_rho: f64,
    /// Half-angle between each arm and the centerline, degrees.
    pub arm_half_angle: f64,
    /// Background grey level.
    pub background: f64,
    /// Signed grey-level contrast of each wake line (negative = dark wake).
    pub line_delta: f64,
    /// Std-dev of the background texture, grey levels (0 disables, max 2).
    pub texture_std: f64,
    pub seed: u64,
}

impl Default for WakeScene {
    fn default() -> Self {
        WakeScene {
            size: 120,
            track_theta: 45.0,
            track_rho: 10.0,
            arm_half_angle: 19.5,
            background: 128.0,
            line_delta: -80.0,
            texture_std: 1.0,
            seed: 0,
        }
    }
}

impl WakeScene {
    fn validate(&self) -> Result<(), SynthError> {
        if self.size < 16 {
            return Err(SynthError::InvalidScene(format!(
                "size must be >= 16 (got {})",
                self.size
            )));
        }
        if !(0.0..180.0).contains(&self.track_theta) {
            return Err(SynthError::InvalidScene(format!(
                "track_theta must be in [0, 180) (got {})",
                self.track_theta
            )));
        }
        let rho_limit = self.size as f64 / std::f64::consts::SQRT_2;
        if !(self.track_rho.is_finite() && self.track_rho.abs() < rho_limit) {
            return Err(SynthError::InvalidScene(format!(
                "|track_rho| must be < size/sqrt(2) = {rho_limit:.2} (got {})",
                self.track_rho
            )));
        }
        if !(0.0..90.0).contains(&self.arm_half_angle) {
            return Err(SynthError::InvalidScene(format!(
                "arm_half_angle must be in [0, 90) (got {})",
                self.arm_half_angle
            )));
        }
        if !(0.0..=2.0).contains(&self.texture_std) {
            return Err(SynthError::InvalidScene(format!(
                "texture_std must be in [0, 2] (got {})",
                self.texture_std
            )));
        }
        if !self.background.is_finite() || !self.line_delta.is_finite() {
            return Err(SynthError::InvalidScene(
                "background and line_delta must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// One ground-truth line in the Radon (rho, theta) convention.
#[derive(Debug, Clone, PartialEq)]
pub struct GtLine {
    pub rho: f64,
    /// Degrees, [0, 180).
    pub theta: f64,
    /// Sign of the line's contrast: +1 bright, -1 dark.
    pub sign: i8,
}

/// Exact line parameters of a generated scene. `lines[0]` is the centerline,
/// `lines[1]` and `lines[2]` the arms.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub lines: Vec<GtLine>,
}

impl GroundTruth {
    pub fn centerline(&self) -> &GtLine {
        &self.lines[0]
    }

    /// CSV with header `rho,theta,sign`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rho,theta,sign\n");
        for l in &self.lines {
            out.push_str(&format!("{},{},{}\n", l.rho, l.theta, l.sign));
        }
        out
    }
}

/// Reduces a (rho, theta-degrees) pair so theta lands in [0, 180).
fn reduce_line(rho: f64, theta: f64) -> (f64, f64) {
    let mut theta = theta % 360.0;
    if theta < 0.0 {
        theta += 360.0;
    }
    if theta >= 180.0 {
        (-rho, theta - 180.0)
    } else {
        (rho, theta)
    }
}

/// Rasterizes the line (rho, theta) onto `img`: nearest pixel at unit steps
/// along the line, for parameter `s` in [s_min, s_max].
fn draw_line(img: &mut Image, rho: f64, theta_deg: f64, value: f64, s_min: i64, s_max: i64) {
    let m = img.width();
    let center = (m as f64 - 1.0) / 2.0;
    let (sin_t, cos_t) = theta_deg.to_radians().sin_cos();
    for s in s_min..=s_max {
        let s = s as f64;
        let x = rho * cos_t - s * sin_t;
        let y = rho * sin_t + s * cos_t;
        let col = nearest(x + center);
        let row = nearest(y + center);
        if col >= 0 && (col as usize) < m && row >= 0 && (row as usize) < m {
            img.set(row as usize, col as usize, value);
        }
    }
}

/// Generates the scene image and its exact ground truth.
pub fn synth_wake(scene: &WakeScene) -> Result<(Image, GroundTruth), SynthError> {
    scene.validate()?;
    let m = scene.size;
    let reach = ((m as f64) * std::f64::consts::SQRT_2 / 2.0).ceil() as i64;

    // Background with optional seeded texture.
    let mut pixels = vec![scene.background; m * m];
    if scene.texture_std > 0.0 {
        let mut stream = GaussianStream::new(scene.seed);
        for p in pixels.iter_mut() {
            *p += scene.texture_std * stream.next_standard();
        }
    }
    let mut img = Image::new(m, m, pixels)
        .map_err(|e| SynthError::InvalidScene(e.to_string()))?;

    let line_value = scene.background + scene.line_delta;
    let sign: i8 = if scene.line_delta >= 0.0 { 1 } else { -1 };

    // Centerline: full length.
    let (c_rho, c_theta) = (scene.track_rho, scene.track_theta);
    draw_line(&mut img, c_rho, c_theta, line_value, -reach, reach);

    // Arms pass through the vertex (the centerline's closest point to the
    // origin), so each arm's rho is track_rho * cos(arm_half_angle). Arms are
    // half-lines from the vertex in the +s direction.
    let half = scene.arm_half_angle;
    let arm_rho = scene.track_rho * half.to_radians().cos();
    let mut lines = vec![GtLine {
        rho: c_rho,
        theta: c_theta,
        sign,
    }];
    for delta in [-half, half] {
        let (rho, theta) = reduce_line(arm_rho, c_theta + delta);
        // The vertex sits at arc parameter s_v on the arm's own line frame:
        // vertex = (track_rho cos c, track_rho sin c); in the arm frame the
        // along-line coordinate is s = -x*sin(theta) + y*cos(theta).
        let (sin_a, cos_a) = theta.to_radians().sin_cos();
        let (vx, vy) = (
            scene.track_rho * c_theta.to_radians().cos(),
            scene.track_rho * c_theta.to_radians().sin(),
        );
        let s_v = (-vx * sin_a + vy * cos_a).round() as i64;
        draw_line(&mut img, rho, theta, line_value, s_v, reach);
        lines.push(GtLine { rho, theta, sign });
    }

    Ok((img, GroundTruth { lines }))
}
