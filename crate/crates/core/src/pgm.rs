//! Netpbm PGM interchange: reads binary `P5` and ASCII `P2`, writes `P5`.
//!
//! Only maxval <= 255 is accepted. Header comments (`#` to end of line) are
//! skipped. On export each pixel is rounded half-up and clamped to [0, 255].

use crate::image::Image;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PgmError {
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("unsupported maxval {0} (must be 1..=255)")]
    UnsupportedMaxval(u32),
    #[error("truncated payload: expected {expected} samples, found {got}")]
    TruncatedPayload { expected: usize, got: usize },
}

struct Tokenizer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tokenizer<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Tokenizer { bytes, pos: 0 }
    }

    fn skip_space_and_comments(&mut self) {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            if self.bytes[self.pos] == b'#' {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(&self.bytes[start..self.pos])
        }
    }

    fn number(&mut self, what: &str) -> Result<u32, PgmError> {
        let tok = self
            .token()
            .ok_or_else(|| PgmError::MalformedHeader(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| PgmError::MalformedHeader(format!("invalid {what}")))
    }
}

/// Parses a PGM byte stream (binary `P5` or ASCII `P2`) into an [`Image`].
pub fn read_pgm(bytes: &[u8]) -> Result<Image, PgmError> {
    let mut tok = Tokenizer::new(bytes);
    let magic = tok
        .token()
        .ok_or_else(|| PgmError::MalformedHeader("empty input".into()))?;
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        other => {
            return Err(PgmError::MalformedHeader(format!(
                "bad magic {:?}",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let width = tok.number("width")? as usize;
    let height = tok.number("height")? as usize;
    let maxval = tok.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(PgmError::MalformedHeader("zero dimension".into()));
    }
    if maxval == 0 || maxval > 255 {
        return Err(PgmError::UnsupportedMaxval(maxval));
    }
    let count = width * height;
    let pixels = if binary {
        // Exactly one whitespace byte separates the maxval from the payload.
        let payload_start = tok.pos + 1;
        if payload_start > bytes.len() {
            return Err(PgmError::TruncatedPayload {
                expected: count,
                got: 0,
            });
        }
        let payload = &bytes[payload_start..];
        if payload.len() < count {
            return Err(PgmError::TruncatedPayload {
                expected: count,
                got: payload.len(),
            });
        }
        payload[..count].iter().map(|&b| b as f64).collect()
    } else {
        let mut pixels = Vec::with_capacity(count);
        for _ in 0..count {
            match tok.token() {
                Some(t) => {
                    let v: u32 = std::str::from_utf8(t)
                        .ok()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| PgmError::MalformedHeader("invalid sample".into()))?;
                    pixels.push(v as f64);
                }
                None => {
                    return Err(PgmError::TruncatedPayload {
                        expected: count,
                        got: pixels.len(),
                    })
                }
            }
        }
        pixels
    };
    Image::new(width, height, pixels)
        .map_err(|e| PgmError::MalformedHeader(e.to_string()))
}

/// Serializes an image as binary `P5` with maxval 255. Pixels are rounded
/// half-up and clamped to [0, 255].
pub fn write_pgm(image: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend(image.pixels().iter().map(|&p| quantize(p)));
    out
}

fn quantize(p: f64) -> u8 {
    let v = (p + 0.5).floor();
    v.clamp(0.0, 255.0) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_binary_p5() {
        let data = b"P5\n2 2\n255\n\x00\x40\x80\xff";
        let img = read_pgm(data).unwrap();
        assert_eq!(img.pixels(), &[0.0, 64.0, 128.0, 255.0]);
        assert_eq!((img.width(), img.height()), (2, 2));
    }

    #[test]
    fn reads_ascii_p2() {
        let img = read_pgm(b"P2\n1 1\n255\n7\n").unwrap();
        assert_eq!(img.pixels(), &[7.0]);
    }

    #[test]
    fn skips_header_comments() {
        let img = read_pgm(b"P5 # magic\n# a comment line\n2 1 # dims\n255\n\x01\x02").unwrap();
        assert_eq!(img.pixels(), &[1.0, 2.0]);
    }

    #[test]
    fn truncated_binary_payload() {
        let err = read_pgm(b"P5\n2 2\n255\n\x01\x02\x03").unwrap_err();
        assert_eq!(err, PgmError::TruncatedPayload { expected: 4, got: 3 });
    }

    #[test]
    fn truncated_ascii_payload() {
        let err = read_pgm(b"P2\n2 2\n255\n1 2 3").unwrap_err();
        assert_eq!(err, PgmError::TruncatedPayload { expected: 4, got: 3 });
    }

    #[test]
    fn rejects_large_maxval() {
        assert_eq!(
            read_pgm(b"P5\n1 1\n65535\n\x00\x00").unwrap_err(),
            PgmError::UnsupportedMaxval(65535)
        );
    }

    #[test]
    fn rejects_bad_magic() {
        assert!(matches!(
            read_pgm(b"P6\n1 1\n255\n\x00\x00\x00").unwrap_err(),
            PgmError::MalformedHeader(_)
        ));
    }

    #[test]
    fn export_quantization() {
        let img = Image::new(3, 1, vec![255.0, 260.3, -4.0]).unwrap();
        let bytes = write_pgm(&img);
        assert_eq!(&bytes[bytes.len() - 3..], &[255, 255, 0]);
    }

    #[test]
    fn half_up_rounding() {
        let img = Image::new(2, 1, vec![1.5, 2.4]).unwrap();
        let bytes = write_pgm(&img);
        assert_eq!(&bytes[bytes.len() - 2..], &[2, 2]);
    }

    #[test]
    fn round_trip_integer_images() {
        let pixels: Vec<f64> = (0..64).map(|i| ((i * 37) % 256) as f64).collect();
        let img = Image::new(8, 8, pixels).unwrap();
        let back = read_pgm(&write_pgm(&img)).unwrap();
        assert_eq!(img, back);
    }
}
