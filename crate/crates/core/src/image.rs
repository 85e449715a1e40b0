//! Grayscale image type and deterministic synthetic image generation.
//!
//! Pixels are stored row-major: the intensity at column `x` and row `y`
//! lives at `pixels[y * width + x]`. Moments weight the column coordinate
//! with the first index, so `M_ij = sum I(x, y) * x^i * y^j`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest accepted width or height.
///
/// With both dimensions bounded by 2^15, every per-pixel moment term
/// (255 * x^a * y^b with a + b <= 3) fits in a `u64` and every full sum
/// fits in an `i128`.
pub const MAX_DIMENSION: usize = 1 << 15;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ImageError {
    #[error("image dimensions must be positive, got {width}x{height}")]
    ZeroDimension { width: usize, height: usize },
    #[error(
        "image dimension {width}x{height} exceeds the exact-accumulation limit of {MAX_DIMENSION}"
    )]
    TooLarge { width: usize, height: usize },
    #[error("pixel buffer has {actual} samples but {width}x{height} needs {expected}")]
    LengthMismatch {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },
    #[error("delta coordinate ({x}, {y}) lies outside a {width}x{height} image")]
    DeltaOutOfRange {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },
}

/// An immutable 8-bit grayscale image.
#[derive(Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        check_dimensions(width, height)?;
        let expected = width * height;
        if pixels.len() != expected {
            return Err(ImageError::LengthMismatch {
                width,
                height,
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image of `width * height` pixels all set to `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, ImageError> {
        check_dimensions(width, height)?;
        Ok(Self {
            width,
            height,
            pixels: vec![value; width * height],
        })
    }

    /// Number of columns (M).
    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of rows (N).
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    /// Intensity at column `x`, row `y`.
    ///
    /// Panics if the coordinate is out of range.
    pub fn get(&self, x: usize, y: usize) -> u8 {
        assert!(
            x < self.width && y < self.height,
            "pixel ({x}, {y}) out of range"
        );
        self.pixels[y * self.width + x]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, u8> {
        self.pixels.chunks_exact(self.width)
    }

    /// Swaps the roles of rows and columns.
    pub fn transpose(&self) -> GrayImage {
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for x in 0..self.width {
            pixels.extend(self.rows().map(|row| row[x]));
        }
        GrayImage {
            width: self.height,
            height: self.width,
            pixels,
        }
    }

    pub fn total_mass(&self) -> u64 {
        self.pixels.iter().map(|&p| u64::from(p)).sum()
    }
}

impl std::fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = f.debug_struct("GrayImage");
        s.field("width", &self.width).field("height", &self.height);
        if self.pixels.len() <= 64 {
            s.field("pixels", &self.pixels);
        } else {
            s.field("pixels", &format_args!("[{} samples]", self.pixels.len()));
        }
        s.finish()
    }
}

fn check_dimensions(width: usize, height: usize) -> Result<(), ImageError> {
    if width == 0 || height == 0 {
        return Err(ImageError::ZeroDimension { width, height });
    }
    if width > MAX_DIMENSION || height > MAX_DIMENSION {
        return Err(ImageError::TooLarge { width, height });
    }
    Ok(())
}

/// Synthetic image families used by tests, the verifier and the benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageKind {
    /// Every pixel set to the given value.
    Constant(u8),
    /// Zero image with one pixel of value `v` at column `x`, row `y`.
    Delta { x: usize, y: usize, v: u8 },
    /// Linear ramp along `x + y`, 0 at the top-left corner and 255 at the
    /// bottom-right one.
    Gradient,
    /// Independent uniform samples in `[0, 255]` drawn from a ChaCha8
    /// stream seeded with `seed`.
    UniformRandom,
}

/// Builds a synthetic image. The result depends only on the arguments.
///
/// `seed` only affects [`ImageKind::UniformRandom`]. Random pixels are the
/// raw byte stream of `ChaCha8Rng::seed_from_u64(seed)` taken in row-major
/// order, which is identical on every platform.
pub fn generate(
    kind: ImageKind,
    width: usize,
    height: usize,
    seed: u64,
) -> Result<GrayImage, ImageError> {
    check_dimensions(width, height)?;
    let pixels = match kind {
        ImageKind::Constant(v) => vec![v; width * height],
        ImageKind::Delta { x, y, v } => {
            if x >= width || y >= height {
                return Err(ImageError::DeltaOutOfRange {
                    x,
                    y,
                    width,
                    height,
                });
            }
            let mut pixels = vec![0; width * height];
            pixels[y * width + x] = v;
            pixels
        }
        ImageKind::Gradient => {
            let span = (width + height - 2).max(1);
            let mut pixels = Vec::with_capacity(width * height);
            for y in 0..height {
                pixels.extend((0..width).map(|x| ((x + y) * 255 / span) as u8));
            }
            pixels
        }
        ImageKind::UniformRandom => {
            let mut pixels = vec![0; width * height];
            ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut pixels);
            pixels
        }
    };
    Ok(GrayImage {
        width,
        height,
        pixels,
    })
}
