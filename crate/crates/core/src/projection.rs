//! The four line-sum projections of an image and their text/PGM renderings.
//!
//! For an image with width `M` and height `N`:
//!
//! | array | length    | entry `k` sums pixels with |
//! |-------|-----------|----------------------------|
//! | `V`   | `M`       | `x == k`                   |
//! | `H`   | `N`       | `y == k`                   |
//! | `D`   | `N + M - 1` | `x + y == k`             |
//! | `A`   | `N + M - 1` | `y - x + M - 1 == k`     |
//!
//! Every entry is bounded by `255 * MAX_DIMENSION < 2^24`, so `u32` is wide
//! enough.

use std::fmt;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use crate::image::GrayImage;
use crate::pgm::{self, PgmEncoding};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Vertical,
    Horizontal,
    Diagonal,
    AntiDiagonal,
}

impl Axis {
    pub const ALL: [Axis; 4] = [
        Axis::Vertical,
        Axis::Horizontal,
        Axis::Diagonal,
        Axis::AntiDiagonal,
    ];

    /// One-letter name (`V`, `H`, `D`, `A`).
    pub fn letter(self) -> &'static str {
        match self {
            Axis::Vertical => "V",
            Axis::Horizontal => "H",
            Axis::Diagonal => "D",
            Axis::AntiDiagonal => "A",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "v" | "vertical" => Ok(Axis::Vertical),
            "h" | "horizontal" => Ok(Axis::Horizontal),
            "d" | "diagonal" => Ok(Axis::Diagonal),
            "a" | "anti-diagonal" | "antidiagonal" => Ok(Axis::AntiDiagonal),
            _ => Err(format!(
                "unknown projection axis {s:?} (expected V, H, D or A)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionSet {
    pub vertical: Vec<u32>,
    pub horizontal: Vec<u32>,
    pub diagonal: Vec<u32>,
    pub anti_diagonal: Vec<u32>,
    pub source_width: usize,
    pub source_height: usize,
}

impl ProjectionSet {
    pub fn get(&self, axis: Axis) -> &[u32] {
        match axis {
            Axis::Vertical => &self.vertical,
            Axis::Horizontal => &self.horizontal,
            Axis::Diagonal => &self.diagonal,
            Axis::AntiDiagonal => &self.anti_diagonal,
        }
    }

    /// Sums of V, H, D and A, in that order. All four equal the image mass.
    pub fn masses(&self) -> [u64; 4] {
        Axis::ALL.map(|axis| self.get(axis).iter().map(|&v| u64::from(v)).sum())
    }
}

/// Computes V, H, D and A in a single row-major pass using additions only.
pub fn project(image: &GrayImage) -> ProjectionSet {
    let width = image.width();
    let height = image.height();
    let mut vertical = vec![0u32; width];
    let mut horizontal = vec![0u32; height];
    let mut diagonal = vec![0u32; width + height - 1];
    let mut anti_diagonal = vec![0u32; width + height - 1];

    // Anti-diagonal sums are accumulated over horizontally mirrored rows so
    // that, like D, each row adds to a contiguous forward window:
    // reversed[y][x'] with x' = M - 1 - x lands in A[y + x'].
    let mut wide = vec![0u32; width];
    for (y, row) in image.rows().enumerate() {
        for (w, &p) in wide.iter_mut().zip(row) {
            *w = u32::from(p);
        }
        horizontal[y] = wide.iter().sum();
        for (v, &p) in vertical.iter_mut().zip(&wide) {
            *v += p;
        }
        for (d, &p) in diagonal[y..y + width].iter_mut().zip(&wide) {
            *d += p;
        }
        for (a, &p) in anti_diagonal[y..y + width]
            .iter_mut()
            .zip(wide.iter().rev())
        {
            *a += p;
        }
    }

    ProjectionSet {
        vertical,
        horizontal,
        diagonal,
        anti_diagonal,
        source_width: width,
        source_height: height,
    }
}

/// Output format for a single projection array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    /// `index,value` rows after a header line.
    Csv,
    /// Bar-style density plot as a binary PGM.
    PgmDensity,
}

impl FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(RenderFormat::Csv),
            "pgm" | "pgm-density" => Ok(RenderFormat::PgmDensity),
            _ => Err(format!(
                "unknown render format {s:?} (expected csv or pgm-density)"
            )),
        }
    }
}

/// Default height of a density plot in pixels.
pub const DENSITY_HEIGHT: usize = 256;

pub fn write_csv<W: Write>(values: &[u32], out: &mut W) -> io::Result<()> {
    writeln!(out, "index,value")?;
    for (k, v) in values.iter().enumerate() {
        writeln!(out, "{k},{v}")?;
    }
    Ok(())
}

/// Column `k` is white (255) from the bottom up to
/// `round(values[k] / max * height)` rows, black above. The largest entry
/// reaches the full height; an all-zero array renders all black.
pub fn density_image(values: &[u32], height: usize) -> GrayImage {
    assert!(!values.is_empty(), "cannot render an empty projection");
    let width = values.len();
    let max = u64::from(values.iter().copied().max().unwrap_or(0));
    let bars: Vec<usize> = values
        .iter()
        .map(|&v| {
            if max == 0 {
                0
            } else {
                ((2 * u64::from(v) * height as u64 + max) / (2 * max)) as usize
            }
        })
        .collect();
    let mut pixels = vec![0u8; width * height];
    for (row_index, row) in pixels.chunks_exact_mut(width).enumerate() {
        let level = height - row_index;
        for (px, &bar) in row.iter_mut().zip(&bars) {
            if bar >= level {
                *px = 255;
            }
        }
    }
    GrayImage::new(width, height, pixels).expect("density plot dimensions are valid")
}

pub fn render_projection(
    values: &[u32],
    out: impl AsRef<Path>,
    format: RenderFormat,
) -> Result<(), pgm::PgmError> {
    match format {
        RenderFormat::Csv => {
            let mut file = io::BufWriter::new(std::fs::File::create(out)?);
            write_csv(values, &mut file)?;
            file.flush()?;
            Ok(())
        }
        RenderFormat::PgmDensity => pgm::save_pgm(
            &density_image(values, DENSITY_HEIGHT),
            out,
            PgmEncoding::Binary,
        ),
    }
}
