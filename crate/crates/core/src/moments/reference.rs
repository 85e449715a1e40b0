//! Comparison backends: the literal definition and a row-wise baseline.

use super::RawMoments;
use crate::counter::Tally;
use crate::image::GrayImage;

/// Exact number of multiplications [`naive_raw_moments`] performs on a
/// `width x height` image.
///
/// Each moment `M_ij` is its own pass over all pixels and builds the term
/// `p * x^i * y^j` by multiplying the pixel value by `x` `i` times and by
/// `y` `j` times. Summing `i + j` over the ten moments gives 20 per pixel.
pub fn naive_multiplications(width: usize, height: usize) -> u64 {
    20 * width as u64 * height as u64
}

/// Direct summation of `M_ij = sum I(x, y) x^i y^j`, one independent pass
/// per moment with no sharing of weights between moments. Serves as the
/// ground truth for the other backends.
pub fn naive_raw_moments<T: Tally>(image: &GrayImage, tally: &mut T) -> RawMoments {
    RawMoments {
        m00: naive_moment::<0, 0, T>(image, tally),
        m10: naive_moment::<1, 0, T>(image, tally),
        m01: naive_moment::<0, 1, T>(image, tally),
        m20: naive_moment::<2, 0, T>(image, tally),
        m11: naive_moment::<1, 1, T>(image, tally),
        m02: naive_moment::<0, 2, T>(image, tally),
        m30: naive_moment::<3, 0, T>(image, tally),
        m21: naive_moment::<2, 1, T>(image, tally),
        m12: naive_moment::<1, 2, T>(image, tally),
        m03: naive_moment::<0, 3, T>(image, tally),
    }
}

fn naive_moment<const I: u32, const J: u32, T: Tally>(image: &GrayImage, tally: &mut T) -> i128 {
    // Each term is at most 255 * 2^45 (dimensions are capped at 2^15).
    let mut sum: u128 = 0;
    for (y, row) in image.rows().enumerate() {
        let y = y as u64;
        for (x, &p) in row.iter().enumerate() {
            let x = x as u64;
            let mut term = u64::from(p);
            for _ in 0..I {
                tally.weight(1);
                term *= x;
            }
            for _ in 0..J {
                tally.weight(1);
                term *= y;
            }
            sum += u128::from(term);
        }
    }
    sum as i128
}

/// Row-wise scheme with `3NM + 6N` multiplications.
///
/// Per row `y` it accumulates `s_a = sum_x p * x^a` for `a = 0..=3` with
/// incremental weights (`p*x`, `(p*x)*x`, `(p*x^2)*x`: three multiplications
/// per pixel), then folds the row sums into the moments by repeated
/// multiplication with `y`: `s0*y`, `s0*y*y`, `s0*y*y*y`, `s1*y`, `s1*y*y`
/// and `s2*y`, six per row.
pub fn baseline_raw_moments<T: Tally>(image: &GrayImage, tally: &mut T) -> RawMoments {
    let mut m = [0u128; 10];
    for (y, row) in image.rows().enumerate() {
        let mut s0: u64 = 0;
        let mut s1: u64 = 0;
        let mut s2: u64 = 0;
        // p * x^3 summed over a row can exceed 2^64 for very wide images.
        let mut s3: u128 = 0;
        for (x, &p) in row.iter().enumerate() {
            let x = x as u64;
            let p = u64::from(p);
            tally.weight(3);
            let px = p * x;
            let px2 = px * x;
            let px3 = px2 * x;
            s0 += p;
            s1 += px;
            s2 += px2;
            s3 += u128::from(px3);
        }

        let y = y as u128;
        let (s0, s1, s2) = (u128::from(s0), u128::from(s1), u128::from(s2));
        tally.weight(6);
        let s0y = s0 * y;
        let s0y2 = s0y * y;
        let s0y3 = s0y2 * y;
        let s1y = s1 * y;
        let s1y2 = s1y * y;
        let s2y = s2 * y;

        m[0] += s0; // m00
        m[1] += s1; // m10
        m[2] += s0y; // m01
        m[3] += s2; // m20
        m[4] += s1y; // m11
        m[5] += s0y2; // m02
        m[6] += s3; // m30
        m[7] += s2y; // m21
        m[8] += s1y2; // m12
        m[9] += s0y3; // m03
    }
    RawMoments::from_values(m.map(|v| v as i128))
}
