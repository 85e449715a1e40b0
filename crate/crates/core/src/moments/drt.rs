//! Raw moments from one-dimensional moments of the four projections.
//!
//! With `X_i = sum_k X[k] * k^i` for `X` in {V, H, D} and
//! `A_i = sum_k A[k] * (k - M + 1)^i`:
//!
//! ```text
//! M00 = V0    Mi0 = Vi    M0i = Hi                    (i = 1..3)
//! D2 = M20 + M02 + 2 M11
//! D3 = M30 + M03 + 3 M21 + 3 M12
//! A3 = M03 - M30 + 3 M21 - 3 M12
//! ```
//!
//! Solving the last two for the mixed third-order moments gives
//!
//! ```text
//! M12 = (D3 - A3 - 2 M30) / 6
//! M21 = (D3 + A3 - 2 M03) / 6
//! ```
//!
//! The frequently quoted form `M12 = (D3 + A3)/6 - M30/3`,
//! `M21 = (D3 - A3)/6 - M03/3` has the two right-hand sides swapped. On the
//! 2x2 image `[1, 2, 3, 4]` it yields `M12 = 13/3` where the true value is 4.
//! [`Assembly::AsPrinted`] keeps that variant around as a negative control.
//!
//! Weight multiplications per call: `3M` for V, `3N` for H and
//! `3(N + M - 1)` for D2, D3 and A3, so `6(N + M) - 3` in total, plus two
//! constant multiplications (`2 * M30`, `2 * M03`) during assembly.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use super::power::PowerTable;
use super::RawMoments;
use crate::counter::Tally;
use crate::image::GrayImage;
use crate::projection::{project, ProjectionSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assembly {
    /// Mixed third-order moments solved consistently from the D3/A3 identities.
    Corrected,
    /// The swapped variant; only useful to demonstrate that it is wrong.
    AsPrinted,
}

/// A quotient that should have been an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InexactDivision {
    pub moment: &'static str,
    /// Reduced fraction.
    pub numerator: i128,
    pub denominator: i128,
}

impl fmt::Display for InexactDivision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {}/{} is not an integer",
            self.moment, self.numerator, self.denominator
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MomentError {
    #[error("array moment order {0} is out of range (0..=3)")]
    OrderOutOfRange(u32),
    #[error("power table covers k <= {max_k} but {needed} is required")]
    TableTooSmall { needed: usize, max_k: usize },
    #[error("inexact division during assembly: {0}")]
    InexactDivision(InexactDivision),
}

/// `sum_k arr[k] * (k + offset)^order`, exactly.
///
/// Order 0 is a plain sum. Other orders cost one multiplication per element;
/// the sign of a negative shifted index is applied from the exponent's
/// parity.
pub fn array_moment<T: Tally>(
    arr: &[u32],
    order: u32,
    offset: i64,
    table: &PowerTable,
    tally: &mut T,
) -> Result<i128, MomentError> {
    if order > 3 {
        return Err(MomentError::OrderOutOfRange(order));
    }
    if order == 0 || arr.is_empty() {
        return Ok(arr.iter().map(|&v| i128::from(v)).sum());
    }

    let len = arr.len() as i64;
    let needed = offset.unsigned_abs().max((len - 1 + offset).unsigned_abs()) as usize;
    if !table.covers(needed) {
        return Err(MomentError::TableTooSmall {
            needed,
            max_k: table.max_k(),
        });
    }
    let powers = table.powers(order);

    // Elements with k + offset < 0 come first; split there.
    let split = (-offset).clamp(0, len) as usize;
    let (negative, positive) = arr.split_at(split);

    let mut neg_sum: u128 = 0;
    for (k, &v) in negative.iter().enumerate() {
        let shifted = (-(k as i64 + offset)) as usize;
        tally.weight(1);
        neg_sum += u128::from(v) * u128::from(powers[shifted]);
    }
    let mut pos_sum: u128 = 0;
    let start = (split as i64 + offset).max(0) as usize;
    for (&v, &w) in positive.iter().zip(&powers[start..]) {
        tally.weight(1);
        pos_sum += u128::from(v) * u128::from(w);
    }

    let pos = pos_sum as i128;
    let neg = neg_sum as i128;
    Ok(if order % 2 == 1 { pos - neg } else { pos + neg })
}

/// The one-dimensional moments the assembly step needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProjectionMoments {
    /// `V0..=V3`
    pub vertical: [i128; 4],
    /// `H1..=H3` at indices 1..=3; index 0 is unused and zero.
    pub horizontal: [i128; 4],
    pub d2: i128,
    pub d3: i128,
    pub a3: i128,
}

impl ProjectionMoments {
    pub fn from_projections<T: Tally>(
        proj: &ProjectionSet,
        table: &PowerTable,
        tally: &mut T,
    ) -> Result<Self, MomentError> {
        let mut out = ProjectionMoments::default();
        for order in 0..=3 {
            out.vertical[order as usize] = array_moment(&proj.vertical, order, 0, table, tally)?;
        }
        for order in 1..=3 {
            out.horizontal[order as usize] =
                array_moment(&proj.horizontal, order, 0, table, tally)?;
        }
        out.d2 = array_moment(&proj.diagonal, 2, 0, table, tally)?;
        out.d3 = array_moment(&proj.diagonal, 3, 0, table, tally)?;
        let anti_offset = -(proj.source_width as i64 - 1);
        out.a3 = array_moment(&proj.anti_diagonal, 3, anti_offset, table, tally)?;
        Ok(out)
    }
}

fn exact_div(
    moment: &'static str,
    numerator: i128,
    denominator: i128,
) -> Result<i128, InexactDivision> {
    let (q, r) = numerator.div_rem(&denominator);
    if r == 0 {
        return Ok(q);
    }
    let g = numerator.gcd(&denominator);
    Err(InexactDivision {
        moment,
        numerator: numerator / g,
        denominator: denominator / g,
    })
}

/// Combines projection moments into the ten raw moments.
pub fn assemble<T: Tally>(
    pm: &ProjectionMoments,
    assembly: Assembly,
    tally: &mut T,
) -> Result<RawMoments, InexactDivision> {
    let [m00, m10, m20, m30] = pm.vertical;
    let [_, m01, m02, m03] = pm.horizontal;
    let m11 = exact_div("M11", pm.d2 - m20 - m02, 2)?;

    tally.assembly(2);
    let twice_m30 = 2 * m30;
    let twice_m03 = 2 * m03;
    let (m12_num, m21_num) = match assembly {
        Assembly::Corrected => (pm.d3 - pm.a3 - twice_m30, pm.d3 + pm.a3 - twice_m03),
        Assembly::AsPrinted => (pm.d3 + pm.a3 - twice_m30, pm.d3 - pm.a3 - twice_m03),
    };
    let m12 = exact_div("M12", m12_num, 6)?;
    let m21 = exact_div("M21", m21_num, 6)?;

    Ok(RawMoments {
        m00,
        m10,
        m01,
        m20,
        m11,
        m02,
        m30,
        m21,
        m12,
        m03,
    })
}

/// Projects `image` and assembles its moments with an explicit table and
/// assembly variant.
pub fn drt_raw_moments_with<T: Tally>(
    image: &GrayImage,
    table: &PowerTable,
    assembly: Assembly,
    tally: &mut T,
) -> Result<RawMoments, MomentError> {
    let proj = project(image);
    let pm = ProjectionMoments::from_projections(&proj, table, tally)?;
    assemble(&pm, assembly, tally).map_err(MomentError::InexactDivision)
}

/// Exact raw moments through the projection arrays, using the shared
/// power-table cache.
///
/// Panics if an assembly division is inexact, which can only happen through
/// an implementation bug.
pub fn drt_raw_moments<T: Tally>(image: &GrayImage, tally: &mut T) -> RawMoments {
    let table = PowerTable::cached(image.width() + image.height() - 2);
    match drt_raw_moments_with(image, &table, Assembly::Corrected, tally) {
        Ok(m) => m,
        Err(e) => panic!("internal consistency failure: {e}"),
    }
}
