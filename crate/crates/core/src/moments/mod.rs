//! Raw image moments up to order three and the three backends that compute
//! them: the direct definition, a row-wise baseline and the projection
//! (discrete Radon transform) method.

mod drt;
mod power;
mod reference;

use std::fmt;
use std::str::FromStr;

pub use drt::{
    array_moment, assemble, drt_raw_moments, drt_raw_moments_with, Assembly, InexactDivision,
    MomentError, ProjectionMoments,
};
pub use power::{build_power_table, PowerTable};
pub use reference::{baseline_raw_moments, naive_multiplications, naive_raw_moments};

use crate::counter::Tally;
use crate::image::GrayImage;

/// The ten raw moments `M_ij = sum I(x, y) x^i y^j` with `i + j <= 3`.
///
/// Values are exact. The signed type leaves room for the signed
/// intermediate sums used during assembly.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct RawMoments {
    pub m00: i128,
    pub m10: i128,
    pub m01: i128,
    pub m20: i128,
    pub m11: i128,
    pub m02: i128,
    pub m30: i128,
    pub m21: i128,
    pub m12: i128,
    pub m03: i128,
}

impl RawMoments {
    /// Exponent pairs `(i, j)` in the canonical output order.
    pub const ORDERS: [(u32, u32); 10] = [
        (0, 0),
        (1, 0),
        (0, 1),
        (2, 0),
        (1, 1),
        (0, 2),
        (3, 0),
        (2, 1),
        (1, 2),
        (0, 3),
    ];

    pub const NAMES: [&'static str; 10] = [
        "M00", "M10", "M01", "M20", "M11", "M02", "M30", "M21", "M12", "M03",
    ];

    pub fn values(&self) -> [i128; 10] {
        [
            self.m00, self.m10, self.m01, self.m20, self.m11, self.m02, self.m30, self.m21,
            self.m12, self.m03,
        ]
    }

    pub fn from_values(v: [i128; 10]) -> Self {
        Self {
            m00: v[0],
            m10: v[1],
            m01: v[2],
            m20: v[3],
            m11: v[4],
            m02: v[5],
            m30: v[6],
            m21: v[7],
            m12: v[8],
            m03: v[9],
        }
    }

    pub fn get(&self, i: u32, j: u32) -> Option<i128> {
        Self::ORDERS
            .iter()
            .position(|&o| o == (i, j))
            .map(|idx| self.values()[idx])
    }

    /// First moment (in canonical order) where `self` and `other` differ,
    /// as `(name, self_value, other_value)`.
    pub fn first_difference(&self, other: &RawMoments) -> Option<(&'static str, i128, i128)> {
        Self::NAMES
            .iter()
            .zip(self.values().into_iter().zip(other.values()))
            .find(|(_, (a, b))| a != b)
            .map(|(&name, (a, b))| (name, a, b))
    }
}

impl fmt::Display for RawMoments {
    /// One `NAME=value` line per moment, canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, value) in Self::NAMES.iter().zip(self.values()) {
            writeln!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    Naive,
    Baseline,
    Drt,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Naive, Backend::Baseline, Backend::Drt];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Naive => "naive",
            Backend::Baseline => "baseline",
            Backend::Drt => "drt",
        }
    }

    /// Runs the backend. The DRT backend uses the shared power-table cache.
    pub fn compute<T: Tally>(self, image: &GrayImage, tally: &mut T) -> RawMoments {
        match self {
            Backend::Naive => naive_raw_moments(image, tally),
            Backend::Baseline => baseline_raw_moments(image, tally),
            Backend::Drt => drt_raw_moments(image, tally),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Backend::Naive),
            "baseline" => Ok(Backend::Baseline),
            "drt" => Ok(Backend::Drt),
            _ => Err(format!(
                "unknown backend {s:?} (expected naive, baseline or drt)"
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_order() {
        let m = RawMoments::from_values([0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
        let text = m.to_string();
        let names: Vec<_> = text.lines().map(|l| l.split('=').next().unwrap()).collect();
        assert_eq!(names, RawMoments::NAMES);
        assert!(text.starts_with("M00=0\nM10=1\n"));
        assert_eq!(m.get(2, 1), Some(7));
        assert_eq!(m.get(4, 0), None);
    }

    #[test]
    fn first_difference_reports_canonical_order() {
        let a = RawMoments::from_values([1; 10]);
        let mut b = a;
        b.m03 = 5;
        b.m21 = 4;
        assert_eq!(a.first_difference(&b), Some(("M21", 1, 4)));
        assert_eq!(a.first_difference(&a), None);
    }
}
