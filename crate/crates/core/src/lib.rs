//! Exact raw image moments (orders 0 to 3) of 8-bit grayscale images.
//!
//! Three interchangeable backends compute the same ten integer moments:
//!
//! * [`moments::naive_raw_moments`]: the definition, one pass per moment.
//! * [`moments::baseline_raw_moments`]: row sums with incremental weights,
//!   `3NM + 6N` multiplications.
//! * [`moments::drt_raw_moments`]: sums the image along four directions
//!   (columns, rows, diagonals, anti-diagonals) and combines 1D moments of
//!   those projections, `6(N + M) - 3` weight multiplications.
//!
//! All arithmetic is integer and exact; every multiplication can be
//! counted through a [`counter::Tally`].

pub mod bench;
pub mod counter;
pub mod image;
pub mod moments;
pub mod pgm;
pub mod projection;
pub mod verify;

pub use counter::{MultCounter, Tally, Uncounted};
pub use image::{generate, GrayImage, ImageError, ImageKind};
pub use moments::{Backend, RawMoments};
pub use projection::{project, Axis, ProjectionSet};
