//! Randomized agreement check between the three moment backends.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counter::Uncounted;
use crate::image::{generate, GrayImage, ImageError, ImageKind};
use crate::moments::{
    baseline_raw_moments, build_power_table, drt_raw_moments_with, naive_raw_moments, Assembly,
    Backend, MomentError, RawMoments,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Widths and heights are drawn uniformly from `1..=max_size`.
    pub max_size: usize,
    pub trials: usize,
    /// Assembly used by the DRT backend. [`Assembly::AsPrinted`] turns the
    /// run into a negative control that is expected to fail.
    pub assembly: Assembly,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_size: 64,
            trials: 100,
            assembly: Assembly::Corrected,
        }
    }
}

/// What a disagreeing backend produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Found {
    Value(i128),
    /// The backend could not produce an integer; reduced fraction.
    Fraction(i128, i128),
}

impl fmt::Display for Found {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Found::Value(v) => write!(f, "{v}"),
            Found::Fraction(n, d) => write!(f, "{n}/{d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub backend: Backend,
    pub moment: &'static str,
    /// Value from the naive oracle.
    pub expected: i128,
    pub found: Found,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: naive={} {}={}",
            self.moment, self.expected, self.backend, self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialReport {
    pub index: usize,
    /// Regenerate the image with `generate(UniformRandom, width, height, seed)`.
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    pub mismatch: Option<Mismatch>,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compares baseline and DRT results against the naive oracle on `image`.
/// Returns the first disagreement in canonical moment order.
pub fn check_image(image: &GrayImage, assembly: Assembly) -> Option<Mismatch> {
    let oracle = naive_raw_moments(image, &mut Uncounted);

    let baseline = baseline_raw_moments(image, &mut Uncounted);
    if let Some((moment, expected, got)) = oracle.first_difference(&baseline) {
        return Some(Mismatch {
            backend: Backend::Baseline,
            moment,
            expected,
            found: Found::Value(got),
        });
    }

    let table = build_power_table(image.width() + image.height() - 2);
    match drt_raw_moments_with(image, &table, assembly, &mut Uncounted) {
        Ok(drt) => oracle
            .first_difference(&drt)
            .map(|(moment, expected, got)| Mismatch {
                backend: Backend::Drt,
                moment,
                expected,
                found: Found::Value(got),
            }),
        Err(MomentError::InexactDivision(div)) => Some(Mismatch {
            backend: Backend::Drt,
            moment: div.moment,
            expected: oracle_value(&oracle, div.moment),
            found: Found::Fraction(div.numerator, div.denominator),
        }),
        Err(e) => panic!("power table sized for the image was rejected: {e}"),
    }
}

fn oracle_value(oracle: &RawMoments, name: &str) -> i128 {
    let idx = RawMoments::NAMES
        .iter()
        .position(|&n| n == name)
        .expect("known moment name");
    oracle.values()[idx]
}

/// Seed and dimensions of trial `index`.
pub fn trial_shape(config: &VerifyConfig, index: usize) -> (u64, usize, usize) {
    let seed = config.seed.wrapping_add(index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);
    let width = rng.gen_range(1..=config.max_size);
    let height = rng.gen_range(1..=config.max_size);
    (seed, width, height)
}

/// Runs every trial, calling `on_trial` as each one finishes.
pub fn verify_with<F: FnMut(&TrialReport)>(
    config: &VerifyConfig,
    mut on_trial: F,
) -> Result<Vec<TrialReport>, ImageError> {
    let mut reports = Vec::with_capacity(config.trials);
    for index in 0..config.trials {
        let (seed, width, height) = trial_shape(config, index);
        let image = generate(ImageKind::UniformRandom, width, height, seed)?;
        let report = TrialReport {
            index,
            seed,
            width,
            height,
            mismatch: check_image(&image, config.assembly),
        };
        on_trial(&report);
        reports.push(report);
    }
    Ok(reports)
}

pub fn verify(config: &VerifyConfig) -> Result<Vec<TrialReport>, ImageError> {
    verify_with(config, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_agrees_when_corrected() {
        let img = GrayImage::new(2, 2, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(check_image(&img, Assembly::Corrected), None);
    }

    #[test]
    fn printed_assembly_fails_on_corpus() {
        let img = GrayImage::new(2, 2, vec![1, 2, 3, 4]).unwrap();
        let m = check_image(&img, Assembly::AsPrinted).unwrap();
        assert_eq!(m.backend, Backend::Drt);
        assert_eq!(m.moment, "M12");
        assert_eq!(m.expected, 4);
        assert_eq!(m.found, Found::Fraction(13, 3));
        assert_eq!(m.to_string(), "M12: naive=4 drt=13/3");
    }

    #[test]
    fn trial_shapes_are_reproducible_and_bounded() {
        let config = VerifyConfig {
            seed: 9,
            max_size: 5,
            ..VerifyConfig::default()
        };
        for i in 0..50 {
            let (seed, w, h) = trial_shape(&config, i);
            assert_eq!(seed, 9 + i as u64);
            assert!((1..=5).contains(&w) && (1..=5).contains(&h));
            assert_eq!(trial_shape(&config, i), (seed, w, h));
        }
    }

    #[test]
    fn single_pixel_trial_passes() {
        let config = VerifyConfig {
            seed: 3,
            max_size: 1,
            trials: 1,
            assembly: Assembly::Corrected,
        };
        let reports = verify(&config).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].passed());
        assert_eq!((reports[0].width, reports[0].height), (1, 1));
    }
}
