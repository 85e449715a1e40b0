//! Best-of-K timing of the moment backends over a ladder of image sizes.
//!
//! Only computation is timed: image generation and file output happen
//! outside the measured region. For the DRT backend the timed region covers
//! projection and assembly; the power table is built beforehand unless
//! `include_table_build` is set.

use std::fmt;
use std::fs::File;
use std::hint::black_box;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::counter::Uncounted;
use crate::image::{generate, GrayImage, ImageKind, MAX_DIMENSION};
use crate::moments::{build_power_table, drt_raw_moments_with, Assembly, Backend, RawMoments};

/// Repetitions used when none are requested.
pub const DEFAULT_REPETITIONS: usize = 1000;
/// Shorter run for CI and smoke tests.
pub const QUICK_REPETITIONS: usize = 50;

/// Square sizes from 200 px up to the 4032x3024 photo size.
pub const DEFAULT_LADDER: [ImageSize; 6] = [
    ImageSize::new(200, 200),
    ImageSize::new(400, 400),
    ImageSize::new(800, 800),
    ImageSize::new(1600, 1600),
    ImageSize::new(3200, 2400),
    ImageSize::new(4032, 3024),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageSize {
    pub width: usize,
    pub height: usize,
}

impl ImageSize {
    pub const fn new(width: usize, height: usize) -> Self {
        Self { width, height }
    }

    pub const fn square(side: usize) -> Self {
        Self::new(side, side)
    }

    pub fn pixels(&self) -> usize {
        self.width * self.height
    }
}

impl fmt::Display for ImageSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

impl FromStr for ImageSize {
    type Err = String;

    /// `"200"` is a 200x200 square, `"4032x3024"` is width x height.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid image size {s:?} (expected N or WxH)"))
        };
        match s.split_once(['x', 'X']) {
            Some((w, h)) => Ok(Self::new(parse(w)?, parse(h)?)),
            None => Ok(Self::square(parse(s)?)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<ImageSize>,
    pub repetitions: usize,
    pub seed: u64,
    pub backends: Vec<Backend>,
    pub include_table_build: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: DEFAULT_LADDER.to_vec(),
            repetitions: DEFAULT_REPETITIONS,
            seed: 1,
            backends: Backend::ALL.to_vec(),
            include_table_build: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub backend: Backend,
    pub width: usize,
    pub height: usize,
    pub repetitions: usize,
    pub best_time_us: f64,
    /// M00 of the computed moments.
    pub checksum: i128,
}

impl BenchRecord {
    pub fn sqrt_pixels(&self) -> f64 {
        ((self.width * self.height) as f64).sqrt()
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("repetitions must be at least 1")]
    ZeroRepetitions,
    #[error("no image sizes to benchmark")]
    EmptyLadder,
    #[error("no backends selected")]
    NoBackends,
    #[error("size {0} is outside 1..={MAX_DIMENSION} per side; moments would not be exact")]
    InvalidSize(ImageSize),
    #[error("clock reported zero elapsed time for {backend} at {size}")]
    ClockFailure { backend: Backend, size: ImageSize },
    #[error("checksum disagreement at {size}: {first}={first_value} but {second}={second_value} ({moment})")]
    ChecksumMismatch {
        size: ImageSize,
        moment: &'static str,
        first: Backend,
        first_value: i128,
        second: Backend,
        second_value: i128,
    },
    #[error("no benchmark records to write")]
    EmptyRecords,
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// Times `backend` on `image` `repetitions` times and returns the fastest
/// run together with the computed moments.
pub fn time_backend(
    backend: Backend,
    image: &GrayImage,
    repetitions: usize,
    include_table_build: bool,
) -> (Duration, RawMoments) {
    assert!(repetitions >= 1);
    let max_k = image.width() + image.height() - 2;
    let prebuilt = build_power_table(max_k);
    let mut best = Duration::MAX;
    let mut result = RawMoments::default();
    for _ in 0..repetitions {
        let start = Instant::now();
        let moments = match backend {
            Backend::Drt if include_table_build => {
                let table = build_power_table(max_k);
                drt_raw_moments_with(
                    black_box(image),
                    &table,
                    Assembly::Corrected,
                    &mut Uncounted,
                )
                .expect("table covers image")
            }
            Backend::Drt => drt_raw_moments_with(
                black_box(image),
                &prebuilt,
                Assembly::Corrected,
                &mut Uncounted,
            )
            .expect("table covers image"),
            other => other.compute(black_box(image), &mut Uncounted),
        };
        let elapsed = start.elapsed();
        result = black_box(moments);
        best = best.min(elapsed);
    }
    (best, result)
}

/// Benchmarks every backend on every size, sequentially. Backends must
/// agree on all ten moments for each image.
pub fn run_bench_with<F: FnMut(&BenchRecord)>(
    config: &BenchConfig,
    mut on_record: F,
) -> Result<Vec<BenchRecord>, BenchError> {
    if config.repetitions == 0 {
        return Err(BenchError::ZeroRepetitions);
    }
    if config.sizes.is_empty() {
        return Err(BenchError::EmptyLadder);
    }
    if config.backends.is_empty() {
        return Err(BenchError::NoBackends);
    }
    if let Some(&bad) = config.sizes.iter().find(|s| {
        s.width == 0 || s.height == 0 || s.width > MAX_DIMENSION || s.height > MAX_DIMENSION
    }) {
        return Err(BenchError::InvalidSize(bad));
    }

    let mut records = Vec::with_capacity(config.sizes.len() * config.backends.len());
    for &size in &config.sizes {
        let image = generate(
            ImageKind::UniformRandom,
            size.width,
            size.height,
            config.seed,
        )
        .map_err(|_| BenchError::InvalidSize(size))?;
        let mut reference: Option<(Backend, RawMoments)> = None;
        for &backend in &config.backends {
            let (best, moments) = time_backend(
                backend,
                &image,
                config.repetitions,
                config.include_table_build,
            );
            if best.is_zero() {
                return Err(BenchError::ClockFailure { backend, size });
            }
            match reference {
                None => reference = Some((backend, moments)),
                Some((first, ref expected)) => {
                    if let Some((moment, a, b)) = expected.first_difference(&moments) {
                        return Err(BenchError::ChecksumMismatch {
                            size,
                            moment,
                            first,
                            first_value: a,
                            second: backend,
                            second_value: b,
                        });
                    }
                }
            }
            let record = BenchRecord {
                backend,
                width: size.width,
                height: size.height,
                repetitions: config.repetitions,
                best_time_us: best.as_nanos() as f64 / 1000.0,
                checksum: moments.m00,
            };
            on_record(&record);
            records.push(record);
        }
    }
    Ok(records)
}

pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    run_bench_with(config, |_| {})
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultFormat {
    /// `backend,width,height,repetitions,best_time_us,checksum`
    Csv,
    /// `sqrt_pixels,log10_time_us,backend`, sorted by backend then size.
    PlotData,
}

impl FromStr for ResultFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ResultFormat::Csv),
            "plotdata" => Ok(ResultFormat::PlotData),
            _ => Err(format!(
                "unknown result format {s:?} (expected csv or plotdata)"
            )),
        }
    }
}

pub fn write_results<W: Write>(
    records: &[BenchRecord],
    out: &mut W,
    format: ResultFormat,
) -> Result<(), BenchError> {
    if records.is_empty() {
        return Err(BenchError::EmptyRecords);
    }
    match format {
        ResultFormat::Csv => {
            writeln!(
                out,
                "backend,width,height,repetitions,best_time_us,checksum"
            )?;
            for r in records {
                writeln!(
                    out,
                    "{},{},{},{},{:.3},{}",
                    r.backend, r.width, r.height, r.repetitions, r.best_time_us, r.checksum
                )?;
            }
        }
        ResultFormat::PlotData => {
            let mut sorted: Vec<&BenchRecord> = records.iter().collect();
            sorted.sort_by(|a, b| {
                a.backend
                    .cmp(&b.backend)
                    .then(a.sqrt_pixels().total_cmp(&b.sqrt_pixels()))
            });
            writeln!(out, "sqrt_pixels,log10_time_us,backend")?;
            for r in sorted {
                writeln!(
                    out,
                    "{:?},{:?},{}",
                    r.sqrt_pixels(),
                    r.best_time_us.log10(),
                    r.backend
                )?;
            }
        }
    }
    Ok(())
}

pub fn emit_results(
    records: &[BenchRecord],
    path: impl AsRef<Path>,
    format: ResultFormat,
) -> Result<(), BenchError> {
    if records.is_empty() {
        return Err(BenchError::EmptyRecords);
    }
    let mut out = BufWriter::new(File::create(path)?);
    write_results(records, &mut out, format)?;
    out.flush()?;
    Ok(())
}

/// Ratio of best times between consecutive sizes of `backend`, in the
/// order the records appear: `(smaller, larger, larger_time / smaller_time)`.
pub fn scaling_ratios(
    records: &[BenchRecord],
    backend: Backend,
) -> Vec<(ImageSize, ImageSize, f64)> {
    let runs: Vec<&BenchRecord> = records.iter().filter(|r| r.backend == backend).collect();
    runs.windows(2)
        .map(|pair| {
            (
                ImageSize::new(pair[0].width, pair[0].height),
                ImageSize::new(pair[1].width, pair[1].height),
                pair[1].best_time_us / pair[0].best_time_us,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(backend: Backend, side: usize, time: f64) -> BenchRecord {
        BenchRecord {
            backend,
            width: side,
            height: side,
            repetitions: 1000,
            best_time_us: time,
            checksum: 0,
        }
    }

    #[test]
    fn size_parsing() {
        assert_eq!("200".parse::<ImageSize>(), Ok(ImageSize::square(200)));
        assert_eq!(
            "4032x3024".parse::<ImageSize>(),
            Ok(ImageSize::new(4032, 3024))
        );
        assert!("20x".parse::<ImageSize>().is_err());
        assert!("abc".parse::<ImageSize>().is_err());
    }

    #[test]
    fn plotdata_row() {
        let mut buf = Vec::new();
        write_results(
            &[record(Backend::Drt, 200, 12.3)],
            &mut buf,
            ResultFormat::PlotData,
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row = text.lines().nth(1).unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], "200.0");
        let log: f64 = fields[1].parse().unwrap();
        assert!((log - 1.089_905_111).abs() < 1e-9);
        assert_eq!(fields[2], "drt");
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_results(
            &[record(Backend::Naive, 2, 1.5)],
            &mut buf,
            ResultFormat::Csv,
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "backend,width,height,repetitions,best_time_us,checksum\nnaive,2,2,1000,1.500,0\n"
        );
    }

    #[test]
    fn empty_records_rejected() {
        let mut buf = Vec::new();
        assert!(matches!(
            write_results(&[], &mut buf, ResultFormat::Csv),
            Err(BenchError::EmptyRecords)
        ));
    }

    #[test]
    fn config_validation() {
        let base = BenchConfig {
            sizes: vec![ImageSize::square(2)],
            repetitions: 1,
            ..BenchConfig::default()
        };
        let zero_k = BenchConfig {
            repetitions: 0,
            ..base.clone()
        };
        assert!(matches!(
            run_bench(&zero_k),
            Err(BenchError::ZeroRepetitions)
        ));
        let huge = BenchConfig {
            sizes: vec![ImageSize::new(MAX_DIMENSION + 1, 1)],
            ..base.clone()
        };
        assert!(matches!(run_bench(&huge), Err(BenchError::InvalidSize(_))));
        let empty = BenchConfig {
            sizes: vec![],
            ..base
        };
        assert!(matches!(run_bench(&empty), Err(BenchError::EmptyLadder)));
    }

    #[test]
    fn single_pixel_bench() {
        let config = BenchConfig {
            sizes: vec![ImageSize::square(1)],
            repetitions: 1,
            ..BenchConfig::default()
        };
        let records = run_bench(&config).unwrap();
        assert_eq!(records.len(), 3);
        assert!(records
            .iter()
            .all(|r| r.best_time_us > 0.0 && r.best_time_us.is_finite()));
    }

    #[test]
    fn ratios_follow_record_order() {
        let records = vec![
            record(Backend::Drt, 512, 10.0),
            record(Backend::Naive, 512, 100.0),
            record(Backend::Drt, 1024, 25.0),
            record(Backend::Naive, 1024, 400.0),
        ];
        let drt = scaling_ratios(&records, Backend::Drt);
        assert_eq!(drt.len(), 1);
        assert_eq!(drt[0].2, 2.5);
        assert_eq!(scaling_ratios(&records, Backend::Naive)[0].2, 4.0);
    }
}
