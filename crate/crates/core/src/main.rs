use std::fmt::Display;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use radon_moments::bench::{
    self, BenchConfig, BenchError, ImageSize, ResultFormat, DEFAULT_LADDER, DEFAULT_REPETITIONS,
    QUICK_REPETITIONS,
};
use radon_moments::moments::Assembly;
use radon_moments::pgm::{self, PgmEncoding, PgmError};
use radon_moments::projection::{self, RenderFormat};
use radon_moments::verify::{self, VerifyConfig};
use radon_moments::{generate, project, Axis, Backend, ImageKind, Uncounted};

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

const ABOUT: &str = "Exact raw image moments of 8-bit grayscale PGM images";

const LONG_ABOUT: &str = "\
Exact raw image moments M00..M30 of 8-bit grayscale PGM images.

The drt backend sums the image along columns (V), rows (H), diagonals (D)
and anti-diagonals (A) and combines 1D moments of those four arrays.
The mixed third-order moments are

    M12 = (D3 - A3 - 2*M30) / 6
    M21 = (D3 + A3 - 2*M03) / 6

which follows from D3 = M30 + M03 + 3*M21 + 3*M12 and
A3 = M03 - M30 + 3*M21 - 3*M12. The widely circulated variant with the two
right-hand sides swapped is wrong (it gives M12 = 13/3 on the 2x2 image
1 2 / 3 4); `verify --as-printed` runs it as a negative control.

Exit codes: 0 success, 1 usage, 2 i/o or parse error, 3 verification mismatch.";

#[derive(Debug, Parser)]
#[command(name = "radon-moments", version, about = ABOUT, long_about = LONG_ABOUT)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BackendArg {
    Naive,
    Baseline,
    Drt,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Naive => Backend::Naive,
            BackendArg::Baseline => Backend::Baseline,
            BackendArg::Drt => Backend::Drt,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProjectionFormat {
    Csv,
    #[value(name = "pgm-density", alias = "pgm")]
    PgmDensity,
}

impl From<ProjectionFormat> for RenderFormat {
    fn from(f: ProjectionFormat) -> Self {
        match f {
            ProjectionFormat::Csv => RenderFormat::Csv,
            ProjectionFormat::PgmDensity => RenderFormat::PgmDensity,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BenchFormat {
    Csv,
    Plotdata,
}

impl From<BenchFormat> for ResultFormat {
    fn from(f: BenchFormat) -> Self {
        match f {
            BenchFormat::Csv => ResultFormat::Csv,
            BenchFormat::Plotdata => ResultFormat::PlotData,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Constant,
    Delta,
    Gradient,
    Random,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the ten raw moments as NAME=value lines (M00 M10 M01 M20 M11 M02 M30 M21 M12 M03)
    Moments {
        /// Input PGM (P2 or P5, maxval <= 255)
        image: PathBuf,
        #[arg(long, value_enum, default_value = "drt")]
        backend: BackendArg,
    },
    /// Write the V, H, D and A projections of an image into a directory
    Project {
        image: PathBuf,
        /// Output directory; receives V.<ext>, H.<ext>, D.<ext>, A.<ext>
        #[arg(long, short)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: ProjectionFormat,
    },
    /// Render one projection as CSV or as a density plot PGM
    Render {
        image: PathBuf,
        /// Projection to render: V, H, D or A
        #[arg(long, value_parser = parse_axis)]
        axis: Axis,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "pgm-density")]
        format: ProjectionFormat,
    },
    /// Check that naive, baseline and drt agree exactly on random images
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest width/height of the random images
        #[arg(long, default_value_t = 64)]
        max_size: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Use the swapped M12/M21 assembly (negative control; expected to fail)
        #[arg(long)]
        as_printed: bool,
        /// Only print failing trials and the summary
        #[arg(long, short)]
        quiet: bool,
    },
    /// Time each backend (fastest of K runs) over a ladder of image sizes
    Bench {
        /// Image sizes, each N (square) or WxH [default: 200 400 800 1600 3200x2400 4032x3024]
        #[arg(long, num_args = 1.., value_parser = parse_size)]
        ladder: Vec<ImageSize>,
        /// Repetitions per backend and size; the fastest is reported
        #[arg(long, short = 'k')]
        k: Option<usize>,
        /// Use K=50 unless --k is given
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, num_args = 1.., default_values = ["naive", "baseline", "drt"])]
        backends: Vec<BackendArg>,
        /// Include power-table construction in the drt timing
        #[arg(long)]
        include_table_build: bool,
        /// Output file; stdout if omitted
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: BenchFormat,
        /// Additionally write plotdata (sqrt_pixels, log10_time_us, backend) here
        #[arg(long)]
        plot_out: Option<PathBuf>,
    },
    /// Write a synthetic test image as PGM
    Generate {
        #[arg(long, value_enum, default_value = "random")]
        kind: KindArg,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pixel value for constant and delta images
        #[arg(long, default_value_t = 255)]
        value: u8,
        /// Column of the delta pixel
        #[arg(long, default_value_t = 0)]
        x: usize,
        /// Row of the delta pixel
        #[arg(long, default_value_t = 0)]
        y: usize,
        /// Write ASCII P2 instead of binary P5
        #[arg(long)]
        ascii: bool,
        #[arg(long, short)]
        out: PathBuf,
    },
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    s.parse()
}

fn parse_size(s: &str) -> Result<ImageSize, String> {
    s.parse()
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Self {
            code,
            message: message.to_string().replace('\n', " "),
        }
    }
}

impl From<PgmError> for Failure {
    fn from(e: PgmError) -> Self {
        Failure::new(EXIT_IO, e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(EXIT_IO, e)
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        let code = match e {
            BenchError::Io(_) => EXIT_IO,
            BenchError::ChecksumMismatch { .. } => EXIT_MISMATCH,
            _ => EXIT_USAGE,
        };
        Failure::new(code, e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("error: usage: {first}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Moments { image, backend } => {
            let img = pgm::load_pgm(&image)?;
            let moments = Backend::from(backend).compute(&img, &mut Uncounted);
            print!("{moments}");
            Ok(())
        }
        Command::Project {
            image,
            out_dir,
            format,
        } => {
            let img = pgm::load_pgm(&image)?;
            let proj = project(&img);
            std::fs::create_dir_all(&out_dir)?;
            let ext = match format {
                ProjectionFormat::Csv => "csv",
                ProjectionFormat::PgmDensity => "pgm",
            };
            for axis in Axis::ALL {
                let path = out_dir.join(format!("{}.{ext}", axis.letter()));
                projection::render_projection(proj.get(axis), &path, format.into())?;
            }
            Ok(())
        }
        Command::Render {
            image,
            axis,
            out,
            format,
        } => {
            let img = pgm::load_pgm(&image)?;
            let proj = project(&img);
            projection::render_projection(proj.get(axis), &out, format.into())?;
            Ok(())
        }
        Command::Verify {
            seed,
            max_size,
            trials,
            as_printed,
            quiet,
        } => {
            if trials == 0 || max_size == 0 {
                return Err(Failure::new(
                    EXIT_USAGE,
                    "usage: --trials and --max-size must be at least 1",
                ));
            }
            let config = VerifyConfig {
                seed,
                max_size,
                trials,
                assembly: if as_printed {
                    Assembly::AsPrinted
                } else {
                    Assembly::Corrected
                },
            };
            let stdout = io::stdout();
            let mut out = stdout.lock();
            let mut write_err = None;
            let reports = verify::verify_with(&config, |r| {
                let line = match &r.mismatch {
                    None if quiet => return,
                    None => format!(
                        "trial {} seed={} size={}x{} ok",
                        r.index, r.seed, r.width, r.height
                    ),
                    Some(m) => format!(
                        "trial {} seed={} size={}x{} MISMATCH {m}",
                        r.index, r.seed, r.width, r.height
                    ),
                };
                if let Err(e) = writeln!(out, "{line}") {
                    write_err.get_or_insert(e);
                }
            })
            .map_err(|e| Failure::new(EXIT_USAGE, e))?;
            if let Some(e) = write_err {
                return Err(e.into());
            }
            let agree = reports.iter().filter(|r| r.passed()).count();
            writeln!(out, "{agree}/{} agree", reports.len())?;
            match reports.iter().find(|r| !r.passed()) {
                None => Ok(()),
                Some(r) => Err(Failure::new(
                    EXIT_MISMATCH,
                    format!(
                        "verification failed: {} of {} trials disagree; first at seed={} size={}x{}: {}",
                        reports.len() - agree,
                        reports.len(),
                        r.seed,
                        r.width,
                        r.height,
                        r.mismatch.expect("failed trial has a mismatch")
                    ),
                )),
            }
        }
        Command::Bench {
            ladder,
            k,
            quick,
            seed,
            backends,
            include_table_build,
            out,
            format,
            plot_out,
        } => {
            let repetitions = k.unwrap_or(if quick {
                QUICK_REPETITIONS
            } else {
                DEFAULT_REPETITIONS
            });
            let mut backends: Vec<Backend> = backends.into_iter().map(Backend::from).collect();
            backends.dedup();
            let config = BenchConfig {
                sizes: if ladder.is_empty() {
                    DEFAULT_LADDER.to_vec()
                } else {
                    ladder
                },
                repetitions,
                seed,
                backends,
                include_table_build,
            };
            let mut announced = false;
            let records = bench::run_bench_with(&config, |r| {
                if !announced {
                    eprintln!("timing fastest of {repetitions} runs per backend and size");
                    announced = true;
                }
                eprintln!(
                    "{:>8} {:>5}x{:<5} best {:>12.3} us  checksum {}",
                    r.backend.name(),
                    r.width,
                    r.height,
                    r.best_time_us,
                    r.checksum
                );
            })?;
            match out {
                Some(path) => bench::emit_results(&records, path, format.into())?,
                None => {
                    let stdout = io::stdout();
                    bench::write_results(&records, &mut stdout.lock(), format.into())?;
                }
            }
            if let Some(path) = plot_out {
                bench::emit_results(&records, path, ResultFormat::PlotData)?;
            }
            Ok(())
        }
        Command::Generate {
            kind,
            width,
            height,
            seed,
            value,
            x,
            y,
            ascii,
            out,
        } => {
            let kind = match kind {
                KindArg::Constant => ImageKind::Constant(value),
                KindArg::Delta => ImageKind::Delta { x, y, v: value },
                KindArg::Gradient => ImageKind::Gradient,
                KindArg::Random => ImageKind::UniformRandom,
            };
            let img =
                generate(kind, width, height, seed).map_err(|e| Failure::new(EXIT_USAGE, e))?;
            let encoding = if ascii {
                PgmEncoding::Ascii
            } else {
                PgmEncoding::Binary
            };
            pgm::save_pgm(&img, &out, encoding)?;
            Ok(())
        }
    }
}
