//! PGM (P2 ASCII / P5 binary) reading and writing, 8-bit only.
//!
//! Header grammar follows Netpbm: magic, width, height and maxval separated
//! by whitespace, with `#` comments running to end of line allowed anywhere
//! whitespace is. A P5 raster starts after exactly one whitespace byte
//! following maxval. Samples are kept as stored; they are not rescaled when
//! maxval is below 255.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::image::{GrayImage, ImageError};

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("not a PGM file: expected magic P2 or P5")]
    BadMagic,
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("unsupported maxval {0}: only 8-bit PGM (maxval 1..=255) is supported")]
    UnsupportedMaxval(u32),
    #[error("PGM has a zero dimension ({width}x{height})")]
    ZeroDimension { width: usize, height: usize },
    #[error("truncated PGM raster: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("invalid PGM sample {token:?} at index {index} (maxval {maxval})")]
    InvalidSample {
        index: usize,
        token: String,
        maxval: u32,
    },
    #[error(transparent)]
    Image(#[from] ImageError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmEncoding {
    /// P2
    Ascii,
    /// P5
    Binary,
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage, PgmError> {
    decode_pgm(&fs::read(path)?)
}

pub fn save_pgm(
    image: &GrayImage,
    path: impl AsRef<Path>,
    encoding: PgmEncoding,
) -> Result<(), PgmError> {
    let mut file = io::BufWriter::new(fs::File::create(path)?);
    write_pgm(image, &mut file, encoding)?;
    file.flush()?;
    Ok(())
}

/// Writes `image` with maxval 255.
pub fn write_pgm<W: Write>(
    image: &GrayImage,
    out: &mut W,
    encoding: PgmEncoding,
) -> io::Result<()> {
    match encoding {
        PgmEncoding::Binary => {
            write!(out, "P5\n{} {}\n255\n", image.width(), image.height())?;
            out.write_all(image.pixels())
        }
        PgmEncoding::Ascii => {
            write!(out, "P2\n{} {}\n255\n", image.width(), image.height())?;
            // Netpbm asks for lines of at most 70 characters.
            let mut line = String::with_capacity(72);
            for row in image.rows() {
                for &p in row {
                    let token = p.to_string();
                    if !line.is_empty() && line.len() + 1 + token.len() > 70 {
                        writeln!(out, "{line}")?;
                        line.clear();
                    }
                    if !line.is_empty() {
                        line.push(' ');
                    }
                    line.push_str(&token);
                }
                writeln!(out, "{line}")?;
                line.clear();
            }
            Ok(())
        }
    }
}

pub fn encode_pgm(image: &GrayImage, encoding: PgmEncoding) -> Vec<u8> {
    let mut buf = Vec::with_capacity(image.pixels().len() * 4 + 20);
    write_pgm(image, &mut buf, encoding).expect("writing to a Vec cannot fail");
    buf
}

pub fn decode_pgm(data: &[u8]) -> Result<GrayImage, PgmError> {
    let encoding = match data.get(..2) {
        Some(b"P2") => PgmEncoding::Ascii,
        Some(b"P5") => PgmEncoding::Binary,
        _ => return Err(PgmError::BadMagic),
    };
    let mut cursor = Cursor { data, pos: 2 };

    let width = cursor.header_number("width")?;
    let height = cursor.header_number("height")?;
    let maxval = cursor.header_number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(PgmError::UnsupportedMaxval(maxval));
    }
    let (width, height) = (width as usize, height as usize);
    if width == 0 || height == 0 {
        return Err(PgmError::ZeroDimension { width, height });
    }
    let expected = width.checked_mul(height).ok_or_else(|| {
        PgmError::MalformedHeader(format!("dimensions {width}x{height} overflow"))
    })?;

    let pixels = match encoding {
        PgmEncoding::Binary => {
            match cursor.peek() {
                Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
                Some(_) => {
                    return Err(PgmError::MalformedHeader(
                        "expected whitespace after maxval".into(),
                    ))
                }
                None => return Err(PgmError::Truncated { expected, found: 0 }),
            }
            let raster = &data[cursor.pos..];
            if raster.len() < expected {
                return Err(PgmError::Truncated {
                    expected,
                    found: raster.len(),
                });
            }
            let raster = &raster[..expected];
            if let Some(index) = raster.iter().position(|&p| u32::from(p) > maxval) {
                return Err(PgmError::InvalidSample {
                    index,
                    token: raster[index].to_string(),
                    maxval,
                });
            }
            raster.to_vec()
        }
        PgmEncoding::Ascii => {
            let mut pixels = Vec::with_capacity(expected);
            let text = &data[cursor.pos..];
            let mut tokens = text
                .split(|b| b.is_ascii_whitespace())
                .filter(|t| !t.is_empty());
            while pixels.len() < expected {
                let Some(token) = tokens.next() else {
                    return Err(PgmError::Truncated {
                        expected,
                        found: pixels.len(),
                    });
                };
                let value = std::str::from_utf8(token)
                    .ok()
                    .and_then(|s| s.parse::<u32>().ok())
                    .filter(|&v| v <= maxval);
                match value {
                    Some(v) => pixels.push(v as u8),
                    None => {
                        return Err(PgmError::InvalidSample {
                            index: pixels.len(),
                            token: String::from_utf8_lossy(token).into_owned(),
                            maxval,
                        })
                    }
                }
            }
            pixels
        }
    };

    Ok(GrayImage::new(width, height, pixels)?)
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.data.get(self.pos).copied()
    }

    fn skip_whitespace_and_comments(&mut self) {
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(c) = self.peek() {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn header_number(&mut self, field: &str) -> Result<u32, PgmError> {
        let before = self.pos;
        self.skip_whitespace_and_comments();
        if self.pos == before {
            return Err(PgmError::MalformedHeader(format!(
                "expected whitespace before {field}"
            )));
        }
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.peek() {
                None => PgmError::MalformedHeader(format!("header ends before {field}")),
                Some(b) => PgmError::MalformedHeader(format!(
                    "expected {field}, found byte {:?}",
                    b as char
                )),
            });
        }
        let digits = std::str::from_utf8(&self.data[start..self.pos]).expect("ascii digits");
        digits
            .parse()
            .map_err(|_| PgmError::MalformedHeader(format!("{field} {digits} is out of range")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus() -> GrayImage {
        GrayImage::new(2, 2, vec![1, 2, 3, 4]).unwrap()
    }

    #[test]
    fn p2_transcription() {
        let img = decode_pgm(b"P2 2 2 255 1 2 3 4").unwrap();
        assert_eq!(img, corpus());
    }

    #[test]
    fn p5_matches_p2() {
        let img = decode_pgm(b"P5\n2 2\n255\n\x01\x02\x03\x04").unwrap();
        assert_eq!(img, corpus());
    }

    #[test]
    fn header_comments_are_skipped() {
        let img =
            decode_pgm(b"P5 # made by hand\n2 # w\n2\n# max next\n255\n\x01\x02\x03\x04").unwrap();
        assert_eq!(img, corpus());
    }

    #[test]
    fn p5_payload_may_start_with_whitespace_byte() {
        // 0x0a and 0x20 are valid samples right after the single separator.
        let img = decode_pgm(b"P5 2 1 255\n\x0a\x20").unwrap();
        assert_eq!(img.pixels(), &[10, 32]);
    }

    #[test]
    fn sixteen_bit_maxval_is_rejected() {
        assert!(matches!(
            decode_pgm(b"P2 1 1 65535 7"),
            Err(PgmError::UnsupportedMaxval(65535))
        ));
        assert!(matches!(
            decode_pgm(b"P2 1 1 0 0"),
            Err(PgmError::UnsupportedMaxval(0))
        ));
    }

    #[test]
    fn distinct_errors() {
        assert!(matches!(
            decode_pgm(b"P6 1 1 255 0"),
            Err(PgmError::BadMagic)
        ));
        assert!(matches!(decode_pgm(b""), Err(PgmError::BadMagic)));
        assert!(matches!(
            decode_pgm(b"P2 2 x 255"),
            Err(PgmError::MalformedHeader(_))
        ));
        assert!(matches!(
            decode_pgm(b"P2 2"),
            Err(PgmError::MalformedHeader(_))
        ));
        assert!(matches!(
            decode_pgm(b"P2 0 2 255"),
            Err(PgmError::ZeroDimension {
                width: 0,
                height: 2
            })
        ));
        assert!(matches!(
            decode_pgm(b"P5 2 2 255\n\x01\x02"),
            Err(PgmError::Truncated {
                expected: 4,
                found: 2
            })
        ));
        assert!(matches!(
            decode_pgm(b"P2 2 2 255 1 2 3"),
            Err(PgmError::Truncated {
                expected: 4,
                found: 3
            })
        ));
        assert!(matches!(
            decode_pgm(b"P2 2 1 15 3 16"),
            Err(PgmError::InvalidSample { index: 1, .. })
        ));
        assert!(matches!(
            decode_pgm(b"P2 2 1 255 3 -1"),
            Err(PgmError::InvalidSample { index: 1, .. })
        ));
    }

    #[test]
    fn minimal_image_encodings() {
        let img = GrayImage::new(1, 1, vec![0]).unwrap();
        assert_eq!(encode_pgm(&img, PgmEncoding::Binary), b"P5\n1 1\n255\n\x00");
        assert_eq!(encode_pgm(&img, PgmEncoding::Ascii), b"P2\n1 1\n255\n0\n");
    }

    #[test]
    fn ascii_lines_stay_short() {
        let img = GrayImage::filled(40, 2, 255).unwrap();
        let text = String::from_utf8(encode_pgm(&img, PgmEncoding::Ascii)).unwrap();
        assert!(text.lines().all(|l| l.len() <= 70));
        assert_eq!(decode_pgm(text.as_bytes()).unwrap(), img);
    }
}
