//! 8-bit portable graymap (PGM) reading and writing, P2 and P5.

use crate::error::{Error, Result};
use crate::grid::{Grid, PixelMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PgmFormat {
    /// ASCII raster.
    P2,
    /// Binary raster.
    P5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PgmHeader {
    pub format: PgmFormat,
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|&b| b != b'\n' && b != b'\r')
                {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedHeader(format!("expected {what}")))
    }
}

fn parse_header(cursor: &mut Cursor<'_>) -> Result<PgmHeader> {
    let format = match cursor.bytes.get(..2) {
        Some(b"P2") => PgmFormat::P2,
        Some(b"P5") => PgmFormat::P5,
        _ => return Err(Error::MalformedHeader("expected magic P2 or P5".into())),
    };
    cursor.pos = 2;
    let width = cursor.number("width")? as usize;
    let height = cursor.number("height")? as usize;
    let maxval = cursor.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!(
            "dimensions must be positive, got {width}x{height}"
        )));
    }
    if maxval != 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    Ok(PgmHeader {
        format,
        width,
        height,
        maxval,
    })
}

pub fn read_pgm(bytes: &[u8]) -> Result<PixelMatrix> {
    let mut cursor = Cursor { bytes, pos: 0 };
    let header = parse_header(&mut cursor)?;
    let expected = header.width * header.height;
    let samples = match header.format {
        PgmFormat::P5 => {
            // Exactly one whitespace byte separates maxval from the raster.
            if !bytes.get(cursor.pos).is_some_and(u8::is_ascii_whitespace) {
                return Err(Error::MalformedHeader(
                    "missing whitespace after maxval".into(),
                ));
            }
            let raster = &bytes[cursor.pos + 1..];
            if raster.len() < expected {
                return Err(Error::TruncatedRaster {
                    expected,
                    actual: raster.len(),
                });
            }
            raster[..expected].to_vec()
        }
        PgmFormat::P2 => {
            let mut samples = Vec::with_capacity(expected);
            for _ in 0..expected {
                cursor.skip_whitespace_and_comments();
                if cursor.pos >= bytes.len() {
                    return Err(Error::TruncatedRaster {
                        expected,
                        actual: samples.len(),
                    });
                }
                let v = cursor.number("sample")?;
                let v = u8::try_from(v).map_err(|_| {
                    Error::MalformedHeader(format!("sample {v} exceeds maxval 255"))
                })?;
                samples.push(v);
            }
            samples
        }
    };
    Grid::new(header.width, header.height, samples)
}

pub fn write_pgm(img: &PixelMatrix, format: PgmFormat) -> Vec<u8> {
    let magic = match format {
        PgmFormat::P2 => "P2",
        PgmFormat::P5 => "P5",
    };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    match format {
        PgmFormat::P5 => out.extend_from_slice(img.data()),
        PgmFormat::P2 => {
            for row in img.rows() {
                let line: Vec<String> = row.iter().map(u8::to_string).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reads_binary_block() {
        let mut bytes = b"P5 2 2 255\n".to_vec();
        bytes.extend_from_slice(&[61, 69, 59, 67]);
        let img = read_pgm(&bytes).unwrap();
        assert_eq!(img, PixelMatrix::from_rows(&[[61u8, 69], [59, 67]]));
    }

    #[test]
    fn ascii_with_comments_matches_binary() {
        let ascii = b"P2\n# created by hand\n2 # width\n2\n255\n61 69\n# row two\n59 67\n";
        let mut binary = b"P5\n2 2\n255\n".to_vec();
        binary.extend_from_slice(&[61, 69, 59, 67]);
        assert_eq!(read_pgm(ascii).unwrap(), read_pgm(&binary).unwrap());
    }

    #[test]
    fn errors() {
        assert_eq!(
            read_pgm(b"P5 2 2 65535\n\0\0"),
            Err(Error::UnsupportedMaxval(65535))
        );
        assert!(matches!(
            read_pgm(b"P6 2 2 255\n"),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(read_pgm(b"P5 2"), Err(Error::MalformedHeader(_))));
        assert!(matches!(
            read_pgm(b"P5 0 2 255\n"),
            Err(Error::MalformedHeader(_))
        ));
        assert_eq!(
            read_pgm(b"P5 2 2 255\n\x01\x02\x03"),
            Err(Error::TruncatedRaster {
                expected: 4,
                actual: 3
            })
        );
        assert_eq!(
            read_pgm(b"P2 2 2 255\n1 2 3"),
            Err(Error::TruncatedRaster {
                expected: 4,
                actual: 3
            })
        );
        assert!(matches!(
            read_pgm(b"P2 1 1 255\n256"),
            Err(Error::MalformedHeader(_))
        ));
    }

    #[test]
    fn p5_raster_length_and_p2_layout() {
        let img = PixelMatrix::from_rows(&[
            [61u8, 69, 79, 67],
            [59, 67, 81, 72],
            [54, 60, 74, 60],
            [55, 63, 61, 34],
        ]);
        let p5 = write_pgm(&img, PgmFormat::P5);
        assert_eq!(p5.len(), b"P5\n4 4\n255\n".len() + 16);
        let p2 = String::from_utf8(write_pgm(&img, PgmFormat::P2)).unwrap();
        let tokens: Vec<&str> = p2.split_whitespace().collect();
        assert_eq!(&tokens[..4], &["P2", "4", "4", "255"]);
        let values: Vec<u8> = tokens[4..].iter().map(|t| t.parse().unwrap()).collect();
        assert_eq!(values, img.data());
    }

    proptest! {
        #[test]
        fn round_trip(w in 1usize..10, h in 1usize..10, seed in proptest::collection::vec(any::<u8>(), 100)) {
            let img = PixelMatrix::new(w, h, seed[..w * h].to_vec()).unwrap();
            for format in [PgmFormat::P2, PgmFormat::P5] {
                prop_assert_eq!(&read_pgm(&write_pgm(&img, format)).unwrap(), &img);
            }
        }
    }
}
