//! Netpbm graymaps, ASCII (`P2`) and binary (`P5`).
//!
//! The bit depth of an [`Image`] maps to `maxval = 2^depth - 1`. Other
//! maxvals are rejected, as are 16-bit files.

use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use slim_core::sobel::Image;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Ascii,
    Binary,
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&c) = self.data.get(self.pos) {
            if c == b'#' {
                while self.data.get(self.pos).is_some_and(|c| *c != b'\n') {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&str> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(|c| !c.is_ascii_whitespace()) {
            self.pos += 1;
        }
        ensure!(self.pos > start, "unexpected end of PGM data");
        Ok(std::str::from_utf8(&self.data[start..self.pos])?)
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let t = self.token()?;
        t.parse().with_context(|| format!("bad PGM {what} `{t}`"))
    }
}

pub fn decode(data: &[u8]) -> Result<Image> {
    let mut cur = Cursor { data, pos: 0 };
    let encoding = match cur.token()? {
        "P2" => Encoding::Ascii,
        "P5" => Encoding::Binary,
        other => bail!("unsupported image magic `{other}` (expected P2 or P5)"),
    };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    ensure!(maxval > 0 && maxval < 256, "maxval {maxval} not supported (1..=255)");
    ensure!((maxval + 1).is_power_of_two(), "maxval {maxval} is not 2^d - 1");
    let depth = (maxval + 1).trailing_zeros() as u8;
    let count = width * height;
    let pixels = match encoding {
        Encoding::Ascii => (0..count)
            .map(|_| {
                let v = cur.number("pixel")?;
                ensure!(v <= maxval, "pixel {v} exceeds maxval {maxval}");
                Ok(v as u8)
            })
            .collect::<Result<Vec<u8>>>()?,
        Encoding::Binary => {
            // Exactly one whitespace byte separates the header from the raster.
            let start = cur.pos + 1;
            ensure!(data.len() >= start + count, "PGM raster truncated");
            data[start..start + count].to_vec()
        }
    };
    Image::new(width, height, depth, pixels).map_err(|e| anyhow::anyhow!("{e}"))
}

pub fn encode(image: &Image, encoding: Encoding) -> Vec<u8> {
    let maxval = image.max_value();
    match encoding {
        Encoding::Binary => {
            let mut out = format!("P5\n{} {}\n{maxval}\n", image.width, image.height).into_bytes();
            out.extend_from_slice(&image.pixels);
            out
        }
        Encoding::Ascii => {
            let mut out = format!("P2\n{} {}\n{maxval}\n", image.width, image.height);
            for row in image.pixels.chunks(image.width.max(1)) {
                let line: Vec<String> = row.iter().map(u8::to_string).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}

pub fn read(path: &Path) -> Result<Image> {
    let data = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    decode(&data).with_context(|| format!("decoding {}", path.display()))
}

/// Writes ASCII when the path ends in `.ascii.pgm`, binary otherwise.
pub fn write(path: &Path, image: &Image) -> Result<()> {
    let ascii = path.to_string_lossy().ends_with(".ascii.pgm");
    let enc = if ascii { Encoding::Ascii } else { Encoding::Binary };
    std::fs::write(path, encode(image, enc)).with_context(|| format!("writing {}", path.display()))
}
