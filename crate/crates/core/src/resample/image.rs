use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major grayscale image with real-valued pixels on the 0..=255 scale.
#[derive(Clone, Debug, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument("image dimensions must be positive".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let pixels =
            (0..height).flat_map(|y| (0..width).map(move |x| (x, y))).map(|(x, y)| f(x, y)).collect();
        Self::new(width, height, pixels)
    }

    pub fn from_u8(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(width, height, bytes.iter().map(|&b| b as f64).collect())
    }

    /// 8-bit view: `round(clamp(p, 0, 255))`.
    pub fn to_u8(&self) -> Vec<u8> {
        self.pixels.iter().map(|&p| quantize(p)).collect()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub fn transpose(&self) -> GrayImage {
        let mut out = vec![0.0; self.pixels.len()];
        for y in 0..self.height {
            for x in 0..self.width {
                out[x * self.height + y] = self.pixels[y * self.width + x];
            }
        }
        GrayImage { width: self.height, height: self.width, pixels: out }
    }

    /// Binary PGM (`P5`), maxval up to 255; header comments are allowed.
    pub fn read_pgm<R: Read>(input: R) -> Result<Self> {
        let mut r = BufReader::new(input);
        let magic = header_token(&mut r)?;
        if magic != "P5" {
            return Err(Error::Parse(format!("expected P5 magic, found '{magic}'")));
        }
        let width: usize = parse_field(&header_token(&mut r)?, "width")?;
        let height: usize = parse_field(&header_token(&mut r)?, "height")?;
        let maxval: u32 = parse_field(&header_token(&mut r)?, "maxval")?;
        if maxval == 0 || maxval > 255 {
            return Err(Error::Parse(format!("unsupported maxval {maxval} (8-bit only)")));
        }
        let mut bytes = vec![0u8; width * height];
        r.read_exact(&mut bytes).map_err(|e| Error::Parse(format!("truncated PGM raster: {e}")))?;
        Self::from_u8(width, height, &bytes)
    }

    /// Writes `P5\n<w> <h>\n255\n` followed by the 8-bit raster.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.to_u8())?;
        Ok(())
    }

    pub fn load_pgm(path: &Path) -> Result<Self> {
        Self::read_pgm(std::fs::File::open(path)?)
    }

    pub fn save_pgm(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_pgm(&mut f)?;
        f.flush()?;
        Ok(())
    }
}

#[inline]
fn quantize(p: f64) -> u8 {
    p.clamp(0.0, 255.0).round() as u8
}

fn parse_field<T: FromStr>(tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse(format!("bad PGM {what} '{tok}'")))
}

/// Next whitespace-delimited header token, skipping `#` comments. Consumes
/// exactly one trailing whitespace byte, as the raster starts right after it.
fn header_token<R: BufRead>(r: &mut R) -> Result<String> {
    let mut tok = String::new();
    let mut byte = [0u8; 1];
    loop {
        if r.read(&mut byte)? == 0 {
            return Err(Error::Parse("unexpected end of PGM header".into()));
        }
        let c = byte[0];
        if c == b'#' && tok.is_empty() {
            let mut skip = Vec::new();
            r.read_until(b'\n', &mut skip)?;
        } else if c.is_ascii_whitespace() {
            if !tok.is_empty() {
                return Ok(tok);
            }
        } else {
            tok.push(c as char);
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DownsampleMode {
    /// Keep pixel `(f i, f j)`.
    #[default]
    Decimate,
    /// Mean of each `f x f` block.
    Average,
}

impl std::fmt::Display for DownsampleMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DownsampleMode::Decimate => "decimate",
            DownsampleMode::Average => "average",
        })
    }
}

impl FromStr for DownsampleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decimate" => Ok(DownsampleMode::Decimate),
            "average" => Ok(DownsampleMode::Average),
            other => Err(Error::InvalidArgument(format!(
                "unknown downsample mode '{other}' (expected decimate or average)"
            ))),
        }
    }
}

pub fn downsample(img: &GrayImage, factor: usize, mode: DownsampleMode) -> Result<GrayImage> {
    if factor == 0 {
        return Err(Error::InvalidArgument("downsample factor must be positive".into()));
    }
    if !img.width.is_multiple_of(factor) || !img.height.is_multiple_of(factor) {
        return Err(Error::DimensionMismatch(format!(
            "factor {factor} does not divide {}x{}",
            img.width, img.height
        )));
    }
    let (w, h) = (img.width / factor, img.height / factor);
    GrayImage::from_fn(w, h, |x, y| match mode {
        DownsampleMode::Decimate => img.get(factor * x, factor * y),
        DownsampleMode::Average => {
            let mut acc = 0.0;
            for dy in 0..factor {
                for dx in 0..factor {
                    acc += img.get(factor * x + dx, factor * y + dy);
                }
            }
            acc / (factor * factor) as f64
        }
    })
}

/// `10 log10(255^2 / MSE)` on the 8-bit views; `+inf` when they agree exactly.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    if a.width != b.width || a.height != b.height {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.width, a.height, b.width, b.height
        )));
    }
    let sse: f64 = a
        .pixels
        .iter()
        .zip(&b.pixels)
        .map(|(&p, &q)| {
            let d = quantize(p) as f64 - quantize(q) as f64;
            d * d
        })
        .sum();
    if sse == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse / a.pixels.len() as f64;
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}
