//! Multi-level compression and the `GHWC` container.
//!
//! Level 1 block-codes the (even-padded) image into an `LH_C`/`HL_B` pair.
//! Each further level block-codes both matrices of every pair from the
//! previous level, so level `L` stores `2^(L-1)` pairs and
//! `padded_pixels / 2^L` samples in total. Only the innermost pairs are
//! stored; outer levels are rebuilt on decode.
//!
//! Before a level is coded, all of its input planes are shifted by a shared
//! integer offset so that the smallest sample is non-negative. The offset
//! is recorded per level.
//!
//! # Container layout
//!
//! All integers little-endian.
//!
//! ```text
//! "GHWC"            4 bytes
//! version           u8   (= 1)
//! levels            u8   (1..=3)
//! lambda num, den   u8, u8
//! mu                u16  (ten-thousandths)
//! orig width/height u32, u32
//! padded w/h        u32, u32
//! per level, outermost first:
//!   offset          i32
//!   samples         innermost level only: every pair, HL_B then LH_C,
//!                   each row-major i16
//! ```

use crate::block::{self, CodecParams, Lambda, Mu, SubbandPair};
use crate::error::{Error, Result};
use crate::grid::{Grid, PixelMatrix};

pub const MAGIC: &[u8; 4] = b"GHWC";
pub const VERSION: u8 = 1;
pub const MAX_LEVELS: u8 = 3;
const HEADER_LEN: usize = 4 + 1 + 1 + 1 + 1 + 2 + 4 * 4;

/// Replicates the last row and/or column so both dimensions are even.
pub fn pad_to_even(img: &PixelMatrix) -> PixelMatrix {
    let w = img.width() + img.width() % 2;
    let h = img.height() + img.height() % 2;
    if (w, h) == img.dims() {
        return img.clone();
    }
    Grid::from_fn(w, h, |r, c| {
        *img.get(r.min(img.height() - 1), c.min(img.width() - 1))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompressedImage {
    pub orig_width: u32,
    pub orig_height: u32,
    pub padded_width: u32,
    pub padded_height: u32,
    pub levels: u8,
    pub lambda: Lambda,
    pub mu: Mu,
    /// Offset subtracted from every input plane of each level, outermost first.
    pub offsets: Vec<i32>,
    /// Innermost pairs, in the order their parent planes were produced.
    pub pairs: Vec<SubbandPair>,
}

impl CompressedImage {
    pub fn params(&self) -> CodecParams {
        CodecParams {
            lambda: self.lambda,
            mu: self.mu,
        }
    }

    pub fn stored_samples(&self) -> usize {
        self.pairs.iter().map(SubbandPair::sample_count).sum()
    }

    /// Element-count compression ratio against the padded image.
    pub fn compression_ratio(&self) -> f64 {
        let pixels = self.padded_width as usize * self.padded_height as usize;
        pixels as f64 / self.stored_samples() as f64
    }

    /// Dimensions of every stored matrix.
    pub fn leaf_dims(&self) -> (usize, usize) {
        let div = 1usize << self.levels;
        (
            self.padded_width as usize / div,
            self.padded_height as usize / div,
        )
    }

    fn validate_header(&self) -> Result<()> {
        let corrupt = |msg: String| Err(Error::CorruptContainer(msg));
        if !(1..=MAX_LEVELS).contains(&self.levels) {
            return Err(Error::LevelsOutOfRange(self.levels.into()));
        }
        let (ow, oh) = (self.orig_width, self.orig_height);
        let (pw, ph) = (self.padded_width, self.padded_height);
        if ow == 0 || oh == 0 {
            return corrupt(format!("empty original dimensions {ow}x{oh}"));
        }
        if pw != ow + ow % 2 || ph != oh + oh % 2 {
            return corrupt(format!(
                "padded size {pw}x{ph} does not match original {ow}x{oh}"
            ));
        }
        let div = 1u32 << self.levels;
        if pw % div != 0 || ph % div != 0 {
            return corrupt(format!("padded size {pw}x{ph} is not divisible by {div}"));
        }
        if self.offsets.len() != usize::from(self.levels) {
            return corrupt(format!(
                "{} offsets for {} levels",
                self.offsets.len(),
                self.levels
            ));
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        self.validate_header()?;
        let corrupt = |msg: String| Err(Error::CorruptContainer(msg));
        let expected_pairs = 1usize << (self.levels - 1);
        if self.pairs.len() != expected_pairs {
            return corrupt(format!(
                "{} pairs, expected {expected_pairs}",
                self.pairs.len()
            ));
        }
        let dims = self.leaf_dims();
        if self
            .pairs
            .iter()
            .any(|p| p.lh_c.dims() != dims || p.hl_b.dims() != dims)
        {
            return corrupt(format!("stored matrices must all be {}x{}", dims.0, dims.1));
        }
        Ok(())
    }
}

fn shift_planes(planes: &mut [Grid<i32>]) -> i32 {
    let min = planes
        .iter()
        .flat_map(|p| p.data().iter().copied())
        .min()
        .unwrap_or(0);
    let offset = min.min(0);
    if offset != 0 {
        for plane in planes.iter_mut() {
            *plane = plane.map(|&v| v - offset);
        }
    }
    offset
}

pub fn compress_multilevel(
    img: &PixelMatrix,
    levels: u8,
    params: CodecParams,
) -> Result<CompressedImage> {
    if !(1..=MAX_LEVELS).contains(&levels) {
        return Err(Error::LevelsOutOfRange(levels.into()));
    }
    let padded = pad_to_even(img);
    let dim = |v: usize| {
        u32::try_from(v).map_err(|_| Error::InvalidParameter(format!("dimension {v} too large")))
    };

    let mut planes = vec![padded.map(|&p| i32::from(p))];
    let mut offsets = Vec::with_capacity(levels.into());
    let mut pairs = Vec::new();
    for level in 1..=levels {
        offsets.push(shift_planes(&mut planes));
        pairs = planes
            .iter()
            .map(|plane| block::compress_samples(plane, params))
            .collect::<Result<Vec<_>>>()?;
        if level < levels {
            planes = pairs
                .iter()
                .flat_map(|p| [p.hl_b.map(|&v| i32::from(v)), p.lh_c.map(|&v| i32::from(v))])
                .collect();
        }
    }

    Ok(CompressedImage {
        orig_width: dim(img.width())?,
        orig_height: dim(img.height())?,
        padded_width: dim(padded.width())?,
        padded_height: dim(padded.height())?,
        levels,
        lambda: params.lambda,
        mu: params.mu,
        offsets,
        pairs,
    })
}

/// Decodes every level, innermost first, using `params` rather than the
/// coefficients recorded in the container.
pub fn decompress_multilevel(c: &CompressedImage, params: CodecParams) -> Result<PixelMatrix> {
    c.validate()?;
    let mut pairs = c.pairs.clone();
    for level in (1..=c.levels).rev() {
        let offset = c.offsets[usize::from(level - 1)];
        let planes = pairs
            .iter()
            .map(|pair| Ok(block::decompress_samples(pair, params)?.map(|&v| v + offset)))
            .collect::<Result<Vec<_>>>()?;
        if level == 1 {
            let plane = planes.into_iter().next().expect("one plane at level 1");
            let pixels = plane.map(|&v| v.clamp(0, 255) as u8);
            return Ok(pixels.crop(0, 0, c.orig_width as usize, c.orig_height as usize));
        }
        pairs = planes
            .chunks(2)
            .map(|two| SubbandPair {
                hl_b: two[0].map(|&v| v.clamp(i16::MIN.into(), i16::MAX.into()) as i16),
                lh_c: two[1].map(|&v| v.clamp(i16::MIN.into(), i16::MAX.into()) as i16),
            })
            .collect();
    }
    unreachable!("levels validated to be at least 1")
}

pub fn serialize(c: &CompressedImage) -> Result<Vec<u8>> {
    c.validate()?;
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * c.offsets.len() + 2 * c.stored_samples());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(c.levels);
    out.push(c.lambda.num());
    out.push(c.lambda.den());
    out.extend_from_slice(&c.mu.fixed().to_le_bytes());
    for v in [c.orig_width, c.orig_height, c.padded_width, c.padded_height] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for (i, offset) in c.offsets.iter().enumerate() {
        out.extend_from_slice(&offset.to_le_bytes());
        if i + 1 == c.offsets.len() {
            for pair in &c.pairs {
                for &s in pair.hl_b.data().iter().chain(pair.lh_c.data()) {
                    out.extend_from_slice(&s.to_le_bytes());
                }
            }
        }
    }
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    expected: usize,
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let slice = self.bytes.get(self.pos..end).ok_or(Error::Truncated {
            expected: self.expected.max(end),
            actual: self.bytes.len(),
        })?;
        self.pos = end;
        Ok(slice.try_into().expect("slice length is N"))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take::<1>()?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        self.take().map(u16::from_le_bytes)
    }

    fn u32(&mut self) -> Result<u32> {
        self.take().map(u32::from_le_bytes)
    }

    fn i32(&mut self) -> Result<i32> {
        self.take().map(i32::from_le_bytes)
    }

    fn i16_grid(&mut self, (w, h): (usize, usize)) -> Result<Grid<i16>> {
        let samples = (0..w * h)
            .map(|_| self.take().map(i16::from_le_bytes))
            .collect::<Result<Vec<_>>>()?;
        Grid::new(w, h, samples)
    }
}

pub fn deserialize(bytes: &[u8]) -> Result<CompressedImage> {
    let mut r = Reader {
        bytes,
        pos: 0,
        expected: HEADER_LEN,
    };
    if bytes.len() >= 4 && &bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    if r.take::<4>()? != *MAGIC {
        return Err(Error::BadMagic);
    }
    let version = r.u8()?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let levels = r.u8()?;
    let (num, den) = (r.u8()?, r.u8()?);
    let mu_fixed = r.u16()?;
    let orig_width = r.u32()?;
    let orig_height = r.u32()?;
    let padded_width = r.u32()?;
    let padded_height = r.u32()?;

    let lambda = Lambda::new(num, den).map_err(|e| Error::CorruptContainer(e.to_string()))?;
    let mu = Mu::from_fixed(mu_fixed).map_err(|e| Error::CorruptContainer(e.to_string()))?;
    let mut c = CompressedImage {
        orig_width,
        orig_height,
        padded_width,
        padded_height,
        levels,
        lambda,
        mu,
        offsets: vec![0; levels.into()],
        pairs: Vec::new(),
    };
    c.validate_header()?;
    let pair_count = 1usize << (levels - 1);
    let (lw, lh) = c.leaf_dims();

    let total = HEADER_LEN + 4 * usize::from(levels) + 2 * 2 * lw * lh * pair_count;
    r.expected = total;
    if bytes.len() > total {
        return Err(Error::CorruptContainer(format!(
            "{} trailing bytes",
            bytes.len() - total
        )));
    }
    let mut pairs = Vec::with_capacity(pair_count);
    for level in 0..usize::from(levels) {
        c.offsets[level] = r.i32()?;
        if level + 1 == usize::from(levels) {
            for _ in 0..pair_count {
                let hl_b = r.i16_grid((lw, lh))?;
                let lh_c = r.i16_grid((lw, lh))?;
                pairs.push(SubbandPair { lh_c, hl_b });
            }
        }
    }
    c.pairs = pairs;
    Ok(c)
}
