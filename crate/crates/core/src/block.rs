//! Diagonal/parity 2×2 block coder.
//!
//! Every 2×2 block `[x11 x12; x21 x22]` is reduced to two integers:
//!
//! - `lh ≈ s + λ·a` and `hl ≈ s − λ·a`, where `s` is the rounded block mean
//!   and `a` is the signed maximum diagonal distance;
//! - the parity of `hl` carries mask B (which end of the minor diagonal is
//!   larger) and the parity of `lh` carries mask C (which column is heavier).
//!
//! Decoding rebuilds the major diagonal from `(lh + hl)/2 ± μ·|lh − hl|`,
//! places `lh`/`hl` on the other diagonal according to the parities, and
//! optionally swaps the columns.
//!
//! All arithmetic is integer: λ is an exact fraction and μ is carried in
//! ten-thousandths, so encode and decode are bit-exact on every platform.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{Grid, PixelMatrix};

pub type Block = [[i32; 2]; 2];

/// Encoder balancing coefficient λ as an exact fraction in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lambda {
    num: u8,
    den: u8,
}

impl Lambda {
    pub fn new(num: u8, den: u8) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(Error::InvalidParameter(format!(
                "lambda must be a fraction in (0, 1], got {num}/{den}"
            )));
        }
        Ok(Self { num, den })
    }

    pub fn num(self) -> u8 {
        self.num
    }

    pub fn den(self) -> u8 {
        self.den
    }

    pub fn value(self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }
}

impl Default for Lambda {
    fn default() -> Self {
        Self { num: 1, den: 8 }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Lambda {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse lambda {s:?}, expected P/Q"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        Lambda::new(
            num.parse().map_err(|_| bad())?,
            den.parse().map_err(|_| bad())?,
        )
    }
}

/// Decoder balancing coefficient μ in `(0, 1]`, stored in ten-thousandths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mu(u16);

impl Mu {
    pub const SCALE: u16 = 10_000;
    pub const ONE: Mu = Mu(Self::SCALE);

    pub fn from_fixed(fixed: u16) -> Result<Self> {
        if fixed == 0 || fixed > Self::SCALE {
            return Err(Error::InvalidParameter(format!(
                "mu must lie in (0, 1], got {fixed}/10000"
            )));
        }
        Ok(Self(fixed))
    }

    /// Rounds `mu` to the nearest ten-thousandth.
    pub fn from_f64(mu: f64) -> Result<Self> {
        if !mu.is_finite() || mu <= 0.0 || mu > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "mu must lie in (0, 1], got {mu}"
            )));
        }
        Self::from_fixed((mu * f64::from(Self::SCALE)).round() as u16)
    }

    pub fn fixed(self) -> u16 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / f64::from(Self::SCALE)
    }
}

impl Default for Mu {
    fn default() -> Self {
        Self(9_700)
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl FromStr for Mu {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mu: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse mu {s:?}")))?;
        Mu::from_f64(mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CodecParams {
    pub lambda: Lambda,
    pub mu: Mu,
}

impl CodecParams {
    pub fn with_mu(self, mu: Mu) -> Self {
        Self { mu, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(value: i32) -> Self {
        if value.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// 0 for even, 1 for odd.
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// Per-block statistics driving the encoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockStats {
    /// Block mean, rounded half away from zero.
    pub s: i32,
    /// Primary diagonal difference `x11 − x22`.
    pub n1: i32,
    /// Secondary diagonal difference `x12 − x21`.
    pub n2: i32,
    /// `|n1| − |n2|`.
    pub n3: i32,
    /// `±(|n1| + |n2| + |n3|)`, signed like the larger-magnitude difference.
    pub a: i32,
}

impl BlockStats {
    /// The difference of larger magnitude; `n1` on ties.
    pub fn major(&self) -> i32 {
        if self.n1.abs() >= self.n2.abs() {
            self.n1
        } else {
            self.n2
        }
    }

    /// The difference of smaller magnitude; `n2` on ties.
    pub fn minor(&self) -> i32 {
        if self.n1.abs() >= self.n2.abs() {
            self.n2
        } else {
            self.n1
        }
    }
}

pub(crate) fn round_half_away(num: i64, den: i64) -> i64 {
    debug_assert!(den > 0 && den % 2 == 0);
    if num >= 0 {
        (num + den / 2) / den
    } else {
        -((-num + den / 2) / den)
    }
}

fn div_floor(num: i64, den: i64) -> i64 {
    num.div_euclid(den)
}

fn div_ceil(num: i64, den: i64) -> i64 {
    -(-num).div_euclid(den)
}

pub fn block_stats(block: &Block) -> BlockStats {
    let [[x11, x12], [x21, x22]] = *block;
    let sum = i64::from(x11) + i64::from(x12) + i64::from(x21) + i64::from(x22);
    let s = round_half_away(sum, 4) as i32;
    let n1 = x11 - x22;
    let n2 = x12 - x21;
    let n3 = n1.abs() - n2.abs();
    let magnitude = n1.abs() + n2.abs() + n3.abs();
    let mut stats = BlockStats {
        s,
        n1,
        n2,
        n3,
        a: 0,
    };
    stats.a = if stats.major() >= 0 {
        magnitude
    } else {
        -magnitude
    };
    stats
}

/// Intermediate and final values of one block encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockEncoding {
    pub stats: BlockStats,
    /// `lh` before parity filtering.
    pub raw_lh: i32,
    /// `hl` before parity filtering.
    pub raw_hl: i32,
    pub mask_b: Parity,
    pub mask_c: Parity,
    pub lh: i32,
    pub hl: i32,
}

fn enforce_parity(value: i32, parity: Parity) -> i32 {
    if Parity::of(value) == parity {
        value
    } else if value <= i32::from(i16::MIN) {
        value + 1
    } else {
        value - 1
    }
}

pub fn encode_block_detailed(block: &Block, params: CodecParams) -> BlockEncoding {
    let stats = block_stats(block);
    let den = i64::from(params.lambda.den());
    let shift = i64::from(stats.a) * i64::from(params.lambda.num());
    let base = i64::from(stats.s) * den;
    let (raw_lh, raw_hl) = if stats.a >= 0 {
        (div_ceil(base + shift, den), div_floor(base - shift, den))
    } else {
        (div_floor(base + shift, den), div_ceil(base - shift, den))
    };
    let (raw_lh, raw_hl) = (raw_lh as i32, raw_hl as i32);

    let mask_b = if stats.minor() >= 0 {
        Parity::Even
    } else {
        Parity::Odd
    };
    let [[x11, x12], [x21, x22]] = *block;
    let mask_c = if x11 + x21 >= x12 + x22 {
        Parity::Even
    } else {
        Parity::Odd
    };

    BlockEncoding {
        stats,
        raw_lh,
        raw_hl,
        mask_b,
        mask_c,
        lh: enforce_parity(raw_lh, mask_c),
        hl: enforce_parity(raw_hl, mask_b),
    }
}

/// Encodes one block into its `(lh, hl)` pair.
pub fn encode_block(block: &Block, params: CodecParams) -> (i32, i32) {
    let e = encode_block_detailed(block, params);
    (e.lh, e.hl)
}

/// Intermediate and final values of one block decoding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockDecoding {
    /// Unrounded estimate before the column-swap decision.
    pub estimate: [[f64; 2]; 2],
    /// Whether the estimate's columns were swapped.
    pub transposed: bool,
    /// Rounded output block (unclamped).
    pub pixels: Block,
}

// Fixed-point scale for decoder estimates: 2 × the μ scale, so both the
// half-integer mean and μ·|lh − hl| are exact integers.
const DECODE_SCALE: i64 = 2 * Mu::SCALE as i64;

pub fn decode_block_detailed(lh: i32, hl: i32, params: CodecParams) -> BlockDecoding {
    let (lh64, hl64) = (i64::from(lh), i64::from(hl));
    let mean = (lh64 + hl64) * i64::from(Mu::SCALE);
    let spread = 2 * i64::from(params.mu.fixed()) * (lh64 - hl64).abs();
    let (x11, x22) = if lh >= hl {
        (mean + spread, mean - spread)
    } else {
        (mean - spread, mean + spread)
    };
    let hl_odd = Parity::of(hl) == Parity::Odd;
    let lh_on_top = (hl >= lh && hl_odd) || (hl < lh && !hl_odd);
    let (x12, x21) = if lh_on_top {
        (lh64 * DECODE_SCALE, hl64 * DECODE_SCALE)
    } else {
        (hl64 * DECODE_SCALE, lh64 * DECODE_SCALE)
    };

    let left = x11 + x21;
    let right = x22 + x12;
    let lh_odd = Parity::of(lh) == Parity::Odd;
    let transposed = (left >= right && lh_odd) || (left < right && !lh_odd);

    let scaled = if transposed {
        [[x12, x11], [x22, x21]]
    } else {
        [[x11, x12], [x21, x22]]
    };
    let to_f64 = |v: i64| v as f64 / DECODE_SCALE as f64;
    BlockDecoding {
        estimate: [[to_f64(x11), to_f64(x12)], [to_f64(x21), to_f64(x22)]],
        transposed,
        pixels: scaled.map(|row| row.map(|v| round_half_away(v, DECODE_SCALE) as i32)),
    }
}

/// Decodes an `(lh, hl)` pair back into a 2×2 block (unclamped).
pub fn decode_block(lh: i32, hl: i32, params: CodecParams) -> Block {
    decode_block_detailed(lh, hl, params).pixels
}

/// The two stored half-size matrices of one compression level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubbandPair {
    /// LH after mask C.
    pub lh_c: Grid<i16>,
    /// HL after mask B.
    pub hl_b: Grid<i16>,
}

impl SubbandPair {
    pub fn dims(&self) -> (usize, usize) {
        self.lh_c.dims()
    }

    pub fn sample_count(&self) -> usize {
        self.lh_c.len() + self.hl_b.len()
    }
}

pub(crate) fn to_i16(v: i32) -> Result<i16> {
    i16::try_from(v).map_err(|_| Error::SampleOverflow(v.into()))
}

/// Block-codes an integer plane of even dimensions.
pub fn compress_samples(plane: &Grid<i32>, params: CodecParams) -> Result<SubbandPair> {
    plane.require_even()?;
    let (w, h) = (plane.width() / 2, plane.height() / 2);
    let mut lh_c = Vec::with_capacity(w * h);
    let mut hl_b = Vec::with_capacity(w * h);
    for br in 0..h {
        for bc in 0..w {
            let (lh, hl) = encode_block(&plane.block(br, bc), params);
            lh_c.push(to_i16(lh)?);
            hl_b.push(to_i16(hl)?);
        }
    }
    Ok(SubbandPair {
        lh_c: Grid::new(w, h, lh_c)?,
        hl_b: Grid::new(w, h, hl_b)?,
    })
}

/// Inverse of [`compress_samples`]; output is neither clamped nor offset.
pub fn decompress_samples(pair: &SubbandPair, params: CodecParams) -> Result<Grid<i32>> {
    pair.lh_c.require_same_dims(&pair.hl_b)?;
    let (w, h) = pair.dims();
    let mut out = Grid::from_fn(2 * w, 2 * h, |_, _| 0i32);
    for br in 0..h {
        for bc in 0..w {
            let lh = i32::from(*pair.lh_c.get(br, bc));
            let hl = i32::from(*pair.hl_b.get(br, bc));
            let block = decode_block(lh, hl, params);
            for (dr, row) in block.iter().enumerate() {
                for (dc, &v) in row.iter().enumerate() {
                    out.set(2 * br + dr, 2 * bc + dc, v);
                }
            }
        }
    }
    Ok(out)
}

/// One compression level on an 8-bit image.
pub fn compress(img: &PixelMatrix, params: CodecParams) -> Result<SubbandPair> {
    compress_samples(&img.map(|&p| i32::from(p)), params)
}

/// One decompression level to an 8-bit image, clamping to `[0, 255]`.
pub fn decompress(pair: &SubbandPair, params: CodecParams) -> Result<PixelMatrix> {
    Ok(decompress_samples(pair, params)?.map(|&v| v.clamp(0, 255) as u8))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p1() -> CodecParams {
        CodecParams::default().with_mu(Mu::ONE)
    }

    #[test]
    fn stats_of_example_blocks() {
        assert_eq!(
            block_stats(&[[61, 69], [59, 67]]),
            BlockStats {
                s: 64,
                n1: -6,
                n2: 10,
                n3: -4,
                a: 20
            }
        );
        assert_eq!(
            block_stats(&[[79, 67], [81, 72]]),
            BlockStats {
                s: 75,
                n1: 7,
                n2: -14,
                n3: -7,
                a: -28
            }
        );
        assert_eq!(
            block_stats(&[[9, 9], [9, 9]]),
            BlockStats {
                s: 9,
                n1: 0,
                n2: 0,
                n3: 0,
                a: 0
            }
        );
    }

    #[test]
    fn ties_favour_primary_diagonal() {
        let stats = block_stats(&[[10, 2], [8, 4]]);
        assert_eq!((stats.n1, stats.n2), (6, -6));
        assert_eq!(stats.major(), 6);
        assert_eq!(stats.minor(), -6);
        assert_eq!(stats.a, 12);
    }

    #[test]
    fn mean_rounds_half_away_from_zero() {
        assert_eq!(block_stats(&[[0, 0], [1, 1]]).s, 1);
        assert_eq!(block_stats(&[[0, 0], [0, 1]]).s, 0);
        assert_eq!(block_stats(&[[0, 0], [0, -2]]).s, -1);
        assert_eq!(block_stats(&[[-1, 0], [0, 0]]).s, 0);
    }

    #[test]
    fn encode_example_blocks() {
        let e = encode_block_detailed(&[[61, 69], [59, 67]], p1());
        assert_eq!((e.raw_lh, e.raw_hl), (67, 61));
        assert_eq!((e.mask_b, e.mask_c), (Parity::Odd, Parity::Odd));
        assert_eq!((e.lh, e.hl), (67, 61));

        let e = encode_block_detailed(&[[79, 67], [81, 72]], p1());
        assert_eq!((e.raw_lh, e.raw_hl), (71, 79));
        assert_eq!((e.mask_b, e.mask_c), (Parity::Even, Parity::Even));
        assert_eq!((e.lh, e.hl), (70, 78));

        assert_eq!(encode_block(&[[5, 5], [5, 5]], p1()), (4, 4));
    }

    #[test]
    fn parity_escape_at_i16_minimum() {
        assert_eq!(
            enforce_parity(i32::from(i16::MIN), Parity::Odd),
            i32::from(i16::MIN) + 1
        );
        assert_eq!(enforce_parity(-3, Parity::Even), -4);
        assert_eq!(enforce_parity(-3, Parity::Odd), -3);
    }

    #[test]
    fn decode_example_blocks() {
        let d = decode_block_detailed(67, 61, p1());
        assert_eq!(d.estimate, [[70.0, 61.0], [67.0, 58.0]]);
        assert!(d.transposed);
        assert_eq!(d.pixels, [[61, 70], [58, 67]]);

        let d = decode_block_detailed(66, 47, p1());
        assert_eq!(d.estimate, [[75.5, 47.0], [66.0, 37.5]]);
        assert!(!d.transposed);
        assert_eq!(d.pixels, [[76, 47], [66, 38]]);

        assert_eq!(decode_block(4, 4, p1()), [[4, 4], [4, 4]]);
    }

    #[test]
    fn decode_with_default_mu() {
        // μ = 0.97: 56.5 + 0.97·19 = 74.93 rounds to 75 instead of 76.
        assert_eq!(
            decode_block(66, 47, CodecParams::default()),
            [[75, 47], [66, 38]]
        );
        assert_eq!(
            decode_block(55, 60, CodecParams::default()),
            [[53, 60], [55, 62]]
        );
    }

    #[test]
    fn lambda_and_mu_parsing() {
        assert_eq!("1/8".parse::<Lambda>().unwrap(), Lambda::default());
        assert_eq!("1".parse::<Lambda>().unwrap(), Lambda::new(1, 1).unwrap());
        assert!("9/8".parse::<Lambda>().is_err());
        assert!("0/8".parse::<Lambda>().is_err());
        assert!("x/8".parse::<Lambda>().is_err());
        assert_eq!("0.97".parse::<Mu>().unwrap(), Mu::default());
        assert_eq!("1.0".parse::<Mu>().unwrap(), Mu::ONE);
        assert!("0".parse::<Mu>().is_err());
        assert!("1.5".parse::<Mu>().is_err());
        assert_eq!(Lambda::default().to_string(), "1/8");
    }

    #[test]
    fn decompress_rejects_shape_mismatch() {
        let pair = SubbandPair {
            lh_c: Grid::from_fn(2, 2, |_, _| 0),
            hl_b: Grid::from_fn(2, 1, |_, _| 0),
        };
        assert!(matches!(
            decompress(&pair, p1()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn compress_rejects_odd_dimensions() {
        let img = PixelMatrix::constant(4, 3, 0);
        assert!(matches!(
            compress(&img, p1()),
            Err(Error::OddDimensions { .. })
        ));
    }

    fn arb_block() -> impl Strategy<Value = Block> {
        any::<[[u8; 2]; 2]>().prop_map(|b| b.map(|r| r.map(i32::from)))
    }

    proptest! {
        #[test]
        fn stats_invariants(block in arb_block()) {
            let st = block_stats(&block);
            prop_assert_eq!(st.a.abs(), st.n1.abs() + st.n2.abs() + st.n3.abs());
            prop_assert_eq!(st.a.abs(), 2 * st.n1.abs().max(st.n2.abs()));
            if st.a != 0 {
                prop_assert_eq!(st.a.signum(), st.major().signum());
            }
        }

        #[test]
        fn parity_channels(block in arb_block()) {
            let e = encode_block_detailed(&block, CodecParams::default());
            prop_assert_eq!(Parity::of(e.hl), e.mask_b);
            prop_assert_eq!(Parity::of(e.lh), e.mask_c);
        }

        #[test]
        fn raw_difference_encodes_distance(block in arb_block()) {
            let e = encode_block_detailed(&block, CodecParams::default());
            let diff = f64::from(e.raw_lh - e.raw_hl);
            let two_la = 2.0 * e.stats.a as f64 / 8.0;
            if e.stats.a >= 0 {
                prop_assert!(diff >= two_la && diff < two_la + 2.0);
            } else {
                prop_assert!(diff <= two_la && diff > two_la - 2.0);
            }
        }

        #[test]
        fn stored_samples_in_documented_range(block in arb_block()) {
            let (lh, hl) = encode_block(&block, CodecParams::default());
            prop_assert!((-65..=320).contains(&lh));
            prop_assert!((-65..=320).contains(&hl));
        }

        #[test]
        fn orientation_preserved(block in arb_block()) {
            let e = encode_block_detailed(&block, CodecParams::default());
            if e.stats.a.abs() >= 8 {
                prop_assert_eq!((e.lh - e.hl).signum(), e.stats.a.signum());
            }
        }
    }
}
