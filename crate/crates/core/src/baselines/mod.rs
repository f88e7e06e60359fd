//! Desk-scale comparators: a zonal 8×8 DCT coder and a truncated Haar DWT.
//!
//! Neither quantises nor entropy-codes. Both keep exactly `total / cr`
//! transform coefficients, so their compression ratio is counted the same
//! way as the block codec's: stored elements against image pixels.

pub mod dct;
pub mod haar;

use crate::error::{Error, Result};
use crate::grid::{Grid, PixelMatrix};

pub use dct::{dct8_forward, dct8_inverse, jpeg_like_compress, jpeg_like_truncate, Block8};
pub use haar::{haar_dwt_compress, haar_dwt_truncate};

/// Compression ratios accepted by the baselines.
pub const SUPPORTED_CR: [u32; 4] = [1, 2, 4, 8];

pub(crate) fn validate_cr(cr: u32) -> Result<()> {
    if SUPPORTED_CR.contains(&cr) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "compression ratio must be one of {SUPPORTED_CR:?}, got {cr}"
        )))
    }
}

/// Floating-point reconstruction after coefficient truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    pub reconstruction: Grid<f64>,
    /// Sum of squares of the zeroed coefficients.
    pub dropped_energy: f64,
    pub retained: usize,
    pub total: usize,
}

impl Truncation {
    /// Rounds half away from zero and clamps to `[0, 255]`.
    pub fn to_pixels(&self) -> PixelMatrix {
        self.reconstruction
            .map(|&v| v.round().clamp(0.0, 255.0) as u8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineMethod {
    Dct8x8,
    HaarDwt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BaselineConfig {
    pub method: BaselineMethod,
    pub cr: u32,
    /// Decomposition depth; only used by [`BaselineMethod::HaarDwt`].
    pub dwt_levels: u32,
}

impl BaselineConfig {
    /// Configuration matching the block codec at `cr`: a Haar depth of
    /// `log2(cr)` levels (one level at `cr = 1`).
    pub fn matched(method: BaselineMethod, cr: u32) -> Result<Self> {
        validate_cr(cr)?;
        Ok(Self {
            method,
            cr,
            dwt_levels: cr.trailing_zeros().max(1),
        })
    }

    pub fn run(&self, img: &PixelMatrix) -> Result<PixelMatrix> {
        match self.method {
            BaselineMethod::Dct8x8 => jpeg_like_compress(img, self.cr),
            BaselineMethod::HaarDwt => haar_dwt_compress(img, self.cr, self.dwt_levels),
        }
    }
}
