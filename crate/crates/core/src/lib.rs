//! Lossy grayscale image codec built on the gradient Haar wavelet (GHW).
//!
//! The crate is organised bottom-up:
//!
//! - [`ghw`]: the GHW kernel (scaling/wavelet functions, coefficients, the
//!   balanced slope and the complex 2×2 decomposition).
//! - [`block`]: the diagonal/parity 2×2 block coder that turns every block
//!   into two integer samples and back.
//! - [`pipeline`]: padding, multi-level recursion and the `GHWC` container.
//! - [`metrics`]: MAE, MSE, PSNR, SSIM and compression ratio.
//! - [`baselines`]: zonal 8×8 DCT and truncated Haar DWT comparators.
//! - [`pgm`]: 8-bit PGM (P2/P5) reading and writing.

pub mod baselines;
pub mod block;
mod error;
pub mod ghw;
mod grid;
pub mod metrics;
pub mod pgm;
pub mod pipeline;

pub use block::{CodecParams, Lambda, Mu, SubbandPair};
pub use error::{Error, Result};
pub use grid::{Grid, PixelMatrix};
pub use metrics::QualityReport;
pub use pipeline::CompressedImage;
