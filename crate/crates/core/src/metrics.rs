//! Image quality and rate measures.

use crate::error::{Error, Result};
use crate::grid::PixelMatrix;

const PEAK: f64 = 255.0;

/// SSIM stabilisers `C1 = (k1·L)²` and `C2 = (k2·L)²` for 8-bit images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimConstants {
    pub c1: f64,
    pub c2: f64,
}

impl SsimConstants {
    pub fn new(k1: f64, k2: f64, dynamic_range: f64) -> Self {
        Self {
            c1: (k1 * dynamic_range).powi(2),
            c2: (k2 * dynamic_range).powi(2),
        }
    }
}

impl Default for SsimConstants {
    fn default() -> Self {
        Self::new(0.01, 0.03, PEAK)
    }
}

pub const SSIM_WINDOW: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub mae: f64,
    pub mse: f64,
    /// `f64::INFINITY` for identical images.
    pub psnr: f64,
    pub ssim: f64,
    pub cr: f64,
}

impl QualityReport {
    pub fn new(reference: &PixelMatrix, test: &PixelMatrix, cr: f64) -> Result<Self> {
        let mse = mse(reference, test)?;
        Ok(Self {
            mae: mae(reference, test)?,
            mse,
            psnr: psnr_from_mse(mse),
            ssim: ssim(reference, test, false)?,
            cr,
        })
    }
}

fn pairs<'a>(
    reference: &'a PixelMatrix,
    test: &'a PixelMatrix,
) -> Result<impl Iterator<Item = (f64, f64)> + Clone + 'a> {
    reference.require_same_dims(test)?;
    Ok(reference
        .data()
        .iter()
        .zip(test.data())
        .map(|(&a, &b)| (f64::from(a), f64::from(b))))
}

pub fn mae(reference: &PixelMatrix, test: &PixelMatrix) -> Result<f64> {
    let total: f64 = pairs(reference, test)?.map(|(a, b)| (a - b).abs()).sum();
    Ok(total / reference.len() as f64)
}

pub fn mse(reference: &PixelMatrix, test: &PixelMatrix) -> Result<f64> {
    let total: f64 = pairs(reference, test)?.map(|(a, b)| (a - b).powi(2)).sum();
    Ok(total / reference.len() as f64)
}

/// `10·log10(255²/mse)`, or infinity when `mse` is zero.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / mse).log10()
    }
}

pub fn psnr(reference: &PixelMatrix, test: &PixelMatrix) -> Result<f64> {
    mse(reference, test).map(psnr_from_mse)
}

/// Single-window SSIM from population statistics of two sample sets.
fn ssim_of(samples: impl Iterator<Item = (f64, f64)> + Clone, consts: SsimConstants) -> f64 {
    let n = samples.clone().count() as f64;
    let (sum_x, sum_y) = samples
        .clone()
        .fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x, sy + y));
    let (mean_x, mean_y) = (sum_x / n, sum_y / n);
    let (mut var_x, mut var_y, mut cov) = (0.0, 0.0, 0.0);
    for (x, y) in samples {
        let (dx, dy) = (x - mean_x, y - mean_y);
        var_x += dx * dx;
        var_y += dy * dy;
        cov += dx * dy;
    }
    let (var_x, var_y, cov) = (var_x / n, var_y / n, cov / n);
    let numerator = (2.0 * mean_x * mean_y + consts.c1) * (2.0 * cov + consts.c2);
    let denominator = (mean_x.powi(2) + mean_y.powi(2) + consts.c1) * (var_x + var_y + consts.c2);
    numerator / denominator
}

/// SSIM over the whole image, or averaged over non-overlapping 8×8 windows
/// when `windowed` is set (partial windows at the right/bottom edges are
/// skipped).
pub fn ssim(reference: &PixelMatrix, test: &PixelMatrix, windowed: bool) -> Result<f64> {
    ssim_with(reference, test, windowed, SsimConstants::default())
}

pub fn ssim_with(
    reference: &PixelMatrix,
    test: &PixelMatrix,
    windowed: bool,
    consts: SsimConstants,
) -> Result<f64> {
    reference.require_same_dims(test)?;
    if !windowed {
        return Ok(ssim_of(pairs(reference, test)?, consts));
    }
    let (w, h) = reference.dims();
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::InvalidParameter(format!(
            "windowed SSIM needs at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {w}x{h}"
        )));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for wy in 0..h / SSIM_WINDOW {
        for wx in 0..w / SSIM_WINDOW {
            let window = (0..SSIM_WINDOW * SSIM_WINDOW).map(move |i| {
                let r = wy * SSIM_WINDOW + i / SSIM_WINDOW;
                let c = wx * SSIM_WINDOW + i % SSIM_WINDOW;
                (f64::from(*reference.get(r, c)), f64::from(*test.get(r, c)))
            });
            total += ssim_of(window, consts);
            count += 1;
        }
    }
    Ok(total / count as f64)
}

/// Element-count ratio `|M| / |E|`.
pub fn compression_ratio(original_count: usize, stored_count: usize) -> Result<f64> {
    if stored_count == 0 {
        return Err(Error::ZeroStoredCount);
    }
    Ok(original_count as f64 / stored_count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use proptest::prelude::*;

    fn checkerboard(n: usize) -> PixelMatrix {
        Grid::from_fn(n, n, |r, c| if (r + c) % 2 == 0 { 230 } else { 20 })
    }

    #[test]
    fn ssim_constants() {
        let c = SsimConstants::default();
        assert!((c.c1 - 6.5025).abs() < 1e-12);
        assert!((c.c2 - 58.5225).abs() < 1e-12);
    }

    #[test]
    fn mae_cases() {
        let x = checkerboard(4);
        assert_eq!(mae(&x, &x).unwrap(), 0.0);
        let zeros = PixelMatrix::constant(4, 4, 0);
        let full = PixelMatrix::constant(4, 4, 255);
        assert_eq!(mae(&zeros, &full).unwrap(), 255.0);
        assert!(matches!(
            mae(&zeros, &PixelMatrix::constant(4, 2, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn psnr_cases() {
        let zeros = PixelMatrix::constant(4, 4, 0);
        let full = PixelMatrix::constant(4, 4, 255);
        assert_eq!(psnr(&zeros, &full).unwrap(), 0.0);
        assert_eq!(psnr(&zeros, &zeros).unwrap(), f64::INFINITY);
        let ones = PixelMatrix::constant(4, 4, 1);
        let expected = 10.0 * 65025f64.log10();
        assert!((psnr(&zeros, &ones).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 48.130_803_608).abs() < 1e-6);
    }

    #[test]
    fn ssim_cases() {
        let x = checkerboard(8);
        assert!((ssim(&x, &x, false).unwrap() - 1.0).abs() < 1e-15);
        assert!((ssim(&x, &x, true).unwrap() - 1.0).abs() < 1e-15);
        let inverted = x.map(|&v| 255 - v);
        assert!(ssim(&x, &inverted, false).unwrap() < 0.0);
        let c = PixelMatrix::constant(8, 8, 77);
        assert_eq!(ssim(&c, &c, false).unwrap(), 1.0);
        assert!(ssim(
            &PixelMatrix::constant(4, 4, 0),
            &PixelMatrix::constant(4, 4, 0),
            true
        )
        .is_err());
    }

    #[test]
    fn ssim_checkerboard_inverse_exact() {
        // means 125 and 130, variances 105² each, covariance −105².
        let x = checkerboard(8);
        let y = x.map(|&v| 255 - v);
        let c = SsimConstants::default();
        let expected = (2.0 * 125.0 * 130.0 + c.c1) * (-2.0 * 11025.0 + c.c2)
            / ((125f64.powi(2) + 130f64.powi(2) + c.c1) * (2.0 * 11025.0 + c.c2));
        assert!((ssim(&x, &y, false).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn compression_ratio_cases() {
        assert_eq!(compression_ratio(16, 8).unwrap(), 2.0);
        assert_eq!(compression_ratio(9, 9).unwrap(), 1.0);
        assert_eq!(compression_ratio(262_144, 32_768).unwrap(), 8.0);
        assert_eq!(compression_ratio(4, 0), Err(Error::ZeroStoredCount));
    }

    fn arb_pair() -> impl Strategy<Value = (PixelMatrix, PixelMatrix)> {
        (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
            let n = w * h;
            (
                proptest::collection::vec(any::<u8>(), n),
                proptest::collection::vec(any::<u8>(), n),
            )
                .prop_map(move |(a, b)| {
                    (
                        PixelMatrix::new(w, h, a).unwrap(),
                        PixelMatrix::new(w, h, b).unwrap(),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded((a, b) in arb_pair()) {
            prop_assert_eq!(mae(&a, &b).unwrap(), mae(&b, &a).unwrap());
            let s = ssim(&a, &b, false).unwrap();
            prop_assert!((s - ssim(&b, &a, false).unwrap()).abs() < 1e-12);
            prop_assert!((-1.0..=1.0).contains(&s));
        }

        #[test]
        fn psnr_consistent_with_mse((a, b) in arb_pair()) {
            let m = mse(&a, &b).unwrap();
            let p = psnr(&a, &b).unwrap();
            if m > 0.0 {
                prop_assert!((p - 10.0 * (255.0f64 * 255.0 / m).log10()).abs() < 1e-9);
            } else {
                prop_assert_eq!(p, f64::INFINITY);
            }
        }

        #[test]
        fn psnr_monotone(m1 in 1e-6f64..1e5, m2 in 1e-6f64..1e5) {
            if m1 < m2 {
                prop_assert!(psnr_from_mse(m1) > psnr_from_mse(m2));
            }
        }
    }
}
