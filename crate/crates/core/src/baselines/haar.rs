//! Multi-level orthonormal 2D Haar DWT with largest-magnitude retention.

use super::{validate_cr, Truncation};
use crate::error::{Error, Result};
use crate::grid::{Grid, PixelMatrix};

/// In-place Mallat-layout analysis: after each level the top-left quadrant
/// of the active region holds LL, top-right LH, bottom-left HL and
/// bottom-right HH.
fn forward(data: &mut Grid<f64>, levels: u32) {
    let (mut w, mut h) = data.dims();
    for _ in 0..levels {
        let src = data.crop(0, 0, w, h);
        let (hw, hh) = (w / 2, h / 2);
        for r in 0..hh {
            for c in 0..hw {
                let x11 = *src.get(2 * r, 2 * c);
                let x12 = *src.get(2 * r, 2 * c + 1);
                let x21 = *src.get(2 * r + 1, 2 * c);
                let x22 = *src.get(2 * r + 1, 2 * c + 1);
                data.set(r, c, (x11 + x12 + x21 + x22) / 2.0);
                data.set(r, c + hw, (x11 - x12 + x21 - x22) / 2.0);
                data.set(r + hh, c, (x11 + x12 - x21 - x22) / 2.0);
                data.set(r + hh, c + hw, (x11 - x12 - x21 + x22) / 2.0);
            }
        }
        w = hw;
        h = hh;
    }
}

fn inverse(data: &mut Grid<f64>, levels: u32) {
    let (w0, h0) = data.dims();
    for level in (0..levels).rev() {
        let (w, h) = (w0 >> level, h0 >> level);
        let (hw, hh) = (w / 2, h / 2);
        let src = data.crop(0, 0, w, h);
        for r in 0..hh {
            for c in 0..hw {
                let ll = *src.get(r, c);
                let lh = *src.get(r, c + hw);
                let hl = *src.get(r + hh, c);
                let hh_ = *src.get(r + hh, c + hw);
                data.set(2 * r, 2 * c, (ll + lh + hl + hh_) / 2.0);
                data.set(2 * r, 2 * c + 1, (ll - lh + hl - hh_) / 2.0);
                data.set(2 * r + 1, 2 * c, (ll + lh - hl - hh_) / 2.0);
                data.set(2 * r + 1, 2 * c + 1, (ll - lh - hl + hh_) / 2.0);
            }
        }
    }
}

/// Haar DWT keeping the `total / cr` coefficients of largest magnitude.
///
/// The deepest LL band is always kept; the remaining budget goes to detail
/// coefficients in decreasing magnitude, ties broken in row-major order.
pub fn haar_dwt_truncate(img: &PixelMatrix, cr: u32, levels: u32) -> Result<Truncation> {
    validate_cr(cr)?;
    let (w, h) = img.dims();
    if levels == 0 {
        return Err(Error::InvalidParameter(
            "Haar DWT needs at least one level".into(),
        ));
    }
    let divisor = 1usize.checked_shl(levels).unwrap_or(0);
    if divisor == 0 || w % divisor != 0 || h % divisor != 0 {
        return Err(Error::IndivisibleDimensions {
            width: w,
            height: h,
            divisor,
        });
    }
    let total = w * h;
    let budget = total / cr as usize;
    let (llw, llh) = (w / divisor, h / divisor);
    if llw * llh > budget {
        return Err(Error::InvalidParameter(format!(
            "LL band of {llw}x{llh} exceeds the {budget}-coefficient budget; use more levels"
        )));
    }

    let mut coeffs = img.map(|&p| f64::from(p));
    forward(&mut coeffs, levels);

    let mut details: Vec<usize> = (0..total)
        .filter(|&i| i / w >= llh || i % w >= llw)
        .collect();
    details.sort_by(|&a, &b| coeffs.data()[b].abs().total_cmp(&coeffs.data()[a].abs()));
    let keep_details = budget - llw * llh;
    let mut dropped_energy = 0.0;
    for &i in &details[keep_details..] {
        let (r, c) = (i / w, i % w);
        let v = *coeffs.get(r, c);
        dropped_energy += v * v;
        coeffs.set(r, c, 0.0);
    }

    inverse(&mut coeffs, levels);
    Ok(Truncation {
        reconstruction: coeffs,
        dropped_energy,
        retained: budget,
        total,
    })
}

pub fn haar_dwt_compress(img: &PixelMatrix, cr: u32, levels: u32) -> Result<PixelMatrix> {
    haar_dwt_truncate(img, cr, levels).map(|t| t.to_pixels())
}
