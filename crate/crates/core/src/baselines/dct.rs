//! Orthonormal 8×8 DCT-II with zig-zag zonal truncation.

use std::sync::OnceLock;

use super::{validate_cr, Truncation};
use crate::error::Result;
use crate::grid::{Grid, PixelMatrix};

pub type Block8 = [[f64; 8]; 8];

const N: usize = 8;

fn basis() -> &'static Block8 {
    static BASIS: OnceLock<Block8> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut c = [[0.0; N]; N];
        for (k, row) in c.iter_mut().enumerate() {
            let scale = if k == 0 {
                (1.0 / N as f64).sqrt()
            } else {
                (2.0 / N as f64).sqrt()
            };
            for (n, v) in row.iter_mut().enumerate() {
                *v = scale
                    * ((2 * n + 1) as f64 * k as f64 * std::f64::consts::PI / (2 * N) as f64).cos();
            }
        }
        c
    })
}

/// `lhs · rhs`, with either operand optionally transposed.
fn mul(lhs: &Block8, lt: bool, rhs: &Block8, rt: bool) -> Block8 {
    let at = |m: &Block8, t: bool, i: usize, j: usize| if t { m[j][i] } else { m[i][j] };
    let mut out = [[0.0; N]; N];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (0..N).map(|k| at(lhs, lt, i, k) * at(rhs, rt, k, j)).sum();
        }
    }
    out
}

pub fn dct8_forward(block: &Block8) -> Block8 {
    let c = basis();
    mul(&mul(c, false, block, false), false, c, true)
}

pub fn dct8_inverse(coeffs: &Block8) -> Block8 {
    let c = basis();
    mul(&mul(c, true, coeffs, false), false, c, false)
}

/// JPEG zig-zag scan order as `(row, col)` pairs.
pub fn zigzag_order() -> [(usize, usize); 64] {
    let mut order = [(0, 0); 64];
    let mut i = 0;
    for s in 0..(2 * N - 1) {
        let rows: Vec<usize> = (s.saturating_sub(N - 1)..=s.min(N - 1)).collect();
        let iter: Box<dyn Iterator<Item = &usize>> = if s % 2 == 0 {
            Box::new(rows.iter().rev())
        } else {
            Box::new(rows.iter())
        };
        for &r in iter {
            order[i] = (r, s - r);
            i += 1;
        }
    }
    order
}

fn pad_to_multiple(img: &PixelMatrix, m: usize) -> PixelMatrix {
    let w = img.width().div_ceil(m) * m;
    let h = img.height().div_ceil(m) * m;
    Grid::from_fn(w, h, |r, c| {
        *img.get(r.min(img.height() - 1), c.min(img.width() - 1))
    })
}

/// Keeps the first `64 / cr` zig-zag coefficients of every 8×8 block.
///
/// Images are edge-replicated to a multiple of 8 and cropped back.
pub fn jpeg_like_truncate(img: &PixelMatrix, cr: u32) -> Result<Truncation> {
    validate_cr(cr)?;
    let keep = 64 / cr as usize;
    let padded = pad_to_multiple(img, N);
    let zigzag = zigzag_order();
    let mut recon = Grid::from_fn(padded.width(), padded.height(), |_, _| 0.0);
    let mut dropped_energy = 0.0;
    for br in 0..padded.height() / N {
        for bc in 0..padded.width() / N {
            let mut block = [[0.0; N]; N];
            for (r, row) in block.iter_mut().enumerate() {
                for (c, v) in row.iter_mut().enumerate() {
                    *v = f64::from(*padded.get(br * N + r, bc * N + c));
                }
            }
            let mut coeffs = dct8_forward(&block);
            for &(r, c) in &zigzag[keep..] {
                dropped_energy += coeffs[r][c] * coeffs[r][c];
                coeffs[r][c] = 0.0;
            }
            let out = dct8_inverse(&coeffs);
            for (r, row) in out.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    recon.set(br * N + r, bc * N + c, v);
                }
            }
        }
    }
    let total = padded.len();
    Ok(Truncation {
        reconstruction: recon.crop(0, 0, img.width(), img.height()),
        dropped_energy,
        retained: total / cr as usize,
        total,
    })
}

pub fn jpeg_like_compress(img: &PixelMatrix, cr: u32) -> Result<PixelMatrix> {
    jpeg_like_truncate(img, cr).map(|t| t.to_pixels())
}
