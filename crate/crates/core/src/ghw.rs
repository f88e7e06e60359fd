//! Gradient Haar wavelet kernel.
//!
//! The GHW replaces the flat Haar scaling function with a sloped step of
//! slope γ. Its two-tap filter coefficients are
//!
//! ```text
//! p0 = γ²/24 − γ/4 + 1        p1 = γ²/24 + γ/4 + 1
//! ```
//!
//! normalised so that `|p̃0|² + |p̃1|² = 1`. γ = 0 recovers the Haar filter.
//! The purely imaginary slope returned by [`solve_balanced_gamma`] makes
//! `p̃0 = ½(1 − i)` and `p̃1 = ½(1 + i)`; with that choice (and α = −1) each
//! 2×2 block decomposes into four complex sub-band entries of equal modulus.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, PixelMatrix};

/// A 4×4 complex matrix, row-major.
pub type Matrix4 = [[Complex64; 4]; 4];

const NORMALIZATION_EPS: f64 = 1e-15;

/// The sloped scaling function `φ(x) = γ(x − ½) + 1` on `[0, 1)`.
pub fn eval_scaling(x: f64, gamma: Complex64) -> Complex64 {
    if (0.0..1.0).contains(&x) {
        gamma * (x - 0.5) + 1.0
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// The GHW mother wavelet built from the sloped scaling function.
pub fn eval_wavelet(x: f64, gamma: Complex64) -> Complex64 {
    let (p0, p1) = raw_coefficients(gamma);
    if (0.0..0.5).contains(&x) {
        p1 * (gamma * (2.0 * x) - gamma / 2.0 + 1.0)
    } else if (0.5..1.0).contains(&x) {
        -p0 * (gamma * (2.0 * x) - gamma * 1.5 + 1.0)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Slope and filter coefficients of one GHW instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhwParams {
    pub gamma: Complex64,
    pub p0: Complex64,
    pub p1: Complex64,
    /// `p0` divided by `sqrt(|p0|² + |p1|²)`.
    pub p0n: Complex64,
    /// `p1` divided by `sqrt(|p0|² + |p1|²)`.
    pub p1n: Complex64,
}

fn raw_coefficients(gamma: Complex64) -> (Complex64, Complex64) {
    let quadratic = gamma * gamma / 24.0 + 1.0;
    (quadratic - gamma / 4.0, quadratic + gamma / 4.0)
}

pub fn coefficients(gamma: Complex64) -> Result<GhwParams> {
    let (p0, p1) = raw_coefficients(gamma);
    let energy = p0.norm_sqr() + p1.norm_sqr();
    if energy.is_nan() || energy < NORMALIZATION_EPS {
        return Err(Error::DegenerateNormalization(energy));
    }
    let scale = energy.sqrt();
    Ok(GhwParams {
        gamma,
        p0,
        p1,
        p0n: p0 / scale,
        p1n: p1 / scale,
    })
}

/// The slope that equalises the LH and HL sub-band totals (k = 0).
///
/// Equals `i·sqrt(42 − 6√33)`, which simplifies to `(√33 − 3)·i`.
pub fn solve_balanced_gamma() -> Complex64 {
    let radicand = 42.0 - 6.0 * 33f64.sqrt();
    Complex64::new(0.0, radicand.sqrt())
}

/// Slope for which the LH and HL sub-band totals differ by `k`, where
/// `c_minus_a` is the difference of the two off-diagonal pixel sums.
///
/// Evaluates `γ = sqrt(6·(sqrt(33 + 8k/(C−A)) − 7))` on the principal
/// complex branch. For `k = 0` this is independent of `C − A`.
pub fn solve_gamma(k: f64, c_minus_a: f64) -> Result<Complex64> {
    if c_minus_a == 0.0 {
        return Err(Error::ZeroCMinusA);
    }
    let inner = Complex64::new(33.0 + 8.0 * k / c_minus_a, 0.0).sqrt();
    Ok(((inner - 7.0) * 6.0).sqrt())
}

/// First approximation matrix `G₁`: one level of filtering on a length-4 signal.
pub fn first_approximation_matrix(params: &GhwParams) -> Matrix4 {
    let (p0, p1) = (params.p0n, params.p1n);
    let z = Complex64::new(0.0, 0.0);
    [
        [p0, p1, z, z],
        [z, z, p0, p1],
        [p1, -p0, z, z],
        [z, z, p1, -p0],
    ]
}

/// Second approximation matrix `G₂`: re-filters the two low-pass outputs.
pub fn second_approximation_matrix(params: &GhwParams) -> Matrix4 {
    let (p0, p1) = (params.p0n, params.p1n);
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    [
        [p0, p1, z, z],
        [p1, -p0, z, z],
        [z, z, one, z],
        [z, z, z, one],
    ]
}

pub fn matmul4(lhs: &Matrix4, rhs: &Matrix4) -> Matrix4 {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..4).map(|k| lhs[i][k] * rhs[k][j]).sum();
        }
    }
    out
}

/// The two-level 4×4 GHW analysis matrix `G = G₂G₁`.
pub fn build_transform_matrix_4(gamma: Complex64) -> Result<Matrix4> {
    let params = coefficients(gamma)?;
    let p0 = params.p0n;
    let p1 = params.p1n;
    let z = Complex64::new(0.0, 0.0);
    // Closed form of G₂G₁.
    Ok([
        [p0 * p0, p0 * p1, p1 * p0, p1 * p1],
        [p1 * p0, p1 * p1, -(p0 * p0), -(p0 * p1)],
        [p1, -p0, z, z],
        [z, z, p1, -p0],
    ])
}

/// One level of complex sub-bands, each `(width/2) x (height/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSubbands {
    pub ll: Grid<Complex64>,
    pub lh: Grid<Complex64>,
    pub hl: Grid<Complex64>,
    pub hh: Grid<Complex64>,
}

/// Four real modulus images, one per sub-band.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusImages {
    pub ll: Grid<f64>,
    pub lh: Grid<f64>,
    pub hl: Grid<f64>,
    pub hh: Grid<f64>,
}

impl ModulusImages {
    /// Largest elementwise difference between any two of the four images.
    pub fn max_spread(&self) -> f64 {
        let bands = [&self.ll, &self.lh, &self.hl, &self.hh];
        (0..self.ll.len())
            .map(|i| {
                let values = bands.map(|b| b.data()[i]);
                let hi = values.iter().copied().fold(f64::MIN, f64::max);
                let lo = values.iter().copied().fold(f64::MAX, f64::min);
                hi - lo
            })
            .fold(0.0, f64::max)
    }
}

/// Sub-band entries of one block under the balanced coefficients, α = −1.
///
/// With `a = (x11 − x22)/2` and `b = (x12 − x21)/2` every entry is `±b ± a·i`,
/// so all four share the modulus `sqrt(a² + b²)`.
pub fn decompose_block(block: [[i32; 2]; 2]) -> [Complex64; 4] {
    let a = f64::from(block[0][0] - block[1][1]) / 2.0;
    let b = f64::from(block[0][1] - block[1][0]) / 2.0;
    [
        Complex64::new(b, -a),
        Complex64::new(b, a),
        Complex64::new(b, a),
        Complex64::new(-b, a),
    ]
}

fn blockwise(
    img: &PixelMatrix,
    mut f: impl FnMut([[i32; 2]; 2]) -> [Complex64; 4],
) -> Result<ComplexSubbands> {
    img.require_even()?;
    let (w, h) = (img.width() / 2, img.height() / 2);
    let zero = Complex64::new(0.0, 0.0);
    let mut bands: [Grid<Complex64>; 4] = std::array::from_fn(|_| Grid::from_fn(w, h, |_, _| zero));
    for br in 0..h {
        for bc in 0..w {
            let block = img.block(br, bc).map(|row| row.map(i32::from));
            for (band, value) in bands.iter_mut().zip(f(block)) {
                band.set(br, bc, value);
            }
        }
    }
    let [ll, lh, hl, hh] = bands;
    Ok(ComplexSubbands { ll, lh, hl, hh })
}

/// Complex decomposition with the balanced slope and α = −1.
pub fn decompose(img: &PixelMatrix) -> Result<ComplexSubbands> {
    blockwise(img, decompose_block)
}

/// One analysis level `E = H·X·Hᵀ` per block with the 2×2 GHW filter
/// `H = [[p̃0, p̃1], [p̃1, −p̃0]]` for an arbitrary slope.
///
/// At γ = 0 this is the orthonormal 2D Haar step.
pub fn analyze(img: &PixelMatrix, gamma: Complex64) -> Result<ComplexSubbands> {
    let params = coefficients(gamma)?;
    let filter = [[params.p0n, params.p1n], [params.p1n, -params.p0n]];
    blockwise(img, |block| {
        let entry = |i: usize, j: usize| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                for l in 0..2 {
                    acc += filter[i][k] * f64::from(block[k][l]) * filter[j][l];
                }
            }
            acc
        };
        [entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1)]
    })
}

pub fn modulus_image(sub: &ComplexSubbands) -> ModulusImages {
    ModulusImages {
        ll: sub.ll.map(|z| z.norm()),
        lh: sub.lh.map(|z| z.norm()),
        hl: sub.hl.map(|z| z.norm()),
        hh: sub.hh.map(|z| z.norm()),
    }
}
