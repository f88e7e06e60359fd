use crate::error::{Error, Result};

/// Row-major two-dimensional array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

/// An 8-bit grayscale image.
pub type PixelMatrix = Grid<u8>;

impl<T> Grid<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyGrid { width, height });
        }
        let expected = width * height;
        if data.len() != expected {
            return Err(Error::SampleCount {
                width,
                height,
                expected,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Builds a grid by evaluating `f(row, col)` for every position.
    ///
    /// Panics if either dimension is zero.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(width > 0 && height > 0, "grid dimensions must be positive");
        let mut data = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    /// Builds a grid from nested rows. Panics on ragged or empty input.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Self
    where
        T: Clone,
    {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(
            rows.iter().all(|r| r.as_ref().len() == width),
            "ragged rows"
        );
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().cloned())
            .collect();
        Self::new(width, height, data).expect("rows must be non-empty")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.data[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.data[row * self.width + col] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.width)
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub(crate) fn require_even(&self) -> Result<()> {
        if !self.width.is_multiple_of(2) || !self.height.is_multiple_of(2) {
            return Err(Error::OddDimensions {
                width: self.width,
                height: self.height,
            });
        }
        Ok(())
    }

    pub(crate) fn require_same_dims<U>(&self, other: &Grid<U>) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                left: self.dims(),
                right: other.dims(),
            });
        }
        Ok(())
    }
}

impl<T: Copy> Grid<T> {
    /// The 2×2 block whose top-left sample sits at `(2 * br, 2 * bc)`.
    pub(crate) fn block(&self, br: usize, bc: usize) -> [[T; 2]; 2] {
        let (r, c) = (2 * br, 2 * bc);
        [
            [*self.get(r, c), *self.get(r, c + 1)],
            [*self.get(r + 1, c), *self.get(r + 1, c + 1)],
        ]
    }

    /// Copy of `height x width` samples starting at `(row, col)`.
    pub fn crop(&self, row: usize, col: usize, width: usize, height: usize) -> Grid<T> {
        assert!(row + height <= self.height && col + width <= self.width);
        Grid::from_fn(width, height, |r, c| *self.get(row + r, col + c))
    }
}

impl PixelMatrix {
    /// Image with every pixel set to `value`.
    pub fn constant(width: usize, height: usize, value: u8) -> Self {
        Grid::from_fn(width, height, |_, _| value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_sample_count() {
        let err = Grid::new(2, 2, vec![0u8; 3]).unwrap_err();
        assert!(matches!(
            err,
            Error::SampleCount {
                expected: 4,
                actual: 3,
                ..
            }
        ));
        assert!(matches!(
            Grid::<u8>::new(0, 2, vec![]),
            Err(Error::EmptyGrid { .. })
        ));
    }

    #[test]
    fn block_and_crop_index_row_major() {
        let g = Grid::from_fn(4, 4, |r, c| (r * 4 + c) as i32);
        assert_eq!(g.block(1, 0), [[8, 9], [12, 13]]);
        assert_eq!(g.crop(1, 2, 2, 3).data(), &[6, 7, 10, 11, 14, 15]);
    }
}
