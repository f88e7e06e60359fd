use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate coefficient normalization: |p0|^2 + |p1|^2 = {0:e}")]
    DegenerateNormalization(f64),
    #[error("division by zero: C - A must be nonzero")]
    ZeroCMinusA,
    #[error("grid of {width}x{height} needs {expected} samples, got {actual}")]
    SampleCount {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },
    #[error("dimensions must be positive, got {width}x{height}")]
    EmptyGrid { width: usize, height: usize },
    #[error("dimensions {width}x{height} are not even")]
    OddDimensions { width: usize, height: usize },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("dimensions {width}x{height} are not divisible by {divisor}")]
    IndivisibleDimensions {
        width: usize,
        height: usize,
        divisor: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("levels must be in 1..=3, got {0}")]
    LevelsOutOfRange(u32),
    #[error("sample {0} does not fit in a signed 16-bit integer")]
    SampleOverflow(i64),
    #[error("stored element count must be positive")]
    ZeroStoredCount,
    #[error("bad magic: expected \"GHWC\"")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("truncated container: expected {expected} bytes, got {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error("corrupt container: {0}")]
    CorruptContainer(String),
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("unsupported PGM maxval {0}, only 255 is supported")]
    UnsupportedMaxval(u32),
    #[error("truncated PGM raster: expected {expected} samples, got {actual}")]
    TruncatedRaster { expected: usize, actual: usize },
}
