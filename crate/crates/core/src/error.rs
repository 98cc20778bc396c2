use std::fmt;

/// Errors produced by sketch construction, estimation and (de)serialization.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A configuration value is outside its supported range.
    ParamRange {
        name: &'static str,
        value: u64,
        min: u64,
        max: u64,
    },
    /// Packed bucket width `q + 1 + r` does not fit the word budget.
    WidthOverflow {
        bits: u32,
    },
    /// Two sketches with different parameters, seed or hash were combined.
    IncompatibleParams,
    /// Jaccard estimation over two empty sketches.
    BothEmpty,
    /// The large-cardinality fallback found no register mass.
    SaturatedSketch,
    /// Cardinality beyond the range of the approximate collision model.
    CardinalityTooLarge {
        n: f64,
    },
    /// `recommend_params` could not satisfy the requested accuracy.
    Infeasible(String),
    /// A bucket that violates the exponent/mantissa ranges of its params.
    InvalidBucket {
        exponent: u64,
        mantissa: u64,
    },
    /// A sweep cardinality above the configured memory cap (or zero).
    InfeasibleCardinality {
        n: u64,
        max: u64,
    },
    BadMagic,
    UnsupportedVersion(u8),
    UnsupportedHash([u8; 8]),
    ChecksumMismatch {
        stored: u32,
        computed: u32,
    },
    Truncated {
        expected: usize,
        actual: usize,
    },
    TrailingBytes {
        expected: usize,
        actual: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ParamRange {
                name,
                value,
                min,
                max,
            } => {
                write!(f, "parameter {name} = {value} outside [{min}, {max}]")
            }
            Error::WidthOverflow { bits } => {
                write!(f, "packed bucket width of {bits} bits exceeds 62")
            }
            Error::IncompatibleParams => write!(f, "sketches have incompatible parameters"),
            Error::BothEmpty => write!(f, "both sketches are empty; Jaccard index undefined"),
            Error::SaturatedSketch => write!(f, "sketch saturated; cardinality is unbounded"),
            Error::CardinalityTooLarge { n } => {
                write!(f, "cardinality {n:e} too large for approximation")
            }
            Error::Infeasible(msg) => write!(f, "infeasible parameters: {msg}"),
            Error::InvalidBucket { exponent, mantissa } => {
                write!(
                    f,
                    "invalid bucket (exponent {exponent}, mantissa {mantissa})"
                )
            }
            Error::InfeasibleCardinality { n, max } => {
                write!(f, "cardinality {n} not in [1, {max}]")
            }
            Error::BadMagic => write!(f, "not a sketch file (bad magic)"),
            Error::UnsupportedVersion(v) => write!(f, "unsupported sketch file version {v}"),
            Error::UnsupportedHash(id) => {
                write!(
                    f,
                    "unsupported hash algorithm {:?}",
                    String::from_utf8_lossy(id)
                )
            }
            Error::ChecksumMismatch { stored, computed } => write!(
                f,
                "corrupt sketch file: checksum {stored:08x} does not match {computed:08x}"
            ),
            Error::Truncated { expected, actual } => {
                write!(
                    f,
                    "truncated sketch file: expected {expected} bytes, got {actual}"
                )
            }
            Error::TrailingBytes { expected, actual } => {
                write!(
                    f,
                    "sketch file too long: expected {expected} bytes, got {actual}"
                )
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
