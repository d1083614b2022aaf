use core::fmt;

/// Errors reported by construction and computation routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// A probability parameter was NaN or outside `[0, 1]`.
    InvalidParameter { value: f64 },
    /// Two parameter vectors had different lengths.
    LengthMismatch { left: usize, right: usize },
    /// A pmf entry was more negative than rounding noise can explain.
    NegativeMass { value: f64 },
    /// Total pmf mass was not within tolerance of 1.
    NotNormalized { total: f64 },
    /// Shift distance asked for a pmf that is not unimodal.
    NotUnimodal,
    /// Coordinatewise domination `p_i >= q_i` failed at `index`.
    NotDominating { index: usize },
    /// The positive measure fed to the peak lower bound had mass <= 0.
    NonPositiveMass { total: f64 },
    /// An operation that needs at least one coordinate got an empty vector.
    EmptyVector,
    /// A partition block that must be nonempty was empty.
    EmptyPart,
    /// Mixture split sizes must satisfy `1 <= size_left <= n - 1`.
    BadSplit { n: usize, size_left: usize },
    /// A pmf extended beyond the support the trial-deletion kernel accepts.
    SupportTooLarge { min: i64, max: i64, cap: i64 },
    /// Instance exceeds a brute-force enumeration cap.
    TooLarge { n: usize, cap: usize },
    /// Partition indices were out of range or duplicated.
    InvalidPartition { index: usize },
    /// A probe grid was malformed.
    BadGrid(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { value } => {
                write!(f, "parameter must be in [0, 1], got {value}")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::NegativeMass { value } => {
                write!(f, "pmf mass {value} is below the rounding-noise floor")
            }
            Error::NotNormalized { total } => {
                write!(f, "pmf mass sums to {total}, not 1")
            }
            Error::NotUnimodal => write!(f, "pmf is not unimodal"),
            Error::NotDominating { index } => {
                write!(f, "p does not dominate q at coordinate {index}")
            }
            Error::NonPositiveMass { total } => {
                write!(f, "measure has non-positive total mass {total}")
            }
            Error::EmptyVector => write!(f, "parameter vector is empty"),
            Error::EmptyPart => write!(f, "partition block is empty"),
            Error::BadSplit { n, size_left } => {
                write!(f, "split size {size_left} invalid for n = {n}")
            }
            Error::SupportTooLarge { min, max, cap } => {
                write!(f, "support [{min}, {max}] exceeds kernel domain [0, {cap}]")
            }
            Error::TooLarge { n, cap } => {
                write!(f, "n = {n} exceeds the brute-force cap {cap}")
            }
            Error::InvalidPartition { index } => {
                write!(f, "partition index {index} is out of range or repeated")
            }
            Error::BadGrid(reason) => write!(f, "bad probe grid: {reason}"),
        }
    }
}

impl core::error::Error for Error {}
