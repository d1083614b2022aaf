//! Validated Bernoulli parameter vectors and their exact moments.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::sum::Accumulator;

/// A finite sequence of success probabilities, each in `[0, 1]`.
///
/// Construction rejects NaN and out-of-range entries, so downstream kernels
/// never revalidate. The empty vector is legal and denotes the empty sum
/// (its law is the point mass at 0).
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVec {
    values: Vec<f64>,
}

impl ParamVec {
    pub fn new(values: Vec<f64>) -> Result<Self, Error> {
        for &v in &values {
            if !(0.0..=1.0).contains(&v) {
                // NaN fails the range test as well.
                return Err(Error::InvalidParameter { value: v });
            }
        }
        Ok(Self { values })
    }

    /// Constant vector `(theta, ..., theta)` of length `n`.
    pub fn constant(n: usize, theta: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidParameter { value: theta });
        }
        Ok(Self {
            values: vec![theta; n],
        })
    }

    pub fn empty() -> Self {
        Self { values: Vec::new() }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Subsequence at the given (in-range, duplicate-free) indices.
    pub fn subset(&self, indices: &[usize]) -> ParamVec {
        let values = indices.iter().map(|&i| self.values[i]).collect();
        // Entries were validated on construction.
        Self { values }
    }

    /// Mean of the entries, clamped into `[0, 1]` to absorb rounding.
    pub fn mean(&self) -> Result<f64, Error> {
        if self.values.is_empty() {
            return Err(Error::EmptyVector);
        }
        let mut acc = Accumulator::new();
        for &v in &self.values {
            acc.add(v);
        }
        Ok((acc.total() / self.values.len() as f64).clamp(0.0, 1.0))
    }
}

impl TryFrom<&[f64]> for ParamVec {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self, Error> {
        Self::new(values.to_vec())
    }
}

/// Mean and variance of the Bernoulli sum with the given parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// `mean = sum p_i`, `variance = sum p_i (1 - p_i)`, both compensated.
pub fn moments(p: &ParamVec) -> Moments {
    let mut mean = Accumulator::new();
    let mut var = Accumulator::new();
    for &pi in p.values() {
        mean.add(pi);
        var.add(pi * (1.0 - pi));
    }
    let variance = var.total().max(0.0);
    debug_assert!(variance <= p.len() as f64 / 4.0 + 1e-12);
    Moments {
        mean: mean.total(),
        variance,
    }
}
