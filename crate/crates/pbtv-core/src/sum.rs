//! Compensated (Neumaier) summation.
//!
//! Mass totals, `l1` distances, and parameter sums routinely add `10^4`
//! terms; plain accumulation would eat most of the 1e-12 tolerance budget,
//! so every multi-term sum in this crate goes through [`Accumulator`].

/// Running Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of an iterator of terms.
pub fn sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = Accumulator::new();
    for x in terms {
        acc.add(x);
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensates_cancellation() {
        // 1 + 1e100 - 1e100 loses the 1 under naive summation.
        assert_eq!(sum([1.0, 1e100, 1.0, -1e100]), 2.0);
    }

    #[test]
    fn matches_exact_small_sum() {
        assert_eq!(sum([0.25, 0.5, 0.25]), 1.0);
    }
}
