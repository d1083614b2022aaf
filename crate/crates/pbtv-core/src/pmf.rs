//! Integer-supported probability mass functions and the exact
//! Bernoulli-sum kernel.
//!
//! The law of `X_1 + ... + X_n` with independent `X_i ~ Ber(p_i)` is built
//! by the rolling recurrence
//!
//! ```text
//! f_i(k) = (1 - p_i) f_{i-1}(k) + p_i f_{i-1}(k - 1)
//! ```
//!
//! in `O(n^2)` time and `O(n)` space. No binomial coefficients, powers, or
//! transforms are involved, so the same kernel serves arbitrary parameter
//! vectors and the homogeneous (binomial) special case alike.

use alloc::vec;
use alloc::vec::Vec;

use crate::consts::tol;
use crate::error::Error;
use crate::param::ParamVec;
use crate::sum::Accumulator;

/// A finite pmf on the integers, stored as the smallest support point plus
/// a dense run of masses.
///
/// Canonical form: leading and trailing zeros are trimmed, entries in
/// `[-1e-15, 0)` are clamped to zero, more negative entries are rejected,
/// and the total mass must be within `1e-12` of 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    offset: i64,
    mass: Vec<f64>,
}

impl Pmf {
    /// Canonicalize and validate a raw mass vector starting at `offset`.
    pub fn new(offset: i64, mut mass: Vec<f64>) -> Result<Self, Error> {
        for m in &mut mass {
            if *m < 0.0 {
                if *m < -tol::MASS_CLAMP {
                    return Err(Error::NegativeMass { value: *m });
                }
                *m = 0.0;
            }
        }
        let total = crate::sum::sum(mass.iter().copied());
        if (total - 1.0).abs() > tol::MASS_TOTAL {
            return Err(Error::NotNormalized { total });
        }
        let first = mass.iter().position(|&m| m > 0.0).expect("total is 1");
        let last = mass.iter().rposition(|&m| m > 0.0).expect("total is 1");
        mass.drain(..first);
        mass.truncate(last - first + 1);
        Ok(Self {
            offset: offset + first as i64,
            mass,
        })
    }

    /// The distribution concentrated at `k`.
    pub fn point_mass(k: i64) -> Self {
        Self {
            offset: k,
            mass: vec![1.0],
        }
    }

    #[inline]
    pub fn offset(&self) -> i64 {
        self.offset
    }

    #[inline]
    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    #[inline]
    pub fn min_support(&self) -> i64 {
        self.offset
    }

    #[inline]
    pub fn max_support(&self) -> i64 {
        self.offset + self.mass.len() as i64 - 1
    }

    /// `P(X = k)`, zero outside the stored run.
    #[inline]
    pub fn mass_at(&self, k: i64) -> f64 {
        if k < self.offset || k > self.max_support() {
            0.0
        } else {
            self.mass[(k - self.offset) as usize]
        }
    }

    /// Largest single mass.
    pub fn peak(&self) -> f64 {
        self.mass.iter().copied().fold(0.0, f64::max)
    }

    /// The law of `X + by`.
    pub fn shifted(&self, by: i64) -> Self {
        Self {
            offset: self.offset + by,
            mass: self.mass.clone(),
        }
    }

    /// Mean computed from the stored masses.
    pub fn mean(&self) -> f64 {
        let mut acc = Accumulator::new();
        for (k, &m) in self.iter() {
            acc.add(k as f64 * m);
        }
        acc.total()
    }

    /// Variance computed from the stored masses.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let mut acc = Accumulator::new();
        for (k, &m) in self.iter() {
            let d = k as f64 - mean;
            acc.add(d * d * m);
        }
        acc.total().max(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &f64)> {
        self.mass
            .iter()
            .enumerate()
            .map(|(i, m)| (self.offset + i as i64, m))
    }

    /// Survival function `P(X >= k)`. Exactly 1 at or below the support
    /// minimum and exactly 0 above the maximum.
    pub fn survival(&self, k: i64) -> f64 {
        if k <= self.offset {
            return 1.0;
        }
        if k > self.max_support() {
            return 0.0;
        }
        let from = (k - self.offset) as usize;
        crate::sum::sum(self.mass[from..].iter().copied())
    }

    /// Plateau-tolerant unimodality scan: masses may rise, sit within
    /// `1e-12` of flat, then fall; a rise after a fall fails.
    pub fn is_unimodal(&self) -> bool {
        let mut rising = true;
        for w in self.mass.windows(2) {
            let d = w[1] - w[0];
            if d > tol::SHAPE {
                if !rising {
                    return false;
                }
            } else if d < -tol::SHAPE {
                rising = false;
            }
        }
        true
    }

    /// `mass(k)^2 >= mass(k-1) * mass(k+1) - 1e-12` at every interior point
    /// whose neighbors are both positive.
    pub fn is_log_concave(&self) -> bool {
        for w in self.mass.windows(3) {
            if w[0] > 0.0 && w[2] > 0.0 && w[1] * w[1] < w[0] * w[2] - tol::SHAPE {
                return false;
            }
        }
        true
    }

    /// `TV(X, X + 1)` for unimodal laws, which telescopes to the pmf peak.
    pub fn shift_tv(&self) -> Result<f64, Error> {
        if !self.is_unimodal() {
            return Err(Error::NotUnimodal);
        }
        Ok(self.peak())
    }
}

/// One in-place recurrence step: extend `row` (the law of a partial sum,
/// offset 0) by an independent `Ber(p)` trial.
pub(crate) fn convolve_bernoulli(row: &mut Vec<f64>, p: f64) {
    let q = 1.0 - p;
    row.push(0.0);
    // Descending k keeps row[k - 1] from the previous stage intact.
    for k in (1..row.len()).rev() {
        row[k] = q * row[k] + p * row[k - 1];
    }
    row[0] *= q;
}

/// Raw mass table of the Bernoulli-sum law on `{0, ..., n}`, untrimmed.
pub(crate) fn sum_law_masses(params: &[f64]) -> Vec<f64> {
    let mut row = Vec::with_capacity(params.len() + 1);
    row.push(1.0);
    for &p in params {
        convolve_bernoulli(&mut row, p);
    }
    row
}

/// Exact law of the Bernoulli sum with parameters `p`.
///
/// `O(n^2)` time, `O(n)` working space. The empty vector yields the point
/// mass at 0.
pub fn pb_pmf(p: &ParamVec) -> Pmf {
    let mass = sum_law_masses(p.values());
    Pmf::new(0, mass).expect("recurrence output is a distribution")
}

/// Binomial law computed by the same recurrence on a constant vector.
pub fn binom_pmf(n: usize, theta: f64) -> Result<Pmf, Error> {
    Ok(pb_pmf(&ParamVec::constant(n, theta)?))
}

/// Total variation distance: half the `l1` distance over the union of the
/// two supports. Symmetric, and zero exactly when the pmfs coincide.
pub fn tv(a: &Pmf, b: &Pmf) -> f64 {
    let lo = a.min_support().min(b.min_support());
    let hi = a.max_support().max(b.max_support());
    let mut acc = Accumulator::new();
    for k in lo..=hi {
        acc.add((a.mass_at(k) - b.mass_at(k)).abs());
    }
    0.5 * acc.total()
}
