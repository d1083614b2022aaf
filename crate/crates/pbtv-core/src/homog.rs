//! Homogenization: replacing every parameter by the vector mean, exact
//! binomial distances, the two-block split inequality, and the end-to-end
//! certificate that the product-measure distance controls the homogenized
//! (binomial) distance up to the universal constant.

use alloc::vec::Vec;

use crate::bounds::product_tv_lower_bound;
use crate::consts::{homog_coeff, tol};
use crate::error::Error;
use crate::oracle::product_tv_bruteforce;
use crate::param::ParamVec;
use crate::pmf::{binom_pmf, convolve_bernoulli, tv, Pmf};
use crate::sum::Accumulator;

/// A two-block partition of `{0, ..., n-1}`, validated to be disjoint and
/// exhaustive. Blocks may be empty at this level; operations that need
/// nonempty blocks check separately.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    n: usize,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Partition {
    /// Build from the left block; the right block is its complement.
    pub fn new(n: usize, left: &[usize]) -> Result<Self, Error> {
        let mut seen = alloc::vec![false; n];
        for &i in left {
            if i >= n || seen[i] {
                return Err(Error::InvalidPartition { index: i });
            }
            seen[i] = true;
        }
        let mut left: Vec<usize> = left.to_vec();
        left.sort_unstable();
        let right = (0..n).filter(|&i| !seen[i]).collect();
        Ok(Self { n, left, right })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn left(&self) -> &[usize] {
        &self.left
    }

    #[inline]
    pub fn right(&self) -> &[usize] {
        &self.right
    }
}

/// Replace every entry by the mean: returns `(mean, constant vector)`.
pub fn homogenize(p: &ParamVec) -> Result<(f64, ParamVec), Error> {
    let mean = p.mean()?;
    Ok((mean, ParamVec::constant(p.len(), mean).expect("mean in [0,1]")))
}

/// Exact `TV(Bin(n, a), Bin(n, b))` via the sum-law kernel. `n = 0` gives 0.
pub fn binom_tv(n: usize, a: f64, b: f64) -> Result<f64, Error> {
    Ok(tv(&binom_pmf(n, a)?, &binom_pmf(n, b)?))
}

/// Outcome of checking the two-block split inequality on one triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCheck {
    /// `TV` between the homogenized laws on all of `{0..n-1}`.
    pub delta_full: f64,
    /// Same for the left and right blocks alone.
    pub delta_left: f64,
    pub delta_right: f64,
    /// `delta_full <= 2 (delta_left + delta_right)` at slack `1e-9`.
    pub holds_factor2: bool,
    /// `delta_left + delta_right - delta_left * delta_right - delta_full`.
    /// Recorded, never asserted: its nonnegativity is an open question.
    pub conjecture_slack: f64,
}

/// Homogenize each block and the whole vector, and compare the binomial
/// distances. Both blocks must be nonempty.
pub fn split_bound_check(
    p: &ParamVec,
    q: &ParamVec,
    part: &Partition,
) -> Result<SplitCheck, Error> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    if p.len() != part.n() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: part.n(),
        });
    }
    if part.left().is_empty() || part.right().is_empty() {
        return Err(Error::EmptyPart);
    }
    let block_tv = |idx: &[usize]| -> Result<f64, Error> {
        binom_tv(
            idx.len(),
            p.subset(idx).mean()?,
            q.subset(idx).mean()?,
        )
    };
    let delta_full = binom_tv(p.len(), p.mean()?, q.mean()?)?;
    let delta_left = block_tv(part.left())?;
    let delta_right = block_tv(part.right())?;
    Ok(SplitCheck {
        delta_full,
        delta_left,
        delta_right,
        holds_factor2: delta_full <= 2.0 * (delta_left + delta_right) + tol::SLACK,
        conjecture_slack: delta_left + delta_right - delta_left * delta_right - delta_full,
    })
}

/// Law of the two-block mixture: draw `M ~ Bin(n, size_left / n)`, then add
/// independent `Bin(M, p_left)` and `Bin(n - M, p_right)` counts.
///
/// Built by explicit convolution and mixing, *not* by the closed form, so
/// that testing it against `Bin(n, pooled mean)` is a genuine check.
pub fn mixture_law(n: usize, size_left: usize, p_left: f64, p_right: f64) -> Result<Pmf, Error> {
    if size_left == 0 || size_left >= n {
        return Err(Error::BadSplit { n, size_left });
    }
    for theta in [p_left, p_right] {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidParameter { value: theta });
        }
    }
    // The split weight is the exact ratio of counts.
    let w = size_left as f64 / n as f64;
    let weights = binom_pmf(n, w)?;

    // All binomial rows Bin(m, .) for m = 0..n, grown one trial at a time.
    let grow_rows = |theta: f64| -> Vec<Vec<f64>> {
        let mut rows = Vec::with_capacity(n + 1);
        let mut row = alloc::vec![1.0];
        rows.push(row.clone());
        for _ in 0..n {
            convolve_bernoulli(&mut row, theta);
            rows.push(row.clone());
        }
        rows
    };
    let left_rows = grow_rows(p_left);
    let right_rows = grow_rows(p_right);

    let mut mix: Vec<Accumulator> = alloc::vec![Accumulator::new(); n + 1];
    for m in 0..=n {
        let wm = weights.mass_at(m as i64);
        if wm == 0.0 {
            continue;
        }
        let u = &left_rows[m];
        let v = &right_rows[n - m];
        for (a, &ua) in u.iter().enumerate() {
            for (b, &vb) in v.iter().enumerate() {
                mix[a + b].add(wm * ua * vb);
            }
        }
    }
    Pmf::new(0, mix.iter().map(Accumulator::total).collect())
}

/// Delete one uniformly random trial: maps a law on `{0, ..., m+1}` to one
/// on `{0, ..., m}` by
///
/// ```text
/// out(k) = x(k) * (m + 1 - k) / (m + 1) + x(k + 1) * (k + 1) / (m + 1)
/// ```
///
/// The kernel does not depend on any success probability, and it carries
/// `Bin(m+1, theta)` to `Bin(m, theta)` for every `theta`.
pub fn delete_trial_kernel(x: &Pmf, m: usize) -> Result<Pmf, Error> {
    let cap = m as i64 + 1;
    if x.min_support() < 0 || x.max_support() > cap {
        return Err(Error::SupportTooLarge {
            min: x.min_support(),
            max: x.max_support(),
            cap,
        });
    }
    let denom = (m + 1) as f64;
    let mass = (0..=m as i64)
        .map(|k| {
            x.mass_at(k) * ((m as i64 + 1 - k) as f64 / denom)
                + x.mass_at(k + 1) * ((k + 1) as f64 / denom)
        })
        .collect();
    Pmf::new(0, mass)
}

/// The family `f(m) = TV(Bin(m, theta), Bin(m, theta2))` for `m = 0..=m_max`,
/// sharing one pair of incrementally grown mass tables.
pub fn binom_tv_family(theta: f64, theta2: f64, m_max: usize) -> Result<Vec<f64>, Error> {
    for t in [theta, theta2] {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter { value: t });
        }
    }
    let mut a = alloc::vec![1.0];
    let mut b = alloc::vec![1.0];
    let mut family = Vec::with_capacity(m_max + 1);
    family.push(0.0);
    for _ in 0..m_max {
        convolve_bernoulli(&mut a, theta);
        convolve_bernoulli(&mut b, theta2);
        let mut acc = Accumulator::new();
        for (&x, &y) in a.iter().zip(&b) {
            acc.add((x - y).abs());
        }
        family.push(0.5 * acc.total());
    }
    Ok(family)
}

/// Which evidence was used for the product-measure side of the certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBoundPath {
    /// Exact enumeration of all `2^n` outcomes.
    BruteForce,
    /// The partitioned `phi / 12` analytic lower bound.
    PartitionedPhi,
}

/// End-to-end homogenization certificate for one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogReport {
    pub n: usize,
    pub p_bar: f64,
    pub q_bar: f64,
    /// Lower bound (exact value when brute-forced) on `TV(Ber(p), Ber(q))`.
    pub tv_product_lb: f64,
    pub lb_path: LowerBoundPath,
    /// Exact `TV(Bin(n, p_bar), Bin(n, q_bar))`.
    pub tv_binom: f64,
    /// `tv_product_lb / tv_binom`, absent when the binomial distance is 0.
    pub ratio: Option<f64>,
    /// `tv_product_lb - homog_coeff() * tv_binom`.
    pub slack: f64,
    /// The slack is at least `-1e-9`.
    pub constant_check: bool,
}

/// Certify `TV(Ber(p), Ber(q)) >= homog_coeff() * TV(Bin(n, p_bar), Bin(n, q_bar))`.
///
/// With `use_bruteforce` the product side is evaluated exactly (capped at
/// `n <= 20`); otherwise the analytic partitioned lower bound stands in,
/// which certifies the same constant by the same chain of inequalities.
pub fn homog_certificate(
    p: &ParamVec,
    q: &ParamVec,
    use_bruteforce: bool,
) -> Result<HomogReport, Error> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let (p_bar, _) = homogenize(p)?;
    let (q_bar, _) = homogenize(q)?;
    let tv_binom = binom_tv(p.len(), p_bar, q_bar)?;
    let (tv_product_lb, lb_path) = if use_bruteforce {
        (product_tv_bruteforce(p, q)?, LowerBoundPath::BruteForce)
    } else {
        (product_tv_lower_bound(p, q)?, LowerBoundPath::PartitionedPhi)
    };
    let slack = tv_product_lb - homog_coeff() * tv_binom;
    Ok(HomogReport {
        n: p.len(),
        p_bar,
        q_bar,
        tv_product_lb,
        lb_path,
        tv_binom,
        ratio: (tv_binom > 0.0).then(|| tv_product_lb / tv_binom),
        slack,
        constant_check: slack >= -tol::SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(values: &[f64]) -> ParamVec {
        ParamVec::new(values.to_vec()).unwrap()
    }

    #[test]
    fn homogenize_examples() {
        let (mean, hom) = homogenize(&pv(&[0.2, 0.8])).unwrap();
        assert_eq!(mean, 0.5);
        assert_eq!(hom.values(), &[0.5, 0.5]);

        let c = pv(&[0.3, 0.3, 0.3]);
        let (mean, hom) = homogenize(&c).unwrap();
        assert!((mean - 0.3).abs() < 1e-16);
        assert_eq!(hom.len(), 3);

        let (mean, hom) = homogenize(&pv(&[1.0, 0.0, 0.5])).unwrap();
        assert_eq!(mean, 0.5);
        assert_eq!(hom.values(), &[0.5, 0.5, 0.5]);

        assert_eq!(homogenize(&ParamVec::empty()), Err(Error::EmptyVector));
    }

    #[test]
    fn binom_tv_examples() {
        assert_eq!(binom_tv(5, 0.37, 0.37).unwrap(), 0.0);
        assert_eq!(binom_tv(1, 0.0, 1.0).unwrap(), 1.0);
        assert!((binom_tv(2, 0.5, 0.6).unwrap() - 0.11).abs() < 1e-15);
        assert_eq!(binom_tv(0, 0.2, 0.9).unwrap(), 0.0);
    }

    #[test]
    fn split_check_examples() {
        let p = pv(&[0.4, 0.6, 0.1]);
        let part = Partition::new(3, &[0, 2]).unwrap();
        let check = split_bound_check(&p, &p, &part).unwrap();
        assert_eq!(check.delta_full, 0.0);
        assert!(check.holds_factor2);
        assert_eq!(check.conjecture_slack, 0.0);

        let p = pv(&[1.0, 0.0]);
        let q = pv(&[0.0, 0.0]);
        let part = Partition::new(2, &[0]).unwrap();
        let check = split_bound_check(&p, &q, &part).unwrap();
        assert_eq!(check.delta_left, 1.0); // TV(Ber(1), Ber(0))
        assert_eq!(check.delta_right, 0.0);
        let expect = binom_tv(2, 0.5, 0.0).unwrap();
        assert!((check.delta_full - expect).abs() < 1e-15);
        assert!(check.holds_factor2);
    }

    #[test]
    fn split_check_rejects_empty_blocks() {
        let p = pv(&[0.5, 0.5]);
        let part = Partition::new(2, &[]).unwrap();
        assert_eq!(split_bound_check(&p, &p, &part), Err(Error::EmptyPart));
        let part = Partition::new(2, &[0, 1]).unwrap();
        assert_eq!(split_bound_check(&p, &p, &part), Err(Error::EmptyPart));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(3, &[1, 0]).is_ok());
        assert_eq!(
            Partition::new(3, &[3]),
            Err(Error::InvalidPartition { index: 3 })
        );
        assert_eq!(
            Partition::new(3, &[1, 1]),
            Err(Error::InvalidPartition { index: 1 })
        );
        let part = Partition::new(4, &[2, 0]).unwrap();
        assert_eq!(part.left(), &[0, 2]);
        assert_eq!(part.right(), &[1, 3]);
    }

    #[test]
    fn mixture_three_term_hand_check() {
        // n = 2, split 1|1, parameters 0.2 and 0.8 pool to 0.5:
        // 1/4 Bin(2,.8) + 1/2 [Ber(.2)+Ber(.8)] + 1/4 Bin(2,.2) = Bin(2,.5).
        let law = mixture_law(2, 1, 0.2, 0.8).unwrap();
        let expect = binom_pmf(2, 0.5).unwrap();
        for k in 0..=2 {
            assert!((law.mass_at(k) - expect.mass_at(k)).abs() < 1e-15);
        }
    }

    #[test]
    fn mixture_degenerate_cases() {
        // Identical block parameters mix to the plain binomial.
        let law = mixture_law(5, 2, 0.3, 0.3).unwrap();
        let expect = binom_pmf(5, 0.3).unwrap();
        for k in 0..=5 {
            assert!((law.mass_at(k) - expect.mass_at(k)).abs() < 1e-14);
        }

        // Degenerate blocks concentrate at 0 (total mass picks up only
        // the rounding noise of the mixing weights).
        let law = mixture_law(6, 2, 0.0, 0.0).unwrap();
        assert_eq!(law.max_support(), 0);
        assert!((law.mass_at(0) - 1.0).abs() < 1e-12);

        assert_eq!(
            mixture_law(4, 0, 0.5, 0.5),
            Err(Error::BadSplit { n: 4, size_left: 0 })
        );
        assert_eq!(
            mixture_law(4, 4, 0.5, 0.5),
            Err(Error::BadSplit { n: 4, size_left: 4 })
        );
    }

    #[test]
    fn deletion_kernel_examples() {
        let out = delete_trial_kernel(&binom_pmf(2, 0.5).unwrap(), 1).unwrap();
        assert_eq!(out.masses(), &[0.5, 0.5]);

        let out = delete_trial_kernel(&Pmf::point_mass(0), 3).unwrap();
        assert_eq!(out, Pmf::point_mass(0));

        let out = delete_trial_kernel(&binom_pmf(4, 0.3).unwrap(), 3).unwrap();
        let expect = binom_pmf(3, 0.3).unwrap();
        for k in 0..=3 {
            assert!((out.mass_at(k) - expect.mass_at(k)).abs() < 1e-14);
        }

        let too_wide = binom_pmf(5, 0.5).unwrap();
        assert!(matches!(
            delete_trial_kernel(&too_wide, 3),
            Err(Error::SupportTooLarge { .. })
        ));
    }

    #[test]
    fn family_examples() {
        let f = binom_tv_family(0.42, 0.42, 6).unwrap();
        assert!(f.iter().all(|&x| x == 0.0));

        let f = binom_tv_family(0.0, 1.0, 3).unwrap();
        assert_eq!(f, alloc::vec![0.0, 1.0, 1.0, 1.0]);

        // Spot-check against the standalone distance.
        let f = binom_tv_family(0.5, 0.6, 8).unwrap();
        for (m, &fm) in f.iter().enumerate() {
            let direct = binom_tv(m, 0.5, 0.6).unwrap();
            assert!((fm - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn certificate_identity_at_n_one() {
        let p = pv(&[0.8]);
        let q = pv(&[0.3]);
        let report = homog_certificate(&p, &q, true).unwrap();
        assert!((report.tv_product_lb - 0.5).abs() < 1e-15);
        assert!((report.tv_binom - 0.5).abs() < 1e-15);
        assert!((report.ratio.unwrap() - 1.0).abs() < 1e-12);
        assert!(report.constant_check);
        assert_eq!(report.lb_path, LowerBoundPath::BruteForce);
    }

    #[test]
    fn certificate_equal_pair() {
        let p = pv(&[0.2, 0.7, 0.5]);
        let report = homog_certificate(&p, &p, true).unwrap();
        assert_eq!(report.tv_binom, 0.0);
        assert_eq!(report.tv_product_lb, 0.0);
        assert_eq!(report.ratio, None);
        assert!(report.constant_check);
    }

    #[test]
    fn certificate_rejects_oversized_bruteforce() {
        let p = ParamVec::constant(21, 0.5).unwrap();
        assert!(matches!(
            homog_certificate(&p, &p, true),
            Err(Error::TooLarge { n: 21, .. })
        ));
        // The analytic path has no size cap.
        assert!(homog_certificate(&p, &p, false).is_ok());
    }

    #[test]
    fn tightness_family_ratio_near_eight_ninths() {
        // p = (1 - 2e, 1/2), q = (1, 1/2 + e): homogenization can slightly
        // increase the distance, and the ratio tends to 8/9 as e -> 0.
        let eps = 0.01;
        let p = pv(&[1.0 - 2.0 * eps, 0.5]);
        let q = pv(&[1.0, 0.5 + eps]);
        let report = homog_certificate(&p, &q, true).unwrap();
        let ratio = report.ratio.unwrap();
        assert!(ratio < 1.0, "homogenization increased TV: ratio {ratio}");
        assert!((ratio - 8.0 / 9.0).abs() < 0.01, "ratio {ratio}");
        assert!(report.constant_check);
    }
}
