//! Two-sided analytic control of the total variation distance between
//! Bernoulli-sum laws, and the machinery behind the lower bound.
//!
//! For parameter vectors `p, q` write `delta = sum |p_i - q_i|` and
//! `sigma2_p = sum p_i (1 - p_i)`. The proxy functional is
//!
//! ```text
//! phi(p, q) = min(1, delta / sqrt(sigma2_p + 1))
//! ```
//!
//! Upper bounds hold for every pair; the `phi / 12` lower bound needs
//! coordinatewise domination `p_i >= q_i`, which a [`DominatingPair`]
//! guarantees by construction. The lower-bound proof path runs through the
//! survival-difference profile `g(k)`, its second moment `J`, and a
//! pigeonhole extraction of the heaviest atom; all intermediate quantities
//! are exposed so each link of the chain can be certified numerically.

use alloc::vec::Vec;

use crate::consts::{c_bcv, tol, TV_LOWER_COEFF};
use crate::error::Error;
use crate::param::{moments, ParamVec};
use crate::pmf::{pb_pmf, tv};
use crate::sum::Accumulator;

/// `sum |p_i - q_i|`, compensated (the terms can dwarf the total for
/// near-equal vectors).
pub fn l1_distance(p: &ParamVec, q: &ParamVec) -> Result<f64, Error> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut acc = Accumulator::new();
    for (&a, &b) in p.values().iter().zip(q.values()) {
        acc.add((a - b).abs());
    }
    Ok(acc.total())
}

/// The proxy functional `min(1, delta / sqrt(sigma2_p + 1))`.
///
/// Asymmetric: the variance in the denominator is that of the *first*
/// argument.
pub fn phi(p: &ParamVec, q: &ParamVec) -> Result<f64, Error> {
    let delta = l1_distance(p, q)?;
    let sigma2 = moments(p).variance;
    Ok((delta / libm::sqrt(sigma2 + 1.0)).min(1.0))
}

/// Upper bound `c_bcv * min(phi(p, q), phi(q, p))` on `TV(S_p, S_q)`.
pub fn tv_upper_bound(p: &ParamVec, q: &ParamVec) -> Result<f64, Error> {
    Ok(c_bcv() * phi(p, q)?.min(phi(q, p)?))
}

/// Symmetric upper bound `2 c_bcv delta / (sqrt(sigma2_p + 1) + sqrt(sigma2_q + 1))`.
pub fn tv_upper_bound_symmetric(p: &ParamVec, q: &ParamVec) -> Result<f64, Error> {
    let delta = l1_distance(p, q)?;
    let sp = libm::sqrt(moments(p).variance + 1.0);
    let sq = libm::sqrt(moments(q).variance + 1.0);
    Ok(2.0 * c_bcv() * delta / (sp + sq))
}

/// A pair with `p_i >= q_i` for every coordinate, validated exactly.
///
/// No tolerance is applied: a silently tolerant check would corrupt the
/// pointwise nonnegativity of the survival-difference profile. Callers
/// wanting tolerant domination must round their inputs first.
#[derive(Debug, Clone, PartialEq)]
pub struct DominatingPair {
    p: ParamVec,
    q: ParamVec,
}

impl DominatingPair {
    pub fn new(p: ParamVec, q: ParamVec) -> Result<Self, Error> {
        if p.len() != q.len() {
            return Err(Error::LengthMismatch {
                left: p.len(),
                right: q.len(),
            });
        }
        for (i, (&a, &b)) in p.values().iter().zip(q.values()).enumerate() {
            if a < b {
                return Err(Error::NotDominating { index: i });
            }
        }
        Ok(Self { p, q })
    }

    #[inline]
    pub fn p(&self) -> &ParamVec {
        &self.p
    }

    #[inline]
    pub fn q(&self) -> &ParamVec {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `delta = sum (p_i - q_i)`; no absolute values needed under domination.
    pub fn delta(&self) -> f64 {
        let mut acc = Accumulator::new();
        for (&a, &b) in self.p.values().iter().zip(self.q.values()) {
            acc.add(a - b);
        }
        acc.total()
    }
}

/// Survival-difference profile of a dominating pair.
///
/// `g(k) = P(S_p >= k) - P(S_q >= k)` for `k` in `{1, ..., n}` (zero
/// outside), together with its total mass `g_total` (which equals `delta`),
/// the second moment `j` about `mean_p`, and `mean_p` itself.
#[derive(Debug, Clone, PartialEq)]
pub struct GProfile {
    offset: i64,
    g: Vec<f64>,
    pub g_total: f64,
    pub j: f64,
    pub mean_p: f64,
}

impl GProfile {
    #[inline]
    pub fn offset(&self) -> i64 {
        self.offset
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.g
    }

    /// `g(k)` with zero outside the stored window.
    pub fn at(&self, k: i64) -> f64 {
        if k < self.offset || k >= self.offset + self.g.len() as i64 {
            0.0
        } else {
            self.g[(k - self.offset) as usize]
        }
    }

    pub fn max_g(&self) -> f64 {
        self.g.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_g(&self) -> f64 {
        self.g.iter().copied().fold(f64::INFINITY, f64::min).min(0.0)
    }
}

/// Build the survival-difference profile from the exact sum laws.
pub fn g_profile(pair: &DominatingPair) -> GProfile {
    let n = pair.len();
    let mean_p = moments(pair.p()).mean;
    let pmf_p = pb_pmf(pair.p());
    let pmf_q = pb_pmf(pair.q());

    // Suffix sums give all survivals in one O(n) pass per law.
    let mut g = Vec::with_capacity(n);
    let mut total = Accumulator::new();
    let mut j = Accumulator::new();
    let mut surv_p = Accumulator::new();
    let mut surv_q = Accumulator::new();
    let mut survivals = alloc::vec![0.0f64; n + 1];
    for k in (1..=n as i64).rev() {
        surv_p.add(pmf_p.mass_at(k));
        surv_q.add(pmf_q.mass_at(k));
        survivals[k as usize] = surv_p.total() - surv_q.total();
    }
    for (k, &gk) in survivals.iter().enumerate().skip(1) {
        g.push(gk);
        total.add(gk);
        let d = k as f64 - mean_p;
        j.add(d * d * gk);
    }
    GProfile {
        offset: 1,
        g,
        g_total: total.total(),
        j: j.total(),
        mean_p,
    }
}

/// Second-moment budget `2 delta (sigma2_p + 1 + delta^2)`, an upper bound
/// on the profile's `J`.
pub fn j_upper_bound(pair: &DominatingPair) -> f64 {
    let delta = pair.delta();
    let sigma2 = moments(pair.p()).variance;
    2.0 * delta * (sigma2 + 1.0 + delta * delta)
}

/// Peak lower bound for a nonnegative measure on the integers with total
/// mass `g_total > 0` and second moment `j` about any center:
/// `3 g_total^(3/2) / (16 sqrt(j) + 4 sqrt(g_total))`.
pub fn pigeonhole_lower_bound(g_total: f64, j: f64) -> Result<f64, Error> {
    if g_total <= 0.0 || g_total.is_nan() {
        return Err(Error::NonPositiveMass { total: g_total });
    }
    debug_assert!(j >= 0.0 && j.is_finite());
    let num = 3.0 * g_total * libm::sqrt(g_total);
    Ok(num / (16.0 * libm::sqrt(j) + 4.0 * libm::sqrt(g_total)))
}

/// Lower bound `phi(p, q) / 12` on `TV(S_p, S_q)` for dominating pairs.
pub fn tv_lower_bound_dominating(pair: &DominatingPair) -> f64 {
    phi(pair.p(), pair.q()).expect("equal lengths by construction") * TV_LOWER_COEFF
}

/// Margin of the smooth envelope over the clipped peak bound at `x >= 0`:
///
/// ```text
/// c_bcv / sqrt(x + 1)  -  min(1, eta_bcv / sqrt((x - 1/4)+))
/// ```
///
/// Nonnegative for every `x >= 0`; zero only at the crossover
/// `x = 1/4 + eta_bcv^2`. (`eta / 0` overflows to infinity, which the
/// `min` absorbs.)
pub fn envelope_margin(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    let clipped = (x - 0.25).max(0.0);
    let peak = (crate::consts::ETA_BCV / libm::sqrt(clipped)).min(1.0);
    c_bcv() / libm::sqrt(x + 1.0) - peak
}

/// Lower bound on the *product-measure* distance `TV(Ber(p), Ber(q))` for
/// arbitrary pairs: split indices into the block where `p` dominates and
/// its complement, and take `max(phi_block, phi_swapped_block) / 12`.
///
/// An empty block contributes 0 rather than erroring.
pub fn product_tv_lower_bound(p: &ParamVec, q: &ParamVec) -> Result<f64, Error> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut dom = Vec::new();
    let mut rev = Vec::new();
    for (i, (&a, &b)) in p.values().iter().zip(q.values()).enumerate() {
        if a >= b {
            dom.push(i);
        } else {
            rev.push(i);
        }
    }
    let phi_dom = if dom.is_empty() {
        0.0
    } else {
        phi(&p.subset(&dom), &q.subset(&dom))?
    };
    let phi_rev = if rev.is_empty() {
        0.0
    } else {
        // q dominates p on this block, so the roles swap.
        phi(&q.subset(&rev), &p.subset(&rev))?
    };
    Ok(TV_LOWER_COEFF * phi_dom.max(phi_rev))
}

/// Pass/fail flags of a [`BoundReport`]; lower-bound entries are present
/// only for dominating pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundFlags {
    pub upper_thm1: bool,
    pub upper_symmetric: bool,
    pub lower_thm2: Option<bool>,
    pub g_nonneg: Option<bool>,
    pub g_sum_matches_delta: Option<bool>,
    pub j_bounded: Option<bool>,
    pub pigeonhole: Option<bool>,
    pub max_g_le_tv: Option<bool>,
}

impl BoundFlags {
    pub fn all_pass(&self) -> bool {
        self.upper_thm1
            && self.upper_symmetric
            && self.lower_thm2.unwrap_or(true)
            && self.g_nonneg.unwrap_or(true)
            && self.g_sum_matches_delta.unwrap_or(true)
            && self.j_bounded.unwrap_or(true)
            && self.pigeonhole.unwrap_or(true)
            && self.max_g_le_tv.unwrap_or(true)
    }
}

/// Everything computed for one pair: the exact distance, both upper bounds,
/// and (for dominating pairs) the whole lower-bound chain with raw slacks.
///
/// Slacks are signed margins, positive when the inequality holds:
/// `slack_upper_* = bound - tv`, `slack_lower = tv - bound`,
/// `slack_j = budget - j`, `slack_pigeonhole = max_g - bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub tv_pb: f64,
    pub delta: f64,
    pub sigma2_p: f64,
    pub sigma2_q: f64,
    pub phi_pq: f64,
    pub phi_qp: f64,
    pub upper_thm1: f64,
    pub upper_symmetric: f64,
    pub slack_upper_thm1: f64,
    pub slack_upper_symmetric: f64,
    pub dominating: bool,
    pub lower_thm2: Option<f64>,
    pub slack_lower_thm2: Option<f64>,
    pub g_min: Option<f64>,
    pub g_sum: Option<f64>,
    pub max_g: Option<f64>,
    pub j_value: Option<f64>,
    pub j_bound: Option<f64>,
    pub slack_j: Option<f64>,
    /// Absent when `delta = 0` (the peak bound needs positive mass).
    pub pigeonhole_lower: Option<f64>,
    pub slack_pigeonhole: Option<f64>,
    pub flags: BoundFlags,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.flags.all_pass()
    }

    /// Smallest certified margin in the report.
    pub fn min_slack(&self) -> f64 {
        let mut s = self.slack_upper_thm1.min(self.slack_upper_symmetric);
        for v in [self.slack_lower_thm2, self.slack_j, self.slack_pigeonhole]
            .into_iter()
            .flatten()
        {
            s = s.min(v);
        }
        s
    }
}

/// Compute the exact distance and certify every applicable bound for one
/// pair. Lower-bound fields are populated only when `p` dominates `q`.
pub fn certify_pair(p: &ParamVec, q: &ParamVec) -> Result<BoundReport, Error> {
    let delta = l1_distance(p, q)?;
    let mom_p = moments(p);
    let mom_q = moments(q);
    let tv_pb = tv(&pb_pmf(p), &pb_pmf(q));
    let phi_pq = phi(p, q)?;
    let phi_qp = phi(q, p)?;
    let upper_thm1 = c_bcv() * phi_pq.min(phi_qp);
    let upper_symmetric = tv_upper_bound_symmetric(p, q)?;

    let mut report = BoundReport {
        n: p.len(),
        tv_pb,
        delta,
        sigma2_p: mom_p.variance,
        sigma2_q: mom_q.variance,
        phi_pq,
        phi_qp,
        upper_thm1,
        upper_symmetric,
        slack_upper_thm1: upper_thm1 - tv_pb,
        slack_upper_symmetric: upper_symmetric - tv_pb,
        dominating: false,
        lower_thm2: None,
        slack_lower_thm2: None,
        g_min: None,
        g_sum: None,
        max_g: None,
        j_value: None,
        j_bound: None,
        slack_j: None,
        pigeonhole_lower: None,
        slack_pigeonhole: None,
        flags: BoundFlags {
            upper_thm1: upper_thm1 - tv_pb >= -tol::SLACK,
            upper_symmetric: upper_symmetric - tv_pb >= -tol::SLACK,
            lower_thm2: None,
            g_nonneg: None,
            g_sum_matches_delta: None,
            j_bounded: None,
            pigeonhole: None,
            max_g_le_tv: None,
        },
    };

    let Ok(pair) = DominatingPair::new(p.clone(), q.clone()) else {
        return Ok(report);
    };

    let profile = g_profile(&pair);
    let lower = tv_lower_bound_dominating(&pair);
    let j_budget = j_upper_bound(&pair);
    let max_g = profile.max_g();
    let min_g = profile.min_g();

    report.dominating = true;
    report.lower_thm2 = Some(lower);
    report.slack_lower_thm2 = Some(tv_pb - lower);
    report.g_min = Some(min_g);
    report.g_sum = Some(profile.g_total);
    report.max_g = Some(max_g);
    report.j_value = Some(profile.j);
    report.j_bound = Some(j_budget);
    report.slack_j = Some(j_budget - profile.j);
    report.flags.lower_thm2 = Some(tv_pb - lower >= -tol::SLACK);
    report.flags.g_nonneg = Some(min_g >= -tol::G_NONNEG);
    report.flags.g_sum_matches_delta = Some((profile.g_total - delta).abs() <= tol::SLACK);
    report.flags.j_bounded = Some(j_budget - profile.j >= -tol::SLACK);
    report.flags.max_g_le_tv = Some(max_g <= tv_pb + tol::ORACLE);

    if delta > 0.0 {
        let ph = pigeonhole_lower_bound(delta, profile.j)?;
        report.pigeonhole_lower = Some(ph);
        report.slack_pigeonhole = Some(max_g - ph);
        report.flags.pigeonhole = Some(max_g - ph >= -tol::SLACK);
    }

    Ok(report)
}
