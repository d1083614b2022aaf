//! Desk-scale ground truth: exponential enumeration of product measures,
//! parameter-interpolation identities with their analytic derivatives, and
//! the probe showing the homogenization map is not realizable by any
//! fixed transition kernel.
//!
//! Everything here is exact (up to floating point) or absent: enumeration
//! is hard-capped at `n <= 20` and never silently truncates.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::bounds::DominatingPair;
use crate::consts::tol;
use crate::error::Error;
use crate::param::{moments, ParamVec};
use crate::pmf::{binom_pmf, pb_pmf, sum_law_masses, Pmf};
use crate::quad::gauss_legendre_unit;
use crate::sum::Accumulator;

/// Hard cap on enumeration size: `2^20` outcomes stay sub-second.
pub const BRUTEFORCE_CAP: usize = 20;

fn check_cap(n: usize) -> Result<(), Error> {
    if n > BRUTEFORCE_CAP {
        return Err(Error::TooLarge {
            n,
            cap: BRUTEFORCE_CAP,
        });
    }
    Ok(())
}

/// Exact `TV(Ber(p), Ber(q))` by summing `|product mass difference|` over
/// all `2^n` binary outcomes.
pub fn product_tv_bruteforce(p: &ParamVec, q: &ParamVec) -> Result<f64, Error> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    check_cap(p.len())?;
    let n = p.len();
    let pv = p.values();
    let qv = q.values();
    let mut acc = Accumulator::new();
    for mask in 0u32..(1u32 << n) {
        let mut mp = 1.0;
        let mut mq = 1.0;
        for (i, (&pi, &qi)) in pv.iter().zip(qv).enumerate() {
            if mask >> i & 1 == 1 {
                mp *= pi;
                mq *= qi;
            } else {
                mp *= 1.0 - pi;
                mq *= 1.0 - qi;
            }
        }
        acc.add((mp - mq).abs());
    }
    Ok(0.5 * acc.total())
}

/// The sum law obtained the slow way: push every outcome's mass onto its
/// popcount. Oracle for the `O(n^2)` recurrence.
pub fn pb_pmf_bruteforce(p: &ParamVec) -> Result<Pmf, Error> {
    check_cap(p.len())?;
    let n = p.len();
    let pv = p.values();
    let mut acc: Vec<Accumulator> = alloc::vec![Accumulator::new(); n + 1];
    for mask in 0u32..(1u32 << n) {
        let mut m = 1.0;
        for (i, &pi) in pv.iter().enumerate() {
            if mask >> i & 1 == 1 {
                m *= pi;
            } else {
                m *= 1.0 - pi;
            }
        }
        acc[mask.count_ones() as usize].add(m);
    }
    Pmf::new(0, acc.iter().map(Accumulator::total).collect())
}

/// A finite event `A` on the integers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EventSet {
    members: BTreeSet<i64>,
}

impl EventSet {
    pub fn new<I: IntoIterator<Item = i64>>(members: I) -> Self {
        Self {
            members: members.into_iter().collect(),
        }
    }

    pub fn contains(&self, k: i64) -> bool {
        self.members.contains(&k)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.members.iter().copied()
    }

    /// Probability of the event under the given law.
    pub fn prob_under(&self, pmf: &Pmf) -> f64 {
        let mut acc = Accumulator::new();
        for k in self.iter() {
            acc.add(pmf.mass_at(k));
        }
        acc.total()
    }
}

/// Variance of the interpolated sum against its chord lower hull.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariancePath {
    pub variance: f64,
    pub lower_hull: f64,
}

/// The segment `r(t) = (1 - t) q + t p` between two parameter vectors:
/// `t = 0` is `q`, `t = 1` is `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpPath {
    p: ParamVec,
    q: ParamVec,
}

impl InterpPath {
    pub fn new(p: ParamVec, q: ParamVec) -> Result<Self, Error> {
        if p.len() != q.len() {
            return Err(Error::LengthMismatch {
                left: p.len(),
                right: q.len(),
            });
        }
        Ok(Self { p, q })
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Interpolated parameters at `t`, entries clamped against rounding.
    pub fn params_at(&self, t: f64) -> ParamVec {
        assert!((0.0..=1.0).contains(&t), "t = {t} outside [0, 1]");
        let values = self
            .p
            .values()
            .iter()
            .zip(self.q.values())
            .map(|(&pi, &qi)| ((1.0 - t) * qi + t * pi).clamp(0.0, 1.0))
            .collect();
        ParamVec::new(values).expect("segment stays inside [0, 1]")
    }

    /// `P(S(t) in A)` where `S(t)` is the sum at the interpolated parameters.
    pub fn event_prob(&self, t: f64, event: &EventSet) -> f64 {
        event.prob_under(&pb_pmf(&self.params_at(t)))
    }

    /// Analytic derivative of [`Self::event_prob`] in `t`:
    /// `sum_i (p_i - q_i) (P(T_i(t) + 1 in A) - P(T_i(t) in A))` with
    /// `T_i(t)` the leave-one-out sum.
    pub fn event_prob_derivative(&self, t: f64, event: &EventSet) -> f64 {
        let r = self.params_at(t);
        let n = self.len();
        let mut acc = Accumulator::new();
        for i in 0..n {
            let weight = self.p.values()[i] - self.q.values()[i];
            if weight == 0.0 {
                continue;
            }
            let rest: Vec<f64> = r
                .values()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &v)| v)
                .collect();
            let t_i = Pmf::new(0, sum_law_masses(&rest)).expect("partial sum law");
            let mut shifted = Accumulator::new();
            let mut plain = Accumulator::new();
            for k in event.iter() {
                shifted.add(t_i.mass_at(k - 1));
                plain.add(t_i.mass_at(k));
            }
            acc.add(weight * (shifted.total() - plain.total()));
        }
        acc.total()
    }

    /// Variance of `S(t)` together with the chord
    /// `(1 - t) var(S_q) + t var(S_p)`; concavity of `u(1-u)` makes the
    /// variance dominate the chord.
    pub fn variance_split(&self, t: f64) -> VariancePath {
        let variance = moments(&self.params_at(t)).variance;
        let lower_hull =
            (1.0 - t) * moments(&self.q).variance + t * moments(&self.p).variance;
        debug_assert!(variance >= lower_hull - tol::SHAPE);
        VariancePath {
            variance,
            lower_hull,
        }
    }
}

/// Reconstruct one survival-difference value `g(k)` of a dominating pair by
/// integrating `sum_i (p_i - q_i) P(T_i(t) = k - 1)` over the segment.
///
/// The integrand is a polynomial of degree below `n`, so any rule with at
/// least `ceil(n / 2) + 1` nodes evaluates the integral exactly.
pub fn g_via_interpolation(pair: &DominatingPair, k: i64, quad_points: usize) -> f64 {
    assert!(quad_points >= 1, "need at least one quadrature node");
    let path = InterpPath::new(pair.p().clone(), pair.q().clone()).expect("equal lengths");
    let n = pair.len();
    let (nodes, weights) = gauss_legendre_unit(quad_points);
    let mut acc = Accumulator::new();
    for (&t, &w) in nodes.iter().zip(&weights) {
        let r = path.params_at(t);
        let mut integrand = Accumulator::new();
        for i in 0..n {
            let delta_i = pair.p().values()[i] - pair.q().values()[i];
            if delta_i == 0.0 {
                continue;
            }
            let rest: Vec<f64> = r
                .values()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &v)| v)
                .collect();
            let t_i = Pmf::new(0, sum_law_masses(&rest)).expect("partial sum law");
            integrand.add(delta_i * t_i.mass_at(k - 1));
        }
        acc.add(w * integrand.total());
    }
    acc.total()
}

/// Values and second differences of `t -> P(Bin(n, t/n) = 2)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityProbe {
    pub values: Vec<f64>,
    pub second_differences: Vec<f64>,
}

impl AffinityProbe {
    pub fn max_abs_second_difference(&self) -> f64 {
        self.second_differences
            .iter()
            .fold(0.0, |m, &d| m.max(d.abs()))
    }

    /// At least one second difference exceeds the affinity threshold,
    /// witnessing that the map cannot be affine in `t`.
    pub fn is_non_affine(&self) -> bool {
        self.max_abs_second_difference() > tol::AFFINITY
    }
}

/// Evaluate `P(Z = 2)` for `Z ~ Bin(n, t/n)` on an equally spaced grid in
/// `[0, 1]` with at least three points, and report second differences.
///
/// If the parameter-to-law map were a fixed transition kernel, this curve
/// would be affine along the segment `(t, 0, ..., 0)`; its curvature is the
/// obstruction.
pub fn affinity_probe(n: usize, t_grid: &[f64]) -> Result<AffinityProbe, Error> {
    if n < 2 {
        return Err(Error::BadGrid("probe needs n >= 2"));
    }
    if t_grid.len() < 3 {
        return Err(Error::BadGrid("grid needs at least 3 points"));
    }
    let first = t_grid[0];
    let last = t_grid[t_grid.len() - 1];
    let step = (last - first) / (t_grid.len() - 1) as f64;
    if step <= 0.0 || step.is_nan() {
        return Err(Error::BadGrid("grid must be increasing"));
    }
    for (i, &t) in t_grid.iter().enumerate() {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::BadGrid("grid points must lie in [0, 1]"));
        }
        if (t - (first + step * i as f64)).abs() > 1e-12 {
            return Err(Error::BadGrid("grid must be equally spaced"));
        }
    }
    let values: Vec<f64> = t_grid
        .iter()
        .map(|&t| {
            let law = binom_pmf(n, t / n as f64).expect("t/n in [0, 1]");
            law.mass_at(2)
        })
        .collect();
    let second_differences = values
        .windows(3)
        .map(|w| w[2] - 2.0 * w[1] + w[0])
        .collect();
    Ok(AffinityProbe {
        values,
        second_differences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmf::tv;

    fn pv(values: &[f64]) -> ParamVec {
        ParamVec::new(values.to_vec()).unwrap()
    }

    #[test]
    fn product_tv_trivial_cases() {
        let p = pv(&[0.3, 0.8]);
        assert_eq!(product_tv_bruteforce(&p, &p).unwrap(), 0.0);
        assert_eq!(
            product_tv_bruteforce(&pv(&[1.0]), &pv(&[0.0])).unwrap(),
            1.0
        );
        let empty = ParamVec::empty();
        assert_eq!(product_tv_bruteforce(&empty, &empty).unwrap(), 0.0);
    }

    #[test]
    fn product_tv_dominates_sum_tv() {
        // Losing the coordinates can only bring the laws closer.
        let p = pv(&[0.9, 0.1]);
        let q = pv(&[0.2, 0.8]);
        let full = product_tv_bruteforce(&p, &q).unwrap();
        let summed = tv(&pb_pmf(&p), &pb_pmf(&q));
        assert!(full >= summed - 1e-12);
        let lower = crate::bounds::product_tv_lower_bound(&p, &q).unwrap();
        assert!(full >= lower - 1e-12);
    }

    #[test]
    fn enumeration_caps_hard() {
        let p = ParamVec::constant(21, 0.5).unwrap();
        assert_eq!(
            product_tv_bruteforce(&p, &p),
            Err(Error::TooLarge { n: 21, cap: 20 })
        );
        assert_eq!(
            pb_pmf_bruteforce(&p),
            Err(Error::TooLarge { n: 21, cap: 20 })
        );
    }

    #[test]
    fn bruteforce_pmf_matches_kernel() {
        let p = pv(&[0.5, 0.5]);
        let slow = pb_pmf_bruteforce(&p).unwrap();
        assert_eq!(slow.masses(), &[0.25, 0.5, 0.25]);

        // Eight-outcome enumeration against the recurrence.
        let p = pv(&[0.3, 0.7, 0.5]);
        let slow = pb_pmf_bruteforce(&p).unwrap();
        let fast = pb_pmf(&p);
        for k in 0..=3 {
            assert!((slow.mass_at(k) - fast.mass_at(k)).abs() < 1e-14);
        }

        let p = pv(&[0.3, 0.7, 0.5, 0.912, 0.04]);
        let slow = pb_pmf_bruteforce(&p).unwrap();
        let fast = pb_pmf(&p);
        for k in 0..=5 {
            assert!((slow.mass_at(k) - fast.mass_at(k)).abs() < 1e-14);
        }

        assert_eq!(
            pb_pmf_bruteforce(&ParamVec::empty()).unwrap(),
            Pmf::point_mass(0)
        );
    }

    #[test]
    fn event_prob_endpoints() {
        let path = InterpPath::new(pv(&[0.9, 0.2]), pv(&[0.1, 0.6])).unwrap();
        let a = EventSet::new([0, 2]);
        let at_q = a.prob_under(&pb_pmf(&pv(&[0.1, 0.6])));
        let at_p = a.prob_under(&pb_pmf(&pv(&[0.9, 0.2])));
        assert!((path.event_prob(0.0, &a) - at_q).abs() < 1e-15);
        assert!((path.event_prob(1.0, &a) - at_p).abs() < 1e-15);

        let full = EventSet::new(0..=2);
        for t in [0.0, 0.25, 0.5, 1.0] {
            assert!((path.event_prob(t, &full) - 1.0).abs() < 1e-12);
        }
        let nothing = EventSet::default();
        assert_eq!(path.event_prob(0.5, &nothing), 0.0);
    }

    #[test]
    fn derivative_vanishes_when_it_must() {
        let p = pv(&[0.3, 0.6, 0.9]);
        let path = InterpPath::new(p.clone(), p).unwrap();
        let a = EventSet::new([1, 2]);
        assert_eq!(path.event_prob_derivative(0.5, &a), 0.0);

        let path = InterpPath::new(pv(&[0.9, 0.2]), pv(&[0.1, 0.6])).unwrap();
        let full = EventSet::new(0..=2);
        assert!(path.event_prob_derivative(0.3, &full).abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let path = InterpPath::new(pv(&[0.8, 0.15, 0.55]), pv(&[0.2, 0.45, 0.5])).unwrap();
        let a = EventSet::new([0, 2]);
        let t = 0.37;
        let h = tol::FD_STEP;
        let fd = (path.event_prob(t + h, &a) - path.event_prob(t - h, &a)) / (2.0 * h);
        let analytic = path.event_prob_derivative(t, &a);
        assert!((analytic - fd).abs() < tol::DERIVATIVE);
    }

    #[test]
    fn variance_path_endpoints_and_midpoint() {
        let path = InterpPath::new(pv(&[1.0, 1.0]), pv(&[0.0, 0.0])).unwrap();
        let at0 = path.variance_split(0.0);
        assert_eq!(at0.variance, at0.lower_hull);
        let at1 = path.variance_split(1.0);
        assert_eq!(at1.variance, at1.lower_hull);
        let mid = path.variance_split(0.5);
        assert_eq!(mid.lower_hull, 0.0);
        assert!((mid.variance - 0.5).abs() < 1e-15);
    }

    #[test]
    fn interpolation_reconstructs_g() {
        let pair = DominatingPair::new(pv(&[1.0]), pv(&[0.0])).unwrap();
        // Integrand is identically 1 for k = 1.
        assert!((g_via_interpolation(&pair, 1, 1) - 1.0).abs() < 1e-15);

        let pair = DominatingPair::new(pv(&[0.8, 0.6, 0.9]), pv(&[0.5, 0.4, 0.9])).unwrap();
        let profile = crate::bounds::g_profile(&pair);
        let nodes = pair.len() / 2 + 1;
        for k in 1..=3 {
            let via_quad = g_via_interpolation(&pair, k, nodes);
            assert!(
                (via_quad - profile.at(k)).abs() < tol::QUADRATURE,
                "k = {k}: {via_quad} vs {}",
                profile.at(k)
            );
        }

        let p = pv(&[0.4, 0.4]);
        let pair = DominatingPair::new(p.clone(), p).unwrap();
        assert_eq!(g_via_interpolation(&pair, 1, 3), 0.0);
    }

    #[test]
    fn affinity_probe_hand_values() {
        // n = 2: P(Bin(2, t/2) = 2) = t^2 / 4.
        let probe = affinity_probe(2, &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(probe.values[0], 0.0);
        assert!((probe.values[1] - 1.0 / 16.0).abs() < 1e-15);
        assert!((probe.values[2] - 0.25).abs() < 1e-15);
        assert_eq!(probe.second_differences.len(), 1);
        assert!((probe.second_differences[0] - 0.125).abs() < 1e-15);
        assert!(probe.is_non_affine());
    }

    #[test]
    fn affinity_probe_on_uniform_grid() {
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let probe = affinity_probe(5, &grid).unwrap();
        assert!(probe.max_abs_second_difference() > tol::AFFINITY);
    }

    #[test]
    fn affinity_probe_rejects_bad_grids() {
        assert!(matches!(affinity_probe(1, &[0.0, 0.5, 1.0]), Err(Error::BadGrid(_))));
        assert!(matches!(affinity_probe(3, &[0.0, 1.0]), Err(Error::BadGrid(_))));
        assert!(matches!(
            affinity_probe(3, &[0.0, 0.4, 1.0]),
            Err(Error::BadGrid(_))
        ));
        assert!(matches!(
            affinity_probe(3, &[0.5, 0.25, 0.0]),
            Err(Error::BadGrid(_))
        ));
    }
}
