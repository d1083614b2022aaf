//! Extremal-instance search: random multi-start followed by
//! coordinatewise golden-section refinement.
//!
//! The objectives involve `min(1, .)` kinks and absolute values of exact
//! distances, so gradient methods are ill-posed; derivative-free
//! one-dimensional descent on one coordinate at a time is the refinement
//! step. Everything is keyed by the config seed, so a search is exactly
//! reproducible.

use pbtv_core::homog::{binom_tv, split_bound_check, Partition};
use pbtv_core::oracle::product_tv_bruteforce;
use pbtv_core::{pb_pmf, phi, tv, ParamVec};

use crate::error::HarnessError;
use crate::gen::{aux_rng, instance, GenConfig, Mode};
use crate::report::SearchRecord;
use crate::suite::random_partition_of;

/// What the search minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchKind {
    /// `TV(Ber(p), Ber(q)) / TV(Bin(n, p_bar), Bin(n, q_bar))`, evaluated
    /// by brute force (`n <= 20`). The infimum is conjectured to be 8/9.
    HomogRatio,
    /// `TV(S_p, S_q) / phi(p, q)` over dominating pairs; certified to stay
    /// at or above 1/12.
    TvOverPhi,
    /// `delta_left + delta_right - delta_left * delta_right - delta_full`
    /// over (pair, partition) triples; its nonnegativity is an open
    /// conjecture, so the minimum is reported, never asserted.
    SplitConjectureSlack,
}

impl SearchKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchKind::HomogRatio => "homog-ratio",
            SearchKind::TvOverPhi => "tv-over-phi",
            SearchKind::SplitConjectureSlack => "split-conjecture-slack",
        }
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        match text {
            "homog-ratio" => Ok(SearchKind::HomogRatio),
            "tv-over-phi" => Ok(SearchKind::TvOverPhi),
            "split-conjecture-slack" => Ok(SearchKind::SplitConjectureSlack),
            other => Err(HarnessError::UnknownSearchKind(other.to_string())),
        }
    }
}

/// Ratio denominators below this are treated as degenerate (objective
/// infinite): the ratio of two exact distances this small is dominated by
/// rounding, not structure.
const DENOM_FLOOR: f64 = 1e-9;

#[derive(Clone)]
struct Candidate {
    p: Vec<f64>,
    q: Vec<f64>,
    partition: Option<Vec<usize>>,
}

fn objective(kind: SearchKind, cand: &Candidate) -> f64 {
    let p = ParamVec::new(cand.p.clone()).expect("search stays in [0, 1]");
    let q = ParamVec::new(cand.q.clone()).expect("search stays in [0, 1]");
    let value = match kind {
        SearchKind::HomogRatio => {
            let p_bar = match p.mean() {
                Ok(m) => m,
                Err(_) => return f64::INFINITY,
            };
            let q_bar = q.mean().expect("same length");
            let denom = binom_tv(p.len(), p_bar, q_bar).expect("probabilities");
            if denom < DENOM_FLOOR {
                return f64::INFINITY;
            }
            product_tv_bruteforce(&p, &q).expect("n capped") / denom
        }
        SearchKind::TvOverPhi => {
            let denom = phi(&p, &q).expect("same length");
            if denom < DENOM_FLOOR {
                return f64::INFINITY;
            }
            tv(&pb_pmf(&p), &pb_pmf(&q)) / denom
        }
        SearchKind::SplitConjectureSlack => {
            let left = cand.partition.as_ref().expect("split search has one");
            let part = Partition::new(p.len(), left).expect("indices in range");
            split_bound_check(&p, &q, &part)
                .expect("blocks nonempty")
                .conjecture_slack
        }
    };
    if value.is_finite() {
        value
    } else {
        f64::INFINITY
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const GOLDEN_ITERS: usize = 40;

/// Golden-section minimization of `f` on `[a, b]`.
fn golden_min(mut a: f64, mut b: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..GOLDEN_ITERS {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// One sweep of coordinatewise golden-section descent. Domination-bound
/// kinds clamp each coordinate's interval so feasibility never breaks.
fn refine_round(kind: SearchKind, cand: &mut Candidate, mut best: f64) -> f64 {
    let n = cand.p.len();
    for side in 0..2 {
        for i in 0..n {
            let (lo, hi) = match (kind, side) {
                (SearchKind::TvOverPhi, 0) => (cand.q[i], 1.0),
                (SearchKind::TvOverPhi, 1) => (0.0, cand.p[i]),
                _ => (0.0, 1.0),
            };
            if hi - lo < 1e-12 {
                continue;
            }
            let trial = |x: f64| {
                let mut c = cand.clone();
                if side == 0 {
                    c.p[i] = x;
                } else {
                    c.q[i] = x;
                }
                objective(kind, &c)
            };
            let (x, fx) = golden_min(lo, hi, trial);
            if fx < best {
                best = fx;
                if side == 0 {
                    cand.p[i] = x;
                } else {
                    cand.q[i] = x;
                }
            }
        }
    }
    best
}

fn start_candidate(kind: SearchKind, cfg: &GenConfig, index: u64) -> Candidate {
    let (p, q) = instance(cfg, index);
    let partition = match kind {
        SearchKind::SplitConjectureSlack => {
            Some(random_partition_of(&mut aux_rng(cfg, index), p.len()))
        }
        _ => None,
    };
    Candidate {
        p: p.values().to_vec(),
        q: q.values().to_vec(),
        partition,
    }
}

/// Multi-start minimization of the chosen objective. `cfg.count` is the
/// number of starts drawn from the configured instance stream;
/// `refine_steps` is the number of coordinate-descent rounds per start.
///
/// Deterministic given the seed. Returns the extremal record.
pub fn search_min_ratio(
    kind: SearchKind,
    cfg: &GenConfig,
    refine_steps: usize,
) -> Result<SearchRecord, HarnessError> {
    let mut eff = cfg.clone();
    match kind {
        SearchKind::HomogRatio => {
            if eff.n.max() > pbtv_core::oracle::BRUTEFORCE_CAP {
                return Err(HarnessError::BadConfig(format!(
                    "homog-ratio enumerates 2^n outcomes and needs n <= {}, got {}",
                    pbtv_core::oracle::BRUTEFORCE_CAP,
                    eff.n
                )));
            }
            eff.n = eff.n.raised_to(1);
        }
        SearchKind::TvOverPhi => {
            // Refinement bounds assume domination, so the stream must too.
            if !matches!(eff.mode, Mode::Dominating) {
                eff.mode = Mode::Dominating;
            }
        }
        SearchKind::SplitConjectureSlack => {
            eff.n = eff.n.raised_to(2);
        }
    }
    eff.validate()?;
    if eff.count == 0 {
        return Err(HarnessError::BadConfig(
            "search needs at least one start".to_string(),
        ));
    }

    let mut best: Option<(f64, u64, Candidate)> = None;
    for k in 0..eff.count as u64 {
        let mut cand = start_candidate(kind, &eff, k);
        let mut value = objective(kind, &cand);
        for _ in 0..refine_steps {
            let improved = refine_round(kind, &mut cand, value);
            if improved >= value {
                break; // local minimum along all coordinates
            }
            value = improved;
        }
        if best.as_ref().is_none_or(|(b, _, _)| value < *b) {
            best = Some((value, k, cand));
        }
    }

    let (value, start, cand) = best.expect("at least one start");
    if !value.is_finite() {
        return Err(HarnessError::BadConfig(
            "no start produced a finite objective; add starts or change the mode".to_string(),
        ));
    }
    let p = ParamVec::new(cand.p).expect("validated");
    let q = ParamVec::new(cand.q).expect("validated");
    let mut record =
        SearchRecord::new(kind.as_str(), value, eff.seed, start).with_pair(&p, &q);
    record.partition = cand.partition;
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{CountSpec, Family};

    #[test]
    fn kinds_round_trip() {
        for kind in [
            SearchKind::HomogRatio,
            SearchKind::TvOverPhi,
            SearchKind::SplitConjectureSlack,
        ] {
            assert_eq!(SearchKind::parse(kind.as_str()).unwrap(), kind);
        }
        assert!(SearchKind::parse("fancy").is_err());
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_min(0.0, 1.0, |x| (x - 0.3) * (x - 0.3));
        assert!((x - 0.3).abs() < 1e-7);
        assert!(fx < 1e-13);
    }

    #[test]
    fn homog_ratio_near_the_family_limit() {
        // Seeded at the two-coordinate family with epsilon = 1e-3 the
        // ratio sits within 0.01 of 8/9.
        let cfg = GenConfig::new(
            CountSpec::Fixed(2),
            Mode::Adversarial(Family::Homog),
            0,
            1,
        )
        .with_epsilon(1e-3);
        let record = search_min_ratio(SearchKind::HomogRatio, &cfg, 0).unwrap();
        assert!(
            (record.objective - 8.0 / 9.0).abs() < 0.01,
            "ratio {}",
            record.objective
        );
        // Refinement can only go down, and the conjectured floor is 8/9.
        let refined = search_min_ratio(SearchKind::HomogRatio, &cfg, 1).unwrap();
        assert!(refined.objective <= record.objective + 1e-15);
        assert!(refined.objective > 8.0 / 9.0 - 0.01);
    }

    #[test]
    fn tv_over_phi_stays_above_the_certified_floor() {
        let cfg = GenConfig::new(CountSpec::Range(1, 10), Mode::Dominating, 11, 12);
        let record = search_min_ratio(SearchKind::TvOverPhi, &cfg, 1).unwrap();
        assert!(
            record.objective >= 1.0 / 12.0 - 1e-9,
            "ratio {}",
            record.objective
        );
        // The objective must recompute from the stored pair.
        let p = ParamVec::new(record.p.clone()).unwrap();
        let q = ParamVec::new(record.q.clone()).unwrap();
        let again = tv(&pb_pmf(&p), &pb_pmf(&q)) / phi(&p, &q).unwrap();
        assert!((again - record.objective).abs() < 1e-9);
    }

    #[test]
    fn split_conjecture_minimum_is_reported_not_asserted() {
        let cfg = GenConfig::new(CountSpec::Range(2, 10), Mode::Uniform, 5, 16);
        let record =
            search_min_ratio(SearchKind::SplitConjectureSlack, &cfg, 1).unwrap();
        // Structural range only; the sign is an open question and a
        // negative value would be a finding, not a failure.
        assert!(record.objective >= -1.0 && record.objective <= 2.0);
        assert!(record.partition.is_some());
    }

    #[test]
    fn searches_are_reproducible() {
        let cfg = GenConfig::new(CountSpec::Range(1, 8), Mode::Dominating, 77, 6);
        let a = search_min_ratio(SearchKind::TvOverPhi, &cfg, 1).unwrap();
        let b = search_min_ratio(SearchKind::TvOverPhi, &cfg, 1).unwrap();
        assert_eq!(
            crate::report::search_record_json(&a),
            crate::report::search_record_json(&b)
        );
    }

    #[test]
    fn oversized_homog_ratio_is_rejected() {
        let cfg = GenConfig::new(CountSpec::Range(1, 40), Mode::Uniform, 0, 2);
        assert!(matches!(
            search_min_ratio(SearchKind::HomogRatio, &cfg, 0),
            Err(HarnessError::BadConfig(_))
        ));
    }
}
