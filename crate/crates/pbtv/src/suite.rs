//! Named certification sweeps.
//!
//! A suite maps every instance of a seeded stream through one family of
//! checks, collects violations (instances whose inequality fails at the
//! suite tolerance), and tracks the extreme slacks. Instances are
//! independent and evaluated in parallel; the reduction walks outcomes in
//! instance-index order, so reports are identical regardless of the
//! worker count.
//!
//! Suites that require structure coerce the config and say so in the
//! report: domination-based suites force `dominating` mode, brute-force
//! suites reject `n` beyond the enumeration cap, and split/mixture suites
//! raise `n` to at least 2 (1 for the homogenization certificate).

use std::time::Instant;

use rayon::prelude::*;

use pbtv_core::bounds::{g_profile, j_upper_bound, pigeonhole_lower_bound, product_tv_lower_bound};
use pbtv_core::consts::{tol, ETA_BCV};
use pbtv_core::homog::{homog_certificate, mixture_law, split_bound_check, Partition};
use pbtv_core::oracle::{product_tv_bruteforce, EventSet, InterpPath, BRUTEFORCE_CAP};
use pbtv_core::{binom_pmf, certify_pair, moments, pb_pmf, tv, DominatingPair, ParamVec, Pmf};

use crate::error::HarnessError;
use crate::gen::{aux_rng, instance, CountSpec, GenConfig, Mode};
use crate::report::{SearchRecord, SuiteReport};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Upper bounds (min-phi and symmetric) on arbitrary pairs.
    Thm1,
    /// `phi / 12` lower bound plus profile positivity on dominating pairs.
    Thm2,
    /// Partitioned lower bound under the brute-force product distance.
    Thm3,
    /// Second-moment budget `J <= 2 delta (sigma^2 + 1 + delta^2)`.
    JBound,
    /// Peak extraction: `max g >= pigeonhole(G, J)`, and `max g <= tv`.
    Pigeonhole,
    /// Anti-concentration peak bound on every generated law.
    BcvPeak,
    /// Two-block split inequality for homogenized distances.
    SplitLemma,
    /// Mixture-collapse identity for the pooled binomial.
    Mixture,
    /// Brute-force product distance vs the homogenized binomial distance.
    HomogMain,
    /// Log-concavity (hence unimodality) of every generated law.
    Unimodality,
    /// Analytic event-probability derivative vs central differences.
    Derivative,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Thm1,
        Suite::Thm2,
        Suite::Thm3,
        Suite::JBound,
        Suite::Pigeonhole,
        Suite::BcvPeak,
        Suite::SplitLemma,
        Suite::Mixture,
        Suite::HomogMain,
        Suite::Unimodality,
        Suite::Derivative,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Thm3 => "thm3",
            Suite::JBound => "j-bound",
            Suite::Pigeonhole => "pigeonhole",
            Suite::BcvPeak => "bcv-peak",
            Suite::SplitLemma => "split-lemma",
            Suite::Mixture => "mixture",
            Suite::HomogMain => "homog-main",
            Suite::Unimodality => "unimodality",
            Suite::Derivative => "derivative",
        }
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        Self::ALL
            .iter()
            .copied()
            .find(|s| s.as_str() == text)
            .ok_or_else(|| HarnessError::UnknownSuite(text.to_string()))
    }

    /// Default one-sided tolerance of the suite's primary inequality.
    pub fn default_tolerance(&self) -> f64 {
        match self {
            Suite::BcvPeak | Suite::Mixture | Suite::Unimodality => tol::ORACLE,
            Suite::Derivative => tol::DERIVATIVE,
            _ => tol::SLACK,
        }
    }

    fn needs_domination(&self) -> bool {
        matches!(self, Suite::Thm2 | Suite::JBound | Suite::Pigeonhole)
    }

    fn bruteforce_capped(&self) -> bool {
        matches!(self, Suite::Thm3 | Suite::HomogMain)
    }

    fn min_n(&self) -> usize {
        match self {
            Suite::SplitLemma | Suite::Mixture => 2,
            Suite::HomogMain => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SuiteOptions {
    /// `None`: use the global rayon pool. `Some(1)`: run sequentially.
    pub workers: Option<usize>,
    /// Override the suite's primary tolerance.
    pub tolerance: Option<f64>,
}

/// Per-instance evaluation result. `slack` is infinite for instances the
/// check does not apply to (they never count as extremes).
#[derive(Debug, Clone, Copy)]
struct Outcome {
    ok: bool,
    slack: f64,
    conjecture: Option<f64>,
}

fn effective_config(suite: Suite, cfg: &GenConfig) -> Result<GenConfig, HarnessError> {
    cfg.validate()?;
    let mut eff = cfg.clone();
    if suite.needs_domination() && !matches!(eff.mode, Mode::Dominating) {
        eff.mode = Mode::Dominating;
    }
    if suite.bruteforce_capped() && eff.n.max() > BRUTEFORCE_CAP {
        return Err(HarnessError::BadConfig(format!(
            "suite `{}` enumerates 2^n outcomes and needs n <= {BRUTEFORCE_CAP}, got {}",
            suite.as_str(),
            eff.n
        )));
    }
    eff.n = eff.n.raised_to(suite.min_n());
    Ok(eff)
}

/// Smallest log-concavity margin `m_k^2 - m_(k-1) m_(k+1)` over interior
/// points with positive neighbors; infinite when there are none.
fn log_concavity_margin(pmf: &Pmf) -> f64 {
    let mut margin = f64::INFINITY;
    for w in pmf.masses().windows(3) {
        if w[0] > 0.0 && w[2] > 0.0 {
            margin = margin.min(w[1] * w[1] - w[0] * w[2]);
        }
    }
    margin
}

/// Random subset of `0..n` with both blocks nonempty (n >= 2). A
/// degenerate draw moves one deterministic index across.
pub(crate) fn random_partition_of(rng: &mut SplitMix64, n: usize) -> Vec<usize> {
    let mut left: Vec<usize> = (0..n).filter(|_| rng.next_bool()).collect();
    if left.is_empty() {
        left.push(0);
    } else if left.len() == n {
        left.pop();
    }
    left
}

fn evaluate(
    suite: Suite,
    cfg: &GenConfig,
    index: u64,
    tolerance: f64,
    want_record: bool,
) -> (Outcome, Option<SearchRecord>) {
    let kind = format!("{}-slack", suite.as_str());
    let mut record = None;

    let outcome = match suite {
        Suite::Thm1 => {
            let (p, q) = instance(cfg, index);
            let r = certify_pair(&p, &q).expect("equal lengths");
            let slack = r.slack_upper_thm1.min(r.slack_upper_symmetric);
            if want_record {
                record =
                    Some(SearchRecord::new(&kind, slack, cfg.seed, index).with_pair(&p, &q));
            }
            Outcome {
                ok: slack >= -tolerance,
                slack,
                conjecture: None,
            }
        }
        Suite::Thm2 => {
            let (p, q) = instance(cfg, index);
            let r = certify_pair(&p, &q).expect("equal lengths");
            let slack = r.slack_lower_thm2.expect("dominating stream");
            let ok = slack >= -tolerance
                && r.g_min.expect("dominating stream") >= -tol::G_NONNEG
                && (r.g_sum.expect("dominating stream") - r.delta).abs() <= tol::SLACK;
            if want_record {
                record =
                    Some(SearchRecord::new(&kind, slack, cfg.seed, index).with_pair(&p, &q));
            }
            Outcome {
                ok,
                slack,
                conjecture: None,
            }
        }
        Suite::Thm3 => {
            let (p, q) = instance(cfg, index);
            let product = product_tv_bruteforce(&p, &q).expect("n capped");
            let lower = product_tv_lower_bound(&p, &q).expect("equal lengths");
            let summed = tv(&pb_pmf(&p), &pb_pmf(&q));
            let slack = product - lower;
            let ok = slack >= -tolerance && product >= summed - tol::ORACLE;
            if want_record {
                record =
                    Some(SearchRecord::new(&kind, slack, cfg.seed, index).with_pair(&p, &q));
            }
            Outcome {
                ok,
                slack,
                conjecture: None,
            }
        }
        Suite::JBound => {
            let (p, q) = instance(cfg, index);
            let pair = DominatingPair::new(p.clone(), q.clone()).expect("dominating stream");
            let slack = j_upper_bound(&pair) - g_profile(&pair).j;
            if want_record {
                record =
                    Some(SearchRecord::new(&kind, slack, cfg.seed, index).with_pair(&p, &q));
            }
            Outcome {
                ok: slack >= -tolerance,
                slack,
                conjecture: None,
            }
        }
        Suite::Pigeonhole => {
            let (p, q) = instance(cfg, index);
            let pair = DominatingPair::new(p.clone(), q.clone()).expect("dominating stream");
            let profile = g_profile(&pair);
            let (ok, slack) = if profile.g_total > 0.0 {
                let peak_lb =
                    pigeonhole_lower_bound(profile.g_total, profile.j).expect("positive mass");
                let max_g = profile.max_g();
                let d = tv(&pb_pmf(&p), &pb_pmf(&q));
                (
                    max_g - peak_lb >= -tolerance && max_g <= d + tol::ORACLE,
                    max_g - peak_lb,
                )
            } else {
                (true, f64::INFINITY) // nothing to extract from a zero profile
            };
            if want_record {
                record =
                    Some(SearchRecord::new(&kind, slack, cfg.seed, index).with_pair(&p, &q));
            }
            Outcome {
                ok,
                slack,
                conjecture: None,
            }
        }
        Suite::BcvPeak => {
            let (p, q) = instance(cfg, index);
            let mut slack = f64::INFINITY;
            for side in [&p, &q] {
                let v = moments(side).variance;
                if v > 0.0 {
                    slack = slack.min(ETA_BCV / v.sqrt() - pb_pmf(side).peak());
                }
            }
            if want_record {
                record =
                    Some(SearchRecord::new(&kind, slack, cfg.seed, index).with_pair(&p, &q));
            }
            Outcome {
                // +inf slack (no variance anywhere) passes; NaN fails.
                ok: slack >= -tolerance,
                slack,
                conjecture: None,
            }
        }
        Suite::SplitLemma => {
            let (p, q) = instance(cfg, index);
            let n = p.len();
            let left = random_partition_of(&mut aux_rng(cfg, index), n);
            let part = Partition::new(n, &left).expect("indices in range");
            let check = split_bound_check(&p, &q, &part).expect("blocks nonempty");
            let slack =
                2.0 * (check.delta_left + check.delta_right) - check.delta_full;
            if want_record {
                let mut r =
                    SearchRecord::new(&kind, slack, cfg.seed, index).with_pair(&p, &q);
                r.partition = Some(left);
                record = Some(r);
            }
            Outcome {
                ok: slack >= -tolerance,
                slack,
                conjecture: Some(check.conjecture_slack),
            }
        }
        Suite::Mixture => {
            // This suite draws its own (n, split, a, b); the pair stream
            // is not consulted.
            let mut rng = aux_rng(cfg, index);
            let n = cfg.n.raised_to(2).sample(&mut rng);
            let size_left = rng.next_range(1, n - 1);
            let a = rng.next_f64();
            let b = rng.next_f64();
            let law = mixture_law(n, size_left, a, b).expect("valid split");
            let pooled = ((size_left as f64 * a + (n - size_left) as f64 * b) / n as f64)
                .clamp(0.0, 1.0);
            let expect = binom_pmf(n, pooled).expect("probability");
            let mut sup = 0.0f64;
            for k in 0..=n as i64 {
                sup = sup.max((law.mass_at(k) - expect.mass_at(k)).abs());
            }
            let slack = -sup;
            if want_record {
                // Encode the configuration as a constant-block vector so the
                // objective is recomputable from (p, partition).
                let mut values = vec![a; size_left];
                values.extend(std::iter::repeat_n(b, n - size_left));
                let p = ParamVec::new(values).expect("probabilities");
                let mut r = SearchRecord::new(&kind, slack, cfg.seed, index)
                    .with_pair(&p, &p);
                r.partition = Some((0..size_left).collect());
                record = Some(r);
            }
            Outcome {
                ok: slack >= -tolerance,
                slack,
                conjecture: None,
            }
        }
        Suite::HomogMain => {
            let (p, q) = instance(cfg, index);
            let report = homog_certificate(&p, &q, true).expect("n capped, n >= 1");
            let slack = report.slack;
            if want_record {
                record =
                    Some(SearchRecord::new(&kind, slack, cfg.seed, index).with_pair(&p, &q));
            }
            Outcome {
                ok: slack >= -tolerance,
                slack,
                conjecture: None,
            }
        }
        Suite::Unimodality => {
            let (p, q) = instance(cfg, index);
            let mut slack = f64::INFINITY;
            let mut unimodal = true;
            for side in [&p, &q] {
                let law = pb_pmf(side);
                unimodal &= law.is_unimodal();
                slack = slack.min(log_concavity_margin(&law));
            }
            if !unimodal {
                slack = slack.min(-1.0);
            }
            if want_record {
                record =
                    Some(SearchRecord::new(&kind, slack, cfg.seed, index).with_pair(&p, &q));
            }
            Outcome {
                ok: unimodal && slack >= -tolerance,
                slack,
                conjecture: None,
            }
        }
        Suite::Derivative => {
            let (p, q) = instance(cfg, index);
            let n = p.len();
            let mut rng = aux_rng(cfg, index);
            let h = tol::FD_STEP;
            let t = h + rng.next_f64() * (1.0 - 2.0 * h);
            let event = EventSet::new((0..=n as i64).filter(|_| rng.next_bool()));
            let path = InterpPath::new(p.clone(), q.clone()).expect("equal lengths");
            let analytic = path.event_prob_derivative(t, &event);
            let fd = (path.event_prob(t + h, &event) - path.event_prob(t - h, &event))
                / (2.0 * h);
            let slack = -(analytic - fd).abs();
            if want_record {
                let mut r =
                    SearchRecord::new(&kind, slack, cfg.seed, index).with_pair(&p, &q);
                r.t = Some(t);
                r.event = Some(event.iter().collect());
                record = Some(r);
            }
            Outcome {
                ok: slack >= -tolerance,
                slack,
                conjecture: None,
            }
        }
    };
    (outcome, record)
}

fn map_indexed<T: Send>(
    count: usize,
    workers: Option<usize>,
    f: impl Fn(usize) -> T + Sync + Send,
) -> Result<Vec<T>, HarnessError> {
    match workers {
        Some(1) => Ok((0..count).map(f).collect()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| HarnessError::BadConfig(format!("worker pool: {e}")))?;
            Ok(pool.install(|| (0..count).into_par_iter().map(f).collect()))
        }
        None => Ok((0..count).into_par_iter().map(f).collect()),
    }
}

pub fn run_suite(suite: Suite, cfg: &GenConfig) -> Result<SuiteReport, HarnessError> {
    run_suite_with(suite, cfg, SuiteOptions::default())
}

/// Run every instance of the configured stream through the suite's checks.
///
/// The violation list is empty exactly when every instance passed. A
/// reported violation of any certified inequality is a build-failing
/// event, not a statistic.
pub fn run_suite_with(
    suite: Suite,
    cfg: &GenConfig,
    opts: SuiteOptions,
) -> Result<SuiteReport, HarnessError> {
    let started = Instant::now();
    let eff = effective_config(suite, cfg)?;
    let tolerance = opts.tolerance.unwrap_or_else(|| suite.default_tolerance());

    let outcomes = map_indexed(eff.count, opts.workers, |i| {
        evaluate(suite, &eff, i as u64, tolerance, false).0
    })?;

    // Deterministic reduction in instance order; ties keep the first index.
    let mut violation_indices = Vec::new();
    let mut min_slack: Option<(usize, f64)> = None;
    let mut max_slack: Option<(usize, f64)> = None;
    let mut conjecture_min: Option<(usize, f64)> = None;
    for (i, o) in outcomes.iter().enumerate() {
        if !o.ok {
            violation_indices.push(i);
        }
        if o.slack.is_finite() {
            if min_slack.is_none_or(|(_, s)| o.slack < s) {
                min_slack = Some((i, o.slack));
            }
            if max_slack.is_none_or(|(_, s)| o.slack > s) {
                max_slack = Some((i, o.slack));
            }
        }
        if let Some(c) = o.conjecture {
            if conjecture_min.is_none_or(|(_, s)| c < s) {
                conjecture_min = Some((i, c));
            }
        }
    }

    let record_at = |i: usize| {
        evaluate(suite, &eff, i as u64, tolerance, true)
            .1
            .expect("record requested")
    };
    let violations = violation_indices.iter().map(|&i| record_at(i)).collect();
    let min_slack = min_slack.map(|(i, _)| record_at(i));
    let max_slack = max_slack.map(|(i, _)| record_at(i));
    let conjecture_min = conjecture_min.map(|(i, c)| {
        let mut r = record_at(i);
        r.objective_kind = "split-conjecture-slack".to_string();
        r.objective = c;
        r
    });

    Ok(SuiteReport {
        suite: suite.as_str().to_string(),
        seed: eff.seed,
        mode: eff.mode.as_str().to_string(),
        n: eff.n.to_string(),
        instances: eff.count,
        tolerance,
        violations,
        min_slack,
        max_slack,
        conjecture_min,
        duration: started.elapsed(),
    })
}

/// Outcome of a one-shot oracle self-check.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

/// Run one of the named oracle checks: `derivative`, `mixture`,
/// `affinity`, or `dpi`. `tolerance` overrides the defaults of the
/// suite-backed checks.
pub fn run_oracle_check(
    check: &str,
    n: Option<usize>,
    seed: u64,
    count: usize,
    tolerance: Option<f64>,
) -> Result<OracleOutcome, HarnessError> {
    match check {
        "derivative" | "mixture" => {
            let suite = if check == "derivative" {
                Suite::Derivative
            } else {
                Suite::Mixture
            };
            let spec = CountSpec::Range(if check == "mixture" { 2 } else { 0 }, n.unwrap_or(10));
            let cfg = GenConfig::new(spec, Mode::Uniform, seed, count);
            let report = run_suite_with(
                suite,
                &cfg,
                SuiteOptions {
                    workers: None,
                    tolerance,
                },
            )?;
            let worst = report
                .min_slack
                .as_ref()
                .map(|r| r.objective)
                .unwrap_or(f64::INFINITY);
            Ok(OracleOutcome {
                check: check.to_string(),
                passed: report.passed(),
                detail: format!(
                    "{count} instances, {} violations, worst slack {worst:e}",
                    report.violations.len()
                ),
            })
        }
        "affinity" => {
            let n = n.unwrap_or(5).max(2);
            let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
            let probe = pbtv_core::oracle::affinity_probe(n, &grid)?;
            Ok(OracleOutcome {
                check: check.to_string(),
                passed: probe.is_non_affine(),
                detail: format!(
                    "max |second difference| = {:e} on an 11-point grid at n = {n}",
                    probe.max_abs_second_difference()
                ),
            })
        }
        "dpi" => {
            let cap = n.unwrap_or(12).min(16);
            let cfg = GenConfig::new(CountSpec::Range(0, cap), Mode::Uniform, seed, count);
            cfg.validate()?;
            let tol_dpi = tolerance.unwrap_or(tol::ORACLE);
            let mut worst = f64::INFINITY;
            let mut passed = true;
            for k in 0..count as u64 {
                let (p, q) = instance(&cfg, k);
                let product = product_tv_bruteforce(&p, &q)?;
                let summed = tv(&pb_pmf(&p), &pb_pmf(&q));
                let slack = product - summed;
                worst = worst.min(slack);
                passed &= slack >= -tol_dpi;
            }
            Ok(OracleOutcome {
                check: check.to_string(),
                passed,
                detail: format!("{count} instances, worst product-vs-sum slack {worst:e}"),
            })
        }
        other => Err(HarnessError::UnknownOracleCheck(other.to_string())),
    }
}
