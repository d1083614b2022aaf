//! Seeded instance generators.
//!
//! A [`GenConfig`] fully determines the instance stream: instance `k` is a
//! pure function of `(seed, k)`, so streams are reproducible bit-for-bit
//! and can be generated in any order or in parallel.
//!
//! Modes:
//!
//! * `uniform` - both vectors i.i.d. uniform on `[0, 1]`.
//! * `dominating` - `p` uniform, `q_i = p_i * u_i` with `u_i` uniform, so
//!   `p_i >= q_i` holds exactly in floating point.
//! * `near-equal` - `q` is `p` plus a `+-epsilon` coordinatewise
//!   perturbation (default `epsilon = 0.01`), clamped into `[0, 1]`.
//! * `boundary-heavy` - each coordinate is pinned to exactly 0 or 1 with
//!   probability `epsilon` (default 0.25), otherwise uniform.
//! * `adversarial-homog` - the two-coordinate family
//!   `p = (1 - 2e, 1/2)`, `q = (1, 1/2 + e)`; instance `k` uses
//!   `e = epsilon / 2^k` (default base 0.1), sweeping toward the limit.
//! * `adversarial-counterexample` - the three-coordinate family
//!   `p = (1, 0, 1/2)`, `q = (0, 1, 1/2 + e)` with the same epsilon sweep;
//!   `phi(p, q) = 1` while the laws sit at distance `e`.

use pbtv_core::ParamVec;

use crate::error::HarnessError;
use crate::rng::SplitMix64;

/// Number of coordinates: fixed, or drawn uniformly from an inclusive range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountSpec {
    Fixed(usize),
    Range(usize, usize),
}

impl CountSpec {
    /// Parse `"12"`, `"1..200"`, or `"1..=200"`; ranges are inclusive.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let text = text.trim();
        if let Some((lo, hi)) = text.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let lo = lo
                .trim()
                .parse::<usize>()
                .map_err(|_| HarnessError::BadConfig(format!("bad range start in `{text}`")))?;
            let hi = hi
                .trim()
                .parse::<usize>()
                .map_err(|_| HarnessError::BadConfig(format!("bad range end in `{text}`")))?;
            if lo > hi {
                return Err(HarnessError::BadConfig(format!("empty range `{text}`")));
            }
            Ok(CountSpec::Range(lo, hi))
        } else {
            let n = text
                .parse::<usize>()
                .map_err(|_| HarnessError::BadConfig(format!("bad count `{text}`")))?;
            Ok(CountSpec::Fixed(n))
        }
    }

    pub fn min(&self) -> usize {
        match *self {
            CountSpec::Fixed(n) => n,
            CountSpec::Range(lo, _) => lo,
        }
    }

    pub fn max(&self) -> usize {
        match *self {
            CountSpec::Fixed(n) => n,
            CountSpec::Range(_, hi) => hi,
        }
    }

    pub(crate) fn sample(&self, rng: &mut SplitMix64) -> usize {
        match *self {
            CountSpec::Fixed(n) => n,
            CountSpec::Range(lo, hi) => rng.next_range(lo, hi),
        }
    }

    /// The same count range with its lower end raised to at least `lo`.
    pub(crate) fn raised_to(self, lo: usize) -> CountSpec {
        match self {
            CountSpec::Fixed(n) => CountSpec::Fixed(n.max(lo)),
            CountSpec::Range(a, b) => CountSpec::Range(a.max(lo), b.max(lo)),
        }
    }
}

impl std::fmt::Display for CountSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            CountSpec::Fixed(n) => write!(f, "{n}"),
            CountSpec::Range(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

/// The two fixed adversarial families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `p = (1 - 2e, 1/2)`, `q = (1, 1/2 + e)`: homogenization slightly
    /// increases the distance; the ratio tends to 8/9.
    Homog,
    /// `p = (1, 0, 1/2)`, `q = (0, 1, 1/2 + e)`: distance `e` at `phi = 1`.
    Counterexample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Uniform,
    Dominating,
    NearEqual,
    BoundaryHeavy,
    Adversarial(Family),
}

impl Mode {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        match text {
            "uniform" => Ok(Mode::Uniform),
            "dominating" => Ok(Mode::Dominating),
            "near-equal" => Ok(Mode::NearEqual),
            "boundary-heavy" => Ok(Mode::BoundaryHeavy),
            // The bare family name defaults to the homogenization variant.
            "adversarial-family" | "adversarial-homog" => Ok(Mode::Adversarial(Family::Homog)),
            "adversarial-counterexample" => Ok(Mode::Adversarial(Family::Counterexample)),
            other => Err(HarnessError::BadConfig(format!("unknown mode `{other}`"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Uniform => "uniform",
            Mode::Dominating => "dominating",
            Mode::NearEqual => "near-equal",
            Mode::BoundaryHeavy => "boundary-heavy",
            Mode::Adversarial(Family::Homog) => "adversarial-homog",
            Mode::Adversarial(Family::Counterexample) => "adversarial-counterexample",
        }
    }
}

/// Deterministic generator configuration. Identical configs yield
/// identical instance streams, bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub n: CountSpec,
    pub mode: Mode,
    /// Mode parameter: perturbation size (`near-equal`), boundary fraction
    /// (`boundary-heavy`), or base epsilon (`adversarial-*`).
    pub epsilon: Option<f64>,
    pub seed: u64,
    pub count: usize,
}

impl GenConfig {
    pub fn new(n: CountSpec, mode: Mode, seed: u64, count: usize) -> Self {
        Self {
            n,
            mode,
            epsilon: None,
            seed,
            count,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    /// Effective mode parameter, with per-mode defaults.
    pub fn effective_epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(match self.mode {
            Mode::NearEqual => 0.01,
            Mode::BoundaryHeavy => 0.25,
            _ => 0.1,
        })
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let eps = self.effective_epsilon();
        let bad = |msg: &str| Err(HarnessError::BadConfig(format!("{msg}, got {eps}")));
        match self.mode {
            Mode::NearEqual if !(eps > 0.0 && eps <= 1.0) => {
                bad("near-equal perturbation must be in (0, 1]")
            }
            Mode::BoundaryHeavy if !(0.0..=1.0).contains(&eps) => {
                bad("boundary fraction must be in [0, 1]")
            }
            Mode::Adversarial(_) if !(eps > 0.0 && eps <= 0.25) => {
                bad("adversarial epsilon must be in (0, 0.25]")
            }
            _ => Ok(()),
        }
    }
}

/// Salt values separating the rng streams used per instance.
pub(crate) mod salt {
    /// Main stream: n, p, and q draws.
    pub const INSTANCE: u64 = 0;
    /// Auxiliary stream: partitions, interpolation points, events.
    pub const AUX: u64 = 1;
}

fn uniform_vec(rng: &mut SplitMix64, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.next_f64()).collect()
}

/// Instance `index` of the stream; a pure function of `(config, index)`.
///
/// The config must have passed [`GenConfig::validate`].
pub fn instance(cfg: &GenConfig, index: u64) -> (ParamVec, ParamVec) {
    debug_assert!(cfg.validate().is_ok());
    let mut rng = SplitMix64::keyed(cfg.seed, index, salt::INSTANCE);
    let n = cfg.n.sample(&mut rng);
    let (p, q) = match cfg.mode {
        Mode::Uniform => {
            let p = uniform_vec(&mut rng, n);
            let q = uniform_vec(&mut rng, n);
            (p, q)
        }
        Mode::Dominating => {
            let p = uniform_vec(&mut rng, n);
            let q = p.iter().map(|&pi| pi * rng.next_f64()).collect();
            (p, q)
        }
        Mode::NearEqual => {
            let eps = cfg.effective_epsilon();
            let p = uniform_vec(&mut rng, n);
            let q = p
                .iter()
                .map(|&pi| (pi + eps * (2.0 * rng.next_f64() - 1.0)).clamp(0.0, 1.0))
                .collect();
            (p, q)
        }
        Mode::BoundaryHeavy => {
            let frac = cfg.effective_epsilon();
            let draw = |rng: &mut SplitMix64| -> Vec<f64> {
                (0..n)
                    .map(|_| {
                        if rng.next_f64() < frac {
                            if rng.next_bool() {
                                1.0
                            } else {
                                0.0
                            }
                        } else {
                            rng.next_f64()
                        }
                    })
                    .collect()
            };
            let p = draw(&mut rng);
            let q = draw(&mut rng);
            (p, q)
        }
        Mode::Adversarial(family) => {
            // Halving sweep toward the epsilon -> 0 limit.
            let eps = (cfg.effective_epsilon() * 0.5f64.powi(index.min(128) as i32)).max(1e-12);
            match family {
                Family::Homog => (vec![1.0 - 2.0 * eps, 0.5], vec![1.0, 0.5 + eps]),
                Family::Counterexample => (vec![1.0, 0.0, 0.5], vec![0.0, 1.0, 0.5 + eps]),
            }
        }
    };
    (
        ParamVec::new(p).expect("generated parameters lie in [0, 1]"),
        ParamVec::new(q).expect("generated parameters lie in [0, 1]"),
    )
}

/// The auxiliary stream for instance `index` (partition cuts, grid points,
/// event masks). Kept separate so instance vectors never shift when a
/// suite draws extra randomness.
pub(crate) fn aux_rng(cfg: &GenConfig, index: u64) -> SplitMix64 {
    SplitMix64::keyed(cfg.seed, index, salt::AUX)
}

/// Iterator over the whole configured stream.
pub fn gen_instances(cfg: &GenConfig) -> Result<impl Iterator<Item = (ParamVec, ParamVec)> + '_, HarnessError> {
    cfg.validate()?;
    Ok((0..cfg.count as u64).map(move |k| instance(cfg, k)))
}
