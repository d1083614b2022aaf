//! Seeded instance generation, certification sweeps, extremal search, and
//! byte-stable result persistence for the `pbtv-core` bound machinery.
//!
//! The contract throughout: a `(seed, config, suite)` triple fully
//! determines every byte of the emitted JSON/CSV artifacts, independent of
//! worker count or generation order. Wall-clock metadata never enters the
//! artifacts.

pub mod error;
pub mod gen;
pub mod report;
pub mod rng;
pub mod search;
pub mod suite;
pub mod time;

pub use error::HarnessError;
pub use gen::{gen_instances, CountSpec, Family, GenConfig, Mode};
pub use report::{Format, SearchRecord, SuiteReport};
pub use search::{search_min_ratio, SearchKind};
pub use suite::{run_oracle_check, run_suite, run_suite_with, Suite, SuiteOptions};
