//! Exact Poisson-binomial laws and two-sided total-variation control.
//!
//! The crate computes the law of a sum of independent, non-identical
//! Bernoulli trials exactly in `O(n^2)`, evaluates total variation
//! distances between integer-supported laws, and certifies the analytic
//! bounds that sandwich `TV(S_p, S_q)` between multiples of the proxy
//! functional `phi(p, q) = min(1, delta / sqrt(sigma_p^2 + 1))`:
//!
//! * upper bounds for arbitrary pairs ([`bounds::tv_upper_bound`] and its
//!   symmetric sharpening),
//! * the `phi / 12` lower bound for coordinatewise dominating pairs, via
//!   the survival-difference profile, its second-moment budget, and a
//!   pigeonhole peak extraction ([`bounds`]),
//! * the homogenization inequality relating the product-measure distance
//!   to the distance of the pooled binomials ([`homog`]),
//! * brute-force enumeration oracles and interpolation identities that
//!   cross-check all of the above at desk scale ([`oracle`]).
//!
//! Every operation is a pure function of immutable inputs, so values are
//! safe to share across threads. The crate is `no_std` (with `alloc`);
//! IO, instance generators, and the CLI live in the companion `pbtv`
//! crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod consts;
mod error;
pub mod homog;
pub mod oracle;
pub mod param;
pub mod pmf;
pub mod quad;
pub mod sum;

pub use bounds::{certify_pair, phi, BoundReport, DominatingPair, GProfile};
pub use error::Error;
pub use param::{moments, Moments, ParamVec};
pub use pmf::{binom_pmf, pb_pmf, tv, Pmf};
