//! Exact and Monte Carlo building blocks relating the spectra of GUE
//! principal minors to maximal functionals of Brownian motion.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs plus an explicit [`sampling::RngStream`]; the
//! companion `minorlab` crate carries the CLI, configuration and the
//! parallel Monte Carlo harness.
//!
//! Module map:
//!
//! * [`hermitian`]: Hermitian eigensolver, principal minors, Gelfand–Tsetlin
//!   patterns and the weighted traceless projection.
//! * [`sampling`]: seeded streams, GUE matrices, geometric arrays, random
//!   words and discretized Brownian motion.
//! * [`rsk`]: RSK for words and integer arrays, longest nondecreasing
//!   subsequences and Greene-type brute force oracles.
//! * [`paths`]: up-right path algebra, the normalization procedures, and
//!   multi-path last passage percolation (brute force and DP).
//! * [`functionals`]: maximal Brownian functionals on grids.
//! * [`markov`]: cyclic symmetric Markov chains and their limiting covariance.
//! * [`stats`]: two-sample comparison statistics.
#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod functionals;
pub mod hermitian;
pub mod markov;
pub mod paths;
pub mod rsk;
pub mod sampling;
pub mod stats;

pub use error::{Error, Result};
