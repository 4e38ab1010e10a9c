//! Topology of superlevel sets of sampled one-dimensional stochastic paths.
//!
//! The crate has three layers that feed into each other:
//!
//! * [`sim`] produces reproducible sampled paths of Brownian motion (plain,
//!   reflected, drifted), the Ornstein-Uhlenbeck process and symmetric
//!   alpha-stable Lévy processes, all driven by counter-based seeded streams.
//! * [`barcode`] computes the superlevel-set barcode of a value sequence
//!   with a union-find sweep, together with the counting functionals
//!   `N^eps` (bars of length >= eps), `N^{x,x+eps}` (diagram points in the
//!   rectangle `]-inf,x] x [x+eps,inf[`), `Pers_p^p` and the trimmed tree
//!   measure. Independent stopping-time scanners ([`barcode::count_bars_updown`],
//!   [`barcode::count_upcrossings`]) provide exact combinatorial oracles for
//!   the barcode-derived counts.
//! * [`analytic`] evaluates the closed forms these statistics converge to:
//!   zeta functions, expected bar counts, range and bar-length laws, local
//!   times and average-diagram densities.
//!
//! [`transport`] adds exact Wasserstein-p and bottleneck distances between
//! diagrams (diagonal as an infinite reservoir, `l^inf` ground metric), and
//! [`alpha`] implements the four-scale tail-index estimator with a bootstrap
//! test on top of the bar counts.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature for embedded or sandboxed use. File formats, experiment
//! configuration and the CLI live in the companion `pathzeta-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]
// negated comparisons like !(t > 0.0) are deliberate: they reject NaN,
// which t <= 0.0 silently accepts
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod alpha;
pub mod analytic;
pub mod barcode;
mod error;
pub mod rng;
pub mod sim;
pub mod special;
pub mod transport;

pub use error::Error;
pub use rng::SeedSpec;
pub use sim::SampledPath;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
