//! Online unconstrained submodular maximization (Online USM).
//!
//! The crate is split along the pieces of the algorithm:
//!
//! * [`submodular`]: subsets as bitmasks, set functions, counted value oracles,
//!   directed-cut instances and an exhaustive submodularity verifier.
//! * [`balance`]: the binary-action balance game, the `Balancer` subroutine,
//!   a two-experts multiplicative-weights subroutine, the potential functions
//!   and a horizon-doubling wrapper.
//! * [`framework`]: the online double-greedy framework driving one subroutine per
//!   element, the α-regret metric and replay diagnostics.
//! * [`offline`]: exhaustive optimum and the double-greedy / uniform baselines.
//! * [`adversaries`]: oblivious and adaptive input generators and the
//!   adaptive-coin covariance experiment.
//!
//! Everything here is `no_std` with `alloc`. File formats, configuration and
//! the command line live in the `usm-sim` crate.
#![no_std]
#![deny(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adversaries;
pub mod balance;
mod error;
pub mod framework;
pub mod offline;
pub mod seed;
pub mod submodular;

pub use error::{Error, Result};

/// Absolute tolerance used by every range and submodularity check.
pub const TOLERANCE: f64 = 1e-9;
