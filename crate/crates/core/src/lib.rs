//! Simulation and path analysis for Lévy-driven integrated Ornstein–Uhlenbeck
//! (Langevin) dynamics in the small-noise and large-friction regimes.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod levy;
pub mod parallel;
pub mod paths;
pub mod quadrature;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
