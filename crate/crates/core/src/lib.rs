//! Equivalent-circuit model of LLM prompting.
//!
//! A prompt configuration is priced as a circuit: the model's intrinsic
//! capability and the in-context demonstrations act as EMF sources, the
//! reasoning sub-tasks are resistors in series, and the output power
//! dissipated across a fixed load resistor stands in for task accuracy.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation:
//!
//! * [`circuit`] reduces series/parallel resistor networks and evaluates
//!   current and power.
//! * [`field`] turns embedding vectors into a semantic field strength and the
//!   EMF it induces, and retrieves demonstrations under several policies.
//! * [`strategy`] compiles prompting strategies (self-consistency, coverage,
//!   tool use, chain-of-verification, ...) to circuits and provides the
//!   closed-form resistances they reduce to.
//! * [`stats`] has the correlation measures and distribution summaries used
//!   to validate predictions.
//! * [`calibration`] fits the free constants against correctness-labelled
//!   runs and maps power to accuracy.
//! * [`synth`] generates synthetic datasets from known constants.
//!
//! Enable the `parallel` feature to evaluate fitting grids with rayon (this
//! pulls in `std`).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod calibration;
pub mod circuit;
pub mod dataset;
mod error;
pub mod field;
pub mod rng;
pub mod stats;
pub mod strategy;
pub mod synth;

pub use error::{Error, Result};
