//! File formats, rationale annotation and reports around [`ecp_core`].
//!
//! * [`io`] reads and writes task datasets (line-delimited JSON), embedding
//!   pools (text or binary) and fitted parameter files.
//! * [`annotate`] estimates planning steps and local operations from a
//!   rationale's text.
//! * [`report`] writes power-binned accuracy tables as CSV or an SVG scatter.

pub mod annotate;
mod error;
pub mod io;
pub mod report;

pub use ecp_core as core;
pub use error::{Error, FormatError, Location, Result};
