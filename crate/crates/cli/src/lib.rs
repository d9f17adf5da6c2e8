//! Command-line front end for `polyharm`: map-spec ingestion, analysis commands,
//! JSON certificates and SVG/CSV rendering.

// `!(a < b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificate;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod render;

pub use cli::run;
pub use error::{exit, CliError};
