//! Series representation of harmonic and polyharmonic maps and their pointwise
//! calculus: evaluation, slices, Wirtinger derivatives, Jacobian, dilatation
//! and a finite-difference Laplacian probe.

mod calculus;
mod maps;

pub(crate) use calculus::dilatation_of;
pub use calculus::{Wirtinger, DILATATION_FLOOR, RICHARDSON_LEVELS};
pub(crate) use maps::check_domain;
pub use maps::{AnalyticSeries, GridSpec, HarmonicMap, PolyharmonicMap, DOMAIN_SLACK};
