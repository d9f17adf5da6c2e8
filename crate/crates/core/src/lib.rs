//! Numerical analysis of planar harmonic, biharmonic and polyharmonic mappings
//! `f(z) = Σ |z|^{2(k-1)} F_k(z)` with each `F_k = h_k + conj(g_k)` a truncated
//! power series on the unit disk.

// `!(a < b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod classes;
pub mod error;
pub mod mapspec;
pub mod scalar;
pub mod series_core;
pub mod univalence;

pub use error::{Error, Result};
pub use mapspec::{ComponentSpec, MapSpec};
pub use scalar::Scalar;
pub use series_core::{AnalyticSeries, GridSpec, HarmonicMap, PolyharmonicMap, Wirtinger};

pub type AnalyticSeries64 = AnalyticSeries<f64>;
pub type HarmonicMap64 = HarmonicMap<f64>;
pub type PolyharmonicMap64 = PolyharmonicMap<f64>;
pub type AnalyticSeries32 = AnalyticSeries<f32>;
pub type HarmonicMap32 = HarmonicMap<f32>;
pub type PolyharmonicMap32 = PolyharmonicMap<f32>;
pub type Complex64 = num_complex::Complex<f64>;
