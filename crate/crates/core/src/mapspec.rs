//! The map specification file: `{"p": int, "components": [{"h": [[re,im],...], "g": [...]}]}`.
//! Coefficient index equals array index.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};
use crate::series_core::{AnalyticSeries, HarmonicMap, PolyharmonicMap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub h: Vec<[f64; 2]>,
    pub g: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub p: usize,
    pub components: Vec<ComponentSpec>,
}

fn series<T: Scalar>(coeffs: &[[f64; 2]], label: &str) -> Result<AnalyticSeries<T>> {
    if coeffs.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "non-finite coefficient in {label}"
        )));
    }
    if coeffs.is_empty() {
        return Ok(AnalyticSeries::zero());
    }
    AnalyticSeries::new(
        coeffs
            .iter()
            .map(|[re, im]| Complex::new(lit(*re), lit(*im)))
            .collect(),
    )
}

fn coeff_pairs<T: Scalar>(s: &AnalyticSeries<T>) -> Vec<[f64; 2]> {
    s.coeffs()
        .iter()
        .map(|c| [to_f64(c.re), to_f64(c.im)])
        .collect()
}

impl MapSpec {
    pub fn to_map<T: Scalar>(&self) -> Result<PolyharmonicMap<T>> {
        if self.p != self.components.len() {
            return Err(Error::InvalidParameter(format!(
                "p = {} but {} components given",
                self.p,
                self.components.len()
            )));
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(k, c)| {
                Ok(HarmonicMap::new(
                    series(&c.h, &format!("components[{k}].h"))?,
                    series(&c.g, &format!("components[{k}].g"))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        PolyharmonicMap::new(components)
    }

    pub fn from_map<T: Scalar>(map: &PolyharmonicMap<T>) -> Self {
        Self {
            p: map.order(),
            components: map
                .components()
                .iter()
                .map(|c| ComponentSpec {
                    h: coeff_pairs(&c.h),
                    g: coeff_pairs(&c.g),
                })
                .collect(),
        }
    }
}
