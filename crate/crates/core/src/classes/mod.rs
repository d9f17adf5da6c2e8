//! Class tests and constructors: the coefficient condition for convex harmonic
//! maps, the close-to-convex biharmonic construction `f = H + |z|² conj(G)` with
//! its certificate, and the `H + εG` close-to-convexity probe.

mod rays;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use rays::{ray_accessibility, FAN_DIRECTIONS};

use crate::error::{Error, Result};
use crate::scalar::{lit, pair, to_f64, Scalar};
use crate::series_core::{dilatation_of, AnalyticSeries, GridSpec, HarmonicMap, PolyharmonicMap};
use crate::univalence::{
    boundary_image, is_univalent_harmonic, slice_univalence_test, Status, Verdict, Witness,
    BOUNDARY_SAMPLES,
};

/// Normalization tolerance on `a_0`, `b_0` and `a_1 − 1`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-14;
/// `sup |a_f|` must stay below `1 − DILATATION_MARGIN`.
pub const DILATATION_MARGIN: f64 = 1e-9;
/// `|f_z|` must exceed this on the grid.
pub const FZ_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KHReport {
    /// `Σ_{n≥2} n²|a_n| + Σ_{n≥1} n²|b_n|`
    pub sum_value: f64,
    /// `a_0 = b_0 = 0` and `a_1 = 1`, so that `F(0) = 0` and `F_z(0) = 1`.
    pub normalized: bool,
    pub passes: bool,
}

/// Sufficient coefficient condition for membership in the convex class: a
/// normalized `F` with `Σ_{n≥2} n²|a_n| + Σ_{n≥1} n²|b_n| < 1`. Failing it proves
/// nothing.
pub fn kh_coefficient_test<T: Scalar>(f: &HarmonicMap<T>) -> KHReport {
    let weighted = |s: &AnalyticSeries<T>, from: usize| -> f64 {
        s.coeffs()
            .iter()
            .enumerate()
            .skip(from)
            .fold(0.0, |acc, (n, c)| acc + (n * n) as f64 * to_f64(c.norm()))
    };
    let sum_value = weighted(&f.h, 2) + weighted(&f.g, 1);
    let eps = NORMALIZATION_TOLERANCE;
    let normalized = to_f64(f.h.coeff(0).norm()) <= eps
        && to_f64(f.g.coeff(0).norm()) <= eps
        && to_f64((f.h.coeff(1) - Complex::new(T::one(), T::zero())).norm()) <= eps;
    KHReport {
        sum_value,
        normalized,
        passes: normalized && sum_value < 1.0,
    }
}

/// `f = H + |z|² conj(G)` from `F = H + conj(G)`: components `(H, 0)` and `(0, G)`.
pub fn build_ctc_biharmonic<T: Scalar>(f: &HarmonicMap<T>) -> PolyharmonicMap<T> {
    PolyharmonicMap::biharmonic(
        HarmonicMap::analytic(f.h.clone()),
        HarmonicMap::new(AnalyticSeries::zero(), f.g.clone()),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    FullyCloseToConvex,
    Failed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CTCCertificate {
    pub kh: KHReport,
    pub local_univalence: Verdict,
    /// Largest `|a_f|` over the grid.
    pub sup_dilatation: f64,
    pub slice: Verdict,
    pub conclusion: Conclusion,
}

/// Scans the grid (and the centre) for `|f_z| ≤ FZ_FLOOR` or `|a_f| ≥ 1 − margin`.
pub fn local_univalence<T: Scalar>(f: &PolyharmonicMap<T>, grid: &GridSpec) -> (Verdict, f64) {
    let mut points = vec![Complex::new(T::zero(), T::zero())];
    points.extend(grid.points(T::one()));
    let floor: T = lit(FZ_FLOOR);
    let bound = 1.0 - DILATATION_MARGIN;
    let mut sup = 0.0f64;
    let mut first: Option<Witness> = None;
    for z in points {
        let w = f.wirtinger_unchecked(z);
        if w.dz.norm() <= floor {
            first.get_or_insert_with(|| Witness::new("f_z_floor", pair(z), to_f64(w.dz.norm())));
            continue;
        }
        let a = to_f64(
            dilatation_of(w, z)
                .map(|a| a.norm())
                .unwrap_or(T::infinity()),
        );
        sup = sup.max(a);
        if !(a < bound) {
            first.get_or_insert_with(|| Witness::new("dilatation", pair(z), a));
        }
    }
    let verdict = match first {
        Some(w) => Verdict::fail(
            *grid,
            vec![w],
            format!("local univalence violated; sup |a_f| = {sup}"),
        ),
        None => Verdict::pass(
            *grid,
            format!("sup |a_f| = {sup} and f_z bounded away from zero"),
        ),
    };
    (verdict, sup)
}

/// Runs the coefficient test, builds `f = H + |z|² conj(G)`, checks local
/// univalence on the grid and runs the slice test.
///
/// A certified failure of either grid check refutes univalence of `f` and gives
/// `Failed`. Otherwise the conclusion is `FullyCloseToConvex` only when the
/// coefficient test also passes, and `Inconclusive` when it does not (the
/// convexity hypothesis is then unverified, not refuted).
pub fn certify_ctc<T: Scalar>(
    f: &HarmonicMap<T>,
    grid: &GridSpec,
    radii: &[T],
) -> Result<CTCCertificate> {
    let kh = kh_coefficient_test(f);
    let map = build_ctc_biharmonic(f);
    let (local, sup_dilatation) = local_univalence(&map, grid);
    let slice = slice_univalence_test(&map, radii, grid)?;
    let conclusion = if local.failed() || slice.failed() {
        Conclusion::Failed
    } else if kh.passes && local.passed() && slice.passed() {
        Conclusion::FullyCloseToConvex
    } else {
        Conclusion::Inconclusive
    };
    Ok(CTCCertificate {
        kh,
        local_univalence: local,
        sup_dilatation,
        slice,
        conclusion,
    })
}

/// 16 points on the unit circle plus `ε = 0`.
pub fn default_epsilon_samples<T: Scalar>() -> Vec<Complex<T>> {
    let mut out: Vec<Complex<T>> = (0..16)
        .map(|k| crate::scalar::cis(T::TAU() * lit(k as f64 / 16.0)))
        .collect();
    out.push(Complex::new(T::zero(), T::zero()));
    out
}

/// Numerical surrogate for close-to-convexity of every `H + εG` on `|z| < r`:
/// each map must pass the univalence test and every vertex of its boundary image
/// must see infinity along some ray of a 64-direction fan.
pub fn epsilon_family_probe<T: Scalar>(
    h: &AnalyticSeries<T>,
    g: &AnalyticSeries<T>,
    eps_samples: &[Complex<T>],
    r: T,
    grid: &GridSpec,
) -> Result<Verdict> {
    if eps_samples.is_empty() {
        return Err(Error::InvalidParameter("no ε samples".into()));
    }
    if let Some(e) = eps_samples
        .iter()
        .find(|e| e.norm() > T::one() + lit(1e-12))
    {
        return Err(Error::InvalidParameter(format!(
            "|ε| = {} exceeds one",
            e.norm()
        )));
    }
    if !(r > T::zero() && r < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "disk radius {r} outside (0, 1)"
        )));
    }
    let verdicts = eps_samples
        .par_iter()
        .map(|&eps| {
            let map = HarmonicMap::analytic(h.add_scaled(g, eps));
            let verdict = is_univalent_harmonic(&map, r, grid)?;
            if !verdict.passed() {
                return Ok(verdict);
            }
            let curve = boundary_image(&map, r, BOUNDARY_SAMPLES)?;
            Ok(match ray_accessibility(&curve) {
                Some(blocked) => Verdict::fail(
                    *grid,
                    vec![blocked],
                    "a boundary vertex has no escaping ray in the fan",
                ),
                None => verdict,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let tag = |eps: &Complex<T>| Witness::new("epsilon", pair(*eps), to_f64(eps.norm()));
    if let Some((eps, v)) = eps_samples.iter().zip(&verdicts).find(|(_, v)| v.failed()) {
        let mut witnesses = vec![tag(eps)];
        witnesses.extend(v.witnesses.iter().cloned());
        return Ok(Verdict::fail(
            *grid,
            witnesses,
            format!("H + εG fails at ε = {eps}: {}", v.notes),
        ));
    }
    if let Some((eps, v)) = eps_samples
        .iter()
        .zip(&verdicts)
        .find(|(_, v)| v.status == Status::Inconclusive)
    {
        return Ok(Verdict::inconclusive(
            *grid,
            format!("ε = {eps} inconclusive: {}", v.notes),
        ));
    }
    Ok(Verdict::pass(
        *grid,
        format!(
            "{} maps H + εG univalent with ray-accessible images on |z| < {r}",
            eps_samples.len()
        ),
    ))
}

#[cfg(test)]
mod tests;
