//! Univalence checks: winding numbers of boundary images, Jacobian sign scans,
//! the slice test for polyharmonic maps and the bounded-range probe.
//!
//! A certified failure is backed by a concrete witness (a non-positive Jacobian,
//! a boundary crossing or a winding number other than one). A certified pass only
//! means no violation was found at the grid's resolution.

mod curve;
mod verdict;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use curve::{point_segment_distance, segment_intersection, Crossing, Curve, NEAR_CURVE};
pub use verdict::{Status, Verdict, Witness};

use crate::error::{Error, Result};
use crate::scalar::{lit, pair, polar, to_f64, Scalar};
use crate::series_core::{GridSpec, HarmonicMap, PolyharmonicMap};

/// `J ≤ JACOBIAN_FLOOR` counts as a vanishing Jacobian.
pub const JACOBIAN_FLOOR: f64 = 1e-12;
/// Samples on each boundary circle before refinement.
pub const BOUNDARY_SAMPLES: usize = 1024;
/// Interior degree-check points sit on these fractions of the disk radius.
pub const INTERIOR_FRACTIONS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
pub const INTERIOR_ANGLES: usize = 5;
/// Grids below this resolution never certify a pass.
pub const MIN_ANGULAR_COUNT: usize = 8;
pub const MIN_GRID_POINTS: usize = 16;
/// Range bound above which the range probe flags a map.
pub const RANGE_BOUND: f64 = 1e6;

/// Closed image of the circle `|z| = r` under `map`, parametrized by angle.
pub fn boundary_image<T: Scalar>(map: &HarmonicMap<T>, r: T, samples: usize) -> Result<Curve<T>> {
    Curve::sample(
        |t| map.eval_unchecked(polar(r, t)),
        T::zero(),
        T::TAU(),
        samples,
        true,
    )
}

fn polyharmonic_boundary_image<T: Scalar>(
    map: &PolyharmonicMap<T>,
    r: T,
    samples: usize,
) -> Result<Curve<T>> {
    Curve::sample(
        |t| map.eval_unchecked(polar(r, t)),
        T::zero(),
        T::TAU(),
        samples,
        true,
    )
}

/// Interior points used for the degree check in the disk of radius `r`.
pub fn interior_points<T: Scalar>(r: T) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(INTERIOR_FRACTIONS.len() * INTERIOR_ANGLES);
    for (i, frac) in INTERIOR_FRACTIONS.iter().enumerate() {
        for j in 0..INTERIOR_ANGLES {
            // stagger rings so the points do not line up along rays
            let theta = T::TAU() * lit((j as f64 + 0.37 * i as f64) / INTERIOR_ANGLES as f64);
            out.push(polar(r * lit(*frac), theta));
        }
    }
    out
}

/// First sample point where the Jacobian of `map` is not strictly positive.
pub(crate) fn jacobian_violation<T: Scalar>(
    map: &PolyharmonicMap<T>,
    points: impl IntoIterator<Item = Complex<T>>,
    label: &str,
) -> Option<Witness> {
    let floor: T = lit(JACOBIAN_FLOOR);
    points.into_iter().find_map(|z| {
        let j = map.wirtinger_unchecked(z).jacobian();
        (j.is_nan() || j <= floor).then(|| Witness::new(label, pair(z), to_f64(j)))
    })
}

fn grid_with_origin<T: Scalar>(grid: &GridSpec, scale: T) -> Vec<Complex<T>> {
    let mut points = vec![Complex::new(T::zero(), T::zero())];
    points.extend(grid.points(scale));
    points
}

fn grid_is_resolvable(grid: &GridSpec) -> bool {
    grid.angular_count >= MIN_ANGULAR_COUNT && grid.len() >= MIN_GRID_POINTS
}

enum Winding {
    Value(i64),
    Unresolved(Error),
}

/// Winding of the boundary image about `w0`, resampling once at twice the
/// density when the first sampling is too coarse.
fn winding_with_refinement<T: Scalar>(
    base: &Curve<T>,
    refined: &mut Option<Curve<T>>,
    resample: impl Fn() -> Result<Curve<T>>,
    w0: Complex<T>,
) -> Result<Winding> {
    match base.winding_number(w0) {
        Ok(n) => Ok(Winding::Value(n)),
        Err(Error::CurveTooCoarse { .. }) => {
            if refined.is_none() {
                *refined = Some(resample()?);
            }
            match refined.as_ref().unwrap().winding_number(w0) {
                Ok(n) => Ok(Winding::Value(n)),
                Err(e @ (Error::CurveTooCoarse { .. } | Error::PointTooClose { .. })) => {
                    Ok(Winding::Unresolved(e))
                }
                Err(e) => Err(e),
            }
        }
        Err(e @ Error::PointTooClose { .. }) => Ok(Winding::Unresolved(e)),
        Err(e) => Err(e),
    }
}

fn crossing_witness<T: Scalar>(curve: &Curve<T>, crossing: &Crossing<T>, r: T) -> Witness {
    let params = curve.params();
    let n = params.len();
    let preimage = |idx: usize| pair(polar(r, params[idx % n]));
    let (a0, a1) = curve.segment(crossing.first);
    let (b0, b1) = curve.segment(crossing.second);
    Witness {
        preimages: vec![preimage(a0), preimage(a1), preimage(b0), preimage(b1)],
        ..Witness::new(
            "boundary_crossing",
            pair(crossing.point),
            to_f64(params[crossing.first]),
        )
    }
}

/// Numerical univalence test of a harmonic map on the disk `|z| < r`.
///
/// Fails on a non-positive Jacobian at any grid point (or the centre), a
/// self-crossing of the image of `|z| = r`, or a winding number other than one
/// about the image of an interior point. Unresolvable windings and grids below
/// the minimum resolution give an inconclusive verdict.
pub fn is_univalent_harmonic<T: Scalar>(
    map: &HarmonicMap<T>,
    r: T,
    grid: &GridSpec,
) -> Result<Verdict> {
    is_univalent_harmonic_with(map, r, grid, BOUNDARY_SAMPLES)
}

pub fn is_univalent_harmonic_with<T: Scalar>(
    map: &HarmonicMap<T>,
    r: T,
    grid: &GridSpec,
    boundary_samples: usize,
) -> Result<Verdict> {
    if !(r > T::zero() && r < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "disk radius {r} outside (0, 1)"
        )));
    }
    let as_poly = PolyharmonicMap::harmonic(map.clone());
    if let Some(w) = jacobian_violation(&as_poly, grid_with_origin(grid, r), "jacobian") {
        return Ok(Verdict::fail(
            *grid,
            vec![w],
            format!("Jacobian not positive inside |z| < {r}"),
        ));
    }

    let boundary = boundary_image(map, r, boundary_samples)?;
    if let Some(crossing) = boundary.self_intersection() {
        return Ok(Verdict::fail(
            *grid,
            vec![crossing_witness(&boundary, &crossing, r)],
            format!("image of |z| = {r} crosses itself"),
        ));
    }

    let mut refined = None;
    let mut unresolved = Vec::new();
    for z0 in interior_points(r) {
        let w0 = map.eval_unchecked(z0);
        match winding_with_refinement(
            &boundary,
            &mut refined,
            || boundary_image(map, r, 2 * boundary_samples),
            w0,
        )? {
            Winding::Value(1) => {}
            Winding::Value(n) => {
                return Ok(Verdict::fail(
                    *grid,
                    vec![Witness::new("winding", pair(z0), n as f64)],
                    format!("boundary image of |z| = {r} winds {n} times about an interior image"),
                ));
            }
            Winding::Unresolved(e) => unresolved.push(e.to_string()),
        }
    }
    if !unresolved.is_empty() {
        return Ok(Verdict::inconclusive(
            *grid,
            format!(
                "degree check unresolved at {} points: {}",
                unresolved.len(),
                unresolved[0]
            ),
        ));
    }
    if !grid_is_resolvable(grid) {
        return Ok(Verdict::inconclusive(
            *grid,
            format!(
                "grid {}x{} below the minimum resolution ({} angular, {} points)",
                grid.radial_count, grid.angular_count, MIN_ANGULAR_COUNT, MIN_GRID_POINTS
            ),
        ));
    }
    Ok(Verdict::pass(
        *grid,
        format!("no violation in |z| < {r} at this resolution"),
    ))
}

fn check_radii<T: Scalar>(radii: &[T]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::InvalidParameter("radius list is empty".into()));
    }
    if radii.iter().any(|&r| !(r > T::zero() && r < T::one())) {
        return Err(Error::InvalidParameter("radii must lie in (0, 1)".into()));
    }
    if radii.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(
            "radii must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Slice test: `f` is univalent iff every slice `g_r` is univalent on `|z| < r`,
/// given `f` sense-preserving.
///
/// Slices are tested concurrently; the verdict reports the smallest failing radius.
pub fn slice_univalence_test<T: Scalar>(
    f: &PolyharmonicMap<T>,
    radii: &[T],
    grid: &GridSpec,
) -> Result<Verdict> {
    check_radii(radii)?;
    if let Some(w) = jacobian_violation(f, grid_with_origin(grid, T::one()), "jacobian_f") {
        return Ok(Verdict::fail(
            *grid,
            vec![w],
            "map is not sense-preserving on the grid",
        ));
    }
    let verdicts = radii
        .par_iter()
        .map(|&r| is_univalent_harmonic(&f.slice(r)?, r, grid))
        .collect::<Result<Vec<_>>>()?;

    if let Some((r, v)) = radii.iter().zip(&verdicts).find(|(_, v)| v.failed()) {
        let mut witnesses = vec![Witness::new("slice_radius", [to_f64(*r), 0.0], to_f64(*r))];
        witnesses.extend(v.witnesses.iter().cloned());
        return Ok(Verdict::fail(
            *grid,
            witnesses,
            format!("slice at r = {r} is not univalent: {}", v.notes),
        ));
    }
    if let Some((r, v)) = radii
        .iter()
        .zip(&verdicts)
        .find(|(_, v)| v.status == Status::Inconclusive)
    {
        return Ok(Verdict::inconclusive(
            *grid,
            format!("slice at r = {r} inconclusive: {}", v.notes),
        ));
    }
    Ok(Verdict::pass(
        *grid,
        format!(
            "{} slices univalent for r in [{}, {}]",
            radii.len(),
            radii[0],
            radii[radii.len() - 1]
        ),
    ))
}

/// Growth of `M(r) = max_{|z|=r} |f(z)|` over a radius sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeReport {
    pub radii: Vec<f64>,
    pub max_modulus: Vec<f64>,
    /// All `M(r)` finite and at most `RANGE_BOUND`.
    pub bounded: bool,
    /// Increase of `M` per unit of `log(1/(1−r))` over the last two radii.
    pub log_slope: f64,
    /// Set when the range is unbounded or still growing at least logarithmically.
    pub flagged: bool,
    pub notes: String,
}

/// Log-slope above which `M(r)` is considered to still be growing.
pub const GROWTH_SLOPE: f64 = 0.1;

/// Bounded-range probe for a map already certified univalent: a univalent
/// polyharmonic map of the disk cannot cover the plane, so a certified map whose
/// `M(r)` stays bounded as `r → 1` is consistent; growth is flagged for review.
pub fn range_consistency_probe<T: Scalar>(
    f: &PolyharmonicMap<T>,
    radii: &[T],
) -> Result<RangeReport> {
    check_radii(radii)?;
    let max_modulus: Vec<f64> = radii
        .par_iter()
        .map(|&r| {
            polyharmonic_boundary_image(f, r, BOUNDARY_SAMPLES).map(|c| {
                c.points()
                    .iter()
                    .map(|p| to_f64(p.norm()))
                    .fold(0.0, f64::max)
            })
        })
        .collect::<Result<_>>()?;
    let radii: Vec<f64> = radii.iter().map(|&r| to_f64(r)).collect();
    let bounded = max_modulus
        .iter()
        .all(|m| m.is_finite() && *m <= RANGE_BOUND);
    let log_slope = match (radii.len(), max_modulus.len()) {
        (n, _) if n >= 2 => {
            let l = |r: f64| -(1.0 - r).ln();
            (max_modulus[n - 1] - max_modulus[n - 2]) / (l(radii[n - 1]) - l(radii[n - 2]))
        }
        _ => 0.0,
    };
    let flagged = !bounded || log_slope > GROWTH_SLOPE;
    let last = max_modulus[max_modulus.len() - 1];
    let notes = if flagged {
        format!(
            "M({}) = {last:.6e} still growing (log-slope {log_slope:.3}); review",
            radii[radii.len() - 1]
        )
    } else {
        format!("range bounded by {last:.6e} on the sampled radii")
    };
    Ok(RangeReport {
        radii,
        max_modulus,
        bounded,
        log_slope,
        flagged,
        notes,
    })
}
