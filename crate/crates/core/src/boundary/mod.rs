//! Boundary behaviour of biharmonic maps `f = F_1 + |z|² F_2`: radial boundary
//! values, the jump indicator `(1−r)|H_1′ + H_2′|`, the `o(1/(1−z))` probe on `F_2`,
//! the curves `Γ_{m,θ₀}` and the continuity integral along them.
//!
//! Radial limits stand in for unrestricted limits, and divergence of the
//! continuity integral is judged from growth over a finite list of cutoffs.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cis, lit, pair, polar, to_f64, Scalar};
use crate::series_core::{check_domain, AnalyticSeries, HarmonicMap, PolyharmonicMap};
use crate::univalence::Curve;

/// Number of trailing radii or values the verdicts look at.
pub const TAIL_LEN: usize = 5;
pub const JUMP_THRESHOLD: f64 = 1e-3;
pub const CONTINUITY_THRESHOLD: f64 = 1e-6;
/// Relative width `(max − min)/mean` a jump tail must stay within.
pub const JUMP_BAND: f64 = 0.10;
pub const SMALL_O_THRESHOLD: f64 = 1e-3;
/// Series of at least this degree are read as truncations of infinite series.
pub const TRUNCATION_DEGREE: usize = 64;
/// Largest weight `r^N` the dropped tail of a truncated series may carry.
pub const TRUNCATION_TAIL_WEIGHT: f64 = 0.01;
pub const PHI_FLOOR: f64 = 1e-14;
/// Successive partial integrals closer than this count as converged.
pub const CAUCHY_TOLERANCE: f64 = 1e-4;
/// Allowed shortfall of the last log-slope relative to the previous one.
pub const LOG_GROWTH_SLACK: f64 = 0.20;

/// Largest radius at which a truncated series still stands in for its infinite
/// counterpart, or `None` for genuine polynomials (degree below `TRUNCATION_DEGREE`).
pub fn truncation_radius_cap(degree: usize) -> Option<f64> {
    (degree >= TRUNCATION_DEGREE).then(|| TRUNCATION_TAIL_WEIGHT.powf(1.0 / degree as f64))
}

/// Radii `1 − 10^{−k/8}`, `k = 1..=88`: dense enough that a truncation cap keeps
/// at least five of them, and reaching within `1e-11` of the circle.
pub fn default_boundary_radii() -> Vec<f64> {
    (1..=88)
        .map(|k| 1.0 - 10f64.powf(-(k as f64) / 8.0))
        .collect()
}

fn check_boundary_radii<T: Scalar>(radii: &[T]) -> Result<()> {
    if radii.len() < TAIL_LEN {
        return Err(Error::InvalidParameter(format!(
            "need at least {TAIL_LEN} radii, got {}",
            radii.len()
        )));
    }
    if radii.iter().any(|&r| !(r > T::zero() && r < T::one())) {
        return Err(Error::InvalidParameter("radii must lie in (0, 1)".into()));
    }
    if radii.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(
            "radii must be strictly increasing".into(),
        ));
    }
    if radii[radii.len() - 1] < lit(0.999) {
        return Err(Error::InvalidParameter(
            "the last radius must be at least 0.999".into(),
        ));
    }
    Ok(())
}

fn capped<T: Scalar>(radii: &[T], cap: Option<f64>) -> Result<Vec<T>> {
    let kept: Vec<T> = match cap {
        Some(c) => radii.iter().copied().filter(|&r| r <= lit(c)).collect(),
        None => radii.to_vec(),
    };
    if kept.len() < TAIL_LEN {
        return Err(Error::InvalidParameter(format!(
            "only {} radii below the truncation cap {:?}",
            kept.len(),
            cap
        )));
    }
    Ok(kept)
}

fn tail(values: &[f64]) -> &[f64] {
    &values[values.len().saturating_sub(TAIL_LEN)..]
}

fn non_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0])
}

/// Radial estimate of the boundary value `f*(e^{it})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialLimit {
    pub t: f64,
    pub estimate: [f64; 2],
    pub radius: f64,
    /// Largest `|f(r_{i+1} e^{it}) − f(r_i e^{it})|` over the last five radii.
    pub tail_diagnostic: f64,
    /// Last over first successive difference within the tail.
    pub decay_ratio: f64,
    /// Successive differences shrink by at least half across the tail.
    pub converging: bool,
}

/// Evaluates `f` along the ray at angle `t` and reports the value at the largest
/// radius with a Cauchy-tail diagnostic. Only the radial limit is approximated.
pub fn boundary_function_radial<T: Scalar>(
    f: &PolyharmonicMap<T>,
    t: T,
    radii: &[T],
) -> Result<RadialLimit> {
    check_boundary_radii(radii)?;
    let values: Vec<Complex<T>> = radii
        .iter()
        .map(|&r| f.eval(polar(r, t)))
        .collect::<Result<_>>()?;
    let diffs: Vec<f64> = values
        .windows(2)
        .map(|w| to_f64((w[1] - w[0]).norm()))
        .collect();
    let diffs = &diffs[diffs.len().saturating_sub(TAIL_LEN - 1)..];
    let tail_diagnostic = diffs.iter().copied().fold(0.0, f64::max);
    let decay_ratio = if diffs[0] > 0.0 {
        diffs[diffs.len() - 1] / diffs[0]
    } else {
        0.0
    };
    Ok(RadialLimit {
        t: to_f64(t),
        estimate: pair(values[values.len() - 1]),
        radius: to_f64(radii[radii.len() - 1]),
        tail_diagnostic,
        decay_ratio,
        converging: decay_ratio <= 0.5,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JumpVerdict {
    Jump,
    Continuous,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpReport {
    pub theta0: f64,
    pub c_estimate: f64,
    pub r_sequence: Vec<f64>,
    pub values: Vec<f64>,
    pub verdict: JumpVerdict,
    /// Radius cap applied because the derivative series is a long truncation.
    pub radius_cap: Option<f64>,
}

/// `v(r) = (1 − r)|H_1′(re^{iθ₀}) + H_2′(re^{iθ₀})|` along the radii.
///
/// A jump is reported when the last five values sit in a 10% band around a mean
/// above `JUMP_THRESHOLD`; continuity when they are all below
/// `CONTINUITY_THRESHOLD` and non-increasing.
pub fn jump_indicator<T: Scalar>(
    h1: &AnalyticSeries<T>,
    h2: &AnalyticSeries<T>,
    theta0: T,
    radii: &[T],
) -> Result<JumpReport> {
    check_boundary_radii(radii)?;
    let derivative = h1
        .derivative()
        .add_scaled(&h2.derivative(), Complex::new(T::one(), T::zero()));
    let radius_cap = truncation_radius_cap(h1.degree().max(h2.degree()));
    let used = capped(radii, radius_cap)?;
    let dir = cis(theta0);
    let values: Vec<f64> = used
        .iter()
        .map(|&r| {
            Ok(to_f64(
                (T::one() - r) * derivative.eval(dir.scale(r))?.norm(),
            ))
        })
        .collect::<Result<_>>()?;

    let last = tail(&values);
    let mean = last.iter().sum::<f64>() / last.len() as f64;
    let spread = last.iter().copied().fold(f64::MIN, f64::max)
        - last.iter().copied().fold(f64::MAX, f64::min);
    let verdict = if mean > JUMP_THRESHOLD && spread <= JUMP_BAND * mean {
        JumpVerdict::Jump
    } else if last.iter().all(|&v| v < CONTINUITY_THRESHOLD) && non_increasing(last) {
        JumpVerdict::Continuous
    } else {
        JumpVerdict::Inconclusive
    };
    Ok(JumpReport {
        theta0: to_f64(theta0),
        c_estimate: mean,
        r_sequence: used.iter().map(|&r| to_f64(r)).collect(),
        values,
        verdict,
        radius_cap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallOReport {
    pub theta0: f64,
    pub holds: bool,
    pub r_sequence: Vec<f64>,
    /// `(1 − r)|F_2(re^{iθ₀})|`, the distance to `e^{iθ₀}` times `|F_2|`.
    pub values: Vec<f64>,
    pub radius_cap: Option<f64>,
}

/// Advisory check of `F_2(z) = o(1/(1 − z))` as `z → e^{iθ₀}` radially: the
/// product of the distance to the boundary point and `|F_2|` must fall below
/// `SMALL_O_THRESHOLD` and be non-increasing over the tail.
pub fn small_o_probe<T: Scalar>(
    f2: &HarmonicMap<T>,
    theta0: T,
    radii: &[T],
) -> Result<SmallOReport> {
    check_boundary_radii(radii)?;
    let radius_cap = truncation_radius_cap(f2.degree());
    let used = capped(radii, radius_cap)?;
    let dir = cis(theta0);
    let values: Vec<f64> = used
        .iter()
        .map(|&r| Ok(to_f64((T::one() - r) * f2.eval(dir.scale(r))?.norm())))
        .collect::<Result<_>>()?;
    let last = tail(&values);
    let holds = last[last.len() - 1] < SMALL_O_THRESHOLD && non_increasing(last);
    Ok(SmallOReport {
        theta0: to_f64(theta0),
        holds,
        r_sequence: used.iter().map(|&r| to_f64(r)).collect(),
        values,
        radius_cap,
    })
}

/// Samples of `Γ_{m,θ₀}(θ) = (1 − m|θ − θ₀|) e^{iθ}` for `0 < |θ − θ₀| ≤ min{π, 1/m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaCurve<T> {
    pub m: T,
    pub theta0: T,
    /// `n` samples left of `θ₀` followed by `n` samples right of it, parameter `θ`.
    pub samples: Curve<T>,
    pub per_side: usize,
}

impl<T: Scalar> GammaCurve<T> {
    /// Half-width `min{π, 1/m}` of the parameter range.
    pub fn half_width(&self) -> T {
        T::PI().min(self.m.recip())
    }
}

pub fn gamma_curve<T: Scalar>(m: T, theta0: T, n: usize) -> Result<GammaCurve<T>> {
    if !(m > T::zero()) || !m.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "slope m = {m} must be positive"
        )));
    }
    if n < 16 {
        return Err(Error::InvalidParameter(format!(
            "need at least 16 samples per side, got {n}"
        )));
    }
    let width = T::PI().min(m.recip());
    let nf: T = lit(n as f64);
    let offsets: Vec<T> = (0..n)
        .map(|k| -width * (nf - lit(k as f64)) / nf)
        .chain((1..=n).map(|k| width * lit(k as f64) / nf))
        .collect();
    let params: Vec<T> = offsets.iter().map(|&d| theta0 + d).collect();
    let points = offsets
        .iter()
        .zip(&params)
        .map(|(&d, &theta)| polar(T::one() - m * d.abs(), theta))
        .collect();
    let samples = Curve::new(params, points, false)?;
    if samples.len() != 2 * n {
        return Err(Error::InvalidParameter(
            "Γ samples collapsed; m too large for n".into(),
        ));
    }
    Ok(GammaCurve {
        m,
        theta0,
        samples,
        per_side: n,
    })
}

/// `φ = (G_1′ + G_2′)/(H_1′ + H_2′)`, the dilatation of `F_1 + F_2`.
pub fn phi_quotient<T: Scalar>(
    f1: &HarmonicMap<T>,
    f2: &HarmonicMap<T>,
    z: Complex<T>,
) -> Result<Complex<T>> {
    check_domain(z)?;
    let (_, h1) = f1.h.eval_with_derivative(z)?;
    let (_, h2) = f2.h.eval_with_derivative(z)?;
    let (_, g1) = f1.g.eval_with_derivative(z)?;
    let (_, g2) = f2.g.eval_with_derivative(z)?;
    let denominator = h1 + h2;
    if denominator.norm() <= lit(PHI_FLOOR) {
        return Err(Error::Degenerate {
            z: pair(z),
            what: "H_1' + H_2'",
            modulus: to_f64(denominator.norm()),
        });
    }
    Ok((g1 + g2) / denominator)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralVerdict {
    Divergent,
    Convergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub theta0: f64,
    pub m: f64,
    pub samples_per_side: usize,
    pub cutoffs: Vec<f64>,
    pub partial_integrals: Vec<f64>,
    /// Least-squares fit `I(δ) ≈ slope·log(1/δ) + intercept`.
    pub slope: f64,
    pub intercept: f64,
    /// Largest fit residual relative to the fitted rise over the cutoff range.
    pub relative_residual: f64,
    pub verdict: IntegralVerdict,
    /// Samples where `|φ| ≥ 1`, violating the standing hypothesis.
    pub phi_violations: usize,
    pub max_phi: f64,
    pub hypothesis_holds: bool,
}

/// Partial integrals of `(1 − |φ|²)/(1 − |z|²) |dz|` along `Γ_{m,θ₀}` with the
/// part `|θ − θ₀| < δ` removed, for each cutoff `δ`.
pub fn continuity_integral<T: Scalar>(
    f1: &HarmonicMap<T>,
    f2: &HarmonicMap<T>,
    gamma: &GammaCurve<T>,
    cutoffs: &[T],
) -> Result<DivergenceReport> {
    continuity_integral_with(|z| phi_quotient(f1, f2, z), gamma, cutoffs)
}

/// As [`continuity_integral`] with an arbitrary dilatation `phi`.
pub fn continuity_integral_with<T: Scalar>(
    phi: impl Fn(Complex<T>) -> Result<Complex<T>> + Sync,
    gamma: &GammaCurve<T>,
    cutoffs: &[T],
) -> Result<DivergenceReport> {
    if !(gamma.m < T::FRAC_1_PI()) {
        return Err(Error::InvalidParameter(format!(
            "m = {} outside (0, 1/π)",
            gamma.m
        )));
    }
    if cutoffs.len() < 3 {
        return Err(Error::InvalidParameter(
            "need at least three cutoffs".into(),
        ));
    }
    if cutoffs.iter().any(|&d| !(d > T::zero())) || cutoffs.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter(
            "cutoffs must be positive and strictly decreasing".into(),
        ));
    }

    let points = gamma.samples.points();
    let params = gamma.samples.params();
    let phis: Vec<Complex<T>> = points.par_iter().map(|&z| phi(z)).collect::<Result<_>>()?;
    let integrand: Vec<T> = points
        .iter()
        .zip(&phis)
        .map(|(z, p)| (T::one() - p.norm_sqr()) / (T::one() - z.norm_sqr()))
        .collect();
    let phi_moduli: Vec<f64> = phis.iter().map(|p| to_f64(p.norm())).collect();
    let phi_violations = phi_moduli.iter().filter(|&&p| p >= 1.0).count();
    let max_phi = phi_moduli.iter().copied().fold(0.0, f64::max);

    let n = gamma.per_side;
    let partial_integrals: Vec<f64> = cutoffs
        .iter()
        .map(|&delta| {
            let keep = |i: usize| (params[i] - gamma.theta0).abs() >= delta;
            let mut total = T::zero();
            for side in [0..n, n..2 * n] {
                for i in side.start..side.end - 1 {
                    if keep(i) && keep(i + 1) {
                        let ds = (points[i + 1] - points[i]).norm();
                        total = total + (integrand[i] + integrand[i + 1]) * ds / lit(2.0);
                    }
                }
            }
            to_f64(total)
        })
        .collect();

    let logs: Vec<f64> = cutoffs.iter().map(|&d| -to_f64(d).ln()).collect();
    let (slope, intercept) = least_squares(&logs, &partial_integrals);
    let rise = slope.abs() * (logs[logs.len() - 1] - logs[0]);
    let worst = logs
        .iter()
        .zip(&partial_integrals)
        .map(|(l, i)| (i - (slope * l + intercept)).abs())
        .fold(0.0, f64::max);
    let relative_residual = if rise > 0.0 {
        worst / rise
    } else {
        f64::INFINITY
    };

    let k = partial_integrals.len();
    let steps: Vec<f64> = (k - 3..k - 1)
        .map(|i| (partial_integrals[i + 1] - partial_integrals[i]) / (logs[i + 1] - logs[i]))
        .collect();
    let cauchy = partial_integrals
        .windows(2)
        .all(|w| (w[1] - w[0]).abs() < CAUCHY_TOLERANCE);
    let verdict = if cauchy {
        IntegralVerdict::Convergent
    } else if steps[0] > 0.0 && steps[1] >= (1.0 - LOG_GROWTH_SLACK) * steps[0] {
        IntegralVerdict::Divergent
    } else {
        IntegralVerdict::Inconclusive
    };

    Ok(DivergenceReport {
        theta0: to_f64(gamma.theta0),
        m: to_f64(gamma.m),
        samples_per_side: n,
        cutoffs: cutoffs.iter().map(|&d| to_f64(d)).collect(),
        partial_integrals,
        slope,
        intercept,
        relative_residual,
        verdict,
        phi_violations,
        max_phi,
        hypothesis_holds: phi_violations == 0,
    })
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Samples per side so the `Γ` spacing is a twentieth of the smallest cutoff.
pub fn samples_for_cutoffs(m: f64, smallest_cutoff: f64) -> usize {
    let width = std::f64::consts::PI.min(1.0 / m);
    ((20.0 * width / smallest_cutoff).ceil() as usize).max(1024)
}
