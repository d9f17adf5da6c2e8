use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, pair, polar, to_f64, Scalar};

/// Slack allowed on the unit-disk domain check.
pub const DOMAIN_SLACK: f64 = 1e-12;

pub(crate) fn check_domain<T: Scalar>(z: Complex<T>) -> Result<()> {
    let modulus = z.norm();
    if modulus > T::one() + lit(DOMAIN_SLACK) || !modulus.is_finite() {
        return Err(Error::Domain {
            z: pair(z),
            modulus: to_f64(modulus),
        });
    }
    Ok(())
}

/// Truncated power series `Σ c_n z^n` on the closed unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSeries<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> AnalyticSeries<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter(
                "a series needs at least one coefficient".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    /// The zero series `[0]`.
    pub fn zero() -> Self {
        Self {
            coeffs: vec![Complex::new(T::zero(), T::zero())],
        }
    }

    /// Series with real coefficients.
    pub fn from_real(coeffs: &[T]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    /// The identity `z`.
    pub fn identity() -> Self {
        Self::from_real(&[T::zero(), T::one()]).unwrap()
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Coefficient of `z^n`, zero past the stored length.
    pub fn coeff(&self, n: usize) -> Complex<T> {
        self.coeffs
            .get(n)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// Index of the last nonzero coefficient (0 for the zero series).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != Complex::new(T::zero(), T::zero()))
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re == T::zero() && c.im == T::zero())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c.scale(lit(n as f64)))
            .collect();
        Self { coeffs }
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Coefficient-wise `self + factor * other`.
    pub fn add_scaled(&self, other: &Self, factor: Complex<T>) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|n| self.coeff(n) + other.coeff(n) * factor)
            .collect();
        Self { coeffs }
    }

    /// Horner evaluation, `|z| ≤ 1` required.
    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        check_domain(z)?;
        Ok(self.eval_unchecked(z))
    }

    /// Value and first derivative by a single nested pass.
    pub fn eval_with_derivative(&self, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        check_domain(z)?;
        Ok(self.eval_with_derivative_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + c)
    }

    pub(crate) fn eval_with_derivative_unchecked(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let zero = Complex::new(T::zero(), T::zero());
        let mut value = zero;
        let mut slope = zero;
        for &c in self.coeffs.iter().rev() {
            slope = slope * z + value;
            value = value * z + c;
        }
        (value, slope)
    }
}

/// Harmonic map `F = h + conj(g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMap<T> {
    pub h: AnalyticSeries<T>,
    pub g: AnalyticSeries<T>,
}

impl<T: Scalar> HarmonicMap<T> {
    pub fn new(h: AnalyticSeries<T>, g: AnalyticSeries<T>) -> Self {
        Self { h, g }
    }

    /// `h` with `g ≡ 0`.
    pub fn analytic(h: AnalyticSeries<T>) -> Self {
        Self {
            h,
            g: AnalyticSeries::zero(),
        }
    }

    pub fn identity() -> Self {
        Self::analytic(AnalyticSeries::identity())
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        check_domain(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex<T>) -> Complex<T> {
        self.h.eval_unchecked(z) + self.g.eval_unchecked(z).conj()
    }

    /// Swaps the analytic and co-analytic halves.
    pub fn swapped(&self) -> Self {
        Self {
            h: self.g.clone(),
            g: self.h.clone(),
        }
    }

    /// Coefficient-wise `self + weight * other` on both halves.
    pub fn add_weighted(&self, other: &Self, weight: T) -> Self {
        let w = Complex::new(weight, T::zero());
        Self {
            h: self.h.add_scaled(&other.h, w),
            g: self.g.add_scaled(&other.g, w),
        }
    }

    pub fn degree(&self) -> usize {
        self.h.degree().max(self.g.degree())
    }
}

/// `f(z) = Σ_{k=1..p} |z|^{2(k-1)} F_k(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyharmonicMap<T> {
    components: Vec<HarmonicMap<T>>,
}

impl<T: Scalar> PolyharmonicMap<T> {
    pub fn new(components: Vec<HarmonicMap<T>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter(
                "a polyharmonic map needs at least one component".into(),
            ));
        }
        Ok(Self { components })
    }

    pub fn harmonic(map: HarmonicMap<T>) -> Self {
        Self {
            components: vec![map],
        }
    }

    /// `F_1 + |z|² F_2`.
    pub fn biharmonic(f1: HarmonicMap<T>, f2: HarmonicMap<T>) -> Self {
        Self {
            components: vec![f1, f2],
        }
    }

    /// Order `p`.
    pub fn order(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[HarmonicMap<T>] {
        &self.components
    }

    pub fn component(&self, k: usize) -> Option<&HarmonicMap<T>> {
        self.components.get(k)
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        check_domain(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex<T>) -> Complex<T> {
        let modsq = z.norm_sqr();
        let mut weight = T::one();
        let mut acc = Complex::new(T::zero(), T::zero());
        for component in &self.components {
            acc = acc + component.eval_unchecked(z).scale(weight);
            weight = weight * modsq;
        }
        acc
    }

    /// The harmonic map `g_r = Σ r^{2(k-1)} F_k`, which agrees with `f` on `|z| = r`.
    pub fn slice(&self, r: T) -> Result<HarmonicMap<T>> {
        if !(r > T::zero() && r <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "slice radius {} outside (0, 1]",
                r
            )));
        }
        let r2 = r * r;
        let mut weight = T::one();
        let mut acc = HarmonicMap::new(AnalyticSeries::zero(), AnalyticSeries::zero());
        for component in &self.components {
            acc = acc.add_weighted(component, weight);
            weight = weight * r2;
        }
        Ok(acc)
    }

    pub fn degree(&self) -> usize {
        self.components
            .iter()
            .map(HarmonicMap::degree)
            .max()
            .unwrap_or(0)
    }
}

/// Polar sample set `{r_i e^{iθ_j}}` with `r_i` uniform in `(0, max_radius]` and
/// `θ_j` uniform in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radial_count: usize,
    pub angular_count: usize,
    pub max_radius: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            radial_count: 64,
            angular_count: 256,
            max_radius: 0.995,
        }
    }
}

impl GridSpec {
    pub fn new(radial_count: usize, angular_count: usize, max_radius: f64) -> Result<Self> {
        if radial_count == 0 || angular_count == 0 {
            return Err(Error::InvalidParameter(
                "grid counts must be positive".into(),
            ));
        }
        if !(max_radius > 0.0 && max_radius < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "grid max_radius {max_radius} outside (0, 1)"
            )));
        }
        Ok(Self {
            radial_count,
            angular_count,
            max_radius,
        })
    }

    pub fn len(&self) -> usize {
        self.radial_count * self.angular_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points of the disk of radius `scale`, radius-major order.
    pub fn points<T: Scalar>(&self, scale: T) -> Vec<Complex<T>> {
        let step_r = lit::<T>(self.max_radius / self.radial_count as f64);
        let step_t = T::TAU() / lit(self.angular_count as f64);
        let mut out = Vec::with_capacity(self.len());
        for i in 1..=self.radial_count {
            let r = scale * step_r * lit(i as f64);
            for j in 0..self.angular_count {
                out.push(polar(r, step_t * lit(j as f64)));
            }
        }
        out
    }
}
