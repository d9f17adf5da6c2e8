use num_complex::Complex;

use super::maps::{check_domain, PolyharmonicMap};
use crate::error::{Error, Result};
use crate::scalar::{lit, pair, to_f64, Scalar};

/// Below this modulus `f_z` is treated as zero when forming the dilatation.
pub const DILATATION_FLOOR: f64 = 1e-14;

/// Stencil spacings `h, 2h, 4h` combined by the Laplacian probe.
pub const RICHARDSON_LEVELS: u32 = 3;

/// Wirtinger derivatives `(f_z, f_z̄)` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wirtinger<T> {
    pub dz: Complex<T>,
    pub dzbar: Complex<T>,
}

impl<T: Scalar> Wirtinger<T> {
    /// `|f_z|² − |f_z̄|²`
    pub fn jacobian(&self) -> T {
        self.dz.norm_sqr() - self.dzbar.norm_sqr()
    }
}

impl<T: Scalar> PolyharmonicMap<T> {
    /// Closed-form `f_z` and `f_z̄`.
    ///
    /// Component `k` (1-based) contributes `(k−1) z̄ |z|^{2(k−2)} F_k + |z|^{2(k−1)} h_k′`
    /// to `f_z` and the mirrored terms to `f_z̄`. Grouping the power as `|z|^{2(k−2)}`
    /// keeps `z = 0` free of division: the `k = 2` term reduces to `z̄ F_2(0)`.
    pub fn wirtinger(&self, z: Complex<T>) -> Result<Wirtinger<T>> {
        check_domain(z)?;
        Ok(self.wirtinger_unchecked(z))
    }

    pub(crate) fn wirtinger_unchecked(&self, z: Complex<T>) -> Wirtinger<T> {
        let zero = Complex::new(T::zero(), T::zero());
        let modsq = z.norm_sqr();
        let mut dz = zero;
        let mut dzbar = zero;
        // |z|^{2(k-1)} for the current component
        let mut upper = T::one();
        for (idx, component) in self.components().iter().enumerate() {
            let (hv, hd) = component.h.eval_with_derivative_unchecked(z);
            let (gv, gd) = component.g.eval_with_derivative_unchecked(z);
            if idx > 0 {
                let value = hv + gv.conj();
                let lower = modsq.powi(idx as i32 - 1);
                let weight = lit::<T>(idx as f64) * lower;
                dz = dz + z.conj() * value.scale(weight);
                dzbar = dzbar + z * value.scale(weight);
            }
            dz = dz + hd.scale(upper);
            dzbar = dzbar + gd.conj().scale(upper);
            upper = upper * modsq;
        }
        Wirtinger { dz, dzbar }
    }

    /// `|f_z|² − |f_z̄|²`
    pub fn jacobian(&self, z: Complex<T>) -> Result<T> {
        Ok(self.wirtinger(z)?.jacobian())
    }

    /// Complex dilatation `f_z̄ / f_z`.
    pub fn dilatation(&self, z: Complex<T>) -> Result<Complex<T>> {
        let w = self.wirtinger(z)?;
        dilatation_of(w, z)
    }

    /// Finite-difference estimate of `Δ^q f` at `z`.
    ///
    /// The five-point Laplacian stencil is applied `q` times at spacings `step`,
    /// `2·step` and `4·step`; the three estimates are Richardson-combined to cancel
    /// the `h²` and `h⁴` error terms. The widest stencil must stay inside the disk.
    pub fn laplacian_power_probe(&self, q: u32, z: Complex<T>, step: T) -> Result<Complex<T>> {
        if q == 0 {
            return Err(Error::InvalidParameter(
                "Laplacian power must be positive".into(),
            ));
        }
        if !(step >= lit(1e-3) && step <= lit(1e-1)) {
            return Err(Error::InvalidParameter(format!(
                "stencil step {step} outside [1e-3, 1e-1]"
            )));
        }
        let widest = step * lit((1u32 << (RICHARDSON_LEVELS - 1)) as f64);
        if z.norm() + widest * lit(q as f64) >= T::one() {
            return Err(Error::StencilOutOfDomain { z: pair(z) });
        }
        let mut estimates: Vec<Complex<T>> = (0..RICHARDSON_LEVELS)
            .map(|j| self.stencil(q, z, step * lit((1u32 << j) as f64)))
            .collect();
        let mut factor = T::one();
        for _ in 1..RICHARDSON_LEVELS {
            factor = factor * lit(4.0);
            estimates = estimates
                .windows(2)
                .map(|w| (w[0].scale(factor) - w[1]).unscale(factor - T::one()))
                .collect();
        }
        Ok(estimates[0])
    }

    fn stencil(&self, q: u32, z: Complex<T>, step: T) -> Complex<T> {
        if q == 0 {
            return self.eval_unchecked(z);
        }
        let dx = Complex::new(step, T::zero());
        let dy = Complex::new(T::zero(), step);
        let neighbours = self.stencil(q - 1, z + dx, step)
            + self.stencil(q - 1, z - dx, step)
            + self.stencil(q - 1, z + dy, step)
            + self.stencil(q - 1, z - dy, step);
        (neighbours - self.stencil(q - 1, z, step).scale(lit(4.0))).unscale(step * step)
    }
}

pub(crate) fn dilatation_of<T: Scalar>(w: Wirtinger<T>, z: Complex<T>) -> Result<Complex<T>> {
    let modulus = w.dz.norm();
    if modulus < lit(DILATATION_FLOOR) {
        return Err(Error::Degenerate {
            z: pair(z),
            what: "f_z",
            modulus: to_f64(modulus),
        });
    }
    Ok(w.dzbar / w.dz)
}
