use std::cmp::Ordering;

use num_complex::Complex;

use crate::scalar::{lit, pair, to_f64, Scalar};
use crate::univalence::{Curve, Witness};

/// Directions tried from each boundary vertex.
pub const FAN_DIRECTIONS: usize = 64;

fn cross<T: Scalar>(a: Complex<T>, b: Complex<T>) -> T {
    a.re * b.im - a.im * b.re
}

/// Counterclockwise angle from `a` to `b`, in `[0, 2π)`.
fn ccw_angle<T: Scalar>(a: Complex<T>, b: Complex<T>) -> T {
    let t = (b / a).arg();
    if t < T::zero() {
        t + T::TAU()
    } else {
        t
    }
}

/// Does the ray `origin + s·dir`, `s > 0`, meet the closed segment `[a, b]`?
fn ray_hits_segment<T: Scalar>(
    origin: Complex<T>,
    dir: Complex<T>,
    a: Complex<T>,
    b: Complex<T>,
) -> bool {
    let edge = b - a;
    let denom = cross(dir, edge);
    if denom == T::zero() {
        return false;
    }
    let rel = a - origin;
    let s = cross(rel, edge) / denom;
    let u = cross(rel, dir) / denom;
    s > T::zero() && u >= T::zero() && u <= T::one()
}

/// First vertex of the closed polygon from which no fan direction leaves the
/// polygon and escapes without meeting a non-adjacent edge.
pub fn ray_accessibility<T: Scalar>(curve: &Curve<T>) -> Option<Witness> {
    let points = curve.points();
    let n = points.len();
    if n < 3 {
        return None;
    }
    let area: T = (0..n).map(|i| cross(points[i], points[(i + 1) % n])).sum();
    let orientation = if area >= T::zero() {
        T::one()
    } else {
        -T::one()
    };
    let fan: Vec<Complex<T>> = (0..FAN_DIRECTIONS)
        .map(|k| crate::scalar::cis(T::TAU() * lit(k as f64 / FAN_DIRECTIONS as f64)))
        .collect();

    (0..n).find_map(|i| {
        let prev = points[(i + n - 1) % n];
        let here = points[i];
        let next = points[(i + 1) % n];
        let tangent = next - prev;
        let normal = Complex::new(tangent.im, -tangent.re).scale(orientation);
        // interior wedge runs counterclockwise from the outgoing to the incoming edge
        let (start, end) = if orientation > T::zero() {
            (next - here, prev - here)
        } else {
            (prev - here, next - here)
        };
        let wedge = ccw_angle(start, end);

        let mut order: Vec<usize> = (0..FAN_DIRECTIONS).collect();
        order.sort_by(|&a, &b| {
            let da = (fan[a] / normal).arg().abs();
            let db = (fan[b] / normal).arg().abs();
            da.partial_cmp(&db).unwrap_or(Ordering::Equal)
        });
        let escapes = order.iter().any(|&k| {
            let dir = fan[k];
            if ccw_angle(start, dir) <= wedge {
                return false;
            }
            (0..n).all(|j| {
                let (a, b) = (j, (j + 1) % n);
                a == i || b == i || !ray_hits_segment(here, dir, points[a], points[b])
            })
        });
        (!escapes).then(|| Witness::new("ray_blocked", pair(here), to_f64(curve.params()[i])))
    })
}
