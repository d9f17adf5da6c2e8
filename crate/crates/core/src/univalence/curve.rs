//! Sampled planar curves, winding numbers and segment crossings.

use std::cmp::Ordering;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, pair, to_f64, tol, Scalar};

/// Minimum distance between a point and a curve for its winding number to be
/// considered well conditioned.
pub const NEAR_CURVE: f64 = 1e-10;

/// Ordered complex samples `points[i]` at parameters `params[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve<T> {
    params: Vec<T>,
    points: Vec<Complex<T>>,
    closed: bool,
}

impl<T: Scalar> Curve<T> {
    /// Builds a curve, dropping consecutive duplicate points (and a closing
    /// duplicate of the first point when `closed`).
    pub fn new(params: Vec<T>, points: Vec<Complex<T>>, closed: bool) -> Result<Self> {
        if params.len() != points.len() {
            return Err(Error::InvalidParameter(format!(
                "{} parameters for {} points",
                params.len(),
                points.len()
            )));
        }
        if params.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter(
                "curve parameters must be strictly increasing".into(),
            ));
        }
        let mut kept_params = Vec::with_capacity(params.len());
        let mut kept_points: Vec<Complex<T>> = Vec::with_capacity(points.len());
        for (t, p) in params.into_iter().zip(points) {
            if kept_points.last() != Some(&p) {
                kept_params.push(t);
                kept_points.push(p);
            }
        }
        if closed && kept_points.len() > 1 && kept_points.first() == kept_points.last() {
            kept_params.pop();
            kept_points.pop();
        }
        Ok(Self {
            params: kept_params,
            points: kept_points,
            closed,
        })
    }

    /// Samples `map` at `n` uniform parameters. Closed curves omit the endpoint `t1`.
    pub fn sample(
        map: impl Fn(T) -> Complex<T>,
        t0: T,
        t1: T,
        n: usize,
        closed: bool,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(
                "a curve needs at least two samples".into(),
            ));
        }
        let denom = if closed { n } else { n - 1 };
        let params: Vec<T> = (0..n)
            .map(|j| t0 + (t1 - t0) * lit(j as f64) / lit(denom as f64))
            .collect();
        let points = params.iter().map(|&t| map(t)).collect();
        Self::new(params, points, closed)
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of polygonal segments (including the closing one).
    pub fn segment_count(&self) -> usize {
        match (self.points.len(), self.closed) {
            (0 | 1, _) => 0,
            (2, true) => 1,
            (n, true) => n,
            (n, false) => n - 1,
        }
    }

    /// Endpoint indices of segment `i`.
    pub fn segment(&self, i: usize) -> (usize, usize) {
        (i, (i + 1) % self.points.len())
    }

    fn segments_adjacent(&self, i: usize, j: usize) -> bool {
        let m = self.segment_count();
        i == j || i.abs_diff(j) == 1 || (self.closed && m > 2 && i.abs_diff(j) == m - 1)
    }

    pub fn distance_to(&self, w: Complex<T>) -> T {
        (0..self.segment_count())
            .map(|i| {
                let (a, b) = self.segment(i);
                point_segment_distance(w, self.points[a], self.points[b])
            })
            .fold(T::infinity(), T::min)
    }

    /// Polygonal length.
    pub fn length(&self) -> T {
        (0..self.segment_count())
            .map(|i| {
                let (a, b) = self.segment(i);
                (self.points[b] - self.points[a]).norm()
            })
            .sum()
    }

    /// Winding number of the closed polygon about `w0`: the accumulated change of
    /// `arg(point − w0)` divided by `2π`.
    ///
    /// Every per-segment increment must stay below `π/2`; otherwise the samples are
    /// too sparse to stand in for the underlying curve and `CurveTooCoarse` is
    /// returned so the caller can resample.
    pub fn winding_number(&self, w0: Complex<T>) -> Result<i64> {
        if !self.closed {
            return Err(Error::InvalidParameter(
                "winding number needs a closed curve".into(),
            ));
        }
        if self.points.len() < 3 {
            return Err(Error::InvalidParameter(
                "winding number needs at least three distinct points".into(),
            ));
        }
        let distance = self.distance_to(w0);
        if distance <= tol(NEAR_CURVE) {
            return Err(Error::PointTooClose {
                w0: pair(w0),
                distance: to_f64(distance),
            });
        }
        let limit = T::FRAC_PI_2();
        let mut total = T::zero();
        for i in 0..self.segment_count() {
            let (a, b) = self.segment(i);
            let increment = ((self.points[b] - w0) / (self.points[a] - w0)).arg();
            if increment.abs() >= limit {
                return Err(Error::CurveTooCoarse {
                    w0: pair(w0),
                    angle: to_f64(increment.abs()),
                });
            }
            total = total + increment;
        }
        let turns = to_f64(total / T::TAU());
        Ok(turns.round() as i64)
    }

    /// First crossing between two non-adjacent segments of this curve, if any.
    pub fn self_intersection(&self) -> Option<Crossing<T>> {
        let boxes = self.boxes(0);
        sweep(&boxes, |a, b| {
            if self.segments_adjacent(a.index, b.index) {
                return None;
            }
            self.crossing_between(self, a.index, b.index)
        })
    }

    /// First crossing between a segment of `self` and a segment of `other`.
    pub fn intersection_with(&self, other: &Self) -> Option<Crossing<T>> {
        let mut boxes = self.boxes(0);
        boxes.extend(other.boxes(1));
        sweep(&boxes, |a, b| match (a.owner, b.owner) {
            (0, 1) => self.crossing_between(other, a.index, b.index),
            (1, 0) => self.crossing_between(other, b.index, a.index),
            _ => None,
        })
    }

    fn crossing_between(&self, other: &Self, i: usize, j: usize) -> Option<Crossing<T>> {
        let (a0, a1) = self.segment(i);
        let (b0, b1) = other.segment(j);
        segment_intersection(
            self.points[a0],
            self.points[a1],
            other.points[b0],
            other.points[b1],
        )
        .map(|point| Crossing {
            first: i,
            second: j,
            point,
        })
    }

    fn boxes(&self, owner: u8) -> Vec<SegmentBox<T>> {
        (0..self.segment_count())
            .map(|i| {
                let (a, b) = self.segment(i);
                let (p, q) = (self.points[a], self.points[b]);
                SegmentBox {
                    owner,
                    index: i,
                    xmin: p.re.min(q.re),
                    xmax: p.re.max(q.re),
                    ymin: p.im.min(q.im),
                    ymax: p.im.max(q.im),
                }
            })
            .collect()
    }
}

/// Two crossing segments and a common point. For a self-crossing `first < second`;
/// between two curves `first` indexes the receiver and `second` the argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing<T> {
    pub first: usize,
    pub second: usize,
    pub point: Complex<T>,
}

#[derive(Debug, Clone, Copy)]
struct SegmentBox<T> {
    owner: u8,
    index: usize,
    xmin: T,
    xmax: T,
    ymin: T,
    ymax: T,
}

/// Sweep-and-prune over x extents; `test` is called for every pair whose boxes overlap.
fn sweep<T: Scalar, R>(
    boxes: &[SegmentBox<T>],
    mut test: impl FnMut(&SegmentBox<T>, &SegmentBox<T>) -> Option<R>,
) -> Option<R> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| {
        boxes[a]
            .xmin
            .partial_cmp(&boxes[b].xmin)
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    for (pos, &a) in order.iter().enumerate() {
        let ba = &boxes[a];
        for &b in &order[pos + 1..] {
            let bb = &boxes[b];
            if bb.xmin > ba.xmax {
                break;
            }
            if bb.ymin > ba.ymax || bb.ymax < ba.ymin {
                continue;
            }
            let (first, second) = if (ba.owner, ba.index) <= (bb.owner, bb.index) {
                (ba, bb)
            } else {
                (bb, ba)
            };
            if let Some(hit) = test(first, second) {
                return Some(hit);
            }
        }
    }
    None
}

fn cross<T: Scalar>(a: Complex<T>, b: Complex<T>) -> T {
    a.re * b.im - a.im * b.re
}

fn orientation<T: Scalar>(a: Complex<T>, b: Complex<T>, c: Complex<T>) -> T {
    cross(b - a, c - a)
}

fn on_segment<T: Scalar>(p: Complex<T>, a: Complex<T>, b: Complex<T>) -> bool {
    p.re >= a.re.min(b.re)
        && p.re <= a.re.max(b.re)
        && p.im >= a.im.min(b.im)
        && p.im <= a.im.max(b.im)
}

/// Intersection point of closed segments `[a, b]` and `[c, d]`; collinear overlaps
/// report one shared point.
pub fn segment_intersection<T: Scalar>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
) -> Option<Complex<T>> {
    let zero = T::zero();
    let d1 = orientation(c, d, a);
    let d2 = orientation(c, d, b);
    let d3 = orientation(a, b, c);
    let d4 = orientation(a, b, d);
    if ((d1 > zero && d2 < zero) || (d1 < zero && d2 > zero))
        && ((d3 > zero && d4 < zero) || (d3 < zero && d4 > zero))
    {
        let t = d1 / (d1 - d2);
        return Some(a + (b - a).scale(t));
    }
    if d1 == zero && on_segment(a, c, d) {
        return Some(a);
    }
    if d2 == zero && on_segment(b, c, d) {
        return Some(b);
    }
    if d3 == zero && on_segment(c, a, b) {
        return Some(c);
    }
    if d4 == zero && on_segment(d, a, b) {
        return Some(d);
    }
    None
}

pub fn point_segment_distance<T: Scalar>(p: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == T::zero() {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.max(T::zero()).min(T::one());
    (p - (a + ab.scale(t))).norm()
}
