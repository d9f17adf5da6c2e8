//! Images of a polar grid (concentric circles and radial lines) under the
//! slice-sum map, the polyharmonic map itself and its dilatation, written as CSV
//! rows `curve_id,t,re,im` and as an SVG whose polylines carry the same points.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use clap::ValueEnum;
use num_complex::Complex64;
use polyharm::{PolyharmonicMap64, Result};
use serde::{Deserialize, Serialize};

/// Dilatation values beyond this modulus are treated as a pole and split the curve.
pub const POLE_MODULUS: f64 = 1e3;
/// Fraction of the bounding box added on every side.
pub const MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub circles: usize,
    pub rays: usize,
    pub samples_per_curve: usize,
    pub max_radius: f64,
    pub width: f64,
    pub height: f64,
}

impl RenderSpec {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.circles == 0 || self.rays == 0 || self.samples_per_curve < 2 {
            return Err("render needs circles, rays > 0 and at least two samples per curve".into());
        }
        if !(self.max_radius > 0.0 && self.max_radius < 1.0) {
            return Err(format!("render radius {} outside (0, 1)", self.max_radius));
        }
        if !(self.width > 0.0 && self.height > 0.0) {
            return Err("canvas must have positive size".into());
        }
        Ok(())
    }

    /// `(id, t, z)` for every sample of every grid curve: circles first, with `t = θ`
    /// over `[0, 2π]` (closed), then rays with `t = r` over `[0, max_radius]`.
    pub fn grid_curves(&self) -> Vec<(String, Vec<(f64, Complex64)>)> {
        let n = self.samples_per_curve;
        let mut out = Vec::with_capacity(self.circles + self.rays);
        for k in 1..=self.circles {
            let r = self.max_radius * k as f64 / self.circles as f64;
            let pts = (0..=n)
                .map(|i| {
                    let t = TAU * i as f64 / n as f64;
                    (t, Complex64::from_polar(r, t))
                })
                .collect();
            out.push((format!("circle{k}"), pts));
        }
        for j in 0..self.rays {
            let dir = Complex64::from_polar(1.0, TAU * j as f64 / self.rays as f64);
            let pts = (0..=n)
                .map(|i| {
                    let t = self.max_radius * i as f64 / n as f64;
                    (t, dir * t)
                })
                .collect();
            out.push((format!("ray{j}"), pts));
        }
        out
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, ValueEnum,
)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    /// The harmonic map `Σ F_k`, equal to `f` on the unit circle.
    #[value(name = "F1-sum")]
    #[serde(rename = "F1-sum")]
    F1Sum,
    /// The polyharmonic map.
    #[value(name = "f")]
    #[serde(rename = "f")]
    F,
    /// The dilatation `f_z̄ / f_z`.
    Dilatation,
}

impl Which {
    pub const ALL: [Which; 3] = [Which::F1Sum, Which::F, Which::Dilatation];

    pub fn stem(self) -> &'static str {
        match self {
            Which::F1Sum => "f1_sum",
            Which::F => "f",
            Which::Dilatation => "dilatation",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Which::F1Sum => "F1 + ... + Fp",
            Which::F => "f",
            Which::Dilatation => "dilatation",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub id: String,
    pub points: Vec<(f64, Complex64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub curve_id: String,
    pub t: f64,
    pub z: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub which: Which,
    pub polylines: Vec<Polyline>,
    pub poles: Vec<Pole>,
}

/// Affine canvas map `X = scale·re + dx`, `Y = −scale·im + dy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    pub scale: f64,
    pub dx: f64,
    pub dy: f64,
}

impl Transform {
    pub fn apply(&self, w: Complex64) -> (f64, f64) {
        (self.scale * w.re + self.dx, -self.scale * w.im + self.dy)
    }
}

pub fn trace(map: &PolyharmonicMap64, which: Which, spec: &RenderSpec) -> Result<Figure> {
    let harmonic = match which {
        Which::F1Sum => Some(map.slice(1.0)?),
        _ => None,
    };
    let mut polylines = Vec::new();
    let mut poles = Vec::new();
    for (id, samples) in spec.grid_curves() {
        let mut pieces: Vec<Vec<(f64, Complex64)>> = vec![Vec::new()];
        for (t, z) in samples {
            let w = match which {
                Which::F1Sum => Some(harmonic.as_ref().expect("slice computed above").eval(z)?),
                Which::F => Some(map.eval(z)?),
                Which::Dilatation => match map.dilatation(z) {
                    Ok(a) if a.norm() <= POLE_MODULUS => Some(a),
                    Ok(_) | Err(polyharm::Error::Degenerate { .. }) => None,
                    Err(e) => return Err(e),
                },
            };
            match w {
                Some(w) => pieces.last_mut().expect("never empty").push((t, w)),
                None => {
                    poles.push(Pole {
                        curve_id: id.clone(),
                        t,
                        z: [z.re, z.im],
                    });
                    if !pieces.last().expect("never empty").is_empty() {
                        pieces.push(Vec::new());
                    }
                }
            }
        }
        pieces.retain(|p| !p.is_empty());
        let split = pieces.len() > 1;
        for (k, points) in pieces.into_iter().enumerate() {
            let id = if split {
                format!("{id}.{}", k + 1)
            } else {
                id.clone()
            };
            polylines.push(Polyline { id, points });
        }
    }
    Ok(Figure {
        which,
        polylines,
        poles,
    })
}

impl Figure {
    pub fn csv(&self) -> String {
        let mut out = String::from("curve_id,t,re,im\n");
        for line in &self.polylines {
            for (t, w) in &line.points {
                writeln!(out, "{},{},{},{}", line.id, t, w.re, w.im).expect("writing to a String");
            }
        }
        out
    }

    /// Bounding box of all points padded by `MARGIN`, fitted into the canvas with
    /// equal axis scales and centred.
    pub fn transform(&self, width: f64, height: f64) -> Transform {
        let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (_, w) in self.polylines.iter().flat_map(|l| &l.points) {
            lo = Complex64::new(lo.re.min(w.re), lo.im.min(w.im));
            hi = Complex64::new(hi.re.max(w.re), hi.im.max(w.im));
        }
        if !lo.re.is_finite() {
            lo = Complex64::new(-1.0, -1.0);
            hi = Complex64::new(1.0, 1.0);
        }
        let mut span = (hi.re - lo.re).max(hi.im - lo.im);
        if !(span > 0.0) {
            span = 1.0;
        }
        let padded = span * (1.0 + 2.0 * MARGIN);
        let scale = (width / padded).min(height / padded);
        let centre = (lo + hi) / 2.0;
        Transform {
            scale,
            dx: width / 2.0 - scale * centre.re,
            dy: height / 2.0 + scale * centre.im,
        }
    }

    pub fn svg(&self, width: f64, height: f64) -> String {
        let tr = self.transform(width, height);
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(
            w,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
        );
        let _ = writeln!(
            w,
            "<!-- transform: X = {s}*re + {dx}; Y = -{s}*im + {dy} -->",
            s = tr.scale,
            dx = tr.dx,
            dy = tr.dy
        );
        let _ = writeln!(w, "<title>{}</title>", self.which.title());
        let _ = writeln!(
            w,
            r#"<rect width="{width}" height="{height}" fill="white"/>"#
        );
        let _ = writeln!(
            w,
            r##"<g fill="none" stroke="#1f3b73" stroke-width="0.8">"##
        );
        for line in &self.polylines {
            let pts: Vec<String> = line
                .points
                .iter()
                .map(|(_, p)| {
                    let (x, y) = tr.apply(*p);
                    format!("{x},{y}")
                })
                .collect();
            let _ = writeln!(
                w,
                r#"<polyline id="{}" points="{}"/>"#,
                line.id,
                pts.join(" ")
            );
        }
        let _ = writeln!(w, "</g>");
        if !self.poles.is_empty() {
            let _ = writeln!(w, r##"<g fill="#b00020" font-size="10">"##);
            for pole in &self.poles {
                let _ = writeln!(
                    w,
                    "<!-- pole: curve {} t = {} z = {}{:+}i -->",
                    pole.curve_id, pole.t, pole.z[0], pole.z[1]
                );
            }
            let _ = writeln!(
                w,
                r#"<text x="8" y="{}">{} pole sample(s) removed; curves split</text>"#,
                height - 8.0,
                self.poles.len()
            );
            let _ = writeln!(w, "</g>");
        }
        let _ = writeln!(w, "</svg>");
        out
    }
}
