use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {z:?} lies outside the closed unit disk (|z| = {modulus})")]
    Domain { z: [f64; 2], modulus: f64 },

    #[error("degenerate point {z:?}: |{what}| = {modulus} is below the floor")]
    Degenerate {
        z: [f64; 2],
        what: &'static str,
        modulus: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {w0:?} is within {distance} of the curve")]
    PointTooClose { w0: [f64; 2], distance: f64 },

    #[error("curve too coarse: a segment subtends {angle} rad about {w0:?}")]
    CurveTooCoarse { w0: [f64; 2], angle: f64 },

    #[error("finite-difference stencil at {z:?} leaves the unit disk")]
    StencilOutOfDomain { z: [f64; 2] },
}

pub type Result<T> = std::result::Result<T, Error>;
