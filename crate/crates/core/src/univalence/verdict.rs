use serde::{Deserialize, Serialize};

use crate::series_core::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    CertifiedPass,
    CertifiedFail,
    Inconclusive,
}

/// A located diagnostic backing a verdict.
///
/// `preimages` holds the disk points a crossing witness was built from: the two
/// endpoints of each crossing segment, in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub z: [f64; 2],
    pub value: f64,
    pub label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub preimages: Vec<[f64; 2]>,
}

impl Witness {
    pub fn new(label: &str, z: [f64; 2], value: f64) -> Self {
        Self {
            z,
            value,
            label: label.to_owned(),
            preimages: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub grid: GridSpec,
    pub notes: String,
}

impl Verdict {
    pub fn pass(grid: GridSpec, notes: impl Into<String>) -> Self {
        Self {
            status: Status::CertifiedPass,
            witnesses: Vec::new(),
            grid,
            notes: notes.into(),
        }
    }

    /// # Panics
    /// If `witnesses` is empty: a certified failure always names its evidence.
    pub fn fail(grid: GridSpec, witnesses: Vec<Witness>, notes: impl Into<String>) -> Self {
        assert!(!witnesses.is_empty(), "certified failure without a witness");
        Self {
            status: Status::CertifiedFail,
            witnesses,
            grid,
            notes: notes.into(),
        }
    }

    pub fn inconclusive(grid: GridSpec, notes: impl Into<String>) -> Self {
        Self {
            status: Status::Inconclusive,
            witnesses: Vec::new(),
            grid,
            notes: notes.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::CertifiedPass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::CertifiedFail
    }
}
