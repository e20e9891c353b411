//! Cusp-geometry bounds: slope lengths on a cusp lattice, the universal
//! `(√3/6)·Δ` lower bound, the 2π and 6 filling thresholds, and the volume
//! sandwich for fillings along long slopes.
//!
//! Cusp shapes are user data and are assumed to come from a maximal cusp;
//! nothing here checks that. All comparisons against 2π and 6 are strict and
//! use an absolute tolerance of [`TOLERANCE`]: a value within the tolerance
//! of a threshold does not exceed it.
//!
//! # Cusp files
//!
//! One record per cusp, four reals `m_x m_y l_x l_y` (meridian translation,
//! then longitude translation). Plain text puts one record per line,
//! separated by whitespace or commas; blank lines and `#` comments are
//! skipped. JSON is either an array of `[m_x, m_y, l_x, l_y]` arrays or an
//! array of `{"meridian_translation": [..], "longitude_translation": [..]}`
//! objects.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::knot::{CuspShape, ValidationError};
use crate::slope::Slope;

pub const TOLERANCE: f64 = 1e-9;
pub const TWO_PI: f64 = 2.0 * PI;
pub const SIX: f64 = 6.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Degenerate(#[from] ValidationError),
    #[error("l_min = {0} is not greater than 2π")]
    ShortSlope(f64),
    #[error("volume must be positive and finite, got {0}")]
    BadVolume(f64),
    #[error("slope entries do not fit in a double")]
    Overflow,
    #[error("cusp file line {line}: {message}")]
    Ingest { line: usize, message: String },
}

/// `x > threshold`, with ties (within tolerance) failing.
pub fn exceeds(x: f64, threshold: f64) -> bool {
    x > threshold + TOLERANCE
}

fn to_f64(n: &BigInt) -> Result<f64, GeometryError> {
    n.to_f64().filter(|x| x.is_finite()).ok_or(GeometryError::Overflow)
}

/// Euclidean length of `p·m + q·l` on the cusp lattice.
pub fn slope_length(c: &CuspShape, s: &Slope) -> Result<f64, GeometryError> {
    c.validate()?;
    let (p, q) = (to_f64(s.p())?, to_f64(s.q())?);
    let x = p * c.meridian_translation[0] + q * c.longitude_translation[0];
    let y = p * c.meridian_translation[1] + q * c.longitude_translation[1];
    Ok(x.hypot(y))
}

/// `(√3/6)·Δ`.
pub fn length_lower_bound(delta: u64) -> f64 {
    3f64.sqrt() / 6.0 * delta as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthBoundReport {
    pub slope: Slope,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    pub lower_bound: f64,
    /// Decided on `length` when present, otherwise on `lower_bound`.
    pub exceeds_2pi: bool,
    pub exceeds_6: bool,
}

/// Length report for a slope on the knot cusp, whose meridian is `1/0`.
pub fn length_report(cusp: Option<&CuspShape>, s: &Slope) -> Result<LengthBoundReport, GeometryError> {
    let delta = s.distance(&Slope::meridian()).to_u64().ok_or(GeometryError::Overflow)?;
    let lower_bound = length_lower_bound(delta);
    let length = cusp.map(|c| slope_length(c, s)).transpose()?;
    let decisive = length.unwrap_or(lower_bound);
    Ok(LengthBoundReport {
        slope: s.clone(),
        length,
        lower_bound,
        exceeds_2pi: exceeds(decisive, TWO_PI),
        exceeds_6: exceeds(decisive, SIX),
    })
}

/// `(1 − (2π/l_min)²)^{3/2}`, defined for `l_min > 2π`.
pub fn volume_factor(l_min: f64) -> Result<f64, GeometryError> {
    if !exceeds(l_min, TWO_PI) {
        return Err(GeometryError::ShortSlope(l_min));
    }
    let r = TWO_PI / l_min;
    Ok((1.0 - r * r).powf(1.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeBounds {
    /// Inclusive lower bound on the filled volume.
    pub low: f64,
    /// Exclusive upper bound: the unfilled volume.
    pub high: f64,
}

pub fn volume_bounds(vol_x: f64, l_min: f64) -> Result<VolumeBounds, GeometryError> {
    if !(vol_x.is_finite() && vol_x > 0.0) {
        return Err(GeometryError::BadVolume(vol_x));
    }
    Ok(VolumeBounds { low: volume_factor(l_min)? * vol_x, high: vol_x })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SixTheoremReport {
    pub lengths: Vec<f64>,
    /// Every length exceeds 6: the filling is hyperbolic.
    pub hyperbolic: bool,
    /// Every length exceeds 2π: the filling is negatively curved.
    pub exceeds_2pi: bool,
}

pub fn six_theorem_check(lengths: &[f64]) -> SixTheoremReport {
    SixTheoremReport {
        lengths: lengths.to_vec(),
        hyperbolic: lengths.iter().all(|&l| exceeds(l, SIX)),
        exceeds_2pi: lengths.iter().all(|&l| exceeds(l, TWO_PI)),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CuspRecord {
    Flat([f64; 4]),
    Shape(CuspShape),
}

/// Reads a cusp file in either documented form.
pub fn parse_cusp_file(text: &str) -> Result<Vec<CuspShape>, GeometryError> {
    let trimmed = text.trim_start();
    let shapes = if trimmed.starts_with('[') {
        let records: Vec<CuspRecord> =
            serde_json::from_str(text).map_err(|e| GeometryError::Ingest { line: e.line(), message: e.to_string() })?;
        records
            .into_iter()
            .map(|r| match r {
                CuspRecord::Flat([a, b, c, d]) => CuspShape { meridian_translation: [a, b], longitude_translation: [c, d] },
                CuspRecord::Shape(s) => s,
            })
            .collect::<Vec<_>>()
    } else {
        let mut out = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| GeometryError::Ingest { line: i + 1, message };
            let vals = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|_| err(format!("bad real {t:?}"))))
                .collect::<Result<Vec<f64>, _>>()?;
            let [a, b, c, d] = vals[..] else {
                return Err(err(format!("expected 4 reals, found {}", vals.len())));
            };
            out.push(CuspShape { meridian_translation: [a, b], longitude_translation: [c, d] });
        }
        out
    };
    for s in &shapes {
        s.validate()?;
    }
    Ok(shapes)
}
