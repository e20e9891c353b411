//! Splice-expression trees for knots: unknot, torus knots, cables, connected
//! sums and opaque hyperbolic atoms.
//!
//! Text form (whitespace-insensitive):
//!
//! ```text
//! expr     := "unknot"
//!           | "torus(" int "," int ")"
//!           | "cable(" int "," int ";" expr ")"
//!           | "sum(" expr ("," expr)+ ")"
//!           | "hyp(" name "," int ["," cuspdata] ")"
//! cuspdata := four reals per cusp: meridian x, y, longitude x, y
//! ```

mod parse;

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse, ParseError};

/// Translation lattice of a horoball-neighbourhood boundary torus.
///
/// Slope lengths computed from it are only meaningful for a maximal cusp;
/// normalizing the cusp is the caller's job.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspShape {
    pub meridian_translation: [f64; 2],
    pub longitude_translation: [f64; 2],
}

impl CuspShape {
    pub fn new(meridian: [f64; 2], longitude: [f64; 2]) -> Result<Self, ValidationError> {
        let c = Self { meridian_translation: meridian, longitude_translation: longitude };
        c.validate()?;
        Ok(c)
    }

    /// Signed area of the fundamental parallelogram.
    pub fn determinant(&self) -> f64 {
        let [mx, my] = self.meridian_translation;
        let [lx, ly] = self.longitude_translation;
        mx * ly - my * lx
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        let all = self.meridian_translation.iter().chain(&self.longitude_translation);
        if !all.clone().all(|x| x.is_finite()) || self.determinant() == 0.0 {
            return Err(ValidationError::DegenerateCusp);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KnotExpr {
    Unknot,
    Torus {
        r: i64,
        s: i64,
    },
    Cable {
        r: i64,
        s: i64,
        companion: Box<KnotExpr>,
    },
    Sum {
        summands: Vec<KnotExpr>,
    },
    Hyp {
        name: String,
        cusp_count: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cusp_data: Option<Vec<CuspShape>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("torus({r},{s}): gcd({r},{s}) != 1")]
    TorusNotCoprime { r: i64, s: i64 },
    #[error("torus({r},{s}) is trivial: need |r| >= 2 and |s| >= 2")]
    TorusTrivial { r: i64, s: i64 },
    #[error("cable({r},{s}): gcd({r},{s}) != 1")]
    CableNotCoprime { r: i64, s: i64 },
    #[error("cable({r},{s}) needs |s| >= 2")]
    CableTrivial { r: i64, s: i64 },
    #[error("cable({r},{s}) of the unknot must be written torus({r},{s})")]
    CableOfUnknot { r: i64, s: i64 },
    #[error("a sum needs at least two summands")]
    SumTooShort,
    #[error("the unknot cannot be a summand")]
    UnknotSummand,
    #[error("sums must be flattened")]
    NestedSum,
    #[error("a hyperbolic atom needs at least one cusp")]
    NoCusps,
    #[error("atom {name:?} has {cusp_count} cusps but {given} cusp shapes")]
    CuspDataLength { name: String, cusp_count: u32, given: usize },
    #[error("cusp shape is not a lattice (non-finite entry or zero determinant)")]
    DegenerateCusp,
}

/// What the outermost structure of a knot is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExprKind {
    Unknot,
    TorusKnot,
    /// A tower of `depth` cablings over `base`.
    IteratedCable { depth: usize, base: BaseKind },
    Composite,
    Hyperbolic { cusps: u32 },
    /// A single cabling of a hyperbolic atom.
    HyperbolicCompanionCable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseKind {
    TorusKnot,
    Composite,
    Hyperbolic,
}

impl fmt::Display for ExprKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprKind::Unknot => f.write_str("unknot"),
            ExprKind::TorusKnot => f.write_str("torus-knot"),
            ExprKind::IteratedCable { depth, base } => {
                let base = match base {
                    BaseKind::TorusKnot => "torus-knot",
                    BaseKind::Composite => "composite",
                    BaseKind::Hyperbolic => "hyperbolic",
                };
                write!(f, "iterated-cable(depth {depth}, base {base})")
            }
            ExprKind::Composite => f.write_str("composite"),
            ExprKind::Hyperbolic { .. } => f.write_str("hyperbolic"),
            ExprKind::HyperbolicCompanionCable => f.write_str("hyperbolic-companion-cable"),
        }
    }
}

impl KnotExpr {
    pub fn torus(r: i64, s: i64) -> Self {
        KnotExpr::Torus { r, s }
    }

    pub fn cable(r: i64, s: i64, companion: KnotExpr) -> Self {
        KnotExpr::Cable { r, s, companion: Box::new(companion) }
    }

    pub fn sum(summands: Vec<KnotExpr>) -> Self {
        KnotExpr::Sum { summands }.canonical()
    }

    pub fn hyp(name: impl Into<String>, cusp_count: u32) -> Self {
        KnotExpr::Hyp { name: name.into(), cusp_count, cusp_data: None }
    }

    /// Checks every structural invariant of the tree.
    pub fn validate(&self) -> Result<(), ValidationError> {
        match self {
            KnotExpr::Unknot => Ok(()),
            &KnotExpr::Torus { r, s } => {
                if r.gcd(&s) != 1 {
                    Err(ValidationError::TorusNotCoprime { r, s })
                } else if r.abs() < 2 || s.abs() < 2 {
                    Err(ValidationError::TorusTrivial { r, s })
                } else {
                    Ok(())
                }
            }
            KnotExpr::Cable { r, s, companion } => {
                let (r, s) = (*r, *s);
                if r.gcd(&s) != 1 {
                    Err(ValidationError::CableNotCoprime { r, s })
                } else if s.abs() < 2 {
                    Err(ValidationError::CableTrivial { r, s })
                } else if **companion == KnotExpr::Unknot {
                    Err(ValidationError::CableOfUnknot { r, s })
                } else {
                    companion.validate()
                }
            }
            KnotExpr::Sum { summands } => {
                if summands.len() < 2 {
                    return Err(ValidationError::SumTooShort);
                }
                for e in summands {
                    match e {
                        KnotExpr::Unknot => return Err(ValidationError::UnknotSummand),
                        KnotExpr::Sum { .. } => return Err(ValidationError::NestedSum),
                        _ => e.validate()?,
                    }
                }
                Ok(())
            }
            KnotExpr::Hyp { name, cusp_count, cusp_data } => {
                if *cusp_count == 0 {
                    return Err(ValidationError::NoCusps);
                }
                if let Some(data) = cusp_data {
                    if data.len() != *cusp_count as usize {
                        return Err(ValidationError::CuspDataLength {
                            name: name.clone(),
                            cusp_count: *cusp_count,
                            given: data.len(),
                        });
                    }
                    data.iter().try_for_each(CuspShape::validate)?;
                }
                Ok(())
            }
        }
    }

    /// Rewrites into canonical form: cables of the unknot become torus
    /// knots, nested sums are flattened, and summands are sorted by their
    /// printed text. Does not validate.
    pub fn canonical(self) -> Self {
        match self {
            KnotExpr::Cable { r, s, companion } => match companion.canonical() {
                KnotExpr::Unknot => KnotExpr::Torus { r, s },
                c => KnotExpr::cable(r, s, c),
            },
            KnotExpr::Sum { summands } => {
                let mut flat = Vec::with_capacity(summands.len());
                for e in summands {
                    match e.canonical() {
                        KnotExpr::Sum { summands } => flat.extend(summands),
                        e => flat.push(e),
                    }
                }
                flat.sort_by_cached_key(|e| e.to_string());
                KnotExpr::Sum { summands: flat }
            }
            e => e,
        }
    }

    /// Number of nested cablings at the top of the tree.
    pub fn cable_depth(&self) -> usize {
        let mut depth = 0;
        let mut e = self;
        while let KnotExpr::Cable { companion, .. } = e {
            depth += 1;
            e = companion;
        }
        depth
    }

    /// The first node below all top-level cablings.
    pub fn cable_base(&self) -> &KnotExpr {
        let mut e = self;
        while let KnotExpr::Cable { companion, .. } = e {
            e = companion;
        }
        e
    }

    pub fn classify(&self) -> ExprKind {
        match self {
            KnotExpr::Unknot => ExprKind::Unknot,
            KnotExpr::Torus { .. } => ExprKind::TorusKnot,
            KnotExpr::Sum { .. } => ExprKind::Composite,
            KnotExpr::Hyp { cusp_count, .. } => ExprKind::Hyperbolic { cusps: *cusp_count },
            KnotExpr::Cable { .. } => {
                let depth = self.cable_depth();
                let base = match self.cable_base() {
                    KnotExpr::Hyp { .. } => BaseKind::Hyperbolic,
                    KnotExpr::Sum { .. } => BaseKind::Composite,
                    _ => BaseKind::TorusKnot,
                };
                if depth == 1 && base == BaseKind::Hyperbolic {
                    ExprKind::HyperbolicCompanionCable
                } else {
                    ExprKind::IteratedCable { depth, base }
                }
            }
        }
    }

    pub fn contains_hyperbolic(&self) -> bool {
        match self {
            KnotExpr::Hyp { .. } => true,
            KnotExpr::Cable { companion, .. } => companion.contains_hyperbolic(),
            KnotExpr::Sum { summands } => summands.iter().any(Self::contains_hyperbolic),
            _ => false,
        }
    }
}

pub fn classify_expr(e: &KnotExpr) -> ExprKind {
    e.classify()
}

fn write_name(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    f.write_str("\"")?;
    for c in name.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            c => write!(f, "{c}")?,
        }
    }
    f.write_str("\"")
}

/// Canonical text. Summands print in sorted order, so any two trees that
/// differ only in summand order print identically.
impl fmt::Display for KnotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotExpr::Unknot => f.write_str("unknot"),
            KnotExpr::Torus { r, s } => write!(f, "torus({r},{s})"),
            KnotExpr::Cable { r, s, companion } => write!(f, "cable({r},{s};{companion})"),
            KnotExpr::Sum { summands } => {
                let mut parts: Vec<String> = summands.iter().map(|e| e.to_string()).collect();
                parts.sort();
                write!(f, "sum({})", parts.join(","))
            }
            KnotExpr::Hyp { name, cusp_count, cusp_data } => {
                f.write_str("hyp(")?;
                write_name(f, name)?;
                write!(f, ",{cusp_count}")?;
                for c in cusp_data.iter().flatten() {
                    let [mx, my] = c.meridian_translation;
                    let [lx, ly] = c.longitude_translation;
                    write!(f, ",{mx:?},{my:?},{lx:?},{ly:?}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn print(e: &KnotExpr) -> String {
    e.to_string()
}
