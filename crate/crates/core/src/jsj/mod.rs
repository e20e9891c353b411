//! JSJ decompositions of knot exteriors and the surgery procedures built on
//! them: classification of surgered manifolds, reduction of cable surgeries
//! to companion surgeries, and characterising-slope certificates.

mod certificate;
mod classify;
mod h1;
mod reduce;

use serde::{Deserialize, Serialize};

use crate::knot::{CuspShape, KnotExpr};
use crate::seifert::{self, summand_boundary, SeifertData, SeifertError, COMPANION_BOUNDARY, KNOT_BOUNDARY};
use crate::slope::Slope;

pub use certificate::{certify_characterising, Certificate, Check, CertifyError, Verdict, CERTIFICATE_SCHEMA, VERDICT_CITED, VERDICT_CONDITIONAL};
pub use classify::{
    classify_surgery, evaluate_surgery, surgery_h1, ClassifiedPiece, ClassifyError, CoreKind, FilledPiece,
    SurgeryClassification, SurgeryCore, SurgeryEvaluation, SurgeryOutcome, CLASSIFICATION_SCHEMA, EVALUATION_SCHEMA,
};
pub use reduce::{reduce_cable_surgery, reduce_to_companion, ReduceError, Reduction, ReductionEnd, Stage, REDUCTION_SCHEMA};

/// Citation strings attached to certified conclusions. Each names the
/// published result the conclusion rests on.
pub mod cite {
    pub const JSJ_PERSISTENCE: &str = "surgery with |q| >= 9 (and |p| <= |q| when the outer piece is a torus-knot \
         exterior or cable space) is irreducible and keeps the exterior's JSJ tori";
    pub const SEIFERT_EXTENSION: &str =
        "the outer Seifert fibration extends over the surgery solid torus; its core is an exceptional fiber of order Δ(p/q, fiber) >= |q|";
    pub const HYPERBOLIC_KNOT_FILLING: &str =
        "hyperbolic knot exterior: exceptional fillings lie within distance 8 of the meridian, so |q| >= 9 is hyperbolic";
    pub const UNLINK_EXTERIOR_FILLING: &str =
        "hyperbolic knot in an unknot/unlink exterior: filling with |q| >= 2 is irreducible with incompressible boundary, |q| >= 3 is hyperbolic";
    pub const NO_INCOMPRESSIBLE_TORUS: &str =
        "hyperbolic knot exterior filled with |q| > 2 contains no incompressible torus";
    pub const TWO_PI_LENGTH: &str =
        "maximal-cusp slope length >= (sqrt(3)/6)·Δ(σ, μ) exceeds 2π once |q| >= 22 (2π-theorem regime)";
    pub const CHARACTERISING_REGIME: &str =
        "|p| <= |q| with |q| beyond a knot-dependent constant that is obtained non-constructively";
    pub const INTEGER_GAP: &str =
        "the singular fiber order |qrs − p| is at least m = |q|·min{|p/q − n| : n ∈ ℤ∖{−1,0,1}}";
    pub const LARGEST_FIBER: &str =
        "the surgery core is recognisable when its fiber order exceeds every exceptional order of the exterior";
    pub const UNKNOT: &str = "every slope is characterising for the unknot (Kronheimer-Mrowka-Ozsváth-Szabó)";
    pub const TORUS_KNOT: &str =
        "all but finitely many non-integral slopes are characterising for a torus knot (McCoy); the exception set is not computed here";
    pub const CABLE_ESSENTIAL_TORUS: &str =
        "a cable space filled with Δ(p/q, rs) >= 2 has two exceptional fibers, so the companion torus stays incompressible";
    pub const CABLE_SOLID_TORUS: &str =
        "a cable space filled with Δ(p/q, rs) = 1 is a solid torus; the surgery is a companion surgery";
}

/// Slope bookkeeping on a hyperbolic piece viewed as a link exterior: the
/// distinguished cusp keeps `p/q`, every other cusp reads `p/q` as `q/p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeConvention {
    pub distinguished: String,
}

impl SlopeConvention {
    /// Piece coordinates to link coordinates.
    pub fn to_link(&self, cusp: &str, slope: &Slope) -> Slope {
        if cusp == self.distinguished {
            slope.clone()
        } else {
            Slope::new(slope.q().clone(), slope.p().clone()).expect("slope is nonzero")
        }
    }

    /// Link coordinates back to piece coordinates (the reciprocal is an
    /// involution, so this is the same map).
    pub fn from_link(&self, cusp: &str, slope: &Slope) -> Slope {
        self.to_link(cusp, slope)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "piece", rename_all = "snake_case")]
pub enum JsjPiece {
    UnknotExterior {
        seifert: SeifertData,
    },
    TorusExterior {
        r: i64,
        s: i64,
        seifert: SeifertData,
    },
    CableSpace {
        r: i64,
        s: i64,
        seifert: SeifertData,
    },
    ComposingSpace {
        n: usize,
        seifert: SeifertData,
    },
    HyperbolicPiece {
        name: String,
        cusp_labels: Vec<String>,
        convention: SlopeConvention,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cusp_data: Option<Vec<CuspShape>>,
    },
}

impl JsjPiece {
    pub fn seifert(&self) -> Option<&SeifertData> {
        match self {
            JsjPiece::UnknotExterior { seifert }
            | JsjPiece::TorusExterior { seifert, .. }
            | JsjPiece::CableSpace { seifert, .. }
            | JsjPiece::ComposingSpace { seifert, .. } => Some(seifert),
            JsjPiece::HyperbolicPiece { .. } => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            JsjPiece::UnknotExterior { .. } => "unknot_exterior",
            JsjPiece::TorusExterior { .. } => "torus_exterior",
            JsjPiece::CableSpace { .. } => "cable_space",
            JsjPiece::ComposingSpace { .. } => "composing_space",
            JsjPiece::HyperbolicPiece { .. } => "hyperbolic_piece",
        }
    }
}

/// A JSJ torus. Slopes on it are read in the inner piece's knot
/// `(meridian, longitude)` coordinates, which is also how the outer piece
/// labels that boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GluingEdge {
    pub outer: usize,
    pub outer_boundary: String,
    pub inner: usize,
    pub inner_boundary: String,
}

/// Pieces in preorder; piece 0 contains `∂N(K)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub pieces: Vec<JsjPiece>,
    pub edges: Vec<GluingEdge>,
}

impl Decomposition {
    pub fn outer(&self) -> &JsjPiece {
        &self.pieces[0]
    }

    pub fn max_exceptional_order(&self) -> Option<num_bigint::BigInt> {
        self.pieces.iter().filter_map(JsjPiece::seifert).filter_map(SeifertData::max_fiber_order).max()
    }
}

/// JSJ decomposition of a validated expression's exterior.
pub fn jsj(e: &KnotExpr) -> Result<Decomposition, SeifertError> {
    let mut d = Decomposition { pieces: Vec::new(), edges: Vec::new() };
    add_piece(e, &mut d)?;
    Ok(d)
}

fn add_piece(e: &KnotExpr, d: &mut Decomposition) -> Result<usize, SeifertError> {
    let idx = d.pieces.len();
    let glue = |d: &mut Decomposition, boundary: String, child: &KnotExpr| -> Result<(), SeifertError> {
        let inner = add_piece(child, d)?;
        d.edges.push(GluingEdge {
            outer: idx,
            outer_boundary: boundary,
            inner,
            inner_boundary: KNOT_BOUNDARY.to_string(),
        });
        Ok(())
    };
    match e {
        KnotExpr::Unknot => d.pieces.push(JsjPiece::UnknotExterior { seifert: seifert::unknot_exterior() }),
        &KnotExpr::Torus { r, s } => {
            d.pieces.push(JsjPiece::TorusExterior { r, s, seifert: seifert::torus_exterior(r, s)? })
        }
        KnotExpr::Cable { r, s, companion } => {
            d.pieces.push(JsjPiece::CableSpace { r: *r, s: *s, seifert: seifert::cable_space(*r, *s)? });
            glue(d, COMPANION_BOUNDARY.to_string(), companion)?;
        }
        KnotExpr::Sum { summands } => {
            let n = summands.len() + 1;
            d.pieces.push(JsjPiece::ComposingSpace { n, seifert: seifert::composing_space(n)? });
            for (i, child) in summands.iter().enumerate() {
                glue(d, summand_boundary(i), child)?;
            }
        }
        KnotExpr::Hyp { name, cusp_count, cusp_data } => {
            let cusp_labels = std::iter::once(KNOT_BOUNDARY.to_string())
                .chain((1..*cusp_count).map(|i| format!("cusp{i}")))
                .collect();
            d.pieces.push(JsjPiece::HyperbolicPiece {
                name: name.clone(),
                cusp_labels,
                convention: SlopeConvention { distinguished: KNOT_BOUNDARY.to_string() },
                cusp_data: cusp_data.clone(),
            });
        }
    }
    Ok(idx)
}
