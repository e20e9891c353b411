use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::classify::{evaluate_surgery, SurgeryEvaluation};
use super::cite;
use crate::knot::KnotExpr;
use crate::seifert::SeifertError;
use crate::serde_int;
use crate::slope::Slope;

pub const REDUCTION_SCHEMA: &str = "companion-reduction/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("{0} is not a cable")]
    NotCable(String),
    #[error("slope {0} has q = 0; the meridian reduces to the meridian")]
    Meridian(Slope),
    #[error("Δ({slope}, {fiber}) = {distance}, reduction needs distance 1")]
    DistanceNotOne { slope: Slope, fiber: Slope, distance: BigInt },
    #[error("reduced slope {reduced} from {slope} violates {condition}")]
    Postcondition { slope: Slope, reduced: Slope, condition: String },
    #[error(transparent)]
    Seifert(#[from] SeifertError),
}

/// One stage of a reduction chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub expression: String,
    pub slope: Slope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "end", rename_all = "snake_case")]
pub enum ReductionEnd {
    /// The last expression is not a cable; the surgery is the last stage.
    Companion,
    /// `Δ >= 2` on the outer cable space: the companion torus stays
    /// incompressible, so the surgered manifold is not hyperbolic.
    EssentialTorus {
        #[serde(with = "serde_int")]
        distance: BigInt,
        hyperbolic: bool,
        citation: String,
        evaluation: Box<SurgeryEvaluation>,
    },
    /// The slope is the cable-space fiber; the fibration does not extend.
    FiberSlope { fiber: Slope },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub schema: String,
    pub chain: Vec<Stage>,
    #[serde(flatten)]
    pub end: ReductionEnd,
}

impl Reduction {
    pub fn last(&self) -> &Stage {
        self.chain.last().expect("chain starts with the input")
    }
}

fn cable_fiber(r: i64, s: i64) -> Slope {
    Slope::integer(BigInt::from(r) * s)
}

/// Rewrites `p/q` surgery on an `(r, s)` cable with `Δ(p/q, rs) = 1` as
/// surgery on the companion.
///
/// The companion slope is the image of the meridian under `k` Dehn twists
/// along the cabling slope `r/s`, `k = ±q`. The result is checked against
/// `|p'| = |p|`, `q | q'` and `|q'| > |q|`.
pub fn reduce_cable_surgery(e: &KnotExpr, slope: &Slope) -> Result<(KnotExpr, Slope), ReduceError> {
    let KnotExpr::Cable { r, s, companion } = e else {
        return Err(ReduceError::NotCable(e.to_string()));
    };
    if slope.q().is_zero() {
        return Err(ReduceError::Meridian(slope.clone()));
    }
    let fiber = cable_fiber(*r, *s);
    let distance = slope.distance(&fiber);
    if !distance.is_one() {
        return Err(ReduceError::DistanceNotOne { slope: slope.clone(), fiber, distance });
    }
    let (p, q) = (slope.p(), slope.q());
    let rs = BigInt::from(*r) * s;
    // p − q·rs = ±1 selects the twist direction.
    let k = if p - q * &rs == BigInt::one() { q.clone() } else { -q };
    let axis = Slope::new(*r, *s).expect("cable slope is primitive");
    let reduced = Slope::meridian().dehn_twist(&axis, &k);
    let fail = |condition: &str| ReduceError::Postcondition {
        slope: slope.clone(),
        reduced: reduced.clone(),
        condition: condition.to_string(),
    };
    if reduced.p().abs() != p.abs() {
        return Err(fail("|p'| = |p|"));
    }
    if !reduced.q().is_multiple_of(q) {
        return Err(fail("q divides q'"));
    }
    if reduced.q().abs() <= q.abs() {
        return Err(fail("|q'| > |q|"));
    }
    Ok((companion.as_ref().clone(), reduced))
}

/// Peels cable spaces off while the slope meets their fiber once, then
/// reports why it stopped.
pub fn reduce_to_companion(e: &KnotExpr, slope: &Slope) -> Result<Reduction, ReduceError> {
    if slope.q().is_zero() {
        return Err(ReduceError::Meridian(slope.clone()));
    }
    let stage = |e: &KnotExpr, s: &Slope| Stage { expression: e.to_string(), slope: s.clone() };
    let mut chain = vec![stage(e, slope)];
    let (mut e, mut slope) = (e.clone(), slope.clone());
    let end = loop {
        let KnotExpr::Cable { r, s, .. } = &e else { break ReductionEnd::Companion };
        let fiber = cable_fiber(*r, *s);
        let distance = slope.distance(&fiber);
        if distance.is_zero() {
            break ReductionEnd::FiberSlope { fiber };
        }
        if !distance.is_one() {
            let evaluation = evaluate_surgery(&e, &slope)?;
            break ReductionEnd::EssentialTorus {
                distance,
                hyperbolic: false,
                citation: cite::CABLE_ESSENTIAL_TORUS.into(),
                evaluation: Box::new(evaluation),
            };
        }
        let (next, next_slope) = reduce_cable_surgery(&e, &slope)?;
        chain.push(stage(&next, &next_slope));
        e = next;
        slope = next_slope;
    };
    Ok(Reduction { schema: REDUCTION_SCHEMA.into(), chain, end })
}
