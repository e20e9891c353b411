use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::h1::{self, Filling, Gluing, Node};
use super::{cite, jsj, Decomposition, GluingEdge, JsjPiece};
use crate::knot::KnotExpr;
use crate::seifert::{self, FillResult, SeifertData, SeifertError, SolidTorus, COMPANION_BOUNDARY, KNOT_BOUNDARY};
use crate::serde_int;
use crate::slope::Slope;

pub const CLASSIFICATION_SCHEMA: &str = "surgery-classification/1";
pub const EVALUATION_SCHEMA: &str = "surgery-evaluation/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("outside the classification regime: requires {precondition} ({detail})")]
    Refusal { precondition: String, detail: String },
    #[error(transparent)]
    Seifert(#[from] SeifertError),
}

impl ClassifyError {
    fn refuse(precondition: &str, detail: String) -> Self {
        ClassifyError::Refusal { precondition: precondition.to_string(), detail }
    }
}

/// A JSJ piece after surgery on its `knot` boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "filled", rename_all = "snake_case")]
pub enum FilledPiece {
    /// The fibration extended over the surgery solid torus.
    Seifert { source: String, seifert: SeifertData },
    /// A Seifert piece that filled to a fibered solid torus.
    SolidTorus { source: String, solid_torus: SolidTorus },
    /// Filled along the fiber slope; the fibration does not extend.
    FiberSlope { source: JsjPiece, slope: Slope },
    Hyperbolic {
        name: String,
        /// Filling slope in the link-exterior convention of the piece.
        slope: Slope,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        certified_by: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum ClassifiedPiece {
    Filled(FilledPiece),
    Unfilled(JsjPiece),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoreKind {
    ExceptionalFiber {
        #[serde(with = "serde_int")]
        order: BigInt,
    },
    RegularFiber,
    ShortGeodesic {
        certified_by: String,
    },
    /// Hyperbolicity of the filling is not certified at this slope.
    Uncertified,
    /// The surgery solid torus is not a fibered neighbourhood.
    FiberFilling,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryCore {
    pub piece: usize,
    #[serde(flatten)]
    pub kind: CoreKind,
}

/// The surgered manifold inside the classification regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurgeryClassification {
    pub schema: String,
    pub expression: String,
    pub slope: Slope,
    pub pieces: Vec<ClassifiedPiece>,
    pub jsj_tori: Vec<GluingEdge>,
    pub surgery_core: SurgeryCore,
    pub irreducible: bool,
    pub justification: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SurgeryOutcome {
    /// Outer piece filled; pieces and tori describe the surgered manifold.
    Filled { core: SurgeryCore },
    /// The outer cable space filled to a solid torus, so the surgery is a
    /// surgery on the companion at `slope`.
    Companion { companion: String, slope: Slope, then: Box<SurgeryEvaluation> },
}

/// Surgery evaluated without regime restrictions. `pieces` and `tori`
/// always describe the whole surgered manifold as a glued space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurgeryEvaluation {
    pub schema: String,
    pub expression: String,
    pub slope: Slope,
    pub pieces: Vec<ClassifiedPiece>,
    pub tori: Vec<GluingEdge>,
    #[serde(flatten)]
    pub outcome: SurgeryOutcome,
}

fn hyperbolic_certificate(cusp_count: usize, q: &BigInt) -> Option<&'static str> {
    let q = q.abs();
    if cusp_count <= 1 && q >= BigInt::from(9) {
        Some(cite::HYPERBOLIC_KNOT_FILLING)
    } else if cusp_count > 1 && q >= BigInt::from(3) {
        Some(cite::UNLINK_EXTERIOR_FILLING)
    } else {
        None
    }
}

fn source_name(p: &JsjPiece) -> String {
    p.kind_name().to_string()
}

/// Evaluates `p/q` surgery on `e` by filling the outer JSJ piece; a cable
/// space that fills to a solid torus hands the surgery down to the companion.
pub fn evaluate_surgery(e: &KnotExpr, slope: &Slope) -> Result<SurgeryEvaluation, SeifertError> {
    let d = jsj(e)?;
    let Decomposition { mut pieces, edges } = d;
    let outer = pieces.remove(0);
    let rest = pieces.into_iter().map(ClassifiedPiece::Unfilled);
    let done = |filled: FilledPiece, outcome: SurgeryOutcome| SurgeryEvaluation {
        schema: EVALUATION_SCHEMA.into(),
        expression: e.to_string(),
        slope: slope.clone(),
        pieces: std::iter::once(ClassifiedPiece::Filled(filled)).chain(rest.clone()).collect(),
        tori: edges.clone(),
        outcome,
    };
    let filled_core = |kind| SurgeryOutcome::Filled { core: SurgeryCore { piece: 0, kind } };

    if let JsjPiece::HyperbolicPiece { name, cusp_labels, convention, .. } = &outer {
        let certified_by = hyperbolic_certificate(cusp_labels.len(), slope.q()).map(str::to_string);
        let kind = match &certified_by {
            Some(c) => CoreKind::ShortGeodesic { certified_by: c.clone() },
            None => CoreKind::Uncertified,
        };
        let filled = FilledPiece::Hyperbolic {
            name: name.clone(),
            slope: convention.to_link(KNOT_BOUNDARY, slope),
            certified_by,
        };
        return Ok(done(filled, filled_core(kind)));
    }

    let sd = outer.seifert().expect("non-hyperbolic pieces are Seifert");
    let fiber = &sd.boundary(KNOT_BOUNDARY).expect("outer piece has a knot boundary").fiber_slope;
    let delta = slope.distance(fiber);
    match seifert::fill(sd, KNOT_BOUNDARY, slope) {
        Err(SeifertError::FiberSlope { .. }) => {
            let filled = FilledPiece::FiberSlope { source: outer.clone(), slope: slope.clone() };
            Ok(done(filled, filled_core(CoreKind::FiberFilling)))
        }
        Err(err) => Err(err),
        Ok(FillResult::Seifert(s)) => {
            let kind = if delta.is_one() { CoreKind::RegularFiber } else { CoreKind::ExceptionalFiber { order: delta } };
            let s = if s.is_closed() { seifert::normalize_closed(&s)? } else { s };
            Ok(done(FilledPiece::Seifert { source: source_name(&outer), seifert: s }, filled_core(kind)))
        }
        Ok(FillResult::SolidTorus(t)) => {
            let KnotExpr::Cable { companion, .. } = e else {
                unreachable!("only cable spaces have two boundaries and at most one exceptional fiber")
            };
            debug_assert_eq!(t.boundary, COMPANION_BOUNDARY);
            let then = evaluate_surgery(companion, &t.meridian)?;
            let outcome = SurgeryOutcome::Companion {
                companion: companion.to_string(),
                slope: t.meridian.clone(),
                then: Box::new(then),
            };
            Ok(done(FilledPiece::SolidTorus { source: source_name(&outer), solid_torus: t }, outcome))
        }
    }
}

fn h1_of(pieces: &[ClassifiedPiece], tori: &[GluingEdge]) -> Result<BigInt, SeifertError> {
    let mut nodes = Vec::with_capacity(pieces.len());
    let mut fillings = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        let node = match p {
            ClassifiedPiece::Filled(FilledPiece::Seifert { seifert, .. }) => Node::Seifert(seifert),
            ClassifiedPiece::Filled(FilledPiece::SolidTorus { solid_torus, .. }) => {
                Node::SolidTorus { boundary: &solid_torus.boundary, meridian: &solid_torus.meridian }
            }
            ClassifiedPiece::Filled(FilledPiece::FiberSlope { source, slope }) => {
                fillings.push(Filling { node: i, boundary: KNOT_BOUNDARY, slope });
                match source.seifert() {
                    Some(s) => Node::Seifert(s),
                    None => Node::KnotExterior,
                }
            }
            ClassifiedPiece::Filled(FilledPiece::Hyperbolic { slope, .. }) => {
                fillings.push(Filling { node: i, boundary: KNOT_BOUNDARY, slope });
                Node::KnotExterior
            }
            ClassifiedPiece::Unfilled(u) => match u.seifert() {
                Some(s) => Node::Seifert(s),
                None => Node::KnotExterior,
            },
        };
        nodes.push(node);
    }
    let gluings: Vec<Gluing<'_>> = tori
        .iter()
        .map(|t| Gluing {
            outer: t.outer,
            outer_boundary: &t.outer_boundary,
            inner: t.inner,
            inner_boundary: &t.inner_boundary,
        })
        .collect();
    h1::order(&nodes, &gluings, &fillings)
}

impl SurgeryEvaluation {
    /// `|H₁|` of the surgered manifold computed from its pieces; `0` when infinite.
    pub fn h1_order(&self) -> Result<BigInt, SeifertError> {
        h1_of(&self.pieces, &self.tori)
    }

    pub fn core(&self) -> &SurgeryCore {
        match &self.outcome {
            SurgeryOutcome::Filled { core } => core,
            SurgeryOutcome::Companion { then, .. } => then.core(),
        }
    }

    /// The closed Seifert manifold this surgery produces, if any.
    pub fn closed_seifert(&self) -> Option<&SeifertData> {
        match (&self.outcome, self.pieces.as_slice()) {
            (SurgeryOutcome::Companion { then, .. }, _) => then.closed_seifert(),
            (SurgeryOutcome::Filled { .. }, [ClassifiedPiece::Filled(FilledPiece::Seifert { seifert, .. })])
                if seifert.is_closed() =>
            {
                Some(seifert)
            }
            _ => None,
        }
    }
}

impl SurgeryClassification {
    pub fn h1_order(&self) -> Result<BigInt, SeifertError> {
        h1_of(&self.pieces, &self.jsj_tori)
    }

    /// Order of the exceptional fiber added by the surgery, if the core is one.
    pub fn appended_fiber_order(&self) -> Option<&BigInt> {
        match &self.surgery_core.kind {
            CoreKind::ExceptionalFiber { order } => Some(order),
            _ => None,
        }
    }
}

/// `|H₁|` of `p/q` surgery computed from the unsurgered JSJ pieces with one
/// extra relation; independent of any filling.
pub fn surgery_h1(e: &KnotExpr, slope: &Slope) -> Result<BigInt, SeifertError> {
    let d = jsj(e)?;
    let mut pieces: Vec<ClassifiedPiece> = d.pieces.into_iter().map(ClassifiedPiece::Unfilled).collect();
    let ClassifiedPiece::Unfilled(outer) = pieces.remove(0) else { unreachable!() };
    pieces.insert(0, ClassifiedPiece::Filled(FilledPiece::FiberSlope { source: outer, slope: slope.clone() }));
    h1_of(&pieces, &d.edges)
}

/// Classifies `p/q` surgery for `|q| >= 9`, with `|p| <= |q|` also required
/// when the outer piece is a torus-knot exterior or cable space. Refuses
/// everything else.
pub fn classify_surgery(e: &KnotExpr, slope: &Slope) -> Result<SurgeryClassification, ClassifyError> {
    let (p, q) = (slope.p().abs(), slope.q().abs());
    if q < BigInt::from(9) {
        return Err(ClassifyError::refuse("|q| >= 9", format!("|q| = {q}")));
    }
    let torus_or_cable = matches!(e, KnotExpr::Torus { .. } | KnotExpr::Cable { .. });
    if torus_or_cable && p > q {
        return Err(ClassifyError::refuse(
            "|p| <= |q| for torus and cable knots",
            format!("|p| = {p} > |q| = {q}"),
        ));
    }
    let ev = evaluate_surgery(e, slope)?;
    let SurgeryOutcome::Filled { core } = ev.outcome else {
        unreachable!("Δ(p/q, rs) >= |q|(|rs| − 1) > 1 inside the regime")
    };
    match &core.kind {
        CoreKind::ExceptionalFiber { order } => debug_assert!(*order >= q),
        CoreKind::ShortGeodesic { .. } => {}
        other => unreachable!("core {other:?} inside the regime"),
    }
    Ok(SurgeryClassification {
        schema: CLASSIFICATION_SCHEMA.into(),
        expression: ev.expression,
        slope: ev.slope,
        pieces: ev.pieces,
        jsj_tori: ev.tori,
        surgery_core: core,
        irreducible: true,
        justification: cite::JSJ_PERSISTENCE.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::parse;

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    fn fibers(d: &SeifertData) -> Vec<i64> {
        let mut v: Vec<i64> = d.exceptional.iter().map(|f| i64::try_from(&f.alpha).unwrap()).collect();
        v.sort();
        v
    }

    #[test]
    fn torus_knot_example() {
        let c = classify_surgery(&parse("torus(3,2)").unwrap(), &s(1, 9)).unwrap();
        assert!(c.jsj_tori.is_empty());
        match &c.pieces[..] {
            [ClassifiedPiece::Filled(FilledPiece::Seifert { seifert, .. })] => assert_eq!(fibers(seifert), [2, 3, 53]),
            other => panic!("{other:?}"),
        }
        assert_eq!(c.appended_fiber_order(), Some(&BigInt::from(53)));
        assert_eq!(c.h1_order().unwrap(), 1.into());
        assert!(c.irreducible);
    }

    #[test]
    fn cable_example_keeps_jsj_torus() {
        let e = parse("cable(13,2; torus(3,2))").unwrap();
        let c = classify_surgery(&e, &s(1, 9)).unwrap();
        assert_eq!(c.appended_fiber_order(), Some(&BigInt::from(233)));
        assert_eq!(c.jsj_tori, jsj(&e).unwrap().edges);
        assert!(matches!(&c.pieces[1], ClassifiedPiece::Unfilled(JsjPiece::TorusExterior { r: 3, s: 2, .. })));
        assert_eq!(c.h1_order().unwrap(), 1.into());
    }

    #[test]
    fn hyperbolic_examples() {
        let c = classify_surgery(&parse("hyp(\"K\",1)").unwrap(), &s(2, 9)).unwrap();
        assert_eq!(
            c.surgery_core.kind,
            CoreKind::ShortGeodesic { certified_by: cite::HYPERBOLIC_KNOT_FILLING.into() }
        );
        assert_eq!(c.h1_order().unwrap(), 2.into());
        let c = classify_surgery(&parse("hyp(\"L\",2)").unwrap(), &s(40, 9)).unwrap();
        assert_eq!(
            c.surgery_core.kind,
            CoreKind::ShortGeodesic { certified_by: cite::UNLINK_EXTERIOR_FILLING.into() }
        );
    }

    #[test]
    fn refusals_name_the_precondition() {
        let t = parse("torus(3,2)").unwrap();
        match classify_surgery(&t, &s(1, 5)) {
            Err(ClassifyError::Refusal { precondition, .. }) => assert_eq!(precondition, "|q| >= 9"),
            other => panic!("{other:?}"),
        }
        match classify_surgery(&t, &s(10, 9)) {
            Err(ClassifyError::Refusal { precondition, .. }) => assert!(precondition.contains("|p| <= |q|")),
            other => panic!("{other:?}"),
        }
        // |p| > |q| is allowed for composite and hyperbolic outer pieces.
        assert!(classify_surgery(&parse("sum(torus(3,2),torus(5,2))").unwrap(), &s(40, 9)).is_ok());
        assert!(classify_surgery(&t, &Slope::meridian()).is_err());
    }

    #[test]
    fn composite_surgery_adds_fiber_of_order_q() {
        let e = parse("sum(torus(3,2),torus(5,2))").unwrap();
        let c = classify_surgery(&e, &s(-4, 11)).unwrap();
        assert_eq!(c.appended_fiber_order(), Some(&BigInt::from(11)));
        assert_eq!(c.jsj_tori.len(), 2);
        assert_eq!(c.h1_order().unwrap(), 4.into());
    }

    #[test]
    fn evaluation_hands_distance_one_cable_to_companion() {
        let e = parse("cable(3,2; torus(5,2))").unwrap();
        let ev = evaluate_surgery(&e, &s(7, 1)).unwrap();
        match &ev.outcome {
            SurgeryOutcome::Companion { slope, then, .. } => {
                assert_eq!(*slope, s(7, 4));
                assert_eq!(then.expression, "torus(5,2)");
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(ev.h1_order().unwrap(), 7.into());
        assert_eq!(fibers(ev.closed_seifert().unwrap()), [2, 5, 33]);
    }

    #[test]
    fn fiber_slope_evaluation() {
        let e = parse("torus(3,2)").unwrap();
        let ev = evaluate_surgery(&e, &s(6, 1)).unwrap();
        assert_eq!(ev.core().kind, CoreKind::FiberFilling);
        assert_eq!(ev.h1_order().unwrap(), 6.into());
        assert!(ev.closed_seifert().is_none());
    }

    #[test]
    fn surgery_h1_is_p() {
        for text in ["unknot", "torus(3,2)", "cable(13,2;torus(3,2))", "sum(torus(3,2),torus(-5,3))", "hyp(\"K\",1)"] {
            let e = parse(text).unwrap();
            for q in 0..=6i64 {
                for p in -12..=12i64 {
                    if num_integer::Integer::gcd(&p, &q) != 1 {
                        continue;
                    }
                    if let Ok(sl) = Slope::new(p, q) {
                        assert_eq!(surgery_h1(&e, &sl).unwrap(), BigInt::from(p.abs()), "{text} {sl}");
                        assert_eq!(evaluate_surgery(&e, &sl).unwrap().h1_order().unwrap(), BigInt::from(p.abs()));
                    }
                }
            }
        }
    }

    #[test]
    fn json_schema_field() {
        let c = classify_surgery(&parse("torus(3,2)").unwrap(), &s(1, 9)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&c).unwrap();
        assert_eq!(v["schema"], CLASSIFICATION_SCHEMA);
        assert_eq!(v["surgery_core"]["kind"], "exceptional_fiber");
        assert_eq!(v["surgery_core"]["order"], 53);
        let back: SurgeryClassification = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }
}
