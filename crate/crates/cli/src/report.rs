//! Human-readable renderings. JSON output goes through serde directly.

use std::fmt::Write;

use dehn_surgery::geometry::LengthBoundReport;
use dehn_surgery::jsj::{
    Certificate, ClassifiedPiece, CoreKind, FilledPiece, Reduction, ReductionEnd, SurgeryClassification,
};

fn core_text(kind: &CoreKind) -> String {
    match kind {
        CoreKind::ExceptionalFiber { order } => format!("exceptional fiber of order {order}"),
        CoreKind::RegularFiber => "regular fiber".into(),
        CoreKind::ShortGeodesic { certified_by } => format!("short geodesic [{certified_by}]"),
        CoreKind::Uncertified => "not certified".into(),
        CoreKind::FiberFilling => "fiber filling".into(),
    }
}

fn piece_text(p: &ClassifiedPiece) -> String {
    match p {
        ClassifiedPiece::Filled(FilledPiece::Seifert { source, seifert }) => format!("filled {source} {seifert}"),
        ClassifiedPiece::Filled(FilledPiece::SolidTorus { source, solid_torus }) => {
            format!("filled {source}: solid torus, meridian {}", solid_torus.meridian)
        }
        ClassifiedPiece::Filled(FilledPiece::FiberSlope { source, slope }) => {
            format!("filled {} along fiber {slope}", source.kind_name())
        }
        ClassifiedPiece::Filled(FilledPiece::Hyperbolic { name, slope, .. }) => {
            format!("filled hyperbolic piece {name:?} at {slope}")
        }
        ClassifiedPiece::Unfilled(u) => match u.seifert() {
            Some(s) => format!("{} {s}", u.kind_name()),
            None => u.kind_name().to_string(),
        },
    }
}

pub fn classification(c: &SurgeryClassification) -> String {
    let mut out = String::new();
    writeln!(out, "{} surgery on {}", c.slope, c.expression).unwrap();
    for (i, p) in c.pieces.iter().enumerate() {
        writeln!(out, "  piece {i}: {}", piece_text(p)).unwrap();
    }
    for t in &c.jsj_tori {
        writeln!(out, "  JSJ torus: piece {} [{}] = piece {} [{}]", t.outer, t.outer_boundary, t.inner, t.inner_boundary)
            .unwrap();
    }
    writeln!(out, "  core: piece {}, {}", c.surgery_core.piece, core_text(&c.surgery_core.kind)).unwrap();
    writeln!(out, "  irreducible: {} [{}]", c.irreducible, c.justification).unwrap();
    out
}

pub fn reduction(r: &Reduction) -> String {
    let mut out = String::new();
    for (i, s) in r.chain.iter().enumerate() {
        writeln!(out, "  stage {i}: {} at {}", s.expression, s.slope).unwrap();
    }
    match &r.end {
        ReductionEnd::Companion => writeln!(out, "  end: companion surgery").unwrap(),
        ReductionEnd::EssentialTorus { distance, .. } => {
            writeln!(out, "  end: essential torus (distance {distance}); not hyperbolic").unwrap()
        }
        ReductionEnd::FiberSlope { fiber } => writeln!(out, "  end: slope is the cable fiber {fiber}").unwrap(),
    }
    out
}

pub fn certificate(c: &Certificate) -> String {
    let mut out = String::new();
    writeln!(out, "{} on {}: m = {}", c.slope, c.expression, c.m_value).unwrap();
    for k in &c.checks {
        let mark = if k.holds { "holds" } else { "fails" };
        writeln!(out, "  {} {}: {} (value {}, threshold {})", k.id, mark, k.condition, k.value, k.threshold).unwrap();
    }
    writeln!(out, "  verdict: {}", c.verdict).unwrap();
    if c.exception_set_computed == Some(false) {
        writeln!(out, "  note: the finite exception set for this torus knot is not computed").unwrap();
    }
    out
}

pub fn length(r: &LengthBoundReport) -> String {
    let mut out = String::new();
    if let Some(l) = r.length {
        writeln!(out, "length {l:.12}").unwrap();
    }
    writeln!(out, "lower bound {:.12}", r.lower_bound).unwrap();
    writeln!(out, "exceeds 2π: {}, exceeds 6: {}", r.exceeds_2pi, r.exceeds_6).unwrap();
    out
}
