use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{cite, jsj, JsjPiece};
use crate::geometry::{exceeds, length_lower_bound, TWO_PI};
use crate::knot::KnotExpr;
use crate::seifert::{SeifertError, KNOT_BOUNDARY};
use crate::slope::{Slope, SlopeError};

pub const CERTIFICATE_SCHEMA: &str = "characterising-certificate/1";

pub const VERDICT_CITED: &str = "characterising by cited theorem (unknot/torus-knot cases)";
pub const VERDICT_CONDITIONAL: &str = "meets all explicit sub-criteria; global constant C(K) is non-effective";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub condition: String,
    pub threshold: String,
    pub value: String,
    pub holds: bool,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    CitedTheorem,
    Conditional,
    Fails(String),
}

impl Verdict {
    /// `c0` decides the cited cases; otherwise the first failing check
    /// decides, and if none fails the verdict stays conditional.
    pub fn from_checks(checks: &[Check]) -> Self {
        if checks.iter().any(|c| c.id == "c0" && c.holds) {
            return Verdict::CitedTheorem;
        }
        match checks.iter().find(|c| c.id != "c0" && !c.holds) {
            Some(c) => Verdict::Fails(c.id.clone()),
            None => Verdict::Conditional,
        }
    }

    pub fn text(&self) -> String {
        match self {
            Verdict::CitedTheorem => VERDICT_CITED.into(),
            Verdict::Conditional => VERDICT_CONDITIONAL.into(),
            Verdict::Fails(id) => format!("fails condition {id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub expression: String,
    pub slope: Slope,
    /// `|q|·min{|p/q − n| : n ∈ ℤ∖{−1,0,1}}` as an exact fraction.
    pub m_value: String,
    pub checks: Vec<Check>,
    pub verdict: String,
    /// Integer slopes lie outside every regime certified here.
    pub integer_slope: bool,
    /// Set for torus knots: the finite exception set is not computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exception_set_computed: Option<bool>,
    /// Hypotheses taken on trust.
    pub assumptions: Vec<String>,
}

impl Certificate {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_checks(&self.checks)
    }
}

fn check(id: &str, condition: &str, threshold: impl ToString, value: impl ToString, holds: bool, citation: &str) -> Check {
    Check {
        id: id.into(),
        condition: condition.into(),
        threshold: threshold.to_string(),
        value: value.to_string(),
        holds,
        citation: citation.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error(transparent)]
    Slope(#[from] SlopeError),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
}

/// Reports every explicit threshold behind characterising `p/q` for `e`.
/// No check is skipped, and the verdict never claims more than a
/// conditional pass outside the unknot and torus-knot cases.
pub fn certify_characterising(e: &KnotExpr, slope: &Slope) -> Result<Certificate, CertifyError> {
    let gap = slope.integer_gap()?;
    let (p, q) = (slope.p().abs(), slope.q().abs());
    let decomposition = jsj(e)?;
    let mut checks = Vec::with_capacity(7);

    let integer_slope = slope.is_integral();
    let (c0_holds, c0_value, c0_cite) = match e {
        KnotExpr::Unknot => (true, "unknot".to_string(), cite::UNKNOT),
        KnotExpr::Torus { .. } if !integer_slope => (true, "torus knot, non-integral slope".into(), cite::TORUS_KNOT),
        KnotExpr::Torus { .. } => (false, "torus knot, integral slope".into(), cite::TORUS_KNOT),
        _ => (false, "neither unknot nor torus knot".into(), cite::TORUS_KNOT),
    };
    checks.push(check(
        "c0",
        "knot is the unknot, or a torus knot with non-integral slope",
        "cited theorem applies",
        c0_value,
        c0_holds,
        c0_cite,
    ));
    checks.push(check("c1", "|p| <= |q|", format!("|p| <= {q}"), &p, p <= q, cite::CHARACTERISING_REGIME));
    let m_needed = BigRational::from_integer(9.into());
    checks.push(check("c2", "m_value >= 9", "9", &gap.m_value, gap.m_value >= m_needed, cite::INTEGER_GAP));
    checks.push(check("c3", "|q| >= 9", "9", &q, q >= BigInt::from(9), cite::HYPERBOLIC_KNOT_FILLING));
    checks.push(check("c4", "|q| > 2", "2", &q, q > BigInt::from(2), cite::NO_INCOMPRESSIBLE_TORUS));
    let bound = q.to_u64().map_or(f64::INFINITY, length_lower_bound);
    checks.push(check(
        "c5",
        "(sqrt(3)/6)·|q| > 2π, i.e. |q| >= 22",
        format!("{TWO_PI:.9}"),
        format!("{bound:.9}"),
        exceeds(bound, TWO_PI),
        cite::TWO_PI_LENGTH,
    ));

    let exterior_max = decomposition.max_exceptional_order().unwrap_or_else(BigInt::zero);
    let c6 = match decomposition.outer() {
        JsjPiece::HyperbolicPiece { .. } => {
            check("c6", "appended fiber order > largest exterior fiber order", &exterior_max, "no appended fiber (hyperbolic outer piece)", true, cite::LARGEST_FIBER)
        }
        outer => {
            let sd = outer.seifert().expect("non-hyperbolic pieces are Seifert");
            let fiber = &sd.boundary(KNOT_BOUNDARY).expect("outer piece has a knot boundary").fiber_slope;
            let order = slope.distance(fiber);
            check(
                "c6",
                "appended fiber order > largest exterior fiber order",
                &exterior_max,
                &order,
                order >= BigInt::from(2) && order > exterior_max,
                cite::LARGEST_FIBER,
            )
        }
    };
    checks.push(c6);

    let verdict = Verdict::from_checks(&checks).text();
    let mut assumptions = Vec::new();
    if e.contains_hyperbolic() {
        assumptions.push("cusp shapes of hyperbolic atoms, when used, are maximal cusps".to_string());
    }
    Ok(Certificate {
        schema: CERTIFICATE_SCHEMA.into(),
        expression: e.to_string(),
        slope: slope.clone(),
        m_value: gap.m_value.to_string(),
        checks,
        verdict,
        integer_slope,
        exception_set_computed: matches!(e, KnotExpr::Torus { .. }).then_some(false),
        assumptions,
    })
}
