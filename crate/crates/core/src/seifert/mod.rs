//! Seifert fibered pieces over planar bases.
//!
//! Every boundary torus carries a *frame*: the section curve `d` and the
//! regular fiber `h`, both written as integer vectors in that torus's
//! external `(meridian, longitude)` coordinates. Section curves are oriented
//! so that, in homology of the piece,
//!
//! ```text
//! Σ d_j + Σ c_i = 0,      α_i c_i + β_i h = 0,
//! ```
//!
//! where `c_i` is the section boundary around the `i`-th exceptional fiber.
//! Filling a boundary with meridian `a·d + b·h` therefore appends the fiber
//! `(a, b)`. The frames below are derived from the homology of each piece, so
//! the presentation reproduces `H₁` of every filling exactly.

pub mod homology;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::serde_int;
use crate::slope::Slope;
use homology::filled_presentation;

pub const KNOT_BOUNDARY: &str = "knot";
pub const COMPANION_BOUNDARY: &str = "companion";

pub fn summand_boundary(i: usize) -> String {
    format!("summand{i}")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("filling slope {slope} is the fiber slope on {boundary:?}; the fibration does not extend")]
    FiberSlope { boundary: String, slope: Slope },
    #[error("no boundary torus labelled {0:?}")]
    UnknownBoundary(String),
    #[error("piece has boundary; expected a closed piece")]
    NotClosed,
    #[error("torus exterior needs coprime |r|, |s| >= 2, got ({0}, {1})")]
    BadTorus(i64, i64),
    #[error("cable space needs coprime (r, s) with |s| >= 2, got ({0}, {1})")]
    BadCable(i64, i64),
    #[error("composing space needs at least 3 boundaries, got {0}")]
    TooFewBoundaries(usize),
    #[error("exceptional fiber ({alpha}, {beta}) needs alpha >= 2 and gcd(alpha, beta) = 1")]
    BadFiber { alpha: BigInt, beta: BigInt },
    #[error("boundary {0:?} has no homology filling")]
    MissingFilling(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExceptionalFiber {
    #[serde(with = "serde_int")]
    pub alpha: BigInt,
    #[serde(with = "serde_int")]
    pub beta: BigInt,
}

impl ExceptionalFiber {
    pub fn new(alpha: impl Into<BigInt>, beta: impl Into<BigInt>) -> Result<Self, SeifertError> {
        let (alpha, beta) = (alpha.into(), beta.into());
        if alpha < BigInt::from(2) || !alpha.gcd(&beta).is_one() {
            return Err(SeifertError::BadFiber { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }
}

impl fmt::Display for ExceptionalFiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.alpha, self.beta)
    }
}

/// A boundary torus of a Seifert piece with its section/fiber frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryFiber {
    pub label: String,
    pub fiber_slope: Slope,
    #[serde(with = "serde_int::pair")]
    pub section: [BigInt; 2],
    #[serde(with = "serde_int::pair")]
    pub fiber: [BigInt; 2],
}

impl BoundaryFiber {
    fn new(label: impl Into<String>, section: [BigInt; 2], fiber: [BigInt; 2]) -> Self {
        debug_assert!(det(&section, &fiber).abs().is_one(), "frame must be unimodular");
        let fiber_slope = Slope::from_vector(&fiber).expect("fiber vector is primitive");
        Self { label: label.into(), fiber_slope, section, fiber }
    }

    /// Coordinates `(a, b)` of an external vector `v = a·d + b·h`.
    pub fn frame_coordinates(&self, v: &[BigInt; 2]) -> (BigInt, BigInt) {
        let d = det(&self.section, &self.fiber);
        let a = det(v, &self.fiber) * &d;
        let b = det(&self.section, v) * &d;
        (a, b)
    }
}

fn det(u: &[BigInt; 2], v: &[BigInt; 2]) -> BigInt {
    &u[0] * &v[1] - &u[1] * &v[0]
}

fn vec2(x: impl Into<BigInt>, y: impl Into<BigInt>) -> [BigInt; 2] {
    [x.into(), y.into()]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertData {
    pub base_genus: u32,
    pub boundary_fibers: Vec<BoundaryFiber>,
    pub exceptional: Vec<ExceptionalFiber>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_int")]
    pub integer_part: Option<BigInt>,
}

mod opt_int {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(n) => serde_int::serialize(n, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        serde_int::deserialize(d).map(Some)
    }
}

/// A fibered solid torus left over after filling a piece with one remaining
/// boundary and at most one exceptional fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolidTorus {
    pub boundary: String,
    /// Slope on the remaining boundary that bounds a meridian disc.
    pub meridian: Slope,
    pub fiber_slope: Slope,
    /// Multiplicity of the core as a fiber (1 when the core is regular).
    #[serde(with = "serde_int")]
    pub core_order: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum FillResult {
    Seifert(SeifertData),
    SolidTorus(SolidTorus),
}

impl SeifertData {
    /// A closed piece over S² with the given exceptional fibers.
    pub fn closed(exceptional: Vec<ExceptionalFiber>, integer_part: impl Into<BigInt>) -> Self {
        Self { base_genus: 0, boundary_fibers: Vec::new(), exceptional, integer_part: Some(integer_part.into()) }
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_fibers.is_empty()
    }

    pub fn boundary(&self, label: &str) -> Option<&BoundaryFiber> {
        self.boundary_fibers.iter().find(|b| b.label == label)
    }

    pub fn fiber_orders(&self) -> Vec<BigInt> {
        self.exceptional.iter().map(|f| f.alpha.clone()).collect()
    }

    pub fn max_fiber_order(&self) -> Option<BigInt> {
        self.exceptional.iter().map(|f| f.alpha.clone()).max()
    }

    /// Rational Euler number `−(b + Σ β_i/α_i)` of a closed piece.
    pub fn euler_number(&self) -> Option<BigRational> {
        let b = self.integer_part.as_ref()?;
        let sum = self
            .exceptional
            .iter()
            .fold(BigRational::from_integer(b.clone()), |acc, f| {
                acc + BigRational::new(f.beta.clone(), f.alpha.clone())
            });
        Some(-sum)
    }

    /// Same piece with the opposite orientation: every β and the integer
    /// part change sign, and boundary frames flip.
    pub fn orientation_reversed(&self) -> Self {
        Self {
            base_genus: self.base_genus,
            boundary_fibers: self
                .boundary_fibers
                .iter()
                .map(|b| BoundaryFiber::new(b.label.clone(), [-&b.section[0], -&b.section[1]], b.fiber.clone()))
                .collect(),
            exceptional: self
                .exceptional
                .iter()
                .map(|f| ExceptionalFiber { alpha: f.alpha.clone(), beta: -&f.beta })
                .collect(),
            integer_part: self.integer_part.as_ref().map(|b| -b),
        }
    }
}

/// Seifert fibration of the `(r, s)` torus knot exterior: a disc with
/// exceptional fibers of orders `|r|` and `|s|`, regular fiber `rs/1` on the
/// boundary.
///
/// The β values and the boundary section are found by search: the unique
/// candidate whose meridian filling has `H₁ = 1` and whose longitude filling
/// has infinite `H₁`.
pub fn torus_exterior(r: i64, s: i64) -> Result<SeifertData, SeifertError> {
    if r.gcd(&s) != 1 || r.abs() < 2 || s.abs() < 2 {
        return Err(SeifertError::BadTorus(r, s));
    }
    static CACHE: OnceLock<Mutex<HashMap<(i64, i64), SeifertData>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&(r, s)) {
        return Ok(hit.clone());
    }
    let found = search_torus_exterior(r, s)?;
    cache.lock().expect("cache lock").insert((r, s), found.clone());
    Ok(found)
}

fn search_torus_exterior(r: i64, s: i64) -> Result<SeifertData, SeifertError> {
    let rs = BigInt::from(r) * s;
    let (a1, a2) = (r.abs(), s.abs());
    let fiber = vec2(rs.clone(), 1);
    let coprime = |a: i64| move |b: &i64| a.gcd(b) == 1;
    for b1 in (1..a1).filter(coprime(a1)) {
        for b2 in (1..a2).filter(coprime(a2)) {
            for b0 in -2..=1i64 {
                // Meridian μ = d + b0·h.
                let section = vec2(1 - &rs * b0, -b0);
                let candidate = SeifertData {
                    base_genus: 0,
                    boundary_fibers: vec![BoundaryFiber::new(KNOT_BOUNDARY, section, fiber.clone())],
                    exceptional: vec![ExceptionalFiber::new(a1, b1)?, ExceptionalFiber::new(a2, b2)?],
                    integer_part: None,
                };
                let order_at = |v: [BigInt; 2]| h1_order_filled(&candidate, &[(KNOT_BOUNDARY, v)]);
                if order_at(vec2(1, 0))?.is_one() && order_at(vec2(0, 1))?.is_zero() {
                    return Ok(candidate);
                }
            }
        }
    }
    unreachable!("the congruence α₂β₁ + α₁β₂ ≡ sign(rs) mod α₁α₂ always has a solution")
}

/// The cable space of an `(r, s)` cable: annulus base, one exceptional fiber of
/// order `|s|`; regular fiber `rs/1` on the knot boundary and `r/s` on the
/// companion torus (in the companion's coordinates).
pub fn cable_space(r: i64, s: i64) -> Result<SeifertData, SeifertError> {
    if r.gcd(&s) != 1 || s.abs() < 2 {
        return Err(SeifertError::BadCable(r, s));
    }
    let (r, s) = (BigInt::from(r), BigInt::from(s));
    // Section on the companion torus: x·μ' + y·λ' with y·r − x·s = 1.
    let e = r.extended_gcd(&s);
    let (mut x, mut y) = (-e.y, e.x);
    if e.gcd.is_negative() {
        x = -x;
        y = -y;
    }
    // Exceptional fiber (s, y), then shift the section so 0 <= β < α.
    let (mut alpha, mut beta) = (s.clone(), y.clone());
    if alpha.is_negative() {
        alpha = -alpha;
        beta = -beta;
    }
    let k = beta.div_floor(&alpha);
    beta -= &k * &alpha;
    let companion_section = [&x - &k * &r, &y - &k * &s];
    let rs = &r * &s;
    Ok(SeifertData {
        base_genus: 0,
        boundary_fibers: vec![
            BoundaryFiber::new(KNOT_BOUNDARY, vec2(1, 0), [rs, BigInt::one()]),
            BoundaryFiber::new(COMPANION_BOUNDARY, companion_section, [r, s]),
        ],
        exceptional: vec![ExceptionalFiber { alpha, beta }],
        integer_part: None,
    })
}

/// `P × S¹` for a planar `P` with `n` boundaries: the fiber is the meridian on
/// the knot boundary and on every summand torus.
pub fn composing_space(n_boundaries: usize) -> Result<SeifertData, SeifertError> {
    if n_boundaries < 3 {
        return Err(SeifertError::TooFewBoundaries(n_boundaries));
    }
    let mut boundary_fibers = vec![BoundaryFiber::new(KNOT_BOUNDARY, vec2(0, -1), vec2(1, 0))];
    boundary_fibers
        .extend((0..n_boundaries - 1).map(|i| BoundaryFiber::new(summand_boundary(i), vec2(0, 1), vec2(1, 0))));
    Ok(SeifertData { base_genus: 0, boundary_fibers, exceptional: Vec::new(), integer_part: None })
}

/// The unknot exterior as a solid torus fibered by meridians.
pub fn unknot_exterior() -> SeifertData {
    SeifertData {
        base_genus: 0,
        boundary_fibers: vec![BoundaryFiber::new(KNOT_BOUNDARY, vec2(0, -1), vec2(1, 0))],
        exceptional: Vec::new(),
        integer_part: None,
    }
}

/// Dehn fills one boundary torus, extending the Seifert fibration.
///
/// With `d = Δ(filling, fiber)`: `d = 0` is refused; `d = 1` adds a regular
/// core; `d >= 2` appends an exceptional fiber of order `d`. A result with a
/// single boundary and at most one exceptional fiber is a solid torus.
pub fn fill(piece: &SeifertData, boundary: &str, filling: &Slope) -> Result<FillResult, SeifertError> {
    let idx = piece
        .boundary_fibers
        .iter()
        .position(|b| b.label == boundary)
        .ok_or_else(|| SeifertError::UnknownBoundary(boundary.to_string()))?;
    let frame = &piece.boundary_fibers[idx];
    let (mut a, mut b) = frame.frame_coordinates(&filling.vector());
    if a.is_zero() {
        return Err(SeifertError::FiberSlope { boundary: boundary.to_string(), slope: filling.clone() });
    }
    if a.is_negative() {
        a = -a;
        b = -b;
    }
    let mut out = piece.clone();
    out.boundary_fibers.remove(idx);
    if a.is_one() {
        match out.boundary_fibers.first_mut() {
            Some(other) => {
                let section = [&other.section[0] - &b * &other.fiber[0], &other.section[1] - &b * &other.fiber[1]];
                *other = BoundaryFiber::new(other.label.clone(), section, other.fiber.clone());
            }
            None => *out.integer_part.get_or_insert_with(BigInt::zero) += b,
        }
    } else {
        out.exceptional.push(ExceptionalFiber { alpha: a, beta: b });
    }
    if out.boundary_fibers.is_empty() {
        out.integer_part.get_or_insert_with(BigInt::zero);
    }
    if out.boundary_fibers.len() == 1 && out.exceptional.len() <= 1 {
        let rest = &out.boundary_fibers[0];
        let (alpha, beta) = out
            .exceptional
            .first()
            .map_or((BigInt::one(), BigInt::zero()), |f| (f.alpha.clone(), f.beta.clone()));
        // Null-homologous curve on the remaining torus: −α·d + β·h.
        let meridian = [
            &beta * &rest.fiber[0] - &alpha * &rest.section[0],
            &beta * &rest.fiber[1] - &alpha * &rest.section[1],
        ];
        return Ok(FillResult::SolidTorus(SolidTorus {
            boundary: rest.label.clone(),
            meridian: Slope::from_vector(&meridian).expect("meridian is primitive"),
            fiber_slope: rest.fiber_slope.clone(),
            core_order: alpha,
        }));
    }
    Ok(FillResult::Seifert(out))
}

/// Canonical form of a closed piece: each β reduced into `[0, α)` with the
/// overflow carried into the integer part, regular "fibers" of order 1
/// absorbed, and fibers sorted.
pub fn normalize_closed(piece: &SeifertData) -> Result<SeifertData, SeifertError> {
    if !piece.is_closed() {
        return Err(SeifertError::NotClosed);
    }
    let mut b = piece.integer_part.clone().unwrap_or_default();
    let mut fibers = Vec::with_capacity(piece.exceptional.len());
    for f in &piece.exceptional {
        let (carry, beta) = f.beta.div_mod_floor(&f.alpha);
        b += carry;
        if f.alpha.is_one() {
            continue;
        }
        fibers.push(ExceptionalFiber { alpha: f.alpha.clone(), beta });
    }
    fibers.sort();
    Ok(SeifertData::closed(fibers, b))
}

/// Order of `H₁` of a closed piece, `0` when infinite.
pub fn h1_order(piece: &SeifertData) -> Result<BigInt, SeifertError> {
    h1_order_filled(piece, &[])
}

/// Order of `H₁` after attaching, on every remaining boundary, a solid torus
/// (or any space with the same homology) whose meridian is the given
/// external vector. Fillings along the fiber are allowed here.
pub fn h1_order_filled(piece: &SeifertData, fillings: &[(&str, [BigInt; 2])]) -> Result<BigInt, SeifertError> {
    let mut pairs: Vec<(BigInt, BigInt)> =
        piece.exceptional.iter().map(|f| (f.alpha.clone(), f.beta.clone())).collect();
    for b in &piece.boundary_fibers {
        let (_, v) = fillings
            .iter()
            .find(|(l, _)| *l == b.label)
            .ok_or_else(|| SeifertError::MissingFilling(b.label.clone()))?;
        pairs.push(b.frame_coordinates(v));
    }
    pairs.push((BigInt::one(), piece.integer_part.clone().unwrap_or_default()));
    Ok(filled_presentation(&pairs).group_order())
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fibers: Vec<String> = self.exceptional.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", fibers.join(","))?;
        match &self.integer_part {
            Some(b) => write!(f, " b={b}"),
            None => {
                let bd: Vec<String> =
                    self.boundary_fibers.iter().map(|b| format!("{}:{}", b.label, b.fiber_slope)).collect();
                write!(f, " boundary {{{}}}", bd.join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    fn orders(d: &SeifertData) -> Vec<i64> {
        let mut v: Vec<i64> = d.exceptional.iter().map(|f| i64::try_from(&f.alpha).unwrap()).collect();
        v.sort();
        v
    }

    fn closed(r: FillResult) -> SeifertData {
        match r {
            FillResult::Seifert(d) => d,
            other => panic!("expected Seifert, got {other:?}"),
        }
    }

    #[test]
    fn torus_exterior_examples() {
        let t = torus_exterior(3, 2).unwrap();
        assert_eq!(t.boundary(KNOT_BOUNDARY).unwrap().fiber_slope, s(6, 1));
        assert_eq!(orders(&t), vec![2, 3]);
        let meridian = closed(fill(&t, KNOT_BOUNDARY, &Slope::meridian()).unwrap());
        assert_eq!(h1_order(&meridian).unwrap(), 1.into());
        assert!(matches!(fill(&t, KNOT_BOUNDARY, &s(6, 1)), Err(SeifertError::FiberSlope { .. })));
        let f = closed(fill(&t, KNOT_BOUNDARY, &s(1, 9)).unwrap());
        assert_eq!(orders(&f), vec![2, 3, 53]);
        assert_eq!(h1_order(&f).unwrap(), 1.into());
        assert!(torus_exterior(4, 2).is_err());
        assert!(torus_exterior(1, 5).is_err());
    }

    // Independent oracle: brute-force the β-congruences for the meridian
    // filling directly from |α₁α₂(b + β₁/α₁ + β₂/α₂)| = 1.
    #[test]
    fn torus_exterior_betas_solve_meridian_congruence() {
        for r in 2..=7i64 {
            for s in 2..=7i64 {
                if r.gcd(&s) != 1 {
                    continue;
                }
                for (r, s) in [(r, s), (-r, s), (r, -s), (-r, -s)] {
                    let t = torus_exterior(r, s).unwrap();
                    let m = normalize_closed(&closed(fill(&t, KNOT_BOUNDARY, &Slope::meridian()).unwrap())).unwrap();
                    let b = i64::try_from(m.integer_part.as_ref().unwrap()).unwrap();
                    let (a1, a2) = (r.abs(), s.abs());
                    let mut solutions = 0;
                    for b1 in (1..a1).filter(|b| b.gcd(&a1) == 1) {
                        for b2 in (1..a2).filter(|b| b.gcd(&a2) == 1) {
                            let num = a1 * a2 * b + a2 * b1 + a1 * b2;
                            if num.abs() == 1 && m.exceptional.contains(&ExceptionalFiber::new(a1, b1).unwrap()) {
                                solutions += 1;
                            }
                        }
                    }
                    assert!(solutions >= 1, "({r},{s}) -> {m}");
                }
            }
        }
    }

    #[test]
    fn cable_space_examples() {
        let c = cable_space(13, 2).unwrap();
        assert_eq!(c.boundary(KNOT_BOUNDARY).unwrap().fiber_slope, s(26, 1));
        assert_eq!(c.boundary(COMPANION_BOUNDARY).unwrap().fiber_slope, s(13, 2));
        assert_eq!(orders(&c), vec![2]);
        assert!(matches!(cable_space(3, 1), Err(SeifertError::BadCable(3, 1))));
        assert!(cable_space(4, 2).is_err());
        for (r, sv) in [(3, 2), (-5, 3), (1, -2), (7, -4)] {
            let c = cable_space(r, sv).unwrap();
            let f = &c.exceptional[0];
            assert!(f.beta >= BigInt::zero() && f.beta < f.alpha);
            for b in &c.boundary_fibers {
                assert!(det(&b.section, &b.fiber).abs().is_one());
            }
        }
    }

    #[test]
    fn composing_space_examples() {
        let p = composing_space(3).unwrap();
        assert_eq!(p.boundary_fibers.len(), 3);
        assert!(p.exceptional.is_empty());
        assert_eq!(p.boundary(KNOT_BOUNDARY).unwrap().fiber_slope, Slope::meridian());
        assert!(matches!(composing_space(2), Err(SeifertError::TooFewBoundaries(2))));
        let filled = closed(fill(&p, KNOT_BOUNDARY, &s(-3, 11)).unwrap());
        assert_eq!(orders(&filled), vec![11]);
        assert_eq!(filled.boundary_fibers.len(), 2);
    }

    #[test]
    fn cable_space_fills_to_solid_torus_when_distance_one() {
        let c = cable_space(3, 2).unwrap();
        // 7/1: |7 − 1·6| = 1
        match fill(&c, KNOT_BOUNDARY, &s(7, 1)).unwrap() {
            FillResult::SolidTorus(t) => {
                assert_eq!(t.boundary, COMPANION_BOUNDARY);
                assert_eq!(t.core_order, 2.into());
                assert_eq!(t.fiber_slope, s(3, 2));
                assert_eq!(t.meridian, s(7, 4));
                assert_eq!(t.meridian.distance(&t.fiber_slope), 2.into());
            }
            other => panic!("{other:?}"),
        }
        let two = closed(fill(&c, KNOT_BOUNDARY, &s(1, 9)).unwrap());
        assert_eq!(orders(&two), vec![2, 53]);
    }

    #[test]
    fn fill_rejects_unknown_boundary() {
        let c = cable_space(3, 2).unwrap();
        assert_eq!(fill(&c, "nope", &s(1, 2)), Err(SeifertError::UnknownBoundary("nope".into())));
    }

    #[test]
    fn fill_keeps_existing_fibers() {
        let c = cable_space(5, 3).unwrap();
        for q in 1..20i64 {
            for p in -30..30i64 {
                if p.gcd(&q) != 1 || p == 15 * q {
                    continue;
                }
                if let FillResult::Seifert(d) = fill(&c, KNOT_BOUNDARY, &s(p, q)).unwrap() {
                    assert_eq!(d.exceptional[0], c.exceptional[0]);
                    assert!(d.exceptional.len() <= 2);
                }
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let d = SeifertData::closed(vec![ExceptionalFiber::new(2, 3).unwrap(), ExceptionalFiber::new(3, 1).unwrap()], 0);
        let n = normalize_closed(&d).unwrap();
        assert_eq!(n.exceptional, vec![ExceptionalFiber::new(2, 1).unwrap(), ExceptionalFiber::new(3, 1).unwrap()]);
        assert_eq!(n.integer_part, Some(1.into()));
        assert_eq!(n.euler_number(), d.euler_number());
        assert_eq!(normalize_closed(&cable_space(3, 2).unwrap()), Err(SeifertError::NotClosed));
    }

    #[test]
    fn h1_examples() {
        assert_eq!(h1_order(&SeifertData::closed(vec![], 0)).unwrap(), 0.into());
        let poincare = SeifertData::closed(
            vec![
                ExceptionalFiber::new(2, 1).unwrap(),
                ExceptionalFiber::new(3, 1).unwrap(),
                ExceptionalFiber::new(5, 1).unwrap(),
            ],
            -1,
        );
        assert_eq!(h1_order(&poincare).unwrap(), 1.into());
        for (alpha, beta, b) in [(5i64, 2i64, 3i64), (7, -3, -1), (2, 1, 0)] {
            let d = SeifertData::closed(vec![ExceptionalFiber::new(alpha, beta).unwrap()], b);
            assert_eq!(h1_order(&d).unwrap(), BigInt::from((b * alpha + beta).abs()));
        }
    }

    #[test]
    fn orientation_reversal_negates_euler_number() {
        let d = SeifertData::closed(vec![ExceptionalFiber::new(2, 1).unwrap(), ExceptionalFiber::new(7, 3).unwrap()], 2);
        let r = d.orientation_reversed();
        assert_eq!(r.euler_number().unwrap(), -d.euler_number().unwrap());
        assert_eq!(r.orientation_reversed(), d);
        assert_eq!(h1_order(&r).unwrap(), h1_order(&d).unwrap());
    }

    #[test]
    fn json_field_order_is_stable() {
        let d = normalize_closed(&closed(fill(&torus_exterior(3, 2).unwrap(), KNOT_BOUNDARY, &s(1, 9)).unwrap())).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(
            text,
            r#"{"base_genus":0,"boundary_fibers":[],"exceptional":[{"alpha":2,"beta":1},{"alpha":3,"beta":2},{"alpha":53,"beta":44}],"integer_part":-2}"#
        );
        assert_eq!(serde_json::from_str::<SeifertData>(&text).unwrap(), d);
    }
}
