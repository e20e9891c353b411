//! Slopes on a torus and their exact arithmetic.
//!
//! A slope is stored as a coprime pair `(p, q)` with `q >= 0` and the sign
//! carried by `p`. The meridian is `1/0` and the longitude `0/1`. All
//! arithmetic is over [`BigInt`], so products such as `q·r·s` never overflow.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("(0, 0) is not a slope")]
    ZeroPair,
    #[error("the meridian 1/0 has no integer gap")]
    Infinite,
    #[error("cannot parse slope {0:?}: expected \"p/q\", an integer, or \"inf\"")]
    Syntax(String),
}

/// An unoriented slope `p/q ∈ ℚ ∪ {∞}` in normalized form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Slope {
    p: BigInt,
    q: BigInt,
}

impl Slope {
    /// Normalizes `(p, q)`: divides out the gcd, makes `q >= 0`, and maps
    /// every `(p, 0)` to `1/0`.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, SlopeError> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(SlopeError::ZeroPair);
        }
        let g = p.gcd(&q);
        p /= &g;
        q /= &g;
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Ok(Self { p, q })
    }

    /// Slope of a nonzero homology vector `x·μ + y·λ`.
    pub fn from_vector(v: &[BigInt; 2]) -> Result<Self, SlopeError> {
        Self::new(v[0].clone(), v[1].clone())
    }

    pub fn meridian() -> Self {
        Self { p: BigInt::one(), q: BigInt::zero() }
    }

    pub fn longitude() -> Self {
        Self { p: BigInt::zero(), q: BigInt::one() }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self { p: n.into(), q: BigInt::one() }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.q.is_one()
    }

    /// The primitive vector `(p, q)` representing this slope.
    pub fn vector(&self) -> [BigInt; 2] {
        [self.p.clone(), self.q.clone()]
    }

    /// `p/q` as an exact rational, or `None` for `∞`.
    pub fn to_rational(&self) -> Option<BigRational> {
        (!self.is_infinite()).then(|| BigRational::new(self.p.clone(), self.q.clone()))
    }

    /// Algebraic intersection number `p·q' − q·p'`.
    pub fn intersection(&self, other: &Slope) -> BigInt {
        &self.p * &other.q - &self.q * &other.p
    }

    /// Δ(a, b) = |p_a·q_b − q_a·p_b|.
    pub fn distance(&self, other: &Slope) -> BigInt {
        self.intersection(other).abs()
    }

    /// Applies `k` Dehn twists along `axis` to this slope, acting on homology
    /// by `t ↦ t + k·⟨t, a⟩·a`.
    pub fn dehn_twist(&self, axis: &Slope, k: &BigInt) -> Slope {
        let m = k * self.intersection(axis);
        Slope::new(&self.p + &m * &axis.p, &self.q + &m * &axis.q)
            .expect("a unimodular image of a primitive vector is nonzero")
    }

    /// The integer-gap quantity of a finite slope: the distance from `p/q` to
    /// the nearest integer outside `{-1, 0, 1}`, and that distance times `|q|`.
    pub fn integer_gap(&self) -> Result<IntegerGapReport, SlopeError> {
        let x = self.to_rational().ok_or(SlopeError::Infinite)?;
        let two = BigInt::from(2);
        let candidates = [x.floor().to_integer(), x.ceil().to_integer(), two.clone(), -two];
        let gap = candidates
            .into_iter()
            .filter(|n| n.abs() >= BigInt::from(2))
            .map(|n| (&x - BigRational::from_integer(n)).abs())
            .min()
            .expect("±2 are always candidates");
        let m_value = &gap * BigRational::from_integer(self.q.clone());
        Ok(IntegerGapReport { gap, m_value })
    }
}

pub fn distance(a: &Slope, b: &Slope) -> BigInt {
    a.distance(b)
}

pub fn dehn_twist(target: &Slope, axis: &Slope, k: &BigInt) -> Slope {
    target.dehn_twist(axis, k)
}

/// min{|p/q − n| : n ∈ ℤ ∖ {−1, 0, 1}} together with `|q|` times it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegerGapReport {
    #[serde(serialize_with = "ser_rational")]
    pub gap: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub m_value: BigRational,
}

fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on `(q, p)`; only used to give enumerations a fixed order.
impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.q, &self.p).cmp(&(&other.q, &other.p))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl FromStr for Slope {
    type Err = SlopeError;

    /// Accepts `"p/q"`, a bare integer `"p"`, or `"inf"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "inf" {
            return Ok(Slope::meridian());
        }
        let bad = || SlopeError::Syntax(s.to_string());
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        Slope::new(p, q)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
