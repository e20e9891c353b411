//! First homology of a tree of pieces glued along tori (Mayer–Vietoris).
//!
//! Each node contributes generators and relations; every gluing identifies
//! the meridian and longitude classes of the two sides, every filling kills
//! one boundary class.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::seifert::homology::IntMatrix;
use crate::seifert::{SeifertData, SeifertError, KNOT_BOUNDARY};
use crate::slope::Slope;

pub(crate) enum Node<'a> {
    Seifert(&'a SeifertData),
    /// A knot exterior in S³ seen only through homology: `H₁ = ℤ⟨μ⟩`, `λ = 0`.
    KnotExterior,
    /// A solid torus bounded by `boundary`, whose meridian disc has the given slope.
    SolidTorus { boundary: &'a str, meridian: &'a Slope },
}

pub(crate) struct Gluing<'a> {
    pub outer: usize,
    pub outer_boundary: &'a str,
    pub inner: usize,
    pub inner_boundary: &'a str,
}

pub(crate) struct Filling<'a> {
    pub node: usize,
    pub boundary: &'a str,
    pub slope: &'a Slope,
}

/// Integer row vector over the global generators.
type Row = Vec<BigInt>;

struct Layout {
    offset: Vec<usize>,
    total: usize,
}

fn width(node: &Node<'_>) -> usize {
    match node {
        // c_i, d_j, the integer-part section, h
        Node::Seifert(s) => s.exceptional.len() + s.boundary_fibers.len() + 2,
        Node::KnotExterior | Node::SolidTorus { .. } => 1,
    }
}

fn curve(nodes: &[Node<'_>], layout: &Layout, i: usize, label: &str, v: &[BigInt; 2]) -> Result<Row, SeifertError> {
    let mut row = vec![BigInt::zero(); layout.total];
    let o = layout.offset[i];
    match &nodes[i] {
        Node::Seifert(s) => {
            let j = s
                .boundary_fibers
                .iter()
                .position(|b| b.label == label)
                .ok_or_else(|| SeifertError::UnknownBoundary(label.to_string()))?;
            let (a, b) = s.boundary_fibers[j].frame_coordinates(v);
            row[o + s.exceptional.len() + j] = a;
            row[o + width(&nodes[i]) - 1] = b;
        }
        Node::KnotExterior => {
            if label != KNOT_BOUNDARY {
                return Err(SeifertError::UnknownBoundary(label.to_string()));
            }
            row[o] = v[0].clone();
        }
        Node::SolidTorus { boundary, meridian } => {
            if label != *boundary {
                return Err(SeifertError::UnknownBoundary(label.to_string()));
            }
            let m = meridian.vector();
            row[o] = &v[0] * &m[1] - &v[1] * &m[0];
        }
    }
    Ok(row)
}

fn node_relations(node: &Node<'_>, o: usize, total: usize) -> Vec<Row> {
    let Node::Seifert(s) = node else { return Vec::new() };
    let n = s.exceptional.len();
    let w = width(node);
    let h = o + w - 1;
    let mut rows = Vec::new();
    // Σ c_i + Σ d_j + c_0 = 0, with c_0 the section around the integer part.
    let mut sum = vec![BigInt::zero(); total];
    for x in &mut sum[o..h] {
        *x = BigInt::one();
    }
    rows.push(sum);
    for (i, f) in s.exceptional.iter().enumerate() {
        let mut r = vec![BigInt::zero(); total];
        r[o + i] = f.alpha.clone();
        r[h] = f.beta.clone();
        rows.push(r);
    }
    let mut r = vec![BigInt::zero(); total];
    r[o + n + s.boundary_fibers.len()] = BigInt::one();
    r[h] = s.integer_part.clone().unwrap_or_default();
    rows.push(r);
    rows
}

/// Order of `H₁` of the glued and filled space; `0` when infinite. Boundary
/// tori left neither glued nor filled contribute free homology.
pub(crate) fn order(nodes: &[Node<'_>], gluings: &[Gluing<'_>], fillings: &[Filling<'_>]) -> Result<BigInt, SeifertError> {
    let mut offset = Vec::with_capacity(nodes.len());
    let mut total = 0;
    for n in nodes {
        offset.push(total);
        total += width(n);
    }
    let layout = Layout { offset, total };
    let mut rows: Vec<Row> = Vec::new();
    for (i, n) in nodes.iter().enumerate() {
        rows.extend(node_relations(n, layout.offset[i], total));
    }
    let basis = [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]];
    for g in gluings {
        for v in &basis {
            let a = curve(nodes, &layout, g.outer, g.outer_boundary, v)?;
            let b = curve(nodes, &layout, g.inner, g.inner_boundary, v)?;
            rows.push(a.into_iter().zip(b).map(|(x, y)| x - y).collect());
        }
    }
    for f in fillings {
        rows.push(curve(nodes, &layout, f.node, f.boundary, &f.slope.vector())?);
    }
    if rows.is_empty() {
        return Ok(if total == 0 { BigInt::one() } else { BigInt::zero() });
    }
    Ok(IntMatrix::from_rows(rows).group_order())
}
