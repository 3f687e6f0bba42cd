//! Explicit octahedral systems: the inductively built chain family meeting
//! the `2 + Σ(m_i - 2)` bound, the m² grid family, the fan, and the
//! complete system.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::shape::{ClassShape, EdgeTuple};
use crate::system::OctahedralSystem;

/// The inductive chain construction: an octahedral system without isolated
/// vertex with exactly `2 + Σ(m_i - 2)` edges.
///
/// Deterministic choices make the output reproducible byte for byte: the
/// base case on class 0 is the set of all singletons, classes are appended
/// left to right, the designated edge is the lexicographically least edge
/// of the current system, and new-class vertices are used in position
/// order with the last position playing the closing role.
pub fn inductive_upper(shape: &ClassShape) -> Result<OctahedralSystem> {
    shape.require_all_at_least_two()?;
    // Edges of the partial system over classes 0..=c, as position vectors.
    let mut edges: Vec<Vec<usize>> = (0..shape.size(0)).map(|p| alloc::vec![p]).collect();
    for c in 1..shape.n() {
        let m = shape.size(c);
        edges.sort();
        let designated = edges[0].clone();
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(m - 1 + edges.len() - 1);
        for u in 0..m - 1 {
            let mut e = designated.clone();
            e.push(u);
            next.push(e);
        }
        for e in &edges[1..] {
            let mut e = e.clone();
            e.push(m - 1);
            next.push(e);
        }
        edges = next;
    }
    OctahedralSystem::new(
        shape.clone(),
        edges.into_iter().map(EdgeTuple::new).collect(),
    )
}

/// The grid construction on `n` classes of size `m`: `m` disjoint
/// transversals, each joined to every vertex of the last class, giving
/// `m²` edges and no isolated vertex.
pub fn square_construction(m: usize, n: usize) -> Result<OctahedralSystem> {
    if m < 2 || n < 2 {
        return Err(Error::Precondition(alloc::format!(
            "grid construction needs m >= 2 and n >= 2, got m={m}, n={n}"
        )));
    }
    let shape = ClassShape::new(alloc::vec![m; n])?;
    let mut edges = Vec::with_capacity(m * m);
    for a in 0..m {
        for k in 0..m {
            let mut positions = alloc::vec![a; n];
            positions[n - 1] = k;
            edges.push(EdgeTuple::new(positions));
        }
    }
    OctahedralSystem::new(shape, edges)
}

/// A fixed transversal of classes 1..n joined to every vertex of class 0:
/// `m_1` edges, meeting the minimum for non-trivial systems. Positions
/// at least 1 of classes at least 1 are isolated.
pub fn fan_construction(shape: &ClassShape) -> Result<OctahedralSystem> {
    shape.require_all_at_least_two()?;
    let n = shape.n();
    let edges = (0..shape.size(0))
        .map(|k| {
            let mut positions = alloc::vec![0usize; n];
            positions[0] = k;
            EdgeTuple::new(positions)
        })
        .collect();
    OctahedralSystem::new(shape.clone(), edges)
}

/// The system containing every edge of the product space.
pub fn complete_system(shape: &ClassShape) -> Result<OctahedralSystem> {
    shape.require_all_at_least_two()?;
    let edges: Vec<EdgeTuple> = shape.all_edges()?.collect();
    OctahedralSystem::new(shape.clone(), edges)
}

/// The nine-edge `(3,3,3)` grid system `{(i,i,k)}`; the canonical example
/// of a system no planar colourful point configuration realizes.
pub fn omega9() -> OctahedralSystem {
    square_construction(3, 3).expect("static construction")
}
