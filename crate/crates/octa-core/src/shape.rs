//! Class shapes, vertices, and edge tuples with their mixed-radix ranking.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A vertex of class `class` at 0-based `position` within that class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexRef {
    pub class: usize,
    pub position: usize,
}

impl VertexRef {
    pub fn new(class: usize, position: usize) -> Self {
        VertexRef { class, position }
    }
}

/// An edge of an n-partite n-uniform hypergraph: one position per class.
///
/// Tuples compare lexicographically with class 0 most significant, which
/// coincides with the mixed-radix rank order of any fixed shape.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeTuple(Vec<usize>);

impl EdgeTuple {
    pub fn new(positions: Vec<usize>) -> Self {
        EdgeTuple(positions)
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn position(&self, class: usize) -> usize {
        self.0[class]
    }

    /// The vertices of this edge, one per class.
    pub fn vertices(&self) -> impl Iterator<Item = VertexRef> + '_ {
        self.0
            .iter()
            .enumerate()
            .map(|(c, &p)| VertexRef::new(c, p))
    }

    pub fn contains(&self, v: VertexRef) -> bool {
        v.class < self.0.len() && self.0[v.class] == v.position
    }
}

impl From<Vec<usize>> for EdgeTuple {
    fn from(positions: Vec<usize>) -> Self {
        EdgeTuple(positions)
    }
}

/// The vector of class sizes `(m_1, ..., m_n)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassShape {
    sizes: Vec<usize>,
}

impl ClassShape {
    /// A shape needs at least one class and every class non-empty.
    pub fn new(sizes: impl Into<Vec<usize>>) -> Result<Self> {
        let sizes = sizes.into();
        if sizes.is_empty() {
            return Err(Error::BadShape(format!("no classes")));
        }
        if let Some(i) = sizes.iter().position(|&m| m == 0) {
            return Err(Error::BadShape(format!("class {i} is empty")));
        }
        Ok(ClassShape { sizes })
    }

    pub fn n(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, class: usize) -> usize {
        self.sizes[class]
    }

    /// Whether every class has at least two vertices.
    pub fn all_at_least_two(&self) -> bool {
        self.sizes.iter().all(|&m| m >= 2)
    }

    pub fn require_all_at_least_two(&self) -> Result<()> {
        match self.sizes.iter().position(|&m| m < 2) {
            Some(i) => Err(Error::ClassTooSmall {
                class: i,
                size: self.sizes[i],
            }),
            None => Ok(()),
        }
    }

    /// `Π m_i`, the number of potential edges, as a `usize`.
    pub fn edge_space(&self) -> Result<usize> {
        self.sizes
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m))
            .ok_or_else(|| Error::Resource(format!("edge space overflows usize")))
    }

    /// `Π (m_i - 1)`, the number of independent parity constraints.
    pub fn interior_space(&self) -> Result<usize> {
        self.sizes
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m - 1))
            .ok_or_else(|| Error::Resource(format!("interior space overflows usize")))
    }

    /// `Π C(m_i, 2)`, the number of pair selections.
    pub fn pair_selection_count(&self) -> Result<u128> {
        self.sizes
            .iter()
            .try_fold(1u128, |acc, &m| {
                acc.checked_mul((m as u128) * (m as u128 - 1) / 2)
            })
            .ok_or_else(|| Error::Resource(format!("pair selection count overflows")))
    }

    pub fn vertex_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Flat index of a vertex: classes laid out consecutively.
    pub fn vertex_index(&self, v: VertexRef) -> usize {
        self.sizes[..v.class].iter().sum::<usize>() + v.position
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexRef> + '_ {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(c, &m)| (0..m).map(move |p| VertexRef::new(c, p)))
    }

    pub fn check_vertex(&self, v: VertexRef) -> Result<()> {
        if v.class >= self.n() {
            return Err(Error::PositionOutOfRange {
                class: v.class,
                position: v.position,
                size: 0,
            });
        }
        if v.position >= self.sizes[v.class] {
            return Err(Error::PositionOutOfRange {
                class: v.class,
                position: v.position,
                size: self.sizes[v.class],
            });
        }
        Ok(())
    }

    pub fn check_edge(&self, e: &EdgeTuple) -> Result<()> {
        if e.arity() != self.n() {
            return Err(Error::ArityMismatch {
                expected: self.n(),
                got: e.arity(),
            });
        }
        for (c, &p) in e.positions().iter().enumerate() {
            if p >= self.sizes[c] {
                return Err(Error::PositionOutOfRange {
                    class: c,
                    position: p,
                    size: self.sizes[c],
                });
            }
        }
        Ok(())
    }

    /// Mixed-radix rank of an edge, class 0 most significant.
    pub fn rank(&self, e: &EdgeTuple) -> usize {
        debug_assert_eq!(e.arity(), self.n());
        let mut r = 0usize;
        for (c, &p) in e.positions().iter().enumerate() {
            r = r * self.sizes[c] + p;
        }
        r
    }

    /// Inverse of [`ClassShape::rank`].
    pub fn unrank(&self, mut r: usize) -> EdgeTuple {
        let n = self.n();
        let mut positions = alloc::vec![0usize; n];
        for c in (0..n).rev() {
            positions[c] = r % self.sizes[c];
            r /= self.sizes[c];
        }
        EdgeTuple(positions)
    }

    /// All edges of the product space in rank order.
    pub fn all_edges(&self) -> Result<impl Iterator<Item = EdgeTuple> + '_> {
        let total = self.edge_space()?;
        Ok((0..total).map(move |r| self.unrank(r)))
    }

    /// The same sizes sorted ascending, together with `perm` such that
    /// `sorted[i] = self[perm[i]]`. The sort is stable so equal sizes keep
    /// their relative order.
    pub fn sorted_ascending(&self) -> (ClassShape, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.n()).collect();
        perm.sort_by_key(|&i| self.sizes[i]);
        let sorted: Vec<usize> = perm.iter().map(|&i| self.sizes[i]).collect();
        (ClassShape { sizes: sorted }, perm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rank_unrank_round_trip() {
        let shape = ClassShape::new(vec![2, 3, 4]).unwrap();
        for r in 0..24 {
            let e = shape.unrank(r);
            assert_eq!(shape.rank(&e), r);
        }
        assert_eq!(shape.unrank(0).positions(), &[0, 0, 0]);
        assert_eq!(shape.unrank(23).positions(), &[1, 2, 3]);
    }

    #[test]
    fn rank_order_is_lex_order() {
        let shape = ClassShape::new(vec![3, 2]).unwrap();
        let mut edges: Vec<EdgeTuple> = shape.all_edges().unwrap().collect();
        let sorted = edges.clone();
        edges.sort();
        assert_eq!(edges, sorted);
    }

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(ClassShape::new(vec![]).is_err());
        assert!(ClassShape::new(vec![2, 0, 3]).is_err());
        // A class of size 1 is a legal plain shape but not octahedral.
        let s = ClassShape::new(vec![2, 1]).unwrap();
        assert!(s.require_all_at_least_two().is_err());
    }

    #[test]
    fn sorted_ascending_records_permutation() {
        let shape = ClassShape::new(vec![3, 2, 3, 2]).unwrap();
        let (sorted, perm) = shape.sorted_ascending();
        assert_eq!(sorted.sizes(), &[2, 2, 3, 3]);
        assert_eq!(perm, vec![1, 3, 0, 2]);
        for (i, &p) in perm.iter().enumerate() {
            assert_eq!(sorted.size(i), shape.size(p));
        }
    }
}
