//! Octahedral systems: edge sets over a product space subject to the
//! parity condition, plus elementary statistics on them.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::shape::{ClassShape, EdgeTuple, VertexRef};

/// Default budget on `selections x corners` work for a parity check.
pub const DEFAULT_PARITY_OPS: u128 = 1 << 30;

/// A selection of exactly two vertices per class, the support of one
/// parity constraint. Pairs are stored `(lo, hi)` per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSelection {
    pub pairs: Vec<(usize, usize)>,
}

/// `n - 1` vertices, at most one per class, missing exactly `missing_class`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversal {
    missing_class: usize,
    /// Position per class in class order, skipping `missing_class`.
    positions: Vec<usize>,
}

impl Transversal {
    pub fn new(shape: &ClassShape, missing_class: usize, positions: Vec<usize>) -> Result<Self> {
        if missing_class >= shape.n() || positions.len() != shape.n() - 1 {
            return Err(Error::Precondition(format!(
                "transversal must cover all classes but one"
            )));
        }
        let t = Transversal {
            missing_class,
            positions,
        };
        for v in t.vertices() {
            shape.check_vertex(v)?;
        }
        Ok(t)
    }

    pub fn missing_class(&self) -> usize {
        self.missing_class
    }

    /// The position this transversal uses in `class`, if any.
    pub fn position_in(&self, class: usize) -> Option<usize> {
        use core::cmp::Ordering::*;
        match class.cmp(&self.missing_class) {
            Less => Some(self.positions[class]),
            Equal => None,
            Greater => Some(self.positions[class - 1]),
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexRef> + '_ {
        let missing = self.missing_class;
        self.positions.iter().enumerate().map(move |(j, &p)| {
            let class = if j < missing { j } else { j + 1 };
            VertexRef::new(class, p)
        })
    }
}

/// All `i`-transversals of a shape in lexicographic order.
pub fn transversals(
    shape: &ClassShape,
    missing_class: usize,
) -> Result<impl Iterator<Item = Transversal> + '_> {
    if missing_class >= shape.n() {
        return Err(Error::Precondition(format!(
            "class {missing_class} out of range"
        )));
    }
    let radices: Vec<usize> = (0..shape.n())
        .filter(|&c| c != missing_class)
        .map(|c| shape.size(c))
        .collect();
    let total: usize = radices.iter().product();
    Ok((0..total).map(move |mut r| {
        let mut positions = alloc::vec![0usize; radices.len()];
        for j in (0..radices.len()).rev() {
            positions[j] = r % radices[j];
            r /= radices[j];
        }
        Transversal {
            missing_class,
            positions,
        }
    }))
}

/// An arbitrary set of vertices, stored per class as sorted positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSubset {
    per_class: Vec<Vec<usize>>,
}

impl VertexSubset {
    pub fn empty(shape: &ClassShape) -> Self {
        VertexSubset {
            per_class: alloc::vec![Vec::new(); shape.n()],
        }
    }

    pub fn full(shape: &ClassShape) -> Self {
        VertexSubset {
            per_class: shape.sizes().iter().map(|&m| (0..m).collect()).collect(),
        }
    }

    pub fn from_vertices(shape: &ClassShape, vertices: &[VertexRef]) -> Result<Self> {
        let mut s = VertexSubset::empty(shape);
        for &v in vertices {
            shape.check_vertex(v)?;
            s.per_class[v.class].push(v.position);
        }
        for positions in &mut s.per_class {
            positions.sort_unstable();
            positions.dedup();
        }
        Ok(s)
    }

    pub fn positions_in(&self, class: usize) -> &[usize] {
        &self.per_class[class]
    }

    pub fn contains(&self, v: VertexRef) -> bool {
        v.class < self.per_class.len() && self.per_class[v.class].binary_search(&v.position).is_ok()
    }

    pub fn len(&self) -> usize {
        self.per_class.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.per_class.iter().all(Vec::is_empty)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexRef> + '_ {
        self.per_class
            .iter()
            .enumerate()
            .flat_map(|(c, ps)| ps.iter().map(move |&p| VertexRef::new(c, p)))
    }

    /// Interpret as a pair selection when every class holds exactly two.
    pub fn as_pair_selection(&self) -> Option<PairSelection> {
        let mut pairs = Vec::with_capacity(self.per_class.len());
        for ps in &self.per_class {
            if ps.len() != 2 {
                return None;
            }
            pairs.push((ps[0], ps[1]));
        }
        Some(PairSelection { pairs })
    }
}

/// An n-partite n-uniform hypergraph intended to satisfy the parity
/// condition: every pair selection induces an even number of edges.
///
/// Constructors validate the shape (every class size at least 2) and edge
/// well-formedness, not parity; parity is promised by the construction
/// routines and checkable on demand via [`OctahedralSystem::is_octahedral`].
/// Edges are kept sorted in mixed-radix rank order and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OctahedralSystem {
    shape: ClassShape,
    edges: Vec<EdgeTuple>,
}

impl OctahedralSystem {
    pub fn new(shape: ClassShape, mut edges: Vec<EdgeTuple>) -> Result<Self> {
        shape.require_all_at_least_two()?;
        for e in &edges {
            shape.check_edge(e)?;
        }
        edges.sort();
        edges.dedup();
        Ok(OctahedralSystem { shape, edges })
    }

    pub fn empty(shape: ClassShape) -> Result<Self> {
        Self::new(shape, Vec::new())
    }

    pub fn from_ranks(shape: ClassShape, ranks: impl IntoIterator<Item = usize>) -> Result<Self> {
        let edges = ranks.into_iter().map(|r| shape.unrank(r)).collect();
        Self::new(shape, edges)
    }

    pub fn shape(&self) -> &ClassShape {
        &self.shape
    }

    pub fn edges(&self) -> &[EdgeTuple] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, e: &EdgeTuple) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    pub fn edge_ranks(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().map(|e| self.shape.rank(e))
    }

    /// The edges all of whose vertices lie in `x`.
    pub fn induced_edges(&self, x: &VertexSubset) -> Vec<EdgeTuple> {
        self.edges
            .iter()
            .filter(|e| e.vertices().all(|v| x.contains(v)))
            .cloned()
            .collect()
    }

    /// Number of edges containing every vertex of `x`.
    pub fn degree(&self, x: &VertexSubset) -> usize {
        self.edges
            .iter()
            .filter(|e| x.vertices().all(|v| e.contains(v)))
            .count()
    }

    pub fn degree_of_vertex(&self, v: VertexRef) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    /// Vertices of degree zero, in class order.
    pub fn isolated_vertices(&self) -> Vec<VertexRef> {
        let mut seen = alloc::vec![false; self.shape.vertex_count()];
        for e in &self.edges {
            for v in e.vertices() {
                seen[self.shape.vertex_index(v)] = true;
            }
        }
        self.shape
            .vertices()
            .filter(|&v| !seen[self.shape.vertex_index(v)])
            .collect()
    }

    pub fn has_isolated_vertex(&self) -> bool {
        !self.isolated_vertices().is_empty()
    }

    pub fn is_octahedral(&self) -> Result<bool> {
        Ok(self.parity_counterexample()?.is_none())
    }

    /// First pair selection inducing an odd edge count, if any.
    pub fn parity_counterexample(&self) -> Result<Option<PairSelection>> {
        self.parity_counterexample_with_budget(DEFAULT_PARITY_OPS)
    }

    /// Scans all `Π C(m_i, 2)` selections in lexicographic order and stops
    /// at the first violation, reporting it as a certificate.
    pub fn parity_counterexample_with_budget(&self, budget: u128) -> Result<Option<PairSelection>> {
        let n = self.shape.n();
        let selections = self.shape.pair_selection_count()?;
        let ops = selections
            .checked_mul(1u128 << n.min(64))
            .ok_or_else(|| Error::Resource(format!("parity work overflows")))?;
        if ops > budget {
            return Err(Error::Resource(format!(
                "parity check needs {ops} corner tests, budget {budget}"
            )));
        }

        let member = self.rank_bitset()?;
        // Per-class pair lists in lexicographic order.
        let pair_lists: Vec<Vec<(usize, usize)>> = self
            .shape
            .sizes()
            .iter()
            .map(|&m| {
                let mut pairs = Vec::with_capacity(m * (m - 1) / 2);
                for lo in 0..m {
                    for hi in lo + 1..m {
                        pairs.push((lo, hi));
                    }
                }
                pairs
            })
            .collect();

        let mut choice = alloc::vec![0usize; n];
        loop {
            let pairs: Vec<(usize, usize)> = (0..n).map(|c| pair_lists[c][choice[c]]).collect();
            let mut count = 0usize;
            for corner in 0..(1usize << n) {
                let mut r = 0usize;
                for (c, &(lo, hi)) in pairs.iter().enumerate() {
                    let p = if corner >> (n - 1 - c) & 1 == 0 { lo } else { hi };
                    r = r * self.shape.size(c) + p;
                }
                if member[r >> 6] >> (r & 63) & 1 == 1 {
                    count += 1;
                }
            }
            if count % 2 == 1 {
                return Ok(Some(PairSelection { pairs }));
            }
            // Odometer step over the selection space.
            let mut c = n;
            loop {
                if c == 0 {
                    return Ok(None);
                }
                c -= 1;
                choice[c] += 1;
                if choice[c] < pair_lists[c].len() {
                    break;
                }
                choice[c] = 0;
            }
        }
    }

    /// Edge set as a bitset indexed by rank.
    pub fn rank_bitset(&self) -> Result<Vec<u64>> {
        let space = self.shape.edge_space()?;
        let mut bits = alloc::vec![0u64; space.div_ceil(64)];
        for r in self.edge_ranks() {
            bits[r >> 6] |= 1 << (r & 63);
        }
        Ok(bits)
    }

    /// Given an edge `e`, an `i`-transversal `t` disjoint from `e`, and a
    /// vertex `x` of class `i` outside `e`, returns the lexicographically
    /// least edge other than `e` inside `e ∪ t ∪ {x}`. On octahedral input
    /// such an edge always exists; its absence is reported as a violated
    /// precondition carrying the offending selection.
    pub fn weak_parity_second_edge(
        &self,
        e: &EdgeTuple,
        t: &Transversal,
        x: VertexRef,
    ) -> Result<EdgeTuple> {
        self.shape.check_edge(e)?;
        self.shape.check_vertex(x)?;
        if !self.contains_edge(e) {
            return Err(Error::Precondition(format!("edge not in the system")));
        }
        if t.missing_class() != x.class {
            return Err(Error::Precondition(format!(
                "x must lie in the class the transversal misses"
            )));
        }
        if x.position == e.position(x.class) {
            return Err(Error::Precondition(format!("x must lie outside e")));
        }
        let n = self.shape.n();
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n);
        for c in 0..n {
            let other = match t.position_in(c) {
                Some(p) => {
                    if p == e.position(c) {
                        return Err(Error::Precondition(format!(
                            "transversal must be disjoint from e"
                        )));
                    }
                    p
                }
                None => x.position,
            };
            let a = e.position(c).min(other);
            let b = e.position(c).max(other);
            pairs.push((a, b));
        }
        // Corners in lexicographic order; the first hit is the least edge.
        for corner in 0..(1usize << n) {
            let positions: Vec<usize> = (0..n)
                .map(|c| {
                    if corner >> (n - 1 - c) & 1 == 0 {
                        pairs[c].0
                    } else {
                        pairs[c].1
                    }
                })
                .collect();
            let cand = EdgeTuple::new(positions);
            if cand != *e && self.contains_edge(&cand) {
                return Ok(cand);
            }
        }
        Err(Error::Precondition(format!(
            "parity fails on the selection induced by e, t, x: {:?}",
            PairSelection { pairs }
        )))
    }

    /// Edge-set symmetric difference of two systems of equal shape. Both
    /// inputs being octahedral guarantees the result is; this is not
    /// re-checked here.
    pub fn symmetric_difference(&self, other: &OctahedralSystem) -> Result<OctahedralSystem> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch);
        }
        let mut edges = Vec::with_capacity(self.edges.len() + other.edges.len());
        let (mut i, mut j) = (0, 0);
        while i < self.edges.len() || j < other.edges.len() {
            match (self.edges.get(i), other.edges.get(j)) {
                (Some(a), Some(b)) if a == b => {
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    edges.push(a.clone());
                    i += 1;
                }
                (Some(_), Some(b)) => {
                    edges.push(b.clone());
                    j += 1;
                }
                (Some(a), None) => {
                    edges.push(a.clone());
                    i += 1;
                }
                (None, Some(b)) => {
                    edges.push(b.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Ok(OctahedralSystem {
            shape: self.shape.clone(),
            edges,
        })
    }
}

/// Free-function form of the parity test.
pub fn is_octahedral(shape: &ClassShape, edges: &[EdgeTuple]) -> Result<bool> {
    OctahedralSystem::new(shape.clone(), edges.to_vec())?.is_octahedral()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions;
    use alloc::vec;

    fn fig3_nine_edge() -> OctahedralSystem {
        // {(i, i, k) : i, k in {0,1,2}} on shape (3,3,3).
        let shape = ClassShape::new(vec![3, 3, 3]).unwrap();
        let edges = (0..3)
            .flat_map(|i| (0..3).map(move |k| EdgeTuple::new(vec![i, i, k])))
            .collect();
        OctahedralSystem::new(shape, edges).unwrap()
    }

    #[test]
    fn nine_edge_grid_is_octahedral() {
        assert_eq!(fig3_nine_edge().is_octahedral(), Ok(true));
    }

    #[test]
    fn single_edge_is_not_octahedral() {
        let shape = ClassShape::new(vec![2, 2, 2]).unwrap();
        let sys = OctahedralSystem::new(shape, vec![EdgeTuple::new(vec![0, 0, 0])]).unwrap();
        assert_eq!(sys.is_octahedral(), Ok(false));
        let cex = sys.parity_counterexample().unwrap().unwrap();
        assert_eq!(cex.pairs, vec![(0, 1), (0, 1), (0, 1)]);
    }

    #[test]
    fn complete_system_is_octahedral() {
        for sizes in [vec![2, 2], vec![2, 3], vec![3, 3, 3], vec![2, 3, 4]] {
            let shape = ClassShape::new(sizes).unwrap();
            let sys = constructions::complete_system(&shape).unwrap();
            assert_eq!(sys.is_octahedral(), Ok(true));
        }
    }

    #[test]
    fn induced_edges_examples() {
        // Complete (2,2) with the full vertex set: all 4 edges.
        let shape = ClassShape::new(vec![2, 2]).unwrap();
        let sys = constructions::complete_system(&shape).unwrap();
        let all = VertexSubset::full(&shape);
        assert_eq!(sys.induced_edges(&all).len(), 4);
        assert!(sys.induced_edges(&VertexSubset::empty(&shape)).is_empty());

        // Nine-edge grid restricted to positions {0,1} everywhere.
        let sys = fig3_nine_edge();
        let x = VertexSubset::from_vertices(
            sys.shape(),
            &[
                VertexRef::new(0, 0),
                VertexRef::new(0, 1),
                VertexRef::new(1, 0),
                VertexRef::new(1, 1),
                VertexRef::new(2, 0),
                VertexRef::new(2, 1),
            ],
        )
        .unwrap();
        let induced = sys.induced_edges(&x);
        let expect: Vec<EdgeTuple> = vec![
            EdgeTuple::new(vec![0, 0, 0]),
            EdgeTuple::new(vec![0, 0, 1]),
            EdgeTuple::new(vec![1, 1, 0]),
            EdgeTuple::new(vec![1, 1, 1]),
        ];
        assert_eq!(induced, expect);
    }

    #[test]
    fn degree_and_isolated_examples() {
        let sys = fig3_nine_edge();
        assert!(sys.isolated_vertices().is_empty());
        for k in 0..3 {
            assert_eq!(sys.degree_of_vertex(VertexRef::new(2, k)), 3);
        }

        let empty = OctahedralSystem::empty(ClassShape::new(vec![2, 2]).unwrap()).unwrap();
        assert_eq!(empty.isolated_vertices().len(), 4);

        let shape = ClassShape::new(vec![3, 3, 3]).unwrap();
        let complete = constructions::complete_system(&shape).unwrap();
        let one = VertexSubset::from_vertices(&shape, &[VertexRef::new(0, 0)]).unwrap();
        assert_eq!(complete.degree(&one), 9);
    }

    #[test]
    fn transversal_enumeration_is_lexicographic() {
        let shape = ClassShape::new(vec![2, 3, 4]).unwrap();
        let ts: Vec<Transversal> = transversals(&shape, 1).unwrap().collect();
        assert_eq!(ts.len(), 2 * 4);
        assert_eq!(ts[0].position_in(0), Some(0));
        assert_eq!(ts[0].position_in(1), None);
        assert_eq!(ts[0].position_in(2), Some(0));
        assert_eq!(ts[7].position_in(0), Some(1));
        assert_eq!(ts[7].position_in(2), Some(3));
    }

    #[test]
    fn weak_parity_on_complete_cube() {
        let shape = ClassShape::new(vec![2, 2, 2]).unwrap();
        let sys = constructions::complete_system(&shape).unwrap();
        let e = EdgeTuple::new(vec![0, 0, 0]);
        let t = Transversal::new(&shape, 0, vec![1, 1]).unwrap();
        let x = VertexRef::new(0, 1);
        let second = sys.weak_parity_second_edge(&e, &t, x).unwrap();
        assert_eq!(second, EdgeTuple::new(vec![0, 0, 1]));
    }

    #[test]
    fn weak_parity_on_nine_edge_grid() {
        let sys = fig3_nine_edge();
        let e = EdgeTuple::new(vec![0, 0, 0]);
        let t = Transversal::new(sys.shape(), 2, vec![1, 1]).unwrap();
        let x = VertexRef::new(2, 1);
        let second = sys.weak_parity_second_edge(&e, &t, x).unwrap();
        assert_eq!(second, EdgeTuple::new(vec![0, 0, 1]));
    }

    #[test]
    fn weak_parity_rejects_non_octahedral_selection() {
        let shape = ClassShape::new(vec![2, 2]).unwrap();
        let sys = OctahedralSystem::new(shape.clone(), vec![EdgeTuple::new(vec![0, 0])]).unwrap();
        let e = EdgeTuple::new(vec![0, 0]);
        let t = Transversal::new(&shape, 1, vec![1]).unwrap();
        let x = VertexRef::new(1, 1);
        assert!(matches!(
            sys.weak_parity_second_edge(&e, &t, x),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn symmetric_difference_identities() {
        let sys = fig3_nine_edge();
        let zero = sys.symmetric_difference(&sys).unwrap();
        assert_eq!(zero.edge_count(), 0);
        let empty = OctahedralSystem::empty(sys.shape().clone()).unwrap();
        assert_eq!(sys.symmetric_difference(&empty).unwrap(), sys);

        let other_shape = ClassShape::new(vec![2, 2]).unwrap();
        let other = OctahedralSystem::empty(other_shape).unwrap();
        assert_eq!(sys.symmetric_difference(&other), Err(Error::ShapeMismatch));
    }

    #[test]
    fn twenty_two_edge_difference_has_no_isolated_vertex() {
        let shape = ClassShape::new(vec![3, 3, 3]).unwrap();
        let complete = constructions::complete_system(&shape).unwrap();
        let chain = constructions::inductive_upper(&shape).unwrap();
        let diff = complete.symmetric_difference(&chain).unwrap();
        assert_eq!(diff.edge_count(), 22);
        assert_eq!(diff.is_octahedral(), Ok(true));
        assert!(diff.isolated_vertices().is_empty());
    }
}
