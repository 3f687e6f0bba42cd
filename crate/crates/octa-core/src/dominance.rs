//! The dominance digraph of a system: an arc `(u, v)` whenever every edge
//! containing `v` also contains `u`. Equivalently, with `S(v)` the set of
//! edges through `v`, arcs point down the containment order `S(v) ⊆ S(u)`.
//! The digraph is transitive and no vertex has two inneighbours in the
//! same class; its sink components are deletable.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::shape::{ClassShape, EdgeTuple, VertexRef};
use crate::system::{OctahedralSystem, VertexSubset};

/// Arcs of the dominance digraph, vacuous arcs included: an isolated `v`
/// is dominated by everything, so all `(u, v)` arcs exist; such vertices
/// are listed in `isolated` so validators can exclude them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceDigraph {
    shape: ClassShape,
    arcs: Vec<(VertexRef, VertexRef)>,
    isolated: Vec<VertexRef>,
}

impl DominanceDigraph {
    /// Assembles a digraph from raw parts; used for negative fixtures.
    pub fn from_parts(
        shape: ClassShape,
        mut arcs: Vec<(VertexRef, VertexRef)>,
        mut isolated: Vec<VertexRef>,
    ) -> Self {
        arcs.sort();
        arcs.dedup();
        isolated.sort();
        isolated.dedup();
        DominanceDigraph {
            shape,
            arcs,
            isolated,
        }
    }

    pub fn shape(&self) -> &ClassShape {
        &self.shape
    }

    pub fn arcs(&self) -> &[(VertexRef, VertexRef)] {
        &self.arcs
    }

    pub fn isolated(&self) -> &[VertexRef] {
        &self.isolated
    }

    pub fn has_arc(&self, u: VertexRef, v: VertexRef) -> bool {
        self.arcs.binary_search(&(u, v)).is_ok()
    }

    /// Arcs between non-isolated vertices only.
    pub fn proper_arcs(&self) -> impl Iterator<Item = (VertexRef, VertexRef)> + '_ {
        self.arcs
            .iter()
            .copied()
            .filter(|&(u, v)| !self.is_isolated(u) && !self.is_isolated(v))
    }

    fn is_isolated(&self, v: VertexRef) -> bool {
        self.isolated.binary_search(&v).is_ok()
    }

    /// Checks transitivity and the one-inneighbour-per-class property on
    /// the non-vacuous part. An empty report means the digraph is valid.
    pub fn validate(&self) -> Vec<DominanceViolation> {
        let mut violations = Vec::new();
        let idx = |v: VertexRef| self.shape.vertex_index(v);
        let count = self.shape.vertex_count();
        let mut out: Vec<Vec<VertexRef>> = alloc::vec![Vec::new(); count];
        let mut inn: Vec<Vec<VertexRef>> = alloc::vec![Vec::new(); count];
        for (u, v) in self.proper_arcs() {
            out[idx(u)].push(v);
            inn[idx(v)].push(u);
        }
        for u in self.shape.vertices() {
            for &v in &out[idx(u)] {
                for &w in &out[idx(v)] {
                    if w != u && !out[idx(u)].contains(&w) {
                        violations.push(DominanceViolation::Transitivity { u, v, w });
                    }
                }
            }
        }
        for v in self.shape.vertices() {
            let inn = &inn[idx(v)];
            for i in 0..inn.len() {
                for j in i + 1..inn.len() {
                    if inn[i].class == inn[j].class {
                        violations.push(DominanceViolation::TwoInneighboursSameClass {
                            vertex: v,
                            first: inn[i],
                            second: inn[j],
                        });
                    }
                }
            }
        }
        violations
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DominanceViolation {
    /// `(u,v)` and `(v,w)` are arcs with `w != u`, but `(u,w)` is not.
    Transitivity {
        u: VertexRef,
        v: VertexRef,
        w: VertexRef,
    },
    /// `vertex` has two inneighbours in one class.
    TwoInneighboursSameClass {
        vertex: VertexRef,
        first: VertexRef,
        second: VertexRef,
    },
}

/// Bitsets of edge-list indices through each vertex.
pub(crate) fn edge_sets(sys: &OctahedralSystem) -> Vec<Vec<u64>> {
    let count = sys.shape().vertex_count();
    let blocks = sys.edge_count().div_ceil(64).max(1);
    let mut sets = alloc::vec![alloc::vec![0u64; blocks]; count];
    for (i, e) in sys.edges().iter().enumerate() {
        for v in e.vertices() {
            sets[sys.shape().vertex_index(v)][i >> 6] |= 1 << (i & 63);
        }
    }
    sets
}

pub(crate) fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

pub(crate) fn nonempty(a: &[u64]) -> bool {
    a.iter().any(|&x| x != 0)
}

/// Builds the dominance digraph of a system.
pub fn build_dominance(sys: &OctahedralSystem) -> DominanceDigraph {
    let shape = sys.shape().clone();
    let sets = edge_sets(sys);
    let vertices: Vec<VertexRef> = shape.vertices().collect();
    let mut arcs = Vec::new();
    let mut isolated = Vec::new();
    for &v in &vertices {
        if !nonempty(&sets[shape.vertex_index(v)]) {
            isolated.push(v);
        }
    }
    for &u in &vertices {
        for &v in &vertices {
            if u != v && subset(&sets[shape.vertex_index(v)], &sets[shape.vertex_index(u)]) {
                arcs.push((u, v));
            }
        }
    }
    DominanceDigraph::from_parts(shape, arcs, isolated)
}

/// A nonempty set of vertices inducing a complete subgraph with no
/// outneighbours, found by walking down the edge-set containment order
/// among non-isolated vertices.
///
/// The walk starts from the least vertex of the last class that has no
/// outneighbour in an earlier class, falling back to the least non-isolated
/// vertex of the last class, and descends to a strictly-contained edge set
/// while one exists; the answer is the set of vertices sharing the
/// terminal edge set.
pub fn sink_clique(sys: &OctahedralSystem) -> Result<VertexSubset> {
    if sys.edge_count() == 0 {
        return Err(Error::Precondition(format!(
            "empty system has no sink clique"
        )));
    }
    let shape = sys.shape();
    let sets = edge_sets(sys);
    let idx = |v: VertexRef| shape.vertex_index(v);
    let non_isolated: Vec<VertexRef> = shape
        .vertices()
        .filter(|&v| nonempty(&sets[idx(v)]))
        .collect();

    let last = shape.n() - 1;
    let lacks_early_out = |v: VertexRef| {
        !non_isolated
            .iter()
            .any(|&w| w.class < last && w != v && subset(&sets[idx(w)], &sets[idx(v)]))
    };
    let start = non_isolated
        .iter()
        .copied()
        .find(|&v| v.class == last && lacks_early_out(v))
        .or_else(|| non_isolated.iter().copied().find(|&v| v.class == last))
        .expect("a non-empty system covers its last class");

    let mut current = start;
    loop {
        // Least strictly-dominated vertex, if any.
        let next = non_isolated.iter().copied().find(|&w| {
            w != current
                && subset(&sets[idx(w)], &sets[idx(current)])
                && sets[idx(w)] != sets[idx(current)]
        });
        match next {
            Some(w) => current = w,
            None => break,
        }
    }
    let members: Vec<VertexRef> = non_isolated
        .iter()
        .copied()
        .filter(|&w| sets[idx(w)] == sets[idx(current)])
        .collect();
    VertexSubset::from_vertices(shape, &members)
}

/// Position remapping left behind by a sink deletion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionMap {
    per_class: Vec<Option<usize>>,
}

impl DeletionMap {
    /// Where an old vertex landed, or `None` if it was deleted.
    pub fn map(&self, v: VertexRef) -> Option<VertexRef> {
        match self.per_class[v.class] {
            Some(removed) if v.position == removed => None,
            Some(removed) if v.position > removed => {
                Some(VertexRef::new(v.class, v.position - 1))
            }
            _ => Some(v),
        }
    }

    /// Deleted position per class, if any.
    pub fn removed(&self) -> &[Option<usize>] {
        &self.per_class
    }
}

/// Removes a sink clique: its vertices leave their classes (positions
/// above the removed one shift down) and every edge meeting the clique is
/// dropped. On valid input the result is again an octahedral system
/// without isolated vertex.
pub fn delete_sink(
    sys: &OctahedralSystem,
    x: &VertexSubset,
) -> Result<(OctahedralSystem, DeletionMap)> {
    let shape = sys.shape();
    if x.is_empty() {
        return Ok((
            sys.clone(),
            DeletionMap {
                per_class: alloc::vec![None; shape.n()],
            },
        ));
    }
    if sys.has_isolated_vertex() {
        return Err(Error::Precondition(format!(
            "sink deletion needs a system without isolated vertex"
        )));
    }

    let sets = edge_sets(sys);
    let idx = |v: VertexRef| shape.vertex_index(v);
    let members: Vec<VertexRef> = x.vertices().collect();
    // Complete subgraph: members share one edge set. No outneighbour: no
    // outside vertex has a contained edge set.
    let first = &sets[idx(members[0])];
    for &v in &members[1..] {
        if &sets[idx(v)] != first {
            return Err(Error::Precondition(format!(
                "set does not induce a complete subgraph"
            )));
        }
    }
    for v in shape.vertices() {
        if !x.contains(v) && subset(&sets[idx(v)], first) {
            return Err(Error::Precondition(format!(
                "set has outneighbour {v:?}"
            )));
        }
    }

    let mut per_class: Vec<Option<usize>> = alloc::vec![None; shape.n()];
    for &v in &members {
        if per_class[v.class].is_some() {
            return Err(Error::Precondition(format!(
                "two clique members in class {}",
                v.class
            )));
        }
        per_class[v.class] = Some(v.position);
    }
    let map = DeletionMap { per_class };

    let new_sizes: Vec<usize> = shape
        .sizes()
        .iter()
        .enumerate()
        .map(|(c, &m)| if map.per_class[c].is_some() { m - 1 } else { m })
        .collect();
    if let Some(c) = new_sizes.iter().position(|&m| m < 2) {
        return Err(Error::ClassTooSmall {
            class: c,
            size: new_sizes[c],
        });
    }
    let new_shape = ClassShape::new(new_sizes)?;

    let mut edges = Vec::new();
    'edges: for e in sys.edges() {
        let mut positions = Vec::with_capacity(shape.n());
        for v in e.vertices() {
            match map.map(v) {
                Some(w) => positions.push(w.position),
                None => continue 'edges,
            }
        }
        edges.push(EdgeTuple::new(positions));
    }
    Ok((OctahedralSystem::new(new_shape, edges)?, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete_system, fan_construction, inductive_upper, omega9};
    use alloc::vec;

    #[test]
    fn omega9_arcs_are_the_mutual_transversal_pairs() {
        let d = build_dominance(&omega9());
        assert!(d.isolated().is_empty());
        let mut expect = Vec::new();
        for a in 0..3 {
            expect.push((VertexRef::new(0, a), VertexRef::new(1, a)));
            expect.push((VertexRef::new(1, a), VertexRef::new(0, a)));
        }
        expect.sort();
        assert_eq!(d.arcs(), expect.as_slice());
        assert!(d.validate().is_empty());
    }

    #[test]
    fn complete_system_has_no_proper_arcs() {
        let shape = ClassShape::new(vec![3, 3, 3]).unwrap();
        let d = build_dominance(&complete_system(&shape).unwrap());
        assert!(d.arcs().is_empty());
        assert!(d.validate().is_empty());
    }

    #[test]
    fn fan_transversal_vertices_dominate_every_spine_vertex() {
        let shape = ClassShape::new(vec![3, 3, 3]).unwrap();
        let d = build_dominance(&fan_construction(&shape).unwrap());
        for k in 0..3 {
            assert!(d.has_arc(VertexRef::new(1, 0), VertexRef::new(0, k)));
            assert!(d.has_arc(VertexRef::new(2, 0), VertexRef::new(0, k)));
        }
        // Isolated vertices are dominated by everything, vacuously.
        assert_eq!(d.isolated().len(), 4);
        assert!(d.has_arc(VertexRef::new(0, 0), VertexRef::new(1, 1)));
        assert!(d.validate().is_empty());
    }

    #[test]
    fn hand_built_transitivity_violation_is_reported() {
        let shape = ClassShape::new(vec![2, 2, 2]).unwrap();
        let u = VertexRef::new(0, 0);
        let v = VertexRef::new(1, 0);
        let w = VertexRef::new(2, 0);
        let d = DominanceDigraph::from_parts(shape, vec![(u, v), (v, w)], vec![]);
        let violations = d.validate();
        assert!(violations.contains(&DominanceViolation::Transitivity { u, v, w }));
    }

    #[test]
    fn hand_built_double_inneighbour_is_reported() {
        let shape = ClassShape::new(vec![2, 2]).unwrap();
        let v = VertexRef::new(1, 0);
        let a = VertexRef::new(0, 0);
        let b = VertexRef::new(0, 1);
        let d = DominanceDigraph::from_parts(shape, vec![(a, v), (b, v)], vec![]);
        let violations = d.validate();
        assert!(matches!(
            violations[0],
            DominanceViolation::TwoInneighboursSameClass { vertex, .. } if vertex == v
        ));
    }

    #[test]
    fn omega9_sink_is_the_first_free_vertex_of_the_last_class() {
        let x = sink_clique(&omega9()).unwrap();
        let members: Vec<VertexRef> = x.vertices().collect();
        assert_eq!(members, vec![VertexRef::new(2, 0)]);
    }

    #[test]
    fn matching_system_sink_is_a_mutual_pair() {
        // {(0,0),(1,1)} on (2,2): both classes pair up mutually.
        let shape = ClassShape::new(vec![2, 2]).unwrap();
        let sys = OctahedralSystem::new(
            shape,
            vec![EdgeTuple::new(vec![0, 0]), EdgeTuple::new(vec![1, 1])],
        )
        .unwrap();
        let x = sink_clique(&sys).unwrap();
        let members: Vec<VertexRef> = x.vertices().collect();
        assert_eq!(members, vec![VertexRef::new(0, 0), VertexRef::new(1, 0)]);
    }

    #[test]
    fn fan_sink_satisfies_the_contract_despite_isolated_vertices() {
        let shape = ClassShape::new(vec![3, 3, 3]).unwrap();
        let fan = fan_construction(&shape).unwrap();
        let x = sink_clique(&fan).unwrap();
        assert!(!x.is_empty());
        let d = build_dominance(&fan);
        // No outneighbours among non-isolated vertices.
        for (u, v) in d.proper_arcs() {
            assert!(!(x.contains(u) && !x.contains(v)), "outneighbour {v:?}");
        }
        // Deleting it still fails the no-isolated-vertex precondition.
        assert!(matches!(
            delete_sink(&fan, &x),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn chain_sink_contract_holds() {
        let shape = ClassShape::new(vec![3, 3, 3]).unwrap();
        let sys = inductive_upper(&shape).unwrap();
        let x = sink_clique(&sys).unwrap();
        assert!(!x.is_empty());
        let d = build_dominance(&sys);
        for u in x.vertices() {
            for v in x.vertices() {
                if u != v {
                    assert!(d.has_arc(u, v));
                }
            }
            for (a, b) in d.proper_arcs() {
                assert!(!(a == u && !x.contains(b)));
            }
        }
    }

    #[test]
    fn deleting_omega9_last_class_vertex_gives_a_332_system() {
        let sys = omega9();
        let x = VertexSubset::from_vertices(sys.shape(), &[VertexRef::new(2, 2)]).unwrap();
        let (reduced, map) = delete_sink(&sys, &x).unwrap();
        assert_eq!(reduced.shape().sizes(), &[3, 3, 2]);
        assert_eq!(reduced.edge_count(), 6);
        assert_eq!(reduced.is_octahedral(), Ok(true));
        assert!(reduced.isolated_vertices().is_empty());
        assert_eq!(map.map(VertexRef::new(2, 2)), None);
        assert_eq!(
            map.map(VertexRef::new(2, 1)),
            Some(VertexRef::new(2, 1))
        );
        assert_eq!(map.map(VertexRef::new(0, 2)), Some(VertexRef::new(0, 2)));
    }

    #[test]
    fn deleting_nothing_is_identity() {
        let sys = omega9();
        let x = VertexSubset::empty(sys.shape());
        let (same, map) = delete_sink(&sys, &x).unwrap();
        assert_eq!(same, sys);
        assert_eq!(map.removed(), &[None, None, None]);
    }

    #[test]
    fn delete_sink_rejects_non_sinks_and_small_classes() {
        let sys = omega9();
        // (0,0) has an outneighbour (its partner (1,0) is dominated), and
        // also dominates it mutually; a mixed bag that is not a sink.
        let x = VertexSubset::from_vertices(sys.shape(), &[VertexRef::new(0, 0)]).unwrap();
        assert!(matches!(delete_sink(&sys, &x), Err(Error::Precondition(_))));

        // A (2,2) sink deletion would shrink a class below two.
        let shape = ClassShape::new(vec![2, 2]).unwrap();
        let sys = OctahedralSystem::new(
            shape.clone(),
            vec![EdgeTuple::new(vec![0, 0]), EdgeTuple::new(vec![1, 1])],
        )
        .unwrap();
        let x = sink_clique(&sys).unwrap();
        assert!(matches!(
            delete_sink(&sys, &x),
            Err(Error::ClassTooSmall { .. })
        ));
    }
}
