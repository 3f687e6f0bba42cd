//! The GF(2) view: an n-partite hypergraph is a bit vector of length
//! `Π m_i` indexed by edge rank, and the octahedral systems are exactly
//! the span of the class-fiber generators. This module builds that basis,
//! computes dimension and count, enumerates small spans by Gray code, and
//! provides the brute-force counting oracle.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::shape::ClassShape;
use crate::system::OctahedralSystem;

/// Largest span dimension [`enumerate_span`] accepts by default.
pub const DEFAULT_SPAN_DIM: u32 = 26;

/// Largest `Π m_i` accepted by [`brute_force_count`].
pub const BRUTE_FORCE_EDGE_CAP: usize = 25;

/// Largest dimension for which [`count_systems`] returns the exact integer.
pub const EXACT_COUNT_DIM: u128 = 4096;

/// Bit-length budget for words and bases.
pub const DEFAULT_BIT_BUDGET: usize = 1 << 24;

/// A hypergraph on a shape as a bit vector, bit `rank(e)` set iff `e` is
/// an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Word {
    shape: ClassShape,
    bits: Vec<u64>,
    len: usize,
}

impl F2Word {
    pub fn zero(shape: &ClassShape) -> Result<Self> {
        let len = shape.edge_space()?;
        if len > DEFAULT_BIT_BUDGET {
            return Err(Error::Resource(format!(
                "word length {len} exceeds bit budget {DEFAULT_BIT_BUDGET}"
            )));
        }
        Ok(F2Word {
            shape: shape.clone(),
            bits: alloc::vec![0u64; len.div_ceil(64)],
            len,
        })
    }

    pub fn from_system(sys: &OctahedralSystem) -> Result<Self> {
        let mut w = F2Word::zero(sys.shape())?;
        for r in sys.edge_ranks() {
            w.set(r, true);
        }
        Ok(w)
    }

    pub fn to_system(&self) -> Result<OctahedralSystem> {
        OctahedralSystem::from_ranks(self.shape.clone(), self.iter_ones())
    }

    pub fn shape(&self) -> &ClassShape {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, r: usize) -> bool {
        self.bits[r >> 6] >> (r & 63) & 1 == 1
    }

    pub fn set(&mut self, r: usize, value: bool) {
        if value {
            self.bits[r >> 6] |= 1 << (r & 63);
        } else {
            self.bits[r >> 6] &= !(1 << (r & 63));
        }
    }

    pub fn xor_assign(&mut self, other: &F2Word) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn lowest_one(&self) -> Option<usize> {
        for (i, &b) in self.bits.iter().enumerate() {
            if b != 0 {
                return Some(i * 64 + b.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Raw 64-bit blocks, least significant rank first.
    pub fn blocks(&self) -> &[u64] {
        &self.bits
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &b)| {
            let mut b = b;
            core::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let t = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(i * 64 + t)
                }
            })
        })
    }

    /// Order by weight, then by the sorted rank sequence; the least word
    /// of a tie group is the one whose edges come earliest.
    pub fn cmp_by_support(&self, other: &F2Word) -> core::cmp::Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.iter_ones().cmp(other.iter_ones()))
    }
}

/// The fiber generators of the space of octahedral systems, one per class
/// and per choice of positions in the other classes, together with a
/// fully reduced echelon basis of their span.
#[derive(Debug, Clone)]
pub struct F2Basis {
    shape: ClassShape,
    generators: Vec<F2Word>,
    echelon: Vec<F2Word>,
    pivots: Vec<usize>,
}

impl F2Basis {
    pub fn shape(&self) -> &ClassShape {
        &self.shape
    }

    pub fn generators(&self) -> &[F2Word] {
        &self.generators
    }

    /// Reduced echelon basis; pivots are lowest-index-first, which makes
    /// the basis (and everything enumerated from it) canonical.
    pub fn echelon(&self) -> &[F2Word] {
        &self.echelon
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    /// Whether `word` lies in the GF(2) span of the generators.
    pub fn membership(&self, word: &F2Word) -> Result<bool> {
        if word.shape() != &self.shape {
            return Err(Error::ShapeMismatch);
        }
        Ok(self.reduce(word).is_zero())
    }

    /// Remainder of `word` after elimination against the echelon basis.
    pub fn reduce(&self, word: &F2Word) -> F2Word {
        let mut w = word.clone();
        for (gen, &pivot) in self.echelon.iter().zip(&self.pivots) {
            if w.get(pivot) {
                w.xor_assign(gen);
            }
        }
        w
    }

    /// The span member with the given coefficient pattern over the echelon
    /// basis (bit `i` of `coeffs` selects `echelon[i]`).
    pub fn member_from_coefficients(&self, coeffs: u128) -> F2Word {
        let mut w = F2Word::zero(&self.shape).expect("shape already admitted");
        for (i, gen) in self.echelon.iter().enumerate() {
            if i < 128 && coeffs >> i & 1 == 1 {
                w.xor_assign(gen);
            }
        }
        w
    }
}

/// Builds the generator family: for each class `j` and each tuple of
/// positions in the other classes, the word of all `m_j` edges through
/// that tuple.
pub fn coboundary_basis(shape: &ClassShape) -> Result<F2Basis> {
    shape.require_all_at_least_two()?;
    let n = shape.n();
    let mut generators = Vec::new();
    for j in 0..n {
        let other_total: usize = (0..n)
            .filter(|&c| c != j)
            .map(|c| shape.size(c))
            .product();
        for mut t in 0..other_total {
            // Decode the tuple of other-class positions, then sweep class j.
            let mut positions = alloc::vec![0usize; n];
            for c in (0..n).rev() {
                if c == j {
                    continue;
                }
                positions[c] = t % shape.size(c);
                t /= shape.size(c);
            }
            let mut word = F2Word::zero(shape)?;
            for p in 0..shape.size(j) {
                positions[j] = p;
                let mut r = 0usize;
                for (c, &q) in positions.iter().enumerate() {
                    r = r * shape.size(c) + q;
                }
                word.set(r, true);
            }
            generators.push(word);
        }
    }

    // Reduced echelon form, pivots lowest-index-first.
    let mut echelon: Vec<F2Word> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for gen in &generators {
        let mut w = gen.clone();
        for (e, &p) in echelon.iter().zip(&pivots) {
            if w.get(p) {
                w.xor_assign(e);
            }
        }
        if let Some(pivot) = w.lowest_one() {
            // Back-substitute to keep the basis fully reduced.
            for (e, _) in echelon.iter_mut().zip(&pivots) {
                if e.get(pivot) {
                    e.xor_assign(&w);
                }
            }
            let at = pivots.partition_point(|&q| q < pivot);
            pivots.insert(at, pivot);
            echelon.insert(at, w);
        }
    }

    Ok(F2Basis {
        shape: shape.clone(),
        generators,
        echelon,
        pivots,
    })
}

/// `Π m_i - Π (m_i - 1)`: the dimension of the space of octahedral systems.
pub fn dimension(shape: &ClassShape) -> Result<u128> {
    shape.require_all_at_least_two()?;
    let total = shape
        .sizes()
        .iter()
        .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128))
        .ok_or_else(|| Error::Resource(format!("edge space overflows u128")))?;
    let interior = shape
        .sizes()
        .iter()
        .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128 - 1))
        .ok_or_else(|| Error::Resource(format!("interior space overflows u128")))?;
    Ok(total - interior)
}

/// The number of octahedral systems on a shape: exact below
/// [`EXACT_COUNT_DIM`], otherwise reported by its exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemCount {
    Exact(BigUint),
    PowerOfTwo { exponent: u128 },
}

impl SystemCount {
    pub fn to_decimal_or_exponent(&self) -> String {
        match self {
            SystemCount::Exact(v) => format!("{v}"),
            SystemCount::PowerOfTwo { exponent } => format!("2^{exponent}"),
        }
    }
}

impl core::fmt::Display for SystemCount {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.to_decimal_or_exponent())
    }
}

pub fn count_systems(shape: &ClassShape) -> Result<SystemCount> {
    let dim = dimension(shape)?;
    if dim <= EXACT_COUNT_DIM {
        Ok(SystemCount::Exact(BigUint::from(1u8) << (dim as usize)))
    } else {
        Ok(SystemCount::PowerOfTwo { exponent: dim })
    }
}

/// Counting oracle independent of the vector-space machinery: enumerates
/// every edge subset and tests the parity condition directly against the
/// pair-selection masks.
pub fn brute_force_count(shape: &ClassShape) -> Result<BigUint> {
    shape.require_all_at_least_two()?;
    let space = shape.edge_space()?;
    if space > BRUTE_FORCE_EDGE_CAP {
        return Err(Error::Resource(format!(
            "brute force enumerates 2^{space} subsets, cap is 2^{BRUTE_FORCE_EDGE_CAP}"
        )));
    }
    let masks = pair_selection_masks_unchecked(shape)?;
    let mut count = 0u64;
    for word in 0u32..1u32 << space {
        if masks
            .iter()
            .all(|&m| (word & m).count_ones() % 2 == 0)
        {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// Every pair selection as a mask of the (at most 32) edge ranks it covers.
pub fn pair_selection_masks(shape: &ClassShape) -> Result<Vec<u32>> {
    if shape.edge_space()? > 32 {
        return Err(Error::Resource(format!(
            "selection masks need an edge space of at most 32"
        )));
    }
    pair_selection_masks_unchecked(shape)
}

fn pair_selection_masks_unchecked(shape: &ClassShape) -> Result<Vec<u32>> {
    let n = shape.n();
    let pair_lists: Vec<Vec<(usize, usize)>> = shape
        .sizes()
        .iter()
        .map(|&m| {
            let mut pairs = Vec::new();
            for lo in 0..m {
                for hi in lo + 1..m {
                    pairs.push((lo, hi));
                }
            }
            pairs
        })
        .collect();
    let mut masks = Vec::new();
    let mut choice = alloc::vec![0usize; n];
    'outer: loop {
        let mut mask = 0u32;
        for corner in 0..(1usize << n) {
            let mut r = 0usize;
            for c in 0..n {
                let (lo, hi) = pair_lists[c][choice[c]];
                let p = if corner >> (n - 1 - c) & 1 == 0 { lo } else { hi };
                r = r * shape.size(c) + p;
            }
            mask |= 1 << r;
        }
        masks.push(mask);
        let mut c = n;
        loop {
            if c == 0 {
                break 'outer;
            }
            c -= 1;
            choice[c] += 1;
            if choice[c] < pair_lists[c].len() {
                break;
            }
            choice[c] = 0;
        }
    }
    Ok(masks)
}

/// Visits every word of the span exactly once by Gray-code stepping (each
/// step XORs a single echelon vector). The visitor returns `false` to stop
/// early; the number of words visited is returned.
pub fn enumerate_span(
    shape: &ClassShape,
    max_dim: u32,
    mut visit: impl FnMut(&F2Word) -> bool,
) -> Result<u64> {
    let dim = dimension(shape)?;
    if dim > max_dim as u128 {
        return Err(Error::Resource(format!(
            "span has dimension {dim}, enumeration cap is {max_dim}"
        )));
    }
    let basis = coboundary_basis(shape)?;
    debug_assert_eq!(basis.rank() as u128, dim);
    let dim = dim as u32;
    let mut word = F2Word::zero(shape)?;
    let mut visited = 0u64;
    if !visit(&word) {
        return Ok(1);
    }
    visited += 1;
    for t in 1u64..1u64 << dim {
        let flip = t.trailing_zeros() as usize;
        word.xor_assign(&basis.echelon()[flip]);
        visited += 1;
        if !visit(&word) {
            break;
        }
    }
    Ok(visited)
}

/// Histogram of codeword weights over the whole span.
pub fn weight_distribution(shape: &ClassShape, max_dim: u32) -> Result<BTreeMap<usize, u64>> {
    let mut hist = BTreeMap::new();
    enumerate_span(shape, max_dim, |w| {
        *hist.entry(w.weight()).or_insert(0u64) += 1;
        true
    })?;
    Ok(hist)
}

/// Parity test that runs on the edge list instead of the selection space:
/// evaluates the `Π(m_i - 1)` independent constraints directly, so sparse
/// systems on large shapes check in `|E| · Π(m_i - 1)` work. Zero syndrome
/// is equivalent to the full selection-by-selection test.
pub fn sparse_parity_check(sys: &OctahedralSystem) -> Result<bool> {
    let shape = sys.shape();
    let n = shape.n();
    let constraints = shape.interior_space()?;
    if constraints
        .checked_mul(sys.edge_count().max(1))
        .is_none()
    {
        return Err(Error::Resource(format!("sparse parity work overflows")));
    }
    let radices: Vec<usize> = shape.sizes().iter().map(|&m| m - 1).collect();
    let mut j = alloc::vec![0usize; n];
    for _ in 0..constraints {
        let mut parity = false;
        for e in sys.edges() {
            let corner = e
                .positions()
                .iter()
                .zip(&j)
                .all(|(&p, &ji)| p == 0 || p == ji + 1);
            parity ^= corner;
        }
        if parity {
            return Ok(false);
        }
        for c in (0..n).rev() {
            j[c] += 1;
            if j[c] < radices[c] {
                break;
            }
            j[c] = 0;
        }
    }
    Ok(true)
}

/// Bitset of edge ranks through each vertex, indexed by flat vertex index.
pub fn vertex_fiber_masks(shape: &ClassShape) -> Result<Vec<Vec<u64>>> {
    let space = shape.edge_space()?;
    let blocks = space.div_ceil(64);
    let mut masks = alloc::vec![alloc::vec![0u64; blocks]; shape.vertex_count()];
    for r in 0..space {
        let e = shape.unrank(r);
        for v in e.vertices() {
            masks[shape.vertex_index(v)][r >> 6] |= 1 << (r & 63);
        }
    }
    Ok(masks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_ranks_match_the_dimension_formula() {
        let cases = [
            (vec![2, 2], 4, 3),
            (vec![3, 3, 3], 27, 19),
            (vec![2, 2, 2], 12, 7),
            (vec![2, 2, 2, 2], 32, 15),
            (vec![2, 3, 4], 26, 18),
        ];
        for (sizes, expect_generators, expect_rank) in cases {
            let shape = ClassShape::new(sizes).unwrap();
            let basis = coboundary_basis(&shape).unwrap();
            assert_eq!(basis.generators().len(), expect_generators);
            assert_eq!(basis.rank(), expect_rank);
            assert_eq!(dimension(&shape).unwrap(), expect_rank as u128);
        }
    }

    #[test]
    fn generators_are_fibers_and_octahedral() {
        let shape = ClassShape::new(vec![2, 3, 4]).unwrap();
        let basis = coboundary_basis(&shape).unwrap();
        let mut seen_weights = BTreeMap::new();
        for gen in basis.generators() {
            let sys = gen.to_system().unwrap();
            assert_eq!(sys.is_octahedral(), Ok(true));
            *seen_weights.entry(gen.weight()).or_insert(0usize) += 1;
        }
        // One fiber per class per co-tuple: 12 of weight 2, 8 of weight 3,
        // 6 of weight 4.
        assert_eq!(seen_weights.get(&2), Some(&12));
        assert_eq!(seen_weights.get(&3), Some(&8));
        assert_eq!(seen_weights.get(&4), Some(&6));
    }

    #[test]
    fn count_systems_examples() {
        let cases: [(&[usize], u128); 4] =
            [(&[2, 2], 3), (&[3, 3, 3], 19), (&[2], 1), (&[2, 4], 5)];
        for (sizes, dim) in cases {
            let shape = ClassShape::new(sizes.to_vec()).unwrap();
            assert_eq!(dimension(&shape).unwrap(), dim);
            let count = count_systems(&shape).unwrap();
            assert_eq!(count, SystemCount::Exact(BigUint::one() << (dim as usize)));
        }
        assert_eq!(
            count_systems(&ClassShape::new(vec![3, 3, 3]).unwrap())
                .unwrap()
                .to_decimal_or_exponent(),
            "524288"
        );
    }

    #[test]
    fn brute_force_agrees_with_the_counting_formula() {
        for sizes in [
            vec![2, 2],
            vec![2, 3],
            vec![2, 2, 2],
            vec![3, 3],
            vec![2, 4],
        ] {
            let shape = ClassShape::new(sizes).unwrap();
            let brute = brute_force_count(&shape).unwrap();
            match count_systems(&shape).unwrap() {
                SystemCount::Exact(formula) => assert_eq!(brute, formula, "{:?}", shape),
                SystemCount::PowerOfTwo { .. } => unreachable!(),
            }
        }
    }

    #[test]
    fn brute_force_values() {
        let expect: [(&[usize], u32); 5] = [
            (&[2, 2], 8),
            (&[2, 3], 16),
            (&[2, 2, 2], 128),
            (&[3, 3], 32),
            (&[2, 4], 32),
        ];
        for (sizes, value) in expect {
            let shape = ClassShape::new(sizes.to_vec()).unwrap();
            assert_eq!(brute_force_count(&shape).unwrap(), BigUint::from(value));
        }
    }

    #[test]
    fn membership_matches_parity_on_full_enumerations() {
        for sizes in [vec![2, 2], vec![2, 3], vec![2, 2, 2], vec![3, 3], vec![2, 2, 3]] {
            let shape = ClassShape::new(sizes).unwrap();
            let basis = coboundary_basis(&shape).unwrap();
            let space = shape.edge_space().unwrap();
            for raw in 0u32..1u32 << space {
                let mut word = F2Word::zero(&shape).unwrap();
                for r in 0..space {
                    word.set(r, raw >> r & 1 == 1);
                }
                let member = basis.membership(&word).unwrap();
                let parity = word.to_system().unwrap().is_octahedral().unwrap();
                assert_eq!(member, parity, "shape {:?} word {raw:b}", shape);
            }
        }
    }

    #[test]
    fn membership_matches_parity_on_random_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for sizes in [vec![3, 3, 3], vec![2, 3, 4]] {
            let shape = ClassShape::new(sizes).unwrap();
            let basis = coboundary_basis(&shape).unwrap();
            let space = shape.edge_space().unwrap();
            for _ in 0..1000 {
                let mut word = F2Word::zero(&shape).unwrap();
                for r in 0..space {
                    word.set(r, rng.gen::<bool>());
                }
                let member = basis.membership(&word).unwrap();
                let parity = word.to_system().unwrap().is_octahedral().unwrap();
                assert_eq!(member, parity);
            }
        }
    }

    #[test]
    fn trivial_membership_cases() {
        let shape = ClassShape::new(vec![3, 3, 3]).unwrap();
        let basis = coboundary_basis(&shape).unwrap();
        let zero = F2Word::zero(&shape).unwrap();
        assert_eq!(basis.membership(&zero), Ok(true));
        let mut single = zero.clone();
        single.set(5, true);
        assert_eq!(basis.membership(&single), Ok(false));
        let grid = F2Word::from_system(&crate::constructions::omega9()).unwrap();
        assert_eq!(basis.membership(&grid), Ok(true));
    }

    #[test]
    fn span_enumeration_visits_everything_once() {
        let shape = ClassShape::new(vec![2, 2, 2]).unwrap();
        let mut seen = alloc::collections::BTreeSet::new();
        let visited = enumerate_span(&shape, 26, |w| {
            let ranks: Vec<usize> = w.iter_ones().collect();
            assert!(seen.insert(ranks));
            true
        })
        .unwrap();
        assert_eq!(visited, 128);
        assert_eq!(seen.len(), 128);
    }

    #[test]
    fn weight_distribution_of_333() {
        let shape = ClassShape::new(vec![3, 3, 3]).unwrap();
        let hist = weight_distribution(&shape, 26).unwrap();
        let total: u64 = hist.values().sum();
        assert_eq!(total, 1 << 19);
        assert_eq!(hist.get(&0), Some(&1));
        assert_eq!(hist.get(&1), None);
        assert_eq!(hist.get(&2), None);
        assert_eq!(hist.get(&25), None);
        assert_eq!(hist.get(&26), None);
        assert_eq!(hist.get(&27), Some(&1));
        // Complementation symmetry: XOR with the complete system is a span
        // bijection, so weight k and weight 27-k counts agree.
        for k in 0..=27usize {
            assert_eq!(hist.get(&k), hist.get(&(27 - k)), "weight {k}");
        }
    }

    #[test]
    fn span_of_333_contains_a_weight_22_word_without_isolated_vertex() {
        let shape = ClassShape::new(vec![3, 3, 3]).unwrap();
        let fibers = vertex_fiber_masks(&shape).unwrap();
        let mut found = false;
        enumerate_span(&shape, 26, |w| {
            if w.weight() == 22 {
                let covered = fibers
                    .iter()
                    .all(|mask| mask.iter().zip(&w.bits).any(|(m, b)| m & b != 0));
                if covered {
                    found = true;
                    return false;
                }
            }
            true
        })
        .unwrap();
        assert!(found);
    }

    #[test]
    fn symmetric_difference_closure_on_small_spans() {
        // All pairs over the full (2,2,2) and (3,3) spans.
        for sizes in [vec![2, 2, 2], vec![3, 3]] {
            let shape = ClassShape::new(sizes).unwrap();
            let mut words = Vec::new();
            enumerate_span(&shape, 26, |w| {
                words.push(w.clone());
                true
            })
            .unwrap();
            for a in &words {
                for b in &words {
                    let mut c = a.clone();
                    c.xor_assign(b);
                    let sys = c.to_system().unwrap();
                    assert_eq!(sys.is_octahedral(), Ok(true));
                }
            }
        }
        // Random pairs from a larger span.
        let shape = ClassShape::new(vec![3, 3, 3]).unwrap();
        let basis = coboundary_basis(&shape).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = basis.member_from_coefficients(rng.gen::<u128>());
            let b = basis.member_from_coefficients(rng.gen::<u128>());
            let sa = a.to_system().unwrap();
            let sb = b.to_system().unwrap();
            let diff = sa.symmetric_difference(&sb).unwrap();
            assert_eq!(diff.is_octahedral(), Ok(true));
        }
    }
}
