//! Exact minimum-edge search: the least number of edges of an octahedral
//! system without isolated vertex on a given shape.
//!
//! Small spans are swept exhaustively (Gray-code enumeration); larger
//! shapes run a depth-first subset search over edge ranks with three
//! prunings: coverage feasibility, lexicographic canonicity under the
//! symmetry group (position permutations within classes and permutations
//! of equal-size classes), and parity certificates. Parity is tracked as
//! a syndrome against the independent pair-selection constraints, so a
//! complete candidate is octahedral exactly when its syndrome vanishes;
//! the last two picks are resolved by lookup instead of branching.

use alloc::format;
use alloc::vec::Vec;

use crate::bounds;
use crate::constructions;
use crate::error::{Error, Result};
use crate::f2;
use crate::shape::{ClassShape, EdgeTuple};
use crate::system::OctahedralSystem;

/// Most classes the subset search supports.
pub const MAX_SEARCH_CLASSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Enumeration,
    SubsetSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    Enumeration,
    SubsetSearch,
}

impl SearchMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMethod::Enumeration => "enumeration",
            SearchMethod::SubsetSearch => "subset-search",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub method: MethodChoice,
    /// Total node budget across all levels.
    pub node_budget: u64,
    /// Wall-clock budget; only enforced with the `std` feature.
    pub time_budget_ms: Option<u64>,
    /// Canonicity pruning; disable to cross-check its soundness.
    pub use_symmetry: bool,
    /// Skip odd edge counts on shapes whose sizes are all even (the total
    /// edge count of such a system is always even).
    pub use_total_parity: bool,
    /// Search levels below the published lower bound too (for
    /// cross-validation); never raises the start above the bound.
    pub start_level: Option<u64>,
    /// Largest span dimension the enumeration method accepts.
    pub enum_dim_cap: u32,
    /// Parallelize over top branches (needs the `parallel` feature).
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            method: MethodChoice::Auto,
            node_budget: u64::MAX,
            time_budget_ms: None,
            use_symmetry: true,
            use_total_parity: true,
            start_level: None,
            enum_dim_cap: f2::DEFAULT_SPAN_DIM,
            parallel: true,
        }
    }
}

/// Result of a minimum-edge search. When `exhaustive` is true, `upper`
/// is the exact minimum and `witness` attains it; otherwise the minimum
/// lies in `[lower, upper]`.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Shape in the caller's class order.
    pub shape: ClassShape,
    /// The ascending shape the search ran on.
    pub canonical_shape: ClassShape,
    /// `canonical_shape[i] == shape[class_permutation[i]]`.
    pub class_permutation: Vec<usize>,
    pub lower: u64,
    pub upper: Option<u64>,
    /// Witness in the caller's class order.
    pub witness: Option<OctahedralSystem>,
    pub method: SearchMethod,
    pub nodes_explored: u64,
    pub exhaustive: bool,
}

impl SearchOutcome {
    /// The exact minimum, when certified.
    pub fn nu(&self) -> Option<u64> {
        if self.exhaustive {
            self.upper
        } else {
            None
        }
    }
}

/// Computes the minimum edge count over octahedral systems without
/// isolated vertex on `shape`, exactly when budgets allow.
pub fn min_edges(shape: &ClassShape, opts: &SearchOptions) -> Result<SearchOutcome> {
    shape.require_all_at_least_two()?;
    let (canonical, perm) = shape.sorted_ascending();
    let dim = f2::dimension(&canonical)?;

    let method = match opts.method {
        MethodChoice::Auto => {
            if dim <= opts.enum_dim_cap as u128 {
                SearchMethod::Enumeration
            } else {
                SearchMethod::SubsetSearch
            }
        }
        MethodChoice::Enumeration => {
            if dim > opts.enum_dim_cap as u128 {
                return Err(Error::Resource(format!(
                    "span dimension {dim} exceeds enumeration cap {}",
                    opts.enum_dim_cap
                )));
            }
            SearchMethod::Enumeration
        }
        MethodChoice::SubsetSearch => SearchMethod::SubsetSearch,
    };

    let mut outcome = match method {
        SearchMethod::Enumeration => enumeration_search(&canonical, opts)?,
        SearchMethod::SubsetSearch => subset_search(&canonical, opts)?,
    };

    // Witness back into the caller's class order, re-validated.
    if let Some(canonical_witness) = outcome.witness.take() {
        let witness = permute_witness(shape, &perm, &canonical_witness)?;
        if witness.is_octahedral()? != true || witness.has_isolated_vertex() {
            return Err(Error::Precondition(format!(
                "internal: search witness failed validation"
            )));
        }
        if let Some(u) = outcome.upper {
            if witness.edge_count() as u64 != u {
                return Err(Error::Precondition(format!(
                    "internal: witness weight disagrees with the search"
                )));
            }
        }
        outcome.witness = Some(witness);
    }
    outcome.shape = shape.clone();
    outcome.class_permutation = perm;
    Ok(outcome)
}

fn permute_witness(
    shape: &ClassShape,
    perm: &[usize],
    canonical_witness: &OctahedralSystem,
) -> Result<OctahedralSystem> {
    let n = shape.n();
    let edges = canonical_witness
        .edges()
        .iter()
        .map(|e| {
            let mut positions = alloc::vec![0usize; n];
            for (i, &p) in e.positions().iter().enumerate() {
                positions[perm[i]] = p;
            }
            EdgeTuple::new(positions)
        })
        .collect();
    OctahedralSystem::new(shape.clone(), edges)
}

/// Sweep of the whole span, tracking the least no-isolated-vertex word.
fn enumeration_search(canonical: &ClassShape, opts: &SearchOptions) -> Result<SearchOutcome> {
    let fibers = f2::vertex_fiber_masks(canonical)?;
    let mut best: Option<f2::F2Word> = None;
    let visited = f2::enumerate_span(canonical, opts.enum_dim_cap, |w| {
        if w.is_zero() {
            return true;
        }
        if let Some(b) = &best {
            if b.weight() < w.weight() {
                return true;
            }
        }
        let covered = fibers
            .iter()
            .all(|mask| mask.iter().zip(w.blocks()).any(|(m, b)| m & b != 0));
        if covered
            && best
                .as_ref()
                .map_or(true, |b| w.cmp_by_support(b) == core::cmp::Ordering::Less)
        {
            best = Some(w.clone());
        }
        true
    })?;
    let best = best.expect("every shape admits the chain construction");
    let weight = best.weight() as u64;
    Ok(SearchOutcome {
        shape: canonical.clone(),
        canonical_shape: canonical.clone(),
        class_permutation: (0..canonical.n()).collect(),
        lower: weight,
        upper: Some(weight),
        witness: Some(best.to_system()?),
        method: SearchMethod::Enumeration,
        nodes_explored: visited,
        exhaustive: true,
    })
}

// ---------------------------------------------------------------------
// Subset search.
// ---------------------------------------------------------------------

/// Fixed-width syndrome word.
pub trait Syn: Copy + Eq + Ord + Send + Sync + core::fmt::Debug + 'static {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn xor(self, o: Self) -> Self;
    /// `self & !o`
    fn and_not(self, o: Self) -> Self;
    fn or(self, o: Self) -> Self;
    fn set_bit(&mut self, i: usize);
}

impl Syn for u64 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn xor(self, o: Self) -> Self {
        self ^ o
    }
    fn and_not(self, o: Self) -> Self {
        self & !o
    }
    fn or(self, o: Self) -> Self {
        self | o
    }
    fn set_bit(&mut self, i: usize) {
        *self |= 1 << i;
    }
}

impl Syn for u128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn xor(self, o: Self) -> Self {
        self ^ o
    }
    fn and_not(self, o: Self) -> Self {
        self & !o
    }
    fn or(self, o: Self) -> Self {
        self | o
    }
    fn set_bit(&mut self, i: usize) {
        *self |= 1 << i;
    }
}

impl<const K: usize> Syn for [u64; K] {
    fn zero() -> Self {
        [0; K]
    }
    fn is_zero(&self) -> bool {
        self.iter().all(|&x| x == 0)
    }
    fn xor(mut self, o: Self) -> Self {
        for i in 0..K {
            self[i] ^= o[i];
        }
        self
    }
    fn and_not(mut self, o: Self) -> Self {
        for i in 0..K {
            self[i] &= !o[i];
        }
        self
    }
    fn or(mut self, o: Self) -> Self {
        for i in 0..K {
            self[i] |= o[i];
        }
        self
    }
    fn set_bit(&mut self, i: usize) {
        self[i / 64] |= 1 << (i % 64);
    }
}

struct ShapeCtx<W> {
    n: usize,
    space: usize,
    sizes: [usize; MAX_SEARCH_CLASSES],
    /// digits[r * n + c]: position of rank `r` in class `c`.
    digits: Vec<u8>,
    syn: Vec<W>,
    /// suffix_or[r]: OR of syndromes of ranks >= r.
    suffix_or: Vec<W>,
    /// suffix_pos[r * n + c]: positions of class `c` present at ranks >= r.
    suffix_pos: Vec<u32>,
    /// (syndrome, rank), sorted; completion lookups.
    syn_sorted: Vec<(W, u32)>,
    /// Adjacent pairs of equal-size classes.
    eq_pairs: Vec<(usize, usize)>,
}

impl<W: Syn> ShapeCtx<W> {
    fn build(shape: &ClassShape) -> Result<Self> {
        let n = shape.n();
        if n > MAX_SEARCH_CLASSES {
            return Err(Error::Resource(format!(
                "subset search supports up to {MAX_SEARCH_CLASSES} classes"
            )));
        }
        let space = shape.edge_space()?;
        if space > u32::MAX as usize / 2 {
            return Err(Error::Resource(format!("edge space too large")));
        }
        let mut sizes = [0usize; MAX_SEARCH_CLASSES];
        sizes[..n].copy_from_slice(shape.sizes());

        let mut digits = alloc::vec![0u8; space * n];
        for r in 0..space {
            let e = shape.unrank(r);
            for c in 0..n {
                digits[r * n + c] = e.position(c) as u8;
            }
        }

        // Syndromes: bit per independent pair selection {0, j_c + 1} per
        // class; set when the edge is a corner of that selection.
        let radices: Vec<usize> = shape.sizes().iter().map(|&m| m - 1).collect();
        let d_bits: usize = radices.iter().product();
        let mut syn = alloc::vec![W::zero(); space];
        for r in 0..space {
            let e = &digits[r * n..r * n + n];
            let mut j = alloc::vec![0usize; n];
            for bit in 0..d_bits {
                let corner = (0..n).all(|c| {
                    let p = e[c] as usize;
                    p == 0 || p == j[c] + 1
                });
                if corner {
                    syn[r].set_bit(bit);
                }
                // Odometer with class n-1 least significant.
                for c in (0..n).rev() {
                    j[c] += 1;
                    if j[c] < radices[c] {
                        break;
                    }
                    j[c] = 0;
                }
            }
        }

        let mut suffix_or = alloc::vec![W::zero(); space + 1];
        for r in (0..space).rev() {
            suffix_or[r] = suffix_or[r + 1].or(syn[r]);
        }

        let mut suffix_pos = alloc::vec![0u32; (space + 1) * n];
        for r in (0..space).rev() {
            for c in 0..n {
                suffix_pos[r * n + c] =
                    suffix_pos[(r + 1) * n + c] | (1u32 << digits[r * n + c]);
            }
        }

        let mut syn_sorted: Vec<(W, u32)> = syn
            .iter()
            .enumerate()
            .map(|(r, &s)| (s, r as u32))
            .collect();
        syn_sorted.sort_unstable();

        let mut eq_pairs = Vec::new();
        for c in 0..n.saturating_sub(1) {
            if shape.size(c) == shape.size(c + 1) {
                eq_pairs.push((c, c + 1));
            }
        }

        Ok(ShapeCtx {
            n,
            space,
            sizes,
            digits,
            syn,
            suffix_or,
            suffix_pos,
            syn_sorted,
            eq_pairs,
        })
    }

    /// Ranks whose syndrome equals `needle`, ascending.
    fn ranks_with_syndrome(&self, needle: W) -> &[(W, u32)] {
        let lo = self.syn_sorted.partition_point(|&(s, _)| s < needle);
        let hi = self.syn_sorted[lo..].partition_point(|&(s, _)| s == needle) + lo;
        &self.syn_sorted[lo..hi]
    }
}

#[derive(Clone, Copy)]
struct State<W> {
    acc: W,
    last: i64,
    uncovered: [u32; MAX_SEARCH_CLASSES],
    next_new: [u8; MAX_SEARCH_CLASSES],
    /// Bit per equal-size pair: set once strictly ordered.
    eq_decided: u8,
}

impl<W: Syn> State<W> {
    fn root(ctx: &ShapeCtx<W>) -> Self {
        let mut uncovered = [0u32; MAX_SEARCH_CLASSES];
        for c in 0..ctx.n {
            uncovered[c] = (1u32 << ctx.sizes[c]) - 1;
        }
        State {
            acc: W::zero(),
            last: -1,
            uncovered,
            next_new: [0; MAX_SEARCH_CLASSES],
            eq_decided: 0,
        }
    }
}

/// Absolute wall-clock cutoff; a no-op without the `std` feature.
#[derive(Clone, Copy)]
struct Deadline {
    #[cfg(feature = "std")]
    at: Option<std::time::Instant>,
}

impl Deadline {
    fn from_ms(_ms: Option<u64>) -> Self {
        Deadline {
            #[cfg(feature = "std")]
            at: _ms.map(|ms| std::time::Instant::now() + std::time::Duration::from_millis(ms)),
        }
    }

    fn expired(&self) -> bool {
        #[cfg(feature = "std")]
        if let Some(at) = self.at {
            return std::time::Instant::now() >= at;
        }
        false
    }
}

struct BranchBudget {
    remaining: u64,
    deadline: Deadline,
    poll: u32,
}

impl BranchBudget {
    fn new(nodes: u64, deadline: Deadline) -> Self {
        BranchBudget {
            remaining: nodes,
            deadline,
            poll: 0,
        }
    }

    /// True when the budget is gone.
    #[inline]
    fn consume(&mut self) -> bool {
        if self.remaining == 0 {
            return true;
        }
        self.remaining -= 1;
        self.poll = self.poll.wrapping_add(1);
        if self.poll % 8192 == 0 && self.deadline.expired() {
            self.remaining = 0;
            return true;
        }
        false
    }
}

/// Branch cancellation: a branch may stop once a lower-indexed branch has
/// found a witness; only work from branches at or below the first finder
/// is reported, which keeps the outcome independent of scheduling.
struct CancelToken<'a> {
    best: Option<&'a core::sync::atomic::AtomicU32>,
    my_index: u32,
}

impl<'a> CancelToken<'a> {
    fn none(index: u32) -> Self {
        CancelToken {
            best: None,
            my_index: index,
        }
    }

    #[inline]
    fn cancelled(&self) -> bool {
        match self.best {
            Some(best) => best.load(core::sync::atomic::Ordering::Relaxed) < self.my_index,
            None => false,
        }
    }
}

enum DfsOutcome {
    Found,
    Refuted,
    Exhausted,
    Cancelled,
}

struct LevelRun<'a, W> {
    ctx: &'a ShapeCtx<W>,
    use_symmetry: bool,
    nodes: u64,
}

impl<'a, W: Syn> LevelRun<'a, W> {
    #[inline]
    fn try_extend(&self, st: &State<W>, r: usize, rem: usize) -> Option<State<W>> {
        let ctx = self.ctx;
        let n = ctx.n;
        let digits = &ctx.digits[r * n..r * n + n];
        let mut next = *st;

        if self.use_symmetry {
            for c in 0..n {
                if digits[c] > st.next_new[c] {
                    return None;
                }
            }
            for (p, &(i, j)) in ctx.eq_pairs.iter().enumerate() {
                if st.eq_decided >> p & 1 == 0 {
                    use core::cmp::Ordering::*;
                    match digits[i].cmp(&digits[j]) {
                        Greater => return None,
                        Less => next.eq_decided |= 1 << p,
                        Equal => {}
                    }
                }
            }
            for c in 0..n {
                if digits[c] == st.next_new[c] {
                    next.next_new[c] += 1;
                }
            }
        }

        let rem_after = rem - 1;
        for c in 0..n {
            let miss = st.uncovered[c] & !(1u32 << digits[c]);
            if miss.count_ones() as usize > rem_after {
                return None;
            }
            if miss & !ctx.suffix_pos[(r + 1) * n + c] != 0 {
                return None;
            }
            next.uncovered[c] = miss;
        }

        let acc = st.acc.xor(ctx.syn[r]);
        if rem_after == 0 {
            if !acc.is_zero() {
                return None;
            }
        } else if !acc.and_not(ctx.suffix_or[r + 1]).is_zero() {
            return None;
        }
        next.acc = acc;
        next.last = r as i64;
        Some(next)
    }

    fn dfs(
        &mut self,
        st: State<W>,
        rem: usize,
        chosen: &mut Vec<u32>,
        budget: &mut BranchBudget,
        cancel: &CancelToken,
    ) -> DfsOutcome {
        debug_assert!(rem >= 1);
        if cancel.cancelled() {
            return DfsOutcome::Cancelled;
        }
        if rem == 1 {
            return self.complete_one(&st, chosen, budget);
        }
        if rem == 2 {
            return self.complete_two(&st, chosen, budget);
        }
        let first = (st.last + 1) as usize;
        for r in first..=self.ctx.space - rem {
            if let Some(next) = self.try_extend(&st, r, rem) {
                self.nodes += 1;
                if budget.consume() {
                    return DfsOutcome::Exhausted;
                }
                chosen.push(r as u32);
                match self.dfs(next, rem - 1, chosen, budget, cancel) {
                    DfsOutcome::Refuted => {
                        chosen.pop();
                    }
                    other => return other,
                }
            }
        }
        DfsOutcome::Refuted
    }

    fn complete_one(
        &mut self,
        st: &State<W>,
        chosen: &mut Vec<u32>,
        budget: &mut BranchBudget,
    ) -> DfsOutcome {
        for &(_, b) in self.ctx.ranks_with_syndrome(st.acc) {
            if (b as i64) <= st.last {
                continue;
            }
            self.nodes += 1;
            if budget.consume() {
                return DfsOutcome::Exhausted;
            }
            if self.try_extend(st, b as usize, 1).is_some() {
                chosen.push(b);
                return DfsOutcome::Found;
            }
        }
        DfsOutcome::Refuted
    }

    fn complete_two(
        &mut self,
        st: &State<W>,
        chosen: &mut Vec<u32>,
        budget: &mut BranchBudget,
    ) -> DfsOutcome {
        let first = (st.last + 1) as usize;
        if self.ctx.space < 2 {
            return DfsOutcome::Refuted;
        }
        for a in first..=self.ctx.space - 2 {
            if let Some(mid) = self.try_extend(st, a, 2) {
                self.nodes += 1;
                if budget.consume() {
                    return DfsOutcome::Exhausted;
                }
                for &(_, b) in self.ctx.ranks_with_syndrome(mid.acc) {
                    if b as usize <= a {
                        continue;
                    }
                    self.nodes += 1;
                    if budget.consume() {
                        return DfsOutcome::Exhausted;
                    }
                    if self.try_extend(&mid, b as usize, 1).is_some() {
                        chosen.push(a as u32);
                        chosen.push(b);
                        return DfsOutcome::Found;
                    }
                }
            }
        }
        DfsOutcome::Refuted
    }
}

enum LevelResult {
    Found(Vec<u32>),
    Refuted,
    Exhausted,
}

enum BranchResult {
    Found(Vec<u32>, u64),
    Refuted(u64),
    Exhausted(u64),
    Cancelled,
}

#[allow(clippy::too_many_arguments)]
fn run_branch<W: Syn>(
    ctx: &ShapeCtx<W>,
    use_symmetry: bool,
    prefix: &[u32],
    state: State<W>,
    rem: usize,
    nodes_budget: u64,
    deadline: Deadline,
    cancel: CancelToken,
) -> BranchResult {
    let mut run = LevelRun {
        ctx,
        use_symmetry,
        nodes: 0,
    };
    let mut chosen: Vec<u32> = prefix.to_vec();
    let mut budget = BranchBudget::new(nodes_budget, deadline);
    match run.dfs(state, rem, &mut chosen, &mut budget, &cancel) {
        DfsOutcome::Found => BranchResult::Found(chosen, run.nodes),
        DfsOutcome::Refuted => BranchResult::Refuted(run.nodes),
        DfsOutcome::Exhausted => BranchResult::Exhausted(run.nodes),
        DfsOutcome::Cancelled => BranchResult::Cancelled,
    }
}

/// Searches one level: is there a `w`-edge octahedral system without
/// isolated vertex? Parallelizes over top branches when enabled; merged
/// results and node counts do not depend on the worker count.
fn search_level<W: Syn>(
    ctx: &ShapeCtx<W>,
    opts: &SearchOptions,
    w: usize,
    nodes_budget: u64,
    deadline: Deadline,
) -> (LevelResult, u64) {
    let root = State::root(ctx);
    let split_depth = if opts.use_symmetry { 2 } else { 1 };
    if w <= split_depth + 1 {
        let res = run_branch(
            ctx,
            opts.use_symmetry,
            &[],
            root,
            w,
            nodes_budget,
            deadline,
            CancelToken::none(0),
        );
        return match res {
            BranchResult::Found(ranks, nodes) => (LevelResult::Found(ranks), nodes),
            BranchResult::Refuted(nodes) => (LevelResult::Refuted, nodes),
            BranchResult::Exhausted(nodes) => (LevelResult::Exhausted, nodes),
            BranchResult::Cancelled => unreachable!(),
        };
    }

    // Collect prefixes at the split depth.
    let mut branches: Vec<(Vec<u32>, State<W>)> = Vec::new();
    let mut collect_nodes = 0u64;
    collect_prefixes(
        ctx,
        opts.use_symmetry,
        root,
        w,
        split_depth,
        &mut Vec::new(),
        &mut branches,
        &mut collect_nodes,
    );
    if branches.is_empty() {
        return (LevelResult::Refuted, collect_nodes);
    }

    // Every branch gets the full remaining node budget: slicing the
    // budget per branch starves deep branches while shallow ones finish
    // early, and per-branch accounting is what keeps exhaustion points
    // independent of scheduling.
    let results = run_branches(ctx, opts, &branches, w - split_depth, nodes_budget, deadline);

    let mut total_nodes = collect_nodes;
    let mut exhausted = false;
    for res in &results {
        match res {
            BranchResult::Found(ranks, nodes) => {
                total_nodes += nodes;
                return (LevelResult::Found(ranks.clone()), total_nodes);
            }
            BranchResult::Refuted(nodes) => total_nodes += nodes,
            BranchResult::Exhausted(nodes) => {
                total_nodes += nodes;
                exhausted = true;
            }
            BranchResult::Cancelled => {
                // Only reachable when an earlier branch found a witness,
                // in which case we returned above.
                unreachable!("cancelled branch without an earlier witness")
            }
        }
    }
    if exhausted {
        (LevelResult::Exhausted, total_nodes)
    } else {
        (LevelResult::Refuted, total_nodes)
    }
}

#[cfg(feature = "parallel")]
fn run_branches<W: Syn>(
    ctx: &ShapeCtx<W>,
    opts: &SearchOptions,
    branches: &[(Vec<u32>, State<W>)],
    rem: usize,
    per_branch: u64,
    deadline: Deadline,
) -> Vec<BranchResult> {
    use core::sync::atomic::{AtomicU32, Ordering};
    use rayon::prelude::*;
    if !opts.parallel {
        return run_branches_serial(ctx, opts, branches, rem, per_branch, deadline);
    }
    let best = AtomicU32::new(u32::MAX);
    branches
        .par_iter()
        .enumerate()
        .map(|(idx, (prefix, state))| {
            let token = CancelToken {
                best: Some(&best),
                my_index: idx as u32,
            };
            let res = run_branch(
                ctx,
                opts.use_symmetry,
                prefix,
                *state,
                rem,
                per_branch,
                deadline,
                token,
            );
            if matches!(res, BranchResult::Found(..)) {
                best.fetch_min(idx as u32, Ordering::Relaxed);
            }
            res
        })
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_branches<W: Syn>(
    ctx: &ShapeCtx<W>,
    opts: &SearchOptions,
    branches: &[(Vec<u32>, State<W>)],
    rem: usize,
    per_branch: u64,
    deadline: Deadline,
) -> Vec<BranchResult> {
    run_branches_serial(ctx, opts, branches, rem, per_branch, deadline)
}

fn run_branches_serial<W: Syn>(
    ctx: &ShapeCtx<W>,
    opts: &SearchOptions,
    branches: &[(Vec<u32>, State<W>)],
    rem: usize,
    per_branch: u64,
    deadline: Deadline,
) -> Vec<BranchResult> {
    let mut results = Vec::with_capacity(branches.len());
    for (idx, (prefix, state)) in branches.iter().enumerate() {
        let res = run_branch(
            ctx,
            opts.use_symmetry,
            prefix,
            *state,
            rem,
            per_branch,
            deadline,
            CancelToken::none(idx as u32),
        );
        let found = matches!(res, BranchResult::Found(..));
        results.push(res);
        if found {
            break;
        }
    }
    results
}

#[allow(clippy::too_many_arguments)]
fn collect_prefixes<W: Syn>(
    ctx: &ShapeCtx<W>,
    use_symmetry: bool,
    st: State<W>,
    w: usize,
    depth_left: usize,
    chosen: &mut Vec<u32>,
    out: &mut Vec<(Vec<u32>, State<W>)>,
    nodes: &mut u64,
) {
    if depth_left == 0 {
        out.push((chosen.clone(), st));
        return;
    }
    let run = LevelRun {
        ctx,
        use_symmetry,
        nodes: 0,
    };
    let rem = w - chosen.len();
    let first = (st.last + 1) as usize;
    for r in first..=ctx.space - rem {
        if let Some(next) = run.try_extend(&st, r, rem) {
            *nodes += 1;
            chosen.push(r as u32);
            collect_prefixes(
                ctx,
                use_symmetry,
                next,
                w,
                depth_left - 1,
                chosen,
                out,
                nodes,
            );
            chosen.pop();
        }
    }
}

fn subset_search(canonical: &ClassShape, opts: &SearchOptions) -> Result<SearchOutcome> {
    let d_bits = canonical.interior_space()?;
    if d_bits <= 64 {
        subset_search_with::<u64>(canonical, opts)
    } else if d_bits <= 128 {
        subset_search_with::<u128>(canonical, opts)
    } else if d_bits <= 256 {
        subset_search_with::<[u64; 4]>(canonical, opts)
    } else if d_bits <= 1024 {
        subset_search_with::<[u64; 16]>(canonical, opts)
    } else {
        Err(Error::Resource(format!(
            "{d_bits} parity constraints exceed the syndrome width limit"
        )))
    }
}

fn subset_search_with<W: Syn>(
    canonical: &ClassShape,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    let ctx: ShapeCtx<W> = ShapeCtx::build(canonical)?;
    let (plb, _) = bounds::published_lower_bound(canonical)?;
    let (upper, upper_by) = bounds::construction_upper_bound(canonical)?;
    debug_assert!(plb <= upper);

    let construction = match upper_by {
        bounds::UpperBoundBy::ChainConstruction => constructions::inductive_upper(canonical)?,
        bounds::UpperBoundBy::GridConstruction => {
            constructions::square_construction(canonical.size(0), canonical.n())?
        }
    };
    debug_assert_eq!(construction.edge_count() as u64, upper);

    let all_even = canonical.sizes().iter().all(|&m| m % 2 == 0);
    let start = opts.start_level.map_or(plb, |s| s.min(plb)).max(1);
    let deadline = Deadline::from_ms(opts.time_budget_ms);

    let mut nodes_total = 0u64;
    let mut w = start;
    while w < upper {
        let skip = opts.use_total_parity && all_even && w % 2 == 1;
        if !skip {
            let remaining = opts.node_budget.saturating_sub(nodes_total);
            if remaining == 0 || deadline.expired() {
                return Ok(interval_outcome(
                    canonical,
                    w,
                    upper,
                    construction,
                    nodes_total,
                ));
            }
            let (result, nodes) = search_level(&ctx, opts, w as usize, remaining, deadline);
            nodes_total += nodes;
            match result {
                LevelResult::Found(ranks) => {
                    let witness = OctahedralSystem::from_ranks(
                        canonical.clone(),
                        ranks.iter().map(|&r| r as usize),
                    )?;
                    return Ok(SearchOutcome {
                        shape: canonical.clone(),
                        canonical_shape: canonical.clone(),
                        class_permutation: (0..canonical.n()).collect(),
                        lower: w,
                        upper: Some(w),
                        witness: Some(witness),
                        method: SearchMethod::SubsetSearch,
                        nodes_explored: nodes_total,
                        exhaustive: true,
                    });
                }
                LevelResult::Refuted => {}
                LevelResult::Exhausted => {
                    return Ok(interval_outcome(
                        canonical,
                        w,
                        upper,
                        construction,
                        nodes_total,
                    ));
                }
            }
        }
        w += 1;
    }

    // Every level below the construction refuted: the construction is it.
    Ok(SearchOutcome {
        shape: canonical.clone(),
        canonical_shape: canonical.clone(),
        class_permutation: (0..canonical.n()).collect(),
        lower: upper,
        upper: Some(upper),
        witness: Some(construction),
        method: SearchMethod::SubsetSearch,
        nodes_explored: nodes_total,
        exhaustive: true,
    })
}

fn interval_outcome(
    canonical: &ClassShape,
    lower: u64,
    upper: u64,
    construction: OctahedralSystem,
    nodes: u64,
) -> SearchOutcome {
    SearchOutcome {
        shape: canonical.clone(),
        canonical_shape: canonical.clone(),
        class_permutation: (0..canonical.n()).collect(),
        lower,
        upper: Some(upper),
        witness: Some(construction),
        method: SearchMethod::SubsetSearch,
        nodes_explored: nodes,
        exhaustive: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn nu(sizes: Vec<usize>, opts: &SearchOptions) -> SearchOutcome {
        let shape = ClassShape::new(sizes).unwrap();
        min_edges(&shape, opts).unwrap()
    }

    #[test]
    fn small_values_by_enumeration() {
        let opts = SearchOptions::default();
        assert_eq!(nu(vec![2, 2], &opts).nu(), Some(2));
        assert_eq!(nu(vec![3, 3], &opts).nu(), Some(4));
        assert_eq!(nu(vec![2, 2, 3], &opts).nu(), Some(3));
        assert_eq!(nu(vec![2, 2, 2, 2], &opts).nu(), Some(2));
        let outcome = nu(vec![3, 3, 3], &opts);
        assert_eq!(outcome.method, SearchMethod::Enumeration);
        let v = outcome.nu().unwrap();
        assert!((4..=5).contains(&v), "bracketed by the published bounds");
    }

    #[test]
    fn methods_agree_even_when_forced_below_the_published_bound() {
        for sizes in [vec![3, 3], vec![2, 2, 3], vec![3, 3, 3], vec![2, 2, 2, 2]] {
            let mut enum_opts = SearchOptions::default();
            enum_opts.method = MethodChoice::Enumeration;
            let mut search_opts = SearchOptions::default();
            search_opts.method = MethodChoice::SubsetSearch;
            search_opts.start_level = Some(1);
            let a = nu(sizes.clone(), &enum_opts);
            let b = nu(sizes.clone(), &search_opts);
            assert_eq!(a.nu(), b.nu(), "{sizes:?}");
            assert!(b.exhaustive);
        }
    }

    #[test]
    fn symmetry_pruning_is_sound() {
        for sizes in [vec![2, 2, 3, 3], vec![3, 3, 3]] {
            let mut with = SearchOptions::default();
            with.method = MethodChoice::SubsetSearch;
            with.start_level = Some(2);
            let mut without = with.clone();
            without.use_symmetry = false;
            let a = nu(sizes.clone(), &with);
            let b = nu(sizes.clone(), &without);
            assert_eq!(a.nu(), b.nu(), "{sizes:?}");
        }
    }

    #[test]
    fn published_table_small_shapes() {
        let mut opts = SearchOptions::default();
        opts.method = MethodChoice::SubsetSearch;
        assert_eq!(nu(vec![2, 2, 3, 3], &opts).nu(), Some(4));
        assert_eq!(nu(vec![2, 3, 3, 3], &opts).nu(), Some(5));
        assert_eq!(nu(vec![3, 3, 3, 3], &opts).nu(), Some(6));
    }

    #[test]
    fn witness_is_valid_and_in_caller_order() {
        let mut opts = SearchOptions::default();
        opts.method = MethodChoice::SubsetSearch;
        let outcome = nu(vec![3, 2, 3, 3], &opts);
        assert_eq!(outcome.nu(), Some(5));
        let witness = outcome.witness.unwrap();
        assert_eq!(witness.shape().sizes(), &[3, 2, 3, 3]);
        assert_eq!(witness.is_octahedral(), Ok(true));
        assert!(witness.isolated_vertices().is_empty());
        assert_eq!(witness.edge_count(), 5);
        assert_eq!(outcome.canonical_shape.sizes(), &[2, 3, 3, 3]);
    }

    #[test]
    fn budget_exhaustion_degrades_to_an_interval() {
        let shape = ClassShape::new(vec![3, 3, 3, 3]).unwrap();
        let mut opts = SearchOptions::default();
        opts.method = MethodChoice::SubsetSearch;
        opts.node_budget = 3;
        let outcome = min_edges(&shape, &opts).unwrap();
        assert!(!outcome.exhaustive);
        assert_eq!(outcome.nu(), None);
        assert!(outcome.lower <= 6);
        assert_eq!(outcome.upper, Some(6));
        let witness = outcome.witness.unwrap();
        assert_eq!(witness.edge_count(), 6);
        assert_eq!(witness.is_octahedral(), Ok(true));
    }

    #[test]
    fn zero_level_shapes_resolve_by_bounds_alone() {
        let mut opts = SearchOptions::default();
        opts.method = MethodChoice::SubsetSearch;
        let outcome = nu(vec![2, 2, 7, 9], &opts);
        assert_eq!(outcome.nu(), Some(14));
        assert_eq!(outcome.nodes_explored, 0);
    }
}
