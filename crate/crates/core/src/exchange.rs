//! Exchange-graph machinery over a common independent set.
//!
//! The exchange graph `G(S)` has arcs `s -> b` when `S+b ∈ I1`, `b -> t` when
//! `S+b ∈ I2`, `a -> b` when `S-a+b ∈ I1` and `b -> a` when `S-a+b ∈ I2`, for
//! `a ∈ S`, `b ∉ S`. It is never materialized: every arc is discovered through
//! independence queries, mostly via [`find_exchange`]'s binary search. The
//! virtual vertices `s` and `t` have no element id.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::SolverError;
use crate::oracle::{CountingOracle, IndependenceOracle};
use crate::set::{ElementId, ElementSet};

/// Two matroids over one ground set, each behind a query counter.
pub struct OraclePair<'a> {
    pub m1: CountingOracle<&'a dyn IndependenceOracle>,
    pub m2: CountingOracle<&'a dyn IndependenceOracle>,
}

impl<'a> OraclePair<'a> {
    pub fn new(m1: &'a dyn IndependenceOracle, m2: &'a dyn IndependenceOracle) -> Result<Self, SolverError> {
        if m1.ground_size() != m2.ground_size() {
            return Err(SolverError::GroundSizeMismatch(m1.ground_size(), m2.ground_size()));
        }
        Ok(Self {
            m1: CountingOracle::new(m1),
            m2: CountingOracle::new(m2),
        })
    }

    pub fn n(&self) -> usize {
        self.m1.ground_size()
    }

    /// Total queries issued to both matroids so far.
    pub fn queries(&self) -> u64 {
        self.m1.count() + self.m2.count()
    }

    /// Uncounted handles, for verification that must stay outside the budget.
    pub fn raw(&self) -> (&'a dyn IndependenceOracle, &'a dyn IndependenceOracle) {
        (*self.m1.inner(), *self.m2.inner())
    }
}

/// A set independent in both matroids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommonSet {
    members: ElementSet,
}

impl CommonSet {
    pub fn empty(n: usize) -> Self {
        Self {
            members: ElementSet::new(n),
        }
    }

    /// Verifies common independence with one query per matroid.
    pub fn new(pair: &OraclePair<'_>, members: ElementSet) -> Result<Self, SolverError> {
        crate::oracle::check_domain(pair.n(), &members)?;
        let members = resize(members, pair.n());
        if !(pair.m1.is_independent(&members) && pair.m2.is_independent(&members)) {
            return Err(SolverError::InvariantViolation(format!(
                "{:?} is not independent in both matroids",
                members
            )));
        }
        Ok(Self { members })
    }

    pub(crate) fn new_unchecked(members: ElementSet) -> Self {
        Self { members }
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, id: ElementId) -> bool {
        self.members.contains(id)
    }

    pub fn into_members(self) -> ElementSet {
        self.members
    }
}

fn resize(set: ElementSet, n: usize) -> ElementSet {
    if set.capacity() == n {
        set
    } else {
        ElementSet::from_ids(n, set.iter())
    }
}

static EXCHANGE_CALLS: AtomicU64 = AtomicU64::new(0);
static EXCHANGE_OVER_BUDGET: AtomicU64 = AtomicU64::new(0);

/// Process-wide tallies of exchange searches: `(calls, calls over the
/// ⌈log2 |Y|⌉ + 2 query budget)`.
pub fn exchange_budget_stats() -> (u64, u64) {
    (
        EXCHANGE_CALLS.load(Ordering::Relaxed),
        EXCHANGE_OVER_BUDGET.load(Ordering::Relaxed),
    )
}

/// Query budget of one exchange search over `|Y| = candidates`.
pub fn exchange_query_budget(candidates: usize) -> u64 {
    ceil_log2(candidates) + 2
}

pub(crate) fn ceil_log2(x: usize) -> u64 {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as u64
    }
}

/// Finds some `a ∈ candidates` with `X + b - a` independent, or reports that
/// none exists.
///
/// `x` holds `X` on entry and is restored before returning. `candidates` must
/// be a subset of `X` in ascending order. With `check_exists` the search first
/// asks whether `X + b - Y` is independent (the only way a partner can fail to
/// exist when `X + b` is dependent); callers that already know a partner
/// exists skip that query. The answer is always sound: a returned `a` satisfies
/// `X + b - a ∈ I` even if `X + b` happens to be independent.
pub(crate) fn exchange_search<O: IndependenceOracle + ?Sized>(
    oracle: &O,
    x: &mut ElementSet,
    candidates: &[ElementId],
    b: ElementId,
    check_exists: bool,
) -> Option<usize> {
    let m = candidates.len();
    if m == 0 {
        return None;
    }
    let mut queries = 0u64;
    x.insert(b);
    // `removed` = length of the prefix of `candidates` currently taken out of x.
    let mut removed = 0usize;
    let mut probe = |x: &mut ElementSet, upto: usize, removed: &mut usize| {
        while *removed < upto {
            x.remove(candidates[*removed]);
            *removed += 1;
        }
        while *removed > upto {
            *removed -= 1;
            x.insert(candidates[*removed]);
        }
        queries += 1;
        oracle.is_independent(x)
    };
    let found = if check_exists && !probe(x, m, &mut removed) {
        None
    } else {
        // X + b - prefix(lo) is dependent (lo = 0 by assumption), prefix(hi) independent.
        let (mut lo, mut hi) = (0usize, m);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if probe(x, mid, &mut removed) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi - 1)
    };
    for &a in &candidates[..removed] {
        x.insert(a);
    }
    x.remove(b);
    EXCHANGE_CALLS.fetch_add(1, Ordering::Relaxed);
    if queries > exchange_query_budget(m) {
        EXCHANGE_OVER_BUDGET.fetch_add(1, Ordering::Relaxed);
    }
    found
}

/// Binary-search exchange discovery: returns `a ∈ Y` with `X + b - a`
/// independent, or `None` when no such `a` exists. Ties go to the lowest id.
///
/// Preconditions: `X` independent, `Y ⊆ X`, `b ∉ X`, `X + b` dependent. The
/// membership conditions are checked; the independence ones are not (they
/// would cost queries).
pub fn find_exchange<O: IndependenceOracle + ?Sized>(
    oracle: &O,
    x: &ElementSet,
    y: &ElementSet,
    b: ElementId,
) -> Result<Option<ElementId>, SolverError> {
    crate::oracle::check_domain(oracle.ground_size(), x)?;
    if x.contains(b) {
        return Err(SolverError::Contract(format!("element {b} is already in X")));
    }
    if !y.is_subset(x) {
        return Err(SolverError::Contract("Y is not a subset of X".into()));
    }
    if b >= oracle.ground_size() {
        return Err(crate::error::MatroidError::ElementOutOfRange {
            id: b,
            n: oracle.ground_size(),
        }
        .into());
    }
    let candidates = y.to_vec();
    let mut scratch = resize(x.clone(), oracle.ground_size());
    Ok(exchange_search(oracle, &mut scratch, &candidates, b, true).map(|i| candidates[i]))
}

/// Length of the shortest `(s, t)`-path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StDistance {
    Finite(usize),
    /// The search stopped at its layer limit; the distance is at least this.
    AtLeast(usize),
    /// `t` is unreachable: `S` is a maximum common independent set.
    Infinite,
}

impl StDistance {
    pub fn finite(self) -> Option<usize> {
        match self {
            StDistance::Finite(d) => Some(d),
            _ => None,
        }
    }

    /// A lower bound usable for comparisons (`usize::MAX` when unreachable).
    pub fn lower_bound(self) -> usize {
        match self {
            StDistance::Finite(d) | StDistance::AtLeast(d) => d,
            StDistance::Infinite => usize::MAX,
        }
    }
}

/// BFS layers `D_1 .. D_{2ℓ+1}` of `G(S)`. Odd layers lie outside `S`, even
/// layers inside. When the distance is finite (`2ℓ+2`) the last layer holds
/// every element at distance `2ℓ+1`, at least one of which is adjacent to `t`.
#[derive(Clone, Debug, Serialize)]
pub struct DistanceLayers {
    layers: Vec<Vec<ElementId>>,
    #[serde(skip)]
    layer_of: Vec<u32>,
    st_distance: StDistance,
}

impl DistanceLayers {
    pub fn st_distance(&self) -> StDistance {
        self.st_distance
    }

    /// `ℓ` with `st_distance = 2ℓ + 2`, when finite.
    pub fn ell(&self) -> Option<usize> {
        self.st_distance.finite().map(|d| (d - 2) / 2)
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// Layer `D_j` (1-based), ascending ids; empty outside the computed range.
    pub fn layer(&self, j: usize) -> &[ElementId] {
        if j == 0 {
            &[]
        } else {
            self.layers.get(j - 1).map_or(&[], Vec::as_slice)
        }
    }

    pub fn layer_of(&self, id: ElementId) -> Option<usize> {
        match self.layer_of.get(id) {
            Some(&j) if j > 0 => Some(j as usize),
            _ => None,
        }
    }

    pub fn ground_size(&self) -> usize {
        self.layer_of.len()
    }

    fn push(&mut self, layer: Vec<ElementId>) {
        let j = self.layers.len() as u32 + 1;
        for &e in &layer {
            self.layer_of[e] = j;
        }
        self.layers.push(layer);
    }
}

/// BFS over `G(S)` up to layer `D_{2·max_ell+1}` (unbounded with `None`).
///
/// Odd-to-even arcs are peeled with repeated exchange searches against the
/// still-unreached part of `S`, so each discovered element costs `O(log r)`
/// queries and each odd element one extra failing query. Even-to-odd arcs
/// need one query per unreached element: `b` has an arc from `D_2k` iff
/// `S - D_2k + b ∈ I1`.
pub fn compute_distance_layers(pair: &OraclePair<'_>, s: &CommonSet, max_ell: Option<usize>) -> DistanceLayers {
    let n = pair.n();
    let mut out = DistanceLayers {
        layers: Vec::new(),
        layer_of: vec![0; n],
        st_distance: StDistance::Infinite,
    };
    let mut work = s.members().clone();
    let mut unreached_out: Vec<ElementId> = (0..n).filter(|&e| !s.contains(e)).collect();
    let mut unreached_in: Vec<ElementId> = s.members().to_vec();

    let first: Vec<ElementId> = unreached_out
        .iter()
        .copied()
        .filter(|&b| query_with(&pair.m1, &mut work, b))
        .collect();
    unreached_out.retain(|b| !first.contains(b));
    let mut odd = first;
    let mut k = 1usize;
    loop {
        if odd.is_empty() {
            out.st_distance = StDistance::Infinite;
            return out;
        }
        let reaches_t = odd.iter().any(|&b| query_with(&pair.m2, &mut work, b));
        out.push(odd.clone());
        if reaches_t {
            out.st_distance = StDistance::Finite(2 * k);
            return out;
        }
        if max_ell.is_some_and(|m| k > m) {
            out.st_distance = StDistance::AtLeast(2 * k + 2);
            return out;
        }

        let mut even = Vec::new();
        for &b in &odd {
            while let Some(i) = exchange_search(&pair.m2, &mut work, &unreached_in, b, true) {
                even.push(unreached_in.remove(i));
            }
        }
        even.sort_unstable();
        if even.is_empty() {
            out.st_distance = StDistance::Infinite;
            return out;
        }
        out.push(even.clone());

        for &a in &even {
            work.remove(a);
        }
        let (next, rest): (Vec<_>, Vec<_>) = unreached_out.iter().partition(|&&b| query_with(&pair.m1, &mut work, b));
        for &a in &even {
            work.insert(a);
        }
        unreached_out = rest;
        odd = next;
        k += 1;
    }
}

/// `work + b` independent? `work` is restored.
#[inline]
pub(crate) fn query_with<O: IndependenceOracle + ?Sized>(oracle: &O, work: &mut ElementSet, b: ElementId) -> bool {
    let added = work.insert(b);
    let ok = oracle.is_independent(work);
    if added {
        work.remove(b);
    }
    ok
}

/// `(b_1, a_1, b_2, …, a_ℓ, b_{ℓ+1})` with `b_i ∉ S`, `a_i ∈ S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AugmentingPath {
    elements: Vec<ElementId>,
}

impl AugmentingPath {
    pub fn new(elements: Vec<ElementId>) -> Self {
        Self { elements }
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    /// Number of arcs including the virtual `s` and `t` ends.
    pub fn length(&self) -> usize {
        self.elements.len() + 1
    }

    /// Checks every arc of the path in `G(s)` by direct queries on the raw
    /// oracles (uncounted).
    pub fn verify_arcs(&self, pair: &OraclePair<'_>, s: &CommonSet) -> bool {
        let (m1, m2) = pair.raw();
        let els = &self.elements;
        if els.len().is_multiple_of(2) {
            return false;
        }
        let mut work = s.members().clone();
        let plus = |work: &mut ElementSet, o: &dyn IndependenceOracle, b: ElementId| query_with(o, work, b);
        let swap = |work: &mut ElementSet, o: &dyn IndependenceOracle, a: ElementId, b: ElementId| {
            work.remove(a);
            let ok = query_with(o, work, b);
            work.insert(a);
            ok
        };
        for (i, &e) in els.iter().enumerate() {
            let should_be_in = i % 2 == 1;
            if s.contains(e) != should_be_in {
                return false;
            }
        }
        if !plus(&mut work, m1, els[0]) || !plus(&mut work, m2, els[els.len() - 1]) {
            return false;
        }
        els.windows(2).enumerate().all(|(i, w)| {
            if i % 2 == 0 {
                // b -> a
                swap(&mut work, m2, w[1], w[0])
            } else {
                // a -> b
                swap(&mut work, m1, w[0], w[1])
            }
        })
    }
}

/// `S ⊕ p`, verified common independent with one query per matroid.
pub fn augment_path(pair: &OraclePair<'_>, s: &CommonSet, path: &AugmentingPath) -> Result<CommonSet, SolverError> {
    let mut members = s.members().clone();
    for (i, &e) in path.elements().iter().enumerate() {
        let inserting = i % 2 == 0;
        let changed = if inserting {
            members.insert(e)
        } else {
            members.remove(e)
        };
        if !changed {
            return Err(SolverError::Contract(format!(
                "path element {e} is on the wrong side of S"
            )));
        }
    }
    if path.elements().len().is_multiple_of(2) {
        return Err(SolverError::Contract("augmenting path must have odd length".into()));
    }
    if !(pair.m1.is_independent(&members) && pair.m2.is_independent(&members)) {
        return Err(SolverError::InvariantViolation(format!(
            "augmenting along {:?} broke common independence",
            path.elements()
        )));
    }
    Ok(CommonSet::new_unchecked(members))
}

const SINK: usize = usize::MAX;

/// Repeated shortest-path search within one phase.
///
/// Layers stay those computed for the phase's initial `S`; after augmenting,
/// shortest paths of the same length only visit elements in their original
/// layer, on the original side of `S`. Each search sweeps backward from the
/// last layer, recording for every element a successor on a path to `t`, and
/// marks elements proven unable to reach `t` as dead for the rest of the
/// phase (distances to `t` never decrease across augmentations).
#[derive(Clone, Debug)]
pub struct PathSearch {
    layers: DistanceLayers,
    dead: Vec<bool>,
}

impl PathSearch {
    pub fn new(layers: DistanceLayers) -> Self {
        let n = layers.ground_size();
        Self {
            layers,
            dead: vec![false; n],
        }
    }

    pub fn layers(&self) -> &DistanceLayers {
        &self.layers
    }

    fn alive(&self, s: &CommonSet, e: ElementId, j: usize) -> bool {
        !self.dead[e] && s.contains(e) == j.is_multiple_of(2)
    }

    /// A shortest augmenting path of the phase's length for the current `s`,
    /// or `None` once no path of that length remains.
    pub fn next_path(&mut self, pair: &OraclePair<'_>, s: &CommonSet) -> Option<AugmentingPath> {
        let ell = self.layers.ell()?;
        let n = pair.n();
        let mut work = s.members().clone();
        let mut next = vec![SINK; n];

        let top = 2 * ell + 1;
        let mut reach: Vec<ElementId> = Vec::new();
        for idx in 0..self.layers.layer(top).len() {
            let b = self.layers.layer(top)[idx];
            if !self.alive(s, b, top) {
                continue;
            }
            if !query_with(&pair.m2, &mut work, b) {
                self.dead[b] = true;
            } else if ell == 0 {
                if query_with(&pair.m1, &mut work, b) {
                    return Some(AugmentingPath::new(vec![b]));
                }
                self.dead[b] = true;
            } else {
                reach.push(b);
            }
        }

        for k in (1..=ell).rev() {
            let mut pool: Vec<ElementId> = self
                .layers
                .layer(2 * k)
                .iter()
                .copied()
                .filter(|&a| self.alive(s, a, 2 * k))
                .collect();
            let mut found = Vec::new();
            for &b in &reach {
                while let Some(i) = exchange_search(&pair.m1, &mut work, &pool, b, true) {
                    let a = pool.remove(i);
                    next[a] = b;
                    found.push(a);
                }
            }
            for a in pool {
                self.dead[a] = true;
            }
            if found.is_empty() {
                return None;
            }
            found.sort_unstable();

            reach.clear();
            for idx in 0..self.layers.layer(2 * k - 1).len() {
                let b = self.layers.layer(2 * k - 1)[idx];
                if !self.alive(s, b, 2 * k - 1) {
                    continue;
                }
                match exchange_search(&pair.m2, &mut work, &found, b, true) {
                    Some(i) => {
                        next[b] = found[i];
                        reach.push(b);
                    }
                    None => self.dead[b] = true,
                }
            }
            if reach.is_empty() {
                return None;
            }
        }

        for &b in &reach {
            if query_with(&pair.m1, &mut work, b) {
                let mut elements = vec![b];
                let mut cur = b;
                while next[cur] != SINK {
                    cur = next[cur];
                    elements.push(cur);
                }
                return Some(AugmentingPath::new(elements));
            }
            self.dead[b] = true;
        }
        None
    }
}

/// One shortest augmenting path in `G(s)` using the given layers, or `None`
/// when no path of length `st_distance` exists.
pub fn find_augmenting_path(pair: &OraclePair<'_>, s: &CommonSet, layers: &DistanceLayers) -> Option<AugmentingPath> {
    PathSearch::new(layers.clone()).next_path(pair, s)
}
