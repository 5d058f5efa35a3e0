//! Independence oracles, query instrumentation, and the concrete matroid
//! families used for testing and benchmarking.
//!
//! An oracle is the only way the solvers learn anything about a matroid. Every
//! solver wraps the oracles it is given in a [`CountingOracle`], so the query
//! counts it reports are exactly the number of `is_independent` calls it made.

use std::sync::atomic::{AtomicU64, Ordering};

use petgraph::unionfind::UnionFind;

use crate::error::MatroidError;
use crate::set::{ElementId, ElementSet};

/// Largest ground set [`checked_matroid_axioms`] will enumerate.
pub const AXIOM_CHECK_MAX_N: usize = 12;

/// Answers "is this set independent?" for one matroid over `0..ground_size()`.
///
/// Implementations must be deterministic and must not mutate the queried set.
pub trait IndependenceOracle: Send + Sync {
    fn ground_size(&self) -> usize;

    /// Callers guarantee every member of `set` is below `ground_size()`.
    fn is_independent(&self, set: &ElementSet) -> bool;
}

impl<O: IndependenceOracle + ?Sized> IndependenceOracle for &O {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        (**self).is_independent(set)
    }
}

impl<O: IndependenceOracle + ?Sized> IndependenceOracle for Box<O> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        (**self).is_independent(set)
    }
}

/// Domain-checked independence query.
pub fn query<O: IndependenceOracle + ?Sized>(oracle: &O, set: &ElementSet) -> Result<bool, MatroidError> {
    check_domain(oracle.ground_size(), set)?;
    Ok(oracle.is_independent(set))
}

pub(crate) fn check_domain(n: usize, set: &ElementSet) -> Result<(), MatroidError> {
    match set.max() {
        Some(id) if id >= n => Err(MatroidError::ElementOutOfRange { id, n }),
        _ => Ok(()),
    }
}

/// Size of the greedy maximal independent subset of `set`, scanning in
/// ascending id order. Issues exactly `|set|` queries.
pub fn rank<O: IndependenceOracle + ?Sized>(oracle: &O, set: &ElementSet) -> Result<usize, MatroidError> {
    check_domain(oracle.ground_size(), set)?;
    Ok(greedy_rank(oracle, set))
}

pub(crate) fn greedy_rank<O: IndependenceOracle + ?Sized>(oracle: &O, set: &ElementSet) -> usize {
    let mut basis = ElementSet::new(oracle.ground_size());
    let mut size = 0;
    for x in set {
        basis.insert(x);
        if oracle.is_independent(&basis) {
            size += 1;
        } else {
            basis.remove(x);
        }
    }
    size
}

/// Forwards queries to `inner` and counts them.
#[derive(Debug)]
pub struct CountingOracle<O> {
    inner: O,
    count: AtomicU64,
}

impl<O: IndependenceOracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            count: AtomicU64::new(0),
        }
    }

    pub fn count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.count.store(0, Ordering::Relaxed);
    }

    /// The wrapped oracle; queries made through it are not counted.
    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: IndependenceOracle> IndependenceOracle for CountingOracle<O> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.inner.is_independent(set)
    }
}

/// `S` is independent iff `|S| <= k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformMatroid {
    n: usize,
    k: usize,
}

impl UniformMatroid {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, k }
    }

    pub fn rank_cap(&self) -> usize {
        self.k
    }
}

impl IndependenceOracle for UniformMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        set.len() <= self.k
    }
}

/// Each element belongs to one class; `S` is independent iff no class holds
/// more than its capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatroid {
    class_of: Vec<usize>,
    caps: Vec<usize>,
}

impl PartitionMatroid {
    pub fn new(class_of: Vec<usize>, caps: Vec<usize>) -> Result<Self, MatroidError> {
        if let Some((element, &class)) = class_of.iter().enumerate().find(|(_, &c)| c >= caps.len()) {
            return Err(MatroidError::InvalidMatroid(format!(
                "element {element} is in class {class} but only {} capacities were given",
                caps.len()
            )));
        }
        Ok(Self { class_of, caps })
    }

    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }
}

impl IndependenceOracle for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.class_of.len()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        let mut used = vec![0usize; self.caps.len()];
        set.iter().all(|x| {
            let c = self.class_of[x];
            used[c] += 1;
            used[c] <= self.caps[c]
        })
    }
}

/// Edges of a multigraph; `S` is independent iff it is a forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphicMatroid {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphicMatroid {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, MatroidError> {
        if let Some((i, &(u, v))) = edges
            .iter()
            .enumerate()
            .find(|(_, &(u, v))| u >= vertices || v >= vertices)
        {
            return Err(MatroidError::InvalidMatroid(format!(
                "edge {i} = ({u}, {v}) has an endpoint outside 0..{vertices}"
            )));
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

impl IndependenceOracle for GraphicMatroid {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        let mut forest = UnionFind::<usize>::new(self.vertices);
        set.iter().all(|e| {
            let (u, v) = self.edges[e];
            forest.union(u, v)
        })
    }
}

/// Column `j` of an `m x n` matrix over GF(2) represents element `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMatroidGf2 {
    rows: usize,
    /// Bit-packed columns, `rows.div_ceil(64)` words each.
    columns: Vec<Vec<u64>>,
}

impl LinearMatroidGf2 {
    /// `rows[i][j]` is the entry in row `i`, column `j`.
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self, MatroidError> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatroidError::InvalidMatroid("GF(2) rows have different lengths".into()));
        }
        let words = m.div_ceil(64);
        let mut columns = vec![vec![0u64; words]; n];
        for (i, row) in rows.iter().enumerate() {
            for (j, &bit) in row.iter().enumerate() {
                if bit {
                    columns[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(Self { rows: m, columns })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn entry(&self, row: usize, column: usize) -> bool {
        self.columns[column][row / 64] >> (row % 64) & 1 == 1
    }
}

impl IndependenceOracle for LinearMatroidGf2 {
    fn ground_size(&self) -> usize {
        self.columns.len()
    }

    /// Incremental Gaussian elimination: each basis vector is stored reduced
    /// with its pivot row; a column reducing to zero is dependent.
    fn is_independent(&self, set: &ElementSet) -> bool {
        if set.len() > self.rows {
            return false;
        }
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        for j in set {
            let mut v = self.columns[j].clone();
            for (pivot, b) in &basis {
                if v[pivot / 64] >> (pivot % 64) & 1 == 1 {
                    v.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
                }
            }
            match v.iter().enumerate().find(|(_, &w)| w != 0) {
                Some((i, &w)) => basis.push((i * 64 + w.trailing_zeros() as usize, v)),
                None => return false,
            }
        }
        true
    }
}

/// A set family given by its members, as bitmasks over at most 64 elements.
/// Only useful for exercising the axiom checker on arbitrary (possibly
/// non-matroid) families.
#[derive(Debug, Clone)]
pub struct ExplicitFamily {
    n: usize,
    members: std::collections::HashSet<u64>,
}

impl ExplicitFamily {
    pub fn new(n: usize, members: impl IntoIterator<Item = u64>) -> Self {
        assert!(n <= 64);
        Self {
            n,
            members: members.into_iter().collect(),
        }
    }
}

impl IndependenceOracle for ExplicitFamily {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        let mask = set.iter().fold(0u64, |m, x| m | 1 << x);
        self.members.contains(&mask)
    }
}

/// Exhaustively checks non-emptiness, downward closure and the exchange
/// property over all `2^n` subsets.
pub fn checked_matroid_axioms<O: IndependenceOracle + ?Sized>(oracle: &O) -> Result<bool, MatroidError> {
    let n = oracle.ground_size();
    if n > AXIOM_CHECK_MAX_N {
        return Err(MatroidError::BudgetExceeded {
            n,
            max: AXIOM_CHECK_MAX_N,
        });
    }
    let total = 1usize << n;
    let independent: Vec<bool> = (0..total)
        .map(|mask| oracle.is_independent(&ElementSet::from_mask(n, mask as u64)))
        .collect();
    if !independent[0] {
        return Ok(false);
    }
    // Removing one element at a time suffices for downward closure.
    for mask in 0..total {
        if independent[mask] && (0..n).any(|x| mask >> x & 1 == 1 && !independent[mask & !(1 << x)]) {
            return Ok(false);
        }
    }
    // Under downward closure, exchange for |big| = |small| + 1 implies the general case.
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for mask in (0..total).filter(|&m| independent[m]) {
        by_size[mask.count_ones() as usize].push(mask);
    }
    for size in 0..n {
        for &small in &by_size[size] {
            for &big in &by_size[size + 1] {
                let candidates = big & !small;
                if !(0..n).any(|x| candidates >> x & 1 == 1 && independent[small | 1 << x]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Convenience for tests: the set `{ids}` over the oracle's ground set.
pub fn set_of<O: IndependenceOracle + ?Sized>(oracle: &O, ids: &[ElementId]) -> ElementSet {
    ElementSet::from_ids(oracle.ground_size(), ids.iter().copied())
}
