//! Refinement of a partial augmenting set.
//!
//! A refinement pass sweeps the layers from the top down and rebalances
//! adjacent layers until every layer pair is locally maximal; a path
//! refinement then either splices in one more valid path or shows the
//! selection is maximal. Query budgets are linear in the number of layered
//! elements, with an extra `log r` factor for path refinement.

use serde::Serialize;

use crate::augset::{invariant_violations, ElementStatus, LayeredState};
use crate::exchange::{ceil_log2, exchange_search, query_with, OraclePair};
use crate::oracle::IndependenceOracle;
use crate::set::{ElementId, ElementSet};

use ElementStatus::{Fresh, Selected};

/// `refine_aba(k)` issues at most this many queries per element of
/// `D_{2k} ∪ D_{2k+1} ∪ D_{2k+2}`.
pub const ABA_QUERY_FACTOR: u64 = 5;
/// A full refinement pass issues at most this many queries per ground element.
pub const PASS_QUERY_FACTOR: u64 = 5;
/// Path refinement issues at most `PATH_QUERY_FACTOR · n · (1 + log2 r)` queries.
pub const PATH_QUERY_FACTOR: u64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RefineOutcome {
    /// One valid path was added; `|B_{ℓ+1}|` grew by one.
    ExtendedByPath,
    /// No valid path remains: the selection is maximal.
    MaximalReached,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PassRecord {
    pub queries: u64,
    pub even_changes: u64,
    /// Selection widths `[|B_1|, |A_1|, …, |B_{ℓ+1}|]` after the pass.
    pub widths: Vec<usize>,
}

impl PassRecord {
    pub fn imbalance(&self) -> usize {
        match (self.widths.first(), self.widths.last()) {
            (Some(f), Some(l)) => f - l.min(f),
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathRecord {
    pub queries: u64,
    pub outcome: RefineOutcome,
    pub b_last_before: usize,
    pub b_last_after: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Link {
    None,
    Elem(ElementId),
    Sink,
}

/// Runs refinement procedures against a pair of counted oracles, optionally
/// auditing every step with uncounted queries.
pub struct Refiner<'p, 'a> {
    pair: &'p OraclePair<'a>,
    audit: Option<Vec<String>>,
}

impl<'p, 'a> Refiner<'p, 'a> {
    pub fn new(pair: &'p OraclePair<'a>) -> Self {
        Self { pair, audit: None }
    }

    /// A refiner that re-checks invariants, size equalities, spliced paths
    /// and query budgets after every step.
    pub fn audited(pair: &'p OraclePair<'a>) -> Self {
        Self {
            pair,
            audit: Some(Vec::new()),
        }
    }

    pub fn violations(&self) -> &[String] {
        self.audit.as_deref().unwrap_or(&[])
    }

    pub fn take_violations(&mut self) -> Vec<String> {
        self.audit.as_mut().map(std::mem::take).unwrap_or_default()
    }

    fn m1(&self) -> &'p dyn IndependenceOracle {
        &self.pair.m1
    }

    fn m2(&self) -> &'p dyn IndependenceOracle {
        &self.pair.m2
    }

    fn report(&mut self, what: impl FnOnce() -> String) {
        if let Some(log) = self.audit.as_mut() {
            log.push(what());
        }
    }

    fn audit_state(&mut self, st: &LayeredState, step: &str) {
        if self.audit.is_none() {
            return;
        }
        let (m1, m2) = self.pair.raw();
        for v in invariant_violations(st, m1, m2) {
            self.report(|| format!("after {step}: {v}"));
        }
    }

    fn audit_equal(&mut self, step: &str, what: &str, left: usize, right: usize) {
        if left != right {
            self.report(|| format!("after {step}: {what} ({left} != {right})"));
        }
    }

    /// Greedily extends `B_{k+1}` from fresh elements of `D_{2k+1}` while
    /// `S - A_k + B_{k+1}` stays independent in `M1`, then drops from `A_k`
    /// a maximal subset that can be put back without breaking that. `0 ≤ k ≤ ℓ`.
    pub fn refine_ab(&mut self, st: &mut LayeredState, k: usize) {
        assert!(k <= st.ell(), "refine_ab({k}) with ℓ = {}", st.ell());
        let m1 = self.m1();
        let mut x = st.base().clone();
        st.take_from(&mut x, 2 * k, Selected);
        st.add_to(&mut x, 2 * k + 1, Selected);
        for b in st.members(2 * k + 1, Fresh) {
            if query_with(m1, &mut x, b) {
                x.insert(b);
                st.select(b);
            }
        }
        if k > 0 {
            for a in st.members(2 * k, Selected) {
                if query_with(m1, &mut x, a) {
                    x.insert(a);
                    st.remove(a);
                }
            }
        }
        if self.audit.is_some() {
            let step = format!("refine_ab({k})");
            self.audit_state(st, &step);
            if k >= 1 {
                self.audit_equal(&step, "|A_k| = |B_k+1|", st.a_len(k), st.b_len(k + 1));
            }
        }
    }

    /// Keeps a maximal part of `B_k` spanned consistently in `M2` (the rest
    /// is removed), then moves into `A_k` the fresh elements of `D_{2k}` that
    /// cannot be put back. Returns the elements newly added to `A_k`.
    /// `1 ≤ k ≤ ℓ+1`.
    pub fn refine_ba(&mut self, st: &mut LayeredState, k: usize) -> Vec<ElementId> {
        assert!(k >= 1 && k <= st.ell() + 1, "refine_ba({k}) with ℓ = {}", st.ell());
        let m2 = self.m2();
        let mut x = st.base().clone();
        st.take_from(&mut x, 2 * k, Selected);
        st.take_from(&mut x, 2 * k, Fresh);
        for b in st.members(2 * k - 1, Selected) {
            if query_with(m2, &mut x, b) {
                x.insert(b);
            } else {
                st.remove(b);
            }
        }
        let mut added = Vec::new();
        for a in st.members(2 * k, Fresh) {
            if query_with(m2, &mut x, a) {
                x.insert(a);
            } else {
                st.select(a);
                added.push(a);
            }
        }
        if self.audit.is_some() {
            let step = format!("refine_ba({k})");
            self.audit_state(st, &step);
            if k <= st.ell() {
                self.audit_equal(&step, "|B_k| = |A_k|", st.b_len(k), st.a_len(k));
            }
        }
        added
    }

    /// Rebalances layers `2k`, `2k+1`, `2k+2`: fresh elements of `D_{2k+1}`
    /// are either selected or removed for good. `0 ≤ k ≤ ℓ`.
    pub fn refine_aba(&mut self, st: &mut LayeredState, k: usize) {
        assert!(k <= st.ell(), "refine_aba({k}) with ℓ = {}", st.ell());
        let start = self.pair.queries();
        self.refine_ba(st, k + 1);

        let (m1, m2) = (self.m1(), self.m2());
        let mut x1 = st.base().clone();
        st.take_from(&mut x1, 2 * k, Selected);
        st.add_to(&mut x1, 2 * k + 1, Selected);
        let mut x2 = st.base().clone();
        st.take_from(&mut x2, 2 * k + 2, Selected);
        st.take_from(&mut x2, 2 * k + 2, Fresh);
        st.add_to(&mut x2, 2 * k + 1, Selected);
        for b in st.members(2 * k + 1, Fresh) {
            if query_with(m1, &mut x1, b) {
                if query_with(m2, &mut x2, b) {
                    x1.insert(b);
                    x2.insert(b);
                    st.select(b);
                } else {
                    st.remove(b);
                }
            }
        }

        self.refine_ba(st, k + 1);
        self.refine_ab(st, k);

        if self.audit.is_some() {
            let step = format!("refine_aba({k})");
            if k >= 1 {
                self.audit_equal(&step, "|A_k| = |B_k+1|", st.a_len(k), st.b_len(k + 1));
            }
            if k < st.ell() {
                self.audit_equal(&step, "|B_k+1| = |A_k+1|", st.b_len(k + 1), st.a_len(k + 1));
            }
            let span: usize = (2 * k..=2 * k + 2).map(|j| st.layer(j).len()).sum();
            let used = self.pair.queries() - start;
            if used > ABA_QUERY_FACTOR * span as u64 {
                self.report(|| format!("{step} used {used} queries for {span} layered elements"));
            }
        }
    }

    /// One refinement pass: `refine_aba(k)` for `k = ℓ, ℓ-1, …, 0`.
    pub fn refine_pass(&mut self, st: &mut LayeredState) -> PassRecord {
        let start = self.pair.queries();
        let changes = st.even_changes();
        for k in (0..=st.ell()).rev() {
            self.refine_aba(st, k);
        }
        let record = PassRecord {
            queries: self.pair.queries() - start,
            even_changes: st.even_changes() - changes,
            widths: st.widths(),
        };
        if self.audit.is_some() {
            let budget = PASS_QUERY_FACTOR * st.n() as u64;
            if record.queries > budget {
                self.report(|| format!("refine_pass used {} queries, budget {budget}", record.queries));
            }
            if record.even_changes < record.imbalance() as u64 {
                self.report(|| {
                    format!(
                        "refine_pass changed {} even-layer statuses but left imbalance {}",
                        record.even_changes,
                        record.imbalance()
                    )
                });
            }
        }
        record
    }

    /// Either splices one valid path into the selection, growing
    /// `|B_{ℓ+1}|` by one, or establishes that the selection is maximal.
    pub fn refine_path(&mut self, st: &mut LayeredState) -> PathRecord {
        let start = self.pair.queries();
        let before = st.b_len(st.ell() + 1);
        let outcome = self.refine_path_inner(st);
        let record = PathRecord {
            queries: self.pair.queries() - start,
            outcome,
            b_last_before: before,
            b_last_after: st.b_len(st.ell() + 1),
        };
        if self.audit.is_some() {
            let r = st.base().len().max(1) as f64;
            let budget = PATH_QUERY_FACTOR as f64 * st.n() as f64 * (1.0 + r.log2());
            if record.queries as f64 > budget {
                self.report(|| format!("refine_path used {} queries, budget {budget:.0}", record.queries));
            }
            let grew = record.b_last_after as i64 - record.b_last_before as i64;
            match outcome {
                RefineOutcome::ExtendedByPath if grew != 1 => {
                    self.report(|| format!("path splice changed |B_last| by {grew}"))
                }
                RefineOutcome::MaximalReached if grew != 0 => {
                    self.report(|| format!("maximal refine_path changed |B_last| by {grew}"))
                }
                _ => {}
            }
        }
        record
    }

    fn refine_path_inner(&mut self, st: &mut LayeredState) -> RefineOutcome {
        let ell = st.ell();
        let (m1, m2) = (self.m1(), self.m2());
        let mut next = vec![Link::None; st.n()];

        for k in (1..=ell + 1).rev() {
            let added = self.refine_ba(st, k);
            if let Some(&a) = added.first() {
                let Link::Elem(b) = next[a] else {
                    panic!("element {a} entered A_{k} without a recorded successor");
                };
                self.splice(st, b, &next);
                return RefineOutcome::ExtendedByPath;
            }

            // Fresh elements of D_{2k-1}: drop those spanned in M2, link the rest
            // to a fresh partner in D_{2k} (or to t on the last layer).
            let fresh_even = st.members(2 * k, Fresh);
            let mut exch = st.base().clone();
            st.take_from(&mut exch, 2 * k, Selected);
            st.add_to(&mut exch, 2 * k - 1, Selected);
            let mut check = exch.clone();
            for &a in &fresh_even {
                check.remove(a);
            }
            for b in st.members(2 * k - 1, Fresh) {
                if !query_with(m2, &mut check, b) {
                    st.remove(b);
                } else if k == ell + 1 {
                    next[b] = Link::Sink;
                } else {
                    match exchange_search(m2, &mut exch, &fresh_even, b, false) {
                        Some(i) => next[b] = Link::Elem(fresh_even[i]),
                        None => {
                            self.report(|| format!("element {b} passed the M2 check with no fresh partner"));
                            st.remove(b);
                        }
                    }
                }
            }
            if self.audit.is_some() {
                for b in st.members(2 * k - 1, Fresh) {
                    if next[b] == Link::None {
                        self.report(|| format!("fresh element {b} of layer {} has no successor", 2 * k - 1));
                    }
                }
            }

            let mut entry = st.base().clone();
            st.take_from(&mut entry, 2 * k - 2, Selected);
            st.add_to(&mut entry, 2 * k - 1, Selected);
            let heads = st.members(2 * k - 1, Fresh);
            if let Some(&b) = heads.iter().find(|&&b| query_with(m1, &mut entry, b)) {
                self.splice(st, b, &next);
                return RefineOutcome::ExtendedByPath;
            }

            self.refine_ab(st, k - 1);

            let mut pool = st.members(2 * k - 2, Fresh);
            let mut exch = st.base().clone();
            st.take_from(&mut exch, 2 * k - 2, Selected);
            st.add_to(&mut exch, 2 * k - 1, Selected);
            for b in st.members(2 * k - 1, Fresh) {
                while let Some(i) = exchange_search(m1, &mut exch, &pool, b, true) {
                    let a = pool.remove(i);
                    next[a] = Link::Elem(b);
                }
            }
            for a in pool {
                st.remove(a);
            }
        }
        RefineOutcome::MaximalReached
    }

    fn splice(&mut self, st: &mut LayeredState, head: ElementId, next: &[Link]) {
        let mut path = vec![head];
        let mut cur = head;
        loop {
            match next[cur] {
                Link::Elem(e) => {
                    path.push(e);
                    cur = e;
                }
                Link::Sink => break,
                Link::None => panic!("path through {cur} does not reach t"),
            }
        }
        if self.audit.is_some() {
            let (m1, m2) = self.pair.raw();
            for v in valid_path_violations(st, &path, m1, m2) {
                self.report(|| format!("spliced path {path:?}: {v}"));
            }
        }
        for e in path {
            st.select(e);
        }
    }
}

/// Checks that `path = (b_i, a_i, …, a_ℓ, b_{ℓ+1})` can be added to the
/// current selection: fresh elements on consecutive layers ending at the
/// last one, every exchange valid against the selection, and `b_i` addable
/// on the `M1` side. Uncounted; for audits and tests.
pub fn valid_path_violations(
    st: &LayeredState,
    path: &[ElementId],
    m1: &dyn IndependenceOracle,
    m2: &dyn IndependenceOracle,
) -> Vec<String> {
    let mut out = Vec::new();
    let ell = st.ell();
    let Some(first_layer) = path.first().and_then(|&e| st.layer_of(e)) else {
        return vec!["path is empty or starts outside the layers".into()];
    };
    if first_layer % 2 == 0 || first_layer + path.len() - 1 != 2 * ell + 1 {
        out.push(format!(
            "path starts at layer {first_layer} with {} elements",
            path.len()
        ));
        return out;
    }
    for (off, &e) in path.iter().enumerate() {
        if st.layer_of(e) != Some(first_layer + off) {
            out.push(format!("element {e} is not in layer {}", first_layer + off));
        }
        if st.status(e) != Fresh {
            out.push(format!("element {e} is not fresh"));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let i = first_layer.div_ceil(2);
    let sel = |drop_even: usize, add_odd: usize| {
        let mut x: ElementSet = st.base().clone();
        st.take_from(&mut x, drop_even, Selected);
        st.add_to(&mut x, add_odd, Selected);
        x
    };
    let swap_ok = |o: &dyn IndependenceOracle, mut x: ElementSet, a: Option<ElementId>, b: ElementId| {
        if let Some(a) = a {
            x.remove(a);
        }
        x.insert(b);
        o.is_independent(&x)
    };
    let b_of = |k: usize| path[2 * (k - i)];
    let a_of = |k: usize| path[2 * (k - i) + 1];

    if !swap_ok(m1, sel(2 * i - 2, 2 * i - 1), None, b_of(i)) {
        out.push(format!("S - A_{} + B_{i} + b_{i} is dependent in M1", i - 1));
    }
    if !swap_ok(m2, sel(0, 2 * ell + 1), None, b_of(ell + 1)) {
        out.push(format!("S + B_{} + b_{} is dependent in M2", ell + 1, ell + 1));
    }
    for k in i..=ell {
        if !swap_ok(m2, sel(2 * k, 2 * k - 1), Some(a_of(k)), b_of(k)) {
            out.push(format!("S - A_{k} + B_{k} - a_{k} + b_{k} is dependent in M2"));
        }
        if !swap_ok(m1, sel(2 * k, 2 * k + 1), Some(a_of(k)), b_of(k + 1)) {
            out.push(format!(
                "S - A_{k} + B_{} - a_{k} + b_{} is dependent in M1",
                k + 1,
                k + 1
            ));
        }
    }
    out
}

/// Upper bound used by audits for [`Refiner::refine_path`].
pub fn path_query_budget(n: usize, r: usize) -> f64 {
    PATH_QUERY_FACTOR as f64 * n as f64 * (1.0 + (r.max(1) as f64).log2())
}

/// Query budget of one exchange search over `m` candidates, re-exported for
/// callers that audit budgets themselves.
pub fn exchange_budget(m: usize) -> u64 {
    ceil_log2(m) + 2
}
