//! Partial augmenting sets over the distance layers of one phase.
//!
//! Every element of `D_1 .. D_{2ℓ+1}` carries a status. Selected elements of
//! `D_{2k-1}` form `B_k`, selected elements of `D_{2k}` form `A_k`. `D_0` and
//! `D_{2ℓ+2}` are empty, so `A_0 = A_{ℓ+1} = ∅`. Statuses only move forward:
//! fresh to selected, fresh to removed, selected to removed.

use serde::Serialize;

use crate::error::SolverError;
use crate::exchange::{CommonSet, DistanceLayers, OraclePair};
use crate::oracle::{greedy_rank, IndependenceOracle};
use crate::set::{ElementId, ElementSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ElementStatus {
    Fresh,
    Selected,
    Removed,
}

impl ElementStatus {
    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Debug)]
pub struct LayeredState {
    ell: usize,
    base: ElementSet,
    layers: Vec<Vec<ElementId>>,
    layer_of: Vec<u32>,
    status: Vec<ElementStatus>,
    // counts[j][status], j in 0..=2ℓ+2
    counts: Vec<[usize; 3]>,
    even_changes: u64,
}

/// Starts a phase: every layered element fresh, all `A_k`, `B_k` empty.
pub fn init_state(s: &CommonSet, layers: &DistanceLayers) -> Result<LayeredState, SolverError> {
    let ell = layers.ell().ok_or_else(|| {
        SolverError::Contract(format!(
            "layered state needs a finite (s,t)-distance, got {:?}",
            layers.st_distance()
        ))
    })?;
    let n = layers.ground_size();
    if s.members().capacity() != n {
        return Err(SolverError::Contract(
            "layers and set have different ground sizes".into(),
        ));
    }
    let mut st = LayeredState {
        ell,
        base: s.members().clone(),
        layers: Vec::with_capacity(2 * ell + 1),
        layer_of: vec![0; n],
        status: vec![ElementStatus::Fresh; n],
        counts: vec![[0; 3]; 2 * ell + 3],
        even_changes: 0,
    };
    for j in 1..=2 * ell + 1 {
        let layer = layers.layer(j).to_vec();
        for &e in &layer {
            if s.contains(e) != (j % 2 == 0) {
                return Err(SolverError::Contract(format!(
                    "element {e} is on the wrong side of S for layer {j}"
                )));
            }
            st.layer_of[e] = j as u32;
        }
        st.counts[j][ElementStatus::Fresh.index()] = layer.len();
        st.layers.push(layer);
    }
    Ok(st)
}

impl LayeredState {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.status.len()
    }

    /// The common independent set `S` this phase started from.
    pub fn base(&self) -> &ElementSet {
        &self.base
    }

    pub fn layer(&self, j: usize) -> &[ElementId] {
        if j == 0 {
            &[]
        } else {
            self.layers.get(j - 1).map_or(&[], Vec::as_slice)
        }
    }

    pub fn layer_of(&self, e: ElementId) -> Option<usize> {
        match self.layer_of[e] {
            0 => None,
            j => Some(j as usize),
        }
    }

    pub fn status(&self, e: ElementId) -> ElementStatus {
        self.status[e]
    }

    pub fn count(&self, j: usize, status: ElementStatus) -> usize {
        self.counts.get(j).map_or(0, |c| c[status.index()])
    }

    /// `|B_k|`.
    pub fn b_len(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            self.count(2 * k - 1, ElementStatus::Selected)
        }
    }

    /// `|A_k|`.
    pub fn a_len(&self, k: usize) -> usize {
        self.count(2 * k, ElementStatus::Selected)
    }

    /// Members of `D_j` with the given status, ascending.
    pub fn members(&self, j: usize, status: ElementStatus) -> Vec<ElementId> {
        self.layer(j)
            .iter()
            .copied()
            .filter(|&e| self.status[e] == status)
            .collect()
    }

    pub(crate) fn for_each(&self, j: usize, status: ElementStatus, mut f: impl FnMut(ElementId)) {
        for &e in self.layer(j) {
            if self.status[e] == status {
                f(e);
            }
        }
    }

    /// Number of status changes on even layers so far.
    pub fn even_changes(&self) -> u64 {
        self.even_changes
    }

    fn set_status(&mut self, e: ElementId, to: ElementStatus) {
        let from = self.status[e];
        let legal = matches!(
            (from, to),
            (ElementStatus::Fresh, ElementStatus::Selected)
                | (ElementStatus::Fresh, ElementStatus::Removed)
                | (ElementStatus::Selected, ElementStatus::Removed)
        );
        assert!(legal, "illegal status change {from:?} -> {to:?} for element {e}");
        let j = self.layer_of[e] as usize;
        assert!(j > 0, "element {e} is not layered");
        self.counts[j][from.index()] -= 1;
        self.counts[j][to.index()] += 1;
        self.status[e] = to;
        if j.is_multiple_of(2) {
            self.even_changes += 1;
        }
    }

    /// Marks `e` selected. Panics unless `e` is layered and fresh.
    pub fn select(&mut self, e: ElementId) {
        self.set_status(e, ElementStatus::Selected);
    }

    /// Marks `e` removed. Panics if `e` is unlayered or already removed.
    pub fn remove(&mut self, e: ElementId) {
        self.set_status(e, ElementStatus::Removed);
    }

    /// `set += {e ∈ D_j : status(e) = status}`.
    pub(crate) fn add_to(&self, set: &mut ElementSet, j: usize, status: ElementStatus) {
        self.for_each(j, status, |e| {
            set.insert(e);
        });
    }

    /// `set -= {e ∈ D_j : status(e) = status}`.
    pub(crate) fn take_from(&self, set: &mut ElementSet, j: usize, status: ElementStatus) {
        self.for_each(j, status, |e| {
            set.remove(e);
        });
    }

    /// `[|B_1|, |A_1|, |B_2|, …, |A_ℓ|, |B_{ℓ+1}|]`.
    pub fn widths(&self) -> Vec<usize> {
        (1..=2 * self.ell + 1)
            .map(|j| self.count(j, ElementStatus::Selected))
            .collect()
    }

    /// All widths equal. Together with a maximal `B_1` (certified by path
    /// refinement) this makes the selection a maximal augmenting set.
    pub fn is_maximal_candidate(&self) -> bool {
        let w = self.widths();
        w.windows(2).all(|p| p[0] == p[1])
    }

    /// `(S - A) + B` for the current selection.
    pub fn augmented_members(&self) -> ElementSet {
        let mut out = self.base.clone();
        for j in 1..=2 * self.ell + 1 {
            if j % 2 == 0 {
                self.take_from(&mut out, j, ElementStatus::Selected);
            } else {
                self.add_to(&mut out, j, ElementStatus::Selected);
            }
        }
        out
    }
}

/// Applies the selection: returns `(S - A) + B`, verified common independent
/// with one query per matroid.
pub fn augment_by_set(pair: &OraclePair<'_>, state: &LayeredState) -> Result<CommonSet, SolverError> {
    CommonSet::new(pair, state.augmented_members())
}

/// Whether the state is a partial augmenting set that also satisfies both
/// removal invariants. Uses uncounted greedy ranks; intended for tests and
/// debug auditing.
pub fn check_invariants(state: &LayeredState, m1: &dyn IndependenceOracle, m2: &dyn IndependenceOracle) -> bool {
    invariant_violations(state, m1, m2).is_empty()
}

/// Human-readable description of every violated condition.
pub fn invariant_violations(
    state: &LayeredState,
    m1: &dyn IndependenceOracle,
    m2: &dyn IndependenceOracle,
) -> Vec<String> {
    use ElementStatus::*;
    let ell = state.ell;
    let s = &state.base;
    let s_len = s.len();
    let mut out = Vec::new();

    let widths = state.widths();
    for (j, w) in widths.windows(2).enumerate() {
        if w[1] > w[0] {
            out.push(format!(
                "selection widths increase between layers {} and {}: {:?}",
                j + 1,
                j + 2,
                widths
            ));
            break;
        }
    }

    let with = |f: &dyn Fn(&mut ElementSet)| {
        let mut x = s.clone();
        f(&mut x);
        x
    };

    // S + B_1 ∈ I1, S + B_{ℓ+1} ∈ I2
    let x = with(&|x| state.add_to(x, 1, Selected));
    if !m1.is_independent(&x) {
        out.push("S + B_1 is dependent in M1".into());
    }
    let x = with(&|x| state.add_to(x, 2 * ell + 1, Selected));
    if !m2.is_independent(&x) {
        out.push(format!("S + B_{} is dependent in M2", ell + 1));
    }
    for k in 1..=ell {
        // S - A_k + B_{k+1} ∈ I1
        let x = with(&|x| {
            state.take_from(x, 2 * k, Selected);
            state.add_to(x, 2 * k + 1, Selected);
        });
        if !m1.is_independent(&x) {
            out.push(format!("S - A_{k} + B_{} is dependent in M1", k + 1));
        }
        // rk2(S - A_k + B_k) = |S|
        let x = with(&|x| {
            state.take_from(x, 2 * k, Selected);
            state.add_to(x, 2 * k - 1, Selected);
        });
        let r = greedy_rank(m2, &x);
        if r != s_len {
            out.push(format!("rank2(S - A_{k} + B_{k}) = {r}, expected {s_len}"));
        }
        // Removed elements of D_{2k} are spanned out of W = S - A_k + (D_{2k+1} - R_{2k+1}):
        // rk1(W - R_{2k}) = rk1(W) - |R_{2k}|.
        let w = with(&|x| {
            state.take_from(x, 2 * k, Selected);
            state.add_to(x, 2 * k + 1, Fresh);
            state.add_to(x, 2 * k + 1, Selected);
        });
        let mut w_minus = w.clone();
        state.take_from(&mut w_minus, 2 * k, Removed);
        let removed = state.count(2 * k, Removed);
        let (rw, rwm) = (greedy_rank(m1, &w), greedy_rank(m1, &w_minus));
        if rwm + removed != rw {
            out.push(format!(
                "removed elements of layer {} are not all needed for rank1: {rwm} + {removed} != {rw}",
                2 * k
            ));
        }
    }
    for k in 1..=ell + 1 {
        // W = S - (D_{2k} - R_{2k}) + B_k; rk2(W + R_{2k-1}) = rk2(W).
        let w = with(&|x| {
            state.take_from(x, 2 * k, Fresh);
            state.take_from(x, 2 * k, Selected);
            state.add_to(x, 2 * k - 1, Selected);
        });
        let mut w_plus = w.clone();
        state.add_to(&mut w_plus, 2 * k - 1, Removed);
        let (rw, rwp) = (greedy_rank(m2, &w), greedy_rank(m2, &w_plus));
        if rw != rwp {
            out.push(format!(
                "removed elements of layer {} raise rank2: {rwp} != {rw}",
                2 * k - 1
            ));
        }
    }
    out
}
