//! Solvers: the approximation algorithm, the exact hybrid, a Cunningham-style
//! reference and an exhaustive checker for tiny ground sets.

use serde::Serialize;

use crate::augset::{augment_by_set, init_state};
use crate::error::{MatroidError, SolverError};
use crate::exchange::{
    augment_path, compute_distance_layers, find_augmenting_path, query_with, AugmentingPath, CommonSet, DistanceLayers,
    OraclePair, PathSearch, StDistance,
};
use crate::oracle::{CountingOracle, IndependenceOracle};
use crate::refine::{PassRecord, PathRecord, RefineOutcome, Refiner};
use crate::set::ElementSet;

/// Largest ground set [`exhaustive_max_common`] accepts.
pub const EXHAUSTIVE_MAX_N: usize = 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Audit every refinement step with uncounted queries and record any
    /// violated invariant, size equality or query budget in the report.
    pub debug_invariants: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxParams {
    pub epsilon: f64,
    /// Imbalance at which refinement passes stop; derived from the current
    /// rank bound when `None`.
    pub p: Option<usize>,
    /// Phases run while the `(s,t)`-distance is at most `2·max_ell + 1`;
    /// [`max_ell_for`]`(epsilon)` when `None`.
    pub max_ell: Option<usize>,
    pub options: SolveOptions,
}

impl ApproxParams {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            p: None,
            max_ell: None,
            options: SolveOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ExactParams {
    /// Overrides the accuracy of the approximation stage (default `r̂^{-1/4}`).
    pub epsilon: Option<f64>,
    /// Overrides the distance threshold of the second stage (default `r̂^{3/4}`).
    pub threshold: Option<f64>,
    pub options: SolveOptions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Greedy,
    Approx,
    DistanceThreshold,
    LongPath,
    Cunningham,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseTrace {
    pub stage: Stage,
    pub st_distance: StDistance,
    pub size_before: usize,
    pub size_after: usize,
    /// Pass-stopping imbalance (approximation phases only).
    pub p: Option<usize>,
    pub passes: Vec<PassRecord>,
    pub paths: Vec<PathRecord>,
    pub augmentations: usize,
    pub queries: u64,
    pub violations: Vec<String>,
}

impl PhaseTrace {
    fn new(stage: Stage, st_distance: StDistance, size: usize) -> Self {
        Self {
            stage,
            st_distance,
            size_before: size,
            size_after: size,
            p: None,
            passes: Vec::new(),
            paths: Vec::new(),
            augmentations: 0,
            queries: 0,
            violations: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub solver: String,
    pub n: usize,
    /// Known optimum, filled in by callers that computed it independently.
    pub r: Option<usize>,
    pub epsilon: Option<f64>,
    /// Final upper bound on the optimum derived from `(s,t)`-distances.
    pub r_bound: Option<usize>,
    pub solution: ElementSet,
    pub size: usize,
    pub queries_m1: u64,
    pub queries_m2: u64,
    pub phases: Vec<PhaseTrace>,
    pub violations: Vec<String>,
}

impl RunReport {
    pub fn queries_total(&self) -> u64 {
        self.queries_m1 + self.queries_m2
    }

    /// Re-checks the solution against uncounted oracles.
    pub fn verify(&self, m1: &dyn IndependenceOracle, m2: &dyn IndependenceOracle) -> bool {
        let n = m1.ground_size();
        if self.solution.iter().any(|e| e >= n) {
            return false;
        }
        let set = ElementSet::from_ids(n, self.solution.iter());
        set.len() == self.size && m1.is_independent(&set) && m2.is_independent(&set)
    }
}

/// `⌈√(r̂ / log2 r̂)⌉`, at least 1.
pub fn default_p(r_bound: usize) -> usize {
    let r = r_bound.max(1) as f64;
    let lg = (r_bound.max(2) as f64).log2();
    ((r / lg).sqrt().ceil() as usize).max(1)
}

/// `⌈2/ε⌉`: phases run while the `(s,t)`-distance is at most `2·ℓ_max + 1`.
pub fn max_ell_for(epsilon: f64) -> usize {
    (2.0 / epsilon - 1e-9).ceil().max(1.0) as usize
}

/// Tighter rank bound after observing `(s,t)`-distance at least `d` from `S`:
/// at distance `2ℓ+2`, `r ≤ |S|·(ℓ+1)/ℓ`; unreachable `t` means `r = |S|`.
pub fn rank_bound_from_distance(size: usize, distance: StDistance) -> Option<usize> {
    match distance {
        StDistance::Infinite => Some(size),
        d => {
            let ell = (d.lower_bound() - 2) / 2;
            (ell >= 1).then(|| size * (ell + 1) / ell)
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<(), SolverError> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(SolverError::InvalidEpsilon(epsilon))
    }
}

struct Run<'p, 'a> {
    pair: &'p OraclePair<'a>,
    options: SolveOptions,
    phases: Vec<PhaseTrace>,
    violations: Vec<String>,
}

impl<'p, 'a> Run<'p, 'a> {
    fn new(pair: &'p OraclePair<'a>, options: SolveOptions) -> Self {
        Self {
            pair,
            options,
            phases: Vec::new(),
            violations: Vec::new(),
        }
    }

    fn push(&mut self, trace: PhaseTrace) {
        self.violations.extend(trace.violations.iter().cloned());
        self.phases.push(trace);
    }

    fn report(self, solver: &str, s: CommonSet, epsilon: Option<f64>, r_bound: Option<usize>) -> RunReport {
        RunReport {
            solver: solver.to_string(),
            n: self.pair.n(),
            r: None,
            epsilon,
            r_bound,
            size: s.size(),
            solution: s.into_members(),
            queries_m1: self.pair.m1.count(),
            queries_m2: self.pair.m2.count(),
            phases: self.phases,
            violations: self.violations,
        }
    }
}

/// One phase of the approximation algorithm on precomputed layers:
/// refinement passes until the imbalance `|B_1| - |B_{ℓ+1}|` is at most `p`,
/// path refinements until maximal, then augmentation by the whole set.
fn phase_on_layers(
    pair: &OraclePair<'_>,
    s: &CommonSet,
    layers: &DistanceLayers,
    p: usize,
    options: SolveOptions,
) -> Result<(CommonSet, PhaseTrace), SolverError> {
    let start = pair.queries();
    let mut trace = PhaseTrace::new(Stage::Approx, layers.st_distance(), s.size());
    trace.p = Some(p);
    let mut st = init_state(s, layers)?;
    let mut refiner = if options.debug_invariants {
        Refiner::audited(pair)
    } else {
        Refiner::new(pair)
    };
    loop {
        let rec = refiner.refine_pass(&mut st);
        let done = rec.imbalance() <= p;
        trace.passes.push(rec);
        if done {
            break;
        }
    }
    loop {
        let rec = refiner.refine_path(&mut st);
        let done = rec.outcome == RefineOutcome::MaximalReached;
        trace.paths.push(rec);
        if done {
            break;
        }
    }
    let next = augment_by_set(pair, &st)?;
    trace.violations = refiner.take_violations();
    if options.debug_invariants {
        let expect = s.size() + st.b_len(st.ell() + 1);
        if next.size() != expect {
            trace.violations.push(format!(
                "maximal selection grew S to {} instead of {expect}",
                next.size()
            ));
        }
    }
    trace.size_after = next.size();
    trace.augmentations = next.size() - s.size();
    trace.queries = pair.queries() - start;
    Ok((next, trace))
}

/// Runs a single approximation phase from `s`: computes the layers, refines
/// and augments. Fails if `s` is already maximum.
pub fn run_phase(
    pair: &OraclePair<'_>,
    s: &CommonSet,
    p: usize,
    options: SolveOptions,
) -> Result<(CommonSet, PhaseTrace), SolverError> {
    let start = pair.queries();
    let layers = compute_distance_layers(pair, s, None);
    let (next, mut trace) = phase_on_layers(pair, s, &layers, p, options)?;
    trace.queries = pair.queries() - start;
    Ok((next, trace))
}

/// Approximation phases from `s` until the distance exceeds `2·max_ell + 1`.
/// Returns the final set and the tightened rank bound.
fn approx_stage(
    run: &mut Run<'_, '_>,
    mut s: CommonSet,
    max_ell: usize,
    p_override: Option<usize>,
    mut r_bound: usize,
) -> Result<(CommonSet, usize), SolverError> {
    let pair = run.pair;
    let mut last = 0usize;
    loop {
        let start = pair.queries();
        let layers = compute_distance_layers(pair, &s, Some(max_ell));
        let distance = layers.st_distance();
        if distance.lower_bound() <= last {
            run.violations.push(format!(
                "(s,t)-distance did not increase after a phase: {last} then {distance:?}"
            ));
        }
        if let Some(b) = rank_bound_from_distance(s.size(), distance) {
            r_bound = r_bound.min(b);
        }
        let d = match distance {
            StDistance::Finite(d) if d <= 2 * max_ell + 1 => d,
            _ => break,
        };
        last = d;
        let p = p_override.unwrap_or_else(|| default_p(r_bound));
        let (next, mut trace) = phase_on_layers(pair, &s, &layers, p, run.options)?;
        trace.queries = pair.queries() - start;
        if d == 2 {
            r_bound = r_bound.min(2 * next.size());
        }
        run.push(trace);
        s = next;
    }
    let r_bound = r_bound.max(s.size());
    Ok((s, r_bound))
}

/// `(1 - ε)`-approximate maximum common independent set, starting from `∅`.
pub fn approx_intersect(
    m1: &dyn IndependenceOracle,
    m2: &dyn IndependenceOracle,
    params: &ApproxParams,
) -> Result<RunReport, SolverError> {
    check_epsilon(params.epsilon)?;
    let pair = OraclePair::new(m1, m2)?;
    let mut run = Run::new(&pair, params.options);
    let n = pair.n();
    let max_ell = params.max_ell.unwrap_or_else(|| max_ell_for(params.epsilon));
    let (s, r_bound) = approx_stage(&mut run, CommonSet::empty(n), max_ell, params.p, n)?;
    Ok(run.report("approx", s, Some(params.epsilon), Some(r_bound)))
}

/// Greedy maximal common independent set: one pass over ascending ids.
pub fn greedy_common(pair: &OraclePair<'_>) -> CommonSet {
    let mut set = ElementSet::new(pair.n());
    for e in 0..pair.n() {
        if query_with(&pair.m1, &mut set, e) && query_with(&pair.m2, &mut set, e) {
            set.insert(e);
        }
    }
    CommonSet::new_unchecked(set)
}

/// Finds augmenting paths once the exact solver's distance threshold is
/// passed. Implementations may be randomized; the default is deterministic.
pub trait LongPathFinder {
    fn name(&self) -> &str;

    /// Some augmenting path in `G(s)`, or `None` if the finder believes `s`
    /// is maximum.
    fn find_path(&mut self, pair: &OraclePair<'_>, s: &CommonSet) -> Option<AugmentingPath>;

    /// Whether `None` from [`find_path`](Self::find_path) proves optimality.
    /// When false the solver confirms with one more full BFS.
    fn certifies_optimality(&self) -> bool {
        false
    }
}

/// Shortest augmenting paths, reusing one set of layers for as long as
/// paths of that length remain.
#[derive(Debug, Default)]
pub struct LayeredPathFinder {
    search: Option<PathSearch>,
    expect_size: usize,
}

impl LongPathFinder for LayeredPathFinder {
    fn name(&self) -> &str {
        "layered-bfs"
    }

    fn find_path(&mut self, pair: &OraclePair<'_>, s: &CommonSet) -> Option<AugmentingPath> {
        if let Some(search) = self.search.as_mut() {
            if s.size() == self.expect_size {
                if let Some(path) = search.next_path(pair, s) {
                    self.expect_size = s.size() + 1;
                    return Some(path);
                }
            }
        }
        self.search = None;
        let layers = compute_distance_layers(pair, s, None);
        layers.ell()?;
        let mut search = PathSearch::new(layers);
        let path = search.next_path(pair, s);
        self.expect_size = s.size() + 1;
        self.search = Some(search);
        path
    }

    fn certifies_optimality(&self) -> bool {
        true
    }
}

/// Maximum common independent set via greedy start, approximation stage,
/// short-path phases up to the distance threshold, and a long-path stage.
pub fn exact_intersect(
    m1: &dyn IndependenceOracle,
    m2: &dyn IndependenceOracle,
    params: &ExactParams,
) -> Result<RunReport, SolverError> {
    exact_intersect_with(m1, m2, params, &mut LayeredPathFinder::default())
}

pub fn exact_intersect_with(
    m1: &dyn IndependenceOracle,
    m2: &dyn IndependenceOracle,
    params: &ExactParams,
    finder: &mut dyn LongPathFinder,
) -> Result<RunReport, SolverError> {
    if let Some(eps) = params.epsilon {
        check_epsilon(eps)?;
    }
    let pair = OraclePair::new(m1, m2)?;
    let mut run = Run::new(&pair, params.options);

    let start = pair.queries();
    let mut s = greedy_common(&pair);
    // An empty greedy result means no singleton is common independent.
    let greedy_distance = if s.size() == 0 {
        StDistance::Infinite
    } else {
        StDistance::Finite(2)
    };
    let mut trace = PhaseTrace::new(Stage::Greedy, greedy_distance, 0);
    trace.size_after = s.size();
    trace.augmentations = s.size();
    trace.queries = pair.queries() - start;
    run.push(trace);
    if s.size() == 0 {
        return Ok(run.report("exact", s, None, Some(0)));
    }

    let mut r_bound = 2 * s.size();
    let epsilon = params.epsilon.unwrap_or_else(|| (r_bound as f64).powf(-0.25)).min(1.0);
    let (next, bound) = approx_stage(&mut run, s, max_ell_for(epsilon), None, r_bound)?;
    s = next;
    r_bound = bound;
    let threshold = params.threshold.unwrap_or_else(|| (r_bound as f64).powf(0.75));

    // Short-path phases: all shortest paths of one length per phase.
    if threshold >= 2.0 {
        let max_ell = ((threshold - 2.0) / 2.0).floor() as usize;
        let mut last = 0usize;
        loop {
            let start = pair.queries();
            let layers = compute_distance_layers(&pair, &s, Some(max_ell));
            let distance = layers.st_distance();
            if let Some(b) = rank_bound_from_distance(s.size(), distance) {
                r_bound = r_bound.min(b);
            }
            let d = match distance {
                StDistance::Finite(d) if d as f64 <= threshold => d,
                _ => break,
            };
            if d <= last {
                run.violations.push(format!("short-path stage distance repeated: {d}"));
            }
            last = d;
            let mut trace = PhaseTrace::new(Stage::DistanceThreshold, distance, s.size());
            let mut search = PathSearch::new(layers);
            while let Some(path) = search.next_path(&pair, &s) {
                s = augment_path(&pair, &s, &path)?;
                trace.augmentations += 1;
            }
            trace.size_after = s.size();
            trace.queries = pair.queries() - start;
            run.push(trace);
        }
    }

    // Long paths, one augmentation at a time.
    loop {
        let start = pair.queries();
        let found = finder.find_path(&pair, &s);
        match found {
            Some(path) => {
                let mut trace = PhaseTrace::new(Stage::LongPath, StDistance::Finite(path.length()), s.size());
                s = augment_path(&pair, &s, &path)?;
                trace.augmentations = 1;
                trace.size_after = s.size();
                trace.queries = pair.queries() - start;
                run.push(trace);
            }
            None => {
                let distance = if finder.certifies_optimality() {
                    StDistance::Infinite
                } else {
                    compute_distance_layers(&pair, &s, None).st_distance()
                };
                let mut trace = PhaseTrace::new(Stage::LongPath, distance, s.size());
                trace.queries = pair.queries() - start;
                run.push(trace);
                if distance == StDistance::Infinite {
                    break;
                }
                // The finder gave up early; fall back to shortest paths.
                return finish_with_default(run, s, epsilon);
            }
        }
    }
    let size = s.size();
    Ok(run.report("exact", s, Some(epsilon), Some(size)))
}

fn finish_with_default(mut run: Run<'_, '_>, mut s: CommonSet, epsilon: f64) -> Result<RunReport, SolverError> {
    let pair = run.pair;
    let mut finder = LayeredPathFinder::default();
    loop {
        let start = pair.queries();
        let found = finder.find_path(pair, &s);
        let distance = found
            .as_ref()
            .map_or(StDistance::Infinite, |p| StDistance::Finite(p.length()));
        let mut trace = PhaseTrace::new(Stage::LongPath, distance, s.size());
        if let Some(path) = &found {
            s = augment_path(pair, &s, path)?;
            trace.augmentations = 1;
            trace.size_after = s.size();
        }
        trace.queries = pair.queries() - start;
        run.push(trace);
        if found.is_none() {
            break;
        }
    }
    let size = s.size();
    Ok(run.report("exact", s, Some(epsilon), Some(size)))
}

/// Phases of shortest augmenting paths from `∅` until `t` is unreachable,
/// each augmentation found by a fresh search over the phase's layers.
pub fn cunningham_reference(
    m1: &dyn IndependenceOracle,
    m2: &dyn IndependenceOracle,
) -> Result<RunReport, SolverError> {
    shortest_path_phases(m1, m2, false)
}

/// Like [`cunningham_reference`], but one search per phase keeps its dead
/// marks across augmentations, so each phase is a single blocking sweep.
pub fn blocking_flow_reference(
    m1: &dyn IndependenceOracle,
    m2: &dyn IndependenceOracle,
) -> Result<RunReport, SolverError> {
    shortest_path_phases(m1, m2, true)
}

fn shortest_path_phases(
    m1: &dyn IndependenceOracle,
    m2: &dyn IndependenceOracle,
    keep_dead: bool,
) -> Result<RunReport, SolverError> {
    let pair = OraclePair::new(m1, m2)?;
    let mut run = Run::new(&pair, SolveOptions::default());
    let mut s = CommonSet::empty(pair.n());
    let mut last = 0usize;
    loop {
        let start = pair.queries();
        let layers = compute_distance_layers(&pair, &s, None);
        let distance = layers.st_distance();
        let Some(d) = distance.finite() else {
            break;
        };
        if d <= last {
            run.violations
                .push(format!("distance did not increase: {last} then {d}"));
        }
        last = d;
        let mut trace = PhaseTrace::new(Stage::Cunningham, distance, s.size());
        let mut search = PathSearch::new(layers);
        loop {
            let found = if keep_dead {
                search.next_path(&pair, &s)
            } else {
                find_augmenting_path(&pair, &s, search.layers())
            };
            let Some(path) = found else {
                break;
            };
            s = augment_path(&pair, &s, &path)?;
            trace.augmentations += 1;
        }
        trace.size_after = s.size();
        trace.queries = pair.queries() - start;
        run.push(trace);
    }
    let size = s.size();
    let name = if keep_dead { "blocking-flow" } else { "cunningham" };
    Ok(run.report(name, s, None, Some(size)))
}

/// Maximum common independent set by enumerating subsets in order of their
/// bitmask, pruning any set with a non-common subset. `n ≤ 20`.
pub fn exhaustive_max_common(
    m1: &dyn IndependenceOracle,
    m2: &dyn IndependenceOracle,
) -> Result<(usize, ElementSet), SolverError> {
    let n = m1.ground_size();
    if n != m2.ground_size() {
        return Err(SolverError::GroundSizeMismatch(n, m2.ground_size()));
    }
    if n > EXHAUSTIVE_MAX_N {
        return Err(MatroidError::BudgetExceeded {
            n,
            max: EXHAUSTIVE_MAX_N,
        }
        .into());
    }
    let total = 1usize << n;
    let mut common = vec![false; total];
    common[0] = true;
    let mut best = 0usize;
    let mut scratch = ElementSet::new(n);
    for mask in 1..total {
        let mut rest = mask;
        let mut closed = true;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            if !common[mask ^ bit] {
                closed = false;
                break;
            }
            rest ^= bit;
        }
        if !closed {
            continue;
        }
        scratch.clear();
        let mut rest = mask;
        while rest != 0 {
            scratch.insert(rest.trailing_zeros() as usize);
            rest &= rest - 1;
        }
        if m1.is_independent(&scratch) && m2.is_independent(&scratch) {
            common[mask] = true;
            if mask.count_ones() > best.count_ones() {
                best = mask;
            }
        }
    }
    let set = ElementSet::from_ids(n, (0..n).filter(|i| best >> i & 1 == 1));
    Ok((set.len(), set))
}

/// [`exhaustive_max_common`] wrapped in a report with counted queries.
pub fn exhaustive_report(m1: &dyn IndependenceOracle, m2: &dyn IndependenceOracle) -> Result<RunReport, SolverError> {
    let (c1, c2) = (CountingOracle::new(m1), CountingOracle::new(m2));
    let (size, set) = exhaustive_max_common(&c1, &c2)?;
    Ok(RunReport {
        solver: "exhaustive".into(),
        n: m1.ground_size(),
        r: Some(size),
        epsilon: None,
        r_bound: Some(size),
        solution: set,
        size,
        queries_m1: c1.count(),
        queries_m2: c2.count(),
        phases: Vec::new(),
        violations: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{PartitionMatroid, UniformMatroid};

    fn p4() -> (PartitionMatroid, PartitionMatroid) {
        (
            PartitionMatroid::new(vec![0, 1, 1], vec![1, 1]).unwrap(),
            PartitionMatroid::new(vec![0, 0, 1], vec![1, 1]).unwrap(),
        )
    }

    #[test]
    fn p4_all_solvers_reach_two() {
        let (m1, m2) = p4();
        assert_eq!(exhaustive_max_common(&m1, &m2).unwrap().0, 2);
        assert_eq!(cunningham_reference(&m1, &m2).unwrap().size, 2);
        assert_eq!(exact_intersect(&m1, &m2, &ExactParams::default()).unwrap().size, 2);
        let rep = approx_intersect(&m1, &m2, &ApproxParams::new(0.5)).unwrap();
        assert!(rep.size >= 1);
        assert!(rep.verify(&m1, &m2));
    }

    #[test]
    fn uniform_pair_optimum_is_min_rank() {
        let a = UniformMatroid::new(8, 3);
        let b = UniformMatroid::new(8, 5);
        assert_eq!(exact_intersect(&a, &b, &ExactParams::default()).unwrap().size, 3);
        assert_eq!(exhaustive_max_common(&a, &b).unwrap().0, 3);
    }

    #[test]
    fn rank_zero_is_empty() {
        let a = UniformMatroid::new(5, 0);
        let b = UniformMatroid::new(5, 5);
        let rep = exact_intersect(&a, &b, &ExactParams::default()).unwrap();
        assert_eq!(rep.size, 0);
        assert_eq!(approx_intersect(&a, &b, &ApproxParams::new(0.5)).unwrap().size, 0);
    }

    #[test]
    fn bad_epsilon_rejected() {
        let a = UniformMatroid::new(5, 2);
        for eps in [0.0, -1.0, 1.5, f64::NAN] {
            assert!(matches!(
                approx_intersect(&a, &a, &ApproxParams::new(eps)),
                Err(SolverError::InvalidEpsilon(_))
            ));
        }
    }

    #[test]
    fn mismatched_ground_sets_rejected() {
        let a = UniformMatroid::new(5, 2);
        let b = UniformMatroid::new(6, 2);
        assert!(matches!(
            cunningham_reference(&a, &b),
            Err(SolverError::GroundSizeMismatch(5, 6))
        ));
    }

    #[test]
    fn exhaustive_refuses_large_ground_sets() {
        let a = UniformMatroid::new(21, 2);
        assert!(matches!(
            exhaustive_max_common(&a, &a),
            Err(SolverError::Matroid(MatroidError::BudgetExceeded { .. }))
        ));
    }

    #[test]
    fn helpers() {
        assert_eq!(max_ell_for(1.0), 2);
        assert_eq!(max_ell_for(0.5), 4);
        assert_eq!(max_ell_for(0.25), 8);
        assert_eq!(max_ell_for(0.1), 20);
        assert_eq!(default_p(1), 1);
        assert_eq!(default_p(16), 2);
        assert_eq!(rank_bound_from_distance(5, StDistance::Finite(2)), None);
        assert_eq!(rank_bound_from_distance(6, StDistance::Finite(4)), Some(12));
        assert_eq!(rank_bound_from_distance(6, StDistance::AtLeast(8)), Some(8));
        assert_eq!(rank_bound_from_distance(6, StDistance::Infinite), Some(6));
    }
}
