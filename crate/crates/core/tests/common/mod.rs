//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use matroid_intersect::instance::{small_instance, Family, InstanceSpec, MatroidSpec};
use matroid_intersect::{ElementSet, IndependenceOracle};

/// Exchange-graph adjacency straight from the definition, one query per
/// candidate arc. Index `n` is `t`.
pub fn brute_arcs(
    m1: &dyn IndependenceOracle,
    m2: &dyn IndependenceOracle,
    s: &ElementSet,
) -> (Vec<usize>, Vec<Vec<usize>>) {
    let n = m1.ground_size();
    let with = |add: Option<usize>, drop: Option<usize>| {
        let mut x = s.clone();
        if let Some(d) = drop {
            x.remove(d);
        }
        if let Some(a) = add {
            x.insert(a);
        }
        x
    };
    let sources = (0..n)
        .filter(|&b| !s.contains(b) && m1.is_independent(&with(Some(b), None)))
        .collect();
    let mut adj = vec![Vec::new(); n];
    for u in 0..n {
        if s.contains(u) {
            for b in (0..n).filter(|&b| !s.contains(b)) {
                if m1.is_independent(&with(Some(b), Some(u))) {
                    adj[u].push(b);
                }
            }
        } else {
            if m2.is_independent(&with(Some(u), None)) {
                adj[u].push(n);
            }
            for a in s.iter() {
                if m2.is_independent(&with(Some(u), Some(a))) {
                    adj[u].push(a);
                }
            }
        }
    }
    (sources, adj)
}

/// BFS layers by distance from `s` (layer j holds elements at distance j) and
/// the `(s,t)`-distance. Layers stop before `t`'s distance.
pub fn brute_layers(
    m1: &dyn IndependenceOracle,
    m2: &dyn IndependenceOracle,
    s: &ElementSet,
) -> (Vec<Vec<usize>>, Option<usize>) {
    let n = m1.ground_size();
    let (sources, adj) = brute_arcs(m1, m2, s);
    let mut dist = vec![usize::MAX; n + 1];
    let mut queue = VecDeque::new();
    for b in sources {
        dist[b] = 1;
        queue.push_back(b);
    }
    while let Some(u) = queue.pop_front() {
        if u == n {
            continue;
        }
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let st = (dist[n] != usize::MAX).then_some(dist[n]);
    let limit = st.map_or(usize::MAX, |d| d - 1);
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for (e, &d) in dist[..n].iter().enumerate() {
        if d != usize::MAX && d <= limit {
            if layers.len() < d {
                layers.resize(d, Vec::new());
            }
            layers[d - 1].push(e);
        }
    }
    (layers, st)
}

/// Maximum bipartite matching by repeated augmenting-path search (Kuhn).
pub fn max_bipartite_matching(left: usize, right: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); left];
    for &(l, r) in edges {
        adj[l].push(r);
    }
    let mut match_r = vec![usize::MAX; right];
    fn try_kuhn(u: usize, adj: &[Vec<usize>], seen: &mut [bool], match_r: &mut [usize]) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if match_r[v] == usize::MAX || try_kuhn(match_r[v], adj, seen, match_r) {
                    match_r[v] = u;
                    return true;
                }
            }
        }
        false
    }
    (0..left)
        .filter(|&u| try_kuhn(u, &adj, &mut vec![false; right], &mut match_r))
        .count()
}

/// The edge list of a two-partition encoding with unit caps.
pub fn bipartite_edges(spec: &InstanceSpec) -> Option<(usize, usize, Vec<(usize, usize)>)> {
    match (&spec.matroid1, &spec.matroid2) {
        (MatroidSpec::Partition { class_of: l, caps: lc }, MatroidSpec::Partition { class_of: r, caps: rc })
            if lc.iter().chain(rc).all(|&c| c == 1) =>
        {
            Some((lc.len(), rc.len(), l.iter().copied().zip(r.iter().copied()).collect()))
        }
        _ => None,
    }
}

/// Seeded small instances across families.
pub fn corpus(families: &[Family], per_family: u64, max_n: usize, base_seed: u64) -> Vec<InstanceSpec> {
    families
        .iter()
        .flat_map(|&f| (0..per_family).map(move |i| small_instance(f, max_n, base_seed + i)))
        .collect()
}

pub const MIXED: [Family; 5] = [
    Family::BipartiteMatching,
    Family::PartitionPair,
    Family::GraphicVsPartition,
    Family::Gf2Pair,
    Family::UniformPair,
];

/// Some common independent set of the instance, chosen by a seeded random
/// greedy order, so tests can start phases from nonempty sets.
pub fn random_common_set(m1: &dyn IndependenceOracle, m2: &dyn IndependenceOracle, seed: u64, keep: f64) -> ElementSet {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let n = m1.ground_size();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut s = ElementSet::new(n);
    for e in order {
        if !rng.random_bool(keep) {
            continue;
        }
        s.insert(e);
        if !(m1.is_independent(&s) && m2.is_independent(&s)) {
            s.remove(e);
        }
    }
    s
}

/// Bipartite matching on disjoint paths, path `i` having `2·half[i] + 1`
/// edges. Inner edges get the lowest ids, so a greedy scan matches them and
/// leaves exactly one augmenting path through each whole component, at
/// distance `2·half[i] + 2`.
pub fn alternating_paths(half: &[usize]) -> InstanceSpec {
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    let (mut lbase, mut rbase) = (0, 0);
    for &m in half {
        for i in 0..m {
            inner.push((lbase + i + 1, rbase + i));
        }
        for i in 0..=m {
            outer.push((lbase + i, rbase + i));
        }
        lbase += m + 1;
        rbase += m + 1;
    }
    let edges: Vec<(usize, usize)> = inner.into_iter().chain(outer).collect();
    InstanceSpec {
        name: format!("alternating-paths-{}", half.len()),
        matroid1: MatroidSpec::Partition {
            class_of: edges.iter().map(|e| e.0).collect(),
            caps: vec![1; lbase],
        },
        matroid2: MatroidSpec::Partition {
            class_of: edges.iter().map(|e| e.1).collect(),
            caps: vec![1; rbase],
        },
    }
}
