mod common;

use common::{bipartite_edges, corpus, max_bipartite_matching, MIXED};
use matroid_intersect::instance::{generate_instance, Family, Generator};
use matroid_intersect::solvers::{
    approx_intersect, cunningham_reference, exact_intersect, exact_intersect_with, exhaustive_max_common, max_ell_for,
    ApproxParams, ExactParams, LayeredPathFinder, LongPathFinder, SolveOptions, Stage,
};
use matroid_intersect::{
    compute_distance_layers, rank, AugmentingPath, CommonSet, ElementSet, OraclePair, StDistance, UniformMatroid,
};

#[test]
fn exact_solvers_agree_with_enumeration() {
    for spec in corpus(&MIXED, 40, 12, 1) {
        let (m1, m2) = spec.oracles().unwrap();
        let (r, _) = exhaustive_max_common(&*m1, &*m2).unwrap();
        let exact = exact_intersect(&*m1, &*m2, &ExactParams::default()).unwrap();
        let cun = cunningham_reference(&*m1, &*m2).unwrap();
        assert_eq!(exact.size, r, "{}", spec.name);
        assert_eq!(cun.size, r, "{}", spec.name);
        assert!(exact.verify(&*m1, &*m2) && cun.verify(&*m1, &*m2));
        assert!(exact.violations.is_empty() && cun.violations.is_empty());
        // certificate: no augmenting path remains
        let pair = OraclePair::new(&*m1, &*m2).unwrap();
        let s = CommonSet::new(&pair, exact.solution.clone()).unwrap();
        assert_eq!(
            compute_distance_layers(&pair, &s, None).st_distance(),
            StDistance::Infinite
        );
        assert_eq!(exact.phases.last().unwrap().st_distance, StDistance::Infinite);
    }
}

#[test]
fn bipartite_matching_matches_kuhn() {
    for seed in 0..60 {
        let g = Generator::BipartiteMatching {
            left: 6,
            right: 6,
            edges: 6 + (seed as usize % 20),
            planted: false,
        };
        let spec = generate_instance(&g, seed);
        let (l, r, edges) = bipartite_edges(&spec).unwrap();
        let expect = max_bipartite_matching(l, r, &edges);
        let (m1, m2) = spec.oracles().unwrap();
        assert_eq!(
            exact_intersect(&*m1, &*m2, &ExactParams::default()).unwrap().size,
            expect
        );
    }
}

#[test]
fn approximation_guarantee_and_phase_structure() {
    for spec in corpus(&MIXED, 30, 14, 77) {
        let (m1, m2) = spec.oracles().unwrap();
        let (r, _) = exhaustive_max_common(&*m1, &*m2).unwrap();
        for eps in [1.0, 0.5, 0.25, 0.1] {
            let params = ApproxParams {
                options: SolveOptions { debug_invariants: true },
                ..ApproxParams::new(eps)
            };
            let rep = approx_intersect(&*m1, &*m2, &params).unwrap();
            assert!(rep.verify(&*m1, &*m2));
            let need = ((1.0 - eps) * r as f64 - 1e-9).ceil() as usize;
            assert!(rep.size >= need, "{} eps {eps}: {} < {need}", spec.name, rep.size);
            if eps == 1.0 {
                assert!(2 * rep.size >= r, "{}: maximal set below r/2", spec.name);
            }
            assert!(
                rep.phases.len() <= max_ell_for(eps) + 1,
                "{}: {} phases",
                spec.name,
                rep.phases.len()
            );
            let dists: Vec<usize> = rep.phases.iter().map(|p| p.st_distance.lower_bound()).collect();
            assert!(dists.windows(2).all(|w| w[0] < w[1]), "{}: {dists:?}", spec.name);
            assert!(rep.violations.is_empty(), "{}: {:?}", spec.name, rep.violations);
            assert!(
                rep.r_bound.unwrap() >= r,
                "{}: bound {:?} below r = {r}",
                spec.name,
                rep.r_bound
            );
            for phase in &rep.phases {
                let p = phase.p.unwrap();
                let extensions = phase
                    .paths
                    .iter()
                    .filter(|x| x.outcome == matroid_intersect::refine::RefineOutcome::ExtendedByPath)
                    .count();
                assert!(
                    extensions <= p,
                    "{}: {extensions} path extensions with p = {p}",
                    spec.name
                );
                let pass_bound = r.div_ceil(p) + 1;
                assert!(
                    phase.passes.len() <= pass_bound,
                    "{}: {} passes",
                    spec.name,
                    phase.passes.len()
                );
            }
        }
    }
}

#[test]
fn forced_parameters_exercise_every_exact_stage() {
    let mut seen = [false; 3];
    for seed in 0..40 {
        let g = Generator::BipartiteMatching {
            left: 7,
            right: 7,
            edges: 14,
            planted: true,
        };
        let spec = generate_instance(&g, seed);
        let (m1, m2) = spec.oracles().unwrap();
        let params = ExactParams {
            epsilon: Some(1.0),
            threshold: Some(6.0),
            options: SolveOptions { debug_invariants: true },
        };
        let rep = exact_intersect(&*m1, &*m2, &params).unwrap();
        assert_eq!(rep.size, 7);
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        for ph in &rep.phases {
            match ph.stage {
                Stage::Approx => seen[0] = true,
                Stage::DistanceThreshold => seen[1] = true,
                Stage::LongPath if ph.augmentations > 0 => seen[2] = true,
                _ => {}
            }
        }
    }
    assert_eq!(seen, [true; 3]);
}

/// A finder that gives up immediately; the solver must still finish exactly.
struct Lazy;

impl LongPathFinder for Lazy {
    fn name(&self) -> &str {
        "lazy"
    }

    fn find_path(&mut self, _: &OraclePair<'_>, _: &CommonSet) -> Option<AugmentingPath> {
        None
    }
}

#[test]
fn pluggable_finder_cannot_break_optimality() {
    for spec in corpus(&[Family::BipartiteMatching, Family::Gf2Pair], 20, 12, 3) {
        let (m1, m2) = spec.oracles().unwrap();
        let (r, _) = exhaustive_max_common(&*m1, &*m2).unwrap();
        let params = ExactParams {
            epsilon: Some(1.0),
            threshold: Some(0.0),
            ..ExactParams::default()
        };
        assert_eq!(exact_intersect_with(&*m1, &*m2, &params, &mut Lazy).unwrap().size, r);
        let mut finder = LayeredPathFinder::default();
        assert_eq!(exact_intersect_with(&*m1, &*m2, &params, &mut finder).unwrap().size, r);
    }
}

#[test]
fn equal_matroids_give_full_rank() {
    for spec in corpus(&MIXED, 10, 12, 500) {
        let (m1, _) = spec.oracles().unwrap();
        let full = rank(&*m1, &ElementSet::full(m1.ground_size())).unwrap();
        assert_eq!(exhaustive_max_common(&*m1, &*m1).unwrap().0, full);
        assert_eq!(exact_intersect(&*m1, &*m1, &ExactParams::default()).unwrap().size, full);
    }
}

#[test]
fn uniform_pairs_are_min_of_ranks() {
    let a = UniformMatroid::new(5, 2);
    let b = UniformMatroid::new(5, 3);
    assert_eq!(exhaustive_max_common(&a, &b).unwrap().0, 2);
    let g = Generator::UniformPair { n: 10, k1: 4, k2: 6 };
    let spec = generate_instance(&g, 0);
    let (m1, m2) = spec.oracles().unwrap();
    assert_eq!(cunningham_reference(&*m1, &*m2).unwrap().size, 4);
}

#[test]
fn reported_queries_are_counted_queries() {
    use matroid_intersect::CountingOracle;
    for spec in corpus(&MIXED, 5, 12, 61) {
        let (m1, m2) = spec.oracles().unwrap();
        let (c1, c2) = (CountingOracle::new(&*m1), CountingOracle::new(&*m2));
        let rep = approx_intersect(&c1, &c2, &ApproxParams::new(0.25)).unwrap();
        assert_eq!((rep.queries_m1, rep.queries_m2), (c1.count(), c2.count()));
        let phase_sum: u64 = rep.phases.iter().map(|p| p.queries).sum();
        assert!(phase_sum <= rep.queries_total());
    }
}

#[test]
fn cunningham_distances_strictly_increase() {
    for spec in corpus(&MIXED, 20, 14, 8) {
        let (m1, m2) = spec.oracles().unwrap();
        let rep = cunningham_reference(&*m1, &*m2).unwrap();
        let d: Vec<usize> = rep.phases.iter().map(|p| p.st_distance.lower_bound()).collect();
        assert!(d.windows(2).all(|w| w[0] < w[1]), "{d:?}");
        assert!(rep.queries_total() > 0 || rep.size == 0 || m1.ground_size() == 0);
    }
}

#[test]
fn stopping_distance_is_tunable() {
    for spec in corpus(&MIXED, 20, 14, 4040) {
        let (m1, m2) = spec.oracles().unwrap();
        let (r, _) = exhaustive_max_common(&*m1, &*m2).unwrap();
        let params = ApproxParams {
            max_ell: Some(1),
            ..ApproxParams::new(0.1)
        };
        let rep = approx_intersect(&*m1, &*m2, &params).unwrap();
        assert!(rep.phases.iter().all(|p| p.st_distance.lower_bound() <= 3));
        assert!(2 * rep.size >= r);
    }
}

/// Doubling `r` (with `n = 4r`) on partition pairs must grow queries per
/// element by at most 1.8x. Phase counts vary a lot between single random
/// instances, so each size averages a fixed set of seeds.
#[test]
fn partition_queries_grow_subquadratically() {
    const EPS: f64 = 0.25;
    const SEEDS: u64 = 8;
    let per_element: Vec<f64> = [64usize, 128, 256]
        .iter()
        .map(|&r| {
            let n = 4 * r;
            let total: f64 = (0..SEEDS)
                .map(|seed| {
                    let g = Generator::PartitionPair {
                        n,
                        classes: r,
                        max_cap: 1,
                    };
                    let spec = generate_instance(&g, seed);
                    let (m1, m2) = spec.oracles().unwrap();
                    let rep = approx_intersect(&*m1, &*m2, &ApproxParams::new(EPS)).unwrap();
                    rep.queries_total() as f64 * EPS / n as f64
                })
                .sum();
            total / SEEDS as f64
        })
        .collect();
    println!("mean queries·ε/n for r = 64, 128, 256: {per_element:.2?}");
    for w in per_element.windows(2) {
        assert!(w[1] / w[0] <= 1.8, "{per_element:?}");
    }
}
