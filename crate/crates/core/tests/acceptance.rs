//! Acceptance checks. Each test prints one `criterion N: PASS|FAIL` line and
//! then asserts, so `cargo test --test acceptance -- --nocapture` doubles as
//! a report.

mod common;

use std::time::{Duration, Instant};

use common::{alternating_paths, corpus};
use matroid_intersect::exchange::exchange_budget_stats;
use matroid_intersect::instance::{generate_instance, Family, Generator, InstanceSpec};
use matroid_intersect::refine::{path_query_budget, RefineOutcome, PASS_QUERY_FACTOR};
use matroid_intersect::solvers::{
    approx_intersect, blocking_flow_reference, cunningham_reference, exact_intersect, exhaustive_max_common,
    ApproxParams, ExactParams, RunReport, SolveOptions, Stage,
};
use matroid_intersect::StDistance;

/// Families named by the correctness criteria.
const FAMILIES: [Family; 4] = [
    Family::BipartiteMatching,
    Family::PartitionPair,
    Family::GraphicVsPartition,
    Family::Gf2Pair,
];
const PER_FAMILY: u64 = 200;
const CORRECTNESS_MAX_N: usize = 14;
const AUDIT_MAX_N: usize = 12;
const EPSILONS: [f64; 3] = [0.5, 0.25, 0.1];
const CORRECTNESS_TIME_LIMIT: Duration = Duration::from_secs(60);
const SCALING_TIME_LIMIT: Duration = Duration::from_secs(600);
/// Allowed max/min spread of the normalized query counts.
const SCALING_BAND: f64 = 2.0;
const SCALING_RANKS: [usize; 3] = [64, 128, 256];
const SCALING_EPSILON: f64 = 0.25;

fn report(id: u32, ok: bool, detail: String) {
    println!("criterion {id}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
}

fn correctness_corpus() -> Vec<InstanceSpec> {
    corpus(&FAMILIES, PER_FAMILY, CORRECTNESS_MAX_N, 10_000)
}

fn audit_corpus() -> Vec<InstanceSpec> {
    corpus(&FAMILIES, 60, AUDIT_MAX_N, 20_000)
}

/// Audited approximation runs at every ε plus an audited exact run.
fn audited_runs(spec: &InstanceSpec) -> Vec<RunReport> {
    let (m1, m2) = spec.oracles().unwrap();
    let options = SolveOptions { debug_invariants: true };
    let mut runs: Vec<RunReport> = EPSILONS
        .iter()
        .map(|&eps| {
            approx_intersect(
                &*m1,
                &*m2,
                &ApproxParams {
                    options,
                    ..ApproxParams::new(eps)
                },
            )
            .unwrap()
        })
        .collect();
    runs.push(
        exact_intersect(
            &*m1,
            &*m2,
            &ExactParams {
                options,
                ..ExactParams::default()
            },
        )
        .unwrap(),
    );
    runs
}

#[test]
fn criterion_1_exact_correctness() {
    let started = Instant::now();
    let corpus = correctness_corpus();
    let mut failures = Vec::new();
    for spec in &corpus {
        let (m1, m2) = spec.oracles().unwrap();
        let (r, _) = exhaustive_max_common(&*m1, &*m2).unwrap();
        let exact = exact_intersect(&*m1, &*m2, &ExactParams::default()).unwrap();
        let cun = cunningham_reference(&*m1, &*m2).unwrap();
        if exact.size != r || cun.size != r || !exact.verify(&*m1, &*m2) || !cun.verify(&*m1, &*m2) {
            failures.push(format!(
                "{}: r={r} exact={} cunningham={}",
                spec.name, exact.size, cun.size
            ));
        }
    }
    let elapsed = started.elapsed();
    let ok = failures.is_empty() && elapsed < CORRECTNESS_TIME_LIMIT;
    report(
        1,
        ok,
        format!(
            "{} instances, {} mismatches, {:.1}s",
            corpus.len(),
            failures.len(),
            elapsed.as_secs_f64()
        ),
    );
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_2_approximation_guarantee() {
    let mut failures = Vec::new();
    let mut checks = 0;
    for spec in &correctness_corpus() {
        let (m1, m2) = spec.oracles().unwrap();
        let (r, _) = exhaustive_max_common(&*m1, &*m2).unwrap();
        for eps in EPSILONS {
            let rep = approx_intersect(&*m1, &*m2, &ApproxParams::new(eps)).unwrap();
            let need = ((1.0 - eps) * r as f64 - 1e-9).ceil() as usize;
            checks += 1;
            if rep.size < need || !rep.verify(&*m1, &*m2) {
                failures.push(format!("{} eps={eps}: {} < {need}", spec.name, rep.size));
            }
        }
    }
    report(
        2,
        failures.is_empty(),
        format!("{checks} runs, {} below bound", failures.len()),
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_3_invariants_hold() {
    let mut violations = Vec::new();
    let mut runs = 0;
    for spec in &audit_corpus() {
        for rep in audited_runs(spec) {
            runs += 1;
            violations.extend(rep.violations.iter().map(|v| format!("{}: {v}", spec.name)));
        }
    }
    report(
        3,
        violations.is_empty(),
        format!("{runs} audited runs, {} violations", violations.len()),
    );
    assert!(violations.is_empty(), "{:?}", &violations[..violations.len().min(10)]);
}

#[test]
fn criterion_4_even_layer_progress() {
    let mut passes = 0;
    let mut bad = 0;
    for spec in &audit_corpus() {
        for rep in audited_runs(spec) {
            for pass in rep.phases.iter().flat_map(|p| &p.passes) {
                passes += 1;
                if pass.even_changes < pass.imbalance() as u64 {
                    bad += 1;
                }
            }
        }
    }
    report(4, bad == 0, format!("{passes} passes, {bad} violations"));
    assert_eq!(bad, 0);
}

#[test]
fn criterion_5_path_refinement_contract() {
    let mut extensions = 0;
    let mut phases = 0;
    let mut bad = Vec::new();
    for spec in &audit_corpus() {
        for rep in audited_runs(spec) {
            let mut last = 0;
            for phase in rep.phases.iter().filter(|p| p.stage == Stage::Approx) {
                phases += 1;
                for rec in &phase.paths {
                    match rec.outcome {
                        RefineOutcome::ExtendedByPath => {
                            extensions += 1;
                            if rec.b_last_after != rec.b_last_before + 1 {
                                bad.push(format!("{}: extension {rec:?}", spec.name));
                            }
                        }
                        RefineOutcome::MaximalReached => {
                            if rec.b_last_after != rec.b_last_before {
                                bad.push(format!("{}: maximal {rec:?}", spec.name));
                            }
                        }
                    }
                }
                let d = phase.st_distance.lower_bound();
                if d <= last {
                    bad.push(format!("{}: distance {last} then {d}", spec.name));
                }
                last = d;
            }
            bad.extend(rep.violations.iter().filter(|v| v.contains("distance")).cloned());
            if rep.solver == "approx" {
                // The distance after the last phase must exceed the last phase's.
                let (m1, m2) = spec.oracles().unwrap();
                let pair = matroid_intersect::OraclePair::new(&*m1, &*m2).unwrap();
                let s = matroid_intersect::CommonSet::new(&pair, rep.solution.clone()).unwrap();
                let after = matroid_intersect::compute_distance_layers(&pair, &s, None).st_distance();
                if after != StDistance::Infinite && after.lower_bound() <= last {
                    bad.push(format!("{}: final distance {after:?} after {last}", spec.name));
                }
            }
        }
    }
    report(
        5,
        bad.is_empty(),
        format!(
            "{phases} phases, {extensions} path extensions, {} violations",
            bad.len()
        ),
    );
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(10)]);
}

#[test]
fn criterion_6_query_budgets() {
    let mut bad = Vec::new();
    let (mut pass_calls, mut path_calls) = (0, 0);
    for spec in &audit_corpus() {
        let n = spec.n();
        for rep in audited_runs(spec) {
            for phase in &rep.phases {
                for pass in &phase.passes {
                    pass_calls += 1;
                    if pass.queries > PASS_QUERY_FACTOR * n as u64 {
                        bad.push(format!("{}: pass used {}", spec.name, pass.queries));
                    }
                }
                let budget = path_query_budget(n, phase.size_before);
                for path in &phase.paths {
                    path_calls += 1;
                    if path.queries as f64 > budget {
                        bad.push(format!("{}: path used {} > {budget:.0}", spec.name, path.queries));
                    }
                }
            }
            bad.extend(rep.violations.iter().filter(|v| v.contains("queries")).cloned());
        }
    }
    let (calls, over) = exchange_budget_stats();
    let ok = bad.is_empty() && over == 0;
    report(
        6,
        ok,
        format!("{pass_calls} passes, {path_calls} path calls, {calls} exchange searches ({over} over budget), {} violations", bad.len()),
    );
    assert!(ok, "{:?}", &bad[..bad.len().min(10)]);
}

#[test]
fn criterion_7_query_scaling() {
    let started = Instant::now();
    let mut normalized = Vec::new();
    let mut last = (0, 0);
    for r in SCALING_RANKS {
        let n = 4 * r;
        let g = Generator::BipartiteMatching {
            left: r,
            right: r,
            edges: n,
            planted: true,
        };
        let spec = generate_instance(&g, 7);
        let (m1, m2) = spec.oracles().unwrap();
        let rep = approx_intersect(&*m1, &*m2, &ApproxParams::new(SCALING_EPSILON)).unwrap();
        assert!(rep.verify(&*m1, &*m2));
        let q = rep.queries_total();
        let scale = n as f64 * (r as f64 * (r as f64).log2()).sqrt();
        normalized.push(q as f64 / scale);
        println!(
            "  r={r} n={n}: approx size {} queries {q} normalized {:.2}",
            rep.size,
            q as f64 / scale
        );
        if r == *SCALING_RANKS.last().unwrap() {
            let cun = cunningham_reference(&*m1, &*m2).unwrap();
            println!("  r={r}: cunningham size {} queries {}", cun.size, cun.queries_total());
            // Informational: the same phases with dead marks kept across augmentations.
            let blocking = blocking_flow_reference(&*m1, &*m2).unwrap();
            println!(
                "  r={r}: blocking-flow size {} queries {}",
                blocking.size,
                blocking.queries_total()
            );
            last = (q, cun.queries_total());
        }
    }
    let max = normalized.iter().cloned().fold(f64::MIN, f64::max);
    let min = normalized.iter().cloned().fold(f64::MAX, f64::min);
    let elapsed = started.elapsed();
    let ok = max / min <= SCALING_BAND && last.0 < last.1 && elapsed < SCALING_TIME_LIMIT;
    report(
        7,
        ok,
        format!(
            "spread {:.2} (band {SCALING_BAND}), approx {} vs cunningham {} at r=256, {:.1}s",
            max / min,
            last.0,
            last.1,
            elapsed.as_secs_f64()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_8_exact_phase_structure() {
    // Default parameters on disjoint alternating paths: greedy leaves one
    // augmenting path per component, at distances 4, 32 and 82.
    let mut half = vec![1; 60];
    half.extend([15, 40]);
    let spec = alternating_paths(&half);
    let r: usize = half.iter().map(|m| m + 1).sum();
    let (m1, m2) = spec.oracles().unwrap();
    let rep = exact_intersect(&*m1, &*m2, &ExactParams::default()).unwrap();
    let augmented = |s: Stage| rep.phases.iter().any(|p| p.stage == s && p.augmentations > 0);
    let default_stages = [Stage::Approx, Stage::DistanceThreshold, Stage::LongPath].map(augmented);

    // Forced parameters: every stage must also perform augmentations.
    let mut augmenting = [false; 3];
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
            ..ExactParams::default()
        };
        let rep = exact_intersect(&*m1, &*m2, &params).unwrap();
        assert_eq!(rep.size, 7);
        for ph in rep.phases.iter().filter(|p| p.augmentations > 0) {
            match ph.stage {
                Stage::Approx => augmenting[0] = true,
                Stage::DistanceThreshold => augmenting[1] = true,
                Stage::LongPath => augmenting[2] = true,
                _ => {}
            }
        }
    }
    let ok = default_stages == [true; 3] && augmenting == [true; 3] && rep.size == r;
    report(
        8,
        ok,
        format!("augmenting stages with default parameters {default_stages:?}, with forced parameters {augmenting:?}"),
    );
    assert!(ok);
}
