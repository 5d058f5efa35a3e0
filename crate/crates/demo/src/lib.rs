//! WebAssembly entry points for the browser demo. Every export takes and
//! returns plain strings (instance text in, JSON out) so the same functions
//! run natively under `cargo test`. Errors come back as `{"error": "..."}`.

use matroid_intersect::augset::{augment_by_set, init_state, ElementStatus, LayeredState};
use matroid_intersect::instance::{generate_instance, parse_instance, Family, Generator, InstanceSpec};
use matroid_intersect::refine::{RefineOutcome, Refiner};
use matroid_intersect::solvers::{
    approx_intersect, cunningham_reference, default_p, exact_intersect, max_ell_for, rank_bound_from_distance,
    ApproxParams, ExactParams, RunReport,
};
use matroid_intersect::{compute_distance_layers, CommonSet, OraclePair, StDistance};
use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest ground set the page will solve or snapshot.
pub const MAX_DEMO_N: usize = 4096;
/// Largest rank accepted by the scaling sweep.
pub const MAX_SWEEP_R: usize = 512;
/// Snapshots beyond this many steps are dropped (the run still completes).
pub const MAX_SNAPSHOTS: usize = 400;

type Out = Result<Value, String>;

fn finish(result: Out) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn load(text: &str) -> Result<InstanceSpec, String> {
    let spec = parse_instance(text).map_err(|e| e.to_string())?;
    if spec.n() > MAX_DEMO_N {
        return Err(format!(
            "ground set too large for the demo ({} > {MAX_DEMO_N})",
            spec.n()
        ));
    }
    Ok(spec)
}

fn distance_json(d: StDistance) -> Value {
    match d {
        StDistance::Finite(x) => json!({ "value": x, "exact": true }),
        StDistance::AtLeast(x) => json!({ "value": x, "exact": false }),
        StDistance::Infinite => json!({ "value": null, "exact": true }),
    }
}

fn report_json(spec: &InstanceSpec, report: &RunReport) -> Result<Value, String> {
    let (m1, m2) = spec.oracles().map_err(|e| e.to_string())?;
    let phases: Vec<Value> = report
        .phases
        .iter()
        .map(|p| {
            json!({
                "stage": p.stage,
                "distance": distance_json(p.st_distance),
                "size_before": p.size_before,
                "size_after": p.size_after,
                "p": p.p,
                "passes": p.passes.len(),
                "paths": p.paths.len(),
                "augmentations": p.augmentations,
                "queries": p.queries,
            })
        })
        .collect();
    Ok(json!({
        "instance": spec.name,
        "solver": report.solver,
        "n": report.n,
        "size": report.size,
        "epsilon": report.epsilon,
        "r_bound": report.r_bound,
        "queries_total": report.queries_total(),
        "queries_m1": report.queries_m1,
        "queries_m2": report.queries_m2,
        "verified": report.verify(&*m1, &*m2),
        "solution": report.solution.to_vec(),
        "phases": phases,
    }))
}

fn solve_inner(text: &str, solver: &str, epsilon: f64) -> Out {
    let spec = load(text)?;
    let (m1, m2) = spec.oracles().map_err(|e| e.to_string())?;
    let report = match solver {
        "approx" => approx_intersect(&*m1, &*m2, &ApproxParams::new(epsilon)),
        "exact" => exact_intersect(&*m1, &*m2, &ExactParams::default()),
        "cunningham" => cunningham_reference(&*m1, &*m2),
        other => return Err(format!("unknown solver `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    report_json(&spec, &report)
}

/// Solves an instance and returns its summary and phase trace.
#[wasm_bindgen]
pub fn solve_instance(text: &str, solver: &str, epsilon: f64) -> String {
    finish(solve_inner(text, solver, epsilon))
}

#[derive(Serialize)]
struct LayerCounts {
    size: usize,
    selected: usize,
    removed: usize,
    fresh: usize,
}

#[derive(Serialize)]
struct Snapshot {
    phase: usize,
    step: &'static str,
    distance: usize,
    p: usize,
    queries: u64,
    layers: Vec<LayerCounts>,
}

fn snapshot(st: &LayeredState, phase: usize, step: &'static str, distance: usize, p: usize, queries: u64) -> Snapshot {
    let layers = (1..=2 * st.ell() + 1)
        .map(|j| LayerCounts {
            size: st.layer(j).len(),
            selected: st.count(j, ElementStatus::Selected),
            removed: st.count(j, ElementStatus::Removed),
            fresh: st.count(j, ElementStatus::Fresh),
        })
        .collect();
    Snapshot {
        phase,
        step,
        distance,
        p,
        queries,
        layers,
    }
}

/// Re-runs the approximation phases step by step, recording per-layer
/// status counts after initialization, every refinement pass and every
/// path refinement.
fn snapshots_inner(text: &str, epsilon: f64) -> Out {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(format!("epsilon must be in (0, 1], got {epsilon}"));
    }
    let spec = load(text)?;
    let (m1, m2) = spec.oracles().map_err(|e| e.to_string())?;
    let pair = OraclePair::new(&*m1, &*m2).map_err(|e| e.to_string())?;
    let max_ell = max_ell_for(epsilon);
    let mut s = CommonSet::empty(pair.n());
    let mut r_bound = pair.n();
    let mut shots = Vec::new();
    let mut truncated = false;
    let mut push = |shot: Snapshot, shots: &mut Vec<Snapshot>| {
        if shots.len() < MAX_SNAPSHOTS {
            shots.push(shot);
        } else {
            truncated = true;
        }
    };
    let mut phase = 0;
    loop {
        let layers = compute_distance_layers(&pair, &s, Some(max_ell));
        let distance = layers.st_distance();
        if let Some(b) = rank_bound_from_distance(s.size(), distance) {
            r_bound = r_bound.min(b);
        }
        let d = match distance {
            StDistance::Finite(d) if d <= 2 * max_ell + 1 => d,
            _ => break,
        };
        phase += 1;
        let p = default_p(r_bound);
        let mut st = init_state(&s, &layers).map_err(|e| e.to_string())?;
        let mut refiner = Refiner::new(&pair);
        push(snapshot(&st, phase, "init", d, p, pair.queries()), &mut shots);
        loop {
            let rec = refiner.refine_pass(&mut st);
            push(snapshot(&st, phase, "pass", d, p, pair.queries()), &mut shots);
            if rec.imbalance() <= p {
                break;
            }
        }
        loop {
            let rec = refiner.refine_path(&mut st);
            push(snapshot(&st, phase, "path", d, p, pair.queries()), &mut shots);
            if rec.outcome == RefineOutcome::MaximalReached {
                break;
            }
        }
        let next = augment_by_set(&pair, &st).map_err(|e| e.to_string())?;
        if d == 2 {
            r_bound = r_bound.min(2 * next.size());
        }
        s = next;
    }
    Ok(json!({
        "instance": spec.name,
        "n": spec.n(),
        "size": s.size(),
        "queries_total": pair.queries(),
        "truncated": truncated,
        "snapshots": shots,
    }))
}

/// Per-layer Selected/Removed/Fresh counts after every refinement step of
/// every approximation phase.
#[wasm_bindgen]
pub fn layer_snapshots(text: &str, epsilon: f64) -> String {
    finish(snapshots_inner(text, epsilon))
}

fn sweep_inner(family: &str, ranks: &str, epsilon: f64, seed: u64) -> Out {
    let family: Family = family
        .parse()
        .map_err(|e: matroid_intersect::instance::UnknownFamily| e.to_string())?;
    let ranks: Vec<usize> = ranks
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("not a rank: `{t}`")))
        .collect::<Result<_, _>>()?;
    if let Some(&r) = ranks.iter().find(|&&r| r == 0 || r > MAX_SWEEP_R) {
        return Err(format!("ranks must be in 1..={MAX_SWEEP_R}, got {r}"));
    }
    let mut rows = Vec::new();
    for r in ranks {
        let spec = generate_instance(&Generator::scaled(family, r), seed);
        let (m1, m2) = spec.oracles().map_err(|e| e.to_string())?;
        let approx = approx_intersect(&*m1, &*m2, &ApproxParams::new(epsilon)).map_err(|e| e.to_string())?;
        let base = cunningham_reference(&*m1, &*m2).map_err(|e| e.to_string())?;
        let n = spec.n() as f64;
        let rf = r as f64;
        rows.push(json!({
            "r": r,
            "n": spec.n(),
            "optimum": base.size,
            "approx_size": approx.size,
            "approx_queries": approx.queries_total(),
            "cunningham_queries": base.queries_total(),
            "approx_normalized": approx.queries_total() as f64 / (n * (rf * rf.max(2.0).log2()).sqrt()),
            "cunningham_normalized": base.queries_total() as f64 / (n * rf),
        }));
    }
    Ok(json!({ "family": family.name(), "epsilon": epsilon, "seed": seed, "rows": rows }))
}

/// Approximation vs shortest-path baseline query counts on `n = 4r`
/// instances for each rank in the comma-separated list.
#[wasm_bindgen]
pub fn scaling_sweep(family: &str, ranks: &str, epsilon: f64, seed: u64) -> String {
    finish(sweep_inner(family, ranks, epsilon, seed))
}

/// Instance text for `family` at rank about `r` (`n = 4r`).
#[wasm_bindgen]
pub fn generate(family: &str, r: usize, seed: u64) -> String {
    match family.parse::<Family>() {
        Ok(f) => generate_instance(&Generator::scaled(f, r.clamp(1, MAX_SWEEP_R)), seed).to_text(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}
