//! Benchmark plumbing: solver selection, rank lookup, and CSV rows of query
//! counts. The binary in `main.rs` is a thin clap front end over this.

use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::ValueEnum;
use matroid_intersect::instance::InstanceSpec;
use matroid_intersect::solvers::{
    approx_intersect, cunningham_reference, exact_intersect, exhaustive_max_common, exhaustive_report, ApproxParams,
    ExactParams, RunReport, SolveOptions, EXHAUSTIVE_MAX_N,
};
use rayon::prelude::*;
use serde::Serialize;

/// Instances up to this size get their optimum by enumeration, larger ones
/// by the shortest-path baseline.
pub const RANK_BY_ENUMERATION_MAX_N: usize = 16;

pub const CSV_HEADER: [&str; 11] = [
    "instance",
    "solver",
    "n",
    "r",
    "epsilon",
    "queries_total",
    "queries_m1",
    "queries_m2",
    "solution_size",
    "verified",
    "wall_ms",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverKind {
    Approx,
    Exact,
    Cunningham,
    Exhaustive,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Approx => "approx",
            SolverKind::Exact => "exact",
            SolverKind::Cunningham => "cunningham",
            SolverKind::Exhaustive => "exhaustive",
        }
    }

    pub fn takes_epsilon(self) -> bool {
        self == SolverKind::Approx
    }
}

/// Runs one solver. `epsilon` is required for the approximation solver and
/// ignored by the others.
pub fn run_solver(
    kind: SolverKind,
    spec: &InstanceSpec,
    epsilon: Option<f64>,
    debug_invariants: bool,
) -> Result<RunReport> {
    let (m1, m2) = spec.oracles()?;
    let options = SolveOptions { debug_invariants };
    let report = match kind {
        SolverKind::Approx => {
            let Some(eps) = epsilon else {
                bail!("the approx solver needs --epsilon");
            };
            approx_intersect(
                &*m1,
                &*m2,
                &ApproxParams {
                    options,
                    ..ApproxParams::new(eps)
                },
            )?
        }
        SolverKind::Exact => exact_intersect(
            &*m1,
            &*m2,
            &ExactParams {
                options,
                ..ExactParams::default()
            },
        )?,
        SolverKind::Cunningham => cunningham_reference(&*m1, &*m2)?,
        SolverKind::Exhaustive => {
            if spec.n() > EXHAUSTIVE_MAX_N {
                bail!(
                    "exhaustive solver supports n ≤ {EXHAUSTIVE_MAX_N}, instance has n = {}",
                    spec.n()
                );
            }
            exhaustive_report(&*m1, &*m2)?
        }
    };
    Ok(report)
}

/// The optimum `r`: by enumeration for small instances, otherwise by the
/// shortest-path baseline (which is exact).
pub fn known_rank(spec: &InstanceSpec) -> Result<usize> {
    let (m1, m2) = spec.oracles()?;
    if spec.n() <= RANK_BY_ENUMERATION_MAX_N {
        Ok(exhaustive_max_common(&*m1, &*m2)?.0)
    } else {
        Ok(cunningham_reference(&*m1, &*m2)?.size)
    }
}

/// Re-checks a report against fresh, uncounted oracles.
pub fn verify_report(spec: &InstanceSpec, report: &RunReport) -> Result<bool> {
    let (m1, m2) = spec.oracles()?;
    Ok(report.verify(&*m1, &*m2))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub solver: String,
    pub n: usize,
    pub r: Option<usize>,
    pub epsilon: Option<f64>,
    pub queries_total: u64,
    pub queries_m1: u64,
    pub queries_m2: u64,
    pub solution_size: usize,
    pub verified: bool,
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub solvers: Vec<SolverKind>,
    pub epsilons: Vec<f64>,
    pub debug_invariants: bool,
    /// Leave `wall_ms` empty so output is byte-stable.
    pub omit_timing: bool,
}

/// Result of a benchmark run: rows in instance order, plus any invariant
/// violations seen with `debug_invariants`.
#[derive(Clone, Debug, Default)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    pub violations: Vec<String>,
}

impl BenchOutcome {
    pub fn all_verified(&self) -> bool {
        self.records.iter().all(|r| r.verified)
    }
}

/// One row per (instance, solver, ε), with solvers that take no ε getting a
/// single row. Instances run in parallel; rows come back in input order.
pub fn run_bench(instances: &[InstanceSpec], config: &BenchConfig) -> Result<BenchOutcome> {
    if config.solvers.contains(&SolverKind::Approx) && config.epsilons.is_empty() {
        bail!("the approx solver needs at least one --epsilon");
    }
    let per_instance: Vec<Result<BenchOutcome>> =
        instances.par_iter().map(|spec| bench_instance(spec, config)).collect();
    let mut out = BenchOutcome::default();
    for part in per_instance {
        let part = part?;
        out.records.extend(part.records);
        out.violations.extend(part.violations);
    }
    Ok(out)
}

fn bench_instance(spec: &InstanceSpec, config: &BenchConfig) -> Result<BenchOutcome> {
    let r = known_rank(spec)?;
    let mut out = BenchOutcome::default();
    for &kind in &config.solvers {
        let eps_list: Vec<Option<f64>> = if kind.takes_epsilon() {
            config.epsilons.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for eps in eps_list {
            let started = Instant::now();
            let report = run_solver(kind, spec, eps, config.debug_invariants)?;
            let wall = started.elapsed().as_secs_f64() * 1000.0;
            let verified = verify_report(spec, &report)?;
            out.violations.extend(
                report
                    .violations
                    .iter()
                    .map(|v| format!("{} {}: {v}", spec.name, kind.name())),
            );
            out.records.push(BenchRecord {
                instance: spec.name.clone(),
                solver: kind.name().to_string(),
                n: spec.n(),
                r: Some(r),
                epsilon: eps,
                queries_total: report.queries_total(),
                queries_m1: report.queries_m1,
                queries_m2: report.queries_m2,
                solution_size: report.size,
                verified,
                wall_ms: (!config.omit_timing).then(|| (wall * 1000.0).round() / 1000.0),
            });
        }
    }
    Ok(out)
}

/// Writes the fixed header and one line per record.
pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for rec in records {
        w.serialize(rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a whitespace- or comma-separated list of element ids.
pub fn parse_solution(text: &str) -> Result<Vec<usize>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| anyhow::anyhow!("not an element id: `{t}`")))
        .collect()
}
