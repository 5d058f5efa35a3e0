use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use matroid_bench::{
    known_rank, parse_solution, run_bench, run_solver, verify_report, write_csv, BenchConfig, SolverKind,
};
use matroid_intersect::instance::{generate_instance, parse_instance, small_instance, Family, Generator, InstanceSpec};
use matroid_intersect::ElementSet;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "matroid-bench",
    version,
    about = "Matroid intersection solver and query-count benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file and print size, query counts and the solution.
    Solve(SolveArgs),
    /// Generate an instance file.
    Gen(GenArgs),
    /// Run solvers over instances and write one CSV row per run.
    Bench(BenchArgs),
    /// Check that a solution is common independent (and optionally maximum).
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    solver: SolverKind,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    /// Check the phase invariants after every refinement step.
    #[arg(long)]
    debug_invariants: bool,
    /// Print the full run report, including the phase trace, as JSON.
    #[arg(long)]
    json: bool,
    /// Write the solution's element ids to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    family: Family,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ground set size (partition-pair, gf2-pair, uniform-pair).
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    left: usize,
    #[arg(long, default_value_t = 4)]
    right: usize,
    /// Edge count (bipartite-matching, graphic-vs-partition).
    #[arg(long, default_value_t = 8)]
    edges: usize,
    /// Include a matching of size min(left, right).
    #[arg(long)]
    planted: bool,
    #[arg(long, default_value_t = 3)]
    classes: usize,
    #[arg(long, default_value_t = 2)]
    max_cap: usize,
    #[arg(long, default_value_t = 5)]
    vertices: usize,
    #[arg(long, default_value_t = 4)]
    rows: usize,
    #[arg(long, default_value_t = 3)]
    k1: usize,
    #[arg(long, default_value_t = 5)]
    k2: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance files.
    instances: Vec<PathBuf>,
    /// Generate instances of these families (repeatable).
    #[arg(long = "family")]
    families: Vec<Family>,
    /// Random small instances per family.
    #[arg(long, default_value_t = 20)]
    count: u64,
    #[arg(long, default_value_t = 14)]
    max_n: usize,
    /// Instead of small instances, one instance per rank with n = 4r.
    #[arg(long, value_delimiter = ',')]
    scale: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "solver", value_enum, value_delimiter = ',', default_values_t = [SolverKind::Approx, SolverKind::Exact, SolverKind::Cunningham])]
    solvers: Vec<SolverKind>,
    #[arg(long = "epsilon", value_delimiter = ',', default_values_t = [0.25])]
    epsilons: Vec<f64>,
    #[arg(long)]
    debug_invariants: bool,
    /// Leave wall_ms empty so the CSV is byte-stable.
    #[arg(long)]
    omit_timing: bool,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    instance: PathBuf,
    /// File of element ids separated by whitespace or commas.
    solution: PathBuf,
    /// Also require the solution to be a maximum common independent set.
    #[arg(long)]
    maximum: bool,
}

/// Either a process exit code or an error to report with exit code 2.
type Outcome = Result<u8>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Gen(a) => gen(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn load(path: &Path) -> Result<InstanceSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut spec = parse_instance(&text).with_context(|| format!("parsing {}", path.display()))?;
    if spec.name.is_empty() {
        spec.name = path
            .file_stem()
            .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    }
    Ok(spec)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn solve(a: SolveArgs) -> Outcome {
    let spec = load(&a.instance)?;
    let report = run_solver(a.solver, &spec, Some(a.epsilon), a.debug_invariants)?;
    let verified = verify_report(&spec, &report)?;
    let ids: Vec<String> = report.solution.iter().map(|e| e.to_string()).collect();
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("instance {}", spec.name);
        println!("solver {}", a.solver.name());
        println!("n {}", spec.n());
        println!("size {}", report.size);
        println!(
            "queries {} (m1 {}, m2 {})",
            report.queries_total(),
            report.queries_m1,
            report.queries_m2
        );
        println!("phases {}", report.phases.len());
        println!("verified {verified}");
        println!("solution {}", ids.join(" "));
    }
    if let Some(path) = &a.out {
        emit(Some(path), &format!("{}\n", ids.join(" ")))?;
    }
    for v in &report.violations {
        eprintln!("violation: {v}");
    }
    Ok(if verified && report.violations.is_empty() {
        0
    } else {
        EXIT_VERIFY
    })
}

fn gen(a: GenArgs) -> Outcome {
    let generator = match a.family {
        Family::BipartiteMatching => Generator::BipartiteMatching {
            left: a.left,
            right: a.right,
            edges: a.edges,
            planted: a.planted,
        },
        Family::PartitionPair => Generator::PartitionPair {
            n: a.n,
            classes: a.classes,
            max_cap: a.max_cap,
        },
        Family::GraphicVsPartition => Generator::GraphicVsPartition {
            vertices: a.vertices,
            edges: a.edges,
            classes: a.classes,
        },
        Family::Gf2Pair => Generator::Gf2Pair { rows: a.rows, n: a.n },
        Family::UniformPair => Generator::UniformPair {
            n: a.n,
            k1: a.k1,
            k2: a.k2,
        },
    };
    let spec = generate_instance(&generator, a.seed);
    emit(a.out.as_deref(), &spec.to_text())?;
    Ok(0)
}

fn bench(a: BenchArgs) -> Outcome {
    let mut instances = a.instances.iter().map(|p| load(p)).collect::<Result<Vec<_>>>()?;
    for &family in &a.families {
        if a.scale.is_empty() {
            instances.extend((0..a.count).map(|i| small_instance(family, a.max_n, a.seed + i)));
        } else {
            instances.extend(
                a.scale
                    .iter()
                    .map(|&r| generate_instance(&Generator::scaled(family, r), a.seed)),
            );
        }
    }
    if instances.is_empty() {
        anyhow::bail!("no instances: pass instance files or --family");
    }
    let config = BenchConfig {
        solvers: a.solvers,
        epsilons: a.epsilons,
        debug_invariants: a.debug_invariants,
        omit_timing: a.omit_timing,
    };
    let outcome = run_bench(&instances, &config)?;
    match &a.out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&outcome.records, io::BufWriter::new(file))?;
        }
        None => write_csv(&outcome.records, io::stdout().lock())?,
    }
    for rec in outcome.records.iter().filter(|r| !r.verified) {
        eprintln!("unverified: {} {}", rec.instance, rec.solver);
    }
    for v in &outcome.violations {
        eprintln!("violation: {v}");
    }
    Ok(if outcome.all_verified() && outcome.violations.is_empty() {
        0
    } else {
        EXIT_VERIFY
    })
}

fn verify(a: VerifyArgs) -> Outcome {
    let spec = load(&a.instance)?;
    let text = fs::read_to_string(&a.solution).with_context(|| format!("reading {}", a.solution.display()))?;
    let ids = parse_solution(&text)?;
    let n = spec.n();
    if let Some(&bad) = ids.iter().find(|&&e| e >= n) {
        println!("invalid: element {bad} outside ground set of size {n}");
        return Ok(EXIT_VERIFY);
    }
    let set = ElementSet::from_ids(n, ids.iter().copied());
    if set.len() != ids.len() {
        println!("invalid: repeated element ids");
        return Ok(EXIT_VERIFY);
    }
    let (m1, m2) = spec.oracles()?;
    let (in1, in2) = (m1.is_independent(&set), m2.is_independent(&set));
    println!("size {}", set.len());
    println!("independent in matroid 1: {in1}");
    println!("independent in matroid 2: {in2}");
    let mut ok = in1 && in2;
    if a.maximum {
        let r = known_rank(&spec)?;
        println!("maximum size {r}");
        ok &= set.len() == r;
    }
    println!("{}", if ok { "valid" } else { "invalid" });
    Ok(if ok { 0 } else { EXIT_VERIFY })
}
