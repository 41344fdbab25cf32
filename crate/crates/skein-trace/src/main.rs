use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use skein_core::ordering::solve;
use skein_core::trace::{Engine, TraceError};
use skein_trace::corpus::{self, Audit};
use skein_trace::io::{canonical_digest, read_json, InputError, InstanceJson, LaminationJson, TriangulationJson};
use skein_trace::run::{chooser_for, compute, render_text, ComputeOptions, Failure, InputDigests};

#[derive(Parser)]
#[command(name = "skein-trace", version, about = "Quantum traces of laminations on triangulated surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a lamination and report the element.
    Compute(ComputeArgs),
    /// Check a triangulation and, optionally, a lamination.
    Validate(InputArgs),
    /// Solve the ordering problem and print the orderings.
    Ordering(OrderingArgs),
    /// Work with an instance directory.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Args)]
struct InputArgs {
    #[arg(long, required_unless_present = "instance")]
    triangulation: Option<PathBuf>,
    #[arg(long)]
    lamination: Option<PathBuf>,
    /// Corpus instance carrying both.
    #[arg(long, conflicts_with_all = ["triangulation", "lamination"])]
    instance: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Statesum,
    Transfer,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Json,
    Text,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    x_form: bool,
    #[arg(long)]
    check_positivity: bool,
    #[arg(long)]
    classical_oracle: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "statesum")]
    engine: EngineArg,
    #[arg(long, value_name = "OUT")]
    dump_regional_graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    output: OutputArg,
    /// Add wall-clock time to the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct OrderingArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "OUT")]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CorpusAction {
    List {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    RunAll {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

struct Loaded {
    triangulation: TriangulationJson,
    lamination: LaminationJson,
    digests: InputDigests,
}

fn load(args: &InputArgs, need_lamination: bool) -> Result<Loaded, InputError> {
    if let Some(p) = &args.instance {
        let (inst, _): (InstanceJson, _) = read_json(p)?;
        let digests = InputDigests {
            triangulation: canonical_digest(&inst.triangulation),
            lamination: canonical_digest(&inst.lamination),
        };
        return Ok(Loaded { triangulation: inst.triangulation, lamination: inst.lamination, digests });
    }
    let tp = args.triangulation.as_ref().expect("clap requires one input");
    let (triangulation, td) = read_json(tp)?;
    let (lamination, ld) = match &args.lamination {
        Some(p) => read_json(p)?,
        None if need_lamination => {
            return Err(InputError::Io {
                path: String::from("--lamination"),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "no lamination given"),
            })
        }
        None => (LaminationJson::default(), String::new()),
    };
    Ok(Loaded { triangulation, lamination, digests: InputDigests { triangulation: td, lamination: ld } })
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("skein-trace: {f}");
    print_json(&json!({ "error": f.class(), "message": f.to_string(), "exit_code": f.exit_code() }));
    ExitCode::from(f.exit_code())
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|source| Failure::Input(InputError::Io { path: path.display().to_string(), source }))
}

fn run_compute(a: &ComputeArgs) -> Result<ExitCode, Failure> {
    let l = load(&a.input, true)?;
    let opts = ComputeOptions {
        engine: match a.engine {
            EngineArg::Statesum => Engine::StateSum,
            EngineArg::Transfer => Engine::Transfer,
        },
        seed: a.seed,
        x_form: a.x_form,
        check_positivity: a.check_positivity,
        classical_oracle: a.classical_oracle,
        timing: a.timing,
    };
    let out = compute(&l.triangulation, &l.lamination, l.digests, &opts)?;
    if let Some(p) = &a.dump_regional_graph {
        let dots: Vec<String> = out.trace.components.iter().filter_map(|c| c.ordering.as_ref().map(|o| o.to_dot())).collect();
        write_file(p, &dots.join("\n"))?;
    }
    match a.output {
        OutputArg::Json => print_json(&out.report),
        OutputArg::Text => print!("{}", render_text(&out.report)),
    }
    Ok(if out.report.checks.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_validate(a: &InputArgs) -> Result<ExitCode, Failure> {
    let l = load(a, false)?;
    let t = l.triangulation.build()?;
    let lam = l.lamination.build(&t)?;
    let s = t.surface();
    let components: Vec<_> = lam
        .components()
        .iter()
        .map(|(c, w)| json!({ "weight": w, "junctures": c.juncture_count(), "peripheral": c.is_peripheral() }))
        .collect();
    print_json(&json!({
        "valid": true,
        "surface": { "genus": s.genus, "punctures": s.punctures, "boundary_arcs": s.boundary_arcs },
        "triangles": t.triangle_count(),
        "arcs": t.arc_count(),
        "self_folded": (0..t.triangle_count()).filter(|&i| t.is_self_folded(i)).count(),
        "components": components,
        "even": lam.is_even(&t),
    }));
    Ok(ExitCode::SUCCESS)
}

fn run_ordering(a: &OrderingArgs) -> Result<ExitCode, Failure> {
    let l = load(&a.input, true)?;
    let t = l.triangulation.build()?;
    let lam = l.lamination.build(&t)?;
    let mut chooser = chooser_for(a.seed);
    let mut out = Vec::new();
    let mut dots = Vec::new();
    for (i, (c, _)) in lam.components().iter().enumerate() {
        if c.is_peripheral() {
            continue;
        }
        let sol = solve(&t, c, chooser.as_mut()).map_err(|e| Failure::Internal(TraceError::Ordering(e)))?;
        let arcs: Vec<_> = (0..t.arc_count())
            .filter(|&e| c.system().crossings(e) > 0)
            .map(|e| {
                let ranks: Vec<u32> = c.system().arc_junctures(e).map(|j| sol.juncture_rank[j]).collect();
                json!({ "arc": e, "ranks": ranks })
            })
            .collect();
        let triangles: Vec<_> =
            (0..t.triangle_count()).map(|tri| sol.elevation_order(c.system(), tri)).collect();
        out.push(json!({
            "component": i,
            "junctures": c.juncture_count(),
            "arc_orderings": arcs,
            "triangle_orderings": triangles,
            "chains": sol.chains.iter().map(|cc| cc.chains.len()).sum::<usize>(),
        }));
        dots.push(sol.to_dot());
    }
    if let Some(p) = &a.dot {
        write_file(p, &dots.join("\n"))?;
    } else {
        for d in &dots {
            eprint!("{d}");
        }
    }
    print_json(&json!({ "components": out }));
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct AggregateReport<'a> {
    dir: String,
    instances: usize,
    passed: usize,
    failed: usize,
    results: &'a [Audit],
}

fn audit_all(instances: &[(PathBuf, InstanceJson)]) -> Vec<Audit> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(instances.len().max(1));
    let mut out: Vec<Option<Audit>> = vec![None; instances.len()];
    std::thread::scope(|s| {
        let chunks: Vec<_> = out.chunks_mut(instances.len().div_ceil(workers).max(1)).collect();
        let mut start = 0;
        for chunk in chunks {
            let part = &instances[start..start + chunk.len()];
            start += chunk.len();
            s.spawn(move || {
                for (slot, (_, inst)) in chunk.iter_mut().zip(part) {
                    *slot = Some(corpus::audit(inst));
                }
            });
        }
    });
    out.into_iter().map(|a| a.expect("every instance audited")).collect()
}

fn run_corpus(action: &CorpusAction) -> Result<ExitCode, Failure> {
    let dir = match action {
        CorpusAction::List { dir } | CorpusAction::RunAll { dir } => dir.clone().unwrap_or_else(corpus::default_dir),
    };
    let instances = corpus::load(&dir)?;
    if instances.is_empty() {
        return Err(Failure::Input(InputError::Io {
            path: dir.display().to_string(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no instances"),
        }));
    }
    match action {
        CorpusAction::List { .. } => {
            let rows: Vec<_> = instances
                .iter()
                .map(|(p, i)| {
                    json!({
                        "file": p.file_name().map(|f| f.to_string_lossy()),
                        "name": i.name,
                        "family": i.family,
                        "components": i.lamination.components.len(),
                    })
                })
                .collect();
            print_json(&rows);
            Ok(ExitCode::SUCCESS)
        }
        CorpusAction::RunAll { .. } => {
            let results = audit_all(&instances);
            let passed = results.iter().filter(|a| a.passed()).count();
            for a in results.iter().filter(|a| !a.passed()) {
                for f in &a.failures {
                    eprintln!("{}: {f}", a.name);
                }
            }
            print_json(&AggregateReport {
                dir: dir.display().to_string(),
                instances: results.len(),
                passed,
                failed: results.len() - passed,
                results: &results,
            });
            Ok(if passed == results.len() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::Compute(a) => run_compute(a),
        Command::Validate(a) => run_validate(a),
        Command::Ordering(a) => run_ordering(a),
        Command::Corpus { action } => run_corpus(action),
    };
    r.unwrap_or_else(|f| fail(&f))
}
