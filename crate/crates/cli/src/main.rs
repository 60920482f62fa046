use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use polygon_core::catalog;
use polygon_core::engine::FiniteMap;
use polygon_core::eqcompiler::{compiled, map_arity, render_equation, specialize_single, Program};
use polygon_core::reductions::{
    self, check_conjectures, extend_degenerate, project_cut_first_codomain, project_cut_last_codomain,
    retract_degenerate, Construction, End, Extension,
};
use polygon_core::search::{enumerate, Filter, SearchSpec, DEFAULT_BUDGET};
use polygon_core::verifier::{check_sampled, check_single_par, Verdict};
use polygon_core::Error;

/// Polygon equations over finite sets: compile, verify, search, reduce.
#[derive(Parser)]
#[command(name = "polygon", version)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print both sides of the (dual) N-gon equation.
    Compile(CompileArgs),
    /// Check a map against the (dual) N-gon equation.
    Verify(VerifyArgs),
    /// Enumerate solutions over {0, …, q-1}.
    Search(SearchArgs),
    /// Project, retract or construct a map from another one.
    Reduce(ReduceArgs),
    /// Extend a solution to a degenerate solution one order up.
    Extend(ExtendArgs),
    /// Test the six conjectured constructions.
    Conjectures(ConjectureArgs),
    /// List or emit built-in solutions.
    Catalog(CatalogArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    dual: bool,
    /// Drop map indices (one map `T` everywhere).
    #[arg(long)]
    single: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    dual: bool,
    /// FiniteMap JSON.
    #[arg(long)]
    map: PathBuf,
    /// JSON array of inputs to check instead of all inputs.
    #[arg(long, conflicts_with = "random")]
    samples: Option<PathBuf>,
    /// Check this many seeded random inputs instead of all inputs.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    dual: bool,
    #[arg(long)]
    q: u32,
    /// Stop after this many solutions.
    #[arg(long)]
    limit: Option<u64>,
    /// Report the count only.
    #[arg(long)]
    count_only: bool,
    /// `degenerate:I` (1-based argument), `surjective` or `involutive-after-p`; repeatable.
    #[arg(long = "filter")]
    filters: Vec<String>,
    /// Largest admissible estimate of the unpruned search space.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct ReduceArgs {
    /// cut-first, cut-last, drop-first-arg, drop-last-arg, dual-tetragon-from-pair,
    /// or a construction such as pentagon-from-tetragon.
    #[arg(long)]
    op: String,
    #[arg(long = "in")]
    input: PathBuf,
    /// Second trigon map for dual-tetragon-from-pair.
    #[arg(long = "in2")]
    input2: Option<PathBuf>,
    /// The input map solves the dual equation (needed by the drop ops).
    #[arg(long)]
    dual: bool,
    /// Use the constant `u` instead of a copied argument (constructions only).
    #[arg(long)]
    u: Option<u32>,
    /// Check the result against its equation; exit 1 if it fails.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtendArgs {
    /// 7.4, 7.5, 7.6 or 7.7.
    #[arg(long)]
    thm: String,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConjectureArgs {
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Largest target order.
    #[arg(long, default_value_t = 9)]
    max_n: usize,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long, conflicts_with = "emit")]
    list: bool,
    #[arg(long)]
    emit: Option<String>,
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Which idempotent trigon map, in table order.
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its exit code.
struct Exit(u8, anyhow::Error);

impl From<anyhow::Error> for Exit {
    fn from(e: anyhow::Error) -> Self {
        let code = match e.downcast_ref::<Error>() {
            Some(Error::Budget { .. }) => 3,
            _ => 2,
        };
        Exit(code, e)
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type Outcome = Result<u8, Exit>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Compile(a) => compile(a),
        Command::Verify(a) => verify(a),
        Command::Search(a) => search(a),
        Command::Reduce(a) => reduce(a),
        Command::Extend(a) => extend(a),
        Command::Conjectures(a) => conjectures(a),
        Command::Catalog(a) => catalog_cmd(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn write_out(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn read_map(path: &Path) -> anyhow::Result<FiniteMap> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn gon(n: usize, dual: bool) -> String {
    if dual {
        format!("dual {n}-gon")
    } else {
        format!("{n}-gon")
    }
}

fn compile(a: CompileArgs) -> Outcome {
    let sides = compiled(a.n, a.dual)?;
    let (mut lhs, mut rhs): (Program, Program) = (sides.0.clone(), sides.1.clone());
    if a.single {
        lhs = specialize_single(&lhs);
        rhs = specialize_single(&rhs);
    }
    let text = match a.format {
        Format::Text => render_equation(&lhs, &rhs),
        Format::Json => to_json(&serde_json::json!({ "lhs": lhs, "rhs": rhs }))?,
    };
    write_out(a.out.as_deref(), &text)?;
    Ok(0)
}

fn verdict_code(v: &Verdict) -> u8 {
    if v.holds {
        0
    } else {
        1
    }
}

fn verify(a: VerifyArgs) -> Outcome {
    let t = read_map(&a.map)?;
    let started = Instant::now();
    let verdict = if let Some(path) = &a.samples {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let samples: Vec<Vec<u32>> = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        check_sampled(a.n, a.dual, &t, &samples)?
    } else if let Some(count) = a.random {
        eprintln!("seed {}", a.seed);
        let slots = compiled(a.n, a.dual)?.0.inputs.len();
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let samples: Vec<Vec<u32>> =
            (0..count).map(|_| (0..slots).map(|_| rng.gen_range(0..t.q())).collect()).collect();
        check_sampled(a.n, a.dual, &t, &samples)?
    } else {
        check_single_par(a.n, a.dual, &t)?
    };
    eprintln!("{} check: {} inputs in {:.3?}", gon(a.n, a.dual), verdict.inputs_checked, started.elapsed());
    write_out(None, &to_json(&verdict)?)?;
    Ok(verdict_code(&verdict))
}

fn search(a: SearchArgs) -> Outcome {
    let mut spec = SearchSpec::new(a.n, a.dual, a.q);
    spec.budget = a.budget;
    if a.count_only {
        spec = spec.counting();
    }
    if let Some(l) = a.limit {
        spec = spec.with_limit(l);
    }
    for f in &a.filters {
        spec = spec.with_filter(f.parse::<Filter>()?);
    }
    let set = enumerate(&spec)?;
    eprintln!("{} solutions, {} nodes, {:.3?}", set.count, set.nodes_visited, set.elapsed);
    write_out(None, &to_json(&set)?)?;
    Ok(0)
}

/// Order of the equation solved by the map being projected, inferred from its arity.
fn infer_order(t: &FiniteMap, dual: bool) -> anyhow::Result<usize> {
    let (k_in, k_out) = t.arity();
    (3..=2 * k_in + 3)
        .find(|&m| map_arity(m, dual) == (k_in, k_out))
        .ok_or_else(|| anyhow!("a map with arity {:?} solves no {} equation", t.arity(), if dual { "dual" } else { "non-dual" }))
}

/// The result, and the equation it is claimed to solve.
fn reduce_op(a: &ReduceArgs, t: &FiniteMap) -> anyhow::Result<(FiniteMap, usize, bool)> {
    let op = a.op.as_str();
    if a.u.is_some() && matches!(op, "cut-first" | "cut-last" | "drop-first-arg" | "drop-last-arg" | "dual-tetragon-from-pair") {
        bail!("--u only applies to constructions");
    }
    Ok(match op {
        "cut-first" => {
            // An odd N+1 non-dual map or an even N+1 dual map.
            let dual = t.k_out() == t.k_in() + 1;
            let m = infer_order(t, dual)?;
            (project_cut_first_codomain(t, m - 1, dual)?, m - 1, dual)
        }
        "cut-last" => {
            let m = infer_order(t, true)?;
            (project_cut_last_codomain(t, m - 1)?, m - 1, false)
        }
        "drop-first-arg" | "drop-last-arg" => {
            let end = if op == "drop-first-arg" { End::First } else { End::Last };
            let m = infer_order(t, a.dual)?;
            let kind = Extension::ALL
                .into_iter()
                .find(|k| k.end() == end && k.target_dual() == a.dual && k.source().1 == (m - 1) % 2)
                .ok_or_else(|| anyhow!("no extension produces a {} map ignoring that argument", gon(m, a.dual)))?;
            (retract_degenerate(t, m - 1, kind)?, m - 1, kind.source().0)
        }
        "dual-tetragon-from-pair" => {
            let path = a.input2.as_ref().ok_or_else(|| anyhow!("dual-tetragon-from-pair needs --in2"))?;
            (reductions::dual_tetragon_from_pair(t, &read_map(path)?)?, 4, true)
        }
        name => {
            let c: Construction = name.parse()?;
            let out = match a.u {
                Some(u) => c.build_const(t, u)?,
                None => c.build(t)?,
            };
            let (n, dual) = c.target();
            (out, n, dual)
        }
    })
}

fn finish_map(out: Option<&Path>, t: &FiniteMap, check: Option<(usize, bool)>) -> Outcome {
    let mut code = 0;
    if let Some((n, dual)) = check {
        let v = check_single_par(n, dual, t)?;
        eprintln!("{} check: {}", gon(n, dual), if v.holds { "holds" } else { "fails" });
        if !v.holds {
            eprintln!("{}", to_json(&v)?);
        }
        code = verdict_code(&v);
    }
    write_out(out, &to_json(t)?)?;
    Ok(code)
}

fn reduce(a: ReduceArgs) -> Outcome {
    let t = read_map(&a.input)?;
    let (out, n, dual) = reduce_op(&a, &t)?;
    eprintln!("{}: {} map", a.op, gon(n, dual));
    finish_map(a.out.as_deref(), &out, a.verify.then_some((n, dual)))
}

fn extend(a: ExtendArgs) -> Outcome {
    let kind: Extension = a.thm.parse()?;
    let t = read_map(&a.input)?;
    let (source_dual, _) = kind.source();
    let n = infer_order(&t, source_dual)?;
    let out = extend_degenerate(&t, n, kind)?;
    eprintln!("{kind}: {} map to {} map", gon(n, source_dual), gon(n + 1, kind.target_dual()));
    finish_map(a.out.as_deref(), &out, a.verify.then_some((n + 1, kind.target_dual())))
}

fn conjectures(a: ConjectureArgs) -> Outcome {
    let started = Instant::now();
    let reports = check_conjectures(a.q, a.max_n)?;
    for r in &reports {
        let status = if r.error.is_some() {
            "skipped"
        } else if r.has_failure() {
            "COUNTEREXAMPLE"
        } else {
            "ok"
        };
        eprintln!(
            "conjecture {} n={} -> {}: {status} ({} sources, {} passed, {} failed, {} reverse failures)",
            r.id, r.n, r.target, r.sources, r.passed, r.failed, r.reverse_failed
        );
    }
    eprintln!("{:.3?}", started.elapsed());
    write_out(None, &to_json(&reports)?)?;
    Ok(if reports.iter().any(|r| r.has_failure()) { 4 } else { 0 })
}

fn catalog_cmd(a: CatalogArgs) -> Outcome {
    if a.list {
        let mut lines = Vec::new();
        for name in catalog::FINITE_NAMES {
            let eqs: Vec<String> = catalog::declared_equations(name).iter().map(|&(n, d)| gon(n, d)).collect();
            lines.push(format!("{name}\tfinite\t{}", eqs.join(", ")));
        }
        lines.push("projective-pentagon\trational\t5-gon".to_string());
        lines.push("dilog-dual-hexagon\trational\tdual 6-gon".to_string());
        write_out(None, &lines.join("\n"))?;
        return Ok(0);
    }
    let name = a.emit.ok_or_else(|| anyhow!("give --list or --emit NAME"))?;
    if catalog::RATIONAL_NAMES.contains(&name.as_str()) {
        return Err(anyhow!("{name} is a rational map and has no table").into());
    }
    let t = catalog::emit(&name, a.q, a.index)?;
    write_out(a.out.as_deref(), &to_json(&t)?)?;
    Ok(0)
}
