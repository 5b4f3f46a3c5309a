//! Command-line front end for the k-distant submodular solvers.
//!
//! Structured results go to stdout as a single JSON object (byte-identical
//! for identical inputs and seeds); progress, traces and wall times go to
//! stderr. Exit codes: 0 success, 1 infeasible input or violation or
//! error, 2 internal-consistency failure.

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use kdsm::apps::clique::Graph;
use kdsm::apps::matroid::{build_min_rank, solve_weighted_matroid_intersection, Matroid};
use kdsm::apps::random::{gen_random_kdistant, Strategy};
use kdsm::apps::gen_clique_function;
use kdsm::error::Error;
use kdsm::family::{build_family, family_size_bound, sort_elements};
use kdsm::io::{
    parse_graph, parse_instance, parse_integer_weights, parse_matroid, parse_weights,
    serialize_instance,
};
use kdsm::minimizer::{minimize, MembershipKind, MinimizeOptions};
use kdsm::optimizer::maximize_over_pf;
use kdsm::rational::{format_rational, Rational};
use kdsm::reference::bruteforce_maximize_full;
use kdsm::set_function::{normalize, value_bounds, KDistantVerdict, SetFunction};
use kdsm::subset::Subset;

#[derive(Parser)]
#[command(name = "kdsm", about = "Solvers for k-distant submodular set functions", version)]
struct Cli {
    /// Log level for stderr traces (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "warn")]
    log: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustively verify the k-distant submodular inequality.
    Check(CheckArgs),
    /// Value bounds of a normalized instance from its small-set sum.
    Bounds(BoundsArgs),
    /// Print the restricted constraint family for a weight vector.
    Family(FamilyArgs),
    /// Maximize w'x over P(f) with an exact dual certificate.
    Maximize(MaximizeArgs),
    /// Minimize an integer-valued k-distant function.
    Minimize(MinimizeArgs),
    /// Generate instances (strategies: rejection, cut, minrank, clique,
    /// indicator_shifted).
    Gen(GenArgs),
    /// Weighted matroid intersection under the minimum rank oracle.
    Mi(MiArgs),
    /// Seeded scaling benchmark over (n, k, strategy).
    Bench(BenchArgs),
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    instance: String,
    /// Distance parameter to verify; defaults to the instance's declared k.
    #[arg(long)]
    k: Option<usize>,
    /// Size guard override for the exhaustive pair scan.
    #[arg(long, default_value_t = 14)]
    guard: usize,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    instance: String,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Weight file; defaults to all-ones (identity ordering).
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Args)]
struct MaximizeArgs {
    #[arg(long)]
    instance: String,
    #[arg(long)]
    weights: String,
    /// Cross-check feasibility and optimality against the full 2^n
    /// constraint program (n <= 12).
    #[arg(long)]
    verify: bool,
    /// JSON is the only output mode; accepted for script compatibility.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MinimizeArgs {
    #[arg(long)]
    instance: String,
    #[arg(long)]
    k: Option<usize>,
    /// Exhaustive cross-check of the result (n <= 24).
    #[arg(long)]
    verify: bool,
    /// Emit binary-search progress on stderr.
    #[arg(long)]
    trace: bool,
    /// Ellipsoid iteration budget override (also: KDSM_BUDGET).
    #[arg(long)]
    budget: Option<usize>,
    /// JSON is the only output mode; accepted for script compatibility.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    /// rejection | cut | minrank | clique | indicator_shifted
    strategy: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Clique strategy: explicit graph file instead of a random graph.
    #[arg(long)]
    graph: Option<String>,
    /// Minrank strategy: explicit forbidden-set file
    /// {"r":2,"m1":[[1,2]],"m2":[[3,4]]}.
    #[arg(long)]
    forbidden: Option<String>,
}

#[derive(Args)]
struct MiArgs {
    #[arg(long)]
    m1: String,
    #[arg(long)]
    m2: String,
    #[arg(long)]
    weights: String,
    /// Near-uniformity parameter of the pair.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Cross-check against exhaustive search (n <= 8).
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    #[arg(long, default_value_t = 4)]
    max_k: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .parse_filters(&cli.log)
        .format_timestamp(None)
        .init();
    let started = Instant::now();
    let outcome = run(&cli.command);
    eprintln!("wall time: {:?}", started.elapsed());
    match outcome {
        Ok((value, code)) => {
            println!("{}", serde_json::to_string(&value).expect("serializable output"));
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            println!("{}", json!({ "error": e.to_string() }));
            match e {
                Error::InternalConsistency(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(command: &Command) -> Result<(Value, ExitCode), Error> {
    match command {
        Command::Check(args) => check(args),
        Command::Bounds(args) => bounds(args),
        Command::Family(args) => family(args),
        Command::Maximize(args) => maximize(args),
        Command::Minimize(args) => do_minimize(args),
        Command::Gen(args) => gen(args),
        Command::Mi(args) => mi(args),
        Command::Bench(args) => bench(args),
    }
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Format(format!("cannot read stdin: {e}")))?;
        return Ok(buf);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {path}: {e}")))
}

fn load_instance(path: &str) -> Result<SetFunction, Error> {
    parse_instance(&read_input(path)?)
}

fn render(f: &SetFunction, s: Subset) -> Value {
    json!(f.ground().render(s))
}

fn check(args: &CheckArgs) -> Result<(Value, ExitCode), Error> {
    let f = load_instance(&args.instance)?;
    let k = args.k.unwrap_or_else(|| f.declared_k());
    match kdsm::set_function::is_k_distant_with_guard(&f, k, args.guard)? {
        KDistantVerdict::Holds => Ok((json!({ "holds": true, "k": k }), ExitCode::SUCCESS)),
        KDistantVerdict::Violation { x, y } => Ok((
            json!({
                "holds": false,
                "k": k,
                "violation": { "x": render(&f, x), "y": render(&f, y) },
            }),
            ExitCode::from(1),
        )),
    }
}

fn bounds(args: &BoundsArgs) -> Result<(Value, ExitCode), Error> {
    let f = load_instance(&args.instance)?;
    let k = args.k.unwrap_or_else(|| f.declared_k());
    let (f0, offset) = normalize(&f);
    let b = value_bounds(&f0, k)?;
    Ok((
        json!({
            "M": format_rational(&b.small_set_sum),
            "lower": format_rational(&b.lower),
            "upper": format_rational(&b.upper),
            "abs_bound": format_rational(&b.abs_bound),
            "offset": format_rational(&offset),
        }),
        ExitCode::SUCCESS,
    ))
}

fn family(args: &FamilyArgs) -> Result<(Value, ExitCode), Error> {
    let w: Vec<Rational> = match &args.weights {
        Some(path) => parse_weights(&read_input(path)?)?,
        None => vec![Rational::from_integer(1.into()); args.n],
    };
    if w.len() != args.n {
        return Err(Error::DimensionMismatch { expected: args.n, got: w.len() });
    }
    let ordering = sort_elements(&w)?;
    let fam = build_family(&ordering, args.k)?;
    let members: Vec<Vec<String>> = fam
        .members()
        .iter()
        .map(|m| m.iter().map(|i| (i + 1).to_string()).collect())
        .collect();
    Ok((
        json!({
            "n": args.n,
            "k": args.k,
            "size": fam.len(),
            "bound": family_size_bound(args.n, args.k).to_string(),
            "ordering": ordering.perm().iter().map(|e| e + 1).collect::<Vec<_>>(),
            "members": members,
        }),
        ExitCode::SUCCESS,
    ))
}

fn maximize(args: &MaximizeArgs) -> Result<(Value, ExitCode), Error> {
    let f = load_instance(&args.instance)?;
    let w = parse_weights(&read_input(&args.weights)?)?;
    let res = maximize_over_pf(&f, f.declared_k(), &w)?;
    let mut verified = Value::Null;
    if args.verify {
        let (f0, _) = normalize(&f);
        let reference = bruteforce_maximize_full(&f0, &w)?;
        if reference.value != res.value {
            return Err(Error::InternalConsistency(format!(
                "restricted optimum {} differs from the full program optimum {}",
                format_rational(&res.value),
                format_rational(&reference.value)
            )));
        }
        for t in kdsm::subset::all_subsets(f.n()) {
            let xt: Rational = t.iter().map(|i| res.x[i].clone()).sum();
            if xt > f0.eval(t) {
                return Err(Error::InternalConsistency(format!(
                    "vertex violates the constraint of {t:?}"
                )));
            }
        }
        verified = json!(true);
    }
    let y: Vec<Value> = res
        .y
        .iter()
        .map(|(t, v)| json!({ "set": f.ground().render(*t), "weight": format_rational(v) }))
        .collect();
    Ok((
        json!({
            "value": format_rational(&res.value),
            "x": res.x.iter().map(format_rational).collect::<Vec<_>>(),
            "y": y,
            "family_size": res.family.len(),
            "lp_pivots": res.lp_pivots,
            "verified": verified,
        }),
        ExitCode::SUCCESS,
    ))
}

fn do_minimize(args: &MinimizeArgs) -> Result<(Value, ExitCode), Error> {
    let f = load_instance(&args.instance)?;
    let k = args.k.unwrap_or_else(|| f.declared_k());
    let opts = MinimizeOptions { budget: args.budget, verify: args.verify };
    let res = minimize(&f, k, &opts)?;
    if args.trace {
        for step in &res.trace {
            match &step.verdict {
                MembershipKind::Nonnegative => {
                    eprintln!("shift {}: nonnegative", format_rational(&step.shift))
                }
                MembershipKind::Witness { set, value } => eprintln!(
                    "shift {}: witness {:?} with value {}",
                    format_rational(&step.shift),
                    set,
                    format_rational(value)
                ),
            }
        }
    }
    Ok((
        json!({
            "min": format_rational(&res.min_value),
            "argmin": render(&f, res.argmin),
            "offset": format_rational(&res.offset),
            "oracle_calls": res.oracle_calls,
            "search_steps": res.trace.len(),
        }),
        ExitCode::SUCCESS,
    ))
}

fn gen(args: &GenArgs) -> Result<(Value, ExitCode), Error> {
    let strategy = Strategy::parse(&args.strategy)?;
    let f = match (strategy, &args.graph, &args.forbidden) {
        (Strategy::Clique, Some(path), _) => {
            let graph: Graph = parse_graph(&read_input(path)?)?;
            if graph.nv() != args.n {
                return Err(Error::DimensionMismatch { expected: args.n, got: graph.nv() });
            }
            if args.k < 3 {
                return Err(Error::UnsupportedStrategy("clique instances need k >= 3".into()));
            }
            let kc = (args.k - 1) / 2;
            gen_clique_function(&graph, kc)?.with_declared_k(args.k)?
        }
        (Strategy::MinRank, _, Some(path)) => {
            let spec: Value = serde_json::from_str(&read_input(path)?)
                .map_err(|e| Error::Format(format!("invalid forbidden-set JSON: {e}")))?;
            let r = spec["r"]
                .as_u64()
                .ok_or_else(|| Error::Format("missing rank r".into()))? as usize;
            let m1 = Matroid::sparse_paving(args.n, r, read_sets(&spec, "m1", args.n)?)?;
            let m2 = Matroid::sparse_paving(args.n, r, read_sets(&spec, "m2", args.n)?)?;
            if args.k < 4 {
                return Err(Error::UnsupportedStrategy("sparse paving pairs need k >= 4".into()));
            }
            let inst = build_min_rank(&m1, &m2, 1)?;
            inst.rmin.to_dense()?.with_declared_k(args.k)?
        }
        _ => gen_random_kdistant(args.n, args.k, args.seed, strategy)?,
    };
    let serialized = serialize_instance(&f)?;
    let parsed: Value = serde_json::from_str(&serialized).expect("serializer emits JSON");
    Ok((parsed, ExitCode::SUCCESS))
}

fn read_sets(spec: &Value, key: &str, n: usize) -> Result<Vec<Subset>, Error> {
    let arr = spec[key]
        .as_array()
        .ok_or_else(|| Error::Format(format!("missing {key}")))?;
    arr.iter()
        .map(|elems| {
            let list = elems
                .as_array()
                .ok_or_else(|| Error::Format(format!("{key} entries must be element lists")))?;
            let mut s = Subset::EMPTY;
            for e in list {
                let e = e.as_u64().unwrap_or(0) as usize;
                if e == 0 || e > n {
                    return Err(Error::Format(format!("element {e} outside 1..={n}")));
                }
                s = s.insert(e - 1);
            }
            Ok(s)
        })
        .collect()
}

fn mi(args: &MiArgs) -> Result<(Value, ExitCode), Error> {
    let m1 = parse_matroid(&read_input(&args.m1)?)?;
    let m2 = parse_matroid(&read_input(&args.m2)?)?;
    let w = parse_integer_weights(&read_input(&args.weights)?)?;
    let inst = build_min_rank(&m1, &m2, args.k)?;
    let res = solve_weighted_matroid_intersection(&inst, &w)?;
    if args.verify {
        let (best, _) = kdsm::reference::bruteforce_common_independent(&m1, &m2, &w)?;
        if best != res.weight {
            return Err(Error::InternalConsistency(format!(
                "intersection weight {} differs from exhaustive best {best}",
                res.weight
            )));
        }
    }
    Ok((
        json!({
            "weight": res.weight,
            "set": res.common_independent.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>(),
            "x": res.x.iter().map(format_rational).collect::<Vec<_>>(),
            "cuts": res.cuts.len(),
            "separation_calls": res.separation_calls,
        }),
        ExitCode::SUCCESS,
    ))
}

fn bench(args: &BenchArgs) -> Result<(Value, ExitCode), Error> {
    let mut rows = Vec::new();
    eprintln!(
        "{:>3} {:>3} {:>18} {:>8} {:>13} {:>6} {:>8}",
        "n", "k", "strategy", "min", "oracle_calls", "steps", "wall_ms"
    );
    for n in 4..=args.max_n {
        for k in 2..=args.max_k.min(n) {
            for strategy in Strategy::ALL {
                if !strategy.supports(n, k) {
                    continue;
                }
                let f = gen_random_kdistant(n, k, args.seed, strategy)?;
                let t0 = Instant::now();
                let res = minimize(&f, k, &MinimizeOptions::default())?;
                let wall_ms = t0.elapsed().as_millis() as u64;
                eprintln!(
                    "{:>3} {:>3} {:>18} {:>8} {:>13} {:>6} {:>8}",
                    n,
                    k,
                    strategy.name(),
                    format_rational(&res.min_value),
                    res.oracle_calls,
                    res.trace.len(),
                    wall_ms
                );
                rows.push(json!({
                    "n": n,
                    "k": k,
                    "strategy": strategy.name(),
                    "min": format_rational(&res.min_value),
                    "oracle_calls": res.oracle_calls,
                    "search_steps": res.trace.len(),
                    "wall_ms": wall_ms,
                }));
            }
        }
    }
    Ok((json!({ "rows": rows }), ExitCode::SUCCESS))
}
