//! Command-line front end. Every subcommand prints one report with a `pass`
//! field; the exit code is 0 on pass, 1 on a failed property, 2 on bad usage.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::cut_dimension::{cut_dimension, star_matching_expected_dimension, verify_span_bound};
use crate::error::{Error, Result};
use crate::games::{play_2n, play_pairs, Strategy};
use crate::generators::{random_directed_graph, random_permutation_instance, random_st_graph, random_undirected_graph, rng};
use crate::graph_learning::{
    cut_equivalent, indistinguishable_pair, learn_directed_up_to_cycles, learn_undirected, st_kernel_vector,
    st_query_vector, verify_st_kernel, weight_map,
};
use crate::hard_instances::{make_pair_family, FamilyMember, Verdict};
use crate::io::{graph_to_json, instance_from_json, pq_array, subset_json, witness_to_json, Instance};
use crate::linalg::dot;
use crate::oracle::{check_submodular, SetFunction, ValueOracle};
use crate::perturbation::{compute_epsilon0, find_witness, verify_equivalence};
use crate::rational::to_pq;
use crate::solvers::{brute_force_sfm, nontrivial_via_reduction, queyranne_minimize_checked};
use crate::subset::Subset;
use crate::weight_based::{build_star_matching_graph, WeightBasedFunction, WeightedGraph};

#[derive(Parser, Debug)]
#[command(name = "sfm-lab", version, about = "Exact experiments on query complexity of submodular minimization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: ExperimentConfig,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Exhaustive submodularity check.
    CheckSubmodular,
    /// Play the permutation-family adversary against a solver.
    #[command(name = "adversary-2n")]
    Adversary2n,
    /// Play the pair-family adversary against a solver.
    AdversaryPairs,
    /// Minimize a function with one of the reference solvers.
    Solve,
    /// Generalized cut dimension of a weight-based function.
    Cutdim,
    /// Perturbation witnesses and the equivalence check.
    Perturb,
    /// Base-set span bound on the full minimizer family.
    SpanBound,
    /// Learn a graph from cut queries.
    LearnGraph,
    /// s-t kernel certificate.
    StKernel,
    /// Random search for graphs with large cut dimension.
    SearchCutdim,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Undirected,
    Directed,
    St,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    StarMatching,
    PairFamily,
    Permutation,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverArg {
    Brute,
    TwoN,
    Truncated,
    Random,
    Reduction,
    Queyranne,
}

#[derive(Args, Debug, Clone)]
pub struct ExperimentConfig {
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Non-terminal vertex count for `st-kernel`.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Special vertex for `st-kernel` (1-based).
    #[arg(long, global = true, default_value_t = 1)]
    pub vertex: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, global = true)]
    pub nontrivial: bool,
    #[arg(long, global = true, value_enum)]
    pub construction: Option<Construction>,
    #[arg(long, global = true)]
    pub instance: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub solver: Option<SolverArg>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Parses `argv` (including the program name), runs, writes the report and
/// returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("usage error"));
            return 2;
        }
    };
    let report = match execute(cli.command, &cli.config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let text = match render(&report, cli.config.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let written = match &cli.config.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    if report.get("pass") == Some(&Value::Bool(true)) {
        0
    } else {
        1
    }
}

/// Runs one subcommand and returns its JSON report.
pub fn execute(cmd: Command, cfg: &ExperimentConfig) -> Result<Value> {
    match cmd {
        Command::CheckSubmodular => check_submodular_cmd(cfg),
        Command::Adversary2n => adversary_2n_cmd(cfg),
        Command::AdversaryPairs => adversary_pairs_cmd(cfg),
        Command::Solve => solve_cmd(cfg),
        Command::Cutdim => cutdim_cmd(cfg),
        Command::Perturb => perturb_cmd(cfg),
        Command::SpanBound => span_bound_cmd(cfg),
        Command::LearnGraph => learn_graph_cmd(cfg),
        Command::StKernel => st_kernel_cmd(cfg),
        Command::SearchCutdim => search_cutdim_cmd(cfg),
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidInstance(msg.into())
}

fn need_n(cfg: &ExperimentConfig) -> Result<usize> {
    cfg.n.ok_or_else(|| usage("--n is required"))
}

fn read_instance(cfg: &ExperimentConfig) -> Result<Option<Instance>> {
    let Some(path) = &cfg.instance else {
        return Ok(None);
    };
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    instance_from_json(&text).map(Some)
}

/// The named functions an invocation refers to.
fn functions(cfg: &ExperimentConfig) -> Result<Vec<(String, Box<dyn SetFunction + Send + Sync>)>> {
    if let Some(inst) = read_instance(cfg)? {
        let f: Box<dyn SetFunction + Send + Sync> = match inst {
            Instance::Graph(g) => Box::new(WeightBasedFunction::from_graph(&g)),
            Instance::Permutation(p) => Box::new(p),
            Instance::CostBased(c) => Box::new(c),
        };
        return Ok(vec![("instance".into(), f)]);
    }
    let n = need_n(cfg)?;
    match cfg.construction {
        Some(Construction::StarMatching) => Ok(vec![(
            "star_matching".into(),
            Box::new(WeightBasedFunction::from_graph(&build_star_matching_graph(n)?)),
        )]),
        Some(Construction::PairFamily) => {
            let fam = make_pair_family(n)?;
            let mut out: Vec<(String, Box<dyn SetFunction + Send + Sync>)> =
                vec![("base".into(), Box::new(fam.base().clone()))];
            for (&(i, j), f) in fam.variants() {
                out.push((format!("f_{i}_{j}"), Box::new(f.clone())));
            }
            Ok(out)
        }
        Some(Construction::Permutation) => (0..cfg.trials.unwrap_or(1))
            .map(|t| {
                let p = random_permutation_instance(&mut rng(cfg.seed.wrapping_add(t as u64)), n)?;
                Ok((format!("trial_{t}"), Box::new(p) as Box<dyn SetFunction + Send + Sync>))
            })
            .collect(),
        None => Err(usage("give --instance or --construction")),
    }
}

/// A graph from `--instance`, the star-matching construction, or a seeded
/// random graph of the given `--mode`.
fn graph(cfg: &ExperimentConfig) -> Result<(WeightedGraph, bool)> {
    match read_instance(cfg)? {
        Some(Instance::Graph(g)) => return Ok((g, cfg.nontrivial)),
        Some(_) => return Err(usage("this subcommand needs a graph instance")),
        None => {}
    }
    let n = need_n(cfg)?;
    match (cfg.construction, cfg.mode) {
        (Some(Construction::StarMatching), _) => Ok((build_star_matching_graph(n)?, true)),
        (Some(_), _) => Err(usage("this subcommand needs a graph construction")),
        (None, Some(mode)) => Ok((random_graph(mode, n, cfg.seed)?, cfg.nontrivial)),
        (None, None) => Err(usage("give --instance, --construction star-matching, or --mode")),
    }
}

fn random_graph(mode: ModeArg, n: usize, seed: u64) -> Result<WeightedGraph> {
    let mut r = rng(seed);
    match mode {
        ModeArg::Undirected => random_undirected_graph(&mut r, n, 0.5),
        ModeArg::Directed => random_directed_graph(&mut r, n, 0.4),
        ModeArg::St => random_st_graph(&mut r, n, 0.4, true),
    }
}

fn check_submodular_cmd(cfg: &ExperimentConfig) -> Result<Value> {
    let fs = functions(cfg)?;
    let mut violation = Value::Null;
    for (name, f) in &fs {
        if let Some((x, y)) = check_submodular(f)? {
            violation = json!({ "function": name, "x": subset_json(x), "y": subset_json(y) });
            break;
        }
    }
    Ok(json!({
        "n": fs[0].1.ground_size(),
        "functions_checked": fs.len(),
        "pass": violation.is_null(),
        "violation": violation,
    }))
}

fn strategy(cfg: &ExperimentConfig, default: Strategy) -> Result<Strategy> {
    Ok(match cfg.solver {
        None => default,
        Some(SolverArg::Brute) => Strategy::Brute,
        Some(SolverArg::TwoN) => Strategy::TwoN,
        Some(SolverArg::Truncated) => Strategy::Truncated,
        Some(SolverArg::Random) => Strategy::Random,
        Some(s) => return Err(usage(format!("solver {s:?} cannot play this game"))),
    })
}

fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::Brute => "brute",
        Strategy::TwoN => "two-n",
        Strategy::Truncated => "truncated",
        Strategy::Random => "random",
    }
}

fn adversary_2n_cmd(cfg: &ExperimentConfig) -> Result<Value> {
    let n = need_n(cfg)?;
    let strat = strategy(cfg, Strategy::TwoN)?;
    let r = play_2n(n, strat, cfg.seed)?;
    Ok(json!({
        "n": n,
        "solver": strategy_name(strat),
        "queries_used": r.queries_used,
        "distinct_important": r.distinct_important,
        "decoy_count": r.decoy_count,
        "guess": to_pq(&r.guess),
        "true_min": to_pq(&r.finalized.true_min),
        "verdict": match r.finalized.verdict { Verdict::Fooled => "fooled", Verdict::Correct => "correct" },
        "sigma": r.finalized.instance.sigma(),
        "c": r.finalized.instance.c(),
        "replay_consistent": r.replay_consistent,
        "counting_invariant": r.counting_invariant,
        "pass": r.passed(),
    }))
}

fn adversary_pairs_cmd(cfg: &ExperimentConfig) -> Result<Value> {
    let n = need_n(cfg)?;
    let strat = strategy(cfg, Strategy::Truncated)?;
    let r = play_pairs(n, strat, cfg.seed)?;
    let member = match r.fooled_by {
        None => Value::Null,
        Some(FamilyMember::Base) => json!("base"),
        Some(FamilyMember::Pair(i, j)) => json!([i, j]),
    };
    Ok(json!({
        "n": n,
        "solver": strategy_name(strat),
        "queries_used": r.queries_used,
        "co_pair_queries": r.co_pair_queries,
        "guess": to_pq(&r.guess),
        "fooled": r.fooled_by.is_some(),
        "member": member,
        "fooling_min": r.fooling_min.as_ref().map(to_pq),
        "pass": r.passed(),
    }))
}

fn solve_cmd(cfg: &ExperimentConfig) -> Result<Value> {
    let fs = functions(cfg)?;
    let (_, f) = &fs[0];
    let n = f.ground_size();
    let solver = cfg.solver.unwrap_or(SolverArg::Brute);
    let (nontrivial, result) = match solver {
        SolverArg::Brute => (cfg.nontrivial, brute_force_sfm(&mut ValueOracle::new(f), cfg.nontrivial)?),
        SolverArg::Reduction => (true, nontrivial_via_reduction(&mut ValueOracle::new(f))?),
        SolverArg::Queyranne => match queyranne_minimize_checked(f) {
            Ok(r) => (true, r),
            Err(Error::NotSymmetric(s)) => {
                return Ok(json!({ "solver": "queyranne", "not_symmetric_at": subset_json(s), "pass": false }))
            }
            Err(e) => return Err(e),
        },
        SolverArg::TwoN => {
            let mut o = ValueOracle::new(f);
            let (v, s) = crate::hard_instances::solve_permutation_family(&mut o)?;
            let used = o.counter();
            (false, crate::solvers::SolverResult { min_value: v, argmin: s, queries_used: used })
        }
        s => return Err(usage(format!("solver {s:?} is a game strategy, not a minimizer"))),
    };
    let reference = if n <= 16 { Some(brute_force_sfm(&mut ValueOracle::new(f), nontrivial)?) } else { None };
    let consistent = f.value(result.argmin) == result.min_value;
    let agrees = reference.as_ref().is_none_or(|b| b.min_value == result.min_value);
    Ok(json!({
        "solver": format!("{solver:?}").to_lowercase(),
        "n": n,
        "nontrivial": nontrivial,
        "min_value": to_pq(&result.min_value),
        "argmin": subset_json(result.argmin),
        "queries_used": result.queries_used,
        "brute_force_min": reference.map(|b| to_pq(&b.min_value)),
        "pass": consistent && agrees,
    }))
}

fn cutdim_cmd(cfg: &ExperimentConfig) -> Result<Value> {
    let (g, nontrivial) = graph(cfg)?;
    let f = WeightBasedFunction::from_graph(&g);
    let cd = cut_dimension(&f, nontrivial)?;
    if cfg.instance.is_none() && cfg.construction == Some(Construction::StarMatching) {
        let expected = star_matching_expected_dimension(g.n_vertices());
        return Ok(json!({ "d": cd.d, "expected": expected, "pass": cd.d == expected }));
    }
    Ok(json!({
        "d": cd.d,
        "n": f.ground_size(),
        "m": f.system().m(),
        "nontrivial": nontrivial,
        "min_value": to_pq(&cd.family.min_value),
        "minimizers": cd.family.sets.len(),
        "basis": cd.basis.iter().map(|&s| subset_json(s)).collect::<Vec<_>>(),
        "pass": true,
    }))
}

fn perturb_cmd(cfg: &ExperimentConfig) -> Result<Value> {
    let (g, nontrivial) = graph(cfg)?;
    let f = WeightBasedFunction::from_graph(&g);
    let n = f.ground_size();
    let trials = cfg.trials.unwrap_or(200);
    let pbox = compute_epsilon0(&f, nontrivial)?;
    let report = verify_equivalence(&f, nontrivial, trials, cfg.seed)?;
    let witness = if report.d >= 1 {
        let mut r = rng(cfg.seed);
        let queries: Vec<Subset> = (0..report.d - 1)
            .map(|_| Subset::new(n, r.gen_range(0..(1u32 << n))).expect("mask is in range"))
            .collect();
        find_witness(&f, nontrivial, &queries)?.map(|w| {
            let mut v = witness_to_json(&w);
            v["queries"] = json!(queries.iter().map(|&q| subset_json(q)).collect::<Vec<_>>());
            v
        })
    } else {
        None
    };
    Ok(json!({
        "d": report.d,
        "epsilon0": to_pq(&pbox.epsilon0),
        "gap": pbox.gap.as_ref().map(to_pq),
        "trials": report.trials,
        "witnesses_found": report.witnesses_found,
        "basis_blocks": report.basis_blocks,
        "gram_rank": report.gram_rank,
        "failures": report.failures,
        "witness": witness,
        "pass": report.passed(),
    }))
}

fn span_bound_cmd(cfg: &ExperimentConfig) -> Result<Value> {
    let (g, _) = graph(cfg)?;
    let f = WeightBasedFunction::from_graph(&g);
    let n = f.ground_size();
    let r = verify_span_bound(&f)?;
    Ok(json!({
        "n": n,
        "d": r.d,
        "base_count": r.base_count,
        "minimizers": r.family.sets.len(),
        "failure": r.failure.as_ref().map(|x| format!("{x:?}")),
        "pass": r.passed() && r.d <= n + 1,
    }))
}

fn learn_graph_cmd(cfg: &ExperimentConfig) -> Result<Value> {
    let (g, _) = graph(cfg)?;
    let n = g.n_vertices();
    let mut oracle = ValueOracle::new(WeightBasedFunction::from_graph(&g));
    match g.mode() {
        crate::weight_based::GraphMode::Undirected => {
            let learned = learn_undirected(&mut oracle)?;
            let exact = weight_map(&learned) == weight_map(&g);
            Ok(json!({
                "mode": "undirected",
                "n": n,
                "queries_used": oracle.counter(),
                "expected_queries": n + n * (n - 1) / 2,
                "exact": exact,
                "learned": graph_to_json(&learned),
                "pass": exact && oracle.counter() == n + n * (n - 1) / 2,
            }))
        }
        crate::weight_based::GraphMode::Directed => {
            let cert = learn_directed_up_to_cycles(&mut oracle)?;
            let residual: Vec<Value> = cert
                .residual
                .iter()
                .map(|s| json!({ "cycle": s.cycle, "amount": to_pq(&s.amount) }))
                .collect();
            let equivalent = n > 12 || cut_equivalent(&cert.learned, &g)?.is_none();
            Ok(json!({
                "mode": "directed",
                "n": n,
                "learning_queries": cert.learning_queries,
                "agrees_on_all_cuts": cert.agrees_on_all_cuts,
                "exact": weight_map(&cert.learned) == weight_map(&g),
                "residual": residual,
                "learned": graph_to_json(&cert.learned),
                "canonical": graph_to_json(&cert.canonical),
                "pass": cert.agrees_on_all_cuts && equivalent,
            }))
        }
        crate::weight_based::GraphMode::St { .. } => Err(usage("s-t graphs are not learnable; see st-kernel")),
    }
}

fn st_kernel_cmd(cfg: &ExperimentConfig) -> Result<Value> {
    let k = cfg.k.or(cfg.n).unwrap_or(3);
    if k > 12 {
        return Err(Error::EnumerationLimit { what: "s-t kernel scan", n: k, limit: 12 });
    }
    let kv = match st_kernel_vector(k, cfg.vertex) {
        Ok(kv) => kv,
        Err(Error::Degenerate(_)) => return Ok(json!({ "k": k, "determinable": true, "pass": true })),
        Err(e) => return Err(e),
    };
    let report = verify_st_kernel(&kv)?;
    let inner: Vec<String> = Subset::all(k).map(|s| to_pq(&dot(&st_query_vector(k, s), &kv.beta))).collect();
    let (a, b) = indistinguishable_pair(k, cfg.vertex)?;
    let indistinguishable = cut_equivalent(&a, &b)?.is_none();
    let edge_differs = a.edges()[2 * (cfg.vertex - 1)].weight != b.edges()[2 * (cfg.vertex - 1)].weight;
    Ok(json!({
        "k": k,
        "u_star": cfg.vertex,
        "beta": pq_array(&kv.beta),
        "inner_products": inner,
        "unit_inner_product": to_pq(&report.unit_inner_product),
        "inner_product_with_offdiagonal_one_over_k": to_pq(&report.offdiagonal_one_over_k),
        "indistinguishable": indistinguishable,
        "source_edge_differs": edge_differs,
        "pass": report.passed() && indistinguishable && edge_differs,
    }))
}

fn search_cutdim_cmd(cfg: &ExperimentConfig) -> Result<Value> {
    let n = cfg.n.unwrap_or(6);
    let trials = cfg.trials.unwrap_or(32);
    let mode = cfg.mode.unwrap_or(ModeArg::Undirected);
    if mode == ModeArg::St {
        return Err(usage("search-cutdim supports undirected and directed graphs"));
    }
    let found: Vec<(usize, WeightedGraph)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = random_graph(mode, n, cfg.seed.wrapping_add(t as u64))?;
            let d = cut_dimension(&WeightBasedFunction::from_graph(&g), true)?.d;
            Ok((d, g))
        })
        .collect::<Result<Vec<_>>>()?;
    let best = found
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.0.cmp(&b.0).then(j.cmp(i)))
        .map(|(i, (d, g))| json!({ "trial": i, "d": d, "graph": graph_to_json(g) }));
    Ok(json!({
        "n": n,
        "trials": trials,
        "dims": found.iter().map(|(d, _)| *d).collect::<Vec<_>>(),
        "best": best,
        "pass": true,
    }))
}

/// JSON is pretty-printed with sorted keys. CSV has one header row and one
/// value row; nested values are embedded as compact JSON.
pub fn render(report: &Value, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report).expect("report serializes") + "\n"),
        Format::Csv => {
            let empty = Map::new();
            let obj = report.as_object().unwrap_or(&empty);
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::InvalidInstance(e.to_string());
            w.write_record(obj.keys()).map_err(io)?;
            w.write_record(obj.values().map(|v| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            }))
            .map_err(io)?;
            let bytes = w.into_inner().map_err(|e| Error::InvalidInstance(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}
