//! `advmatch`: instance generation, experiments, bound tables and checks.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use advmatch::advice::AdviceTape;
use advmatch::bits::MeteredBitSource;
use advmatch::derand::{
    all_inputs_family, arrival_order_family, build_covering_set, build_ratio_matrix, BitStringAlgorithm,
    CategoryAlgorithm, CoveringSet, FamilyInput, KvvAlgorithm, RatioMatrix,
};
use advmatch::engine::{random_permutation, ranking_run};
use advmatch::graph::BipartiteGraph;
use advmatch::harness::{bound_table, write_bound_csv, BoundKind, ExperimentConfig, GeneratorSpec, KeyValues};
use advmatch::lowerbounds::{
    advice_lb_per_request, ranking_lb_instance, semi_complete, sgkh_reduction_run, SgkhInstance, SgkhReport,
};
use advmatch::matching::max_matching;
use advmatch::online::{GreedyMatcher, TapeOptimalMatcher};
use advmatch::order::{ArrivalOrder, RankingPermutation};
use advmatch::sweep::exhaustive_sweep;
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "advmatch", version, about = "Online bipartite matching with advice: experiments and checks")]
struct Cli {
    /// `key = value` file; `#` starts a comment.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config's seed (`graph_seed` for `gen` and `lb-build`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the config's trial count.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Output file; standard output if absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Extra `key=value` pairs, applied after the config file.
    #[arg(long = "set", short = 's', global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Emit one instance in the text graph format.
    Gen,
    /// Run a Monte Carlo experiment and write the result artifact.
    Run,
    /// Tabulate closed-form bounds.
    Bounds,
    /// Build a lower-bound instance and report how Ranking fares on it.
    LbBuild,
    /// Drive a matcher through the string-guessing reduction.
    Sgkh,
    /// Build a covering set of random strings and its advice index.
    Derand,
    /// Run the exhaustive invariant sweeps.
    Selftest,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let mut kv = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            KeyValues::parse(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => KeyValues::default(),
    };
    for pair in &cli.set {
        let (k, v) = pair.split_once('=').with_context(|| format!("`--set {pair}` is not key=value"))?;
        kv.set(k.trim(), v.trim());
    }
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    let format = cli.format;
    match cli.command {
        Command::Gen => gen(kv, &cli, &mut out, format)?,
        Command::Run => run(kv, &cli, &mut out, format)?,
        Command::Bounds => bounds(&kv, &mut out, format)?,
        Command::LbBuild => lb_build(kv, &cli, &mut out, format)?,
        Command::Sgkh => sgkh(&kv, &cli, &mut out, format)?,
        Command::Derand => derand(kv, &cli, &mut out, format)?,
        Command::Selftest => {
            let ok = selftest(&kv, &mut out, format)?;
            out.flush()?;
            if !ok {
                bail!("selftest found violations");
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Rejects keys the subcommand would silently ignore.
fn allow_keys(kv: &KeyValues, allowed: &[&str]) -> Result<()> {
    if let Some(k) = kv.keys().find(|k| !allowed.contains(k)) {
        bail!("unknown key `{k}` (accepted here: {})", allowed.join(", "));
    }
    Ok(())
}

const GENERATOR_KEYS: &[&str] = &["generator", "c", "z", "n", "m", "p", "extra_edges", "graph_seed", "lb_eps", "sigma"];

fn write_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::Writer::from_writer(out)
}

fn edges_json(g: &BipartiteGraph) -> Value {
    json!(g.edges().map(|(a, b)| [a, b]).collect::<Vec<_>>())
}

fn gen(mut kv: KeyValues, cli: &Cli, out: &mut dyn Write, format: Option<Format>) -> Result<()> {
    allow_keys(&kv, GENERATOR_KEYS)?;
    if let Some(s) = cli.seed {
        kv.set("graph_seed", s);
    }
    let g = GeneratorSpec::from_kv(&kv)?.generate()?;
    match format {
        None => write!(out, "{g}")?,
        Some(Format::Json) => write_json(out, &json!({ "n": g.n(), "m": g.m(), "edges": edges_json(&g) }))?,
        Some(Format::Csv) => {
            let mut w = csv_writer(out);
            w.write_record(["a", "b"])?;
            for (a, b) in g.edges() {
                w.write_record([a.to_string(), b.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn run(kv: KeyValues, cli: &Cli, out: &mut dyn Write, format: Option<Format>) -> Result<()> {
    let mut cfg = ExperimentConfig::from_kv(kv)?;
    if let Some(t) = cli.trials {
        cfg = cfg.with_trials(t)?;
    }
    if let Some(s) = cli.seed {
        cfg = cfg.with_seed(s);
    }
    let result = advmatch::harness::run_experiment(&cfg)?;
    match format.unwrap_or(Format::Json) {
        Format::Json => {
            result.write_json(&mut *out)?;
            writeln!(out)?;
        }
        Format::Csv => result.write_csv(&mut *out)?,
    }
    Ok(())
}

fn bounds(kv: &KeyValues, out: &mut dyn Write, format: Option<Format>) -> Result<()> {
    allow_keys(kv, &["bound", "k", "k_min", "k_max", "c", "rho_max", "steps"])?;
    let kind = match kv.get("bound").unwrap_or("category_ratio") {
        "category_ratio" => BoundKind::CategoryRatio {
            k_min: kv.typed("k_min")?.unwrap_or(1),
            k_max: kv.typed("k_max")?.unwrap_or(10),
        },
        "advice_lb" => BoundKind::AdviceLb {
            c: kv.typed("c")?.unwrap_or(3),
            rho_max: kv.typed("rho_max")?.unwrap_or(0.999),
            steps: kv.typed("steps")?.unwrap_or(20),
        },
        "partial_sums" => BoundKind::PartialSums { k: kv.typed("k")?.unwrap_or(2) },
        other => bail!("unknown bound `{other}` (category_ratio, advice_lb, partial_sums)"),
    };
    let rows = bound_table(&kind)?;
    match format.unwrap_or(Format::Csv) {
        Format::Csv => write_bound_csv(&rows, out)?,
        Format::Json => {
            let objs: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(r.columns.iter().map(|(n, v)| (n.clone(), json!(v))).collect()))
                .collect();
            write_json(out, &Value::Array(objs))?;
        }
    }
    Ok(())
}

fn sigma_for(name: &str, m: usize, seed: u64) -> Result<RankingPermutation> {
    Ok(match name {
        "identity" => RankingPermutation::identity(m),
        "reverse" => RankingPermutation::reverse(m),
        "random" => random_permutation(m, &mut MeteredBitSource::new(seed))?,
        other => bail!("unknown ranking `{other}` (identity, reverse, random)"),
    })
}

fn lb_build(mut kv: KeyValues, cli: &Cli, out: &mut dyn Write, format: Option<Format>) -> Result<()> {
    allow_keys(&kv, &["family", "n", "lb_eps", "sigmas", "graph_seed", "c"])?;
    if let Some(s) = cli.seed {
        kv.set("graph_seed", s);
    }
    let family = kv.get("family").unwrap_or("ranking_lb").to_string();
    if family == "semi_complete" {
        let g = semi_complete(kv.require("c")?)?;
        match format {
            None => write!(out, "{g}")?,
            _ => write_json(out, &json!({ "family": family, "n": g.n(), "m": g.m(), "edges": edges_json(&g) }))?,
        }
        return Ok(());
    }
    if family != "ranking_lb" {
        bail!("unknown family `{family}` (ranking_lb, semi_complete)");
    }
    let n: usize = kv.require("n")?;
    let eps: f64 = kv.require("lb_eps")?;
    let seed: u64 = kv.typed("graph_seed")?.unwrap_or(0);
    let names: Vec<String> = kv.get("sigmas").unwrap_or("identity").split(',').map(|s| s.trim().to_string()).collect();
    let perms = names
        .iter()
        .enumerate()
        .map(|(i, name)| sigma_for(name, n, seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let pi = ArrivalOrder::identity(n);
    let inst = ranking_lb_instance(&perms, &pi, eps)?;
    let optimum = max_matching(&inst.graph).len();
    let sizes: Vec<usize> = perms.iter().map(|s| ranking_run(&inst.graph, &pi, s).len()).collect();
    match format {
        None => write!(out, "{}", inst.graph)?,
        Some(Format::Json) => write_json(
            out,
            &json!({
                "n": n,
                "eps": eps,
                "eps_prime": inst.eps_prime,
                "blocks": inst.blocks.blocks.len(),
                "block_sizes": inst.blocks.blocks.iter().map(Vec::len).collect::<Vec<_>>(),
                "leftover": inst.blocks.leftover.len(),
                "optimum": optimum,
                "block_bound": inst.block_bound(),
                "explicit_bound": inst.explicit_bound(),
                "asymptotic_bound": inst.asymptotic_bound(),
                "ranking": names.iter().zip(&sizes).map(|(s, k)| json!({ "sigma": s, "size": k })).collect::<Vec<_>>(),
                "graph": inst.graph.to_string(),
            }),
        )?,
        Some(Format::Csv) => {
            let mut w = csv_writer(out);
            w.write_record(["sigma", "ranking_size", "optimum", "blocks", "explicit_bound", "asymptotic_bound"])?;
            for (s, k) in names.iter().zip(&sizes) {
                w.write_record([
                    s.clone(),
                    k.to_string(),
                    optimum.to_string(),
                    inst.blocks.blocks.len().to_string(),
                    inst.explicit_bound().to_string(),
                    inst.asymptotic_bound().to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn sgkh(kv: &KeyValues, cli: &Cli, out: &mut dyn Write, format: Option<Format>) -> Result<()> {
    allow_keys(kv, &["c", "len", "seed", "matcher"])?;
    let c: usize = kv.typed("c")?.unwrap_or(3);
    let len: usize = kv.typed("len")?.unwrap_or(50);
    let seed = cli.seed.map_or_else(|| kv.typed("seed").map(|s| s.unwrap_or(0)), Ok)?;
    let q = u32::try_from(advmatch::lowerbounds::factorial(c)).context("c! does not fit the alphabet size")?;
    let inst = SgkhInstance::random(q, len, seed)?;
    let matcher = kv.get("matcher").unwrap_or("greedy");
    let report: SgkhReport = match matcher {
        "greedy" => sgkh_reduction_run(GreedyMatcher::new(), &inst, c)?,
        "optimal" => sgkh_reduction_run(TapeOptimalMatcher::new(inst.optimal_tape(c)?), &inst, c)?,
        other => bail!("unknown matcher `{other}` (greedy, optimal)"),
    };
    let violations = report.equivalence_violations(&inst);
    let optimum = max_matching(&report.graph).len();
    let rho = report.matching.len() as f64 / optimum.max(1) as f64;
    match format.unwrap_or(Format::Json) {
        Format::Json => {
            let lb = if rho < 1.0 { advice_lb_per_request(c, rho).ok() } else { None };
            write_json(
                out,
                &json!({
                    "c": c,
                    "q": q,
                    "len": len,
                    "seed": seed,
                    "matcher": matcher,
                    "target": inst.target(),
                    "predictions": report.predictions,
                    "correct": report.correct,
                    "perfect_blocks": report.perfect_blocks.iter().filter(|&&p| p).count(),
                    "equivalence_violations": violations,
                    "matching_size": report.matching.len(),
                    "optimum": optimum,
                    "ratio": rho,
                    "guaranteed_correct": (1.0 - (1.0 - rho) * c as f64) * len as f64,
                    "advice_bits": report.advice_bits,
                    "requests": report.requests,
                    "advice_lb_bits_per_request": lb,
                }),
            )?;
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["block", "target", "prediction", "perfect"])?;
            for (j, (&t, p)) in inst.target().iter().zip(&report.predictions).enumerate() {
                let pred = p.map_or_else(String::new, |r| r.to_string());
                w.write_record([j.to_string(), t.to_string(), pred, report.perfect_blocks[j].to_string()])?;
            }
            w.flush()?;
        }
    }
    if !violations.is_empty() {
        bail!("equivalence violated on blocks {violations:?}");
    }
    Ok(())
}

fn derand(kv: KeyValues, cli: &Cli, out: &mut dyn Write, format: Option<Format>) -> Result<()> {
    let mut allowed = vec!["algorithm", "k", "eps", "family"];
    allowed.extend_from_slice(GENERATOR_KEYS);
    allow_keys(&kv, &allowed)?;
    let mut kv = kv;
    if let Some(s) = cli.seed {
        kv.set("graph_seed", s);
    }
    let family: Vec<FamilyInput> = match kv.get("family").unwrap_or("arrival_orders") {
        "arrival_orders" => {
            if kv.get("generator").is_none() {
                kv.set("generator", "semi_complete");
                if kv.get("c").is_none() {
                    kv.set("c", 3);
                }
            }
            arrival_order_family(&GeneratorSpec::from_kv(&kv)?.generate()?)?
        }
        "all_inputs" => all_inputs_family(kv.require("n")?, kv.require("m")?)?,
        other => bail!("unknown family `{other}` (arrival_orders, all_inputs)"),
    };
    let eps: f64 = kv.typed("eps")?.unwrap_or(0.2);
    match kv.get("algorithm").unwrap_or("randomized_category") {
        "randomized_category" => {
            let alg = CategoryAlgorithm { k: kv.typed("k")?.unwrap_or(1) };
            derand_with(&family, &alg, eps, out, format)
        }
        "kvv" => derand_with(&family, &KvvAlgorithm, eps, out, format),
        other => bail!("unknown algorithm `{other}` (randomized_category, kvv)"),
    }
}

fn derand_with<A: BitStringAlgorithm>(
    family: &[FamilyInput],
    alg: &A,
    eps: f64,
    out: &mut dyn Write,
    format: Option<Format>,
) -> Result<()> {
    let mat: RatioMatrix = build_ratio_matrix(family, alg)?;
    let cover: CoveringSet = build_covering_set(&mat, eps)?;
    if let Err(e) = cover.validate(&mat) {
        bail!("covering set failed validation: {e}");
    }
    let tape_of = |pos: usize| AdviceTape::from_bits(cover.string(pos)).to_string();
    match format {
        None => write!(out, "{cover}")?,
        Some(Format::Json) => write_json(
            out,
            &json!({
                "inputs": family.len(),
                "random_bits": mat.r(),
                "expected_ratio": cover.expected_ratio().to_string(),
                "threshold": cover.threshold().to_string(),
                "strings": (0..cover.strings.len()).map(tape_of).collect::<Vec<_>>(),
                "cover": cover.cover,
                "index_bits": cover.index_bits(),
                "delta": cover.delta(),
                "classical_iteration_bound": cover.classical_iteration_bound(),
                "iterations": cover.iterations.iter().map(|it| json!({
                    "column": it.column,
                    "uncovered_before": it.uncovered_before,
                    "newly_covered": it.newly_covered,
                    "column_sum": it.column_sum,
                })).collect::<Vec<_>>(),
            }),
        )?,
        Some(Format::Csv) => {
            let mut w = csv_writer(out);
            w.write_record(["input", "string_position", "string", "ratio"])?;
            for (i, &pos) in cover.cover.iter().enumerate() {
                let ratio = mat.entry(i, cover.strings[pos]).to_string();
                w.write_record([i.to_string(), pos.to_string(), tape_of(pos), ratio])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn selftest(kv: &KeyValues, out: &mut dyn Write, format: Option<Format>) -> Result<bool> {
    allow_keys(kv, &["max_n", "max_m", "orders_max_n"])?;
    let max_n: usize = kv.typed("max_n")?.unwrap_or(4);
    let max_m: usize = kv.typed("max_m")?.unwrap_or(4);
    let orders: usize = kv.typed("orders_max_n")?.unwrap_or(max_n.min(4));
    if max_n == 0 || max_m == 0 || max_n > 6 || max_m > 6 || max_n * max_m > 25 {
        bail!("selftest sizes must satisfy 1 <= n, m <= 6 and n·m <= 25");
    }
    let report = exhaustive_sweep(max_n, max_m, orders);
    // the literal upgrade form is known to fail; it is reported, not required
    let required = [
        &report.monotonicity,
        &report.upgrade,
        &report.upgrade_new_ranks,
        &report.three_fifths,
        &report.greedy_half,
    ];
    let ok = required.iter().all(|s| s.passed());
    match format {
        None => {
            for s in report.suites() {
                writeln!(out, "{s}")?;
            }
            writeln!(out, "{}", if ok { "selftest passed" } else { "selftest FAILED" })?;
        }
        Some(Format::Json) => {
            let suites: Vec<Value> = report
                .suites()
                .iter()
                .map(|s| json!({ "name": s.name, "checked": s.checked, "violations": s.violations, "example": s.example }))
                .collect();
            write_json(out, &json!({ "max_n": max_n, "max_m": max_m, "passed": ok, "suites": suites }))?;
        }
        Some(Format::Csv) => {
            let mut w = csv_writer(out);
            w.write_record(["suite", "checked", "violations"])?;
            for s in report.suites() {
                w.write_record([s.name.clone(), s.checked.to_string(), s.violations.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(ok)
}
