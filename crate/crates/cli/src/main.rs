use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cutlab::aggregation::{
    aggregation_closure_outer, cg_1row_vs_aggregated, knapsack_hull_cuts, objective_sample, one_row_closure,
    sign_pattern_experiment, verify_aggregation_bound, AggRow, CgGapReport, MultiplierParams,
};
use cutlab::cuts::gomory::gomory_loop;
use cutlab::cuts::{
    aggregate, cg_cut, embed, gmic_from_tableau, mir_cut, subadditive_cut, AggregateOptions, Cut, Embedding,
    Provenance, SubadditiveFn,
};
use cutlab::geometry::{solve_lp, Direction, Sense};
use cutlab::instance::generate::{derive_seed, generate, generate_polytope, GenSpec};
use cutlab::instance::io::{parse_instance, parse_polytope, polytope_to_json, to_value};
use cutlab::instance::MilpInstance;
use cutlab::rational::{self, Rational};
use cutlab::report::{RunInfo, SparsityRow};
use cutlab::selection::{select, CutPool, Policy};
use cutlab::sparsity::{
    dist_pk, fractional_chromatic, interaction_graph, sparse_distance_bound, sparsify_cut, verify_eta_bound,
    SparsifierInput, SparsifyStats, SupportList,
};
use cutlab::{verify, Caps};

mod fixtures;

/// Exact-arithmetic cutting-plane experiments on small MILPs.
#[derive(Parser, Debug)]
#[command(
    name = "cutlab",
    version,
    after_help = "Environment:\n  CUTLAB_CAPS  cap overrides, e.g. `dim=12,points=2000000,dist=12,graph=16`;\n               --cap-n and --cap-points take precedence.\n\nExit codes: 0 success, 1 a checked invariant failed, 2 usage or input error."
)]
struct Cli {
    /// Master seed; every report records it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when absent).
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    /// Largest dimension handed to vertex or facet enumeration.
    #[arg(long, global = true)]
    cap_n: Option<usize>,
    /// Largest number of integer assignments enumerated.
    #[arg(long, global = true)]
    cap_points: Option<u64>,
    /// Sample budget: random multipliers or objectives, per command.
    #[arg(long, global = true, default_value_t = 20)]
    budget: usize,
    /// Selection policy JSON (keys w_depth, w_sparsity, w_dynamism, tau, K, D).
    #[arg(long, global = true)]
    policy: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance (or a 0/1 polytope with `--kind polytope`).
    Gen(GenArgs),
    /// Generate cuts of one family for an instance.
    Cuts(CutsArgs),
    /// Select cuts from a pool at the LP optimum of an instance.
    Select(SelectArgs),
    /// Pure-integer Gomory cutting-plane loop.
    Gomory(GomoryArgs),
    /// Sparse closures, distance bound and sparsifier.
    #[command(subcommand)]
    Sparsity(SparsityCmd),
    /// Interaction graphs and block-sparse closures.
    #[command(subcommand)]
    Blocks(BlocksCmd),
    /// Aggregation closures and experiments.
    #[command(subcommand)]
    Agg(AggCmd),
    /// Run every acceptance check (and the fixture checks when given).
    VerifyAll(VerifyArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// 2ssp, market-split, random-equality, random-packing,
    /// partitioned-packing, sign-pattern, one-row-gap, polytope.
    #[arg(long)]
    kind: String,
    /// Generator parameter `key=value`; repeatable.
    #[arg(long = "param", value_parser = parse_kv)]
    params: Vec<(String, String)>,
}

#[derive(Args, Debug)]
struct InstanceArg {
    /// Instance JSON file.
    #[arg(long, short)]
    instance: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Cg,
    Mir,
    Gmic,
    Knapsack,
    Subadditive,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum EmbeddingArg {
    Direct,
    SlackComplement,
}

#[derive(Args, Debug)]
struct CutsArgs {
    #[command(flatten)]
    inst: InstanceArg,
    #[arg(long, value_enum)]
    family: Family,
    /// Comma-separated rational multipliers (cg, mir: one per row, default
    /// all ones; subadditive: weights of `ceil(w·u)`, default all ones).
    #[arg(long)]
    multipliers: Option<String>,
    #[arg(long, value_enum, default_value = "direct")]
    embedding: EmbeddingArg,
}

#[derive(Args, Debug)]
struct SelectArgs {
    #[command(flatten)]
    inst: InstanceArg,
    /// Cut pool: a JSON array of cuts or the output of `cutlab cuts`.
    #[arg(long)]
    cuts: PathBuf,
}

#[derive(Args, Debug)]
struct GomoryArgs {
    #[command(flatten)]
    inst: InstanceArg,
    #[arg(long, default_value_t = cutlab::cuts::gomory::DEFAULT_MAX_ITERS)]
    max_iters: usize,
}

#[derive(Args, Debug)]
struct PolytopeArg {
    /// V-polytope JSON file.
    #[arg(long, short)]
    polytope: PathBuf,
}

#[derive(Subcommand, Debug)]
enum SparsityCmd {
    /// dist(P, P^k) against the bound, one CSV row per k.
    Dist {
        #[command(flatten)]
        poly: PolytopeArg,
        /// Single sparsity level (all of 1..=n when absent).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Interval enclosure of the distance bound.
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
    },
    /// Sparsify the cut separating a point from P; one CSV row per trial.
    Sparsify {
        #[command(flatten)]
        poly: PolytopeArg,
        /// Comma-separated rational coordinates of the point.
        #[arg(long)]
        u: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        max_draws: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Supports {
    Single,
    Full,
}

#[derive(Subcommand, Debug)]
enum BlocksCmd {
    /// Interaction graph of the instance partition.
    Graph(InstanceArg),
    /// Fractional chromatic number of the interaction graph.
    Chromatic(InstanceArg),
    /// Check z_sparse <= eta z_I with eta the fractional chromatic number.
    Eta {
        #[command(flatten)]
        inst: InstanceArg,
        #[arg(long, value_enum, default_value = "single")]
        supports: Supports,
    },
}

#[derive(Subcommand, Debug)]
enum AggCmd {
    /// LP, 1-row and sampled aggregation closure values for the objective.
    Closure(InstanceArg),
    /// Pre-processed packing: z_LP <= 2 z_I and the closure chain.
    LpBound(InstanceArg),
    /// Sign-pattern instance: z_1row <= 2 z_agg_outer on sampled objectives.
    Signpat(InstanceArg),
    /// Gap closed by 1-row against aggregated CG cuts.
    Cgcompare {
        #[command(flatten)]
        inst: InstanceArg,
        #[arg(long, default_value_t = 8)]
        rounds: usize,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Comma-separated subset of acceptance checks.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
    /// Directory of instance and polytope fixtures to check as well.
    #[arg(long)]
    fixtures: Option<PathBuf>,
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected key=value, got {s:?}"))
}

fn parse_vector(s: &str) -> anyhow::Result<Vec<Rational>> {
    s.split(',')
        .map(|t| rational::parse(t.trim()).map_err(anyhow::Error::msg))
        .collect()
}

fn read_instance(path: &Path) -> anyhow::Result<MilpInstance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_polytope(path: &Path) -> anyhow::Result<(String, cutlab::geometry::VPolytope)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (name, p) = parse_polytope(&text).with_context(|| format!("parsing {}", path.display()))?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok((name.unwrap_or(stem), p))
}

struct Ctx {
    seed: u64,
    out: Option<PathBuf>,
    budget: usize,
    caps: Caps,
    policy: Option<PathBuf>,
}

impl Ctx {
    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn info(&self, command: &str, config: Value) -> RunInfo {
        let mut config = config;
        config["budget"] = json!(self.budget);
        config["caps"] = serde_json::to_value(self.caps).expect("serializable");
        RunInfo::new(command, self.seed, config)
    }
}

/// `Ok(true)` when every checked invariant held.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let mut caps = Caps::from_env()?;
    if let Some(n) = cli.cap_n {
        caps.max_dim = n;
    }
    if let Some(p) = cli.cap_points {
        caps.max_points = p;
    }
    let ctx = Ctx {
        seed: cli.seed,
        out: cli.out,
        budget: cli.budget,
        caps,
        policy: cli.policy,
    };
    match cli.command {
        Command::Gen(a) => gen(&ctx, a),
        Command::Cuts(a) => cuts(&ctx, a),
        Command::Select(a) => select_cmd(&ctx, a),
        Command::Gomory(a) => {
            let inst = read_instance(&a.inst.instance)?;
            let rep = gomory_loop(&inst, a.max_iters)?;
            let info = ctx.info("gomory", json!({"instance": a.inst.instance, "max_iters": a.max_iters}));
            ctx.emit(&info.json(&rep))?;
            Ok(true)
        }
        Command::Sparsity(c) => sparsity(&ctx, c),
        Command::Blocks(c) => blocks(&ctx, c),
        Command::Agg(c) => agg(&ctx, c),
        Command::VerifyAll(a) => verify_all(&ctx, a),
    }
}

fn gen(ctx: &Ctx, a: GenArgs) -> anyhow::Result<bool> {
    let config = json!({"kind": a.kind, "params": a.params});
    let info = ctx.info("gen", config);
    if a.kind == "polytope" {
        let mut n = 4;
        let mut t = 5;
        for (k, v) in &a.params {
            match k.as_str() {
                "n" => n = v.parse().context("parameter n")?,
                "t" => t = v.parse().context("parameter t")?,
                other => bail!("unknown polytope parameter {other:?}"),
            }
        }
        let p = generate_polytope(n, t, ctx.seed)?;
        ctx.emit(&polytope_to_json(Some(&format!("polytope-n{n}-t{t}-s{}", ctx.seed)), &p))?;
        return Ok(true);
    }
    let spec = GenSpec::from_kind(&a.kind, &a.params)?;
    let inst = generate(&spec, ctx.seed)?;
    let mut v = to_value(&inst);
    v["meta"] = serde_json::to_value(&info)?;
    let mut text = serde_json::to_string_pretty(&v)?;
    text.push('\n');
    ctx.emit(&text)?;
    Ok(true)
}

fn cuts(ctx: &Ctx, a: CutsArgs) -> anyhow::Result<bool> {
    let inst = read_instance(&a.inst.instance)?;
    let ones = |len: usize| vec![Rational::from_integer(1.into()); len];
    let given = a.multipliers.as_deref().map(parse_vector).transpose()?;
    let mut out: Vec<Cut> = Vec::new();
    match a.family {
        Family::Cg | Family::Mir => {
            let lambda = given.unwrap_or_else(|| ones(inst.m()));
            let orientation = if a.family == Family::Cg { Sense::Le } else { Sense::Ge };
            let opts = AggregateOptions {
                orientation: Some(orientation),
                free_equalities: true,
            };
            let row = aggregate(&inst, &lambda, opts)?;
            if a.family == Family::Cg {
                out.push(cg_cut(&row, &inst.vars)?);
            } else {
                let e = match a.embedding {
                    EmbeddingArg::Direct => Embedding::Direct,
                    EmbeddingArg::SlackComplement => Embedding::SlackComplement,
                };
                let prov = Provenance::new("mir").with_multipliers(lambda);
                out.push(mir_cut(&embed(&row, &inst.vars, e)?, &inst.vars, prov)?);
            }
        }
        Family::Gmic => {
            let (poly, nonneg) = inst.simplex_relaxation();
            let lp = solve_lp(&poly, nonneg, &inst.objective, Direction::Maximize)?;
            let tab = lp.tableau.as_ref().context("the LP relaxation has no optimal tableau")?;
            for r in 0..tab.rows.len() {
                if let Ok(c) = gmic_from_tableau(&poly, &inst.vars, tab, r) {
                    out.push(c);
                }
            }
        }
        Family::Knapsack => {
            for row in &inst.rows {
                out.extend(knapsack_hull_cuts(row, &inst.vars, &ctx.caps)?);
            }
        }
        Family::Subadditive => {
            let m = inst.rows.iter().map(|r| if r.sense == Sense::Eq { 2 } else { 1 }).sum();
            let w = given.unwrap_or_else(|| ones(m));
            out.push(subadditive_cut(&SubadditiveFn::ceil_linear(w), &inst, ctx.seed)?);
        }
    }
    let info = ctx.info(
        "cuts",
        json!({"instance": a.inst.instance, "family": format!("{:?}", a.family).to_lowercase(), "multipliers": a.multipliers}),
    );
    ctx.emit(&info.json(&json!({ "cuts": out })))?;
    Ok(true)
}

fn read_pool(path: &Path) -> anyhow::Result<Vec<Cut>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let list = match v {
        Value::Array(_) => v,
        Value::Object(ref o) => o
            .get("result")
            .and_then(|r| r.get("cuts"))
            .cloned()
            .context("expected a cut array or a `cuts` report")?,
        _ => bail!("expected a cut array or a `cuts` report"),
    };
    Ok(serde_json::from_value(list)?)
}

fn select_cmd(ctx: &Ctx, a: SelectArgs) -> anyhow::Result<bool> {
    let inst = read_instance(&a.inst.instance)?;
    let policy = match &ctx.policy {
        Some(p) => Policy::from_json(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => Policy::default_for(inst.n),
    };
    let lp = inst.solve_relaxation(&inst.objective, &[])?;
    if !lp.is_optimal() {
        bail!("the LP relaxation has no optimum");
    }
    let mut pool = CutPool::new(vec![lp.vertex.clone()]);
    for c in read_pool(&a.cuts)? {
        pool.push(c);
    }
    let chosen = select(&pool, &lp.vertex, &policy, Some(&inst.objective))?;
    let info = ctx.info(
        "select",
        json!({"instance": a.inst.instance, "cuts": a.cuts, "policy": policy}),
    );
    let point: Vec<String> = lp.vertex.iter().map(rational::format).collect();
    ctx.emit(&info.json(&json!({"point": point, "pool": pool.len(), "selected": chosen})))?;
    Ok(true)
}

fn sparsity(ctx: &Ctx, c: SparsityCmd) -> anyhow::Result<bool> {
    match c {
        SparsityCmd::Dist { poly, k } => {
            let (name, p) = read_polytope(&poly.polytope)?;
            let ks: Vec<usize> = match k {
                Some(k) => vec![k],
                None => (1..=p.dim).collect(),
            };
            let mut rows = Vec::new();
            for k in ks {
                let d = dist_pk(&p, k, &ctx.caps)?;
                let b = sparse_distance_bound(p.dim, k, p.len())?;
                rows.push(SparsityRow::new(&name, &p, k, &d, &b));
            }
            let info = ctx.info("sparsity dist", json!({"polytope": poly.polytope, "k": k}));
            ctx.emit(&info.csv(SparsityRow::CSV_HEADER, rows.iter().map(SparsityRow::csv_row)))?;
            Ok(rows.iter().all(|r| r.pass))
        }
        SparsityCmd::Bound { n, k, t } => {
            let b = sparse_distance_bound(n, k, t)?;
            let info = ctx.info("sparsity bound", json!({"n": n, "k": k, "t": t}));
            ctx.emit(&info.json(&b))?;
            Ok(true)
        }
        SparsityCmd::Sparsify {
            poly,
            u,
            k,
            max_draws,
            trials,
        } => {
            let (_, p) = read_polytope(&poly.polytope)?;
            let inp = SparsifierInput::new(p, parse_vector(&u)?, k)?;
            let mut rows = Vec::new();
            let mut valid = true;
            for trial in 0..trials {
                let out = sparsify_cut(&inp, derive_seed(ctx.seed, trial), max_draws)?;
                if let Some(cut) = &out.cut {
                    valid &= cut.nnz() <= k
                        && inp.polytope.vertices.iter().all(|v| cut.is_satisfied(v))
                        && cut.separates(&inp.u);
                }
                rows.push(out.stats.csv_row());
            }
            let info = ctx.info(
                "sparsity sparsify",
                json!({"polytope": poly.polytope, "u": u, "k": k, "max_draws": max_draws, "trials": trials}),
            );
            ctx.emit(&info.csv(SparsifyStats::CSV_HEADER, rows))?;
            Ok(valid)
        }
    }
}

fn partitioned(path: &Path) -> anyhow::Result<(MilpInstance, cutlab::instance::Partition)> {
    let inst = read_instance(path)?;
    let part = inst
        .partition
        .clone()
        .with_context(|| format!("{} has no `partition`", path.display()))?;
    Ok((inst, part))
}

fn blocks(ctx: &Ctx, c: BlocksCmd) -> anyhow::Result<bool> {
    match c {
        BlocksCmd::Graph(a) => {
            let (inst, part) = partitioned(&a.instance)?;
            let g = interaction_graph(&inst, &part)?;
            let info = ctx.info("blocks graph", json!({"instance": a.instance}));
            ctx.emit(&info.json(&g))?;
            Ok(true)
        }
        BlocksCmd::Chromatic(a) => {
            let (inst, part) = partitioned(&a.instance)?;
            let g = interaction_graph(&inst, &part)?;
            let eta = fractional_chromatic(&g, &ctx.caps)?;
            let info = ctx.info("blocks chromatic", json!({"instance": a.instance}));
            ctx.emit(&info.json(&json!({"graph": g, "fractional_chromatic": rational::format(&eta)})))?;
            Ok(true)
        }
        BlocksCmd::Eta { inst: a, supports } => {
            let (inst, part) = partitioned(&a.instance)?;
            let g = interaction_graph(&inst, &part)?;
            let eta = fractional_chromatic(&g, &ctx.caps)?;
            let list = match supports {
                Supports::Single => SupportList::single_nodes(part.len()),
                Supports::Full => SupportList::full(part.len()),
            };
            let mut objectives = vec![inst.objective.clone()];
            objectives.extend(objective_sample(inst.n, ctx.budget, ctx.seed));
            let rep = verify_eta_bound(&inst, &part, &list, &eta, &objectives, &ctx.caps)?;
            let info = ctx.info(
                "blocks eta",
                json!({"instance": a.instance, "supports": format!("{supports:?}").to_lowercase()}),
            );
            ctx.emit(&info.json(&rep))?;
            Ok(rep.all_pass())
        }
    }
}

fn agg(ctx: &Ctx, c: AggCmd) -> anyhow::Result<bool> {
    match c {
        AggCmd::Closure(a) => {
            let inst = read_instance(&a.instance)?;
            let c = &inst.objective;
            let z_lp = inst.solve_relaxation(c, &[])?;
            let one = one_row_closure(&inst, &ctx.caps)?;
            let outer = aggregation_closure_outer(&inst, &MultiplierParams::default(), ctx.budget, ctx.seed, &ctx.caps)?;
            let fmt = |q: &Rational| rational::format(q);
            let result = json!({
                "z_lp": fmt(&z_lp.value),
                "z_1row": fmt(&one.max_value(c)?),
                "z_agg_outer": fmt(&outer.max_value(c)?),
                "exactness_1row": one.exactness,
                "exactness_agg": outer.exactness,
                "multipliers": outer.multipliers.len(),
                "cuts_1row": one.cuts,
                "cuts_agg": outer.cuts,
            });
            let info = ctx.info("agg closure", json!({"instance": a.instance}));
            ctx.emit(&info.json(&result))?;
            Ok(true)
        }
        AggCmd::LpBound(a) => {
            let inst = read_instance(&a.instance)?;
            let mut objectives = vec![inst.objective.clone()];
            objectives.extend(objective_sample(inst.n, ctx.budget, ctx.seed));
            let rows = verify_aggregation_bound(&inst, &objectives, ctx.budget, ctx.seed, &ctx.caps)?;
            let info = ctx.info("agg lp-bound", json!({"instance": a.instance}));
            ctx.emit(&info.csv(AggRow::CSV_HEADER, rows.iter().map(AggRow::csv_row)))?;
            Ok(rows.iter().all(|r| r.pass))
        }
        AggCmd::Signpat(a) => {
            let inst = read_instance(&a.instance)?;
            let rows = sign_pattern_experiment(&inst, ctx.budget, ctx.seed, &ctx.caps)?;
            let info = ctx.info("agg signpat", json!({"instance": a.instance}));
            ctx.emit(&info.csv(AggRow::CSV_HEADER, rows.iter().map(AggRow::csv_row)))?;
            Ok(rows.iter().all(|r| r.pass))
        }
        AggCmd::Cgcompare { inst: a, rounds } => {
            let inst = read_instance(&a.instance)?;
            let rep = cg_1row_vs_aggregated(&inst, ctx.budget, rounds, ctx.seed)?;
            let info = ctx.info("agg cgcompare", json!({"instance": a.instance, "rounds": rounds}));
            ctx.emit(&info.csv(CgGapReport::CSV_HEADER, [rep.csv_row()]))?;
            Ok(true)
        }
    }
}

fn verify_all(ctx: &Ctx, a: VerifyArgs) -> anyhow::Result<bool> {
    let ids: Vec<u8> = if a.only.is_empty() { verify::IDS.to_vec() } else { a.only.clone() };
    let mut results = Vec::new();
    for id in ids {
        let c = verify::run(id, ctx.seed, &ctx.caps);
        println!("{c}");
        results.push(serde_json::to_value(&c)?);
    }
    if let Some(dir) = &a.fixtures {
        for f in fixtures::check_dir(dir, &ctx.caps)? {
            println!("{f}");
            results.push(serde_json::to_value(&f)?);
        }
    }
    let ok = results.iter().all(|r| r["pass"] == json!(true));
    if ctx.out.is_some() {
        let info = ctx.info("verify-all", json!({"only": a.only, "fixtures": a.fixtures}));
        ctx.emit(&info.json(&json!({"pass": ok, "checks": results})))?;
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("cutlab: an invariant check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("cutlab: {e:#}");
            ExitCode::from(2)
        }
    }
}
