use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Number, Value};

use nesy_core::constraints::{self, GridSpec, TileRule};
use nesy_core::queries::{evaluate, EvalTrace};
use nesy_core::{
    compile_with, parse_dimacs, parse_formula, read_nnf, write_nnf, Circuit, CompileError,
    CompileOptions, ConstraintError, Determinism, DeterminismMode, Formula, ProbVector, VarOrder,
};
use nesy_train::can::{sample_and_score, sample_conditioned, Generator, GeneratorFile};
use nesy_train::data::PreferenceSpec;
use nesy_train::{
    grid_task, preference_task, train_can, train_supervised, CanConfig, EntropyMode, TrainConfig,
    TrainError,
};

#[derive(Parser)]
#[command(
    name = "nesy",
    version,
    about = "Compile propositional constraints to d-DNNF and query them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a formula to a smooth d-DNNF circuit in NNF format.
    Compile(CompileArgs),
    /// Report decomposability, smoothness and determinism of a circuit.
    Check(CheckArgs),
    /// Exact model count.
    Count(CountArgs),
    /// Weighted model count.
    Wmc(QueryArgs),
    /// Semantic loss, -ln wmc.
    Sl(QueryArgs),
    /// Entropy of the distribution restricted to the constraint.
    Entropy(QueryArgs),
    /// Gradient of wmc, semantic loss or entropy w.r.t. the probabilities.
    Grad(GradArgs),
    /// Generate a constraint as an s-expression formula.
    Gen(GenArgs),
    /// Train a constrained structured predictor.
    Train(TrainArgs),
    /// Train a constrained GAN on tile grids.
    CanTrain(CanArgs),
    /// Sample tile grids from a saved generator.
    Sample(SampleArgs),
}

#[derive(Args)]
struct Source {
    /// Circuit in NNF format.
    #[arg(long, group = "src")]
    circuit: Option<PathBuf>,
    /// Formula as an s-expression; compiled on the fly.
    #[arg(long, group = "src")]
    formula: Option<PathBuf>,
    /// Formula in DIMACS CNF; compiled on the fly.
    #[arg(long, group = "src")]
    dimacs: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long, group = "input", required = true)]
    formula: Option<PathBuf>,
    #[arg(long, group = "input")]
    dimacs: Option<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
    /// Comma-separated variable order (0-based).
    #[arg(long)]
    order: Option<String>,
    #[arg(long, default_value_t = nesy_core::compiler::DEFAULT_MAX_NODES)]
    max_nodes: usize,
    #[arg(long)]
    no_cache: bool,
    /// Write compile statistics JSON here.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Print statistics as JSON on standard output.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetMode {
    Skip,
    Guards,
    BruteForce,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long, value_enum, default_value = "brute-force")]
    determinism: DetMode,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum LogBase {
    E,
    #[value(name = "2")]
    Two,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    source: Source,
    /// Probabilities: a file with one value per line, or an inline comma list.
    #[arg(long)]
    probs: String,
    #[arg(long, value_enum, default_value = "e")]
    log_base: LogBase,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GradOf {
    Wmc,
    Sl,
    Entropy,
}

#[derive(Args)]
struct GradArgs {
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, value_enum, default_value = "wmc")]
    of: GradOf,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    ExactlyOne,
    TotalOrder,
    Path,
    PathFull,
    Tiles,
    Conditional,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Variable count for exactly-one, item count for total-order.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    rows: usize,
    #[arg(long, default_value_t = 3)]
    cols: usize,
    #[arg(long)]
    source: Option<usize>,
    #[arg(long)]
    target: Option<usize>,
    /// Comma-separated formula files for the conditional constraint.
    #[arg(long)]
    parts: Option<String>,
    #[arg(long, default_value_t = constraints::DEFAULT_PATH_CAP)]
    path_cap: usize,
    /// Formula destination; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Variable-layout JSON destination; defaults to <output>.layout.json.
    #[arg(long)]
    layout: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskKind {
    Grid,
    Pref,
}

#[derive(Clone, Copy, ValueEnum)]
enum EntropyArg {
    None,
    Full,
    Nesy,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long, value_enum)]
    task: TaskKind,
    #[arg(long, value_enum, default_value = "none")]
    entropy: EntropyArg,
    #[arg(long, default_value_t = 0.0)]
    lambda_sl: f64,
    #[arg(long, default_value_t = 0.0)]
    lambda_ent: f64,
    #[arg(long, default_value_t = 0)]
    warmup: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    epochs: usize,
    #[arg(long, default_value_t = 32)]
    batch_size: usize,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    #[arg(long, default_value_t = 3)]
    rows: usize,
    #[arg(long, default_value_t = 3)]
    cols: usize,
    /// Examples to generate before the 60/20/20 split.
    #[arg(long, default_value_t = 1600)]
    examples: usize,
    /// Write the per-epoch metrics JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CanTask {
    Pipes,
}

#[derive(Args)]
struct CanArgs {
    #[arg(long, value_enum, default_value = "pipes")]
    task: CanTask,
    #[arg(long, default_value_t = 3)]
    rows: usize,
    #[arg(long, default_value_t = 3)]
    cols: usize,
    #[arg(long, default_value_t = 10)]
    bootstrap: usize,
    #[arg(long, default_value_t = 10)]
    ramp: usize,
    #[arg(long, default_value_t = 2.0)]
    lambda_max: f64,
    #[arg(long, default_value_t = 40)]
    epochs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the per-epoch metrics JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Save the trained generator here.
    #[arg(long)]
    save: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    generator: PathBuf,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Conditional constraint circuit, for generators with code inputs.
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// Comma-separated code bits, for generators with code inputs.
    #[arg(long)]
    code: Option<String>,
    #[arg(long)]
    json: bool,
}

/// Whether an error is a resource cap, anywhere in its chain.
fn is_resource_cap(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        matches!(
            e.downcast_ref::<CompileError>(),
            Some(CompileError::ResourceCap { .. })
        ) || matches!(
            e.downcast_ref::<ConstraintError>(),
            Some(ConstraintError::PathCap { .. })
        ) || matches!(
            e.downcast_ref::<TrainError>(),
            Some(TrainError::Compile(CompileError::ResourceCap { .. }))
                | Some(TrainError::Constraint(ConstraintError::PathCap { .. }))
        )
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_resource_cap(&e) { 3 } else { 2 })
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Compile(a) => cmd_compile(a),
        Command::Check(a) => cmd_check(a),
        Command::Count(a) => cmd_count(a),
        Command::Wmc(a) => cmd_query(a, "wmc"),
        Command::Sl(a) => cmd_query(a, "sl"),
        Command::Entropy(a) => cmd_query(a, "entropy"),
        Command::Grad(a) => cmd_grad(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Train(a) => cmd_train(a),
        Command::CanTrain(a) => cmd_can_train(a),
        Command::Sample(a) => cmd_sample(a),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_formula(formula: Option<&Path>, dimacs: Option<&Path>) -> Result<Formula> {
    match (formula, dimacs) {
        (Some(p), _) => parse_formula(&read(p)?).with_context(|| format!("in {}", p.display())),
        (None, Some(p)) => parse_dimacs(&read(p)?).with_context(|| format!("in {}", p.display())),
        (None, None) => bail!("no formula given"),
    }
}

fn load_circuit(src: &Source) -> Result<Circuit> {
    if let Some(p) = &src.circuit {
        return read_nnf(&read(p)?).with_context(|| format!("in {}", p.display()));
    }
    if src.formula.is_none() && src.dimacs.is_none() {
        bail!("one of --circuit, --formula or --dimacs is required");
    }
    let f = load_formula(src.formula.as_deref(), src.dimacs.as_deref())?;
    Ok(compile_with(&f, &CompileOptions::default())?.0)
}

/// Numbers in JSON output carry 17 significant digits.
fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(
            format!("{x:.16e}")
                .parse::<Number>()
                .expect("formatted float is a JSON number"),
        )
    } else if x > 0.0 {
        Value::String("+inf".into())
    } else if x < 0.0 {
        Value::String("-inf".into())
    } else {
        Value::String("nan".into())
    }
}

/// Text output: up to 10 decimals, trailing zeros trimmed.
fn text(x: f64) -> String {
    if !x.is_finite() {
        return if x > 0.0 {
            "inf".into()
        } else {
            format!("{x}")
        };
    }
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn emit(value: Value) {
    println!(
        "{}",
        serde_json::to_string(&value).expect("JSON values serialize")
    );
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .with_context(|| format!("bad probability '{t}'"))
        })
        .collect()
}

/// A path to an existing file is read; anything else is an inline list.
fn load_probs(arg: &str) -> Result<Vec<f64>> {
    let path = Path::new(arg);
    if path.is_file() {
        parse_list(&read(path)?).with_context(|| format!("in {}", path.display()))
    } else {
        parse_list(arg)
    }
}

fn cmd_compile(a: CompileArgs) -> Result<()> {
    let f = load_formula(a.formula.as_deref(), a.dimacs.as_deref())?;
    let mut opts = CompileOptions {
        max_nodes: a.max_nodes,
        cache: !a.no_cache,
        ..CompileOptions::default()
    };
    if let Some(order) = &a.order {
        let order = order
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .with_context(|| format!("bad order entry '{t}'"))
            })
            .collect::<Result<Vec<_>>>()?;
        if order.len() != f.var_count() {
            bail!(
                "order lists {} variables, formula has {}",
                order.len(),
                f.var_count()
            );
        }
        opts.order = Some(VarOrder::new(order)?);
    }
    let (c, stats) = compile_with(&f, &opts)?;
    write(&a.output, &write_nnf(&c))?;
    let stats_json = json!({
        "schema": 1,
        "nodes": stats.nodes,
        "edges": stats.edges,
        "cache_hits": stats.cache_hits,
        "seconds": num(stats.seconds),
    });
    if let Some(p) = &a.stats {
        write(p, &format!("{stats_json}\n"))?;
    }
    if a.json {
        emit(stats_json);
    } else {
        println!("{} nodes, {} edges", stats.nodes, stats.edges);
    }
    Ok(())
}

fn cmd_check(a: CheckArgs) -> Result<()> {
    let c = read_nnf(&read(&a.circuit)?).with_context(|| format!("in {}", a.circuit.display()))?;
    let mode = match a.determinism {
        DetMode::Skip => DeterminismMode::Skip,
        DetMode::Guards => DeterminismMode::Guards,
        DetMode::BruteForce => DeterminismMode::BruteForce,
    };
    let r = c.check_structure(mode);
    let det = match r.deterministic {
        Determinism::Holds => "true",
        Determinism::Violated => "false",
        Determinism::Unchecked => "unchecked",
    };
    if a.json {
        let det_json = match r.deterministic {
            Determinism::Holds => json!(true),
            Determinism::Violated => json!(false),
            Determinism::Unchecked => json!("unchecked"),
        };
        let witness = r
            .witness
            .as_ref()
            .map(|w| json!({"node": w.node, "property": w.property, "description": w.description}));
        emit(json!({
            "schema": 1,
            "decomposable": r.decomposable,
            "smooth": r.smooth,
            "deterministic": det_json,
            "witness": witness,
        }));
    } else {
        println!("decomposable: {}", r.decomposable);
        println!("smooth: {}", r.smooth);
        println!("deterministic: {det}");
        if let Some(w) = &r.witness {
            println!(
                "witness: node {} ({}): {}",
                w.node, w.property, w.description
            );
        }
    }
    Ok(())
}

fn cmd_count(a: CountArgs) -> Result<()> {
    let count = load_circuit(&a.source)?.model_count()?;
    if a.json {
        let n: Number = count.to_string().parse().expect("integer is a JSON number");
        emit(json!({"schema": 1, "count": n}));
    } else {
        println!("{count}");
    }
    Ok(())
}

fn scale(base: LogBase) -> f64 {
    match base {
        LogBase::E => 1.0,
        LogBase::Two => std::f64::consts::LN_2,
    }
}

fn with_trace<T>(a: &QueryArgs, f: impl FnOnce(&EvalTrace) -> Result<T>) -> Result<T> {
    let c = load_circuit(&a.source)?;
    let p = ProbVector::new(&load_probs(&a.probs)?)?;
    let trace = evaluate(&c, &p)?;
    f(&trace)
}

fn cmd_query(a: QueryArgs, what: &str) -> Result<()> {
    let value = with_trace(&a, |t| {
        Ok(match what {
            "wmc" => t.wmc(),
            "sl" => t.semantic_loss(),
            _ => t.entropy()? / scale(a.log_base),
        })
    })?;
    if a.json {
        let mut obj = json!({"schema": 1});
        obj[what] = num(value);
        if what == "entropy" {
            obj["log_base"] = json!(if a.log_base == LogBase::E { "e" } else { "2" });
        }
        emit(obj);
    } else {
        println!("{}", text(value));
    }
    Ok(())
}

fn cmd_grad(a: GradArgs) -> Result<()> {
    let q = &a.query;
    let grad = with_trace(q, |t| {
        Ok(match a.of {
            GradOf::Wmc => t.wmc_gradient(),
            GradOf::Sl => t.semantic_loss_gradient()?,
            GradOf::Entropy => {
                let s = scale(q.log_base);
                t.entropy_gradient()?.into_iter().map(|g| g / s).collect()
            }
        })
    })?;
    if q.json {
        let of = match a.of {
            GradOf::Wmc => "wmc",
            GradOf::Sl => "sl",
            GradOf::Entropy => "entropy",
        };
        emit(
            json!({"schema": 1, "of": of, "grad": grad.iter().map(|&g| num(g)).collect::<Vec<_>>()}),
        );
    } else {
        for g in grad {
            println!("{}", text(g));
        }
    }
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let need_n = || a.n.context("--n is required for this kind");
    let (formula, layout) = match a.kind {
        GenKind::ExactlyOne => {
            let n = need_n()?;
            (
                constraints::exactly_one(n)?,
                json!({"description": "variable i is option i", "options": n}),
            )
        }
        GenKind::TotalOrder => {
            let n = need_n()?;
            (
                constraints::total_order(n)?,
                json!({"description": "variable i*n + j is item i at position j", "items": n}),
            )
        }
        GenKind::Path => {
            let g = GridSpec::new(a.rows, a.cols)?;
            let s = a.source.context("--source is required for path")?;
            let t = a.target.context("--target is required for path")?;
            (
                constraints::simple_path_capped(&g, s, t, a.path_cap)?,
                json!({
                    "description": "variable e is grid edge e",
                    "rows": a.rows, "cols": a.cols, "source": s, "target": t,
                    "edges": g.edges(),
                }),
            )
        }
        GenKind::PathFull => {
            let g = GridSpec::new(a.rows, a.cols)?;
            (
                constraints::simple_path_full_capped(&g, a.path_cap)?,
                json!({
                    "description": "variables 0..rows*cols are node indicators, then variable rows*cols + e is grid edge e",
                    "rows": a.rows, "cols": a.cols,
                    "edges": g.edges(),
                }),
            )
        }
        GenKind::Tiles => {
            let rule = TileRule::pipes();
            (
                constraints::tile_grid(a.rows, a.cols, &rule)?,
                json!({
                    "description": "variable (r*cols + c)*vocab + t is tile t at row r, column c",
                    "rows": a.rows, "cols": a.cols, "vocab": rule.vocab(),
                    "tiles": constraints::pipes::NAMES,
                }),
            )
        }
        GenKind::Conditional => {
            let parts_arg = a
                .parts
                .as_deref()
                .context("--parts is required for conditional")?;
            let parts = parts_arg
                .split(',')
                .map(|p| load_formula(Some(Path::new(p.trim())), None))
                .collect::<Result<Vec<_>>>()?;
            let f = constraints::conditional(&parts)?;
            let n = f.var_count() - parts.len();
            (
                f,
                json!({
                    "description": "content variables first, then code variable n + i for part i",
                    "content_vars": n, "codes": parts.len(),
                }),
            )
        }
    };
    let mut layout = layout;
    layout["schema"] = json!(1);
    layout["var_count"] = json!(formula.var_count());
    let text = format!("{formula}\n");
    match &a.output {
        Some(out) => {
            write(out, &text)?;
            let default = PathBuf::from(format!("{}.layout.json", out.display()));
            write(
                a.layout.as_ref().unwrap_or(&default),
                &format!("{layout}\n"),
            )?;
        }
        None => {
            print!("{text}");
            if let Some(p) = &a.layout {
                write(p, &format!("{layout}\n"))?;
            }
        }
    }
    Ok(())
}

fn cmd_train(a: TrainArgs) -> Result<()> {
    let entropy = match a.entropy {
        EntropyArg::None => EntropyMode::None,
        EntropyArg::Full => EntropyMode::Full,
        EntropyArg::Nesy => EntropyMode::Nesy,
    };
    let cfg = TrainConfig {
        seed: a.seed,
        epochs: a.epochs,
        batch_size: a.batch_size,
        learning_rate: a.lr,
        lambda_sl: a.lambda_sl,
        lambda_ent: a.lambda_ent,
        entropy,
        warmup: a.warmup,
        ..TrainConfig::default()
    };
    let (task, name) = match a.task {
        TaskKind::Grid => (
            grid_task(&GridSpec::new(a.rows, a.cols)?, a.examples, a.seed)?.0,
            "grid",
        ),
        TaskKind::Pref => (
            preference_task(PreferenceSpec::default(), a.examples, a.seed)?.0,
            "pref",
        ),
    };
    let report = train_supervised(&cfg, &task)?;
    let t = report.test;
    println!(
        "test: coherent {:.2}  incoherent {:.2}  constraint {:.2}",
        t.coherent, t.incoherent, t.constraint
    );
    if let Some(p) = &a.json {
        let doc = json!({
            "schema": 1,
            "task": name,
            "config": cfg,
            "history": report.history,
            "test": t,
        });
        write(p, &format!("{doc}\n"))?;
    }
    Ok(())
}

fn pipes_circuit(rows: usize, cols: usize) -> Result<Circuit> {
    let f = constraints::tile_grid(rows, cols, &TileRule::pipes())?;
    Ok(compile_with(&f, &CompileOptions::default())?.0)
}

fn cmd_can_train(a: CanArgs) -> Result<()> {
    let CanTask::Pipes = a.task;
    let cfg = CanConfig {
        seed: a.seed,
        rows: a.rows,
        cols: a.cols,
        bootstrap: a.bootstrap,
        ramp: a.ramp,
        lambda_max: a.lambda_max,
        epochs: a.epochs,
        ..CanConfig::default()
    };
    let circuit = pipes_circuit(a.rows, a.cols)?;
    let report = train_can(&cfg, &TileRule::pipes(), &circuit)?;
    if let Some(last) = report.history.last() {
        println!(
            "final: validity {:.2}  diversity {:.4}  pipe_tiles {:.2} (data {:.2})",
            last.validity, last.diversity, last.pipe_tiles, report.data_pipe_tiles
        );
    }
    if let Some(p) = &a.json {
        let doc = json!({
            "schema": 1,
            "task": "pipes",
            "data_pipe_tiles": report.data_pipe_tiles,
            "history": report.history,
        });
        write(p, &format!("{doc}\n"))?;
    }
    if let Some(p) = &a.save {
        write(p, &serde_json::to_string(&report.generator.to_file())?)?;
    }
    Ok(())
}

fn cmd_sample(a: SampleArgs) -> Result<()> {
    let file: GeneratorFile = serde_json::from_str(&read(&a.generator)?)
        .with_context(|| format!("in {}", a.generator.display()))?;
    let gen = Generator::from_file(&file)?;
    let (rows, cols, vocab) = gen.shape();
    let score = if gen.code_dim() == 0 {
        sample_and_score(&gen, a.n, a.seed, &pipes_circuit(rows, cols)?, &[])?
    } else {
        let path = a
            .circuit
            .as_ref()
            .context("--circuit is required for a conditional generator")?;
        let circuit = read_nnf(&read(path)?).with_context(|| format!("in {}", path.display()))?;
        let code = parse_list(
            a.code
                .as_deref()
                .context("--code is required for a conditional generator")?,
        )?;
        if code.len() != gen.code_dim() {
            bail!(
                "generator takes {} code bits, got {}",
                gen.code_dim(),
                code.len()
            );
        }
        sample_conditioned(&gen, a.n, a.seed, &circuit, &code)?
    };
    if a.json {
        emit(json!({
            "schema": 1,
            "validity": num(score.validity),
            "diversity": num(score.diversity),
            "pipe_tiles": num(score.pipe_tiles),
            "samples": score.samples,
        }));
    } else {
        println!(
            "validity {:.2}  diversity {:.4}  pipe_tiles {:.2}",
            score.validity, score.diversity, score.pipe_tiles
        );
        for s in &score.samples {
            println!();
            for r in 0..rows {
                let line: Vec<String> = (0..cols).map(|c| s[r * cols + c].to_string()).collect();
                println!("{}", line.join(" "));
            }
        }
        let _ = vocab;
    }
    Ok(())
}
