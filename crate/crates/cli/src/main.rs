use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mak_core::bench::{run_bench, BenchConfig};
use mak_core::diverse::ProductMethod;
use mak_core::generate::{generate, GenParams, Kind};
use mak_core::io::{read_document, to_json, Document};
use mak_core::profiles::analyze;
use mak_core::solve::{parse_epsilon, solve, Algorithm, SolveOptions, SolveReport};
use mak_core::{Caps, Error, Indexing, Rule};

/// `println!` that stops quietly when the reader has gone away.
macro_rules! say {
    ($($arg:tt)*) => { emit(&format!("{}\n", format_args!($($arg)*))) };
}

fn emit(text: &str) {
    use std::io::{ErrorKind, Write};
    if let Err(e) = std::io::stdout().lock().write_all(text.as_bytes()) {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing output: {e}");
        std::process::exit(i32::from(EXIT_USAGE));
    }
}

const EXIT_USAGE: u8 = 1;
const EXIT_SIZE: u8 = 2;
const EXIT_DISAGREE: u8 = 3;

#[derive(Parser)]
#[command(name = "mak", version, about = "Budgeted multiwinner selection solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file.
    Solve(SolveArgs),
    /// Report profile structure of an instance file.
    Analyze(AnalyzeArgs),
    /// Write a random instance file.
    Generate(GenerateArgs),
    /// Run every applicable solver on generated instances and compare.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    /// auto, oracle, xp, matching, single-voter, su, unanimous, kpcover,
    /// polymul, sc or fptas.
    #[arg(long, default_value = "auto")]
    algo: String,
    /// Approximation parameter for fptas, as a rational such as 1/2.
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long, value_enum, default_value_t = IndexingArg::Cost)]
    indexing: IndexingArg,
    #[arg(long, value_enum, default_value_t = ProductArg::Schoolbook)]
    product: ProductArg,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    max_util: u64,
    #[arg(long, default_value_t = 5)]
    max_cost: u64,
    #[arg(long, default_value_t = 10)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = RuleArg::Diverse)]
    rule: RuleArg,
    #[arg(long, default_value_t = 1)]
    lambda: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instances per group.
    #[arg(long, default_value_t = 8)]
    per_group: usize,
    /// Fill the millis column (output is then no longer reproducible).
    #[arg(long)]
    timings: bool,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where counterexample instance files go on disagreement.
    #[arg(long, default_value = ".")]
    artifact_dir: PathBuf,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args)]
struct CapArgs {
    #[arg(long)]
    oracle_max_items: Option<usize>,
    #[arg(long)]
    sc_detect_max_voters: Option<usize>,
    #[arg(long)]
    wmsc_max_cells: Option<u64>,
    #[arg(long)]
    xp_max_voters: Option<usize>,
    #[arg(long)]
    xp_max_guesses: Option<u64>,
    #[arg(long)]
    matching_max_voters: Option<usize>,
    #[arg(long)]
    matching_max_k: Option<usize>,
    #[arg(long)]
    matching_max_guesses: Option<u64>,
    #[arg(long)]
    dp_max_cells: Option<u64>,
    #[arg(long)]
    polymul_max_voters: Option<usize>,
    #[arg(long)]
    polymul_max_cells: Option<u64>,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        let mut c = Caps::default();
        macro_rules! apply {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { c.$f = v; } )* };
        }
        apply!(
            oracle_max_items,
            sc_detect_max_voters,
            wmsc_max_cells,
            xp_max_voters,
            xp_max_guesses,
            matching_max_voters,
            matching_max_k,
            matching_max_guesses,
            dp_max_cells,
            polymul_max_voters,
            polymul_max_cells
        );
        c
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum IndexingArg {
    Cost,
    Profit,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductArg {
    Schoolbook,
    Fft,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    General,
    Unanimous,
    Su,
    Sc,
    Sp,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Diverse,
    Median,
    Best,
}

/// Failure carrying its exit code.
struct Exit(u8, String);

fn classify(err: anyhow::Error) -> Exit {
    let code = match err.downcast_ref::<Error>() {
        Some(Error::Size { .. }) => EXIT_SIZE,
        _ => EXIT_USAGE,
    };
    Exit(code, format!("{err:#}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args).map_err(classify),
        Command::Analyze(args) => cmd_analyze(args).map_err(classify),
        Command::Generate(args) => cmd_generate(args).map_err(classify),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn load(path: &Path) -> Result<Document> {
    Ok(read_document(path)?)
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let doc = load(&args.file)?;
    let options = SolveOptions {
        algorithm: args.algo.parse::<Algorithm>()?,
        indexing: match args.indexing {
            IndexingArg::Cost => Indexing::Cost,
            IndexingArg::Profit => Indexing::Profit,
        },
        epsilon: args.epsilon.as_deref().map(parse_epsilon).transpose()?,
        product: match args.product {
            ProductArg::Schoolbook => ProductMethod::Schoolbook,
            ProductArg::Fft => ProductMethod::Fft,
        },
        caps: args.caps.caps(),
    };
    let report = solve(&doc, &options)?;
    if args.json {
        say!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_report(&doc, &report);
    }
    Ok(())
}

fn print_report(doc: &Document, r: &SolveReport) {
    let inst = &doc.instance;
    say!("algorithm: {}", r.algorithm);
    say!("value: {}", r.value);
    match (&r.witness, &r.witness_ids) {
        (Some(b), Some(ids)) => say!(
            "bundle: {{{}}} cost {} of budget {}",
            ids.join(", "),
            b.cost,
            inst.budget()
        ),
        _ => say!("bundle: value-only"),
    }
    if let (Some(t), Some(d)) = (inst.target(), r.decision) {
        say!("decision: {} (target {t})", if d { "yes" } else { "no" });
    }
    if let Some(c) = &r.certificate {
        say!("certificate: {c}");
    }
    say!("states: {}", r.states);
    say!("time: {:.3} ms", r.millis);
    for note in &r.notes {
        say!("note: {note}");
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let doc = load(&args.file)?;
    let report = analyze(
        &doc.instance,
        doc.sc_order.as_deref(),
        doc.sp_axis.as_deref(),
        &args.caps.caps(),
    )?;
    if args.json {
        say!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(());
    }
    let inst = &doc.instance;
    let opt = |b: Option<bool>| b.map_or("not supplied".to_string(), |b| b.to_string());
    let names = |ids: &[String], idx: &[usize]| idx.iter().map(|&i| ids[i].as_str()).collect::<Vec<_>>().join(" ");
    say!("voters: {}, items: {}", inst.num_voters(), inst.num_items());
    say!("unanimous: {}", report.is_unanimous);
    say!("strongly unanimous: {}", report.is_strongly_unanimous);
    say!("distance to strongly unanimous: {}", report.distance_d);
    say!("supplied sc_order verified: {}", opt(report.supplied_sc_verified));
    say!("supplied sp_axis verified: {}", opt(report.supplied_sp_verified));
    match report.sc_detected {
        Some(found) => say!("single-crossing order found by search: {found}"),
        None => say!("single-crossing search: skipped (too many voters)"),
    }
    if let Some(order) = &report.sc_order {
        say!("sc order: {}", names(inst.voter_ids(), order));
    }
    if let Some(axis) = &report.sp_axis {
        say!("sp axis: {}", names(inst.item_ids(), axis));
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let params = GenParams {
        kind: match args.kind {
            KindArg::General => Kind::General,
            KindArg::Unanimous => Kind::Unanimous,
            KindArg::Su => Kind::Su,
            KindArg::Sc => Kind::Sc,
            KindArg::Sp => Kind::Sp,
        },
        n: args.n,
        m: args.m,
        max_util: args.max_util,
        max_cost: args.max_cost,
        budget: args.budget,
        rule: match args.rule {
            RuleArg::Diverse => Rule::Diverse,
            RuleArg::Median => Rule::Median,
            RuleArg::Best => Rule::Best,
        },
        lambda: args.lambda,
        seed: args.seed,
    };
    let text = to_json(&generate(&params)?.into());
    match args.out {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => emit(&text),
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), Exit> {
    let cfg = BenchConfig {
        seed: args.seed,
        per_group: args.per_group,
        caps: args.caps.caps(),
        timings: args.timings,
    };
    let outcome = run_bench(&cfg).map_err(|e| classify(e.into()))?;
    let csv = outcome.to_csv();
    match &args.out {
        Some(path) => fs::write(path, &csv)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(classify)?,
        None => emit(&csv),
    }
    for note in &outcome.notes {
        eprintln!("note: {note}");
    }
    if outcome.disagreements.is_empty() {
        return Ok(());
    }
    let mut lines = Vec::new();
    for d in &outcome.disagreements {
        let path = args.artifact_dir.join(format!("counterexample-{}-{}.json", d.instance_id, d.algo.replace('/', "_")));
        fs::write(&path, &d.document)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(classify)?;
        lines.push(format!(
            "{} {}: expected {}, got {} (instance saved to {})",
            d.instance_id,
            d.algo,
            d.expected,
            d.got,
            path.display()
        ));
    }
    Err(Exit(EXIT_DISAGREE, format!("solver disagreement\n{}", lines.join("\n"))))
}
