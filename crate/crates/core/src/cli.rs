//! The `connfair` command line. [`run`] holds all logic so it can be driven in-process.
//!
//! Exit codes: `solve` returns 0 for yes and 1 for no, `verify` returns 1 for an invalid
//! allocation; every command returns 2 on bad input or an incompatible method, 3 when the
//! oracle budget is exceeded and 4 on an internal error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{
    fixture_cycle8, gen_indepset_ef_star, gen_partition_bipartite, gen_random_with_types,
    gen_x3c_prop_path, GraphFamily, IndepSetInstance, PartitionInstance, X3cInstance,
};
use crate::graph::{classify, GraphClass, ItemGraph};
use crate::io::{instance_to_json, mms_values_to_json, parse_allocation, parse_instance, report_to_json, to_pretty, Verdict};
use crate::model::{compute_type_partition, Instance};
use crate::oracle::OracleBudget;
use crate::report::{Method, Problem};
use crate::solvers::{maximin_shares, solve_with};

#[derive(Debug, Parser)]
#[command(name = "connfair", version, about = "Fair division of graph items into connected bundles")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide a problem and print a report with a witness allocation.
    Solve(SolveArgs),
    /// Check an allocation against every fairness notion.
    Verify(VerifyArgs),
    /// Print every agent's maximin share.
    MmsValues(MmsArgs),
    /// Write a generated instance.
    Generate(GenerateArgs),
    /// Print the graph classes an instance belongs to.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Instance JSON (stdin when omitted).
    #[arg(value_name = "INPUT")]
    path: Option<PathBuf>,
    #[arg(long = "input", short = 'i', value_name = "FILE", conflicts_with = "path")]
    input: Option<PathBuf>,
    /// Divide each agent's utilities by their sum.
    #[arg(long)]
    normalize: bool,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write JSON here instead of stdout.
    #[arg(long, short = 'o', value_name = "FILE", global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = OracleBudget::default().max_items)]
    max_items: usize,
    #[arg(long, default_value_t = OracleBudget::default().max_agents)]
    max_agents: usize,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// prop, ef-complete or mms.
    #[arg(long, default_value = "prop")]
    problem: String,
    /// auto, oracle, greedy, path-dp, star, tree-fpt, ef-path or mms-tree.
    #[arg(long, default_value = "auto")]
    method: String,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Allocation JSON to check.
    #[arg(long, short = 'a', value_name = "FILE")]
    allocation: PathBuf,
    /// Also compare against maximin shares.
    #[arg(long)]
    mms: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct MmsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// auto, oracle or mms-tree.
    #[arg(long, default_value = "auto")]
    method: String,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(subcommand)]
    kind: GenerateKind,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Subcommand)]
enum GenerateKind {
    /// Seeded random instance.
    Random {
        /// path, star, tree, cycle or connected.
        #[arg(long, default_value = "tree")]
        family: String,
        #[arg(long, short = 'm')]
        items: usize,
        #[arg(long, short = 'n')]
        agents: usize,
        /// At most this many distinct utility vectors (default: one per agent).
        #[arg(long)]
        types: Option<usize>,
        #[arg(long, default_value_t = 12)]
        denom_bound: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The 8-cycle without an MMS allocation.
    Cycle8,
    /// Proportionality on a path from Exact 3-Cover.
    X3c {
        /// Number of elements (a multiple of 3).
        #[arg(long)]
        elements: usize,
        /// A triple of 1-based elements, e.g. `1,2,3`; repeatable.
        #[arg(long = "triple", value_parser = parse_numbers::<3>)]
        triples: Vec<[usize; 3]>,
    },
    /// Proportionality on a bipartite graph from Partition.
    Partition {
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<u64>,
    },
    /// Complete envy-freeness on a star from Independent Set.
    Indepset {
        #[arg(long)]
        vertices: usize,
        /// An edge of 1-based vertices, e.g. `1,2`; repeatable.
        #[arg(long = "edge", value_parser = parse_numbers::<2>)]
        edges: Vec<[usize; 2]>,
        #[arg(long)]
        k: usize,
    },
}

impl InputArgs {
    fn load(&self) -> Result<Instance> {
        let text = match self.input.as_ref().or(self.path.as_ref()) {
            Some(path) => read_file(path)?,
            None => {
                let mut text = String::new();
                io::stdin().read_to_string(&mut text)?;
                text
            }
        };
        parse_instance(&text, self.normalize)
    }
}

impl BudgetArgs {
    fn budget(&self) -> OracleBudget {
        OracleBudget::with_limits(self.max_items, self.max_agents)
    }
}

fn read_file(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, target: &OutputArgs, text: &str) -> Result<()> {
    match &target.output {
        Some(path) => fs::write(path, format!("{text}\n"))?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

fn parse_method(text: &str) -> Result<Option<Method>> {
    if text == "auto" {
        Ok(None)
    } else {
        text.parse().map(Some)
    }
}

/// Exit code for an error.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Input(_) | Error::Routing(_) | Error::Json(_) | Error::Io(_) => 2,
        Error::Budget(_) => 3,
        Error::Internal(_) => 4,
    }
}

/// Runs the command line given by `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return e.exit_code();
        }
    };
    let mut buffer = Vec::new();
    let result = match cli.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| execute(&cli.command, &mut buffer)),
            Err(e) => Err(Error::Input(format!("cannot start {threads} threads: {e}"))),
        },
        None => execute(&cli.command, &mut buffer),
    };
    let result = result.and_then(|code| {
        out.write_all(&buffer)?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "connfair: {e}");
            exit_code(&e)
        }
    }
}

fn execute(command: &Command, out: &mut Vec<u8>) -> Result<i32> {
    match command {
        Command::Solve(args) => solve(args, out),
        Command::Verify(args) => verify(args, out),
        Command::MmsValues(args) => mms_values(args, out),
        Command::Generate(args) => generate(args, out),
        Command::Classify(args) => classify_cmd(args, out),
    }
}

fn solve(args: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let problem: Problem = args.problem.parse()?;
    let method = parse_method(&args.method)?;
    let inst = args.input.load()?;
    let report = solve_with(&inst, problem, method, &args.budget.budget())?;
    emit(out, &args.output, &report_to_json(&inst, &report))?;
    Ok(if report.decision { 0 } else { 1 })
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = args.input.load()?;
    let alloc = parse_allocation(&inst, &read_file(&args.allocation)?)?;
    let mms = match args.mms {
        true => Some(maximin_shares(&inst, None, &args.budget.budget())?.0),
        false => None,
    };
    let verdict = Verdict::check(&inst, &alloc, mms.as_deref())?;
    emit(out, &args.output, &to_pretty(&verdict))?;
    Ok(if verdict.valid { 0 } else { 1 })
}

fn mms_values(args: &MmsArgs, out: &mut dyn Write) -> Result<i32> {
    let method = parse_method(&args.method)?;
    let inst = args.input.load()?;
    let (values, method) = maximin_shares(&inst, method, &args.budget.budget())?;
    emit(out, &args.output, &mms_values_to_json(&inst, &values, method))?;
    Ok(0)
}

#[derive(Serialize)]
struct ClassDoc {
    vertices: usize,
    edges: usize,
    agents: usize,
    types: usize,
    class: GraphClass,
}

fn classify_cmd(args: &ClassifyArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = args.input.load()?;
    let doc = ClassDoc {
        vertices: inst.vertex_count(),
        edges: inst.graph().edge_count(),
        agents: inst.agent_count(),
        types: compute_type_partition(&inst).type_count,
        class: classify(inst.graph()),
    };
    emit(out, &args.output, &to_pretty(&doc))?;
    Ok(0)
}

/// `K` comma-separated positive integers, shifted to 0-based.
fn parse_numbers<const K: usize>(text: &str) -> std::result::Result<[usize; K], String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != K {
        return Err(format!("expected {K} comma-separated numbers, got {text:?}"));
    }
    let mut out = [0; K];
    for (slot, part) in out.iter_mut().zip(parts) {
        let x: usize = part.parse().map_err(|_| format!("{part:?} is not a number"))?;
        *slot = x.checked_sub(1).ok_or("numbering starts at 1")?;
    }
    Ok(out)
}

fn generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = match &args.kind {
        GenerateKind::Random {
            family,
            items,
            agents,
            types,
            denom_bound,
            seed,
        } => {
            let family: GraphFamily = family.parse()?;
            gen_random_with_types(*seed, family, *items, *agents, types.unwrap_or(*agents), *denom_bound)?
        }
        GenerateKind::Cycle8 => fixture_cycle8(),
        GenerateKind::X3c { elements, triples } => {
            gen_x3c_prop_path(&X3cInstance::new(*elements, triples.clone())?)?
        }
        GenerateKind::Partition { values } => {
            gen_partition_bipartite(&PartitionInstance::new(values.clone())?)?
        }
        GenerateKind::Indepset { vertices, edges, k } => {
            let graph = ItemGraph::with_default_labels(*vertices, edges.iter().map(|e| (e[0], e[1])))?;
            gen_indepset_ef_star(&IndepSetInstance::new(graph, *k)?)?
        }
    };
    emit(out, &args.output, &instance_to_json(&inst))?;
    Ok(0)
}
