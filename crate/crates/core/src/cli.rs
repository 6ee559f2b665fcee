//! The `rflow` command line. [`run`] parses arguments, dispatches, and maps
//! errors to exit codes: 2 for bad input, 3 when a path or enumeration
//! budget would be exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::eval::{check_feasible, destroyed_value, nominal_value, worst_case_scenario, PathFlow};
use crate::format::{parse_graph, parse_instance, parse_path_flow, parse_scenario, write_instance, write_path_flow};
use crate::gadgets::{build_adp_gadget, build_clique_gadget, SimpleGraph, Terminals};
use crate::graph::{max_flow, min_cardinality_cut, Instance};
use crate::kroute::robust_baseline;
use crate::lp::{solve_full_lp, solve_row_generation, verify_duality, DEFAULT_BUDGET, DEFAULT_PATH_LIMIT};
use crate::random::{random_instance, RandomSpec};
use crate::rational::{format_rational, Capacity};
use crate::report::ReportDoc;
use crate::special::{brute_force_integral, solve_integral_cap2, solve_unit_capacity};
use crate::transform::{finitize_infinities, map_flow_back, scale_to_integral, split_capacities};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "rflow", version, about = "Exact maximum robust flow under k arc failures")]
struct Cli {
    /// Emit JSON instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    /// Largest number of failure scenarios or candidates to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Largest number of source-sink paths to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_PATH_LIMIT)]
    path_limit: usize,
    /// Worker threads for parallel enumeration. Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Use a seeded random instance instead of an instance file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an instance; with --seed, print the generated instance.
    Validate(InstanceArg),
    /// Solve the path LP exactly.
    SolveLp {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long, value_enum, default_value_t = LpMethod::RowGeneration)]
        method: LpMethod,
    },
    /// Best integral robust flow.
    SolveInt {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long, value_enum, default_value_t = IntMethod::Auto)]
        method: IntMethod,
    },
    /// Nominal, worst-case loss and robust value of a path flow.
    Eval {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long)]
        flow: PathBuf,
        /// Also report the loss under this scenario.
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Worst failure scenario for a path flow.
    WorstCase {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long)]
        flow: PathBuf,
    },
    /// Rewrite an instance.
    Transform {
        #[arg(value_enum)]
        kind: TransformKind,
        #[command(flatten)]
        input: InstanceArg,
        /// With `split`: a flow on the split instance to map back.
        #[arg(long)]
        map_flow: Option<PathBuf>,
    },
    /// Build a reduction instance.
    Gadget {
        #[command(subcommand)]
        kind: GadgetKind,
    },
    /// Approximation baselines.
    Approx {
        #[command(subcommand)]
        kind: ApproxKind,
    },
}

#[derive(Debug, Args)]
struct InstanceArg {
    /// Instance file.
    instance: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LpMethod {
    Full,
    RowGeneration,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum IntMethod {
    /// Unit or {1, 2} algorithm when it applies, exhaustive search otherwise.
    Auto,
    Unit,
    Cap2,
    Brute,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TransformKind {
    Split,
    Finitize,
    Scale,
}

#[derive(Debug, Args)]
struct GadgetOutput {
    /// Write the instance here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the JSON role labels here.
    #[arg(long)]
    roles: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum GadgetKind {
    /// From an undirected graph and a clique size.
    Clique {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        kprime: usize,
        #[command(flatten)]
        output: GadgetOutput,
    },
    /// From a directed graph and two demand pairs.
    Adp {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, num_args = 4, value_names = ["S1", "T1", "S2", "T2"])]
        terminals: Vec<usize>,
        #[command(flatten)]
        output: GadgetOutput,
    },
}

#[derive(Debug, Subcommand)]
enum ApproxKind {
    /// Maximum (k+1)-uniform flow and its guaranteed robust value.
    Kroute {
        #[command(flatten)]
        input: InstanceArg,
        /// Failure budget; defaults to the instance's k.
        #[arg(long)]
        k: Option<usize>,
    },
}

/// Failures inside a command: library errors plus file access.
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = std::result::Result<String, Failure>;

fn read(path: &FsPath) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &FsPath, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Aligns whitespace-separated columns.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, cell)| format!("{cell:<w$}", w = widths[c]))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn row(label: &str, value: impl Into<String>) -> Vec<String> {
    vec![label.to_string(), value.into()]
}

fn arcs_text(arcs: &[usize]) -> String {
    if arcs.is_empty() {
        "-".to_string()
    } else {
        arcs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
    }
}

fn report_text(doc: &ReportDoc) -> String {
    let mut rows = vec![
        row("method", doc.method.clone()),
        row("objective", doc.objective.clone()),
        row("nominal", doc.nominal.clone()),
        row("lambda", doc.lambda.clone()),
    ];
    if let Some(g) = &doc.guarantee {
        rows.push(row("guarantee", g.clone()));
    }
    rows.push(row("worst scenario", arcs_text(&doc.worst_scenario)));
    rows.push(row("iterations", doc.iterations.to_string()));
    rows.push(row("scenarios", doc.scenarios_generated.to_string()));
    let mut out = table(&rows);
    out.push('\n');
    let mut paths = vec![row("path", "value")];
    paths.extend(doc.flow.iter().map(|f| vec![arcs_text(&f.path), f.value.clone()]));
    out.push_str(&table(&paths));
    out
}

fn json_text(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("json value serializes");
    out.push('\n');
    out
}

struct Context {
    json: bool,
    budget: u128,
    path_limit: usize,
    seed: Option<u64>,
}

impl Context {
    fn unchecked_instance(&self, input: &InstanceArg) -> std::result::Result<Instance, Failure> {
        match (&input.instance, self.seed) {
            (Some(_), Some(_)) => Err(Failure::Io("give either an instance file or --seed, not both".into())),
            (None, None) => Err(Failure::Io("missing instance file (or --seed)".into())),
            (None, Some(seed)) => Ok(random_instance(seed, &RandomSpec::default())),
            (Some(path), None) => Ok(parse_instance(&read(path)?)?),
        }
    }

    fn instance(&self, input: &InstanceArg) -> std::result::Result<Instance, Failure> {
        let inst = self.unchecked_instance(input)?;
        let report = inst.validate();
        if !report.is_valid() {
            return Err(Error::InvalidInstance(report.to_string()).into());
        }
        Ok(inst)
    }

    fn flow(&self, inst: &Instance, path: &FsPath) -> std::result::Result<PathFlow, Failure> {
        let x = parse_path_flow(&read(path)?)?;
        check_feasible(inst, &x)?;
        Ok(x)
    }

    fn emit_report(&self, doc: &ReportDoc) -> String {
        if self.json {
            doc.to_json()
        } else {
            report_text(doc)
        }
    }
}

fn validate(ctx: &Context, input: &InstanceArg) -> CmdResult {
    let inst = ctx.unchecked_instance(input)?;
    let report = inst.validate();
    if !report.is_valid() {
        return Err(Error::InvalidInstance(report.to_string()).into());
    }
    if ctx.seed.is_some() && !ctx.json {
        return Ok(write_instance(&inst));
    }
    let flow = max_flow(&inst, None).ok().map(|f| format_rational(&f.value));
    let cut = min_cardinality_cut(&inst).arc_ids.len();
    if ctx.json {
        let mut doc = json!({
            "valid": true,
            "nodes": inst.node_count,
            "arcs": inst.arc_count(),
            "k": inst.k,
            "max_flow": flow,
            "min_cut_arcs": cut,
        });
        if ctx.seed.is_some() {
            doc["instance"] = Value::String(write_instance(&inst));
        }
        return Ok(json_text(&doc));
    }
    Ok(table(&[
        row("valid", "yes"),
        row("nodes", inst.node_count.to_string()),
        row("arcs", inst.arc_count().to_string()),
        row("k", inst.k.to_string()),
        row("max flow", flow.unwrap_or_else(|| "INF".into())),
        row("min cut arcs", cut.to_string()),
    ]))
}

fn solve_lp(ctx: &Context, input: &InstanceArg, method: LpMethod) -> CmdResult {
    let inst = ctx.instance(input)?;
    let (name, report) = match method {
        LpMethod::Full => ("full-lp", solve_full_lp(&inst, ctx.path_limit, ctx.budget)?),
        LpMethod::RowGeneration => ("row-generation", solve_row_generation(&inst, ctx.path_limit, ctx.budget)?),
    };
    if !verify_duality(&report, &inst) {
        return Err(Failure::Lib(Error::NotFeasible("dual certificate failed verification".into())));
    }
    Ok(ctx.emit_report(&ReportDoc::from_solve(name, &report)))
}

fn solve_int(ctx: &Context, input: &InstanceArg, method: IntMethod) -> CmdResult {
    let inst = ctx.instance(input)?;
    let is = |allowed: &[i64]| inst.arcs.iter().all(|a| allowed.iter().any(|&c| a.capacity == Capacity::from_int(c)));
    let method = match method {
        IntMethod::Auto if is(&[1]) => IntMethod::Unit,
        IntMethod::Auto if is(&[1, 2]) => IntMethod::Cap2,
        IntMethod::Auto => IntMethod::Brute,
        m => m,
    };
    let (name, x) = match method {
        IntMethod::Unit => ("unit-capacity", solve_unit_capacity(&inst)?.0),
        IntMethod::Cap2 => ("capacity-two", solve_integral_cap2(&inst)?.flow),
        IntMethod::Brute | IntMethod::Auto => ("brute-force", brute_force_integral(&inst, ctx.budget)?.0),
    };
    let worst = worst_case_scenario(&inst, &x, ctx.budget)?;
    Ok(ctx.emit_report(&ReportDoc::from_flow(name, &x, &worst.lambda, &worst.scenario)))
}

fn eval(ctx: &Context, input: &InstanceArg, flow: &FsPath, scenario: Option<&FsPath>) -> CmdResult {
    let inst = ctx.instance(input)?;
    let x = ctx.flow(&inst, flow)?;
    let worst = worst_case_scenario(&inst, &x, ctx.budget)?;
    let nominal = nominal_value(&x);
    let robust = &nominal - &worst.lambda;
    let under = match scenario {
        Some(path) => {
            let s = parse_scenario(&read(path)?)?;
            s.check(&inst)?;
            Some(destroyed_value(&x, &s))
        }
        None => None,
    };
    if ctx.json {
        let mut doc = json!({
            "nominal": format_rational(&nominal),
            "lambda": format_rational(&worst.lambda),
            "robust_value": format_rational(&robust),
            "worst_scenario": worst.scenario.arcs(),
        });
        if let Some(d) = &under {
            doc["scenario_destroyed"] = Value::String(format_rational(d));
        }
        return Ok(json_text(&doc));
    }
    let mut rows = vec![
        row("nominal", format_rational(&nominal)),
        row("lambda", format_rational(&worst.lambda)),
        row("robust value", format_rational(&robust)),
        row("worst scenario", arcs_text(worst.scenario.arcs())),
    ];
    if let Some(d) = &under {
        rows.push(row("scenario destroys", format_rational(d)));
    }
    Ok(table(&rows))
}

fn worst_case(ctx: &Context, input: &InstanceArg, flow: &FsPath) -> CmdResult {
    let inst = ctx.instance(input)?;
    let x = ctx.flow(&inst, flow)?;
    let worst = worst_case_scenario(&inst, &x, ctx.budget)?;
    if ctx.json {
        return Ok(json_text(&json!({
            "scenario": worst.scenario.arcs(),
            "lambda": format_rational(&worst.lambda),
        })));
    }
    Ok(table(&[
        row("scenario", arcs_text(worst.scenario.arcs())),
        row("lambda", format_rational(&worst.lambda)),
    ]))
}

fn transform(ctx: &Context, kind: TransformKind, input: &InstanceArg, map_flow: Option<&FsPath>) -> CmdResult {
    let inst = ctx.instance(input)?;
    match kind {
        TransformKind::Split => {
            let (split, map) = split_capacities(&inst)?;
            if let Some(path) = map_flow {
                let x = parse_path_flow(&read(path)?)?;
                let back = map_flow_back(&inst, &split, &map, &x)?;
                return Ok(write_path_flow(&back));
            }
            if ctx.json {
                return Ok(json_text(&json!({ "instance": write_instance(&split), "map": map })));
            }
            Ok(write_instance(&split))
        }
        TransformKind::Finitize => {
            let out = finitize_infinities(&inst)?;
            if ctx.json {
                return Ok(json_text(&json!({ "instance": write_instance(&out) })));
            }
            Ok(write_instance(&out))
        }
        TransformKind::Scale => {
            let (out, factor) = scale_to_integral(&inst)?;
            if ctx.json {
                return Ok(json_text(&json!({
                    "instance": write_instance(&out),
                    "factor": format_rational(&factor),
                })));
            }
            Ok(write_instance(&out))
        }
    }
}

fn emit_gadget(ctx: &Context, inst: &Instance, roles: Value, output: &GadgetOutput) -> CmdResult {
    let text = write_instance(inst);
    if let Some(path) = &output.roles {
        write(path, &json_text(&roles))?;
    }
    if let Some(path) = &output.out {
        write(path, &text)?;
        let summary = json!({ "nodes": inst.node_count, "arcs": inst.arc_count(), "k": inst.k });
        return Ok(if ctx.json {
            json_text(&summary)
        } else {
            table(&[
                row("nodes", inst.node_count.to_string()),
                row("arcs", inst.arc_count().to_string()),
                row("k", inst.k.to_string()),
            ])
        });
    }
    if ctx.json {
        return Ok(json_text(&json!({ "instance": text, "roles": roles })));
    }
    Ok(text)
}

fn gadget(ctx: &Context, kind: &GadgetKind) -> CmdResult {
    match kind {
        GadgetKind::Clique { graph, kprime, output } => {
            let g = SimpleGraph::from_plain(&parse_graph(&read(graph)?)?)?;
            let gadget = build_clique_gadget(&g, *kprime)?;
            emit_gadget(ctx, &gadget.instance, gadget.roles_json(), output)
        }
        GadgetKind::Adp { graph, terminals, output } => {
            let g = parse_graph(&read(graph)?)?;
            let t = Terminals::new(terminals[0], terminals[1], terminals[2], terminals[3]);
            let gadget = build_adp_gadget(&g, t)?;
            emit_gadget(ctx, &gadget.instance, gadget.roles_json(), output)
        }
    }
}

fn approx(ctx: &Context, kind: &ApproxKind) -> CmdResult {
    let ApproxKind::Kroute { input, k } = kind;
    let mut inst = ctx.instance(input)?;
    if let Some(k) = k {
        inst = inst.with_k(*k);
        let report = inst.validate();
        if !report.is_valid() {
            return Err(Error::InvalidInstance(report.to_string()).into());
        }
    }
    let baseline = robust_baseline(&inst, inst.k)?;
    let worst = worst_case_scenario(&inst, &baseline.flow, ctx.budget)?;
    let doc = ReportDoc::from_flow("kroute", &baseline.flow, &worst.lambda, &worst.scenario)
        .with_guarantee(&baseline.guarantee);
    Ok(ctx.emit_report(&doc))
}

fn dispatch(cli: &Cli) -> CmdResult {
    let ctx = Context { json: cli.json, budget: cli.budget, path_limit: cli.path_limit, seed: cli.seed };
    match &cli.command {
        Command::Validate(input) => validate(&ctx, input),
        Command::SolveLp { input, method } => solve_lp(&ctx, input, *method),
        Command::SolveInt { input, method } => solve_int(&ctx, input, *method),
        Command::Eval { input, flow, scenario } => eval(&ctx, input, flow, scenario.as_deref()),
        Command::WorstCase { input, flow } => worst_case(&ctx, input, flow),
        Command::Transform { kind, input, map_flow } => transform(&ctx, *kind, input, map_flow.as_deref()),
        Command::Gadget { kind } => gadget(&ctx, kind),
        Command::Approx { kind } => approx(&ctx, kind),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_budget_gate() => EXIT_BUDGET,
        Error::Infeasible | Error::Unbounded => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

fn report_failure(json: bool, reason: &str, message: &str, code: i32, out: &mut dyn Write, err: &mut dyn Write) {
    if json {
        let doc = json!({ "error": reason, "message": message, "exit_code": code });
        let _ = out.write_all(json_text(&doc).as_bytes());
    }
    let _ = writeln!(err, "error: {message} (reason: {reason})");
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Failure::Io("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Failure::Io(format!("cannot start thread pool: {e}"))),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_INTERNAL;
            }
            EXIT_OK
        }
        Err(Failure::Lib(e)) => {
            let code = exit_code(&e);
            report_failure(cli.json, e.kind(), &e.to_string(), code, out, err);
            code
        }
        Err(Failure::Io(message)) => {
            report_failure(cli.json, "Input", &message, EXIT_INPUT, out, err);
            EXIT_INPUT
        }
    }
}
