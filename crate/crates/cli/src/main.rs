use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use css_surgery::codemap::synthesize_circuit;
use css_surgery::csscode::{CodeError, SearchBudget};
use css_surgery::cubical::{self, OpenCubicalComplex};
use css_surgery::io::{self as cio, IoError};
use css_surgery::stabsim::{self, FreshState, LogicalState, ProtocolOptions};
use css_surgery::surgery::{self, GaugeFix, MergeOptions, SandwichPlan, Side, SurgeryError};
use css_surgery::{BitVec, CssCode, F2Matrix, Kind};

#[derive(Parser)]
#[command(name = "css-surgery", version, about = "CSS code surgery via chain complex colimits")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Write the artifact here instead of stdout; the report then goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest kernel dimension enumerated by distance searches.
    #[arg(long, global = true, default_value_t = 28, value_parser = clap::value_parser!(u64).range(1..=63))]
    max_kernel_dim: u64,
    /// Largest operator support enumerated by the separation check.
    #[arg(long, global = true, default_value_t = 22, value_parser = clap::value_parser!(u64).range(1..=63))]
    max_support: u64,
    /// Largest number of supports tried by the weight-ordered distance search.
    #[arg(long, global = true, default_value_t = 1 << 28, value_parser = clap::value_parser!(u64).range(1..))]
    max_candidates: u64,
}

impl Global {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_kernel_dim: self.max_kernel_dim as usize,
            max_weight_candidates: self.max_candidates,
            max_support: self.max_support as usize,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a code from a cubical complex.
    Gen {
        #[command(subcommand)]
        family: Family,
        /// Emit the cubical complex instead of the code.
        #[arg(long)]
        complex: bool,
    },
    /// Print n, k, distances and the weight profile of a code (stdin if no file).
    Info { file: Option<PathBuf> },
    /// Merge, sandwich and verification commands.
    Surgery {
        #[command(subcommand)]
        op: SurgeryCmd,
    },
    #[command(name = "surgery-merge")]
    SurgeryMerge(MergeArgs),
    #[command(name = "surgery-sandwich")]
    SurgerySandwich(SandwichArgs),
    #[command(name = "separation-check")]
    SeparationCheck(MergeArgs),
    #[command(name = "gauge-check")]
    GaugeCheck(GaugeArgs),
    /// Emit the CNOT circuit of a matrix or of a merge map.
    Circuit(CircuitArgs),
    /// Run the merge protocol on the stabilizer simulator.
    Simulate {
        #[command(subcommand)]
        what: SimulateCmd,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Toric code on an m × n torus.
    Toric { m: usize, n: usize },
    /// Surface patch of width w and height h.
    Patch { w: usize, h: usize },
    /// Repetition code on a cycle of n vertices.
    Cycle { n: usize },
}

#[derive(Subcommand)]
enum SurgeryCmd {
    Merge(MergeArgs),
    Sandwich(SandwichArgs),
    #[command(name = "separation-check")]
    SeparationCheck(MergeArgs),
    #[command(name = "gauge-check")]
    GaugeCheck(GaugeArgs),
}

#[derive(Subcommand)]
enum SimulateCmd {
    Merge(SimulateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Z,
    X,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Z => Kind::Z,
            KindArg::X => Kind::X,
        }
    }
}

#[derive(Args)]
struct PairArgs {
    code_c: PathBuf,
    code_d: PathBuf,
    /// Operator used on both sides.
    #[arg(long)]
    op: Option<String>,
    #[arg(long)]
    op_c: Option<String>,
    #[arg(long)]
    op_d: Option<String>,
    /// Qubits of D matched to the sorted support of the operator on C, comma separated.
    #[arg(long)]
    pairing: Option<String>,
    /// Skip the separation check.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct MergeArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, value_enum, default_value = "z")]
    kind: KindArg,
}

#[derive(Args)]
struct SandwichArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Distance the sandwiched code must not drop below; defaults to min(d_C, d_D).
    #[arg(long)]
    d_before: Option<usize>,
}

#[derive(Args)]
struct GaugeArgs {
    code: PathBuf,
    /// Optional second code, checked with `--op-d` (or `--op`).
    code_d: Option<PathBuf>,
    #[arg(long)]
    op: Option<String>,
    #[arg(long)]
    op_d: Option<String>,
    #[arg(long, value_enum, default_value = "z")]
    kind: KindArg,
}

#[derive(Args)]
struct CircuitArgs {
    /// Matrix text file for f0; otherwise the merge map of the two codes.
    #[arg(long, conflicts_with_all = ["code_c", "code_d"])]
    matrix: Option<PathBuf>,
    code_c: Option<PathBuf>,
    code_d: Option<PathBuf>,
    #[arg(long)]
    op: Option<String>,
    #[arg(long)]
    op_c: Option<String>,
    #[arg(long)]
    op_d: Option<String>,
    #[arg(long)]
    pairing: Option<String>,
    #[arg(long)]
    force: bool,
    #[arg(long, value_enum, default_value = "z")]
    kind: KindArg,
    /// Emit the split map instead of the merge map.
    #[arg(long)]
    split: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    plan: PathBuf,
    /// One of 0, 1, +, - per logical of C then D, comma separated.
    #[arg(long)]
    logical: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Preparation of each fresh qubit (+, -, 0, 1), comma separated.
    #[arg(long)]
    fresh: Option<String>,
    /// Track the gauge fix as a Pauli frame instead of applying it.
    #[arg(long)]
    frame_only: bool,
}

/// A failed step of the merge procedure: matching operator, separation,
/// gauge fixing, distance bounded below, construction.
struct StepFailure {
    step: u8,
    name: &'static str,
    message: String,
    detail: Value,
}

enum Failure {
    Step(StepFailure),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Other(e.into())
    }
}

impl From<SurgeryError> for Failure {
    fn from(e: SurgeryError) -> Self {
        let message = e.to_string();
        let (step, name, detail) = match &e {
            SurgeryError::NotLogical { side, class } => {
                (1, "matching-logical", json!({"side": side, "class": class}))
            }
            SurgeryError::StructureMismatch(m) => (1, "matching-logical", json!({"mismatch": m})),
            SurgeryError::NotSeparated(v) => (2, "separation", json!({"violation": v})),
            SurgeryError::NotGaugeFixable { side, qubit } => {
                (3, "gauge-fixing", json!({"side": side, "qubit": qubit}))
            }
            SurgeryError::Invariant(m) => (5, "merge", json!({"invariant": m})),
            _ => return Failure::Other(e.into()),
        };
        Failure::Step(StepFailure { step, name, message, detail })
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Step(f)) => {
            let report = json!({
                "ok": false,
                "failed_step": f.step,
                "step": f.name,
                "message": f.message,
                "detail": f.detail,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("json value"));
            eprintln!("verification failed at step {} ({}): {}", f.step, f.name, f.message);
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(1)
        }
    }
}

/// Error chain, with a commutation failure named as such.
fn describe(e: &anyhow::Error) -> String {
    let text = format!("{e:#}");
    let commutation = e.chain().any(|c| {
        matches!(c.downcast_ref::<CodeError>(), Some(CodeError::Commutation { .. }))
            || matches!(c.downcast_ref::<SurgeryError>(), Some(SurgeryError::Code(CodeError::Commutation { .. })))
    }) || text.contains("anticommutes with");
    if commutation {
        format!("CommutationError: {text}")
    } else {
        text
    }
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Gen { family, complex } => gen(g, family, *complex),
        Command::Info { file } => info(g, file.as_deref()),
        Command::Surgery { op } => match op {
            SurgeryCmd::Merge(a) => merge(g, a),
            SurgeryCmd::Sandwich(a) => sandwich(g, a),
            SurgeryCmd::SeparationCheck(a) => separation(g, a),
            SurgeryCmd::GaugeCheck(a) => gauge(g, a),
        },
        Command::SurgeryMerge(a) => merge(g, a),
        Command::SurgerySandwich(a) => sandwich(g, a),
        Command::SeparationCheck(a) => separation(g, a),
        Command::GaugeCheck(a) => gauge(g, a),
        Command::Circuit(a) => circuit(g, a),
        Command::Simulate { what: SimulateCmd::Merge(a) } => simulate(g, a),
    }
}

fn read_text(path: Option<&Path>) -> anyhow::Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn read_code(path: Option<&Path>) -> anyhow::Result<CssCode> {
    let text = read_text(path)?;
    let name = path.map_or("stdin".to_string(), |p| p.display().to_string());
    cio::read_code(&text).with_context(|| format!("parsing {name}"))
}

fn check_out_path(g: &Global, inputs: &[&Path]) -> anyhow::Result<()> {
    if let Some(out) = &g.out {
        if inputs.contains(&out.as_path()) {
            bail!("output path {} is also an input", out.display());
        }
    }
    Ok(())
}

/// Writes the artifact to `--out` or stdout, and the report to whichever
/// stream the artifact does not use.
fn emit(g: &Global, artifact: Option<&str>, report_json: Value, report_text: &str) -> anyhow::Result<()> {
    let report = if g.json {
        serde_json::to_string_pretty(&report_json)? + "\n"
    } else {
        report_text.to_string()
    };
    match (artifact, &g.out) {
        (Some(a), Some(out)) => {
            fs::write(out, with_newline(a)).with_context(|| format!("writing {}", out.display()))?;
            print!("{report}");
        }
        (Some(a), None) => {
            print!("{}", with_newline(a));
            eprint!("{report}");
        }
        (None, Some(out)) => {
            fs::write(out, &report).with_context(|| format!("writing {}", out.display()))?;
        }
        (None, None) => print!("{report}"),
    }
    io::stdout().flush()?;
    Ok(())
}

fn with_newline(s: &str) -> String {
    if s.ends_with('\n') {
        s.to_string()
    } else {
        format!("{s}\n")
    }
}

fn parse_bits(s: &str, n: usize, what: &str) -> anyhow::Result<BitVec> {
    let v: BitVec = s.parse().map_err(|e| anyhow!("{what}: {e}"))?;
    if v.len() != n {
        bail!("{what} has {} bits, code has {n} qubits", v.len());
    }
    Ok(v)
}

fn parse_list(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad index {t:?}")))
        .collect()
}

struct Loaded {
    c: CssCode,
    d: CssCode,
    vc: BitVec,
    vd: BitVec,
    pairing: Option<Vec<usize>>,
}

fn load_pair(g: &Global, p: &PairArgs) -> anyhow::Result<Loaded> {
    check_out_path(g, &[&p.code_c, &p.code_d])?;
    let c = read_code(Some(&p.code_c))?;
    let d = read_code(Some(&p.code_d))?;
    let oc = p.op_c.as_ref().or(p.op.as_ref()).ok_or_else(|| anyhow!("--op-c or --op is required"))?;
    let od = p.op_d.as_ref().or(p.op.as_ref()).ok_or_else(|| anyhow!("--op-d or --op is required"))?;
    let vc = parse_bits(oc, c.n(), "operator on C")?;
    let vd = parse_bits(od, d.n(), "operator on D")?;
    let pairing = p.pairing.as_deref().map(parse_list).transpose()?;
    Ok(Loaded { c, d, vc, vd, pairing })
}

fn gen(g: &Global, family: &Family, complex: bool) -> Outcome {
    let cx: OpenCubicalComplex = match *family {
        Family::Toric { m, n } => cubical::toric(m, n),
        Family::Patch { w, h } => cubical::patch(w, h),
        Family::Cycle { n } => cubical::cycle_graph(n),
    }
    .map_err(|e| anyhow!(e))?;
    let artifact = if complex {
        serde_json::to_string_pretty(&cx).map_err(anyhow::Error::from)?
    } else {
        let code = CssCode::from_z_complex(cx.to_chain_complex()).map_err(|e| anyhow!(e))?;
        cio::to_json(&code)?
    };
    if let Some(out) = &g.out {
        fs::write(out, with_newline(&artifact)).with_context(|| format!("writing {}", out.display()))?;
    } else {
        print!("{}", with_newline(&artifact));
    }
    Ok(())
}

fn info(g: &Global, file: Option<&Path>) -> Outcome {
    let code = read_code(file)?;
    let m = code.metrics_with(&g.budget()).map_err(|e| anyhow!(e))?;
    let w = code.weight_profile();
    let show = |d: Option<usize>| d.map_or("-".to_string(), |d| d.to_string());
    let text = format!(
        "n={} k={} d={} d_z={} d_x={}\nweights: w_z={} w_x={} q_z={} q_x={}\nchecks: {} Z, {} X\n",
        m.n,
        m.k,
        show(m.d),
        show(m.d_z),
        show(m.d_x),
        w.w_z,
        w.w_x,
        w.q_z,
        w.q_x,
        code.num_z_checks(),
        code.num_x_checks()
    );
    let report = json!({
        "n": m.n, "k": m.k, "d": m.d, "d_z": m.d_z, "d_x": m.d_x,
        "weights": w,
        "z_checks": code.num_z_checks(), "x_checks": code.num_x_checks(),
    });
    emit(g, None, report, &text)?;
    Ok(())
}

fn merge(g: &Global, a: &MergeArgs) -> Outcome {
    let l = load_pair(g, &a.pair)?;
    let opts = MergeOptions { force: a.pair.force, pairing: l.pairing.as_deref(), budget: g.budget() };
    let kind = Kind::from(a.kind);
    let m = surgery::merge(&l.c, &l.d, &l.vc, &l.vd, kind, &opts)?;
    let counts = m.counts();
    let ldpc = surgery::ldpc_bounds_check(&m, &l.c.weight_profile(), &l.d.weight_profile());
    let mut text = format!(
        "{kind:?} merge: n_C+n_D={} n_V={} n_Q={} k_C+k_D={} k_Q={}\nglued checks: {}\n",
        counts.n_sum,
        counts.n_v,
        counts.n_q,
        counts.k_sum,
        counts.k_q,
        m.check_identifications.len()
    );
    text += &match &m.separation {
        Some(s) => format!("separation: ok ({} operators checked)\n", s.checked),
        None => "separation: skipped\n".to_string(),
    };
    for b in &ldpc.bounds {
        text += &format!("{}: {} (limit {}) {}\n", b.name, b.measured, b.limit, if b.holds { "ok" } else { "VIOLATED" });
    }
    let report = json!({
        "kind": kind,
        "counts": counts,
        "qubit_identifications": m.qubit_identifications,
        "check_identifications": m.check_identifications,
        "separation": m.separation,
        "ldpc": ldpc,
    });
    let artifact = cio::to_json(&m.merged)?;
    emit(g, Some(&artifact), report, &text)?;
    Ok(())
}

fn separation(g: &Global, a: &MergeArgs) -> Outcome {
    let l = load_pair(g, &a.pair)?;
    let kind = Kind::from(a.kind);
    let verdict = surgery::check_separation(&l.c, &l.d, &l.vc, &l.vd, kind, l.pairing.as_deref(), &g.budget())?;
    if let Some(v) = verdict.violation {
        return Err(SurgeryError::NotSeparated(v).into());
    }
    let text = format!("separated: yes ({} operators checked)\n", verdict.checked);
    emit(g, None, json!({"ok": true, "separated": true, "checked": verdict.checked}), &text)?;
    Ok(())
}

fn gauge(g: &Global, a: &GaugeArgs) -> Outcome {
    let kind = Kind::from(a.kind);
    let mut inputs = vec![a.code.as_path()];
    inputs.extend(a.code_d.as_deref());
    check_out_path(g, &inputs)?;
    let mut sides = vec![(Side::C, read_code(Some(&a.code))?, a.op.clone())];
    if let Some(p) = &a.code_d {
        sides.push((Side::D, read_code(Some(p))?, a.op_d.clone().or(a.op.clone())));
    }
    let mut text = String::new();
    let mut reports = Vec::new();
    for (side, code, op) in sides {
        let op = op.ok_or_else(|| anyhow!("--op is required"))?;
        let v = parse_bits(&op, code.n(), "operator")?;
        let fix = surgery::check_gauge_fixable(&code, &v, kind).map_err(|e| match e {
            SurgeryError::NotLogical { class, .. } => SurgeryError::NotLogical { side, class },
            other => other,
        })?;
        match fix {
            GaugeFix::Fixable { operators } => {
                text += &format!("{side:?}: fixable\n");
                for o in &operators {
                    text += &format!("  {o}\n");
                }
                reports.push(json!({"side": side, "fixable": true, "operators": operators}));
            }
            GaugeFix::NotFixable { qubit } => return Err(SurgeryError::NotGaugeFixable { side, qubit }.into()),
        }
    }
    emit(g, None, json!({"ok": true, "sides": reports}), &text)?;
    Ok(())
}

fn sandwich(g: &Global, a: &SandwichArgs) -> Outcome {
    let l = load_pair(g, &a.pair)?;
    let opts = MergeOptions { force: a.pair.force, pairing: l.pairing.as_deref(), budget: g.budget() };
    let plan = surgery::build_sandwich(&l.c, &l.d, &l.vc, &l.vd, &opts)?;
    let r = &plan.report;
    let d_before = match a.d_before {
        Some(d) => d,
        None => match (r.d_c, r.d_d) {
            (Some(x), Some(y)) => x.min(y),
            _ => return Err(anyhow!("both codes need k > 0 to define the distance").into()),
        },
    };
    let bounded = surgery::check_distance_bounded_below(&plan, d_before, &g.budget())?;
    if !bounded {
        return Err(Failure::Step(StepFailure {
            step: 4,
            name: "distance-bounded-below",
            message: format!("sandwiched code has a Z logical of weight below {d_before}"),
            detail: json!({"d_before": d_before}),
        }));
    }
    let mut text = format!(
        "sandwich: n_T={} k_T={} fresh qubits r={} new Z checks m={} rounds={}\n",
        r.n_t, r.k_t, plan.fresh_qubits, plan.new_z_checks, plan.rounds
    );
    text += &format!("distance bounded below {d_before}: yes\n");
    for b in r.intermediate_bounds.iter().chain(&r.sandwich_bounds) {
        text += &format!("{}: {} (limit {}) {}\n", b.name, b.measured, b.limit, if b.holds { "ok" } else { "VIOLATED" });
    }
    let report = json!({
        "ok": true,
        "n_t": r.n_t, "k_t": r.k_t,
        "fresh_qubits": plan.fresh_qubits,
        "new_z_checks": plan.new_z_checks,
        "rounds": plan.rounds,
        "d_before": d_before,
        "report": r,
    });
    let artifact = cio::to_json(&plan)?;
    emit(g, Some(&artifact), report, &text)?;
    Ok(())
}

fn circuit(g: &Global, a: &CircuitArgs) -> Outcome {
    let (f0, label) = if let Some(path) = &a.matrix {
        check_out_path(g, &[path])?;
        let text = read_text(Some(path))?;
        let m: F2Matrix = text.parse().map_err(|e| anyhow!("parsing {}: {e}", path.display()))?;
        (m, "matrix".to_string())
    } else {
        let (Some(code_c), Some(code_d)) = (&a.code_c, &a.code_d) else {
            return Err(anyhow!("give --matrix or two code files").into());
        };
        let pair = PairArgs {
            code_c: code_c.clone(),
            code_d: code_d.clone(),
            op: a.op.clone(),
            op_c: a.op_c.clone(),
            op_d: a.op_d.clone(),
            pairing: a.pairing.clone(),
            force: a.force,
        };
        let l = load_pair(g, &pair)?;
        let opts = MergeOptions { force: a.force, pairing: l.pairing.as_deref(), budget: g.budget() };
        let m = surgery::merge(&l.c, &l.d, &l.vc, &l.vd, a.kind.into(), &opts)?;
        let map = if a.split { surgery::split_map(&m) } else { m.merge_map };
        let (f0, transported) = stabsim::physical_action(&map);
        (f0, format!("{:?} map transporting {transported:?} strings", map.direction))
    };
    let circ = synthesize_circuit(&f0);
    let text = format!("{label}: {} -> {} qubits, {} CNOTs\n", circ.n_in, circ.n_out, circ.cnot_count());
    let report = json!({"n_in": circ.n_in, "n_out": circ.n_out, "cnots": circ.cnot_count(), "source": label});
    emit(g, Some(&circ.to_string()), report, &text)?;
    Ok(())
}

fn parse_fresh(s: &str) -> anyhow::Result<Vec<FreshState>> {
    s.split(',')
        .map(|t| match t.trim() {
            "+" => Ok(FreshState::Plus),
            "-" => Ok(FreshState::Minus),
            "0" => Ok(FreshState::Zero),
            "1" => Ok(FreshState::One),
            other => Err(anyhow!("bad fresh state {other:?}")),
        })
        .collect()
}

fn simulate(g: &Global, a: &SimulateArgs) -> Outcome {
    check_out_path(g, &[&a.plan])?;
    let text = read_text(Some(&a.plan))?;
    let plan: SandwichPlan = cio::from_json(&text).with_context(|| format!("parsing {}", a.plan.display()))?;
    let logical: Vec<LogicalState> =
        a.logical.split(',').map(|t| t.trim().parse()).collect::<Result<_, _>>().map_err(|e| anyhow!("--logical: {e}"))?;
    let fresh = a.fresh.as_deref().map(parse_fresh).transpose()?.unwrap_or_default();
    if fresh.len() > plan.fresh_qubits {
        return Err(anyhow!("{} fresh states for {} fresh qubits", fresh.len(), plan.fresh_qubits).into());
    }
    let initial = stabsim::prepare_plan_input(&plan, &logical).map_err(|e| anyhow!(e))?;
    let opts = ProtocolOptions { seed: a.seed, fresh, frame_only: a.frame_only };
    let out = stabsim::run_merge_protocol(&plan, &initial, &opts).map_err(|e| anyhow!(e))?;
    let sign = |v: i8| if v > 0 { "+1" } else { "-1" };
    let mut report_text = format!("c_L = {}\n", sign(out.c_l));
    let checks: Vec<&str> = out.per_check.iter().map(|&v| sign(v)).collect();
    report_text += &format!("new checks: {}\n", checks.join(" "));
    let generators = plan.sandwiched.num_x_checks() + plan.sandwiched.num_z_checks();
    report_text += &format!(
        "final state: {}/{} generators of T satisfied\n",
        generators - out.unsatisfied.len(),
        generators
    );
    let report = json!({
        "c_l": out.c_l,
        "per_check": out.per_check,
        "other_checks": out.other_checks,
        "frame": out.frame.to_string(),
        "generators": generators,
        "unsatisfied": out.unsatisfied,
        "verified": out.verified(),
    });
    if !out.verified() {
        return Err(Failure::Step(StepFailure {
            step: 5,
            name: "merge",
            message: format!("{} generators of T not restored", out.unsatisfied.len()),
            detail: report,
        }));
    }
    emit(g, None, report, &report_text)?;
    Ok(())
}
