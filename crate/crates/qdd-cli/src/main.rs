//! Command-line front end: simulate circuits, inspect orders, benchmark
//! strategies against each other, and write generator circuits as QASM.
//!
//! Exit codes: 1 for parse problems, 2 for simulation failures, 3 for I/O.
//! Output files are only written after the work behind them succeeded.

use clap::{Args, Parser, Subcommand};
use qdd::circuit::generators::{
    gen_ghz, gen_graph_state, gen_qft, gen_qpe, gen_random, gen_wstate,
};
use qdd::{
    compare_orders, compute_order, emit_qasm, format_bits, parse_qasm, simulate, Circuit,
    QubitOrder, SimConfig, SimRun, Strategy, DEFAULT_TOLERANCE,
};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "qdd", version, about = "Edge-valued decision-diagram quantum circuit simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a QASM circuit and report node counts and timings
    Simulate(SimulateArgs),
    /// Show the qubit order a strategy picks for a circuit
    Order(OrderArgs),
    /// Compare every ordering strategy over a circuit suite, CSV out
    Bench(BenchArgs),
    /// Write a benchmark-family circuit as QASM
    Gen(GenArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// QASM file to run
    input: PathBuf,
    /// original | reversed | ngates | control_adjacency | proposed | explicit:2,1,0,...
    #[arg(long, default_value = "original", value_parser = Strategy::from_str)]
    order: Strategy,
    /// Amplitude interning tolerance (overrides QDD_TOLERANCE)
    #[arg(long)]
    tolerance: Option<f64>,
    /// Live-node budget; exceeding it even after collection aborts the run
    #[arg(long)]
    watermark: Option<usize>,
    /// Ordering-heuristic time budget in seconds
    #[arg(long, default_value_t = 600)]
    timeout: u64,
    /// Write a run summary as JSON
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Write a per-gate trace as CSV
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Keep every k-th trace row (the last gate is always kept)
    #[arg(long, default_value_t = 1)]
    trace_stride: usize,
    /// Print the k largest-magnitude basis amplitudes
    #[arg(long)]
    amplitudes: Option<usize>,
    /// Write the final diagram in Graphviz dot form
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct OrderArgs {
    /// QASM file to analyze
    input: PathBuf,
    /// Strategy to report
    #[arg(long, default_value = "proposed", value_parser = Strategy::from_str)]
    strategy: Strategy,
    /// Heuristic time budget in seconds
    #[arg(long, default_value_t = 600)]
    timeout: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Built-in generator suite (currently: desk)
    #[arg(long, conflicts_with = "dir")]
    suite: Option<String>,
    /// Directory of .qasm files to bench instead of a suite
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Write the CSV here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Runs per strategy; the fastest is kept
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    /// Ordering-heuristic time budget in seconds
    #[arg(long, default_value_t = 600)]
    timeout: u64,
    /// Amplitude interning tolerance (overrides QDD_TOLERANCE)
    #[arg(long)]
    tolerance: Option<f64>,
    /// Skip the dense cross-check (it only runs up to 12 qubits anyway)
    #[arg(long)]
    no_verify: bool,
}

#[derive(Args)]
struct GenArgs {
    /// ghz | wstate | qft | qpe | graph | random
    family: String,
    #[arg(long)]
    qubits: usize,
    /// Stream seed for the seeded families
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Layer count for the random family (defaults to 3x qubits)
    #[arg(long)]
    depth: Option<usize>,
    /// Entangle the input register first (qft)
    #[arg(long)]
    entangled: bool,
    /// Use an eigenphase the counting register cannot represent (qpe)
    #[arg(long)]
    inexact: bool,
    /// Write here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Fail {
    Parse(String),
    Sim(String),
    Io(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Parse(_) => 1,
            Fail::Sim(_) => 2,
            Fail::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Fail::Parse(m) | Fail::Sim(m) | Fail::Io(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Order(a) => cmd_order(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Gen(a) => cmd_gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn read_circuit(path: &Path) -> Result<Circuit, Fail> {
    let text = fs::read_to_string(path)
        .map_err(|e| Fail::Io(format!("{}: {e}", path.display())))?;
    let parsed =
        parse_qasm(&text).map_err(|e| Fail::Parse(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    let mut c = parsed.circuit;
    if let Some(stem) = path.file_stem() {
        c.name = stem.to_string_lossy().into_owned();
    }
    Ok(c)
}

fn resolve_tolerance(flag: Option<f64>) -> Result<f64, Fail> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("QDD_TOLERANCE") {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| Fail::Parse(format!("QDD_TOLERANCE is not a number: '{s}'"))),
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Fail> {
    fs::write(path, contents).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))
}

fn perm_string(order: &QubitOrder) -> String {
    order
        .perm()
        .iter()
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Maps a level-bit index into qubit-bit space for display.
fn index_in_qubit_space(level_idx: u64, order: &QubitOrder) -> u64 {
    let n = order.len();
    let mut out = 0u64;
    for l in 0..n {
        if (level_idx >> (n - 1 - l)) & 1 == 1 {
            out |= 1 << (n - 1 - order.qubit_at(l));
        }
    }
    out
}

fn trace_csv(run: &SimRun) -> String {
    let mut csv = String::from("gate_index,gate_name,cumulative_ns,live_nodes,apply_ops\n");
    if let Some(trace) = &run.result.trace {
        for r in &trace.records {
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                r.gate_index, r.gate_name, r.cumulative_ns, r.live_nodes, r.apply_ops
            );
        }
    }
    csv
}

fn summary_json(run: &SimRun) -> String {
    let r = &run.result;
    let v = serde_json::json!({
        "circuit": r.circuit_name,
        "num_qubits": r.num_qubits,
        "num_gates": r.num_gates,
        "strategy": r.strategy.to_string(),
        "order": r.order.perm(),
        "order_timed_out": r.order_timed_out,
        "final_nodes": r.final_nodes,
        "max_nodes": r.max_nodes,
        "apply_ops": r.apply_ops,
        "wall_ns": r.wall.as_nanos() as u64,
        "norm": r.norm,
    });
    serde_json::to_string_pretty(&v).expect("plain scalars serialize")
}

fn cmd_simulate(a: SimulateArgs) -> Result<(), Fail> {
    let c = read_circuit(&a.input)?;
    let mut cfg = SimConfig {
        strategy: a.order.clone(),
        tolerance: resolve_tolerance(a.tolerance)?,
        trace: a.trace.is_some(),
        trace_stride: a.trace_stride.max(1),
        ordering_timeout: Duration::from_secs(a.timeout),
        ..SimConfig::default()
    };
    if let Some(w) = a.watermark {
        cfg.gc_watermark = w;
    }
    let run = simulate(&c, &cfg).map_err(|e| Fail::Sim(e.to_string()))?;
    let r = &run.result;
    if r.order_timed_out {
        eprintln!("warning: ordering heuristic hit its deadline; fell back to the original order");
    }
    println!(
        "circuit {} ({} qubits, {} gates)",
        r.circuit_name, r.num_qubits, r.num_gates
    );
    println!("strategy {}", r.strategy);
    println!("order {}", perm_string(&r.order));
    println!(
        "final_nodes {}  max_nodes {}  apply_ops {}",
        r.final_nodes, r.max_nodes, r.apply_ops
    );
    println!("wall {:.3} ms  norm {:.12}", r.wall.as_secs_f64() * 1e3, r.norm);
    if let Some(k) = a.amplitudes {
        let order = run.result.order.clone();
        for (level_idx, v) in run.engine.top_amplitudes(run.state, k) {
            let idx = index_in_qubit_space(level_idx, &order);
            println!(
                "|{}>  {:+.9}{:+.9}i  p={:.9}",
                format_bits(idx, order.len()),
                v.re,
                v.im,
                v.norm_sqr()
            );
        }
    }
    if let Some(path) = &a.summary {
        write_file(path, &summary_json(&run))?;
    }
    if let Some(path) = &a.trace {
        write_file(path, &trace_csv(&run))?;
    }
    if let Some(path) = &a.dot {
        write_file(path, &run.engine.to_dot(run.state))?;
    }
    Ok(())
}

fn cmd_order(a: OrderArgs) -> Result<(), Fail> {
    let c = read_circuit(&a.input)?;
    let out = compute_order(&c, &a.strategy, Duration::from_secs(a.timeout))
        .map_err(|e| Fail::Parse(e.to_string()))?;
    if out.timed_out {
        eprintln!("warning: ordering heuristic hit its deadline; fell back to the original order");
    }
    println!("strategy {}", a.strategy);
    println!("order {}", perm_string(&out.order));
    if let Some(report) = &out.report {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("report serializes")
        );
    }
    Ok(())
}

fn desk_suite() -> Vec<Circuit> {
    let mut v = Vec::new();
    for n in [8usize, 10, 12] {
        v.push(gen_ghz(n).unwrap());
        v.push(gen_wstate(n).unwrap());
        v.push(gen_qft(n, false).unwrap());
        v.push(gen_qft(n, true).unwrap());
        v.push(gen_qpe(n, true).unwrap());
        v.push(gen_qpe(n, false).unwrap());
        v.push(gen_graph_state(n, n as u64).unwrap());
        v.push(gen_random(n, 3 * n, n as u64).unwrap());
    }
    v
}

fn dir_suite(dir: &Path) -> Result<Vec<Circuit>, Fail> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Fail::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "qasm"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Fail::Io(format!("{}: no .qasm files", dir.display())));
    }
    paths.iter().map(|p| read_circuit(p)).collect()
}

fn cmd_bench(a: BenchArgs) -> Result<(), Fail> {
    let circuits = match (&a.suite, &a.dir) {
        (Some(name), None) => {
            if name != "desk" {
                return Err(Fail::Parse(format!("unknown suite '{name}' (try: desk)")));
            }
            desk_suite()
        }
        (None, Some(dir)) => dir_suite(dir)?,
        (None, None) => desk_suite(),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    let cfg = SimConfig {
        tolerance: resolve_tolerance(a.tolerance)?,
        ordering_timeout: Duration::from_secs(a.timeout),
        ..SimConfig::default()
    };
    let mut csv = String::from("name,qubits,gates");
    for s in Strategy::NAMED {
        for col in ["wall_ms", "final_nodes", "max_nodes", "apply_ops"] {
            let _ = write!(csv, ",{s}_{col}");
        }
    }
    csv.push('\n');
    for c in &circuits {
        let cmp = compare_orders(c, &Strategy::NAMED, &cfg, a.repeats, !a.no_verify);
        let _ = write!(csv, "{},{},{}", cmp.circuit_name, cmp.num_qubits, cmp.num_gates);
        for o in &cmp.outcomes {
            match &o.result {
                Ok(r) => {
                    if let Some(diff) = o.dense_diff {
                        if diff > 1e-10 {
                            return Err(Fail::Sim(format!(
                                "{} under {}: dense mismatch {diff}",
                                cmp.circuit_name, o.strategy
                            )));
                        }
                    }
                    let _ = write!(
                        csv,
                        ",{:.3},{},{},{}",
                        r.wall.as_secs_f64() * 1e3,
                        r.final_nodes,
                        r.max_nodes,
                        r.apply_ops
                    );
                }
                Err(e) => {
                    eprintln!("warning: {} under {}: {e}", cmp.circuit_name, o.strategy);
                    csv.push_str(",err,err,err,err");
                }
            }
        }
        csv.push('\n');
    }
    match &a.out {
        Some(path) => write_file(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn cmd_gen(a: GenArgs) -> Result<(), Fail> {
    let n = a.qubits;
    let made = match a.family.as_str() {
        "ghz" => gen_ghz(n),
        "wstate" => gen_wstate(n),
        "qft" => gen_qft(n, a.entangled),
        "qpe" => gen_qpe(n, !a.inexact),
        "graph" => gen_graph_state(n, a.seed),
        "random" => gen_random(n, a.depth.unwrap_or(3 * n), a.seed),
        other => {
            return Err(Fail::Parse(format!(
                "unknown family '{other}' (ghz, wstate, qft, qpe, graph, random)"
            )))
        }
    };
    let c = made.map_err(|e| Fail::Parse(e.to_string()))?;
    let text = emit_qasm(&c);
    match &a.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
