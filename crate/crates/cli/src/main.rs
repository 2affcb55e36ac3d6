//! `ion`: compile, run, verify and measure ordinal notation programs, play
//! hydra battles and simulate lineages.
//!
//! Exit codes: 0 on success, 1 on domain errors (bad programs or ordinal
//! expressions, failed `--expect` checks), 2 on usage errors.

mod cert;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ion_core::lineage::{chain_stats, run_lineage, write_jsonl, LineageConfig, Policy};
use ion_core::notation::{compile, decompile, value_lower_bound, verify, Verdict};
use ion_core::objlang::{evaluate, parse, serialize, Fuel, Program, Status};
use ion_core::ordinals::{compare, parse_ordinal, HydraTree, Ordinal};

use cert::Certificate;

#[derive(Parser)]
#[command(name = "ion", version, about = "Ordinal notations as programs that print programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile an ordinal expression such as `w^(w+1)*3+5` to its notation.
    Compile {
        expr: String,
        /// Write the program here and a `.cert` certificate next to it.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run a program and print its outputs, one per line.
    Run {
        path: PathBuf,
        #[command(flatten)]
        fuel: FuelArgs,
        #[arg(long)]
        json: bool,
    },
    /// Check a program against the notation definition under fuel.
    Verify {
        path: PathBuf,
        #[command(flatten)]
        fuel: FuelArgs,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        /// Certificate the program must match; a refutation then fails.
        #[arg(long)]
        expect: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Lower bound on a program's value, plus the exact value for
    /// compiled programs.
    Value {
        path: PathBuf,
        #[command(flatten)]
        fuel: FuelArgs,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        #[arg(long)]
        json: bool,
    },
    /// Compare two ordinal expressions.
    Compare {
        a: String,
        b: String,
        #[arg(long)]
        json: bool,
    },
    /// Play the hydra game on a bracket-notation tree such as `((()))`.
    Hydra {
        shape: String,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        max_steps: u64,
        #[arg(long)]
        json: bool,
    },
    /// Simulate a lineage and report chain statistics.
    Lineage(LineageArgs),
}

#[derive(Args, Clone, Copy)]
struct FuelArgs {
    #[arg(long, default_value_t = Fuel::DEFAULT_MAX_STEPS, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    #[arg(long, default_value_t = Fuel::DEFAULT_MAX_OUTPUTS, value_parser = clap::value_parser!(u64).range(1..))]
    max_outputs: u64,
}

impl FuelArgs {
    fn fuel(self) -> Fuel {
        Fuel::new(self.max_steps, self.max_outputs).expect("clap enforces positive bounds")
    }
}

#[derive(Args)]
struct LineageArgs {
    /// JSON config; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Founder intelligence (repeatable).
    #[arg(long = "founder")]
    founders: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// `asexual` or `mixed:<k>`.
    #[arg(long)]
    policy: Option<Policy>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_events: Option<u64>,
    /// Write the event log here as JSON lines.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Compile { expr, out, json } => cmd_compile(&expr, out.as_deref(), json),
        Command::Run { path, fuel, json } => cmd_run(&path, fuel.fuel(), json),
        Command::Verify {
            path,
            fuel,
            depth,
            expect,
            json,
        } => cmd_verify(&path, fuel.fuel(), depth as usize, expect.as_deref(), json),
        Command::Value {
            path,
            fuel,
            depth,
            json,
        } => cmd_value(&path, fuel.fuel(), depth as usize, json),
        Command::Compare { a, b, json } => cmd_compare(&a, &b, json),
        Command::Hydra {
            shape,
            max_steps,
            json,
        } => cmd_hydra(&shape, max_steps as usize, json),
        Command::Lineage(args) => cmd_lineage(args),
    }
}

fn ordinal(expr: &str) -> Result<Ordinal> {
    parse_ordinal(expr).with_context(|| format!("bad ordinal expression `{expr}`"))
}

fn load_program(path: &Path) -> Result<(Vec<u8>, Program)> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let text = std::str::from_utf8(&bytes)
        .with_context(|| format!("{} is not UTF-8", path.display()))?;
    let program = parse(text).with_context(|| format!("{} does not parse", path.display()))?;
    Ok((bytes, program))
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
}

fn cmd_compile(expr: &str, out: Option<&Path>, json: bool) -> Result<()> {
    let a = ordinal(expr)?;
    let text = serialize(&compile(&a));
    let Some(out) = out else {
        if json {
            print_json(&json!({ "ordinal": a, "program": text }));
        } else {
            println!("{text}");
        }
        return Ok(());
    };
    fs::write(out, &text).with_context(|| format!("cannot write {}", out.display()))?;
    let cert = Certificate::for_program(&a, text.as_bytes());
    let cert_path = out.with_extension("cert");
    fs::write(&cert_path, cert.to_string())
        .with_context(|| format!("cannot write {}", cert_path.display()))?;
    if json {
        print_json(&json!({
            "ordinal": a,
            "program": out,
            "certificate": cert_path,
            "sha256": cert.sha256,
        }));
    } else {
        println!("wrote {} and {}", out.display(), cert_path.display());
    }
    Ok(())
}

fn status_name(status: Status) -> &'static str {
    match status {
        Status::Halted => "halted",
        Status::FuelExhausted => "fuelExhausted",
    }
}

fn cmd_run(path: &Path, fuel: Fuel, json: bool) -> Result<()> {
    let (_, program) = load_program(path)?;
    let trace = evaluate(&program, fuel).with_context(|| format!("{} failed", path.display()))?;
    if json {
        print_json(&json!({
            "outputs": trace.outputs,
            "status": status_name(trace.status),
            "stepsUsed": trace.steps_used,
        }));
    } else {
        for out in &trace.outputs {
            println!("{out}");
        }
        eprintln!(
            "{} after {} steps, {} outputs",
            status_name(trace.status),
            trace.steps_used,
            trace.outputs.len()
        );
    }
    Ok(())
}

fn describe(verdict: &Verdict) -> String {
    match verdict {
        Verdict::ProvenMember { value } => format!("proven member, value {value}"),
        Verdict::Refuted { path, reason } => {
            let reason = match reason {
                ion_core::notation::Refutation::Parse(e) => format!("output does not parse: {e}"),
                ion_core::notation::Refutation::Runtime(e) => format!("run fails: {e}"),
            };
            format!("refuted at output path {path:?}: {reason}")
        }
        Verdict::Inconclusive {
            outputs_checked,
            depth_reached,
        } => format!("inconclusive ({outputs_checked} outputs checked, depth {depth_reached} reached)"),
    }
}

fn cmd_verify(path: &Path, fuel: Fuel, depth: usize, expect: Option<&Path>, json: bool) -> Result<()> {
    let (bytes, program) = load_program(path)?;
    let v = verify(&program, fuel, depth);
    let mut failures = Vec::new();
    let mut expect_report = serde_json::Value::Null;
    if let Some(cert_path) = expect {
        let cert = Certificate::load(cert_path)?;
        let sha256 = cert::sha256_hex(&bytes);
        let decompiled = decompile(&program);
        if sha256 != cert.sha256 {
            failures.push(format!("sha256 {sha256} does not match the certificate"));
        }
        if decompiled.as_ref() != Some(&cert.ordinal) {
            failures.push(format!("program is not the notation for {}", cert.ordinal));
        }
        if matches!(v.verdict, Verdict::Refuted { .. }) {
            failures.push("program is refuted".into());
        }
        expect_report = json!({
            "ordinal": cert.ordinal,
            "sha256Matches": sha256 == cert.sha256,
            "decompiled": decompiled,
            "ok": failures.is_empty(),
        });
    }
    if json {
        let mut value = serde_json::to_value(&v)?;
        value["expect"] = expect_report;
        print_json(&value);
    } else {
        println!("verdict: {}", describe(&v.verdict));
        println!("lower bound: {}", v.lower_bound);
        for c in &v.children {
            println!("  output {}: {}", c.index, describe(&c.verdict));
        }
        println!(
            "spent: {} steps, {} programs run, {} outputs parsed",
            v.fuel_spent.steps, v.fuel_spent.programs_run, v.fuel_spent.outputs_parsed
        );
        if expect.is_some() && failures.is_empty() {
            println!("certificate: ok");
        }
    }
    if !failures.is_empty() {
        bail!("certificate check failed: {}", failures.join("; "));
    }
    Ok(())
}

fn cmd_value(path: &Path, fuel: Fuel, depth: usize, json: bool) -> Result<()> {
    let (_, program) = load_program(path)?;
    let b = value_lower_bound(&program, fuel, depth);
    let exact = decompile(&program);
    if json {
        print_json(&json!({ "bound": b.bound, "refuted": b.refuted, "exact": exact }));
    } else if b.refuted {
        println!("not a notation (refuted); value undefined");
    } else {
        println!("lower bound: {}", b.bound);
        if let Some(a) = exact {
            println!("exact: {a}");
        }
    }
    Ok(())
}

fn cmd_compare(a: &str, b: &str, json: bool) -> Result<()> {
    let result = format!("{:?}", compare(&ordinal(a)?, &ordinal(b)?));
    if json {
        print_json(&json!({ "result": result }));
    } else {
        println!("{result}");
    }
    Ok(())
}

fn cmd_hydra(shape: &str, max_steps: usize, json: bool) -> Result<()> {
    let hydra: HydraTree = shape
        .parse()
        .with_context(|| format!("bad hydra shape `{shape}`"))?;
    let history = hydra.battle(max_steps)?;
    let stages = history
        .iter()
        .map(|h| Ok((h.to_string(), h.to_ordinal()?)))
        .collect::<Result<Vec<_>>>()?;
    let dead = history.last().is_some_and(HydraTree::is_dead);
    if json {
        let stages: Vec<_> = stages
            .iter()
            .enumerate()
            .map(|(i, (shape, value))| json!({ "stage": i, "shape": shape, "ordinal": value }))
            .collect();
        print_json(&json!({ "stages": stages, "dead": dead }));
    } else {
        for (i, (shape, value)) in stages.iter().enumerate() {
            println!("{i}: {shape}  {value}");
        }
        if dead {
            println!("dead after {} cuts", stages.len() - 1);
        } else {
            println!("still alive after {} cuts", stages.len() - 1);
        }
    }
    Ok(())
}

fn cmd_lineage(args: LineageArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("bad lineage config {}", path.display()))?
        }
        None => LineageConfig::new(vec![Ordinal::omega()], Policy::AsexualOnly, 0, 1000),
    };
    if !args.founders.is_empty() {
        config.founder_intelligences = args
            .founders
            .iter()
            .map(|f| ordinal(f))
            .collect::<Result<_>>()?;
    }
    if let Some(seed) = args.seed {
        config.rng_seed = seed;
    }
    if let Some(policy) = args.policy {
        config.policy = policy;
    }
    if let Some(max_events) = args.max_events {
        config.max_events = max_events;
    }
    let log = run_lineage(&config)?;
    if let Some(out) = &args.out {
        fs::write(out, write_jsonl(&log)).with_context(|| format!("cannot write {}", out.display()))?;
    }
    let stats = chain_stats(&log);
    if args.json {
        print_json(&json!({ "stats": stats, "termination": log.termination }));
    } else {
        println!("termination: {:?}", log.termination);
        println!("agents: {}", stats.total_agents);
        println!("multi-parent events: {}", stats.multi_parent_count);
        println!("longest single-parent run: {}", stats.max_asexual_run_length);
        if let Some((i, last)) = stats.intelligence_time_series.last() {
            println!("last child (event {i}): {last}");
        }
    }
    Ok(())
}
