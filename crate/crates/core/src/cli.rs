//! Command-line interface.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure, 3 internal
//! invariant breach.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::emit::{stats, stats_csv, stats_table, StatsRow};
use crate::linalg::C64;
use crate::mgraph::MGraph;
use crate::pipeline::{compile_observed, compile_qasm, pattern_deviation, CompileOptions, Compiled, VERIFY_TOL};
use crate::qasm::parse_qasm;
use crate::sim::{chain_path, run_pattern, sample_with_feedforward, StateVector, UNITARY_QUBIT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "oneway", version, about = "Compile OpenQASM circuits to photonic measurement patterns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// 0 disables diagram rewriting, 1 runs the full simplifier.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub opt_level: u8,
    /// Largest qubit count the dense oracle will verify.
    #[arg(long, default_value_t = 6)]
    pub verify_cap: usize,
    /// Output directory (compile) or CSV file (stats).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Log every rule firing.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write mgraph.json, plan.json and instructions.json for a circuit.
    Compile {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the compiled pattern with the circuit unitary.
    Verify {
        input: PathBuf,
        /// Check this measurement graph instead of compiling one.
        #[arg(long)]
        mgraph: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate primitive, photon and component counts for a directory of circuits.
    Stats {
        dir: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print the rule firings of the simplifier.
    Trace {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

struct Failure {
    code: i32,
    msg: String,
}

fn input_err(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, msg: msg.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))
}

fn compile_file(path: &Path, common: &Common) -> Result<Compiled, Failure> {
    let text = read(path)?;
    let opts = CompileOptions { opt_level: common.opt_level, ..Default::default() };
    compile_qasm(&text, opts).map_err(|e| Failure {
        code: if e.is_input_error() { EXIT_INPUT } else { EXIT_INTERNAL },
        msg: format!("{}: {e}", path.display()),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure { code: EXIT_INPUT, msg: format!("cannot write {}: {e}", path.display()) })
}

fn circuit_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn cmd_compile(input: &Path, common: &Common, out: &mut dyn Write) -> Result<(), Failure> {
    let c = compile_file(input, common)?;
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| input_err(format!("cannot create {}: {e}", dir.display())))?;
    write_file(&dir.join("mgraph.json"), &c.mgraph.to_json())?;
    write_file(&dir.join("plan.json"), &c.plan.to_json())?;
    write_file(&dir.join("instructions.json"), &c.program.to_json())?;
    if common.trace {
        let log: String = c.trace.iter().map(|f| format!("{f}\n")).collect();
        write_file(&dir.join("trace.txt"), &log)?;
    }
    let row = stats(&circuit_name(input), &c.program, &c.plan, &c.mgraph);
    let _ = writeln!(
        out,
        "{}: {} spiders, {} GHZ, {} linear, {} photons, {} fusions, {} measurements -> {}",
        row.circuit,
        row.spiders,
        row.ghz,
        row.linear,
        row.photons,
        row.fusions,
        c.program.measurements.len(),
        dir.display()
    );
    Ok(())
}

fn cmd_verify(input: &Path, mgraph: Option<&Path>, common: &Common, out: &mut dyn Write) -> Result<(), Failure> {
    let circuit = parse_qasm(&read(input)?).map_err(|e| input_err(format!("{}: {e}", input.display())))?;
    let cap = common.verify_cap.min(UNITARY_QUBIT_CAP);
    if circuit.num_qubits > cap {
        let _ = writeln!(out, "SKIP {}: {} qubits exceeds the verify cap of {cap}", input.display(), circuit.num_qubits);
        return Ok(());
    }
    let m = match mgraph {
        Some(p) => MGraph::from_json(&read(p)?).map_err(|e| input_err(format!("{}: {e}", p.display())))?,
        None => compile_file(input, common)?.mgraph,
    };
    if m.inputs.len() != circuit.num_qubits {
        return Err(input_err("measurement graph and circuit have different qubit counts"));
    }
    let dev = pattern_deviation(&m, &circuit).map_err(|e| Failure { code: EXIT_INTERNAL, msg: e.to_string() })?;
    let verdict = if dev <= VERIFY_TOL { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "{verdict} {}: max deviation {dev:.3e} (tolerance {VERIFY_TOL:.0e})", input.display());
    if chain_path(&m).is_ok() {
        let map = run_pattern(&m).map_err(|e| Failure { code: EXIT_INTERNAL, msg: e.to_string() })?;
        let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
        let input_state = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let run = sample_with_feedforward(&m, input_state, &mut rng)
            .map_err(|e| Failure { code: EXIT_INTERNAL, msg: e.to_string() })?;
        let ideal = StateVector::from_amplitudes(
            vec![m.outputs[0]],
            (0..2).map(|r| map.get(r, 0) * input_state[0] + map.get(r, 1) * input_state[1]).collect(),
        );
        let f = crate::sim::fidelity(&ideal, &run.state).map_err(|e| Failure { code: EXIT_INTERNAL, msg: e.to_string() })?;
        let _ = writeln!(out, "feed-forward run with outcomes {:?}: fidelity {f:.12}", run.outcomes);
        if f < 1.0 - VERIFY_TOL {
            return Err(Failure { code: EXIT_VERIFY, msg: "feed-forward run disagrees with postselection".into() });
        }
    }
    if dev > VERIFY_TOL {
        return Err(Failure { code: EXIT_VERIFY, msg: format!("deviation {dev:.3e} above tolerance") });
    }
    Ok(())
}

fn cmd_stats(dir: &Path, common: &Common, out: &mut dyn Write) -> Result<(), Failure> {
    let entries = fs::read_dir(dir).map_err(|e| input_err(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> =
        entries.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "qasm")).collect();
    files.sort();
    let mut rows: Vec<StatsRow> = Vec::new();
    let mut errors = Vec::new();
    for f in &files {
        match compile_file(f, common) {
            Ok(c) => rows.push(stats(&circuit_name(f), &c.program, &c.plan, &c.mgraph)),
            Err(e) => errors.push(e.msg),
        }
    }
    let _ = write!(out, "{}", stats_table(&rows));
    for e in &errors {
        let _ = writeln!(out, "error: {e}");
    }
    if let Some(path) = &common.out {
        write_file(path, &stats_csv(&rows))?;
    }
    Ok(())
}

fn cmd_trace(input: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let circuit = parse_qasm(&read(input)?).map_err(|e| input_err(format!("{}: {e}", input.display())))?;
    let opts = CompileOptions { opt_level: 1, ..Default::default() };
    let mut lines = Vec::new();
    let mut observer = |f: &crate::simplify::RuleFiring, before: &crate::zx::Diagram, after: &crate::zx::Diagram| {
        lines.push(format!("{f}  ({} -> {} spiders)", before.num_spiders(), after.num_spiders()));
    };
    let c = compile_observed(&circuit, opts, Some(&mut observer)).map_err(|e| Failure {
        code: if e.is_input_error() { EXIT_INPUT } else { EXIT_INTERNAL },
        msg: e.to_string(),
    })?;
    for (i, l) in lines.iter().enumerate() {
        let _ = writeln!(out, "{:>4} {l}", i + 1);
    }
    let _ = writeln!(out, "{} firings, {} spiders remain", c.trace.len(), c.diagram.num_spiders());
    Ok(())
}

/// Run a parsed command, writing reports to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Compile { input, common } => cmd_compile(input, common, out),
        Command::Verify { input, mgraph, common } => cmd_verify(input, mgraph.as_deref(), common, out),
        Command::Stats { dir, common } => cmd_stats(dir, common, out),
        Command::Trace { input, .. } => cmd_trace(input, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

/// Parse `args` (including the program name) and run.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            }
        }
    }
}
