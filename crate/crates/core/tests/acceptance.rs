//! Acceptance suite. Prints one verdict line per criterion and exits nonzero
//! if any hard criterion fails. Structural count targets are soft: misses
//! are printed as SOFT-DEVIATION with the numbers, and do not fail the run.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use oneway::cli::run_args;
use oneway::decompose::{decompose, verify_plan, DecompositionPlan, SubgraphKind};
use oneway::emit::{emit, SourceMode};
use oneway::linalg::LinearMap;
use oneway::mgraph::build_mgraph;
use oneway::phase::Phase;
use oneway::pipeline::{compile_circuit, compile_observed, compile_qasm, pattern_deviation, CompileOptions};
use oneway::qasm::{parse_qasm, NativeSeq};
use oneway::sim::{graph_state, run_pattern, sample_with_feedforward, StateVector};
use oneway::simplify::{interior_clifford_spiders, RuleFiring};
use oneway::zx::{evaluate, Diagram};

const EQUIVALENCE_TOL: f64 = 1e-8;
const EQUIVALENCE_TIME: Duration = Duration::from_secs(30);
const SOUNDNESS_TOL: f64 = 1e-8;
const STABILIZER_TOL: f64 = 1e-10;
const TELEPORT_TOL: f64 = 1e-10;
const FEEDFORWARD_TOL: f64 = 1e-8;
const FUSION_FIDELITY: f64 = 1.0 - 1e-9;
const STATE_FIDELITY: f64 = 1.0 - 1e-10;

enum Verdict {
    Pass(String),
    Fail(String),
    Soft(String),
}

fn equivalence_suite() -> Verdict {
    let names = [
        "deutsch-n2",
        "grover-n2",
        "iswap-n2",
        "teleportation-n3",
        "fredkin-n3",
        "toffoli-n3",
        "linearsolver-n3",
        "wstate-n3",
        "cat-state-n4",
        "bell-n4",
    ];
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    let mut failures = Vec::new();
    for name in names {
        let start = Instant::now();
        let result = compile_qasm(&benchmark(name), CompileOptions::default())
            .map_err(|e| e.to_string())
            .and_then(|c| pattern_deviation(&c.mgraph, &c.circuit).map_err(|e| e.to_string()));
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        match result {
            Ok(d) if d <= EQUIVALENCE_TOL && elapsed <= EQUIVALENCE_TIME => worst = worst.max(d),
            Ok(d) => failures.push(format!("{name}: deviation {d:.2e} in {elapsed:?}")),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let summary = format!("10 circuits, worst deviation {worst:.2e} (tol {EQUIVALENCE_TOL:.0e}), slowest {slowest:?}");
    if failures.is_empty() {
        Verdict::Pass(summary)
    } else {
        Verdict::Fail(format!("{summary}; {}", failures.join("; ")))
    }
}

fn rewrite_soundness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut firings = 0usize;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for i in 0..200 {
        let circuit = random_circuit(&mut rng, 4, 20);
        let mut local: Vec<(String, f64)> = Vec::new();
        let mut observer = |f: &RuleFiring, before: &Diagram, after: &Diagram| {
            let d = match (evaluate(before), evaluate(after)) {
                (Ok(a), Ok(b)) => b.distance_up_to_scalar(&a),
                _ => f64::INFINITY,
            };
            local.push((f.to_string(), d));
        };
        match compile_observed(&circuit, CompileOptions::default(), Some(&mut observer)) {
            Ok(_) => {}
            Err(e) => failures.push(format!("circuit {i}: {e}")),
        }
        for (f, d) in local {
            firings += 1;
            worst = worst.max(d);
            if d > SOUNDNESS_TOL {
                failures.push(format!("circuit {i}: {f} deviates by {d:.2e}"));
            }
        }
    }
    let summary = format!("200 circuits, {firings} firings, worst deviation {worst:.2e} (tol {SOUNDNESS_TOL:.0e})");
    if failures.is_empty() {
        Verdict::Pass(format!("{summary}, all runs terminated"))
    } else {
        Verdict::Fail(format!("{summary}; {}", failures.iter().take(5).cloned().collect::<Vec<_>>().join("; ")))
    }
}

fn clifford_elimination() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut failures = Vec::new();
    let mut interior_total = 0usize;
    for i in 0..100 {
        let circuit = random_clifford_circuit(&mut rng, 4, 30);
        match compile_circuit(&circuit, CompileOptions::default()) {
            Ok(c) => {
                let left = interior_clifford_spiders(&c.diagram);
                interior_total += c.diagram.spider_ids().filter(|&v| c.diagram.is_interior(v)).count();
                if !left.is_empty() {
                    failures.push(format!("circuit {i}: interior spiders {left:?}"));
                }
            }
            Err(e) => failures.push(format!("circuit {i}: {e}")),
        }
    }
    if failures.is_empty() {
        Verdict::Pass(format!("100 circuits, 0 interior non-gadget spiders ({interior_total} interior spiders of any kind)"))
    } else {
        Verdict::Fail(failures.iter().take(5).cloned().collect::<Vec<_>>().join("; "))
    }
}

fn stabilizer_property() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let edges = random_edges(&mut rng, n, 0.4);
        let g = match graph_state(&edges, n) {
            Ok(g) => g,
            Err(e) => return Verdict::Fail(e.to_string()),
        };
        let amps = g.amplitudes();
        for v in 0..n {
            let vbit = 1usize << (n - 1 - v);
            let zmask: usize = edges
                .iter()
                .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
                .map(|w| 1usize << (n - 1 - w))
                .sum();
            // (X_v ∏ Z_w ψ)[i] = (-1)^{|i ∧ N(v)|} ψ[i ⊕ v]
            for i in 0..amps.len() {
                let sign = if (i & zmask).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
                worst = worst.max((amps[i ^ vbit] * sign - amps[i]).norm());
            }
        }
    }
    let summary = format!("100 graphs, max |K_v G - G| = {worst:.2e} (tol {STABILIZER_TOL:.0e})");
    if worst <= STABILIZER_TOL {
        Verdict::Pass(summary)
    } else {
        Verdict::Fail(summary)
    }
}

fn teleportation() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]];
    let mut worst_step = 0.0f64;
    for _ in 0..50 {
        let alpha: f64 = rng.gen_range(-PI..PI);
        let m = build_mgraph(&NativeSeq::new(1).hrz(0, Phase::from_radians(-alpha)));
        let rz = [[Complex64::from_polar(1.0, alpha / 2.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, -alpha / 2.0)]];
        let want = mat2_mul(h, rz);
        let want = LinearMap::from_rows(2, 2, vec![want[0][0], want[0][1], want[1][0], want[1][1]]);
        match run_pattern(&m) {
            Ok(got) => worst_step = worst_step.max(got.distance_up_to_scalar(&want)),
            Err(e) => return Verdict::Fail(e.to_string()),
        }
    }
    let mut worst_ff = 0.0f64;
    for _ in 0..100 {
        let mut seq = NativeSeq::new(1);
        for _ in 0..rng.gen_range(1..=8) {
            seq = seq.hrz(0, Phase::from_radians(rng.gen_range(-PI..PI)));
        }
        let m = build_mgraph(&seq);
        let map = match run_pattern(&m) {
            Ok(x) => x,
            Err(e) => return Verdict::Fail(e.to_string()),
        };
        let (a, b): (f64, f64) = (rng.gen_range(0.0..PI), rng.gen_range(-PI..PI));
        let input = [c((a / 2.0).cos(), 0.0), Complex64::from_polar((a / 2.0).sin(), b)];
        let ideal = StateVector::from_amplitudes(
            vec![m.outputs[0]],
            (0..2).map(|r| map.get(r, 0) * input[0] + map.get(r, 1) * input[1]).collect(),
        );
        match sample_with_feedforward(&m, input, &mut rng) {
            Ok(run) => {
                let f = oneway::sim::fidelity(&ideal, &run.state).unwrap_or(0.0);
                worst_ff = worst_ff.max(1.0 - f);
            }
            Err(e) => return Verdict::Fail(e.to_string()),
        }
    }
    let summary = format!(
        "50 angles, max deviation from H*Rz(-a) {worst_step:.2e} (tol {TELEPORT_TOL:.0e}); \
         100 chains, max feed-forward infidelity {worst_ff:.2e} (tol {FEEDFORWARD_TOL:.0e})"
    );
    if worst_step <= TELEPORT_TOL && worst_ff <= FEEDFORWARD_TOL {
        Verdict::Pass(summary)
    } else {
        Verdict::Fail(summary)
    }
}

fn decomposition_reconstruction() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut failures = Vec::new();
    let mut worst = 1.0f64;
    for i in 0..300 {
        let n = rng.gen_range(1..=10);
        let m = mgraph_of(n, &random_connected_edges(&mut rng, n));
        let plan = decompose(&m);
        if !verify_plan(&plan, &m) {
            failures.push(format!("graph {i}"));
        }
        match oneway::decompose::simulate_fusions(&plan, &m) {
            Ok(f) => worst = worst.min(f),
            Err(e) => failures.push(format!("graph {i}: {e}")),
        }
    }
    let summary = format!("300 graphs, min fusion fidelity {worst:.12} (threshold {FUSION_FIDELITY})");
    if failures.is_empty() && worst >= FUSION_FIDELITY {
        Verdict::Pass(summary)
    } else {
        Verdict::Fail(format!("{summary}; failed: {}", failures.join(", ")))
    }
}

fn counts(name: &str) -> Result<(DecompositionPlan, usize), String> {
    let c = compile_qasm(&benchmark(name), CompileOptions::default()).map_err(|e| e.to_string())?;
    Ok((c.plan, c.mgraph.num_vertices()))
}

fn structural_targets() -> Verdict {
    let mut misses = Vec::new();
    let mut report = Vec::new();
    for name in ["grover-n2", "deutsch-n2", "cat-state-n4"] {
        match counts(name) {
            Ok((p, _)) => {
                report.push(format!("{name} GHZ={} Linear={}", p.ghz_count(), p.linear_count()));
                if (p.ghz_count(), p.linear_count()) != (0, 1) {
                    misses.push(format!("{name} expected GHZ=0 Linear=1, got GHZ={} Linear={}", p.ghz_count(), p.linear_count()));
                }
            }
            Err(e) => return Verdict::Fail(format!("{name}: {e}")),
        }
    }
    match counts("bell-n4") {
        Ok((p, spiders)) => {
            let total = p.ghz_count() + p.linear_count();
            report.push(format!("bell-n4 GHZ+Linear={total} spiders={spiders}"));
            if total.abs_diff(4) > 1 {
                misses.push(format!("bell-n4 GHZ+Linear {total} not within 1 of 4"));
            }
            if spiders.abs_diff(10) > 2 {
                misses.push(format!("bell-n4 spiders {spiders} not within 2 of 10"));
            }
        }
        Err(e) => return Verdict::Fail(format!("bell-n4: {e}")),
    }
    if misses.is_empty() {
        Verdict::Pass(report.join(", "))
    } else {
        Verdict::Soft(format!("{}; misses: {}", report.join(", "), misses.join("; ")))
    }
}

fn four_qubit_identities() -> Verdict {
    let c = |re: f64| Complex64::new(re, 0.0);
    let z = c(0.0);
    // |ψ⟩ = (|0000⟩ + |0011⟩ + |1100⟩ − |1111⟩)/2 and |GHZ⟩ = (|0000⟩ + |1111⟩)/√2
    let mut psi = vec![z; 16];
    psi[0b0000] = c(0.5);
    psi[0b0011] = c(0.5);
    psi[0b1100] = c(0.5);
    psi[0b1111] = c(-0.5);
    let mut ghz = vec![z; 16];
    ghz[0] = c(std::f64::consts::FRAC_1_SQRT_2);
    ghz[15] = c(std::f64::consts::FRAC_1_SQRT_2);

    let path = [(0, 1), (1, 2), (2, 3)];
    let star = [(0, 1), (0, 2), (0, 3)];
    let mut results = Vec::new();
    for (edges, source, want_mode) in [(&path, &psi, SourceMode::Psi), (&star, &ghz, SourceMode::Ghz)] {
        let m = mgraph_of(4, edges);
        let plan = decompose(&m);
        let prog = match emit(&plan, &m) {
            Ok(p) => p,
            Err(e) => return Verdict::Fail(e.to_string()),
        };
        let block = &prog.entangle[0];
        if block.mode != want_mode || plan.subgraphs.len() != 1 {
            return Verdict::Fail(format!("unexpected block {block:?}"));
        }
        let mut state = source.clone();
        for &p in &block.hadamards {
            hadamard_on(&mut state, 4, p);
        }
        // photon p of the block carries node plan.subgraphs[0].nodes[p]
        let nodes = &plan.subgraphs[0].nodes;
        let relabeled: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| {
                let pa = nodes.iter().position(|&x| x == a).unwrap();
                let pb = nodes.iter().position(|&x| x == b).unwrap();
                (pa, pb)
            })
            .collect();
        let target = reference_graph_state(4, &relabeled);
        results.push((plan.subgraphs[0].kind, state_fidelity(&state, &target)));
    }
    let summary = results
        .iter()
        .map(|(k, f)| format!("{} fidelity {f:.12}", if *k == SubgraphKind::Ghz { "star from GHZ" } else { "chain from psi" }))
        .collect::<Vec<_>>()
        .join(", ");
    if results.iter().all(|&(_, f)| f >= STATE_FIDELITY) {
        Verdict::Pass(format!("{summary} (threshold {STATE_FIDELITY})"))
    } else {
        Verdict::Fail(summary)
    }
}

fn determinism() -> Verdict {
    let tmp = match tempfile::tempdir() {
        Ok(t) => t,
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let mut entries: Vec<_> = std::fs::read_dir(benchmark_dir()).unwrap().filter_map(|e| e.ok()).map(|e| e.path()).collect();
    entries.sort();
    let mut compared = 0;
    for path in entries.iter().filter(|p| p.extension().is_some_and(|x| x == "qasm")) {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let dir = tmp.path().join(format!("{}-{run}", path.file_stem().unwrap().to_string_lossy()));
            let args = ["oneway", "compile", path.to_str().unwrap(), "--out", dir.to_str().unwrap()];
            let code = run_args(args, &mut Vec::new(), &mut Vec::new());
            if code != 0 {
                return Verdict::Fail(format!("{} exited with {code}", path.display()));
            }
            let files: Vec<Vec<u8>> = ["mgraph.json", "plan.json", "instructions.json"]
                .iter()
                .map(|f| std::fs::read(dir.join(f)).unwrap_or_default())
                .collect();
            outputs.push(files);
        }
        if outputs[0] != outputs[1] || outputs[0].iter().any(|f| f.is_empty()) {
            return Verdict::Fail(format!("{} artifacts differ between runs", path.display()));
        }
        compared += 1;
    }
    Verdict::Pass(format!("{compared} circuits, 3 artifacts each, byte-identical across two runs"))
}

fn main() {
    // the parser is exercised here too so a broken benchmark fails loudly
    for name in ["deutsch-n2", "bell-n4"] {
        parse_qasm(&benchmark(name)).expect("benchmark parses");
    }
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 9] = [
        ("semantic equivalence suite", equivalence_suite),
        ("rewrite soundness", rewrite_soundness),
        ("clifford elimination", clifford_elimination),
        ("graph-state stabilizers", stabilizer_property),
        ("single-step teleportation and feed-forward", teleportation),
        ("decomposition reconstruction", decomposition_reconstruction),
        ("structural count targets (soft)", structural_targets),
        ("four-qubit state identities", four_qubit_identities),
        ("compile determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let verdict = check();
        let t = start.elapsed();
        match verdict {
            Verdict::Pass(msg) => println!("PASS  {name}: {msg} [{t:.1?}]"),
            Verdict::Soft(msg) => println!("SOFT-DEVIATION  {name}: {msg} [{t:.1?}]"),
            Verdict::Fail(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg} [{t:.1?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
