//! Property tests over randomly generated circuits and graphs.

mod common;

use common::{mgraph_of, random_circuit, random_clifford_circuit, random_edges};
use oneway::decompose::{check_plan, decompose, DecompositionPlan};
use oneway::emit::{count_components, emit, fusions_precede_measurements, InstructionProgram};
use oneway::mgraph::{as_graph_like, build_mgraph, extract_pattern, MGraph};
use oneway::pipeline::{compile_circuit, pattern_deviation, CompileOptions};
use oneway::qasm::{rewrite_to_native, transpile_to_basis};
use oneway::sim::{unitary_of, unitary_of_native};
use oneway::simplify::{interior_clifford_spiders, simplify};
use oneway::zx::{evaluate, is_graph_like, native_to_diagram, to_graph_like};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-8;

fn native_of(c: &oneway::qasm::Circuit) -> oneway::qasm::NativeSeq {
    rewrite_to_native(&transpile_to_basis(c).unwrap()).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_and_native_rewrites_keep_the_unitary(seed in any::<u64>()) {
        let c = random_circuit(&mut rng(seed), 4, 14);
        let u = unitary_of(&c).unwrap();
        let basis = transpile_to_basis(&c).unwrap();
        prop_assert!(basis.is_basis());
        prop_assert!(unitary_of(&basis).unwrap().distance_up_to_scalar(&u) < TOL);
        let native = native_of(&c);
        prop_assert!(unitary_of_native(&native).unwrap().distance_up_to_scalar(&u) < TOL);
    }

    #[test]
    fn diagram_of_a_native_sequence_evaluates_to_its_unitary(seed in any::<u64>()) {
        let c = random_circuit(&mut rng(seed), 3, 10);
        let native = native_of(&c);
        let d = native_to_diagram(&native);
        let u = unitary_of_native(&native).unwrap();
        prop_assert!(evaluate(&d).unwrap().distance_up_to_scalar(&u) < TOL);
        let g = to_graph_like(&d);
        prop_assert!(is_graph_like(&g));
        prop_assert!(evaluate(&g).unwrap().distance_up_to_scalar(&u) < TOL);
        let gg = to_graph_like(&g);
        prop_assert_eq!(gg.num_spiders(), g.num_spiders());
        prop_assert_eq!(gg.num_edges(), g.num_edges());
    }

    #[test]
    fn measurement_graph_survives_a_diagram_round_trip(seed in any::<u64>()) {
        let c = random_circuit(&mut rng(seed), 3, 10);
        let m = build_mgraph(&native_of(&c));
        let back = extract_pattern(&to_graph_like(&as_graph_like(&m))).unwrap();
        back.validate().unwrap();
        let a = evaluate(&as_graph_like(&m)).unwrap();
        let b = evaluate(&as_graph_like(&back)).unwrap();
        prop_assert!(a.distance_up_to_scalar(&b) < TOL);
    }

    #[test]
    fn simplification_preserves_semantics(seed in any::<u64>()) {
        let c = random_circuit(&mut rng(seed), 3, 12);
        let d = to_graph_like(&native_to_diagram(&native_of(&c)));
        let before = evaluate(&d).unwrap();
        let s = simplify(&d).unwrap();
        prop_assert!(is_graph_like(&s.diagram));
        prop_assert!(evaluate(&s.diagram).unwrap().distance_up_to_scalar(&before) < TOL);
    }

    #[test]
    fn clifford_circuits_lose_every_interior_clifford_spider(seed in any::<u64>()) {
        let c = random_clifford_circuit(&mut rng(seed), 4, 16);
        let d = to_graph_like(&native_to_diagram(&native_of(&c)));
        let s = simplify(&d).unwrap();
        prop_assert!(interior_clifford_spiders(&s.diagram).is_empty());
    }

    #[test]
    fn compiled_patterns_implement_their_circuits(seed in any::<u64>(), opt in 0u8..=1) {
        let c = random_circuit(&mut rng(seed), 3, 10);
        let out = compile_circuit(&c, CompileOptions { opt_level: opt, ..Default::default() }).unwrap();
        prop_assert!(pattern_deviation(&out.mgraph, &c).unwrap() < TOL);
        prop_assert!(check_plan(&out.plan, &out.mgraph).is_ok());
        prop_assert!(fusions_precede_measurements(&out.program));
        prop_assert_eq!(out.program.measurements.len(), out.mgraph.num_measured());
        prop_assert_eq!(out.program.sources.len(), out.plan.photon_count);
    }

    #[test]
    fn decomposition_covers_every_edge_once(seed in any::<u64>(), n in 1usize..10) {
        let mut r = rng(seed);
        let p = r.gen_range(0.1..0.7);
        let edges = random_edges(&mut r, n, p);
        let m = mgraph_of(n, &edges);
        let plan = decompose(&m);
        prop_assert!(check_plan(&plan, &m).is_ok());
        let covered: usize = plan.subgraphs.iter().map(|s| s.edges().len()).sum();
        prop_assert_eq!(covered, edges.len());
        prop_assert_eq!(plan.photon_count, plan.subgraphs.iter().map(|s| s.nodes.len()).sum::<usize>());
        prop_assert_eq!(plan.fusion_count, plan.fusions.len());
    }

    #[test]
    fn artifacts_round_trip_through_json(seed in any::<u64>()) {
        let c = random_circuit(&mut rng(seed), 3, 10);
        let out = compile_circuit(&c, CompileOptions::default()).unwrap();
        let m = MGraph::from_json(&out.mgraph.to_json()).unwrap();
        prop_assert_eq!(m.to_json(), out.mgraph.to_json());
        prop_assert_eq!(DecompositionPlan::from_json(&out.plan.to_json()).unwrap(), out.plan.clone());
        let prog = InstructionProgram::from_json(&out.program.to_json()).unwrap();
        prop_assert_eq!(prog.to_json(), out.program.to_json());
        prop_assert_eq!(emit(&out.plan, &m).unwrap(), out.program.clone());
        prop_assert_eq!(count_components(&prog).total(), count_components(&out.program).total());
    }
}
