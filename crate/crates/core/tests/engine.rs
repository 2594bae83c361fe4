use std::collections::BTreeMap;

use himm_core::corpus;
use himm_core::divisions::{all_choice_vectors, realize_division, DivisionMode};
use himm_core::embedding::Budget;
use himm_core::engine::{
    decide_dual_immersion, decide_immersion, dual_oracle, immersion_oracle, verify_immersion, Answer, DecideConfig,
    EdgeSubgraph, ImmersionWitness,
};
use himm_core::hypergraph::{Edge, Hypergraph, Transposed};
use himm_core::operations::OperationStep;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];

fn e3() -> Hypergraph {
    Hypergraph::from_edges(&[("e", &["a", "b", "c"])], &[]).unwrap()
}

fn decide(h: &Hypergraph, g: &Hypergraph) -> Answer {
    decide_immersion(h, g, &DecideConfig::default()).unwrap().answer
}

fn subgraph(edges: &[&str], extra: &[&str]) -> EdgeSubgraph {
    EdgeSubgraph {
        edges: edges.iter().map(|s| s.to_string()).collect(),
        extra_vertices: extra.iter().map(|s| s.to_string()).collect(),
    }
}

fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect()
}

#[test]
fn e3_in_path2() {
    let d = decide_immersion(&e3(), &corpus::path2(), &DecideConfig::default()).unwrap();
    assert_eq!(d.answer, Answer::Yes);
    let w = d.witness.unwrap();
    let mut images: Vec<&String> = w.vertex_map.values().collect();
    images.sort();
    assert_eq!(images, ["x", "y", "z"]);
    assert_eq!(w.edge_subgraphs["e"].edges, ["p1", "p2"]);
    let r = verify_immersion(&e3(), &corpus::path2(), &w);
    assert!(r.is_ok(), "{:?}", r.violations);
    assert!(r.replay_checked);
    assert!(r.isomorphism.is_some());
}

#[test]
fn k4_3_in_itself() {
    let h = corpus::k4_3();
    let d = decide_immersion(&h, &h, &DecideConfig::default()).unwrap();
    assert_eq!(d.answer, Answer::Yes);
    let w = d.witness.unwrap();
    for s in w.edge_subgraphs.values() {
        assert_eq!(s.edges.len(), 1);
        assert!(s.extra_vertices.is_empty());
    }
    assert!(verify_immersion(&h, &h, &w).is_ok());
}

#[test]
fn cat4_hand_witness() {
    let inst = corpus::cat4();
    let w = ImmersionWitness {
        vertex_map: map(&[("t1", "t1"), ("t2", "t2"), ("t3", "t3"), ("t4", "t4")]),
        edge_subgraphs: [(
            "e".to_string(),
            subgraph(&["g1", "g2", "g3", "g4", "g5", "g6"], &["w1", "x", "w2"]),
        )]
        .into(),
        replay: None,
    };
    let r = verify_immersion(&inst.h, &inst.g, &w);
    assert!(r.is_ok(), "{:?}", r.violations);
    assert!(!r.replay_checked);
    let replay = himm_core::engine::build_replay(&inst.h, &inst.g, &w).unwrap();
    let r = verify_immersion(&inst.h, &inst.g, &ImmersionWitness { replay: Some(replay), ..w });
    assert!(r.is_ok() && r.replay_checked, "{:?}", r.violations);
}

#[test]
fn cat4_answers() {
    for inst in [corpus::cat4(), corpus::cat4_paired()] {
        let full = decide_immersion(&inst.h, &inst.g, &DecideConfig::default()).unwrap();
        assert_eq!(full.answer, Answer::Yes, "{}", inst.name);
        assert_eq!(immersion_oracle(&inst.h, &inst.g, Budget::unlimited()).answer, Answer::Yes);
    }
    let star = DecideConfig {
        divisions: DivisionMode::StarOnly,
        ..DecideConfig::default()
    };
    let inst = corpus::cat4();
    assert_eq!(decide_immersion(&inst.h, &inst.g, &star).unwrap().answer, Answer::Yes);
    let inst = corpus::cat4_paired();
    assert_eq!(decide_immersion(&inst.h, &inst.g, &star).unwrap().answer, Answer::No);
}

#[test]
fn shared_edge_is_reported() {
    let h = Hypergraph::from_edges(&[("f1", &["a", "b"]), ("f2", &["b", "c"])], &[]).unwrap();
    let g = corpus::path2();
    let w = ImmersionWitness {
        vertex_map: map(&[("a", "x"), ("b", "y"), ("c", "z")]),
        edge_subgraphs: [
            ("f1".to_string(), subgraph(&["p1"], &[])),
            ("f2".to_string(), subgraph(&["p1"], &[])),
        ]
        .into(),
        replay: None,
    };
    let r = verify_immersion(&h, &g, &w);
    assert!(r.violations.contains(&"edge-disjointness violated: p1".to_string()));
    assert!(r.violations.contains(&"connectivity violated: f2".to_string()));
}

#[test]
fn replay_without_dewet_fails() {
    let inst = corpus::cat4();
    let mut w = ImmersionWitness {
        vertex_map: map(&[("t1", "t1"), ("t2", "t2"), ("t3", "t3"), ("t4", "t4")]),
        edge_subgraphs: [(
            "e".to_string(),
            subgraph(&["g1", "g2", "g3", "g4", "g5", "g6"], &["w1", "x", "w2"]),
        )]
        .into(),
        replay: None,
    };
    let steps = himm_core::engine::build_replay(&inst.h, &inst.g, &w).unwrap();
    assert_eq!(steps.iter().filter(|s| matches!(s, OperationStep::Dewet(..))).count(), 3);
    let mut dropped = false;
    let cut: Vec<OperationStep> = steps
        .into_iter()
        .filter(|s| {
            let skip = !dropped && matches!(s, OperationStep::Dewet(..));
            dropped |= skip;
            !skip
        })
        .collect();
    w.replay = Some(cut);
    let r = verify_immersion(&inst.h, &inst.g, &w);
    assert!(r.replay_checked);
    assert!(!r.is_ok());
}

#[test]
fn witness_json_round_trip() {
    let d = decide_immersion(&e3(), &corpus::hub(), &DecideConfig::default()).unwrap();
    let w = d.witness.unwrap();
    let s = serde_json::to_string(&w).unwrap();
    assert!(s.contains("\"vertexMap\"") && s.contains("\"extraVertices\""));
    let back: ImmersionWitness = serde_json::from_str(&s).unwrap();
    assert_eq!(back, w);
}

#[test]
fn named_instances_self_immerse() {
    for inst in corpus::named_instances() {
        for x in [&inst.h, &inst.g] {
            assert_eq!(decide(x, x), Answer::Yes, "{}", inst.name);
        }
    }
}

#[test]
fn budget_gives_unknown() {
    let h = corpus::k4_3();
    let cfg = DecideConfig {
        budget: Budget::expansions(1),
        ..DecideConfig::default()
    };
    let d = decide_immersion(&h, &h, &cfg).unwrap();
    assert_eq!(d.answer, Answer::Unknown);
    assert!(d.witness.is_none());
    assert_eq!(immersion_oracle(&h, &h, Budget::expansions(1)).answer, Answer::Unknown);
}

#[test]
fn parallel_and_sequential_agree() {
    let seq = DecideConfig {
        parallel: false,
        ..DecideConfig::default()
    };
    for inst in corpus::named_instances() {
        let a = decide_immersion(&inst.h, &inst.g, &DecideConfig::default()).unwrap();
        let b = decide_immersion(&inst.h, &inst.g, &seq).unwrap();
        assert_eq!(a.answer, b.answer, "{}", inst.name);
        assert_eq!(a.witness, b.witness, "{}", inst.name);
        assert_eq!(a.stats.succeeding_class, b.stats.succeeding_class, "{}", inst.name);
    }
}

#[test]
fn dual_examples() {
    let a = Transposed::plain(corpus::path2());
    let b = Transposed::plain(corpus::hub());
    let d = decide_dual_immersion(&a, &b, &DecideConfig::default()).unwrap();
    assert_eq!(d.answer, Answer::Yes);
    assert_eq!(dual_oracle(&a, &b, Budget::unlimited()).answer, Answer::Yes);
    let w = d.witness.unwrap();
    let mut targets: Vec<&String> = w.edge_map.values().collect();
    targets.sort();
    targets.dedup();
    assert_eq!(targets.len(), 2);
    assert_eq!(w.vertex_subgraphs.len(), 3);
    // A hub of three edges has no dual image in a path of two.
    let d = decide_dual_immersion(&b, &a, &DecideConfig::default()).unwrap();
    assert_eq!(d.answer, Answer::No);
}

fn arb_hypergraph(max_v: usize, max_e: usize, max_size: usize) -> impl Strategy<Value = Hypergraph> {
    (1..=max_v, 0..=max_e, any::<u64>()).prop_map(move |(n, m, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        corpus::random_hypergraph(&mut rng, &NAMES, "e", n, m, max_size)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Every division realisation of `H` contains `H`.
    #[test]
    fn division_self_test(h in arb_hypergraph(4, 3, 4), pick in any::<prop::sample::Index>()) {
        let all = all_choice_vectors(&h).unwrap();
        let c = &all[pick.index(all.len())];
        let real = realize_division(&h, c).unwrap();
        let d = decide_immersion(&h, &real, &DecideConfig::default()).unwrap();
        prop_assert_eq!(d.answer, Answer::Yes);
        prop_assert!(verify_immersion(&h, &real, d.witness.as_ref().unwrap()).is_ok());
    }

    #[test]
    fn adding_an_edge_keeps_yes(h in arb_hypergraph(4, 3, 3), g in arb_hypergraph(5, 4, 3), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..=3)) {
        prop_assume!(decide(&h, &g) == Answer::Yes);
        let mut vs: Vec<String> = picks.iter().map(|p| g.vertices()[p.index(g.vertex_count())].clone()).collect();
        vs.sort();
        vs.dedup();
        let bigger = g.with_edge(Edge::new("added", vs)).unwrap();
        prop_assert_eq!(decide(&h, &bigger), Answer::Yes);
    }

    #[test]
    fn pipeline_matches_oracle(h in arb_hypergraph(4, 3, 3), g in arb_hypergraph(5, 4, 3)) {
        let p = decide_immersion(&h, &g, &DecideConfig::default()).unwrap();
        let o = immersion_oracle(&h, &g, Budget::unlimited());
        prop_assert_eq!(p.answer, o.answer);
        for w in [p.witness, o.witness].into_iter().flatten() {
            let r = verify_immersion(&h, &g, &w);
            prop_assert!(r.is_ok(), "{:?}", r.violations);
        }
    }
}
