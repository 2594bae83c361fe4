use himm_core::corpus;
use himm_core::hypergraph::{Hypergraph, Transposed};
use himm_core::iso::isomorphic;
use himm_core::operations::{apply_sequence, OperationStep};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

fn arb_hypergraph(max_v: usize, max_e: usize, max_size: usize) -> impl Strategy<Value = Hypergraph> {
    (1..=max_v, 0..=max_e, any::<u64>()).prop_map(move |(n, m, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        corpus::random_hypergraph(&mut rng, &NAMES, "e", n, m, max_size)
    })
}

fn arb_multigraph() -> impl Strategy<Value = Hypergraph> {
    (2..=6usize, 1..=7usize, any::<u64>()).prop_map(|(n, m, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        corpus::random_multigraph(&mut rng, n, m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lift_is_coalesce_then_dewet(g in arb_multigraph()) {
        for f1 in g.edges() {
            for f2 in g.edges() {
                let shared: Vec<&String> = f1.vertices.iter().filter(|v| f2.contains(v)).collect();
                if f1.id == f2.id || shared.len() != 1 {
                    continue;
                }
                let lifted = g.lift(&f1.id, &f2.id).unwrap();
                let two = g
                    .coalesce_edges(&f1.id, &f2.id)
                    .and_then(|x| x.dewet(&format!("cl:{}+{}", f1.id, f2.id), shared[0]))
                    .unwrap();
                prop_assert!(isomorphic(&lifted, &two).is_some());
                let e = lifted.edge(&format!("lf:{}+{}", f1.id, f2.id)).unwrap();
                prop_assert!(!e.contains(shared[0]));
            }
        }
    }

    #[test]
    fn transpose_swaps_roles(h in arb_hypergraph(6, 5, 4)) {
        let t = h.transpose();
        prop_assert_eq!(t.hypergraph.vertex_count(), h.edge_count());
        prop_assert_eq!(t.hypergraph.edge_count() + t.dropped.len(), h.vertex_count());
        prop_assert_eq!(t.hypergraph.incidence_count(), h.incidence_count());
        for e in t.hypergraph.edges() {
            prop_assert_eq!(e.len(), h.degree(&e.id));
        }
        prop_assert!(isomorphic(&t.untranspose(), &h).is_some());
    }

    #[test]
    fn coalesce_keeps_vertices_and_merges(h in arb_hypergraph(6, 5, 3)) {
        for a in h.edges() {
            for b in h.edges() {
                if a.id == b.id || !a.vertices.iter().any(|v| b.contains(v)) {
                    continue;
                }
                let c = h.coalesce_edges(&a.id, &b.id).unwrap();
                prop_assert_eq!(c.vertices(), h.vertices());
                prop_assert_eq!(c.edge_count(), h.edge_count() - 1);
                let merged = c.edge(&format!("cl:{}+{}", a.id, b.id)).unwrap();
                let mut want: Vec<&String> = a.vertices.iter().chain(&b.vertices).collect();
                want.sort();
                want.dedup();
                let mut got: Vec<&String> = merged.vertices.iter().collect();
                got.sort();
                prop_assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn json_round_trip_is_byte_stable(h in arb_hypergraph(6, 5, 4)) {
        let s = serde_json::to_string(&h).unwrap();
        let back: Hypergraph = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn vertex_coalesce_drops_one_vertex(h in arb_hypergraph(5, 4, 3)) {
        for e in h.edges().iter().filter(|e| e.len() >= 2) {
            let g = h.vertex_coalesce(&e.vertices[0], &e.vertices[1]).unwrap();
            prop_assert_eq!(g.vertex_count(), h.vertex_count() - 1);
            prop_assert_eq!(g.edge_count(), h.edge_count());
            prop_assert_eq!(g.edge(&e.id).unwrap().len(), e.len() - 1);
        }
    }
}

#[test]
fn path2_sequences() {
    let p = corpus::path2();
    let one = apply_sequence(&p, &[OperationStep::Coalesce("p1".into(), "p2".into())]).unwrap();
    assert_eq!(one.edge_count(), 1);
    assert_eq!(one.edges()[0].len(), 3);
    assert_eq!(apply_sequence(&p, &[]).unwrap(), p);
    let lifted = apply_sequence(
        &p,
        &[
            OperationStep::Coalesce("p1".into(), "p2".into()),
            OperationStep::Dewet("cl:p1+p2".into(), "y".into()),
        ],
    )
    .unwrap();
    let mut v = lifted.edges()[0].vertices.clone();
    v.sort();
    assert_eq!(v, ["x", "z"]);
}

#[test]
fn sequence_errors_name_the_step() {
    let err = apply_sequence(
        &corpus::path2(),
        &[
            OperationStep::Coalesce("p1".into(), "p2".into()),
            OperationStep::Dewet("p1".into(), "x".into()),
        ],
    )
    .unwrap_err();
    assert_eq!(err.index, 1);
}

#[test]
fn double_transpose_of_corpus() {
    for inst in corpus::named_instances() {
        for g in [&inst.h, &inst.g] {
            let t = g.transpose();
            let tt = Transposed::plain(t.hypergraph.clone()).untranspose();
            assert!(isomorphic(&tt.with_isolated(&t.dropped).unwrap(), g).is_some());
        }
    }
}
