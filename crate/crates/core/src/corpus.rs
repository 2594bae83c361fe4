//! Named instances, exhaustive small families and seeded random instances
//! used by the test suites and the CLI.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypergraph::{Edge, Hypergraph};
use crate::iso::{canonical_key, IsoMarking};
use crate::transforms::{default_params, densified_host_size};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub h: Hypergraph,
    pub g: Hypergraph,
}

fn build(edges: &[(&str, &[&str])]) -> Hypergraph {
    Hypergraph::from_edges(edges, &[]).expect("fixed instance is well formed")
}

/// `x - y - z` as two size-2 edges `p1`, `p2`.
pub fn path2() -> Hypergraph {
    build(&[("p1", &["x", "y"]), ("p2", &["y", "z"])])
}

/// Three size-2 edges meeting at `w`.
pub fn hub() -> Hypergraph {
    build(&[("h1", &["x", "w"]), ("h2", &["y", "w"]), ("h3", &["z", "w"])])
}

pub fn triangle() -> Hypergraph {
    build(&[("t1", &["a", "b"]), ("t2", &["b", "c"]), ("t3", &["a", "c"])])
}

pub fn k4() -> Hypergraph {
    build(&[
        ("xy", &["x", "y"]),
        ("xz", &["x", "z"]),
        ("xw", &["x", "w"]),
        ("yz", &["y", "z"]),
        ("yw", &["y", "w"]),
        ("zw", &["z", "w"]),
    ])
}

/// The complete 3-uniform hypergraph on four vertices.
pub fn k4_3() -> Hypergraph {
    build(&[
        ("abc", &["a", "b", "c"]),
        ("abd", &["a", "b", "d"]),
        ("acd", &["a", "c", "d"]),
        ("bcd", &["b", "c", "d"]),
    ])
}

/// A single 4-edge against two hubs joined by a path. The star division
/// embeds here too, because the vertex map may place the 4-edge on one hub.
pub fn cat4() -> Instance {
    Instance {
        name: "cat4".into(),
        h: build(&[("e", &["t1", "t2", "t3", "t4"])]),
        g: build(&[
            ("g1", &["w1", "t1"]),
            ("g2", &["w1", "t2"]),
            ("g3", &["w1", "x"]),
            ("g4", &["x", "w2"]),
            ("g5", &["w2", "t3"]),
            ("g6", &["w2", "t4"]),
        ]),
    }
}

/// [`cat4`] with pair edges `{a,b}`, `{c,d}` in `H` and `{t1,t2}`, `{t3,t4}`
/// in `G`. Immerses, but no star division has a pinned embedding.
pub fn cat4_paired() -> Instance {
    Instance {
        name: "cat4-paired".into(),
        h: build(&[("e", &["a", "b", "c", "d"]), ("p", &["a", "b"]), ("q", &["c", "d"])]),
        g: build(&[
            ("g1", &["w1", "t1"]),
            ("g2", &["w1", "t2"]),
            ("g3", &["w1", "x"]),
            ("g4", &["x", "w2"]),
            ("g5", &["w2", "t3"]),
            ("g6", &["w2", "t4"]),
            ("g7", &["t1", "t2"]),
            ("g8", &["t3", "t4"]),
        ]),
    }
}

pub fn named_instances() -> Vec<Instance> {
    let e3 = build(&[("e", &["a", "b", "c"])]);
    vec![
        Instance {
            name: "e3-path2".into(),
            h: e3.clone(),
            g: path2(),
        },
        Instance {
            name: "triangle-path2".into(),
            h: triangle(),
            g: path2(),
        },
        Instance {
            name: "e3-hub".into(),
            h: e3.clone(),
            g: hub(),
        },
        Instance {
            name: "k4_3-self".into(),
            h: k4_3(),
            g: k4_3(),
        },
        Instance {
            name: "twin-e3-k4".into(),
            h: build(&[("e1", &["a", "b", "c"]), ("e2", &["a", "b", "c"])]),
            g: k4(),
        },
        cat4(),
        cat4_paired(),
    ]
}

fn subsets(n: usize, max_size: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u32..1 << n)
        .filter(|m| (m.count_ones() as usize) <= max_size)
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn multisets(k: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, m: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in from..k {
            cur.push(i);
            rec(k, m, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, m, 0, &mut Vec::new(), &mut out);
    out
}

fn from_indices(names: &[&str], edge_prefix: &str, edges: &[Vec<usize>]) -> Hypergraph {
    let vertices = names.iter().map(|s| s.to_string()).collect();
    let edges = edges
        .iter()
        .enumerate()
        .map(|(i, e)| Edge::new(format!("{edge_prefix}{}", i + 1), e.iter().map(|&v| names[v])))
        .collect();
    Hypergraph::new(vertices, edges).expect("generated hypergraph is well formed")
}

/// All hypergraphs with at most `max_v` vertices, at most `max_e` edges and
/// edge sizes at most `max_size`, one per isomorphism class, isolated
/// vertices included.
pub fn enumerate_hypergraphs(
    names: &[&str],
    edge_prefix: &str,
    min_v: usize,
    max_v: usize,
    max_e: usize,
    max_size: usize,
    connected_only: bool,
) -> Vec<Hypergraph> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n in min_v..=max_v.min(names.len()) {
        let subs = subsets(n, max_size);
        for m in 0..=max_e {
            for pick in multisets(subs.len(), m) {
                let edges: Vec<Vec<usize>> = pick.iter().map(|&i| subs[i].clone()).collect();
                let g = from_indices(&names[..n], edge_prefix, &edges);
                if connected_only && !g.is_connected() {
                    continue;
                }
                if seen.insert(canonical_key(&g, &IsoMarking::all_original(&g))) {
                    out.push(g);
                }
            }
        }
    }
    out
}

/// Pattern side of the micro-family: up to 3 vertices, 2 edges, sizes 3.
pub fn micro_patterns() -> Vec<Hypergraph> {
    enumerate_hypergraphs(&["a", "b", "c"], "e", 0, 3, 2, 3, false)
}

/// Host side of the micro-family: connected, up to 4 vertices, 3 edges,
/// sizes 3.
pub fn micro_hosts() -> Vec<Hypergraph> {
    enumerate_hypergraphs(&["x", "y", "z", "w"], "f", 1, 4, 3, 3, true)
}

pub fn micro_family() -> Vec<Instance> {
    let hosts = micro_hosts();
    let mut out = Vec::new();
    for (i, h) in micro_patterns().iter().enumerate() {
        for (j, g) in hosts.iter().enumerate() {
            out.push(Instance {
                name: format!("micro-{i}-{j}"),
                h: h.clone(),
                g: g.clone(),
            });
        }
    }
    out
}

const H_NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];
const G_NAMES: [&str; 8] = ["x", "y", "z", "w", "u", "v", "s", "t"];

/// `n` vertices and `m` edges whose sizes are uniform in `1..=max_size`
/// (capped at `n`).
pub fn random_hypergraph<R: Rng>(
    rng: &mut R,
    names: &[&str],
    edge_prefix: &str,
    n: usize,
    m: usize,
    max_size: usize,
) -> Hypergraph {
    let idx: Vec<usize> = (0..n).collect();
    let edges: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=max_size.min(n));
            let mut e: Vec<usize> = idx.choose_multiple(rng, size).copied().collect();
            e.sort_unstable();
            e
        })
        .collect();
    from_indices(&names[..n], edge_prefix, &edges)
}

/// Ordinary multigraph: every edge has two distinct ends, parallel edges
/// allowed.
pub fn random_multigraph<R: Rng>(rng: &mut R, n: usize, m: usize) -> Hypergraph {
    assert!(n >= 2, "an ordinary edge needs two vertices");
    let idx: Vec<usize> = (0..n).collect();
    let edges: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let mut e: Vec<usize> = idx.choose_multiple(rng, 2).copied().collect();
            e.sort_unstable();
            e
        })
        .collect();
    from_indices(&H_NAMES[..n], "e", &edges)
}

pub fn random_multigraphs(seed: u64, count: usize) -> Vec<Hypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=6);
            let m = rng.gen_range(1..=7);
            random_multigraph(&mut rng, n, m)
        })
        .collect()
}

/// Random pairs with `|V| <= 5` and `|E| <= 4` on both sides; pattern edges
/// have size at most 3, host edges at most 4, and the host has at least one
/// edge.
pub fn random_instances(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let gn = rng.gen_range(1..=5);
            let gm = rng.gen_range(1..=4);
            let g = random_hypergraph(&mut rng, &G_NAMES, "f", gn, gm, 4);
            let hn = rng.gen_range(1..=5);
            let hm = rng.gen_range(0..=4);
            let h = random_hypergraph(&mut rng, &H_NAMES, "e", hn, hm, 3);
            Instance {
                name: format!("random-{seed}-{i}"),
                h,
                g,
            }
        })
        .collect()
}

/// Random pairs small enough that the densified host built with default
/// parameters has at most `max_nodes` nodes.
pub fn mode_instances(seed: u64, count: usize, max_nodes: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempt = 0;
    while out.len() < count {
        let gn = rng.gen_range(1..=4);
        let gm = rng.gen_range(1..=3);
        let g = random_hypergraph(&mut rng, &G_NAMES, "f", gn, gm, 3);
        let hn = rng.gen_range(gn.saturating_sub(1).max(1)..=gn);
        let hm = rng.gen_range(1..=3);
        let h = random_hypergraph(&mut rng, &H_NAMES, "e", hn, hm, 3);
        let p = default_params(&h, &g);
        if densified_host_size(&g, p.m, p.l) <= max_nodes {
            out.push(Instance {
                name: format!("mode-{seed}-{attempt}"),
                h,
                g,
            });
        }
        attempt += 1;
    }
    out
}
