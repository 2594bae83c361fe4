//! Canonical labeling of vertex-colored undirected multigraphs.
//!
//! Colour refinement to an equitable partition, then individualization of
//! each vertex of the first smallest non-singleton cell, recursively. Every
//! discrete partition reached gives a candidate certificate; the
//! lexicographically least one is canonical. Vertices that are twins (swapping
//! them is an automorphism fixing everything else) are individualized only
//! once per cell, which keeps stars, duplicate sets and clique gadgets cheap.

use std::collections::BTreeMap;

/// A certificate: equal certificates iff isomorphic colored multigraphs.
pub type Certificate = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub certificate: Certificate,
    /// `position[v]` is the canonical position of node `v`.
    pub position: Vec<usize>,
}

impl Canonical {
    /// `order[i]` is the node at canonical position `i`.
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.position.len()];
        for (v, &p) in self.position.iter().enumerate() {
            order[p] = v;
        }
        order
    }
}

struct Graph<'a> {
    n: usize,
    colors: &'a [u64],
    mult: Vec<u32>,
    adj: Vec<Vec<(usize, u32)>>,
    twin_class: Vec<usize>,
}

/// Canonical form of the multigraph on `n` nodes with the given initial
/// colors and links. Self-links are not supported.
pub fn canonical_form(colors: &[u64], links: &[(usize, usize)]) -> Canonical {
    let n = colors.len();
    let mut mult = vec![0u32; n * n];
    for &(a, b) in links {
        assert!(a != b, "canonical_form: self-link on node {a}");
        mult[a * n + b] += 1;
        mult[b * n + a] += 1;
    }
    let adj = (0..n)
        .map(|v| {
            (0..n)
                .filter_map(|w| {
                    let m = mult[v * n + w];
                    (m > 0).then_some((w, m))
                })
                .collect()
        })
        .collect();
    let mut g = Graph {
        n,
        colors,
        mult,
        adj,
        twin_class: Vec::new(),
    };
    g.twin_class = twin_classes(&g);

    // Initial partition ranks colors by value so the result is invariant.
    let mut distinct: Vec<u64> = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let start: Vec<u32> = colors
        .iter()
        .map(|c| distinct.binary_search(c).unwrap() as u32)
        .collect();

    let mut best: Option<(Certificate, Vec<usize>)> = None;
    search(&g, start, &mut best);
    let (certificate, position) = best.unwrap_or_else(|| (vec![0], Vec::new()));
    Canonical {
        certificate,
        position,
    }
}

fn twin_classes(g: &Graph) -> Vec<usize> {
    let n = g.n;
    let mut class: Vec<usize> = (0..n).collect();
    for v in 0..n {
        if class[v] != v {
            continue;
        }
        for w in v + 1..n {
            if class[w] != w || g.colors[v] != g.colors[w] {
                continue;
            }
            let same = (0..n)
                .filter(|&x| x != v && x != w)
                .all(|x| g.mult[v * n + x] == g.mult[w * n + x]);
            if same {
                class[w] = v;
            }
        }
    }
    class
}

/// Refines `colors` (dense ranks) to the coarsest equitable partition that
/// refines it. Ranks stay ordered consistently with the input ranks.
fn refine(g: &Graph, mut colors: Vec<u32>) -> Vec<u32> {
    let mut classes = count_classes(&colors);
    loop {
        let mut sigs: Vec<(u32, Vec<(u32, u32)>)> = Vec::with_capacity(g.n);
        for v in 0..g.n {
            let mut nb: BTreeMap<u32, u32> = BTreeMap::new();
            for &(w, m) in &g.adj[v] {
                *nb.entry(colors[w]).or_insert(0) += m;
            }
            sigs.push((colors[v], nb.into_iter().collect()));
        }
        let mut sorted: Vec<&(u32, Vec<(u32, u32)>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let next: Vec<u32> = sigs
            .iter()
            .map(|s| sorted.binary_search(&s).unwrap() as u32)
            .collect();
        let next_classes = sorted.len();
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(g: &Graph, colors: Vec<u32>, best: &mut Option<(Certificate, Vec<usize>)>) {
    let colors = refine(g, colors);
    let n = g.n;
    let mut size = vec![0usize; n];
    for &c in &colors {
        size[c as usize] += 1;
    }
    let target = (0..n)
        .filter(|&c| size[c] > 1)
        .min_by_key(|&c| (size[c], c));
    let Some(cell) = target else {
        let position: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
        let cert = certificate(g, &position);
        if best.as_ref().is_none_or(|(b, _)| cert < *b) {
            *best = Some((cert, position));
        }
        return;
    };
    let mut tried_twins: Vec<usize> = Vec::new();
    for v in (0..n).filter(|&v| colors[v] as usize == cell) {
        if tried_twins.contains(&g.twin_class[v]) {
            continue;
        }
        tried_twins.push(g.twin_class[v]);
        let split: Vec<u32> = (0..n)
            .map(|u| {
                let bump = (colors[u] as usize == cell && u != v) as u32;
                colors[u] * 2 + bump
            })
            .collect();
        search(g, dense(&split), best);
    }
}

fn dense(colors: &[u32]) -> Vec<u32> {
    let mut d = colors.to_vec();
    d.sort_unstable();
    d.dedup();
    colors
        .iter()
        .map(|c| d.binary_search(c).unwrap() as u32)
        .collect()
}

fn certificate(g: &Graph, position: &[usize]) -> Certificate {
    let n = g.n;
    let mut order = vec![0; n];
    for (v, &p) in position.iter().enumerate() {
        order[p] = v;
    }
    let mut cert = Vec::with_capacity(1 + n + n * n.saturating_sub(1) / 2);
    cert.push(n as u64);
    cert.extend(order.iter().map(|&v| g.colors[v]));
    for i in 0..n {
        for j in i + 1..n {
            cert.push(g.mult[order[i] * n + order[j]] as u64);
        }
    }
    cert
}
