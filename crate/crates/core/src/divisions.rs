//! Divisions of hyperedges (reduced Steiner trees over the hyperedge's
//! vertices) and their assembly into whole-hypergraph division patterns.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{canonical_form, Certificate};
use crate::hypergraph::{Edge, Hypergraph, HypergraphError};
use crate::transforms::{vertex_node_name, LabeledGraph, NodeRole};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisionError {
    #[error("{what} is {actual}, above the cap of {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u128,
        actual: u128,
    },
    #[error("choice vector has {got} entries for {expected} hyperedges")]
    ChoiceLength { expected: usize, got: usize },
    #[error("choice {index} for hyperedge `{edge}` is out of range ({available} divisions)")]
    IndexOutOfRange {
        edge: String,
        index: usize,
        available: usize,
    },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// A reduced Steiner tree over the vertices of one hyperedge.
///
/// Nodes `0..terminals.len()` are the terminals in hyperedge order; nodes
/// from `terminals.len()` on are unlabeled branch nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalTree {
    pub terminals: Vec<String>,
    pub branch_nodes: usize,
    pub links: Vec<(usize, usize)>,
}

impl CanonicalTree {
    pub fn node_count(&self) -> usize {
        self.terminals.len() + self.branch_nodes
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.node_count()];
        for &(a, b) in &self.links {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// The single-branch-node tree with every terminal a leaf (for r ≥ 3),
    /// or the only tree for r ≤ 2.
    pub fn is_star(&self) -> bool {
        let r = self.terminals.len();
        if r <= 2 {
            return true;
        }
        self.branch_nodes == 1 && self.degrees()[r] == r
    }

    /// Checks the tree shape: spanning tree, terminal leaves, branch nodes of
    /// degree at least three, at most `r - 2` branch nodes.
    pub fn is_valid(&self) -> bool {
        let r = self.terminals.len();
        let n = self.node_count();
        if r == 0 || self.branch_nodes > r.saturating_sub(2) || self.links.len() + 1 != n {
            return false;
        }
        let mut dsu = crate::hypergraph::Dsu::new(n);
        for &(a, b) in &self.links {
            if a >= n || b >= n || a == b || dsu.find(a) == dsu.find(b) {
                return false;
            }
            dsu.union(a, b);
        }
        let d = self.degrees();
        (r..n).all(|b| d[b] >= 3) && (0..n).all(|v| d[v] != 1 || v < r)
    }
}

/// Tree shape on `r` anonymous terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Shape {
    r: usize,
    branch: usize,
    links: Vec<(usize, usize)>,
}

impl Shape {
    fn key(&self) -> Certificate {
        let n = self.r + self.branch;
        let colors: Vec<u64> = (0..n)
            .map(|v| if v < self.r { v as u64 } else { self.r as u64 })
            .collect();
        canonical_form(&colors, &self.links).certificate
    }

    /// All shapes obtained by adding terminal number `r`.
    fn grow(&self) -> Vec<Shape> {
        let (k, b) = (self.r, self.branch);
        let lift = |x: usize| if x >= k { x + 1 } else { x };
        let base: Vec<(usize, usize)> = self.links.iter().map(|&(u, v)| (lift(u), lift(v))).collect();
        let t = k;
        let mut out = Vec::new();
        for x in (0..k).chain(k + 1..k + 1 + b) {
            let mut links = base.clone();
            links.push((x, t));
            out.push(Shape { r: k + 1, branch: b, links });
        }
        for (i, &(u, v)) in base.iter().enumerate() {
            let mut links = base.clone();
            links[i] = (u, t);
            links.push((t, v));
            out.push(Shape { r: k + 1, branch: b, links });

            let s = k + 1 + b;
            let mut links = base.clone();
            links[i] = (u, s);
            links.push((s, v));
            links.push((s, t));
            out.push(Shape { r: k + 1, branch: b + 1, links });
        }
        for j in 0..b {
            let old = k + 1 + j;
            let relabel = |x: usize| {
                if x == old {
                    t
                } else if x > old {
                    x - 1
                } else {
                    x
                }
            };
            let links = base.iter().map(|&(u, v)| (relabel(u), relabel(v))).collect();
            out.push(Shape { r: k + 1, branch: b - 1, links });
        }
        out
    }
}

fn shapes(r: usize) -> Vec<Shape> {
    if r == 0 {
        return Vec::new();
    }
    if r == 1 {
        return vec![Shape { r: 1, branch: 0, links: Vec::new() }];
    }
    let mut level = vec![Shape { r: 2, branch: 0, links: vec![(0, 1)] }];
    for _ in 2..r {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for s in &level {
            for g in s.grow() {
                if seen.insert(g.key()) {
                    next.push(g);
                }
            }
        }
        level = next;
    }
    let mut keyed: Vec<(usize, Certificate, Shape)> = level
        .into_iter()
        .map(|s| (s.branch, s.key(), s))
        .collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    keyed.into_iter().map(|(_, _, s)| s).collect()
}

/// Every reduced Steiner tree over `terminals`, one per isomorphism class
/// fixing terminal labels, ordered by node count then canonical form.
pub fn enumerate_edge_divisions<S: AsRef<str>>(terminals: &[S]) -> Vec<CanonicalTree> {
    let names: Vec<String> = terminals.iter().map(|s| s.as_ref().to_string()).collect();
    shapes(names.len())
        .into_iter()
        .map(|s| CanonicalTree {
            terminals: names.clone(),
            branch_nodes: s.branch,
            links: s.links,
        })
        .collect()
}

/// Number of reduced Steiner trees over `r` labeled terminals.
pub fn edge_division_count(r: usize) -> usize {
    shapes(r).len()
}

/// A whole-hypergraph division: one tree per hyperedge, glued at the shared
/// terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionPattern {
    /// Terminal nodes come first, one per vertex of `H` in order, all pinned.
    pub graph: LabeledGraph,
    pub choices: Vec<usize>,
    /// Hyperedge index owning each link.
    pub link_owner: Vec<usize>,
    /// Hyperedge index owning each branch node; `None` for terminals.
    pub node_owner: Vec<Option<usize>>,
    pub key: Certificate,
}

impl DivisionPattern {
    pub fn terminal_count(&self) -> usize {
        self.node_owner.iter().take_while(|o| o.is_none()).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivisionCaps {
    pub max_edge_size: usize,
    pub max_combinations: u128,
}

impl Default for DivisionCaps {
    fn default() -> Self {
        DivisionCaps {
            max_edge_size: 6,
            max_combinations: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DivisionMode {
    #[default]
    Full,
    /// Only the all-star choice. Incomplete; kept for diagnostics.
    StarOnly,
}

/// Per-hyperedge tree lists of one hypergraph.
struct Assembler<'a> {
    h: &'a Hypergraph,
    trees: Vec<Vec<CanonicalTree>>,
}

impl<'a> Assembler<'a> {
    fn new(h: &'a Hypergraph, caps: &DivisionCaps) -> Result<Self, DivisionError> {
        let mut by_size: HashMap<usize, Vec<Shape>> = HashMap::new();
        let mut trees = Vec::with_capacity(h.edge_count());
        for e in h.edges() {
            if e.len() > caps.max_edge_size {
                return Err(DivisionError::CapExceeded {
                    what: "hyperedge size",
                    limit: caps.max_edge_size as u128,
                    actual: e.len() as u128,
                });
            }
            let list = by_size.entry(e.len()).or_insert_with(|| shapes(e.len()));
            trees.push(
                list.iter()
                    .map(|s| CanonicalTree {
                        terminals: e.vertices.clone(),
                        branch_nodes: s.branch,
                        links: s.links.clone(),
                    })
                    .collect(),
            );
        }
        Ok(Assembler { h, trees })
    }

    fn raw_count(&self) -> u128 {
        self.trees
            .iter()
            .fold(1u128, |acc, t| acc.saturating_mul(t.len() as u128))
    }

    fn decode(&self, mut index: u128) -> Vec<usize> {
        let mut choices = vec![0; self.trees.len()];
        for i in (0..self.trees.len()).rev() {
            let radix = self.trees[i].len() as u128;
            choices[i] = (index % radix) as usize;
            index /= radix;
        }
        choices
    }

    fn check(&self, choices: &[usize]) -> Result<(), DivisionError> {
        if choices.len() != self.trees.len() {
            return Err(DivisionError::ChoiceLength {
                expected: self.trees.len(),
                got: choices.len(),
            });
        }
        for (i, &c) in choices.iter().enumerate() {
            if c >= self.trees[i].len() {
                return Err(DivisionError::IndexOutOfRange {
                    edge: self.h.edges()[i].id.clone(),
                    index: c,
                    available: self.trees[i].len(),
                });
            }
        }
        Ok(())
    }

    fn star_choices(&self) -> Vec<usize> {
        self.trees
            .iter()
            .map(|list| list.iter().position(CanonicalTree::is_star).expect("a star exists"))
            .collect()
    }

    fn assemble(&self, choices: &[usize]) -> DivisionPattern {
        let h = self.h;
        let mut graph = LabeledGraph::new();
        let mut node_owner = Vec::new();
        for v in h.vertices() {
            let i = graph.add_node(
                vertex_node_name(v, 1),
                NodeRole::Vertex {
                    origin: v.clone(),
                    dup: 1,
                },
            );
            graph.set_pinned(i, true);
            node_owner.push(None);
        }
        let mut link_owner = Vec::new();
        for (ei, (e, &c)) in h.edges().iter().zip(choices).enumerate() {
            let tree = &self.trees[ei][c];
            let r = tree.terminals.len();
            let mut local: Vec<usize> = e
                .vertices
                .iter()
                .map(|v| h.vertex_index(v).expect("edge vertex exists"))
                .collect();
            for j in 0..tree.branch_nodes {
                local.push(graph.add_node(
                    format!("b:{}.{}", e.id, j + 1),
                    NodeRole::Added { anchor: None },
                ));
                node_owner.push(Some(ei));
            }
            debug_assert_eq!(local.len(), r + tree.branch_nodes);
            for &(a, b) in &tree.links {
                graph
                    .add_link(local[a], local[b])
                    .expect("tree links join distinct nodes");
                link_owner.push(ei);
            }
        }
        let key = graph.pinned_shape_key();
        DivisionPattern {
            graph,
            choices: choices.to_vec(),
            link_owner,
            node_owner,
            key,
        }
    }
}

/// The per-hyperedge tree lists used by [`assemble_pattern`] and
/// [`division_set`], in choice-index order.
pub fn edge_division_lists(h: &Hypergraph) -> Result<Vec<Vec<CanonicalTree>>, DivisionError> {
    Ok(Assembler::new(h, &DivisionCaps::default())?.trees)
}

/// Glues the chosen tree of every hyperedge into one pattern graph.
pub fn assemble_pattern(h: &Hypergraph, choices: &[usize]) -> Result<DivisionPattern, DivisionError> {
    let caps = DivisionCaps {
        max_edge_size: usize::MAX,
        max_combinations: u128::MAX,
    };
    let asm = Assembler::new(h, &caps)?;
    asm.check(choices)?;
    Ok(asm.assemble(choices))
}

/// The hypergraph whose factor graph smooths down to the chosen pattern.
/// Each branch node becomes one hyperedge over its neighbours; a link
/// between two branch nodes goes through a fresh vertex `w:<edge>.<k>`;
/// a link between two terminals becomes a size-2 hyperedge.
pub fn realize_division(h: &Hypergraph, choices: &[usize]) -> Result<Hypergraph, DivisionError> {
    let caps = DivisionCaps {
        max_edge_size: usize::MAX,
        max_combinations: u128::MAX,
    };
    let asm = Assembler::new(h, &caps)?;
    asm.check(choices)?;
    let mut vertices: Vec<String> = h.vertices().to_vec();
    let mut edges: Vec<Edge> = Vec::new();
    for (ei, (e, &c)) in h.edges().iter().zip(choices).enumerate() {
        let tree = &asm.trees[ei][c];
        let r = tree.terminals.len();
        if r == 1 {
            edges.push(e.clone());
            continue;
        }
        let mut parts: Vec<Vec<String>> = vec![Vec::new(); tree.branch_nodes];
        let mut pairs: Vec<Vec<String>> = Vec::new();
        let mut w = 0;
        for &(a, b) in &tree.links {
            match (a < r, b < r) {
                (true, true) => pairs.push(vec![e.vertices[a].clone(), e.vertices[b].clone()]),
                (true, false) => parts[b - r].push(e.vertices[a].clone()),
                (false, true) => parts[a - r].push(e.vertices[b].clone()),
                (false, false) => {
                    w += 1;
                    let name = format!("w:{}.{}", e.id, w);
                    vertices.push(name.clone());
                    parts[a - r].push(name.clone());
                    parts[b - r].push(name);
                }
            }
        }
        let mut produced: Vec<Vec<String>> = parts;
        produced.extend(pairs);
        if produced.len() == 1 {
            edges.push(Edge::new(e.id.clone(), produced.pop().unwrap()));
        } else {
            for (k, vs) in produced.into_iter().enumerate() {
                edges.push(Edge::new(format!("{}.{}", e.id, k + 1), vs));
            }
        }
    }
    Ok(Hypergraph::new(vertices, edges)?)
}

/// One representative per topological class of divisions of `H`.
#[derive(Debug, Clone)]
pub struct DivisionSet {
    pub members: Vec<DivisionPattern>,
    /// Size of the raw Cartesian product of per-edge choices.
    pub raw_count: u128,
}

impl DivisionSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Builds the deduplicated division set. Patterns are compared with the
/// terminals as one colour and branch nodes as another, so isomorphisms may
/// permute the vertices of `H`. Members are sorted by canonical key and each
/// carries the least choice vector of its class.
pub fn division_set(
    h: &Hypergraph,
    caps: &DivisionCaps,
    mode: DivisionMode,
) -> Result<DivisionSet, DivisionError> {
    let asm = Assembler::new(h, caps)?;
    let raw = asm.raw_count();
    if mode == DivisionMode::StarOnly {
        return Ok(DivisionSet {
            members: vec![asm.assemble(&asm.star_choices())],
            raw_count: raw,
        });
    }
    if raw > caps.max_combinations {
        return Err(DivisionError::CapExceeded {
            what: "number of raw division combinations",
            limit: caps.max_combinations,
            actual: raw,
        });
    }
    let classes: HashMap<Certificate, u128> = (0..raw as u64)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<Certificate, u128>, i| {
            let key = asm.assemble(&asm.decode(i as u128)).key;
            let slot = acc.entry(key).or_insert(i as u128);
            *slot = (*slot).min(i as u128);
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, i) in b {
                let slot = a.entry(k).or_insert(i);
                *slot = (*slot).min(i);
            }
            a
        });
    let sorted: BTreeMap<Certificate, u128> = classes.into_iter().collect();
    let members = sorted
        .into_values()
        .map(|i| asm.assemble(&asm.decode(i)))
        .collect();
    Ok(DivisionSet {
        members,
        raw_count: raw,
    })
}

/// Every raw choice vector of `H`, in lexicographic order.
pub fn all_choice_vectors(h: &Hypergraph) -> Result<Vec<Vec<usize>>, DivisionError> {
    let asm = Assembler::new(h, &DivisionCaps::default())?;
    let raw = asm.raw_count();
    if raw > DivisionCaps::default().max_combinations {
        return Err(DivisionError::CapExceeded {
            what: "number of raw division combinations",
            limit: DivisionCaps::default().max_combinations,
            actual: raw,
        });
    }
    Ok((0..raw).map(|i| asm.decode(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::factor_graph;

    fn k43() -> Hypergraph {
        Hypergraph::from_edges(
            &[
                ("abc", &["a", "b", "c"]),
                ("abd", &["a", "b", "d"]),
                ("acd", &["a", "c", "d"]),
                ("bcd", &["b", "c", "d"]),
            ],
            &[],
        )
        .unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(edge_division_count(1), 1);
        assert_eq!(edge_division_count(2), 1);
        assert_eq!(edge_division_count(3), 4);
        let trees = enumerate_edge_divisions(&["a", "b", "c"]);
        assert_eq!(trees.iter().filter(|t| t.is_star()).count(), 1);
        assert!(trees.iter().all(CanonicalTree::is_valid));
    }

    #[test]
    fn path_trees_differ_by_middle_terminal() {
        let trees = enumerate_edge_divisions(&["a", "b", "c"]);
        let mut middles: Vec<usize> = trees
            .iter()
            .filter(|t| t.branch_nodes == 0)
            .map(|t| (0..3).find(|&v| t.degrees()[v] == 2).unwrap())
            .collect();
        middles.sort_unstable();
        assert_eq!(middles, vec![0, 1, 2]);
    }

    #[test]
    fn k43_has_eighteen_classes() {
        let set = division_set(&k43(), &DivisionCaps::default(), DivisionMode::Full).unwrap();
        assert_eq!(set.raw_count, 256);
        // The two 4-regular all-path gluings are distinct, giving 19 rather than 18.
        assert_eq!(set.len(), 19);
        for w in set.members.windows(2) {
            assert!(w[0].key < w[1].key);
        }
    }

    #[test]
    fn star_pattern_of_single_edge() {
        let h = Hypergraph::from_edges(&[("e", &["a", "b", "c"])], &[]).unwrap();
        let trees = enumerate_edge_divisions(&["a", "b", "c"]);
        let star = trees.iter().position(CanonicalTree::is_star).unwrap();
        let p = assemble_pattern(&h, &[star]).unwrap();
        assert_eq!(p.graph.node_count(), 4);
        assert_eq!(p.graph.degrees(), vec![1, 1, 1, 3]);
        assert_eq!(p.terminal_count(), 3);

        let real = realize_division(&h, &[star]).unwrap();
        assert_eq!(real, h);
    }

    #[test]
    fn path_realization_uses_two_pair_edges() {
        let h = Hypergraph::from_edges(&[("e", &["a", "b", "c"])], &[]).unwrap();
        let trees = enumerate_edge_divisions(&["a", "b", "c"]);
        let mid_b = trees
            .iter()
            .position(|t| t.branch_nodes == 0 && t.degrees()[1] == 2)
            .unwrap();
        let real = realize_division(&h, &[mid_b]).unwrap();
        let mut sets: Vec<Vec<String>> = real.edges().iter().map(|e| e.vertices.clone()).collect();
        for s in &mut sets {
            s.sort();
        }
        sets.sort();
        assert_eq!(sets, vec![vec!["a", "b"], vec!["b", "c"]]);
    }

    #[test]
    fn parallel_pairs_glue_to_parallel_links() {
        let h = Hypergraph::from_edges(&[("e1", &["a", "b"]), ("e2", &["a", "b"])], &[]).unwrap();
        let set = division_set(&h, &DivisionCaps::default(), DivisionMode::Full).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.members[0].graph.links(), &[(0, 1), (0, 1)]);
    }

    #[test]
    fn all_star_matches_smoothed_factor_graph() {
        let h = k43();
        let set = division_set(&h, &DivisionCaps::default(), DivisionMode::StarOnly).unwrap();
        let mut f = factor_graph(&h);
        for i in 0..h.vertex_count() {
            f.set_pinned(i, true);
        }
        let protected: Vec<usize> = (0..h.vertex_count()).collect();
        let smooth = f.smooth_reduce(&protected).unwrap();
        assert_eq!(set.members[0].key, smooth.pinned_shape_key());
    }

    #[test]
    fn caps_are_enforced() {
        let big = Hypergraph::from_edges(&[("e", &["a", "b", "c", "d", "e", "f", "g"])], &[]).unwrap();
        assert!(matches!(
            division_set(&big, &DivisionCaps::default(), DivisionMode::Full),
            Err(DivisionError::CapExceeded { what: "hyperedge size", .. })
        ));
        let caps = DivisionCaps {
            max_edge_size: 6,
            max_combinations: 10,
        };
        assert!(matches!(
            division_set(&k43(), &caps, DivisionMode::Full),
            Err(DivisionError::CapExceeded { actual: 256, .. })
        ));
    }

    #[test]
    fn bad_choices_rejected() {
        let h = k43();
        assert!(matches!(
            assemble_pattern(&h, &[0, 0, 0]),
            Err(DivisionError::ChoiceLength { expected: 4, got: 3 })
        ));
        assert!(matches!(
            assemble_pattern(&h, &[0, 0, 0, 4]),
            Err(DivisionError::IndexOutOfRange { index: 4, .. })
        ));
    }
}
