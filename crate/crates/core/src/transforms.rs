//! Ordinary-graph encodings of hypergraphs: factor graphs, M-generalised
//! factor graphs, clique densification, subdivision and smoothing.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{canonical_form, Certificate};
use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("unknown node index {0}")]
    UnknownNode(usize),
    #[error("unknown link index {0}")]
    UnknownLink(usize),
    #[error("self-link on node {0}")]
    SelfLink(usize),
    #[error("densification needs at least one target")]
    NoTargets,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("smoothing node `{0}` would create a loop")]
    LoopCreated(String),
}

/// What a node of a [`LabeledGraph`] stands for.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "camelCase")]
pub enum NodeRole {
    /// Copy `dup` (1-based) of hypergraph vertex `origin`.
    Vertex { origin: String, dup: usize },
    /// Hyperedge `origin`.
    Edge { origin: String },
    /// Any node introduced by a construction: Steiner branch points,
    /// subdivision nodes, clique gadget members. `anchor` names the node a
    /// clique gadget was attached to.
    Added {
        #[serde(skip_serializing_if = "Option::is_none", default)]
        anchor: Option<usize>,
    },
}

impl NodeRole {
    pub fn is_added(&self) -> bool {
        matches!(self, NodeRole::Added { .. })
    }

    /// Vertex copy with duplicate index 1: the only valid image of a pinned
    /// pattern node.
    pub fn is_primary_vertex(&self) -> bool {
        matches!(self, NodeRole::Vertex { dup: 1, .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub name: String,
    #[serde(flatten)]
    pub role: NodeRole,
    #[serde(default)]
    pub pinned: bool,
}

/// An ordinary multigraph with role-labelled nodes. Links are unordered
/// pairs; parallel links are allowed, self-links are not.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledGraph {
    nodes: Vec<Node>,
    links: Vec<(usize, usize)>,
}

impl LabeledGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(nodes: Vec<Node>, links: Vec<(usize, usize)>) -> Result<Self, TransformError> {
        let mut g = LabeledGraph { nodes, links: Vec::with_capacity(links.len()) };
        for (a, b) in links {
            g.add_link(a, b)?;
        }
        Ok(g)
    }

    pub fn add_node(&mut self, name: impl Into<String>, role: NodeRole) -> usize {
        self.nodes.push(Node {
            name: name.into(),
            role,
            pinned: false,
        });
        self.nodes.len() - 1
    }

    pub fn add_link(&mut self, a: usize, b: usize) -> Result<usize, TransformError> {
        for x in [a, b] {
            if x >= self.nodes.len() {
                return Err(TransformError::UnknownNode(x));
            }
        }
        if a == b {
            return Err(TransformError::SelfLink(a));
        }
        self.links.push((a, b));
        Ok(self.links.len() - 1)
    }

    pub fn set_pinned(&mut self, node: usize, pinned: bool) {
        self.nodes[node].pinned = pinned;
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    /// Degree counting parallel links.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes.len()];
        for &(a, b) in &self.links {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Per-node list of `(neighbour, link index)`, in link order.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (k, &(a, b)) in self.links.iter().enumerate() {
            adj[a].push((b, k));
            adj[b].push((a, k));
        }
        adj
    }

    pub fn pinned_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].pinned).collect()
    }

    /// Every link joins a vertex node to an edge node.
    pub fn is_vertex_edge_bipartite(&self) -> bool {
        self.links.iter().all(|&(a, b)| {
            let (ra, rb) = (&self.nodes[a].role, &self.nodes[b].role);
            matches!(
                (ra, rb),
                (NodeRole::Vertex { .. }, NodeRole::Edge { .. })
                    | (NodeRole::Edge { .. }, NodeRole::Vertex { .. })
            )
        })
    }

    /// Canonical certificate where pinned nodes are one colour and everything
    /// else another; node names and roles are otherwise forgotten.
    pub fn pinned_shape_key(&self) -> Certificate {
        let colors: Vec<u64> = self.nodes.iter().map(|n| if n.pinned { 0 } else { 1 }).collect();
        canonical_form(&colors, &self.links).certificate
    }

    /// Canonical certificate with caller-chosen node colours.
    pub fn key_with_colors(&self, colors: &[u64]) -> Certificate {
        canonical_form(colors, &self.links).certificate
    }

    /// Inserts a fresh degree-2 `added` node on link `link`.
    pub fn subdivide(&self, link: usize) -> Result<LabeledGraph, TransformError> {
        let &(a, b) = self.links.get(link).ok_or(TransformError::UnknownLink(link))?;
        let mut out = self.clone();
        let mut k = out.nodes.len();
        let mut name = format!("s:{k}");
        while out.node_index(&name).is_some() {
            k += 1;
            name = format!("s:{k}");
        }
        let w = out.add_node(name, NodeRole::Added { anchor: None });
        out.links[link] = (a, w);
        out.links.push((w, b));
        Ok(out)
    }

    /// Repeatedly removes unprotected degree-2 nodes, joining their two
    /// neighbours, until none is left. Surviving nodes keep their relative
    /// order; links are listed in a canonical sorted order.
    pub fn smooth_reduce(&self, protected: &[usize]) -> Result<LabeledGraph, TransformError> {
        for &p in protected {
            if p >= self.nodes.len() {
                return Err(TransformError::UnknownNode(p));
            }
        }
        let n = self.nodes.len();
        let is_protected: Vec<bool> = {
            let mut v = vec![false; n];
            for &p in protected {
                v[p] = true;
            }
            v
        };
        // multiset adjacency: node -> neighbour -> multiplicity
        let mut adj: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
        for &(a, b) in &self.links {
            *adj[a].entry(b).or_insert(0) += 1;
            *adj[b].entry(a).or_insert(0) += 1;
        }
        let degree = |adj: &Vec<HashMap<usize, usize>>, v: usize| adj[v].values().sum::<usize>();
        let mut alive = vec![true; n];
        let mut work: Vec<usize> = (0..n).rev().collect();
        while let Some(w) = work.pop() {
            if !alive[w] || is_protected[w] || degree(&adj, w) != 2 {
                continue;
            }
            let nbrs: Vec<(usize, usize)> = adj[w].iter().map(|(&x, &m)| (x, m)).collect();
            if nbrs.len() == 1 {
                return Err(TransformError::LoopCreated(self.nodes[w].name.clone()));
            }
            let (u, v) = (nbrs[0].0, nbrs[1].0);
            alive[w] = false;
            adj[w].clear();
            for x in [u, v] {
                adj[x].remove(&w);
            }
            *adj[u].entry(v).or_insert(0) += 1;
            *adj[v].entry(u).or_insert(0) += 1;
            work.push(u);
            work.push(v);
        }
        let mut remap = vec![usize::MAX; n];
        let mut nodes = Vec::new();
        for i in 0..n {
            if alive[i] {
                remap[i] = nodes.len();
                nodes.push(self.nodes[i].clone());
            }
        }
        let mut links = Vec::new();
        for a in 0..n {
            if !alive[a] {
                continue;
            }
            let mut nb: Vec<(usize, usize)> = adj[a].iter().map(|(&x, &m)| (x, m)).collect();
            nb.sort_unstable();
            for (b, m) in nb {
                if a < b {
                    for _ in 0..m {
                        links.push((remap[a], remap[b]));
                    }
                }
            }
        }
        Ok(LabeledGraph { nodes, links })
    }

    /// Graphviz rendering: vertex nodes as circles, edge nodes as squares,
    /// added nodes as points.
    pub fn to_dot(&self, graph_name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{}\" {{", escape(graph_name));
        for (i, n) in self.nodes.iter().enumerate() {
            let (shape, label) = match &n.role {
                NodeRole::Vertex { origin, dup } => ("circle", format!("v:{origin}#{dup}")),
                NodeRole::Edge { origin } => ("square", format!("e:{origin}")),
                NodeRole::Added { .. } => ("point", n.name.clone()),
            };
            let extra = if n.pinned { ", penwidth=2" } else { "" };
            let _ = writeln!(
                s,
                "  n{i} [shape={shape}, label=\"{}\"{extra}];",
                escape(&label)
            );
        }
        for &(a, b) in &self.links {
            let _ = writeln!(s, "  n{a} -- n{b};");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let view = GraphView {
            nodes: self.nodes.clone(),
            links: self
                .links
                .iter()
                .map(|&(a, b)| [self.nodes[a].name.clone(), self.nodes[b].name.clone()])
                .collect(),
        };
        serde_json::to_value(view).expect("graph view serializes")
    }
}

#[derive(Serialize)]
struct GraphView {
    nodes: Vec<Node>,
    links: Vec<[String; 2]>,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Name of vertex copy `dup` of `origin`.
pub fn vertex_node_name(origin: &str, dup: usize) -> String {
    format!("v:{origin}#{dup}")
}

pub fn edge_node_name(origin: &str) -> String {
    format!("e:{origin}")
}

/// Factor graph: one node per vertex, one per edge, linked by incidence.
pub fn factor_graph(g: &Hypergraph) -> LabeledGraph {
    m_factor_graph(g, 1).expect("M = 1 is valid")
}

/// M-generalised factor graph. Vertex copies come first, grouped by vertex
/// (`v#1..v#M`), followed by the edge nodes.
pub fn m_factor_graph(g: &Hypergraph, m: usize) -> Result<LabeledGraph, TransformError> {
    if m == 0 {
        return Err(TransformError::InvalidParameter("M must be at least 1".into()));
    }
    let mut out = LabeledGraph::new();
    for v in g.vertices() {
        for dup in 1..=m {
            out.add_node(
                vertex_node_name(v, dup),
                NodeRole::Vertex {
                    origin: v.clone(),
                    dup,
                },
            );
        }
    }
    let base = out.node_count();
    for e in g.edges() {
        out.add_node(edge_node_name(&e.id), NodeRole::Edge { origin: e.id.clone() });
    }
    for (k, e) in g.edge_indices().into_iter().enumerate() {
        for v in e {
            for dup in 0..m {
                out.links.push((v * m + dup, base + k));
            }
        }
    }
    Ok(out)
}

/// Attaches a clique gadget to every target: `L-1` fresh nodes that together
/// with the target form a complete graph `K_L`.
pub fn densify(x: &LabeledGraph, targets: &[usize], l: usize) -> Result<LabeledGraph, TransformError> {
    if targets.is_empty() {
        return Err(TransformError::NoTargets);
    }
    if l < 2 {
        return Err(TransformError::InvalidParameter("L must be at least 2".into()));
    }
    for &t in targets {
        if t >= x.node_count() {
            return Err(TransformError::UnknownNode(t));
        }
    }
    let mut out = x.clone();
    out.nodes.reserve(targets.len() * (l - 1));
    out.links.reserve(targets.len() * l * (l - 1) / 2);
    for &t in targets {
        let mut clique = vec![t];
        for i in 1..l {
            let name = format!("k:{}.{i}", x.nodes[t].name);
            clique.push(out.add_node(name, NodeRole::Added { anchor: Some(t) }));
        }
        for i in 0..clique.len() {
            for j in i + 1..clique.len() {
                out.links.push((clique[i], clique[j]));
            }
        }
    }
    Ok(out)
}

/// Indices of the duplicate-1 vertex nodes of an M-generalised factor graph.
pub fn primary_vertex_nodes(x: &LabeledGraph) -> Vec<usize> {
    (0..x.node_count())
        .filter(|&i| x.nodes[i].role.is_primary_vertex())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Mode {
    /// Pin constraints stand in for the clique gadgets.
    Pin,
    /// Build the clique gadgets and search without pins.
    LiteralDensify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub mode: Mode,
}

impl Params {
    pub fn validate(&self) -> Result<(), TransformError> {
        if self.m < 1 {
            return Err(TransformError::InvalidParameter("M must be at least 1".into()));
        }
        if self.mode == Mode::LiteralDensify && self.l < 2 {
            return Err(TransformError::InvalidParameter(
                "L must be at least 2 in literal densification mode".into(),
            ));
        }
        Ok(())
    }
}

/// `M = 1 + Σ_e max(2|e|-2, 1)` over edges of `h`, and
/// `L = 1 + M (M |V(g)| + |E(g)|)`, in pin mode.
pub fn default_params(h: &Hypergraph, g: &Hypergraph) -> Params {
    let m = 1 + h
        .edges()
        .iter()
        .map(|e| (2 * e.len()).saturating_sub(2).max(1))
        .sum::<usize>();
    let l = 1 + m * (m * g.vertex_count() + g.edge_count());
    Params { m, l, mode: Mode::Pin }
}

/// Expected node count of the densified M-generalised factor graph.
pub fn densified_host_size(g: &Hypergraph, m: usize, l: usize) -> usize {
    m * g.vertex_count() + g.edge_count() + (l - 1) * g.vertex_count()
}

/// Node sets for audit output.
pub fn role_counts(x: &LabeledGraph) -> (usize, usize, usize) {
    let mut c = (0, 0, 0);
    for n in &x.nodes {
        match n.role {
            NodeRole::Vertex { .. } => c.0 += 1,
            NodeRole::Edge { .. } => c.1 += 1,
            NodeRole::Added { .. } => c.2 += 1,
        }
    }
    c
}

/// Removes every `added` node and its links; the inverse of [`densify`] and
/// [`LabeledGraph::subdivide`] bookkeeping checks.
pub fn strip_added(x: &LabeledGraph) -> LabeledGraph {
    let keep: BTreeSet<usize> = (0..x.node_count()).filter(|&i| !x.nodes[i].role.is_added()).collect();
    let mut remap = HashMap::new();
    let mut nodes = Vec::new();
    for &i in &keep {
        remap.insert(i, nodes.len());
        nodes.push(x.nodes[i].clone());
    }
    let links = x
        .links
        .iter()
        .filter(|(a, b)| keep.contains(a) && keep.contains(b))
        .map(|(a, b)| (remap[a], remap[b]))
        .collect();
    LabeledGraph { nodes, links }
}
