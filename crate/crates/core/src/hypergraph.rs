//! Hypergraphs over opaque string identifiers, their elementary operations,
//! and connectivity predicates.
//!
//! A [`Hypergraph`] is immutable once built: every operation returns a new
//! value. Vertex order and edge order are significant and preserved, so that
//! serialization and canonical output stay byte-stable.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edge `{edge}` repeats vertex `{vertex}` (loops are not allowed)")]
    RepeatedVertex { edge: String, vertex: String },
    #[error("edge `{0}` has no vertices")]
    EmptyEdge(String),
    #[error("operation needs two distinct edges, got `{0}` twice")]
    SameEdge(String),
    #[error("operation needs two distinct vertices, got `{0}` twice")]
    SameVertex(String),
    #[error("edges `{0}` and `{1}` share no vertex")]
    NoSharedVertex(String, String),
    #[error("vertex `{vertex}` is not in edge `{edge}`")]
    VertexNotInEdge { edge: String, vertex: String },
    #[error("dewetting `{vertex}` would leave edge `{edge}` empty")]
    WouldEmptyEdge { edge: String, vertex: String },
    #[error("edge `{0}` does not have exactly two vertices")]
    NotSizeTwo(String),
    #[error("edges `{0}` and `{1}` have no common endpoint")]
    NoCommonEndpoint(String, String),
    #[error("lifting `{0}` and `{1}` would create a loop")]
    WouldCreateLoop(String, String),
    #[error("vertices `{0}` and `{1}` are not connected by an edge")]
    NotConnectedByEdge(String, String),
    #[error("vertex `{0}` still has incident edges")]
    VertexInUse(String),
}

/// A hyperedge: an identifier plus an ordered set of distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub vertices: Vec<String>,
}

impl Edge {
    pub fn new<I, S>(id: impl Into<String>, vertices: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Edge {
            id: id.into(),
            vertices: vertices.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: &str) -> bool {
        self.vertices.iter().any(|x| x == v)
    }
}

/// Vertices plus a multiset of hyperedges. Parallel hyperedges (same vertex
/// set, different ids) are allowed; loops and empty edges are not.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph", into = "RawHypergraph")]
pub struct Hypergraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHypergraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = HypergraphError;

    fn try_from(raw: RawHypergraph) -> Result<Self, Self::Error> {
        Hypergraph::new(raw.vertices, raw.edges)
    }
}

impl From<Hypergraph> for RawHypergraph {
    fn from(g: Hypergraph) -> Self {
        RawHypergraph {
            vertices: g.vertices,
            edges: g.edges,
        }
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph {{ V = {:?}, E = [", self.vertices)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {{{}}}", e.id, e.vertices.join(","))?;
        }
        write!(f, "] }}")
    }
}

impl Hypergraph {
    /// Builds a hypergraph, checking every structural invariant.
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self, HypergraphError> {
        let mut seen = HashSet::with_capacity(vertices.len());
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(HypergraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut edge_ids = HashSet::with_capacity(edges.len());
        for e in &edges {
            if !edge_ids.insert(e.id.as_str()) {
                return Err(HypergraphError::DuplicateEdge(e.id.clone()));
            }
            if e.vertices.is_empty() {
                return Err(HypergraphError::EmptyEdge(e.id.clone()));
            }
            let mut inside = HashSet::with_capacity(e.vertices.len());
            for v in &e.vertices {
                if !seen.contains(v.as_str()) {
                    return Err(HypergraphError::UnknownVertex(v.clone()));
                }
                if !inside.insert(v.as_str()) {
                    return Err(HypergraphError::RepeatedVertex {
                        edge: e.id.clone(),
                        vertex: v.clone(),
                    });
                }
            }
        }
        Ok(Hypergraph { vertices, edges })
    }

    /// Convenience constructor: vertices are collected from the edges in order
    /// of first appearance, followed by `isolated`.
    pub fn from_edges<S: AsRef<str>>(
        edges: &[(&str, &[S])],
        isolated: &[&str],
    ) -> Result<Self, HypergraphError> {
        let mut vertices: Vec<String> = Vec::new();
        let mut seen = HashSet::new();
        let mut built = Vec::with_capacity(edges.len());
        for (id, vs) in edges {
            for v in vs.iter() {
                if seen.insert(v.as_ref().to_string()) {
                    vertices.push(v.as_ref().to_string());
                }
            }
            built.push(Edge::new(*id, vs.iter().map(|v| v.as_ref().to_string())));
        }
        for v in isolated {
            vertices.push(v.to_string());
        }
        Hypergraph::new(vertices, built)
    }

    pub fn empty() -> Self {
        Hypergraph {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of edge sizes.
    pub fn incidence_count(&self) -> usize {
        self.edges.iter().map(Edge::len).sum()
    }

    pub fn vertex_index(&self, v: &str) -> Option<usize> {
        self.vertices.iter().position(|x| x == v)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertex_index(v).is_some()
    }

    pub fn degree(&self, v: &str) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    /// True when every edge has at most two vertices.
    pub fn is_ordinary(&self) -> bool {
        self.edges.iter().all(|e| e.len() <= 2)
    }

    /// Edges as lists of vertex indices.
    pub fn edge_indices(&self) -> Vec<Vec<usize>> {
        let index: HashMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        self.edges
            .iter()
            .map(|e| e.vertices.iter().map(|v| index[v.as_str()]).collect())
            .collect()
    }

    fn require_edge(&self, id: &str) -> Result<usize, HypergraphError> {
        self.edge_index(id)
            .ok_or_else(|| HypergraphError::UnknownEdge(id.to_string()))
    }

    fn require_vertex(&self, v: &str) -> Result<usize, HypergraphError> {
        self.vertex_index(v)
            .ok_or_else(|| HypergraphError::UnknownVertex(v.to_string()))
    }

    fn fresh_edge_id(&self, id: String, ignoring: &[usize]) -> Result<String, HypergraphError> {
        let clash = self
            .edges
            .iter()
            .enumerate()
            .any(|(i, e)| e.id == id && !ignoring.contains(&i));
        if clash {
            Err(HypergraphError::DuplicateEdge(id))
        } else {
            Ok(id)
        }
    }

    /// Replaces `e1` and `e2` by one edge `cl:<e1>+<e2>` on their union. The new
    /// edge takes the position of `e1`.
    pub fn coalesce_edges(&self, e1: &str, e2: &str) -> Result<Hypergraph, HypergraphError> {
        let i = self.require_edge(e1)?;
        let j = self.require_edge(e2)?;
        if i == j {
            return Err(HypergraphError::SameEdge(e1.to_string()));
        }
        let (a, b) = (&self.edges[i], &self.edges[j]);
        if !a.vertices.iter().any(|v| b.contains(v)) {
            return Err(HypergraphError::NoSharedVertex(e1.to_string(), e2.to_string()));
        }
        let mut union = a.vertices.clone();
        for v in &b.vertices {
            if !union.contains(v) {
                union.push(v.clone());
            }
        }
        let id = self.fresh_edge_id(format!("cl:{e1}+{e2}"), &[i, j])?;
        let mut edges = Vec::with_capacity(self.edges.len() - 1);
        for (k, e) in self.edges.iter().enumerate() {
            if k == i {
                edges.push(Edge {
                    id: id.clone(),
                    vertices: union.clone(),
                });
            } else if k != j {
                edges.push(e.clone());
            }
        }
        Ok(Hypergraph {
            vertices: self.vertices.clone(),
            edges,
        })
    }

    /// Detaches edge `e` from vertex `v`; the edge is renamed `dw:<e>-<v>`.
    pub fn dewet(&self, e: &str, v: &str) -> Result<Hypergraph, HypergraphError> {
        let i = self.require_edge(e)?;
        self.require_vertex(v)?;
        let edge = &self.edges[i];
        if !edge.contains(v) {
            return Err(HypergraphError::VertexNotInEdge {
                edge: e.to_string(),
                vertex: v.to_string(),
            });
        }
        if edge.len() == 1 {
            return Err(HypergraphError::WouldEmptyEdge {
                edge: e.to_string(),
                vertex: v.to_string(),
            });
        }
        let id = self.fresh_edge_id(format!("dw:{e}-{v}"), &[i])?;
        let mut edges = self.edges.clone();
        edges[i] = Edge {
            id,
            vertices: edge.vertices.iter().filter(|x| *x != v).cloned().collect(),
        };
        Ok(Hypergraph {
            vertices: self.vertices.clone(),
            edges,
        })
    }

    /// Ordinary-graph lifting: `{v,u}`, `{u,w}` become `{v,w}` (id `lf:<f1>+<f2>`).
    pub fn lift(&self, f1: &str, f2: &str) -> Result<Hypergraph, HypergraphError> {
        let i = self.require_edge(f1)?;
        let j = self.require_edge(f2)?;
        if i == j {
            return Err(HypergraphError::SameEdge(f1.to_string()));
        }
        let (a, b) = (&self.edges[i], &self.edges[j]);
        if a.len() != 2 {
            return Err(HypergraphError::NotSizeTwo(f1.to_string()));
        }
        if b.len() != 2 {
            return Err(HypergraphError::NotSizeTwo(f2.to_string()));
        }
        let shared: Vec<&String> = a.vertices.iter().filter(|v| b.contains(v)).collect();
        match shared.len() {
            0 => Err(HypergraphError::NoCommonEndpoint(f1.to_string(), f2.to_string())),
            2 => Err(HypergraphError::WouldCreateLoop(f1.to_string(), f2.to_string())),
            _ => {
                let u = shared[0];
                let v = a.vertices.iter().find(|x| *x != u).unwrap().clone();
                let w = b.vertices.iter().find(|x| *x != u).unwrap().clone();
                let id = self.fresh_edge_id(format!("lf:{f1}+{f2}"), &[i, j])?;
                let mut edges = Vec::with_capacity(self.edges.len() - 1);
                for (k, e) in self.edges.iter().enumerate() {
                    if k == i {
                        edges.push(Edge {
                            id: id.clone(),
                            vertices: vec![v.clone(), w.clone()],
                        });
                    } else if k != j {
                        edges.push(e.clone());
                    }
                }
                Ok(Hypergraph {
                    vertices: self.vertices.clone(),
                    edges,
                })
            }
        }
    }

    /// Contracts `u` and `v` (which must share an edge) into a vertex
    /// `vc:<u>+<v>` placed where `u` was. Every edge survives, even if it
    /// collapses to size one.
    pub fn vertex_coalesce(&self, u: &str, v: &str) -> Result<Hypergraph, HypergraphError> {
        let iu = self.require_vertex(u)?;
        self.require_vertex(v)?;
        if u == v {
            return Err(HypergraphError::SameVertex(u.to_string()));
        }
        if !self.edges.iter().any(|e| e.contains(u) && e.contains(v)) {
            return Err(HypergraphError::NotConnectedByEdge(u.to_string(), v.to_string()));
        }
        let z = format!("vc:{u}+{v}");
        if self.vertices.iter().any(|x| *x == z) {
            return Err(HypergraphError::DuplicateVertex(z));
        }
        let mut vertices = Vec::with_capacity(self.vertices.len() - 1);
        for (k, x) in self.vertices.iter().enumerate() {
            if k == iu {
                vertices.push(z.clone());
            } else if x != v {
                vertices.push(x.clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let mut out: Vec<String> = Vec::with_capacity(e.len());
                for x in &e.vertices {
                    let y = if x == u || x == v { &z } else { x };
                    if !out.contains(y) {
                        out.push(y.clone());
                    }
                }
                Edge {
                    id: e.id.clone(),
                    vertices: out,
                }
            })
            .collect();
        Ok(Hypergraph { vertices, edges })
    }

    pub fn delete_edge(&self, e: &str) -> Result<Hypergraph, HypergraphError> {
        let i = self.require_edge(e)?;
        let mut edges = self.edges.clone();
        edges.remove(i);
        Ok(Hypergraph {
            vertices: self.vertices.clone(),
            edges,
        })
    }

    /// Removes an isolated vertex.
    pub fn delete_vertex(&self, v: &str) -> Result<Hypergraph, HypergraphError> {
        let i = self.require_vertex(v)?;
        if self.edges.iter().any(|e| e.contains(v)) {
            return Err(HypergraphError::VertexInUse(v.to_string()));
        }
        let mut vertices = self.vertices.clone();
        vertices.remove(i);
        Ok(Hypergraph {
            vertices,
            edges: self.edges.clone(),
        })
    }

    /// Sub-hypergraph on the given edges, keeping `keep_vertices` plus every
    /// vertex those edges touch, in the original orders.
    pub fn restrict(
        &self,
        edge_ids: &[String],
        keep_vertices: &[String],
    ) -> Result<Hypergraph, HypergraphError> {
        let wanted: HashSet<&str> = edge_ids.iter().map(String::as_str).collect();
        for id in &wanted {
            self.require_edge(id)?;
        }
        for v in keep_vertices {
            self.require_vertex(v)?;
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| wanted.contains(e.id.as_str()))
            .cloned()
            .collect();
        let mut used: HashSet<&str> = keep_vertices.iter().map(String::as_str).collect();
        for e in &edges {
            used.extend(e.vertices.iter().map(String::as_str));
        }
        let vertices = self
            .vertices
            .iter()
            .filter(|v| used.contains(v.as_str()))
            .cloned()
            .collect();
        Ok(Hypergraph { vertices, edges })
    }

    /// Adds isolated vertices at the end.
    pub fn with_isolated(&self, extra: &[String]) -> Result<Hypergraph, HypergraphError> {
        let mut vertices = self.vertices.clone();
        vertices.extend(extra.iter().cloned());
        Hypergraph::new(vertices, self.edges.clone())
    }

    /// Appends one edge.
    pub fn with_edge(&self, edge: Edge) -> Result<Hypergraph, HypergraphError> {
        let mut edges = self.edges.clone();
        edges.push(edge);
        Hypergraph::new(self.vertices.clone(), edges)
    }

    /// Swaps the roles of vertices and edges. Vertices of degree zero would
    /// become empty edges; they are left out and reported in
    /// [`Transposed::dropped`].
    pub fn transpose(&self) -> Transposed {
        let vertices: Vec<String> = self.edges.iter().map(|e| e.id.clone()).collect();
        let mut edges = Vec::new();
        let mut dropped = Vec::new();
        for v in &self.vertices {
            let incident: Vec<String> = self
                .edges
                .iter()
                .filter(|e| e.contains(v))
                .map(|e| e.id.clone())
                .collect();
            if incident.is_empty() {
                dropped.push(v.clone());
            } else {
                edges.push(Edge {
                    id: v.clone(),
                    vertices: incident,
                });
            }
        }
        Transposed {
            hypergraph: Hypergraph { vertices, edges },
            dropped,
        }
    }

    /// Whether all of `terminals` lie in one connected component of the
    /// sub-hypergraph spanned by `edge_ids` together with `terminals`.
    pub fn is_connected_cover(
        &self,
        edge_ids: &[String],
        terminals: &[String],
    ) -> Result<bool, HypergraphError> {
        let mut dsu = Dsu::new(self.vertices.len());
        for id in edge_ids {
            let e = &self.edges[self.require_edge(id)?];
            let first = self.require_vertex(&e.vertices[0])?;
            for v in &e.vertices[1..] {
                dsu.union(first, self.require_vertex(v)?);
            }
        }
        let mut root = None;
        for t in terminals {
            let r = dsu.find(self.require_vertex(t)?);
            match root {
                None => root = Some(r),
                Some(x) if x != r => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }

    /// Connected components of the whole hypergraph (isolated vertices form
    /// their own component). Returned as sorted vertex-index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut dsu = Dsu::new(self.vertices.len());
        for e in self.edge_indices() {
            for &v in &e[1..] {
                dsu.union(e[0], v);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for v in 0..self.vertices.len() {
            let r = dsu.find(v);
            let k = *slot.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[k].push(v);
        }
        groups
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// Result of [`Hypergraph::transpose`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transposed {
    pub hypergraph: Hypergraph,
    /// Degree-zero vertices of the input, i.e. edges of the transpose that
    /// would have been empty.
    pub dropped: Vec<String>,
}

impl Transposed {
    /// A plain hypergraph viewed as a transpose with no empty edges.
    pub fn plain(hypergraph: Hypergraph) -> Self {
        Transposed {
            hypergraph,
            dropped: Vec::new(),
        }
    }

    /// Transposes back, restoring the dropped vertices as isolated vertices.
    pub fn untranspose(&self) -> Hypergraph {
        let back = self.hypergraph.transpose().hypergraph;
        back.with_isolated(&self.dropped)
            .expect("dropped vertices are distinct from transposed edge ids")
    }
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path2() -> Hypergraph {
        Hypergraph::from_edges(&[("p1", &["x", "y"]), ("p2", &["y", "z"])], &[]).unwrap()
    }

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rejects_invalid_construction() {
        let dup = Hypergraph::new(strs(&["a", "a"]), vec![]);
        assert_eq!(dup.unwrap_err(), HypergraphError::DuplicateVertex("a".into()));
        let lp = Hypergraph::new(strs(&["a", "b"]), vec![Edge::new("e", ["a", "a"])]);
        assert!(matches!(lp, Err(HypergraphError::RepeatedVertex { .. })));
        let empty = Hypergraph::new(strs(&["a"]), vec![Edge::new("e", Vec::<String>::new())]);
        assert!(matches!(empty, Err(HypergraphError::EmptyEdge(_))));
        let unknown = Hypergraph::new(strs(&["a"]), vec![Edge::new("e", ["a", "b"])]);
        assert!(matches!(unknown, Err(HypergraphError::UnknownVertex(_))));
        let dupe = Hypergraph::new(
            strs(&["a", "b"]),
            vec![Edge::new("e", ["a"]), Edge::new("e", ["b"])],
        );
        assert!(matches!(dupe, Err(HypergraphError::DuplicateEdge(_))));
    }

    #[test]
    fn coalesce_examples() {
        let g = path2();
        let c = g.coalesce_edges("p1", "p2").unwrap();
        assert_eq!(c.edge_count(), 1);
        assert_eq!(c.edges()[0].vertices, strs(&["x", "y", "z"]));
        assert_eq!(c.edges()[0].id, "cl:p1+p2");
        assert_eq!(c.vertices(), g.vertices());

        let par = Hypergraph::from_edges(&[("e1", &["a", "b"]), ("e2", &["a", "b"])], &[]).unwrap();
        let c = par.coalesce_edges("e1", "e2").unwrap();
        assert_eq!(c.edge_count(), 1);
        assert_eq!(c.edges()[0].vertices, strs(&["a", "b"]));

        let apart = Hypergraph::from_edges(&[("e1", &["a", "b"]), ("e2", &["c", "d"])], &[]).unwrap();
        assert_eq!(
            apart.coalesce_edges("e1", "e2").unwrap_err(),
            HypergraphError::NoSharedVertex("e1".into(), "e2".into())
        );
        assert!(matches!(g.coalesce_edges("p1", "nope"), Err(HypergraphError::UnknownEdge(_))));
        assert!(matches!(g.coalesce_edges("p1", "p1"), Err(HypergraphError::SameEdge(_))));
    }

    #[test]
    fn dewet_examples() {
        let g = Hypergraph::from_edges(&[("e", &["a", "b", "c"])], &[]).unwrap();
        let d = g.dewet("e", "b").unwrap();
        assert_eq!(d.edges()[0].vertices, strs(&["a", "c"]));
        assert_eq!(d.edges()[0].id, "dw:e-b");

        let g = Hypergraph::from_edges(&[("e", &["a", "b"])], &[]).unwrap();
        let d = g.dewet("e", "a").unwrap();
        assert_eq!(d.edges()[0].vertices, strs(&["b"]));
        assert_eq!(d.vertex_count(), 2);

        let g = Hypergraph::from_edges(&[("e", &["a"])], &[]).unwrap();
        assert!(matches!(g.dewet("e", "a"), Err(HypergraphError::WouldEmptyEdge { .. })));
        assert!(matches!(
            path2().dewet("p1", "z"),
            Err(HypergraphError::VertexNotInEdge { .. })
        ));
    }

    #[test]
    fn lift_examples() {
        let g = Hypergraph::from_edges(&[("f1", &["v", "u"]), ("f2", &["u", "w"])], &[]).unwrap();
        let l = g.lift("f1", "f2").unwrap();
        assert_eq!(l.edge_count(), 1);
        assert_eq!(l.edges()[0].vertices, strs(&["v", "w"]));

        let g = Hypergraph::from_edges(
            &[("f1", &["v", "u"]), ("f2", &["u", "w"]), ("f3", &["v", "w"])],
            &[],
        )
        .unwrap();
        let l = g.lift("f1", "f2").unwrap();
        let vw: Vec<_> = l.edges().iter().filter(|e| e.vertices == strs(&["v", "w"])).collect();
        assert_eq!(vw.len(), 2);

        let g = Hypergraph::from_edges(&[("f1", &["v", "u"]), ("f2", &["u", "v"])], &[]).unwrap();
        assert!(matches!(g.lift("f1", "f2"), Err(HypergraphError::WouldCreateLoop(..))));
        let g = Hypergraph::from_edges(&[("f1", &["a", "b", "c"]), ("f2", &["c", "d"])], &[]).unwrap();
        assert!(matches!(g.lift("f1", "f2"), Err(HypergraphError::NotSizeTwo(_))));
        let g = Hypergraph::from_edges(&[("f1", &["a", "b"]), ("f2", &["c", "d"])], &[]).unwrap();
        assert!(matches!(g.lift("f1", "f2"), Err(HypergraphError::NoCommonEndpoint(..))));
    }

    #[test]
    fn vertex_coalesce_examples() {
        let g = Hypergraph::from_edges(&[("e1", &["u", "v"]), ("e2", &["v", "w"])], &[]).unwrap();
        let c = g.vertex_coalesce("u", "v").unwrap();
        let z = "vc:u+v".to_string();
        assert_eq!(c.vertices(), &[z.clone(), "w".to_string()]);
        assert_eq!(c.edges()[0].vertices, vec![z.clone()]);
        assert_eq!(c.edges()[1].vertices, vec![z, "w".to_string()]);

        let g = Hypergraph::from_edges(&[("e1", &["u", "v"])], &[]).unwrap();
        let c = g.vertex_coalesce("u", "v").unwrap();
        assert_eq!(c.edge_count(), 1);
        assert_eq!(c.edges()[0].len(), 1);

        let g = Hypergraph::from_edges(&[("e1", &["u", "x"]), ("e2", &["v", "y"])], &[]).unwrap();
        assert!(matches!(
            g.vertex_coalesce("u", "v"),
            Err(HypergraphError::NotConnectedByEdge(..))
        ));
    }

    #[test]
    fn transpose_examples() {
        let g = Hypergraph::from_edges(&[("e1", &["a", "b"])], &[]).unwrap();
        let t = g.transpose();
        assert_eq!(t.hypergraph.vertices(), &["e1".to_string()]);
        assert_eq!(t.hypergraph.edges()[0], Edge::new("a", ["e1"]));
        assert_eq!(t.hypergraph.edges()[1], Edge::new("b", ["e1"]));

        let hub = Hypergraph::from_edges(
            &[("h1", &["x", "w"]), ("h2", &["y", "w"]), ("h3", &["z", "w"])],
            &[],
        )
        .unwrap();
        let t = hub.transpose().hypergraph;
        assert_eq!(t.edge("w").unwrap().vertices, strs(&["h1", "h2", "h3"]));
        for v in ["x", "y", "z"] {
            assert_eq!(t.edge(v).unwrap().len(), 1);
        }
        assert!(crate::iso::isomorphic(&t.transpose().hypergraph, &hub).is_some());

        let iso = Hypergraph::from_edges(&[("e", &["a"])], &["lonely"]).unwrap();
        let t = iso.transpose();
        assert_eq!(t.dropped, strs(&["lonely"]));
        assert_eq!(t.untranspose(), iso);
    }

    #[test]
    fn connected_cover_examples() {
        let g = path2();
        assert!(g.is_connected_cover(&strs(&["p1", "p2"]), &strs(&["x", "z"])).unwrap());
        assert!(!g.is_connected_cover(&strs(&["p1"]), &strs(&["x", "z"])).unwrap());
        assert!(g.is_connected_cover(&[], &strs(&["x"])).unwrap());
        assert!(matches!(
            g.is_connected_cover(&[], &strs(&["q"])),
            Err(HypergraphError::UnknownVertex(_))
        ));
        assert!(matches!(
            g.is_connected_cover(&strs(&["p9"]), &strs(&["x"])),
            Err(HypergraphError::UnknownEdge(_))
        ));
    }

    #[test]
    fn json_shape_is_exact() {
        let g = Hypergraph::from_edges(&[("e1", &["a", "b"])], &["c"]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"vertices":["a","b","c"],"edges":[{"id":"e1","vertices":["a","b"]}]}"#);
        let back: Hypergraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"vertices":["a","a"],"edges":[]}"#;
        assert!(serde_json::from_str::<Hypergraph>(bad).is_err());
    }
}
