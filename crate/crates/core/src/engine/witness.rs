//! Immersion witnesses: construction, coalesce/dewet replay, verification.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::divisions::DivisionPattern;
use crate::embedding::EmbeddingWitness;
use crate::hypergraph::Hypergraph;
use crate::iso::{are_isomorphic, IsoMarking, Isomorphism};
use crate::operations::{apply_sequence, OperationStep};
use crate::transforms::{LabeledGraph, NodeRole};

use super::EngineError;

/// The part of `G` assigned to one hyperedge of `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EdgeSubgraph {
    /// Edge ids of `G`, in `G` order.
    pub edges: Vec<String>,
    /// Vertices of those edges that are not images of the hyperedge's own
    /// vertices, in `G` order.
    #[serde(default)]
    pub extra_vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ImmersionWitness {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_subgraphs: BTreeMap<String, EdgeSubgraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay: Option<Vec<OperationStep>>,
}

impl ImmersionWitness {
    /// Builds the witness for per-hyperedge covers given as `G` edge indices,
    /// and attaches a replay.
    pub fn from_covers(
        h: &Hypergraph,
        g: &Hypergraph,
        vertex_map: BTreeMap<String, String>,
        covers: &[Vec<usize>],
    ) -> Self {
        let mut edge_subgraphs = BTreeMap::new();
        for (e, cover) in h.edges().iter().zip(covers) {
            let mut idx = cover.clone();
            idx.sort_unstable();
            idx.dedup();
            let images: HashSet<&str> = e.vertices.iter().map(|v| vertex_map[v].as_str()).collect();
            let touched: HashSet<&str> = idx
                .iter()
                .flat_map(|&k| g.edges()[k].vertices.iter().map(String::as_str))
                .collect();
            let extra_vertices = g
                .vertices()
                .iter()
                .filter(|v| touched.contains(v.as_str()) && !images.contains(v.as_str()))
                .cloned()
                .collect();
            edge_subgraphs.insert(
                e.id.clone(),
                EdgeSubgraph {
                    edges: idx.iter().map(|&k| g.edges()[k].id.clone()).collect(),
                    extra_vertices,
                },
            );
        }
        let mut w = ImmersionWitness {
            vertex_map,
            edge_subgraphs,
            replay: None,
        };
        w.replay = build_replay(h, g, &w).ok();
        w
    }
}

/// The sub-hypergraph of `G` a replay starts from: every used edge, plus the
/// image vertices, in `G` order.
pub fn replay_base(h: &Hypergraph, g: &Hypergraph, w: &ImmersionWitness) -> Result<Hypergraph, String> {
    let mut used: Vec<String> = Vec::new();
    for s in w.edge_subgraphs.values() {
        used.extend(s.edges.iter().cloned());
    }
    let images: Vec<String> = h.vertices().iter().filter_map(|v| w.vertex_map.get(v).cloned()).collect();
    g.restrict(&used, &images).map_err(|e| e.to_string())
}

/// Coalesces each hyperedge's cover in breadth-first order, dewets every
/// vertex that is not an image of the hyperedge's own vertices, then deletes
/// the vertices that are not images at all.
pub fn build_replay(h: &Hypergraph, g: &Hypergraph, w: &ImmersionWitness) -> Result<Vec<OperationStep>, String> {
    let mut cur = replay_base(h, g, w)?;
    let mut steps = Vec::new();
    let mut push = |cur: &mut Hypergraph, step: OperationStep| -> Result<(), String> {
        *cur = step.apply(cur).map_err(|e| e.to_string())?;
        steps.push(step);
        Ok(())
    };
    for e in h.edges() {
        let sub = w
            .edge_subgraphs
            .get(&e.id)
            .ok_or_else(|| format!("no subgraph for `{}`", e.id))?;
        if sub.edges.is_empty() {
            continue;
        }
        let mut merged = sub.edges[0].clone();
        let mut rest: Vec<String> = sub.edges[1..].to_vec();
        while !rest.is_empty() {
            let current = cur.edge(&merged).expect("merged edge exists").clone();
            let pos = rest
                .iter()
                .position(|id| {
                    cur.edge(id)
                        .is_some_and(|x| x.vertices.iter().any(|v| current.contains(v)))
                })
                .ok_or_else(|| format!("subgraph of `{}` is not connected", e.id))?;
            let next = rest.remove(pos);
            push(&mut cur, OperationStep::Coalesce(merged.clone(), next.clone()))?;
            merged = format!("cl:{merged}+{next}");
        }
        let images: HashSet<&str> = e
            .vertices
            .iter()
            .filter_map(|v| w.vertex_map.get(v).map(String::as_str))
            .collect();
        let members = cur.edge(&merged).expect("merged edge exists").vertices.clone();
        for v in members {
            if !images.contains(v.as_str()) {
                push(&mut cur, OperationStep::Dewet(merged.clone(), v.clone()))?;
                merged = format!("dw:{merged}-{v}");
            }
        }
    }
    let images: HashSet<&str> = w.vertex_map.values().map(String::as_str).collect();
    for v in cur.vertices().to_vec() {
        if !images.contains(v.as_str()) {
            push(&mut cur, OperationStep::DeleteVertex(v))?;
        }
    }
    Ok(steps)
}

/// Outcome of [`verify_immersion`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub violations: Vec<String>,
    pub replay_checked: bool,
    /// Isomorphism from `H` (minus zero-edge size-1 hyperedges) to the replay
    /// result.
    pub isomorphism: Option<Isomorphism>,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every immersion condition, and the replay when present.
pub fn verify_immersion(h: &Hypergraph, g: &Hypergraph, w: &ImmersionWitness) -> VerificationReport {
    let mut report = VerificationReport::default();
    let v = &mut report.violations;
    for x in h.vertices() {
        match w.vertex_map.get(x) {
            None => v.push(format!("vertexMap misses vertex `{x}`")),
            Some(y) if !g.has_vertex(y) => v.push(format!("vertexMap target `{y}` is not a vertex of G")),
            _ => {}
        }
    }
    for x in w.vertex_map.keys() {
        if !h.has_vertex(x) {
            v.push(format!("vertexMap maps unknown vertex `{x}`"));
        }
    }
    let mut seen_targets: HashSet<&str> = HashSet::new();
    for y in w.vertex_map.values() {
        if !seen_targets.insert(y) {
            v.push(format!("vertexMap not injective: `{y}`"));
        }
    }
    for id in w.edge_subgraphs.keys() {
        if h.edge(id).is_none() {
            v.push(format!("edgeSubgraphs names unknown hyperedge `{id}`"));
        }
    }
    let mut owner: HashMap<&str, &str> = HashMap::new();
    for e in h.edges() {
        let Some(sub) = w.edge_subgraphs.get(&e.id) else {
            v.push(format!("edgeSubgraphs misses hyperedge `{}`", e.id));
            continue;
        };
        let mut ok_edges = true;
        for id in &sub.edges {
            if g.edge(id).is_none() {
                v.push(format!("subgraph of `{}` uses unknown edge `{id}`", e.id));
                ok_edges = false;
            } else if owner.insert(id, &e.id).is_some() {
                v.push(format!("edge-disjointness violated: {id}"));
            }
        }
        let touched: HashSet<&str> = sub
            .edges
            .iter()
            .filter_map(|id| g.edge(id))
            .flat_map(|x| x.vertices.iter().map(String::as_str))
            .collect();
        for x in &sub.extra_vertices {
            if !touched.contains(x.as_str()) {
                v.push(format!("extra vertex `{x}` of `{}` lies on no used edge", e.id));
            }
        }
        let images: Option<Vec<String>> = e.vertices.iter().map(|x| w.vertex_map.get(x).cloned()).collect();
        match images {
            Some(t) if ok_edges && t.iter().all(|y| g.has_vertex(y)) => {
                if e.len() >= 2 && sub.edges.is_empty() {
                    v.push(format!("connectivity violated: {} has no edges", e.id));
                } else if !g.is_connected_cover(&sub.edges, &t).unwrap_or(false) {
                    v.push(format!("connectivity violated: {}", e.id));
                }
            }
            _ => {}
        }
    }
    if let (true, Some(steps)) = (report.violations.is_empty(), &w.replay) {
        report.replay_checked = true;
        check_replay(h, g, w, steps, &mut report);
    }
    report
}

fn check_replay(h: &Hypergraph, g: &Hypergraph, w: &ImmersionWitness, steps: &[OperationStep], report: &mut VerificationReport) {
    let base = match replay_base(h, g, w) {
        Ok(b) => b,
        Err(e) => {
            report.violations.push(format!("replay base: {e}"));
            return;
        }
    };
    let result = match apply_sequence(&base, steps) {
        Ok(r) => r,
        Err(e) => {
            report.violations.push(format!("replay {e}"));
            return;
        }
    };
    let kept: Vec<_> = h
        .edges()
        .iter()
        .filter(|e| !(e.len() == 1 && w.edge_subgraphs[&e.id].edges.is_empty()))
        .cloned()
        .collect();
    let target = Hypergraph::new(h.vertices().to_vec(), kept).expect("sub-hypergraph of H");
    let mut expected: Vec<Vec<&str>> = target
        .edges()
        .iter()
        .map(|e| {
            let mut s: Vec<&str> = e.vertices.iter().map(|x| w.vertex_map[x].as_str()).collect();
            s.sort_unstable();
            s
        })
        .collect();
    expected.sort();
    let mut got: Vec<Vec<&str>> = result
        .edges()
        .iter()
        .map(|e| {
            let mut s: Vec<&str> = e.vertices.iter().map(String::as_str).collect();
            s.sort_unstable();
            s
        })
        .collect();
    got.sort();
    let mut image_set: Vec<&str> = w.vertex_map.values().map(String::as_str).collect();
    image_set.sort_unstable();
    let mut result_vertices: Vec<&str> = result.vertices().iter().map(String::as_str).collect();
    result_vertices.sort_unstable();
    if expected != got || image_set != result_vertices {
        report
            .violations
            .push("replay result differs from the image of H under vertexMap".to_string());
        return;
    }
    match are_isomorphic(&target, &IsoMarking::all_original(&target), &result, &IsoMarking::all_original(&result)) {
        Some(iso) => report.isomorphism = Some(iso),
        None => report
            .violations
            .push("replay result is not isomorphic to H".to_string()),
    }
}

/// Projects a pinned embedding of a division pattern in the M-generalised
/// factor graph (or its densified form) onto `G`: edge nodes met by a
/// hyperedge's paths and branch images become its cover, and terminal images
/// give the vertex map.
pub fn extract_witness(
    h: &Hypergraph,
    g: &Hypergraph,
    member: &DivisionPattern,
    host: &LabeledGraph,
    ew: &EmbeddingWitness,
) -> Result<ImmersionWitness, EngineError> {
    let origin_of = |node: usize| -> Option<&str> {
        match &host.node(node).role {
            NodeRole::Vertex { origin, .. } => Some(origin),
            NodeRole::Added { anchor: Some(a) } => match &host.node(*a).role {
                NodeRole::Vertex { origin, .. } => Some(origin),
                _ => None,
            },
            _ => None,
        }
    };
    let mut vertex_map = BTreeMap::new();
    for (t, v) in h.vertices().iter().enumerate() {
        let image = ew.node_map[t];
        let o = origin_of(image).ok_or_else(|| {
            EngineError::ProjectionFailure(format!(
                "terminal `{v}` maps to `{}`, which stands for no vertex",
                host.node(image).name
            ))
        })?;
        vertex_map.insert(v.clone(), o.to_string());
    }
    let mut covers: Vec<Vec<usize>> = vec![Vec::new(); h.edge_count()];
    let mut note = |e: usize, node: usize| {
        if let NodeRole::Edge { origin } = &host.node(node).role {
            covers[e].push(g.edge_index(origin).expect("edge node of G"));
        }
    };
    for (k, &owner) in member.link_owner.iter().enumerate() {
        for &x in &ew.paths[k] {
            note(owner, x);
        }
    }
    for (p, owner) in member.node_owner.iter().enumerate() {
        if let Some(e) = owner {
            note(*e, ew.node_map[p]);
        }
    }
    let w = ImmersionWitness::from_covers(h, g, vertex_map, &covers);
    let report = verify_immersion(h, g, &w);
    if !report.is_ok() {
        return Err(EngineError::ProjectionFailure(report.violations.join("; ")));
    }
    if w.replay.is_none() {
        return Err(EngineError::ProjectionFailure("no replay could be built".into()));
    }
    Ok(w)
}
