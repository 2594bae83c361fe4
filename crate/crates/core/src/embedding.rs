//! Exact search for embeddings (topological-minor containment with every
//! pattern node a branch vertex) of a pattern graph in a host graph.
//!
//! Pattern nodes are placed one at a time; as soon as both ends of a pattern
//! link are placed the link is routed along a host path through free nodes,
//! shortest paths first. Pruning:
//!
//! * degree and capacity filters on candidate images;
//! * host twin classes (nodes whose transposition is an automorphism):
//!   only the first free member of a class is tried, ineligible-for-pins
//!   members first;
//! * a failed path dominates every later path whose interior contains its
//!   interior, and a failed direct link dominates everything when the pattern
//!   link has no parallel sibling;
//! * after every placement, each placed node must still have enough free
//!   host links for its unrouted pattern links.

use std::collections::{HashMap, VecDeque};
use std::time::Instant;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::transforms::{LabeledGraph, NodeRole};

/// Which pattern nodes carry a class pin: they must map to a duplicate-1
/// vertex node, and distinct pinned nodes to distinct origins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinConstraint {
    pinned: Vec<bool>,
}

impl PinConstraint {
    pub fn none(pattern_nodes: usize) -> Self {
        PinConstraint {
            pinned: vec![false; pattern_nodes],
        }
    }

    /// Pins exactly the nodes flagged `pinned` in the pattern.
    pub fn from_pattern(pattern: &LabeledGraph) -> Self {
        PinConstraint {
            pinned: pattern.nodes().iter().map(|n| n.pinned).collect(),
        }
    }

    pub fn is_pinned(&self, node: usize) -> bool {
        self.pinned.get(node).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.pinned.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pinned.is_empty()
    }
}

/// Search limits. Unlimited by default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_expansions: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn expansions(n: u64) -> Self {
        Budget {
            max_expansions: Some(n),
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingWitness {
    /// Host image of every pattern node.
    pub node_map: Vec<usize>,
    /// Host path for every pattern link, from the image of its first end to
    /// the image of its second end.
    pub paths: Vec<Vec<usize>>,
}

impl EmbeddingWitness {
    /// `{"nodeMap":{...},"paths":[{"link":["u","v",k],"path":[...]}]}` where
    /// `k` numbers parallel links between the same pair.
    pub fn to_json(&self, pattern: &LabeledGraph, host: &LabeledGraph) -> Value {
        let name = |g: &LabeledGraph, i: usize| g.node(i).name.clone();
        let mut node_map = Map::new();
        for (p, &h) in self.node_map.iter().enumerate() {
            node_map.insert(name(pattern, p), Value::String(name(host, h)));
        }
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let paths: Vec<Value> = pattern
            .links()
            .iter()
            .zip(&self.paths)
            .map(|(&(a, b), path)| {
                let k = seen.entry((a.min(b), a.max(b))).or_insert(0);
                let v = json!({
                    "link": [name(pattern, a), name(pattern, b), *k],
                    "path": path.iter().map(|&x| name(host, x)).collect::<Vec<_>>(),
                });
                *k += 1;
                v
            })
            .collect();
        json!({ "nodeMap": node_map, "paths": paths })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingOutcome {
    Found(EmbeddingWitness),
    NotFound,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingResult {
    pub outcome: EmbeddingOutcome,
    pub expansions: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingViolation {
    #[error("witness has {got} node images for {expected} pattern nodes")]
    NodeCount { expected: usize, got: usize },
    #[error("witness has {got} paths for {expected} pattern links")]
    PathCount { expected: usize, got: usize },
    #[error("host node index {0} out of range")]
    UnknownHostNode(usize),
    #[error("host node `{0}` is the image of two pattern nodes")]
    NotInjective(String),
    #[error("pinned pattern node `{0}` is not mapped to a duplicate-1 vertex node")]
    PinViolated(String),
    #[error("pinned pattern nodes share origin `{0}`")]
    OriginReused(String),
    #[error("path of link {0} does not join the images of its ends")]
    BadEndpoints(usize),
    #[error("path of link {0} steps across a non-link")]
    NotAdjacent(usize),
    #[error("path of link {0} is not simple")]
    NotSimple(usize),
    #[error("interior node `{node}` of link {link} is an image or lies on another path")]
    InteriorConflict { link: usize, node: String },
    #[error("host link `{0}`-`{1}` used directly more times than it occurs")]
    LinkMultiplicity(String, String),
}

/// Checks every embedding condition and every pin.
pub fn verify_embedding(
    pattern: &LabeledGraph,
    host: &LabeledGraph,
    pins: &PinConstraint,
    w: &EmbeddingWitness,
) -> Result<(), EmbeddingViolation> {
    let n = host.node_count();
    if w.node_map.len() != pattern.node_count() {
        return Err(EmbeddingViolation::NodeCount {
            expected: pattern.node_count(),
            got: w.node_map.len(),
        });
    }
    if w.paths.len() != pattern.link_count() {
        return Err(EmbeddingViolation::PathCount {
            expected: pattern.link_count(),
            got: w.paths.len(),
        });
    }
    let mut owner = vec![usize::MAX; n];
    for (p, &h) in w.node_map.iter().enumerate() {
        if h >= n {
            return Err(EmbeddingViolation::UnknownHostNode(h));
        }
        if owner[h] != usize::MAX {
            return Err(EmbeddingViolation::NotInjective(host.node(h).name.clone()));
        }
        owner[h] = p;
    }
    let mut origins: HashMap<&str, usize> = HashMap::new();
    for (p, &h) in w.node_map.iter().enumerate() {
        if !pins.is_pinned(p) {
            continue;
        }
        match &host.node(h).role {
            NodeRole::Vertex { origin, dup: 1 } => {
                if origins.insert(origin.as_str(), p).is_some() {
                    return Err(EmbeddingViolation::OriginReused(origin.clone()));
                }
            }
            _ => return Err(EmbeddingViolation::PinViolated(pattern.node(p).name.clone())),
        }
    }
    let mut mult: HashMap<(usize, usize), u32> = HashMap::new();
    for &(a, b) in host.links() {
        *mult.entry((a.min(b), a.max(b))).or_insert(0) += 1;
    }
    let mut interior_owner = vec![usize::MAX; n];
    let mut direct: HashMap<(usize, usize), u32> = HashMap::new();
    for (k, (&(a, b), path)) in pattern.links().iter().zip(&w.paths).enumerate() {
        if path.len() < 2 || path[0] != w.node_map[a] || *path.last().unwrap() != w.node_map[b] {
            return Err(EmbeddingViolation::BadEndpoints(k));
        }
        for &x in path {
            if x >= n {
                return Err(EmbeddingViolation::UnknownHostNode(x));
            }
        }
        for s in path.windows(2) {
            if !mult.contains_key(&(s[0].min(s[1]), s[0].max(s[1]))) {
                return Err(EmbeddingViolation::NotAdjacent(k));
            }
        }
        let mut sorted = path.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|s| s[0] == s[1]) {
            return Err(EmbeddingViolation::NotSimple(k));
        }
        for &x in &path[1..path.len() - 1] {
            if owner[x] != usize::MAX || interior_owner[x] != usize::MAX {
                return Err(EmbeddingViolation::InteriorConflict {
                    link: k,
                    node: host.node(x).name.clone(),
                });
            }
            interior_owner[x] = k;
        }
        if path.len() == 2 {
            let key = (path[0].min(path[1]), path[0].max(path[1]));
            let used = direct.entry(key).or_insert(0);
            *used += 1;
            if *used > mult[&key] {
                return Err(EmbeddingViolation::LinkMultiplicity(
                    host.node(key.0).name.clone(),
                    host.node(key.1).name.clone(),
                ));
            }
        }
    }
    Ok(())
}

/// Host preprocessing shared by every search on the same host.
pub struct HostIndex {
    n: usize,
    /// Distinct neighbours with multiplicities, sorted by neighbour.
    adj: Vec<Vec<(usize, u32)>>,
    degree: Vec<usize>,
    eligible: Vec<bool>,
    origin: Vec<usize>,
    class: Vec<usize>,
    /// Members of each class, ineligible first, then by index.
    members: Vec<Vec<usize>>,
}

impl HostIndex {
    pub fn new(host: &LabeledGraph) -> Self {
        let n = host.node_count();
        let mut maps: Vec<HashMap<usize, u32>> = vec![HashMap::new(); n];
        for &(a, b) in host.links() {
            *maps[a].entry(b).or_insert(0) += 1;
            *maps[b].entry(a).or_insert(0) += 1;
        }
        let adj: Vec<Vec<(usize, u32)>> = maps
            .into_iter()
            .map(|m| {
                let mut v: Vec<(usize, u32)> = m.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        let degree: Vec<usize> = adj.iter().map(|a| a.iter().map(|&(_, m)| m as usize).sum()).collect();
        let eligible: Vec<bool> = host.nodes().iter().map(|x| x.role.is_primary_vertex()).collect();
        let mut origin_ids: HashMap<&str, usize> = HashMap::new();
        let mut origin = vec![usize::MAX; n];
        let mut origin_count: Vec<usize> = Vec::new();
        for (i, node) in host.nodes().iter().enumerate() {
            if let (true, NodeRole::Vertex { origin: o, .. }) = (eligible[i], &node.role) {
                let next = origin_ids.len();
                let id = *origin_ids.entry(o.as_str()).or_insert(next);
                if id == origin_count.len() {
                    origin_count.push(0);
                }
                origin_count[id] += 1;
                origin[i] = id;
            }
        }
        // Eligible nodes sharing an origin are kept out of twin classes, so
        // that swapping twins never changes which origins are used.
        let twinnable: Vec<bool> = (0..n)
            .map(|i| !eligible[i] || origin_count[origin[i]] == 1)
            .collect();
        let mut index = HostIndex {
            n,
            adj,
            degree,
            eligible,
            origin,
            class: vec![usize::MAX; n],
            members: Vec::new(),
        };
        index.build_classes(&twinnable);
        index
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn class_count(&self) -> usize {
        self.members.len()
    }

    fn mult(&self, a: usize, b: usize) -> u32 {
        match self.adj[a].binary_search_by_key(&b, |&(x, _)| x) {
            Ok(i) => self.adj[a][i].1,
            Err(_) => 0,
        }
    }

    fn is_twin(&self, a: usize, b: usize) -> bool {
        if self.degree[a] != self.degree[b] {
            return false;
        }
        let strip = |v: usize, other: usize| self.adj[v].iter().filter(move |&&(x, _)| x != other);
        strip(a, b).eq(strip(b, a))
    }

    fn build_classes(&mut self, twinnable: &[bool]) {
        // Candidate buckets: identical open neighbourhoods (non-adjacent
        // twins) or identical closed neighbourhood sets (adjacent twins).
        let mut open: HashMap<&[(usize, u32)], Vec<usize>> = HashMap::new();
        let mut closed: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for v in 0..self.n {
            if !twinnable[v] {
                continue;
            }
            open.entry(self.adj[v].as_slice()).or_default().push(v);
            let mut c: Vec<usize> = self.adj[v].iter().map(|&(x, _)| x).collect();
            c.push(v);
            c.sort_unstable();
            closed.entry(c).or_default().push(v);
        }
        let mut class = vec![usize::MAX; self.n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut groups: Vec<Vec<usize>> = open.into_values().filter(|g| g.len() > 1).collect();
        groups.sort();
        let mut closed_groups: Vec<Vec<usize>> = closed.into_values().filter(|g| g.len() > 1).collect();
        closed_groups.sort();
        groups.extend(closed_groups);
        for g in groups {
            let mut local: Vec<Vec<usize>> = Vec::new();
            for &v in &g {
                if class[v] != usize::MAX {
                    continue;
                }
                // Within one bucket the twin relation is transitive.
                match local.iter_mut().find(|c| self.is_twin(c[0], v)) {
                    Some(c) => c.push(v),
                    None => local.push(vec![v]),
                }
            }
            for c in local.into_iter().filter(|c| c.len() > 1) {
                let id = members.len();
                for &v in &c {
                    class[v] = id;
                }
                members.push(c);
            }
        }
        for v in 0..self.n {
            if class[v] == usize::MAX {
                class[v] = members.len();
                members.push(vec![v]);
            }
        }
        for m in &mut members {
            let eligible = &self.eligible;
            m.sort_by_key(|&v| (eligible[v], v));
        }
        // Class ids in order of their least member, for deterministic scans.
        let mut ids: Vec<usize> = (0..members.len()).collect();
        ids.sort_by_key(|&c| members[c].iter().min().copied());
        let mut renum = vec![0; members.len()];
        for (new, &old) in ids.iter().enumerate() {
            renum[old] = new;
        }
        self.class = class.into_iter().map(|c| renum[c]).collect();
        let mut sorted = vec![Vec::new(); members.len()];
        for (old, m) in members.into_iter().enumerate() {
            sorted[renum[old]] = m;
        }
        self.members = sorted;
    }
}

struct Exhausted;

struct Search<'a> {
    host: &'a HostIndex,
    pins: &'a PinConstraint,
    links: &'a [(usize, usize)],
    order: Vec<usize>,
    back_links: Vec<Vec<usize>>,
    pattern_degree: Vec<usize>,
    pattern_nbrs: Vec<Vec<usize>>,
    has_sibling: Vec<bool>,
    unrouted: Vec<usize>,
    map: Vec<usize>,
    image_of: Vec<usize>,
    used: Vec<bool>,
    origin_used: Vec<bool>,
    direct_used: HashMap<(usize, usize), u32>,
    paths: Vec<Vec<usize>>,
    /// Number of distinct pattern degrees met by each host node and each pattern node.
    host_level: Vec<usize>,
    pattern_level: Vec<usize>,
    /// Free host nodes and unplaced pattern nodes meeting each threshold.
    free_at: Vec<usize>,
    unplaced_at: Vec<usize>,
    expansions: u64,
    budget: Budget,
}

const NONE: usize = usize::MAX;

impl<'a> Search<'a> {
    fn tick(&mut self) -> Result<(), Exhausted> {
        self.expansions += 1;
        if let Some(max) = self.budget.max_expansions {
            if self.expansions > max {
                return Err(Exhausted);
            }
        }
        if let Some(deadline) = self.budget.deadline {
            if self.expansions % 256 == 0 && Instant::now() >= deadline {
                return Err(Exhausted);
            }
        }
        Ok(())
    }

    fn free_capacity(&self, h: usize) -> usize {
        self.host.adj[h]
            .iter()
            .filter(|&&(x, _)| !self.used[x])
            .map(|&(_, m)| m as usize)
            .sum()
    }

    fn occupy(&mut self, h: usize) {
        self.used[h] = true;
        for i in 0..self.host_level[h] {
            self.free_at[i] -= 1;
        }
    }

    fn release(&mut self, h: usize) {
        self.used[h] = false;
        for i in 0..self.host_level[h] {
            self.free_at[i] += 1;
        }
    }

    /// Unplaced pattern nodes of degree at least `t` need as many free host
    /// nodes of degree at least `t`, for every threshold `t`.
    fn counts_ok(&self) -> bool {
        self.unplaced_at.iter().zip(&self.free_at).all(|(u, f)| u <= f)
    }

    /// Whether `h` can be spent on a path interior without breaking
    /// [`Self::counts_ok`].
    fn spare(&self, h: usize) -> bool {
        (0..self.host_level[h]).all(|i| self.free_at[i] > self.unplaced_at[i])
    }

    fn forward_ok(&self) -> bool {
        self.map.iter().enumerate().all(|(p, &h)| {
            h == NONE || self.unrouted[p] == 0 || self.free_capacity(h) >= self.unrouted[p]
        })
    }

    fn candidates(&self, p: usize) -> Vec<usize> {
        let pinned = self.pins.is_pinned(p);
        let need = self.pattern_degree[p];
        let mut out = Vec::new();
        for members in &self.host.members {
            let pick = members.iter().copied().find(|&h| {
                !self.used[h] && (!pinned || (self.host.eligible[h] && !self.origin_used[self.host.origin[h]]))
            });
            let Some(h) = pick else { continue };
            if self.host.degree[h] < need {
                continue;
            }
            let capacity: usize = self.host.adj[h]
                .iter()
                .filter(|&&(x, _)| {
                    !self.used[x] || (self.image_of[x] != NONE && self.pattern_nbrs[p].contains(&self.image_of[x]))
                })
                .map(|&(_, m)| m as usize)
                .sum();
            if capacity >= need {
                out.push(h);
            }
        }
        // Nodes already adjacent to images of placed neighbours first.
        let adjacent = |h: usize| {
            self.pattern_nbrs[p]
                .iter()
                .filter(|&&q| self.map[q] != NONE && self.host.mult(h, self.map[q]) > 0)
                .count()
        };
        out.sort_by_cached_key(|&h| (std::cmp::Reverse(adjacent(h)), h));
        out
    }

    fn place(&mut self, depth: usize) -> Result<bool, Exhausted> {
        if depth == self.order.len() {
            return Ok(true);
        }
        if !self.forward_ok() {
            return Ok(false);
        }
        let p = self.order[depth];
        for i in 0..self.pattern_level[p] {
            self.unplaced_at[i] -= 1;
        }
        let mut result = Ok(false);
        for h in self.candidates(p) {
            if let Err(e) = self.tick() {
                result = Err(e);
                break;
            }
            self.map[p] = h;
            self.image_of[h] = p;
            self.occupy(h);
            let pinned = self.pins.is_pinned(p);
            if pinned {
                self.origin_used[self.host.origin[h]] = true;
            }
            let r = if self.counts_ok() { self.route(depth, 0) } else { Ok(false) };
            if !matches!(r, Ok(false)) {
                result = r;
                break;
            }
            if pinned {
                self.origin_used[self.host.origin[h]] = false;
            }
            self.release(h);
            self.image_of[h] = NONE;
            self.map[p] = NONE;
        }
        if !matches!(result, Ok(true)) {
            for i in 0..self.pattern_level[p] {
                self.unplaced_at[i] += 1;
            }
        }
        result
    }

    /// Breadth-first distances to `target` through free spare nodes.
    fn distances(&self, target: usize) -> Vec<usize> {
        let mut dist = vec![NONE; self.host.n];
        dist[target] = 0;
        let mut queue = VecDeque::from([target]);
        while let Some(u) = queue.pop_front() {
            for &(x, _) in &self.host.adj[u] {
                if !self.used[x] && dist[x] == NONE && self.spare(x) {
                    dist[x] = dist[u] + 1;
                    queue.push_back(x);
                }
            }
        }
        dist
    }

    fn set_link_routed(&mut self, link: usize, routed: bool) {
        let (a, b) = self.links[link];
        for p in [a, b] {
            if routed {
                self.unrouted[p] -= 1;
            } else {
                self.unrouted[p] += 1;
            }
        }
    }

    /// Recursion depth grows with the number of pattern links, so the stack
    /// is extended on demand.
    fn route(&mut self, depth: usize, k: usize) -> Result<bool, Exhausted> {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || self.route_step(depth, k))
    }

    fn route_step(&mut self, depth: usize, k: usize) -> Result<bool, Exhausted> {
        if k == self.back_links[depth].len() {
            return self.place(depth + 1);
        }
        let link = self.back_links[depth][k];
        let (a, b) = self.links[link];
        let (x, y) = (self.map[a], self.map[b]);
        let key = (x.min(y), x.max(y));

        let used_direct = self.direct_used.get(&key).copied().unwrap_or(0);
        if self.host.mult(x, y) > used_direct {
            self.tick()?;
            *self.direct_used.entry(key).or_insert(0) += 1;
            self.paths[link] = vec![x, y];
            self.set_link_routed(link, true);
            if self.route(depth, k + 1)? {
                return Ok(true);
            }
            self.set_link_routed(link, false);
            *self.direct_used.get_mut(&key).unwrap() -= 1;
            if !self.has_sibling[link] {
                return Ok(false);
            }
        }

        let dist = self.distances(y);
        let start = self.host.adj[x]
            .iter()
            .filter(|&&(v, _)| !self.used[v] && self.spare(v))
            .map(|&(v, _)| dist[v])
            .min()
            .unwrap_or(NONE);
        if start == NONE {
            return Ok(false);
        }
        let free = self.used.iter().filter(|&&u| !u).count();
        let mut failed: Vec<Vec<usize>> = Vec::new();
        for len in start + 1..=free + 1 {
            let mut found = Vec::new();
            let mut prefix = vec![x];
            self.collect_paths(&mut prefix, y, len, &dist, &mut found)?;
            for path in found {
                let mut interior: Vec<usize> = path[1..path.len() - 1].to_vec();
                interior.sort_unstable();
                if failed.iter().any(|f| is_subset(f, &interior)) {
                    continue;
                }
                self.tick()?;
                for &v in &interior {
                    self.occupy(v);
                }
                self.paths[link] = path;
                self.set_link_routed(link, true);
                if self.counts_ok() && self.route(depth, k + 1)? {
                    return Ok(true);
                }
                self.set_link_routed(link, false);
                for &v in &interior {
                    self.release(v);
                }
                failed.push(interior);
            }
        }
        Ok(false)
    }

    /// Paths from the end of `prefix` to `target` with exactly `len` links
    /// in total, interior through free nodes, one member per twin class at
    /// every step.
    fn collect_paths(
        &mut self,
        prefix: &mut Vec<usize>,
        target: usize,
        len: usize,
        dist: &[usize],
        out: &mut Vec<Vec<usize>>,
    ) -> Result<(), Exhausted> {
        let steps_left = len + 1 - prefix.len();
        let u = *prefix.last().unwrap();
        if steps_left == 1 {
            if self.host.mult(u, target) > 0 {
                let mut p = prefix.clone();
                p.push(target);
                out.push(p);
            }
            return Ok(());
        }
        let host = self.host;
        for &(v, _) in &host.adj[u] {
            if self.used[v] || dist[v] == NONE || dist[v] > steps_left - 1 || !self.spare(v) {
                continue;
            }
            let first = host.members[host.class[v]]
                .iter()
                .copied()
                .find(|&w| !self.used[w]);
            if first != Some(v) {
                continue;
            }
            self.tick()?;
            self.used[v] = true;
            prefix.push(v);
            let r = self.collect_paths(prefix, target, len, dist, out);
            prefix.pop();
            self.used[v] = false;
            r?;
        }
        Ok(())
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut j = 0;
    for &s in small {
        while j < big.len() && big[j] < s {
            j += 1;
        }
        if j == big.len() || big[j] != s {
            return false;
        }
        j += 1;
    }
    true
}

/// Searches for an embedding of `pattern` in `host` respecting `pins`.
pub fn find_embedding(
    pattern: &LabeledGraph,
    host: &LabeledGraph,
    pins: &PinConstraint,
    budget: Budget,
) -> EmbeddingResult {
    find_embedding_indexed(pattern, &HostIndex::new(host), pins, budget)
}

/// [`find_embedding`] against a prepared host index.
pub fn find_embedding_indexed(
    pattern: &LabeledGraph,
    host: &HostIndex,
    pins: &PinConstraint,
    budget: Budget,
) -> EmbeddingResult {
    let np = pattern.node_count();
    let links = pattern.links();
    let pattern_degree = pattern.degrees();
    let mut pattern_nbrs: Vec<Vec<usize>> = vec![Vec::new(); np];
    let mut pair_count: HashMap<(usize, usize), usize> = HashMap::new();
    for &(a, b) in links {
        pattern_nbrs[a].push(b);
        pattern_nbrs[b].push(a);
        *pair_count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
    }
    let has_sibling: Vec<bool> = links
        .iter()
        .map(|&(a, b)| pair_count[&(a.min(b), a.max(b))] > 1)
        .collect();

    let mut order = Vec::with_capacity(np);
    let mut placed = vec![false; np];
    let mut back = vec![0usize; np];
    for _ in 0..np {
        let next = (0..np)
            .filter(|&p| !placed[p])
            .max_by_key(|&p| (back[p], pins.is_pinned(p), pattern_degree[p], std::cmp::Reverse(p)))
            .unwrap();
        placed[next] = true;
        for &q in &pattern_nbrs[next] {
            back[q] += 1;
        }
        order.push(next);
    }
    let mut rank = vec![0; np];
    for (i, &p) in order.iter().enumerate() {
        rank[p] = i;
    }
    let mut back_links = vec![Vec::new(); np];
    for (k, &(a, b)) in links.iter().enumerate() {
        back_links[rank[a].max(rank[b])].push(k);
    }

    let origins = host.origin.iter().filter(|&&o| o != NONE).max().map_or(0, |m| m + 1);
    let mut thresholds = pattern_degree.clone();
    thresholds.sort_unstable();
    thresholds.dedup();
    let level = |d: usize| thresholds.partition_point(|&t| t <= d);
    let host_level: Vec<usize> = host.degree.iter().map(|&d| level(d)).collect();
    let pattern_level: Vec<usize> = pattern_degree.iter().map(|&d| level(d)).collect();
    let mut free_at = vec![0; thresholds.len()];
    for &l in &host_level {
        for f in &mut free_at[..l] {
            *f += 1;
        }
    }
    let mut unplaced_at = vec![0; thresholds.len()];
    for &l in &pattern_level {
        for u in &mut unplaced_at[..l] {
            *u += 1;
        }
    }
    let mut search = Search {
        host,
        pins,
        links,
        order,
        back_links,
        pattern_degree,
        pattern_nbrs,
        has_sibling,
        unrouted: pattern.degrees(),
        map: vec![NONE; np],
        image_of: vec![NONE; host.n],
        used: vec![false; host.n],
        origin_used: vec![false; origins],
        direct_used: HashMap::new(),
        paths: vec![Vec::new(); links.len()],
        host_level,
        pattern_level,
        free_at,
        unplaced_at,
        expansions: 0,
        budget,
    };
    let outcome = match search.place(0) {
        Ok(true) => EmbeddingOutcome::Found(EmbeddingWitness {
            node_map: search.map.clone(),
            paths: search.paths.clone(),
        }),
        Ok(false) => EmbeddingOutcome::NotFound,
        Err(Exhausted) => EmbeddingOutcome::BudgetExhausted,
    };
    EmbeddingResult {
        outcome,
        expansions: search.expansions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::transforms::m_factor_graph;

    fn plain(n: usize, links: &[(usize, usize)]) -> LabeledGraph {
        let mut g = LabeledGraph::new();
        for i in 0..n {
            g.add_node(format!("n{i}"), NodeRole::Added { anchor: None });
        }
        for &(a, b) in links {
            g.add_link(a, b).unwrap();
        }
        g
    }

    fn found(r: &EmbeddingResult) -> &EmbeddingWitness {
        match &r.outcome {
            EmbeddingOutcome::Found(w) => w,
            other => panic!("expected an embedding, got {other:?}"),
        }
    }

    #[test]
    fn star_in_star() {
        let star = plain(4, &[(0, 1), (0, 2), (0, 3)]);
        let pins = PinConstraint::none(4);
        let r = find_embedding(&star, &star, &pins, Budget::unlimited());
        let w = found(&r);
        assert_eq!(w.node_map[0], 0);
        verify_embedding(&star, &star, &pins, w).unwrap();
    }

    #[test]
    fn star_not_in_path() {
        let star = plain(4, &[(0, 1), (0, 2), (0, 3)]);
        let path = plain(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let r = find_embedding(&star, &path, &PinConstraint::none(4), Budget::unlimited());
        assert_eq!(r.outcome, EmbeddingOutcome::NotFound);
    }

    #[test]
    fn triangle_in_hexagon() {
        let tri = plain(3, &[(0, 1), (1, 2), (2, 0)]);
        let c6 = plain(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let pins = PinConstraint::none(3);
        let r = find_embedding(&tri, &c6, &pins, Budget::unlimited());
        let w = found(&r);
        verify_embedding(&tri, &c6, &pins, w).unwrap();
        assert_eq!(w.paths.iter().map(|p| p.len() - 1).sum::<usize>(), 6);
    }

    #[test]
    fn pinned_star_in_m_factor_path() {
        let path2 = Hypergraph::from_edges(&[("p1", &["x", "y"]), ("p2", &["y", "z"])], &[]).unwrap();
        let host = m_factor_graph(&path2, 2).unwrap();
        let mut star = LabeledGraph::new();
        for v in ["x", "y", "z"] {
            let i = star.add_node(format!("v:{v}#1"), NodeRole::Vertex { origin: v.into(), dup: 1 });
            star.set_pinned(i, true);
        }
        let c = star.add_node("b", NodeRole::Added { anchor: None });
        for t in 0..3 {
            star.add_link(t, c).unwrap();
        }
        let pins = PinConstraint::from_pattern(&star);
        let r = find_embedding(&star, &host, &pins, Budget::unlimited());
        let w = found(&r);
        verify_embedding(&star, &host, &pins, w).unwrap();
        assert!(matches!(host.node(w.node_map[c]).role, NodeRole::Edge { .. }));
        let y2 = host.node_index("v:y#2").unwrap();
        assert!(w.paths.iter().any(|p| p.contains(&y2)));
    }

    #[test]
    fn verifier_rejects_mutations() {
        let tri = plain(3, &[(0, 1), (1, 2), (2, 0)]);
        let c6 = plain(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let pins = PinConstraint::none(3);
        let w = found(&find_embedding(&tri, &c6, &pins, Budget::unlimited())).clone();

        let mut shared = w.clone();
        let interior = shared.paths[0][1];
        shared.paths[1] = vec![shared.paths[1][0], interior, *shared.paths[1].last().unwrap()];
        assert!(verify_embedding(&tri, &c6, &pins, &shared).is_err());

        let path2 = Hypergraph::from_edges(&[("p1", &["x", "y"])], &[]).unwrap();
        let host = m_factor_graph(&path2, 2).unwrap();
        let mut pat = LabeledGraph::new();
        let t = pat.add_node("t", NodeRole::Vertex { origin: "x".into(), dup: 1 });
        pat.set_pinned(t, true);
        let pins = PinConstraint::from_pattern(&pat);
        let good = EmbeddingWitness {
            node_map: vec![host.node_index("v:x#1").unwrap()],
            paths: vec![],
        };
        verify_embedding(&pat, &host, &pins, &good).unwrap();
        let bad = EmbeddingWitness {
            node_map: vec![host.node_index("v:x#2").unwrap()],
            paths: vec![],
        };
        assert!(matches!(
            verify_embedding(&pat, &host, &pins, &bad),
            Err(EmbeddingViolation::PinViolated(_))
        ));
    }

    #[test]
    fn parallel_links_need_disjoint_paths() {
        let double = plain(2, &[(0, 1), (0, 1)]);
        let single = plain(2, &[(0, 1)]);
        let pins = PinConstraint::none(2);
        assert_eq!(
            find_embedding(&double, &single, &pins, Budget::unlimited()).outcome,
            EmbeddingOutcome::NotFound
        );
        let square = plain(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let w = found(&find_embedding(&double, &square, &pins, Budget::unlimited())).clone();
        verify_embedding(&double, &square, &pins, &w).unwrap();
        let two = plain(2, &[(0, 1), (0, 1)]);
        let w = found(&find_embedding(&double, &two, &pins, Budget::unlimited())).clone();
        verify_embedding(&double, &two, &pins, &w).unwrap();
    }

    #[test]
    fn budget_is_reported() {
        let k4 = plain(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let grid = plain(
            9,
            &[(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8), (0, 3), (3, 6), (1, 4), (4, 7), (2, 5), (5, 8)],
        );
        let r = find_embedding(&k4, &grid, &PinConstraint::none(4), Budget::expansions(3));
        assert_eq!(r.outcome, EmbeddingOutcome::BudgetExhausted);
    }

    #[test]
    fn twin_classes_of_m_factor_graph() {
        let g = Hypergraph::from_edges(&[("p1", &["x", "y"]), ("p2", &["y", "z"])], &[]).unwrap();
        let host = m_factor_graph(&g, 3).unwrap();
        let idx = HostIndex::new(&host);
        // x#1..x#3 share one class, likewise y and z; two edge nodes.
        assert_eq!(idx.class_count(), 5);
        let x = idx.class[host.node_index("v:x#1").unwrap()];
        let first = idx.members[x][0];
        assert_eq!(host.node(first).name, "v:x#2");
    }

    #[test]
    fn witness_json_shape() {
        let double = plain(2, &[(0, 1), (0, 1)]);
        let two = plain(2, &[(0, 1), (0, 1)]);
        let w = found(&find_embedding(&double, &two, &PinConstraint::none(2), Budget::unlimited())).clone();
        let j = w.to_json(&double, &two);
        assert_eq!(j["paths"][1]["link"], json!(["n0", "n1", 1]));
        assert_eq!(j["nodeMap"]["n0"], json!("n0"));
    }
}
