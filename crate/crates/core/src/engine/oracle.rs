//! Direct search over the definition of immersion: injective vertex maps and
//! edge-disjoint connected covers, hyperedge by hyperedge.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::embedding::Budget;
use crate::hypergraph::{Dsu, Hypergraph};

use super::witness::ImmersionWitness;
use super::{preflight, Answer, Decision, DecisionStats, Method};

struct Exhausted;

struct Oracle<'a> {
    h: &'a Hypergraph,
    g: &'a Hypergraph,
    h_edges: Vec<Vec<usize>>,
    g_edges: Vec<Vec<usize>>,
    order: Vec<usize>,
    /// Number of hyperedges of size at least two from position `i` of
    /// `order` on.
    need_after: Vec<usize>,
    vmap: Vec<usize>,
    g_used: Vec<bool>,
    covers: Vec<u64>,
    expansions: u64,
    budget: Budget,
}

const NONE: usize = usize::MAX;

impl Oracle<'_> {
    fn tick(&mut self) -> Result<(), Exhausted> {
        self.expansions += 1;
        if self.budget.max_expansions.is_some_and(|m| self.expansions > m) {
            return Err(Exhausted);
        }
        if let Some(d) = self.budget.deadline {
            if self.expansions % 256 == 0 && Instant::now() >= d {
                return Err(Exhausted);
            }
        }
        Ok(())
    }

    fn connects(&self, mask: u64, terminals: &[usize]) -> bool {
        let mut dsu = Dsu::new(self.g.vertex_count());
        let mut m = mask;
        while m != 0 {
            let k = m.trailing_zeros() as usize;
            m &= m - 1;
            let e = &self.g_edges[k];
            for &v in &e[1..] {
                dsu.union(e[0], v);
            }
        }
        let r = dsu.find(terminals[0]);
        terminals[1..].iter().all(|&t| dsu.find(t) == r)
    }

    fn solve(&mut self, i: usize, used: u64) -> Result<bool, Exhausted> {
        if i == self.order.len() {
            return Ok(self.place_isolated());
        }
        let free = self.g_edges.len() as u32 - used.count_ones();
        if (free as usize) < self.need_after[i] {
            return Ok(false);
        }
        let e = self.order[i];
        let unmapped: Vec<usize> = self.h_edges[e].iter().copied().filter(|&v| self.vmap[v] == NONE).collect();
        self.assign(i, used, &unmapped, 0)
    }

    fn assign(&mut self, i: usize, used: u64, unmapped: &[usize], k: usize) -> Result<bool, Exhausted> {
        if k == unmapped.len() {
            return self.cover(i, used);
        }
        let v = unmapped[k];
        for x in 0..self.g.vertex_count() {
            if self.g_used[x] {
                continue;
            }
            self.tick()?;
            self.vmap[v] = x;
            self.g_used[x] = true;
            if self.assign(i, used, unmapped, k + 1)? {
                return Ok(true);
            }
            self.g_used[x] = false;
            self.vmap[v] = NONE;
        }
        Ok(false)
    }

    fn cover(&mut self, i: usize, used: u64) -> Result<bool, Exhausted> {
        let e = self.order[i];
        let terminals: Vec<usize> = self.h_edges[e].iter().map(|&v| self.vmap[v]).collect();
        if terminals.len() == 1 {
            self.covers[e] = 0;
            return self.solve(i + 1, used);
        }
        let free: Vec<usize> = (0..self.g_edges.len()).filter(|&k| used & (1 << k) == 0).collect();
        let mut found: Vec<u64> = Vec::new();
        for size in 1..=free.len() {
            let mut pick: Vec<usize> = (0..size).collect();
            loop {
                let mask = pick.iter().fold(0u64, |m, &j| m | 1 << free[j]);
                if !found.iter().any(|&f| f & mask == f) {
                    self.tick()?;
                    if self.connects(mask, &terminals) {
                        found.push(mask);
                        self.covers[e] = mask;
                        if self.solve(i + 1, used | mask)? {
                            return Ok(true);
                        }
                    }
                }
                if !next_combination(&mut pick, free.len()) {
                    break;
                }
            }
        }
        Ok(false)
    }

    fn place_isolated(&mut self) -> bool {
        let mut spare = (0..self.g.vertex_count()).filter(|&x| !self.g_used[x]);
        let lonely: Vec<usize> = (0..self.h.vertex_count()).filter(|&v| self.vmap[v] == NONE).collect();
        let mut placed = Vec::new();
        for v in lonely {
            match spare.next() {
                Some(x) => placed.push((v, x)),
                None => return false,
            }
        }
        for (v, x) in placed {
            self.vmap[v] = x;
            self.g_used[x] = true;
        }
        true
    }
}

fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exhaustive immersion search. Exact when the budget is unlimited.
pub fn immersion_oracle(h: &Hypergraph, g: &Hypergraph, budget: Budget) -> Decision {
    let mut stats = DecisionStats::new(Method::Oracle);
    if let Some(reason) = preflight(h, g) {
        stats.note = Some(reason);
        return Decision::no(stats);
    }
    if g.edge_count() > 64 {
        stats.note = Some("oracle supports at most 64 edges in G".into());
        return Decision::unknown(stats);
    }
    let h_edges = h.edge_indices();
    let mut order: Vec<usize> = (0..h.edge_count()).collect();
    order.sort_by_key(|&e| (std::cmp::Reverse(h_edges[e].len()), e));
    let mut need_after = vec![0; order.len() + 1];
    for i in (0..order.len()).rev() {
        need_after[i] = need_after[i + 1] + usize::from(h_edges[order[i]].len() >= 2);
    }
    let mut o = Oracle {
        h,
        g,
        h_edges,
        g_edges: g.edge_indices(),
        order,
        need_after,
        vmap: vec![NONE; h.vertex_count()],
        g_used: vec![false; g.vertex_count()],
        covers: vec![0; h.edge_count()],
        expansions: 0,
        budget,
    };
    let outcome = o.solve(0, 0);
    stats.expansions = o.expansions;
    match outcome {
        Ok(true) => {
            let vertex_map: BTreeMap<String, String> = h
                .vertices()
                .iter()
                .zip(&o.vmap)
                .map(|(v, &x)| (v.clone(), g.vertices()[x].clone()))
                .collect();
            let covers: Vec<Vec<usize>> = o
                .covers
                .iter()
                .map(|&m| (0..g.edge_count()).filter(|&k| m & (1 << k) != 0).collect())
                .collect();
            let w = ImmersionWitness::from_covers(h, g, vertex_map, &covers);
            Decision {
                answer: Answer::Yes,
                witness: Some(w),
                stats,
            }
        }
        Ok(false) => Decision::no(stats),
        Err(Exhausted) => Decision::unknown(stats),
    }
}
