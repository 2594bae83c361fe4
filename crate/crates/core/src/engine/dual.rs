//! Dual immersion, decided through the transpose correspondence.
//!
//! A dual immersion of `A` in `B` maps hyperedges of `A` injectively to
//! hyperedges of `B` and each vertex of `A` to a connected set of vertices of
//! `B`. Both inputs are given as [`Transposed`] so that empty hyperedges
//! survive the round trip.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::embedding::Budget;
use crate::hypergraph::Transposed;

use super::oracle::immersion_oracle;
use super::{decide_immersion, Answer, DecideConfig, Decision, DecisionStats, EngineError, ImmersionWitness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DualWitness {
    /// Hyperedges of `A`, empty ones included, to hyperedges of `B`.
    pub edge_map: BTreeMap<String, String>,
    /// Vertices of `A` to the vertices of `B` they occupy.
    pub vertex_subgraphs: BTreeMap<String, Vec<String>>,
}

impl DualWitness {
    fn from_primal(a: &Transposed, w: &ImmersionWitness) -> Self {
        let mut vertex_subgraphs: BTreeMap<String, Vec<String>> = w
            .edge_subgraphs
            .iter()
            .map(|(e, s)| (e.clone(), s.edges.clone()))
            .collect();
        // Isolated vertices of A are empty hyperedges of the primal, which
        // the primal cannot carry.
        for v in a.hypergraph.vertices() {
            vertex_subgraphs.entry(v.clone()).or_default();
        }
        DualWitness {
            edge_map: w.vertex_map.clone(),
            vertex_subgraphs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualDecision {
    pub answer: Answer,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DualWitness>,
    pub stats: DecisionStats,
}

impl DualDecision {
    fn from_primal(a: &Transposed, d: Decision) -> Self {
        DualDecision {
            answer: d.answer,
            witness: d.witness.as_ref().map(|w| DualWitness::from_primal(a, w)),
            stats: d.stats,
        }
    }
}

/// Decides whether `a` dual-immerses in `b` by deciding primal immersion of
/// their transposes.
pub fn decide_dual_immersion(
    a: &Transposed,
    b: &Transposed,
    config: &DecideConfig,
) -> Result<DualDecision, EngineError> {
    let d = decide_immersion(&a.untranspose(), &b.untranspose(), config)?;
    Ok(DualDecision::from_primal(a, d))
}

pub fn dual_oracle(a: &Transposed, b: &Transposed, budget: Budget) -> DualDecision {
    let d = immersion_oracle(&a.untranspose(), &b.untranspose(), budget);
    DualDecision::from_primal(a, d)
}
