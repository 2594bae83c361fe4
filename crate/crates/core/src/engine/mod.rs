//! Top-level decision procedures.
//!
//! The pipeline tests each member of the division set of `H` for a pinned
//! embedding in the M-generalised factor graph of `G` (or, in literal mode,
//! the densified pattern in the densified host). The oracle searches the
//! definition directly. Both produce verifiable witnesses.

mod dual;
mod oracle;
mod witness;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::divisions::{division_set, DivisionCaps, DivisionError, DivisionMode, DivisionPattern};
use crate::embedding::{find_embedding_indexed, Budget, EmbeddingOutcome, HostIndex, PinConstraint};
use crate::hypergraph::Hypergraph;
use crate::transforms::{
    default_params, densify, m_factor_graph, primary_vertex_nodes, LabeledGraph, Mode, Params, TransformError,
};

pub use dual::{decide_dual_immersion, dual_oracle, DualDecision, DualWitness};
pub use oracle::immersion_oracle;
pub use witness::{
    build_replay, extract_witness, replay_base, verify_immersion, EdgeSubgraph, ImmersionWitness,
    VerificationReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("projection of an embedding onto G failed: {0}")]
    ProjectionFailure(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pipeline,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecisionStats {
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub division_classes: Option<usize>,
    pub classes_tested: usize,
    pub expansions: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
    /// Index of the division member whose embedding gave the witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub succeeding_class: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl DecisionStats {
    pub fn new(method: Method) -> Self {
        DecisionStats {
            method,
            division_classes: None,
            classes_tested: 0,
            expansions: 0,
            params: None,
            succeeding_class: None,
            note: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub answer: Answer,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ImmersionWitness>,
    pub stats: DecisionStats,
}

impl Decision {
    pub fn no(stats: DecisionStats) -> Self {
        Decision {
            answer: Answer::No,
            witness: None,
            stats,
        }
    }

    pub fn unknown(stats: DecisionStats) -> Self {
        Decision {
            answer: Answer::Unknown,
            witness: None,
            stats,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideConfig {
    /// `None` uses [`default_params`].
    pub params: Option<Params>,
    /// Applies to each embedding search separately.
    pub budget: Budget,
    pub divisions: DivisionMode,
    pub caps: DivisionCaps,
    pub parallel: bool,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            params: None,
            budget: Budget::unlimited(),
            divisions: DivisionMode::Full,
            caps: DivisionCaps::default(),
            parallel: true,
        }
    }
}

/// The two necessary conditions checked before any search. Returns the
/// reason for a no.
pub fn preflight(h: &Hypergraph, g: &Hypergraph) -> Option<String> {
    if h.vertex_count() > g.vertex_count() {
        return Some(format!(
            "H has {} vertices but G only {}",
            h.vertex_count(),
            g.vertex_count()
        ));
    }
    let big = h.edges().iter().filter(|e| e.len() >= 2).count();
    if big > g.edge_count() {
        return Some(format!(
            "H has {big} hyperedges of size at least 2 but G only {} edges",
            g.edge_count()
        ));
    }
    None
}

/// Host graph for one `(G, params)` pair, reusable across members.
pub struct PreparedHost {
    pub params: Params,
    pub graph: LabeledGraph,
    index: HostIndex,
}

impl PreparedHost {
    pub fn new(g: &Hypergraph, params: Params) -> Result<Self, EngineError> {
        params.validate()?;
        let mut graph = m_factor_graph(g, params.m)?;
        if params.mode == Mode::LiteralDensify && g.vertex_count() > 0 {
            graph = densify(&graph, &primary_vertex_nodes(&graph), params.l)?;
        }
        let index = HostIndex::new(&graph);
        Ok(PreparedHost { params, graph, index })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MemberOutcome {
    Found(ImmersionWitness),
    NotFound,
    BudgetExhausted,
}

/// Tests one division member against a prepared host and projects any
/// embedding found onto `G`.
pub fn test_member(
    h: &Hypergraph,
    g: &Hypergraph,
    member: &DivisionPattern,
    host: &PreparedHost,
    budget: Budget,
) -> Result<(MemberOutcome, u64), EngineError> {
    let (pattern, pins) = match host.params.mode {
        Mode::Pin => (member.graph.clone(), PinConstraint::from_pattern(&member.graph)),
        Mode::LiteralDensify => {
            let terminals: Vec<usize> = (0..member.terminal_count()).collect();
            let p = if terminals.is_empty() {
                member.graph.clone()
            } else {
                densify(&member.graph, &terminals, host.params.l)?
            };
            let pins = PinConstraint::none(p.node_count());
            (p, pins)
        }
    };
    let r = find_embedding_indexed(&pattern, &host.index, &pins, budget);
    let outcome = match r.outcome {
        EmbeddingOutcome::Found(ew) => {
            MemberOutcome::Found(extract_witness(h, g, member, &host.graph, &ew)?)
        }
        EmbeddingOutcome::NotFound => MemberOutcome::NotFound,
        EmbeddingOutcome::BudgetExhausted => MemberOutcome::BudgetExhausted,
    };
    Ok((outcome, r.expansions))
}

/// Decides whether `H` immerses in `G` through the division-set reduction.
pub fn decide_immersion(h: &Hypergraph, g: &Hypergraph, config: &DecideConfig) -> Result<Decision, EngineError> {
    let params = config.params.unwrap_or_else(|| default_params(h, g));
    let mut stats = DecisionStats::new(Method::Pipeline);
    stats.params = Some(params);
    if let Some(reason) = preflight(h, g) {
        stats.note = Some(reason);
        return Ok(Decision::no(stats));
    }
    let set = division_set(h, &config.caps, config.divisions)?;
    stats.division_classes = Some(set.len());
    let host = PreparedHost::new(g, params)?;

    let results: Vec<Option<(Result<MemberOutcome, EngineError>, u64)>> = if config.parallel {
        let best = AtomicUsize::new(usize::MAX);
        let slots: Vec<Mutex<Option<(Result<MemberOutcome, EngineError>, u64)>>> =
            set.members.iter().map(|_| Mutex::new(None)).collect();
        set.members.par_iter().enumerate().for_each(|(i, m)| {
            if i > best.load(Ordering::Acquire) {
                return;
            }
            let (res, exp) = match test_member(h, g, m, &host, config.budget) {
                Ok((o, e)) => (Ok(o), e),
                Err(e) => (Err(e), 0),
            };
            if matches!(res, Ok(MemberOutcome::Found(_))) {
                best.fetch_min(i, Ordering::AcqRel);
            }
            *slots[i].lock().unwrap() = Some((res, exp));
        });
        slots.into_iter().map(|s| s.into_inner().unwrap()).collect()
    } else {
        let mut out = Vec::with_capacity(set.len());
        for m in &set.members {
            let (res, exp) = match test_member(h, g, m, &host, config.budget) {
                Ok((o, e)) => (Ok(o), e),
                Err(e) => (Err(e), 0),
            };
            let stop = matches!(res, Ok(MemberOutcome::Found(_)) | Err(_));
            out.push(Some((res, exp)));
            if stop {
                break;
            }
        }
        out
    };

    let mut exhausted = false;
    for (i, slot) in results.into_iter().enumerate() {
        let Some((res, exp)) = slot else { continue };
        stats.classes_tested += 1;
        stats.expansions += exp;
        match res? {
            MemberOutcome::Found(w) => {
                stats.succeeding_class = Some(i);
                return Ok(Decision {
                    answer: Answer::Yes,
                    witness: Some(w),
                    stats,
                });
            }
            MemberOutcome::NotFound => {}
            MemberOutcome::BudgetExhausted => exhausted = true,
        }
    }
    Ok(if exhausted {
        Decision::unknown(stats)
    } else {
        Decision::no(stats)
    })
}
