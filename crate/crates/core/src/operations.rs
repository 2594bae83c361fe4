//! The operation alphabet used by replay logs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError};

/// One elementary hypergraph operation, with arguments given by identifier.
///
/// Serialized as `{"op":"coalesce","args":["p1","p2"]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawStep", into = "RawStep")]
pub enum OperationStep {
    Coalesce(String, String),
    Dewet(String, String),
    Lift(String, String),
    VertexCoalesce(String, String),
    DeleteEdge(String),
    DeleteVertex(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    op: String,
    args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepParseError {
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("operation `{op}` takes {expected} argument(s), got {got}")]
    Arity {
        op: String,
        expected: usize,
        got: usize,
    },
}

impl TryFrom<RawStep> for OperationStep {
    type Error = StepParseError;

    fn try_from(raw: RawStep) -> Result<Self, Self::Error> {
        let expected = match raw.op.as_str() {
            "coalesce" | "dewet" | "lift" | "vertexCoalesce" => 2,
            "deleteEdge" | "deleteVertex" => 1,
            _ => return Err(StepParseError::UnknownOp(raw.op)),
        };
        if raw.args.len() != expected {
            return Err(StepParseError::Arity {
                op: raw.op,
                expected,
                got: raw.args.len(),
            });
        }
        let mut a = raw.args.into_iter();
        let mut next = || a.next().unwrap();
        Ok(match raw.op.as_str() {
            "coalesce" => OperationStep::Coalesce(next(), next()),
            "dewet" => OperationStep::Dewet(next(), next()),
            "lift" => OperationStep::Lift(next(), next()),
            "vertexCoalesce" => OperationStep::VertexCoalesce(next(), next()),
            "deleteEdge" => OperationStep::DeleteEdge(next()),
            _ => OperationStep::DeleteVertex(next()),
        })
    }
}

impl From<OperationStep> for RawStep {
    fn from(step: OperationStep) -> Self {
        let (op, args) = match step {
            OperationStep::Coalesce(a, b) => ("coalesce", vec![a, b]),
            OperationStep::Dewet(a, b) => ("dewet", vec![a, b]),
            OperationStep::Lift(a, b) => ("lift", vec![a, b]),
            OperationStep::VertexCoalesce(a, b) => ("vertexCoalesce", vec![a, b]),
            OperationStep::DeleteEdge(a) => ("deleteEdge", vec![a]),
            OperationStep::DeleteVertex(a) => ("deleteVertex", vec![a]),
        };
        RawStep {
            op: op.to_string(),
            args,
        }
    }
}

impl OperationStep {
    pub fn apply(&self, g: &Hypergraph) -> Result<Hypergraph, HypergraphError> {
        match self {
            OperationStep::Coalesce(a, b) => g.coalesce_edges(a, b),
            OperationStep::Dewet(e, v) => g.dewet(e, v),
            OperationStep::Lift(a, b) => g.lift(a, b),
            OperationStep::VertexCoalesce(u, v) => g.vertex_coalesce(u, v),
            OperationStep::DeleteEdge(e) => g.delete_edge(e),
            OperationStep::DeleteVertex(v) => g.delete_vertex(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {index} ({step:?}) failed: {source}")]
pub struct SequenceError {
    pub index: usize,
    pub step: OperationStep,
    #[source]
    pub source: HypergraphError,
}

/// Applies `steps` left to right.
pub fn apply_sequence(g0: &Hypergraph, steps: &[OperationStep]) -> Result<Hypergraph, SequenceError> {
    let mut g = g0.clone();
    for (index, step) in steps.iter().enumerate() {
        g = step.apply(&g).map_err(|source| SequenceError {
            index,
            step: step.clone(),
            source,
        })?;
    }
    Ok(g)
}
