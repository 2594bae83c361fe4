//! Deciding hypergraph immersion through divisions, M-generalised factor
//! graphs and pinned embeddings, with brute-force oracles and verifiers.

pub mod canon;
pub mod corpus;
pub mod divisions;
pub mod embedding;
pub mod engine;
pub mod hypergraph;
pub mod iso;
pub mod operations;
pub mod transforms;

pub use hypergraph::{Edge, Hypergraph, HypergraphError, Transposed};
pub use operations::{apply_sequence, OperationStep};
