//! Malicious JavaScript detection pipeline.
//!
//! The crate chains five stages, each usable on its own:
//!
//! 1. [`lexer`] / [`parser`] / [`estree`] — tokenize and parse JavaScript
//!    source into a typed AST, or ingest externally produced ESTree JSON.
//! 2. [`entropy`] — score obfuscation (lexical, structural, control-flow
//!    entropy) and gate which samples are worth deobfuscating.
//! 3. [`deob`] — recover readable code from gated samples, either through a
//!    chat-completion LLM endpoint or a deterministic rule engine, with
//!    quality filtering and a content-addressed cache.
//! 4. [`graph`] / [`partition`] — convert ASTs into extended code graphs
//!    (syntax, data-flow, and control-flow edges), partition them into
//!    balanced clusters, and coarsen features/adjacency to cluster level.
//! 5. [`model`] / [`train`] — classify graphs with a cluster-wise graph
//!    transformer (node-to-cluster attention over partitioned ASTs) trained
//!    by Adam on the [`tensor`] autodiff engine, evaluated with ROC/AUC and
//!    TPR-at-fixed-FPR metrics.
//!
//! [`pipeline`] orchestrates the stages over file manifests; [`corpus`]
//! generates a seeded synthetic corpus for desk-scale experiments. The
//! `examples/` directory holds one runnable example per capability, and the
//! `jsift` binary exposes the same stages as subcommands.

pub mod ast;
// pub mod corpus;
// pub mod deob;
pub mod entropy;
pub mod estree;
// pub mod graph;
pub mod lexer;
// pub mod model;
pub mod parser;
// pub mod partition;
// pub mod pipeline;
pub mod printer;
pub mod source;
// pub mod sweep;
// pub mod tensor;
// pub mod train;

pub use ast::{Ast, AstNode, AstStats, NodeKind};
pub use entropy::{EntropyBreakdown, ScorerWeights};
// pub use graph::{CodeGraph, EdgeType, GraphRecord};
pub use lexer::{Token, TokenKind};
// pub use partition::{AssignmentMatrix, CoarseGraph, Partition};
pub use source::SourceFile;
