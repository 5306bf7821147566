//! Deobfuscation of gated samples.
//!
//! Two engines produce readable code from obfuscated input: an external
//! chat-completion LLM endpoint ([`llm`]) and a deterministic rule engine
//! ([`rules`]) that works offline. Candidate outputs pass through a quality
//! filter ([`quality`]) before they replace the original. [`batch`] wires
//! the engines to the entropy gate and a content-addressed cache.

pub mod batch;
pub mod llm;
pub mod prompt;
pub mod quality;
pub mod rules;

use serde::{Deserialize, Serialize};

pub use batch::{batch_deobfuscate, BatchInput, BatchOptions, BatchOutcome, BatchReport, DeobMode};
pub use llm::{deobfuscate_llm, LlmClientConfig};
pub use prompt::{render_prompt, PromptTemplate};
pub use quality::{fingerprint, quality_filter, quality_filter_with, QualityVerdict};
pub use rules::deobfuscate_rules;

/// Which engine produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Llm,
    Rules,
    /// Input returned unchanged (nothing to do, or every transform rolled back).
    Passthrough,
}

/// Outcome of deobfuscating one sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeobResult {
    /// SHA-256 of the original source text.
    pub original_digest: String,
    /// Deobfuscated code (non-empty whenever the verdict is accepted).
    pub code: String,
    /// Free-text explanation: LLM commentary, or a rule-engine change list.
    pub explanation: String,
    pub engine: Engine,
    pub verdict: QualityVerdict,
}
