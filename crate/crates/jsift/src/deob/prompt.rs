//! The deobfuscation prompt template.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PromptError {
    #[error("cannot render a prompt for empty code")]
    EmptyCode,
    #[error("template must contain the input slot exactly once (found {0})")]
    BadSlotCount(usize),
}

/// Instruction list, input slot, and output directives for the
/// deobfuscation request sent to the LLM.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub task: String,
    /// Six ordered directives.
    pub instructions: Vec<String>,
    /// Placeholder replaced by the obfuscated code.
    pub input_slot: String,
    /// Three requirements on the explanatory output.
    pub output_directives: Vec<String>,
}

impl Default for PromptTemplate {
    fn default() -> Self {
        PromptTemplate {
            task: "Analyze the following obfuscated JavaScript code and provide a clean, \
                   readable version while preserving exact functionality."
                .to_string(),
            instructions: vec![
                "Decode all string obfuscations (hex, base64, unicode escapes)".to_string(),
                "Replace meaningless variable names with descriptive ones".to_string(),
                "Unpack compressed/encoded payloads (e.g., eval expressions)".to_string(),
                "Simplify control flow (remove dead code, flatten conditionals)".to_string(),
                "Reconstruct function calls from dynamic invocations".to_string(),
                "Preserve original logic and behavior exactly".to_string(),
            ],
            input_slot: "{obfuscated_code}".to_string(),
            output_directives: vec![
                "The original obfuscation techniques detected".to_string(),
                "The deobfuscation steps applied".to_string(),
                "The restored functionality and control flow".to_string(),
            ],
        }
    }
}

impl PromptTemplate {
    /// Assemble the full prompt text with the input slot still in place.
    fn body(&self) -> String {
        let mut out = String::new();
        out.push_str("Task Description:\n");
        out.push_str(&self.task);
        out.push_str("\n\nInstructions:\n");
        for (i, instruction) in self.instructions.iter().enumerate() {
            out.push_str(&format!("{}. {}\n", i + 1, instruction));
        }
        out.push_str("\nInput: Obfuscated Code\n");
        out.push_str(&self.input_slot);
        out.push_str("\n\nExpected Output:\n");
        out.push_str("Provide the deobfuscated version with explanatory comments that describe:\n");
        for directive in &self.output_directives {
            out.push_str(&format!("- {}\n", directive));
        }
        out
    }
}

/// Render the prompt for a code sample, substituting the input slot
/// exactly once.
pub fn render_prompt(code: &str, template: &PromptTemplate) -> Result<String, PromptError> {
    if code.is_empty() {
        return Err(PromptError::EmptyCode);
    }
    let body = template.body();
    let slots = body.matches(&template.input_slot).count();
    if slots != 1 {
        return Err(PromptError::BadSlotCount(slots));
    }
    Ok(body.replacen(&template.input_slot, code, 1))
}
