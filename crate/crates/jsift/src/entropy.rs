//! Obfuscation entropy scoring.
//!
//! Three components are combined into a single gate score:
//! lexical entropy over the distinct-lexeme distribution of the token
//! stream, mean log structural complexity over the AST, and the
//! branch-plus-loop to statement ratio. Natural logarithms throughout; the
//! gate threshold is therefore base-dependent and configurable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ast::{ast_stats, Ast};
use crate::lexer::{tokenize, LexError, Token, TokenKind};
use crate::parser::parse_tokens;
use crate::source::SourceFile;

/// Component weights and the deobfuscation gate threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScorerWeights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub threshold: f64,
    /// Exclude comment tokens from the lexical-entropy population.
    pub exclude_comments: bool,
}

impl Default for ScorerWeights {
    fn default() -> Self {
        ScorerWeights {
            alpha: 0.4,
            beta: 0.4,
            gamma: 0.2,
            threshold: 7.0,
            exclude_comments: true,
        }
    }
}

/// The three entropy components and their weighted sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyBreakdown {
    pub h_lex: f64,
    pub h_struct: f64,
    pub h_control: f64,
    pub s_obf: f64,
    /// Set when the file tokenized but did not parse; the structural and
    /// control components are zero in that case.
    pub parse_failed: bool,
}

/// Shannon entropy (nats) over the empirical distribution of distinct
/// token lexemes. Comment tokens are excluded when the weights say so.
pub fn lexical_entropy(tokens: &[Token], exclude_comments: bool) -> f64 {
    // BTreeMap: summation order must not depend on hash seeds, so the
    // score is bit-identical across runs
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut total = 0usize;
    for t in tokens {
        if exclude_comments && t.kind == TokenKind::Comment {
            continue;
        }
        *counts.entry(t.lexeme.as_str()).or_insert(0) += 1;
        total += 1;
    }
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let mut h = 0.0;
    for &c in counts.values() {
        let p = c as f64 / n;
        h -= p * p.ln();
    }
    h.max(0.0)
}

/// Mean log structural complexity: (1/|N|) Σ ln(depth(n) · (children(n)+1)).
///
/// The +1 keeps leaves finite; depth(root) = 1 keeps the root finite.
pub fn structural_entropy(ast: &Ast) -> f64 {
    let stats = ast_stats(ast);
    let n = stats.depths.len();
    if n == 0 {
        return 0.0;
    }
    let sum: f64 = stats
        .depths
        .iter()
        .zip(&stats.child_counts)
        .map(|(&d, &c)| ((d as f64) * (c as f64 + 1.0)).ln())
        .sum();
    sum / n as f64
}

/// (branches + loops) / statements, zero when there are no statements.
pub fn control_flow_score(ast: &Ast) -> f64 {
    let stats = ast_stats(ast);
    if stats.statement_count == 0 {
        return 0.0;
    }
    (stats.branch_count + stats.loop_count) as f64 / stats.statement_count as f64
}

/// Combine precomputed components with the configured weights.
pub fn combine(
    h_lex: f64,
    h_struct: f64,
    h_control: f64,
    parse_failed: bool,
    weights: &ScorerWeights,
) -> EntropyBreakdown {
    EntropyBreakdown {
        h_lex,
        h_struct,
        h_control,
        s_obf: weights.alpha * h_lex + weights.beta * h_struct + weights.gamma * h_control,
        parse_failed,
    }
}

/// Score a source file. Lex errors propagate; parse failures fall back to
/// zero structural/control components with `parse_failed` set.
pub fn obfuscation_score(
    source: &SourceFile,
    weights: &ScorerWeights,
) -> Result<EntropyBreakdown, LexError> {
    let tokens = tokenize(source)?;
    let h_lex = lexical_entropy(&tokens, weights.exclude_comments);
    match parse_tokens(&tokens, source.digest()) {
        Ok(ast) => Ok(combine(
            h_lex,
            structural_entropy(&ast),
            control_flow_score(&ast),
            false,
            weights,
        )),
        Err(_) => Ok(combine(h_lex, 0.0, 0.0, true, weights)),
    }
}

/// Deobfuscation gate: strictly greater than the threshold.
pub fn gate(breakdown: &EntropyBreakdown, weights: &ScorerWeights) -> bool {
    breakdown.s_obf > weights.threshold
}

/// One row of the entropy report CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScoreRow {
    pub path: String,
    pub h_lex: f64,
    pub h_struct: f64,
    pub h_control: f64,
    pub s_obf: f64,
    pub gated: bool,
    pub parse_failed: bool,
}

impl ScoreRow {
    pub fn new(path: String, b: &EntropyBreakdown, weights: &ScorerWeights) -> Self {
        ScoreRow {
            path,
            h_lex: b.h_lex,
            h_struct: b.h_struct,
            h_control: b.h_control,
            s_obf: b.s_obf,
            gated: gate(b, weights),
            parse_failed: b.parse_failed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{AstNode, NodeKind};
    use crate::lexer::tokenize_str;
    use crate::parser::parse_str;

    fn tok(lexeme: &str) -> Token {
        Token {
            kind: TokenKind::Identifier,
            lexeme: lexeme.to_string(),
            line: 1,
            column: 0,
            newline_before: false,
        }
    }

    #[test]
    fn lexical_entropy_uniform() {
        let tokens: Vec<Token> = ["a", "b", "c", "d"].iter().map(|s| tok(s)).collect();
        let h = lexical_entropy(&tokens, true);
        assert!((h - 4.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn lexical_entropy_degenerate() {
        let tokens: Vec<Token> = std::iter::repeat_with(|| tok("x")).take(10).collect();
        assert_eq!(lexical_entropy(&tokens, true), 0.0);
        assert_eq!(lexical_entropy(&[], true), 0.0);
    }

    #[test]
    fn lexical_entropy_two_symbols() {
        let tokens: Vec<Token> = ["a", "a", "b", "b"].iter().map(|s| tok(s)).collect();
        assert!((lexical_entropy(&tokens, true) - 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn lexical_entropy_permutation_invariant() {
        let a: Vec<Token> = ["x", "y", "x", "z", "z", "z"].iter().map(|s| tok(s)).collect();
        let b: Vec<Token> = ["z", "z", "x", "z", "y", "x"].iter().map(|s| tok(s)).collect();
        assert_eq!(lexical_entropy(&a, true), lexical_entropy(&b, true));
    }

    #[test]
    fn comments_excluded_by_default() {
        let tokens = tokenize_str("a // lots of unique comment text here\na").unwrap();
        assert_eq!(lexical_entropy(&tokens, true), 0.0);
        assert!(lexical_entropy(&tokens, false) > 0.0);
    }

    #[test]
    fn structural_entropy_single_node() {
        let ast = Ast::new(AstNode::new(NodeKind::Program, 1, 0), "d".into());
        assert_eq!(structural_entropy(&ast), 0.0);
    }

    #[test]
    fn structural_entropy_root_with_two_leaves() {
        let mut root = AstNode::new(NodeKind::Program, 1, 0);
        root.children.push(AstNode::new(NodeKind::EmptyStatement, 1, 0));
        root.children.push(AstNode::new(NodeKind::EmptyStatement, 1, 1));
        let ast = Ast::new(root, "d".into());
        let expected = (3.0f64.ln() + 2.0 * 2.0f64.ln()) / 3.0;
        assert!((structural_entropy(&ast) - expected).abs() < 1e-12);
        assert!((expected - 0.828302).abs() < 1e-6);
    }

    /// Independent traversal oracle: explicit stack walk accumulating
    /// ln(depth · (children + 1)) per node.
    fn structural_oracle(ast: &Ast) -> f64 {
        let mut stack = vec![(&ast.root, 1u32)];
        let mut sum = 0.0;
        let mut n = 0usize;
        while let Some((node, depth)) = stack.pop() {
            sum += ((depth as f64) * (node.children.len() as f64 + 1.0)).ln();
            n += 1;
            for c in &node.children {
                stack.push((c, depth + 1));
            }
        }
        sum / n as f64
    }

    #[test]
    fn structural_entropy_matches_oracle_on_perfect_binary_tree() {
        fn binary(depth: u32) -> AstNode {
            let mut n = AstNode::new(NodeKind::BlockStatement, depth, 0);
            if depth < 3 {
                n.children.push(binary(depth + 1));
                n.children.push(binary(depth + 1));
            }
            n
        }
        let ast = Ast::new(binary(1), "d".into());
        assert_eq!(ast.node_count, 7);
        assert!((structural_entropy(&ast) - structural_oracle(&ast)).abs() < 1e-12);
    }

    #[test]
    fn control_flow_ratio() {
        // 2 branches + 1 loop over 10 statements = 0.3
        let src = "a();b();c();d();if(x){}if(y){}while(z){}";
        // statements: 4 expr stmts + 2 if + 1 while + 3 blocks = 10
        let ast = parse_str(src).unwrap();
        let stats = ast_stats(&ast);
        assert_eq!(stats.branch_count, 2);
        assert_eq!(stats.loop_count, 1);
        assert_eq!(stats.statement_count, 10);
        assert!((control_flow_score(&ast) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn control_flow_zero_cases() {
        let ast = parse_str("a();b();c();d();e();").unwrap();
        assert_eq!(ast_stats(&ast).statement_count, 5);
        assert_eq!(control_flow_score(&ast), 0.0);
        // a Program with no statement-kind nodes at all
        let ast = Ast::new(AstNode::new(NodeKind::Program, 1, 0), "d".into());
        assert_eq!(control_flow_score(&ast), 0.0);
    }

    #[test]
    fn weighted_sum() {
        let w = ScorerWeights::default();
        let b = combine(5.0, 10.0, 2.0, false, &w);
        assert!((b.s_obf - 6.4).abs() < 1e-12);
        let z = combine(0.0, 0.0, 0.0, false, &w);
        assert_eq!(z.s_obf, 0.0);
    }

    #[test]
    fn gate_is_strict() {
        let w = ScorerWeights::default();
        for (s, expect) in [(6.4, false), (7.0, false), (7.01, true)] {
            let b = EntropyBreakdown {
                h_lex: 0.0,
                h_struct: 0.0,
                h_control: 0.0,
                s_obf: s,
                parse_failed: false,
            };
            assert_eq!(gate(&b, &w), expect, "s_obf = {s}");
        }
    }

    #[test]
    fn unparseable_file_flagged() {
        let sf = SourceFile::from_text("x.js", "var = 12");
        let b = obfuscation_score(&sf, &ScorerWeights::default()).unwrap();
        assert!(b.parse_failed);
        assert_eq!(b.h_struct, 0.0);
        assert_eq!(b.h_control, 0.0);
        assert!(b.h_lex > 0.0);
    }

    #[test]
    fn weight_monotonicity() {
        let base = ScorerWeights::default();
        let b = combine(1.0, 2.0, 3.0, false, &base);
        for bump in [
            ScorerWeights { alpha: base.alpha + 0.5, ..base.clone() },
            ScorerWeights { beta: base.beta + 0.5, ..base.clone() },
            ScorerWeights { gamma: base.gamma + 0.5, ..base.clone() },
        ] {
            let b2 = combine(1.0, 2.0, 3.0, false, &bump);
            assert!(b2.s_obf >= b.s_obf);
        }
    }
}
