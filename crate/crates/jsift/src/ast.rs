//! Typed syntax tree and per-tree statistics.
//!
//! Node kinds follow ESTree naming. The vocabulary below is versioned and
//! published: graph records store kind indices, so the list order is part of
//! the on-disk contract and may only be appended to.

use serde::{Deserialize, Serialize};

/// Version of the node-kind vocabulary. Bump when [`NodeKind::ALL`] changes.
pub const NODE_KIND_VOCAB_VERSION: u32 = 1;

macro_rules! node_kinds {
    ($($variant:ident),+ $(,)?) => {
        /// Node-kind tag. ESTree-style names plus `Unknown` for ingested
        /// node types outside the published vocabulary.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum NodeKind {
            $($variant),+
        }

        impl NodeKind {
            /// The published vocabulary, in index order.
            pub const ALL: &'static [NodeKind] = &[$(NodeKind::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $(NodeKind::$variant => stringify!($variant)),+
                }
            }

            pub fn from_name(name: &str) -> Option<NodeKind> {
                match name {
                    $(stringify!($variant) => Some(NodeKind::$variant),)+
                    _ => None,
                }
            }
        }
    };
}

node_kinds![
    Program,
    // statements and declarations
    ExpressionStatement,
    BlockStatement,
    EmptyStatement,
    DebuggerStatement,
    ReturnStatement,
    BreakStatement,
    ContinueStatement,
    IfStatement,
    SwitchStatement,
    SwitchCase,
    WhileStatement,
    DoWhileStatement,
    ForStatement,
    ForInStatement,
    ForOfStatement,
    ThrowStatement,
    TryStatement,
    CatchClause,
    LabeledStatement,
    WithStatement,
    VariableDeclaration,
    VariableDeclarator,
    FunctionDeclaration,
    // expressions
    Identifier,
    StringLiteral,
    NumericLiteral,
    BooleanLiteral,
    NullLiteral,
    RegexLiteral,
    TemplateLiteral,
    ThisExpression,
    ArrayExpression,
    ObjectExpression,
    Property,
    FunctionExpression,
    ArrowFunctionExpression,
    UnaryExpression,
    UpdateExpression,
    BinaryExpression,
    LogicalExpression,
    AssignmentExpression,
    ConditionalExpression,
    CallExpression,
    NewExpression,
    MemberExpression,
    SequenceExpression,
    SpreadElement,
    // fallback for ingested node types outside the vocabulary
    Unknown,
];

impl NodeKind {
    /// Index into [`NodeKind::ALL`]; the kind id stored in graph records.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<NodeKind> {
        NodeKind::ALL.get(index).copied()
    }

    /// Branching constructs: `IfStatement`, `SwitchCase`, `ConditionalExpression`.
    pub fn is_branch(self) -> bool {
        matches!(
            self,
            NodeKind::IfStatement | NodeKind::SwitchCase | NodeKind::ConditionalExpression
        )
    }

    /// Loop constructs: for / for-in / for-of / while / do-while.
    pub fn is_loop(self) -> bool {
        matches!(
            self,
            NodeKind::ForStatement
                | NodeKind::ForInStatement
                | NodeKind::ForOfStatement
                | NodeKind::WhileStatement
                | NodeKind::DoWhileStatement
        )
    }

    /// Statement for counting purposes: any kind name ending in
    /// "Statement" or "Declaration".
    pub fn is_statement(self) -> bool {
        let n = self.name();
        n.ends_with("Statement") || n.ends_with("Declaration")
    }
}

/// A single AST node: kind tag, optional literal/identifier text, start
/// position, and children in source order.
#[derive(Debug, Clone, PartialEq)]
pub struct AstNode {
    pub kind: NodeKind,
    pub value: Option<String>,
    pub line: u32,
    pub column: u32,
    pub children: Vec<AstNode>,
}

impl AstNode {
    pub fn new(kind: NodeKind, line: u32, column: u32) -> Self {
        AstNode {
            kind,
            value: None,
            line,
            column,
            children: Vec::new(),
        }
    }

    pub fn with_value(kind: NodeKind, value: impl Into<String>, line: u32, column: u32) -> Self {
        AstNode {
            kind,
            value: Some(value.into()),
            line,
            column,
            children: Vec::new(),
        }
    }

    pub fn count(&self) -> usize {
        1 + self.children.iter().map(AstNode::count).sum::<usize>()
    }

    /// Structural equality on (kind, value, children), ignoring positions.
    pub fn structurally_eq(&self, other: &AstNode) -> bool {
        self.kind == other.kind
            && self.value == other.value
            && self.children.len() == other.children.len()
            && self
                .children
                .iter()
                .zip(&other.children)
                .all(|(a, b)| a.structurally_eq(b))
    }

    /// Preorder traversal, children in source order. This is the node
    /// numbering used everywhere downstream.
    pub fn preorder(&self) -> Vec<&AstNode> {
        let mut out = Vec::with_capacity(16);
        fn walk<'a>(n: &'a AstNode, out: &mut Vec<&'a AstNode>) {
            out.push(n);
            for c in &n.children {
                walk(c, out);
            }
        }
        walk(self, &mut out);
        out
    }
}

/// A parsed tree plus bookkeeping.
#[derive(Debug, Clone)]
pub struct Ast {
    pub root: AstNode,
    pub node_count: usize,
    /// SHA-256 of the source text the tree came from, lowercase hex.
    pub source_digest: String,
}

impl Ast {
    pub fn new(root: AstNode, source_digest: String) -> Self {
        let node_count = root.count();
        Ast {
            root,
            node_count,
            source_digest,
        }
    }
}

/// Per-node depth/child counts plus the three control-structure tallies.
/// Vectors are indexed by preorder position; `depths[0]` is the root with
/// depth 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstStats {
    pub depths: Vec<u32>,
    pub child_counts: Vec<u32>,
    pub branch_count: usize,
    pub loop_count: usize,
    pub statement_count: usize,
}

/// Single-traversal statistics over the tree.
pub fn ast_stats(ast: &Ast) -> AstStats {
    let mut stats = AstStats {
        depths: Vec::with_capacity(ast.node_count),
        child_counts: Vec::with_capacity(ast.node_count),
        branch_count: 0,
        loop_count: 0,
        statement_count: 0,
    };
    fn walk(node: &AstNode, depth: u32, stats: &mut AstStats) {
        stats.depths.push(depth);
        stats.child_counts.push(node.children.len() as u32);
        if node.kind.is_branch() {
            stats.branch_count += 1;
        }
        if node.kind.is_loop() {
            stats.loop_count += 1;
        }
        if node.kind.is_statement() {
            stats.statement_count += 1;
        }
        for c in &node.children {
            walk(c, depth + 1, stats);
        }
    }
    walk(&ast.root, 1, &mut stats);
    stats
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vocabulary_round_trips() {
        for (i, k) in NodeKind::ALL.iter().enumerate() {
            assert_eq!(k.index(), i);
            assert_eq!(NodeKind::from_index(i), Some(*k));
            assert_eq!(NodeKind::from_name(k.name()), Some(*k));
        }
        assert_eq!(NodeKind::from_name("FrobNode"), None);
    }

    #[test]
    fn single_node_stats() {
        let ast = Ast::new(AstNode::new(NodeKind::Program, 1, 0), "d".into());
        let s = ast_stats(&ast);
        assert_eq!(s.depths, vec![1]);
        assert_eq!(s.child_counts, vec![0]);
        assert_eq!(s.branch_count, 0);
        assert_eq!(s.loop_count, 0);
        assert_eq!(s.statement_count, 0);
    }

    #[test]
    fn children_sum_is_node_count_minus_one() {
        let mut root = AstNode::new(NodeKind::Program, 1, 0);
        let mut blk = AstNode::new(NodeKind::BlockStatement, 1, 0);
        blk.children.push(AstNode::new(NodeKind::EmptyStatement, 1, 1));
        root.children.push(blk);
        root.children.push(AstNode::new(NodeKind::EmptyStatement, 2, 0));
        let ast = Ast::new(root, "d".into());
        let s = ast_stats(&ast);
        let total: u32 = s.child_counts.iter().sum();
        assert_eq!(total as usize, ast.node_count - 1);
    }
}
