//! ESTree JSON interchange: ingest externally parsed ASTs, export ours.
//!
//! Ingestion accepts two dialects:
//!
//! - the canonical form written by [`export_estree`]: `{"type", "value"?,
//!   "loc", "children"}` — this round-trips exactly, and
//! - foreign ESTree documents (Esprima and friends): node types are mapped
//!   onto the published vocabulary, ESTree side fields (`operator`,
//!   `computed`, `name`, ...) are folded into the `value` slot, and child
//!   nodes are collected from all object/array fields, ordered by source
//!   position when locations are present. Node types outside the vocabulary
//!   map to `Unknown` with children preserved, so ingestion stays total
//!   over evolving external parsers.

use serde_json::{Map, Value};
use thiserror::Error;

use crate::ast::{Ast, AstNode, NodeKind};
use crate::source::content_digest;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("root of an AST document must be a JSON object")]
    NonObjectRoot,
    #[error("node object is missing the \"type\" field")]
    MissingType,
}

/// Parse an ESTree-compatible JSON document into an [`Ast`].
pub fn ingest_estree(json_bytes: &[u8]) -> Result<Ast, FormatError> {
    let value: Value = serde_json::from_slice(json_bytes)?;
    let obj = value.as_object().ok_or(FormatError::NonObjectRoot)?;
    if !obj.contains_key("type") {
        return Err(FormatError::MissingType);
    }
    let root = ingest_node(obj)?;
    let digest = content_digest(&String::from_utf8_lossy(json_bytes));
    Ok(Ast::new(root, digest))
}

/// Serialize an [`Ast`] in the canonical interchange form.
pub fn export_estree(ast: &Ast) -> Value {
    export_node(&ast.root)
}

/// Canonical form as pretty-printed bytes, one document per file.
pub fn export_estree_bytes(ast: &Ast) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(&export_estree(ast)).expect("AST serializes");
    bytes.push(b'\n');
    bytes
}

fn export_node(node: &AstNode) -> Value {
    let mut obj = Map::new();
    obj.insert("type".into(), Value::String(node.kind.name().to_string()));
    if let Some(v) = &node.value {
        obj.insert("value".into(), Value::String(v.clone()));
    }
    obj.insert(
        "loc".into(),
        serde_json::json!({"start": {"line": node.line, "column": node.column}}),
    );
    obj.insert(
        "children".into(),
        Value::Array(node.children.iter().map(export_node).collect()),
    );
    Value::Object(obj)
}

fn ingest_node(obj: &Map<String, Value>) -> Result<AstNode, FormatError> {
    let type_name = obj
        .get("type")
        .and_then(Value::as_str)
        .ok_or(FormatError::MissingType)?;
    let (line, column) = location_of(obj);

    // canonical form: children live under a "children" array
    if let Some(Value::Array(children)) = obj.get("children") {
        let kind = NodeKind::from_name(type_name).unwrap_or(NodeKind::Unknown);
        let mut node = AstNode::new(kind, line, column);
        if kind == NodeKind::Unknown {
            node.value = Some(type_name.to_string());
        } else if let Some(Value::String(v)) = obj.get("value") {
            node.value = Some(v.clone());
        }
        for child in children {
            if let Some(child_obj) = child.as_object() {
                node.children.push(ingest_node(child_obj)?);
            }
        }
        return Ok(node);
    }

    let (kind, value) = classify_foreign(type_name, obj);
    let mut node = AstNode::new(kind, line, column);
    node.value = value;

    let mut children: Vec<AstNode> = Vec::new();
    for (field, field_value) in obj {
        if matches!(
            field.as_str(),
            "type" | "loc" | "range" | "start" | "end" | "regex" | "extra" | "leadingComments"
                | "trailingComments" | "comments" | "tokens"
        ) {
            continue;
        }
        match field_value {
            Value::Object(child) if child.contains_key("type") => {
                children.push(ingest_node(child)?);
            }
            Value::Array(items) => {
                for item in items {
                    if let Some(child) = item.as_object() {
                        if child.contains_key("type") {
                            children.push(ingest_node(child)?);
                        }
                    }
                }
            }
            _ => {}
        }
    }
    // restore source order when every child carries a location
    if children.iter().all(|c| c.line > 0) {
        children.sort_by_key(|c| (c.line, c.column));
    }
    node.children = children;
    Ok(node)
}

fn location_of(obj: &Map<String, Value>) -> (u32, u32) {
    let start = obj.get("loc").and_then(|l| l.get("start"));
    let line = start
        .and_then(|s| s.get("line"))
        .and_then(Value::as_u64)
        .unwrap_or(0) as u32;
    let column = start
        .and_then(|s| s.get("column"))
        .and_then(Value::as_u64)
        .unwrap_or(0) as u32;
    (line, column)
}

/// Map a foreign ESTree node type plus its side fields onto our
/// (kind, value) convention.
fn classify_foreign(type_name: &str, obj: &Map<String, Value>) -> (NodeKind, Option<String>) {
    let str_field = |name: &str| obj.get(name).and_then(Value::as_str).map(String::from);
    let bool_field = |name: &str| obj.get(name).and_then(Value::as_bool).unwrap_or(false);

    match type_name {
        "Literal" => {
            if obj.get("regex").is_some_and(|r| r.is_object()) {
                let raw = str_field("raw").unwrap_or_else(|| {
                    let pattern = obj
                        .get("regex")
                        .and_then(|r| r.get("pattern"))
                        .and_then(Value::as_str)
                        .unwrap_or("");
                    let flags = obj
                        .get("regex")
                        .and_then(|r| r.get("flags"))
                        .and_then(Value::as_str)
                        .unwrap_or("");
                    format!("/{pattern}/{flags}")
                });
                return (NodeKind::RegexLiteral, Some(raw));
            }
            match obj.get("value") {
                Some(Value::String(s)) => (NodeKind::StringLiteral, Some(s.clone())),
                Some(Value::Number(n)) => {
                    let raw = str_field("raw").unwrap_or_else(|| n.to_string());
                    (NodeKind::NumericLiteral, Some(raw))
                }
                Some(Value::Bool(b)) => (NodeKind::BooleanLiteral, Some(b.to_string())),
                _ => (NodeKind::NullLiteral, None),
            }
        }
        "StringLiteral" => (NodeKind::StringLiteral, str_field("value")),
        "NumericLiteral" => (
            NodeKind::NumericLiteral,
            str_field("raw").or_else(|| obj.get("value").map(|v| v.to_string())),
        ),
        "BooleanLiteral" => (
            NodeKind::BooleanLiteral,
            obj.get("value").map(|v| v.to_string()),
        ),
        "NullLiteral" => (NodeKind::NullLiteral, None),
        "RegExpLiteral" => (NodeKind::RegexLiteral, str_field("raw")),
        "Identifier" => (NodeKind::Identifier, str_field("name")),
        "VariableDeclaration" => (NodeKind::VariableDeclaration, str_field("kind")),
        "BinaryExpression" => (NodeKind::BinaryExpression, str_field("operator")),
        "LogicalExpression" => (NodeKind::LogicalExpression, str_field("operator")),
        "AssignmentExpression" => (NodeKind::AssignmentExpression, str_field("operator")),
        "UnaryExpression" => (NodeKind::UnaryExpression, str_field("operator")),
        "UpdateExpression" => {
            let op = str_field("operator").unwrap_or_else(|| "++".into());
            let side = if bool_field("prefix") { "prefix" } else { "postfix" };
            (NodeKind::UpdateExpression, Some(format!("{side}{op}")))
        }
        "MemberExpression" => {
            let v = bool_field("computed").then(|| "computed".to_string());
            (NodeKind::MemberExpression, v)
        }
        "Property" => {
            let v = if bool_field("computed") {
                Some("computed".to_string())
            } else if bool_field("shorthand") {
                Some("shorthand".to_string())
            } else {
                match str_field("kind").as_deref() {
                    Some("get") => Some("get".to_string()),
                    Some("set") => Some("set".to_string()),
                    _ => None,
                }
            };
            (NodeKind::Property, v)
        }
        "FunctionDeclaration" | "FunctionExpression" | "ArrowFunctionExpression" => {
            let kind = NodeKind::from_name(type_name).unwrap();
            let name = obj
                .get("id")
                .and_then(Value::as_object)
                .and_then(|id| id.get("name"))
                .and_then(Value::as_str)
                .map(String::from);
            (kind, name)
        }
        "ForStatement" => {
            let mut mask = String::new();
            for (field, flag) in [("init", 'i'), ("test", 't'), ("update", 'u')] {
                if obj.get(field).is_some_and(|v| !v.is_null()) {
                    mask.push(flag);
                }
            }
            (NodeKind::ForStatement, Some(mask))
        }
        "SwitchCase" => {
            let v = obj
                .get("test")
                .is_none_or(Value::is_null)
                .then(|| "default".to_string());
            (NodeKind::SwitchCase, v)
        }
        "TemplateLiteral" => (NodeKind::TemplateLiteral, None),
        other => match NodeKind::from_name(other) {
            Some(kind) => (kind, None),
            None => (NodeKind::Unknown, Some(other.to_string())),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_str;

    #[test]
    fn minimal_program() {
        let ast = ingest_estree(br#"{"type":"Program","body":[]}"#).unwrap();
        assert_eq!(ast.root.kind, NodeKind::Program);
        assert_eq!(ast.node_count, 1);
    }

    #[test]
    fn unknown_kind_preserves_children() {
        let ast = ingest_estree(
            br#"{"type":"FrobNode","body":[{"type":"Identifier","name":"x"}]}"#,
        )
        .unwrap();
        assert_eq!(ast.root.kind, NodeKind::Unknown);
        assert_eq!(ast.root.value.as_deref(), Some("FrobNode"));
        assert_eq!(ast.root.children.len(), 1);
        assert_eq!(ast.root.children[0].value.as_deref(), Some("x"));
    }

    #[test]
    fn non_object_root_is_format_error() {
        assert!(matches!(
            ingest_estree(b"[1,2,3]"),
            Err(FormatError::NonObjectRoot)
        ));
        assert!(matches!(
            ingest_estree(br#"{"body":[]}"#),
            Err(FormatError::MissingType)
        ));
        assert!(matches!(ingest_estree(b"{nope"), Err(FormatError::Json(_))));
    }

    #[test]
    fn export_ingest_identity() {
        let srcs = [
            "var a = 1; function f(x) { return x + a; }",
            "for (var i = 0; i < 3; i++) { o[\"k\" + i] = i ? 1 : 2; }",
            "try { f(); } catch (e) { g(e); }",
        ];
        for src in srcs {
            let ast = parse_str(src).unwrap();
            let bytes = export_estree_bytes(&ast);
            let back = ingest_estree(&bytes).unwrap();
            assert!(
                ast.root.structurally_eq(&back.root),
                "identity failed for {src:?}"
            );
        }
    }

    #[test]
    fn foreign_esprima_shape() {
        // Esprima-style document with ESTree side fields and locations
        let doc = br#"{
            "type": "Program",
            "body": [{
                "type": "ExpressionStatement",
                "loc": {"start": {"line": 1, "column": 0}},
                "expression": {
                    "type": "BinaryExpression",
                    "operator": "+",
                    "loc": {"start": {"line": 1, "column": 0}},
                    "left": {"type": "Literal", "value": 1, "raw": "1",
                             "loc": {"start": {"line": 1, "column": 0}}},
                    "right": {"type": "Literal", "value": "x",
                              "loc": {"start": {"line": 1, "column": 4}}}
                }
            }],
            "sourceType": "script"
        }"#;
        let ast = ingest_estree(doc).unwrap();
        let expr = &ast.root.children[0].children[0];
        assert_eq!(expr.kind, NodeKind::BinaryExpression);
        assert_eq!(expr.value.as_deref(), Some("+"));
        assert_eq!(expr.children[0].kind, NodeKind::NumericLiteral);
        assert_eq!(expr.children[0].value.as_deref(), Some("1"));
        assert_eq!(expr.children[1].kind, NodeKind::StringLiteral);
        assert_eq!(expr.children[1].value.as_deref(), Some("x"));
    }
}
