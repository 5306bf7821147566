//! Code printer: renders an [`AstNode`] tree back to JavaScript source.
//!
//! Output is precedence-parenthesized so that re-parsing yields a
//! structurally identical tree. The rule deobfuscator uses this to
//! materialize rewritten code; the parser round-trip tests use it as the
//! `print` half of `parse ∘ print ∘ parse = parse`.

use crate::ast::{AstNode, NodeKind};

/// Render a full program.
pub fn print_program(root: &AstNode) -> String {
    let mut out = String::new();
    match root.kind {
        NodeKind::Program => {
            for child in &root.children {
                print_statement(child, 0, &mut out);
            }
        }
        _ => print_statement(root, 0, &mut out),
    }
    out
}

/// Render a single expression (used in tests and diagnostics).
pub fn print_expression(node: &AstNode) -> String {
    let mut out = String::new();
    print_expr(node, 1, &mut out);
    out
}

fn indent(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn print_statement(node: &AstNode, level: usize, out: &mut String) {
    indent(level, out);
    print_statement_inline(node, level, out);
    out.push('\n');
}

/// Statement text without the leading indent or trailing newline.
fn print_statement_inline(node: &AstNode, level: usize, out: &mut String) {
    match node.kind {
        NodeKind::ExpressionStatement => {
            let expr = &node.children[0];
            // `{` and `function` would be misread at statement head
            if starts_ambiguously(expr) {
                out.push('(');
                print_expr(expr, 1, out);
                out.push(')');
            } else {
                print_expr(expr, 1, out);
            }
            out.push(';');
        }
        NodeKind::BlockStatement => print_block(node, level, out),
        NodeKind::EmptyStatement => out.push(';'),
        NodeKind::DebuggerStatement => out.push_str("debugger;"),
        NodeKind::VariableDeclaration => {
            print_variable_declaration(node, out);
            out.push(';');
        }
        NodeKind::FunctionDeclaration => print_function(node, "function", level, out),
        NodeKind::ReturnStatement => {
            out.push_str("return");
            if let Some(arg) = node.children.first() {
                out.push(' ');
                print_expr(arg, 1, out);
            }
            out.push(';');
        }
        NodeKind::BreakStatement | NodeKind::ContinueStatement => {
            out.push_str(if node.kind == NodeKind::BreakStatement {
                "break"
            } else {
                "continue"
            });
            if let Some(label) = node.children.first() {
                out.push(' ');
                out.push_str(label.value.as_deref().unwrap_or(""));
            }
            out.push(';');
        }
        NodeKind::ThrowStatement => {
            out.push_str("throw ");
            print_expr(&node.children[0], 1, out);
            out.push(';');
        }
        NodeKind::IfStatement => {
            out.push_str("if (");
            print_expr(&node.children[0], 1, out);
            out.push_str(") ");
            let has_else = node.children.len() > 2;
            let consequent = &node.children[1];
            if has_else && ends_with_open_if(consequent) {
                // dangling else: force braces so the else stays with us
                out.push_str("{ ");
                print_statement_inline(consequent, level, out);
                out.push_str(" }");
            } else {
                print_statement_inline(consequent, level, out);
            }
            if has_else {
                out.push_str(" else ");
                print_statement_inline(&node.children[2], level, out);
            }
        }
        NodeKind::WhileStatement => {
            out.push_str("while (");
            print_expr(&node.children[0], 1, out);
            out.push_str(") ");
            print_statement_inline(&node.children[1], level, out);
        }
        NodeKind::DoWhileStatement => {
            out.push_str("do ");
            print_statement_inline(&node.children[0], level, out);
            out.push_str(" while (");
            print_expr(&node.children[1], 1, out);
            out.push_str(");");
        }
        NodeKind::ForStatement => {
            let mask = node.value.as_deref().unwrap_or("");
            let mut idx = 0;
            out.push_str("for (");
            if mask.contains('i') {
                let init = &node.children[idx];
                if init.kind == NodeKind::VariableDeclaration {
                    print_variable_declaration(init, out);
                } else {
                    print_expr(init, 1, out);
                }
                idx += 1;
            }
            out.push_str("; ");
            if mask.contains('t') {
                print_expr(&node.children[idx], 1, out);
                idx += 1;
            }
            out.push_str("; ");
            if mask.contains('u') {
                print_expr(&node.children[idx], 1, out);
                idx += 1;
            }
            out.push_str(") ");
            print_statement_inline(&node.children[idx], level, out);
        }
        NodeKind::ForInStatement | NodeKind::ForOfStatement => {
            out.push_str("for (");
            let left = &node.children[0];
            if left.kind == NodeKind::VariableDeclaration {
                print_variable_declaration(left, out);
            } else {
                print_expr(left, 17, out);
            }
            out.push_str(if node.kind == NodeKind::ForInStatement {
                " in "
            } else {
                " of "
            });
            print_expr(&node.children[1], 1, out);
            out.push_str(") ");
            print_statement_inline(&node.children[2], level, out);
        }
        NodeKind::SwitchStatement => {
            out.push_str("switch (");
            print_expr(&node.children[0], 1, out);
            out.push_str(") {\n");
            for case in &node.children[1..] {
                indent(level + 1, out);
                if case.value.as_deref() == Some("default") {
                    out.push_str("default:\n");
                    for stmt in &case.children {
                        print_statement(stmt, level + 2, out);
                    }
                } else {
                    out.push_str("case ");
                    print_expr(&case.children[0], 1, out);
                    out.push_str(":\n");
                    for stmt in &case.children[1..] {
                        print_statement(stmt, level + 2, out);
                    }
                }
            }
            indent(level, out);
            out.push('}');
        }
        NodeKind::TryStatement => {
            out.push_str("try ");
            print_block(&node.children[0], level, out);
            for extra in &node.children[1..] {
                if extra.kind == NodeKind::CatchClause {
                    out.push_str(" catch (");
                    out.push_str(extra.children[0].value.as_deref().unwrap_or(""));
                    out.push_str(") ");
                    print_block(&extra.children[1], level, out);
                } else {
                    out.push_str(" finally ");
                    print_block(extra, level, out);
                }
            }
        }
        NodeKind::LabeledStatement => {
            out.push_str(node.children[0].value.as_deref().unwrap_or(""));
            out.push_str(": ");
            print_statement_inline(&node.children[1], level, out);
        }
        NodeKind::WithStatement => {
            out.push_str("with (");
            print_expr(&node.children[0], 1, out);
            out.push_str(") ");
            print_statement_inline(&node.children[1], level, out);
        }
        other => {
            // tolerate expression nodes in statement position (ingested trees)
            let _ = other;
            print_expr(node, 1, out);
            out.push(';');
        }
    }
}

fn print_block(node: &AstNode, level: usize, out: &mut String) {
    if node.children.is_empty() {
        out.push_str("{}");
        return;
    }
    out.push_str("{\n");
    for stmt in &node.children {
        print_statement(stmt, level + 1, out);
    }
    indent(level, out);
    out.push('}');
}

fn print_variable_declaration(node: &AstNode, out: &mut String) {
    out.push_str(node.value.as_deref().unwrap_or("var"));
    out.push(' ');
    for (i, declarator) in node.children.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(declarator.children[0].value.as_deref().unwrap_or(""));
        if let Some(init) = declarator.children.get(1) {
            out.push_str(" = ");
            print_expr(init, 2, out);
        }
    }
}

fn print_function(node: &AstNode, keyword: &str, level: usize, out: &mut String) {
    out.push_str(keyword);
    let named = node.value.is_some();
    let mut params_from = 0;
    if named {
        out.push(' ');
        out.push_str(node.value.as_deref().unwrap());
        params_from = 1;
    }
    out.push('(');
    let body_idx = node.children.len() - 1;
    for (i, param) in node.children[params_from..body_idx].iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(param.value.as_deref().unwrap_or(""));
    }
    out.push_str(") ");
    print_block(&node.children[body_idx], level, out);
}

/// Expression precedence; higher binds tighter.
fn precedence(node: &AstNode) -> u8 {
    match node.kind {
        NodeKind::SequenceExpression => 1,
        NodeKind::AssignmentExpression | NodeKind::ArrowFunctionExpression => 2,
        NodeKind::ConditionalExpression => 3,
        NodeKind::LogicalExpression => match node.value.as_deref() {
            Some("||") => 4,
            _ => 5,
        },
        NodeKind::BinaryExpression => match node.value.as_deref().unwrap_or("") {
            "|" => 6,
            "^" => 7,
            "&" => 8,
            "==" | "!=" | "===" | "!==" => 9,
            "<" | ">" | "<=" | ">=" | "in" | "instanceof" => 10,
            "<<" | ">>" | ">>>" => 11,
            "+" | "-" => 12,
            "*" | "/" | "%" => 13,
            "**" => 14,
            _ => 12,
        },
        NodeKind::UnaryExpression => 15,
        NodeKind::UpdateExpression => 16,
        NodeKind::CallExpression | NodeKind::MemberExpression | NodeKind::NewExpression => 17,
        _ => 18,
    }
}

fn print_expr(node: &AstNode, min_prec: u8, out: &mut String) {
    let prec = precedence(node);
    let wrap = prec < min_prec;
    if wrap {
        out.push('(');
    }
    print_expr_bare(node, out);
    if wrap {
        out.push(')');
    }
}

fn print_expr_bare(node: &AstNode, out: &mut String) {
    match node.kind {
        NodeKind::Identifier => out.push_str(node.value.as_deref().unwrap_or("")),
        NodeKind::ThisExpression => out.push_str("this"),
        NodeKind::NumericLiteral | NodeKind::BooleanLiteral => {
            out.push_str(node.value.as_deref().unwrap_or("0"))
        }
        NodeKind::NullLiteral => out.push_str("null"),
        NodeKind::StringLiteral => {
            out.push_str(&quote_string(node.value.as_deref().unwrap_or("")))
        }
        NodeKind::RegexLiteral | NodeKind::TemplateLiteral => {
            out.push_str(node.value.as_deref().unwrap_or(""))
        }
        NodeKind::ArrayExpression => {
            out.push('[');
            for (i, el) in node.children.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_expr(el, 2, out);
            }
            out.push(']');
        }
        NodeKind::ObjectExpression => {
            out.push('{');
            for (i, prop) in node.children.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_property(prop, out);
            }
            out.push('}');
        }
        NodeKind::FunctionExpression => print_function(node, "function", 0, out),
        NodeKind::ArrowFunctionExpression => {
            let body_idx = node.children.len() - 1;
            out.push('(');
            for (i, param) in node.children[..body_idx].iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(param.value.as_deref().unwrap_or(""));
            }
            out.push_str(") => ");
            let body = &node.children[body_idx];
            if body.kind == NodeKind::BlockStatement {
                print_block(body, 0, out);
            } else if body.kind == NodeKind::ObjectExpression {
                out.push('(');
                print_expr_bare(body, out);
                out.push(')');
            } else {
                print_expr(body, 2, out);
            }
        }
        NodeKind::UnaryExpression => {
            let op = node.value.as_deref().unwrap_or("");
            out.push_str(op);
            if op.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
                out.push(' ');
            }
            let operand_start = out.len();
            print_expr(&node.children[0], 15, out);
            // avoid `--x` when printing -(-x)
            if let Some(first) = out[operand_start..].chars().next() {
                if (op == "-" || op == "+") && first.to_string() == op {
                    out.insert(operand_start, ' ');
                }
            }
        }
        NodeKind::UpdateExpression => {
            let v = node.value.as_deref().unwrap_or("postfix++");
            let (prefix, op) = if let Some(rest) = v.strip_prefix("prefix") {
                (true, rest)
            } else {
                (false, v.strip_prefix("postfix").unwrap_or("++"))
            };
            if prefix {
                out.push_str(op);
                print_expr(&node.children[0], 15, out);
            } else {
                print_expr(&node.children[0], 17, out);
                out.push_str(op);
            }
        }
        NodeKind::BinaryExpression | NodeKind::LogicalExpression => {
            let prec = precedence(node);
            let op = node.value.as_deref().unwrap_or("+");
            let right_assoc = op == "**";
            let (lmin, rmin) = if right_assoc {
                (prec + 1, prec)
            } else {
                (prec, prec + 1)
            };
            print_expr(&node.children[0], lmin, out);
            out.push(' ');
            out.push_str(op);
            out.push(' ');
            print_expr(&node.children[1], rmin, out);
        }
        NodeKind::AssignmentExpression => {
            print_expr(&node.children[0], 17, out);
            out.push(' ');
            out.push_str(node.value.as_deref().unwrap_or("="));
            out.push(' ');
            print_expr(&node.children[1], 2, out);
        }
        NodeKind::ConditionalExpression => {
            print_expr(&node.children[0], 4, out);
            out.push_str(" ? ");
            print_expr(&node.children[1], 2, out);
            out.push_str(" : ");
            print_expr(&node.children[2], 2, out);
        }
        NodeKind::SequenceExpression => {
            for (i, child) in node.children.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_expr(child, 2, out);
            }
        }
        NodeKind::CallExpression => {
            let callee = &node.children[0];
            // a paren-less `new X` callee would swallow the arguments
            print_expr(callee, 17, out);
            out.push('(');
            for (i, arg) in node.children[1..].iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_expr(arg, 2, out);
            }
            out.push(')');
        }
        NodeKind::NewExpression => {
            out.push_str("new ");
            let callee = &node.children[0];
            if member_chain_has_call(callee) {
                out.push('(');
                print_expr(callee, 1, out);
                out.push(')');
            } else {
                print_expr(callee, 17, out);
            }
            out.push('(');
            for (i, arg) in node.children[1..].iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_expr(arg, 2, out);
            }
            out.push(')');
        }
        NodeKind::MemberExpression => {
            let object = &node.children[0];
            let needs_wrap = precedence(object) < 17
                || object.kind == NodeKind::NumericLiteral
                || object.kind == NodeKind::NewExpression;
            if needs_wrap {
                out.push('(');
                print_expr(object, 1, out);
                out.push(')');
            } else {
                print_expr_bare(object, out);
            }
            if node.value.as_deref() == Some("computed") {
                out.push('[');
                print_expr(&node.children[1], 1, out);
                out.push(']');
            } else {
                out.push('.');
                out.push_str(node.children[1].value.as_deref().unwrap_or(""));
            }
        }
        NodeKind::SpreadElement => {
            out.push_str("...");
            print_expr(&node.children[0], 2, out);
        }
        _ => {
            // statement or Unknown node in expression position: render children
            for child in &node.children {
                print_expr(child, 1, out);
            }
        }
    }
}

fn print_property(prop: &AstNode, out: &mut String) {
    if prop.value.as_deref() == Some("shorthand") {
        out.push_str(prop.children[0].value.as_deref().unwrap_or(""));
        return;
    }
    if prop.value.as_deref() == Some("computed") {
        out.push('[');
        print_expr(&prop.children[0], 1, out);
        out.push(']');
    } else {
        let key = &prop.children[0];
        match key.kind {
            NodeKind::StringLiteral => out.push_str(&quote_string(key.value.as_deref().unwrap_or(""))),
            _ => out.push_str(key.value.as_deref().unwrap_or("")),
        }
    }
    out.push_str(": ");
    print_expr(&prop.children[1], 2, out);
}

/// Leftmost primary of an expression starts with `{` or `function`.
fn starts_ambiguously(node: &AstNode) -> bool {
    match node.kind {
        NodeKind::ObjectExpression | NodeKind::FunctionExpression => true,
        NodeKind::MemberExpression
        | NodeKind::CallExpression
        | NodeKind::BinaryExpression
        | NodeKind::LogicalExpression
        | NodeKind::ConditionalExpression
        | NodeKind::AssignmentExpression
        | NodeKind::SequenceExpression => starts_ambiguously(&node.children[0]),
        NodeKind::UpdateExpression => {
            node.value.as_deref().is_some_and(|v| v.starts_with("postfix"))
                && starts_ambiguously(&node.children[0])
        }
        _ => false,
    }
}

/// Whether the rightmost statement chain ends in an if without an else.
fn ends_with_open_if(node: &AstNode) -> bool {
    match node.kind {
        NodeKind::IfStatement => {
            if node.children.len() == 2 {
                true
            } else {
                ends_with_open_if(&node.children[2])
            }
        }
        NodeKind::WhileStatement | NodeKind::WithStatement => {
            ends_with_open_if(&node.children[1])
        }
        NodeKind::ForStatement | NodeKind::ForInStatement | NodeKind::ForOfStatement => {
            ends_with_open_if(node.children.last().unwrap())
        }
        NodeKind::LabeledStatement => ends_with_open_if(&node.children[1]),
        _ => false,
    }
}

/// True when a `new` callee contains a call in its member-access spine.
fn member_chain_has_call(node: &AstNode) -> bool {
    match node.kind {
        NodeKind::CallExpression => true,
        NodeKind::MemberExpression => member_chain_has_call(&node.children[0]),
        _ => false,
    }
}

/// Quote a cooked string with minimal escaping.
pub fn quote_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{2028}' => out.push_str("\\u2028"),
            '\u{2029}' => out.push_str("\\u2029"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\x{:02x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_str;

    /// parse(print(parse(s))) must equal parse(s) structurally.
    fn roundtrip(src: &str) {
        let first = parse_str(src).unwrap_or_else(|e| panic!("{src:?}: {e}"));
        let printed = print_program(&first.root);
        let second = parse_str(&printed)
            .unwrap_or_else(|e| panic!("printed output failed to reparse: {e}\n{printed}"));
        assert!(
            first.root.structurally_eq(&second.root),
            "round trip changed the tree for {src:?}\nprinted:\n{printed}"
        );
    }

    #[test]
    fn roundtrip_corpus() {
        let cases = [
            "var a = 1;",
            "var a = 1, b;",
            "let x = [1, 2, 3]; const y = {a: 1, \"b c\": 2};",
            "if (x) { y(); } else z();",
            "if (a) if (b) x(); else y();",
            "for (var i = 0; i < 10; i++) { s += i; }",
            "for (;;) break;",
            "for (var k in obj) { f(k); }",
            "for (var v of xs) g(v);",
            "while (a > 0) a--;",
            "do { x(); } while (cond);",
            "function f(a, b) { return a + b * 2; }",
            "var f = function named() { return 1; };",
            "var g = (a, b) => a + b;",
            "var h = x => { return x * x; };",
            "switch (v) { case 1: a(); break; default: b(); }",
            "try { risky(); } catch (e) { log(e); } finally { done(); }",
            "throw new Error(\"boom\");",
            "x = a ? b : c ? d : e;",
            "a = (b, c);",
            "obj.method(1)(2).prop[key];",
            "window[\"doc\" + \"ument\"].write(s);",
            "var s = \"he said \\\"hi\\\"\\n\";",
            "var r = /a[/]b/gi; var t = `tpl ${x + 1}`;",
            "(function() { init(); })();",
            "new Date().getTime();",
            "new (factory())(1);",
            "var n = -x; var m = - -y; var k = +(+z);",
            "delete o.k; typeof v; void 0;",
            "a && b || c; a | b ^ c & d;",
            "x <<= 2; y >>>= 1; z **= 2;",
            "lbl: for (;;) { continue lbl; }",
            "with (o) { f(); }",
            "(1).toString();",
            "({a: 1}).a;",
            "x = {f: function() { return this; }};",
            "var u; u = i++ + ++j;",
            "if (a) { if (b) x(); } else y();",
        ];
        for src in cases {
            roundtrip(src);
        }
    }

    #[test]
    fn printer_is_stable() {
        // printing an already-printed tree yields identical text
        let src = "var a = 1; function f(x) { if (x) return x * 2; return 0; }";
        let ast = parse_str(src).unwrap();
        let once = print_program(&ast.root);
        let twice = print_program(&parse_str(&once).unwrap().root);
        assert_eq!(once, twice);
    }

    #[test]
    fn string_escaping() {
        assert_eq!(quote_string("ab"), "\"ab\"");
        assert_eq!(quote_string("a\"b\\c\n"), "\"a\\\"b\\\\c\\n\"");
        assert_eq!(quote_string("\u{1}"), "\"\\x01\"");
    }
}
