//! Recursive-descent parser for an ES5 subset plus arrow functions,
//! template literals, and `let`/`const`.
//!
//! The grammar is deliberately bounded: anything outside it is a
//! [`ParseError`], never a silently wrong tree. Full-JavaScript corpora
//! enter through the ESTree ingestion path instead (see [`crate::estree`]).
//!
//! Automatic semicolon insertion implements the three core rules: before a
//! token preceded by a line terminator, at end of input, and before `}`;
//! plus the restricted productions (`return`/`throw`/`break`/`continue`
//! arguments and postfix `++`/`--` must start on the same line).
//!
//! Tree-shape conventions (the `value` field carries what ESTree keeps in
//! extra fields, so (kind, value, children) fully describes a node):
//!
//! - operators: `BinaryExpression` / `LogicalExpression` /
//!   `AssignmentExpression` / `UnaryExpression` store the operator text;
//!   `UpdateExpression` stores `"prefix++"` / `"postfix--"` etc.
//! - `VariableDeclaration` stores `"var"` / `"let"` / `"const"`.
//! - functions store their name (named ones also keep the `Identifier`
//!   child, so declaration sites exist as nodes); children are
//!   `[name?, params..., body]`.
//! - `ForStatement` stores a presence mask over `init`/`test`/`update`
//!   (e.g. `"itu"`, `"tu"`, `""`); children are the present parts then body.
//! - `MemberExpression` stores `"computed"` for `a[b]`, nothing for `a.b`.
//! - `Property` stores `"computed"` or `"shorthand"` when applicable.
//! - `SwitchCase` stores `"default"` for the default case.
//! - `StringLiteral` stores the cooked (escape-decoded) text.

use thiserror::Error;

use crate::ast::{Ast, AstNode, NodeKind};
use crate::lexer::{tokenize_str, LexError, Token, TokenKind};
use crate::source::{content_digest, SourceFile};

#[derive(Debug, Clone, Error)]
pub enum ParseError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("parse error at {line}:{column}: expected {expected}, found {found}")]
    Syntax {
        line: u32,
        column: u32,
        expected: String,
        found: String,
    },
}

/// Parse a source file into an [`Ast`].
pub fn parse(source: &SourceFile) -> Result<Ast, ParseError> {
    parse_str(&source.text)
}

/// Parse a bare string.
pub fn parse_str(text: &str) -> Result<Ast, ParseError> {
    let tokens = tokenize_str(text)?;
    parse_tokens(&tokens, content_digest(text))
}

/// Parse an already-lexed token stream. Comments are skipped here.
pub fn parse_tokens(tokens: &[Token], source_digest: String) -> Result<Ast, ParseError> {
    let significant: Vec<Token> = tokens
        .iter()
        .filter(|t| t.kind != TokenKind::Comment)
        .cloned()
        .collect();
    let mut p = Parser {
        tokens: significant,
        pos: 0,
    };
    let root = p.parse_program()?;
    Ok(Ast::new(root, source_digest))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, ahead: usize) -> Option<&Token> {
        self.tokens.get(self.pos + ahead)
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        self.pos += 1;
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn here(&self) -> (u32, u32) {
        match self.peek() {
            Some(t) => (t.line, t.column),
            None => self
                .tokens
                .last()
                .map(|t| (t.line, t.column + t.lexeme.chars().count() as u32))
                .unwrap_or((1, 0)),
        }
    }

    fn err<T>(&self, expected: impl Into<String>) -> PResult<T> {
        let (line, column) = self.here();
        let found = match self.peek() {
            Some(t) => format!("'{}'", t.lexeme),
            None => "end of input".to_string(),
        };
        Err(ParseError::Syntax {
            line,
            column,
            expected: expected.into(),
            found,
        })
    }

    fn is_punct(&self, p: &str) -> bool {
        self.peek()
            .is_some_and(|t| t.kind == TokenKind::Punctuator && t.lexeme == p)
    }

    fn is_keyword(&self, k: &str) -> bool {
        self.peek()
            .is_some_and(|t| t.kind == TokenKind::Keyword && t.lexeme == k)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, k: &str) -> bool {
        if self.is_keyword(k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> PResult<Token> {
        if self.is_punct(p) {
            Ok(self.bump())
        } else {
            self.err(format!("'{}'", p))
        }
    }

    fn expect_keyword(&mut self, k: &str) -> PResult<Token> {
        if self.is_keyword(k) {
            Ok(self.bump())
        } else {
            self.err(format!("'{}'", k))
        }
    }

    fn expect_identifier(&mut self) -> PResult<AstNode> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                let t = self.bump();
                Ok(AstNode::with_value(
                    NodeKind::Identifier,
                    t.lexeme,
                    t.line,
                    t.column,
                ))
            }
            _ => self.err("identifier"),
        }
    }

    /// Automatic semicolon insertion at statement end.
    fn consume_semicolon(&mut self) -> PResult<()> {
        if self.eat_punct(";") {
            return Ok(());
        }
        match self.peek() {
            None => Ok(()),
            Some(t) if t.lexeme == "}" && t.kind == TokenKind::Punctuator => Ok(()),
            Some(t) if t.newline_before => Ok(()),
            _ => self.err("';'"),
        }
    }

    /// True when the next token ends the trailing clause of a restricted
    /// production (`return` / `break` / `continue` / `throw`).
    fn clause_ends_here(&self) -> bool {
        match self.peek() {
            None => true,
            Some(t) => {
                t.newline_before
                    || (t.kind == TokenKind::Punctuator && (t.lexeme == ";" || t.lexeme == "}"))
            }
        }
    }

    fn parse_program(&mut self) -> PResult<AstNode> {
        let (line, column) = self.peek().map(|t| (t.line, t.column)).unwrap_or((1, 0));
        let mut program = AstNode::new(NodeKind::Program, line, column);
        while !self.at_end() {
            program.children.push(self.parse_statement()?);
        }
        Ok(program)
    }

    fn parse_statement(&mut self) -> PResult<AstNode> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("statement"),
        };
        let (line, column) = (tok.line, tok.column);
        match tok.kind {
            TokenKind::Punctuator if tok.lexeme == "{" => self.parse_block(),
            TokenKind::Punctuator if tok.lexeme == ";" => {
                self.bump();
                Ok(AstNode::new(NodeKind::EmptyStatement, line, column))
            }
            TokenKind::Keyword => match tok.lexeme.as_str() {
                "var" | "let" | "const" => {
                    let decl = self.parse_variable_declaration(true)?;
                    self.consume_semicolon()?;
                    Ok(decl)
                }
                "function" => self.parse_function(NodeKind::FunctionDeclaration, true),
                "if" => self.parse_if(),
                "for" => self.parse_for(),
                "while" => self.parse_while(),
                "do" => self.parse_do_while(),
                "return" => {
                    self.bump();
                    let mut node = AstNode::new(NodeKind::ReturnStatement, line, column);
                    if !self.clause_ends_here() {
                        node.children.push(self.parse_expression()?);
                    }
                    self.consume_semicolon()?;
                    Ok(node)
                }
                "break" | "continue" => {
                    let kw = self.bump();
                    let kind = if kw.lexeme == "break" {
                        NodeKind::BreakStatement
                    } else {
                        NodeKind::ContinueStatement
                    };
                    let mut node = AstNode::new(kind, line, column);
                    if !self.clause_ends_here()
                        && self.peek().is_some_and(|t| t.kind == TokenKind::Identifier)
                    {
                        node.children.push(self.expect_identifier()?);
                    }
                    self.consume_semicolon()?;
                    Ok(node)
                }
                "throw" => {
                    self.bump();
                    if self.clause_ends_here() {
                        return self.err("expression after 'throw' on the same line");
                    }
                    let mut node = AstNode::new(NodeKind::ThrowStatement, line, column);
                    node.children.push(self.parse_expression()?);
                    self.consume_semicolon()?;
                    Ok(node)
                }
                "try" => self.parse_try(),
                "switch" => self.parse_switch(),
                "with" => {
                    self.bump();
                    self.expect_punct("(")?;
                    let object = self.parse_expression()?;
                    self.expect_punct(")")?;
                    let body = self.parse_statement()?;
                    let mut node = AstNode::new(NodeKind::WithStatement, line, column);
                    node.children.push(object);
                    node.children.push(body);
                    Ok(node)
                }
                "debugger" => {
                    self.bump();
                    self.consume_semicolon()?;
                    Ok(AstNode::new(NodeKind::DebuggerStatement, line, column))
                }
                _ => {
                    // expression statements may start with value-like keywords
                    if matches!(tok.lexeme.as_str(), "this" | "true" | "false" | "null" | "new"
                        | "typeof" | "void" | "delete")
                    {
                        self.parse_expression_statement()
                    } else {
                        self.err("statement")
                    }
                }
            },
            TokenKind::Identifier
                if self
                    .peek_at(1)
                    .is_some_and(|t| t.kind == TokenKind::Punctuator && t.lexeme == ":") =>
            {
                let label = self.expect_identifier()?;
                self.expect_punct(":")?;
                let body = self.parse_statement()?;
                let mut node = AstNode::new(NodeKind::LabeledStatement, line, column);
                node.children.push(label);
                node.children.push(body);
                Ok(node)
            }
            _ => self.parse_expression_statement(),
        }
    }

    fn parse_expression_statement(&mut self) -> PResult<AstNode> {
        let (line, column) = self.here();
        let expr = self.parse_expression()?;
        self.consume_semicolon()?;
        let mut node = AstNode::new(NodeKind::ExpressionStatement, line, column);
        node.children.push(expr);
        Ok(node)
    }

    fn parse_block(&mut self) -> PResult<AstNode> {
        let open = self.expect_punct("{")?;
        let mut block = AstNode::new(NodeKind::BlockStatement, open.line, open.column);
        while !self.is_punct("}") {
            if self.at_end() {
                return self.err("'}'");
            }
            block.children.push(self.parse_statement()?);
        }
        self.expect_punct("}")?;
        Ok(block)
    }

    /// `var`/`let`/`const` declaration without the trailing semicolon.
    fn parse_variable_declaration(&mut self, allow_in: bool) -> PResult<AstNode> {
        let kw = self.bump();
        let mut decl =
            AstNode::with_value(NodeKind::VariableDeclaration, kw.lexeme, kw.line, kw.column);
        loop {
            let id = self.expect_identifier()?;
            let mut declarator =
                AstNode::new(NodeKind::VariableDeclarator, id.line, id.column);
            declarator.children.push(id);
            if self.eat_punct("=") {
                declarator.children.push(self.parse_assignment(allow_in)?);
            }
            decl.children.push(declarator);
            if !self.eat_punct(",") {
                break;
            }
        }
        Ok(decl)
    }

    fn parse_function(&mut self, kind: NodeKind, require_name: bool) -> PResult<AstNode> {
        let kw = self.expect_keyword("function")?;
        let mut node = AstNode::new(kind, kw.line, kw.column);
        if self.peek().is_some_and(|t| t.kind == TokenKind::Identifier) {
            let name = self.expect_identifier()?;
            node.value = name.value.clone();
            node.children.push(name);
        } else if require_name {
            return self.err("function name");
        }
        self.expect_punct("(")?;
        while !self.is_punct(")") {
            node.children.push(self.expect_identifier()?);
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct(")")?;
        node.children.push(self.parse_block()?);
        Ok(node)
    }

    fn parse_if(&mut self) -> PResult<AstNode> {
        let kw = self.expect_keyword("if")?;
        self.expect_punct("(")?;
        let test = self.parse_expression()?;
        self.expect_punct(")")?;
        let consequent = self.parse_statement()?;
        let mut node = AstNode::new(NodeKind::IfStatement, kw.line, kw.column);
        node.children.push(test);
        node.children.push(consequent);
        if self.eat_keyword("else") {
            node.children.push(self.parse_statement()?);
        }
        Ok(node)
    }

    fn parse_while(&mut self) -> PResult<AstNode> {
        let kw = self.expect_keyword("while")?;
        self.expect_punct("(")?;
        let test = self.parse_expression()?;
        self.expect_punct(")")?;
        let body = self.parse_statement()?;
        let mut node = AstNode::new(NodeKind::WhileStatement, kw.line, kw.column);
        node.children.push(test);
        node.children.push(body);
        Ok(node)
    }

    fn parse_do_while(&mut self) -> PResult<AstNode> {
        let kw = self.expect_keyword("do")?;
        let body = self.parse_statement()?;
        self.expect_keyword("while")?;
        self.expect_punct("(")?;
        let test = self.parse_expression()?;
        self.expect_punct(")")?;
        // the semicolon after do-while is always insertable
        self.eat_punct(";");
        let mut node = AstNode::new(NodeKind::DoWhileStatement, kw.line, kw.column);
        node.children.push(body);
        node.children.push(test);
        Ok(node)
    }

    fn parse_for(&mut self) -> PResult<AstNode> {
        let kw = self.expect_keyword("for")?;
        let (line, column) = (kw.line, kw.column);
        self.expect_punct("(")?;

        // empty init
        if self.eat_punct(";") {
            return self.parse_for_tail(None, line, column);
        }

        let init = if self.is_keyword("var") || self.is_keyword("let") || self.is_keyword("const")
        {
            self.parse_variable_declaration(false)?
        } else {
            self.parse_expression_no_in()?
        };

        if self.is_keyword("in") || self.peek().is_some_and(|t| t.lexeme == "of") {
            let of = self.bump().lexeme == "of";
            let right = self.parse_expression()?;
            self.expect_punct(")")?;
            let body = self.parse_statement()?;
            let kind = if of {
                NodeKind::ForOfStatement
            } else {
                NodeKind::ForInStatement
            };
            let mut node = AstNode::new(kind, line, column);
            node.children.push(init);
            node.children.push(right);
            node.children.push(body);
            return Ok(node);
        }

        self.expect_punct(";")?;
        self.parse_for_tail(Some(init), line, column)
    }

    fn parse_for_tail(
        &mut self,
        init: Option<AstNode>,
        line: u32,
        column: u32,
    ) -> PResult<AstNode> {
        let test = if self.is_punct(";") {
            None
        } else {
            Some(self.parse_expression()?)
        };
        self.expect_punct(";")?;
        let update = if self.is_punct(")") {
            None
        } else {
            Some(self.parse_expression()?)
        };
        self.expect_punct(")")?;
        let body = self.parse_statement()?;

        let mut mask = String::new();
        let mut node = AstNode::new(NodeKind::ForStatement, line, column);
        if let Some(init) = init {
            mask.push('i');
            node.children.push(init);
        }
        if let Some(test) = test {
            mask.push('t');
            node.children.push(test);
        }
        if let Some(update) = update {
            mask.push('u');
            node.children.push(update);
        }
        node.value = Some(mask);
        node.children.push(body);
        Ok(node)
    }

    fn parse_try(&mut self) -> PResult<AstNode> {
        let kw = self.expect_keyword("try")?;
        let mut node = AstNode::new(NodeKind::TryStatement, kw.line, kw.column);
        node.children.push(self.parse_block()?);
        let mut any = false;
        if self.is_keyword("catch") {
            let c = self.bump();
            self.expect_punct("(")?;
            let param = self.expect_identifier()?;
            self.expect_punct(")")?;
            let body = self.parse_block()?;
            let mut clause = AstNode::new(NodeKind::CatchClause, c.line, c.column);
            clause.children.push(param);
            clause.children.push(body);
            node.children.push(clause);
            any = true;
        }
        if self.eat_keyword("finally") {
            node.children.push(self.parse_block()?);
            any = true;
        }
        if !any {
            return self.err("'catch' or 'finally'");
        }
        Ok(node)
    }

    fn parse_switch(&mut self) -> PResult<AstNode> {
        let kw = self.expect_keyword("switch")?;
        self.expect_punct("(")?;
        let disc = self.parse_expression()?;
        self.expect_punct(")")?;
        self.expect_punct("{")?;
        let mut node = AstNode::new(NodeKind::SwitchStatement, kw.line, kw.column);
        node.children.push(disc);
        while !self.is_punct("}") {
            if self.at_end() {
                return self.err("'}'");
            }
            let (cl, cc) = self.here();
            let mut case = AstNode::new(NodeKind::SwitchCase, cl, cc);
            if self.eat_keyword("case") {
                case.children.push(self.parse_expression()?);
            } else if self.eat_keyword("default") {
                case.value = Some("default".into());
            } else {
                return self.err("'case' or 'default'");
            }
            self.expect_punct(":")?;
            while !self.is_punct("}") && !self.is_keyword("case") && !self.is_keyword("default") {
                case.children.push(self.parse_statement()?);
            }
            node.children.push(case);
        }
        self.expect_punct("}")?;
        Ok(node)
    }

    // ---- expressions ----

    fn parse_expression(&mut self) -> PResult<AstNode> {
        self.parse_expression_in(true)
    }

    fn parse_expression_no_in(&mut self) -> PResult<AstNode> {
        self.parse_expression_in(false)
    }

    /// Comma-operator level.
    fn parse_expression_in(&mut self, allow_in: bool) -> PResult<AstNode> {
        let first = self.parse_assignment(allow_in)?;
        if !self.is_punct(",") {
            return Ok(first);
        }
        let (line, column) = (first.line, first.column);
        let mut seq = AstNode::new(NodeKind::SequenceExpression, line, column);
        seq.children.push(first);
        while self.eat_punct(",") {
            seq.children.push(self.parse_assignment(allow_in)?);
        }
        Ok(seq)
    }

    fn parse_assignment(&mut self, allow_in: bool) -> PResult<AstNode> {
        if let Some(arrow) = self.try_parse_arrow(allow_in)? {
            return Ok(arrow);
        }
        let left = self.parse_conditional(allow_in)?;
        const ASSIGN_OPS: &[&str] = &[
            "=", "+=", "-=", "*=", "/=", "%=", "<<=", ">>=", ">>>=", "&=", "|=", "^=", "**=",
        ];
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Punctuator && ASSIGN_OPS.contains(&t.lexeme.as_str()) {
                if !matches!(
                    left.kind,
                    NodeKind::Identifier | NodeKind::MemberExpression
                ) {
                    return self.err("assignment target");
                }
                let op = self.bump();
                let right = self.parse_assignment(allow_in)?;
                let mut node = AstNode::with_value(
                    NodeKind::AssignmentExpression,
                    op.lexeme,
                    left.line,
                    left.column,
                );
                node.children.push(left);
                node.children.push(right);
                return Ok(node);
            }
        }
        Ok(left)
    }

    /// Arrow-function lookahead: `ident =>` or a balanced `( ... ) =>`.
    fn try_parse_arrow(&mut self, allow_in: bool) -> PResult<Option<AstNode>> {
        let arrow_after = |p: &Parser, idx: usize| {
            p.tokens
                .get(idx)
                .is_some_and(|t| t.kind == TokenKind::Punctuator && t.lexeme == "=>")
        };
        let start = match self.peek() {
            Some(t) => t.clone(),
            None => return Ok(None),
        };
        let mut params: Vec<AstNode> = Vec::new();
        if start.kind == TokenKind::Identifier && arrow_after(self, self.pos + 1) {
            params.push(self.expect_identifier()?);
            self.expect_punct("=>")?;
        } else if start.kind == TokenKind::Punctuator && start.lexeme == "(" {
            // scan to the matching close paren
            let mut depth = 0usize;
            let mut idx = self.pos;
            loop {
                let t = match self.tokens.get(idx) {
                    Some(t) => t,
                    None => return Ok(None),
                };
                if t.kind == TokenKind::Punctuator {
                    match t.lexeme.as_str() {
                        "(" | "[" | "{" => depth += 1,
                        ")" | "]" | "}" => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                idx += 1;
            }
            if !arrow_after(self, idx + 1) {
                return Ok(None);
            }
            self.expect_punct("(")?;
            while !self.is_punct(")") {
                params.push(self.expect_identifier()?);
                if !self.eat_punct(",") {
                    break;
                }
            }
            self.expect_punct(")")?;
            self.expect_punct("=>")?;
        } else {
            return Ok(None);
        }
        let mut node =
            AstNode::new(NodeKind::ArrowFunctionExpression, start.line, start.column);
        node.children.extend(params);
        if self.is_punct("{") {
            node.children.push(self.parse_block()?);
        } else {
            node.children.push(self.parse_assignment(allow_in)?);
        }
        Ok(Some(node))
    }

    fn parse_conditional(&mut self, allow_in: bool) -> PResult<AstNode> {
        let test = self.parse_binary(0, allow_in)?;
        if !self.eat_punct("?") {
            return Ok(test);
        }
        let consequent = self.parse_assignment(true)?;
        self.expect_punct(":")?;
        let alternate = self.parse_assignment(allow_in)?;
        let mut node =
            AstNode::new(NodeKind::ConditionalExpression, test.line, test.column);
        node.children.push(test);
        node.children.push(consequent);
        node.children.push(alternate);
        Ok(node)
    }

    fn binary_precedence(&self, lexeme: &str, keyword: bool, allow_in: bool) -> Option<u8> {
        if keyword {
            return match lexeme {
                "in" if allow_in => Some(7),
                "instanceof" => Some(7),
                _ => None,
            };
        }
        Some(match lexeme {
            "||" => 1,
            "&&" => 2,
            "|" => 3,
            "^" => 4,
            "&" => 5,
            "==" | "!=" | "===" | "!==" => 6,
            "<" | ">" | "<=" | ">=" => 7,
            "<<" | ">>" | ">>>" => 8,
            "+" | "-" => 9,
            "*" | "/" | "%" => 10,
            "**" => 11,
            _ => return None,
        })
    }

    /// Precedence-climbing binary expression parser. `**` is right
    /// associative, everything else left.
    fn parse_binary(&mut self, min_prec: u8, allow_in: bool) -> PResult<AstNode> {
        let mut left = self.parse_unary(allow_in)?;
        loop {
            let (op, prec) = match self.peek() {
                Some(t) if t.kind == TokenKind::Punctuator || t.kind == TokenKind::Keyword => {
                    match self.binary_precedence(
                        &t.lexeme,
                        t.kind == TokenKind::Keyword,
                        allow_in,
                    ) {
                        Some(p) if p > min_prec => (t.lexeme.clone(), p),
                        _ => break,
                    }
                }
                _ => break,
            };
            self.bump();
            let next_min = if op == "**" { prec - 1 } else { prec };
            let right = self.parse_binary(next_min, allow_in)?;
            let kind = if op == "&&" || op == "||" {
                NodeKind::LogicalExpression
            } else {
                NodeKind::BinaryExpression
            };
            let mut node = AstNode::with_value(kind, op, left.line, left.column);
            node.children.push(left);
            node.children.push(right);
            left = node;
        }
        Ok(left)
    }

    fn parse_unary(&mut self, allow_in: bool) -> PResult<AstNode> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("expression"),
        };
        let is_unary_punct = tok.kind == TokenKind::Punctuator
            && matches!(tok.lexeme.as_str(), "!" | "~" | "+" | "-");
        let is_unary_kw = tok.kind == TokenKind::Keyword
            && matches!(tok.lexeme.as_str(), "typeof" | "void" | "delete");
        if is_unary_punct || is_unary_kw {
            self.bump();
            let operand = self.parse_unary(allow_in)?;
            let mut node = AstNode::with_value(
                NodeKind::UnaryExpression,
                tok.lexeme,
                tok.line,
                tok.column,
            );
            node.children.push(operand);
            return Ok(node);
        }
        if tok.kind == TokenKind::Punctuator && (tok.lexeme == "++" || tok.lexeme == "--") {
            self.bump();
            let operand = self.parse_unary(allow_in)?;
            let mut node = AstNode::with_value(
                NodeKind::UpdateExpression,
                format!("prefix{}", tok.lexeme),
                tok.line,
                tok.column,
            );
            node.children.push(operand);
            return Ok(node);
        }
        let mut expr = self.parse_left_hand_side(true)?;
        // postfix ++/-- is a restricted production: no newline before it
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Punctuator
                && (t.lexeme == "++" || t.lexeme == "--")
                && !t.newline_before
            {
                let op = self.bump();
                let mut node = AstNode::with_value(
                    NodeKind::UpdateExpression,
                    format!("postfix{}", op.lexeme),
                    expr.line,
                    expr.column,
                );
                node.children.push(expr);
                expr = node;
            }
        }
        Ok(expr)
    }

    fn parse_left_hand_side(&mut self, allow_call: bool) -> PResult<AstNode> {
        let mut expr = if self.is_keyword("new") {
            let kw = self.bump();
            // `new` binds to a member expression without call arguments
            let callee = self.parse_left_hand_side(false)?;
            let mut node = AstNode::new(NodeKind::NewExpression, kw.line, kw.column);
            node.children.push(callee);
            if self.is_punct("(") {
                self.parse_arguments(&mut node)?;
            }
            node
        } else {
            self.parse_primary()?
        };

        loop {
            if self.eat_punct(".") {
                let prop = match self.peek() {
                    // reserved words are valid property names after a dot
                    Some(t) if t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword => {
                        let t = self.bump();
                        AstNode::with_value(NodeKind::Identifier, t.lexeme, t.line, t.column)
                    }
                    _ => return self.err("property name"),
                };
                let mut node =
                    AstNode::new(NodeKind::MemberExpression, expr.line, expr.column);
                node.children.push(expr);
                node.children.push(prop);
                expr = node;
            } else if self.is_punct("[") {
                self.bump();
                let prop = self.parse_expression()?;
                self.expect_punct("]")?;
                let mut node = AstNode::with_value(
                    NodeKind::MemberExpression,
                    "computed",
                    expr.line,
                    expr.column,
                );
                node.children.push(expr);
                node.children.push(prop);
                expr = node;
            } else if allow_call && self.is_punct("(") {
                let mut node = AstNode::new(NodeKind::CallExpression, expr.line, expr.column);
                node.children.push(expr);
                self.parse_arguments(&mut node)?;
                expr = node;
            } else {
                break;
            }
        }
        Ok(expr)
    }

    fn parse_arguments(&mut self, node: &mut AstNode) -> PResult<()> {
        self.expect_punct("(")?;
        while !self.is_punct(")") {
            node.children.push(self.parse_assignment(true)?);
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct(")")?;
        Ok(())
    }

    fn parse_primary(&mut self) -> PResult<AstNode> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("expression"),
        };
        let (line, column) = (tok.line, tok.column);
        match tok.kind {
            TokenKind::NumericLiteral => {
                self.bump();
                Ok(AstNode::with_value(
                    NodeKind::NumericLiteral,
                    tok.lexeme,
                    line,
                    column,
                ))
            }
            TokenKind::StringLiteral => {
                self.bump();
                Ok(AstNode::with_value(
                    NodeKind::StringLiteral,
                    cook_string(&tok.lexeme),
                    line,
                    column,
                ))
            }
            TokenKind::RegexLiteral => {
                self.bump();
                Ok(AstNode::with_value(
                    NodeKind::RegexLiteral,
                    tok.lexeme,
                    line,
                    column,
                ))
            }
            TokenKind::TemplateLiteral => {
                self.bump();
                Ok(AstNode::with_value(
                    NodeKind::TemplateLiteral,
                    tok.lexeme,
                    line,
                    column,
                ))
            }
            TokenKind::Identifier => {
                self.bump();
                Ok(AstNode::with_value(
                    NodeKind::Identifier,
                    tok.lexeme,
                    line,
                    column,
                ))
            }
            TokenKind::Keyword => match tok.lexeme.as_str() {
                "this" => {
                    self.bump();
                    Ok(AstNode::new(NodeKind::ThisExpression, line, column))
                }
                "true" | "false" => {
                    self.bump();
                    Ok(AstNode::with_value(
                        NodeKind::BooleanLiteral,
                        tok.lexeme,
                        line,
                        column,
                    ))
                }
                "null" => {
                    self.bump();
                    Ok(AstNode::new(NodeKind::NullLiteral, line, column))
                }
                "function" => self.parse_function(NodeKind::FunctionExpression, false),
                _ => self.err("expression"),
            },
            TokenKind::Punctuator => match tok.lexeme.as_str() {
                "(" => {
                    self.bump();
                    let expr = self.parse_expression()?;
                    self.expect_punct(")")?;
                    Ok(expr)
                }
                "[" => {
                    self.bump();
                    let mut node = AstNode::new(NodeKind::ArrayExpression, line, column);
                    while !self.is_punct("]") {
                        if self.eat_punct(",") {
                            continue; // elision: holes are dropped
                        }
                        node.children.push(self.parse_assignment(true)?);
                        if !self.is_punct("]") && !self.eat_punct(",") {
                            return self.err("',' or ']'");
                        }
                    }
                    self.expect_punct("]")?;
                    Ok(node)
                }
                "{" => self.parse_object_literal(line, column),
                _ => self.err("expression"),
            },
            TokenKind::Comment => unreachable!("comments are stripped before parsing"),
        }
    }

    fn parse_object_literal(&mut self, line: u32, column: u32) -> PResult<AstNode> {
        self.expect_punct("{")?;
        let mut node = AstNode::new(NodeKind::ObjectExpression, line, column);
        while !self.is_punct("}") {
            let key_tok = match self.peek() {
                Some(t) => t.clone(),
                None => return self.err("property key"),
            };
            let (kl, kc) = (key_tok.line, key_tok.column);
            let mut prop = AstNode::new(NodeKind::Property, kl, kc);
            let key = match key_tok.kind {
                TokenKind::Identifier | TokenKind::Keyword => {
                    self.bump();
                    AstNode::with_value(NodeKind::Identifier, key_tok.lexeme, kl, kc)
                }
                TokenKind::StringLiteral => {
                    self.bump();
                    AstNode::with_value(NodeKind::StringLiteral, cook_string(&key_tok.lexeme), kl, kc)
                }
                TokenKind::NumericLiteral => {
                    self.bump();
                    AstNode::with_value(NodeKind::NumericLiteral, key_tok.lexeme, kl, kc)
                }
                _ => return self.err("property key"),
            };
            prop.children.push(key);
            if self.eat_punct(":") {
                prop.children.push(self.parse_assignment(true)?);
            } else if key_tok.kind == TokenKind::Identifier
                && (self.is_punct(",") || self.is_punct("}"))
            {
                prop.value = Some("shorthand".into());
            } else {
                return self.err("':'");
            }
            node.children.push(prop);
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct("}")?;
        Ok(node)
    }
}

/// Decode the escape sequences of a quoted string lexeme into its cooked
/// value. Unknown escapes drop the backslash, matching JavaScript.
pub fn cook_string(lexeme: &str) -> String {
    let chars: Vec<char> = lexeme.chars().collect();
    if chars.len() < 2 {
        return String::new();
    }
    let inner = &chars[1..chars.len() - 1];
    let mut out = String::with_capacity(inner.len());
    let mut i = 0;
    while i < inner.len() {
        let c = inner[i];
        if c != '\\' {
            out.push(c);
            i += 1;
            continue;
        }
        i += 1;
        if i >= inner.len() {
            break;
        }
        let e = inner[i];
        i += 1;
        match e {
            'n' => out.push('\n'),
            't' => out.push('\t'),
            'r' => out.push('\r'),
            'b' => out.push('\u{0008}'),
            'f' => out.push('\u{000C}'),
            'v' => out.push('\u{000B}'),
            '0' if i >= inner.len() || !inner[i].is_ascii_digit() => out.push('\0'),
            'x' => {
                if i + 1 < inner.len() {
                    let hx: String = inner[i..i + 2].iter().collect();
                    if let Ok(n) = u32::from_str_radix(&hx, 16) {
                        out.push(char::from_u32(n).unwrap_or('\u{FFFD}'));
                        i += 2;
                        continue;
                    }
                }
                out.push('x');
            }
            'u' => {
                if i < inner.len() && inner[i] == '{' {
                    if let Some(close) = inner[i..].iter().position(|&c| c == '}') {
                        let hx: String = inner[i + 1..i + close].iter().collect();
                        if let Ok(n) = u32::from_str_radix(&hx, 16) {
                            out.push(char::from_u32(n).unwrap_or('\u{FFFD}'));
                            i += close + 1;
                            continue;
                        }
                    }
                    out.push('u');
                } else if i + 3 < inner.len() {
                    let hx: String = inner[i..i + 4].iter().collect();
                    if let Ok(n) = u32::from_str_radix(&hx, 16) {
                        // combine surrogate pairs written as two \u escapes
                        if (0xD800..0xDC00).contains(&n)
                            && i + 9 < inner.len()
                            && inner[i + 4] == '\\'
                            && inner[i + 5] == 'u'
                        {
                            let lo: String = inner[i + 6..i + 10].iter().collect();
                            if let Ok(l) = u32::from_str_radix(&lo, 16) {
                                if (0xDC00..0xE000).contains(&l) {
                                    let cp = 0x10000 + ((n - 0xD800) << 10) + (l - 0xDC00);
                                    out.push(char::from_u32(cp).unwrap_or('\u{FFFD}'));
                                    i += 10;
                                    continue;
                                }
                            }
                        }
                        out.push(char::from_u32(n).unwrap_or('\u{FFFD}'));
                        i += 4;
                        continue;
                    }
                    out.push('u');
                } else {
                    out.push('u');
                }
            }
            '\n' | '\u{2028}' | '\u{2029}' => {} // line continuation
            '\r' => {
                if i < inner.len() && inner[i] == '\n' {
                    i += 1;
                }
            }
            d if d.is_ascii_digit() => {
                // legacy octal escape, up to three digits
                let mut val = d.to_digit(8).unwrap_or(0);
                let mut taken = 1;
                while taken < 3 && i < inner.len() {
                    if let Some(dd) = inner[i].to_digit(8) {
                        let next = val * 8 + dd;
                        if next > 0xFF {
                            break;
                        }
                        val = next;
                        i += 1;
                        taken += 1;
                    } else {
                        break;
                    }
                }
                out.push(char::from_u32(val).unwrap_or('\u{FFFD}'));
            }
            other => out.push(other),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::NodeKind::*;

    fn p(src: &str) -> Ast {
        parse_str(src).unwrap_or_else(|e| panic!("{src:?}: {e}"))
    }

    fn kinds_preorder(src: &str) -> Vec<NodeKind> {
        p(src).root.preorder().iter().map(|n| n.kind).collect()
    }

    #[test]
    fn if_call_shape() {
        let ast = p("if(x){y()}");
        let root = &ast.root;
        assert_eq!(root.kind, Program);
        let ifs = &root.children[0];
        assert_eq!(ifs.kind, IfStatement);
        assert_eq!(ifs.children[0].kind, Identifier);
        assert_eq!(ifs.children[0].value.as_deref(), Some("x"));
        let block = &ifs.children[1];
        assert_eq!(block.kind, BlockStatement);
        let exprstmt = &block.children[0];
        assert_eq!(exprstmt.kind, ExpressionStatement);
        let call = &exprstmt.children[0];
        assert_eq!(call.kind, CallExpression);
        assert_eq!(call.children[0].value.as_deref(), Some("y"));
    }

    #[test]
    fn malformed_var_errors() {
        let err = parse_str("var =").unwrap_err();
        match err {
            ParseError::Syntax { expected, .. } => assert!(expected.contains("identifier")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn function_declaration_shape() {
        let ast = p("function f(a){return a+1}");
        let f = &ast.root.children[0];
        assert_eq!(f.kind, FunctionDeclaration);
        assert_eq!(f.value.as_deref(), Some("f"));
        // children: name, one param, body
        assert_eq!(f.children.len(), 3);
        assert_eq!(f.children[0].value.as_deref(), Some("f"));
        assert_eq!(f.children[1].value.as_deref(), Some("a"));
        let body = &f.children[2];
        assert_eq!(body.children[0].kind, ReturnStatement);
        let plus = &body.children[0].children[0];
        assert_eq!(plus.kind, BinaryExpression);
        assert_eq!(plus.value.as_deref(), Some("+"));
    }

    #[test]
    fn every_node_has_position() {
        let ast = p("var a = 1;\nfunction g(b) { if (b) { return b * 2; } }\n");
        for n in ast.root.preorder() {
            assert!(n.line >= 1);
        }
        assert_eq!(ast.node_count, ast.root.preorder().len());
    }

    #[test]
    fn asi_newline_and_eof() {
        let ast = p("var a = 1\nvar b = 2");
        assert_eq!(ast.root.children.len(), 2);
        // restricted production: return on its own line returns nothing
        let ast = p("function f(){ return\n1 }");
        let ret = &ast.root.children[0].children[1].children[0];
        assert_eq!(ret.kind, ReturnStatement);
        assert!(ret.children.is_empty());
        // the dangling `1` became an expression statement
        assert!(parse_str("var a = 1 var b").is_err());
    }

    #[test]
    fn postfix_update_restriction() {
        let ast = p("a\n++b");
        // `++` on a new line applies as a prefix to b, not postfix to a
        assert_eq!(ast.root.children.len(), 2);
        let upd = &ast.root.children[1].children[0];
        assert_eq!(upd.kind, UpdateExpression);
        assert_eq!(upd.value.as_deref(), Some("prefix++"));
        let ast = p("a++");
        let upd = &ast.root.children[0].children[0];
        assert_eq!(upd.value.as_deref(), Some("postfix++"));
    }

    #[test]
    fn precedence_and_associativity() {
        let ast = p("x = 1 + 2 * 3");
        let assign = &ast.root.children[0].children[0];
        assert_eq!(assign.kind, AssignmentExpression);
        let plus = &assign.children[1];
        assert_eq!(plus.value.as_deref(), Some("+"));
        assert_eq!(plus.children[1].value.as_deref(), Some("*"));
        // left associativity
        let ast = p("a - b - c");
        let outer = &ast.root.children[0].children[0];
        assert_eq!(outer.children[0].kind, BinaryExpression);
        assert_eq!(outer.children[1].value.as_deref(), Some("c"));
    }

    #[test]
    fn member_and_call_chains() {
        let ast = p("window[\"doc\"](1).x;");
        let expr = &ast.root.children[0].children[0];
        assert_eq!(expr.kind, MemberExpression);
        assert_eq!(expr.children[0].kind, CallExpression);
        let callee = &expr.children[0].children[0];
        assert_eq!(callee.kind, MemberExpression);
        assert_eq!(callee.value.as_deref(), Some("computed"));
    }

    #[test]
    fn arrow_functions() {
        let ast = p("var f = (a, b) => a + b; var g = x => { return x; }; var h = () => 1;");
        let kinds = kinds_preorder("var f = (a,b) => a+b;");
        assert!(kinds.contains(&ArrowFunctionExpression));
        let f = &ast.root.children[0].children[0].children[1];
        assert_eq!(f.kind, ArrowFunctionExpression);
        assert_eq!(f.children.len(), 3); // a, b, body expr
    }

    #[test]
    fn for_variants() {
        let ast = p("for(;;){}");
        assert_eq!(ast.root.children[0].value.as_deref(), Some(""));
        let ast = p("for(var i=0;i<3;i++){}");
        assert_eq!(ast.root.children[0].value.as_deref(), Some("itu"));
        let ast = p("for(var k in o){} for(var v of xs){}");
        assert_eq!(ast.root.children[0].kind, ForInStatement);
        assert_eq!(ast.root.children[1].kind, ForOfStatement);
    }

    #[test]
    fn loops_counted() {
        let ast = p("for(;;){}while(1){}");
        let stats = crate::ast::ast_stats(&ast);
        assert_eq!(stats.loop_count, 2);
    }

    #[test]
    fn branch_and_statement_counts() {
        let ast = p("if(x){y()}");
        let stats = crate::ast::ast_stats(&ast);
        assert_eq!(stats.branch_count, 1);
        assert!(stats.statement_count >= 2);
    }

    #[test]
    fn string_cooking() {
        let ast = p(r#"var s = "\x61b\u{63}\n";"#);
        let lit = &ast.root.children[0].children[0].children[1];
        assert_eq!(lit.kind, StringLiteral);
        assert_eq!(lit.value.as_deref(), Some("abc\n"));
    }

    #[test]
    fn object_literals() {
        let ast = p("var o = {a: 1, \"b\": 2, 3: x, c};");
        let obj = &ast.root.children[0].children[0].children[1];
        assert_eq!(obj.kind, ObjectExpression);
        assert_eq!(obj.children.len(), 4);
        assert_eq!(obj.children[3].value.as_deref(), Some("shorthand"));
    }

    #[test]
    fn switch_and_try() {
        let ast = p("switch(x){case 1: a(); break; default: b()} try{f()}catch(e){g()}finally{h()}");
        let sw = &ast.root.children[0];
        assert_eq!(sw.kind, SwitchStatement);
        assert_eq!(sw.children.len(), 3); // discriminant + 2 cases
        assert_eq!(sw.children[2].value.as_deref(), Some("default"));
        let tr = &ast.root.children[1];
        assert_eq!(tr.children.len(), 3); // block, catch, finally
        assert_eq!(tr.children[1].kind, CatchClause);
    }

    #[test]
    fn unsupported_constructs_error() {
        assert!(parse_str("class A {}").is_err());
        assert!(parse_str("function f(...args) {}").is_err());
        assert!(parse_str("import x from 'y';").is_err());
    }

    #[test]
    fn new_expressions() {
        let ast = p("new Foo(1); new a.b.C; new Date().getTime();");
        assert_eq!(ast.root.children[0].children[0].kind, NewExpression);
        let bare = &ast.root.children[1].children[0];
        assert_eq!(bare.kind, NewExpression);
        assert_eq!(bare.children.len(), 1);
        // `new Date().getTime()` — the call applies to the new expression
        let chained = &ast.root.children[2].children[0];
        assert_eq!(chained.kind, CallExpression);
    }

    #[test]
    fn sequence_and_conditional() {
        let ast = p("a = (b, c); x = a ? 1 : 2;");
        let seq = &ast.root.children[0].children[0].children[1];
        assert_eq!(seq.kind, SequenceExpression);
        let cond = &ast.root.children[1].children[0].children[1];
        assert_eq!(cond.kind, ConditionalExpression);
    }

    #[test]
    fn node_count_matches_reachable() {
        let ast = p("var a=1; function f(){ for(var i=0;i<2;i++){ a += i; } } f();");
        assert_eq!(ast.node_count, ast.root.count());
    }
}
