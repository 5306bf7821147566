//! JavaScript tokenizer.
//!
//! Produces the full token stream including comments (flagged, so the
//! entropy scorer can exclude them). Lexemes are exact source slices:
//! concatenating all lexemes plus the skipped whitespace reproduces the
//! input. Lines are 1-based, columns 0-based, counted in characters.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::source::SourceFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TokenKind {
    Identifier,
    Keyword,
    NumericLiteral,
    StringLiteral,
    RegexLiteral,
    TemplateLiteral,
    Punctuator,
    Comment,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokenKind,
    /// Exact source text of the token.
    pub lexeme: String,
    /// 1-based start line.
    pub line: u32,
    /// 0-based start column.
    pub column: u32,
    /// True when a line terminator (or a comment containing one) separates
    /// this token from the previous one. Drives semicolon insertion.
    pub newline_before: bool,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("lex error at {line}:{column}: {reason}")]
pub struct LexError {
    pub line: u32,
    pub column: u32,
    pub reason: String,
}

/// Reserved words lexed as [`TokenKind::Keyword`].
///
/// `of` and `get`/`set` are contextual in JavaScript and stay identifiers;
/// the parser special-cases them where the grammar needs to.
pub const KEYWORDS: &[&str] = &[
    "break", "case", "catch", "class", "const", "continue", "debugger", "default", "delete", "do",
    "else", "enum", "export", "extends", "false", "finally", "for", "function", "if", "import",
    "in", "instanceof", "let", "new", "null", "return", "super", "switch", "this", "throw",
    "true", "try", "typeof", "var", "void", "while", "with", "yield",
];

fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

fn is_id_start(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphabetic()
}

fn is_id_continue(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphanumeric()
}

fn is_line_terminator(c: char) -> bool {
    matches!(c, '\n' | '\r' | '\u{2028}' | '\u{2029}')
}

fn is_whitespace(c: char) -> bool {
    matches!(c, ' ' | '\t' | '\u{000B}' | '\u{000C}' | '\u{00A0}' | '\u{FEFF}')
        || c.is_whitespace()
}

/// Tokenize a source file. Comments are included in the stream.
pub fn tokenize(source: &SourceFile) -> Result<Vec<Token>, LexError> {
    Lexer::new(&source.text).run()
}

/// Tokenize a bare string (used by stages that re-lex intermediate code).
pub fn tokenize_str(text: &str) -> Result<Vec<Token>, LexError> {
    Lexer::new(text).run()
}

struct Lexer<'a> {
    chars: Vec<char>,
    text: &'a str,
    /// Byte offset of each char, plus a sentinel at the end.
    byte_offsets: Vec<usize>,
    pos: usize,
    line: u32,
    column: u32,
    pending_newline: bool,
    tokens: Vec<Token>,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        let mut chars = Vec::with_capacity(text.len());
        let mut byte_offsets = Vec::with_capacity(text.len() + 1);
        for (off, c) in text.char_indices() {
            byte_offsets.push(off);
            chars.push(c);
        }
        byte_offsets.push(text.len());
        Lexer {
            chars,
            text,
            byte_offsets,
            pos: 0,
            line: 1,
            column: 0,
            pending_newline: false,
            tokens: Vec::new(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    /// Advance one char, keeping line/column in sync. `\r\n` is one break.
    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if is_line_terminator(c) {
            if c == '\r' && self.peek() == Some('\n') {
                // column bookkeeping happens on the '\n' half
                self.column += 1;
            } else {
                self.line += 1;
                self.column = 0;
            }
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn slice(&self, from: usize, to: usize) -> String {
        self.text[self.byte_offsets[from]..self.byte_offsets[to]].to_string()
    }

    fn error_at(&self, line: u32, column: u32, reason: impl Into<String>) -> LexError {
        LexError {
            line,
            column,
            reason: reason.into(),
        }
    }

    fn push(&mut self, kind: TokenKind, start: usize, line: u32, column: u32) {
        let lexeme = self.slice(start, self.pos);
        let newline_before = self.pending_newline;
        self.pending_newline = false;
        self.tokens.push(Token {
            kind,
            lexeme,
            line,
            column,
            newline_before,
        });
    }

    /// Last non-comment token, for regex-vs-division disambiguation.
    fn prev_significant(&self) -> Option<&Token> {
        self.tokens.iter().rev().find(|t| t.kind != TokenKind::Comment)
    }

    fn regex_allowed(&self) -> bool {
        match self.prev_significant() {
            None => true,
            Some(t) => match t.kind {
                TokenKind::Punctuator => !matches!(t.lexeme.as_str(), ")" | "]" | "}" | "++" | "--"),
                TokenKind::Keyword => {
                    !matches!(t.lexeme.as_str(), "this" | "true" | "false" | "null" | "super")
                }
                _ => false,
            },
        }
    }

    fn run(mut self) -> Result<Vec<Token>, LexError> {
        while let Some(c) = self.peek() {
            if is_line_terminator(c) {
                self.pending_newline = true;
                self.bump();
                continue;
            }
            if is_whitespace(c) {
                self.bump();
                continue;
            }
            let (start, line, column) = (self.pos, self.line, self.column);
            if c == '/' {
                match self.peek_at(1) {
                    Some('/') => {
                        while let Some(c) = self.peek() {
                            if is_line_terminator(c) {
                                break;
                            }
                            self.bump();
                        }
                        self.push(TokenKind::Comment, start, line, column);
                        continue;
                    }
                    Some('*') => {
                        self.bump();
                        self.bump();
                        let mut closed = false;
                        let mut crossed_line = false;
                        while let Some(c) = self.peek() {
                            if c == '*' && self.peek_at(1) == Some('/') {
                                self.bump();
                                self.bump();
                                closed = true;
                                break;
                            }
                            crossed_line |= is_line_terminator(c);
                            self.bump();
                        }
                        if !closed {
                            return Err(self.error_at(line, column, "unterminated block comment"));
                        }
                        self.push(TokenKind::Comment, start, line, column);
                        // a multi-line comment acts as a line terminator for ASI
                        self.pending_newline |= crossed_line;
                        continue;
                    }
                    _ if self.regex_allowed() => {
                        self.lex_regex(start, line, column)?;
                        continue;
                    }
                    _ => {}
                }
            }
            if is_id_start(c) {
                self.bump();
                while self.peek().is_some_and(is_id_continue) {
                    self.bump();
                }
                let word = self.slice(start, self.pos);
                let kind = if is_keyword(&word) {
                    TokenKind::Keyword
                } else {
                    TokenKind::Identifier
                };
                self.push(kind, start, line, column);
            } else if c.is_ascii_digit() || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())) {
                self.lex_number(start, line, column)?;
            } else if c == '"' || c == '\'' {
                self.lex_string(start, line, column)?;
            } else if c == '`' {
                self.lex_template(start, line, column)?;
            } else {
                self.lex_punctuator(start, line, column)?;
            }
        }
        Ok(self.tokens)
    }

    fn lex_number(&mut self, start: usize, line: u32, column: u32) -> Result<(), LexError> {
        let first = self.bump().unwrap();
        if first == '0' && matches!(self.peek(), Some('x' | 'X' | 'o' | 'O' | 'b' | 'B')) {
            self.bump();
            while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                self.bump();
            }
        } else {
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
            if first != '.' && self.peek() == Some('.') {
                self.bump();
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.bump();
                }
            }
            if matches!(self.peek(), Some('e' | 'E')) {
                let mark = self.pos;
                self.bump();
                if matches!(self.peek(), Some('+' | '-')) {
                    self.bump();
                }
                if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        self.bump();
                    }
                } else {
                    // not an exponent after all (e.g. `1e` followed by identifier)
                    self.pos = mark;
                }
            }
        }
        self.push(TokenKind::NumericLiteral, start, line, column);
        Ok(())
    }

    fn lex_string(&mut self, start: usize, line: u32, column: u32) -> Result<(), LexError> {
        let quote = self.bump().unwrap();
        loop {
            match self.peek() {
                None => return Err(self.error_at(line, column, "unterminated string literal")),
                Some(c) if c == quote => {
                    self.bump();
                    break;
                }
                Some('\\') => {
                    self.bump();
                    if self.peek().is_none() {
                        return Err(self.error_at(line, column, "unterminated string literal"));
                    }
                    self.bump();
                }
                Some(c) if c == '\n' || c == '\r' => {
                    return Err(self.error_at(line, column, "unterminated string literal"));
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
        self.push(TokenKind::StringLiteral, start, line, column);
        Ok(())
    }

    /// Lex a whole template literal, including `${...}` substitutions, as a
    /// single token. Substitutions are brace-balanced; nested templates and
    /// string literals inside them are skipped correctly.
    fn lex_template(&mut self, start: usize, line: u32, column: u32) -> Result<(), LexError> {
        self.bump(); // opening backtick
        self.scan_template_body(line, column)?;
        self.push(TokenKind::TemplateLiteral, start, line, column);
        Ok(())
    }

    fn scan_template_body(&mut self, line: u32, column: u32) -> Result<(), LexError> {
        loop {
            match self.peek() {
                None => return Err(self.error_at(line, column, "unterminated template literal")),
                Some('`') => {
                    self.bump();
                    return Ok(());
                }
                Some('\\') => {
                    self.bump();
                    if self.peek().is_none() {
                        return Err(self.error_at(line, column, "unterminated template literal"));
                    }
                    self.bump();
                }
                Some('$') if self.peek_at(1) == Some('{') => {
                    self.bump();
                    self.bump();
                    self.scan_substitution(line, column)?;
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
    }

    fn scan_substitution(&mut self, line: u32, column: u32) -> Result<(), LexError> {
        let mut depth = 1usize;
        loop {
            match self.peek() {
                None => return Err(self.error_at(line, column, "unterminated template literal")),
                Some('{') => {
                    depth += 1;
                    self.bump();
                }
                Some('}') => {
                    depth -= 1;
                    self.bump();
                    if depth == 0 {
                        return Ok(());
                    }
                }
                Some('`') => {
                    self.bump();
                    self.scan_template_body(line, column)?;
                }
                Some(q @ ('"' | '\'')) => {
                    self.bump();
                    loop {
                        match self.peek() {
                            None => {
                                return Err(self.error_at(
                                    line,
                                    column,
                                    "unterminated template literal",
                                ))
                            }
                            Some('\\') => {
                                self.bump();
                                self.bump();
                            }
                            Some(c) if c == q => {
                                self.bump();
                                break;
                            }
                            Some(_) => {
                                self.bump();
                            }
                        }
                    }
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
    }

    fn lex_regex(&mut self, start: usize, line: u32, column: u32) -> Result<(), LexError> {
        self.bump(); // opening slash
        let mut in_class = false;
        loop {
            match self.peek() {
                None => return Err(self.error_at(line, column, "unterminated regular expression")),
                Some(c) if is_line_terminator(c) => {
                    return Err(self.error_at(line, column, "unterminated regular expression"));
                }
                Some('\\') => {
                    self.bump();
                    if self.peek().is_none_or(is_line_terminator) {
                        return Err(self.error_at(line, column, "unterminated regular expression"));
                    }
                    self.bump();
                }
                Some('[') => {
                    in_class = true;
                    self.bump();
                }
                Some(']') => {
                    in_class = false;
                    self.bump();
                }
                Some('/') if !in_class => {
                    self.bump();
                    break;
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
        while self.peek().is_some_and(is_id_continue) {
            self.bump();
        }
        self.push(TokenKind::RegexLiteral, start, line, column);
        Ok(())
    }

    fn lex_punctuator(&mut self, start: usize, line: u32, column: u32) -> Result<(), LexError> {
        const PUNCTUATORS: &[&str] = &[
            ">>>=", "===", "!==", ">>>", "...", "<<=", ">>=", "**=", "=>", "==", "!=", "<=", ">=",
            "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
            "**", "{", "}", "(", ")", "[", "]", ";", ",", "<", ">", "+", "-", "*", "/", "%", "&",
            "|", "^", "!", "~", "?", ":", "=", ".",
        ];
        for p in PUNCTUATORS {
            let len = p.chars().count();
            if self.chars[self.pos..].starts_with(&p.chars().collect::<Vec<_>>()[..]) {
                for _ in 0..len {
                    self.bump();
                }
                self.push(TokenKind::Punctuator, start, line, column);
                return Ok(());
            }
        }
        Err(self.error_at(
            line,
            column,
            format!("unexpected character '{}'", self.peek().unwrap()),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(s: &str) -> Vec<Token> {
        tokenize_str(s).unwrap()
    }

    fn kinds(s: &str) -> Vec<(TokenKind, String)> {
        lex(s).into_iter().map(|t| (t.kind, t.lexeme)).collect()
    }

    #[test]
    fn basic_statement() {
        use TokenKind::*;
        assert_eq!(
            kinds("var a=1;"),
            vec![
                (Keyword, "var".into()),
                (Identifier, "a".into()),
                (Punctuator, "=".into()),
                (NumericLiteral, "1".into()),
                (Punctuator, ";".into()),
            ]
        );
    }

    #[test]
    fn empty_input() {
        assert!(lex("").is_empty());
    }

    #[test]
    fn unterminated_string_errors() {
        let err = tokenize_str("\"abc").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.reason.contains("unterminated string"));
    }

    #[test]
    fn unterminated_template_errors() {
        assert!(tokenize_str("`abc ${x").is_err());
    }

    #[test]
    fn lexeme_concatenation_reproduces_source() {
        let src = "var a = 1; // note\nfunction f(x) { return x + 'st\\'r'; }\nlet r = /a[/]b/g;\nlet t = `tpl ${a + `${x}`} end`;";
        let toks = lex(src);
        let mut rebuilt = String::new();
        let mut cursor = 0usize;
        let chars: Vec<char> = src.chars().collect();
        let mut positions: Vec<(u32, u32)> = Vec::new();
        // walk tokens in order, interleaving skipped chars
        for t in &toks {
            positions.push((t.line, t.column));
            // find the token's chars starting at `cursor` by matching lexeme
            let lex_chars: Vec<char> = t.lexeme.chars().collect();
            while !chars[cursor..].starts_with(&lex_chars[..]) {
                rebuilt.push(chars[cursor]);
                cursor += 1;
            }
            rebuilt.push_str(&t.lexeme);
            cursor += lex_chars.len();
        }
        rebuilt.extend(&chars[cursor..]);
        assert_eq!(rebuilt, src);
        // position monotonicity
        for w in positions.windows(2) {
            assert!(w[0] <= w[1], "positions not monotone: {:?}", w);
        }
    }

    #[test]
    fn regex_vs_division() {
        let t = kinds("a / b; /re/g.test(a)");
        assert!(t.iter().any(|(k, l)| *k == TokenKind::Punctuator && l == "/"));
        assert!(t.iter().any(|(k, l)| *k == TokenKind::RegexLiteral && l == "/re/g"));
        // after `=` a slash starts a regex
        let t = kinds("x = /ab/;");
        assert!(t.iter().any(|(k, _)| *k == TokenKind::RegexLiteral));
    }

    #[test]
    fn comments_flagged_and_newline_tracking() {
        let toks = lex("a\n// c\nb /* x\ny */ c");
        let a = &toks[0];
        assert!(!a.newline_before);
        let b = toks.iter().find(|t| t.lexeme == "b").unwrap();
        assert!(b.newline_before);
        // multi-line block comment sets the flag on the following token
        let c = toks.iter().filter(|t| t.lexeme == "c").last().unwrap();
        assert!(c.newline_before);
        assert!(toks.iter().any(|t| t.kind == TokenKind::Comment));
    }

    #[test]
    fn numeric_forms() {
        for s in ["0", "123", "1.5", ".5", "1.", "0x1F", "0b101", "0o17", "1e3", "2.5e-4"] {
            let t = lex(s);
            assert_eq!(t.len(), 1, "{}", s);
            assert_eq!(t[0].kind, TokenKind::NumericLiteral);
            assert_eq!(t[0].lexeme, s);
        }
    }

    #[test]
    fn columns_are_zero_based() {
        let toks = lex("ab cd");
        assert_eq!(toks[0].column, 0);
        assert_eq!(toks[1].column, 3);
        assert_eq!(toks[0].line, 1);
    }
}
