//! Shared token stream for the Kotlin-style and Java-style frontends.
//!
//! Keywords are not distinguished here; each parser checks identifier
//! text against its own keyword set. Tokens remember whether a newline
//! preceded them so the Kotlin parser can split statements.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{path}:{line}:{col}: {message}")]
pub struct ParseError {
    pub path: String,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl ParseError {
    pub fn new(path: &str, line: u32, col: u32, message: impl Into<String>) -> Self {
        ParseError {
            path: path.to_string(),
            line,
            col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Int,
    Long,
    Float,
    Double,
    Str,
    Char,
    /// Punctuation or operator; the text carries the exact symbol.
    Punct,
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: u32,
    pub col: u32,
    pub newline_before: bool,
}

impl Token {
    pub fn is_punct(&self, sym: &str) -> bool {
        self.kind == TokenKind::Punct && self.text == sym
    }

    pub fn is_ident(&self, word: &str) -> bool {
        self.kind == TokenKind::Ident && self.text == word
    }
}

const MULTI_PUNCTS: [&str; 14] = [
    "->", "::", "==", "!=", "<=", ">=", "&&", "||", "?:", "?.", "..", "+=", "-=", "!!",
];

/// Tokenizes source text; comments and whitespace are dropped, nested
/// block comments are accepted.
pub fn tokenize(source: &str, path: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut newline_pending = false;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
                newline_pending = true;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' && i + 1 < chars.len() && chars[i + 1] == '/' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c == '/' && i + 1 < chars.len() && chars[i + 1] == '*' {
            let (start_line, start_col) = (line, col);
            bump!();
            bump!();
            let mut depth = 1;
            while i < chars.len() && depth > 0 {
                if chars[i] == '/' && i + 1 < chars.len() && chars[i + 1] == '*' {
                    depth += 1;
                    bump!();
                    bump!();
                } else if chars[i] == '*' && i + 1 < chars.len() && chars[i + 1] == '/' {
                    depth -= 1;
                    bump!();
                    bump!();
                } else {
                    bump!();
                }
            }
            if depth > 0 {
                return Err(ParseError::new(
                    path,
                    start_line,
                    start_col,
                    "unterminated block comment",
                ));
            }
            continue;
        }
        let (tok_line, tok_col) = (line, col);
        let nl = newline_pending || tokens.is_empty();
        newline_pending = false;
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                bump!();
            }
            tokens.push(Token {
                kind: TokenKind::Ident,
                text: chars[start..i].iter().collect(),
                line: tok_line,
                col: tok_col,
                newline_before: nl,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            let mut is_float = false;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '_') {
                bump!();
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                is_float = true;
                bump!();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    bump!();
                }
            }
            let mut kind = if is_float {
                TokenKind::Double
            } else {
                TokenKind::Int
            };
            if i < chars.len() {
                match chars[i] {
                    'L' | 'l' if !is_float => {
                        kind = TokenKind::Long;
                        bump!();
                    }
                    'f' | 'F' => {
                        kind = TokenKind::Float;
                        bump!();
                    }
                    'd' | 'D' if is_float => {
                        bump!();
                    }
                    _ => {}
                }
            }
            tokens.push(Token {
                kind,
                text: chars[start..i].iter().collect(),
                line: tok_line,
                col: tok_col,
                newline_before: nl,
            });
            continue;
        }
        if c == '"' {
            bump!();
            let start = i;
            while i < chars.len() && chars[i] != '"' {
                if chars[i] == '\\' && i + 1 < chars.len() {
                    bump!();
                }
                if chars[i] == '\n' {
                    return Err(ParseError::new(
                        path,
                        tok_line,
                        tok_col,
                        "unterminated string literal",
                    ));
                }
                bump!();
            }
            if i >= chars.len() {
                return Err(ParseError::new(
                    path,
                    tok_line,
                    tok_col,
                    "unterminated string literal",
                ));
            }
            let text: String = chars[start..i].iter().collect();
            bump!(); // closing quote
            tokens.push(Token {
                kind: TokenKind::Str,
                text,
                line: tok_line,
                col: tok_col,
                newline_before: nl,
            });
            continue;
        }
        if c == '\'' {
            bump!();
            let start = i;
            while i < chars.len() && chars[i] != '\'' {
                if chars[i] == '\\' && i + 1 < chars.len() {
                    bump!();
                }
                bump!();
            }
            if i >= chars.len() {
                return Err(ParseError::new(
                    path,
                    tok_line,
                    tok_col,
                    "unterminated character literal",
                ));
            }
            let text: String = chars[start..i].iter().collect();
            bump!();
            tokens.push(Token {
                kind: TokenKind::Char,
                text,
                line: tok_line,
                col: tok_col,
                newline_before: nl,
            });
            continue;
        }
        // Punctuation: try two-character symbols first.
        if i + 1 < chars.len() {
            let two: String = chars[i..i + 2].iter().collect();
            if MULTI_PUNCTS.contains(&two.as_str()) {
                bump!();
                bump!();
                tokens.push(Token {
                    kind: TokenKind::Punct,
                    text: two,
                    line: tok_line,
                    col: tok_col,
                    newline_before: nl,
                });
                continue;
            }
        }
        bump!();
        tokens.push(Token {
            kind: TokenKind::Punct,
            text: c.to_string(),
            line: tok_line,
            col: tok_col,
            newline_before: nl,
        });
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        text: String::new(),
        line,
        col,
        newline_before: newline_pending,
    });
    Ok(tokens)
}

/// Cursor over a token stream with single-token lookahead helpers.
pub struct TokenCursor<'a> {
    pub tokens: Vec<Token>,
    pub pos: usize,
    pub path: &'a str,
}

impl<'a> TokenCursor<'a> {
    pub fn new(source: &str, path: &'a str) -> Result<Self, ParseError> {
        Ok(TokenCursor {
            tokens: tokenize(source, path)?,
            pos: 0,
            path,
        })
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    pub fn peek_at(&self, offset: usize) -> &Token {
        &self.tokens[(self.pos + offset).min(self.tokens.len() - 1)]
    }

    pub fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos.min(self.tokens.len() - 1)].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    pub fn at_eof(&self) -> bool {
        self.peek().kind == TokenKind::Eof
    }

    pub fn eat_punct(&mut self, sym: &str) -> bool {
        if self.peek().is_punct(sym) {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn eat_ident(&mut self, word: &str) -> bool {
        if self.peek().is_ident(word) {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn expect_punct(&mut self, sym: &str) -> Result<Token, ParseError> {
        if self.peek().is_punct(sym) {
            Ok(self.advance())
        } else {
            let t = self.peek();
            Err(ParseError::new(
                self.path,
                t.line,
                t.col,
                format!("expected `{sym}`, found `{}`", display_text(t)),
            ))
        }
    }

    pub fn expect_ident(&mut self) -> Result<Token, ParseError> {
        if self.peek().kind == TokenKind::Ident {
            Ok(self.advance())
        } else {
            let t = self.peek();
            Err(ParseError::new(
                self.path,
                t.line,
                t.col,
                format!("expected identifier, found `{}`", display_text(t)),
            ))
        }
    }

    /// Consumes tokens until bracket depth returns to zero and a
    /// statement boundary (newline, `;`, `}` or EOF) is reached. Always
    /// consumes at least one token; errors if EOF arrives while a
    /// bracket is still open.
    pub fn skip_balanced(&mut self) -> Result<(), ParseError> {
        let mut depth: i32 = 0;
        let mut consumed_any = false;
        let (start_line, start_col) = (self.peek().line, self.peek().col);
        loop {
            let t = self.peek().clone();
            match t.kind {
                TokenKind::Eof => {
                    if depth > 0 {
                        return Err(ParseError::new(
                            self.path,
                            start_line,
                            start_col,
                            "unbalanced delimiters",
                        ));
                    }
                    return Ok(());
                }
                TokenKind::Punct => match t.text.as_str() {
                    "(" | "{" | "[" => {
                        depth += 1;
                        self.advance();
                        consumed_any = true;
                    }
                    ")" | "}" | "]" => {
                        if depth == 0 {
                            if !consumed_any {
                                // Stray closer with nothing before it: eat it.
                                self.advance();
                            }
                            // Otherwise it belongs to the enclosing scope.
                            return Ok(());
                        }
                        depth -= 1;
                        self.advance();
                        consumed_any = true;
                        if depth == 0 {
                            return Ok(());
                        }
                    }
                    ";" if depth == 0 => {
                        self.advance();
                        return Ok(());
                    }
                    _ => {
                        self.advance();
                        consumed_any = true;
                    }
                },
                _ => {
                    if depth == 0 && t.newline_before && consumed_any {
                        return Ok(());
                    }
                    self.advance();
                    consumed_any = true;
                }
            }
        }
    }
}

fn display_text(t: &Token) -> String {
    if t.kind == TokenKind::Eof {
        "<eof>".to_string()
    } else {
        t.text.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_identifiers_puncts_and_newline_flags() {
        let toks = tokenize("val b = Bar(1)\nb.x", "t.kt").unwrap();
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(
            texts,
            vec!["val", "b", "=", "Bar", "(", "1", ")", "b", ".", "x", ""]
        );
        let b2 = &toks[7];
        assert!(b2.newline_before);
        assert_eq!(b2.line, 2);
    }

    #[test]
    fn arrow_is_one_token() {
        let toks = tokenize("Bar.() -> Int", "t.kt").unwrap();
        assert!(toks.iter().any(|t| t.is_punct("->")));
    }

    #[test]
    fn comments_are_dropped_including_nested_blocks() {
        let toks = tokenize("a /* x /* y */ z */ b // tail\nc", "t.kt").unwrap();
        let idents: Vec<&str> = toks
            .iter()
            .filter(|t| t.kind == TokenKind::Ident)
            .map(|t| t.text.as_str())
            .collect();
        assert_eq!(idents, vec!["a", "b", "c"]);
    }

    #[test]
    fn unterminated_string_is_an_error_with_position() {
        let err = tokenize("val s = \"oops", "t.kt").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("unterminated"));
    }

    #[test]
    fn skip_balanced_stops_at_statement_boundary() {
        let mut cur = TokenCursor::new("foo(bar { baz })\nnext", "t.kt").unwrap();
        cur.skip_balanced().unwrap();
        assert!(cur.peek().is_ident("next"));
    }

    #[test]
    fn skip_balanced_detects_unbalanced_input() {
        let mut cur = TokenCursor::new("foo(bar", "t.kt").unwrap();
        assert!(cur.skip_balanced().is_err());
    }
}
