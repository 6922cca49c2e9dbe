use std::fmt;
use std::ops::Range;

use super::{ScriptError, ScriptErrorKind, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Identifier,
    Number,
    /// Lexeme holds the text between the quotes.
    StringLiteral,
    Punctuation,
    Keyword,
}

const KEYWORDS: &[&str] = &["proc", "repeat", "let"];
const PUNCTUATION: &[char] = &['(', ')', '{', '}', ',', ';', '=', '+', '-', '*', '/'];

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
    /// Byte range in the source, quotes included for strings.
    pub range: Range<usize>,
}

impl Token {
    pub fn is_punct(&self, c: char) -> bool {
        self.kind == TokenKind::Punctuation && self.lexeme.starts_with(c)
    }

    pub fn is_keyword(&self, word: &str) -> bool {
        self.kind == TokenKind::Keyword && self.lexeme == word
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TokenKind::StringLiteral => write!(f, "\"{}\"", self.lexeme),
            _ => write!(f, "`{}`", self.lexeme),
        }
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_second(&self) -> Option<char> {
        let mut it = self.src[self.pos..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span::new(self.line, self.column)
    }

    fn eat_while(&mut self, pred: impl Fn(char) -> bool) {
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
    }
}

/// Splits source text into tokens, dropping whitespace and `//` comments.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ScriptError> {
    let mut cur = Cursor {
        src: source,
        pos: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' && cur.peek_second() == Some('/') {
            cur.eat_while(|c| c != '\n');
            continue;
        }
        let span = cur.span();
        let start = cur.pos;
        let kind = if c.is_ascii_alphabetic() || c == '_' {
            cur.eat_while(|c| c.is_ascii_alphanumeric() || c == '_');
            if KEYWORDS.contains(&&source[start..cur.pos]) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            }
        } else if c.is_ascii_digit() || (c == '.' && cur.peek_second().is_some_and(|d| d.is_ascii_digit())) {
            cur.eat_while(|c| c.is_ascii_digit());
            if cur.peek() == Some('.') && cur.peek_second().is_some_and(|d| d.is_ascii_digit()) {
                cur.bump();
                cur.eat_while(|c| c.is_ascii_digit());
            }
            TokenKind::Number
        } else if c == '"' {
            cur.bump();
            loop {
                match cur.peek() {
                    Some('"') => {
                        cur.bump();
                        break;
                    }
                    Some('\n') | None => {
                        return Err(ScriptError::new(ScriptErrorKind::UnterminatedString, span));
                    }
                    Some(_) => {
                        cur.bump();
                    }
                }
            }
            TokenKind::StringLiteral
        } else if PUNCTUATION.contains(&c) {
            cur.bump();
            TokenKind::Punctuation
        } else {
            return Err(ScriptError::new(ScriptErrorKind::InvalidCharacter(c), span));
        };
        let lexeme = match kind {
            TokenKind::StringLiteral => &source[start + 1..cur.pos - 1],
            _ => &source[start..cur.pos],
        };
        tokens.push(Token {
            kind,
            lexeme: lexeme.to_owned(),
            span,
            range: start..cur.pos,
        });
    }
    Ok(tokens)
}

/// Renders tokens back to source text, one space between tokens.
pub fn detokenize(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| match t.kind {
            TokenKind::StringLiteral => format!("\"{}\"", t.lexeme),
            _ => t.lexeme.clone(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}
