//! Tokenizer and parse-error type shared by the formula, context and proof
//! readers.

use std::fmt;

use thiserror::Error;

/// A syntax error with the 1-based line and column where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    LParen,
    RParen,
    Lt,
    Gt,
    Semi,
    Comma,
    Colon,
    Turnstile,
    Backslash,
    Slash,
    Lolli,
    Star,
    /// The identifier `o`, reserved for the non-commutative product.
    Odot,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Turnstile => f.write_str("`|-`"),
            Tok::Backslash => f.write_str("`\\`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Lolli => f.write_str("`-o`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Odot => f.write_str("`o`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next();
        if c == Some('\n') {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        c
    }
}

/// Token cursor over a fully lexed input.
#[derive(Debug, Clone)]
pub(crate) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        let mut cur = Cursor { chars: src.chars().peekable(), line: 1, column: 1 };
        let mut toks = Vec::new();
        while let Some(c) = cur.peek() {
            let (line, column) = (cur.line, cur.column);
            let err = |message: String| ParseError { line, column, message };
            if c.is_whitespace() {
                cur.bump();
                continue;
            }
            if c == '#' {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
                continue;
            }
            let tok = if is_ident_start(c) {
                let mut s = String::new();
                while let Some(c) = cur.peek().filter(|&c| is_ident_continue(c)) {
                    s.push(c);
                    cur.bump();
                }
                if s == "o" {
                    Tok::Odot
                } else {
                    Tok::Ident(s)
                }
            } else if c == '"' {
                cur.bump();
                let mut s = String::new();
                loop {
                    match cur.bump() {
                        Some('"') => break,
                        Some('\\') => match cur.bump() {
                            Some(c @ ('"' | '\\')) => s.push(c),
                            _ => return Err(err("bad escape in string".into())),
                        },
                        Some(c) => s.push(c),
                        None => return Err(err("unterminated string".into())),
                    }
                }
                Tok::Str(s)
            } else {
                cur.bump();
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '<' => Tok::Lt,
                    '>' => Tok::Gt,
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    '\\' => Tok::Backslash,
                    '/' => Tok::Slash,
                    '*' => Tok::Star,
                    '|' if cur.peek() == Some('-') => {
                        cur.bump();
                        Tok::Turnstile
                    }
                    '-' if cur.peek() == Some('o') => {
                        cur.bump();
                        Tok::Lolli
                    }
                    _ => return Err(err(format!("unexpected character {c:?}"))),
                }
            };
            toks.push(Spanned { tok, line, column });
        }
        toks.push(Spanned { tok: Tok::Eof, line: cur.line, column: cur.column });
        Ok(Parser { toks, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub(crate) fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}, found {}", self.peek())))
        }
    }

    pub(crate) fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            t => Err(self.error(format!("expected {what}, found {t}"))),
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => Err(self.error(format!("unexpected {t} after end of input"))),
        }
    }

    pub(crate) fn error(&self, message: String) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError { line: s.line, column: s.column, message }
    }
}
