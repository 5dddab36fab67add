//! Whitespace tokenizer shared by every text format. Parentheses are
//! always tokens of their own and `#` starts a comment.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub line: usize,
    pub col: usize,
}

pub fn tokenize(src: &str, first_line: usize) -> Vec<Token> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let mut cur = String::new();
        let mut start = 0;
        for (j, ch) in line.chars().enumerate() {
            if ch == '#' {
                break;
            }
            if ch.is_whitespace() || ch == '(' || ch == ')' {
                if !cur.is_empty() {
                    out.push(Token { text: std::mem::take(&mut cur), line: first_line + i, col: start + 1 });
                }
                if !ch.is_whitespace() {
                    out.push(Token { text: ch.to_string(), line: first_line + i, col: j + 1 });
                }
            } else {
                if cur.is_empty() {
                    start = j;
                }
                cur.push(ch);
            }
        }
        if !cur.is_empty() {
            out.push(Token { text: cur, line: first_line + i, col: start + 1 });
        }
    }
    out
}

pub struct Tokens {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Tokens {
    pub fn new(src: &str) -> Self {
        let toks = tokenize(src, 1);
        let lines = src.lines().count().max(1);
        let last_len = src.lines().last().map(|l| l.chars().count()).unwrap_or(0);
        Tokens { toks, pos: 0, end: (lines, last_len + 1) }
    }

    pub fn from_tokens(toks: Vec<Token>, end: (usize, usize)) -> Self {
        Tokens { toks, pos: 0, end }
    }

    pub fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Token> {
        self.toks.get(self.pos + k)
    }

    pub fn next(&mut self) -> Result<Token> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(self.eof_error("unexpected end of input")),
        }
    }

    pub fn expect(&mut self, text: &str) -> Result<Token> {
        let t = self.next()?;
        if t.text == text {
            Ok(t)
        } else {
            Err(Error::parse(t.line, t.col, format!("expected `{text}`, found `{}`", t.text)))
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(Error::parse(t.line, t.col, format!("trailing token `{}`", t.text))),
        }
    }

    pub fn eof_error(&self, msg: &str) -> Error {
        Error::parse(self.end.0, self.end.1, msg)
    }
}
