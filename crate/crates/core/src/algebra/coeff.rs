//! Coefficient strings such as `1 + 2*g^2`, `-A`, `5*A*B^2`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' integer)?
//! atom   := integer | 'g' | name | '(' expr ')'
//! ```
//!
//! `g` is the field generator. Any other identifier is a placeholder that
//! must be bound by the caller. Integers are reduced mod p.

use std::collections::BTreeMap;

use super::field::{FieldCtx, FieldElement};
use crate::error::{Error, Result};

/// Placeholder values, by name.
pub type Bindings = BTreeMap<String, FieldElement>;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let err = |reason: String| Error::Coefficient {
        input: input.to_string(),
        reason,
    };
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    chars.next();
                }
                out.push(Token::Int(s));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                    s.push(d);
                    chars.next();
                }
                out.push(Token::Ident(s));
            }
            '+' | '-' | '*' | '^' | '(' | ')' => {
                chars.next();
                out.push(match c {
                    '+' => Token::Plus,
                    '-' => Token::Minus,
                    '*' => Token::Star,
                    '^' => Token::Caret,
                    '(' => Token::Open,
                    _ => Token::Close,
                });
            }
            other => return Err(err(format!("unexpected character `{other}`"))),
        }
    }
    if out.is_empty() {
        return Err(err("empty expression".into()));
    }
    Ok(out)
}

struct Parser<'a> {
    field: &'a FieldCtx,
    bindings: &'a Bindings,
    tokens: Vec<Token>,
    pos: usize,
    input: &'a str,
}

impl Parser<'_> {
    fn err(&self, reason: impl Into<String>) -> Error {
        Error::Coefficient {
            input: self.input.to_string(),
            reason: reason.into(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<FieldElement> {
        let f = self.field;
        let mut negate = false;
        match self.peek() {
            Some(Token::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Token::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = f.neg(&acc);
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = f.add(&acc, &t);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = f.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FieldElement> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.field.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FieldElement> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Token::Int(s)) => {
                    let e: u128 = s.parse().map_err(|_| self.err("exponent too large"))?;
                    return Ok(self.field.pow(&base, e));
                }
                _ => return Err(self.err("expected an integer exponent after `^`")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FieldElement> {
        match self.next() {
            Some(Token::Int(s)) => {
                let p = self.field.p();
                let r = s
                    .bytes()
                    .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(self.field.from_int(r as i64))
            }
            Some(Token::Ident(name)) if name == "g" => Ok(self.field.generator()),
            Some(Token::Ident(name)) => self
                .bindings
                .get(&name)
                .cloned()
                .ok_or(Error::UnboundPlaceholder(name)),
            Some(Token::Open) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Token::Close) => Ok(v),
                    _ => Err(self.err("unbalanced parenthesis")),
                }
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

impl FieldCtx {
    /// Parses a coefficient string with no placeholders.
    pub fn parse(&self, input: &str) -> Result<FieldElement> {
        self.parse_with(input, &Bindings::new())
    }

    /// Parses a coefficient string, resolving placeholders from `bindings`.
    pub fn parse_with(&self, input: &str, bindings: &Bindings) -> Result<FieldElement> {
        let mut parser = Parser {
            field: self,
            bindings,
            tokens: tokenize(input)?,
            pos: 0,
            input,
        };
        let v = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(parser.err("trailing input"));
        }
        Ok(v)
    }
}

/// Placeholder names referenced by a coefficient string.
pub fn placeholders(input: &str) -> Result<Vec<String>> {
    Ok(tokenize(input)?
        .into_iter()
        .filter_map(|t| match t {
            Token::Ident(s) if s != "g" => Some(s),
            _ => None,
        })
        .collect())
}
