//! Reader for clause notation: `f(A,B):-right(A,C),f(C,B).`
//!
//! Lowercase identifiers are predicate/constant names, uppercase (or `_`)
//! start variables, lists use brackets. Variables are numbered by first
//! occurrence within each clause (or standalone term/atom).

use crate::metarule::classify_clause;
use crate::term::{Atom, Clause, Symbol, Term};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {at}: {msg}")]
pub struct ParseError {
    pub at: usize,
    pub msg: String,
}

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
    vars: HashMap<String, u32>,
}

impl<'a> Reader<'a> {
    fn new(src: &'a str) -> Self {
        Reader {
            src: src.as_bytes(),
            pos: 0,
            vars: HashMap::new(),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            at: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", b as char))
        }
    }

    fn eat_opt(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .map(|b| b.is_ascii_alphanumeric() || b == b'_')
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn var_id(&mut self, name: String) -> u32 {
        let next = self.vars.len() as u32;
        *self.vars.entry(name).or_insert(next)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let mut items = Vec::new();
                if !self.eat_opt(b']') {
                    loop {
                        items.push(self.term()?);
                        if self.eat_opt(b']') {
                            break;
                        }
                        self.eat(b',')?;
                    }
                }
                Ok(Term::List(items))
            }
            Some(b'-') => {
                self.pos += 1;
                match self.term()? {
                    Term::Int(i) => Ok(Term::Int(-i)),
                    _ => self.err("'-' must precede an integer"),
                }
            }
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().map(|b| b.is_ascii_digit()).unwrap_or(false) {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                text.parse::<i64>()
                    .map(Term::Int)
                    .or_else(|_| self.err("integer out of range"))
            }
            Some(b) if b.is_ascii_uppercase() || b == b'_' => {
                let name = self.ident();
                Ok(Term::Var(self.var_id(name)))
            }
            Some(b) if b.is_ascii_lowercase() => {
                let name = self.ident();
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let mut args = Vec::new();
                    loop {
                        args.push(self.term()?);
                        if self.eat_opt(b')') {
                            break;
                        }
                        self.eat(b',')?;
                    }
                    Ok(Term::Struct(Symbol::new(&name), args))
                } else {
                    Ok(Term::atom(&name))
                }
            }
            _ => self.err("expected a term"),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        self.skip_ws();
        if !self.peek().map(|b| b.is_ascii_lowercase()).unwrap_or(false) {
            return self.err("expected a predicate name");
        }
        let name = self.ident();
        let mut args = Vec::new();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                args.push(self.term()?);
                if self.eat_opt(b')') {
                    break;
                }
                self.eat(b',')?;
            }
        }
        Ok(Atom {
            pred: Symbol::new(&name),
            args,
        })
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        self.vars.clear();
        let head = self.atom()?;
        let mut body = Vec::new();
        self.skip_ws();
        if self.peek() == Some(b':') {
            self.pos += 1;
            self.eat(b'-')?;
            loop {
                body.push(self.atom()?);
                if !self.eat_opt(b',') {
                    break;
                }
            }
        }
        self.eat(b'.')?;
        let origin = classify_clause(&head, &body);
        Ok(Clause { head, body, origin })
    }
}

pub fn parse_term(s: &str) -> Result<Term, ParseError> {
    let mut r = Reader::new(s);
    let t = r.term()?;
    if r.at_end() {
        Ok(t)
    } else {
        r.err("trailing input after term")
    }
}

pub fn parse_atom(s: &str) -> Result<Atom, ParseError> {
    let mut r = Reader::new(s);
    let a = r.atom()?;
    if r.at_end() {
        Ok(a)
    } else {
        r.err("trailing input after atom")
    }
}

pub fn parse_clause(s: &str) -> Result<Clause, ParseError> {
    let mut r = Reader::new(s);
    let c = r.clause()?;
    if r.at_end() {
        Ok(c)
    } else {
        r.err("trailing input after clause")
    }
}

/// Whitespace-separated clauses, each ending in `.`.
pub fn parse_program(s: &str) -> Result<Vec<Clause>, ParseError> {
    let mut r = Reader::new(s);
    let mut clauses = Vec::new();
    while !r.at_end() {
        clauses.push(r.clause()?);
    }
    Ok(clauses)
}
