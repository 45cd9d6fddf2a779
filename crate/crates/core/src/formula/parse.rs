//! Recursive-descent parser for the canonical formula grammar.
//!
//! Accepts arbitrary whitespace between tokens and redundant grouping
//! parentheses; `serialize(parse(text))` is the canonical form of `text`.
//! Variables must be bound by an enclosing quantifier; this is checked at
//! parse time. Error offsets are byte positions inside the formula body
//! (between the `$` delimiters).

use super::{Formula, Rel, TapeSymbol, Term};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { offset, message: message.into() })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    RBrace,
    TSub,
    Plus,
    Minus,
    Underscore,
    Rel(Rel),
    Forall,
    Exists,
    Neg,
    Wedge,
    Vee,
    To,
    PiM,
    Ident(String),
    Num(u64),
}

struct Lexer<'a> {
    src: &'a [u8],
    i: usize,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer { src: src.as_bytes(), i: 0 };
        let mut toks = Vec::new();
        while let Some((tok, at)) = lx.next_tok()? {
            toks.push((tok, at));
        }
        Ok(toks)
    }

    fn next_tok(&mut self) -> Result<Option<(Tok, usize)>, ParseError> {
        while self.i < self.src.len() && (self.src[self.i] == b' ' || self.src[self.i] == b'\t') {
            self.i += 1;
        }
        if self.i >= self.src.len() {
            return Ok(None);
        }
        let at = self.i;
        let c = self.src[self.i];
        let tok = match c {
            b'(' => {
                self.i += 1;
                Tok::LParen
            }
            b')' => {
                self.i += 1;
                Tok::RParen
            }
            b',' => {
                self.i += 1;
                Tok::Comma
            }
            b'}' => {
                self.i += 1;
                Tok::RBrace
            }
            b'+' => {
                self.i += 1;
                Tok::Plus
            }
            b'-' => {
                self.i += 1;
                Tok::Minus
            }
            b'_' => {
                self.i += 1;
                Tok::Underscore
            }
            b'=' => {
                self.i += 1;
                Tok::Rel(Rel::Eq)
            }
            b'!' => {
                if self.src.get(self.i + 1) == Some(&b'=') {
                    self.i += 2;
                    Tok::Rel(Rel::Ne)
                } else {
                    return err(at, "expected '=' after '!'");
                }
            }
            b'<' => {
                if self.src.get(self.i + 1) == Some(&b'=') {
                    self.i += 2;
                    Tok::Rel(Rel::Le)
                } else {
                    self.i += 1;
                    Tok::Rel(Rel::Lt)
                }
            }
            b'>' => {
                if self.src.get(self.i + 1) == Some(&b'=') {
                    self.i += 2;
                    Tok::Rel(Rel::Ge)
                } else {
                    self.i += 1;
                    Tok::Rel(Rel::Gt)
                }
            }
            b'\\' => {
                self.i += 1;
                let start = self.i;
                while self.i < self.src.len()
                    && (self.src[self.i].is_ascii_alphabetic() || self.src[self.i] == b'_')
                {
                    self.i += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.i]).unwrap();
                match name {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "neg" => Tok::Neg,
                    "wedge" => Tok::Wedge,
                    "vee" => Tok::Vee,
                    "to" => Tok::To,
                    "pi_M" => Tok::PiM,
                    other => return err(at, format!("unknown command \\{other}")),
                }
            }
            b'0'..=b'9' => {
                let start = self.i;
                while self.i < self.src.len() && self.src[self.i].is_ascii_digit() {
                    self.i += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.i]).unwrap();
                if digits.len() > 1 && digits.starts_with('0') {
                    return err(at, "numeral with leading zero");
                }
                match digits.parse::<u64>() {
                    Ok(n) => Tok::Num(n),
                    Err(_) => return err(at, "numeral out of range"),
                }
            }
            c if c.is_ascii_alphabetic() => {
                // `t_{` introduces a tape-square subscript; any other ident
                // is a variable or state name.
                if c == b't'
                    && self.src.get(self.i + 1) == Some(&b'_')
                    && self.src.get(self.i + 2) == Some(&b'{')
                {
                    self.i += 3;
                    Tok::TSub
                } else {
                    let start = self.i;
                    while self.i < self.src.len() && self.src[self.i].is_ascii_alphanumeric() {
                        self.i += 1;
                    }
                    Tok::Ident(std::str::from_utf8(&self.src[start..self.i]).unwrap().to_string())
                }
            }
            other => return err(at, format!("unexpected character {:?}", other as char)),
        };
        Ok(Some((tok, at)))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    scopes: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map(|(_, a)| *a).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            err(self.at(), format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let exists = matches!(self.peek(), Some(Tok::Exists));
                self.pos += 1;
                let at = self.at();
                let var = match self.bump() {
                    Some(Tok::Ident(v)) => v,
                    _ => return err(at, "expected quantified variable"),
                };
                self.scopes.push(var.clone());
                let body = self.formula()?;
                self.scopes.pop();
                Ok(if exists {
                    Formula::Exists(var, Box::new(body))
                } else {
                    Formula::Forall(var, Box::new(body))
                })
            }
            Some(Tok::Neg) => {
                self.pos += 1;
                Ok(Formula::not(self.formula()?))
            }
            _ => self.cmp_or_group(),
        }
    }

    fn cmp_or_group(&mut self) -> Result<Formula, ParseError> {
        let save = self.pos;
        match self.comparison() {
            Ok(f) => return Ok(f),
            Err(e) => {
                // A comparison and a group both start with '('; retry as a
                // group, keeping the deeper error if that fails too.
                if self.toks.get(save).map(|(t, _)| t) != Some(&Tok::LParen) {
                    return Err(e);
                }
                self.pos = save;
            }
        }
        self.expect(&Tok::LParen, "'('")?;
        let lhs = self.formula()?;
        match self.peek() {
            Some(Tok::RParen) => {
                self.pos += 1;
                Ok(lhs)
            }
            Some(Tok::Wedge) | Some(Tok::Vee) | Some(Tok::To) => {
                let op = self.bump().unwrap();
                let rhs = self.formula()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(match op {
                    Tok::Wedge => Formula::and(lhs, rhs),
                    Tok::Vee => Formula::or(lhs, rhs),
                    _ => Formula::imp(lhs, rhs),
                })
            }
            _ => err(self.at(), "expected connective or ')'"),
        }
    }

    fn comparison(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.term()?;
        let at = self.at();
        let rel = match self.bump() {
            Some(Tok::Rel(r)) => r,
            _ => return err(at, "expected comparison operator"),
        };
        let rhs = self.term()?;
        Ok(Formula::Cmp { lhs, rel, rhs })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let at = self.at();
        match self.peek() {
            Some(Tok::TSub) => {
                self.pos += 1;
                let row = self.term()?;
                self.expect(&Tok::Comma, "','")?;
                let col = self.term()?;
                self.expect(&Tok::RBrace, "'}'")?;
                Ok(Term::square(row, col))
            }
            Some(Tok::PiM) => {
                self.pos += 1;
                self.expect(&Tok::LParen, "'('")?;
                let inner = self.term()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(Term::proj(inner))
            }
            Some(Tok::Underscore) => {
                self.pos += 1;
                Ok(Term::Sym(TapeSymbol::Blank))
            }
            Some(Tok::Rel(Rel::Gt)) => {
                self.pos += 1;
                Ok(Term::Sym(TapeSymbol::LeftEnd))
            }
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                self.maybe_offset(Term::Num(n))
            }
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                if !self.scopes.contains(&name) {
                    return err(at, format!("unbound variable `{name}`"));
                }
                self.maybe_offset(Term::Var(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let save = self.pos;
                if let Ok(t) = self.triple_tail() {
                    return Ok(t);
                }
                self.pos = save;
                let base = self.term()?;
                match self.peek() {
                    // `(i+1)`: the inner term parse already consumed the
                    // offset, leaving just the closing parenthesis.
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(base)
                    }
                    Some(Tok::Plus) | Some(Tok::Minus) => {
                        let delta = if self.peek() == Some(&Tok::Plus) { 1 } else { -1 };
                        self.pos += 1;
                        match self.bump() {
                            Some(Tok::Num(1)) => {}
                            _ => return err(self.at(), "offsets are +1 or -1 only"),
                        }
                        self.expect(&Tok::RParen, "')'")?;
                        Ok(Term::offset(base, delta))
                    }
                    _ => err(self.at(), "expected triple or offset term"),
                }
            }
            _ => err(at, "expected term"),
        }
    }

    /// Bare `base+1` / `base-1` without surrounding parentheses.
    fn maybe_offset(&mut self, base: Term) -> Result<Term, ParseError> {
        let delta = match self.peek() {
            Some(Tok::Plus) => 1,
            Some(Tok::Minus) => -1,
            _ => return Ok(base),
        };
        self.pos += 1;
        match self.bump() {
            Some(Tok::Num(1)) => Ok(Term::offset(base, delta)),
            _ => err(self.at(), "offsets are +1 or -1 only"),
        }
    }

    /// Continues after a consumed '(' when the contents form a triple.
    fn triple_tail(&mut self) -> Result<Term, ParseError> {
        let sym = match self.peek() {
            Some(Tok::Underscore) => {
                self.pos += 1;
                Term::Sym(TapeSymbol::Blank)
            }
            Some(Tok::Rel(Rel::Gt)) => {
                self.pos += 1;
                Term::Sym(TapeSymbol::LeftEnd)
            }
            Some(Tok::Num(n @ (0 | 1))) => {
                let n = *n;
                self.pos += 1;
                Term::Num(n)
            }
            Some(Tok::PiM) => {
                self.pos += 1;
                self.expect(&Tok::LParen, "'('")?;
                let inner = self.term()?;
                self.expect(&Tok::RParen, "')'")?;
                Term::proj(inner)
            }
            _ => return err(self.at(), "expected tape symbol"),
        };
        self.expect(&Tok::Comma, "','")?;
        let at = self.at();
        let state = match self.bump() {
            Some(Tok::Ident(s)) => s,
            _ => return err(at, "expected state name"),
        };
        self.expect(&Tok::Comma, "','")?;
        let at = self.at();
        let flag = match self.bump() {
            Some(Tok::Num(0)) => 0,
            Some(Tok::Num(1)) => 1,
            _ => return err(at, "expected flag 0 or 1"),
        };
        self.expect(&Tok::RParen, "')'")?;
        Ok(Term::Triple { sym: Box::new(sym), state, flag })
    }
}

/// Parses a `$`-delimited formula in the canonical grammar.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    if !text.is_ascii() {
        return err(0, "formula text must be ASCII");
    }
    let bytes = text.as_bytes();
    if bytes.first() != Some(&b'$') {
        return err(0, "expected leading '$'");
    }
    if bytes.len() < 2 || bytes.last() != Some(&b'$') {
        return err(text.len().saturating_sub(1), "expected trailing '$'");
    }
    let body = &text[1..text.len() - 1];
    if let Some(pos) = body.find('$') {
        return err(pos, "unexpected '$' inside formula");
    }
    let toks = Lexer::run(body)?;
    let mut p = Parser { toks, pos: 0, end: body.len(), scopes: Vec::new() };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return err(p.at(), "trailing input after formula");
    }
    Ok(f)
}
