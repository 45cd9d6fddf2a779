//! The tableau first-order language.
//!
//! Terms talk about tape squares `t_{i,j}`, square contents `(sym,state,flag)`,
//! the symbol projection `\pi_M(..)`, and natural-number indices. Formulas are
//! comparisons closed under the usual connectives and quantifiers. Every
//! formula has exactly one canonical ASCII rendering; all length and order
//! notions are defined on that rendering.

mod parse;
mod print;
mod subst;

pub use parse::{parse_formula, ParseError};
pub use subst::{free_vars, is_closed, normalize_term, substitute, substitute_many};

use std::cmp::Ordering;
use std::fmt;

/// Tape alphabet: the two bits, the blank, and the left-end marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TapeSymbol {
    Zero,
    One,
    Blank,
    LeftEnd,
}

impl TapeSymbol {
    pub fn glyph(self) -> char {
        match self {
            TapeSymbol::Zero => '0',
            TapeSymbol::One => '1',
            TapeSymbol::Blank => '_',
            TapeSymbol::LeftEnd => '>',
        }
    }

    pub fn from_glyph(c: char) -> Option<TapeSymbol> {
        match c {
            '0' => Some(TapeSymbol::Zero),
            '1' => Some(TapeSymbol::One),
            '_' => Some(TapeSymbol::Blank),
            '>' => Some(TapeSymbol::LeftEnd),
            _ => None,
        }
    }
}

impl fmt::Display for TapeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.glyph())
    }
}

/// First-order terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// An index variable such as `i`, `j`, `k`, `m`.
    Var(String),
    /// A natural-number numeral.
    Num(u64),
    /// `base+1` or `base-1`; `delta` is always `+1` or `-1`.
    Offset { base: Box<Term>, delta: i8 },
    /// The tape square at `t_{row,col}`.
    Square { row: Box<Term>, col: Box<Term> },
    /// A square content `(sym,state,flag)`. `sym` is a symbol literal or a
    /// projection term; `flag` is 0 or 1.
    Triple { sym: Box<Term>, state: String, flag: u8 },
    /// The symbol projection `\pi_M(term)`.
    Proj(Box<Term>),
    /// A bare tape-symbol literal.
    Sym(TapeSymbol),
}

/// The canonical term for a tape symbol. The bits render as `0`/`1`, which
/// is also how numerals render, so they are represented by numeral terms;
/// `Term::Sym` carries only the blank and the left-end marker.
pub fn sym_term(s: TapeSymbol) -> Term {
    match s {
        TapeSymbol::Zero => Term::Num(0),
        TapeSymbol::One => Term::Num(1),
        TapeSymbol::Blank => Term::Sym(TapeSymbol::Blank),
        TapeSymbol::LeftEnd => Term::Sym(TapeSymbol::LeftEnd),
    }
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn num(n: u64) -> Term {
        Term::Num(n)
    }

    pub fn offset(base: Term, delta: i8) -> Term {
        debug_assert!(delta == 1 || delta == -1);
        Term::Offset { base: Box::new(base), delta }
    }

    pub fn square(row: Term, col: Term) -> Term {
        Term::Square { row: Box::new(row), col: Box::new(col) }
    }

    pub fn triple(sym: Term, state: &str, flag: u8) -> Term {
        debug_assert!(flag <= 1);
        Term::Triple { sym: Box::new(sym), state: state.to_string(), flag }
    }

    pub fn sym_triple(sym: TapeSymbol, state: &str, flag: u8) -> Term {
        Term::triple(sym_term(sym), state, flag)
    }

    pub fn proj(inner: Term) -> Term {
        Term::Proj(Box::new(inner))
    }
}

/// Comparison relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub fn text(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }
}

/// First-order formulas over [`Term`]s.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Cmp { lhs: Term, rel: Rel, rhs: Term },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn cmp(lhs: Term, rel: Rel, rhs: Term) -> Formula {
        Formula::Cmp { lhs, rel, rhs }
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::cmp(lhs, Rel::Eq, rhs)
    }

    pub fn ne(lhs: Term, rhs: Term) -> Formula {
        Formula::cmp(lhs, Rel::Ne, rhs)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::Forall(var.to_string(), Box::new(body))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists(var.to_string(), Box::new(body))
    }

    /// Left-nested conjunction of `parts` in order. Panics on empty input.
    pub fn conj(parts: Vec<Formula>) -> Formula {
        let mut it = parts.into_iter();
        let first = it.next().expect("conj of empty list");
        it.fold(first, Formula::and)
    }

    /// Left-nested disjunction of `parts` in order. Panics on empty input.
    pub fn disj(parts: Vec<Formula>) -> Formula {
        let mut it = parts.into_iter();
        let first = it.next().expect("disj of empty list");
        it.fold(first, Formula::or)
    }

    /// The canonical rendering of this formula.
    pub fn canonical(&self) -> CanonicalText {
        CanonicalText { text: print::render(self) }
    }

    /// ASCII length of the canonical rendering.
    pub fn ascii_len(&self) -> usize {
        self.canonical().ascii_len()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::render(self))
    }
}

/// The canonical ASCII form of a formula. Only the canonical serializer
/// produces values of this type; it round-trips through [`parse_formula`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalText {
    text: String,
}

impl CanonicalText {
    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn ascii_len(&self) -> usize {
        ascii_len(&self.text)
    }

    pub fn bin_len(&self) -> usize {
        bin_len(&self.text)
    }
}

impl fmt::Display for CanonicalText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Number of characters in an ASCII string.
pub fn ascii_len(s: &str) -> usize {
    debug_assert!(s.is_ascii(), "length accounting is defined on ASCII strings");
    s.len()
}

/// Binary length: seven bits per ASCII character.
pub fn bin_len(s: &str) -> usize {
    7 * ascii_len(s)
}

/// Canonical serialization of a formula.
pub fn serialize(f: &Formula) -> CanonicalText {
    f.canonical()
}

/// String order: shorter strings precede longer ones; equal lengths are
/// resolved by dictionary order on ASCII codes. Total.
pub fn string_cmp(x: &str, y: &str) -> Ordering {
    x.len().cmp(&y.len()).then_with(|| x.as_bytes().cmp(y.as_bytes()))
}

/// A finite ordered sequence of formulas, indexed from 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormulaSequence(pub Vec<Formula>);

impl FormulaSequence {
    pub fn new() -> FormulaSequence {
        FormulaSequence(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Formula> {
        self.0.get(i)
    }

    pub fn push(&mut self, f: Formula) {
        self.0.push(f);
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.0.iter()
    }

    /// Sum of the members' canonical ASCII lengths.
    pub fn ascii_len(&self) -> usize {
        self.0.iter().map(Formula::ascii_len).sum()
    }

    /// Concatenation of the members' canonical texts, in order.
    pub fn joined_text(&self) -> String {
        let mut out = String::new();
        for f in &self.0 {
            out.push_str(f.canonical().text());
        }
        out
    }
}

impl From<Vec<Formula>> for FormulaSequence {
    fn from(v: Vec<Formula>) -> FormulaSequence {
        FormulaSequence(v)
    }
}

impl std::ops::Index<usize> for FormulaSequence {
    type Output = Formula;
    fn index(&self, i: usize) -> &Formula {
        &self.0[i]
    }
}

impl<'a> IntoIterator for &'a FormulaSequence {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Sum of member lengths; equals `ascii_len` of the joined text.
pub fn seq_ascii_len(seq: &FormulaSequence) -> usize {
    seq.ascii_len()
}

/// Sequence order: the string order of the concatenated canonical texts.
pub fn seq_cmp(a: &FormulaSequence, b: &FormulaSequence) -> Ordering {
    let (la, lb) = (a.ascii_len(), b.ascii_len());
    la.cmp(&lb).then_with(|| {
        let ta = a.joined_text();
        let tb = b.joined_text();
        ta.as_bytes().cmp(tb.as_bytes())
    })
}

/// Order-preserving concatenation of sequences.
pub fn seq_concat<I: IntoIterator<Item = FormulaSequence>>(parts: I) -> FormulaSequence {
    let mut out = Vec::new();
    for p in parts {
        out.extend(p.0);
    }
    FormulaSequence(out)
}

#[cfg(test)]
pub(crate) mod tests;
