//! The 2Int language: formulas over atoms, `bot`, `top`, conjunction,
//! disjunction, implication `->` and co-implication `<-`, plus the duality
//! transform that swaps the proof side and the refutation side.
//!
//! Concrete syntax (precedence low to high): `->`/`<-`, `|`, `&`, prefix
//! `~`/`-`. `->` associates right, `<-` associates left, and mixing the two
//! at the same parenthesis level is rejected. `~f` abbreviates `f -> bot`
//! and `-f` abbreviates `top <- f`; neither has an AST node.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Proof side (`+`) or refutation side (`-`) of a judgment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Plus,
    Minus,
}

impl Polarity {
    /// The opposite side. Involutive.
    pub fn dual(self) -> Polarity {
        match self {
            Polarity::Plus => Polarity::Minus,
            Polarity::Minus => Polarity::Plus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Plus => "+",
            Polarity::Minus => "-",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Polarity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Polarity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        match raw.as_str() {
            "+" => Ok(Polarity::Plus),
            "-" => Ok(Polarity::Minus),
            other => Err(D::Error::custom(format!(
                "polarity must be \"+\" or \"-\", got {other:?}"
            ))),
        }
    }
}

/// A propositional atom. Names match `[a-z][A-Za-z0-9_]*` and are never the
/// reserved words `bot` or `top`; equality of names is equality of atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Atom, FormulaError> {
        let name = name.into();
        if !is_valid_atom_name(&name) {
            return Err(FormulaError::BadAtomName(name));
        }
        Ok(Atom(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

fn is_valid_atom_name(name: &str) -> bool {
    if name == "bot" || name == "top" {
        return false;
    }
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Atom {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Atom::new(s)
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        Atom::new(raw).map_err(D::Error::custom)
    }
}

/// A 2Int formula. `Imp(l, r)` prints as `l -> r`, `CoImp(l, r)` as
/// `l <- r` (read: `l` excluding `r`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Bot,
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    CoImp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
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

    pub fn coimp(l: Formula, r: Formula) -> Formula {
        Formula::CoImp(Box::new(l), Box::new(r))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Formula::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// Number of connectives; `bot` and `top` count 1, atoms count 0.
    pub fn complexity(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Bot | Formula::Top => 1,
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Imp(l, r)
            | Formula::CoImp(l, r) => 1 + l.complexity() + r.complexity(),
        }
    }

    /// All atoms occurring in the formula.
    pub fn atoms(&self) -> std::collections::BTreeSet<Atom> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut std::collections::BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Bot | Formula::Top => {}
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Imp(l, r)
            | Formula::CoImp(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&print_formula(self))
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        parse_formula(&raw).map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("invalid atom name {0:?} (expected [a-z][A-Za-z0-9_]*, not bot/top)")]
    BadAtomName(String),
    #[error("syntax error at byte {offset}: found {found}, expected {}", expected.join(", "))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(Atom),
    Bot,
    Top,
    And,
    Or,
    Imp,
    CoImp,
    Tilde,
    Dash,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Atom(a) => format!("atom {:?}", a.name()),
            Tok::Bot => "\"bot\"".into(),
            Tok::Top => "\"top\"".into(),
            Tok::And => "\"&\"".into(),
            Tok::Or => "\"|\"".into(),
            Tok::Imp => "\"->\"".into(),
            Tok::CoImp => "\"<-\"".into(),
            Tok::Tilde => "\"~\"".into(),
            Tok::Dash => "\"-\"".into(),
            Tok::LParen => "\"(\"".into(),
            Tok::RParen => "\")\"".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next_tok(&mut self) -> Result<(usize, Tok), FormulaError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((start, Tok::Eof));
        }
        let c = self.src[self.pos];
        match c {
            b'&' => {
                self.pos += 1;
                Ok((start, Tok::And))
            }
            b'|' => {
                self.pos += 1;
                Ok((start, Tok::Or))
            }
            b'~' => {
                self.pos += 1;
                Ok((start, Tok::Tilde))
            }
            b'(' => {
                self.pos += 1;
                Ok((start, Tok::LParen))
            }
            b')' => {
                self.pos += 1;
                Ok((start, Tok::RParen))
            }
            b'-' => {
                if self.src.get(self.pos + 1) == Some(&b'>') {
                    self.pos += 2;
                    Ok((start, Tok::Imp))
                } else {
                    self.pos += 1;
                    Ok((start, Tok::Dash))
                }
            }
            b'<' => {
                if self.src.get(self.pos + 1) == Some(&b'-') {
                    self.pos += 2;
                    Ok((start, Tok::CoImp))
                } else {
                    Err(FormulaError::Syntax {
                        offset: start,
                        found: "\"<\"".into(),
                        expected: vec!["\"<-\""],
                    })
                }
            }
            c if c.is_ascii_lowercase() => {
                let mut end = self.pos + 1;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let word = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                match word {
                    "bot" => Ok((start, Tok::Bot)),
                    "top" => Ok((start, Tok::Top)),
                    _ => Ok((start, Tok::Atom(Atom(word.to_string())))),
                }
            }
            other => Err(FormulaError::Syntax {
                offset: start,
                found: format!("{:?}", char::from(other)),
                expected: vec!["atom", "\"bot\"", "\"top\"", "\"~\"", "\"-\"", "\"(\""],
            }),
        }
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: (usize, Tok),
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, FormulaError> {
        let mut lexer = Lexer::new(src);
        let peeked = lexer.next_tok()?;
        Ok(Parser { lexer, peeked })
    }

    fn peek(&self) -> &Tok {
        &self.peeked.1
    }

    fn bump(&mut self) -> Result<(usize, Tok), FormulaError> {
        let tok = std::mem::replace(&mut self.peeked, (0, Tok::Eof));
        self.peeked = self.lexer.next_tok()?;
        Ok(tok)
    }

    fn err_here(&self, expected: Vec<&'static str>) -> FormulaError {
        FormulaError::Syntax {
            offset: self.peeked.0,
            found: self.peeked.1.describe(),
            expected,
        }
    }

    /// Top level: a chain of `->` (right associated) or of `<-` (left
    /// associated) over `|`-level operands, never both.
    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let first = self.or_level()?;
        match self.peek() {
            Tok::Imp => {
                let mut elems = vec![first];
                while *self.peek() == Tok::Imp {
                    self.bump()?;
                    elems.push(self.or_level()?);
                }
                if *self.peek() == Tok::CoImp {
                    return Err(self.err_here(vec![
                        "\"->\"",
                        "\")\"",
                        "end of input (\"->\" and \"<-\" cannot mix unparenthesized)",
                    ]));
                }
                let mut acc = elems.pop().unwrap();
                while let Some(l) = elems.pop() {
                    acc = Formula::imp(l, acc);
                }
                Ok(acc)
            }
            Tok::CoImp => {
                let mut acc = first;
                while *self.peek() == Tok::CoImp {
                    self.bump()?;
                    let r = self.or_level()?;
                    if *self.peek() == Tok::Imp {
                        return Err(self.err_here(vec![
                            "\"<-\"",
                            "\")\"",
                            "end of input (\"->\" and \"<-\" cannot mix unparenthesized)",
                        ]));
                    }
                    acc = Formula::coimp(acc, r);
                }
                Ok(acc)
            }
            _ => Ok(first),
        }
    }

    fn or_level(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.and_level()?;
        while *self.peek() == Tok::Or {
            self.bump()?;
            let r = self.and_level()?;
            acc = Formula::or(acc, r);
        }
        Ok(acc)
    }

    fn and_level(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump()?;
            let r = self.unary()?;
            acc = Formula::and(acc, r);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump()?;
                let inner = self.unary()?;
                Ok(Formula::imp(inner, Formula::Bot))
            }
            Tok::Dash => {
                self.bump()?;
                let inner = self.unary()?;
                Ok(Formula::coimp(Formula::Top, inner))
            }
            Tok::Atom(a) => {
                self.bump()?;
                Ok(Formula::Atom(a))
            }
            Tok::Bot => {
                self.bump()?;
                Ok(Formula::Bot)
            }
            Tok::Top => {
                self.bump()?;
                Ok(Formula::Top)
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.formula()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.err_here(vec!["\")\""]));
                }
                self.bump()?;
                Ok(inner)
            }
            _ => Err(self.err_here(vec![
                "atom",
                "\"bot\"",
                "\"top\"",
                "\"~\"",
                "\"-\"",
                "\"(\"",
            ])),
        }
    }
}

/// Parse a formula from its concrete syntax.
pub fn parse_formula(src: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err_here(vec!["end of input"]));
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// Printing

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Atom(_) | Formula::Bot | Formula::Top => 4,
        Formula::And(_, _) => 3,
        Formula::Or(_, _) => 2,
        Formula::Imp(_, _) | Formula::CoImp(_, _) => 1,
    }
}

fn print_into(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(a) => out.push_str(a.name()),
        Formula::Bot => out.push_str("bot"),
        Formula::Top => out.push_str("top"),
        Formula::And(l, r) => {
            print_child(l, 3, prec(l) < 3, out);
            out.push_str(" & ");
            print_child(r, 3, prec(r) <= 3, out);
        }
        Formula::Or(l, r) => {
            print_child(l, 2, prec(l) < 2, out);
            out.push_str(" | ");
            print_child(r, 2, prec(r) <= 2, out);
        }
        Formula::Imp(l, r) => {
            print_child(l, 1, prec(l) <= 1, out);
            out.push_str(" -> ");
            print_child(r, 1, matches!(**r, Formula::CoImp(_, _)), out);
        }
        Formula::CoImp(l, r) => {
            print_child(l, 1, matches!(**l, Formula::Imp(_, _)), out);
            out.push_str(" <- ");
            print_child(r, 1, prec(r) <= 1, out);
        }
    }
}

fn print_child(f: &Formula, _ctx: u8, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        print_into(f, out);
        out.push(')');
    } else {
        print_into(f, out);
    }
}

/// Print with minimal parentheses; `parse_formula(print_formula(f)) == f`.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    print_into(f, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Duality and closure

/// The duality transform: atoms are fixed, `bot <-> top`, `& <-> |`, and
/// `(f -> g)` maps to `dual(g) <- dual(f)` (and back). Involutive, and
/// preserves complexity.
pub fn dual_formula(f: &Formula) -> Formula {
    match f {
        Formula::Atom(a) => Formula::Atom(a.clone()),
        Formula::Bot => Formula::Top,
        Formula::Top => Formula::Bot,
        Formula::And(l, r) => Formula::or(dual_formula(l), dual_formula(r)),
        Formula::Or(l, r) => Formula::and(dual_formula(l), dual_formula(r)),
        Formula::Imp(l, r) => Formula::coimp(dual_formula(r), dual_formula(l)),
        Formula::CoImp(l, r) => Formula::imp(dual_formula(r), dual_formula(l)),
    }
}

/// All subformulas of the given formulas, the formulas themselves included.
pub fn subformula_closure<'a, I>(formulas: I) -> std::collections::BTreeSet<Formula>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut out = std::collections::BTreeSet::new();
    fn walk(f: &Formula, out: &mut std::collections::BTreeSet<Formula>) {
        if !out.insert(f.clone()) {
            return;
        }
        match f {
            Formula::Atom(_) | Formula::Bot | Formula::Top => {}
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Imp(l, r)
            | Formula::CoImp(l, r) => {
                walk(l, out);
                walk(r, out);
            }
        }
    }
    for f in formulas {
        walk(f, &mut out);
    }
    out
}
