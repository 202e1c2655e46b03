//! Propositional formulas over named atoms.
//!
//! Surface syntax: `~` (not) binds tightest, then `&`, then `|`, then `->`
//! (material implication, right-associative). Parentheses group.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Self {
        Formula::Atom(name.to_string())
    }

    pub fn negation(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Atom names in sorted order.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Classical evaluation; `value` gives the truth value of an atom.
    pub fn eval<F: Fn(&str) -> bool + Copy>(&self, value: F) -> bool {
        match self {
            Formula::Atom(a) => value(a),
            Formula::Not(f) => !f.eval(value),
            Formula::And(a, b) => a.eval(value) && b.eval(value),
            Formula::Or(a, b) => a.eval(value) || b.eval(value),
            Formula::Implies(a, b) => !a.eval(value) || b.eval(value),
        }
    }

    /// Evaluation against atom indices, used by agenda compilation.
    pub(crate) fn eval_indexed(&self, atoms: &[String], assignment: u32) -> bool {
        match self {
            Formula::Atom(a) => {
                let i = atoms.iter().position(|x| x == a).expect("atom declared");
                assignment >> i & 1 == 1
            }
            Formula::Not(f) => !f.eval_indexed(atoms, assignment),
            Formula::And(a, b) => a.eval_indexed(atoms, assignment) && b.eval_indexed(atoms, assignment),
            Formula::Or(a, b) => a.eval_indexed(atoms, assignment) || b.eval_indexed(atoms, assignment),
            Formula::Implies(a, b) => {
                !a.eval_indexed(atoms, assignment) || b.eval_indexed(atoms, assignment)
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(_) | Formula::Atom(_) => 4,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, node: &Formula, min: u8) -> fmt::Result {
            if node.precedence() < min {
                write!(f, "({node})")
            } else {
                write!(f, "{node}")
            }
        }
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(inner) => {
                write!(f, "~")?;
                child(f, inner, 4)
            }
            Formula::And(a, b) => {
                child(f, a, 3)?;
                write!(f, " & ")?;
                child(f, b, 4)
            }
            Formula::Or(a, b) => {
                child(f, a, 2)?;
                write!(f, " | ")?;
                child(f, b, 3)
            }
            Formula::Implies(a, b) => {
                child(f, a, 2)?;
                write!(f, " -> ")?;
                child(f, b, 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Atom(String),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Atom(a) => format!("atom `{a}`"),
            Token::Not => "`~`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Arrow => "`->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'~' | b'!' => {
                out.push((i, Token::Not));
                i += 1;
            }
            b'&' => {
                out.push((i, Token::And));
                i += 1;
            }
            b'|' => {
                out.push((i, Token::Or));
                i += 1;
            }
            b'(' => {
                out.push((i, Token::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Token::RParen));
                i += 1;
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((i, Token::Arrow));
                    i += 2;
                } else {
                    return Err(Error::Syntax {
                        position: i,
                        message: "expected `->`".into(),
                    });
                }
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i], b'a'..=b'z' | b'0'..=b'9' | b'_')
                {
                    i += 1;
                }
                out.push((start, Token::Atom(text[start..i].to_string())));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    position: i,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn unexpected(&self, wanted: &str) -> Error {
        match self.peek() {
            None => Error::Syntax {
                position: self.end,
                message: format!("unexpected end of input, expected {wanted}"),
            },
            Some(t) => Error::Syntax {
                position: self.offset(),
                message: format!("unexpected {}, expected {wanted}", t.describe()),
            },
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Token::Arrow) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Formula::negation(self.unary()?))
            }
            Some(Token::Atom(a)) => {
                self.pos += 1;
                Ok(Formula::Atom(a))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses a formula; errors carry the byte offset of the offending token.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let f = parser.implication()?;
    if parser.peek().is_some() {
        return Err(parser.unexpected("end of input"));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_formula(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn implication() {
        assert_eq!(p("p -> q"), Formula::implies(Formula::atom("p"), Formula::atom("q")));
    }

    #[test]
    fn negation_binds_tighter_than_and() {
        assert_eq!(
            p("~p & q"),
            Formula::and(Formula::negation(Formula::atom("p")), Formula::atom("q"))
        );
    }

    #[test]
    fn arrow_is_right_associative() {
        assert_eq!(
            p("a -> b -> c"),
            Formula::implies(
                Formula::atom("a"),
                Formula::implies(Formula::atom("b"), Formula::atom("c"))
            )
        );
    }

    #[test]
    fn and_binds_tighter_than_or_tighter_than_arrow() {
        assert_eq!(
            p("a | b & c -> d"),
            Formula::implies(
                Formula::or(
                    Formula::atom("a"),
                    Formula::and(Formula::atom("b"), Formula::atom("c"))
                ),
                Formula::atom("d")
            )
        );
    }

    #[test]
    fn incomplete_input_reports_end() {
        match parse_formula("p ->") {
            Err(Error::Syntax { position, message }) => {
                assert_eq!(position, 4);
                assert!(message.contains("end of input"), "{message}");
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn bad_tokens() {
        assert!(matches!(parse_formula("P"), Err(Error::Syntax { position: 0, .. })));
        assert!(matches!(parse_formula("p - q"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse_formula("(p"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse_formula("p q"), Err(Error::Syntax { position: 2, .. })));
        assert!(parse_formula("").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["p -> q", "~p & q", "(a -> b) -> c", "~(p & q) | r_1", "a & (b | c)"] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{s}");
        }
    }
}
