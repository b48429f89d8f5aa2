//! Text syntax:
//!
//! ```text
//! T  F  p  ~p  (f | g)  (f & g)  <>f  []f  mu X. f  nu X. f  X
//! <1>f  <2>f  [1]f  [2]f            (two-dimensional formulas only)
//! ```
//!
//! Lowercase identifiers are propositions and uppercase ones variables.
//! `&` binds tighter than `|`; a fixed-point body extends as far right as
//! possible.

use super::ast::{Dim, Fixpoint, Literal, ML2Formula, MLFormula, MuFormula};
use super::FormulaError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Top,
    Bot,
    Ident(String),
    Tilde,
    Or,
    And,
    LParen,
    RParen,
    Dia(Option<Dim>),
    Box(Option<Dim>),
    Fix(Fixpoint),
    Dot,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, FormulaError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        let err = |msg: &str| FormulaError::Parse { pos: start, msg: msg.to_string() };
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' | b'|' | b'&' | b'(' | b')' | b'.' => {
                i += 1;
                out.push((
                    start,
                    match c {
                        b'~' => Tok::Tilde,
                        b'|' => Tok::Or,
                        b'&' => Tok::And,
                        b'(' => Tok::LParen,
                        b')' => Tok::RParen,
                        _ => Tok::Dot,
                    },
                ));
            }
            b'<' | b'[' => {
                let close = if c == b'<' { b'>' } else { b']' };
                let (dim, len) = match (b.get(i + 1), b.get(i + 2)) {
                    (Some(&x), _) if x == close => (None, 2),
                    (Some(b'1'), Some(&x)) if x == close => (Some(Dim::One), 3),
                    (Some(b'2'), Some(&x)) if x == close => (Some(Dim::Two), 3),
                    _ => return Err(err("malformed modal operator")),
                };
                i += len;
                out.push((start, if c == b'<' { Tok::Dia(dim) } else { Tok::Box(dim) }));
            }
            c if c.is_ascii_alphabetic() => {
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'\'') {
                    i += 1;
                }
                let word = &src[start..i];
                out.push((
                    start,
                    match word {
                        "T" => Tok::Top,
                        "F" => Tok::Bot,
                        "mu" => Tok::Fix(Fixpoint::Least),
                        "nu" => Tok::Fix(Fixpoint::Greatest),
                        _ => Tok::Ident(word.to_string()),
                    },
                ));
            }
            _ => return Err(err(&format!("unexpected character `{}`", c as char))),
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Logic {
    Ml,
    Mu,
    Ml2,
}

/// Intermediate tree shared by the three logics.
enum Node {
    Lit(Literal),
    Var(String),
    Or(Box<Node>, Box<Node>),
    And(Box<Node>, Box<Node>),
    Dia(Option<Dim>, Box<Node>),
    Box(Option<Dim>, Box<Node>),
    Fix(Fixpoint, String, Box<Node>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    logic: Logic,
    binders: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Node, FormulaError> {
        let mut lhs = self.conj()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            let rhs = self.conj()?;
            lhs = Node::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Node, FormulaError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            let rhs = self.unary()?;
            lhs = Node::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn check_dim(&self, dim: Option<Dim>) -> Result<(), FormulaError> {
        match (self.logic, dim) {
            (Logic::Ml2, None) => self.fail("two-dimensional formulas need <1>, <2>, [1] or [2]"),
            (Logic::Ml | Logic::Mu, Some(_)) => self.fail("indexed modalities need the two-dimensional syntax"),
            _ => Ok(()),
        }
    }

    fn unary(&mut self) -> Result<Node, FormulaError> {
        match self.peek().cloned() {
            Some(Tok::Tilde) => {
                self.bump();
                match self.bump() {
                    Some(Tok::Ident(p)) if is_prop(&p) => Ok(Node::Lit(Literal::NegProp(p))),
                    _ => {
                        self.pos -= 1;
                        self.fail("negation applies only to propositions")
                    }
                }
            }
            Some(Tok::Dia(d)) => {
                self.check_dim(d)?;
                self.bump();
                Ok(Node::Dia(d, Box::new(self.unary()?)))
            }
            Some(Tok::Box(d)) => {
                self.check_dim(d)?;
                self.bump();
                Ok(Node::Box(d, Box::new(self.unary()?)))
            }
            Some(Tok::Fix(kind)) => {
                if self.logic != Logic::Mu {
                    return self.fail("fixed points are not part of this logic");
                }
                self.bump();
                let x = match self.bump() {
                    Some(Tok::Ident(x)) if !is_prop(&x) => x,
                    _ => {
                        self.pos -= 1;
                        return self.fail("expected an uppercase variable after the fixed-point operator");
                    }
                };
                if self.binders.contains(&x) {
                    self.pos -= 1;
                    return self.fail(format!("variable `{x}` is bound twice"));
                }
                if self.bump() != Some(Tok::Dot) {
                    self.pos -= 1;
                    return self.fail("expected `.`");
                }
                self.binders.push(x.clone());
                let body = self.expr()?;
                Ok(Node::Fix(kind, x, Box::new(body)))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Node, FormulaError> {
        match self.bump() {
            Some(Tok::Top) => Ok(Node::Lit(Literal::Top)),
            Some(Tok::Bot) => Ok(Node::Lit(Literal::Bot)),
            Some(Tok::Ident(w)) if is_prop(&w) => Ok(Node::Lit(Literal::Prop(w))),
            Some(Tok::Ident(w)) => {
                if self.logic != Logic::Mu {
                    self.pos -= 1;
                    return self.fail(format!("variable `{w}` outside the fixed-point logic"));
                }
                Ok(Node::Var(w))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    self.pos -= 1;
                    return self.fail("expected `)`");
                }
                Ok(inner)
            }
            None => self.fail("unexpected end of input"),
            Some(_) => {
                self.pos -= 1;
                self.fail("expected a formula")
            }
        }
    }
}

fn is_prop(word: &str) -> bool {
    word.starts_with(|c: char| c.is_ascii_lowercase())
}

fn parse_node(src: &str, logic: Logic) -> Result<Node, FormulaError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len(), logic, binders: Vec::new() };
    let node = p.expr()?;
    if p.pos < p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(node)
}

fn to_mu(n: Node) -> MuFormula {
    match n {
        Node::Lit(l) => MuFormula::Lit(l),
        Node::Var(x) => MuFormula::Var(x),
        Node::Or(a, b) => MuFormula::or(to_mu(*a), to_mu(*b)),
        Node::And(a, b) => MuFormula::and(to_mu(*a), to_mu(*b)),
        Node::Dia(_, a) => MuFormula::dia(to_mu(*a)),
        Node::Box(_, a) => MuFormula::boxed(to_mu(*a)),
        Node::Fix(k, x, a) => MuFormula::fixpoint(k, &x, to_mu(*a)),
    }
}

fn to_ml2(n: Node) -> ML2Formula {
    match n {
        Node::Lit(l) => ML2Formula::Lit(l),
        Node::Or(a, b) => ML2Formula::or(to_ml2(*a), to_ml2(*b)),
        Node::And(a, b) => ML2Formula::and(to_ml2(*a), to_ml2(*b)),
        Node::Dia(d, a) => ML2Formula::dia(d.expect("checked"), to_ml2(*a)),
        Node::Box(d, a) => ML2Formula::boxed(d.expect("checked"), to_ml2(*a)),
        Node::Var(_) | Node::Fix(..) => unreachable!("rejected by the parser"),
    }
}

pub fn parse_ml(src: &str) -> Result<MLFormula, FormulaError> {
    Ok(to_mu(parse_node(src, Logic::Ml)?).to_ml().expect("no fixed points in this logic"))
}

/// Parses a fixed-point formula. Free variables are accepted; repeated
/// binders are not.
pub fn parse_mu(src: &str) -> Result<MuFormula, FormulaError> {
    Ok(to_mu(parse_node(src, Logic::Mu)?))
}

pub fn parse_ml2(src: &str) -> Result<ML2Formula, FormulaError> {
    Ok(to_ml2(parse_node(src, Logic::Ml2)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_usual_examples() {
        let f = parse_ml("([]([]F) | []<>T)").unwrap();
        assert_eq!(f.size(), 7);
        assert_eq!(f.to_string(), "([][]F | []<>T)");
        let g = parse_mu("mu X. (p | <>X)").unwrap();
        assert_eq!(g.size(), 5);
        assert_eq!(parse_mu(&g.to_string()).unwrap(), g);
        let h = parse_ml2("[1][2](<1>T & <2>T)").unwrap();
        assert_eq!(h.size(), 7);
    }

    #[test]
    fn precedence_and_fixpoint_scope() {
        assert_eq!(parse_ml("p | q & r").unwrap().to_string(), "(p | (q & r))");
        let g = parse_mu("mu X. p | <>X").unwrap();
        assert!(matches!(g, MuFormula::Mu(..)));
        let h = parse_mu("(mu X. p) | q").unwrap();
        assert!(matches!(h, MuFormula::Or(..)));
        assert_eq!(parse_mu(&h.to_string()).unwrap(), h);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_ml("(p | ") {
            Err(FormulaError::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        match parse_mu("mu X. mu X. X") {
            Err(FormulaError::Parse { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("{other:?}"),
        }
        assert!(parse_ml("X").is_err());
        assert!(parse_ml("<1>T").is_err());
        assert!(parse_ml2("<>T").is_err());
        assert!(parse_mu("~X").is_err());
        assert!(parse_ml("p q").is_err());
        assert!(parse_ml("p $").is_err());
    }

    #[test]
    fn free_variables_are_accepted() {
        let f = parse_mu("<>Y").unwrap();
        assert_eq!(f.free_vars().len(), 1);
    }
}
