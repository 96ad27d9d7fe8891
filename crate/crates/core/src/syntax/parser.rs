use std::collections::BTreeSet;

use thiserror::Error;

use super::lexer::{lex, Spanned, Tok};
use super::{HyperFormula, PltlFormula, Prop, Quantifier, StutterSet, TraceVar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

const HYPER_KEYWORDS: &[&str] = &["X", "Y", "F", "G", "O", "H", "U", "S", "E", "A", "true", "false"];

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let s = &self.toks[self.pos];
        Err(ParseError { line: s.line, col: s.col, message: message.into() })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        self.err(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&t.describe())
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    // ---- PLTL ----

    fn pltl(&mut self) -> Result<PltlFormula, ParseError> {
        let mut lhs = self.pltl_imp()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.pltl_imp()?;
            lhs = PltlFormula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn pltl_imp(&mut self) -> Result<PltlFormula, ParseError> {
        let lhs = self.pltl_or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.pltl_imp()?;
            return Ok(PltlFormula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn pltl_or(&mut self) -> Result<PltlFormula, ParseError> {
        let mut lhs = self.pltl_and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            lhs = PltlFormula::or(lhs, self.pltl_and()?);
        }
        Ok(lhs)
    }

    fn pltl_and(&mut self) -> Result<PltlFormula, ParseError> {
        let mut lhs = self.pltl_until()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = PltlFormula::and(lhs, self.pltl_until()?);
        }
        Ok(lhs)
    }

    fn pltl_until(&mut self) -> Result<PltlFormula, ParseError> {
        let lhs = self.pltl_unary()?;
        if self.is_kw("U") {
            self.bump();
            return Ok(PltlFormula::until(lhs, self.pltl_until()?));
        }
        if self.is_kw("S") {
            self.bump();
            return Ok(PltlFormula::since(lhs, self.pltl_until()?));
        }
        Ok(lhs)
    }

    fn pltl_unary(&mut self) -> Result<PltlFormula, ParseError> {
        use PltlFormula as P;
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(P::not(self.pltl_unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.pltl()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) => {
                let unary: Option<fn(Box<P>) -> P> = match s.as_str() {
                    "X" => Some(P::Next),
                    "Y" => Some(P::Yesterday),
                    "F" => Some(P::Eventually),
                    "G" => Some(P::Always),
                    "O" => Some(P::Once),
                    "H" => Some(P::Historically),
                    _ => None,
                };
                if let Some(k) = unary {
                    self.bump();
                    return Ok(k(Box::new(self.pltl_unary()?)));
                }
                match s.as_str() {
                    "true" => {
                        self.bump();
                        Ok(P::True)
                    }
                    "false" => {
                        self.bump();
                        Ok(P::not(P::True))
                    }
                    "U" | "S" => self.unexpected("a formula"),
                    _ => {
                        self.bump();
                        Ok(P::Atom(Prop::new(s)))
                    }
                }
            }
            _ => self.unexpected("a formula"),
        }
    }

    // ---- GHyLTL ----

    fn label(&mut self) -> Result<StutterSet, ParseError> {
        let mut g = StutterSet::new();
        if *self.peek() != Tok::LBracket {
            return Ok(g);
        }
        self.bump();
        if *self.peek() == Tok::RBracket {
            self.bump();
            return Ok(g);
        }
        loop {
            g.insert(self.pltl()?);
            match self.bump() {
                Tok::Comma => continue,
                Tok::RBracket => return Ok(g),
                _ => {
                    self.pos -= 1;
                    return self.unexpected("',' or ']'");
                }
            }
        }
    }

    fn var(&mut self) -> Result<TraceVar, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !HYPER_KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(TraceVar::new(s))
            }
            _ => self.unexpected("a trace variable"),
        }
    }

    fn hyper(&mut self) -> Result<HyperFormula, ParseError> {
        let mut lhs = self.hyper_imp()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.hyper_imp()?;
            lhs = HyperFormula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn hyper_imp(&mut self) -> Result<HyperFormula, ParseError> {
        let lhs = self.hyper_or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.hyper_imp()?;
            return Ok(HyperFormula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn hyper_or(&mut self) -> Result<HyperFormula, ParseError> {
        let mut lhs = self.hyper_and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.hyper_and()?;
            lhs = HyperFormula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn hyper_and(&mut self) -> Result<HyperFormula, ParseError> {
        let mut lhs = self.hyper_until()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.hyper_until()?;
            lhs = HyperFormula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn hyper_until(&mut self) -> Result<HyperFormula, ParseError> {
        let lhs = self.hyper_unary()?;
        for (kw, until) in [("U", true), ("S", false)] {
            if self.is_kw(kw) {
                self.bump();
                let g = self.label()?;
                let rhs = self.hyper_until()?;
                let (a, b) = (Box::new(lhs), Box::new(rhs));
                return Ok(if until {
                    HyperFormula::Until(g, a, b)
                } else {
                    HyperFormula::Since(g, a, b)
                });
            }
        }
        Ok(lhs)
    }

    fn hyper_unary(&mut self) -> Result<HyperFormula, ParseError> {
        use HyperFormula as H;
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(H::Not(Box::new(self.hyper_unary()?)))
            }
            Tok::LParen => {
                self.bump();
                let f = self.hyper()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::LAngle => {
                self.bump();
                let mut vars = BTreeSet::new();
                if *self.peek() == Tok::RAngle {
                    return self.err("context must name at least one variable");
                }
                loop {
                    vars.insert(self.var()?);
                    match self.bump() {
                        Tok::Comma => continue,
                        Tok::RAngle => break,
                        _ => {
                            self.pos -= 1;
                            return self.unexpected("',' or '>'");
                        }
                    }
                }
                let body = self.hyper()?;
                Ok(H::InContext(vars, Box::new(body)))
            }
            Tok::Ident(s) => {
                if *self.peek_at(1) == Tok::At {
                    self.bump();
                    self.bump();
                    let x = self.var()?;
                    return Ok(H::Atom(Prop::new(s), x));
                }
                let unary: Option<fn(StutterSet, Box<H>) -> H> = match s.as_str() {
                    "X" => Some(H::Next),
                    "Y" => Some(H::Yesterday),
                    "F" => Some(H::Eventually),
                    "G" => Some(H::Always),
                    "O" => Some(H::Once),
                    "H" => Some(H::Historically),
                    _ => None,
                };
                if let Some(k) = unary {
                    self.bump();
                    let g = self.label()?;
                    return Ok(k(g, Box::new(self.hyper_unary()?)));
                }
                match s.as_str() {
                    "E" | "A" => {
                        self.bump();
                        let x = self.var()?;
                        self.expect(Tok::Dot)?;
                        let body = self.hyper()?;
                        let q = if s == "E" { Quantifier::Exists } else { Quantifier::Forall };
                        Ok(H::Quant(q, x, Box::new(body)))
                    }
                    "true" => {
                        self.bump();
                        Ok(H::True)
                    }
                    "false" => {
                        self.bump();
                        Ok(H::Not(Box::new(H::True)))
                    }
                    _ => self.err(format!("expected an atom 'p@x' or an operator, found '{s}'")),
                }
            }
            _ => self.unexpected("a formula"),
        }
    }
}

/// Parses a PLTL formula.
pub fn parse_pltl(src: &str) -> Result<PltlFormula, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.pltl()?;
    p.finish()?;
    Ok(f)
}

/// Parses a GHyLTL formula.
pub fn parse_hyper(src: &str) -> Result<HyperFormula, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.hyper()?;
    p.finish()?;
    Ok(f)
}
