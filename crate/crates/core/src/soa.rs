//! Second-order arithmetic over (+, ·, <, ∈): parser, flat-atom normal form
//! and a bounded brute-force evaluator.
//!
//! Variables starting with an uppercase letter are second-order (sets of
//! naturals); all others are first-order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::syntax::Quantifier;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SoaError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("free variable '{0}'")]
    FreeVariable(String),
    #[error("'{0}' is used as a set but is first-order")]
    NotASet(String),
    #[error("'{0}' is used as a number but is second-order")]
    NotANumber(String),
    #[error("bound {0} too large for set enumeration (max 62)")]
    BoundTooLarge(u64),
}

pub fn is_set_var(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

/// Arithmetic term over first-order variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(v: &str) -> Term {
        Term::Var(v.to_string())
    }

    fn is_compound(&self) -> bool {
        !matches!(self, Term::Var(_))
    }

    /// Largest value the term takes when every variable ranges over `0..=b`
    /// or, for auxiliaries, over their own widened range.
    fn max_value(&self, b: u64, aux: &BTreeMap<String, u64>) -> u64 {
        match self {
            Term::Var(v) => aux.get(v).copied().unwrap_or(b),
            Term::Add(l, r) => l.max_value(b, aux).saturating_add(r.max_value(b, aux)),
            Term::Mul(l, r) => l.max_value(b, aux).saturating_mul(r.max_value(b, aux)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Add(l, r) => write!(f, "({l} + {r})"),
            Term::Mul(l, r) => write!(f, "({l} * {r})"),
        }
    }
}

/// Formula over general terms, as produced by the parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawFormula {
    Eq(Term, Term),
    Less(Term, Term),
    Member(Term, String),
    Not(Box<RawFormula>),
    Or(Box<RawFormula>, Box<RawFormula>),
    And(Box<RawFormula>, Box<RawFormula>),
    Quant(Quantifier, String, Box<RawFormula>),
}

/// Formula whose atoms are flat: `y1 + y2 = y3`, `y1 * y2 = y3`, `y1 < y2`, `y in Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SoaFormula {
    Add(String, String, String),
    Mul(String, String, String),
    Less(String, String),
    Member(String, String),
    Not(Box<SoaFormula>),
    Or(Box<SoaFormula>, Box<SoaFormula>),
    And(Box<SoaFormula>, Box<SoaFormula>),
    Quant(Quantifier, String, Box<SoaFormula>),
}

impl SoaFormula {
    pub fn add(a: &str, b: &str, c: &str) -> Self {
        SoaFormula::Add(a.into(), b.into(), c.into())
    }

    pub fn mul(a: &str, b: &str, c: &str) -> Self {
        SoaFormula::Mul(a.into(), b.into(), c.into())
    }

    pub fn less(a: &str, b: &str) -> Self {
        SoaFormula::Less(a.into(), b.into())
    }

    pub fn member(a: &str, s: &str) -> Self {
        SoaFormula::Member(a.into(), s.into())
    }

    pub fn not(a: SoaFormula) -> Self {
        SoaFormula::Not(Box::new(a))
    }

    pub fn or(a: SoaFormula, b: SoaFormula) -> Self {
        SoaFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: SoaFormula, b: SoaFormula) -> Self {
        SoaFormula::And(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, a: SoaFormula) -> Self {
        SoaFormula::Quant(Quantifier::Exists, v.into(), Box::new(a))
    }

    pub fn forall(v: &str, a: SoaFormula) -> Self {
        SoaFormula::Quant(Quantifier::Forall, v.into(), Box::new(a))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut note = |v: &String| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            SoaFormula::Add(a, b, c) | SoaFormula::Mul(a, b, c) => {
                note(a);
                note(b);
                note(c);
            }
            SoaFormula::Less(a, b) | SoaFormula::Member(a, b) => {
                note(a);
                note(b);
            }
            SoaFormula::Not(a) => a.collect_free(bound, out),
            SoaFormula::Or(a, b) | SoaFormula::And(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            SoaFormula::Quant(_, v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// First-order variables in order of first occurrence, bound or free.
    pub fn first_order_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |v| {
            if !is_set_var(v) && !out.iter().any(|o| o == v) {
                out.push(v.to_string());
            }
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&str)) {
        match self {
            SoaFormula::Add(a, b, c) | SoaFormula::Mul(a, b, c) => {
                f(a);
                f(b);
                f(c);
            }
            SoaFormula::Less(a, b) | SoaFormula::Member(a, b) => {
                f(a);
                f(b);
            }
            SoaFormula::Not(a) => a.walk(f),
            SoaFormula::Or(a, b) | SoaFormula::And(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            SoaFormula::Quant(_, v, a) => {
                f(v);
                a.walk(f);
            }
        }
    }

    pub fn quantifier_count(&self) -> usize {
        match self {
            SoaFormula::Not(a) => a.quantifier_count(),
            SoaFormula::Or(a, b) | SoaFormula::And(a, b) => a.quantifier_count() + b.quantifier_count(),
            SoaFormula::Quant(_, _, a) => 1 + a.quantifier_count(),
            _ => 0,
        }
    }

    /// Checks that every variable is used consistently with its order.
    pub fn check_sorts(&self) -> Result<(), SoaError> {
        let mut res = Ok(());
        let mut num = |v: &str| {
            if is_set_var(v) && res.is_ok() {
                res = Err(SoaError::NotANumber(v.to_string()));
            }
        };
        match self {
            SoaFormula::Add(a, b, c) | SoaFormula::Mul(a, b, c) => {
                num(a);
                num(b);
                num(c);
            }
            SoaFormula::Less(a, b) => {
                num(a);
                num(b);
            }
            SoaFormula::Member(a, s) => {
                num(a);
                if res.is_ok() && !is_set_var(s) {
                    res = Err(SoaError::NotASet(s.clone()));
                }
            }
            SoaFormula::Not(a) | SoaFormula::Quant(_, _, a) => return a.check_sorts(),
            SoaFormula::Or(a, b) | SoaFormula::And(a, b) => {
                a.check_sorts()?;
                return b.check_sorts();
            }
        }
        res
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, a: &SoaFormula) -> fmt::Result {
    match a {
        SoaFormula::Or(..) | SoaFormula::And(..) | SoaFormula::Quant(..) => write!(f, "({a})"),
        _ => write!(f, "{a}"),
    }
}

impl fmt::Display for SoaFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SoaFormula::Add(a, b, c) => write!(f, "{a} + {b} = {c}"),
            SoaFormula::Mul(a, b, c) => write!(f, "{a} * {b} = {c}"),
            SoaFormula::Less(a, b) => write!(f, "{a} < {b}"),
            SoaFormula::Member(a, s) => write!(f, "{a} in {s}"),
            SoaFormula::Not(a) => {
                f.write_str("~")?;
                write_operand(f, a)
            }
            SoaFormula::Or(a, b) | SoaFormula::And(a, b) => {
                let op = if matches!(self, SoaFormula::Or(..)) { "|" } else { "&" };
                write_operand(f, a)?;
                write!(f, " {op} ")?;
                write_operand(f, b)
            }
            SoaFormula::Quant(q, v, a) => {
                let kw = match q {
                    Quantifier::Exists => "exists",
                    Quantifier::Forall => "forall",
                };
                write!(f, "{kw} {v}. {a}")
            }
        }
    }
}

// ---------------------------------------------------------------- parser

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SoaError> {
        Err(SoaError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        loop {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.src[self.pos..].starts_with(b"--") {
                while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), SoaError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn ident(&mut self) -> Result<String, SoaError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            self.pos = start;
            return self.err("expected identifier");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn keyword(&mut self, kw: &str) -> bool {
        let save = self.pos;
        match self.ident() {
            Ok(w) if w == kw => true,
            _ => {
                self.pos = save;
                false
            }
        }
    }

    fn formula(&mut self) -> Result<RawFormula, SoaError> {
        let mut lhs = self.conj()?;
        while self.eat(b'|') {
            let rhs = self.conj()?;
            lhs = RawFormula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<RawFormula, SoaError> {
        let mut lhs = self.unary()?;
        while self.eat(b'&') {
            let rhs = self.unary()?;
            lhs = RawFormula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<RawFormula, SoaError> {
        if self.eat(b'~') {
            return Ok(RawFormula::Not(Box::new(self.unary()?)));
        }
        for (kw, q) in [("exists", Quantifier::Exists), ("forall", Quantifier::Forall)] {
            if self.keyword(kw) {
                let v = self.ident()?;
                self.expect(b'.')?;
                let body = self.formula()?;
                return Ok(RawFormula::Quant(q, v, Box::new(body)));
            }
        }
        let save = self.pos;
        match self.relation() {
            Ok(a) => Ok(a),
            Err(e) => {
                self.pos = save;
                if self.eat(b'(') {
                    let inner = self.formula()?;
                    self.expect(b')')?;
                    Ok(inner)
                } else {
                    Err(e)
                }
            }
        }
    }

    fn relation(&mut self) -> Result<RawFormula, SoaError> {
        let lhs = self.term()?;
        if self.eat(b'=') {
            Ok(RawFormula::Eq(lhs, self.term()?))
        } else if self.eat(b'<') {
            Ok(RawFormula::Less(lhs, self.term()?))
        } else if self.keyword("in") {
            Ok(RawFormula::Member(lhs, self.ident()?))
        } else {
            self.err("expected '=', '<' or 'in'")
        }
    }

    fn term(&mut self) -> Result<Term, SoaError> {
        let mut lhs = self.product()?;
        while self.eat(b'+') {
            lhs = Term::Add(Box::new(lhs), Box::new(self.product()?));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Term, SoaError> {
        let mut lhs = self.factor()?;
        while self.eat(b'*') {
            lhs = Term::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Term, SoaError> {
        if self.eat(b'(') {
            let t = self.term()?;
            self.expect(b')')?;
            return Ok(t);
        }
        let save = self.pos;
        let v = self.ident()?;
        if matches!(v.as_str(), "exists" | "forall" | "in") {
            self.pos = save;
            return self.err(format!("unexpected keyword '{v}'"));
        }
        Ok(Term::Var(v))
    }
}

pub fn parse_soa(src: &str) -> Result<RawFormula, SoaError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let f = p.formula()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Parses and flattens; the result carries the auxiliary variable ranges.
pub fn parse_flat(src: &str) -> Result<Normalized, SoaError> {
    let n = normalize_flat(&parse_soa(src)?);
    n.formula.check_sorts()?;
    Ok(n)
}

// ---------------------------------------------------------------- flattening

/// Flat formula plus the auxiliary existentials introduced for compound
/// subterms, each with the term it names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub formula: SoaFormula,
    pub aux: BTreeMap<String, Term>,
}

impl Normalized {
    /// Range of every auxiliary variable when the others range over `0..=b`.
    pub fn aux_ranges(&self, b: u64) -> BTreeMap<String, u64> {
        let mut out = BTreeMap::new();
        // aux terms only mention earlier aux variables, so name order works
        // when processed to a fixpoint
        loop {
            let before = out.len();
            for (v, t) in &self.aux {
                if !out.contains_key(v) && term_vars(t).iter().all(|w| !self.aux.contains_key(w) || out.contains_key(w)) {
                    let m = t.max_value(b, &out);
                    out.insert(v.clone(), m);
                }
            }
            if out.len() == before {
                return out;
            }
        }
    }
}

fn term_vars(t: &Term) -> Vec<String> {
    match t {
        Term::Var(v) => vec![v.clone()],
        Term::Add(l, r) | Term::Mul(l, r) => {
            let mut v = term_vars(l);
            v.extend(term_vars(r));
            v
        }
    }
}

struct Flattener {
    used: BTreeSet<String>,
    next: usize,
    aux: BTreeMap<String, Term>,
}

impl Flattener {
    fn fresh(&mut self) -> String {
        loop {
            let name = format!("t{}", self.next);
            self.next += 1;
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }

    /// Names a term: variables stay, compound terms get an auxiliary whose
    /// defining atoms are pushed to `defs`.
    fn name(&mut self, t: &Term, defs: &mut Vec<(String, SoaFormula)>) -> String {
        match t {
            Term::Var(v) => v.clone(),
            _ => {
                let v = self.fresh();
                self.aux.insert(v.clone(), t.clone());
                let atom = self.define(t, &v, defs);
                defs.push((v.clone(), atom));
                v
            }
        }
    }

    /// Flat atom stating `t = target` for a compound `t`; auxiliaries for
    /// its proper subterms are pushed to `defs`.
    fn define(&mut self, t: &Term, target: &str, defs: &mut Vec<(String, SoaFormula)>) -> SoaFormula {
        let (l, r) = match t {
            Term::Add(l, r) | Term::Mul(l, r) => (l, r),
            Term::Var(_) => unreachable!("define on a variable"),
        };
        let a = self.name(l, defs);
        let b = self.name(r, defs);
        if matches!(t, Term::Add(..)) {
            SoaFormula::Add(a, b, target.to_string())
        } else {
            SoaFormula::Mul(a, b, target.to_string())
        }
    }

    fn atom(&mut self, f: &RawFormula) -> SoaFormula {
        let mut defs = Vec::new();
        let core = match f {
            RawFormula::Eq(l, r) => match (l.is_compound(), r.is_compound()) {
                (true, false) => {
                    let v = self.name(r, &mut defs);
                    self.define(l, &v, &mut defs)
                }
                (false, true) => {
                    let v = self.name(l, &mut defs);
                    self.define(r, &v, &mut defs)
                }
                _ => {
                    let a = self.name(l, &mut defs);
                    let b = self.name(r, &mut defs);
                    equal(&a, &b)
                }
            },
            RawFormula::Less(l, r) => {
                let a = self.name(l, &mut defs);
                let b = self.name(r, &mut defs);
                SoaFormula::Less(a, b)
            }
            RawFormula::Member(t, s) => {
                let a = self.name(t, &mut defs);
                SoaFormula::Member(a, s.clone())
            }
            _ => unreachable!("atom on a connective"),
        };
        let body = defs.iter().rev().fold(core, |acc, (_, d)| SoaFormula::and(d.clone(), acc));
        defs.iter().rev().fold(body, |acc, (v, _)| SoaFormula::exists(v, acc))
    }

    fn formula(&mut self, f: &RawFormula) -> SoaFormula {
        match f {
            RawFormula::Not(a) => SoaFormula::not(self.formula(a)),
            RawFormula::Or(a, b) => SoaFormula::or(self.formula(a), self.formula(b)),
            RawFormula::And(a, b) => SoaFormula::and(self.formula(a), self.formula(b)),
            RawFormula::Quant(q, v, a) => SoaFormula::Quant(*q, v.clone(), Box::new(self.formula(a))),
            _ => self.atom(f),
        }
    }
}

fn equal(a: &str, b: &str) -> SoaFormula {
    SoaFormula::and(SoaFormula::not(SoaFormula::less(a, b)), SoaFormula::not(SoaFormula::less(b, a)))
}

fn raw_vars(f: &RawFormula, out: &mut BTreeSet<String>) {
    match f {
        RawFormula::Eq(l, r) | RawFormula::Less(l, r) => {
            out.extend(term_vars(l));
            out.extend(term_vars(r));
        }
        RawFormula::Member(t, s) => {
            out.extend(term_vars(t));
            out.insert(s.clone());
        }
        RawFormula::Not(a) => raw_vars(a, out),
        RawFormula::Or(a, b) | RawFormula::And(a, b) => {
            raw_vars(a, out);
            raw_vars(b, out);
        }
        RawFormula::Quant(_, v, a) => {
            out.insert(v.clone());
            raw_vars(a, out);
        }
    }
}

/// Rewrites general-term atoms into flat atoms. Each compound subterm that
/// is not the whole side of an equation against a variable is named by a
/// fresh existential `t{k}` placed directly around its atom. Remaining
/// equalities become `~(a < b) & ~(b < a)`.
pub fn normalize_flat(f: &RawFormula) -> Normalized {
    let mut used = BTreeSet::new();
    raw_vars(f, &mut used);
    let mut fl = Flattener { used, next: 0, aux: BTreeMap::new() };
    let formula = fl.formula(f);
    Normalized { formula, aux: fl.aux }
}

impl From<&SoaFormula> for RawFormula {
    fn from(f: &SoaFormula) -> Self {
        let v = |s: &String| Term::Var(s.clone());
        match f {
            SoaFormula::Add(a, b, c) => RawFormula::Eq(Term::Add(Box::new(v(a)), Box::new(v(b))), v(c)),
            SoaFormula::Mul(a, b, c) => RawFormula::Eq(Term::Mul(Box::new(v(a)), Box::new(v(b))), v(c)),
            SoaFormula::Less(a, b) => RawFormula::Less(v(a), v(b)),
            SoaFormula::Member(a, s) => RawFormula::Member(v(a), s.clone()),
            SoaFormula::Not(a) => RawFormula::Not(Box::new(a.as_ref().into())),
            SoaFormula::Or(a, b) => RawFormula::Or(Box::new(a.as_ref().into()), Box::new(b.as_ref().into())),
            SoaFormula::And(a, b) => RawFormula::And(Box::new(a.as_ref().into()), Box::new(b.as_ref().into())),
            SoaFormula::Quant(q, x, a) => RawFormula::Quant(*q, x.clone(), Box::new(a.as_ref().into())),
        }
    }
}

// ---------------------------------------------------------------- evaluation

#[derive(Clone, Copy, Debug)]
enum Val {
    Num(u64),
    Set(u64),
}

struct Env<'a> {
    b: u64,
    ranges: &'a BTreeMap<String, u64>,
    vals: Vec<(&'a str, Val)>,
}

impl<'a> Env<'a> {
    fn get(&self, v: &str) -> Result<Val, SoaError> {
        self.vals
            .iter()
            .rev()
            .find(|(n, _)| *n == v)
            .map(|(_, x)| *x)
            .ok_or_else(|| SoaError::FreeVariable(v.to_string()))
    }

    fn num(&self, v: &str) -> Result<u64, SoaError> {
        match self.get(v)? {
            Val::Num(n) => Ok(n),
            Val::Set(_) => Err(SoaError::NotANumber(v.to_string())),
        }
    }

    fn domain(&self, v: &str) -> Vec<Val> {
        if is_set_var(v) {
            (0..1u64 << (self.b + 1)).map(Val::Set).collect()
        } else {
            let top = self.ranges.get(v).copied().unwrap_or(self.b);
            (0..=top).map(Val::Num).collect()
        }
    }

    fn eval(&mut self, f: &'a SoaFormula) -> Result<bool, SoaError> {
        Ok(match f {
            SoaFormula::Add(a, b, c) => self.num(a)?.checked_add(self.num(b)?) == Some(self.num(c)?),
            SoaFormula::Mul(a, b, c) => self.num(a)?.checked_mul(self.num(b)?) == Some(self.num(c)?),
            SoaFormula::Less(a, b) => self.num(a)? < self.num(b)?,
            SoaFormula::Member(a, s) => {
                let n = self.num(a)?;
                match self.get(s)? {
                    Val::Set(m) => n < 64 && m >> n & 1 == 1,
                    Val::Num(_) => return Err(SoaError::NotASet(s.clone())),
                }
            }
            SoaFormula::Not(a) => !self.eval(a)?,
            SoaFormula::Or(a, b) => self.eval(a)? || self.eval(b)?,
            SoaFormula::And(a, b) => self.eval(a)? && self.eval(b)?,
            SoaFormula::Quant(q, v, a) => {
                let want = *q == Quantifier::Exists;
                for x in self.domain(v) {
                    self.vals.push((v, x));
                    let r = self.eval(a);
                    self.vals.pop();
                    if r? == want {
                        return Ok(want);
                    }
                }
                !want
            }
        })
    }
}

/// Evaluates a closed sentence with first-order variables over `0..=b` and
/// second-order variables over all subsets of `0..=b`.
pub fn eval_soa_bounded(f: &SoaFormula, b: u64) -> Result<bool, SoaError> {
    eval_soa_with_ranges(f, b, &BTreeMap::new())
}

/// As [`eval_soa_bounded`], but first-order variables listed in `ranges`
/// range over `0..=ranges[v]` instead.
pub fn eval_soa_with_ranges(f: &SoaFormula, b: u64, ranges: &BTreeMap<String, u64>) -> Result<bool, SoaError> {
    if b > 62 {
        return Err(SoaError::BoundTooLarge(b));
    }
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(SoaError::FreeVariable(v));
    }
    f.check_sorts()?;
    match f {
        SoaFormula::Quant(q, v, body) => {
            let env = Env { b, ranges, vals: Vec::new() };
            let dom = env.domain(v);
            let want = *q == Quantifier::Exists;
            let hit = dom
                .into_par_iter()
                .map(|x| {
                    let mut env = Env { b, ranges, vals: vec![(v.as_str(), x)] };
                    env.eval(body).map(|r| r == want)
                })
                .try_reduce(|| false, |a, c| Ok(a || c))?;
            Ok(if hit { want } else { !want })
        }
        _ => Env { b, ranges, vals: Vec::new() }.eval(f),
    }
}

/// Evaluates a flattened sentence with auxiliary ranges widened so that
/// every compound subterm's value is reachable.
pub fn eval_normalized(n: &Normalized, b: u64) -> Result<bool, SoaError> {
    eval_soa_with_ranges(&n.formula, b, &n.aux_ranges(b))
}

/// Evaluates a sentence over general terms directly, with no bound on
/// intermediate term values.
pub fn eval_raw_bounded(f: &RawFormula, b: u64) -> Result<bool, SoaError> {
    fn term(t: &Term, env: &[(String, Val)]) -> Result<u64, SoaError> {
        match t {
            Term::Var(v) => match env.iter().rev().find(|(n, _)| n == v) {
                Some((_, Val::Num(n))) => Ok(*n),
                Some((_, Val::Set(_))) => Err(SoaError::NotANumber(v.clone())),
                None => Err(SoaError::FreeVariable(v.clone())),
            },
            Term::Add(l, r) => Ok(term(l, env)?.saturating_add(term(r, env)?)),
            Term::Mul(l, r) => Ok(term(l, env)?.saturating_mul(term(r, env)?)),
        }
    }
    fn go(f: &RawFormula, b: u64, env: &mut Vec<(String, Val)>) -> Result<bool, SoaError> {
        Ok(match f {
            RawFormula::Eq(l, r) => term(l, env)? == term(r, env)?,
            RawFormula::Less(l, r) => term(l, env)? < term(r, env)?,
            RawFormula::Member(t, s) => {
                let n = term(t, env)?;
                match env.iter().rev().find(|(v, _)| v == s) {
                    Some((_, Val::Set(m))) => n < 64 && m >> n & 1 == 1,
                    Some((_, Val::Num(_))) => return Err(SoaError::NotASet(s.clone())),
                    None => return Err(SoaError::FreeVariable(s.clone())),
                }
            }
            RawFormula::Not(a) => !go(a, b, env)?,
            RawFormula::Or(x, y) => go(x, b, env)? || go(y, b, env)?,
            RawFormula::And(x, y) => go(x, b, env)? && go(y, b, env)?,
            RawFormula::Quant(q, v, a) => {
                let want = *q == Quantifier::Exists;
                let dom: Vec<Val> = if is_set_var(v) {
                    (0..1u64 << (b + 1)).map(Val::Set).collect()
                } else {
                    (0..=b).map(Val::Num).collect()
                };
                for x in dom {
                    env.push((v.clone(), x));
                    let r = go(a, b, env);
                    env.pop();
                    if r? == want {
                        return Ok(want);
                    }
                }
                !want
            }
        })
    }
    if b > 62 {
        return Err(SoaError::BoundTooLarge(b));
    }
    go(f, b, &mut Vec::new())
}
