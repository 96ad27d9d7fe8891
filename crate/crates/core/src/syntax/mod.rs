//! Abstract syntax for PLTL with past and for GHyLTL with stuttering and contexts.

mod fragment;
mod lexer;
mod parser;
mod print;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use fragment::{classify, is_prenex, Classification, Fragment};
pub use parser::{parse_hyper, parse_pltl, ParseError};

/// Atomic proposition name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Prop(String);

impl Prop {
    pub fn new(name: impl Into<String>) -> Self {
        Prop(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Trace variable name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TraceVar(String);

impl TraceVar {
    pub fn new(name: impl Into<String>) -> Self {
        TraceVar(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TraceVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Set of trace variables, as used by contexts.
pub type VarSet = BTreeSet<TraceVar>;

/// PLTL formula. Sugar variants are kept so that printing round-trips;
/// [`PltlFormula::desugar`] reduces to the core connectives.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PltlFormula {
    True,
    Atom(Prop),
    Not(Box<PltlFormula>),
    Or(Box<PltlFormula>, Box<PltlFormula>),
    And(Box<PltlFormula>, Box<PltlFormula>),
    Implies(Box<PltlFormula>, Box<PltlFormula>),
    Iff(Box<PltlFormula>, Box<PltlFormula>),
    Next(Box<PltlFormula>),
    Until(Box<PltlFormula>, Box<PltlFormula>),
    Yesterday(Box<PltlFormula>),
    Since(Box<PltlFormula>, Box<PltlFormula>),
    Eventually(Box<PltlFormula>),
    Always(Box<PltlFormula>),
    Once(Box<PltlFormula>),
    Historically(Box<PltlFormula>),
}

/// Proposition used to spell out `true` in the core syntax.
pub const TRUE_PROP: &str = "_t";

impl PltlFormula {
    pub fn atom(p: &str) -> Self {
        PltlFormula::Atom(Prop::new(p))
    }

    pub fn not(a: PltlFormula) -> Self {
        PltlFormula::Not(Box::new(a))
    }

    pub fn or(a: PltlFormula, b: PltlFormula) -> Self {
        PltlFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: PltlFormula, b: PltlFormula) -> Self {
        PltlFormula::And(Box::new(a), Box::new(b))
    }

    pub fn next(a: PltlFormula) -> Self {
        PltlFormula::Next(Box::new(a))
    }

    pub fn until(a: PltlFormula, b: PltlFormula) -> Self {
        PltlFormula::Until(Box::new(a), Box::new(b))
    }

    pub fn yesterday(a: PltlFormula) -> Self {
        PltlFormula::Yesterday(Box::new(a))
    }

    pub fn since(a: PltlFormula, b: PltlFormula) -> Self {
        PltlFormula::Since(Box::new(a), Box::new(b))
    }

    /// Rewrites sugar into `Atom`, `Not`, `Or`, `Next`, `Until`, `Yesterday`, `Since`.
    pub fn desugar(&self) -> PltlFormula {
        use PltlFormula::*;
        let t = || or(atom(TRUE_PROP), not(atom(TRUE_PROP)));
        fn atom(p: &str) -> PltlFormula {
            PltlFormula::atom(p)
        }
        fn not(a: PltlFormula) -> PltlFormula {
            PltlFormula::not(a)
        }
        fn or(a: PltlFormula, b: PltlFormula) -> PltlFormula {
            PltlFormula::or(a, b)
        }
        let and = |a, b| not(or(not(a), not(b)));
        match self {
            True => t(),
            Atom(p) => Atom(p.clone()),
            Not(a) => not(a.desugar()),
            Or(a, b) => or(a.desugar(), b.desugar()),
            And(a, b) => and(a.desugar(), b.desugar()),
            Implies(a, b) => or(not(a.desugar()), b.desugar()),
            Iff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                or(and(a.clone(), b.clone()), and(not(a), not(b)))
            }
            Next(a) => PltlFormula::next(a.desugar()),
            Until(a, b) => PltlFormula::until(a.desugar(), b.desugar()),
            Yesterday(a) => PltlFormula::yesterday(a.desugar()),
            Since(a, b) => PltlFormula::since(a.desugar(), b.desugar()),
            Eventually(a) => PltlFormula::until(t(), a.desugar()),
            Always(a) => not(PltlFormula::until(t(), not(a.desugar()))),
            Once(a) => PltlFormula::since(t(), a.desugar()),
            Historically(a) => not(PltlFormula::since(t(), not(a.desugar()))),
        }
    }

    /// True when no past operator occurs.
    pub fn is_past_free(&self) -> bool {
        use PltlFormula::*;
        match self {
            True | Atom(_) => true,
            Yesterday(_) | Since(..) | Once(_) | Historically(_) => false,
            Not(a) | Next(a) | Eventually(a) | Always(a) => a.is_past_free(),
            Or(a, b) | And(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) => {
                a.is_past_free() && b.is_past_free()
            }
        }
    }

    pub fn props(&self, out: &mut BTreeSet<Prop>) {
        use PltlFormula::*;
        match self {
            True => {}
            Atom(p) => {
                out.insert(p.clone());
            }
            Not(a) | Next(a) | Yesterday(a) | Eventually(a) | Always(a) | Once(a)
            | Historically(a) => a.props(out),
            Or(a, b) | And(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) | Since(a, b) => {
                a.props(out);
                b.props(out);
            }
        }
    }
}

/// Finite set of PLTL formulas labelling a temporal modality.
pub type StutterSet = BTreeSet<PltlFormula>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

/// Context in which a formula is evaluated: all variables, or an explicit nonempty set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Context {
    Universal,
    Explicit(VarSet),
}

impl Context {
    pub fn contains(&self, x: &TraceVar) -> bool {
        match self {
            Context::Universal => true,
            Context::Explicit(s) => s.contains(x),
        }
    }
}

/// GHyLTL formula with stuttering labels and contexts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HyperFormula {
    True,
    Atom(Prop, TraceVar),
    Not(Box<HyperFormula>),
    Or(Box<HyperFormula>, Box<HyperFormula>),
    And(Box<HyperFormula>, Box<HyperFormula>),
    Implies(Box<HyperFormula>, Box<HyperFormula>),
    Iff(Box<HyperFormula>, Box<HyperFormula>),
    /// Nonempty explicit context.
    InContext(VarSet, Box<HyperFormula>),
    Next(StutterSet, Box<HyperFormula>),
    Until(StutterSet, Box<HyperFormula>, Box<HyperFormula>),
    Yesterday(StutterSet, Box<HyperFormula>),
    Since(StutterSet, Box<HyperFormula>, Box<HyperFormula>),
    Eventually(StutterSet, Box<HyperFormula>),
    Always(StutterSet, Box<HyperFormula>),
    Once(StutterSet, Box<HyperFormula>),
    Historically(StutterSet, Box<HyperFormula>),
    Quant(Quantifier, TraceVar, Box<HyperFormula>),
}

/// Short constructors used by the reductions and tests.
pub mod build {
    use super::*;

    fn b(f: HyperFormula) -> Box<HyperFormula> {
        Box::new(f)
    }

    pub fn tt() -> HyperFormula {
        HyperFormula::True
    }

    pub fn atom(p: &str, x: &str) -> HyperFormula {
        HyperFormula::Atom(Prop::new(p), TraceVar::new(x))
    }

    pub fn not(a: HyperFormula) -> HyperFormula {
        HyperFormula::Not(b(a))
    }

    pub fn or(x: HyperFormula, y: HyperFormula) -> HyperFormula {
        HyperFormula::Or(b(x), b(y))
    }

    pub fn and(x: HyperFormula, y: HyperFormula) -> HyperFormula {
        HyperFormula::And(b(x), b(y))
    }

    pub fn implies(x: HyperFormula, y: HyperFormula) -> HyperFormula {
        HyperFormula::Implies(b(x), b(y))
    }

    pub fn iff(x: HyperFormula, y: HyperFormula) -> HyperFormula {
        HyperFormula::Iff(b(x), b(y))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = HyperFormula>) -> HyperFormula {
        items.into_iter().reduce(and).unwrap_or(HyperFormula::True)
    }

    /// Left-nested disjunction; `!true` when empty.
    pub fn disj(items: impl IntoIterator<Item = HyperFormula>) -> HyperFormula {
        items
            .into_iter()
            .reduce(or)
            .unwrap_or_else(|| not(HyperFormula::True))
    }

    pub fn ctx<'a>(vars: impl IntoIterator<Item = &'a str>, a: HyperFormula) -> HyperFormula {
        HyperFormula::InContext(vars.into_iter().map(TraceVar::new).collect(), b(a))
    }

    /// Label from proposition names, each used as an atomic PLTL formula.
    pub fn label<'a>(props: impl IntoIterator<Item = &'a str>) -> StutterSet {
        props.into_iter().map(PltlFormula::atom).collect()
    }

    pub fn next(g: StutterSet, a: HyperFormula) -> HyperFormula {
        HyperFormula::Next(g, b(a))
    }

    pub fn until(g: StutterSet, x: HyperFormula, y: HyperFormula) -> HyperFormula {
        HyperFormula::Until(g, b(x), b(y))
    }

    pub fn yesterday(g: StutterSet, a: HyperFormula) -> HyperFormula {
        HyperFormula::Yesterday(g, b(a))
    }

    pub fn since(g: StutterSet, x: HyperFormula, y: HyperFormula) -> HyperFormula {
        HyperFormula::Since(g, b(x), b(y))
    }

    pub fn eventually(g: StutterSet, a: HyperFormula) -> HyperFormula {
        HyperFormula::Eventually(g, b(a))
    }

    pub fn always(g: StutterSet, a: HyperFormula) -> HyperFormula {
        HyperFormula::Always(g, b(a))
    }

    pub fn once(g: StutterSet, a: HyperFormula) -> HyperFormula {
        HyperFormula::Once(g, b(a))
    }

    pub fn x(a: HyperFormula) -> HyperFormula {
        next(StutterSet::new(), a)
    }

    pub fn f(a: HyperFormula) -> HyperFormula {
        eventually(StutterSet::new(), a)
    }

    pub fn g(a: HyperFormula) -> HyperFormula {
        always(StutterSet::new(), a)
    }

    pub fn u(x: HyperFormula, y: HyperFormula) -> HyperFormula {
        until(StutterSet::new(), x, y)
    }

    pub fn exists(x: &str, a: HyperFormula) -> HyperFormula {
        HyperFormula::Quant(Quantifier::Exists, TraceVar::new(x), b(a))
    }

    pub fn forall(x: &str, a: HyperFormula) -> HyperFormula {
        HyperFormula::Quant(Quantifier::Forall, TraceVar::new(x), b(a))
    }
}

impl HyperFormula {
    /// Direct subformulas in syntactic order.
    pub fn children(&self) -> Vec<&HyperFormula> {
        use HyperFormula::*;
        match self {
            True | Atom(..) => vec![],
            Not(a)
            | InContext(_, a)
            | Next(_, a)
            | Yesterday(_, a)
            | Eventually(_, a)
            | Always(_, a)
            | Once(_, a)
            | Historically(_, a)
            | Quant(_, _, a) => vec![a],
            Or(a, b) | And(a, b) | Implies(a, b) | Iff(a, b) | Until(_, a, b) | Since(_, a, b) => {
                vec![a, b]
            }
        }
    }

    /// Rewrites sugar into `True`, `Atom`, `Not`, `Or`, `InContext`, `Next`,
    /// `Until`, `Yesterday`, `Since`, `Quant`. Labels are left as written.
    pub fn desugar(&self) -> HyperFormula {
        use build::*;
        use HyperFormula::*;
        let and_ = |a, b| not(or(not(a), not(b)));
        match self {
            True => True,
            Atom(p, x) => Atom(p.clone(), x.clone()),
            Not(a) => not(a.desugar()),
            Or(a, b) => or(a.desugar(), b.desugar()),
            And(a, b) => and_(a.desugar(), b.desugar()),
            Implies(a, b) => or(not(a.desugar()), b.desugar()),
            Iff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                or(and_(a.clone(), b.clone()), and_(not(a), not(b)))
            }
            InContext(c, a) => InContext(c.clone(), Box::new(a.desugar())),
            Next(g, a) => next(g.clone(), a.desugar()),
            Until(g, a, b) => until(g.clone(), a.desugar(), b.desugar()),
            Yesterday(g, a) => yesterday(g.clone(), a.desugar()),
            Since(g, a, b) => since(g.clone(), a.desugar(), b.desugar()),
            Eventually(g, a) => until(g.clone(), True, a.desugar()),
            Always(g, a) => not(until(g.clone(), True, not(a.desugar()))),
            Once(g, a) => since(g.clone(), True, a.desugar()),
            Historically(g, a) => not(since(g.clone(), True, not(a.desugar()))),
            Quant(q, x, a) => Quant(*q, x.clone(), Box::new(a.desugar())),
        }
    }

    /// Free trace variables.
    pub fn free_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<TraceVar>, out: &mut VarSet) {
        match self {
            HyperFormula::Atom(_, x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            HyperFormula::Quant(_, x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    /// Every variable name occurring anywhere, including contexts and binders.
    pub fn all_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.visit(&mut |f| match f {
            HyperFormula::Atom(_, x) | HyperFormula::Quant(_, x, _) => {
                out.insert(x.clone());
            }
            HyperFormula::InContext(c, _) => out.extend(c.iter().cloned()),
            _ => {}
        });
        out
    }

    /// Propositions in atoms and in labels.
    pub fn props(&self) -> BTreeSet<Prop> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let HyperFormula::Atom(p, _) = f {
                out.insert(p.clone());
            }
            if let Some(g) = f.label() {
                for t in g {
                    t.props(&mut out);
                }
            }
        });
        out
    }

    /// Label of a temporal node.
    pub fn label(&self) -> Option<&StutterSet> {
        use HyperFormula::*;
        match self {
            Next(g, _)
            | Until(g, ..)
            | Yesterday(g, _)
            | Since(g, ..)
            | Eventually(g, _)
            | Always(g, _)
            | Once(g, _)
            | Historically(g, _) => Some(g),
            _ => None,
        }
    }

    pub fn is_temporal(&self) -> bool {
        self.label().is_some()
    }

    pub fn is_past_modality(&self) -> bool {
        use HyperFormula::*;
        matches!(self, Yesterday(..) | Since(..) | Once(..) | Historically(..))
    }

    /// Preorder traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a HyperFormula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut qf = true;
        self.visit(&mut |f| {
            if matches!(f, HyperFormula::Quant(..)) {
                qf = false;
            }
        });
        qf
    }

    pub fn contains_context(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(f, HyperFormula::InContext(..)) {
                found = true;
            }
        });
        found
    }

    /// Structural checks not enforced by the type: nonempty contexts.
    pub fn validate(&self) -> Result<(), String> {
        let mut err = None;
        self.visit(&mut |f| {
            if let HyperFormula::InContext(c, _) = f {
                if c.is_empty() && err.is_none() {
                    err = Some("context must name at least one variable".to_string());
                }
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// Context in effect at the subformula reached by `path` (child indices from
    /// the root), when the whole formula is evaluated in the universal context.
    pub fn context_of_subformula(&self, path: &[usize]) -> Result<Context, String> {
        let mut ctx = Context::Universal;
        let mut cur = self;
        for (depth, &i) in path.iter().enumerate() {
            if let HyperFormula::InContext(c, _) = cur {
                ctx = Context::Explicit(c.clone());
            }
            let ch = cur.children();
            cur = ch
                .get(i)
                .ok_or_else(|| format!("path step {depth} selects child {i} of a node with {} children", ch.len()))?;
        }
        Ok(ctx)
    }
}
