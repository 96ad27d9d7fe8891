//! Semantics of GHyLTL with stuttering and contexts over lasso traces.
//!
//! Formulas are compiled to an arena with interned variables and propositions;
//! letters and contexts become bitmasks. Until searches stop when the vector of
//! canonical positions repeats; Since searches walk back until the predecessor
//! is undefined.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

pub use crate::syntax::Context;
use crate::pltl_eval::{change_points, ChangePointView};
use crate::syntax::{HyperFormula, Prop, Quantifier, StutterSet, TraceVar};
use crate::traces::{lcm, system_traces, LassoTrace, PointedTrace, TraceSet, TransitionSystem};

/// Partial map from trace variables to pointed traces.
pub type Assignment = BTreeMap<TraceVar, PointedTrace>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("free variable '{0}' is not bound by the assignment")]
    UnboundVariable(String),
    #[error("formula must be quantifier-free")]
    NotQuantifierFree,
    #[error("the trace set is empty")]
    EmptyModel,
    #[error("not a sentence: free variables {0:?}")]
    NotASentence(Vec<String>),
    #[error("the initial vertex set is empty")]
    NoInitialVertex,
    #[error("{0}")]
    Limit(String),
    #[error("invalid formula: {0}")]
    Invalid(String),
}

/// (Γ, C)-successor: every variable of `c` in the domain moves to its next Γ-change point.
pub fn assign_succ(a: &Assignment, g: &StutterSet, c: &Context) -> Assignment {
    a.iter()
        .map(|(x, pt)| {
            let pt = if c.contains(x) { crate::pltl_eval::gamma_succ(pt, g) } else { pt.clone() };
            (x.clone(), pt)
        })
        .collect()
}

/// (Γ, C)-predecessor; undefined when some variable of `c` in the domain has none.
pub fn assign_pred(a: &Assignment, g: &StutterSet, c: &Context) -> Option<Assignment> {
    a.iter()
        .map(|(x, pt)| {
            let pt = if c.contains(x) { crate::pltl_eval::gamma_pred(pt, g)? } else { pt.clone() };
            Some((x.clone(), pt))
        })
        .collect()
}

type NodeId = usize;
type Mask = u128;

#[derive(Clone, Debug)]
enum Node {
    True,
    Atom { prop: u32, var: usize },
    Not(NodeId),
    Or(NodeId, NodeId),
    Ctx(Mask, NodeId),
    Next(usize, NodeId),
    Until(usize, NodeId, NodeId),
    Yesterday(usize, NodeId),
    Since(usize, NodeId, NodeId),
    Quant(Quantifier, usize, NodeId),
}

/// Compiled formula.
#[derive(Clone, Debug)]
struct Program {
    nodes: Vec<Node>,
    root: NodeId,
    free: Vec<Mask>,
    /// Variables whose binding can change the value of a node: free variables
    /// and context members of past operators. `amb` marks nodes with a past
    /// operator evaluated in the surrounding context.
    rel: Vec<Mask>,
    amb: Vec<bool>,
    /// Nodes cached per session: temporal and context nodes.
    memo: Vec<bool>,
    vars: Vec<TraceVar>,
    var_index: HashMap<TraceVar, usize>,
    props: Vec<Prop>,
    gammas: Vec<StutterSet>,
    past_depth: usize,
}

struct Compiler {
    nodes: Vec<Node>,
    free: Vec<Mask>,
    past: Vec<bool>,
    var_index: HashMap<TraceVar, usize>,
    vars: Vec<TraceVar>,
    prop_index: HashMap<Prop, u32>,
    props: Vec<Prop>,
    gamma_index: HashMap<StutterSet, usize>,
    gammas: Vec<StutterSet>,
}

impl Compiler {
    fn var(&mut self, x: &TraceVar) -> Result<usize, EvalError> {
        if let Some(&i) = self.var_index.get(x) {
            return Ok(i);
        }
        if self.vars.len() == 128 {
            return Err(EvalError::Limit("more than 128 trace variables".into()));
        }
        self.var_index.insert(x.clone(), self.vars.len());
        self.vars.push(x.clone());
        Ok(self.vars.len() - 1)
    }

    fn prop(&mut self, p: &Prop) -> Result<u32, EvalError> {
        if let Some(&i) = self.prop_index.get(p) {
            return Ok(i);
        }
        if self.props.len() == 128 {
            return Err(EvalError::Limit("more than 128 propositions in atoms".into()));
        }
        let i = self.props.len() as u32;
        self.prop_index.insert(p.clone(), i);
        self.props.push(p.clone());
        Ok(i)
    }

    fn gamma(&mut self, g: &StutterSet) -> usize {
        if let Some(&i) = self.gamma_index.get(g) {
            return i;
        }
        self.gamma_index.insert(g.clone(), self.gammas.len());
        self.gammas.push(g.clone());
        self.gammas.len() - 1
    }

    fn push(&mut self, n: Node, free: Mask, past: bool) -> NodeId {
        self.nodes.push(n);
        self.free.push(free);
        self.past.push(past);
        self.nodes.len() - 1
    }

    /// Compiles a desugared formula.
    fn compile(&mut self, f: &HyperFormula) -> Result<(NodeId, usize), EvalError> {
        use HyperFormula as H;
        Ok(match f {
            H::True => (self.push(Node::True, 0, false), 0),
            H::Atom(p, x) => {
                let (prop, var) = (self.prop(p)?, self.var(x)?);
                (self.push(Node::Atom { prop, var }, 1 << var, false), 0)
            }
            H::Not(a) => {
                let (a, d) = self.compile(a)?;
                (self.push(Node::Not(a), self.free[a], self.past[a]), d)
            }
            H::Or(a, b) => {
                let (a, da) = self.compile(a)?;
                let (b, db) = self.compile(b)?;
                let n = self.push(Node::Or(a, b), self.free[a] | self.free[b], self.past[a] || self.past[b]);
                (n, da.max(db))
            }
            H::InContext(c, a) => {
                let mut mask = 0;
                for x in c {
                    mask |= 1 << self.var(x)?;
                }
                let (a, d) = self.compile(a)?;
                (self.push(Node::Ctx(mask, a), self.free[a], self.past[a]), d)
            }
            H::Next(g, a) | H::Yesterday(g, a) => {
                let gi = self.gamma(g);
                let (a, d) = self.compile(a)?;
                let past = matches!(f, H::Yesterday(..));
                let n = if past { Node::Yesterday(gi, a) } else { Node::Next(gi, a) };
                (self.push(n, self.free[a], past || self.past[a]), d + past as usize)
            }
            H::Until(g, a, b) | H::Since(g, a, b) => {
                let gi = self.gamma(g);
                let (a, da) = self.compile(a)?;
                let (b, db) = self.compile(b)?;
                let past = matches!(f, H::Since(..));
                let n = if past { Node::Since(gi, a, b) } else { Node::Until(gi, a, b) };
                let p = past || self.past[a] || self.past[b];
                (self.push(n, self.free[a] | self.free[b], p), da.max(db) + past as usize)
            }
            H::Quant(q, x, a) => {
                let v = self.var(x)?;
                let (a, d) = self.compile(a)?;
                (self.push(Node::Quant(*q, v, a), self.free[a] & !(1 << v), self.past[a]), d)
            }
            _ => unreachable!("formula is desugared"),
        })
    }
}

impl Program {
    fn new(f: &HyperFormula, extra_vars: impl IntoIterator<Item = TraceVar>) -> Result<Program, EvalError> {
        f.validate().map_err(EvalError::Invalid)?;
        let mut c = Compiler {
            nodes: Vec::new(),
            free: Vec::new(),
            past: Vec::new(),
            var_index: HashMap::new(),
            vars: Vec::new(),
            prop_index: HashMap::new(),
            props: Vec::new(),
            gamma_index: HashMap::new(),
            gammas: Vec::new(),
        };
        for x in extra_vars {
            c.var(&x)?;
        }
        let (root, past_depth) = c.compile(&f.desugar())?;
        let (rel, amb) = relevance(&c.nodes);
        let memo = memo_nodes(&c.nodes);
        Ok(Program {
            nodes: c.nodes,
            root,
            free: c.free,
            rel,
            amb,
            memo,
            vars: c.vars,
            var_index: c.var_index,
            props: c.props,
            gammas: c.gammas,
            past_depth,
        })
    }
}

fn relevance(nodes: &[Node]) -> (Vec<Mask>, Vec<bool>) {
    let mut rel = vec![0 as Mask; nodes.len()];
    let mut amb = vec![false; nodes.len()];
    for (i, n) in nodes.iter().enumerate() {
        (rel[i], amb[i]) = match *n {
            Node::True => (0, false),
            Node::Atom { var, .. } => (1 << var, false),
            Node::Not(a) | Node::Next(_, a) => (rel[a], amb[a]),
            Node::Or(a, b) | Node::Until(_, a, b) => (rel[a] | rel[b], amb[a] || amb[b]),
            Node::Yesterday(_, a) => (rel[a], true),
            Node::Since(_, a, b) => (rel[a] | rel[b], true),
            Node::Ctx(m, a) => (rel[a] | if amb[a] { m } else { 0 }, false),
            Node::Quant(_, v, a) => (rel[a] & !(1 << v), amb[a]),
        };
    }
    (rel, amb)
}

fn memo_nodes(nodes: &[Node]) -> Vec<bool> {
    nodes
        .iter()
        .map(|n| !matches!(n, Node::True | Node::Atom { .. } | Node::Not(_) | Node::Or(..) | Node::Quant(..)))
        .collect()
}

/// Per-trace data: projected letters and change points for every label of the program.
#[derive(Clone, Debug)]
struct TraceData {
    letters: Vec<Mask>,
    prefix: usize,
    lp: usize,
    cps: Vec<Option<ChangePointView>>,
    /// Positions at or above `thr + per` are reduced modulo `per` in signatures.
    thr: usize,
    per: usize,
}

impl TraceData {
    fn new(t: &LassoTrace, prog: &Program) -> TraceData {
        let project = |l: &crate::traces::Letter| {
            prog.props
                .iter()
                .enumerate()
                .filter(|(_, p)| l.contains(p))
                .fold(0 as Mask, |m, (i, _)| m | (1 << i))
        };
        let letters = t.prefix().iter().chain(t.cycle()).map(project).collect();
        let cps: Vec<Option<ChangePointView>> = prog
            .gammas
            .iter()
            .map(|g| if g.is_empty() { None } else { Some(change_points(t, g)) })
            .collect();
        let mut thr = t.prefix_len();
        let mut per = t.loop_len();
        for v in cps.iter().flatten() {
            thr = thr.max(v.threshold);
            per = lcm(per, v.period);
        }
        thr += prog.past_depth * per;
        TraceData { letters, prefix: t.prefix_len(), lp: t.loop_len(), cps, thr, per }
    }

    fn letter(&self, i: usize) -> Mask {
        if i < self.prefix {
            self.letters[i]
        } else {
            self.letters[self.prefix + (i - self.prefix) % self.lp]
        }
    }

    fn succ(&self, g: usize, i: usize) -> usize {
        match &self.cps[g] {
            None => i + 1,
            Some(v) => v.succ(i),
        }
    }

    fn pred(&self, g: usize, i: usize) -> Option<usize> {
        match &self.cps[g] {
            None => i.checked_sub(1),
            Some(v) => v.pred(i),
        }
    }

    fn canonical(&self, i: usize) -> usize {
        let w = self.thr + self.per;
        if i < w {
            i
        } else {
            w + (i - w) % self.per
        }
    }
}

type Slot = Option<(u32, usize)>;
type State = Vec<Slot>;

/// Compiled formula together with a quantification domain.
pub struct Evaluator {
    source: HyperFormula,
    prog: Program,
    model: TraceSet,
    data: Vec<TraceData>,
}

struct Session<'a> {
    ev: &'a Evaluator,
    extra: Vec<TraceData>,
    prune: bool,
    cache: RefCell<HashMap<(NodeId, Option<Mask>, State), bool>>,
}

impl Evaluator {
    /// Compiles `f` for evaluation with quantifiers ranging over `model`.
    pub fn new(model: &TraceSet, f: &HyperFormula) -> Result<Evaluator, EvalError> {
        Self::with_vars(model, f, std::iter::empty())
    }

    fn with_vars(
        model: &TraceSet,
        f: &HyperFormula,
        vars: impl IntoIterator<Item = TraceVar>,
    ) -> Result<Evaluator, EvalError> {
        let prog = Program::new(&miniscope(f), vars)?;
        let data = model.traces().map(|t| TraceData::new(t, &prog)).collect();
        Ok(Evaluator { source: f.clone(), prog, model: model.clone(), data })
    }

    fn session(&self, a: &Assignment, prune: bool) -> Result<(Session<'_>, State), EvalError> {
        let mut s = Session { ev: self, extra: Vec::new(), prune, cache: RefCell::default() };
        let mut st: State = vec![None; self.prog.vars.len()];
        for (x, pt) in a {
            if let Some(&v) = self.prog.var_index.get(x) {
                let id = (self.data.len() + s.extra.len()) as u32;
                s.extra.push(TraceData::new(&pt.trace, &self.prog));
                st[v] = Some((id, pt.position));
            }
        }
        let dom: Mask = st
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .fold(0, |m, (i, _)| m | (1 << i));
        let missing = self.prog.free[self.prog.root] & !dom;
        if missing != 0 {
            let v = missing.trailing_zeros() as usize;
            return Err(EvalError::UnboundVariable(self.prog.vars[v].to_string()));
        }
        Ok((s, st))
    }

    fn context_mask(&self, c: &Context) -> Option<Mask> {
        match c {
            Context::Universal => None,
            Context::Explicit(s) => Some(
                s.iter()
                    .filter_map(|x| self.prog.var_index.get(x))
                    .fold(0, |m, &v| m | (1 << v)),
            ),
        }
    }

    /// `(model, a, c) ⊨ f`.
    pub fn eval(&self, a: &Assignment, c: &Context) -> Result<bool, EvalError> {
        self.eval_mode(a, c, true)
    }

    /// Same as [`Evaluator::eval`] without early quantifier cut-offs.
    pub fn eval_unpruned(&self, a: &Assignment, c: &Context) -> Result<bool, EvalError> {
        self.eval_mode(a, c, false)
    }

    fn eval_mode(&self, a: &Assignment, c: &Context, prune: bool) -> Result<bool, EvalError> {
        let (s, mut st) = self.session(a, prune)?;
        let has_quant = self.prog.nodes.iter().any(|n| matches!(n, Node::Quant(..)));
        if has_quant && self.model.is_empty() {
            return Err(EvalError::EmptyModel);
        }
        Ok(s.eval(self.prog.root, &mut st, self.context_mask(c)))
    }

    /// First satisfying binding of the leading block of existential quantifiers,
    /// in model order, with the names of the chosen traces.
    pub fn find_witness(&self, a: &Assignment, c: &Context) -> Result<Option<Vec<(TraceVar, String)>>, EvalError> {
        if self.model.is_empty() {
            return Err(EvalError::EmptyModel);
        }
        let mut block = Vec::new();
        let mut body = &self.source;
        while let HyperFormula::Quant(Quantifier::Exists, x, b) = body {
            block.push(x.clone());
            body = b;
        }
        let mut a = a.clone();
        let mut chosen = Vec::new();
        for (i, x) in block.iter().enumerate() {
            let rest = block[i + 1..]
                .iter()
                .rev()
                .fold(body.clone(), |acc, y| HyperFormula::Quant(Quantifier::Exists, y.clone(), Box::new(acc)));
            let ev = Self::with_vars(&self.model, &rest, a.keys().cloned().chain([x.clone()]))?;
            let mut hit = None;
            for (name, t) in self.model.iter() {
                a.insert(x.clone(), PointedTrace::initial(t.clone()));
                if ev.eval(&a, c)? {
                    hit = Some(name.to_string());
                    break;
                }
            }
            match hit {
                Some(name) => chosen.push((x.clone(), name)),
                None => return Ok(None),
            }
        }
        Ok(Some(chosen))
    }
}

/// Moves conjuncts out of `∃x` and disjuncts out of `∀x` when they do not
/// mention `x` and contain no past modality. Extra variables never change
/// the truth of future-only formulas, so the rewrite preserves meaning.
pub fn miniscope(f: &HyperFormula) -> HyperFormula {
    use HyperFormula as H;
    let H::Quant(q, x, body) = f else {
        return crate::pnf::map_children(f, &mut miniscope);
    };
    let body = miniscope(body);
    let exists = *q == Quantifier::Exists;
    let mut parts = Vec::new();
    split(body, exists, &mut parts);
    let (out, keep): (Vec<H>, Vec<H>) = parts.into_iter().partition(|g| {
        let mut past = false;
        g.visit(&mut |h| past |= h.is_past_modality());
        !past && !g.free_vars().contains(x)
    });
    let join = |items: Vec<H>| {
        let unit = if exists { H::True } else { H::Not(Box::new(H::True)) };
        items
            .into_iter()
            .reduce(|l, r| if exists { H::And(Box::new(l), Box::new(r)) } else { H::Or(Box::new(l), Box::new(r)) })
            .unwrap_or(unit)
    };
    let inner = H::Quant(*q, x.clone(), Box::new(join(keep)));
    if out.is_empty() {
        return inner;
    }
    let mut items = out;
    items.push(inner);
    join(items)
}

fn split(f: HyperFormula, conj: bool, out: &mut Vec<HyperFormula>) {
    use HyperFormula as H;
    match f {
        H::And(a, b) if conj => {
            split(*a, conj, out);
            split(*b, conj, out);
        }
        H::Or(a, b) if !conj => {
            split(*a, conj, out);
            split(*b, conj, out);
        }
        H::Implies(a, b) if !conj => {
            out.push(H::Not(a));
            split(*b, conj, out);
        }
        f => out.push(f),
    }
}

impl Session<'_> {
    fn trace(&self, id: u32) -> &TraceData {
        let n = self.ev.data.len();
        let id = id as usize;
        if id < n {
            &self.ev.data[id]
        } else {
            &self.extra[id - n]
        }
    }

    fn in_ctx(ctx: Option<Mask>, v: usize) -> bool {
        ctx.is_none_or(|m| m & (1 << v) != 0)
    }

    fn succ(&self, st: &State, g: usize, ctx: Option<Mask>) -> State {
        st.iter()
            .enumerate()
            .map(|(v, s)| match *s {
                Some((t, i)) if Self::in_ctx(ctx, v) => Some((t, self.trace(t).succ(g, i))),
                other => other,
            })
            .collect()
    }

    fn pred(&self, st: &State, g: usize, ctx: Option<Mask>) -> Option<State> {
        st.iter()
            .enumerate()
            .map(|(v, s)| match *s {
                Some((t, i)) if Self::in_ctx(ctx, v) => Some(Some((t, self.trace(t).pred(g, i)?))),
                other => Some(other),
            })
            .collect()
    }

    fn signature(&self, st: &State) -> State {
        st.iter()
            .map(|s| s.map(|(t, i)| (t, self.trace(t).canonical(i))))
            .collect()
    }

    fn dom(st: &State) -> Mask {
        st.iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    /// Variables that can influence node `n` evaluated in `ctx`.
    fn relevant(&self, n: NodeId, ctx: Option<Mask>) -> Mask {
        let prog = &self.ev.prog;
        let all = if prog.vars.len() == 128 { Mask::MAX } else { (1 << prog.vars.len()) - 1 };
        prog.rel[n] | if prog.amb[n] { ctx.unwrap_or(all) } else { 0 }
    }

    fn eval(&self, n: NodeId, st: &mut State, ctx: Option<Mask>) -> bool {
        if !self.ev.prog.memo[n] {
            return self.eval_node(n, st, ctx);
        }
        let rel = self.relevant(n, ctx);
        let key_state: State = st
            .iter()
            .enumerate()
            .map(|(v, s)| if rel & (1 << v) != 0 { *s } else { None })
            .collect();
        let key = (n, ctx, key_state);
        if let Some(&b) = self.cache.borrow().get(&key) {
            return b;
        }
        let b = self.eval_node(n, st, ctx);
        self.cache.borrow_mut().insert(key, b);
        b
    }

    fn eval_node(&self, n: NodeId, st: &mut State, ctx: Option<Mask>) -> bool {
        match self.ev.prog.nodes[n] {
            Node::True => true,
            Node::Atom { prop, var } => {
                let (t, i) = st[var].expect("free variables are bound");
                self.trace(t).letter(i) & (1 << prop) != 0
            }
            Node::Not(a) => !self.eval(a, st, ctx),
            Node::Or(a, b) => self.eval(a, st, ctx) || self.eval(b, st, ctx),
            Node::Ctx(m, a) => self.eval(a, st, Some(m)),
            Node::Next(g, a) => {
                let mut next = self.succ(st, g, ctx);
                self.eval(a, &mut next, ctx)
            }
            Node::Yesterday(g, a) => match self.pred(st, g, ctx) {
                Some(mut prev) => self.eval(a, &mut prev, ctx),
                None => false,
            },
            Node::Until(g, a, b) => {
                let mut cur = st.clone();
                let mut seen = HashSet::new();
                loop {
                    if self.eval(b, &mut cur, ctx) {
                        return true;
                    }
                    if !self.eval(a, &mut cur, ctx) || !seen.insert(self.signature(&cur)) {
                        return false;
                    }
                    cur = self.succ(&cur, g, ctx);
                }
            }
            Node::Since(g, a, b) => {
                let mut cur = st.clone();
                loop {
                    if self.eval(b, &mut cur, ctx) {
                        return true;
                    }
                    if !self.eval(a, &mut cur, ctx) {
                        return false;
                    }
                    match self.pred(&cur, g, ctx) {
                        Some(prev) if prev != cur => cur = prev,
                        _ => return false,
                    }
                }
            }
            Node::Quant(q, v, a) => {
                let saved = st[v].take();
                if self.prune {
                    if let Some(r) = self.partial(a, st, ctx) {
                        st[v] = saved;
                        return r;
                    }
                }
                let want = q == Quantifier::Exists;
                let mut result = !want;
                for t in 0..self.ev.data.len() as u32 {
                    st[v] = Some((t, 0));
                    if self.eval(a, st, ctx) == want {
                        result = want;
                        break;
                    }
                }
                st[v] = saved;
                result
            }
        }
    }

    /// Three-valued evaluation treating unbound variables as unknown. A result is
    /// only returned when it holds for every extension of the domain.
    fn partial(&self, n: NodeId, st: &mut State, ctx: Option<Mask>) -> Option<bool> {
        let prog = &self.ev.prog;
        if self.relevant(n, ctx) & !Self::dom(st) == 0 {
            return Some(self.eval(n, st, ctx));
        }
        match prog.nodes[n] {
            Node::Not(a) => self.partial(a, st, ctx).map(|b| !b),
            Node::Or(a, b) => match self.partial(a, st, ctx) {
                Some(true) => Some(true),
                ra => match (ra, self.partial(b, st, ctx)) {
                    (_, Some(true)) => Some(true),
                    (Some(false), Some(false)) => Some(false),
                    _ => None,
                },
            },
            Node::Ctx(m, a) => self.partial(a, st, Some(m)),
            Node::Quant(_, v, a) => {
                let saved = st[v].take();
                let r = self.partial(a, st, ctx);
                st[v] = saved;
                r
            }
            _ => None,
        }
    }
}

/// `(Π, C) ⊨ f` for quantifier-free `f`; independent of any trace set.
pub fn eval_qf(a: &Assignment, c: &Context, f: &HyperFormula) -> Result<bool, EvalError> {
    if !f.is_quantifier_free() {
        return Err(EvalError::NotQuantifierFree);
    }
    Evaluator::with_vars(&TraceSet::new(), f, a.keys().cloned())?.eval(a, c)
}

/// `(L, Π, C) ⊨ f`.
pub fn eval(l: &TraceSet, a: &Assignment, c: &Context, f: &HyperFormula) -> Result<bool, EvalError> {
    if l.is_empty() {
        return Err(EvalError::EmptyModel);
    }
    Evaluator::with_vars(l, f, a.keys().cloned())?.eval(a, c)
}

/// `L ⊨ φ` for a sentence.
pub fn check_traceset(l: &TraceSet, sentence: &HyperFormula) -> Result<bool, EvalError> {
    let free = sentence.free_vars();
    if !free.is_empty() {
        return Err(EvalError::NotASentence(free.iter().map(|x| x.to_string()).collect()));
    }
    eval(l, &Assignment::new(), &Context::Universal, sentence)
}

/// Verdict relative to the finite set of lasso runs within the bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedVerdict {
    pub holds_on_bounded_fragment: bool,
    pub prefix_bound: usize,
    pub loop_bound: usize,
    pub pool_size: usize,
}

pub fn check_system(
    ts: &TransitionSystem,
    sentence: &HyperFormula,
    prefix_bound: usize,
    loop_bound: usize,
) -> Result<BoundedVerdict, EvalError> {
    if ts.initial.is_empty() {
        return Err(EvalError::NoInitialVertex);
    }
    let l = system_traces(ts, prefix_bound, loop_bound);
    Ok(BoundedVerdict {
        holds_on_bounded_fragment: check_traceset(&l, sentence)?,
        prefix_bound,
        loop_bound,
        pool_size: l.len(),
    })
}
