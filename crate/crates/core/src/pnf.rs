//! Prenex normal form over `AP ∪ {#}` with position traces `∅^i {#} ∅^ω`.
//!
//! Quantifiers are pulled out one at a time, innermost first. Quantifiers of
//! the input range over the original traces, the position quantifiers
//! introduced for until and since range over the position traces.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::hyper_eval::{check_traceset, EvalError};
use crate::syntax::{build, Context, HyperFormula, Prop, Quantifier, StutterSet, TraceVar, VarSet};
use crate::traces::{position_trace, TraceSet};

pub const HASH: &str = "#";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PnfError {
    #[error("not a sentence: free variables {0:?}")]
    NotASentence(Vec<String>),
    #[error("proposition '#' is reserved for position traces")]
    ReservedProp,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Role of a variable introduced by the rewriting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum FreshRole {
    /// Existential position variable of an until or since rule.
    PositionI,
    /// Universal position variable of an until or since rule.
    PositionJ,
    /// Input binder renamed apart.
    Renamed { original: TraceVar },
    /// Stands in for a context that became empty.
    EmptyContext,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreshVar {
    pub name: TraceVar,
    #[serde(flatten)]
    pub role: FreshRole,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PnfResult {
    pub formula: HyperFormula,
    pub fresh_vars: Vec<FreshVar>,
    pub uses_hash: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Ori,
    Pos,
}

/// Context during rewriting: an explicit set, or every variable except some.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Cx {
    Set(VarSet),
    AllBut(VarSet),
}

impl Cx {
    fn universal() -> Cx {
        Cx::AllBut(VarSet::new())
    }

    fn from_context(c: &Context) -> Cx {
        match c {
            Context::Universal => Cx::universal(),
            Context::Explicit(s) => Cx::Set(s.clone()),
        }
    }

    fn contains(&self, x: &TraceVar) -> bool {
        match self {
            Cx::Set(s) => s.contains(x),
            Cx::AllBut(s) => !s.contains(x),
        }
    }

    fn minus<'a>(&self, vs: impl IntoIterator<Item = &'a TraceVar>) -> Cx {
        match self {
            Cx::Set(s) => {
                let mut s = s.clone();
                for v in vs {
                    s.remove(v);
                }
                Cx::Set(s)
            }
            Cx::AllBut(s) => Cx::AllBut(s.iter().cloned().chain(vs.into_iter().cloned()).collect()),
        }
    }

    fn plus(&self, v: &TraceVar) -> Cx {
        match self {
            Cx::Set(s) => {
                let mut s = s.clone();
                s.insert(v.clone());
                Cx::Set(s)
            }
            Cx::AllBut(s) => {
                let mut s = s.clone();
                s.remove(v);
                Cx::AllBut(s)
            }
        }
    }
}

/// Working syntax. Quantifier-free input subtrees stay verbatim in `Leaf`.
#[derive(Clone, Debug)]
enum W {
    Leaf(HyperFormula),
    Not(Box<W>),
    Or(Box<W>, Box<W>),
    And(Box<W>, Box<W>),
    Implies(Box<W>, Box<W>),
    Ctx(Cx, Box<W>),
    Next(StutterSet, Box<W>),
    Yesterday(StutterSet, Box<W>),
    Until(StutterSet, Box<W>, Box<W>),
    Since(StutterSet, Box<W>, Box<W>),
    Quant(Quantifier, Kind, TraceVar, Box<W>),
}

type Prefix = Vec<(Quantifier, Kind, TraceVar)>;

fn bx(w: W) -> Box<W> {
    Box::new(w)
}

fn tt() -> W {
    W::Leaf(HyperFormula::True)
}

fn hash(x: &TraceVar) -> W {
    W::Leaf(HyperFormula::Atom(Prop::new(HASH), x.clone()))
}

fn and(a: W, b: W) -> W {
    W::And(bx(a), bx(b))
}

fn ev(g: StutterSet, a: W) -> W {
    W::Until(g, bx(tt()), bx(a))
}

fn once(g: StutterSet, a: W) -> W {
    W::Since(g, bx(tt()), bx(a))
}

fn ctx(c: Cx, a: W) -> W {
    W::Ctx(c, bx(a))
}

fn set<'a>(vs: impl IntoIterator<Item = &'a TraceVar>) -> Cx {
    Cx::Set(vs.into_iter().cloned().collect())
}

fn wrap(prefix: &[(Quantifier, Kind, TraceVar)], body: W) -> W {
    prefix.iter().rev().fold(body, |b, (q, k, x)| W::Quant(*q, *k, x.clone(), bx(b)))
}

fn from_hyper(f: &HyperFormula) -> W {
    use HyperFormula as H;
    if f.is_quantifier_free() {
        return W::Leaf(f.clone());
    }
    let g = from_hyper;
    match f {
        H::True | H::Atom(..) => W::Leaf(f.clone()),
        H::Not(a) => W::Not(bx(g(a))),
        H::Or(a, b) => W::Or(bx(g(a)), bx(g(b))),
        H::And(a, b) => W::And(bx(g(a)), bx(g(b))),
        H::Implies(a, b) => W::Implies(bx(g(a)), bx(g(b))),
        H::Iff(a, b) => {
            let (a, b) = (g(a), g(b));
            W::Or(
                bx(W::And(bx(a.clone()), bx(b.clone()))),
                bx(W::And(bx(W::Not(bx(a))), bx(W::Not(bx(b))))),
            )
        }
        H::InContext(c, a) => W::Ctx(Cx::Set(c.clone()), bx(g(a))),
        H::Next(l, a) => W::Next(l.clone(), bx(g(a))),
        H::Yesterday(l, a) => W::Yesterday(l.clone(), bx(g(a))),
        H::Until(l, a, b) => W::Until(l.clone(), bx(g(a)), bx(g(b))),
        H::Since(l, a, b) => W::Since(l.clone(), bx(g(a)), bx(g(b))),
        H::Eventually(l, a) => ev(l.clone(), g(a)),
        H::Once(l, a) => once(l.clone(), g(a)),
        H::Always(l, a) => W::Not(bx(ev(l.clone(), W::Not(bx(g(a)))))),
        H::Historically(l, a) => W::Not(bx(once(l.clone(), W::Not(bx(g(a)))))),
        H::Quant(q, x, a) => W::Quant(*q, Kind::Ori, x.clone(), bx(g(a))),
    }
}

struct Rewriter {
    taken: VarSet,
    fresh: Vec<FreshVar>,
}

impl Rewriter {
    fn new(taken: VarSet) -> Self {
        Rewriter { taken, fresh: Vec::new() }
    }

    fn fresh(&mut self, base: &str, role: FreshRole) -> TraceVar {
        let mut k = 1;
        let name = loop {
            let n = TraceVar::new(format!("{base}{k}"));
            if !self.taken.contains(&n) {
                break n;
            }
            k += 1;
        };
        self.taken.insert(name.clone());
        self.fresh.push(FreshVar { name: name.clone(), role });
        name
    }

    /// Renames binders apart. `scope` holds the variables bound at this point,
    /// `cur` the context in effect.
    fn hygiene(&mut self, w: W, scope: &VarSet, map: &BTreeMap<TraceVar, TraceVar>, cur: &Cx, seen: &mut VarSet) -> W {
        let rec = |s: &mut Self, a: Box<W>, seen: &mut VarSet| bx(s.hygiene(*a, scope, map, cur, seen));
        match w {
            W::Leaf(f) => W::Leaf(relabel(&f, map)),
            W::Not(a) => W::Not(rec(self, a, seen)),
            W::Or(a, b) => {
                let a = rec(self, a, seen);
                W::Or(a, rec(self, b, seen))
            }
            W::And(a, b) => {
                let a = rec(self, a, seen);
                W::And(a, rec(self, b, seen))
            }
            W::Implies(a, b) => {
                let a = rec(self, a, seen);
                W::Implies(a, rec(self, b, seen))
            }
            W::Ctx(c, a) => {
                let c = match c {
                    Cx::Set(s) => Cx::Set(s.iter().map(|v| map.get(v).unwrap_or(v).clone()).collect()),
                    c => c,
                };
                let body = self.hygiene(*a, scope, map, &c, seen);
                W::Ctx(c, bx(body))
            }
            W::Next(g, a) => W::Next(g, rec(self, a, seen)),
            W::Yesterday(g, a) => W::Yesterday(g, rec(self, a, seen)),
            W::Until(g, a, b) => {
                let a = rec(self, a, seen);
                W::Until(g, a, rec(self, b, seen))
            }
            W::Since(g, a, b) => {
                let a = rec(self, a, seen);
                W::Since(g, a, rec(self, b, seen))
            }
            W::Quant(q, k, x, a) => {
                let mut inner = map.clone();
                let mut scope = scope.clone();
                if !seen.contains(&x) {
                    seen.insert(x.clone());
                    inner.remove(&x);
                    scope.insert(x.clone());
                    let body = self.hygiene(*a, &scope, &inner, cur, seen);
                    return W::Quant(q, k, x, bx(body));
                }
                let y = self.fresh(&format!("{x}_"), FreshRole::Renamed { original: x.clone() });
                seen.insert(y.clone());
                inner.insert(x.clone(), y.clone());
                // The old name no longer denotes this binding, but a shadowed
                // outer binding of it stays in the domain and must not move.
                let shadowed = scope.contains(&x);
                let mut c = if shadowed { cur.minus([&x]) } else { cur.clone() };
                if cur.contains(&x) {
                    c = c.plus(&y);
                }
                scope.insert(y.clone());
                let body = self.hygiene(*a, &scope, &inner, &c, seen);
                let body = if c == *cur { body } else { ctx(c, body) };
                W::Quant(q, k, y, bx(body))
            }
        }
    }

    /// Removes `v` from every context of `w`: the variables in `v` are bound
    /// elsewhere and must stay frozen here.
    fn hide(&mut self, w: W, v: &VarSet) -> W {
        let h = |s: &mut Self, a: Box<W>| bx(s.hide(*a, v));
        match w {
            W::Leaf(f) => W::Leaf(self.hide_leaf(&f, v)),
            W::Not(a) => W::Not(h(self, a)),
            W::Or(a, b) => {
                let a = h(self, a);
                W::Or(a, h(self, b))
            }
            W::And(a, b) => {
                let a = h(self, a);
                W::And(a, h(self, b))
            }
            W::Implies(a, b) => {
                let a = h(self, a);
                W::Implies(a, h(self, b))
            }
            W::Ctx(c, a) => {
                let c = c.minus(v);
                W::Ctx(c, h(self, a))
            }
            W::Next(g, a) => W::Next(g, h(self, a)),
            W::Yesterday(g, a) => W::Yesterday(g, h(self, a)),
            W::Until(g, a, b) => {
                let a = h(self, a);
                W::Until(g, a, h(self, b))
            }
            W::Since(g, a, b) => {
                let a = h(self, a);
                W::Since(g, a, h(self, b))
            }
            W::Quant(q, k, x, a) => W::Quant(q, k, x, h(self, a)),
        }
    }

    fn hide_leaf(&mut self, f: &HyperFormula, v: &VarSet) -> HyperFormula {
        match f {
            HyperFormula::InContext(c, a) => {
                let mut c: VarSet = c.difference(v).cloned().collect();
                if c.is_empty() {
                    c.insert(self.fresh("d", FreshRole::EmptyContext));
                }
                HyperFormula::InContext(c, Box::new(self.hide_leaf(a, v)))
            }
            _ => map_children(f, &mut |a| self.hide_leaf(a, v)),
        }
    }

    /// Matrix `m`, evaluated in `c`, once the variables `v` bound in a sibling are in the domain.
    /// Keeps the sibling's variables `v` from moving under `m`. Future-only
    /// matrices are unaffected by extra variables and stay as they are.
    fn seal(&mut self, m: W, c: &Cx, v: &VarSet) -> W {
        if v.is_empty() || !has_past(&m) {
            return m;
        }
        let m = self.hide(m, v);
        let d = c.minus(v);
        if d == *c {
            m
        } else {
            ctx(d, m)
        }
    }

    fn pnf(&mut self, w: W, c: &Cx) -> (Prefix, W) {
        match w {
            W::Leaf(_) => (Vec::new(), w),
            W::Not(a) => {
                let (p, m) = self.pnf(*a, c);
                (p.into_iter().map(|(q, k, x)| (q.dual(), k, x)).collect(), W::Not(bx(m)))
            }
            W::Or(a, b) => self.binary(*a, *b, c, false, W::Or),
            W::And(a, b) => self.binary(*a, *b, c, false, W::And),
            W::Implies(a, b) => self.binary(*a, *b, c, true, W::Implies),
            W::Ctx(d, a) => {
                let (p, m) = self.pnf(*a, &d);
                (p, W::Ctx(d, bx(m)))
            }
            W::Next(g, a) => self.step(g, *a, c, W::Next),
            W::Yesterday(g, a) => self.step(g, *a, c, W::Yesterday),
            W::Until(g, a, b) => self.temporal(g, *a, *b, c, false),
            W::Since(g, a, b) => self.temporal(g, *a, *b, c, true),
            W::Quant(q, k, x, a) => {
                let (mut p, m) = self.pnf(*a, c);
                p.insert(0, (q, k, x));
                (p, m)
            }
        }
    }

    fn binary(&mut self, a: W, b: W, c: &Cx, flip_left: bool, mk: fn(Box<W>, Box<W>) -> W) -> (Prefix, W) {
        let (mut pa, ma) = self.pnf(a, c);
        let (pb, mb) = self.pnf(b, c);
        if flip_left {
            pa = pa.into_iter().map(|(q, k, x)| (q.dual(), k, x)).collect();
        }
        let (va, vb) = (prefix_vars(&pa), prefix_vars(&pb));
        let m = mk(bx(self.seal(ma, c, &vb)), bx(self.seal(mb, c, &va)));
        pa.extend(pb);
        (pa, m)
    }

    /// `X_Γ Qx.ψ ≡ Qx.⟨C∖{x}⟩X_Γ⟨C⟩ψ` and the same for `Y_Γ`, for a whole block at once.
    fn step(&mut self, g: StutterSet, a: W, c: &Cx, mk: fn(StutterSet, Box<W>) -> W) -> (Prefix, W) {
        let (p, m) = self.pnf(a, c);
        if p.is_empty() {
            return (p, mk(g, bx(m)));
        }
        let v = prefix_vars(&p);
        let m = ctx(c.minus(&v), mk(g, bx(ctx(c.clone(), m))));
        (p, m)
    }

    fn temporal(&mut self, g: StutterSet, a: W, b: W, c: &Cx, past: bool) -> (Prefix, W) {
        let (pa, ma) = self.pnf(a, c);
        let (pb, mb) = self.pnf(b, c);
        if pa.is_empty() && pb.is_empty() {
            let m = if past { W::Since(g, bx(ma), bx(mb)) } else { W::Until(g, bx(ma), bx(mb)) };
            return (Vec::new(), m);
        }
        let left = !pa.is_empty();
        let (q, k, x) = if left { pa[0].clone() } else { pb[0].clone() };
        let (psi1, psi2) = if left {
            (wrap(&pa[1..], ma), wrap(&pb, mb))
        } else {
            (wrap(&pa, ma), wrap(&pb[1..], mb))
        };
        let xi = self.fresh("i", FreshRole::PositionI);
        let xj = self.fresh("j", FreshRole::PositionJ);
        let pos: VarSet = [xi.clone(), xj.clone()].into_iter().collect();
        let with_x: VarSet = pos.iter().chain([&x]).cloned().collect();
        let (h1, h2) = if left { (&pos, &with_x) } else { (&with_x, &pos) };
        let psi1 = self.hide(psi1, h1);
        let psi2 = self.hide(psi2, h2);
        let psi1 = ctx(c.minus(h1), psi1);
        let psi2 = ctx(c.minus(h2), psi2);
        let ci = c.plus(&xi).minus([&x, &xj]);
        let cj = c.plus(&xj).minus([&x, &xi]);
        let none = StutterSet::new;
        let reach = |y: &TraceVar, cy: Cx, psi: W| {
            if past {
                let at_origin = W::Not(bx(W::Yesterday(none(), bx(tt()))));
                let back = ctx(cy, once(g.clone(), and(at_origin, psi)));
                ctx(set([y]), ev(none(), and(hash(y), back)))
            } else {
                ctx(cy, ev(g.clone(), and(hash(y), psi)))
            }
        };
        let a_part = reach(&xi, ci, psi2);
        let d_part = reach(&xj, cj, psi1);
        let order = ctx(
            set([&xi, &xj]),
            ev(none(), and(hash(&xj), W::Next(none(), bx(ev(none(), hash(&xi)))))),
        );
        let body = and(a_part, W::Implies(bx(order), bx(d_part)));
        let ei = (Quantifier::Exists, Kind::Pos, xi);
        let aj = (Quantifier::Forall, Kind::Pos, xj);
        let mut prefix = if left { vec![ei, aj, (q, k, x)] } else { vec![ei, (q, k, x), aj] };
        let (pb, m) = self.pnf(body, c);
        prefix.extend(pb);
        (prefix, m)
    }

    fn materialize(&mut self, c: &Cx, all: &VarSet) -> VarSet {
        let s: VarSet = match c {
            Cx::Set(s) => s.clone(),
            Cx::AllBut(s) => all.difference(s).cloned().collect(),
        };
        if s.is_empty() {
            [self.fresh("d", FreshRole::EmptyContext)].into_iter().collect()
        } else {
            s
        }
    }

    fn to_hyper(&mut self, w: W, all: &VarSet) -> HyperFormula {
        use HyperFormula as H;
        let b = Box::new;
        match w {
            W::Leaf(f) => f,
            W::Not(a) => match *a {
                W::Until(g, t, n) if is_true(&t) && matches!(*n, W::Not(_)) => {
                    let W::Not(n) = *n else { unreachable!() };
                    H::Always(g, b(self.to_hyper(*n, all)))
                }
                W::Since(g, t, n) if is_true(&t) && matches!(*n, W::Not(_)) => {
                    let W::Not(n) = *n else { unreachable!() };
                    H::Historically(g, b(self.to_hyper(*n, all)))
                }
                a => H::Not(b(self.to_hyper(a, all))),
            },
            W::Or(x, y) => H::Or(b(self.to_hyper(*x, all)), b(self.to_hyper(*y, all))),
            W::And(x, y) => H::And(b(self.to_hyper(*x, all)), b(self.to_hyper(*y, all))),
            W::Implies(x, y) => H::Implies(b(self.to_hyper(*x, all)), b(self.to_hyper(*y, all))),
            W::Ctx(c, a) => {
                let c = self.materialize(&c, all);
                H::InContext(c, b(self.to_hyper(*a, all)))
            }
            W::Next(g, a) => H::Next(g, b(self.to_hyper(*a, all))),
            W::Yesterday(g, a) => H::Yesterday(g, b(self.to_hyper(*a, all))),
            W::Until(g, x, y) if is_true(&x) => H::Eventually(g, b(self.to_hyper(*y, all))),
            W::Since(g, x, y) if is_true(&x) => H::Once(g, b(self.to_hyper(*y, all))),
            W::Until(g, x, y) => H::Until(g, b(self.to_hyper(*x, all)), b(self.to_hyper(*y, all))),
            W::Since(g, x, y) => H::Since(g, b(self.to_hyper(*x, all)), b(self.to_hyper(*y, all))),
            W::Quant(q, _, x, a) => H::Quant(q, x, b(self.to_hyper(*a, all))),
        }
    }
}

fn is_true(w: &W) -> bool {
    matches!(w, W::Leaf(HyperFormula::True))
}

fn prefix_vars(p: &[(Quantifier, Kind, TraceVar)]) -> VarSet {
    p.iter().map(|(_, _, x)| x.clone()).collect()
}

fn collect_vars(w: &W, out: &mut VarSet) {
    match w {
        W::Leaf(f) => out.extend(f.all_vars()),
        W::Not(a) | W::Next(_, a) | W::Yesterday(_, a) => collect_vars(a, out),
        W::Or(a, b) | W::And(a, b) | W::Implies(a, b) | W::Until(_, a, b) | W::Since(_, a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        W::Ctx(c, a) => {
            if let Cx::Set(s) = c {
                out.extend(s.iter().cloned());
            }
            collect_vars(a, out);
        }
        W::Quant(_, _, x, a) => {
            out.insert(x.clone());
            collect_vars(a, out);
        }
    }
}

fn guard(k: Kind, x: &TraceVar) -> W {
    match k {
        Kind::Pos => ev(StutterSet::new(), hash(x)),
        Kind::Ori => W::Not(bx(ev(StutterSet::new(), W::Not(bx(W::Not(bx(hash(x)))))))),
    }
}

/// Prenex form of a sentence.
pub fn to_pnf(sentence: &HyperFormula) -> Result<PnfResult, PnfError> {
    let free = sentence.free_vars();
    if !free.is_empty() {
        return Err(PnfError::NotASentence(free.iter().map(|x| x.to_string()).collect()));
    }
    to_pnf_in_context(sentence, &Context::Universal, &VarSet::new())
}

/// Prenex form of `f` evaluated in context `c`, with the variables in `domain`
/// already bound (they may occur free in `f`).
pub fn to_pnf_in_context(f: &HyperFormula, c: &Context, domain: &VarSet) -> Result<PnfResult, PnfError> {
    let mut taken = f.all_vars();
    taken.extend(domain.iter().cloned());
    if let Context::Explicit(s) = c {
        taken.extend(s.iter().cloned());
    }
    let mut rw = Rewriter::new(taken);
    let c0 = Cx::from_context(c);
    let mut seen = domain.clone();
    let w = rw.hygiene(from_hyper(f), domain, &BTreeMap::new(), &c0, &mut seen);
    let (prefix, mut m) = rw.pnf(w, &c0);
    for (q, k, x) in prefix.iter().rev() {
        let g = if c0.contains(x) { guard(*k, x) } else { ctx(set([x]), guard(*k, x)) };
        m = match q {
            Quantifier::Exists => and(g, m),
            Quantifier::Forall => W::Implies(bx(g), bx(m)),
        };
    }
    let mut all = domain.clone();
    all.extend(prefix_vars(&prefix));
    collect_vars(&m, &mut all);
    let matrix = rw.to_hyper(m, &all);
    let formula = prefix
        .iter()
        .rev()
        .fold(matrix, |b, (q, _, x)| HyperFormula::Quant(*q, x.clone(), Box::new(b)));
    let uses_hash = formula.props().contains(&Prop::new(HASH));
    Ok(PnfResult { formula, fresh_vars: rw.fresh, uses_hash })
}

/// `{∅^i {#} ∅^ω | i ≤ n}`, named `pos0`, `pos1`, ...
pub fn lpos_bounded(n: usize) -> TraceSet {
    let mut l = TraceSet::new();
    for i in 0..=n {
        l.insert(format!("pos{i}"), position_trace(i)).expect("distinct names");
    }
    l
}

/// The three conjuncts of the position-trace axiom over `ap`.
pub fn alpha_pos_bullets(ap: &BTreeSet<Prop>) -> [HyperFormula; 3] {
    use build::*;
    let e = StutterSet::new;
    let h = |x: &str| atom(HASH, x);
    let none_of_ap = conj(ap.iter().map(|p| not(atom(p.as_str(), "x"))));
    let unique = and(
        until(e(), not(h("x")), and(h("x"), next(e(), always(e(), not(h("x")))))),
        always(e(), none_of_ap),
    );
    [
        forall("x", implies(eventually(e(), h("x")), unique)),
        exists("x", h("x")),
        forall(
            "x",
            exists(
                "x'",
                implies(eventually(e(), h("x")), eventually(e(), and(h("x"), next(e(), h("x'"))))),
            ),
        ),
    ]
}

pub fn alpha_pos(ap: &BTreeSet<Prop>) -> HyperFormula {
    build::conj(alpha_pos_bullets(ap))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PnfVerification {
    pub lhs: bool,
    pub rhs: bool,
    pub agree: bool,
    /// Largest position trace used on the right.
    pub lpos_bound: usize,
    /// Set when the sides still differ at the largest bound tried.
    pub inconclusive: bool,
}

pub const MAX_LPOS: usize = 128;

/// Union of `l` and the position traces up to `n`.
pub fn with_positions(l: &TraceSet, n: usize) -> TraceSet {
    let mut out = l.clone();
    for (name, t) in lpos_bounded(n).iter() {
        let mut name = name.to_string();
        while out.get(&name).is_some() {
            name.insert(0, '_');
        }
        out.insert(name, t.clone()).expect("fresh name");
    }
    out
}

/// Checks `L ⊨ φ` against `L ∪ L_pos ⊨ φ_p` with `L_pos` truncated at `n`,
/// doubling `n` up to 128 while the sides differ.
pub fn verify_pnf(sentence: &HyperFormula, l: &TraceSet, n: usize) -> Result<PnfVerification, PnfError> {
    if l.props().contains(&Prop::new(HASH)) || sentence.props().contains(&Prop::new(HASH)) {
        return Err(PnfError::ReservedProp);
    }
    let lhs = check_traceset(l, sentence)?;
    let p = to_pnf(sentence)?;
    let mut n = n.max(1);
    loop {
        let rhs = check_traceset(&with_positions(l, n), &p.formula)?;
        if rhs == lhs || n >= MAX_LPOS {
            return Ok(PnfVerification { lhs, rhs, agree: lhs == rhs, lpos_bound: n, inconclusive: lhs != rhs });
        }
        n = (2 * n).min(MAX_LPOS);
    }
}

fn has_past(w: &W) -> bool {
    match w {
        W::Leaf(f) => {
            let mut past = false;
            f.visit(&mut |g| past |= g.is_past_modality());
            past
        }
        W::Yesterday(..) | W::Since(..) => true,
        W::Not(a) | W::Ctx(_, a) | W::Next(_, a) | W::Quant(_, _, _, a) => has_past(a),
        W::Or(a, b) | W::And(a, b) | W::Implies(a, b) | W::Until(_, a, b) => has_past(a) || has_past(b),
    }
}

fn relabel(f: &HyperFormula, map: &BTreeMap<TraceVar, TraceVar>) -> HyperFormula {
    use HyperFormula as H;
    let r = |x: &TraceVar| map.get(x).unwrap_or(x).clone();
    match f {
        H::Atom(p, x) => H::Atom(p.clone(), r(x)),
        H::InContext(c, a) => H::InContext(c.iter().map(r).collect(), Box::new(relabel(a, map))),
        _ => map_children(f, &mut |a| relabel(a, map)),
    }
}

pub(crate) fn map_children(f: &HyperFormula, m: &mut impl FnMut(&HyperFormula) -> HyperFormula) -> HyperFormula {
    use HyperFormula as H;
    let b = |x: HyperFormula| Box::new(x);
    match f {
        H::True | H::Atom(..) => f.clone(),
        H::Not(a) => H::Not(b(m(a))),
        H::Or(x, y) => H::Or(b(m(x)), b(m(y))),
        H::And(x, y) => H::And(b(m(x)), b(m(y))),
        H::Implies(x, y) => H::Implies(b(m(x)), b(m(y))),
        H::Iff(x, y) => H::Iff(b(m(x)), b(m(y))),
        H::InContext(c, a) => H::InContext(c.clone(), b(m(a))),
        H::Next(g, a) => H::Next(g.clone(), b(m(a))),
        H::Until(g, x, y) => H::Until(g.clone(), b(m(x)), b(m(y))),
        H::Yesterday(g, a) => H::Yesterday(g.clone(), b(m(a))),
        H::Since(g, x, y) => H::Since(g.clone(), b(m(x)), b(m(y))),
        H::Eventually(g, a) => H::Eventually(g.clone(), b(m(a))),
        H::Always(g, a) => H::Always(g.clone(), b(m(a))),
        H::Once(g, a) => H::Once(g.clone(), b(m(a))),
        H::Historically(g, a) => H::Historically(g.clone(), b(m(a))),
        H::Quant(q, x, a) => H::Quant(*q, x.clone(), b(m(a))),
    }
}
