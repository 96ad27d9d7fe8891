//! Brute-force oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use hyperstutter::syntax::{build, Context, HyperFormula, PltlFormula, StutterSet, TraceVar};
use hyperstutter::traces::{LassoTrace, Letter, PointedTrace, TraceSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub mod formula_corpus;
pub mod gadget_suites;
pub mod pnf_suites;
pub mod suites;

// ---------------------------------------------------------------- generators

pub fn random_letter(r: &mut ChaCha8Rng, props: &[&str]) -> Letter {
    Letter::of(props.iter().copied().filter(|_| r.gen_bool(0.5)))
}

pub fn random_lasso(r: &mut ChaCha8Rng, max_prefix: usize, max_loop: usize, props: &[&str]) -> LassoTrace {
    let p = r.gen_range(0..=max_prefix);
    let l = r.gen_range(1..=max_loop);
    LassoTrace::new(
        (0..p).map(|_| random_letter(r, props)).collect(),
        (0..l).map(|_| random_letter(r, props)).collect(),
    )
    .unwrap()
}

/// Random PLTL formula of nesting depth at most `depth`, using all operators.
pub fn random_pltl(r: &mut ChaCha8Rng, depth: usize, props: &[&str], past: bool) -> PltlFormula {
    use PltlFormula as P;
    if depth == 0 || r.gen_bool(0.2) {
        return if r.gen_bool(0.1) { P::True } else { P::atom(props.choose(r).unwrap()) };
    }
    let d = depth - 1;
    let ops = if past { 14 } else { 10 };
    let sub = |r: &mut ChaCha8Rng| Box::new(random_pltl(r, d, props, past));
    match r.gen_range(0..ops) {
        0 => P::Not(sub(r)),
        1 => P::Or(sub(r), sub(r)),
        2 => P::And(sub(r), sub(r)),
        3 => P::Implies(sub(r), sub(r)),
        4 => P::Iff(sub(r), sub(r)),
        5 => P::Next(sub(r)),
        6 => P::Until(sub(r), sub(r)),
        7 => P::Eventually(sub(r)),
        8 => P::Always(sub(r)),
        9 => P::Not(sub(r)),
        10 => P::Yesterday(sub(r)),
        11 => P::Since(sub(r), sub(r)),
        12 => P::Once(sub(r)),
        _ => P::Historically(sub(r)),
    }
}

pub fn random_label(r: &mut ChaCha8Rng, props: &[&str], depth: usize, past: bool) -> StutterSet {
    let n = r.gen_range(0..=2);
    (0..n).map(|_| random_pltl(r, depth, props, past)).collect()
}

/// Random quantifier-free formula over `vars` with at most `max_ctx` nested contexts.
pub fn random_qf(
    r: &mut ChaCha8Rng,
    depth: usize,
    vars: &[&str],
    props: &[&str],
    max_ctx: usize,
    label_depth: usize,
) -> HyperFormula {
    use HyperFormula as H;
    if depth == 0 || r.gen_bool(0.15) {
        return if r.gen_bool(0.05) {
            H::True
        } else {
            build::atom(props.choose(r).unwrap(), vars.choose(r).unwrap())
        };
    }
    let d = depth - 1;
    let lab = |r: &mut ChaCha8Rng| random_label(r, props, label_depth, true);
    let sub = |r: &mut ChaCha8Rng, c: usize| Box::new(random_qf(r, d, vars, props, c, label_depth));
    let k = r.gen_range(0..16);
    match k {
        0 | 1 => H::Not(sub(r, max_ctx)),
        2 => H::Or(sub(r, max_ctx), sub(r, max_ctx)),
        3 => H::And(sub(r, max_ctx), sub(r, max_ctx)),
        4 => H::Iff(sub(r, max_ctx), sub(r, max_ctx)),
        5 => H::Next(lab(r), sub(r, max_ctx)),
        6 => H::Until(lab(r), sub(r, max_ctx), sub(r, max_ctx)),
        7 => H::Yesterday(lab(r), sub(r, max_ctx)),
        8 => H::Since(lab(r), sub(r, max_ctx), sub(r, max_ctx)),
        9 => H::Eventually(lab(r), sub(r, max_ctx)),
        10 => H::Always(lab(r), sub(r, max_ctx)),
        11 => H::Once(lab(r), sub(r, max_ctx)),
        12 => H::Historically(lab(r), sub(r, max_ctx)),
        _ if max_ctx > 0 => {
            let mut c: BTreeSet<TraceVar> =
                vars.iter().filter(|_| r.gen_bool(0.5)).map(|v| TraceVar::new(*v)).collect();
            if c.is_empty() {
                c.insert(TraceVar::new(*vars.choose(r).unwrap()));
            }
            H::InContext(c, sub(r, max_ctx - 1))
        }
        _ => H::Implies(sub(r, 0), sub(r, 0)),
    }
}

pub fn random_context(r: &mut ChaCha8Rng, vars: &[&str]) -> Context {
    if r.gen_bool(0.5) {
        return Context::Universal;
    }
    let mut c: BTreeSet<TraceVar> = vars.iter().filter(|_| r.gen_bool(0.5)).map(|v| TraceVar::new(*v)).collect();
    if c.is_empty() {
        c.insert(TraceVar::new(*vars.choose(r).unwrap()));
    }
    Context::Explicit(c)
}

pub fn past_depth_pltl(f: &PltlFormula) -> usize {
    use PltlFormula::*;
    match f {
        True | Atom(_) => 0,
        Yesterday(a) | Once(a) | Historically(a) => 1 + past_depth_pltl(a),
        Since(a, b) => 1 + past_depth_pltl(a).max(past_depth_pltl(b)),
        Not(a) | Next(a) | Eventually(a) | Always(a) => past_depth_pltl(a),
        Or(a, b) | And(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) => past_depth_pltl(a).max(past_depth_pltl(b)),
    }
}

pub fn past_depth_hyper(f: &HyperFormula) -> usize {
    let own = usize::from(f.is_past_modality());
    let label = f.label().map_or(0, |g| g.iter().map(past_depth_pltl).max().unwrap_or(0));
    own + label.max(f.children().iter().map(|c| past_depth_hyper(c)).max().unwrap_or(0))
}

// ---------------------------------------------------------------- PLTL oracle

/// Position-by-position PLTL semantics. Until searches forward for a bounded
/// number of positions chosen generously from the lasso shape; Since searches
/// back to 0. Results are memoised.
pub struct NaivePltl<'a> {
    t: &'a LassoTrace,
    memo: HashMap<(PltlFormula, usize), bool>,
}

impl<'a> NaivePltl<'a> {
    pub fn new(t: &'a LassoTrace) -> Self {
        NaivePltl { t, memo: HashMap::new() }
    }

    fn window(&self, f: &PltlFormula) -> usize {
        let (p, l) = (self.t.prefix_len(), self.t.loop_len());
        2 * (p + (past_depth_pltl(f) + 2) * (l + 1)) + 2 * l
    }

    pub fn holds(&mut self, i: usize, f: &PltlFormula) -> bool {
        if let Some(&b) = self.memo.get(&(f.clone(), i)) {
            return b;
        }
        use PltlFormula::*;
        let r = match f {
            True => true,
            Atom(p) => self.t.letter_at(i).contains(p),
            Not(a) => !self.holds(i, a),
            Or(a, b) => self.holds(i, a) || self.holds(i, b),
            And(a, b) => self.holds(i, a) && self.holds(i, b),
            Implies(a, b) => !self.holds(i, a) || self.holds(i, b),
            Iff(a, b) => self.holds(i, a) == self.holds(i, b),
            Next(a) => self.holds(i + 1, a),
            Yesterday(a) => i > 0 && self.holds(i - 1, a),
            Until(a, b) => {
                let w = self.window(f);
                let mut res = false;
                for j in i..=i + w {
                    if self.holds(j, b) {
                        res = true;
                        break;
                    }
                    if !self.holds(j, a) {
                        break;
                    }
                }
                res
            }
            Since(a, b) => {
                let mut res = false;
                for j in (0..=i).rev() {
                    if self.holds(j, b) {
                        res = true;
                        break;
                    }
                    if !self.holds(j, a) {
                        break;
                    }
                }
                res
            }
            Eventually(a) => {
                let w = self.window(f);
                (i..=i + w).any(|j| self.holds(j, a))
            }
            Always(a) => {
                let w = self.window(f);
                (i..=i + w).all(|j| self.holds(j, a))
            }
            Once(a) => (0..=i).any(|j| self.holds(j, a)),
            Historically(a) => (0..=i).all(|j| self.holds(j, a)),
        };
        self.memo.insert((f.clone(), i), r);
        r
    }
}

/// Change points by scanning for flips; finiteness is decided by looking for a
/// flip in the upper half of a long scan.
pub fn naive_change_points(t: &LassoTrace, g: &StutterSet, len: usize) -> Vec<bool> {
    let mut o = NaivePltl::new(t);
    let scan = 2 * len + 4 * (t.prefix_len() + 8 * t.loop_len()) + 16;
    let mut proper = vec![true];
    for i in 1..=scan {
        proper.push(g.iter().any(|th| o.holds(i, th) != o.holds(i - 1, th)));
    }
    let late = proper[scan / 2..].iter().any(|&b| b);
    if !late {
        let m = proper.iter().rposition(|&b| b).unwrap();
        for b in proper.iter_mut().skip(m + 1) {
            *b = true;
        }
    }
    proper.truncate(len);
    proper
}

// ---------------------------------------------------------------- hyper oracle

/// Direct implementation of the hyper semantics. Until chains are followed for
/// a bounded number of steps; Since chains until the predecessor is undefined.
pub struct NaiveHyper {
    pub traces: Vec<LassoTrace>,
    pub model: Vec<usize>,
    cps: HashMap<(usize, StutterSet), Vec<bool>>,
    pub horizon: usize,
    cp_len: usize,
}

type NState = Vec<(TraceVar, usize, usize)>;

impl NaiveHyper {
        pub fn new(model: &TraceSet, a: &[(TraceVar, PointedTrace)], f: &HyperFormula) -> (Self, NState) {
        let mut traces: Vec<LassoTrace> = model.traces().cloned().collect();
        let model_ids = (0..traces.len()).collect();
        let mut st = Vec::new();
        for (x, pt) in a {
            st.push((x.clone(), traces.len(), pt.position));
            traces.push(pt.trace.clone());
        }
        let pd = past_depth_hyper(f);
        let mut sum_t = 0usize;
        let mut prod_p = 1usize;
        for t in &traces {
            sum_t += t.prefix_len() + (pd + 2) * t.loop_len();
            prod_p = prod_p.saturating_mul(t.loop_len());
        }
        let horizon = (sum_t + 3 * prod_p).min(4096);
        let max_pos = st.iter().map(|s| s.2).max().unwrap_or(0);
        let max_loop = traces.iter().map(|t| t.loop_len()).max().unwrap_or(1);
        let max_pre = traces.iter().map(|t| t.prefix_len()).max().unwrap_or(0);
        let cp_len = 2 * (max_pos + max_pre + 8 * max_loop + (horizon + 2) * max_loop) + 64;
        (NaiveHyper { traces, model: model_ids, cps: HashMap::new(), horizon, cp_len }, st)
    }

    fn is_cp(&mut self, t: usize, g: &StutterSet, i: usize) -> bool {
        if g.is_empty() {
            return true;
        }
        let len = self.cp_len;
        let v = self
            .cps
            .entry((t, g.clone()))
            .or_insert_with(|| naive_change_points(&self.traces[t], g, len));
        assert!(i < v.len(), "oracle change-point table too short");
        v[i]
    }

    fn in_ctx(c: &Context, x: &TraceVar) -> bool {
        c.contains(x)
    }

    fn succ(&mut self, st: &NState, g: &StutterSet, c: &Context) -> NState {
        st.iter()
            .map(|(x, t, i)| {
                if Self::in_ctx(c, x) {
                    let mut j = i + 1;
                    while !self.is_cp(*t, g, j) {
                        j += 1;
                    }
                    (x.clone(), *t, j)
                } else {
                    (x.clone(), *t, *i)
                }
            })
            .collect()
    }

    fn pred(&mut self, st: &NState, g: &StutterSet, c: &Context) -> Option<NState> {
        let mut out = Vec::new();
        for (x, t, i) in st {
            if Self::in_ctx(c, x) {
                if *i == 0 {
                    return None;
                }
                let mut j = i - 1;
                while !self.is_cp(*t, g, j) {
                    j -= 1;
                }
                out.push((x.clone(), *t, j));
            } else {
                out.push((x.clone(), *t, *i));
            }
        }
        Some(out)
    }

    fn lookup(st: &NState, x: &TraceVar) -> (usize, usize) {
        let s = st.iter().rev().find(|s| &s.0 == x).expect("bound variable");
        (s.1, s.2)
    }

    pub fn eval(&mut self, st: &NState, c: &Context, f: &HyperFormula) -> bool {
        use HyperFormula as H;
        match f {
            H::True => true,
            H::Atom(p, x) => {
                let (t, i) = Self::lookup(st, x);
                self.traces[t].letter_at(i).contains(p)
            }
            H::Not(a) => !self.eval(st, c, a),
            H::Or(a, b) => self.eval(st, c, a) || self.eval(st, c, b),
            H::And(a, b) => self.eval(st, c, a) && self.eval(st, c, b),
            H::Implies(a, b) => !self.eval(st, c, a) || self.eval(st, c, b),
            H::Iff(a, b) => self.eval(st, c, a) == self.eval(st, c, b),
            H::InContext(d, a) => self.eval(st, &Context::Explicit(d.clone()), a),
            H::Next(g, a) => {
                let n = self.succ(st, g, c);
                self.eval(&n, c, a)
            }
            H::Yesterday(g, a) => match self.pred(st, g, c) {
                Some(p) => self.eval(&p, c, a),
                None => false,
            },
            H::Until(g, a, b) => {
                let mut cur = st.clone();
                for _ in 0..=self.horizon {
                    if self.eval(&cur, c, b) {
                        return true;
                    }
                    if !self.eval(&cur, c, a) {
                        return false;
                    }
                    cur = self.succ(&cur, g, c);
                }
                false
            }
            H::Eventually(g, a) => {
                let mut cur = st.clone();
                for _ in 0..=self.horizon {
                    if self.eval(&cur, c, a) {
                        return true;
                    }
                    cur = self.succ(&cur, g, c);
                }
                false
            }
            H::Always(g, a) => {
                let mut cur = st.clone();
                for _ in 0..=self.horizon {
                    if !self.eval(&cur, c, a) {
                        return false;
                    }
                    cur = self.succ(&cur, g, c);
                }
                true
            }
            H::Since(g, a, b) => {
                let mut cur = st.clone();
                loop {
                    if self.eval(&cur, c, b) {
                        return true;
                    }
                    if !self.eval(&cur, c, a) {
                        return false;
                    }
                    match self.pred(&cur, g, c) {
                        Some(p) if p != cur => cur = p,
                        _ => return false,
                    }
                }
            }
            H::Once(g, a) => {
                let mut cur = st.clone();
                loop {
                    if self.eval(&cur, c, a) {
                        return true;
                    }
                    match self.pred(&cur, g, c) {
                        Some(p) if p != cur => cur = p,
                        _ => return false,
                    }
                }
            }
            H::Historically(g, a) => {
                let mut cur = st.clone();
                loop {
                    if !self.eval(&cur, c, a) {
                        return false;
                    }
                    match self.pred(&cur, g, c) {
                        Some(p) if p != cur => cur = p,
                        _ => return true,
                    }
                }
            }
            H::Quant(q, x, a) => {
                let want = matches!(q, hyperstutter::syntax::Quantifier::Exists);
                for t in self.model.clone() {
                    let mut s = st.clone();
                    s.push((x.clone(), t, 0));
                    if self.eval(&s, c, a) == want {
                        return want;
                    }
                }
                !want
            }
        }
    }
}

/// Naive evaluation of `f` under assignment `a`, context `c`, quantifiers over `model`.
pub fn naive_eval(model: &TraceSet, a: &[(&str, PointedTrace)], c: &Context, f: &HyperFormula) -> bool {
    let set: Vec<(TraceVar, PointedTrace)> = a.iter().map(|(x, p)| (TraceVar::new(*x), p.clone())).collect();
    let (mut n, st) = NaiveHyper::new(model, &set, f);
    n.eval(&st, c, f)
}
