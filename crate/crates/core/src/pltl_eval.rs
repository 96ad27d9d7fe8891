//! Exact PLTL evaluation on lasso traces and Γ-change points.
//!
//! Every subformula denotes an eventually periodic bit sequence. Sequences are
//! built bottom-up; the table for a formula set unifies them on a common
//! threshold `T` and period `P`.

use std::collections::HashMap;

use crate::syntax::{PltlFormula, Prop, StutterSet};
use crate::traces::{lcm, LassoTrace, PointedTrace};

/// Bit sequence equal to `bits[i]` below `t + p` and periodic with period `p` from `t`.
#[derive(Clone, Debug)]
struct Seq {
    t: usize,
    p: usize,
    bits: Vec<bool>,
}

impl Seq {
    fn at(&self, i: usize) -> bool {
        if i < self.t + self.p {
            self.bits[i]
        } else {
            self.bits[self.t + (i - self.t) % self.p]
        }
    }

    fn from_fn(t: usize, p: usize, f: impl Fn(usize) -> bool) -> Seq {
        Seq { t, p, bits: (0..t + p).map(f).collect() }
    }
}

/// Truth table of a subformula closure over one period of a lasso.
#[derive(Clone, Debug)]
pub struct ExpansionTable {
    /// Desugared closure, each formula listed after its subformulas.
    pub subformulas: Vec<PltlFormula>,
    pub threshold: usize,
    pub period: usize,
    /// Indices into `subformulas` of the (desugared) input formulas, in input order.
    pub roots: Vec<usize>,
    index: HashMap<PltlFormula, usize>,
    seqs: Vec<Seq>,
}

impl ExpansionTable {
    /// Truth of subformula `k` at position `i`.
    pub fn bit(&self, k: usize, i: usize) -> bool {
        self.seqs[k].at(i)
    }

    /// Truth of a formula of the closure, given in desugared form.
    pub fn lookup(&self, f: &PltlFormula, i: usize) -> Option<bool> {
        self.index.get(f).map(|&k| self.bit(k, i))
    }

    /// Row of bits at position `i`, one per subformula.
    pub fn row(&self, i: usize) -> Vec<bool> {
        self.seqs.iter().map(|s| s.at(i)).collect()
    }
}

struct Builder<'a> {
    trace: &'a LassoTrace,
    index: HashMap<PltlFormula, usize>,
    subs: Vec<PltlFormula>,
    seqs: Vec<Seq>,
}

impl Builder<'_> {
    fn atom(&self, p: &Prop) -> Seq {
        let t = self.trace;
        Seq::from_fn(t.prefix_len(), t.loop_len(), |i| t.letter_at(i).contains(p))
    }

    fn intern(&mut self, f: &PltlFormula) -> usize {
        if let Some(&k) = self.index.get(f) {
            return k;
        }
        use PltlFormula::*;
        let seq = match f {
            Atom(p) => self.atom(p),
            Not(a) => {
                let a = self.intern(a);
                let s = &self.seqs[a];
                Seq { t: s.t, p: s.p, bits: s.bits.iter().map(|b| !b).collect() }
            }
            Or(a, b) => {
                let (a, b) = (self.intern(a), self.intern(b));
                let (a, b) = (&self.seqs[a], &self.seqs[b]);
                Seq::from_fn(a.t.max(b.t), lcm(a.p, b.p), |i| a.at(i) || b.at(i))
            }
            Next(a) => {
                let k = self.intern(a);
                let a = &self.seqs[k];
                Seq::from_fn(a.t.saturating_sub(1), a.p, |i| a.at(i + 1))
            }
            Yesterday(a) => {
                let k = self.intern(a);
                let a = &self.seqs[k];
                Seq::from_fn(a.t + 1, a.p, |i| i > 0 && a.at(i - 1))
            }
            Until(a, b) => {
                let (a, b) = (self.intern(a), self.intern(b));
                until(&self.seqs[a], &self.seqs[b])
            }
            Since(a, b) => {
                let (a, b) = (self.intern(a), self.intern(b));
                since(&self.seqs[a], &self.seqs[b])
            }
            other => {
                let d = other.desugar();
                let k = self.intern(&d);
                self.index.insert(other.clone(), k);
                return k;
            }
        };
        let k = self.subs.len();
        self.subs.push(f.clone());
        self.seqs.push(seq);
        self.index.insert(f.clone(), k);
        k
    }
}

fn until(a: &Seq, b: &Seq) -> Seq {
    let t = a.t.max(b.t);
    let p = lcm(a.p, b.p);
    // Two backward laps over the periodic part settle every loop position.
    let mut lap = vec![false; p];
    let mut next = false;
    for _ in 0..2 {
        for j in (0..p).rev() {
            let i = t + j;
            next = b.at(i) || (a.at(i) && next);
            lap[j] = next;
        }
    }
    let mut bits = vec![false; t + p];
    bits[t..].copy_from_slice(&lap);
    let mut next = lap[0];
    for i in (0..t).rev() {
        next = b.at(i) || (a.at(i) && next);
        bits[i] = next;
    }
    Seq { t, p, bits }
}

fn since(a: &Seq, b: &Seq) -> Seq {
    let t0 = a.t.max(b.t);
    let p = lcm(a.p, b.p);
    // Each lap's content depends only on the last bit of the previous lap, through a
    // monotone and hence idempotent map; the second lap therefore repeats forever.
    let mut bits = Vec::with_capacity(t0 + 2 * p);
    let mut prev = false;
    for i in 0..t0 + 2 * p {
        prev = b.at(i) || (a.at(i) && i > 0 && prev);
        bits.push(prev);
    }
    Seq { t: t0 + p, p, bits }
}

/// Expansion table for the closure of `formulas` on `t`.
pub fn expansion<'a>(t: &LassoTrace, formulas: impl IntoIterator<Item = &'a PltlFormula>) -> ExpansionTable {
    let mut b = Builder { trace: t, index: HashMap::new(), subs: Vec::new(), seqs: Vec::new() };
    let roots: Vec<usize> = formulas.into_iter().map(|f| b.intern(&f.desugar())).collect();
    let threshold = b.seqs.iter().map(|s| s.t).max().unwrap_or(0);
    let period = b.seqs.iter().map(|s| s.p).fold(1, lcm);
    ExpansionTable {
        subformulas: b.subs,
        threshold,
        period,
        roots,
        index: b.index,
        seqs: b.seqs,
    }
}

/// `(t, i) ⊨ f`.
pub fn pltl_holds(t: &LassoTrace, i: usize, f: &PltlFormula) -> bool {
    let tab = expansion(t, [f]);
    tab.bit(tab.roots[0], i)
}

/// Γ-change points of a trace: membership is explicit below `threshold + period`
/// and periodic above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangePointView {
    pub threshold: usize,
    pub period: usize,
    bits: Vec<bool>,
    /// Only finitely many proper change points; positions after the last are
    /// change points by convention.
    pub convention_active: bool,
    proper: Vec<bool>,
}

impl ChangePointView {
    pub fn is_change_point(&self, i: usize) -> bool {
        if i < self.bits.len() {
            self.bits[i]
        } else {
            self.bits[self.threshold + (i - self.threshold) % self.period]
        }
    }

    /// Proper change point: 0, or a position where some formula of Γ flips.
    pub fn is_proper(&self, i: usize) -> bool {
        if i < self.proper.len() {
            self.proper[i]
        } else {
            self.proper[self.threshold + (i - self.threshold) % self.period]
        }
    }

    /// Least change point strictly above `i`.
    pub fn succ(&self, i: usize) -> usize {
        let mut j = i + 1;
        while !self.is_change_point(j) {
            j += 1;
        }
        j
    }

    /// Greatest change point strictly below `i`; `None` at 0.
    pub fn pred(&self, i: usize) -> Option<usize> {
        let mut j = i.checked_sub(1)?;
        while !self.is_change_point(j) {
            j -= 1;
        }
        Some(j)
    }
}

/// Change points of `t` with respect to Γ.
pub fn change_points(t: &LassoTrace, g: &StutterSet) -> ChangePointView {
    if g.is_empty() {
        return ChangePointView {
            threshold: 1,
            period: 1,
            bits: vec![true, true],
            convention_active: true,
            proper: vec![true, false],
        };
    }
    let tab = expansion(t, g.iter());
    let (tt, p) = (tab.threshold + 1, tab.period);
    let flip = |i: usize| tab.roots.iter().any(|&k| tab.bit(k, i) != tab.bit(k, i - 1));
    let proper: Vec<bool> = (0..tt + p).map(|i| i == 0 || flip(i)).collect();
    let periodic_flip = proper[tt..].iter().any(|&b| b);
    let mut bits = proper.clone();
    if !periodic_flip {
        let m = proper.iter().rposition(|&b| b).unwrap_or(0);
        for b in bits.iter_mut().skip(m + 1) {
            *b = true;
        }
    }
    ChangePointView {
        threshold: tt,
        period: p,
        bits,
        convention_active: !periodic_flip,
        proper,
    }
}

pub fn gamma_succ(pt: &PointedTrace, g: &StutterSet) -> PointedTrace {
    let v = change_points(&pt.trace, g);
    PointedTrace { trace: pt.trace.clone(), position: v.succ(pt.position) }
}

pub fn gamma_pred(pt: &PointedTrace, g: &StutterSet) -> Option<PointedTrace> {
    let v = change_points(&pt.trace, g);
    v.pred(pt.position).map(|position| PointedTrace { trace: pt.trace.clone(), position })
}
