//! Randomised differential suites, run with small counts by the unit-style
//! integration tests and with full counts by the acceptance harness.

use std::collections::BTreeSet;

use hyperstutter::hyper_eval::{eval, eval_qf, Assignment};
use hyperstutter::pltl_eval::{change_points, expansion};
use hyperstutter::syntax::{build, Context, HyperFormula, PltlFormula, StutterSet, TraceVar};
use hyperstutter::traces::{PointedTrace, TraceSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::*;

#[derive(Debug, Default)]
pub struct Outcome {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Expansion-table bits against position-wise evaluation.
pub fn pltl_oracle(n: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let props = ["p", "q", "r"];
    let mut out = Outcome::default();
    for _ in 0..n {
        let f = random_pltl(&mut r, 4, &props, true);
        let t = random_lasso(&mut r, 6, 6, &props);
        let tab = expansion(&t, [&f]);
        let mut o = NaivePltl::new(&t);
        let horizon = tab.threshold + 3 * tab.period;
        let mut ok = true;
        'outer: for (k, sub) in tab.subformulas.iter().enumerate() {
            for i in 0..=horizon {
                if tab.bit(k, i) != o.holds(i, sub) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        out.check(ok, || format!("formula {f} on trace {t}"));
    }
    out
}

fn remark1_label(r: &mut ChaCha8Rng) -> StutterSet {
    let props = ["r", "s"];
    let lit = |r: &mut ChaCha8Rng| {
        let a = PltlFormula::atom(props.choose(r).unwrap());
        if r.gen_bool(0.5) {
            PltlFormula::not(a)
        } else {
            a
        }
    };
    let n = r.gen_range(1..=3);
    (0..n)
        .map(|_| match r.gen_range(0..6) {
            0 => PltlFormula::yesterday(lit(r)),
            1 => PltlFormula::since(lit(r), lit(r)),
            2 => PltlFormula::Once(Box::new(lit(r))),
            _ => random_pltl(r, 3, &props, false),
        })
        .collect()
}

/// Labels over propositions absent from the trace step by exactly one position.
pub fn remark1(n: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let mut out = Outcome::default();
    for _ in 0..n {
        let t = random_lasso(&mut r, 6, 6, &["p", "q"]);
        let g = remark1_label(&mut r);
        let v = change_points(&t, &g);
        let ok = (0..40).all(|i| v.succ(i) == i + 1 && v.pred(i) == i.checked_sub(1));
        out.check(ok, || format!("label {:?} on trace {t}", g.iter().map(|f| f.to_string()).collect::<Vec<_>>()));
    }
    out
}

pub struct QfInstance {
    pub assignment: Vec<(String, PointedTrace)>,
    pub context: Context,
}

pub fn random_instance(r: &mut ChaCha8Rng, vars: &[&str]) -> QfInstance {
    let assignment = vars
        .iter()
        .map(|x| {
            let trace = random_lasso(r, 3, 3, &["p", "q"]);
            (x.to_string(), PointedTrace { trace, position: r.gen_range(0..=3) })
        })
        .collect();
    QfInstance { assignment, context: random_context(r, vars) }
}

impl QfInstance {
    pub fn map(&self) -> Assignment {
        self.assignment.iter().map(|(x, p)| (TraceVar::new(x.as_str()), p.clone())).collect()
    }

    pub fn naive(&self, model: &TraceSet, f: &HyperFormula) -> bool {
        let a: Vec<(&str, PointedTrace)> = self.assignment.iter().map(|(x, p)| (x.as_str(), p.clone())).collect();
        naive_eval(model, &a, &self.context, f)
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .assignment
            .iter()
            .map(|(x, p)| format!("{x}=({})@{}", p.trace, p.position))
            .collect();
        format!("{} ctx={:?}", parts.join(" "), self.context)
    }
}

const VARS: [&str; 3] = ["x", "y", "z"];

fn pick_vars(r: &mut ChaCha8Rng) -> Vec<&'static str> {
    let k = r.gen_range(1..=3);
    VARS[..k].to_vec()
}

/// A future operator over a stack of two to five yesterdays.
fn past_chain(r: &mut ChaCha8Rng, vars: &[&str]) -> HyperFormula {
    use build::*;
    let mut f = if r.gen_bool(0.5) {
        build::atom(["p", "q"].choose(r).unwrap(), vars.choose(r).unwrap())
    } else {
        random_qf(r, 2, vars, &["p", "q"], 1, 1)
    };
    for _ in 0..r.gen_range(2..=5) {
        f = yesterday(random_label(r, &["p", "q"], 1, false), f);
    }
    let g = random_label(r, &["p", "q"], 1, false);
    match r.gen_range(0..3) {
        0 => until(g, not(f.clone()), f),
        1 => eventually(g, f),
        _ => always(g, not(f)),
    }
}

/// Compiled evaluator against the naive horizon evaluator.
pub fn qf_differential(n: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let mut out = Outcome::default();
    let empty = TraceSet::new();
    for _ in 0..n {
        let vars = pick_vars(&mut r);
        let f = if r.gen_bool(0.25) {
            past_chain(&mut r, &vars)
        } else {
            random_qf(&mut r, 4, &vars, &["p", "q"], 2, 2)
        };
        let inst = random_instance(&mut r, &vars);
        let fast = eval_qf(&inst.map(), &inst.context, &f).unwrap();
        let slow = inst.naive(&empty, &f);
        out.check(fast == slow, || format!("{f} under {} (fast {fast}, naive {slow})", inst.describe()));
    }
    out
}

/// Fixpoint unfoldings, G/H dualities and quantifier duality.
pub fn unfolding(n: usize, seed: u64) -> [Outcome; 5] {
    use build::*;
    let mut r = rng(seed);
    let mut outs: [Outcome; 5] = Default::default();
    let empty = TraceSet::new();
    for _ in 0..n {
        let vars = pick_vars(&mut r);
        let a = random_qf(&mut r, 3, &vars, &["p", "q"], 1, 1);
        let b = random_qf(&mut r, 3, &vars, &["p", "q"], 1, 1);
        let g = random_label(&mut r, &["p", "q"], 2, true);
        let inst = random_instance(&mut r, &vars);
        let (m, c) = (inst.map(), &inst.context);
        let ev = |f: &HyperFormula| eval_qf(&m, c, f).unwrap();

        let u = until(g.clone(), a.clone(), b.clone());
        let unf = or(b.clone(), and(a.clone(), next(g.clone(), u.clone())));
        outs[0].check(ev(&u) == ev(&unf), || format!("{u} vs {unf} under {}", inst.describe()));

        let s = since(g.clone(), a.clone(), b.clone());
        let unf = or(b.clone(), and(a.clone(), yesterday(g.clone(), s.clone())));
        outs[1].check(ev(&s) == ev(&unf), || format!("{s} vs {unf} under {}", inst.describe()));

        let gf = always(g.clone(), a.clone());
        let dual = not(until(g.clone(), tt(), not(a.clone())));
        let naive = inst.naive(&empty, &gf);
        outs[2].check(ev(&gf) == ev(&dual) && ev(&gf) == naive, || format!("{gf} under {}", inst.describe()));

        let hf = HyperFormula::Historically(g.clone(), Box::new(a.clone()));
        let dual = not(since(g.clone(), tt(), not(a.clone())));
        let naive = inst.naive(&empty, &hf);
        outs[3].check(ev(&hf) == ev(&dual) && ev(&hf) == naive, || format!("{hf} under {}", inst.describe()));

        let mut model = TraceSet::new();
        for i in 0..r.gen_range(1..=3) {
            model.insert(format!("m{i}"), random_lasso(&mut r, 2, 2, &["p", "q"])).unwrap();
        }
        let x = "w";
        let body = or(a.clone(), build::atom("p", x));
        let lhs = not(exists(x, body.clone()));
        let rhs = forall(x, not(body));
        let l = eval(&model, &m, c, &lhs).unwrap();
        let rr = eval(&model, &m, c, &rhs).unwrap();
        outs[4].check(l == rr, || format!("{lhs} vs {rhs} under {}", inst.describe()));
    }
    outs
}

fn wrap_random(r: &mut ChaCha8Rng, f: HyperFormula, vars: &[&str]) -> HyperFormula {
    use HyperFormula as H;
    let g = random_label(r, &["p", "q"], 1, true);
    let other = Box::new(random_qf(r, 2, vars, &["p", "q"], 1, 1));
    let f = Box::new(f);
    match r.gen_range(0..12) {
        0 => H::Next(g, f),
        1 => H::Yesterday(g, f),
        2 => H::Until(g, other, f),
        3 => H::Until(g, f, other),
        4 => H::Since(g, other, f),
        5 => H::Since(g, f, other),
        6 => H::Always(g, f),
        7 => H::Historically(g, f),
        8 => H::Or(f, other),
        9 => H::Not(f),
        _ => {
            let mut c: BTreeSet<TraceVar> = ["z", "x", "y"].iter().filter(|_| r.gen_bool(0.5)).map(|v| TraceVar::new(*v)).collect();
            c.insert(TraceVar::new(*vars.choose(r).unwrap()));
            H::InContext(c, f)
        }
    }
}

fn random_quant(r: &mut ChaCha8Rng, x: &str, f: HyperFormula) -> HyperFormula {
    if r.gen_bool(0.5) {
        build::exists(x, f)
    } else {
        build::forall(x, f)
    }
}

/// Compiled evaluator with quantifiers nested under temporal operators
/// against the naive evaluator.
pub fn quantified_differential(n: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let mut out = Outcome::default();
    for _ in 0..n {
        let inner = random_qf(&mut r, 3, &["z", "x", "y"], &["p", "q"], 1, 1);
        let f = random_quant(&mut r, "y", inner);
        let f = wrap_random(&mut r, f, &["z", "x"]);
        let f = random_quant(&mut r, "x", f);
        let f = wrap_random(&mut r, f, &["z"]);
        let mut model = TraceSet::new();
        for i in 0..r.gen_range(1..=3) {
            model.insert(format!("m{i}"), random_lasso(&mut r, 2, 2, &["p", "q"])).unwrap();
        }
        let inst = random_instance(&mut r, &["z"]);
        let fast = eval(&model, &inst.map(), &inst.context, &f).unwrap();
        let slow = inst.naive(&model, &f);
        out.check(fast == slow, || format!("{f} on {model} under {} (fast {fast}, naive {slow})", inst.describe()));
    }
    out
}
