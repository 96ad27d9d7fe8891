//! Differential suites for the prenex rewriting: each rule instance is
//! evaluated on `L` and its rewriting on `L ∪ L_pos`.

use hyperstutter::hyper_eval::{eval, Assignment};
use hyperstutter::pnf::{to_pnf_in_context, verify_pnf, with_positions};
use hyperstutter::syntax::{build, HyperFormula, Quantifier, StutterSet, TraceVar, VarSet};
use hyperstutter::traces::{PointedTrace, TraceSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::suites::Outcome;
use super::*;

pub const RULES: [&str; 9] =
    ["negation", "disjunction", "context", "next", "until-right", "until-left", "yesterday", "since-right", "since-left"];

const PROPS: [&str; 2] = ["p", "q"];
const FREE: [&str; 2] = ["z", "w"];

fn small_model(r: &mut ChaCha8Rng) -> TraceSet {
    let mut l = TraceSet::new();
    for i in 0..r.gen_range(1..=3) {
        l.insert(format!("m{i}"), random_lasso(r, 2, 2, &PROPS)).unwrap();
    }
    l
}

fn quantified(r: &mut ChaCha8Rng) -> HyperFormula {
    let d = r.gen_range(0..=2);
    let body = random_qf(r, d, &["z", "w", "x"], &PROPS, 1, 1);
    let body = build::or(body, build::atom(PROPS.choose(r).unwrap(), "x"));
    let q = if r.gen_bool(0.5) { Quantifier::Exists } else { Quantifier::Forall };
    HyperFormula::Quant(q, TraceVar::new("x"), Box::new(body))
}

/// Left-hand side of rule `rule` with a random quantified subformula.
pub fn rule_instance(r: &mut ChaCha8Rng, rule: usize) -> HyperFormula {
    use HyperFormula as H;
    let qx = quantified(r);
    let d = r.gen_range(0..=2);
    let other = random_qf(r, d, &FREE, &PROPS, 1, 1);
    let g: StutterSet = random_label(r, &PROPS, 1, true);
    let b = Box::new;
    match rule {
        0 => H::Not(b(qx)),
        1 => H::Or(b(qx), b(other)),
        2 => {
            let mut d: VarSet = ["z", "w", "x"].iter().filter(|_| r.gen_bool(0.5)).map(|v| TraceVar::new(*v)).collect();
            if d.is_empty() {
                d.insert(TraceVar::new("z"));
            }
            H::InContext(d, b(qx))
        }
        3 => H::Next(g, b(qx)),
        4 => H::Until(g, b(other), b(qx)),
        5 => H::Until(g, b(qx), b(other)),
        6 => H::Yesterday(g, b(qx)),
        7 => H::Since(g, b(other), b(qx)),
        _ => H::Since(g, b(qx), b(other)),
    }
}

fn assignment(r: &mut ChaCha8Rng) -> Assignment {
    FREE.iter()
        .map(|x| {
            let trace = random_lasso(r, 4, 3, &PROPS);
            (TraceVar::new(*x), PointedTrace { trace, position: r.gen_range(0..=5) })
        })
        .collect()
}

/// `n` instances per rule; `lpos` is the largest position trace.
pub fn rule_suites(n: usize, lpos: usize, seed: u64) -> Vec<(&'static str, Outcome)> {
    let mut r = rng(seed);
    let domain: VarSet = FREE.iter().map(|v| TraceVar::new(*v)).collect();
    RULES
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let mut out = Outcome::default();
            for _ in 0..n {
                let lhs = rule_instance(&mut r, k);
                let l = small_model(&mut r);
                let a = assignment(&mut r);
                let c = random_context(&mut r, &["z", "w", "x"]);
                let left = eval(&l, &a, &c, &lhs).unwrap();
                let p = to_pnf_in_context(&lhs, &c, &domain).unwrap();
                let right = eval(&with_positions(&l, lpos), &a, &c, &p.formula).unwrap();
                out.check(left == right, || {
                    format!("{lhs} in {c:?} on {l} (lhs {left}, rewritten {right}): {}", p.formula)
                });
            }
            (*name, out)
        })
        .collect()
}

/// Random sentence with a quantifier under a temporal operator.
pub fn nested_sentence(r: &mut ChaCha8Rng, deep: bool) -> HyperFormula {
    use build::*;
    use HyperFormula as H;
    let inner_body = or(random_qf(r, 2, &["x", "y"], &PROPS, 1, 1), atom(PROPS.choose(r).unwrap(), "y"));
    let inner = if r.gen_bool(0.5) { exists("y", inner_body) } else { forall("y", inner_body) };
    let side = random_qf(r, 2, &["x"], &PROPS, 1, 1);
    let g: StutterSet = random_label(r, &PROPS, 1, true);
    let b = Box::new;
    let mut body = match r.gen_range(0..10) {
        0 => H::Eventually(g, b(inner)),
        1 => H::Always(g, b(inner)),
        2 => H::Next(g, b(inner)),
        3 => H::Until(g, b(side), b(inner)),
        4 => H::Until(g, b(inner), b(side)),
        5 => H::Yesterday(g, b(inner)),
        6 => H::Once(g, b(inner)),
        7 => H::Historically(g, b(inner)),
        8 => H::Since(g, b(side), b(inner)),
        _ => H::Since(g, b(inner), b(side)),
    };
    // Past operators at the origin are vacuous: move forward first.
    if body.is_past_modality() {
        for _ in 0..r.gen_range(1..=3) {
            body = H::Next(StutterSet::new(), b(body));
        }
    }
    if deep {
        let g = random_label(r, &PROPS, 1, true);
        body = if r.gen_bool(0.5) { H::Eventually(g, b(body)) } else { H::Always(g, b(body)) };
    }
    if r.gen_bool(0.3) {
        body = H::InContext([TraceVar::new("x")].into_iter().collect(), b(body));
    }
    if r.gen_bool(0.5) {
        exists("x", body)
    } else {
        forall("x", body)
    }
}

pub struct EndToEnd {
    pub outcome: Outcome,
    pub inconclusive: usize,
}

pub fn end_to_end(sentences: usize, models: usize, lpos: usize, deep: bool, seed: u64) -> EndToEnd {
    use rayon::prelude::*;
    let mut r = rng(seed);
    let cases: Vec<(HyperFormula, Vec<TraceSet>)> = (0..sentences)
        .map(|_| {
            let f = nested_sentence(&mut r, deep);
            (f, (0..models).map(|_| small_model(&mut r)).collect())
        })
        .collect();
    let results: Vec<(bool, bool, String)> = cases
        .par_iter()
        .flat_map_iter(|(f, ms)| {
            ms.iter().map(move |l| {
                let v = verify_pnf(f, l, lpos).unwrap();
                (v.agree, v.inconclusive, format!("{f} on {l}: {v:?}"))
            })
        })
        .collect();
    let mut out = EndToEnd { outcome: Outcome::default(), inconclusive: 0 };
    for (agree, inconclusive, what) in results {
        out.inconclusive += inconclusive as usize;
        out.outcome.check(agree, || what);
    }
    out
}
