//! Gadget grids checked against plain arithmetic.

use hyperstutter::hyper_eval::{Assignment, Evaluator};
use hyperstutter::reduce::{c, s, trace_var};
use hyperstutter::syntax::{Context, HyperFormula, TraceVar};
use hyperstutter::traces::{LassoTrace, PointedTrace, TraceSet};
use rayon::prelude::*;

use super::suites::Outcome;

fn assign(pairs: &[(&str, LassoTrace)]) -> Assignment {
    pairs
        .iter()
        .map(|(y, t)| (TraceVar::new(trace_var(y)), PointedTrace::initial(t.clone())))
        .collect()
}

/// Every `(n1, n2, n3)` with `n1, n2 ≤ side` and `n3 ≤ n3_max`.
fn ternary(
    pool: &TraceSet,
    f: &HyperFormula,
    side: usize,
    n3_max: usize,
    num: &(dyn Fn(&str, usize) -> LassoTrace + Sync),
    expect: &(dyn Fn(usize, usize, usize) -> bool + Sync),
) -> Outcome {
    let ev = Evaluator::new(pool, f).unwrap();
    let rows: Vec<(String, bool)> = (0..=side)
        .flat_map(|a| (0..=side).flat_map(move |b| (0..=n3_max).map(move |e| (a, b, e))))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(a, b, e)| {
            let asg = assign(&[("y1", num("y1", a)), ("y2", num("y2", b)), ("y3", num("y3", e))]);
            let got = ev.eval(&asg, &Context::Universal).unwrap();
            (format!("({a},{b},{e}) got {got}"), got == expect(a, b, e))
        })
        .collect();
    let mut out = Outcome::default();
    for (what, ok) in rows {
        out.check(ok, || what);
    }
    out
}

fn less(pool: &TraceSet, f: &HyperFormula, max: usize, num: &dyn Fn(&str, usize) -> LassoTrace) -> Outcome {
    let ev = Evaluator::new(pool, f).unwrap();
    let mut out = Outcome::default();
    for a in 0..=max {
        for b in 0..=max {
            let got = ev.eval(&assign(&[("y1", num("y1", a)), ("y2", num("y2", b))]), &Context::Universal).unwrap();
            out.check(got == (a < b), || format!("{a} < {b} got {got}"));
        }
    }
    out
}

fn member(
    pool: &TraceSet,
    f: &HyperFormula,
    max: usize,
    num: &dyn Fn(&str, usize) -> LassoTrace,
    set: &dyn Fn(u64) -> LassoTrace,
) -> Outcome {
    let ev = Evaluator::new(pool, f).unwrap();
    let mut out = Outcome::default();
    for n in 0..=max {
        for mask in 0..1u64 << (max + 1) {
            let elems: Vec<usize> = (0..=max).filter(|i| mask & (1 << i) != 0).collect();
            let got = ev.eval(&assign(&[("y1", num("y1", n)), ("Y", set(mask))]), &Context::Universal).unwrap();
            out.check(got == elems.contains(&n), || format!("{n} in {elems:?} got {got}"));
        }
    }
    out
}

fn vars() -> Vec<String> {
    ["y1", "y2", "y3"].iter().map(|v| v.to_string()).collect()
}

/// Add on `{0..b}²`, Mul on `{0..4}²`, Less up to `2b`, Member for `n, S ≤ 4`.
pub fn grid_s(b: u64) -> Vec<(&'static str, Outcome)> {
    let v = vars();
    let ap = s::ap(&v);
    let pool = s::pool_s(&v, b).unwrap();
    let mul_pool = s::pool_s(&v, 4).unwrap();
    let num = |y: &str, n: usize| s::number_trace(y, n);
    let bu = b as usize;
    vec![
        ("add", ternary(&pool, &s::hyp_add("y1", "y2", "y3"), bu, 2 * bu, &num, &|a, b, e| a + b == e)),
        ("mul", ternary(&mul_pool, &s::hyp_mul("y1", "y2", "y3", &ap), 4, 16, &num, &|a, b, e| a * b == e)),
        ("less", less(&pool, &s::hyp_less("y1", "y2"), 2 * bu, &num)),
        ("member", member(&pool, &s::hyp_member("y1", "Y"), 4, &num, &s::set_trace)),
    ]
}

/// Region of each product disjunct.
pub fn region(i: usize, n1: usize, n2: usize) -> bool {
    match i {
        1 => n1 == 0 || n2 == 0,
        2 => n1 == 1 && n2 == 1,
        3 => 1 <= n1 && n1 <= n2 && 2 <= n2,
        _ => 1 <= n2 && n2 <= n1 && 2 <= n1,
    }
}

/// Same grid for the context reduction, plus each product disjunct on its
/// own region and a check that the regions cover the grid.
pub fn grid_c(b: u64) -> Vec<(&'static str, Outcome)> {
    let pool = c::pool_c(b).unwrap();
    let mul_pool = c::pool_c(4).unwrap();
    let num = |_: &str, n: usize| c::number_trace(n);
    let bu = b as usize;
    let mut out = vec![
        ("add", ternary(&pool, &c::hyp_add("y1", "y2", "y3"), bu, 2 * bu, &num, &|a, b, e| a + b == e)),
        ("mul", ternary(&mul_pool, &c::hyp_mul("y1", "y2", "y3"), 4, 16, &num, &|a, b, e| a * b == e)),
        ("less", less(&pool, &c::hyp_less("y1", "y2"), 2 * bu, &num)),
        ("member", member(&pool, &c::hyp_member("y1", "Y"), 4, &num, &c::set_trace)),
    ];
    let psis: [(&'static str, fn(&str, &str, &str) -> HyperFormula); 4] =
        [("psi1", c::psi1), ("psi2", c::psi2), ("psi3", c::psi3), ("psi4", c::psi4)];
    for (i, (name, psi)) in psis.into_iter().enumerate() {
        let f = psi("y1", "y2", "y3");
        let o = ternary(&mul_pool, &f, 4, 16, &num, &|a, b, e| region(i + 1, a, b) && a * b == e);
        out.push((name, o));
    }
    let mut cover = Outcome::default();
    for a in 0..=4 {
        for b in 0..=4 {
            cover.check((1..=4).any(|i| region(i, a, b)), || format!("({a},{b}) uncovered"));
        }
    }
    out.push(("cover", cover));
    out
}
