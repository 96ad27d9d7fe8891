//! Arithmetic into the context fragment over the propositions `#` and `$`.
//! All temporal operators carry the empty label; contexts decide which
//! traces move.

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use super::{check_sentence, separate_repeated, trace_var, FamilyReport, GadgetReport, ReduceError};
use crate::hyper_eval::{Assignment, Context, Evaluator};
use crate::soa::{is_set_var, SoaFormula};
use crate::syntax::build::*;
use crate::syntax::{HyperFormula, Quantifier, TraceVar};
use crate::traces::{LassoTrace, Letter, PointedTrace, TraceSet};

pub const HASH: &str = "#";
pub const DOLLAR: &str = "$";

fn at(p: &str, y: &str) -> HyperFormula {
    atom(p, &trace_var(y))
}

fn h(y: &str) -> HyperFormula {
    at(HASH, y)
}

fn d(x: &str) -> HyperFormula {
    atom(DOLLAR, x)
}

fn ctx_of(vars: &[&str], a: HyperFormula) -> HyperFormula {
    ctx(vars.iter().copied(), a)
}

pub fn set_guard(set: &str) -> HyperFormula {
    g(not(at(DOLLAR, set)))
}

/// `G ¬$ ∧ (¬#) U (# ∧ X G ¬#)` on `x_y`.
pub fn number_guard(y: &str) -> HyperFormula {
    and(set_guard(y), u(not(h(y)), and(h(y), x(g(not(h(y)))))))
}

pub fn hyp_member(y: &str, set: &str) -> HyperFormula {
    f(and(h(y), at(HASH, set)))
}

pub fn hyp_less(y1: &str, y2: &str) -> HyperFormula {
    f(and(h(y1), x(f(h(y2)))))
}

pub fn hyp_add(y1: &str, y2: &str, y3: &str) -> HyperFormula {
    let (x1, x2, x3) = (trace_var(y1), trace_var(y2), trace_var(y3));
    let inner = ctx_of(&[&x2, &x3], f(and(h(y2), h(y3))));
    ctx_of(&[&x1, &x3], f(and(h(y1), inner)))
}

fn shape(x: &str) -> HyperFormula {
    conj([d(x), g(f(d(x))), g(f(not(d(x)))), g(not(atom(HASH, x)))])
}

/// `x` and `x'` are block traces over `$` with equal blocks, and every block
/// of `x` is as long as the one before.
pub fn alpha_per(x: &str, x2: &str) -> HyperFormula {
    let a1 = and(shape(x), shape(x2));
    let a2 = g(iff(d(x), d(x2)));
    let a3 = ctx_of(&[x], u(d(x), and(not(d(x)), ctx_of(&[x, x2], g(iff(d(x), not(d(x2))))))));
    conj([a1, a2, a3])
}

/// Both pointers sit on the last position of a block.
pub fn alpha_algn(x0: &str, x1: &str) -> HyperFormula {
    and(iff(d(x0), not(x(d(x0)))), iff(d(x1), not(x(d(x1)))))
}

/// Zero case: a factor is zero and so is the product.
pub fn psi1(y1: &str, y2: &str, y3: &str) -> HyperFormula {
    and(or(h(y1), h(y2)), h(y3))
}

/// Unit case.
pub fn psi2(y1: &str, y2: &str, y3: &str) -> HyperFormula {
    x(conj([h(y1), h(y2), h(y3)]))
}

/// Region `0 < n1 ≤ n2`, `n2 ≥ 2`.
pub fn psi3_guard(y1: &str, y2: &str) -> HyperFormula {
    and(x(f(and(h(y1), f(h(y2))))), x(x(f(h(y2)))))
}

/// Existential part of the product gadget: two periodic traces with periods
/// `n2` and `n2 - 1`, aligned after an offset of `n1`.
pub fn psi3_witness(y1: &str, y2: &str, y3: &str) -> HyperFormula {
    let (x1, x3) = (trace_var(y1), trace_var(y3));
    let algn = alpha_algn("x0", "x1");
    let walk = ctx_of(&["x0", "x1", &x3], u(not(algn.clone()), and(algn, x(h(y3)))));
    let body = conj([
        alpha_per("x0", "x0'"),
        alpha_per("x1", "x1'"),
        u(d("x0"), and(not(d("x0")), h(y2))),
        u(d("x1"), and(not(d("x1")), x(h(y2)))),
        ctx_of(&[&x1, &x3, "x0"], f(and(h(y1), walk))),
    ]);
    ["x0", "x0'", "x1", "x1'"].iter().rev().fold(body, |acc, v| exists(v, acc))
}

pub fn psi3(y1: &str, y2: &str, y3: &str) -> HyperFormula {
    and(psi3_guard(y1, y2), psi3_witness(y1, y2, y3))
}

/// `psi3` with the factors swapped.
pub fn psi4(y1: &str, y2: &str, y3: &str) -> HyperFormula {
    psi3(y2, y1, y3)
}

pub fn hyp_mul(y1: &str, y2: &str, y3: &str) -> HyperFormula {
    disj([psi1(y1, y2, y3), psi2(y1, y2, y3), psi3(y1, y2, y3), psi4(y1, y2, y3)])
}

fn translate(f: &SoaFormula) -> HyperFormula {
    match f {
        SoaFormula::Add(a, b, c) => hyp_add(a, b, c),
        SoaFormula::Mul(a, b, c) => hyp_mul(a, b, c),
        SoaFormula::Less(a, b) => hyp_less(a, b),
        SoaFormula::Member(a, s) => hyp_member(a, s),
        SoaFormula::Not(a) => not(translate(a)),
        SoaFormula::Or(a, b) => or(translate(a), translate(b)),
        SoaFormula::And(a, b) => and(translate(a), translate(b)),
        SoaFormula::Quant(q, v, a) => {
            let guard = if is_set_var(v) { set_guard(v) } else { number_guard(v) };
            let body = translate(a);
            let x = TraceVar::new(trace_var(v));
            match q {
                Quantifier::Exists => HyperFormula::Quant(*q, x, Box::new(and(guard, body))),
                Quantifier::Forall => HyperFormula::Quant(*q, x, Box::new(implies(guard, body))),
            }
        }
    }
}

/// Translation of a sentence; atoms of `+` and `·` with repeated arguments
/// are separated first.
pub fn hyp_c(sentence: &SoaFormula) -> Result<HyperFormula, ReduceError> {
    check_sentence(sentence)?;
    Ok(translate(&separate_repeated(sentence)))
}

// ---------------------------------------------------------------- minimal z

#[derive(Debug, Error, PartialEq, Eq)]
#[error("minimal_z needs 0 < n1 <= n2 and n2 >= 2, got ({0}, {1})")]
pub struct MinimalZError(pub u64, pub u64);

/// Least `z ≥ 1` such that `z·(n2 − 1) = z'·n2 − n1` for some `z' ≥ 1`.
pub fn minimal_z(n1: u64, n2: u64) -> Result<u64, MinimalZError> {
    if n1 == 0 || n1 > n2 || n2 < 2 {
        return Err(MinimalZError(n1, n2));
    }
    // z·(n2 − 1) + n1 ≡ n1 − z (mod n2), so a solution lies in 1..=n2
    Ok((1..=n2)
        .find(|z| (z * (n2 - 1) + n1) % n2 == 0)
        .expect("a solution exists within one period"))
}

// ---------------------------------------------------------------- traces

/// `∅^n {#} ∅^ω`, also the singleton set `{n}`.
pub fn number_trace(n: usize) -> LassoTrace {
    set_trace_of(&[n])
}

fn set_trace_of(points: &[usize]) -> LassoTrace {
    let len = points.iter().map(|i| i + 1).max().unwrap_or(0);
    let mut prefix = vec![Letter::empty(); len];
    for &i in points {
        prefix[i] = Letter::of([HASH]);
    }
    LassoTrace::new(prefix, vec![Letter::empty()]).expect("non-empty cycle")
}

pub fn set_trace(mask: u64) -> LassoTrace {
    let points: Vec<usize> = (0..64).filter(|i| mask >> i & 1 == 1).collect();
    set_trace_of(&points)
}

/// `({$}^m ∅^m)^ω`.
pub fn periodic(m: usize) -> LassoTrace {
    crate::reduce::s::periodic(DOLLAR, m)
}

/// Pool with numbers up to `b² + b`, all subsets of `{0..b}` and periods up to `b + 1`.
pub fn pool_c(b: u64) -> Result<TraceSet, ReduceError> {
    pool_c_with(b, b * b + b)
}

/// As [`pool_c`] with numbers only up to `numbers`. Singleton sets that
/// coincide with a number trace are listed once, under the number name.
pub fn pool_c_with(b: u64, numbers: u64) -> Result<TraceSet, ReduceError> {
    if b == 0 {
        return Err(ReduceError::BoundTooSmall { min: 1, got: b });
    }
    let mut pool = TraceSet::new();
    for n in 0..=numbers as usize {
        pool.insert(format!("num_{n}"), number_trace(n))?;
    }
    let b = b as usize;
    for mask in 0..1u64 << (b + 1) {
        let single = mask.count_ones() == 1 && (mask.trailing_zeros() as u64) <= numbers;
        if !single {
            pool.insert(format!("set_{mask:0w$b}", w = b + 1), set_trace(mask))?;
        }
    }
    for m in 1..=b + 1 {
        pool.insert(format!("per_{m}"), periodic(m))?;
    }
    Ok(pool)
}

/// `$`-block traces that are not periodic in the gadget's sense, used to
/// check that the periodicity formula rejects them.
pub fn irregular_traces(b: usize) -> Vec<(String, LassoTrace)> {
    let dl = |k: usize| vec![Letter::of([DOLLAR]); k];
    let em = |k: usize| vec![Letter::empty(); k];
    let mut out = Vec::new();
    for a in 1..=b + 1 {
        for c in 1..=b + 1 {
            if a != c {
                let cycle = [dl(a), em(c)].concat();
                out.push((format!("blocks_{a}_{c}"), LassoTrace::new(Vec::new(), cycle).expect("non-empty")));
            }
        }
        // one longer first block, then period a
        let t = LassoTrace::new([dl(a + 1), em(a)].concat(), [dl(a), em(a)].concat()).expect("non-empty");
        out.push((format!("late_{a}"), t));
    }
    out
}

// ---------------------------------------------------------------- gadgets

fn assign(pairs: &[(&str, LassoTrace)]) -> Assignment {
    pairs
        .iter()
        .map(|(y, t)| (TraceVar::new(trace_var(y)), PointedTrace::initial(t.clone())))
        .collect()
}

fn numbers(vals: &[(&str, usize)]) -> Assignment {
    assign(&vals.iter().map(|(y, n)| (*y, number_trace(*n))).collect::<Vec<_>>())
}

fn ternary(
    name: &str,
    ev: &Evaluator,
    side: usize,
    n3_max: usize,
    expect: impl Fn(usize, usize, usize) -> bool + Sync,
) -> Result<FamilyReport, ReduceError> {
    let pairs: Vec<(usize, usize)> = (0..=side).flat_map(|a| (0..=side).map(move |b| (a, b))).collect();
    let rows: Vec<Vec<(String, bool, bool)>> = pairs
        .par_iter()
        .map(|&(n1, n2)| {
            (0..=n3_max)
                .map(|n3| {
                    let got = ev.eval(&numbers(&[("y1", n1), ("y2", n2), ("y3", n3)]), &Context::Universal)?;
                    Ok((format!("({n1},{n2},{n3})"), expect(n1, n2, n3), got))
                })
                .collect::<Result<Vec<_>, ReduceError>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(FamilyReport::collect(name, pairs.len(), rows.into_iter().flatten()))
}

/// Where each disjunct of the product gadget is meant to fire.
pub fn psi_region(i: usize, n1: usize, n2: usize) -> bool {
    match i {
        1 => n1 == 0 || n2 == 0,
        2 => n1 == 1 && n2 == 1,
        3 => 0 < n1 && n1 <= n2 && n2 >= 2,
        4 => 0 < n2 && n2 <= n1 && n1 >= 2,
        _ => false,
    }
}

/// Periods of the two witnesses chosen for `n1 · n2 = n3` by the third disjunct.
pub fn psi3_witness_periods(n1: usize, n2: usize, n3: usize, pool: &TraceSet) -> Result<Option<(usize, usize)>, ReduceError> {
    let ev = Evaluator::new(pool, &psi3_witness("y1", "y2", "y3"))?;
    let Some(w) = ev.find_witness(&numbers(&[("y1", n1), ("y2", n2), ("y3", n3)]), &Context::Universal)? else {
        return Ok(None);
    };
    let period = |var: &str| {
        w.iter()
            .find(|(x, _)| x.as_str() == var)
            .and_then(|(_, name)| name.strip_prefix("per_"))
            .and_then(|m| m.parse().ok())
    };
    Ok(period("x0").zip(period("x1")))
}

/// Compares every atom gadget with arithmetic on the same grid as the
/// stuttering reduction, checks that each product disjunct fires exactly on
/// its region, and that the periodicity formula accepts exactly the pairs of
/// equal periodic traces.
pub fn verify_gadgets_c(b: u64) -> Result<GadgetReport, ReduceError> {
    if b < 2 {
        return Err(ReduceError::BoundTooSmall { min: 2, got: b });
    }
    let bu = b as usize;
    let pool = pool_c(b)?;

    let add = Evaluator::new(&pool, &hyp_add("y1", "y2", "y3"))?;
    let add_report = ternary("add", &add, bu, 2 * bu, |a, c, e| a + c == e)?;

    let mb = b.min(4);
    let mbu = mb as usize;
    let mul_pool = if mb == b { pool.clone() } else { pool_c(mb)? };
    let mul = Evaluator::new(&mul_pool, &hyp_mul("y1", "y2", "y3"))?;
    let mul_report = ternary("mul", &mul, mbu, mbu * mbu, |a, c, e| a * c == e)?;

    let mut parts = Vec::new();
    for (i, psi) in [psi1, psi2, psi3, psi4].iter().enumerate() {
        let ev = Evaluator::new(&mul_pool, &psi("y1", "y2", "y3"))?;
        let i = i + 1;
        let r = ternary(&format!("psi{i}"), &ev, mbu, mbu * mbu, |a, c, e| psi_region(i, a, c) && a * c == e)?;
        parts.push(r);
    }
    let covered = (0..=mbu).all(|a| (0..=mbu).all(|c| (1..=4).any(|i| psi_region(i, a, c))));

    let less = Evaluator::new(&pool, &hyp_less("y1", "y2"))?;
    let lb = 2 * bu;
    let less_rows = (0..=lb)
        .flat_map(|n1| (0..=lb).map(move |n2| (n1, n2)))
        .map(|(n1, n2)| {
            let got = less.eval(&numbers(&[("y1", n1), ("y2", n2)]), &Context::Universal)?;
            Ok((format!("({n1},{n2})"), n1 < n2, got))
        })
        .collect::<Result<Vec<_>, ReduceError>>()?;
    let less_report = FamilyReport::collect("less", less_rows.len(), less_rows);

    let member = Evaluator::new(&pool, &hyp_member("y1", "Y"))?;
    let member_rows = (0..=bu)
        .flat_map(|n| (0..1u64 << (bu + 1)).map(move |s| (n, s)))
        .map(|(n, s)| {
            let a = assign(&[("y1", number_trace(n)), ("Y", set_trace(s))]);
            let got = member.eval(&a, &Context::Universal)?;
            Ok((format!("({n},{s:#b})"), s >> n & 1 == 1, got))
        })
        .collect::<Result<Vec<_>, ReduceError>>()?;
    let member_report = FamilyReport::collect("member", member_rows.len(), member_rows);

    let per = Evaluator::new(&pool, &alpha_per("x", "x'"))?;
    let mut candidates: Vec<(String, LassoTrace)> = pool.iter().map(|(n, t)| (n.to_string(), t.clone())).collect();
    candidates.extend(irregular_traces(bu));
    let per_rows = candidates
        .iter()
        .flat_map(|a| candidates.iter().map(move |c| (a, c)))
        .map(|((na, ta), (nc, tc))| {
            let asg: Assignment = [
                (TraceVar::new("x"), PointedTrace::initial(ta.clone())),
                (TraceVar::new("x'"), PointedTrace::initial(tc.clone())),
            ]
            .into_iter()
            .collect();
            let got = per.eval(&asg, &Context::Universal)?;
            let expected = na.starts_with("per_") && na == nc;
            Ok((format!("({na},{nc})"), expected, got))
        })
        .collect::<Result<Vec<_>, ReduceError>>()?;
    let per_report = FamilyReport::collect("periodic", per_rows.len(), per_rows);

    // periods 7 and 6 need a pool with periods up to 7
    let fig_pool = pool_c_with(6, 21)?;
    let fig_mul = Evaluator::new(&fig_pool, &hyp_mul("y1", "y2", "y3"))?;
    let holds = fig_mul.eval(&numbers(&[("y1", 3), ("y2", 7), ("y3", 21)]), &Context::Universal)?;
    let periods = psi3_witness_periods(3, 7, 21, &fig_pool)?;
    let unit = mul.eval(&numbers(&[("y1", 1), ("y2", 1), ("y3", 1)]), &Context::Universal)?;
    let wrong = mul.eval(&numbers(&[("y1", 2), ("y2", 3), ("y3", 7)]), &Context::Universal)?;
    let worked_examples = json!({
        "mul_3_7_21": {
            "holds": holds,
            "witness_periods": periods.map(|(p0, p1)| vec![p0, p1]),
        },
        "mul_1_1_1": unit,
        "mul_2_3_7": wrong,
        "disjuncts_cover_grid": covered,
    });

    let mut families = vec![add_report, mul_report];
    families.extend(parts);
    families.extend([less_report, member_report, per_report]);
    Ok(GadgetReport {
        variant: "c".into(),
        bound: b,
        families,
        worked_examples,
        notes: vec![
            "the zero case and the third and fourth disjuncts are conjunctions of guard and body".into(),
            "the fourth disjunct covers 0 < n2 <= n1 with n1 >= 2; it overlaps the third on the diagonal".into(),
        ],
    })
}
