//! Arithmetic into the stuttering fragment: every variable `y` gets its own
//! proposition `#(y)`, and `$`, `$'` build periodic traces for products.

use rayon::prelude::*;
use serde_json::json;

use super::{check_sentence, separate_repeated, trace_var, FamilyReport, GadgetReport, ReduceError};
use crate::hyper_eval::{Assignment, Context, Evaluator};
use crate::soa::SoaFormula;
use crate::syntax::build::*;
use crate::syntax::{HyperFormula, Quantifier, StutterSet, TraceVar};
use crate::traces::{pointwise_union, LassoTrace, Letter, PointedTrace, TraceSet};

pub const HASH: &str = "#";
pub const DOLLAR: &str = "$";
pub const DOLLAR2: &str = "$'";

/// Proposition marking the value of `y`.
pub fn num_prop(y: &str) -> String {
    format!("#({y})")
}

/// Proposition set `{#} ∪ {#(y) | y ∈ vars} ∪ {$, $'}`.
pub fn ap(vars: &[String]) -> Vec<String> {
    let mut out = vec![HASH.to_string()];
    out.extend(vars.iter().map(|y| num_prop(y)));
    out.push(DOLLAR.into());
    out.push(DOLLAR2.into());
    out
}

fn none() -> StutterSet {
    StutterSet::new()
}

fn at(p: &str, y: &str) -> HyperFormula {
    atom(p, &trace_var(y))
}

fn mark(y: &str) -> HyperFormula {
    at(&num_prop(y), y)
}

/// `G_∅ ⋀_{p ∉ keep} ¬p_x`.
fn only(x: &str, keep: &[&str], ap: &[String]) -> HyperFormula {
    let lits = ap.iter().filter(|p| !keep.contains(&p.as_str())).map(|p| not(atom(p, x)));
    always(none(), conj(lits))
}

/// `(¬#(y)_x) U_∅ (#(y)_x ∧ X_∅ G_∅ ¬#(y)_x)`.
fn single_mark(p: &str, x: &str) -> HyperFormula {
    until(
        none(),
        not(atom(p, x)),
        and(atom(p, x), next(none(), always(none(), not(atom(p, x))))),
    )
}

/// Guard restricting `x_y` to number traces `∅^n {#(y)} ∅^ω`.
pub fn number_guard(y: &str, ap: &[String]) -> HyperFormula {
    let x = trace_var(y);
    let p = num_prop(y);
    and(only(&x, &[&p], ap), single_mark(&p, &x))
}

/// Guard restricting `x_Y` to set traces over `{#}`.
pub fn set_guard(set: &str, ap: &[String]) -> HyperFormula {
    only(&trace_var(set), &[HASH], ap)
}

pub fn hyp_member(y: &str, set: &str) -> HyperFormula {
    eventually(none(), and(mark(y), at(HASH, set)))
}

pub fn hyp_less(y1: &str, y2: &str) -> HyperFormula {
    eventually(none(), and(mark(y1), next(none(), eventually(none(), mark(y2)))))
}

/// Witness for `n1 + n2 = n3` when both summands are non-zero.
pub fn alpha_add(y1: &str, y2: &str, y3: &str) -> HyperFormula {
    let (p2, p3) = (num_prop(y2), num_prop(y3));
    let psi = and(
        always(none(), iff(mark(y2), atom(&p2, "x"))),
        always(none(), iff(mark(y3), atom(&p3, "x"))),
    );
    let step = next(
        label([p2.as_str()]),
        eventually(none(), and(mark(y1), next(none(), atom(&p3, "x")))),
    );
    exists("x", and(psi, step))
}

pub fn hyp_add(y1: &str, y2: &str, y3: &str) -> HyperFormula {
    disj([
        and(mark(y1), eventually(none(), and(mark(y2), mark(y3)))),
        and(mark(y2), eventually(none(), and(mark(y1), mark(y3)))),
        conj([not(mark(y1)), not(mark(y2)), alpha_add(y1, y2, y3)]),
    ])
}

fn periodic_shape(p: &str, x: &str) -> [HyperFormula; 3] {
    [
        atom(p, x),
        always(none(), eventually(none(), atom(p, x))),
        always(none(), eventually(none(), not(atom(p, x)))),
    ]
}

/// Shape of `x` (blocks of `$` with the `#(y3)` mark) and of `x'` (blocks of `$'`).
pub fn alpha_1(y3: &str, ap: &[String]) -> HyperFormula {
    let p3 = num_prop(y3);
    let [a, b, c] = periodic_shape(DOLLAR, "x");
    let [d, e, f] = periodic_shape(DOLLAR2, "x'");
    conj([
        a,
        b,
        c,
        only("x", &[DOLLAR, &p3], ap),
        d,
        e,
        f,
        only("x'", &[DOLLAR2], ap),
    ])
}

pub fn alpha_2() -> HyperFormula {
    always(none(), iff(atom(DOLLAR, "x"), atom(DOLLAR2, "x'")))
}

/// Consecutive blocks of `x` have equal length. Both inner next operators
/// stutter on `$'`, which moves `x` by one and `x'` to its next block.
pub fn alpha_3() -> HyperFormula {
    alpha_3_with(label([DOLLAR2]), label([DOLLAR2]))
}

pub(crate) fn alpha_3_with(first: StutterSet, second: StutterSet) -> HyperFormula {
    let d = || atom(DOLLAR, "x");
    let d2 = || atom(DOLLAR2, "x'");
    let on = implies(
        d(),
        next(
            first,
            until(none(), and(d(), not(d2())), conj([not(d()), not(d2()), next(none(), d2())])),
        ),
    );
    let off = implies(
        not(d()),
        next(
            second,
            until(none(), and(not(d()), d2()), conj([d(), d2(), next(none(), not(d2()))])),
        ),
    );
    always(label([DOLLAR, DOLLAR2]), and(on, off))
}

/// Witness for `n1 · n2 = n3` when both factors are non-zero.
pub fn alpha_mult(y1: &str, y2: &str, y3: &str, ap: &[String]) -> HyperFormula {
    let p3 = num_prop(y3);
    let block = until(none(), atom(DOLLAR, "x"), and(not(atom(DOLLAR, "x")), mark(y1)));
    let same = always(none(), iff(mark(y3), atom(&p3, "x")));
    let reach = eventually(label([DOLLAR]), and(mark(y2), atom(&p3, "x")));
    exists(
        "x",
        exists("x'", conj([alpha_1(y3, ap), alpha_2(), alpha_3(), block, same, reach])),
    )
}

pub fn hyp_mul(y1: &str, y2: &str, y3: &str, ap: &[String]) -> HyperFormula {
    disj([
        and(mark(y1), mark(y3)),
        and(mark(y2), mark(y3)),
        conj([not(mark(y1)), not(mark(y2)), alpha_mult(y1, y2, y3, ap)]),
    ])
}

fn translate(f: &SoaFormula, ap: &[String]) -> HyperFormula {
    match f {
        SoaFormula::Add(a, b, c) => hyp_add(a, b, c),
        SoaFormula::Mul(a, b, c) => hyp_mul(a, b, c, ap),
        SoaFormula::Less(a, b) => hyp_less(a, b),
        SoaFormula::Member(a, s) => hyp_member(a, s),
        SoaFormula::Not(a) => not(translate(a, ap)),
        SoaFormula::Or(a, b) => or(translate(a, ap), translate(b, ap)),
        SoaFormula::And(a, b) => and(translate(a, ap), translate(b, ap)),
        SoaFormula::Quant(q, v, a) => {
            let guard = if crate::soa::is_set_var(v) { set_guard(v, ap) } else { number_guard(v, ap) };
            let body = translate(a, ap);
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
pub fn hyp_s(sentence: &SoaFormula) -> Result<HyperFormula, ReduceError> {
    check_sentence(sentence)?;
    let f = separate_repeated(sentence);
    let vars = f.first_order_vars();
    Ok(translate(&f, &ap(&vars)))
}

/// Sentence after separation, with the first-order variables the pool needs.
pub fn prepare(sentence: &SoaFormula) -> Result<(SoaFormula, Vec<String>), ReduceError> {
    check_sentence(sentence)?;
    let f = separate_repeated(sentence);
    let vars = f.first_order_vars();
    Ok((f, vars))
}

// ---------------------------------------------------------------- traces

fn marks_at(points: &[(usize, &str)]) -> LassoTrace {
    let len = points.iter().map(|(i, _)| i + 1).max().unwrap_or(0);
    let mut prefix = vec![Letter::empty(); len];
    for (i, p) in points {
        prefix[*i] = prefix[*i].union(&Letter::of([*p]));
    }
    LassoTrace::new(prefix, vec![Letter::empty()]).expect("non-empty cycle")
}

/// `∅^n {#(y)} ∅^ω`.
pub fn number_trace(y: &str, n: usize) -> LassoTrace {
    marks_at(&[(n, &num_prop(y))])
}

/// The set `{i | bit i of mask}` over `{#}`.
pub fn set_trace(mask: u64) -> LassoTrace {
    let points: Vec<(usize, &str)> = (0..64).filter(|i| mask >> i & 1 == 1).map(|i| (i, HASH)).collect();
    marks_at(&points)
}

/// `({p}^m ∅^m)^ω`.
pub fn periodic(p: &str, m: usize) -> LassoTrace {
    let mut cycle = vec![Letter::of([p]); m];
    cycle.extend(vec![Letter::empty(); m]);
    LassoTrace::new(Vec::new(), cycle).expect("m >= 1")
}

/// Finite fragment of the system's traces used as quantification domain.
pub fn pool_s(vars: &[String], b: u64) -> Result<TraceSet, ReduceError> {
    if b == 0 {
        return Err(ReduceError::BoundTooSmall { min: 1, got: b });
    }
    let b = b as usize;
    let mut pool = TraceSet::new();
    for y in vars {
        for n in 0..=b {
            pool.insert(format!("num_{y}_{n}"), number_trace(y, n))?;
        }
    }
    for mask in 0..1u64 << (b + 1) {
        pool.insert(format!("set_{mask:0w$b}", w = b + 1), set_trace(mask))?;
    }
    for y3 in vars {
        for m in 1..=b {
            for n3 in 0..=b * b {
                let t = pointwise_union(&number_trace(y3, n3), &periodic(DOLLAR, m));
                pool.insert(format!("mul_{y3}_{m}_{n3}"), t)?;
            }
        }
    }
    for m in 1..=b {
        pool.insert(format!("per_{m}"), periodic(DOLLAR2, m))?;
    }
    for y2 in vars {
        for y3 in vars.iter().filter(|y3| *y3 != y2) {
            for n2 in 0..=b {
                for n3 in 0..=2 * b {
                    let t = marks_at(&[(n2, &num_prop(y2)), (n3, &num_prop(y3))]);
                    pool.insert(format!("add_{y2}_{y3}_{n2}_{n3}"), t)?;
                }
            }
        }
    }
    Ok(pool)
}

// ---------------------------------------------------------------- gadgets

fn assign(pairs: &[(&str, LassoTrace)]) -> Assignment {
    pairs
        .iter()
        .map(|(y, t)| (TraceVar::new(trace_var(y)), PointedTrace::initial(t.clone())))
        .collect()
}

fn numbers(vals: &[(&str, usize)]) -> Assignment {
    assign(&vals.iter().map(|(y, n)| (*y, number_trace(y, *n))).collect::<Vec<_>>())
}

fn ternary_family(
    name: &str,
    ev: &Evaluator,
    side: usize,
    n3_max: usize,
    op: impl Fn(usize, usize) -> usize + Sync,
) -> Result<FamilyReport, ReduceError> {
    let pairs: Vec<(usize, usize)> = (0..=side).flat_map(|a| (0..=side).map(move |b| (a, b))).collect();
    let rows: Vec<Vec<(String, bool, bool)>> = pairs
        .par_iter()
        .map(|&(n1, n2)| {
            (0..=n3_max)
                .map(|n3| {
                    let a = numbers(&[("y1", n1), ("y2", n2), ("y3", n3)]);
                    let got = ev.eval(&a, &Context::Universal)?;
                    Ok((format!("({n1},{n2},{n3})"), op(n1, n2) == n3, got))
                })
                .collect::<Result<Vec<_>, ReduceError>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(FamilyReport::collect(name, pairs.len(), rows.into_iter().flatten()))
}

fn grid_vars() -> Vec<String> {
    ["y1", "y2", "y3"].iter().map(|s| s.to_string()).collect()
}

/// Compares every atom gadget with arithmetic: `+` on `{0..b}²`, `·` on
/// `{0..min(b,4)}²`, `<` on `{0..2b}²` and `∈` on all `(n, S)` with
/// `n ≤ b`, `S ⊆ {0..b}`. Each `+`/`·` case checks every candidate result.
pub fn verify_gadgets_s(b: u64) -> Result<GadgetReport, ReduceError> {
    if b == 0 {
        return Err(ReduceError::BoundTooSmall { min: 1, got: b });
    }
    let vars = grid_vars();
    let ap = ap(&vars);
    let bu = b as usize;
    let pool = pool_s(&vars, b)?;

    let add = Evaluator::new(&pool, &hyp_add("y1", "y2", "y3"))?;
    let add_report = ternary_family("add", &add, bu, 2 * bu, |x, y| x + y)?;

    let mb = b.min(4);
    let mul_pool = if mb == b { pool.clone() } else { pool_s(&vars, mb)? };
    let mul = Evaluator::new(&mul_pool, &hyp_mul("y1", "y2", "y3", &ap))?;
    let mbu = mb as usize;
    let mul_report = ternary_family("mul", &mul, mbu, mbu * mbu, |x, y| x * y)?;

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
            let a = assign(&[("y1", number_trace("y1", n)), ("Y", set_trace(s))]);
            let got = member.eval(&a, &Context::Universal)?;
            Ok((format!("({n},{s:#b})"), s >> n & 1 == 1, got))
        })
        .collect::<Result<Vec<_>, ReduceError>>()?;
    let member_report = FamilyReport::collect("member", member_rows.len(), member_rows);

    let mut worked_examples = json!({});
    if b >= 5 {
        let wit = Evaluator::new(&pool, &alpha_add("y1", "y2", "y3"))?
            .find_witness(&numbers(&[("y1", 5), ("y2", 4), ("y3", 9)]), &Context::Universal)?;
        let holds = add.eval(&numbers(&[("y1", 5), ("y2", 4), ("y3", 9)]), &Context::Universal)?;
        worked_examples["add_5_4_9"] = json!({
            "holds": holds,
            "witness": wit.and_then(|w| w.first().map(|(_, n)| n.clone())),
        });
    }

    Ok(GadgetReport {
        variant: "s".into(),
        bound: b,
        families: vec![add_report, mul_report, less_report, member_report],
        worked_examples,
        notes: vec![
            "the addition witness x carries both #(y2) and #(y3); the pool adds such two-mark traces".into(),
            "both next operators inside the periodicity gadget stutter on {$'}".into(),
            "the block-length conjunct of the product witness uses an empty until label".into(),
        ],
    })
}
