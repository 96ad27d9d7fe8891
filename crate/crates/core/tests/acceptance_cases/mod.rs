use hyperstutter::hyper_eval::check_traceset;
use hyperstutter::reduce::{c, s, GadgetReport};
use hyperstutter::soa::{eval_soa_bounded, parse_flat};
use rayon::prelude::*;

use hyperstutter::pnf::to_pnf;
use hyperstutter::syntax::{classify, parse_hyper, parse_pltl, Fragment, HyperFormula, PltlFormula};

use crate::common::{formula_corpus, gadget_suites, pnf_suites, random_pltl, random_qf, rng, soa_corpus};
use crate::common::suites::{self, Outcome};
use crate::Verdict;

fn from_outcome(o: &Outcome) -> Verdict {
    Verdict {
        ok: o.passed(),
        detail: format!(
            "[{} cases, {} disagreements{}]",
            o.cases,
            o.failures.len(),
            o.failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    }
}

pub fn c1() -> Verdict {
    from_outcome(&suites::pltl_oracle(1000, 1))
}

pub fn c2() -> Verdict {
    from_outcome(&suites::remark1(200, 2))
}

pub fn c3() -> Verdict {
    from_outcome(&suites::qf_differential(500, 3))
}

pub fn c4() -> Verdict {
    let outs = suites::unfolding(500, 4);
    let names = ["until", "since", "always", "historically", "quantifier"];
    let ok = outs.iter().all(|o| o.passed());
    let detail = outs
        .iter()
        .zip(names)
        .map(|(o, n)| format!("{n}: {}/{}", o.cases - o.failures.len(), o.cases))
        .collect::<Vec<_>>()
        .join(", ");
    let first = outs.iter().find_map(|o| o.failures.first().cloned()).unwrap_or_default();
    Verdict { ok, detail: format!("[{detail}] {first}") }
}

fn from_grid(grid: &[(&str, Outcome)], report: &GadgetReport) -> (bool, String) {
    let ok = grid.iter().all(|(_, o)| o.passed()) && report.ok();
    let mut parts: Vec<String> =
        grid.iter().map(|(n, o)| format!("{n}: {}/{}", o.cases - o.failures.len(), o.cases)).collect();
    if let Some((n, f)) = grid.iter().find_map(|(n, o)| o.failures.first().map(|f| (n, f))) {
        parts.push(format!("first failure in {n}: {f}"));
    }
    let bad: usize = report.families.iter().map(|f| f.disagreements.len()).sum();
    parts.push(format!("report disagreements: {bad}"));
    (ok, parts.join(", "))
}

pub fn c6() -> Verdict {
    let grid = gadget_suites::grid_s(6);
    let report = s::verify_gadgets_s(6).expect("bound is valid");
    let (mut ok, detail) = from_grid(&grid, &report);
    let ex = &report.worked_examples["add_5_4_9"];
    ok &= ex["holds"] == true;
    Verdict { ok, detail: format!("[{detail}; (5,4)->9 holds={} witness={}]", ex["holds"], ex["witness"]) }
}

pub fn c7() -> Verdict {
    let grid = gadget_suites::grid_c(6);
    let report = c::verify_gadgets_c(6).expect("bound is valid");
    let (mut ok, detail) = from_grid(&grid, &report);
    let ex = &report.worked_examples["mul_3_7_21"];
    ok &= ex["holds"] == true && ex["witness_periods"] == serde_json::json!([7, 6]);
    ok &= report.worked_examples["disjuncts_cover_grid"] == true;
    Verdict {
        ok,
        detail: format!("[{detail}; (3,7)->21 holds={} periods={}]", ex["holds"], ex["witness_periods"]),
    }
}

/// Least `z` in `1..=50` with some `z'` in `1..=50` solving `z(n2-1) = z'n2 - n1`.
fn minimal_z_oracle(n1: i64, n2: i64) -> Option<i64> {
    (1..=50).find(|z| (1..=50).any(|z2| z * (n2 - 1) == z2 * n2 - n1))
}

pub fn c8() -> Verdict {
    let mut o = Outcome::default();
    for n2 in 2..=12u64 {
        for n1 in 1..=n2 {
            let got = c::minimal_z(n1, n2).ok();
            let want = minimal_z_oracle(n1 as i64, n2 as i64).map(|z| z as u64);
            o.check(got == want && got == Some(n1), || format!("({n1},{n2}): got {got:?}, search {want:?}"));
        }
    }
    from_outcome(&o)
}

pub fn c9() -> Verdict {
    let corpus = soa_corpus::SENTENCES_B3;
    let rows: Vec<(String, bool)> = corpus
        .par_iter()
        .map(|&(src, truth)| {
            let f = parse_flat(src).expect("corpus parses").formula;
            let soa = eval_soa_bounded(&f, 3).expect("closed");
            let vars = s::prepare(&f).expect("closed").1;
            let via_s = check_traceset(&s::pool_s(&vars, 3).unwrap(), &s::hyp_s(&f).unwrap()).unwrap();
            let via_c = check_traceset(&c::pool_c_with(3, 3).unwrap(), &c::hyp_c(&f).unwrap()).unwrap();
            let ok = soa == truth && via_s == soa && via_c == soa && f.quantifier_count() <= 2;
            (format!("{src}: expected {truth}, soa {soa}, s {via_s}, c {via_c}"), ok)
        })
        .collect();
    let mut o = Outcome::default();
    for (what, ok) in rows {
        o.check(ok, || what);
    }
    let mixed = corpus.iter().filter(|(s, _)| s.contains(|ch: char| ch.is_ascii_uppercase())).count();
    let v = from_outcome(&o);
    Verdict { ok: v.ok && o.cases >= 20 && mixed > 0, detail: format!("{} with {mixed} second-order", v.detail) }
}
pub fn c10() -> Verdict {
    let mut o = Outcome::default();
    for &(src, want) in formula_corpus::CLASSIFIED {
        let got = classify(&parse_hyper(src).expect("corpus parses")).fragment;
        o.check(got == want, || format!("{src}: expected {}, got {}", want.name(), got.name()));
    }
    let per: Vec<usize> = [Fragment::HyperLtl, Fragment::HyperLtlS, Fragment::HyperLtlC]
        .iter()
        .map(|f| formula_corpus::CLASSIFIED.iter().filter(|(_, g)| g == f).count())
        .collect();
    let v = from_outcome(&o);
    Verdict { ok: v.ok && per == [10, 10, 10], detail: format!("{} per fragment {per:?}", v.detail) }
}

fn hyper_round_trip(f: &HyperFormula) -> Result<(), String> {
    let printed = f.to_string();
    let back = parse_hyper(&printed).map_err(|e| format!("{printed}: {e}"))?;
    if &back != f || back.to_string() != printed || back.desugar() != f.desugar() {
        return Err(format!("{printed} reparsed as {back}"));
    }
    Ok(())
}

fn pltl_round_trip(f: &PltlFormula) -> Result<(), String> {
    let printed = f.to_string();
    let back = parse_pltl(&printed).map_err(|e| format!("{printed}: {e}"))?;
    if &back != f || back.to_string() != printed || back.desugar() != f.desugar() {
        return Err(format!("{printed} reparsed as {back}"));
    }
    Ok(())
}

fn round_trips() -> Outcome {
    let mut o = Outcome::default();
    let mut check = |r: Result<(), String>| {
        let ok = r.is_ok();
        o.check(ok, || r.unwrap_err());
    };
    for src in formula_corpus::PLTL {
        check(parse_pltl(src).map_err(|e| format!("{src}: {e}")).and_then(|f| pltl_round_trip(&f)));
    }
    let hyper = formula_corpus::CLASSIFIED
        .iter()
        .map(|(s, _)| *s)
        .chain(formula_corpus::FULL_LOGIC.iter().map(|(s, _)| *s))
        .chain(formula_corpus::HYPER_EXTRA.iter().copied());
    for src in hyper {
        match parse_hyper(src) {
            Ok(f) => {
                check(hyper_round_trip(&f));
                if f.free_vars().is_empty() {
                    check(hyper_round_trip(&to_pnf(&f).expect("sentence").formula));
                }
            }
            Err(e) => check(Err(format!("{src}: {e}"))),
        }
    }
    for (src, _) in soa_corpus::SENTENCES_B3 {
        let f = parse_flat(src).expect("corpus parses").formula;
        let back = parse_flat(&f.to_string()).map(|n| n.formula);
        check(if back.as_ref() == Ok(&f) { Ok(()) } else { Err(format!("{f} reparsed as {back:?}")) });
        for h in [s::hyp_s(&f).unwrap(), c::hyp_c(&f).unwrap()] {
            check(hyper_round_trip(&h));
        }
    }
    let mut r = rng(11);
    for _ in 0..300 {
        check(pltl_round_trip(&random_pltl(&mut r, 4, &["p", "q", "r"], true)));
        check(hyper_round_trip(&random_qf(&mut r, 4, &["x", "y"], &["p", "q"], 2, 2)));
    }
    o
}

fn json_stable(dir: &std::path::Path) -> Outcome {
    let bin = env!("CARGO_BIN_EXE_hyperstutter");
    std::fs::write(dir.join("f.hl"), "A x. F (E y. p@y & X[q] q@x)").unwrap();
    std::fs::write(dir.join("a.soa"), "forall y. exists Z. y in Z & y + y = y | y < y").unwrap();
    let runs: [&[&str]; 4] = [
        &["pnf", "f.hl", "--verify", "--seed", "11"],
        &["verify-gadgets", "--variant", "s", "--bound", "3"],
        &["verify-gadgets", "--variant", "c", "--bound", "2"],
        &["reduce", "--variant", "c", "--soa", "a.soa", "--bound", "2", "--verify"],
    ];
    let mut o = Outcome::default();
    for args in runs {
        let outputs: Vec<Vec<u8>> = (0..2)
            .map(|k| {
                let file = dir.join(format!("r{k}.json"));
                let _ = std::process::Command::new(bin)
                    .current_dir(dir)
                    .args(args)
                    .arg("--json")
                    .arg(&file)
                    .output()
                    .expect("binary runs");
                std::fs::read(&file).unwrap_or_default()
            })
            .collect();
        let ok = !outputs[0].is_empty() && outputs[0] == outputs[1];
        o.check(ok, || format!("{} differs between runs", args.join(" ")));
    }
    o
}

pub fn c11() -> Verdict {
    let rt = round_trips();
    let dir = tempfile::tempdir().expect("temp dir");
    let js = json_stable(dir.path());
    Verdict {
        ok: rt.passed() && js.passed(),
        detail: format!(
            "[round trip {}/{}, stable reports {}/{}{}]",
            rt.cases - rt.failures.len(),
            rt.cases,
            js.cases - js.failures.len(),
            js.cases,
            rt.failures.iter().chain(&js.failures).next().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    }
}

pub fn c5() -> Verdict {
    let per_rule: usize = std::env::var("HS_C5_RULE").ok().and_then(|s| s.parse().ok()).unwrap_or(200);
    let sentences: usize = std::env::var("HS_C5_SENT").ok().and_then(|s| s.parse().ok()).unwrap_or(50);
    let mut ok = true;
    let mut parts = Vec::new();
    let mut first = String::new();
    for (name, o) in pnf_suites::rule_suites(per_rule, 32, 5) {
        ok &= o.passed();
        parts.push(format!("{name}: {}/{}", o.cases - o.failures.len(), o.cases));
        if first.is_empty() {
            first = o.failures.first().cloned().unwrap_or_default();
        }
    }
    let e = pnf_suites::end_to_end(sentences, 10, 32, false, 55);
    ok &= e.outcome.passed();
    parts.push(format!(
        "end-to-end: {}/{} ({} inconclusive at bound)",
        e.outcome.cases - e.outcome.failures.len(),
        e.outcome.cases,
        e.inconclusive
    ));
    if first.is_empty() {
        first = e.outcome.failures.first().cloned().unwrap_or_default();
    }
    Verdict { ok, detail: format!("[{}] {first}", parts.join(", ")) }
}
