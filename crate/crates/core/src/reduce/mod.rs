//! Reductions from second-order arithmetic to model checking of the
//! stuttering fragment ([`s`]) and the context fragment ([`c`]).

pub mod c;
pub mod s;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::hyper_eval::EvalError;
use crate::soa::{is_set_var, SoaError, SoaFormula};
use crate::syntax::Quantifier;
use crate::traces::TraceError;

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error(transparent)]
    Soa(#[from] SoaError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("bound must be at least {min}, got {got}")]
    BoundTooSmall { min: u64, got: u64 },
}

/// Trace variable standing for the arithmetic variable `v`.
pub fn trace_var(v: &str) -> String {
    format!("x_{v}")
}

/// Checks that `f` is a well-sorted sentence.
pub fn check_sentence(f: &SoaFormula) -> Result<(), SoaError> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(SoaError::FreeVariable(v));
    }
    f.check_sorts()
}

/// Rewrites `+` and `·` atoms that mention a variable twice so that every
/// argument is distinct: a later occurrence of `y` becomes a fresh `u`
/// bound as `exists u. ~(u < y) & ~(y < u) & ...` around the atom.
pub fn separate_repeated(f: &SoaFormula) -> SoaFormula {
    let mut used: BTreeSet<String> = BTreeSet::new();
    collect_names(f, &mut used);
    separate(f, &mut used)
}

fn collect_names(f: &SoaFormula, out: &mut BTreeSet<String>) {
    out.extend(f.free_vars());
    if let SoaFormula::Quant(_, v, a) = f {
        out.insert(v.clone());
        collect_names(a, out);
    } else if let SoaFormula::Not(a) = f {
        collect_names(a, out);
    } else if let SoaFormula::Or(a, b) | SoaFormula::And(a, b) = f {
        collect_names(a, out);
        collect_names(b, out);
    }
}

fn fresh_copy(y: &str, used: &mut BTreeSet<String>) -> String {
    (1..)
        .map(|k| format!("{y}_{k}"))
        .find(|n| !is_set_var(n) && used.insert(n.clone()))
        .expect("unbounded supply")
}

fn separate(f: &SoaFormula, used: &mut BTreeSet<String>) -> SoaFormula {
    match f {
        SoaFormula::Add(a, b, c) | SoaFormula::Mul(a, b, c) => {
            let mut args = [a.clone(), b.clone(), c.clone()];
            let mut copies = Vec::new();
            for i in 1..3 {
                if args[..i].contains(&args[i]) {
                    let u = fresh_copy(&args[i], used);
                    copies.push((u.clone(), args[i].clone()));
                    args[i] = u;
                }
            }
            let [a, b, c] = args;
            let atom = if matches!(f, SoaFormula::Add(..)) {
                SoaFormula::Add(a, b, c)
            } else {
                SoaFormula::Mul(a, b, c)
            };
            copies.into_iter().rev().fold(atom, |acc, (u, y)| {
                let eq = SoaFormula::and(
                    SoaFormula::not(SoaFormula::less(&u, &y)),
                    SoaFormula::not(SoaFormula::less(&y, &u)),
                );
                SoaFormula::exists(&u, SoaFormula::and(eq, acc))
            })
        }
        SoaFormula::Less(..) | SoaFormula::Member(..) => f.clone(),
        SoaFormula::Not(a) => SoaFormula::not(separate(a, used)),
        SoaFormula::Or(a, b) => SoaFormula::or(separate(a, used), separate(b, used)),
        SoaFormula::And(a, b) => SoaFormula::and(separate(a, used), separate(b, used)),
        SoaFormula::Quant(q, v, a) => SoaFormula::Quant(*q, v.clone(), Box::new(separate(a, used))),
    }
}

/// Quantifiers in order of occurrence.
pub fn quantifiers(f: &SoaFormula) -> Vec<(Quantifier, String)> {
    let mut out = Vec::new();
    fn go(f: &SoaFormula, out: &mut Vec<(Quantifier, String)>) {
        match f {
            SoaFormula::Quant(q, v, a) => {
                out.push((*q, v.clone()));
                go(a, out);
            }
            SoaFormula::Not(a) => go(a, out),
            SoaFormula::Or(a, b) | SoaFormula::And(a, b) => {
                go(a, out);
                go(b, out);
            }
            _ => {}
        }
    }
    go(f, &mut out);
    out
}

/// One grid case: arithmetic truth against the gadget's verdict.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CaseRow {
    pub case: String,
    pub expected: bool,
    pub actual: bool,
}

/// Outcome of one atom family over its case grid.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FamilyReport {
    pub family: String,
    pub cases: usize,
    pub checks: usize,
    pub agree: usize,
    pub disagreements: Vec<CaseRow>,
    #[serde(skip)]
    pub rows: Vec<CaseRow>,
}

impl FamilyReport {
    pub fn ok(&self) -> bool {
        self.disagreements.is_empty()
    }

    /// Collects `(case, expected, actual)` rows; `cases` counts grid points
    /// and each row is one check.
    pub fn collect(family: &str, cases: usize, rows: impl IntoIterator<Item = (String, bool, bool)>) -> Self {
        let mut checks = 0;
        let mut agree = 0;
        let mut disagreements = Vec::new();
        let mut kept = Vec::new();
        for (case, expected, actual) in rows {
            checks += 1;
            let row = CaseRow { case, expected, actual };
            if expected == actual {
                agree += 1;
            } else {
                disagreements.push(row.clone());
            }
            kept.push(row);
        }
        FamilyReport { family: family.to_string(), cases, checks, agree, disagreements, rows: kept }
    }
}

/// Result of checking every atom gadget of one reduction against arithmetic.
#[derive(Clone, Debug, Serialize)]
pub struct GadgetReport {
    pub variant: String,
    pub bound: u64,
    pub families: Vec<FamilyReport>,
    pub worked_examples: serde_json::Value,
    pub notes: Vec<String>,
}

impl GadgetReport {
    pub fn ok(&self) -> bool {
        self.families.iter().all(FamilyReport::ok)
    }
}
