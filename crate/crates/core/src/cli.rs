//! Command-line front end. [`run`] parses arguments, dispatches, prints a
//! human-readable summary and optionally writes a JSON [`Report`].

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::hyper_eval::{check_system, check_traceset, eval, Assignment};
use crate::pnf::{to_pnf, verify_pnf};
use crate::reduce::{c, s, GadgetReport};
use crate::report::Report;
use crate::soa::{eval_normalized, eval_soa_bounded, parse_flat, Normalized};
use crate::syntax::{classify, parse_hyper, parse_pltl, Context, HyperFormula, TraceVar};
use crate::traces::{LassoTrace, Letter, PointedTrace, TraceSet, TransitionSystem};

#[derive(Debug, Parser)]
#[command(name = "hyperstutter", version, about = "GHyLTL with stuttering and contexts over lasso traces")]
pub struct Cli {
    /// Write a JSON report to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    pub json: Option<PathBuf>,
    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel grids.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Logic {
    Pltl,
    Hyper,
    Soa,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Variant {
    S,
    C,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a formula and print it back.
    Parse {
        #[arg(long, value_enum)]
        logic: Logic,
        file: PathBuf,
    },
    /// Print the fragment of a hyper formula.
    Classify { file: PathBuf },
    /// Evaluate a formula over a trace set.
    Eval {
        #[arg(long)]
        traces: PathBuf,
        #[arg(long)]
        formula: PathBuf,
        /// Comma-separated `x=name@pos` bindings.
        #[arg(long, value_delimiter = ',')]
        assignment: Vec<String>,
        /// `universal` or comma-separated variables.
        #[arg(long, default_value = "universal")]
        context: String,
    },
    /// Check a sentence on the bounded runs of a transition system.
    CheckTs {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        prefix_bound: usize,
        #[arg(long)]
        loop_bound: usize,
    },
    /// Prenex normal form of a sentence.
    Pnf {
        file: PathBuf,
        /// Compare truth before and after rewriting.
        #[arg(long)]
        verify: bool,
        /// Trace set for `--verify`; random small models from `--seed` otherwise.
        #[arg(long, requires = "verify")]
        traces: Option<PathBuf>,
        #[arg(long, default_value_t = 32)]
        lpos: usize,
        #[arg(long)]
        emit_fresh_map: bool,
    },
    /// Evaluate an arithmetic sentence with variables bounded by B.
    SoaEval {
        file: PathBuf,
        #[arg(long)]
        bound: u64,
    },
    /// Translate an arithmetic sentence into a hyper sentence.
    Reduce {
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long)]
        soa: PathBuf,
        #[arg(long)]
        bound: u64,
        #[arg(long, value_name = "FILE")]
        emit_pool: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// Check the atom gadgets of a reduction against arithmetic.
    VerifyGadgets {
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long)]
        bound: u64,
    },
    /// Least solution of the period equation.
    MinimalZ { n1: u64, n2: u64 },
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

/// Runs the tool on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut report = Report::new(command_echo(&argv));
    let mut out = String::new();
    let result = dispatch(&cli, &mut report, &mut out);
    print!("{out}");
    match result {
        Ok(good) => {
            report.finish();
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            if good {
                0
            } else {
                1
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

/// Arguments after the program name without `--json FILE`.
fn command_echo(argv: &[std::ffi::OsString]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in argv.iter().skip(1) {
        let a = a.to_string_lossy().into_owned();
        if skip {
            skip = false;
        } else if a == "--json" {
            skip = true;
        } else if !a.starts_with("--json=") {
            out.push(a);
        }
    }
    out
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))
}

fn hyper_file(path: &Path) -> Result<HyperFormula, Failure> {
    Ok(parse_hyper(&read(path)?)?)
}

fn soa_file(path: &Path) -> Result<Normalized, Failure> {
    Ok(parse_flat(&read(path)?)?)
}

fn dispatch(cli: &Cli, report: &mut Report, out: &mut String) -> Outcome {
    match &cli.command {
        Command::Parse { logic, file } => parse_cmd(*logic, file, report, out),
        Command::Classify { file } => {
            let f = hyper_file(file)?;
            let c = classify(&f);
            writeln!(out, "{} prenex={} past-free={}", c.fragment.name(), c.prenex, c.past_free)?;
            report.result = json!(c);
            Ok(true)
        }
        Command::Eval { traces, formula, assignment, context } => {
            eval_cmd(traces, formula, assignment, context, report, out)
        }
        Command::CheckTs { system, formula, prefix_bound, loop_bound } => {
            let ts = TransitionSystem::parse(&read(system)?)?;
            let f = hyper_file(formula)?;
            let v = check_system(&ts, &f, *prefix_bound, *loop_bound)?;
            let verdict = if v.holds_on_bounded_fragment { "holds" } else { "fails" };
            writeln!(
                out,
                "{verdict} on the {} runs with prefix <= {} and loop <= {}",
                v.pool_size, v.prefix_bound, v.loop_bound
            )?;
            report.caveat("the verdict covers only the runs within the prefix and loop bounds");
            report.result = json!(v);
            Ok(v.holds_on_bounded_fragment)
        }
        Command::Pnf { file, verify, traces, lpos, emit_fresh_map } => {
            pnf_cmd(file, *verify, traces.as_deref(), *lpos, *emit_fresh_map, cli.seed, report, out)
        }
        Command::SoaEval { file, bound } => {
            let n = soa_file(file)?;
            let v = eval_normalized(&n, *bound)?;
            writeln!(out, "{v}")?;
            report.caveat(format!("number variables range over 0..={bound}, set variables over its subsets"));
            report.result = json!({ "formula": n.formula.to_string(), "bound": bound, "value": v });
            Ok(v)
        }
        Command::Reduce { variant, soa, bound, emit_pool, verify } => {
            reduce_cmd(*variant, soa, *bound, emit_pool.as_deref(), *verify, report, out)
        }
        Command::VerifyGadgets { variant, bound } => {
            let r = match variant {
                Variant::S => s::verify_gadgets_s(*bound)?,
                Variant::C => c::verify_gadgets_c(*bound)?,
            };
            gadget_output(&r, report, out)?;
            Ok(r.ok())
        }
        Command::MinimalZ { n1, n2 } => {
            let z = c::minimal_z(*n1, *n2)?;
            writeln!(out, "{z}")?;
            report.result = json!({ "n1": n1, "n2": n2, "z": z });
            Ok(true)
        }
    }
}

fn parse_cmd(logic: Logic, file: &Path, report: &mut Report, out: &mut String) -> Outcome {
    let src = read(file)?;
    let printed = match logic {
        Logic::Pltl => parse_pltl(&src)?.to_string(),
        Logic::Hyper => parse_hyper(&src)?.to_string(),
        Logic::Soa => {
            let n = parse_flat(&src)?;
            let aux: Vec<String> = n.aux.iter().map(|(v, t)| format!("{v} = {t}")).collect();
            report.result = json!({ "logic": "soa", "formula": n.formula.to_string(), "aux": aux });
            writeln!(out, "{}", n.formula)?;
            return Ok(true);
        }
    };
    writeln!(out, "{printed}")?;
    report.result = json!({ "logic": format!("{logic:?}").to_lowercase(), "formula": printed });
    Ok(true)
}

fn parse_binding(b: &str, l: &TraceSet) -> Result<(TraceVar, PointedTrace), Failure> {
    let bad = || Failure(format!("binding '{b}' must look like x=name@pos"));
    let (x, rest) = b.split_once('=').ok_or_else(bad)?;
    let (name, pos) = rest.split_once('@').unwrap_or((rest, "0"));
    let position = pos.trim().parse().map_err(|_| bad())?;
    let trace = l.get(name.trim()).ok_or_else(|| Failure(format!("unknown trace '{}'", name.trim())))?;
    Ok((TraceVar::new(x.trim()), PointedTrace { trace: trace.clone(), position }))
}

fn parse_context(s: &str) -> Context {
    if s.trim() == "universal" {
        Context::Universal
    } else {
        Context::Explicit(s.split(',').map(|x| TraceVar::new(x.trim())).filter(|x| !x.as_str().is_empty()).collect())
    }
}

fn eval_cmd(
    traces: &Path,
    formula: &Path,
    assignment: &[String],
    context: &str,
    report: &mut Report,
    out: &mut String,
) -> Outcome {
    let l = TraceSet::parse(&read(traces)?)?;
    let f = hyper_file(formula)?;
    let a: Assignment = assignment.iter().map(|b| parse_binding(b, &l)).collect::<Result<_, _>>()?;
    let v = eval(&l, &a, &parse_context(context), &f)?;
    writeln!(out, "{v}")?;
    report.result = json!({ "formula": f.to_string(), "traces": l.len(), "value": v });
    Ok(v)
}

/// Small random trace set over `props`.
fn random_model(r: &mut ChaCha8Rng, props: &[String]) -> TraceSet {
    let letter = |r: &mut ChaCha8Rng| Letter::of(props.iter().map(String::as_str).filter(|_| r.gen_bool(0.5)));
    let mut l = TraceSet::new();
    for k in 0..r.gen_range(1..=3) {
        let prefix = (0..r.gen_range(0..=2)).map(|_| letter(r)).collect();
        let cycle = (0..r.gen_range(1..=2)).map(|_| letter(r)).collect();
        let t = LassoTrace::new(prefix, cycle).expect("non-empty cycle");
        l.insert(format!("t{k}"), t).expect("distinct names");
    }
    l
}

#[allow(clippy::too_many_arguments)]
fn pnf_cmd(
    file: &Path,
    verify: bool,
    traces: Option<&Path>,
    lpos: usize,
    emit_fresh_map: bool,
    seed: u64,
    report: &mut Report,
    out: &mut String,
) -> Outcome {
    let f = hyper_file(file)?;
    let p = to_pnf(&f)?;
    writeln!(out, "{}", p.formula)?;
    if emit_fresh_map {
        for v in &p.fresh_vars {
            writeln!(out, "{} {}", v.name, serde_json::to_string(&v.role)?)?;
        }
    }
    report.result = json!({
        "formula": p.formula.to_string(),
        "classification": classify(&p.formula),
        "fresh_vars": p.fresh_vars,
        "uses_position_traces": p.uses_hash,
    });
    if !verify {
        return Ok(true);
    }
    let models: Vec<TraceSet> = match traces {
        Some(path) => vec![TraceSet::parse(&read(path)?)?],
        None => {
            let mut props: Vec<String> = f.props().iter().map(|p| p.as_str().to_string()).collect();
            if props.is_empty() {
                props.push("p".into());
            }
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            report.caveat(format!("models drawn at random from seed {seed}"));
            (0..10).map(|_| random_model(&mut r, &props)).collect()
        }
    };
    let mut all = true;
    for l in &models {
        let v = verify_pnf(&f, l, lpos)?;
        all &= v.agree;
        if v.inconclusive {
            report.caveat(format!("inconclusive at position bound {}", v.lpos_bound));
        }
        writeln!(
            out,
            "original {} prenex {} ({}, position traces up to {})",
            v.lhs,
            v.rhs,
            if v.agree { "agree" } else { "disagree" },
            v.lpos_bound
        )?;
        report.record(json!({ "traces": l.to_string(), "lpos": v.lpos_bound }), json!(v.lhs), json!(v.rhs));
    }
    report.caveat("the prenex side uses position traces truncated at the recorded bound");
    Ok(all)
}

fn reduce_cmd(
    variant: Variant,
    soa: &Path,
    bound: u64,
    emit_pool: Option<&Path>,
    verify: bool,
    report: &mut Report,
    out: &mut String,
) -> Outcome {
    let n = soa_file(soa)?;
    let f = &n.formula;
    let (h, pool) = match variant {
        Variant::S => (s::hyp_s(f)?, s::pool_s(&s::prepare(f)?.1, bound)?),
        Variant::C => (c::hyp_c(f)?, c::pool_c_with(bound, bound)?),
    };
    writeln!(out, "{h}")?;
    let class = classify(&to_pnf(&h)?.formula);
    report.result = json!({
        "variant": format!("{variant:?}").to_lowercase(),
        "source": f.to_string(),
        "formula": h.to_string(),
        "classification": class,
        "bound": bound,
        "pool_size": pool.len(),
    });
    if let Some(path) = emit_pool {
        std::fs::write(path, pool.to_string()).map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?;
    }
    if !n.aux.is_empty() {
        report.caveat("auxiliary variables from flattening range over the same bound as the others");
    }
    if !verify {
        return Ok(true);
    }
    let want = eval_soa_bounded(f, bound)?;
    let got = check_traceset(&pool, &h)?;
    writeln!(out, "arithmetic {want} reduction {got} over {} traces", pool.len())?;
    report.record(json!({ "sentence": f.to_string(), "bound": bound }), json!(want), json!(got));
    report.caveat(format!("numbers range over 0..={bound}; the pool holds only the matching encodings"));
    Ok(want == got)
}

fn gadget_output(r: &GadgetReport, report: &mut Report, out: &mut String) -> Result<(), Failure> {
    for fam in &r.families {
        writeln!(out, "{}: {}/{} agree over {} cases", fam.family, fam.agree, fam.checks, fam.cases)?;
        for row in &fam.rows {
            report.record(json!({ "family": fam.family, "case": row.case }), json!(row.expected), json!(row.actual));
        }
    }
    writeln!(out, "worked_examples: {}", r.worked_examples)?;
    report.result = json!({
        "variant": r.variant,
        "bound": r.bound,
        "families": r.families,
        "worked_examples": r.worked_examples,
        "notes": r.notes,
    });
    Ok(())
}
