//! Lasso traces, trace sets and transition systems.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::Prop;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("loop must contain at least one letter")]
    EmptyLoop,
    #[error("duplicate trace name '{0}'")]
    DuplicateName(String),
    #[error("vertex '{0}' has no outgoing edge")]
    DeadEnd(String),
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
}

/// A letter: set of propositions holding at one position.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub BTreeSet<Prop>);

impl Letter {
    pub fn empty() -> Self {
        Letter(BTreeSet::new())
    }

    pub fn of<'a>(props: impl IntoIterator<Item = &'a str>) -> Self {
        Letter(props.into_iter().map(Prop::new).collect())
    }

    pub fn contains(&self, p: &Prop) -> bool {
        self.0.contains(p)
    }

    pub fn union(&self, other: &Letter) -> Letter {
        Letter(self.0.union(&other.0).cloned().collect())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(p.as_str())?;
        }
        f.write_str("}")
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Ultimately periodic trace `prefix · loop^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoTrace {
    prefix: Vec<Letter>,
    cycle: Vec<Letter>,
}

impl LassoTrace {
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> Result<Self, TraceError> {
        if cycle.is_empty() {
            return Err(TraceError::EmptyLoop);
        }
        Ok(LassoTrace { prefix, cycle })
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Letter] {
        &self.cycle
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn loop_len(&self) -> usize {
        self.cycle.len()
    }

    pub fn letter_at(&self, i: usize) -> &Letter {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Propositions occurring anywhere in the trace.
    pub fn props(&self) -> BTreeSet<Prop> {
        self.prefix
            .iter()
            .chain(&self.cycle)
            .flat_map(|l| l.0.iter().cloned())
            .collect()
    }

    /// Equality of denotations, by comparing letters up to the point where both
    /// traces have cycled in lockstep.
    pub fn same_denotation(&self, other: &LassoTrace) -> bool {
        let n = self.prefix_len() + other.prefix_len() + lcm(self.loop_len(), other.loop_len());
        (0..n).all(|i| self.letter_at(i) == other.letter_at(i))
    }

    /// Shortest lasso with the same denotation: primitive loop, prefix rolled back
    /// as far as possible.
    pub fn canonical(&self) -> LassoTrace {
        let l = self.cycle.len();
        let root = (1..=l)
            .find(|&d| l % d == 0 && (0..l).all(|i| self.cycle[i] == self.cycle[i % d]))
            .unwrap_or(l);
        let mut prefix = self.prefix.clone();
        let mut cycle: Vec<Letter> = self.cycle[..root].to_vec();
        while let Some(last) = prefix.last() {
            if *last != cycle[cycle.len() - 1] {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        LassoTrace { prefix, cycle }
    }
}

impl fmt::Display for LassoTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.prefix {
            write!(f, "{l} ")?;
        }
        f.write_str("|")?;
        for l in &self.cycle {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

/// Trace with a distinguished position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointedTrace {
    pub trace: LassoTrace,
    pub position: usize,
}

impl PointedTrace {
    pub fn initial(trace: LassoTrace) -> Self {
        PointedTrace { trace, position: 0 }
    }
}

/// `∅^i {#} ∅^ω`.
pub fn position_trace(i: usize) -> LassoTrace {
    let mut prefix = vec![Letter::empty(); i];
    prefix.push(Letter::of(["#"]));
    LassoTrace { prefix, cycle: vec![Letter::empty()] }
}

/// Letter-wise union.
pub fn pointwise_union(a: &LassoTrace, b: &LassoTrace) -> LassoTrace {
    let p = a.prefix_len().max(b.prefix_len());
    let l = lcm(a.loop_len(), b.loop_len());
    let at = |i: usize| a.letter_at(i).union(b.letter_at(i));
    LassoTrace {
        prefix: (0..p).map(at).collect(),
        cycle: (p..p + l).map(at).collect(),
    }
}

/// Named traces, in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceSet {
    entries: Vec<(String, LassoTrace)>,
    index: HashMap<String, usize>,
}

impl TraceSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, t: LassoTrace) -> Result<(), TraceError> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(TraceError::DuplicateName(name));
        }
        self.index.insert(name.clone(), self.entries.len());
        self.entries.push((name, t));
        Ok(())
    }

    /// Inserts unless a trace with the same denotation is already present.
    pub fn insert_distinct(&mut self, name: impl Into<String>, t: LassoTrace) -> Result<bool, TraceError> {
        if self.entries.iter().any(|(_, u)| u.same_denotation(&t)) {
            return Ok(false);
        }
        self.insert(name, t)?;
        Ok(true)
    }

    pub fn get(&self, name: &str) -> Option<&LassoTrace> {
        self.index.get(name).map(|&i| &self.entries[i].1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &LassoTrace)> {
        self.entries.iter().map(|(n, t)| (n.as_str(), t))
    }

    pub fn traces(&self) -> impl Iterator<Item = &LassoTrace> {
        self.entries.iter().map(|(_, t)| t)
    }

    pub fn name_of(&self, i: usize) -> &str {
        &self.entries[i].0
    }

    pub fn props(&self) -> BTreeSet<Prop> {
        self.traces().flat_map(|t| t.props()).collect()
    }

    /// Parses the text format: one `name = l0 l1 ... | m0 m1 ...` per line.
    pub fn parse(src: &str) -> Result<Self, TraceError> {
        let mut out = TraceSet::new();
        for (n, raw) in src.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let ferr = |message: String| TraceError::Format { line: n + 1, message };
            let (name, body) = line
                .split_once('=')
                .ok_or_else(|| ferr("expected 'name = prefix | loop'".into()))?;
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(ferr(format!("invalid trace name '{name}'")));
            }
            let t = parse_lasso(body).map_err(ferr)?;
            out.insert(name, t).map_err(|e| ferr(e.to_string()))?;
        }
        Ok(out)
    }
}

impl fmt::Display for TraceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, t) in &self.entries {
            writeln!(f, "{n} = {t}")?;
        }
        Ok(())
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find("--") {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_letters(s: &str) -> Result<Vec<Letter>, String> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        if !rest.starts_with('{') {
            return Err(format!("expected '{{' at '{rest}'"));
        }
        let close = rest.find('}').ok_or("unclosed '{'")?;
        let inner = &rest[1..close];
        let mut letter = BTreeSet::new();
        for p in inner.split(',') {
            let p = p.trim();
            if !p.is_empty() {
                letter.insert(Prop::new(p));
            }
        }
        out.push(Letter(letter));
        rest = rest[close + 1..].trim_start();
    }
    Ok(out)
}

/// Parses `l0 l1 ... | m0 m1 ...`.
pub fn parse_lasso(s: &str) -> Result<LassoTrace, String> {
    let (p, l) = s.split_once('|').ok_or("missing '|' between prefix and loop")?;
    LassoTrace::new(parse_letters(p)?, parse_letters(l)?).map_err(|e| e.to_string())
}

/// Finite transition system with labelled vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSystem {
    pub vertices: Vec<(String, Letter)>,
    pub edges: Vec<(usize, usize)>,
    pub initial: Vec<usize>,
}

impl TransitionSystem {
    pub fn new(
        vertices: Vec<(String, Letter)>,
        edges: Vec<(usize, usize)>,
        initial: Vec<usize>,
    ) -> Result<Self, TraceError> {
        for (i, (name, _)) in vertices.iter().enumerate() {
            if !edges.iter().any(|&(a, _)| a == i) {
                return Err(TraceError::DeadEnd(name.clone()));
            }
        }
        Ok(TransitionSystem { vertices, edges, initial })
    }

    /// Parses sections `vertices:` (`v {p,q}`), `edges:` (`v -> w`), `initial:` (`v`).
    pub fn parse(src: &str) -> Result<Self, TraceError> {
        #[derive(PartialEq)]
        enum Sec {
            None,
            V,
            E,
            I,
        }
        let mut sec = Sec::None;
        let mut vertices: Vec<(String, Letter)> = Vec::new();
        let mut names: HashMap<String, usize> = HashMap::new();
        let mut edges_raw = Vec::new();
        let mut init_raw = Vec::new();
        for (n, raw) in src.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let ferr = |message: String| TraceError::Format { line: n + 1, message };
            match line {
                "vertices:" => sec = Sec::V,
                "edges:" => sec = Sec::E,
                "initial:" => sec = Sec::I,
                _ => match sec {
                    Sec::None => return Err(ferr("expected a section header".into())),
                    Sec::V => {
                        let (name, rest) = match line.find('{') {
                            Some(i) => (line[..i].trim(), &line[i..]),
                            None => (line, ""),
                        };
                        let letters = parse_letters(rest).map_err(ferr)?;
                        if letters.len() > 1 || name.is_empty() {
                            return Err(ferr("expected 'vertex {p,q}'".into()));
                        }
                        if names.insert(name.to_string(), vertices.len()).is_some() {
                            return Err(ferr(format!("duplicate vertex '{name}'")));
                        }
                        vertices.push((name.to_string(), letters.into_iter().next().unwrap_or_default()));
                    }
                    Sec::E => {
                        let (a, b) = line.split_once("->").ok_or_else(|| ferr("expected 'v -> w'".into()))?;
                        edges_raw.push((a.trim().to_string(), b.trim().to_string()));
                    }
                    Sec::I => init_raw.extend(line.split([',', ' ']).filter(|s| !s.is_empty()).map(String::from)),
                },
            }
        }
        let look = |s: &str| names.get(s).copied().ok_or_else(|| TraceError::UnknownVertex(s.to_string()));
        let edges = edges_raw
            .iter()
            .map(|(a, b)| Ok((look(a)?, look(b)?)))
            .collect::<Result<Vec<_>, TraceError>>()?;
        let initial = init_raw.iter().map(|s| look(s)).collect::<Result<Vec<_>, _>>()?;
        TransitionSystem::new(vertices, edges, initial)
    }

    fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |&&(a, _)| a == v).map(|&(_, b)| b)
    }

    fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }
}

impl fmt::Display for TransitionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices:")?;
        for (n, l) in &self.vertices {
            writeln!(f, "  {n} {l}")?;
        }
        writeln!(f, "edges:")?;
        for &(a, b) in &self.edges {
            writeln!(f, "  {} -> {}", self.vertices[a].0, self.vertices[b].0)?;
        }
        writeln!(f, "initial:")?;
        for &i in &self.initial {
            writeln!(f, "  {}", self.vertices[i].0)?;
        }
        Ok(())
    }
}

/// Traces of lasso-shaped runs with at most `prefix_bound` prefix vertices and
/// at most `loop_bound` loop vertices, merged up to denotation and named `t0, t1, ...`.
pub fn system_traces(ts: &TransitionSystem, prefix_bound: usize, loop_bound: usize) -> TraceSet {
    let mut out = TraceSet::new();
    let mut seen = HashSet::new();
    let mut path = Vec::new();
    let max = prefix_bound + loop_bound;
    let mut initial = ts.initial.clone();
    initial.sort_unstable();
    initial.dedup();
    for &v in &initial {
        path.push(v);
        walk(ts, &mut path, max, prefix_bound, loop_bound, &mut seen, &mut out);
        path.pop();
    }
    out
}

fn walk(
    ts: &TransitionSystem,
    path: &mut Vec<usize>,
    max: usize,
    pb: usize,
    lb: usize,
    seen: &mut HashSet<LassoTrace>,
    out: &mut TraceSet,
) {
    let len = path.len();
    let last = path[len - 1];
    for k in len.saturating_sub(lb)..=pb.min(len - 1) {
        if ts.has_edge(last, path[k]) {
            let letter = |&v: &usize| ts.vertices[v].1.clone();
            let t = LassoTrace {
                prefix: path[..k].iter().map(letter).collect(),
                cycle: path[k..].iter().map(letter).collect(),
            };
            if seen.insert(t.canonical()) {
                let name = format!("t{}", out.len());
                out.insert(name, t).expect("generated names are unique");
            }
        }
    }
    if len < max {
        let succ: BTreeSet<usize> = ts.successors(last).collect();
        for w in succ {
            path.push(w);
            walk(ts, path, max, pb, lb, seen, out);
            path.pop();
        }
    }
}
