use std::fmt::{self, Write};

use super::{HyperFormula, PltlFormula, StutterSet};

// Binding strength, loosest first. Binders are 0 and always parenthesised as operands.
const BINDER: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNTIL: u8 = 5;
const UNARY: u8 = 6;
const ATOM: u8 = 7;

#[derive(Clone, Copy)]
enum Assoc {
    Left,
    Right,
}

fn pltl_prec(f: &PltlFormula) -> u8 {
    use PltlFormula::*;
    match f {
        True | Atom(_) => ATOM,
        Iff(..) => IFF,
        Implies(..) => IMP,
        Or(..) => OR,
        And(..) => AND,
        Until(..) | Since(..) => UNTIL,
        _ => UNARY,
    }
}

fn write_pltl_child(
    out: &mut String,
    child: &PltlFormula,
    parent: u8,
    assoc: Option<(Assoc, bool)>,
) {
    let p = pltl_prec(child);
    let paren = match assoc {
        None => p < parent,
        Some((a, is_left)) => {
            p < parent || (p == parent && matches!((a, is_left), (Assoc::Right, true) | (Assoc::Left, false)))
        }
    };
    if paren {
        out.push('(');
        write_pltl(out, child);
        out.push(')');
    } else {
        write_pltl(out, child);
    }
}

fn write_pltl(out: &mut String, f: &PltlFormula) {
    use PltlFormula::*;
    let bin = |out: &mut String, a: &PltlFormula, b: &PltlFormula, op: &str, prec: u8, assoc: Assoc| {
        write_pltl_child(out, a, prec, Some((assoc, true)));
        let _ = write!(out, " {op} ");
        write_pltl_child(out, b, prec, Some((assoc, false)));
    };
    let un = |out: &mut String, a: &PltlFormula, op: &str| {
        out.push_str(op);
        write_pltl_child(out, a, UNARY, None);
    };
    match f {
        True => out.push_str("true"),
        Atom(p) => out.push_str(p.as_str()),
        Not(a) => un(out, a, "!"),
        Next(a) => un(out, a, "X "),
        Yesterday(a) => un(out, a, "Y "),
        Eventually(a) => un(out, a, "F "),
        Always(a) => un(out, a, "G "),
        Once(a) => un(out, a, "O "),
        Historically(a) => un(out, a, "H "),
        Or(a, b) => bin(out, a, b, "|", OR, Assoc::Left),
        And(a, b) => bin(out, a, b, "&", AND, Assoc::Left),
        Implies(a, b) => bin(out, a, b, "->", IMP, Assoc::Right),
        Iff(a, b) => bin(out, a, b, "<->", IFF, Assoc::Left),
        Until(a, b) => bin(out, a, b, "U", UNTIL, Assoc::Right),
        Since(a, b) => bin(out, a, b, "S", UNTIL, Assoc::Right),
    }
}

impl fmt::Display for PltlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_pltl(&mut s, self);
        f.write_str(&s)
    }
}

fn hyper_prec(f: &HyperFormula) -> u8 {
    use HyperFormula::*;
    match f {
        True | Atom(..) => ATOM,
        Quant(..) | InContext(..) => BINDER,
        Iff(..) => IFF,
        Implies(..) => IMP,
        Or(..) => OR,
        And(..) => AND,
        Until(..) | Since(..) => UNTIL,
        _ => UNARY,
    }
}

fn write_label(out: &mut String, g: &StutterSet) {
    if g.is_empty() {
        return;
    }
    out.push('[');
    for (i, t) in g.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_pltl(out, t);
    }
    out.push(']');
}

fn write_hyper_child(
    out: &mut String,
    child: &HyperFormula,
    parent: u8,
    assoc: Option<(Assoc, bool)>,
) {
    let p = hyper_prec(child);
    let paren = p == BINDER
        || match assoc {
            None => p < parent,
            Some((a, is_left)) => {
                p < parent
                    || (p == parent
                        && matches!((a, is_left), (Assoc::Right, true) | (Assoc::Left, false)))
            }
        };
    if paren {
        out.push('(');
        write_hyper(out, child);
        out.push(')');
    } else {
        write_hyper(out, child);
    }
}

fn write_hyper(out: &mut String, f: &HyperFormula) {
    use HyperFormula::*;
    let bin = |out: &mut String,
               a: &HyperFormula,
               b: &HyperFormula,
               op: &str,
               g: Option<&StutterSet>,
               prec: u8,
               assoc: Assoc| {
        write_hyper_child(out, a, prec, Some((assoc, true)));
        out.push(' ');
        out.push_str(op);
        if let Some(g) = g {
            write_label(out, g);
        }
        out.push(' ');
        write_hyper_child(out, b, prec, Some((assoc, false)));
    };
    let un = |out: &mut String, a: &HyperFormula, op: &str, g: Option<&StutterSet>| {
        out.push_str(op);
        if let Some(g) = g {
            write_label(out, g);
            out.push(' ');
        }
        write_hyper_child(out, a, UNARY, None);
    };
    match f {
        True => out.push_str("true"),
        Atom(p, x) => {
            let _ = write!(out, "{p}@{x}");
        }
        Not(a) => un(out, a, "!", None),
        Next(g, a) => un(out, a, "X", Some(g)),
        Yesterday(g, a) => un(out, a, "Y", Some(g)),
        Eventually(g, a) => un(out, a, "F", Some(g)),
        Always(g, a) => un(out, a, "G", Some(g)),
        Once(g, a) => un(out, a, "O", Some(g)),
        Historically(g, a) => un(out, a, "H", Some(g)),
        Or(a, b) => bin(out, a, b, "|", None, OR, Assoc::Left),
        And(a, b) => bin(out, a, b, "&", None, AND, Assoc::Left),
        Implies(a, b) => bin(out, a, b, "->", None, IMP, Assoc::Right),
        Iff(a, b) => bin(out, a, b, "<->", None, IFF, Assoc::Left),
        Until(g, a, b) => bin(out, a, b, "U", Some(g), UNTIL, Assoc::Right),
        Since(g, a, b) => bin(out, a, b, "S", Some(g), UNTIL, Assoc::Right),
        InContext(c, a) => {
            out.push('<');
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(x.as_str());
            }
            out.push_str("> ");
            write_hyper(out, a);
        }
        Quant(q, x, a) => {
            let k = match q {
                super::Quantifier::Exists => "E",
                super::Quantifier::Forall => "A",
            };
            let _ = write!(out, "{k} {x}. ");
            write_hyper(out, a);
        }
    }
}

impl fmt::Display for HyperFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_hyper(&mut s, self);
        f.write_str(&s)
    }
}
