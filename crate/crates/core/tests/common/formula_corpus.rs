//! Labelled formula corpora.

use hyperstutter::syntax::Fragment;

pub const CLASSIFIED: &[(&str, Fragment)] = &[
    ("A x. A y. G (p@x <-> p@y)", Fragment::HyperLtl),
    ("E x. F q@x", Fragment::HyperLtl),
    ("A x. E y. X (p@x & !p@y)", Fragment::HyperLtl),
    ("A x. A y. p@x U q@y", Fragment::HyperLtl),
    ("E x. A y. G F (p@x | q@y)", Fragment::HyperLtl),
    ("A x. F G !p@x", Fragment::HyperLtl),
    ("A x. E y. E z. G (p@x -> X (q@y & r@z))", Fragment::HyperLtl),
    ("A x. A y. X[] p@x -> F q@y", Fragment::HyperLtl),
    ("E x. E y. p@x U[] q@y", Fragment::HyperLtl),
    ("A x. !(F p@x & G !p@x)", Fragment::HyperLtl),
    ("A x. A y. G[p] (q@x <-> q@y)", Fragment::HyperLtlS),
    ("E x. X[p] q@x", Fragment::HyperLtlS),
    ("A x. E y. F[F p] r@y", Fragment::HyperLtlS),
    ("A x. A y. p@x U[p, q] q@y", Fragment::HyperLtlS),
    ("E x. A y. G[X p] (p@x -> p@y)", Fragment::HyperLtlS),
    ("A x. X[p] X[q] p@x", Fragment::HyperLtlS),
    ("A x. E y. F[p U q] (p@x & q@y)", Fragment::HyperLtlS),
    ("A x. G[p] F[] p@x", Fragment::HyperLtlS),
    ("E x. E y. X[!p] (p@x <-> !p@y)", Fragment::HyperLtlS),
    ("A x. A y. A z. G[p, q, r] (p@x | q@y | r@z)", Fragment::HyperLtlS),
    ("A x. A y. <x> F (p@x & <x, y> G q@y)", Fragment::HyperLtlC),
    ("E x. E y. <x, y> F (p@x & q@y)", Fragment::HyperLtlC),
    ("A x. E y. <y> G p@y", Fragment::HyperLtlC),
    ("A x. A y. <x> X p@x & <y> X p@y", Fragment::HyperLtlC),
    ("E x. A y. <x> (p@x U q@y)", Fragment::HyperLtlC),
    ("A x. <x> F[] p@x", Fragment::HyperLtlC),
    ("A x. E y. E z. <x, z> F (p@x & <y> F p@y)", Fragment::HyperLtlC),
    ("A x. A y. G (<x> X p@x <-> <y> X p@y)", Fragment::HyperLtlC),
    ("E x. <x> G F p@x", Fragment::HyperLtlC),
    ("A x. A y. !<y> F (q@y & p@x)", Fragment::HyperLtlC),
];

/// Sentences outside every named fragment.
pub const FULL_LOGIC: &[(&str, &str)] = &[
    ("A x. F (E y. p@y)", "quantifier under a temporal operator"),
    ("A x. G O p@x", "past operator"),
    ("A x. E y. p@x S q@y", "since"),
    ("A x. X[Y p] q@x", "past label"),
    ("A x. A y. <x> X[p] q@y", "context with a label"),
    ("A x. !(E y. p@y)", "negated quantifier"),
    ("E x. H[q] p@x", "historically with a label"),
];

pub const PLTL: &[&str] = &[
    "p",
    "true",
    "!p",
    "p | q",
    "p & q | r",
    "p -> q -> r",
    "(p -> q) -> r",
    "p <-> !q",
    "X p U q",
    "p U (q U r)",
    "(p U q) U r",
    "F G p",
    "G (p -> F q)",
    "Y p S q",
    "O H p",
    "H (q -> O p)",
    "X Y p",
    "!(p & q) U (Y r | X s)",
];

pub const HYPER_EXTRA: &[&str] = &[
    "A x. A y. X[p U q, Y r] (p@x S[q] q@y)",
    "E x. O[] H[p] q@x",
    "A x. <x> Y[p] q@x",
    "true",
    "A x. p@x & (E y. q@y | F r@x)",
    "A x. A y. (p@x <-> q@y) -> G (r@x U s@y)",
];
