use serde::Serialize;

use super::HyperFormula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Fragment {
    #[serde(rename = "HyperLTL")]
    HyperLtl,
    #[serde(rename = "HyperLTL_C")]
    HyperLtlC,
    #[serde(rename = "HyperLTL_S")]
    HyperLtlS,
    #[serde(rename = "GHyLTL_SC")]
    GHyLtlSC,
}

impl Fragment {
    pub fn name(self) -> &'static str {
        match self {
            Fragment::HyperLtl => "HyperLTL",
            Fragment::HyperLtlC => "HyperLTL_C",
            Fragment::HyperLtlS => "HyperLTL_S",
            Fragment::GHyLtlSC => "GHyLTL_SC",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub fragment: Fragment,
    pub prenex: bool,
    pub past_free: bool,
}

/// Quantifier prefix followed by a quantifier-free matrix.
pub fn is_prenex(f: &HyperFormula) -> bool {
    let mut cur = f;
    while let HyperFormula::Quant(_, _, body) = cur {
        cur = body;
    }
    cur.is_quantifier_free()
}

/// Smallest named fragment containing `f`.
pub fn classify(f: &HyperFormula) -> Classification {
    let prenex = is_prenex(f);
    let mut past_free = true;
    let mut labels_empty = true;
    let mut labels_past_free = true;
    f.visit(&mut |g| {
        if g.is_past_modality() {
            past_free = false;
        }
        if let Some(l) = g.label() {
            labels_empty &= l.is_empty();
            labels_past_free &= l.iter().all(|t| t.is_past_free());
        }
    });
    let contexts = f.contains_context();
    let base = prenex && past_free;
    let fragment = if base && !contexts && labels_empty {
        Fragment::HyperLtl
    } else if base && labels_empty {
        Fragment::HyperLtlC
    } else if base && !contexts && labels_past_free {
        Fragment::HyperLtlS
    } else {
        Fragment::GHyLtlSC
    };
    Classification { fragment, prenex, past_free }
}
