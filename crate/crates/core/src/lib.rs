//! Toolkit for GHyLTL with stuttering and contexts over lasso-shaped traces:
//! parsing, evaluation, prenex rewriting and the arithmetic reductions.

pub mod syntax;
pub mod traces;
pub mod pltl_eval;
pub mod pnf;
pub mod hyper_eval;
pub mod reduce;
pub mod soa;
pub mod report;
pub mod cli;
