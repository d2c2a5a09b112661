//! The language of ordered exponential rings: terms, formulas, A2 sentences,
//! evaluation, normal forms and the sentence checker.

pub mod ast;
pub mod check;
pub mod dnf;
pub mod eval;
pub mod parse;

pub use ast::{A2Sentence, Conjunct, Dnf, Formula, Literal, Relation, Term};
pub use check::{check_sentence, CheckOptions, LiteralCert, Verdict};
pub use dnf::{to_dnf, DEFAULT_DNF_CAP};
pub use eval::{eval_exact, eval_term, eval_term_rat, RatEnv, RealEnv};
pub use parse::{parse_formula, parse_sentence, parse_term, parse_term_in};
