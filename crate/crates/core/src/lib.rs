//! Proof kernel, normalizer and sub-formula checker for partially
//! commutative multiplicative linear logic (PCMLL) in natural deduction,
//! with its Lambek-with-product fragment and a small categorial grammar
//! front end.

pub mod context;
pub mod corpus;
pub mod formula;
pub mod grammar;
pub mod normalize;
pub mod proof;
pub mod render;
mod syntax;

pub use context::{
    canonicalize, entropy_leq, find_equiv_pair, order_pairs, substitute, ContextError, HoleContext, OccId,
    Occurrence, PairMode, SpTerm,
};
pub use formula::{format_formula, parse_formula, subformulas, Formula};
pub use syntax::ParseError;
pub use proof::{
    check, check_in, conjoined, eliminated_formula, fmt_path, format_proof, format_proof_file, parse_proof,
    parse_proof_file, principal_branch, Path, Proof, ProofFile, Rule, RuleKind, RuleViolation, Sequent, Signature,
    ViolationKind,
};
pub use normalize::{
    check_subformula_property, find_extended_redexes, find_redexes, is_normal, measure_l, measure_pcmll, Measure, Mode,
    Outcome,
};
